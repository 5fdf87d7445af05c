# fockop - Help

import focklib


class Help:
    def __init__(self, toolkit):
        self.toolkit = toolkit

    def pages(self) -> dict:
        # コマンドのドキュメンテーションからヘルプの文章を作る。
        return {
            name: self.toolkit.parser.parse(coro.__doc__ or "", first_indent_count=2)
            for name, (_, coro) in sorted(self.toolkit.commands.items())
        }

    @focklib.command("help", arguments=((("name",), {"nargs": "?"}),))
    async def help(self, args):
        """コマンドの一覧か、指定したコマンドの説明を表示します。

        Parameters
        ----------
        name : str, optional
            説明を見たいコマンドの名前です。"""
        pages = self.pages()
        if args.name is None:
            for name, (_, coro) in sorted(self.toolkit.commands.items()):
                print(f"{name:10} {self.toolkit.parser.summary(coro.__doc__)}")
        elif args.name in pages:
            print(f"# {args.name}\n{pages[args.name]}")
        else:
            raise focklib.InputError(f"unknown command {args.name!r}")
        return focklib.Outcome(None)


def setup(toolkit):
    toolkit.add_cog(Help(toolkit))
