# focklib - Toolkit

from typing import Any, Callable, Dict, NamedTuple, Optional, Sequence, Tuple

from argparse import ArgumentParser
from traceback import print_exc
from inspect import getmembers
from functools import wraps
from os import listdir
from os.path import isdir, join
import importlib
import asyncio
import sys

from .errors import CrossCheckError, FockError
from .ext.docparser import DocParser
from .report import ReportWriter


class Outcome(NamedTuple):
    report: Optional[dict]
    code: int = 0
    output: str = "json"


def command(name: Optional[str] = None, arguments: Sequence[Tuple[tuple, dict]] = ()):
    """コグのメソッドをコマンドとして登録するためのデコレータです。

    Parameters
    ----------
    name : Optional[str], default None
        コマンドの名前です。指定しなかった場合は関数の名前が使われます。
    arguments : Sequence[Tuple[tuple, dict]]
        `ArgumentParser.add_argument`に渡す引数です。

    Examples
    --------
    class Ping:
        @command("ping")
        async def ping(self, args):
            \"\"\"pongを返します。\"\"\"
            return Outcome({"pong": True})"""
    def decorator(coro):
        @wraps(coro)
        async def new_coro(*args, **kwargs):
            return await coro(*args, **kwargs)
        new_coro._command = (name or coro.__name__, tuple(arguments))
        return new_coro
    return decorator


def common_flags() -> ArgumentParser:
    # 全てのコマンドで使える引数です。既定値は全てNoneで、data.pyの値より優先されます。
    parser = ArgumentParser(add_help=False)
    parser.add_argument("--tol-rank", dest="rank_tol", type=float)
    parser.add_argument("--tol-psd", dest="psd_tol", type=float)
    parser.add_argument("--tol-boundary", dest="boundary_tol", type=float)
    parser.add_argument("--degree", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--radius", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--output", choices=("json", "text"))
    parser.add_argument("--force", action="store_true", default=None)
    parser.add_argument("--quiet", action="store_true")
    parser.add_argument("--presets")
    return parser


DEFAULT_EXIT_CODES = {"ok": 0, "invalid": 2, "crosscheck": 3}
FLAG_NAMES = (
    "rank_tol", "psd_tol", "boundary_tol", "degree", "samples", "radius", "seed",
    "output", "force"
)


class Toolkit:
    """コマンドを持つコグを読み込んで実行するクラスです。

    Notes
    -----
    コグは`setup(toolkit)`という関数を持つモジュールで、
    その中で`toolkit.add_cog(...)`を実行します。
    コマンドは`@command`を付けたコルーチン関数で、`Outcome`を返します。

    Parameters
    ----------
    name : str, default "fockop"
        ログのタイトルに使われます。
    config : Optional[dict]
        `data.py`の`data`です。
    log : bool, default True
        ログを標準エラー出力に出すかどうかです。

    Attributes
    ----------
    cogs : Dict[str, object]
        クラス名をキーにした読み込み済みのコグです。
    commands : Dict[str, Tuple[object, Callable]]
        コマンドの名前とコグ、関数です。
    writer : ReportWriter
        レポートを出力するためのものです。"""

    def __init__(self, name: str = "fockop", config: Optional[dict] = None,
                 log: bool = True):
        self.name, self.log = name, log
        self.data: dict = config or {}
        self.cogs: Dict[str, Any] = {}
        self.commands: Dict[str, Tuple[Any, Callable]] = {}
        self.parser = DocParser()
        self.writer = ReportWriter(self, self.data.get("templates", "data"))

    def print(self, *args, title: Optional[str] = None, **kwargs) -> None:
        """簡単にログ出力をするためのもの。

        Parameters
        ----------
        *args
            `print`に渡す引数です。
        title : Optional[str], default None
            ログのタイトルです。
            デフォルトは定義時に引数であるnameに渡した文字列が使用されます。"""
        if self.log:
            if title is None:
                title = self.name
            print(f"[{title}]", *args, file=sys.stderr, **kwargs)

    def add_cog(self, cog) -> None:
        """コグを追加して、`@command`の付いたメソッドをコマンドとして登録します。"""
        name = cog.__class__.__name__
        self.cogs[name] = cog
        for _, coro in getmembers(cog):
            if hasattr(coro, "_command"):
                self.commands[coro._command[0]] = (cog, coro)

    def load_extension(self, name: str) -> None:
        importlib.import_module(name).setup(self)

    def load_cogs(self, folder: str = "cogs", package: str = "cogs") -> None:
        """フォルダにあるエクステンションを全て読み込みます。"""
        for path in sorted(listdir(folder)):
            if path.endswith(".py"):
                self.load_extension(f"{package}.{path[:-3]}")
            elif "." not in path and path != "__pycache__" and isdir(join(folder, path)):
                self.load_extension(f"{package}.{path}")

    def make_parser(self) -> ArgumentParser:
        parser = ArgumentParser(prog=self.name)
        subparsers = parser.add_subparsers(dest="command")
        common = common_flags()
        for name, (_, coro) in self.commands.items():
            sub = subparsers.add_parser(
                name, parents=[common], help=self.parser.summary(coro.__doc__))
            for args, kwargs in coro._command[1]:
                sub.add_argument(*args, **kwargs)
        return parser

    def flags(self, args) -> dict:
        """コマンドライン引数の内、設定を上書きするものを取り出します。"""
        return {name: getattr(args, name, None) for name in FLAG_NAMES}

    def exit_code(self, name: str) -> int:
        return self.data.get("exit_codes", DEFAULT_EXIT_CODES).get(
            name, DEFAULT_EXIT_CODES[name])

    async def _wrap_error_log(self, coro, name: str) -> int:
        # コマンドを実行してエラーを終了コードに変換する。
        try:
            outcome: Outcome = await coro
            if outcome.report is not None:
                print(await self.writer.render(outcome.report, outcome.output))
        except CrossCheckError as e:
            self.print(str(e), title="crosscheck")
            return self.exit_code("crosscheck")
        except FockError as e:
            self.print(str(e), title="error")
            return self.exit_code("invalid")
        except Exception:
            print(f"Exception on `{name}`:", file=sys.stderr)
            print_exc()
            return self.exit_code("crosscheck")
        return outcome.code

    async def invoke(self, argv: Sequence[str]) -> int:
        """引数を解析してコマンドを実行し、終了コードを返します。"""
        parser = self.make_parser()
        try:
            args = parser.parse_args(list(argv))
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else self.exit_code("invalid")
        if args.command is None:
            parser.print_usage(sys.stderr)
            return self.exit_code("invalid")
        self.log = not args.quiet
        self.print(f"Running {args.command}...")
        _, coro = self.commands[args.command]
        return await self._wrap_error_log(coro(args), args.command)

    def run(self, argv: Sequence[str]) -> int:
        """`invoke`をイベントループで実行します。"""
        return asyncio.run(self.invoke(argv))

    async def in_executor(self, function: Callable, *args):
        """重い数値計算をスレッドで実行します。"""
        return await asyncio.get_running_loop().run_in_executor(None, function, *args)
