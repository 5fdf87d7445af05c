# focklib.ext - Doc Parser

from typing import Dict, List, Literal, Tuple


class DocParser:
    """numpydoc形式のドキュメンテーションをコマンドのヘルプの文章にするクラスです。"""

    HEADDINGS = {
        "ja": {
            "Parameters": "## コマンドの引数",
            "Notes": "## メモ",
            "Examples": "## コマンドの使用例",
            "Raises": "## 終了コード",
            "Returns": "## 出力",
            "See Also": "## 関連事項"
        },
        "en": {
            "Parameters": "## Arguments",
            "Notes": "## Notes",
            "Examples": "## Examples",
            "Raises": "## Exit codes",
            "Returns": "## Output",
            "See Also": "## See Also"
        }
    }
    ITEM_REPLACE_TEXTS = {
        "ja": {
            "str": "文字列",
            "int": "整数",
            "float": "小数",
            "optional": "オプション",
            "default": "デフォルト"
        },
        "en": {}
    }
    # 名前と型の行が並ぶ項目です。
    ITEM_SECTIONS = ("Parameters", "Raises", "Returns", "See Also")

    def __init__(self, lang: str = "ja", indent: int = 4,
                 indent_type: Literal[" ", "\t"] = " "):
        self.lang, self.indent, self.indent_type = lang, indent, indent_type

    def _split(self, text: str) -> Tuple[str, str]:
        # コロンの左右に分けて周りの空白を取る。
        index = text.find(":")
        return text[:index].rstrip(), text[index + 1:].lstrip()

    def _colon_parser(self, line: str) -> str:
        for type_name, replaced in self.ITEM_REPLACE_TEXTS.get(self.lang, {}).items():
            line = line.replace(type_name, replaced)
        if ":" in line:
            left, right = self._split(line)
            return f"**{left}** : {right}"
        return f"**{line}**"

    def _item_parser(self, line: str, item: str) -> str:
        if item in self.ITEM_SECTIONS:
            if line.startswith(self.indent_type * self.indent) or line == "":
                # 説明の行です。
                return "  " + line[self.indent:]
            return self._colon_parser(line)
        return line

    def _dedent(self, doc: str, first_indent_count: int) -> List[str]:
        width = self.indent * first_indent_count
        lines = doc.splitlines()
        return [lines[0].strip()] + [line[width:] for line in lines[1:]] if lines else []

    def parse(self, doc: str, *, first_indent_count: int = 1) -> str:
        """ドキュメンテーションをマークダウン風の文章にします。

        Parameters
        ----------
        doc : str
            対象のドキュメンテーションです。
        first_indent_count : int, default 1
            二行目以降の先頭にあるインデントの数です。

        Returns
        -------
        str
            見出しを置き換えた文章です。"""
        headdings = self.HEADDINGS.get(self.lang, self.HEADDINGS["en"])
        lines = self._dedent(doc or "", first_indent_count)
        text: List[str] = []
        item = "description"
        for i, line in enumerate(lines):
            following = lines[i + 1] if i + 1 < len(lines) else ""
            if line and all(char == "-" for char in line):
                continue
            if following and all(char == "-" for char in following) \
                    and len(following) == len(line):
                # 次の行が下線なら見出しです。
                item = line
                text.append(headdings.get(line, f"## {line}"))
                continue
            text.append(self._item_parser(line, item))
        return "\n".join(text).strip("\n")

    def summary(self, doc: str) -> str:
        """最初の一文を返します。"""
        return (doc or "").strip().split("\n")[0].strip()

    def sections(self, doc: str, *, first_indent_count: int = 1) -> Dict[str, str]:
        """見出しごとに分けた本文を返します。"""
        result: Dict[str, List[str]] = {"description": []}
        item = "description"
        lines = self._dedent(doc or "", first_indent_count)
        for i, line in enumerate(lines):
            following = lines[i + 1] if i + 1 < len(lines) else ""
            if line and all(char == "-" for char in line):
                continue
            if following and all(char == "-" for char in following) \
                    and len(following) == len(line):
                item = line
                result[item] = []
                continue
            result[item].append(line)
        return {key: "\n".join(value).strip("\n") for key, value in result.items()}
