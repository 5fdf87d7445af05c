# focklib - Report Writer

from typing import Any, List, Tuple

from jinja2 import Environment, FileSystemLoader, StrictUndefined
import numpy as np
import ujson
import math

from .numerics import Tolerances


def to_jsonable(value: Any) -> Any:
    """レポートに入れる値をJSONにできる形に変換します。

    Notes
    -----
    複素数は`[re, im]`、NumPyの配列はリスト、NamedTupleは辞書になります。
    有限でない実数はNoneになります。"""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, Tolerances):
        return to_jsonable(value.to_dict())
    if isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if hasattr(value, "_asdict"):
        return to_jsonable(value._asdict())
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    raise TypeError(f"cannot put {type(value).__name__} into a report")


def dumps(report: dict) -> str:
    """キーを並べ替えてJSONにします。`dumps(loads(dumps(x)))`は`dumps(x)`と一致します。"""
    return ujson.dumps(to_jsonable(report), sort_keys=True, ensure_ascii=False,
                       escape_forward_slashes=False)


def loads(text: str) -> dict:
    return ujson.loads(text)


def flatten(value: Any, prefix: str = "") -> List[Tuple[str, str]]:
    """JSONの値を`(キーの経路, JSONの文字列)`の一覧にします。テキストのレポートで使います。"""
    if isinstance(value, dict) and value:
        rows = []
        for key in sorted(value):
            rows.extend(flatten(value[key], f"{prefix}.{key}" if prefix else key))
        return rows
    if isinstance(value, list) and any(isinstance(item, dict) for item in value):
        rows = []
        for i, item in enumerate(value):
            rows.extend(flatten(item, f"{prefix}[{i}]"))
        return rows
    return [(prefix, ujson.dumps(value, sort_keys=True, ensure_ascii=False,
                                 escape_forward_slashes=False))]


class ReportWriter:
    """レポートをJSONかテキストで出力するためのクラスです。

    Parameters
    ----------
    toolkit : Toolkit
        `focklib.Toolkit`のインスタンスです。
    folder : str
        テンプレートのあるフォルダです。
    template_name : str, default "report.txt"
        テキストのレポートに使うJinja2のテンプレートです。"""

    def __init__(self, toolkit, folder: str, template_name: str = "report.txt"):
        self.toolkit, self.folder, self.template_name = toolkit, folder, template_name
        # Jinja2テンプレートエンジンを定義する。
        self._env = Environment(
            loader=FileSystemLoader(folder), undefined=StrictUndefined,
            trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True,
            enable_async=True
        )

    async def template(self, path: str, **kwargs) -> str:
        """Jinja2テンプレートエンジンを使って文字列を作ります。

        Parameters
        ----------
        path : str
            `folder`にあるテンプレートのファイル名です。
        **kwargs
            テンプレートに渡す値です。"""
        return await self._env.get_template(path).render_async(kwargs)

    async def render(self, report: dict, output: str = "json") -> str:
        """レポートを出力する文字列にします。

        Notes
        -----
        テキストの場合もJSONの値をそのまま並べるだけで、新しい値は計算しません。"""
        if output == "json":
            return dumps(report)
        data = loads(dumps(report))
        sections = [
            (key, flatten(data[key]))
            for key in sorted(data) if key not in ("tool", "command")
        ]
        return await self.template(
            self.template_name, tool=data.get("tool", {}),
            command=data.get("command", ""), sections=sections
        )
