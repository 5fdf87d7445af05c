# fockutil - Presets

from typing import Dict, List, Literal, Sequence, TypedDict

from functools import partial
import ujson
import math

from focklib.diagonal import DiagonalModel
from focklib.errors import InputError


class PresetData(TypedDict):
    description: str
    alpha: Literal["constant", "band"]
    b: Literal["harmonic", "geometric", "zero"]
    parameters: Dict[str, float]


ALPHA_KINDS = ("constant", "band")
B_KINDS = ("harmonic", "geometric", "zero")


def load_presets(path: str) -> Dict[str, PresetData]:
    """`data/presets.json`を読み込みます。

    Raises
    ------
    InputError : ファイルが読めない場合や知らない種類の数列がある場合に発生します。"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            presets = ujson.load(f)
    except (OSError, ValueError) as e:
        raise InputError(f"cannot read presets {path!r} ({e})")
    if not isinstance(presets, dict):
        raise InputError(f"{path}: expected an object of presets")
    for name, preset in presets.items():
        if not isinstance(preset, dict) or preset.get("alpha") not in ALPHA_KINDS \
                or preset.get("b") not in B_KINDS:
            raise InputError(f"{path}: preset {name!r} has an unknown sequence kind")
        preset.setdefault("parameters", {})
        preset.setdefault("description", "")
    return presets


def _band_alpha(m: int) -> float:
    # α_m² = 1 - m⁻³/2
    return math.sqrt(1 - 0.5 * m ** -3.0)


def _band_defect(m: int) -> float:
    return 0.5 * m ** -3.0


def _constant(value: complex, m: int) -> complex:
    return value


def _harmonic(m: int) -> float:
    return 1 / m


def _geometric(r: float, m: int) -> float:
    return r ** m


def _listed(values: Sequence[complex], m: int) -> complex:
    # リストの外は0です。
    return values[m - 1] if m <= len(values) else 0


def _number(key: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise InputError(f"{key}: {text!r} is not a number")
    if not math.isfinite(value):
        raise InputError(f"{key}: must be finite")
    return value


def _numbers(key: str, text: str) -> List[complex]:
    values = []
    for i, item in enumerate(filter(None, text.split(","))):
        try:
            value = complex(item.strip())
        except ValueError:
            raise InputError(f"{key}[{i}]: {item!r} is not a number")
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise InputError(f"{key}[{i}]: must be finite")
        values.append(value)
    return values


def parse_assignments(items: Sequence[str]) -> Dict[str, str]:
    """`key=value`の並びを辞書にします。"""
    result = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise InputError(f"expected key=value, got {item!r}")
        result[key.strip()] = value.strip()
    return result


def build_model(name: str, assignments: Sequence[str], presets: Dict[str, PresetData],
                horizon: int = 1000) -> DiagonalModel:
    """プリセットの名前とパラメータから`DiagonalModel`を作ります。

    Parameters
    ----------
    name : str
        `presets.json`にある名前か`inline`です。
    assignments : Sequence[str]
        `a=0.5`のようなパラメータの上書きです。
        `inline`の場合は`alpha=0.5,0.5`と`b=1,0.5`のようにカンマ区切りで数列を渡します。
    presets : Dict[str, PresetData]
    horizon : int, default 1000

    Raises
    ------
    InputError : 知らないプリセットやパラメータを渡された場合に発生します。

    Examples
    --------
    build_model("constant", ["a=0.25"], load_presets("data/presets.json"))"""
    values = parse_assignments(assignments)
    if name == "inline":
        unknown = set(values) - {"alpha", "b"}
        if unknown:
            raise InputError(f"inline: unknown parameter {sorted(unknown)[0]!r}")
        alphas = _numbers("alpha", values.get("alpha", ""))
        bs = _numbers("b", values.get("b", ""))
        return DiagonalModel(partial(_listed, alphas), partial(_listed, bs), horizon,
                             name="inline")
    if name not in presets:
        raise InputError(f"unknown preset {name!r}; choose from "
                         + ", ".join(sorted(presets) + ["inline"]))

    preset = presets[name]
    parameters = dict(preset["parameters"])
    for key, text in values.items():
        if key not in parameters:
            raise InputError(f"{name}: unknown parameter {key!r}")
        parameters[key] = _number(key, text)

    defect = None
    if preset["alpha"] == "band":
        alpha, defect = _band_alpha, _band_defect
    else:
        alpha = partial(_constant, parameters.get("a", 0.5))
    if preset["b"] == "harmonic":
        bcoef = _harmonic
    elif preset["b"] == "geometric":
        bcoef = partial(_geometric, parameters.get("r", 0.5))
    else:
        bcoef = partial(_constant, 0)
    return DiagonalModel(alpha, bcoef, horizon, defect, name)


def describe(name: str, assignments: Sequence[str],
             presets: Dict[str, PresetData]) -> Dict[str, object]:
    """レポートに載せるためのモデルの説明です。"""
    values = parse_assignments(assignments)
    if name == "inline":
        return {"name": name, "alpha": values.get("alpha", ""), "b": values.get("b", "")}
    preset = presets[name]
    parameters = dict(preset["parameters"])
    parameters.update({key: _number(key, text) for key, text in values.items()})
    return {"name": name, "alpha": preset["alpha"], "b": preset["b"],
            "parameters": parameters, "description": preset["description"]}
