# focklib - Problem File

from typing import Any, Dict, List, Optional

from dataclasses import dataclass
import aiofiles
import ujson
import math

from .affine import AffineMap
from .errors import InputError
from .numerics import Tolerances


# problemファイルのoptionsで指定できるキーです。
OPTION_KEYS = (
    "rank_tol", "psd_tol", "boundary_tol", "degree", "samples", "radius", "seed",
    "bisect_tol"
)
TOP_KEYS = ("dim", "A", "b", "options")
MAX_SAMPLES = 32


class ProblemError(InputError):
    """problemファイルが壊れている時に発生します。
    メッセージの先頭には`A[0][1]`のような場所が入ります。"""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True, eq=False)
class ProblemFile:
    """problemファイルの中身です。

    Attributes
    ----------
    dim : int
    A : List[List[complex]]
        行優先の`n×n`行列です。
    b : List[complex]
    options : Dict[str, Any]
        許容誤差などの上書きです。"""

    dim: int
    A: List[List[complex]]
    b: List[complex]
    options: Dict[str, Any]

    def to_map(self) -> AffineMap:
        return AffineMap(self.A, self.b)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _complex(value, where: str) -> complex:
    # 複素数は[re, im]の形です。
    if not isinstance(value, list) or len(value) != 2:
        raise ProblemError(where, "expected a [re, im] pair")
    for part, name in zip(value, ("re", "im")):
        if not _is_number(part):
            raise ProblemError(where, f"{name} must be a number, got {part!r}")
        if not math.isfinite(part):
            raise ProblemError(where, f"{name} must be finite")
    return complex(float(value[0]), float(value[1]))


def _options(value) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ProblemError("options", "expected an object")
    for key, option in value.items():
        where = f"options.{key}"
        if key not in OPTION_KEYS:
            raise ProblemError(where, "unknown option")
        if option is None and key == "rank_tol":
            continue
        if not _is_number(option) or not math.isfinite(option):
            raise ProblemError(where, f"expected a finite number, got {option!r}")
        if key in ("degree", "samples", "seed") and not isinstance(option, int):
            raise ProblemError(where, "expected an integer")
    return dict(value)


def parse_problem(text: str) -> ProblemFile:
    """problemファイルの文字列をパースします。

    Notes
    -----
    形式は`{"dim": n, "A": [[[re, im], ...], ...], "b": [[re, im], ...], "options": {...}}`です。

    Raises
    ------
    ProblemError : 形式が正しくない場合に発生します。"""
    try:
        raw = ujson.loads(text)
    except (ValueError, OverflowError) as e:
        raise ProblemError("file", f"not valid JSON ({e})")
    if not isinstance(raw, dict):
        raise ProblemError("file", "expected a JSON object")
    for key in raw:
        if key not in TOP_KEYS:
            raise ProblemError(str(key), "unknown key")
    for key in ("dim", "A", "b"):
        if key not in raw:
            raise ProblemError(key, "missing")

    dim = raw["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ProblemError("dim", f"expected a positive integer, got {dim!r}")
    if not isinstance(raw["A"], list) or len(raw["A"]) != dim:
        raise ProblemError("A", f"expected {dim} rows")
    A = []
    for i, row in enumerate(raw["A"]):
        if not isinstance(row, list) or len(row) != dim:
            raise ProblemError(f"A[{i}]", f"expected {dim} entries")
        A.append([_complex(value, f"A[{i}][{j}]") for j, value in enumerate(row)])
    if not isinstance(raw["b"], list) or len(raw["b"]) != dim:
        raise ProblemError("b", f"expected {dim} entries")
    b = [_complex(value, f"b[{i}]") for i, value in enumerate(raw["b"])]
    return ProblemFile(dim, A, b, _options(raw.get("options", {})))


async def load_problem(path: str) -> ProblemFile:
    """problemファイルを非同期で読み込みます。"""
    try:
        async with aiofiles.open(path, "r", encoding="utf-8") as f:
            text = await f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise ProblemError("file", f"cannot read {path!r} ({e})")
    return parse_problem(text)


def dump_problem(A, b, options: Optional[dict] = None) -> str:
    """行列とベクトルからproblemファイルの文字列を作ります。"""
    rows = [[[complex(value).real, complex(value).imag] for value in row] for row in A]
    return ujson.dumps({
        "dim": len(rows), "A": rows,
        "b": [[complex(value).real, complex(value).imag] for value in b],
        "options": options or {}
    })


@dataclass(frozen=True)
class Settings:
    """コマンドの実行に使う設定です。
    `data.py`の値、problemファイルのoptions、コマンドライン引数の順に上書きされます。"""

    tolerances: Tolerances
    degree: int
    samples: int
    radius: float
    seed: int
    bisect_tol: float
    horizon: int
    threshold: float
    growth_exponent: float
    output: str = "json"
    force: bool = False


def _positive(name: str, value, integer: bool = False):
    if integer and (not isinstance(value, int) or isinstance(value, bool)):
        raise InputError(f"{name} must be an integer, got {value!r}")
    if not value > 0:
        raise InputError(f"{name} must be positive, got {value!r}")
    return value


def resolve_settings(config: dict, options: Optional[dict] = None,
                     flags: Optional[dict] = None, dim: Optional[int] = None) -> Settings:
    """設定を優先順位に従ってまとめます。

    Parameters
    ----------
    config : dict
        `data.py`の`data`です。
    options : Optional[dict]
        problemファイルの`options`です。
    flags : Optional[dict]
        コマンドライン引数です。値がNoneのものは無視されます。
    dim : Optional[int]
        `degree`が指定されていない時に次元ごとの既定値を選ぶのに使います。

    Raises
    ------
    InputError : 値が範囲外の場合に発生します。"""
    merged = dict(config["tolerances"])
    merged.update(config["sampling"])
    merged.update(config["diagonal"])
    merged["bisect_tol"] = config["bisect_tol"]
    merged["degree"] = None
    merged.update(options or {})
    merged.update({key: value for key, value in (flags or {}).items() if value is not None})

    degree = merged["degree"]
    if degree is None:
        degree = config["degrees"].get(dim, config["fallback_degree"])
    samples = _positive("samples", merged["samples"], True)
    if samples > MAX_SAMPLES:
        raise InputError(f"samples must be at most {MAX_SAMPLES}")
    seed = merged["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise InputError(f"seed must be a nonnegative integer, got {seed!r}")
    bisect_tol = _positive("bisect_tol", merged["bisect_tol"])
    if bisect_tol >= 1:
        raise InputError("bisect_tol must be below 1")
    return Settings(
        Tolerances(merged["rank_tol"], merged["psd_tol"], merged["boundary_tol"]),
        _positive("degree", degree, True), samples,
        float(_positive("radius", merged["radius"])), seed, float(bisect_tol),
        _positive("horizon", merged["horizon"], True),
        float(_positive("threshold", merged["threshold"])),
        float(_positive("growth_exponent", merged["growth_exponent"])),
        merged.get("output") or config["output"], bool(merged.get("force", False))
    )
