# focklib - Diagonal Model

from typing import Callable, List, Literal, NamedTuple, Optional, Tuple

from dataclasses import dataclass
import numpy as np
import math

from .affine import LOG_FLOAT_MAX, AffineMap
from .errors import InconclusiveError, InputError, UnboundedError


Verdict = Literal["converging", "diverging", "inconclusive"]

DIVERGENCE_THRESHOLD = 1e6
GROWTH_EXPONENT = 0.9
# p級数で比べる時に収束とみなす最小の指数です。
POWER_EXPONENT = 1.1
# 等比的に減少しているとみなす比の上限です。
GEOMETRIC_RATIO = 0.95
# |α_m|が1を超えてもよい丸め誤差です。
MODULUS_SLACK = 1e-12


@dataclass(frozen=True)
class DiagonalModel:
    """対角作用素`Av_m = α_m v_m`とベクトル`b = Σ b_m v_m`です。

    Parameters
    ----------
    alpha : Callable[[int], complex]
        `m ↦ α_m`です。`m`は1から始まります。
    bcoef : Callable[[int], complex]
        `m ↦ b_m`です。
    horizon : int, default 1000
        数列を評価する長さ`N`です。
    defect : Optional[Callable[[int], float]]
        `m ↦ 1 - |α_m|²`を正確に返す関数です。
        `α_m`が1に非常に近い場合に桁落ちを避けるために使います。
    name : str
        レポートに出す名前です。"""

    alpha: Callable[[int], complex]
    bcoef: Callable[[int], complex]
    horizon: int = 1000
    defect: Optional[Callable[[int], float]] = None
    name: str = "custom"

    def __post_init__(self):
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise InputError(f"horizon must be a positive integer, got {self.horizon!r}")

    def alphas(self, N: Optional[int] = None) -> np.ndarray:
        values = np.array([self.alpha(m) for m in range(1, (N or self.horizon) + 1)],
                          dtype=complex)
        if not np.all(np.isfinite(values)):
            raise InputError(f"{self.name}: alpha has non-finite values")
        moduli = np.abs(values)
        if np.any(moduli > 1 + MODULUS_SLACK):
            m = int(np.argmax(moduli > 1 + MODULUS_SLACK)) + 1
            raise InputError(f"{self.name}: |alpha_{m}| = {moduli[m - 1]!r} exceeds 1")
        return values

    def bs(self, N: Optional[int] = None) -> np.ndarray:
        values = np.array([self.bcoef(m) for m in range(1, (N or self.horizon) + 1)],
                          dtype=complex)
        if not np.all(np.isfinite(values)):
            raise InputError(f"{self.name}: b has non-finite values")
        return values

    def defects(self, N: Optional[int] = None) -> np.ndarray:
        """`1 - |α_m|²`の配列です。`|α_m| = 1`の所は0になります。"""
        if self.defect is None:
            values = 1 - np.abs(self.alphas(N)) ** 2
        else:
            values = np.array([self.defect(m) for m in range(1, (N or self.horizon) + 1)],
                              dtype=float)
        return np.clip(values, 0.0, None)


class SeriesResult(NamedTuple):
    partial_sums: np.ndarray
    verdict: Verdict
    tail_bound: Optional[float]
    evidence: str


class DiagNorm(NamedTuple):
    norm: float
    log_norm: float
    series_sum: float
    b_norm_sq: float
    tail_bound: float


class GapRow(NamedTuple):
    m: int
    t: complex
    gap: float
    full_gap: float
    bound: float


def series_terms(model: DiagonalModel, N: Optional[int] = None) -> np.ndarray:
    """`|α_m b_m|² / (1 - |α_m|²)`の配列を返します。

    Notes
    -----
    `|α_m| = 1`の場合、`α_m b_m = 0`ならその座標は落として項を0とし、
    そうでなければ項を`+inf`とします。"""
    alphas, bs, defects = model.alphas(N), model.bs(N), model.defects(N)
    numerators = np.abs(alphas * bs) ** 2
    terms = np.zeros(alphas.shape[0])
    inside = defects > 0
    terms[inside] = numerators[inside] / defects[inside]
    terms[~inside & (numerators > 0)] = math.inf
    return terms


def compensated_cumsum(terms) -> np.ndarray:
    """前から順にNeumaierの補正付きで足した部分和を返します。"""
    sums = np.empty(len(terms))
    total, correction = 0.0, 0.0
    for i, term in enumerate(terms):
        term = float(term)
        if math.isinf(term) or math.isinf(total):
            total, correction = math.inf, 0.0
            sums[i:] = math.inf
            break
        added = total + term
        if abs(total) >= abs(term):
            correction += (total - added) + term
        else:
            correction += (term - added) + total
        total = added
        sums[i] = total + correction
    return sums


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.polyfit(x, y, 1)[0])


def tail_estimate(terms: np.ndarray) -> Tuple[Optional[str], Optional[float]]:
    """項の後半から`Σ_{m>N}`の大きさを見積もります。

    Returns
    -------
    kind : Optional[str]
        `"zero"`、`"geometric"`、`"power"`のどれかです。見積もれなければNoneです。
    bound : Optional[float]
        残りの和の見積もりです。"""
    N = terms.shape[0]
    tail = terms[N // 2:]
    positive = np.nonzero(tail > 0)[0]
    # 後半の残り半分以上が0で終わる場合は有限個の項(かアンダーフロー)とみなす。
    if positive.size == 0 or len(tail) - 1 - positive[-1] >= max(1, len(tail) // 2):
        return "zero", 0.0
    if positive.size < 3:
        return None, None
    index = N // 2 + 1 + positive
    logs = np.log(tail[positive])
    last = float(tail[positive[-1]])

    ratio = math.exp(_slope(index.astype(float), logs))
    if ratio <= GEOMETRIC_RATIO:
        return "geometric", last * ratio / (1 - ratio)
    exponent = -_slope(np.log(index), logs)
    if exponent >= POWER_EXPONENT:
        # Σ_{m>k} C m^{-p} <= C k^{1-p} / (p - 1)
        return "power", last * float(index[-1]) / (exponent - 1)
    return None, None


def series_criterion(model: DiagonalModel, N: Optional[int] = None,
                     threshold: float = DIVERGENCE_THRESHOLD,
                     growth_exponent: float = GROWTH_EXPONENT) -> SeriesResult:
    """`Σ |α_m b_m|² / (1 - |α_m|²)`が収束するかどうかを`N`項までで判定します。

    Notes
    -----
    有限の計算では発散は証明できないので、判定は`N`までの証拠でしかありません。
    部分和が`threshold`を超えるか、後半の部分和の両対数の傾きが
    `growth_exponent`以上なら発散、後半の項が等比的に減るか`p > 1`の
    p級数で押さえられれば収束とします。それ以外は判定不能です。

    Parameters
    ----------
    model : DiagonalModel
    N : Optional[int]
        省略した場合は`model.horizon`を使います。
    threshold : float, default 1e6
    growth_exponent : float, default 0.9

    Returns
    -------
    SeriesResult

    Raises
    ------
    InputError : `|α_m| > 1`の項がある場合などに発生します。"""
    terms = series_terms(model, N)
    sums = compensated_cumsum(terms)
    N = terms.shape[0]
    if math.isinf(sums[-1]):
        m = int(np.argmax(np.isinf(terms))) + 1
        return SeriesResult(sums, "diverging", None,
                            f"|alpha_{m}| = 1 with alpha_{m} b_{m} != 0")
    if sums[-1] > threshold:
        return SeriesResult(sums, "diverging", None,
                            f"S_{N} = {sums[-1]:.6g} exceeds {threshold:.6g}")

    later = np.arange(N // 2 + 1, N + 1)
    growing = sums[N // 2:] > 0
    if growing.sum() >= 3:
        slope = _slope(np.log(later[growing]), np.log(sums[N // 2:][growing]))
        if slope >= growth_exponent:
            return SeriesResult(sums, "diverging", None,
                                f"S_k grows like k^{slope:.3f}")

    kind, bound = tail_estimate(terms)
    if kind is None:
        return SeriesResult(sums, "inconclusive", None,
                            "tail neither decays geometrically nor like m^-p with p > 1")
    return SeriesResult(sums, "converging", bound, f"{kind} tail")


def diag_norm(model: DiagonalModel, N: Optional[int] = None, **kwargs) -> DiagNorm:
    """`exp(½ S_N + ½ Σ_{m<=N}|b_m|²)`を返します。

    Raises
    ------
    UnboundedError : 級数が発散すると判定された場合に発生します。
    InconclusiveError : 判定不能な場合や`b`の二乗和の残りが見積もれない場合に発生します。

    Examples
    --------
    >>> model = DiagonalModel(lambda m: 0.5, lambda m: 1.0 if m == 1 else 0.0, 10)
    >>> round(diag_norm(model).norm, 4)
    1.9477"""
    result = series_criterion(model, N, **kwargs)
    if result.verdict == "diverging":
        raise UnboundedError(f"{model.name}: series diverges ({result.evidence})")
    if result.verdict == "inconclusive":
        raise InconclusiveError(f"{model.name}: {result.evidence}")
    squares = np.abs(model.bs(N)) ** 2
    kind, b_tail = tail_estimate(squares)
    if kind is None:
        raise InconclusiveError(f"{model.name}: b may not be square summable")
    series_sum = float(result.partial_sums[-1])
    b_norm_sq = math.fsum(squares)
    log_norm = 0.5 * (series_sum + b_norm_sq)
    norm = math.exp(log_norm) if log_norm < LOG_FLOAT_MAX else math.inf
    return DiagNorm(norm, log_norm, series_sum, b_norm_sq,
                    result.tail_bound + b_tail)


def counterexample_gap(model: DiagonalModel, m: int,
                       N: Optional[int] = None) -> GapRow:
    """`t_m v_m`での`‖φ(z)‖² - ‖z‖²`を計算します。

    Notes
    -----
    `t_m = conj(α_m) b_m / (1 - |α_m|²)`です。
    `gap`は座標`m`だけの寄与`|α_m t_m + b_m|² - |t_m|²`で、
    `full_gap`は他の座標の`|b_k|²`(`k <= N`)も足したものです。
    `bound`は`|b_m|² / (1 - |α_m|²)`で、`gap`はこれと一致します。

    Raises
    ------
    InputError : `|α_m| = 1`の場合に発生します。"""
    if m < 1:
        raise InputError("m starts at 1")
    alpha, b = complex(model.alpha(m)), complex(model.bcoef(m))
    defect = float(model.defect(m)) if model.defect is not None else 1 - abs(alpha) ** 2
    if defect <= 0:
        raise InputError(f"|alpha_{m}| = 1; no gap vector exists")
    t = alpha.conjugate() * b / defect
    gap = abs(alpha * t + b) ** 2 - abs(t) ** 2
    others = np.abs(model.bs(max(N or model.horizon, m))) ** 2
    full_gap = gap + math.fsum(others) - float(others[m - 1])
    return GapRow(m, t, gap, full_gap, abs(b) ** 2 / defect)


def gap_table(model: DiagonalModel, m_max: int, N: Optional[int] = None) -> List[GapRow]:
    return [counterexample_gap(model, m, N) for m in range(1, m_max + 1)]


def truncate(model: DiagonalModel, n: int) -> AffineMap:
    """最初の`n`座標に制限した有限次元の`φ`を返します。"""
    if n < 1:
        raise InputError("n must be positive")
    return AffineMap(np.diag(model.alphas(n)), model.bs(n))


def cms_vacuous(model: DiagonalModel, N: Optional[int] = None) -> bool:
    """`N`まで`|α_m| < 1`なら`ker(I - A*A)`は自明で、直交条件は自動的に成り立ちます。"""
    return bool(np.all(model.defects(N) > 0))
