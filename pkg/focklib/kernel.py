# focklib - Kernel PSD

from typing import NamedTuple, Optional, Tuple

from dataclasses import dataclass
from scipy import optimize
import numpy as np
import math

from .affine import AffineMap, apply_map, composition_norm
from .errors import DimensionError, InconclusiveError, InputError, KernelRangeError
from .numerics import (
    DEFAULT_TOLERANCES, Tolerances, as_matrix, as_vector, hermitian_eig, min_norm_solve
)


# exp(<z,w>)を計算する時に許す|<z,w>|の上限です。
EXPONENT_GUARD = 700.0
MAX_POINTS = 32
# 上限を探す時に指数を広げる回数です。
MAX_EXPANSIONS = 64


@dataclass(frozen=True, eq=False)
class SamplePlan:
    """Gram行列を作るための点の集合です。

    Parameters
    ----------
    points : np.ndarray
        m×nの配列で、各行が一つの点です。
    seed : int
        点を作った時の乱数のシードです。
    radius : float
        全ての点のノルムはこれ以下である必要があります。

    Raises
    ------
    InputError : 点が有限でない場合、半径の外にある場合などに発生します。"""

    points: np.ndarray
    seed: int = 0
    radius: float = 2.0

    def __post_init__(self):
        points = np.array(self.points, dtype=complex)
        if points.ndim == 1 and points.size == 0:
            points = points.reshape(0, 0)
        if points.ndim != 2:
            raise DimensionError("points must be an m×n array")
        if not np.all(np.isfinite(points)):
            raise InputError("sample points must be finite")
        if not self.radius > 0:
            raise InputError("radius must be positive")
        if points.size and np.max(np.linalg.norm(points, axis=1)) > self.radius * (1 + 1e-12):
            raise InputError(f"a sample point lies outside the radius {self.radius}")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return self.points.shape[0]

    def extend(self, other: "SamplePlan") -> "SamplePlan":
        return SamplePlan(np.vstack([self.points, other.points]), self.seed,
                          max(self.radius, other.radius))


@dataclass(frozen=True, eq=False)
class QuadraticKernelSpec:
    """`F(z,w) = <Tz,w> - <z,u> - <u,w> + M²`を表します。

    Raises
    ------
    InputError : `T`がエルミートでない場合に発生します。
    DimensionError : 次元が合わない場合に発生します。"""

    T: np.ndarray
    u: np.ndarray
    M: float

    def __post_init__(self):
        T, u = as_matrix(self.T, "T"), as_vector(self.u, "u")
        if T.shape[0] != T.shape[1] or T.shape[0] != u.shape[0]:
            raise DimensionError(f"T has shape {T.shape} but u has dimension {u.shape[0]}")
        scale = max(1.0, float(np.max(np.abs(T)))) if T.size else 1.0
        if np.max(np.abs(T - T.conj().T), initial=0.0) > 1e-10 * scale:
            raise InputError("T must be Hermitian")
        if not math.isfinite(self.M):
            raise InputError("M must be finite")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "M", float(self.M))

    def value(self, z) -> float:
        # F(z,z)です。
        z = np.asarray(z, dtype=complex)
        return float(np.vdot(z, self.T @ z).real - 2 * np.vdot(self.u, z).real + self.M ** 2)


class PsdResult(NamedTuple):
    psd: bool
    min_eig: float


class QuadraticInfimum(NamedTuple):
    inf: float
    v: Optional[np.ndarray]
    psd_equiv: bool
    bounded_below: bool


class ClosureReport(NamedTuple):
    # それぞれ最小固有値を max(1, ‖G‖) で割ったものです。
    sum_min: float
    product_min: float
    exp_min: float


def bargmann_kernel(z, w) -> complex:
    """`K(z,w) = exp(<z,w>)`を返します。`<z,w> = Σ z_i conj(w_i)`です。

    Raises
    ------
    KernelRangeError : `‖z‖·‖w‖ > 700`の場合に発生します。"""
    z, w = as_vector(z, "z"), as_vector(w, "w")
    if z.shape != w.shape:
        raise DimensionError("z and w must have the same dimension")
    if np.linalg.norm(z) * np.linalg.norm(w) > EXPONENT_GUARD:
        raise KernelRangeError("‖z‖·‖w‖ exceeds the overflow guard 700")
    return complex(np.exp(np.vdot(w, z)))


def _exp_gram(points: np.ndarray) -> np.ndarray:
    # G[l][j] = exp(<x_l, x_j>)
    squared = np.sum(np.abs(points) ** 2, axis=1)
    if squared.size and np.max(squared) > EXPONENT_GUARD:
        raise KernelRangeError(
            f"a point has ‖x‖² = {np.max(squared):.6g} beyond the overflow guard 700")
    return np.exp(points @ points.conj().T)


def _check_plan(phi: AffineMap, plan: SamplePlan) -> None:
    if len(plan) and plan.points.shape[1] != phi.dim:
        raise DimensionError(
            f"plan points have dimension {plan.points.shape[1]}, map has {phi.dim}")


def phi_gram(phi: AffineMap, M: float, plan: SamplePlan) -> np.ndarray:
    """`Φ_M(z,w) = M²exp(<z,w>) - exp(<φ(z),φ(w)>)`のGram行列を返します。

    Notes
    -----
    `G[l][j] = Φ_M(x_l, x_j)`で、`Σ c_j conj(c_l) G[l][j]`が二次形式になります。

    Raises
    ------
    InputError : `M <= 0`の場合に発生します。
    KernelRangeError : 点や`φ`の像がオーバーフローの範囲にある場合に発生します。"""
    if not M > 0:
        raise InputError("M must be positive")
    _check_plan(phi, plan)
    gram = M ** 2 * _exp_gram(plan.points) - _exp_gram(apply_map(phi, plan.points))
    return (gram + gram.conj().T) / 2


def _min_eig(gram: np.ndarray, tol: Tolerances) -> Tuple[float, float]:
    if gram.size == 0:
        return 0.0, 1.0
    eigenvalues = hermitian_eig(gram, tol)[0]
    return float(eigenvalues[0]), max(1.0, float(np.max(np.abs(eigenvalues))))


def psd_certify(phi: AffineMap, M: float, plan: SamplePlan,
                tol: Tolerances = DEFAULT_TOLERANCES) -> PsdResult:
    """`Φ_M`のGram行列が半正定値かどうかを調べます。

    Notes
    -----
    `psd=False`は`‖C_φ‖ > M`の証明になりますが、
    `psd=True`はその点の集合での証拠でしかなく、有界性の証明にはなりません。

    Returns
    -------
    PsdResult
        `psd`と最小固有値`min_eig`です。"""
    min_eig, scale = _min_eig(phi_gram(phi, M, plan), tol)
    return PsdResult(min_eig >= -tol.psd_tol * scale, min_eig)


def norm_lower_bound(phi: AffineMap, plan: SamplePlan, bisect_tol: float = 1e-9,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """点の集合の上でGram行列が半正定値となる最小の`M`を二分法で求めます。

    Notes
    -----
    下端は一点での条件`2 ln M >= ‖φ(z)‖² - ‖z‖²`の最大値で、
    上端は`exp(½ max‖φ(x)‖² + 1)`から始め、半正定値にならなければ広げます。
    `C_φ`が有界なら結果は`‖C_φ‖(1 + bisect_tol)`以下です。
    点の集合が`w₀`を含む場合は下端がそのまま`‖C_φ‖`になります。

    Raises
    ------
    InputError : 点の集合が空の場合に発生します。
    InconclusiveError : 上端を広げても半正定値にならなかった場合に発生します。"""
    if len(plan) == 0:
        raise InputError("the sample plan is empty")
    _check_plan(phi, plan)
    images = apply_map(phi, plan.points)
    image_sq = np.sum(np.abs(images) ** 2, axis=1)
    gaps = image_sq - np.sum(np.abs(plan.points) ** 2, axis=1)
    low = math.exp(0.5 * float(np.max(gaps)))
    if psd_certify(phi, low, plan, tol).psd:
        return low

    log_high = 0.5 * float(np.max(image_sq)) + 1
    for _ in range(MAX_EXPANSIONS):
        # M²がオーバーフローする所まで来たら諦める。
        if 2 * log_high <= EXPONENT_GUARD and psd_certify(
                phi, math.exp(log_high), plan, tol).psd:
            break
        log_high *= 2
        if 2 * log_high > EXPONENT_GUARD:
            raise InconclusiveError(
                "no PSD scale below the overflow guard; C_φ may be unbounded")
    else:
        raise InconclusiveError("no PSD scale found for this plan; C_φ may be unbounded")
    high = math.exp(log_high)

    while high - low > bisect_tol * low:
        middle = (low + high) / 2
        if psd_certify(phi, middle, plan, tol).psd:
            high = middle
        else:
            low = middle
    return high


def _gaussian_points(n: int, count: int, radius: float,
                     rng: np.random.Generator) -> np.ndarray:
    # 複素ガウスの方向に、球の中で一様になる半径をつける。
    directions = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    lengths = np.linalg.norm(directions, axis=1, keepdims=True)
    lengths[lengths == 0] = 1.0
    radii = radius * rng.uniform(size=(count, 1)) ** (1 / (2 * n))
    return directions / lengths * radii


def random_plan(n: int, samples: int = 20, radius: float = 2.0, seed: int = 0) -> SamplePlan:
    """固定のシードで複素ガウスの点を`samples`個作ります。"""
    if not 0 < samples <= MAX_POINTS:
        raise InputError(f"samples must be between 1 and {MAX_POINTS}")
    rng = np.random.default_rng(seed)
    return SamplePlan(_gaussian_points(n, samples, radius, rng), seed, radius)


def structured_plan(phi: AffineMap, samples: int = 20, radius: float = 2.0, seed: int = 0,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> SamplePlan:
    """0と(存在すれば)`w₀`を先頭に置き、残りを乱数の点で埋めた点の集合を返します。

    Notes
    -----
    乱数の点は半径の中に作りますが、`w₀`は半径の外にあってもそのまま入れます。
    点の数は最大で32個です。"""
    fixed = [np.zeros(phi.dim, dtype=complex)]
    bound = radius
    certificate = composition_norm(phi, tol)
    if certificate.w0 is not None and np.linalg.norm(certificate.w0) > 0:
        fixed.append(certificate.w0)
        bound = max(radius, float(np.linalg.norm(certificate.w0)))
    count = max(0, min(samples, MAX_POINTS - len(fixed)))
    rng = np.random.default_rng(seed)
    points = np.vstack([np.array(fixed), _gaussian_points(phi.dim, count, radius, rng)])
    return SamplePlan(points, seed, bound)


def quadratic_kernel_gram(spec: QuadraticKernelSpec, points) -> np.ndarray:
    """`G[l][j] = F(x_l, x_j)`のGram行列を返します。"""
    X = np.asarray(points, dtype=complex)
    # F(x_l, x_j) = <T x_l, x_j> - <x_l, u> - <u, x_j> + M²
    gram = (X @ spec.T.T) @ X.conj().T
    gram -= (X @ spec.u.conj())[:, None]
    gram -= (spec.u @ X.conj().T)[None, :]
    gram += spec.M ** 2
    return (gram + gram.conj().T) / 2


def quadratic_form_infimum(spec: QuadraticKernelSpec,
                           tol: Tolerances = DEFAULT_TOLERANCES) -> QuadraticInfimum:
    """`inf{F(z,z)}`を閉じた式で求めます。

    Notes
    -----
    `T`が半正定値で`u`が`T^{1/2}`の値域にある時は`inf = M² - ‖v‖²`で、
    `v`は`T^{1/2}v = u`の最小ノルム解です。
    `F`が半正定値核であることと`‖v‖ <= M`は同値です。
    それ以外の場合は下に有界でなく、`inf = -inf`となります。"""
    n = spec.u.shape[0]
    eigenvalues, Q = hermitian_eig(spec.T, tol)
    scale = max(1.0, float(np.max(np.abs(eigenvalues)))) if n else 1.0
    if n and eigenvalues[0] < -tol.psd_tol * scale:
        return QuadraticInfimum(-math.inf, None, False, False)
    eigenvalues = np.where(eigenvalues <= tol.rank_cutoff(n) * scale, 0.0, eigenvalues)
    root = (Q * np.sqrt(eigenvalues)) @ Q.conj().T
    v, residual = min_norm_solve((root + root.conj().T) / 2, spec.u, tol)
    if residual > tol.rank_cutoff(n) * max(1.0, float(np.linalg.norm(spec.u))):
        return QuadraticInfimum(-math.inf, None, False, False)
    v_norm = float(np.linalg.norm(v))
    return QuadraticInfimum(spec.M ** 2 - v_norm ** 2, v,
                            v_norm <= abs(spec.M) * (1 + 1e-12), True)


def descent_minimum(spec: QuadraticKernelSpec) -> Tuple[float, np.ndarray]:
    """`z ↦ F(z,z)`を実2n次元の共役勾配法で最小化します。
    閉じた式とは独立な確認用です。"""
    n = spec.u.shape[0]

    def split(x):
        return x[:n] + 1j * x[n:]

    def value(x):
        return spec.value(split(x))

    def gradient(x):
        residual = spec.T @ split(x) - spec.u
        return 2 * np.concatenate([residual.real, residual.imag])

    result = optimize.minimize(value, np.zeros(2 * n), jac=gradient, method="CG",
                               options={"gtol": 1e-12, "maxiter": 200 * max(n, 1)})
    return float(result.fun), split(result.x)


def schur_closure_check(first, second, tol: Tolerances = DEFAULT_TOLERANCES) -> ClosureReport:
    """半正定値行列の和、アダマール積、`exp(G) - 1`が半正定値であることを確かめるための値を返します。

    Raises
    ------
    KernelRangeError : `G1`の実部が700を超える場合に発生します。"""
    first, second = as_matrix(first, "G1"), as_matrix(second, "G2")
    if first.shape != second.shape:
        raise DimensionError("Gram matrices must have the same shape")
    if first.size and np.max(first.real) > EXPONENT_GUARD:
        raise KernelRangeError(
            f"G1 has an entry with real part {np.max(first.real):.6g} beyond the overflow guard 700")
    results = []
    for matrix in (first + second, first * second, np.expm1(first)):
        min_eig, scale = _min_eig((matrix + matrix.conj().T) / 2, tol)
        results.append(min_eig / scale)
    return ClosureReport(*results)
