# focklib - Affine Analysis

from typing import NamedTuple, Optional, Sequence, List, Tuple

from dataclasses import dataclass
import numpy as np
import math

from .errors import (
    CrossCheckError, DimensionError, PreconditionError, UnboundedError
)
from .numerics import (
    DEFAULT_TOLERANCES, Tolerances, as_matrix, as_vector, hermitian_eig,
    min_norm_solve, spectral_norm
)


# 二つの計算経路の一致を確かめる時の相対誤差です。
CROSSCHECK_RTOL = 1e-8
# math.expがオーバーフローしない上限です。
LOG_FLOAT_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True, eq=False)
class AffineMap:
    """`φ(z) = Az + b`を表すクラスです。
    実数の入力は複素数に昇格されます。

    Parameters
    ----------
    A : ComplexMatrix
        n×nの行列です。
    b : ComplexVector
        n次元のベクトルです。

    Raises
    ------
    DimensionError : `A`が正方でない、または`b`と次元が合わない場合に発生します。"""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A, b = as_matrix(self.A, "A"), as_vector(self.b, "b")
        if A.shape[0] != A.shape[1]:
            raise DimensionError(f"A must be square, got shape {A.shape}")
        if A.shape[0] != b.shape[0]:
            raise DimensionError(
                f"A is {A.shape[0]}x{A.shape[1]} but b has dimension {b.shape[0]}")
        if A.shape[0] == 0:
            raise DimensionError("dimension must be at least 1")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(np.eye(n), np.zeros(n))

    @classmethod
    def linear(cls, A) -> "AffineMap":
        A = as_matrix(A, "A")
        return cls(A, np.zeros(A.shape[0]))

    def __call__(self, z) -> np.ndarray:
        return apply_map(self, z)


@dataclass(frozen=True, eq=False)
class NormCertificate:
    """`composition_norm`の結果です。

    Attributes
    ----------
    bounded : bool
    norm : Optional[float]
        `exp(½‖v‖² + ½‖b‖²)`です。有界でない場合はNone、floatに収まらない場合はinfです。
    log_norm : Optional[float]
        `½(‖v‖² + ‖b‖²)`です。ノルムがオーバーフローする場合でも有限です。
    v : Optional[np.ndarray]
    w0 : Optional[np.ndarray]
    membership_residual : Optional[float]
        `‖(I-A*A)^{1/2}v - A*b‖`です。`‖A‖ > 1`の場合は定義されないのでNoneです。
    kernel_residual : Optional[float]
        `A*b`の`ker(I-A*A)`への射影のノルムです。
    boundary : bool
        `‖A‖`が`boundary_tol`の範囲で1に等しいかどうかです。
    operator_norm : float
        `‖A‖`です。
    tolerances : Tolerances"""

    bounded: bool
    norm: Optional[float]
    log_norm: Optional[float]
    v: Optional[np.ndarray]
    w0: Optional[np.ndarray]
    membership_residual: Optional[float]
    kernel_residual: Optional[float]
    boundary: bool
    operator_norm: float
    tolerances: Tolerances


class StructureReport(NamedTuple):
    compact: bool
    normal: bool
    isometric: bool
    coisometric: bool
    unitary: bool


class Membership(NamedTuple):
    member: bool
    v: np.ndarray
    residual: float
    kernel_residual: float


class _Defect(NamedTuple):
    # I - A*Aの固有値分解。丸め誤差で出た小さい固有値は0にしてある。
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    cutoff: float

    @property
    def kernel(self) -> np.ndarray:
        return self.eigenvectors[:, self.eigenvalues == 0]

    def square(self) -> np.ndarray:
        Q = self.eigenvectors
        return (Q * self.eigenvalues) @ Q.conj().T

    def sqrt(self) -> np.ndarray:
        Q = self.eigenvectors
        root = (Q * np.sqrt(self.eigenvalues)) @ Q.conj().T
        return (root + root.conj().T) / 2


def apply_map(phi: AffineMap, z) -> np.ndarray:
    """`φ(z)`を返します。`z`が二次元の場合は各行を点とみなします。"""
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != phi.dim:
        raise DimensionError(f"point has dimension {z.shape[-1]}, map has {phi.dim}")
    return z @ phi.A.T + phi.b


def compose_maps(outer: AffineMap, inner: AffineMap) -> AffineMap:
    """`outer∘inner`、つまり`z ↦ A₂(A₁z + b₁) + b₂`を返します。"""
    if outer.dim != inner.dim:
        raise DimensionError("maps act on spaces of different dimension")
    return AffineMap(outer.A @ inner.A, outer.A @ inner.b + outer.b)


def _boundary(norm: float, tol: Tolerances) -> bool:
    return 1 - tol.boundary_tol < norm <= 1 + tol.boundary_tol


def _require_contraction(A: np.ndarray, tol: Tolerances) -> float:
    norm = spectral_norm(A)
    if norm > 1 + tol.boundary_tol:
        raise PreconditionError(
            f"‖A‖ = {norm:.12g} > 1; the defect I - A*A is not positive semi-definite")
    return norm


def _defect(A: np.ndarray, tol: Tolerances) -> _Defect:
    norm = _require_contraction(A, tol)
    n = A.shape[0]
    eigenvalues, eigenvectors = hermitian_eig(np.eye(n) - A.conj().T @ A, tol)
    cutoff = tol.rank_cutoff(n) * max(1.0, float(np.max(np.abs(eigenvalues))))
    if _boundary(norm, tol):
        # ‖A‖が1の幅に入る時は、その幅の特異値を全て1とみなす。1 - σ² < 2·boundary_tolです。
        cutoff = max(cutoff, 2 * tol.boundary_tol)
    # 負の丸め誤差と閾値未満の固有値は0にする。核はこの0の固有空間とする。
    eigenvalues = np.where(eigenvalues <= cutoff, 0.0, eigenvalues)
    return _Defect(eigenvalues, eigenvectors, cutoff)


def defect_sqrt(A, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """`(I - A*A)^{1/2}`を返します。

    Notes
    -----
    エルミート固有値分解を使い、丸め誤差による負の固有値は0にします。
    結果はエルミートな半正定値行列で、二乗すると`I - A*A`になります。

    Raises
    ------
    PreconditionError : `‖A‖ > 1 + boundary_tol`の場合に発生します。"""
    A = as_matrix(A, "A")
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"A must be square, got shape {A.shape}")
    return _defect(A, tol).sqrt()


def defect_kernel(A, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """`ker(I - A*A)`、つまり`‖Aζ‖ = ‖ζ‖`となる`ζ`の正規直交基底を列に持つ行列を返します。"""
    A = as_matrix(A, "A")
    return _defect(A, tol).kernel


def _membership(phi: AffineMap, defect: _Defect, tol: Tolerances) -> Membership:
    target = phi.A.conj().T @ phi.b
    scale = max(1.0, float(np.linalg.norm(target)))
    threshold = tol.rank_cutoff(phi.dim) * scale
    v, residual = min_norm_solve(defect.sqrt(), target, tol)
    kernel_residual = float(np.linalg.norm(defect.kernel.conj().T @ target))
    member = residual <= threshold
    if member != (kernel_residual <= threshold):
        raise CrossCheckError(
            "range membership tests disagree: pseudoinverse residual "
            f"{residual:.3e}, kernel projection {kernel_residual:.3e}, "
            f"threshold {threshold:.3e}")
    return Membership(member, v, residual, kernel_residual)


def range_membership(phi: AffineMap, tol: Tolerances = DEFAULT_TOLERANCES) -> Membership:
    """`A*b`が`(I - A*A)^{1/2}`の値域に入っているかを調べます。

    Notes
    -----
    擬似逆行列による残差と、`A*b`の`ker(I - A*A)`への射影の二つの方法で判定します。
    有限次元ではこの二つは同値なので、食い違った場合は`CrossCheckError`となります。

    Returns
    -------
    Membership
        `member`, `v`(最小ノルム解), `residual`, `kernel_residual`です。

    Raises
    ------
    PreconditionError : `‖A‖ > 1 + boundary_tol`の場合に発生します。
    CrossCheckError : 二つの判定が食い違った場合に発生します。"""
    return _membership(phi, _defect(phi.A, tol), tol)


def _w0(phi: AffineMap, defect: _Defect, tol: Tolerances) -> np.ndarray:
    return min_norm_solve(defect.square(), phi.A.conj().T @ phi.b, tol).x


def _check_close(left: np.ndarray, right: np.ndarray, what: str) -> None:
    scale = max(1.0, float(np.linalg.norm(left)))
    if np.linalg.norm(left - right) > CROSSCHECK_RTOL * scale:
        raise CrossCheckError(f"{what} disagree: {left} vs {right}")


def minimal_norm_vector(phi: AffineMap, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """`A*b = (I - A*A)^{1/2}v`を満たす最小ノルムのベクトル`v`を返します。

    Notes
    -----
    `(I - A*A)w₀ = A*b`の解`w₀`から`v = (I - A*A)^{1/2}w₀`としても求め、
    二つが一致することを確かめます。
    また`v`が`ker(I - A*A)`と直交していることも確かめます。

    Raises
    ------
    UnboundedError : `A*b`が値域に入っていない場合に発生します。
    CrossCheckError : 二つの計算経路が一致しない場合に発生します。"""
    defect = _defect(phi.A, tol)
    membership = _membership(phi, defect, tol)
    if not membership.member:
        raise UnboundedError(
            "A*b is not in the range of (I - A*A)^{1/2} "
            f"(residual {membership.residual:.3e})")
    v = membership.v
    _check_close(v, defect.sqrt() @ _w0(phi, defect, tol), "v and (I - A*A)^{1/2}w0")
    # vは値域の閉包に入っている。つまり核への射影が0になる。
    leak = float(np.linalg.norm(defect.kernel.conj().T @ v))
    if leak > CROSSCHECK_RTOL * max(1.0, float(np.linalg.norm(v))):
        raise CrossCheckError(f"v has a component {leak:.3e} in ker(I - A*A)")
    return v


def composition_norm(phi: AffineMap, tol: Tolerances = DEFAULT_TOLERANCES) -> NormCertificate:
    """合成作用素`C_φ`のノルムを求めます。

    Notes
    -----
    有界でないことはエラーではなく結果として返されます。
    有界な場合は`exp(½‖v‖² + ½‖b‖²)`と`exp(½(‖w₀‖² - ‖Aw₀‖² + ‖b‖²))`の
    二つを計算して一致するか確かめます。

    Parameters
    ----------
    phi : AffineMap
    tol : Tolerances

    Returns
    -------
    NormCertificate

    Raises
    ------
    CrossCheckError : 二つのノルムの式が一致しない場合に発生します。

    Examples
    --------
    >>> round(composition_norm(AffineMap([[0.5]], [0.5])).norm, 7)
    1.1813604"""
    norm_A = spectral_norm(phi.A)
    boundary = _boundary(norm_A, tol)
    if norm_A > 1 + tol.boundary_tol:
        return NormCertificate(
            False, None, None, None, None, None, None, boundary, norm_A, tol)

    defect = _defect(phi.A, tol)
    membership = _membership(phi, defect, tol)
    if not membership.member:
        return NormCertificate(
            False, None, None, None, None, membership.residual,
            membership.kernel_residual, boundary, norm_A, tol)

    v, w0 = membership.v, _w0(phi, defect, tol)
    _check_close(v, defect.sqrt() @ w0, "v and (I - A*A)^{1/2}w0")
    b_sq = float(np.vdot(phi.b, phi.b).real)
    log_norm = 0.5 * (float(np.vdot(v, v).real) + b_sq)
    Aw0 = phi.A @ w0
    log_cms = 0.5 * (float(np.vdot(w0, w0).real - np.vdot(Aw0, Aw0).real) + b_sq)
    # 対数の差はノルムの相対誤差と同じ。
    if abs(log_norm - log_cms) > CROSSCHECK_RTOL:
        raise CrossCheckError(
            f"norm formulas disagree: log-norm {log_norm!r} from v, {log_cms!r} from w0")
    # floatに収まらない場合はinfとし、log_normだけが有限になる。
    norm = math.exp(log_norm) if log_norm < LOG_FLOAT_MAX else math.inf
    return NormCertificate(
        True, norm, log_norm, v, w0, membership.residual,
        membership.kernel_residual, boundary, norm_A, tol)


def cms_condition_check(phi: AffineMap, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """`‖Aζ‖ = ‖ζ‖`となる全ての`ζ`について`<Aζ, b> = 0`かどうかを返します。

    Notes
    -----
    `ker(I - A*A)`の正規直交基底を固有ベクトルから作り、各基底ベクトルで確かめます。
    有限次元では`range_membership`の`member`と必ず一致します。
    核が自明な場合(`‖A‖ < 1`)は常にTrueです。"""
    defect = _defect(phi.A, tol)
    scale = max(1.0, float(np.linalg.norm(phi.A.conj().T @ phi.b)))
    products = (phi.A @ defect.kernel).conj().T @ phi.b
    return bool(np.linalg.norm(products) <= tol.rank_cutoff(phi.dim) * scale)


def classify_structure(phi: AffineMap, tol: Tolerances = DEFAULT_TOLERANCES) -> StructureReport:
    """`C_φ`がコンパクト、正規、等長、余等長、ユニタリかどうかを判定します。

    Notes
    -----
    正規、等長、余等長は`φ(0) = b = 0`が必要です。
    `C_φ`が等長なのは`A`が余等長(`AA* = I`)の時、余等長なのは`A`が等長(`A*A = I`)の時です。
    有限次元ではこれらは全てユニタリと同値です。"""
    norm_A = spectral_norm(phi.A)
    # AA* - Iなどは‖A‖²の大きさなので、それに対する相対値で比べる。
    threshold = tol.boundary_tol * max(1.0, norm_A ** 2)
    I = np.eye(phi.dim)
    linear = float(np.linalg.norm(phi.b)) <= threshold
    AAh, AhA = phi.A @ phi.A.conj().T, phi.A.conj().T @ phi.A
    compact = norm_A < 1 - tol.boundary_tol
    normal = (linear and norm_A <= 1 + tol.boundary_tol
              and spectral_norm(AAh - AhA) <= threshold)
    isometric = linear and spectral_norm(AAh - I) <= threshold
    coisometric = linear and spectral_norm(AhA - I) <= threshold
    return StructureReport(
        compact, normal, isometric, coisometric, isometric and coisometric)


def kernel_norm_ratio(phi: AffineMap, z) -> float:
    """`‖C_φ* K_z‖ / ‖K_z‖ = exp(½(‖φ(z)‖² - ‖z‖²))`を返します。
    有界な場合は常に`‖C_φ‖`以下です。"""
    z = as_vector(z, "z")
    image = apply_map(phi, z)
    return math.exp(0.5 * float(np.vdot(image, image).real - np.vdot(z, z).real))


def noncompact_witness(phi: AffineMap, radii: Sequence[float],
                       tol: Tolerances = DEFAULT_TOLERANCES) -> List[float]:
    """`‖A‖ = 1`の有界な`C_φ`がコンパクトでないことの証拠を返します。

    Notes
    -----
    `ζ ∈ ker(I - A*A)`の単位ベクトルについて`z = rζ`とすると、
    正規化した核関数は`r → ∞`で弱収束で0に行くのに、
    `‖C_φ* K_z‖ / ‖K_z‖`は常に`exp(½‖b‖²)`のままです。

    Returns
    -------
    List[float]
        各半径での比です。

    Raises
    ------
    PreconditionError : 核が自明な場合や有界でない場合に発生します。"""
    defect = _defect(phi.A, tol)
    if defect.kernel.shape[1] == 0:
        raise PreconditionError("ker(I - A*A) is trivial; C_φ has no such witness")
    if not _membership(phi, defect, tol).member:
        raise PreconditionError("C_φ is unbounded")
    zeta = defect.kernel[:, 0]
    return [kernel_norm_ratio(phi, radius * zeta) for radius in radii]


def compact_factorization(phi: AffineMap,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> Tuple[AffineMap, AffineMap]:
    """`‖A‖ < 1`の時に`φ = φ₂∘φ₁`となる`φ₁(z) = α⁻¹Az`と`φ₂(z) = αz + b`を返します。
    `C_φ = C_{φ₁}C_{φ₂}`となり、`C_{φ₁}`はコンパクトで`C_{φ₂}`は有界です。

    Raises
    ------
    PreconditionError : `‖A‖`が1から`boundary_tol`以上離れていない場合に発生します。"""
    norm_A = spectral_norm(phi.A)
    if norm_A >= 1 - tol.boundary_tol:
        raise PreconditionError(f"‖A‖ = {norm_A:.12g} is not below 1")
    alpha = (norm_A + 1) / 2 if norm_A > 0 else 0.5
    inner = AffineMap.linear(phi.A / alpha)
    outer = AffineMap(alpha * np.eye(phi.dim), phi.b)
    return inner, outer


def linear_functional_image_norm(phi: AffineMap, u) -> float:
    """`f_u(z) = <z, u>`に対する`‖C_φ f_u‖ = (‖A*u‖² + |<b, u>|²)^{1/2}`を返します。"""
    u = as_vector(u, "u")
    if u.shape[0] != phi.dim:
        raise DimensionError("u has the wrong dimension")
    return math.sqrt(float(np.linalg.norm(phi.A.conj().T @ u)) ** 2
                     + abs(np.vdot(u, phi.b)) ** 2)


def adjoint_products(A) -> Tuple[np.ndarray, np.ndarray]:
    """`φ(z) = Az`に対して`C_φ*C_φ = C_{AA*}`と`C_φC_φ* = C_{A*A}`となる`(AA*, A*A)`を返します。"""
    A = as_matrix(A, "A")
    return A @ A.conj().T, A.conj().T @ A
