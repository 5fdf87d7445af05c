# focklib - Fock Truncation

from typing import Dict, List, Sequence, Tuple

from dataclasses import dataclass, field
from scipy.special import gammaln
import numpy as np
import math

from .affine import AffineMap, apply_map
from .errors import DimensionError, InputError, ResourceError
from .numerics import as_matrix, as_vector, spectral_norm


MultiIndex = Tuple[int, ...]

MAX_BASIS = 2_000_000
# 密行列を作る時の基底の数の上限です。
MAX_DENSE = 4096
# これ以下の次数では階乗を整数で正確に計算します。
EXACT_DEGREE = 20


def _compositions(total: int, parts: int):
    # totalをparts個に分ける方法を辞書式の降順で列挙する。
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class TruncatedBasis:
    """次数`d`以下の単項式`z^α`の基底です。

    Notes
    -----
    次数の昇順、同じ次数の中では辞書式の降順に並んでいます。
    最初の要素は0の多重指数です。"""

    n: int
    d: int
    indices: Tuple[MultiIndex, ...]
    position: Dict[MultiIndex, int] = field(repr=False)
    exponents: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.indices)

    def degrees(self) -> np.ndarray:
        return self.exponents.sum(axis=1)

    def log_factorials(self) -> np.ndarray:
        """`log α!`の配列を返します。"""
        return gammaln(self.exponents + 1).sum(axis=1)

    def factorials(self) -> np.ndarray:
        """`α!`の配列を返します。小さい次数では整数で正確に計算します。"""
        if self.d <= EXACT_DEGREE:
            return np.array([
                float(math.prod(math.factorial(k) for k in alpha))
                for alpha in self.indices
            ])
        return np.exp(self.log_factorials())


def basis_size(n: int, d: int) -> int:
    return math.comb(n + d, d)


def enumerate_basis(n: int, d: int) -> TruncatedBasis:
    """次数`d`以下の多重指数を列挙します。

    Parameters
    ----------
    n : int
        次元です。1以上である必要があります。
    d : int
        最大の次数です。

    Raises
    ------
    InputError : `n < 1`または`d < 0`の場合に発生します。
    ResourceError : 基底の数が2·10⁶を超える場合に発生します。

    Examples
    --------
    >>> enumerate_basis(2, 1).indices
    ((0, 0), (1, 0), (0, 1))"""
    if n < 1 or d < 0:
        raise InputError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    size = basis_size(n, d)
    if size > MAX_BASIS:
        raise ResourceError(f"basis of size {size} exceeds the limit {MAX_BASIS}")
    indices = tuple(
        alpha for degree in range(d + 1) for alpha in _compositions(degree, n)
    )
    exponents = np.array(indices, dtype=np.int64).reshape(len(indices), n)
    exponents.setflags(write=False)
    return TruncatedBasis(
        n, d, indices, {alpha: i for i, alpha in enumerate(indices)}, exponents
    )


def degree_slice(basis: TruncatedBasis, m: int) -> slice:
    """次数がちょうど`m`の多重指数が並ぶ範囲を返します。"""
    if not 0 <= m <= basis.d:
        raise InputError(f"degree {m} is outside 0..{basis.d}")
    return slice(basis_size(basis.n, m - 1) if m else 0, basis_size(basis.n, m))


@dataclass(frozen=True, eq=False)
class PolyCoeffs:
    """多項式`f = Σ c_α z^α`の単項式での係数です。"""

    basis: TruncatedBasis
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = as_vector(self.coeffs, "coeffs")
        if coeffs.shape[0] != len(self.basis):
            raise DimensionError(
                f"{coeffs.shape[0]} coefficients for a basis of size {len(self.basis)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def monomial(cls, basis: TruncatedBasis, alpha: Sequence[int]) -> "PolyCoeffs":
        coeffs = np.zeros(len(basis), dtype=complex)
        coeffs[basis.position[tuple(alpha)]] = 1
        return cls(basis, coeffs)

    def degree(self) -> int:
        nonzero = np.nonzero(self.coeffs)[0]
        return int(self.basis.degrees()[nonzero].max()) if nonzero.size else 0


def _same_basis(f: PolyCoeffs, g: PolyCoeffs) -> None:
    if f.basis is not g.basis and (f.basis.n, f.basis.d) != (g.basis.n, g.basis.d):
        raise InputError("polynomials live on different bases")


def poly_inner(f: PolyCoeffs, g: PolyCoeffs) -> complex:
    """`<f, g> = Σ α! c_α(f) conj(c_α(g))`を返します。

    Examples
    --------
    >>> basis = enumerate_basis(2, 3)
    >>> f = PolyCoeffs.monomial(basis, (2, 1))
    >>> poly_inner(f, f)
    (2+0j)"""
    _same_basis(f, g)
    return complex(np.sum(f.basis.factorials() * f.coeffs * g.coeffs.conj()))


def poly_norm(f: PolyCoeffs) -> float:
    return math.sqrt(max(poly_inner(f, f).real, 0.0))


def _shift_tables(basis: TruncatedBasis) -> np.ndarray:
    # shift[j][i]はindices[i] + e_jの位置で、次数がdを超える場合は-1です。
    shift = np.full((basis.n, len(basis)), -1, dtype=np.int64)
    for i, alpha in enumerate(basis.indices):
        if sum(alpha) == basis.d:
            continue
        for j in range(basis.n):
            raised = alpha[:j] + (alpha[j] + 1,) + alpha[j + 1:]
            shift[j][i] = basis.position[raised]
    return shift


def _times_linear(coeffs: np.ndarray, row: np.ndarray, constant: complex,
                  shift: np.ndarray) -> np.ndarray:
    # (Σ c_β z^β)(Σ_j row_j z_j + constant)
    result = coeffs * constant
    for j, a in enumerate(row):
        if a == 0:
            continue
        valid = shift[j] >= 0
        np.add.at(result, shift[j][valid], coeffs[valid] * a)
    return result


def monomial_composition(phi: AffineMap, basis: TruncatedBasis) -> np.ndarray:
    """`(Az + b)^α`の単項式での係数を列に並べた行列を返します。

    Notes
    -----
    `(Az+b)^α = (Az+b)^{α-e_k}·(Az+b)_k`で一列ずつ作ります。
    アフィン写像は次数を上げないので、この行列は正確です。"""
    if phi.dim != basis.n:
        raise DimensionError(f"map has dimension {phi.dim}, basis has {basis.n}")
    size = len(basis)
    if size > MAX_DENSE:
        raise ResourceError(f"dense matrix of size {size} exceeds the limit {MAX_DENSE}")
    shift = _shift_tables(basis)
    A, b = phi.A, phi.b
    columns = np.zeros((size, size), dtype=complex)
    columns[0, 0] = 1
    for i in range(1, size):
        alpha = basis.indices[i]
        k = next(j for j, e in enumerate(alpha) if e)
        lowered = alpha[:k] + (alpha[k] - 1,) + alpha[k + 1:]
        columns[:, i] = _times_linear(
            columns[:, basis.position[lowered]], A[k], b[k], shift)
    return columns


def compose_poly(phi: AffineMap, f: PolyCoeffs) -> PolyCoeffs:
    """`f∘φ`の係数を返します。

    Examples
    --------
    >>> basis = enumerate_basis(1, 1)
    >>> g = compose_poly(AffineMap([[1]], [2]), PolyCoeffs.monomial(basis, (1,)))
    >>> g.coeffs
    array([2.+0.j, 1.+0.j])"""
    return PolyCoeffs(f.basis, monomial_composition(phi, f.basis) @ f.coeffs)


def _orthonormal_scale(basis: TruncatedBasis) -> np.ndarray:
    # scale[β, α] = sqrt(β!/α!)
    if basis.d <= EXACT_DEGREE:
        roots = np.sqrt(basis.factorials())
        return roots[:, None] / roots[None, :]
    logs = 0.5 * basis.log_factorials()
    return np.exp(logs[:, None] - logs[None, :])


def matrix_of_composition(phi: AffineMap, d: int) -> np.ndarray:
    """正規直交基底`f_α = z^α/√α!`で表した`C_φ`の行列を次数`d`以下に制限したものを返します。

    Notes
    -----
    `M[β, α] = <C_φ f_α, f_β>`です。次数`d`以下の空間は`C_φ`で不変なので、
    これは圧縮ではなく正確な制限になります。
    合成については`matrix(φ₂∘φ₁) = matrix(φ₁)·matrix(φ₂)`が成り立ちます。

    Parameters
    ----------
    phi : AffineMap
    d : int
        最大の次数です。

    Raises
    ------
    ResourceError : 基底が大きすぎる場合に発生します。"""
    basis = enumerate_basis(phi.dim, d)
    return monomial_composition(phi, basis) * _orthonormal_scale(basis)


def truncated_norm(phi: AffineMap, d: int) -> float:
    """`‖C_φ‖`の下からの近似です。`d`について単調に増えます。

    Examples
    --------
    >>> truncated_norm(AffineMap.identity(2), 5)
    1.0"""
    return spectral_norm(matrix_of_composition(phi, d))


def homogeneous_block_norm(A, m: int) -> float:
    """`C_A`の次数`m`の斉次ブロックの作用素ノルムを返します。`‖A‖^m`と一致します。"""
    A = as_matrix(A, "A")
    phi = AffineMap.linear(A)
    basis = enumerate_basis(phi.dim, m)
    block = degree_slice(basis, m)
    return spectral_norm(matrix_of_composition(phi, m)[block, block])


def _monomial_values(basis: TruncatedBasis, z: np.ndarray) -> np.ndarray:
    # z^αの値をまとめて計算する。
    powers = np.ones((basis.n, basis.d + 1), dtype=complex)
    for k in range(1, basis.d + 1):
        powers[:, k] = powers[:, k - 1] * z
    values = np.ones(len(basis), dtype=complex)
    for i in range(basis.n):
        values *= powers[i, basis.exponents[:, i]]
    return values


def _point(basis: TruncatedBasis, z) -> np.ndarray:
    z = as_vector(z, "z")
    if z.shape[0] != basis.n:
        raise DimensionError(f"point has dimension {z.shape[0]}, basis has {basis.n}")
    return z


def evaluate_poly(f: PolyCoeffs, z) -> complex:
    return complex(_monomial_values(f.basis, _point(f.basis, z)) @ f.coeffs)


def kernel_coeffs(w, basis: TruncatedBasis) -> PolyCoeffs:
    """`K_w`を次数`d`で打ち切ったものの係数`conj(w)^α/α!`を返します。"""
    w = _point(basis, w)
    return PolyCoeffs(basis, _monomial_values(basis, w.conj()) / basis.factorials())


def reproducing_check(w, f: PolyCoeffs) -> Tuple[complex, complex]:
    """`<f, K_w>`と`f(w)`を返します。次数`d`以下の多項式では丸め誤差を除いて一致します。

    Examples
    --------
    >>> basis = enumerate_basis(2, 2)
    >>> reproducing_check([1, 1j], PolyCoeffs.monomial(basis, (1, 1)))
    (1j, 1j)"""
    return poly_inner(f, kernel_coeffs(w, f.basis)), evaluate_poly(f, w)


def _orthonormal_kernel(basis: TruncatedBasis, z: np.ndarray) -> np.ndarray:
    # 正規直交基底でのK_zの座標conj(z^α)/√α!です。
    return _monomial_values(basis, z).conj() / np.sqrt(basis.factorials())


def adjoint_kernel_residual(phi: AffineMap, z, d: int) -> float:
    """`‖M* k_z - k_{φ(z)}‖`を返します。

    Notes
    -----
    `b = 0`の時は`C_A`が各次数を保つので丸め誤差を除いて0になります。
    `b ≠ 0`の時は打ち切りの影響が残るので、値は報告のためだけに使います。"""
    basis = enumerate_basis(phi.dim, d)
    z = _point(basis, z)
    image = apply_map(phi, z)
    matrix = matrix_of_composition(phi, d)
    residual = matrix.conj().T @ _orthonormal_kernel(basis, z) \
        - _orthonormal_kernel(basis, image)
    return float(np.linalg.norm(residual))


def gaussian_decay(f: PolyCoeffs, direction, radii: Sequence[float]) -> List[float]:
    """`|f(rζ)|·exp(-r²/2)`を各半径で計算します。`ζ`は`direction`を正規化したものです。"""
    direction = _point(f.basis, direction)
    length = float(np.linalg.norm(direction))
    if length == 0:
        raise InputError("direction must be nonzero")
    unit = direction / length
    return [abs(evaluate_poly(f, r * unit)) * math.exp(-r * r / 2) for r in radii]


def decay_radius(degree: int) -> float:
    """`r^k·exp(-r²/2)`が全ての`k <= degree`で減少し始める半径です。"""
    return math.sqrt(max(degree, 0))
