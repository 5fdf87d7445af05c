# focklib - Numerics

from typing import NamedTuple, Optional, Tuple

from dataclasses import dataclass
from scipy import linalg
import numpy as np

from .errors import DimensionError, InputError


EPS = float(np.finfo(float).eps)
RANK_SCALE = 1e3


@dataclass(frozen=True)
class Tolerances:
    """数値計算で使う許容誤差をまとめたものです。
    全て相対値で、0より大きく1より小さい必要があります。

    Parameters
    ----------
    rank_tol : Optional[float], default None
        特異値を0とみなす相対的な閾値です。
        Noneの場合は`dim * machine-epsilon * 1e3`が使われます。
    psd_tol : float, default 1e-10
        半正定値判定で許す負の固有値の大きさ(`‖G‖`に対する相対値)です。
    boundary_tol : float, default 1e-9
        `‖A‖ = 1`とみなす幅です。

    Raises
    ------
    InputError : どれかの値が範囲外の場合に発生します。"""

    rank_tol: Optional[float] = None
    psd_tol: float = 1e-10
    boundary_tol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_tol", "psd_tol", "boundary_tol"):
            value = getattr(self, name)
            if value is None and name == "rank_tol":
                continue
            if not isinstance(value, (int, float)) or not 0 < value < 1:
                raise InputError(f"{name} must satisfy 0 < {name} < 1, got {value!r}")

    def rank_cutoff(self, dim: int) -> float:
        """次元`dim`の行列に使う相対的なランク判定の閾値を返します。"""
        if self.rank_tol is not None:
            return self.rank_tol
        return max(dim, 1) * EPS * RANK_SCALE

    def to_dict(self) -> dict:
        return {"rank_tol": self.rank_tol, "psd_tol": self.psd_tol,
                "boundary_tol": self.boundary_tol}


DEFAULT_TOLERANCES = Tolerances()


class LeastSquares(NamedTuple):
    x: np.ndarray
    residual: float


def as_matrix(value, name: str = "matrix") -> np.ndarray:
    """値を複素数の二次元配列(ComplexMatrix)に変換します。
    実数は複素数に昇格されます。

    Raises
    ------
    InputError : 二次元でない場合や有限でない値を含む場合に発生します。"""
    try:
        matrix = np.array(value, dtype=complex)
    except (TypeError, ValueError) as e:
        raise InputError(f"{name}: cannot be read as a complex matrix ({e})")
    if matrix.ndim != 2:
        raise DimensionError(f"{name}: expected a 2-D matrix, got ndim={matrix.ndim}")
    if not np.all(np.isfinite(matrix)):
        raise InputError(f"{name}: entries must be finite")
    matrix.setflags(write=False)
    return matrix


def as_vector(value, name: str = "vector") -> np.ndarray:
    """値を複素数の一次元配列(ComplexVector)に変換します。"""
    try:
        vector = np.array(value, dtype=complex)
    except (TypeError, ValueError) as e:
        raise InputError(f"{name}: cannot be read as a complex vector ({e})")
    if vector.ndim != 1:
        raise DimensionError(f"{name}: expected a 1-D vector, got ndim={vector.ndim}")
    if not np.all(np.isfinite(vector)):
        raise InputError(f"{name}: entries must be finite")
    vector.setflags(write=False)
    return vector


def _require_square(matrix: np.ndarray, name: str) -> None:
    if matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"{name}: expected a square matrix, got shape {matrix.shape}")


def hermitian_eig(H, tol: Tolerances = DEFAULT_TOLERANCES) -> Tuple[np.ndarray, np.ndarray]:
    """エルミート行列を固有値分解します。

    Notes
    -----
    分解の前に`(H + H*) / 2`で対称化して丸め誤差による非対称性を取り除きます。

    Parameters
    ----------
    H : ComplexMatrix
        エルミート行列です。
    tol : Tolerances
        エルミート性の判定に`rank_tol`を使います。

    Returns
    -------
    eigenvalues : np.ndarray
        昇順に並んだ実数の固有値です。
    eigenvectors : np.ndarray
        列が固有ベクトルのユニタリ行列です。`H = Q Λ Q*`となります。

    Raises
    ------
    DimensionError : 正方行列でない場合に発生します。
    InputError : 有限でない値を含む場合やエルミートでない場合に発生します。"""
    H = as_matrix(H, "H")
    _require_square(H, "H")
    if H.size == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex)
    scale = spectral_norm(H)
    if spectral_norm(H - H.conj().T) > tol.rank_cutoff(H.shape[0]) * max(scale, 1.0):
        raise InputError("H: matrix is not Hermitian")
    eigenvalues, eigenvectors = linalg.eigh((H + H.conj().T) / 2)
    return eigenvalues, eigenvectors


def svd(M) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """特異値分解`M = U Σ V*`をします。

    Returns
    -------
    U : np.ndarray
    sigma : np.ndarray
        降順の非負の特異値です。
    V : np.ndarray
        `V*`ではなく`V`を返すので注意してください。"""
    M = as_matrix(M, "M")
    if M.size == 0:
        return (np.eye(M.shape[0], dtype=complex), np.zeros(0),
                np.eye(M.shape[1], dtype=complex))
    U, sigma, Vh = linalg.svd(M, full_matrices=True)
    return U, sigma, Vh.conj().T


def spectral_norm(M) -> float:
    """作用素ノルム(最大特異値)を返します。"""
    M = as_matrix(M, "M")
    if M.size == 0:
        return 0.0
    return float(linalg.svd(M, compute_uv=False)[0])


def min_norm_solve(M, y, tol: Tolerances = DEFAULT_TOLERANCES) -> LeastSquares:
    """最小ノルムの最小二乗解を求めます。
    擬似逆行列をyにかけたもので、`rank_tol * σ_max`未満の特異値は0とみなします。

    Parameters
    ----------
    M : ComplexMatrix
    y : ComplexVector
        `M.rows`と同じ次元である必要があります。
    tol : Tolerances

    Returns
    -------
    LeastSquares
        解`x`と残差`‖Mx - y‖`です。

    Raises
    ------
    DimensionError : 次元が合わない場合に発生します。

    Examples
    --------
    >>> min_norm_solve([[1, 1], [1, 1]], [2, 2]).x
    array([1.+0.j, 1.+0.j])"""
    M, y = as_matrix(M, "M"), as_vector(y, "y")
    if M.shape[0] != y.shape[0]:
        raise DimensionError(
            f"M has {M.shape[0]} rows but y has dimension {y.shape[0]}")
    x = np.zeros(M.shape[1], dtype=complex)
    if M.size:
        U, sigma, Vh = linalg.svd(M, full_matrices=False)
        if sigma[0] > 0:
            # 小さい特異値は捨てる。捨てた方向の成分は解に入らない。
            keep = sigma > tol.rank_cutoff(max(M.shape)) * sigma[0]
            coefficients = (U[:, keep].conj().T @ y) / sigma[keep]
            x = Vh[keep].conj().T @ coefficients
    residual = float(np.linalg.norm(M @ x - y))
    return LeastSquares(x, residual)
