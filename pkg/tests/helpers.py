# テストで使う乱数の行列などを作る関数です。

import numpy as np


def random_complex(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_contraction(rng: np.random.Generator, n: int, norm: float) -> np.ndarray:
    """作用素ノルムがちょうど`norm`の行列です。"""
    M = random_complex(rng, n, n)
    return M * (norm / np.linalg.norm(M, 2))


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    M = random_complex(rng, n, n)
    return (M + M.conj().T) / 2
