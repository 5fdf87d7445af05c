# focklib - Errors


class FockError(Exception):
    """focklibで発生する例外の基底クラスです。"""


class DimensionError(FockError):
    """行列やベクトルの次元が合わない時に発生します。"""


class InputError(FockError):
    """入力が不正な時(NaNやInfを含む、エルミートでないなど)に発生します。"""


class PreconditionError(FockError):
    """前提条件を満たしていない時に発生します。  
    例：`‖A‖ > 1`なのに`I - A*A`の平方根を求めようとした場合。"""


class UnboundedError(FockError):
    """有界でない合成作用素に対してノルムなどを求めようとした時に発生します。"""


class KernelRangeError(FockError):
    """`exp(<z,w>)`がオーバーフローする範囲の点を渡された時に発生します。"""


class ResourceError(FockError):
    """基底のサイズなどが大きすぎる時に発生します。"""


class InconclusiveError(FockError):
    """有限の計算では収束も発散も判定できなかった時に発生します。"""


class CrossCheckError(FockError):
    """二つの独立した計算結果が許容誤差を超えて食い違った時に発生します。  
    これが発生した場合は内部の数値計算を疑うべきです。"""
