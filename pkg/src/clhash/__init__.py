"""CLHASH: a 64-bit almost-XOR-universal hash family on carry-less multiplication."""

from .clbits import DivModResult, cl_divmod, clmul64, clmul128, degree, is_irreducible
from .core import (
    ClKey,
    HashConfig,
    StreamState,
    clhash,
    clnh,
    derive_key,
    finalize_mix,
    lazy_reduce127,
    load_key,
    poly_step,
    save_key,
    stream_finish,
    stream_init,
    stream_update,
)
from .gf64 import MEMO_TABLE, gf64_mul, gf64_pow, reduce128

__version__ = "0.1.0"

__all__ = [
    "ClKey", "DivModResult", "HashConfig", "MEMO_TABLE", "StreamState",
    "cl_divmod", "clhash", "clmul128", "clmul64", "clnh", "degree", "derive_key",
    "finalize_mix", "gf64_mul", "gf64_pow", "is_irreducible", "lazy_reduce127",
    "load_key", "poly_step", "reduce128", "save_key", "stream_finish",
    "stream_init", "stream_update",
]
