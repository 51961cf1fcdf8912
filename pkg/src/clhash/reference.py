"""Straight-line CLHASH evaluator built only from the slow oracles.

No memo table, no sparse-modulus tricks: every product uses
:func:`clmul_bitloop` and every reduction is long division.  The block
polynomial is summed as ``a_1 k^(n-1) + ... + a_n`` with unreduced powers
and reduced once at the end, so it also cross-checks Horner evaluation.
"""

from __future__ import annotations

from .clbits import MASK64, cl_mod, clmul_bitloop
from .core import BLOCK_BYTES, BLOCK_WORDS, ClKey, finalize_mix

P64 = (1 << 64) | 27
P127 = (1 << 127) | 3
# (x^127 + x + 1) * x: the modulus whose remainder is the lazy reduction
P127_LAZY = clmul_bitloop(P127, 2)


def _clnh(words, keys):
    if len(words) % 2:
        words = words + [0]
    acc = 0
    for i in range(0, len(words), 2):
        acc ^= clmul_bitloop(words[i] ^ keys[i], words[i + 1] ^ keys[i + 1])
    return acc


def reference_clhash(key: ClKey, message: bytes, finalize: bool = False) -> int:
    n = len(message)
    words = [int.from_bytes(message[i:i + 8], "little") for i in range(0, n, 8)]
    length_term = clmul_bitloop(key.length_key, n)
    if n <= BLOCK_BYTES:
        h = cl_mod(_clnh(words, key.block_keys) ^ length_term, P64)
    else:
        nblocks = -(-n // BLOCK_BYTES)
        words += [0] * (nblocks * BLOCK_WORDS - len(words))
        blocks = [_clnh(words[i * BLOCK_WORDS:(i + 1) * BLOCK_WORDS], key.block_keys)
                  for i in range(nblocks)]
        total = 0
        power = 1
        for a in reversed(blocks):
            total ^= clmul_bitloop(a, power)
            power = clmul_bitloop(power, key.poly_key)
        o = cl_mod(total, P127_LAZY)
        k1, k2 = key.final_key & MASK64, key.final_key >> 64
        h = cl_mod(clmul_bitloop((o & MASK64) ^ k1, (o >> 64) ^ k2) ^ length_term, P64)
    return finalize_mix(h) if finalize else h
