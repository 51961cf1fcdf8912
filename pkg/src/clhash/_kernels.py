"""Compiled CLHASH kernels (numba).

Every kernel takes an ``hw`` flag selecting the carry-less multiplier:
``pclmulqdq`` through an LLVM intrinsic, or a branch-free shift-XOR loop.
When the host has no PCLMUL the hardware multiplier is aliased to the
portable one so nothing ever emits the instruction.

Keys are passed as a flat ``uint64[133]`` array: 128 block keys, the
polynomial key (lo, hi), the final key (lo, hi) and the length key.
"""

from __future__ import annotations

import os

import numpy as np
from llvmlite import binding as llvm_binding
from llvmlite import ir
from numba import njit, types
from numba.extending import intrinsic

KEY_WORDS = 133
POLY_LO, POLY_HI, FINAL_LO, FINAL_HI, LENGTH = 128, 129, 130, 131, 132
BLOCK_WORDS = 128
BLOCK_BYTES = 1024

_U = np.uint64
_0 = _U(0)
_1 = _U(1)
_27 = _U(27)
_MEMO = np.array([0, 27, 54, 45, 108, 119, 90, 65, 216, 195, 238, 245, 180, 175, 130, 153],
                 dtype=np.uint64)

_GAMMA = _U(0x9E3779B97F4A7C15)
_MIX1 = _U(0xBF58476D1CE4E5B9)
_MIX2 = _U(0x94D049BB133111EB)
_FMIX1 = _U(18397679294719823053)
_FMIX2 = _U(14181476777654086739)


def _host_has_pclmul() -> bool:
    if os.environ.get("CLHASH_PORTABLE"):
        return False
    try:
        return bool(llvm_binding.get_host_cpu_features().get("pclmul", False))
    except Exception:
        return False


HAVE_HW_CLMUL = _host_has_pclmul()


@intrinsic
def _pclmulqdq(typingctx, a, b):
    sig = types.UniTuple(types.uint64, 2)(types.uint64, types.uint64)

    def codegen(context, builder, signature, args):
        i32 = ir.IntType(32)
        v2 = ir.VectorType(ir.IntType(64), 2)
        fnty = ir.FunctionType(v2, [v2, v2, ir.IntType(8)])
        fn = builder.module.declare_intrinsic("llvm.x86.pclmulqdq", fnty=fnty)
        undef = ir.Constant(v2, None)
        va = builder.insert_element(undef, args[0], ir.Constant(i32, 0))
        vb = builder.insert_element(undef, args[1], ir.Constant(i32, 0))
        r = builder.call(fn, [va, vb, ir.Constant(ir.IntType(8), 0)])
        lo = builder.extract_element(r, ir.Constant(i32, 0))
        hi = builder.extract_element(r, ir.Constant(i32, 1))
        return context.make_tuple(builder, signature.return_type, [lo, hi])

    return sig, codegen


@intrinsic
def _readcyclecounter(typingctx):
    sig = types.uint64()

    def codegen(context, builder, signature, args):
        fnty = ir.FunctionType(ir.IntType(64), [])
        fn = builder.module.declare_intrinsic("llvm.readcyclecounter", fnty=fnty)
        return builder.call(fn, [])

    return sig, codegen


@njit(cache=True)
def clmul_soft(a, b):
    m = _0 - (b & _1)
    lo = a & m
    hi = _0
    for i in range(1, 64):
        s = _U(i)
        m = _0 - ((b >> s) & _1)
        lo ^= (a << s) & m
        hi ^= (a >> _U(64 - i)) & m
    return lo, hi


if HAVE_HW_CLMUL:
    @njit(cache=True)
    def clmul_hw(a, b):
        return _pclmulqdq(a, b)
else:
    clmul_hw = clmul_soft


@njit(cache=True)
def cycle_counter():
    return _readcyclecounter()


@njit(cache=True, inline="always")
def _clmul(a, b, hw):
    if hw:
        return clmul_hw(a, b)
    return clmul_soft(a, b)


@njit(cache=True)
def clmul_batch(a, b, hw):
    n = a.size
    lo = np.empty(n, dtype=np.uint64)
    hi = np.empty(n, dtype=np.uint64)
    for i in range(n):
        lo[i], hi[i] = _clmul(a[i], b[i], hw)
    return lo, hi


@njit(cache=True, inline="always")
def _reduce128(lo, hi, hw):
    zlo, zhi = _clmul(hi, _27, hw)
    return lo ^ zlo ^ _MEMO[zhi]


@njit(cache=True)
def reduce128_batch(lo, hi, hw):
    out = np.empty(lo.size, dtype=np.uint64)
    for i in range(lo.size):
        out[i] = _reduce128(lo[i], hi[i], hw)
    return out


@njit(cache=True, inline="always")
def _finalize(x):
    x ^= x >> _U(33)
    x *= _FMIX1
    x ^= x >> _U(33)
    x *= _FMIX2
    x ^= x >> _U(33)
    return x


@njit(cache=True)
def _clnh(words, start, present, npairs, key, hw):
    # words[start + j] for j >= present reads as zero
    lo = _0
    hi = _0
    for i in range(npairs):
        j = 2 * i
        w0 = words[start + j] if j < present else _0
        w1 = words[start + j + 1] if j + 1 < present else _0
        plo, phi = _clmul(w0 ^ key[j], w1 ^ key[j + 1], hw)
        lo ^= plo
        hi ^= phi
    return lo, hi


@njit(cache=True)
def _poly_step(acc_lo, acc_hi, a_lo, a_hi, k_lo, k_hi, hw):
    # 256-bit product k * acc, schoolbook over 64-bit halves
    p0, t1 = _clmul(k_lo, acc_lo, hw)
    m0, m1 = _clmul(k_lo, acc_hi, hw)
    n0, n1 = _clmul(k_hi, acc_lo, hw)
    t2, p3 = _clmul(k_hi, acc_hi, hw)
    p1 = t1 ^ m0 ^ n0
    p2 = t2 ^ m1 ^ n1
    # lazy reduction: low 128 bits ^ high * 4 ^ high * 2
    r_lo = p0 ^ (p2 << _U(2)) ^ (p2 << _1)
    r_hi = p1 ^ (p3 << _U(2)) ^ (p2 >> _U(62)) ^ (p3 << _1) ^ (p2 >> _U(63))
    return r_lo ^ a_lo, r_hi ^ a_hi


@njit(cache=True)
def hash_words(words, nbytes, key, finalize, hw):
    """CLHASH of ``nbytes`` bytes packed little-endian into ``words``."""
    nwords = (nbytes + 7) // 8
    if nbytes <= BLOCK_BYTES:
        olo, ohi = _clnh(words, 0, nwords, (nwords + 1) // 2, key, hw)
    else:
        nblocks = (nbytes + BLOCK_BYTES - 1) // BLOCK_BYTES
        olo, ohi = _clnh(words, 0, BLOCK_WORDS, BLOCK_WORDS // 2, key, hw)
        k_lo = key[POLY_LO]
        k_hi = key[POLY_HI]
        for b in range(1, nblocks):
            start = b * BLOCK_WORDS
            present = min(BLOCK_WORDS, nwords - start)
            a_lo, a_hi = _clnh(words, start, present, BLOCK_WORDS // 2, key, hw)
            olo, ohi = _poly_step(olo, ohi, a_lo, a_hi, k_lo, k_hi, hw)
        olo, ohi = _clmul(olo ^ key[FINAL_LO], ohi ^ key[FINAL_HI], hw)
    llo, lhi = _clmul(key[LENGTH], _U(nbytes), hw)
    h = _reduce128(olo ^ llo, ohi ^ lhi, hw)
    if finalize:
        h = _finalize(h)
    return h


@njit(cache=True)
def hash_rows(rows, nbytes, key, finalize, hw):
    """Hash each row of a 2-D word array; every message is ``nbytes`` long."""
    out = np.empty(rows.shape[0], dtype=np.uint64)
    for i in range(rows.shape[0]):
        out[i] = hash_words(rows[i], nbytes, key, finalize, hw)
    return out


@njit(cache=True)
def finalize_batch(x):
    out = np.empty(x.size, dtype=np.uint64)
    for i in range(x.size):
        out[i] = _finalize(x[i])
    return out


@njit(cache=True, inline="always")
def splitmix_at(seed, index):
    """Output number ``index`` (0-based) of the SplitMix64 stream seeded with ``seed``."""
    z = seed + _GAMMA * _U(index + 1)
    z = (z ^ (z >> _U(30))) * _MIX1
    z = (z ^ (z >> _U(27))) * _MIX2
    return z ^ (z >> _U(31))


@njit(cache=True)
def derive_key_into(seed, out):
    for i in range(KEY_WORDS):
        out[i] = splitmix_at(seed, i)
    out[POLY_HI] &= _U(0x3FFFFFFFFFFFFFFF)


@njit(cache=True)
def random_words(seed, first, count, out):
    for i in range(count):
        out[i] = splitmix_at(seed, first + i)


@njit(cache=True)
def avalanche_counts(key, nbytes, trials, seed, finalize, hw):
    """Per (output bit, input bit) count of flips over ``trials`` random inputs."""
    nwords = (nbytes + 7) // 8
    nbits = 8 * nbytes
    tail = nbytes % 8
    counts = np.zeros((64, nbits), dtype=np.int64)
    buf = np.empty(nwords, dtype=np.uint64)
    for t in range(trials):
        random_words(seed, t * nwords, nwords, buf)
        if tail:
            buf[nwords - 1] &= (_1 << _U(8 * tail)) - _1
        base = hash_words(buf, nbytes, key, finalize, hw)
        for bit in range(nbits):
            w = bit // 64
            mask = _1 << _U(bit % 64)
            buf[w] ^= mask
            d = hash_words(buf, nbytes, key, finalize, hw) ^ base
            buf[w] ^= mask
            for j in range(64):
                counts[j, bit] += (d >> _U(j)) & _1
    return counts


def twobytes_count(lengths) -> int:
    return sum(1 + 255 * n + (n * (n - 1) // 2) * 255 * 255 for n in lengths)


@njit(cache=True)
def twobytes_hashes(key, lengths, finalize, hw, out):
    """Hash every message with at most two non-zero bytes for each length."""
    k = 0
    buf = np.zeros(3, dtype=np.uint64)
    for n in lengths:
        buf[:] = _0
        out[k] = hash_words(buf, n, key, finalize, hw)
        k += 1
        for i in range(n):
            wi = i // 8
            si = _U(8 * (i % 8))
            for vi in range(1, 256):
                buf[wi] = _U(vi) << si
                out[k] = hash_words(buf, n, key, finalize, hw)
                k += 1
                for j in range(i + 1, n):
                    wj = j // 8
                    sj = _U(8 * (j % 8))
                    for vj in range(1, 256):
                        buf[wj] ^= _U(vj) << sj
                        out[k] = hash_words(buf, n, key, finalize, hw)
                        k += 1
                        buf[wj] ^= _U(vj) << sj
            buf[wi] = _0
    return k


@njit(cache=True)
def lowbit_collisions(s_words, s_len, t_words, t_len, low_bits, key_trials, seed, hw):
    """Count keys, drawn from ``seed``, whose hashes agree on the low ``low_bits`` bits."""
    mask = (_1 << _U(low_bits)) - _1
    key = np.empty(KEY_WORDS, dtype=np.uint64)
    hits = 0
    for i in range(key_trials):
        derive_key_into(splitmix_at(seed, i), key)
        hs = hash_words(s_words, s_len, key, False, hw)
        ht = hash_words(t_words, t_len, key, False, hw)
        if (hs ^ ht) & mask == _0:
            hits += 1
    return hits


@njit(cache=True)
def bench_clhash(words, nbytes, key, reps, hw):
    """Hash a resident buffer ``reps`` times; returns (elapsed TSC ticks, sink)."""
    sink = _0
    t0 = _readcyclecounter()
    for _ in range(reps):
        h = hash_words(words, nbytes, key, False, hw)
        # feed the result back so the loop body cannot be hoisted
        words[0] ^= h & _1
        sink ^= h
    t1 = _readcyclecounter()
    return t1 - t0, sink


@njit(cache=True)
def _xor_fold(words, nwords):
    acc = _0
    for i in range(nwords):
        acc ^= words[i]
    return acc


@njit(cache=True)
def bench_xor_fold(words, nbytes, key, reps, hw):
    nwords = (nbytes + 7) // 8
    sink = _0
    t0 = _readcyclecounter()
    for _ in range(reps):
        h = _xor_fold(words, nwords)
        words[0] ^= h & _1
        sink ^= h
    t1 = _readcyclecounter()
    return t1 - t0, sink
