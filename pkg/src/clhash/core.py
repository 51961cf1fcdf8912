"""The CLHASH family: keys, CLNH, the GF(2**127) polynomial layer, hashing.

Messages are read as little-endian 64-bit words.  Inputs of at most
1024 bytes go through a single CLNH call; longer inputs are split into
1024-byte blocks whose CLNH values are combined by Horner's rule with
the lazy reduction modulo ``x**128 + x**2 + x`` and then folded to 64
bits.  The byte length is always mixed in through ``length_key``.
"""

from __future__ import annotations

import dataclasses
import struct
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from .clbits import MASK64, MASK128, clmul64, clmul128
from .gf64 import reduce128

BLOCK_BYTES = 1024
BLOCK_WORDS = 128
SHORT_THRESHOLD = 1024
KEY_MAGIC = b"CLH1"
KEY_BYTES = 128 * 8 + 16 + 16 + 8

_GAMMA = 0x9E3779B97F4A7C15
POLY_KEY_MASK = (1 << 126) - 1


def splitmix64(state: int):
    """Yield the SplitMix64 stream for ``state``."""
    while True:
        state = (state + _GAMMA) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        yield z ^ (z >> 31)


@dataclass(frozen=True)
class ClKey:
    """One member of the hash family (1064 bytes of key material)."""

    block_keys: tuple[int, ...]
    poly_key: int
    final_key: int
    length_key: int

    def __post_init__(self):
        if len(self.block_keys) != BLOCK_WORDS:
            raise ValueError(f"need {BLOCK_WORDS} block keys, got {len(self.block_keys)}")
        if any(not 0 <= k <= MASK64 for k in self.block_keys):
            raise ValueError("block keys must be 64-bit")
        if not 0 <= self.poly_key <= POLY_KEY_MASK:
            raise ValueError("poly_key must fit in 126 bits")
        if not 0 <= self.final_key <= MASK128:
            raise ValueError("final_key must fit in 128 bits")
        if not 0 <= self.length_key <= MASK64:
            raise ValueError("length_key must be 64-bit")

    @classmethod
    def zero(cls) -> ClKey:
        return cls((0,) * BLOCK_WORDS, 0, 0, 0)

    @cached_property
    def words(self) -> np.ndarray:
        """Flat ``uint64[133]`` layout consumed by the compiled kernels."""
        return np.array(
            [*self.block_keys,
             self.poly_key & MASK64, self.poly_key >> 64,
             self.final_key & MASK64, self.final_key >> 64,
             self.length_key],
            dtype=np.uint64,
        )

    def to_bytes(self) -> bytes:
        return (
            KEY_MAGIC
            + struct.pack("<128Q", *self.block_keys)
            + self.poly_key.to_bytes(16, "little")
            + self.final_key.to_bytes(16, "little")
            + self.length_key.to_bytes(8, "little")
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> ClKey:
        if len(data) != len(KEY_MAGIC) + KEY_BYTES:
            raise ValueError(f"key file must be {len(KEY_MAGIC) + KEY_BYTES} bytes, got {len(data)}")
        if data[:4] != KEY_MAGIC:
            raise ValueError("bad key file magic")
        body = data[4:]
        block_keys = struct.unpack_from("<128Q", body)
        poly = int.from_bytes(body[1024:1040], "little")
        if poly >> 126:
            raise ValueError("poly_key has its top two bits set")
        return cls(
            block_keys,
            poly,
            int.from_bytes(body[1040:1056], "little"),
            int.from_bytes(body[1056:1064], "little"),
        )


def derive_key(seed: int) -> ClKey:
    """Expand a 64-bit seed into a full key with SplitMix64."""
    stream = splitmix64(seed & MASK64)
    block_keys = tuple(next(stream) for _ in range(BLOCK_WORDS))
    poly = next(stream) | (next(stream) << 64)
    final = next(stream) | (next(stream) << 64)
    return ClKey(block_keys, poly & POLY_KEY_MASK, final, next(stream))


def load_key(path) -> ClKey:
    return ClKey.from_bytes(Path(path).read_bytes())


def save_key(key: ClKey, path) -> None:
    Path(path).write_bytes(key.to_bytes())


@dataclass(frozen=True)
class HashConfig:
    finalize: bool = False
    short_threshold: int = SHORT_THRESHOLD

    def __post_init__(self):
        if self.short_threshold != SHORT_THRESHOLD:
            raise ValueError("short_threshold is fixed at 1024 bytes")


DEFAULT_CONFIG = HashConfig()


def bytes_to_words(data: bytes) -> list[int]:
    """Little-endian 64-bit words, the last one zero-padded."""
    pad = -len(data) % 8
    if pad:
        data = bytes(data) + bytes(pad)
    return list(struct.unpack(f"<{len(data) // 8}Q", data))


def clnh(words: Sequence[int], keys: Sequence[int]) -> int:
    """XOR of ``(w[2i] ^ k[2i]) * (w[2i+1] ^ k[2i+1])`` over word pairs.

    An odd number of words is padded with one zero word.
    """
    n = len(words)
    if n > BLOCK_WORDS:
        raise ValueError(f"CLNH takes at most {BLOCK_WORDS} words, got {n}")
    acc = 0
    for i in range(0, n - 1, 2):
        acc ^= clmul64(words[i] ^ keys[i], words[i + 1] ^ keys[i + 1])
    if n % 2:
        acc ^= clmul64(words[n - 1] ^ keys[n - 1], keys[n])
    return acc


def lazy_reduce127(x: int) -> int:
    """Reduce modulo ``x**128 + x**2 + x`` using its sparse form.

    The result is congruent to ``x`` modulo ``x**127 + x + 1``.  It fits in
    128 bits whenever ``degree(x) <= 253``, which holds for every product
    formed inside the hash (the polynomial key has degree at most 125).
    """
    hi = x >> 128
    return (x & MASK128) ^ (hi << 2) ^ (hi << 1)


def poly_step(acc: int, block_hash: int, poly_key: int) -> int:
    return lazy_reduce127(clmul128(poly_key, acc)) ^ block_hash


def _final_fold(acc: int, key: ClKey, nbytes: int) -> int:
    o1, o2 = acc & MASK64, acc >> 64
    k1, k2 = key.final_key & MASK64, key.final_key >> 64
    return reduce128(clmul64(o1 ^ k1, o2 ^ k2) ^ clmul64(key.length_key, nbytes))


def finalize_mix(x: int) -> int:
    """Murmur-style 64-bit finalizer (a bijection)."""
    x ^= x >> 33
    x = (x * 18397679294719823053) & MASK64
    x ^= x >> 33
    x = (x * 14181476777654086739) & MASK64
    x ^= x >> 33
    return x


_FMIX1_INV = pow(18397679294719823053, -1, 1 << 64)
_FMIX2_INV = pow(14181476777654086739, -1, 1 << 64)


def _unxorshift33(x: int) -> int:
    return x ^ (x >> 33)


def finalize_unmix(x: int) -> int:
    """Inverse of :func:`finalize_mix`."""
    x = _unxorshift33(x)
    x = (x * _FMIX2_INV) & MASK64
    x = _unxorshift33(x)
    x = (x * _FMIX1_INV) & MASK64
    return _unxorshift33(x)


def _as_words_array(message) -> tuple[np.ndarray, int]:
    data = bytes(message)
    n = len(data)
    pad = -n % 8
    if pad or n == 0:
        data += bytes(pad or 8)
    return np.frombuffer(data, dtype="<u8").astype(np.uint64), n


def clhash(key: ClKey, message, config: HashConfig = DEFAULT_CONFIG, *, hardware: bool | None = None) -> int:
    """Hash ``message`` (any bytes-like object) to a 64-bit integer.

    ``hardware`` picks the carry-less multiplier of the compiled kernel;
    ``None`` means PCLMULQDQ when the CPU has it.
    """
    hw = _kernels.HAVE_HW_CLMUL if hardware is None else bool(hardware)
    if hw and not _kernels.HAVE_HW_CLMUL:
        raise RuntimeError("hardware carry-less multiplication is not available")
    words, n = _as_words_array(message)
    return int(_kernels.hash_words(words, n, key.words, config.finalize, hw))


def clhash_py(key: ClKey, message, config: HashConfig = DEFAULT_CONFIG) -> int:
    """Pure-Python one-shot hash (same result as :func:`clhash`)."""
    return stream_finish(stream_update(stream_init(key, config), message))


@dataclass
class StreamState:
    """Incremental hasher state; feed bytes with :meth:`update`, then :meth:`finish`.

    The first 1024 bytes are held back until more data arrives, because
    a message of exactly 1024 bytes still takes the single-block path.
    """

    key: ClKey
    config: HashConfig = DEFAULT_CONFIG
    poly_acc: int = 0
    pending_block: bytearray = field(default_factory=bytearray)
    total_len: int = 0
    block_count: int = 0
    finished: bool = False

    def _absorb(self, block: bytes) -> None:
        a = clnh(bytes_to_words(block) + [0] * (BLOCK_WORDS - (len(block) + 7) // 8),
                 self.key.block_keys)
        if self.block_count == 0:
            self.poly_acc = a
        else:
            self.poly_acc = poly_step(self.poly_acc, a, self.key.poly_key)
        self.block_count += 1

    def update(self, data) -> StreamState:
        if self.finished:
            raise RuntimeError("stream already finished")
        data = memoryview(data).cast("B")
        self.total_len += len(data)
        pending = self.pending_block
        pos = 0
        while pos < len(data):
            # only complete a block once we know at least one more byte follows it
            if len(pending) == BLOCK_BYTES:
                self._absorb(bytes(pending))
                pending.clear()
            take = min(BLOCK_BYTES - len(pending), len(data) - pos)
            pending += data[pos:pos + take]
            pos += take
        return self

    def finish(self) -> int:
        if self.finished:
            raise RuntimeError("stream already finished")
        self.finished = True
        if self.block_count == 0:
            o = clnh(bytes_to_words(bytes(self.pending_block)), self.key.block_keys)
            h = reduce128(o ^ clmul64(self.key.length_key, self.total_len))
        else:
            self._absorb(bytes(self.pending_block))
            h = _final_fold(self.poly_acc, self.key, self.total_len)
        self.pending_block.clear()
        return finalize_mix(h) if self.config.finalize else h

    def copy(self) -> StreamState:
        return dataclasses.replace(self, pending_block=bytearray(self.pending_block))


def stream_init(key: ClKey, config: HashConfig = DEFAULT_CONFIG) -> StreamState:
    return StreamState(key, config)


def stream_update(state: StreamState, data) -> StreamState:
    return state.update(data)


def stream_finish(state: StreamState) -> int:
    return state.finish()
