"""Statistical checks: avalanche, TwoBytes collisions, low-bit universality.

Every check is deterministic for a given seed.  Collision gates are
one-sided: a run fails only when it sees more collisions than the
universality bound plus five Poisson standard deviations.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .core import DEFAULT_CONFIG, SHORT_THRESHOLD, ClKey, HashConfig, _as_words_array, clhash, derive_key

AVALANCHE_GATE = 0.03
POISSON_SIGMAS = 5.0
EPS_SHORT = 1.0  # times 2**-64, inputs of at most 1 kB
EPS_LONG = 2.004  # times 2**-64, longer inputs
TWOBYTES_LENGTHS = tuple(range(4, 21))


def _hw(hardware):
    return _kernels.HAVE_HW_CLMUL if hardware is None else bool(hardware)


def poisson_limit(expected: float, sigmas: float = POISSON_SIGMAS) -> float:
    return expected + sigmas * math.sqrt(expected)


@dataclass
class AvalancheReport:
    input_len: int
    trials: int
    bias: np.ndarray = field(repr=False)
    finalize: bool = False
    description: str = ""

    @property
    def worst_bias(self) -> float:
        return float(self.bias.max())

    @property
    def passed(self) -> bool:
        return self.worst_bias < AVALANCHE_GATE

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "input_len": self.input_len,
            "trials": self.trials,
            "finalize": self.finalize,
            "worst_bias": self.worst_bias,
            "gate": AVALANCHE_GATE,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass
class CollisionReport:
    description: str
    trials: int
    collisions: int
    truncation_bits: int
    bound: float
    limit: float

    @property
    def passed(self) -> bool:
        return self.collisions <= self.limit

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def avalanche_test(key: ClKey, input_len: int, trials: int, config: HashConfig = DEFAULT_CONFIG,
                   seed: int = 0, hardware: bool | None = None) -> AvalancheReport:
    """Flip each input bit of ``trials`` random inputs and tally output-bit flips.

    ``bias[j, i]`` is ``|P(output bit j flips | input bit i flipped) - 1/2|``.
    """
    if trials < 10_000:
        raise ValueError("avalanche_test needs at least 10**4 trials")
    if input_len < 1:
        raise ValueError("input_len must be positive")
    counts = _kernels.avalanche_counts(key.words, input_len, trials, np.uint64(seed),
                                       config.finalize, _hw(hardware))
    bias = np.abs(counts / trials - 0.5)
    return AvalancheReport(input_len, trials, bias, config.finalize,
                           f"avalanche {input_len} bytes, finalize={'on' if config.finalize else 'off'}")


def xor_delta_constancy(key: ClKey, samples: int, config: HashConfig = DEFAULT_CONFIG,
                        seed: int = 0, hardware: bool | None = None) -> np.ndarray:
    """For each single-bit delta ``d`` on 8-byte inputs, is ``h(x ^ d) ^ h(x)`` the same for all x?

    Returns a boolean array of length 64.  Raw CLHASH is linear on one
    word, so every entry is True; the finalizer breaks that.
    """
    xs = np.empty(samples, dtype=np.uint64)
    _kernels.random_words(np.uint64(seed), 0, samples, xs)
    hw = _hw(hardware)
    base = _kernels.hash_rows(xs.reshape(-1, 1), 8, key.words, config.finalize, hw)
    constant = np.empty(64, dtype=bool)
    for bit in range(64):
        flipped = (xs ^ np.uint64(1 << bit)).reshape(-1, 1)
        delta = _kernels.hash_rows(flipped, 8, key.words, config.finalize, hw) ^ base
        constant[bit] = bool(np.all(delta == delta[0]))
    return constant


def _sorted_collisions(hashes: np.ndarray) -> int:
    hashes.sort()
    return int(np.count_nonzero(hashes[1:] == hashes[:-1]))


def count_collisions(key: ClKey, messages, config: HashConfig = DEFAULT_CONFIG) -> int:
    """Number of 64-bit hash collisions among the distinct ``messages``.

    Repeated messages are the same input, so they are dropped first.
    """
    unique = {bytes(m) for m in messages}
    hashes = np.array([clhash(key, m, config) for m in unique], dtype=np.uint64)
    return _sorted_collisions(hashes)


def twobytes_test(key: ClKey, config: HashConfig = DEFAULT_CONFIG, lengths=TWOBYTES_LENGTHS,
                  hardware: bool | None = None) -> CollisionReport:
    """Hash every input of each length with at most two non-zero bytes; count full collisions."""
    lengths = np.asarray(list(lengths), dtype=np.int64)
    if lengths.size == 0 or lengths.min() < 1 or lengths.max() > 24:
        raise ValueError("TwoBytes lengths must lie in [1, 24]")
    total = _kernels.twobytes_count(int(n) for n in lengths)
    hashes = np.empty(total, dtype=np.uint64)
    written = _kernels.twobytes_hashes(key.words, lengths, config.finalize, _hw(hardware), hashes)
    assert written == total
    collisions = _sorted_collisions(hashes)
    del hashes
    # XOR-universal: each pair collides with probability at most 2**-64
    bound = total * (total - 1) / 2 * 2.0 ** -64
    return CollisionReport(
        f"TwoBytes lengths {int(lengths.min())}-{int(lengths.max())}, {total} inputs",
        total, collisions, 64, bound, 0.0,
    )


def lowbit_universality_test(s, s2, low_bits: int, key_trials: int, seed: int = 0,
                             hardware: bool | None = None) -> CollisionReport:
    """Count keys under which ``h(s)`` and ``h(s2)`` agree on their low ``low_bits`` bits.

    Truncating an eps-almost XOR-universal 64-bit hash to L' bits gives a
    ``2**(64 - L') * eps`` collision bound.
    """
    s, s2 = bytes(s), bytes(s2)
    if s == s2:
        raise ValueError("messages must differ")
    if not 8 <= low_bits <= 24:
        raise ValueError("low_bits must lie in [8, 24]")
    eps = EPS_SHORT if max(len(s), len(s2)) <= SHORT_THRESHOLD else EPS_LONG
    bound = eps * 2.0 ** -low_bits * key_trials
    sw, sn = _as_words_array(s)
    tw, tn = _as_words_array(s2)
    hits = _kernels.lowbit_collisions(sw, sn, tw, tn, low_bits, key_trials,
                                      np.uint64(seed), _hw(hardware))
    return CollisionReport(
        f"low {low_bits} bits, {len(s)} vs {len(s2)} bytes, eps={eps}/2^64",
        key_trials, int(hits), low_bits, bound, poisson_limit(bound),
    )


def trial_key(seed: int, index: int) -> ClKey:
    """The key used for trial ``index`` of :func:`lowbit_universality_test`."""
    return derive_key(int(_kernels.splitmix_at(np.uint64(seed), index)))


def random_message(length: int, seed: int) -> bytes:
    """Deterministic pseudo-random message of ``length`` bytes."""
    words = np.empty((length + 7) // 8, dtype=np.uint64)
    _kernels.random_words(np.uint64(seed), 0, words.size, words)
    return words.astype("<u8").tobytes()[:length]
