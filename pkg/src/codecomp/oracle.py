"""Ground-truth error rates used to check comparison verdicts.

Discrete channels are handled exactly by enumerating every received word.
The AWGN case uses Monte-Carlo maximum-likelihood decoding.  Neither path
touches the transfer-matrix or comparison code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _random
from .codes import BlockCode, RealCodeMatrix, bit_of_messages
from .discrete import Prior, SymbolChannel
from .errors import GuardExceeded

MAX_ENUMERATION = 1 << 22
_BLOCK = 1 << 15


@dataclass(frozen=True)
class ErrorRateReport:
    value: float
    std_error: float
    trials_or_terms: int
    loss: str
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.std_error,
            "trials": self.trials_or_terms,
            "loss": self.loss,
            "seed": self.seed,
        }


# --- AWGN -------------------------------------------------------------------

def _entries(A) -> tuple[np.ndarray, float]:
    if isinstance(A, RealCodeMatrix):
        return A.entries, A.sigma
    a = np.asarray(A, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    return a, 1.0


def ml_decode_awgn(A, z) -> int:
    """Nearest codeword to ``z``; ties go to the lowest message index."""
    a, _ = _entries(A)
    z = np.asarray(z, dtype=np.float64).ravel()
    if z.size != a.shape[1]:
        raise ValueError(f"received vector has length {z.size}, codewords have {a.shape[1]}")
    return int(np.argmin(np.sum((a - z) ** 2, axis=1)))


def packet_error_mc(A, message: int, trials: int, seed: int | None = None,
                    sigma: float | None = None, workers: int = 1) -> ErrorRateReport:
    """Monte-Carlo block error rate of ML decoding when ``message`` is sent.

    The noise level is ``A.sigma`` for a :class:`RealCodeMatrix`, otherwise
    ``sigma`` (default 1).
    """
    a, s = _entries(A)
    if sigma is not None:
        s = float(sigma)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= message < a.shape[0]:
        raise ValueError(f"message {message} outside 0..{a.shape[0] - 1}")
    if seed is None:
        seed = _random.fresh_seed()
    if a.shape[0] == 1:
        return ErrorRateReport(0.0, 0.0, trials, "block", seed)
    x = a[message]
    half_energy = 0.5 * np.einsum("ij,ij->i", a, a)

    def count_errors(gen, count):
        z = x + s * _random.box_muller(gen, (count, a.shape[1]))
        # argmin ||z - a_i||^2 == argmin (||a_i||^2 / 2 - z . a_i)
        decoded = np.argmin(half_energy - z @ a.T, axis=1)
        return int(np.count_nonzero(decoded != message))

    errors = sum(_random.map_chunks(count_errors, seed, trials, workers))
    p = errors / trials
    return ErrorRateReport(p, math.sqrt(p * (1.0 - p) / trials), trials, "block", seed)


# --- discrete channels -----------------------------------------------------

def _check_enumeration(code: BlockCode, channel: SymbolChannel, prior: Prior) -> int:
    if len(prior.p) != code.M:
        raise ValueError(f"prior has {len(prior.p)} entries, code has {code.M} messages")
    if code.l > channel.l:
        raise ValueError("code alphabet larger than channel input alphabet")
    size = channel.w ** code.n
    if size > MAX_ENUMERATION:
        raise GuardExceeded(f"{channel.w}**{code.n} received words exceed the 2**22 enumeration guard")
    return size


def _joint_blocks(code: BlockCode, channel: SymbolChannel, prior: Prior):
    """Yield ``p(theta) P(z | x_theta)`` for consecutive blocks of received words."""
    size = _check_enumeration(code, channel, prior)
    w, n = channel.w, code.n
    place = w ** np.arange(n - 1, -1, -1, dtype=np.int64)
    C = channel.matrix
    for start in range(0, size, _BLOCK):
        z = np.arange(start, min(start + _BLOCK, size), dtype=np.int64)
        digits = (z[:, None] // place[None, :]) % w
        like = np.ones((code.M, z.size))
        for s in range(n):
            like *= C[code.table[:, s]][:, digits[:, s]]
        yield start, prior.p[:, None] * like


def bit_decision_masses(code: BlockCode, channel: SymbolChannel, prior: Prior, r: int):
    """Joint masses ``P(z, b_r = 0)`` and ``P(z, b_r = 1)`` for every received word."""
    bits = bit_of_messages(code.k, r).astype(bool)
    m0, m1 = [], []
    for _, joint in _joint_blocks(code, channel, prior):
        m0.append(joint[~bits].sum(axis=0))
        m1.append(joint[bits].sum(axis=0))
    return np.concatenate(m0), np.concatenate(m1)


def exact_bit_error_bsc(code: BlockCode, channel: SymbolChannel, prior: Prior | None,
                        r: int) -> ErrorRateReport:
    """Exact error probability of the MAP decision on bit ``r``.

    Posterior ties decide 0.  Works for any discrete memoryless channel.
    """
    prior = Prior.uniform(code.k) if prior is None else prior
    bits = bit_of_messages(code.k, r).astype(bool)
    parts = []
    terms = 0
    for _, joint in _joint_blocks(code, channel, prior):
        m0 = joint[~bits].sum(axis=0)
        m1 = joint[bits].sum(axis=0)
        parts.append(math.fsum(np.where(m1 > m0, m0, m1)))
        terms += joint.shape[1]
    return ErrorRateReport(math.fsum(parts), 0.0, terms, f"bit({r})")


def bit_error_of_rule(code: BlockCode, channel: SymbolChannel, prior: Prior | None,
                      r: int, rule) -> float:
    """Exact bit-``r`` error of a deterministic rule ``z -> rule[z]``."""
    prior = Prior.uniform(code.k) if prior is None else prior
    m0, m1 = bit_decision_masses(code, channel, prior, r)
    rule = np.asarray(rule).astype(bool)
    return math.fsum(np.where(rule, m0, m1))


def exact_block_error_bsc(code: BlockCode, channel: SymbolChannel,
                          prior: Prior | None = None) -> ErrorRateReport:
    """Exact block error probability of MAP decoding over messages."""
    prior = Prior.uniform(code.k) if prior is None else prior
    parts = []
    terms = 0
    for _, joint in _joint_blocks(code, channel, prior):
        best = np.argmax(joint, axis=0)  # lowest index on ties
        missed = joint.copy()
        missed[best, np.arange(joint.shape[1])] = 0.0
        parts.append(math.fsum(missed.sum(axis=0)))
        terms += joint.shape[1]
    return ErrorRateReport(math.fsum(parts), 0.0, terms, "block")
