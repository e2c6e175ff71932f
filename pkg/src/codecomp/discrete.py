"""Discrete channels, transfer matrices and per-bit dichotomies.

Received words are indexed in base ``w`` with the first symbol most
significant.  That matches the codeword indexing in :mod:`codecomp.codes`,
so a noiseless channel maps each message onto its codeword's index.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from os import PathLike
from typing import Mapping, TextIO

import numpy as np

from .codes import BlockCode, StochasticCodeMatrix, bit_of_messages, stochastic_code_matrix
from .errors import GuardExceeded

MAX_ROW_ENTRIES = 1 << 26
MAX_TRANSFER_ENTRIES = 1 << 27
MAX_EXPLICIT_N = 4
FLUSH_BELOW = 1e-300


class ChannelSpecError(ValueError):
    pass


class DegenerateDichotomy(ValueError):
    """One half of the message set carries no prior mass."""


def _check_stochastic(m: np.ndarray, what: str, atol: float) -> None:
    if m.ndim != 2:
        raise ValueError(f"{what} must be 2-D")
    if not np.all(np.isfinite(m)) or np.any(m < 0):
        raise ValueError(f"{what} must have finite non-negative entries")
    bad = np.abs(m.sum(axis=1) - 1.0) > atol
    if np.any(bad):
        raise ValueError(f"{what} rows {np.nonzero(bad)[0].tolist()} do not sum to 1")


@dataclass(frozen=True, eq=False)
class SymbolChannel:
    """Memoryless channel: ``matrix[a, b] = P(receive b | send a)``."""

    matrix: np.ndarray
    tag: str = "matrix"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        _check_stochastic(m, "channel matrix", 1e-12)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def l(self) -> int:
        return self.matrix.shape[0]

    @property
    def w(self) -> int:
        return self.matrix.shape[1]


def bsc(p: float) -> SymbolChannel:
    """Binary symmetric channel with crossover probability ``p``."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ChannelSpecError(f"crossover probability {p} outside [0, 1]")
    return SymbolChannel(np.array([[1.0 - p, p], [p, 1.0 - p]]), tag=f"bsc({p:g})")


def build_channel(spec) -> SymbolChannel:
    """Channel from ``"bsc:0.1"``, ``{"type": "bsc", "p": 0.1}`` or
    ``{"type": "matrix", "rows": [[...], ...]}``."""
    if isinstance(spec, SymbolChannel):
        return spec
    if isinstance(spec, str):
        kind, _, arg = spec.partition(":")
        if kind.strip().lower() != "bsc":
            raise ChannelSpecError(f"unknown channel {spec!r}; use bsc:p or a JSON file")
        try:
            return bsc(float(arg))
        except ValueError as exc:
            raise ChannelSpecError(f"bad channel spec {spec!r}: {exc}") from None
    if isinstance(spec, Mapping):
        kind = str(spec.get("type", "")).lower()
        if kind == "bsc":
            return bsc(spec["p"])
        if kind == "matrix":
            try:
                return SymbolChannel(np.array(spec["rows"], dtype=np.float64),
                                     tag=spec.get("name", "matrix"))
            except (KeyError, ValueError) as exc:
                raise ChannelSpecError(f"bad matrix channel: {exc}") from None
        raise ChannelSpecError(f"unknown channel type {kind!r}")
    raise ChannelSpecError(f"cannot build a channel from {type(spec).__name__}")


def load_channel_file(path: str | PathLike) -> SymbolChannel:
    with open(path) as fh:
        return build_channel(json.load(fh))


def likelihood_row(codeword, channel: SymbolChannel, n: int | None = None) -> np.ndarray:
    """Distribution of the received word for one transmitted codeword.

    Entry ``z`` is the product over symbols of ``channel[x_s, z_s]``.
    """
    x = np.asarray(codeword, dtype=np.int64).ravel()
    if n is not None and x.size != n:
        raise ValueError(f"codeword has length {x.size}, expected {n}")
    if channel.w ** x.size > MAX_ROW_ENTRIES:
        raise GuardExceeded(f"w**n = {channel.w}**{x.size} exceeds 2**26")
    if x.size and (x.min() < 0 or x.max() >= channel.l):
        raise ValueError("codeword symbols outside the channel input alphabet")
    row = np.ones(1)
    for s in x:
        row = np.outer(row, channel.matrix[s]).ravel()
    row[row < FLUSH_BELOW] = 0.0
    return row


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Row ``theta`` is the received-word distribution given message ``theta``."""

    rows: np.ndarray
    channel_tag: str = ""
    code_tag: str = ""

    def __post_init__(self):
        r = np.asarray(self.rows, dtype=np.float64)
        _check_stochastic(r, "transfer matrix", 1e-9 * max(1, r.shape[-1]) if r.ndim == 2 else 0)
        r.setflags(write=False)
        object.__setattr__(self, "rows", r)

    @property
    def n_messages(self) -> int:
        return self.rows.shape[0]

    @property
    def k(self) -> int:
        return self.n_messages.bit_length() - 1


def transfer_matrix(code, channel) -> TransferMatrix:
    """Transfer matrix of a code over a channel.

    ``code`` is a :class:`BlockCode` or :class:`StochasticCodeMatrix`.
    ``channel`` is a memoryless :class:`SymbolChannel` or an explicit
    ``l**n x w**n`` row-stochastic array (``n <= 4``) for channels with
    memory.  Code rows are unit vectors, so the product reduces to row
    selection.
    """
    code_tag = getattr(code, "name", "code")
    if isinstance(code, BlockCode):
        table = code.table
        scm = None
    elif isinstance(code, StochasticCodeMatrix):
        table = None
        scm = code
    else:
        raise TypeError("code must be a BlockCode or StochasticCodeMatrix")

    if isinstance(channel, SymbolChannel):
        if table is None:
            digits = scm.l ** np.arange(scm.n - 1, -1, -1)
            table = (scm.indices[:, None] // digits) % scm.l
        M, n = table.shape
        if table.size and table.max() >= channel.l:
            raise ValueError("code alphabet larger than channel input alphabet")
        width = channel.w ** n
        if width > MAX_ROW_ENTRIES or M * width > MAX_TRANSFER_ENTRIES:
            raise GuardExceeded(f"transfer matrix {M} x {channel.w}**{n} exceeds the memory guard")
        rows = np.ones((M, 1))
        for s in range(n):
            rows = (rows[:, :, None] * channel.matrix[table[:, s]][:, None, :]).reshape(M, -1)
        rows[rows < FLUSH_BELOW] = 0.0
        return TransferMatrix(rows, channel_tag=channel.tag, code_tag=code_tag)

    full = np.asarray(channel, dtype=np.float64)
    if scm is None:
        scm = stochastic_code_matrix(code)
    if scm.n > MAX_EXPLICIT_N:
        raise GuardExceeded(f"explicit channel matrices are limited to n <= {MAX_EXPLICIT_N}")
    if full.ndim != 2 or full.shape[0] != scm.n_columns:
        raise ValueError(
            f"explicit channel needs {scm.n_columns} rows, got shape {full.shape}"
        )
    _check_stochastic(full, "channel matrix", 1e-12)
    rows = full[scm.indices].copy()
    rows[rows < FLUSH_BELOW] = 0.0
    return TransferMatrix(rows, channel_tag="explicit", code_tag=code_tag)


@dataclass(frozen=True, eq=False)
class Prior:
    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=np.float64).ravel()
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("prior must be non-negative and finite")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"prior sums to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def uniform(cls, k: int) -> "Prior":
        return cls(np.full(1 << k, 1.0 / (1 << k)))

    @property
    def k(self) -> int:
        return len(self.p).bit_length() - 1


def build_prior(spec, k: int) -> Prior:
    """``None``/``"uniform"``, a probability list, or ``{"p": [...]}``."""
    if spec is None or spec == "uniform":
        return Prior.uniform(k)
    if isinstance(spec, Prior):
        prior = spec
    elif isinstance(spec, Mapping):
        prior = Prior(spec["p"])
    else:
        prior = Prior(spec)
    if len(prior.p) != 1 << k:
        raise ValueError(f"prior has {len(prior.p)} entries, code has {1 << k} messages")
    return prior


def load_prior_file(path: str | PathLike, k: int) -> Prior:
    with open(path) as fh:
        return build_prior(json.load(fh), k)


@dataclass(frozen=True, eq=False)
class Dichotomy:
    """Two conditional distributions over received words.

    ``rows[b]`` is the distribution of the received word given that the
    tracked bit equals ``b``; ``row_masses[b]`` is the prior probability of
    that event.
    """

    rows: np.ndarray
    row_masses: tuple[float, float] = (0.5, 0.5)
    bit_index: int | None = None

    def __post_init__(self):
        r = np.array(self.rows, dtype=np.float64)
        if r.ndim != 2 or r.shape[0] != 2:
            raise ValueError("a dichotomy has exactly two rows")
        _check_stochastic(r, "dichotomy", 1e-9 * max(1, r.shape[1]))
        if abs(sum(self.row_masses) - 1.0) > 1e-9:
            raise ValueError("row masses must sum to 1")
        r.setflags(write=False)
        object.__setattr__(self, "rows", r)
        object.__setattr__(self, "row_masses", tuple(float(m) for m in self.row_masses))

    @classmethod
    def from_raw(cls, raw, bit_index: int | None = None) -> "Dichotomy":
        """Normalize an unnormalized 2-row matrix, keeping the row masses."""
        raw = np.asarray(raw, dtype=np.float64)
        masses = raw.sum(axis=1)
        if np.any(masses <= 0):
            raise DegenerateDichotomy("a dichotomy row has zero mass")
        total = masses.sum()
        return cls(raw / masses[:, None], (masses[0] / total, masses[1] / total), bit_index)

    @property
    def n_columns(self) -> int:
        return self.rows.shape[1]

    def unnormalized(self) -> np.ndarray:
        return self.rows * np.asarray(self.row_masses)[:, None]


def equivalent_bit_dichotomy(T: TransferMatrix, prior: Prior, r: int) -> Dichotomy:
    """Per-bit equivalent experiment for bit ``r`` (1-based, ``b_1`` most significant)."""
    k = T.k
    if len(prior.p) != T.n_messages:
        raise ValueError(f"prior has {len(prior.p)} entries, transfer matrix has {T.n_messages} rows")
    bits = bit_of_messages(k, r)
    w0 = np.where(bits == 0, prior.p, 0.0)
    w1 = np.where(bits == 1, prior.p, 0.0)
    m0, m1 = float(w0.sum()), float(w1.sum())
    if m0 <= 0 or m1 <= 0:
        raise DegenerateDichotomy(f"bit {r}: prior puts no mass on one value")
    raw = np.vstack([w0 @ T.rows, w1 @ T.rows])
    rows = raw / np.array([[m0], [m1]])
    total = m0 + m1
    return Dichotomy(rows, (m0 / total, m1 / total), r)


def write_dichotomy_csv(D: Dichotomy, out: TextIO | str | PathLike) -> None:
    """CSV with columns ``column_index,row0,row1``."""
    if isinstance(out, (str, PathLike)):
        with open(out, "w", newline="") as fh:
            write_dichotomy_csv(D, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["column_index", "row0", "row1"])
    for j in range(D.n_columns):
        writer.writerow([j, repr(float(D.rows[0, j])), repr(float(D.rows[1, j]))])


def dichotomy_csv(D: Dichotomy) -> str:
    buf = io.StringIO()
    write_dichotomy_csv(D, buf)
    return buf.getvalue()
