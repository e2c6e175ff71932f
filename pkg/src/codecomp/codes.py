"""Block codes and their matrix representations.

A :class:`BlockCode` maps message indices ``0 .. 2**k - 1`` to codewords of
``n`` symbols.  Message index ``i`` is the k-bit vector ``b_1 ... b_k`` with
``b_1`` the most significant bit; codewords are indexed in base ``l`` with
the first symbol most significant.  These two conventions fix every
transfer matrix and dichotomy bit-for-bit.

The named families (Hamming, BCH) use a systematic (reduced row echelon)
generator, so the message bits sit in the leading positions.  This matters:
the Gram matrix ``A A'`` of a BPSK code matrix depends on how messages are
paired with codewords, not only on the codeword set.  Explicit generators
are kept exactly as given.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from os import PathLike
from typing import Mapping, Sequence

import numpy as np

from .errors import GuardExceeded
from .gf import field as gf_field
from .gf import gf2_rank, gf2_rref, poly_degree, poly_mul

NORMALIZATIONS = ("none", "unit-codeword-energy", "unit-symbol-energy")
BPSK = {0: 1.0, 1: -1.0}

# stochastic code matrices index l**n columns with int64
_MAX_INDEX_BITS = 40


class CodeSpecError(ValueError):
    """Raised for an unknown family or invalid code parameters."""


def message_bits(index: int, k: int) -> np.ndarray:
    """Bits ``b_1 .. b_k`` of message ``index`` (``b_1`` most significant)."""
    return np.array([(index >> (k - 1 - j)) & 1 for j in range(k)], dtype=np.uint8)


def all_message_bits(k: int) -> np.ndarray:
    """``2**k x k`` array whose row ``i`` is :func:`message_bits` of ``i``."""
    idx = np.arange(1 << k, dtype=np.int64)[:, None]
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)[None, :]
    return ((idx >> shifts) & 1).astype(np.uint8)


def bit_of_messages(k: int, r: int) -> np.ndarray:
    """Value of bit ``r`` (1-based) for every message index."""
    if not 1 <= r <= k:
        raise ValueError(f"bit index r={r} outside 1..{k}")
    return ((np.arange(1 << k) >> (k - r)) & 1).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class BlockCode:
    """An ``(M = 2**k, n)`` block code over the alphabet ``{0, .., l-1}``."""

    name: str
    n: int
    k: int
    l: int
    table: np.ndarray
    generator: np.ndarray | None = None
    generator_polynomial: int | None = field(default=None, repr=False)

    def __post_init__(self):
        table = np.asarray(self.table)
        if table.shape != (1 << self.k, self.n):
            raise CodeSpecError(
                f"codeword table has shape {table.shape}, expected {(1 << self.k, self.n)}"
            )
        if table.size and (table.min() < 0 or table.max() >= self.l):
            raise CodeSpecError(f"codeword symbols must lie in 0..{self.l - 1}")
        if len(np.unique(table, axis=0)) != table.shape[0]:
            raise CodeSpecError("codewords are not distinct")
        if self.generator is not None:
            if self.l != 2:
                raise CodeSpecError("generator-backed codes are binary")
            expect = all_message_bits(self.k).astype(np.int64) @ self.generator % 2
            if not np.array_equal(expect, table):
                raise CodeSpecError("table does not match generator")
        table = table.astype(np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        if self.generator is not None:
            gen = np.asarray(self.generator, dtype=np.uint8)
            gen.setflags(write=False)
            object.__setattr__(self, "generator", gen)

    @property
    def M(self) -> int:
        return 1 << self.k

    def codeword(self, index: int) -> np.ndarray:
        return self.table[index]

    def subcode(self, k: int) -> "BlockCode":
        """The code restricted to messages whose leading ``self.k - k`` bits are 0.

        These are the first ``2**k`` message indices, so the restriction keeps
        the codeword pairing of the parent for every surviving message.
        """
        if not 1 <= k <= self.k:
            raise CodeSpecError(f"subcode dimension {k} outside 1..{self.k}")
        gen = None if self.generator is None else self.generator[self.k - k:]
        return BlockCode(
            name=f"{self.name}[k={k}]",
            n=self.n,
            k=k,
            l=self.l,
            table=self.table[: 1 << k],
            generator=gen,
        )

    def minimum_distance(self) -> int:
        t = self.table
        best = self.n
        for i in range(len(t) - 1):
            d = np.count_nonzero(t[i + 1:] != t[i], axis=1).min()
            best = min(best, int(d))
        return best


def encode(code: BlockCode, message) -> np.ndarray:
    """Codeword for a k-bit message vector (or a message index)."""
    if isinstance(message, (int, np.integer)):
        if not 0 <= message < code.M:
            raise ValueError(f"message index {message} outside 0..{code.M - 1}")
        return code.table[int(message)].copy()
    bits = np.asarray(message, dtype=np.int64).ravel()
    if bits.size != code.k:
        raise ValueError(f"message has {bits.size} bits, code expects k={code.k}")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("message entries must be bits")
    if code.generator is not None:
        return bits @ code.generator.astype(np.int64) % 2
    index = int("".join(map(str, bits)), 2) if code.k else 0
    return code.table[index].copy()


# --- constructors ----------------------------------------------------------

def from_generator(generator, name: str = "explicit", systematic: bool = False) -> BlockCode:
    """Code spanned by the rows of ``generator``.

    With ``systematic=True`` the generator is first brought to reduced row
    echelon form, which changes the message-to-codeword pairing but not the
    codeword set.
    """
    g = np.asarray(generator, dtype=np.int64)
    if g.ndim != 2 or g.shape[0] == 0:
        raise CodeSpecError("generator must be a non-empty 2-D bit matrix")
    if np.any((g != 0) & (g != 1)):
        raise CodeSpecError("generator entries must be 0 or 1")
    if gf2_rank(g) < g.shape[0]:
        raise CodeSpecError("generator matrix is not of full row rank over GF(2)")
    if systematic:
        g = gf2_rref(g).astype(np.int64)
    k, n = g.shape
    table = all_message_bits(k).astype(np.int64) @ g % 2
    return BlockCode(name=name, n=n, k=k, l=2, table=table, generator=g)


def from_table(table, l: int = 2, name: str = "explicit") -> BlockCode:
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2:
        raise CodeSpecError("codeword table must be 2-D")
    m = t.shape[0]
    k = m.bit_length() - 1
    if m != 1 << k:
        raise CodeSpecError(f"table has {m} codewords, not a power of two")
    return BlockCode(name=name, n=t.shape[1], k=k, l=l, table=t)


def repetition(n: int) -> BlockCode:
    if n < 1:
        raise CodeSpecError("repetition length must be >= 1")
    return from_generator(np.ones((1, n), dtype=np.int64), name=f"rep({n})")


def single_parity(n: int) -> BlockCode:
    if n < 2:
        raise CodeSpecError("single-parity length must be >= 2")
    g = np.hstack([np.eye(n - 1, dtype=np.int64), np.ones((n - 1, 1), dtype=np.int64)])
    return from_generator(g, name=f"parity({n})")


def hamming(m: int) -> BlockCode:
    """The (2^m - 1, 2^m - 1 - m) Hamming code, systematic."""
    if m < 2:
        raise CodeSpecError("hamming requires m >= 2")
    n = (1 << m) - 1
    cols = [c for c in range(1, n + 1) if c & (c - 1)]  # non-unit columns of H
    k = len(cols)
    parity = np.array([[(c >> b) & 1 for b in range(m)] for c in cols], dtype=np.int64)
    g = np.hstack([np.eye(k, dtype=np.int64), parity])
    return from_generator(g, name=f"hamming({n},{k})", systematic=True)


def bch_generator_polynomial(m: int, t: int) -> int:
    """LCM of the minimal polynomials of alpha, alpha^3, .., alpha^(2t-1)."""
    if m < 2:
        raise CodeSpecError("bch requires m >= 2")
    if t < 1:
        raise CodeSpecError("bch requires t >= 1")
    try:
        gf = gf_field(m)
    except ValueError as exc:
        raise CodeSpecError(str(exc)) from None
    g = 1
    seen = set()
    for i in range(1, 2 * t, 2):
        coset = min(gf.cyclotomic_coset(i))
        if coset in seen:
            continue
        seen.add(coset)
        g = poly_mul(g, gf.minimal_polynomial(i))
    return g


def bch(m: int, t: int, systematic: bool = True) -> BlockCode:
    """Narrow-sense primitive binary BCH code of length 2^m - 1, designed distance 2t+1.

    ``systematic=False`` keeps the cyclic-shift generator rows ``x^i g(x)``.
    """
    n = (1 << m) - 1
    g = bch_generator_polynomial(m, t)
    deg = poly_degree(g)
    k = n - deg
    if k <= 0:
        raise CodeSpecError(f"bch(m={m}, t={t}) has dimension {k} <= 0")
    gbits = np.array([(g >> j) & 1 for j in range(deg + 1)], dtype=np.int64)
    shifts = np.zeros((k, n), dtype=np.int64)
    for i in range(k):
        shifts[i, i:i + deg + 1] = gbits
    code = from_generator(shifts, name=f"bch({n},{k})", systematic=systematic)
    return BlockCode(
        name=code.name, n=n, k=k, l=2, table=code.table,
        generator=code.generator, generator_polynomial=g,
    )


_FAMILIES = {
    "repetition": (repetition, ("n",)),
    "rep": (repetition, ("n",)),
    "single-parity": (single_parity, ("n",)),
    "parity": (single_parity, ("n",)),
    "spc": (single_parity, ("n",)),
    "hamming": (hamming, ("m",)),
    "bch": (bch, ("m", "t")),
}


def _parse_generator_rows(rows) -> np.ndarray:
    out = []
    for row in rows:
        if isinstance(row, str):
            row = row.replace(" ", "")
            if set(row) - {"0", "1"}:
                raise CodeSpecError(f"generator row {row!r} is not a binary string")
            out.append([int(ch) for ch in row])
        else:
            out.append([int(v) for v in row])
    if len({len(r) for r in out}) != 1:
        raise CodeSpecError("generator rows have unequal lengths")
    return np.array(out, dtype=np.int64)


def build_code(spec) -> BlockCode:
    """Build a code from ``"family:params"``, a mapping, or a generator matrix.

    Accepted forms::

        build_code("bch:4,2")
        build_code({"family": "hamming", "params": [3]})
        build_code({"name": "g", "generator": ["1011", "0110"]})
        build_code(np.array([[1, 0, 1], [0, 1, 1]]))

    A suffix ``@k`` (or a ``"subcode": k`` field) keeps only the first
    ``2**k`` messages, see :meth:`BlockCode.subcode`.
    """
    if isinstance(spec, BlockCode):
        return spec
    if isinstance(spec, np.ndarray):
        return from_generator(spec)
    if isinstance(spec, str):
        spec, _, sub = spec.partition("@")
        if sub:
            try:
                return build_code(spec).subcode(int(sub))
            except ValueError:
                raise CodeSpecError(f"bad subcode dimension {sub!r}") from None
        family, _, rest = spec.partition(":")
        params = [p for p in rest.replace(" ", "").split(",") if p]
        try:
            values = [int(p) for p in params]
        except ValueError:
            raise CodeSpecError(f"non-integer parameters in code spec {spec!r}") from None
        return _build_family(family.strip().lower(), values)
    if isinstance(spec, Mapping):
        if "subcode" in spec:
            rest = {key: v for key, v in spec.items() if key != "subcode"}
            return build_code(rest).subcode(int(spec["subcode"]))
        name = spec.get("name")
        if "generator" in spec:
            code = from_generator(_parse_generator_rows(spec["generator"]), name=name or "explicit")
            return code
        family = str(spec.get("family", "")).lower()
        if family == "explicit":
            raise CodeSpecError("explicit family requires a 'generator' field")
        params = spec.get("params", [])
        if isinstance(params, Mapping):
            _, names = _FAMILIES.get(family, (None, ()))
            try:
                params = [params[p] for p in names]
            except KeyError as exc:
                raise CodeSpecError(f"missing parameter {exc} for family {family!r}") from None
        elif not isinstance(params, Sequence) or isinstance(params, str):
            params = [params]
        code = _build_family(family, [int(p) for p in params])
        if name:
            code = BlockCode(name=name, n=code.n, k=code.k, l=code.l, table=code.table,
                             generator=code.generator,
                             generator_polynomial=code.generator_polynomial)
        return code
    raise CodeSpecError(f"cannot build a code from {type(spec).__name__}")


def _build_family(family: str, values: list[int]) -> BlockCode:
    if family not in _FAMILIES:
        raise CodeSpecError(f"unknown code family {family!r}")
    ctor, names = _FAMILIES[family]
    if len(values) != len(names):
        raise CodeSpecError(
            f"family {family!r} takes {len(names)} parameter(s) {names}, got {values}"
        )
    return ctor(*values)


def load_code_file(path: str | PathLike) -> BlockCode:
    with open(path) as fh:
        return build_code(json.load(fh))


# --- matrix representations ------------------------------------------------

@dataclass(frozen=True, eq=False)
class RealCodeMatrix:
    """Modulated code matrix ``A = [x_1 .. x_M]'`` for the AWGN model."""

    entries: np.ndarray
    normalization: str = "none"
    sigma: float = 1.0

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.float64)
        if a.ndim != 2:
            raise ValueError("code matrix must be 2-D")
        if not np.all(np.isfinite(a)):
            raise ValueError("code matrix has non-finite entries")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def M(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    @property
    def energy(self) -> float:
        """Largest codeword energy ``max x x'``."""
        return float(np.max(np.einsum("ij,ij->i", self.entries, self.entries)))

    def scaled(self) -> np.ndarray:
        """Entries divided by ``sigma``: the unit-noise code matrix."""
        return self.entries / self.sigma


def real_code_matrix(
    code: BlockCode,
    mapping: Mapping[int, float] | Sequence[float] | None = None,
    normalization: str = "none",
    sigma: float = 1.0,
) -> RealCodeMatrix:
    """Map codeword symbols to reals (BPSK ``0 -> +1, 1 -> -1`` by default)."""
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
    if mapping is None:
        if code.l != 2:
            raise ValueError("the built-in BPSK mapping needs a binary alphabet")
        mapping = BPSK
    if isinstance(mapping, Mapping):
        missing = [s for s in range(code.l) if s not in mapping]
        if missing:
            raise ValueError(f"mapping does not cover symbols {missing}")
        lut = np.array([float(mapping[s]) for s in range(code.l)])
    else:
        lut = np.asarray(mapping, dtype=np.float64)
        if lut.size < code.l:
            raise ValueError(f"mapping covers {lut.size} symbols, alphabet has {code.l}")
    a = lut[code.table]
    if normalization != "none":
        energy = np.einsum("ij,ij->i", a, a)
        if np.any(energy == 0):
            raise ValueError("cannot normalize a zero-energy codeword")
        target = 1.0 if normalization == "unit-codeword-energy" else float(code.n)
        a = a * np.sqrt(target / energy)[:, None]
    return RealCodeMatrix(a, normalization=normalization, sigma=sigma)


@dataclass(frozen=True, eq=False)
class StochasticCodeMatrix:
    """Row-stochastic ``2**k x l**n`` code matrix stored as one column index per row."""

    indices: np.ndarray
    n_columns: int
    l: int
    n: int

    @property
    def M(self) -> int:
        return len(self.indices)

    def dense(self) -> np.ndarray:
        out = np.zeros((self.M, self.n_columns))
        out[np.arange(self.M), self.indices] = 1.0
        return out


def codeword_index(codeword, l: int = 2) -> int:
    """Base-``l`` index of a codeword, first symbol most significant."""
    idx = 0
    for s in np.asarray(codeword).ravel():
        idx = idx * l + int(s)
    return idx


def stochastic_code_matrix(code: BlockCode) -> StochasticCodeMatrix:
    if code.n * math.log2(code.l) > _MAX_INDEX_BITS:
        raise GuardExceeded(
            f"l**n = {code.l}**{code.n} exceeds the 2**{_MAX_INDEX_BITS} index guard"
        )
    weights = code.l ** np.arange(code.n - 1, -1, -1, dtype=np.int64)
    indices = code.table @ weights
    indices.setflags(write=False)
    return StochasticCodeMatrix(indices=indices, n_columns=code.l ** code.n, l=code.l, n=code.n)
