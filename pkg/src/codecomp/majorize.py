"""Matrix majorization of row-stochastic matrices.

``A`` majorizes ``B`` (``A > B``) when ``A M = B`` for some row-stochastic
``M``.  For transfer matrices this is sufficiency of the first code/channel
pair for the second.  Two routes decide it: a phase-one LP that also yields
the garbling ``M``, and for dichotomies (two rows) the upper boundary of the
zonotope, which is dominated pointwise exactly when majorization holds.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from os import PathLike
from typing import Mapping, TextIO

import numpy as np

from .discrete import Dichotomy, DegenerateDichotomy, TransferMatrix
from .errors import GuardExceeded
from .simplex import phase_one

LP_TOL = 1e-8
BOUNDARY_TOL = 1e-10
MAX_LP_VARIABLES = 10**6
MAX_TABLEAU_ENTRIES = 4 * 10**7


class MajorizationRelation(str, Enum):
    FIRST_MAJORIZES = "FirstMajorizes"
    SECOND_MAJORIZES = "SecondMajorizes"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"

    @classmethod
    def from_flags(cls, forward: bool, backward: bool) -> "MajorizationRelation":
        if forward and backward:
            return cls.EQUIVALENT
        if forward:
            return cls.FIRST_MAJORIZES
        if backward:
            return cls.SECOND_MAJORIZES
        return cls.INCOMPARABLE

    def swapped(self) -> "MajorizationRelation":
        if self is MajorizationRelation.FIRST_MAJORIZES:
            return MajorizationRelation.SECOND_MAJORIZES
        if self is MajorizationRelation.SECOND_MAJORIZES:
            return MajorizationRelation.FIRST_MAJORIZES
        return self


# --- zonotope boundary -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class Boundary:
    """Concave piecewise-linear upper boundary of a dichotomy zonotope.

    ``breakpoints`` is a ``K x 2`` array of ``(x, y)`` starting at the origin.
    A vertical first segment (columns with zero mass under row 0) shows up as
    two breakpoints with ``x = 0``; the boundary value there is the upper one.
    """

    breakpoints: np.ndarray

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=np.float64)
        bp.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)

    @property
    def x(self) -> np.ndarray:
        return self.breakpoints[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.breakpoints[:, 1]

    @property
    def total(self) -> tuple[float, float]:
        return float(self.x[-1]), float(self.y[-1])

    def _graph(self) -> tuple[np.ndarray, np.ndarray]:
        x, y = self.x, self.y
        if len(x) > 1 and x[1] == x[0]:
            return x[1:], y[1:]
        return x, y

    def __call__(self, x) -> np.ndarray | float:
        gx, gy = self._graph()
        return np.interp(x, gx, gy)

    def slopes(self) -> np.ndarray:
        gx, gy = self._graph()
        return np.diff(gy) / np.diff(gx)

    def is_concave(self, tol: float = 1e-9) -> bool:
        s = self.slopes()
        return bool(np.all(np.diff(s) <= tol * np.maximum(1.0, np.abs(s[:-1]))))


def _dichotomy_columns(D) -> np.ndarray:
    rows = D.rows if isinstance(D, Dichotomy) else np.asarray(D, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] != 2:
        raise ValueError("a dichotomy has exactly two rows")
    if np.any(rows < 0):
        raise ValueError("dichotomy entries must be non-negative")
    keep = (rows[0] > 0) | (rows[1] > 0)
    return rows[:, keep]


def _envelope(cols: np.ndarray, descending: bool) -> np.ndarray:
    with np.errstate(divide="ignore"):
        slope = np.where(cols[0] > 0, cols[1] / np.where(cols[0] > 0, cols[0], 1.0), np.inf)
    order = np.argsort(-slope if descending else slope, kind="stable")
    cols = cols[:, order]
    slope = slope[order]
    if cols.shape[1] == 0:
        return np.zeros((1, 2))
    # merge runs of (numerically) equal slope into single segments
    same = np.zeros(len(slope), dtype=bool)
    same[1:] = np.isclose(slope[1:], slope[:-1], rtol=1e-12, atol=0.0) | (
        np.isinf(slope[1:]) & np.isinf(slope[:-1])
    )
    group = np.cumsum(~same) - 1
    seg = np.zeros((2, group[-1] + 1))
    np.add.at(seg[0], group, cols[0])
    np.add.at(seg[1], group, cols[1])
    pts = np.zeros((seg.shape[1] + 1, 2))
    pts[1:, 0] = np.cumsum(seg[0])
    pts[1:, 1] = np.cumsum(seg[1])
    return pts


def zonotope_boundary(D) -> Boundary:
    """Upper boundary ``beta(x) = max { sum a2_j d_j : sum a1_j d_j <= x, 0 <= d_j <= 1 }``.

    The fractional knapsack is solved greedily: segments are taken in order
    of decreasing slope ``row1/row0``.
    """
    return Boundary(_envelope(_dichotomy_columns(D), descending=True))


def zonotope_lower_boundary(D) -> Boundary:
    """Lower boundary of the zonotope (segments in increasing slope order)."""
    return Boundary(_envelope(_dichotomy_columns(D), descending=False))


def boundary_dominates(Ba: Boundary, Bb: Boundary, tol: float = BOUNDARY_TOL) -> bool:
    """True iff ``Ba(x) >= Bb(x) - tol`` on the merged breakpoints."""
    ta, tb = np.array(Ba.total), np.array(Bb.total)
    if np.any(np.abs(ta - tb) > max(tol, 1e-9)):
        raise ValueError(f"boundaries end at different points {tuple(ta)} vs {tuple(tb)}")
    xs = np.union1d(Ba.x, Bb.x)
    return bool(np.all(Ba(xs) >= Bb(xs) - tol))


def write_boundary_csv(B: Boundary, out: TextIO | str | PathLike,
                       metadata: Mapping[str, object] | None = None) -> None:
    if isinstance(out, (str, PathLike)):
        with open(out, "w", newline="") as fh:
            write_boundary_csv(B, fh, metadata)
        return
    if metadata:
        out.write("# " + " ".join(f"{k}={v}" for k, v in metadata.items()) + "\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["x", "y"])
    for x, y in B.breakpoints:
        writer.writerow([repr(float(x)), repr(float(y))])


def boundary_csv(B: Boundary, metadata: Mapping[str, object] | None = None) -> str:
    buf = io.StringIO()
    write_boundary_csv(B, buf, metadata)
    return buf.getvalue()


# --- LP route --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GarblingCertificate:
    """Row-stochastic ``M`` with ``A M`` close to ``B`` (max-norm ``residual``)."""

    M: np.ndarray
    residual: float

    def compose(self, other: "GarblingCertificate") -> np.ndarray:
        return self.M @ other.M

    def to_dict(self, zero: float = 1e-15) -> dict:
        rows, cols = np.nonzero(np.abs(self.M) > zero)
        return {
            "shape": list(self.M.shape),
            "residual": float(self.residual),
            "entries": [
                {"row": int(r), "col": int(c), "value": float(self.M[r, c])}
                for r, c in zip(rows, cols)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "GarblingCertificate":
        M = np.zeros(tuple(data["shape"]))
        for e in data["entries"]:
            M[e["row"], e["col"]] = e["value"]
        return cls(M, float(data["residual"]))


def _stochastic(x, what: str) -> np.ndarray:
    if isinstance(x, TransferMatrix):
        return x.rows
    if isinstance(x, Dichotomy):
        return x.rows
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2 or np.any(a < 0) or not np.all(np.isfinite(a)):
        raise ValueError(f"{what} must be a non-negative finite 2-D matrix")
    return a


def majorization_check_lp(A, B, tol: float = LP_TOL) -> tuple[bool, GarblingCertificate | None]:
    """Decide whether ``A M = B`` has a row-stochastic solution ``M``."""
    a = _stochastic(A, "A")
    b = _stochastic(B, "B")
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row-count mismatch: {a.shape[0]} vs {b.shape[0]}")
    n_r, w = a.shape
    w2 = b.shape[1]
    n_vars = w * w2
    n_cons = n_r * w2 + w
    if n_vars > MAX_LP_VARIABLES or (n_cons + 1) * (n_vars + n_cons + 1) > MAX_TABLEAU_ENTRIES:
        raise GuardExceeded(
            f"LP with {n_vars} variables and {n_cons} constraints exceeds the guard; "
            "compare per-bit dichotomies with the zonotope method instead"
        )
    # variable M[i, j] sits at column i * w2 + j
    A_eq = np.vstack([np.kron(a, np.eye(w2)), np.kron(np.eye(w), np.ones((1, w2)))])
    b_eq = np.concatenate([b.ravel(), np.ones(w)])
    res = phase_one(A_eq, b_eq)
    if res.objective > tol * n_r * w2:
        return False, None
    M = res.x.reshape(w, w2)
    sums = M.sum(axis=1)
    for i in np.nonzero(sums <= 0)[0]:
        M[i] = 0.0
        M[i, 0] = 1.0  # free row: column i of A is zero
    M = M / M.sum(axis=1, keepdims=True)
    residual = float(np.max(np.abs(a @ M - b))) if b.size else 0.0
    return True, GarblingCertificate(M, residual)


# --- verdicts --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MajorizationVerdict:
    relation: MajorizationRelation
    method: str
    certificate_forward: GarblingCertificate | None = None
    certificate_backward: GarblingCertificate | None = None

    def to_dict(self) -> dict:
        return {
            "relation": self.relation.value,
            "method": self.method,
            "certificate_forward": None if self.certificate_forward is None
            else self.certificate_forward.to_dict(),
            "certificate_backward": None if self.certificate_backward is None
            else self.certificate_backward.to_dict(),
        }


def compare_dichotomies(Da, Db, tol: float = BOUNDARY_TOL) -> MajorizationVerdict:
    """Zonotope comparison; ``FirstMajorizes`` when ``Da``'s boundary dominates."""
    for d in (Da, Db):
        cols = _dichotomy_columns(d)
        if np.any(cols.sum(axis=1) <= 0):
            raise DegenerateDichotomy("dichotomy has an all-zero row")
    ba, bb = zonotope_boundary(Da), zonotope_boundary(Db)
    fwd = boundary_dominates(ba, bb, tol)
    bwd = boundary_dominates(bb, ba, tol)
    return MajorizationVerdict(MajorizationRelation.from_flags(fwd, bwd), "zonotope")


def compare_lp(A, B, tol: float = LP_TOL) -> MajorizationVerdict:
    fwd, cert_f = majorization_check_lp(A, B, tol)
    bwd, cert_b = majorization_check_lp(B, A, tol)
    return MajorizationVerdict(MajorizationRelation.from_flags(fwd, bwd), "lp", cert_f, cert_b)


def compare_transfer_matrices(Ta, Tb, tol: float = LP_TOL) -> MajorizationVerdict:
    """LP comparison of full transfer matrices (same message set)."""
    a, b = _stochastic(Ta, "Ta"), _stochastic(Tb, "Tb")
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"transfer matrices have {a.shape[0]} vs {b.shape[0]} messages")
    return compare_lp(a, b, tol)
