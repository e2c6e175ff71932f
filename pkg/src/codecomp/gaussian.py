"""Codes on AWGN channels compared as linear normal experiments.

A code matrix ``A`` (M x n) defines the experiment ``N(A' beta, sigma^2 I)``
with ``beta = e_i`` for message ``i``.  Dividing ``A`` by ``sigma`` gives
the unit-noise experiment, and all comparisons work on that scaled form:
``A`` is sufficient for ``B`` when ``A A' - B B'`` is positive semidefinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _random
from .codes import RealCodeMatrix

DEFAULT_TOL = 1e-9


class Relation(str, Enum):
    FIRST_SUFFICIENT = "FirstSufficient"
    SECOND_SUFFICIENT = "SecondSufficient"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"

    def swapped(self) -> "Relation":
        return _SWAP.get(self, self)


_SWAP = {
    Relation.FIRST_SUFFICIENT: Relation.SECOND_SUFFICIENT,
    Relation.SECOND_SUFFICIENT: Relation.FIRST_SUFFICIENT,
}


def relation_from_flags(forward: bool, backward: bool) -> Relation:
    if forward and backward:
        return Relation.EQUIVALENT
    if forward:
        return Relation.FIRST_SUFFICIENT
    if backward:
        return Relation.SECOND_SUFFICIENT
    return Relation.INCOMPARABLE


class DeficiencyError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LoewnerVerdict:
    relation: Relation
    min_eigenvalue_forward: float
    min_eigenvalue_backward: float
    tolerance_used: float

    def to_dict(self) -> dict:
        return {
            "relation": self.relation.value,
            "min_eig_fwd": self.min_eigenvalue_forward,
            "min_eig_bwd": self.min_eigenvalue_backward,
            "tol": self.tolerance_used,
        }


@dataclass(frozen=True, eq=False)
class DeficiencyEstimate:
    """Monte-Carlo estimate of ``||N(0, Sigma) - N(0, I)||`` (total variation as an L1 norm)."""

    value: float
    std_error: float
    samples: int
    sigma_matrix: np.ndarray | None
    psd_repair_applied: bool = False

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.std_error,
            "samples": self.samples,
            "psd_repair": self.psd_repair_applied,
        }


def verdict_to_dict(verdict: LoewnerVerdict, deficiency: DeficiencyEstimate | None = None) -> dict:
    out = verdict.to_dict()
    out["deficiency"] = None if deficiency is None else deficiency.to_dict()
    return out


def _as_matrix(x) -> np.ndarray:
    a = x.scaled() if isinstance(x, RealCodeMatrix) else np.asarray(x, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def psd_test(S, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Whether ``S`` is positive semidefinite, and its smallest eigenvalue.

    ``S`` is symmetrized first.  The test is relative to the spectral norm:
    ``lambda_min >= -tol * max(1, ||S||_2)``.
    """
    s = np.asarray(S, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("psd_test needs a square matrix")
    if not np.all(np.isfinite(s)):
        raise ValueError("matrix has non-finite entries")
    if s.size == 0:
        return True, 0.0
    eig = np.linalg.eigvalsh(0.5 * (s + s.T))
    lam_min = float(eig[0])
    norm = float(max(abs(eig[0]), abs(eig[-1])))
    return lam_min >= -tol * max(1.0, norm), lam_min


def _check_pair(A, B):
    if isinstance(A, RealCodeMatrix) and isinstance(B, RealCodeMatrix):
        if A.sigma != B.sigma:
            raise ValueError(f"sigma mismatch: {A.sigma} vs {B.sigma}")
        if A.normalization != B.normalization:
            raise ValueError(
                f"normalization mismatch: {A.normalization!r} vs {B.normalization!r}"
            )
    a, b = _as_matrix(A), _as_matrix(B)
    if a.shape[0] != b.shape[0]:
        raise ValueError(
            f"row-count mismatch: {a.shape[0]} vs {b.shape[0]} messages"
        )
    return a, b


def _loewner(a: np.ndarray, b: np.ndarray, tol: float) -> LoewnerVerdict:
    diff = a @ a.T - b @ b.T
    fwd, lam_fwd = psd_test(diff, tol)
    bwd, lam_bwd = psd_test(-diff, tol)
    return LoewnerVerdict(relation_from_flags(fwd, bwd), lam_fwd, lam_bwd, tol)


def loewner_compare(A, B, tol: float = DEFAULT_TOL) -> LoewnerVerdict:
    """Loewner comparison of the moment matrices of two code matrices.

    ``A`` and ``B`` may be :class:`RealCodeMatrix` (rescaled by ``1/sigma``)
    or plain arrays taken as unit-noise matrices.  Codeword lengths may
    differ; the message count may not.
    """
    a, b = _check_pair(A, B)
    return _loewner(a, b, tol)


def compare_mimo(H1, H2, tol: float = DEFAULT_TOL) -> LoewnerVerdict:
    """Compare MIMO channels ``y = H' x + n`` with unit noise."""
    h1 = np.asarray(H1, dtype=np.float64)
    h2 = np.asarray(H2, dtype=np.float64)
    if h1.ndim != 2 or h2.ndim != 2 or h1.shape[0] != h2.shape[0]:
        raise ValueError(f"dimension mismatch: {h1.shape} vs {h2.shape}")
    return _loewner(_as_matrix(h1), _as_matrix(h2), tol)


def _rank(x: np.ndarray, tol: float) -> int:
    if x.size == 0:
        return 0
    s = np.linalg.svd(x, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def range_contains(A, B, tol: float = DEFAULT_TOL) -> bool:
    """True when every column of ``B`` lies in the column span of ``A``."""
    a, b = _as_matrix(A), _as_matrix(B)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row-count mismatch: {a.shape[0]} vs {b.shape[0]}")
    return _rank(np.hstack([a, b]), tol) == _rank(a, tol)


def deficiency_sigma(A, B, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``(B' (A A')^+ B)`` joined element-wise with the identity."""
    a, b = _check_pair(A, B)
    try:
        gram_pinv = np.linalg.pinv(a @ a.T, rcond=tol, hermitian=True)
    except np.linalg.LinAlgError as exc:
        raise DeficiencyError(f"pseudoinverse failed: {exc}") from exc
    inner = b.T @ gram_pinv @ b
    inner = 0.5 * (inner + inner.T)
    return np.maximum(inner, np.eye(inner.shape[0]))


def deficiency_bound(
    A,
    B,
    samples: int = 100_000,
    seed: int | None = None,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
) -> DeficiencyEstimate:
    """Estimate the deficiency of ``A`` with respect to ``B``.

    When ``range(B)`` is not inside ``range(A)`` the deficiency is 2 and is
    returned without sampling.  Otherwise ``Sigma`` is diagonalized and

        ||N(0, Sigma) - N(0, I)|| = 2 E_{x ~ N(0, I)} [ (1 - r(x))_+ ],

    where ``r`` is the density ratio, a product of one-dimensional factors
    in the eigenbasis.  The integrand lies in [0, 2], so the estimate and its
    standard error are always finite.  A sigma matrix that is not PSD after
    the element-wise join gets its negative eigenvalues clipped to 0 and is
    flagged; a singular sigma gives deficiency 2.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    a, b = _check_pair(A, B)
    if not range_contains(a, b, tol):
        return DeficiencyEstimate(2.0, 0.0, 0, None, False)
    sigma = deficiency_sigma(a, b, tol)
    is_psd, _ = psd_test(sigma, tol)
    lam = np.linalg.eigvalsh(sigma)
    lam = np.clip(lam, 0.0, None)
    scale = max(1.0, float(np.max(np.abs(lam))))
    if np.any(lam <= tol * scale):
        return DeficiencyEstimate(2.0, 0.0, 0, sigma, not is_psd)
    active = lam[np.abs(lam - 1.0) > tol]
    if active.size == 0:
        return DeficiencyEstimate(0.0, 0.0, samples, sigma, not is_psd)
    if seed is None:
        seed = _random.fresh_seed()

    half_log_det = 0.5 * float(np.sum(np.log(active)))
    quad_coef = 0.5 * (1.0 - 1.0 / active)

    def chunk_moments(gen, count):
        x = _random.box_muller(gen, (count, active.size))
        log_ratio = (x * x) @ quad_coef - half_log_det
        g = 2.0 * np.maximum(0.0, -np.expm1(log_ratio))
        return math.fsum(g), math.fsum(g * g)

    parts = _random.map_chunks(chunk_moments, seed, samples, workers)
    mean = math.fsum(p[0] for p in parts) / samples
    second = math.fsum(p[1] for p in parts) / samples
    var = max(second - mean * mean, 0.0)
    std_error = math.sqrt(var / samples)
    return DeficiencyEstimate(mean, std_error, samples, sigma, not is_psd)
