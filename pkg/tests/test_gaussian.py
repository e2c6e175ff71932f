import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from codecomp.codes import bch, build_code, real_code_matrix, repetition
from codecomp.gaussian import (
    Relation,
    compare_mimo,
    deficiency_bound,
    deficiency_sigma,
    loewner_compare,
    psd_test,
    range_contains,
    verdict_to_dict,
)
from codecomp.oracle import packet_error_mc


def test_psd_examples():
    assert psd_test(np.eye(3)) == (True, 1.0)
    ok, lam = psd_test(np.diag([1.0, -0.5]))
    assert not ok and lam == -0.5
    assert psd_test(np.zeros((2, 2))) == (True, 0.0)


def test_psd_is_relative_to_norm():
    big = np.diag([1e6, -1e-4])  # -1e-4 >= -1e-9 * 1e6
    assert psd_test(big)[0]
    assert not psd_test(np.diag([1.0, -1e-4]))[0]


def test_psd_rejects_non_square():
    with pytest.raises(ValueError):
        psd_test(np.ones((2, 3)))


def test_loewner_examples():
    assert loewner_compare(np.eye(2), 0.5 * np.eye(2)).relation is Relation.FIRST_SUFFICIENT
    a = np.array([[1.0, 2.0], [0.5, -1.0]])
    v = loewner_compare(a, a)
    assert v.relation is Relation.EQUIVALENT
    assert v.min_eigenvalue_forward == pytest.approx(0.0, abs=1e-12)


def test_loewner_bch_63_vs_15():
    A = real_code_matrix(bch(6, 15))
    B = real_code_matrix(bch(4, 2))
    v = loewner_compare(A, B)
    assert v.relation is Relation.FIRST_SUFFICIENT
    assert verdict_to_dict(v)["relation"] == "FirstSufficient"


def _walsh_eigenvalues(code):
    """Eigenvalues of A A' for a +-1 linear code via characters of GF(2)^k.

    Column j of A is the character (-1)^{<g_j, u>}, so A A' is diagonal in the
    Walsh basis with eigenvalue M times the multiplicity of each column.
    """
    k = code.k
    weights = 1 << np.arange(k - 1, -1, -1)
    cols = code.generator.T.astype(np.int64) @ weights
    counts = np.bincount(cols, minlength=code.M)
    return code.M * counts


@pytest.mark.parametrize("first,second", [("bch:6,15", "bch:4,2"), ("bch:4,2", "bch:6,15"),
                                          ("bch:5,7", "bch:4,2@6"), ("rep:3", "rep:1")])
def test_loewner_matches_character_oracle(first, second):
    ca, cb = build_code(first), build_code(second)
    diff = _walsh_eigenvalues(ca) - _walsh_eigenvalues(cb)
    v = loewner_compare(real_code_matrix(ca), real_code_matrix(cb))
    fwd, bwd = bool(diff.min() >= 0), bool(diff.max() <= 0)
    expect = {(True, True): Relation.EQUIVALENT, (True, False): Relation.FIRST_SUFFICIENT,
              (False, True): Relation.SECOND_SUFFICIENT, (False, False): Relation.INCOMPARABLE}
    assert v.relation is expect[(fwd, bwd)]
    assert v.min_eigenvalue_forward == pytest.approx(min(diff.min(), 0), abs=1e-7)
    assert v.min_eigenvalue_backward == pytest.approx(min(-diff.max(), 0), abs=1e-7)


def test_loewner_sigma_and_normalization_guards():
    a = real_code_matrix(repetition(2), sigma=1.0)
    b = real_code_matrix(repetition(2), sigma=2.0)
    with pytest.raises(ValueError):
        loewner_compare(a, b)
    c = real_code_matrix(repetition(2), normalization="unit-codeword-energy")
    with pytest.raises(ValueError):
        loewner_compare(a, c)
    with pytest.raises(ValueError):
        loewner_compare(np.ones((2, 1)), np.ones((3, 1)))


def test_sigma_rescaling():
    a = real_code_matrix(repetition(1), sigma=2.0)
    assert np.allclose(a.scaled(), [[0.5], [-0.5]])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**31))
def test_loewner_antisymmetry(m, n1, n2, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=(m, n1)), rng.normal(size=(m, n2))
    assert loewner_compare(a, b).relation is loewner_compare(b, a).relation.swapped()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.floats(1.01, 10), st.integers(0, 2**31))
def test_scaling_up_is_sufficient(m, n, c, seed):
    a = np.random.default_rng(seed).normal(size=(m, n))
    v = loewner_compare(c * a, a)
    assert v.relation in (Relation.FIRST_SUFFICIENT, Relation.EQUIVALENT)


def test_tolerance_sweep_stable():
    A = real_code_matrix(bch(6, 15))
    B = real_code_matrix(bch(4, 2))
    for tol in (1e-6, 1e-8, 1e-10, 1e-12):
        assert loewner_compare(A, B, tol).relation is Relation.FIRST_SUFFICIENT


def test_range_examples():
    a = np.array([[1.0, 2.0], [3.0, 1.0], [0.0, 1.0]])
    assert range_contains(a, a)
    full = np.random.default_rng(0).normal(size=(3, 5))
    assert range_contains(full, np.random.default_rng(1).normal(size=(3, 2)))
    assert not range_contains(np.array([[1.0], [0.0]]), np.array([[0.0], [1.0]]))


def test_mimo_examples():
    assert compare_mimo(2 * np.eye(2), np.eye(2)).relation is Relation.FIRST_SUFFICIENT
    assert compare_mimo(np.eye(2), np.eye(2)).relation is Relation.EQUIVALENT
    assert compare_mimo(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])).relation is Relation.INCOMPARABLE
    with pytest.raises(ValueError):
        compare_mimo(np.eye(2), np.eye(3))


# --- deficiency ------------------------------------------------------------

def _tv_quadrature(var):
    """||N(0, var) - N(0, 1)||_1 by adaptive quadrature."""
    f = lambda x: abs(stats.norm.pdf(x, scale=math.sqrt(var)) - stats.norm.pdf(x))
    cross = math.sqrt(var * math.log(var) / (var - 1.0))
    pieces = [(-np.inf, -cross), (-cross, cross), (cross, np.inf)]
    return sum(integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-12)[0] for lo, hi in pieces)


def test_quadrature_oracle_frozen_value():
    # frozen from the oracle above; agrees with the closed form via erf
    assert _tv_quadrature(4.0) == pytest.approx(0.6453491376695373, abs=1e-10)
    c = math.sqrt(4 * math.log(4) / 3)
    closed = 2 * (2 * stats.norm.cdf(c) - 1 - (2 * stats.norm.cdf(c / 2) - 1))
    assert closed == pytest.approx(0.6453491376695373, abs=1e-12)


def test_deficiency_same_matrix_is_zero():
    a = real_code_matrix(bch(4, 2)).entries
    est = deficiency_bound(a, a, samples=1000, seed=1)
    assert est.value == 0.0 and est.std_error == 0.0


def test_deficiency_one_dimensional_case():
    est = deficiency_bound([[1.0]], [[2.0]], samples=200_000, seed=11)
    assert np.allclose(est.sigma_matrix, [[4.0]])
    assert abs(est.value - _tv_quadrature(4.0)) <= 3 * est.std_error
    assert 0 < est.std_error < 0.01


def test_deficiency_disjoint_ranges():
    est = deficiency_bound(np.array([[1.0], [0.0]]), np.array([[0.0], [1.0]]), seed=0)
    assert est.value == 2.0 and est.samples == 0


def test_deficiency_psd_repair_flag():
    B = np.array([[-2.0, 1.0, -2.0, 1.0], [1.0, 1.0, 2.0, 2.0]])
    sigma = deficiency_sigma(np.eye(2), B)
    assert np.linalg.eigvalsh(sigma)[0] < -0.5
    est = deficiency_bound(np.eye(2), B, samples=1000, seed=3)
    assert est.psd_repair_applied and est.value == 2.0


def test_deficiency_sufficient_pair_small():
    # A A' dominates B B', so B' (A A')^+ B <= I and the join is I
    est = deficiency_bound(2 * np.eye(2), np.eye(2), samples=1000, seed=1)
    assert est.value == 0.0


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**31))
def test_deficiency_in_range(m, n1, n2, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=(m, n1)), rng.normal(size=(m, n2))
    est = deficiency_bound(a, b, samples=5000, seed=seed)
    assert 0.0 <= est.value <= 2.0
    assert math.isfinite(est.std_error)


def test_deficiency_deterministic_across_workers():
    a, b = [[1.0]], [[2.0]]
    one = deficiency_bound(a, b, samples=300_000, seed=5, workers=1)
    four = deficiency_bound(a, b, samples=300_000, seed=5, workers=4)
    assert one.value == four.value and one.std_error == four.std_error


def test_deficiency_bounds_error_gap_per_message():
    # amplitude-1 antipodal code vs amplitude 2: the weaker code's deficiency
    # must cover how much worse it can do
    A, B = np.array([[1.0], [-1.0]]), np.array([[2.0], [-2.0]])
    est = deficiency_bound(A, B, samples=200_000, seed=2)
    for msg in (0, 1):
        pa = packet_error_mc(A, msg, 200_000, seed=10 + msg)
        pb = packet_error_mc(B, msg, 200_000, seed=20 + msg)
        gap = pa.value - pb.value
        assert gap <= est.value + 3 * (est.std_error + pa.std_error + pb.std_error)


def test_deficiency_rejects_bad_samples():
    with pytest.raises(ValueError):
        deficiency_bound([[1.0]], [[1.0]], samples=0)
