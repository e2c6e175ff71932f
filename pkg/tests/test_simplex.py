import numpy as np
import pytest
from scipy.optimize import linprog

from codecomp.simplex import phase_one


def _feasible_by_highs(A, b):
    res = linprog(np.zeros(A.shape[1]), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    return res.status == 0


@pytest.mark.parametrize("seed", range(60))
def test_agrees_with_highs(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(1, 6), rng.integers(1, 9)
    A = rng.integers(-3, 4, size=(m, n)).astype(float)
    if seed % 2:
        b = A @ (rng.random(n) * (rng.random(n) > 0.3))  # feasible by construction
    else:
        b = rng.integers(-3, 4, size=m).astype(float)
    res = phase_one(A, b)
    feasible = res.objective <= 1e-9
    assert feasible == _feasible_by_highs(A, b)
    if feasible:
        assert np.all(res.x >= 0)
        assert np.allclose(A @ res.x, b, atol=1e-9)


def test_degenerate_problem_terminates():
    # many ties in the ratio test; Bland's rule must not cycle
    A = np.array([[1.0, 1, 1, 1, 0, 0], [1, -1, 0, 0, 1, 0], [0, 0, 1, -1, 0, 1]])
    b = np.array([1.0, 0.0, 0.0])
    res = phase_one(A, b)
    assert res.objective <= 1e-12
    assert np.allclose(A @ res.x, b)


def test_infeasible():
    res = phase_one(np.array([[1.0, 1.0]]), np.array([-1.0]))
    assert res.objective > 0.5


def test_empty_constraints():
    res = phase_one(np.zeros((0, 3)), np.zeros(0))
    assert res.objective == 0 and res.x.shape == (3,)
