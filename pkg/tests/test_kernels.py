import itertools

import numpy as np
import pytest

from gmrelax import kernels
from gmrelax.birkhoff import LinearProgram, simplex_lp
from oracles import assignment_bruteforce


def test_backend_selection():
    assert kernels.BACKEND in ("compiled", "python")
    assert "python" in kernels.available_backends()
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.parametrize("n", [1, 2, 5, 17, 30])
def test_jacobi_reconstructs(backend, rng, n):
    x = rng.normal(size=(n, n))
    a = x + x.T
    w, v, sweeps, off = kernels.jacobi_eigh(a)
    assert sweeps >= 0
    assert np.linalg.norm(v @ np.diag(w) @ v.T - a) <= 1e-9 * max(1.0, np.linalg.norm(a))
    assert np.abs(v.T @ v - np.eye(n)).max() <= 1e-12


def test_jacobi_sweep_cap_reported(backend, rng):
    x = rng.normal(size=(12, 12))
    _, _, sweeps, off = kernels.jacobi_eigh(x + x.T, 1e-14, 1)
    assert sweeps == -1 and off > 0


def test_jacobi_backends_agree(rng):
    if len(kernels.available_backends()) < 2:
        pytest.skip("compiled kernels not built")
    x = rng.normal(size=(9, 9))
    a = x + x.T
    wc, vc, _, _ = kernels.get_backend("compiled").jacobi_eigh(a)
    wp, vp, _, _ = kernels.get_backend("python").jacobi_eigh(a)
    assert np.allclose(wc, wp, atol=1e-12)
    assert np.allclose(np.abs(vc), np.abs(vp), atol=1e-9)


def test_hungarian_matches_bruteforce(backend, rng):
    for n in range(1, 7):
        for _ in range(20):
            c = rng.integers(-5, 10, size=(n, n)).astype(float)
            assign = kernels.hungarian(c)
            assert sorted(assign.tolist()) == list(range(n))
            assert c[np.arange(n), assign].sum() == pytest.approx(assignment_bruteforce(c))


def test_hungarian_ties(backend):
    c = np.zeros((5, 5))
    assert sorted(kernels.hungarian(c).tolist()) == list(range(5))


def _tableau_lp(rng, m, nv):
    """max c.x, A x <= b, x >= 0 as a slack-basis tableau (minimisation row)."""
    a = rng.uniform(0, 1, size=(m, nv))
    b = rng.uniform(1, 2, size=m)
    c = rng.uniform(0, 1, size=nv)
    t = np.zeros((m + 1, nv + m + 1))
    t[:m, :nv] = a
    t[:m, nv:nv + m] = np.eye(m)
    t[:m, -1] = b
    t[m, :nv] = -c
    return t, np.arange(nv, nv + m, dtype=np.int64), (a, b, c)


def test_simplex_iterate_backends_agree(rng):
    results = {}
    for name in kernels.available_backends():
        t, basis, _ = _tableau_lp(np.random.default_rng(5), 6, 8)
        status, it, stall = kernels.get_backend(name).simplex_iterate(t, basis, t.shape[1] - 1, 1000, 1e-12, 50, 0)
        results[name] = (status, it, -t[-1, -1], basis.copy())
    vals = list(results.values())
    assert all(v[0] == kernels.SIMPLEX_OPTIMAL for v in vals)
    assert all(v[1] == vals[0][1] and np.array_equal(v[3], vals[0][3]) for v in vals)
    assert all(abs(v[2] - vals[0][2]) < 1e-12 for v in vals)


def test_simplex_iterate_unbounded(backend):
    # max x0 with only x0 - x1 <= 1: unbounded
    t = np.array([[1.0, -1.0, 1.0, 1.0], [-1.0, 0.0, 0.0, 0.0]])
    basis = np.array([2], dtype=np.int64)
    status, _, _ = kernels.simplex_iterate(t, basis, 3, 100, 1e-12)
    assert status == kernels.SIMPLEX_UNBOUNDED


def test_simplex_iterate_iteration_limit(backend, rng):
    t, basis, _ = _tableau_lp(rng, 6, 8)
    status, it, _ = kernels.simplex_iterate(t, basis, t.shape[1] - 1, 0, 1e-12)
    assert status == kernels.SIMPLEX_ITERATION_LIMIT and it == 0


def test_bland_rule_terminates_on_cycling_example(backend):
    # Beale's classic cycling LP; Dantzig with lowest-index ties cycles on it
    c = np.array([0.75, -150.0, 0.02, -6.0])
    a = np.array([[0.25, -60.0, -0.04, 9.0], [0.5, -90.0, -0.02, 3.0], [0.0, 0.0, 1.0, 0.0]])
    b = np.array([0.0, 0.0, 1.0])
    res = simplex_lp(LinearProgram(c=c, A_ub=a, b_ub=b))
    assert res.status == "optimal"
    assert res.value == pytest.approx(0.05)


def test_pivot(backend):
    t = np.array([[2.0, 1.0, 4.0], [1.0, 3.0, 5.0], [-1.0, -1.0, 0.0]])
    kernels.pivot(t, 0, 0)
    assert np.allclose(t, [[1.0, 0.5, 2.0], [0.0, 2.5, 3.0], [0.0, -0.5, 2.0]])


def test_all_permutation_assignments_are_found(backend):
    # each permutation matrix negated is the unique optimum of its own cost
    for perm in itertools.permutations(range(4)):
        c = np.ones((4, 4))
        c[np.arange(4), perm] = 0.0
        assert tuple(kernels.hungarian(c).tolist()) == perm
