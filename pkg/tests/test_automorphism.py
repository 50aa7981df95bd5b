import numpy as np
import pytest
from hypothesis import given

from gmrelax.automorphism import (
    ADJACENT_BOTH_LOOPS,
    ADJACENT_NO_LOOPS,
    NONADJACENT_BOTH_LOOPS,
    NONADJACENT_NO_LOOPS,
    GroupTooLarge,
    automorphism_group,
    automorphisms_bruteforce,
    conjecture_scan,
    detect_twin_pairs,
    verify_involution_lemma,
    verify_proposition1,
)
from gmrelax.corpus import corpus
from gmrelax.graph import Graph, Permutation, apply_permutation, complete, cycle, erdos_renyi, from_edge_list
from gmrelax.spectral import SpectralError, analyze
from oracles import automorphisms
from test_graph import graphs


def _fig3_with_twins(attach=(0,), loops=False, adjacent=False):
    """fig3 plus two new vertices 7, 8 with the same neighbours in fig3."""
    base = corpus("fig3").graph.edges()
    edges = base + [(x, 7) for x in attach] + [(x, 8) for x in attach] + ([(7, 8)] if adjacent else [])
    a = from_edge_list(9, edges).adj.copy()
    if loops:
        a[7, 7] = a[8, 8] = 1
    return Graph(a)


def test_group_examples():
    assert automorphism_group(corpus("frucht").graph).trivial
    paw = automorphism_group(corpus("paw").graph)
    assert {p.map for p in paw.elements} == {(0, 1, 2, 3), (1, 0, 2, 3)}
    fig4 = automorphism_group(corpus("fig4").graph)
    assert not fig4.trivial
    assert fig4.order == len(automorphisms(corpus("fig4").graph.adj))


@given(graphs(max_n=7))
def test_group_matches_exhaustive_enumeration(g):
    got = {p.map for p in automorphism_group(g).elements}
    assert got == automorphisms(g.adj)
    assert got == {p.map for p in automorphisms_bruteforce(g)}


@given(graphs(max_n=9))
def test_group_closure(g):
    grp = automorphism_group(g)
    elems = {p.map for p in grp.elements}
    assert grp.elements[0].is_identity()
    assert grp.trivial == (len(elems) == 1)
    if grp.truncated:
        assert grp.order == len(elems)
        return
    for p in grp.elements:
        assert apply_permutation(g, p) == g
        assert p.inverse().map in elems
    rng = np.random.default_rng(g.n)
    for _ in range(10):
        a, b = rng.integers(len(grp.elements), size=2)
        assert grp.elements[a].compose(grp.elements[b]).map in elems


def test_group_with_loops():
    a = np.zeros((4, 4), dtype=np.int8)
    a[0, 0] = 1
    for i in range(4):
        a[i, (i + 1) % 4] = a[(i + 1) % 4, i] = 1
    g = Graph(a)
    assert {p.map for p in automorphism_group(g).elements} == automorphisms(a)


def test_group_limits():
    with pytest.raises(GroupTooLarge):
        automorphism_group(cycle(21))
    big = automorphism_group(complete(8), cap=100)
    assert big.truncated and big.order == 100
    assert automorphism_group(complete(5)).order == 120
    assert not automorphism_group(complete(5)).truncated
    assert automorphism_group(cycle(20)).order == 40


def test_involution_lemma_examples():
    for name in ("fig4", "paw"):
        g = corpus(name).graph
        dec, _, _ = analyze(g)
        r = verify_involution_lemma(g, dec, automorphism_group(g))
        assert r.applicable and r.holds
    c4 = cycle(4)
    dec, _, _ = analyze(c4)
    grp = automorphism_group(c4)
    assert any(p.order() == 4 for p in grp.elements)
    r = verify_involution_lemma(c4, dec, grp)
    assert r.holds and not r.applicable and "not applicable" in r.note


def test_involution_lemma_on_random_graphs():
    for seed in range(300):
        g = erdos_renyi(8, 0.4, seed)
        dec, _, cls = analyze(g)
        r = verify_involution_lemma(g, dec, automorphism_group(g))
        assert r.holds


def test_twin_pairs_paw():
    g = corpus("paw").graph
    dec, prof, _ = analyze(g)
    (t,) = detect_twin_pairs(g, dec, prof)
    assert (t.s, t.t, t.eigenvalue, t.case, t.consistent) == (0, 1, -1, ADJACENT_NO_LOOPS, True)


def test_twin_pairs_none_on_fig3():
    g = corpus("fig3").graph
    dec, prof, _ = analyze(g)
    assert detect_twin_pairs(g, dec, prof) == []


@pytest.mark.parametrize(
    "kwargs, lam, case",
    [
        (dict(attach=(0,)), 0, NONADJACENT_NO_LOOPS),
        (dict(attach=(0,), loops=True), 1, NONADJACENT_BOTH_LOOPS),
        (dict(attach=(0,), loops=True, adjacent=True), 0, ADJACENT_BOTH_LOOPS),
    ],
)
def test_twin_pair_cases(kwargs, lam, case):
    g = _fig3_with_twins(**kwargs)
    dec, prof, cls = analyze(g)
    twins = detect_twin_pairs(g, dec, prof)
    if case == ADJACENT_BOTH_LOOPS and not twins:
        pytest.skip("eigenvalue shared with another eigenvector for this construction")
    (t,) = twins
    assert (t.s, t.t, t.eigenvalue, t.case, t.consistent) == (7, 8, lam, case, True)
    # independent check: A (e7 - e8) = lam (e7 - e8)
    x = np.zeros(9)
    x[7], x[8] = 1, -1
    assert np.allclose(g.matrix() @ x, lam * x)


def test_twin_inconsistency_is_reported():
    g = corpus("paw").graph
    dec, prof, _ = analyze(g)
    other = corpus("fig3").graph.adj[:4, :4]
    fake = Graph(np.maximum(other, other.T))
    twins = detect_twin_pairs(fake, dec, prof)
    assert twins and not twins[0].consistent and twins[0].issues


def test_twin_completeness_single_orthogonal_vector():
    seen = 0
    for seed in range(400):
        g = erdos_renyi(7, 0.5, seed)
        dec, prof, cls = analyze(g)
        if cls.simple_spectrum and cls.k == 1 and cls.supports == (2,):
            seen += 1
            (t,) = detect_twin_pairs(g, dec, prof)
            assert t.consistent
            grp = {p.map for p in automorphism_group(g).elements}
            assert Permutation.transposition(7, t.s, t.t).map in grp
    assert seen > 0


def test_proposition1_examples():
    g = corpus("fig4").graph
    dec, prof, _ = analyze(g)
    r = verify_proposition1(prof, automorphism_group(g))
    assert r.holds and r.k == 2 and not r.vacuous and r.odd_support_witnesses == ()
    g = corpus("paw").graph
    dec, prof, _ = analyze(g)
    r = verify_proposition1(prof, automorphism_group(g))
    assert r.holds and r.k == 1
    g = corpus("fig3").graph
    dec, prof, _ = analyze(g)
    r = verify_proposition1(prof, automorphism_group(g))
    assert r.holds and r.vacuous


def test_proposition1_not_applicable_without_simple_spectrum():
    g = cycle(6)
    dec, prof, cls = analyze(g)
    r = verify_proposition1(prof, automorphism_group(g), cls.simple_spectrum)
    assert r.holds and not r.applicable


def test_corollary_theorem_implies_trivial_group():
    for seed in range(300):
        g = erdos_renyi(8, 0.5, seed)
        _, _, cls = analyze(g)
        if cls.theorem_sorted:
            assert automorphism_group(g).trivial


def test_conjecture_scan_examples():
    g = corpus("fig4").graph
    dec, prof, _ = analyze(g)
    (f,) = conjecture_scan(g, dec, prof)
    assert len(f.support) == 4 and len(f.vectors) == 2 and f.matches and f.automorphism_confirmed
    assert f.support_is_moved_set

    g = corpus("fig3").graph
    dec, prof, _ = analyze(g)
    (f,) = conjecture_scan(g, dec, prof)
    assert len(f.support) == 4 and len(f.vectors) == 1 and not f.matches

    g = corpus("paw").graph
    dec, prof, _ = analyze(g)
    (f,) = conjecture_scan(g, dec, prof)
    assert f.support == (0, 1) and f.matches and f.automorphism_confirmed


def test_conjecture_scan_invariants():
    for seed in range(100):
        g = erdos_renyi(8, 0.5, seed)
        dec, prof, cls = analyze(g)
        if not cls.simple_spectrum:
            continue
        for f in conjecture_scan(g, dec, prof, confirm=False):
            assert f.automorphism_confirmed is None
            for i in f.vectors:
                assert abs(dec.v[i]) <= 1e-8 * np.sqrt(8)
                assert tuple(np.nonzero(np.abs(dec.U[:, i]) > 1e-8)[0]) == f.support


def test_conjecture_scan_requires_simple_spectrum():
    g = corpus("fig5_left").graph
    dec, prof, _ = analyze(g)
    with pytest.raises(SpectralError):
        conjecture_scan(g, dec, prof)


def test_frucht_fits_the_conjecture_pattern_with_trivial_group():
    # six orthogonal eigenvectors share the full 12-vertex support
    g = corpus("frucht").graph
    dec, prof, _ = analyze(g)
    found = [f for f in conjecture_scan(g, dec, prof) if f.counterexample]
    assert found and len(found[0].support) == 12 and len(found[0].vectors) >= 6
