import math

import numpy as np
import pytest

import rwpoly


def triangle():
    return rwpoly.Graph(3, [0, 1, 0], [1, 2, 2], [1.0, 1.0, 1.0])


def test_graph_basics():
    g = triangle()
    assert g.num_vertices == 3
    assert g.num_edges == 3
    assert g.degrees() == [2.0, 2.0, 2.0]
    u, v, w = g.edges()
    assert list(u) == [0, 0, 1] and list(v) == [1, 2, 2]
    assert g.laplacian_matvec([1.0, 0.0, 0.0]) == [2.0, -1.0, -1.0]
    assert not g.is_bipartite()


def test_dense_g2():
    L2 = rwpoly.dense_poly(triangle(), [0.0, 1.0])
    expected = np.array([[1, -0.5, -0.5], [-0.5, 1, -0.5], [-0.5, -0.5, 1]])
    assert np.allclose(L2, expected)


def test_sparsify_poly_passes_check():
    g = rwpoly.gen.erdos_renyi(60, 0.1, 0.5, 2.0, seed=3)
    alpha = [0.0, 0.5, 0.5]
    h = rwpoly.sparsify_poly(g, alpha, eps=0.5, seed=7)
    rep = rwpoly.similarity_check(h.laplacian(), rwpoly.dense_poly(g, alpha), 0.5)
    assert rep.passed
    assert rep.eps_required <= 0.5


def test_seed_determinism():
    g = rwpoly.gen.erdos_renyi(40, 0.2, seed=4)
    a = rwpoly.sparsify_monomial(g, 3, seed=9).edges()
    b = rwpoly.sparsify_monomial(g, 3, seed=9).edges()
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_errors_are_translated():
    with pytest.raises(rwpoly.RwpolyError, match="Bipartite"):
        rwpoly.sparsify_high_degree(rwpoly.gen.cycle(6), 8, eps=0.5)
    with pytest.raises(ValueError):
        rwpoly.sparsify_poly(triangle(), [0.5, 0.6])


def test_sddm_and_newton():
    m = rwpoly.Sddm([3.0, 3.0], rwpoly.Graph(2, [0], [1], [1.0]))
    out = rwpoly.sparsify_sddm(m, [0.0, 1.0])
    assert np.allclose(out.diag(), [8 / 3, 8 / 3])
    assert rwpoly.qth_root_coefficients(1) == [0.0, 0.75, 0.25]

    g = rwpoly.gen.erdos_renyi(20, 0.3, 0.5, 2.0, seed=5)
    s = rwpoly.gen.sddm_with_slack(g, 0.1, 0.5, seed=6)
    chain = rwpoly.inv_sqrt_chain(s, 0.3)
    C = chain.dense()
    ev = np.linalg.eigvalsh(C @ s.dense() @ C.T)
    assert ev.min() >= 0.7 and ev.max() <= 1.3


def test_resistance_oracle():
    o = rwpoly.ResistanceOracle(triangle(), [1.0], eps=0.1)
    assert o.query(1, 1) == 0.0
    assert abs(o.query(0, 1) - 2 / 3) < 0.07
    assert rwpoly.exact_er(triangle().laplacian(), 0, 1) == pytest.approx(2 / 3)


def test_enumeration_and_scalars():
    assert rwpoly.enumerate_mass(triangle(), 2) == pytest.approx(12.0)
    assert rwpoly.scalar_inequality_violations() == 0
    sched, target, substituted = rwpoly.schedule(10, 0.5)
    assert (sched, target, substituted) == ("2->4->8", 8, True)


def test_cli(tmp_path):
    p = tmp_path / "tri.mtx"
    triangle().save(str(p))
    code, out, err = rwpoly.cli(["enumerate", "-i", str(p), "-r", "2"])
    assert code == 0
    code, _, _ = rwpoly.cli(["sparsify-poly", "--alpha", "0.5,0.6"])
    assert code == 2
