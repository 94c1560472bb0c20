"""Reference values used by the C++ tests, recomputed with numpy alone.

The C++ suites hard-code these numbers; this file is where they come from.
Nothing here imports the library.
"""

import itertools
import math
import pathlib

import numpy as np

REFERENCE_TEXT = pathlib.Path(__file__).resolve().parents[2] / "paper.md"


def laplacian(n, edges):
    L = np.zeros((n, n))
    for u, v, w in edges:
        L[u, v] -= w
        L[v, u] -= w
        L[u, u] += w
        L[v, v] += w
    return L


def poly(D, A, alpha):
    Dinv = np.diag(1 / np.diag(D))
    out = D.copy()
    P = np.eye(len(D))
    for a in alpha:
        P = P @ Dinv @ A
        out -= a * D @ P
    return out


TRI = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]
A_TRI = -laplacian(3, TRI) + np.diag(np.diag(laplacian(3, TRI)))
D_TRI = np.diag(A_TRI.sum(1))


def test_triangle_g2():
    G2 = poly(D_TRI, A_TRI, [0, 1])
    assert np.allclose(G2, [[1, -0.5, -0.5], [-0.5, 1, -0.5], [-0.5, -0.5, 1]])
    assert np.allclose(G2, 2 * np.eye(3) - A_TRI @ A_TRI / 2)


def test_triangle_resistances():
    L = laplacian(3, TRI)
    e = np.array([1.0, -1.0, 0.0])
    assert math.isclose(e @ np.linalg.pinv(L) @ e, 2 / 3)
    G2 = poly(D_TRI, A_TRI, [0, 1])
    assert math.isclose(e @ np.linalg.pinv(G2) @ e, 4 / 3)


def test_triangle_r3_pencil():
    L = laplacian(3, TRI)
    L3 = poly(D_TRI, A_TRI, [0, 0, 1])
    # Both act on the complement of the all-ones vector.
    Q = np.linalg.qr(np.c_[np.ones(3), np.eye(3)[:, :2]])[0][:, 1:]
    ev = np.linalg.eigvals(np.linalg.solve(Q.T @ L @ Q, Q.T @ L3 @ Q))
    assert np.allclose(sorted(ev.real), [0.75, 0.75])


def test_two_by_two_sddm():
    D = np.diag([3.0, 3.0])
    A = np.array([[0, 1.0], [1.0, 0]])
    assert np.allclose(poly(D, A, [0, 1]), np.diag([8 / 3, 8 / 3]))
    cubic = poly(D, A, [0, 0.75, 0.25])
    assert np.allclose(cubic, [[2.75, -1 / 36], [-1 / 36, 2.75]])


def test_triangle_with_slack_cubic():
    D = 2.5 * np.eye(3)
    cubic = poly(D, A_TRI, [0, 0.75, 0.25])
    assert np.allclose(np.diag(cubic), 1.82)
    assert np.allclose(cubic[0, 1], -0.42)
    # D^-1 A has eigenvalues 0.8 and -0.4.
    assert np.allclose(sorted(np.linalg.eigvals(A_TRI / 2.5).real), [-0.4, -0.4, 0.8])


def test_stage_one_budget():
    assert math.ceil(4 * math.log(3) / 0.25 * 6) == 106


def test_qth_root_middle_polynomial():
    # (1 + x/4)^4 (1 - x), coefficients low to high.
    p = np.polynomial.Polynomial([1, 0.25]) ** 4 * np.polynomial.Polynomial([1, -1])
    assert np.allclose(p.coef, [1, 0, -0.625, -0.3125, -0.05859375, -0.00390625])
    assert p(0.5) == 0.8009033203125
    q1 = np.polynomial.Polynomial([1, 0.5]) ** 2 * np.polynomial.Polynomial([1, -1])
    assert np.allclose(q1.coef, [1, 0, -0.75, -0.25])


def test_walk_mass_identity():
    for n, edges in [(2, [(0, 1, 1.0)]), (3, TRI), (4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (0, 3, 3.0)])]:
        A = -laplacian(n, edges) + np.diag(np.diag(laplacian(n, edges)))
        d = A.sum(1)
        m = len(edges)
        for r in range(1, 5):
            total = 0.0
            for walk in itertools.product(range(n), repeat=r + 1):
                steps = list(zip(walk, walk[1:]))
                if any(A[a, b] == 0 for a, b in steps):
                    continue
                w = np.prod([A[a, b] for a, b in steps]) / np.prod([d[x] for x in walk[1:-1]])
                z = sum(2 / A[a, b] for a, b in steps)
                total += w * z
            assert math.isclose(total / 2, 2 * r * m, rel_tol=1e-12)


def test_rank_one_resistance():
    a = np.array([1.0, 2.0, 0.5, 3.0])
    dd = 2.0
    s = a.sum()
    L = np.diag(a * s / dd) - np.outer(a, a) / dd
    P = np.linalg.pinv(L)
    for i, j in itertools.combinations(range(4), 2):
        e = np.zeros(4)
        e[i], e[j] = 1, -1
        assert math.isclose(e @ P @ e, dd / s * (1 / a[i] + 1 / a[j]), rel_tol=1e-10)


def test_values_quoted_in_the_reference_text():
    text = REFERENCE_TEXT.read_text()
    assert r"\sum_{\V{p}} w(\V{p}) \cdot Z(\V{p}) = 2 r m." in text
    assert r"\frac{3}{4} \M{D}\cdot(\M{D}^{-1} \M{A})^2" in text
    assert r"\frac{1}{4}\M{D} \cdot(\M{D}^{-1} \M{A})^3" in text
    assert r"\frac{d}{s} (\frac{1}{a_i}+\frac{1}{a_j})." in text
