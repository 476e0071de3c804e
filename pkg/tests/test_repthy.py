import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from schubert_lab.combinatorics import content_vector, enumerate_syt, partitions_of
from schubert_lab.errors import DomainError, NotCommuting
from schubert_lab.repthy import (OperatorMatrix, Transport, gaudin_family, gaudin_hamiltonian, joint_spectrum,
                                 jucys_murphy, raise_word_vector, singular_weight_basis, swap_word_vector,
                                 weight_words)


def brute_singular_dimension(n, r, mu):
    """Kernel of all raising operators on the weight space, by sympy rank."""
    words = weight_words(n, r, mu)
    rows = {}
    for i in range(1, r):
        for j, w in enumerate(words):
            for img, c in raise_word_vector({w: 1}, i).items():
                rows.setdefault((i, img), [0] * len(words))[j] += c
    if not rows:
        return len(words)
    return len(words) - sp.Matrix(list(rows.values())).rank()


def apply_full(vec, a, z):
    """``H_a(z)`` on a sparse tensor, straight from the definition."""
    out = {}
    for b in range(1, len(z) + 1):
        if b != a:
            w = Fraction(1) / (z[a - 1] - z[b - 1])
            for word, c in swap_word_vector(vec, a, b).items():
                out[word] = out.get(word, 0) + w * c
    return out


@pytest.mark.parametrize("n,r,mu,dim", [(2, 2, (1, 1), 1), (2, 2, (2,), 1), (3, 2, (2, 1), 2)])
def test_basis_examples(n, r, mu, dim):
    B = singular_weight_basis(n, r, mu)
    assert B.dim == dim
    if mu == (1, 1):
        v = B.sparse(0)
        assert v[(1, 2)] == -v[(2, 1)] != 0


def test_basis_dimension_matches_tableaux_and_kernel():
    for n in range(1, 8):
        for mu in partitions_of(n, max_rows=4):
            r = max(len(mu), 1)
            B = singular_weight_basis(n, r, mu)
            assert B.dim == len(enumerate_syt(mu))
            if n <= 5:
                assert B.dim == brute_singular_dimension(n, r, mu)
            for k in range(B.dim):
                for i in range(1, r):
                    assert raise_word_vector(B.sparse(k), i) == {}


def test_too_many_rows():
    with pytest.raises(DomainError):
        singular_weight_basis(3, 2, (1, 1, 1))


@pytest.mark.parametrize("mu,sign", [((2,), 1), ((1, 1), -1)])
def test_two_point_hamiltonian(mu, sign):
    B = singular_weight_basis(2, 2, mu)
    z = [Fraction(0), Fraction(1)]
    H = gaudin_hamiltonian(1, z, B)
    assert H.matrix == [[sign * Fraction(-1)]]


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=4, max_size=4, unique=True))
def test_exact_gaudin_matches_definition_and_sums_to_zero(z):
    B = singular_weight_basis(4, 2, (2, 2))
    H = gaudin_family(z, B)
    for a, op in enumerate(H, start=1):
        for j in range(B.dim):
            lhs = apply_full(B.sparse(j), a, z)
            rhs = {}
            for i in range(B.dim):
                for w, c in B.sparse(i).items():
                    rhs[w] = rhs.get(w, 0) + op.matrix[i][j] * c
            keys = set(lhs) | set(rhs)
            assert all(lhs.get(k, 0) == rhs.get(k, 0) for k in keys)
    total = [[sum(op.matrix[i][j] for op in H) for j in range(B.dim)] for i in range(B.dim)]
    assert all(x == 0 for row in total for x in row)


def test_jucys_murphy_examples():
    B = singular_weight_basis(2, 2, (2,))
    assert jucys_murphy(2, B).matrix == [[1]]
    B3 = singular_weight_basis(3, 2, (2, 1))
    assert all(x == 0 for row in jucys_murphy(1, B3).matrix for x in row)
    lines = joint_spectrum([jucys_murphy(a, B3) for a in (1, 2, 3)])
    assert sorted(tuple(int(v) for v in line.values) for line in lines) == [(0, -1, 1), (0, 1, -1)]


@pytest.mark.parametrize("n", range(1, 6))
def test_jucys_murphy_spectrum_is_contents(n):
    for mu in partitions_of(n, max_rows=4):
        B = singular_weight_basis(n, max(len(mu), 1), mu)
        lines = joint_spectrum([jucys_murphy(a, B) for a in range(1, n + 1)])
        assert sorted(tuple(line.values) for line in lines) == sorted(content_vector(T) for T in enumerate_syt(mu))


def test_one_by_one_family():
    lines = joint_spectrum([OperatorMatrix([[Fraction(3, 2)]], "polytabloid")])
    assert len(lines) == 1 and lines[0].values == (Fraction(3, 2),)


def test_noncommuting_rejected():
    A = OperatorMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]), "orthonormal")
    Bm = OperatorMatrix(np.array([[1.0, 0.0], [0.0, -1.0]]), "orthonormal")
    with pytest.raises(NotCommuting):
        joint_spectrum([A, Bm])


def test_gaudin_spectrum_example():
    B = singular_weight_basis(3, 2, (2, 1))
    lines = joint_spectrum(gaudin_family([0.0, 1.0, 4.0], B))
    assert len(lines) == 2
    vals = np.array([line.values for line in lines])
    assert np.abs(vals[0] - vals[1]).max() > 1e-6
    # float and exact frames give the same spectrum
    exact = joint_spectrum(gaudin_family([Fraction(0), Fraction(1), Fraction(4)], B))
    ex = sorted(tuple(float(np.real(v)) for v in line.values) for line in exact)
    assert np.allclose(sorted(map(tuple, vals)), ex, atol=1e-12)


@given(st.lists(st.floats(-10, 10), min_size=5, max_size=5), st.sampled_from([(3, 2), (2, 2, 1), (3, 1, 1)]))
def test_gaudin_commutes_and_real_simple(z, mu):
    z = sorted(z)
    if min(np.diff(z)) < 0.1:
        return
    B = singular_weight_basis(5, len(mu), mu)
    H = [op.as_float() for op in gaudin_family(z, B)]
    scale = max(np.abs(M).max() for M in H)
    for A, C in itertools.combinations(H, 2):
        assert np.abs(A @ C - C @ A).max() <= 1e-12 * scale ** 2
    lines = joint_spectrum(gaudin_family(z, B))
    vals = np.array([line.values for line in lines])
    assert np.isrealobj(vals)
    for i, j in itertools.combinations(range(len(vals)), 2):
        assert np.abs(vals[i] - vals[j]).max() > 1e-6


def test_transport_limits_are_contents():
    z = (0.0, 1.0, 2.0, 3.0)
    for mu in [(2, 2), (3, 1), (2, 1, 1)]:
        B = singular_weight_basis(4, len(mu), mu)
        lines = joint_spectrum(gaudin_family(list(z), B))
        got = []
        for line in lines:
            tr = Transport(z, B, np.asarray(line.vector, dtype=float))
            errs = []
            for t in (1e2, 1e3, 1e4):
                tr.advance(t)
                v = tr.values()
                errs.append(np.abs(v - np.rint(v)).max())
            assert 5 <= errs[0] / errs[1] <= 20 and 5 <= errs[1] / errs[2] <= 20
            got.append(tuple(int(x) for x in np.rint(tr.values())))
        assert sorted(got) == sorted(content_vector(T) for T in enumerate_syt(mu))


def test_transport_runs_forward_only():
    B = singular_weight_basis(2, 2, (2,))
    tr = Transport((0.0, 1.0), B, np.array([1.0]), t=10.0)
    with pytest.raises(DomainError):
        tr.advance(1.0)
