import json

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from schubert_lab.combinatorics import StandardTableau, enumerate_syt, size
from schubert_lab.config import DEFAULT
from schubert_lab.errors import DomainError
from schubert_lab.labelling import (elementary_label, mtv_label, section_limit,
                                    solve_intersection, subspace_eigenvalues, symbolic_theta_limit,
                                    theta_limit_check, verify_agreement)
from schubert_lab.polyalg import Poly, Subspace, proj_distance, wronskian


@pytest.mark.parametrize("mu,r,z", [((2, 1), 2, [0.0, 1.0, 3.0]), ((2, 2), 2, [0.0, 1.0, 2.5, 4.0]),
                                    ((2, 1, 1), 3, [0.0, 0.5, 2.0, 3.0]), ((3, 2), 3, [-1.0, 0.0, 1.5, 2.0, 4.0])])
def test_subspace_eigenvalues_match_gradient(mu, r, z):
    for p in solve_intersection(z, mu, r, max(mu) + r):
        assert p.critical_point is not None
        g = p.critical_point.eigenvalues()
        assert np.abs(np.asarray(p.eigenvalues) - g).max() <= 1e-9


def test_single_point():
    (p,) = solve_intersection([2.0], (1,), 2, 3)
    assert p.tableau == StandardTableau(((1,),))
    assert proj_distance(wronskian(p.X.rows)[0], Poly((-2.0, 1.0))) <= 1e-14
    assert elementary_label(p.X, [2.0]) == p.tableau
    assert mtv_label(p.X, [2.0]).tableau == p.tableau


def test_single_point_needs_room_in_the_box():
    # a 2 x 0 box holds no boxes at all
    with pytest.raises(DomainError):
        solve_intersection([0.0], (1,), 2, 2)


def test_column_point():
    (p,) = solve_intersection([0.0, 1.0], (1, 1), 2, 3)
    assert proj_distance(wronskian(p.X.rows)[0], Poly((0.0, -1.0, 1.0))) <= 1e-14
    assert elementary_label(p.X, [0.0, 1.0]) == StandardTableau(((1,), (2,)))


def test_row_point_mtv():
    (p,) = solve_intersection([0.0, 1.0], (2,), 2, 4)
    lab = mtv_label(p.X, [0.0, 1.0])
    assert lab.tableau == StandardTableau(((1, 2),))


def test_three_points_real_distinct_and_bijective():
    z = [0.0, 1.0, 2.0]
    pts = solve_intersection(z, (2, 1), 2, 4)
    assert len(pts) == 2
    assert all(p.imag <= 1e-12 for p in pts)
    els = {elementary_label(p.X, z) for p in pts}
    mtvs = {mtv_label(p.X, z).tableau for p in pts}
    assert els == mtvs == set(enumerate_syt((2, 1)))
    contents = sorted(tuple(int(round(v)) for v in mtv_label(p.X, z).limit_values) for p in pts)
    assert contents == [(0, -1, 1), (0, 1, -1)]


def test_section_limit_structure():
    z = [0.0, 1.0, 2.0, 3.0, 4.0]
    for p in solve_intersection(z, (3, 1, 1), 3, 6):
        steps = []
        T = elementary_label(p.X, z, record=steps)
        mu = p.X.mu
        for depth, step in enumerate(steps):
            n = len(z) - depth
            assert size(step.lam) == n - 1
            assert all(a <= b for a, b in zip(step.lam, step.mu))
            assert T.row_of(n) == step.row
            assert abs(step.a_e1) > DEFAULT.tol.divergence
            assert abs(step.a_e1_growth - 1.0) < 0.05  # a_e1 ~ C s
            assert step.above_pivot < 1e-6
        assert steps[0].mu == mu


def test_section_needs_two_points():
    (p,) = solve_intersection([0.0], (1,), 2, 3)
    with pytest.raises(DomainError):
        section_limit(p.X, [0.0])


@pytest.mark.parametrize("z,mu,r,d,count", [([0.0], (1,), 2, 3, 1), ([0.0, 1.0, 2.0], (2, 1), 2, 4, 2),
                                            ([0.0, 1.0, 2.0, 3.0], (2, 2), 2, 4, 2)])
def test_certificates(z, mu, r, d, count):
    cert = verify_agreement(z, mu, r, d)
    assert cert.passed, json.dumps(cert.to_json(), indent=1)
    assert len(cert.points) == count


def test_certificate_is_deterministic():
    a = json.dumps(verify_agreement([0.0, 1.0, 2.0], (2, 1), 2, 4).to_json(), sort_keys=True)
    b = json.dumps(verify_agreement([0.0, 1.0, 2.0], (2, 1), 2, 4).to_json(), sort_keys=True)
    assert a == b


def test_certificate_reports_domain_errors():
    with pytest.raises(DomainError):
        verify_agreement([0.0, 1.0], (2, 1), 2, 4)
    with pytest.raises(DomainError):
        verify_agreement([1.0, 0.0, 2.0], (2, 1), 2, 4)


@settings(max_examples=5)
@given(st.lists(st.floats(-0.1, 0.1), min_size=4, max_size=4))
def test_labels_stable_under_small_perturbations(eps):
    z = [0.0, 1.0, 2.0, 3.0]
    zp = [a + e for a, e in zip(z, eps)]
    for p in solve_intersection(zp, (3, 1), 3, 6):
        assert elementary_label(p.X, zp) == p.tableau
        assert mtv_label(p.X, zp).tableau == p.tableau


def test_remark_family_is_discontinuous():
    rep = theta_limit_check(lambda s: Subspace((Poly((s, 0.0, 1.0)), Poly((0.0, 1.0))), 4),
                            Subspace((Poly((1.0,)), Poly((0.0, 1.0))), 4), (1e3, 1e4, 1e5))
    assert not rep.continuous


def test_column_family_is_continuous():
    # the point over (0, s) for the column shape is span{u^2, u - s/2}
    rep = theta_limit_check(lambda s: Subspace((Poly((0.0, 0.0, 1.0)), Poly((-s / 2, 1.0))), 4),
                            Subspace((Poly((0.0, 0.0, 1.0)), Poly((1.0,))), 4), (1e3, 1e4, 1e5))
    assert rep.continuous
    assert all(5 <= q <= 20 for q in rep.ratios)


def test_constant_family_is_continuous():
    X = Subspace((Poly((1.0, 0.0, 1.0)), Poly((2.0, 1.0))), 4)
    assert theta_limit_check(lambda s: X, X).continuous


def test_remark_family_exact():
    s, u = sp.symbols("s u")
    lim_theta, theta_lim = symbolic_theta_limit([u ** 2 + s, u], s, u)
    assert lim_theta == (sp.Integer(1), u)
    assert theta_lim == (sp.Integer(1), sp.Integer(1))
