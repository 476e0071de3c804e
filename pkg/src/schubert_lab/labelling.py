"""Points of the Schubert intersection and their three tableau labels.

* construction: the tableau ``T`` whose critical point produced the point,
* EL: send the last marked point to infinity inside the fibre, read the cell
  of the limit (one box fewer, in some row) and recurse on the limit,
* MTV: match the point's Gaudin eigenvalues to a joint eigenline, carry it
  along ``z_i(t) = z'_i t^i`` and read the Jucys-Murphy contents off the limit.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .bethe import (CriticalPoint, MasterData, critical_point_from_y, marcus_construction)
from .combinatorics import (Partition, StandardTableau, add_box, content_vector, enumerate_syt, fits_box,
                            make_partition, size, tableau_from_contents)
from .config import DEFAULT, RunConfig
from .errors import (CellUndecidable, CollisionError, DegenerateCriticalPoint, DomainError, LabError,
                     LimitUnresolved, SpectralMismatch)
from .polyalg import (EchelonCoordinates, Poly, Subspace, _coefficient_matrix, cell_degrees, coordinate_map, detect_cell,
                      echelon_basis, free_exponents, invert_coordinate_map, proj_distance, solve_fiber, track_fiber, wronskian)
from .repthy import Transport, gaudin_family, joint_spectrum, singular_weight_basis


def _ordered_z(z) -> np.ndarray:
    z = np.asarray([float(x) for x in z], dtype=float)
    if len(set(z.tolist())) != len(z):
        raise DomainError("repeated parameter in z", z=tuple(z))
    if np.any(np.diff(z) <= 0):
        raise DomainError("z must be strictly increasing", z=tuple(z))
    return z


def _as_echelon(X) -> EchelonCoordinates:
    return X if isinstance(X, EchelonCoordinates) else echelon_basis(X)


def _with_d(E: EchelonCoordinates, d: int) -> EchelonCoordinates:
    return EchelonCoordinates(E.degrees, E.rows, d)


def _real_if_close(E: EchelonCoordinates, tol: float) -> tuple[EchelonCoordinates, float]:
    vec = np.asarray(E.vector(), dtype=complex)
    scale = max(1.0, float(np.abs(vec).max(initial=0.0)))
    imag = float(np.abs(vec.imag).max(initial=0.0)) / scale
    if imag <= tol:
        E = EchelonCoordinates.from_vector(E.degrees, [float(x.real) for x in vec], E.d)
    return E, imag


def subspace_eigenvalues(X, z) -> np.ndarray:
    """Gaudin eigenvalues ``H_a(z)`` on the eigenline attached to ``X``.

    ``X`` is the kernel of ``D = d^r + c_1 d^{r-1} + c_2 d^{r-2} + ...`` and
    the eigenvalue is ``sum_{b != a} 1/(z_a - z_b) - Res_{z_a} c_2``.  With a
    root polynomial ``y_1`` at hand the residue equals ``y_1'(z_a)/y_1(z_a)``;
    computed from ``X`` it stays finite when roots of ``y_1`` reach ``z_a``.
    """
    E = _as_echelon(X)
    z = np.asarray(z, dtype=float)
    rows = E.rows
    r = len(rows)
    derivs = [[row.deriv(k) if k else row for row in rows] for k in range(r + 1)]
    out = np.zeros(len(z), dtype=complex)
    for a, za in enumerate(z):
        vals = np.array([[complex(p(za)) for p in derivs[k]] for k in range(r + 1)])
        w1 = np.linalg.det(vals[list(range(r - 1)) + [r]])
        m2 = np.linalg.det(vals[list(range(r - 2)) + [r - 1, r]]) if r >= 2 else 0.0
        out[a] = sum(1.0 / (za - zb) for b, zb in enumerate(z) if b != a) - m2 / w1
    if np.abs(out.imag).max(initial=0.0) <= 1e-8 * max(1.0, np.abs(out).max(initial=0.0)):
        return out.real
    return out


@dataclass(frozen=True)
class LabelledPoint:
    X: EchelonCoordinates
    tableau: StandardTableau  # construction route
    z: tuple
    y: tuple  # root polynomials of the critical point the point was built from
    critical_point: CriticalPoint | None
    bethe_status: str
    eigenvalues: tuple
    imag: float
    wronskian_distance: float
    provenance: tuple = ("construction",)

    def theta(self) -> tuple[Poly, ...]:
        return coordinate_map(self.X)

    def theta_distance(self) -> float:
        th = self.theta()[1:]
        return max((proj_distance(a, b) for a, b in zip(th, self.y)), default=0.0)


def _validate_instance(z, mu, r, d):
    mu = make_partition(mu)
    z = _ordered_z(z)
    if size(mu) != len(z):
        raise DomainError(f"|mu| = {size(mu)} must equal n = {len(z)}")
    if not fits_box(mu, r, d):
        raise DomainError(f"{mu} does not fit the {r} x {d - r} box")
    return z, mu


def solve_intersection(z: Sequence[float], mu: Partition, r: int, d: int, cfg: RunConfig = DEFAULT) -> list[LabelledPoint]:
    """One point per standard tableau, rebuilt from its critical point."""
    z, mu = _validate_instance(z, mu, r, d)
    tol = cfg.tol
    wr_target = Poly.from_roots(list(z))
    md = MasterData.for_shape(mu, r)
    points = []
    for T in enumerate_syt(mu):
        mc = marcus_construction(T, z, r, cfg)
        try:
            cp = critical_point_from_y(md, z, mc.y, cfg, T)
            y, status = cp.y, "nondegenerate"
            E = echelon_basis(invert_coordinate_map((wr_target,) + y, mu, wr_target, d, tol.roundtrip))
        except DegenerateCriticalPoint as exc:
            # the subspace is fine; only its root coordinates collapse at this z
            cp, y, status = None, mc.y, f"degenerate: {exc}"
            E = mc.subspace
        E, imag = _real_if_close(_with_d(E, d), tol.realness)
        if detect_cell(E.subspace(), r, d, tol.pivot) != mu:
            raise CellUndecidable("reconstructed point left the cell", tableau=T.to_json())
        wdist = proj_distance(wronskian(E.rows)[0], wr_target)
        ev = subspace_eigenvalues(E, z)
        points.append(LabelledPoint(E, T, tuple(z), tuple(y), cp, status, tuple(np.atleast_1d(ev).tolist()), imag, wdist))
    for p, q in itertools.combinations(points, 2):
        a, b = np.asarray(p.X.vector(), dtype=complex), np.asarray(q.X.vector(), dtype=complex)
        sep = float(np.abs(a - b).max(initial=0.0)) / max(1.0, float(np.abs(a).max(initial=0.0)))
        if len(a) and sep <= tol.collision:
            raise CollisionError("two tableaux produced the same point", first=p.tableau.to_json(),
                                 second=q.tableau.to_json(), separation=sep)
    return points


def min_separation(points: Sequence[LabelledPoint]) -> float:
    out = math.inf
    for p, q in itertools.combinations(points, 2):
        a, b = np.asarray(p.X.vector(), dtype=complex), np.asarray(q.X.vector(), dtype=complex)
        out = min(out, float(np.abs(a - b).max(initial=0.0)))
    return out


# ---------------------------------------------------------------- elementary labelling

@dataclass
class SectionStep:
    """One level of the elementary recursion: the section ``X(s)`` for ``s`` from ``z_n`` to infinity."""

    n: int
    mu: Partition
    row: int
    lam: Partition
    growth: float  # decades gained by the dominant Pluecker coordinates over the last decade of s
    divergence: float  # dominant Pluecker coordinate relative to the one of the starting cell
    above_pivot: float  # leftover weight above the limit pivots, O(1/s)
    a_e1: complex  # coefficient of u^(d_e - 1) in row e at the end of the section
    a_e1_growth: float  # its decades gained over the last decade of s (about 1: linear in s)
    confirm_shift: float
    theta_distances: dict = field(default_factory=dict)  # decade -> distance of theta(X(s)) to theta(X_inf)


def _target_section(z_head: np.ndarray, zn: float, gap: float, reach: float) -> Callable[[float], np.ndarray]:
    L = math.log1p(reach)
    base = np.poly(z_head) if len(z_head) else np.array([1.0])

    def target(tau):
        s = zn + gap * math.expm1(L * tau)
        return np.polymul(base, [1.0, -s])[::-1].astype(complex)

    return target


def _plucker(A: np.ndarray) -> dict:
    r, w = A.shape
    return {I: complex(np.linalg.det(A[:, list(I)])) for I in itertools.combinations(range(w), r)}


def _pivot_key(I) -> tuple:
    return tuple(sorted(I, reverse=True))


def section_limit(X, z, cfg: RunConfig = DEFAULT, decades: Sequence[int] = (3, 4)) -> tuple[EchelonCoordinates, SectionStep]:
    """Follow ``X(s)`` in the fibre over ``(z_1..z_{n-1}, s)`` to ``s -> infinity``; return the limit and its record.

    The limit cell is read from Pluecker coordinates: those growing fastest
    span the limit, and the lexicographically largest of them is its pivot set.
    Echelon rows are no good for this since rows above the one losing a box
    pick up divergent lower coefficients as well.
    """
    E = _as_echelon(X)
    z = _ordered_z(z)
    n = len(z)
    if n < 2:
        raise DomainError("a section needs at least two marked points")
    r, degrees, mu = E.r, E.degrees, E.mu
    gap = z[-1] - z[-2]
    reach = cfg.section_reach
    L = math.log1p(reach)
    top = int(round(math.log10(reach)))
    probe = sorted(set(range(max(1, top - 1), top)) | {k for k in decades if 0 < k < top})
    taus = {k: math.log1p(10.0 ** k) / L for k in probe}
    target = _target_section(z[:-1], z[-1], gap, reach)
    vec, saved = track_fiber(degrees, np.asarray(E.vector(), dtype=complex), target, checkpoints=list(taus.values()))
    A0 = _coefficient_matrix(degrees, saved[taus[top - 1]])
    A1 = _coefficient_matrix(degrees, vec)
    p0, p1 = _plucker(A0), _plucker(A1)
    m1 = max(abs(v) for v in p1.values())
    alive = [I for I in p1 if abs(p1[I]) >= 1e-4 * m1]
    growth = {I: math.log10(abs(p1[I]) / abs(p0[I])) if abs(p0[I]) > 0 else math.inf for I in alive}
    gmax = max(growth.values())
    support = [I for I in alive if growth[I] >= gmax - 0.5]
    pivots = max(support, key=_pivot_key)
    lam_degrees = _pivot_key(pivots)
    drops = [i for i in range(r) if lam_degrees[i] != degrees[i]]
    if len(drops) != 1 or degrees[drops[0]] - lam_degrees[drops[0]] != 1:
        raise CellUndecidable("limit cell is not the cell with one box removed", degrees=degrees, limit=lam_degrees)
    e = drops[0]
    divergence = m1 / abs(p1[tuple(sorted(degrees))])
    if divergence < cfg.tol.divergence:
        raise CellUndecidable("section did not diverge from its starting cell", divergence=divergence)
    lam = make_partition(lam_degrees[i] - (r - 1 - i) for i in range(r))
    a_e1, a_e1_before = A1[e, degrees[e] - 1], A0[e, degrees[e] - 1]
    a_growth = math.log10(abs(a_e1) / abs(a_e1_before)) if abs(a_e1_before) > 0 else math.inf
    B = np.linalg.solve(A1[:, list(lam_degrees)], A1)
    above = max((abs(B[i, k]) for i in range(r) for k in range(lam_degrees[i] + 1, B.shape[1])), default=0.0)
    g0 = np.array([B[i, k] for i in range(r) for k in free_exponents(lam_degrees, i)], dtype=complex)
    solved = solve_fiber(lam_degrees, g0, np.poly(z[:-1])[::-1].astype(complex))
    shift = float(np.abs(solved - g0).max(initial=0.0)) / max(1.0, float(np.abs(solved).max(initial=0.0)))
    if shift > 1e-4:
        raise CellUndecidable("limit confirmation moved too far", shift=shift)
    X_inf = EchelonCoordinates.from_vector(lam_degrees, [complex(x) for x in solved], E.d)
    X_inf, _ = _real_if_close(X_inf, cfg.tol.realness)
    theta_inf = coordinate_map(X_inf)
    dists = {}
    for k in decades:
        if k in taus:
            th = coordinate_map(EchelonCoordinates.from_vector(degrees, [complex(x) for x in saved[taus[k]]], E.d))
            dists[k] = max(proj_distance(a, b) for a, b in zip(th[1:], theta_inf[1:])) if r > 1 else 0.0
    step = SectionStep(n, mu, e + 1, lam, float(gmax), float(divergence), float(above), complex(a_e1), float(a_growth),
                       shift, dists)
    return X_inf, step


def elementary_label(X, z, cfg: RunConfig = DEFAULT, record: list | None = None) -> StandardTableau:
    """EL(X): recursive label from the cells reached as the last point runs to infinity."""
    E = _as_echelon(X)
    z = _ordered_z(z)
    n = len(z)
    if size(E.mu) != n:
        raise DomainError(f"point lies in the cell of {E.mu}, which does not have {n} boxes")
    if n == 1:
        return StandardTableau(((1,),))
    X_inf, step = section_limit(E, z, cfg)
    if record is not None:
        record.append(step)
    lam = detect_cell(X_inf.subspace(), X_inf.r, X_inf.d, cfg.tol.pivot)
    if lam != step.lam:
        raise CellUndecidable("cell of the limit disagrees with the diverging row", detected=lam, expected=step.lam)
    inner = elementary_label(X_inf, z[:-1], cfg, record)
    rows = [list(row) for row in inner.rows] + [[]]
    rows[step.row - 1].append(n)
    T = StandardTableau(tuple(tuple(row) for row in rows if row))
    if T.shape != add_box(lam, step.row):
        raise CellUndecidable("label does not have the shape of the point", shape=T.shape)
    return T


# ---------------------------------------------------------------- MTV labelling

@lru_cache(maxsize=64)
def _basis(n: int, mu: Partition):
    return singular_weight_basis(n, max(len(mu), 1), mu)


@lru_cache(maxsize=64)
def gaudin_spectrum(z: tuple, mu: Partition):
    B = _basis(len(z), mu)
    return B, tuple(joint_spectrum(gaudin_family([float(x) for x in z], B)))


@dataclass(frozen=True)
class SpectralLabel:
    tableau: StandardTableau
    line_index: int
    match_distance: float
    runner_up: float
    t_final: float
    snap_distance: float
    limit_values: tuple


def match_eigenline(eigenvalues: Sequence[float], spectrum, cfg: RunConfig = DEFAULT) -> tuple[int, float, float]:
    ev = np.asarray(eigenvalues, dtype=float)
    dists = sorted((float(np.abs(ev - np.asarray(line.values)).max()), k) for k, line in enumerate(spectrum))
    best, k = dists[0]
    runner = dists[1][0] if len(dists) > 1 else math.inf
    if best > cfg.tol.eigen_match:
        raise SpectralMismatch("no eigenline matches the point's eigenvalues", distance=best)
    if runner <= cfg.tol.eigen_match_margin:
        raise SpectralMismatch("eigenvalue match is not unique", best=best, runner_up=runner)
    return k, best, runner


def mtv_label(X, z, cfg: RunConfig = DEFAULT, eigenvalues: Sequence[float] | None = None) -> SpectralLabel:
    """MTV(X): spectral matching at ``z`` followed by transport to the Jucys-Murphy limit."""
    E = _as_echelon(X)
    z = _ordered_z(z)
    mu = E.mu
    if size(mu) != len(z):
        raise DomainError(f"point lies in the cell of {mu}, which does not have {len(z)} boxes")
    ev = subspace_eigenvalues(E, z) if eigenvalues is None else np.asarray(eigenvalues)
    if np.iscomplexobj(ev):
        raise SpectralMismatch("eigenvalues of the point are not real", imag=float(np.abs(ev.imag).max()))
    B, spectrum = gaudin_spectrum(tuple(float(x) for x in z), mu)
    k, best, runner = match_eigenline(ev, spectrum, cfg)
    tr = Transport(tuple(float(x) for x in z), B, np.asarray(spectrum[k].vector, dtype=float))
    t = cfg.transport_t0
    accept = cfg.tol.snap - 0.05  # snap distances within 0.05 of the limit count as near-ties
    while True:
        tr.advance(t)
        vals = tr.values()
        snapped = np.rint(vals)
        dist = float(np.abs(vals - snapped).max(initial=0.0))
        if dist < accept:
            break
        if t >= cfg.transport_tmax:
            raise LimitUnresolved("eigenvalues did not settle near integers", t=t, values=tuple(vals), distance=dist)
        t = min(10 * t, cfg.transport_tmax)
    try:
        T = tableau_from_contents([int(c) for c in snapped])
    except DomainError as exc:
        raise LimitUnresolved("limit contents do not form a standard tableau", contents=tuple(snapped)) from exc
    if T.shape != mu:
        raise LimitUnresolved("limit tableau has the wrong shape", shape=T.shape, mu=mu)
    return SpectralLabel(T, k, best, runner, t, dist, tuple(float(v) for v in vals))


# ---------------------------------------------------------------- agreement certificate

def _err(exc: Exception) -> dict:
    if isinstance(exc, LabError):
        return exc.as_dict()
    return {"code": "internal", "message": f"{type(exc).__name__}: {exc}"}


@dataclass
class Certificate:
    instance: dict
    config: dict
    points: list
    passed: bool
    error: dict | None = None

    def to_json(self) -> dict:
        return {"tool": "schubert_lab", "version": __version__, "instance": self.instance, "config": self.config,
                "passed": self.passed, "points": self.points, "error": self.error}


def _round(x: float, digits: int = 12) -> float:
    """Rounded floats keep certificates byte-identical across runs and platforms."""
    return float(f"{x:.{digits}g}") if math.isfinite(x) else x


def verify_agreement(z: Sequence[float], mu: Partition, r: int, d: int, cfg: RunConfig = DEFAULT) -> Certificate:
    """Run all three labellings on every point of the intersection and compare."""
    z_arr, mu = _validate_instance(z, mu, r, d)
    instance = {"r": r, "d": d, "mu": list(mu), "z": [_round(x, 17) for x in z_arr]}
    config = cfg.as_dict()
    try:
        points = solve_intersection(z_arr, mu, r, d, cfg)
    except LabError as exc:
        return Certificate(instance, config, [], False, _err(exc))
    records, ok_all = [], True
    for p in points:
        rec = {"construction": p.tableau.to_json(), "bethe": p.bethe_status,
               "residual": None if p.critical_point is None else _round(p.critical_point.residual, 6),
               "imag": _round(p.imag, 6), "wronskian_distance": _round(p.wronskian_distance, 6),
               "theta_distance": _round(p.theta_distance(), 6),
               "eigenvalues": [_round(v) for v in p.eigenvalues]}
        ok = p.imag <= cfg.tol.realness and p.theta_distance() <= cfg.tol.theta_match \
            and p.wronskian_distance <= cfg.tol.wronskian_match
        try:
            steps: list = []
            el = elementary_label(p.X, z_arr, cfg, steps)
            rec["EL"] = el.to_json()
            rec["EL_rows"] = [s.row for s in steps]
            ok &= el == p.tableau
        except Exception as exc:  # recorded in the certificate, never swallowed silently
            rec["EL"], ok = None, False
            rec["EL_error"] = _err(exc)
        try:
            sl = mtv_label(p.X, z_arr, cfg, p.eigenvalues)
            rec["MTV"] = sl.tableau.to_json()
            rec["MTV_match"] = {"distance": _round(sl.match_distance, 3), "runner_up": _round(sl.runner_up, 6),
                                "t": sl.t_final, "snap_distance": _round(sl.snap_distance, 6)}
            ok &= sl.tableau == p.tableau
        except Exception as exc:
            rec["MTV"], ok = None, False
            rec["MTV_error"] = _err(exc)
        rec["agree"] = bool(ok)
        ok_all &= ok
        records.append(rec)
    if len(points) != len(enumerate_syt(mu)):
        ok_all = False
    return Certificate(instance, config, records, bool(ok_all))


# ---------------------------------------------------------------- continuity of the coordinate map

@dataclass(frozen=True)
class ThetaLimitReport:
    distances: tuple  # (s, distance) pairs
    ratios: tuple
    continuous: bool


def theta_limit_check(family: Callable[[float], Subspace], limit: Subspace, s_values: Sequence[float] = (1e3, 1e4),
                      floor: float = 1e-10) -> ThetaLimitReport:
    """Does ``theta(X(s))`` approach ``theta(lim X(s))`` along ``s_values``?

    Continuity is declared when the last distance is below ``floor`` or every
    decade shrinks the distance by a factor between 5 and 20.
    """
    th_lim = coordinate_map(limit)
    dists = []
    for s in s_values:
        th = coordinate_map(family(s))
        dists.append((float(s), max(proj_distance(a, b) for a, b in zip(th, th_lim))))
    ratios = tuple(a[1] / b[1] if b[1] > 0 else math.inf for a, b in zip(dists, dists[1:]))
    continuous = dists[-1][1] <= floor or (len(ratios) > 0 and all(5 <= q <= 20 for q in ratios))
    return ThetaLimitReport(tuple(dists), ratios, bool(continuous))


def symbolic_theta_limit(basis, s_symbol, u_symbol):
    """Exact ``lim_{s->oo} theta(X(s))`` and ``theta(lim X(s))`` for a family given by sympy expressions.

    The basis must already be in echelon form for generic ``s``.  Limits are
    projective: each polynomial is scaled by the top power of ``s`` in its
    coefficients before ``s`` is sent to infinity, and the results are made monic.
    """
    import sympy as sp

    def proj_limit(expr):
        P = sp.Poly(sp.expand(expr), u_symbol)
        coeffs = P.all_coeffs()
        top = max(sp.degree(c, s_symbol) if c != 0 else -sp.oo for c in coeffs)
        lim = sum(sp.limit(c / s_symbol ** top, s_symbol, sp.oo) * u_symbol ** (len(coeffs) - 1 - i)
                  for i, c in enumerate(coeffs))
        return sp.expand(lim)

    def monic(expr):
        P = sp.Poly(expr, u_symbol)
        return sp.expand(expr / P.LC())

    def theta(polys):
        polys = sorted(polys, key=lambda p: -sp.degree(p, u_symbol))
        return tuple(monic(sp.wronskian(polys[a:], u_symbol)) for a in range(len(polys)))

    lim_of_theta = tuple(monic(proj_limit(y)) for y in theta(basis))
    limit_basis = [proj_limit(b) for b in basis]
    M = sp.Matrix([[sp.Poly(b, u_symbol).coeff_monomial(u_symbol ** k) for k in range(8)] for b in limit_basis])
    if M.rank() < len(basis):
        raise LimitUnresolved("basis vectors collapse in the limit; echelonize first")
    theta_of_lim = theta(limit_basis)
    return lim_of_theta, theta_of_lim
