"""Master function of the all-box Gaudin model, Bethe ansatz equations and their solution.

Roots are grouped by simple root ``alpha_i`` (``i = 1..r-1``) and stored as one
flat complex vector together with a group index per entry.  Pairings are
``(alpha_i, alpha_i) = 2``, ``(alpha_i, alpha_{i+1}) = -1`` and
``(alpha_i, epsilon_1) = delta_{i1}``; every point ``z_a`` carries the weight
``epsilon_1``.

Newton steps are taken on the system rescaled by the distance of each root to
its nearest pole, so roots living at very different scales (as they do after
gluing) are corrected with comparable relative accuracy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import mpmath
import numpy as np

from .combinatorics import (Partition, StandardTableau, l_vector, make_partition, part, restrict, size)
from .config import DEFAULT, RunConfig
from .errors import (DegenerateCriticalPoint, DomainError, NoConvergence, PoleError, TransformedUnsolved)
from .polyalg import (EchelonCoordinates, Poly, cell_degrees, coordinate_map, echelon_basis,
                       invert_coordinate_map, track_fiber)


def pairing(i: int, k: int) -> int:
    """``(alpha_i, alpha_k)`` for simple roots of ``sl_r`` (0-based group indices)."""
    if i == k:
        return 2
    return -1 if abs(i - k) == 1 else 0


@dataclass(frozen=True)
class MasterData:
    n: int
    r: int
    mu: Partition
    l: tuple

    @classmethod
    def for_shape(cls, mu: Partition, r: int | None = None) -> "MasterData":
        mu = make_partition(mu)
        r = max(len(mu), 1) if r is None else r
        return cls(size(mu), r, mu, l_vector(mu, r))

    @property
    def m(self) -> int:
        return sum(self.l)

    @cached_property
    def groups(self) -> np.ndarray:
        return np.array([i for i, li in enumerate(self.l) for _ in range(li)], dtype=int)

    @cached_property
    def coupling(self) -> np.ndarray:
        """``(alpha_{g_k}, alpha_{g_m})`` for every pair of roots."""
        g = self.groups
        return np.array([[pairing(a, b) for b in g] for a in g], dtype=float).reshape(len(g), len(g))

    def weight_check(self) -> bool:
        """``mu = n eps_1 - sum l_i alpha_i`` coordinatewise."""
        l = (0,) + self.l + (0,)
        return all(part(self.mu, i) == self.n * (i == 1) - l[i] + l[i - 1] for i in range(1, self.r + 1))

    def split(self, t: Sequence) -> list[list]:
        out, pos = [], 0
        for li in self.l:
            out.append(list(t[pos:pos + li]))
            pos += li
        return out


def _as_z(z) -> np.ndarray:
    z = np.asarray([float(x) for x in z], dtype=float)
    if len(set(z.tolist())) != len(z):
        raise DomainError("repeated parameter in z", z=tuple(z))
    return z


def _differences(md: MasterData, z: np.ndarray, t: np.ndarray):
    """Root-root and root-point differences, with the pole check applied."""
    t = np.asarray(t, dtype=complex)
    if t.shape != (md.m,):
        raise DomainError(f"expected {md.m} roots, got {t.shape}")
    scale = max(1.0, float(np.abs(z).max(initial=0.0)), float(np.abs(t).max(initial=0.0)))
    dt = t[:, None] - t[None, :]
    dz = t[:, None] - z[None, :]
    first = md.groups == 0
    if first.any():
        k, a = np.unravel_index(np.argmin(np.abs(dz[first])), dz[first].shape)
        if abs(dz[first][k, a]) <= 1e-14 * scale:
            raise PoleError("root coincides with a marked point", root=complex(t[first][k]), z=float(z[a]))
    C = md.coupling
    off = (C != 0) & ~np.eye(md.m, dtype=bool)
    if off.any():
        bad = np.abs(dt) <= 1e-14 * scale
        hit = np.argwhere(bad & off)
        if len(hit):
            k, m = hit[0]
            raise PoleError("two interacting roots coincide", pair=(complex(t[k]), complex(t[m])))
    return t, dt, dz, off, first


def pole_distances(md: MasterData, z, t) -> np.ndarray:
    """Distance from each root to the nearest singularity of its equation."""
    z = np.asarray(z, dtype=float)
    t, dt, dz, off, first = _differences(md, z, t)
    out = np.full(md.m, np.inf)
    if off.any():
        out = np.min(np.where(off, np.abs(dt), np.inf), axis=1)
    if first.any() and len(z):
        out[first] = np.minimum(out[first], np.abs(dz[first]).min(axis=1))
    return out


def bae_residual(md: MasterData, z, t) -> np.ndarray:
    """``dS/dt_k`` for every root; zero exactly at a critical point."""
    z = _as_z(z)
    t, dt, dz, off, first = _differences(md, z, t)
    F = np.zeros(md.m, dtype=complex)
    if first.any():
        F[first] -= (1.0 / dz[first]).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(off, md.coupling / np.where(off, dt, 1.0), 0.0)
    return F + inv.sum(axis=1)


def scaled_residual(md: MasterData, z, t) -> float:
    """Largest ``|dS/dt_k|`` times the pole distance of ``t_k``: a scale-free residual."""
    if md.m == 0:
        return 0.0
    return float(np.max(np.abs(bae_residual(md, z, t)) * pole_distances(md, z, t)))


def hessian(md: MasterData, z, t, tol: float = 1e-10) -> tuple[np.ndarray, bool]:
    """Second ``t``-derivatives of ``S`` and a nondegeneracy flag.

    The flag tests the smallest singular value of the pole-distance-scaled
    Hessian against ``tol`` times its largest one.
    """
    z = _as_z(z)
    t, dt, dz, off, first = _differences(md, z, t)
    if md.m == 0:
        return np.zeros((0, 0), dtype=complex), True
    with np.errstate(divide="ignore", invalid="ignore"):
        H = np.where(off, md.coupling / np.where(off, dt, 1.0) ** 2, 0.0).astype(complex)
    diag = -H.sum(axis=1)
    if first.any():
        diag[first] += (1.0 / dz[first] ** 2).sum(axis=1)
    H[np.diag_indices(md.m)] = diag
    D = pole_distances(md, z, t)
    sv = np.linalg.svd(D[:, None] * H * D[None, :], compute_uv=False)
    return H, bool(sv[-1] > tol * sv[0])


def _z_jacobian(md: MasterData, z: np.ndarray, t: np.ndarray) -> np.ndarray:
    """``d(dS/dt_k)/dz_a``."""
    J = np.zeros((md.m, len(z)), dtype=complex)
    first = md.groups == 0
    if first.any():
        J[first] = -1.0 / (t[first][:, None] - z[None, :]) ** 2
    return J


def z_gradient(md: MasterData, z, t) -> np.ndarray:
    """``dS/dz_a``: the eigenvalue of ``H_a(z)`` on the Bethe vector of ``t``."""
    z = _as_z(z)
    t, dt, dz, off, first = _differences(md, z, t)
    G = np.zeros(len(z), dtype=complex)
    for a in range(len(z)):
        G[a] = sum(1.0 / (z[a] - z[b]) for b in range(len(z)) if b != a)
    if first.any():
        G -= (1.0 / (z[None, :] - t[first][:, None])).sum(axis=0)
    return G


@dataclass(frozen=True)
class CriticalPoint:
    md: MasterData
    z: tuple
    roots: tuple  # one tuple of complex roots per group, sorted by (re, im)
    residual: float
    hessian_ok: bool
    hessian_scaled_min_sv: float = 1.0
    tableau: StandardTableau | None = None
    trace: tuple = field(default=(), compare=False)

    @property
    def t(self) -> np.ndarray:
        return np.array([x for grp in self.roots for x in grp], dtype=complex)

    @cached_property
    def y(self) -> tuple[Poly, ...]:
        """Monic root polynomials ``(y_1, ..., y_{r-1})``; real coefficients when the orbit is conjugation-stable."""
        out = []
        for grp in self.roots:
            p = Poly.from_roots([complex(x) for x in grp]) if grp else Poly((1.0,))
            out.append(p.real_part() if p.max_imag() <= 1e-9 * max(1.0, max(abs(c) for c in p.coeffs)) else p)
        return tuple(out)

    def eigenvalues(self) -> np.ndarray:
        g = z_gradient(self.md, self.z, self.t)
        return g.real if np.abs(g.imag).max(initial=0.0) <= 1e-8 * max(1.0, np.abs(g).max(initial=0.0)) else g

    def to_json(self) -> dict:
        return {
            "mu": list(self.md.mu), "r": self.md.r, "z": [float(x) for x in self.z],
            "roots": [[[x.real, x.imag] for x in grp] for grp in self.roots],
            "y": [p.to_json() for p in self.y],
            "residual": self.residual, "hessian_nondegenerate": self.hessian_ok,
            "hessian_scaled_min_sv": self.hessian_scaled_min_sv,
            "tableau": None if self.tableau is None else self.tableau.to_json(),
        }


def canonical_roots(md: MasterData, t) -> tuple:
    return tuple(tuple(sorted((complex(x) for x in grp), key=lambda c: (c.real, c.imag))) for grp in md.split(list(t)))


def _newton_step(md: MasterData, z: np.ndarray, t: np.ndarray) -> np.ndarray:
    F = bae_residual(md, z, t)
    H, _ = hessian(md, z, t)
    D = pole_distances(md, z, t)
    try:
        w = np.linalg.solve(D[:, None] * H * D[None, :], -D * F)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence("singular Hessian in Newton step") from exc
    step = D * w
    # never move a root by more than half its distance to the nearest pole
    ratio = np.max(np.abs(step) / D) if md.m else 0.0
    if ratio > 0.5:
        step *= 0.5 / ratio
    return step


def _finish(md: MasterData, z, t, cfg: RunConfig, trace=(), tableau=None) -> CriticalPoint:
    z = _as_z(z)
    _, ok = hessian(md, z, t, cfg.tol.hessian)
    H, _ = hessian(md, z, t)
    D = pole_distances(md, z, t) if md.m else np.zeros(0)
    sv = np.linalg.svd(D[:, None] * H * D[None, :], compute_uv=False) if md.m else np.ones(1)
    return CriticalPoint(md, tuple(float(x) for x in z), canonical_roots(md, t), scaled_residual(md, z, t), ok,
                         float(sv[-1] / sv[0]), tableau, tuple(trace))


def newton_polish(md: MasterData, z, t0, cfg: RunConfig = DEFAULT, tableau=None) -> CriticalPoint:
    """Newton's method on the Bethe ansatz equations from ``t0``."""
    z = _as_z(z)
    t = np.asarray(t0, dtype=complex).copy()
    tol = cfg.tol.bae_residual
    trace = []
    for it in range(cfg.tol.newton_max_iter + 1):
        res = scaled_residual(md, z, t)
        trace.append(res)
        if res <= tol:
            for _ in range(2):  # a couple of extra steps once inside the basin, kept only if they help
                try:
                    cand = t + _newton_step(md, z, t)
                    cres = scaled_residual(md, z, cand)
                except (NoConvergence, PoleError):
                    break
                if not cres < res:
                    break
                t, res = cand, cres
                trace.append(res)
            if cfg.precision == "float-extended" and md.m:
                t = extended_polish(md, z, t, cfg.extended_dps)
            cp = _finish(md, z, t, cfg, trace, tableau)
            if not cp.hessian_ok:
                raise NoConvergence("converged to a degenerate critical point", trace=trace)
            return cp
        if not np.isfinite(res) or it == cfg.tol.newton_max_iter:
            break
        t = t + _newton_step(md, z, t)
    raise NoConvergence("Newton did not reach the residual tolerance", trace=trace)


def extended_polish(md: MasterData, z, t, dps: int = 32, iters: int = 8) -> np.ndarray:
    """Refine a converged critical point with ``mpmath`` Newton steps at ``dps`` digits."""
    with mpmath.workdps(dps):
        zz = [mpmath.mpf(float(x)) for x in z]
        tt = [mpmath.mpc(complex(x)) for x in t]
        g = md.groups
        C = md.coupling
        for _ in range(iters):
            F = mpmath.matrix(md.m, 1)
            H = mpmath.matrix(md.m, md.m)
            for k in range(md.m):
                if g[k] == 0:
                    for za in zz:
                        F[k] -= 1 / (tt[k] - za)
                        H[k, k] += 1 / (tt[k] - za) ** 2
                for j in range(md.m):
                    if j != k and C[k, j]:
                        w = int(C[k, j])
                        F[k] += w / (tt[k] - tt[j])
                        H[k, j] += w / (tt[k] - tt[j]) ** 2
                        H[k, k] -= w / (tt[k] - tt[j]) ** 2
            step = mpmath.lu_solve(H, -F)
            tt = [tt[k] + step[k] for k in range(md.m)]
            if max(abs(step[k]) for k in range(md.m)) <= mpmath.mpf(10) ** (-dps + 4) * max(1, max(abs(x) for x in tt)):
                break
        return np.array([complex(x) for x in tt], dtype=complex)


@dataclass(frozen=True)
class TransformedSolution:
    lam: Partition
    e: int
    s: tuple
    residual: float
    closed_form_s1: float | None

    @property
    def content(self) -> int:
        return part(self.lam, self.e) + 1 - self.e


def _transformed_system(lam: Partition, e: int, s: np.ndarray):
    k = e - 1
    F = np.zeros(k)
    J = np.zeros((k, k))
    for i in range(k):  # 0-based: equation for s_{i+1}
        w = part(lam, i + 1) - part(lam, i + 2)
        F[i] = w / s[i]
        J[i, i] = -w / s[i] ** 2
        if i == 0:
            F[i] += 1 / (s[i] - 1)
            J[i, i] -= 1 / (s[i] - 1) ** 2
        for j in (i - 1, i + 1):
            if 0 <= j < k:  # move -1/(s_i - s_j) to the left side
                F[i] += 1 / (s[i] - s[j])
                J[i, i] -= 1 / (s[i] - s[j]) ** 2
                J[i, j] += 1 / (s[i] - s[j]) ** 2
    return F, J


def transformed_residual(lam: Partition, e: int, s: Sequence[float]) -> float:
    return float(np.abs(_transformed_system(make_partition(lam), e, np.asarray(s, dtype=float))[0]).max(initial=0.0))


def solve_transformed(lam: Partition, e: int, cfg: RunConfig = DEFAULT) -> TransformedSolution:
    """The unique solution of the two-point equations for adding a box to ``lam`` in row ``e``.

    Every converged start must land on the same point; disagreement is an error.
    """
    lam = make_partition(lam)
    if e not in [i for i in range(1, len(lam) + 2) if i == 1 or part(lam, i) < part(lam, i - 1)]:
        raise DomainError(f"cannot add a box to {lam} in row {e}")
    c = part(lam, e) + 1 - e
    closed = None if e == 1 else 1 - 1 / (part(lam, 1) - c)
    k = e - 1
    if k == 0:
        return TransformedSolution(lam, e, (), 0.0, None)
    rng = np.random.default_rng(cfg.seed)
    found = []
    for start in rng.uniform(0.0, 1.0, size=(cfg.multistarts, k)):
        s = start.copy()
        for _ in range(100):
            try:
                with np.errstate(all="raise"):
                    F, J = _transformed_system(lam, e, s)
                    step = np.linalg.solve(J, -F)
            except (FloatingPointError, np.linalg.LinAlgError):
                break
            poles = np.abs(np.concatenate([s, s - 1, (s[:, None] - s[None, :])[~np.eye(k, dtype=bool)]]))
            lim = 0.5 * poles.min() if len(poles) else 1.0
            if np.abs(step).max() > lim:
                step *= lim / np.abs(step).max()
            s = s + step
            if np.abs(step).max() <= 1e-15 * max(1.0, np.abs(s).max()):
                break
        if not np.all(np.isfinite(s)):
            continue
        F, J = _transformed_system(lam, e, s)
        gaps = np.abs(np.concatenate([[s[0] - 1], (s[:, None] - s[None, :])[~np.eye(k, dtype=bool)]]))
        if np.abs(F).max() <= 1e-10 and gaps.min() > 1e-8 and abs(np.linalg.det(J)) > 1e-12:
            found.append(s)
    if not found:
        raise TransformedUnsolved("no start converged", lam=lam, e=e)
    ref = found[0]
    for s in found[1:]:
        if np.abs(s - ref).max() > 1e-8:
            raise TransformedUnsolved("multistart solutions disagree", first=tuple(ref), other=tuple(s))
    s = np.mean(found, axis=0)
    return TransformedSolution(lam, e, tuple(float(x) for x in s), transformed_residual(lam, e, s), closed)


def rv_glue(base: CriticalPoint, ts: TransformedSolution, R: float, md_new: MasterData) -> np.ndarray:
    """Initial roots for the enlarged problem with the new point at ``R``: old roots plus ``s_i R``."""
    groups = [list(g) for g in base.roots] + [[] for _ in range(md_new.r - 1 - len(base.roots))]
    for i, s in enumerate(ts.s):
        groups[i].append(s * R)
    if tuple(len(g) for g in groups) != md_new.l:
        raise DomainError("gluing data do not match the target weight", have=tuple(len(g) for g in groups),
                          want=md_new.l)
    return np.array([x for g in groups for x in g], dtype=complex)


def _check_ordered(z: np.ndarray) -> None:
    if np.any(np.diff(z) <= 0):
        raise DomainError("z must be strictly increasing", z=tuple(z))


def critical_point_subspace(cp: CriticalPoint) -> EchelonCoordinates:
    """The point of the Schubert cell whose coordinate map is ``(prod(u - z_a), y_1, ..., y_{r-1})``."""
    md = cp.md
    degrees = cell_degrees(md.mu, md.r)
    wr = Poly.from_roots(list(cp.z))
    X = invert_coordinate_map((wr,) + cp.y, md.mu, wr, degrees[0] + 1)
    return echelon_basis(X)


def roots_from_y(md: MasterData, y: Sequence[Poly]) -> np.ndarray:
    out = []
    for li, p in zip(md.l, y):
        if p.degree != li:
            raise DomainError(f"root polynomial has degree {p.degree}, expected {li}")
        if li:
            out.extend(np.roots(np.asarray(p.coeffs, dtype=complex)[::-1]))
    return np.array(out, dtype=complex)


def continue_critical_point(cp: CriticalPoint, path: Callable[[float], Sequence[float]] | Sequence[float],
                            cfg: RunConfig = DEFAULT, h0: float = 0.02) -> CriticalPoint:
    """Carry ``cp`` along ``z = path(tau)``, ``tau`` from 0 to 1 (a target tuple means a straight path).

    Roots of one group may meet at a marked point and turn complex there, which
    is a coordinate singularity of the root description only.  The
    continuation therefore runs on the subspace ``X`` with
    ``Wr(X) = prod(u - z_a(tau))``, a square system that stays regular over
    ordered real ``z``; roots are read off ``theta(X)`` at the end and polished.
    """
    md = cp.md
    z0 = np.asarray(cp.z, dtype=float)
    if not callable(path):
        target = _as_z(path)
        if target.shape != z0.shape:
            raise DomainError("target has the wrong length")
        _check_ordered(z0)
        _check_ordered(target)
        path = (lambda tau, a=z0, b=target: (1 - tau) * a + tau * b)
    if np.abs(np.asarray(path(0.0), dtype=float) - z0).max() > 1e-12 * max(1.0, np.abs(z0).max()):
        raise DomainError("path does not start at the critical point's parameters")
    z1 = _as_z(path(1.0))
    _check_ordered(z1)
    if md.m == 0:
        return _finish(md, z1, np.zeros(0, dtype=complex), cfg, tableau=cp.tableau)
    E = critical_point_subspace(cp)

    def target_of(tau):
        z = np.asarray(path(tau), dtype=float)
        _check_ordered(z)
        return np.poly(z)[::-1].astype(complex)

    vec, _ = track_fiber(E.degrees, np.asarray(E.vector(), dtype=complex), target_of, h0=h0)
    E1 = EchelonCoordinates.from_vector(E.degrees, [complex(x) for x in vec], E.d)
    y = coordinate_map(E1)[1:]
    return newton_polish(md, z1, roots_from_y(md, y), cfg, cp.tableau)


def glue_scale(z: Sequence[float], cfg: RunConfig = DEFAULT) -> float:
    return cfg.asymptotic_scale * (1.0 + float(np.abs(np.asarray(z, dtype=float)).max(initial=0.0)))


def generic_offsets(z: np.ndarray) -> np.ndarray:
    """Small deterministic shifts (below a tenth of the smallest gap) breaking accidental symmetries of ``z``."""
    n = len(z)
    if n < 2:
        return np.zeros(n)
    gap = float(np.diff(z).min())
    golden = (math.sqrt(5) - 1) / 2
    return 0.1 * gap * np.array([(i * golden) % 1.0 for i in range(1, n + 1)])


@dataclass(frozen=True)
class GluingStep:
    k: int
    lam: Partition
    e: int
    s: tuple
    closed_form_s1: float | None
    R: float
    residual: float


@dataclass(frozen=True)
class MarcusConstruction:
    """Result of the box-by-box construction for one tableau."""

    tableau: StandardTableau
    z: tuple
    subspace: EchelonCoordinates
    y: tuple
    steps: tuple
    generic_z: tuple


def marcus_construction(T: StandardTableau, z: Sequence[float], r: int | None = None,
                        cfg: RunConfig = DEFAULT) -> MarcusConstruction:
    """Build the point attached to ``T`` one box at a time.

    The construction runs at ``w = z + generic_offsets(z)``.  Box ``k`` is
    glued with its point at ``R = scale * (1 + max|w_1..w_{k-1}|)`` on top of
    the critical point for ``T|_{k-1}``, polished in root coordinates, and
    moved from ``R`` to ``w_k`` along a geometric path of gaps.  Finally the
    subspace is carried from ``w`` to ``z`` in cell coordinates, which remain
    regular even where the roots do not.
    """
    z = _as_z(z)
    if len(z) != T.n:
        raise DomainError(f"|mu| = {T.n} must equal n = {len(z)}")
    _check_ordered(z)
    r = max(len(T.shape), 1) if r is None else r
    if len(T.shape) > r:
        raise DomainError(f"{T.shape} has more than r = {r} rows")
    w = z + generic_offsets(z)
    md = MasterData.for_shape(restrict(T, 1).shape, r)
    cp = _finish(md, w[:1], np.zeros(0, dtype=complex), cfg, tableau=restrict(T, 1))
    steps = []
    for k in range(2, T.n + 1):
        Tk = restrict(T, k)
        lam = restrict(T, k - 1).shape
        e = T.row_of(k)
        ts = solve_transformed(lam, e, cfg)
        R = glue_scale(w[:k - 1], cfg)
        md_k = MasterData.for_shape(Tk.shape, r)
        guess = rv_glue(cp, ts, R, md_k)
        cp = newton_polish(md_k, np.append(w[:k - 1], R), guess, cfg, Tk)
        prev, g0, g1 = w[k - 2], R - w[k - 2], w[k - 1] - w[k - 2]

        def path(tau, head=w[:k - 1], prev=prev, g0=g0, g1=g1):
            return np.append(head, prev + g0 ** (1 - tau) * g1 ** tau if tau < 1 else prev + g1)

        cp = continue_critical_point(cp, path, cfg)
        steps.append(GluingStep(k, lam, e, ts.s, ts.closed_form_s1, R, ts.residual))
    E = critical_point_subspace(cp)
    if np.any(w != z):
        def target_of(tau):
            return np.poly((1 - tau) * w + tau * z)[::-1].astype(complex)

        vec, _ = track_fiber(E.degrees, np.asarray(E.vector(), dtype=complex), target_of)
        E = EchelonCoordinates.from_vector(E.degrees, [complex(x) for x in vec], E.d)
    y = coordinate_map(E)[1:]
    return MarcusConstruction(T, tuple(float(x) for x in z), E, tuple(y), tuple(steps), tuple(float(x) for x in w))


def critical_point_from_y(md: MasterData, z, y: Sequence[Poly], cfg: RunConfig = DEFAULT, tableau=None,
                          separation: float = 1e-6) -> CriticalPoint:
    """Polish the roots of ``y`` into a certified critical point, or explain why there is none."""
    z = _as_z(z)
    t = roots_from_y(md, y)
    scale = max(1.0, float(np.abs(z).max()))
    if md.m:
        D = pole_distances(md, z, t)
        if D.min() <= separation * scale:
            raise DegenerateCriticalPoint("roots of the root polynomials meet a marked point or each other",
                                          min_distance=float(D.min()), roots=tuple(t))
    try:
        return newton_polish(md, z, t, cfg, tableau)
    except (NoConvergence, PoleError) as exc:
        gap = float(pole_distances(md, z, t).min()) if md.m else math.inf
        nearest = float(np.abs(t[:, None] - z[None, :]).min()) if md.m else math.inf
        raise DegenerateCriticalPoint(f"root coordinates do not certify ({exc}); nearest singularity at {gap:.1e}, "
                                      f"nearest marked point at {nearest:.1e}", roots=tuple(t)) from exc


def marcus_critical_point(T: StandardTableau, z: Sequence[float], r: int | None = None, cfg: RunConfig = DEFAULT,
                          record: list | None = None) -> CriticalPoint:
    """The critical point attached to ``T`` at ``z`` (see ``marcus_construction``)."""
    mc = marcus_construction(T, z, r, cfg)
    if record is not None:
        record.extend(mc.steps)
    md = MasterData.for_shape(T.shape, mc.subspace.r)
    return critical_point_from_y(md, z, mc.y, cfg, T)


def glued_critical_point(T: StandardTableau, z: Sequence[float], r: int | None = None,
                         cfg: RunConfig = DEFAULT, record: list | None = None) -> CriticalPoint:
    """Critical point for widely separated ``z``, glued box by box directly at ``z_k``.

    Meant for ``z_k / z_{k-1}`` large, where each glued guess already lies in
    the Newton basin; no continuation and no cell coordinates are involved,
    so dynamic ranges far beyond double-precision Wronskians are fine.
    """
    z = _as_z(z)
    if len(z) != T.n:
        raise DomainError(f"|mu| = {T.n} must equal n = {len(z)}")
    _check_ordered(z)
    r = max(len(T.shape), 1) if r is None else r
    md = MasterData.for_shape(restrict(T, 1).shape, r)
    cp = _finish(md, z[:1], np.zeros(0, dtype=complex), cfg, tableau=restrict(T, 1))
    for k in range(2, T.n + 1):
        Tk = restrict(T, k)
        lam = restrict(T, k - 1).shape
        ts = solve_transformed(lam, T.row_of(k), cfg)
        md_k = MasterData.for_shape(Tk.shape, r)
        guess = rv_glue(cp, ts, float(z[k - 1]), md_k)
        cp = newton_polish(md_k, z[:k], guess, cfg, Tk)
        if record is not None:
            record.append(GluingStep(k, lam, T.row_of(k), ts.s, ts.closed_form_s1, float(z[k - 1]), ts.residual))
    return cp
