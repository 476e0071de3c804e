"""Univariate polynomials, Wronskians and echelon coordinates on Schubert cells.

Polynomials carry coefficients in ascending degree over either the exact
rationals (``fractions.Fraction``) or complex/real floats.  A subspace of
``C_{<d}[u]`` is stored as a basis plus the ambient bound ``d``.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Number
from typing import Callable, Sequence

import numpy as np

from . import exact
from .combinatorics import Partition, fits_box, l_vector, make_partition, part, size
from .errors import CellUndecidable, DomainError, PathStuck, ReconstructionDegenerate

_NOISE = 1e4 * np.finfo(float).eps


class ConditioningWarning(UserWarning):
    """A float pivot fell below the configured tolerance without being clearly zero."""


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def _zero_like(x):
    return Fraction(0) if _is_exact(x) else 0.0


@dataclass(frozen=True)
class Poly:
    coeffs: tuple

    def __post_init__(self):
        c = tuple(self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "Poly":
        return cls((0,) * k + (coeff,))

    @classmethod
    def from_roots(cls, roots: Sequence) -> "Poly":
        p = cls((1,))
        for t in roots:
            p = p * cls((-t, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs)

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def padded(self, length: int) -> list:
        return [self.coeff(k) for k in range(length)]

    def __add__(self, other: "Poly") -> "Poly":
        m = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coeff(k) + other.coeff(k) for k in range(m)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Number):
            return Poly(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return Poly(())
        out = [_zero_like(self.coeffs[0])] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def deriv(self, order: int = 1) -> "Poly":
        c = list(self.coeffs)
        for _ in range(order):
            c = [k * c[k] for k in range(1, len(c))]
        return Poly(tuple(c))

    def monic(self) -> tuple["Poly", object]:
        """Return ``(p / lead, lead)``; the zero polynomial maps to ``(0, 0)``."""
        if not self.coeffs:
            return self, 0
        lead = self.lead
        if _is_exact(lead):
            return Poly(tuple(Fraction(c) / lead for c in self.coeffs)), lead
        return Poly(tuple(c / lead for c in self.coeffs)), lead

    def astype(self, kind) -> "Poly":
        return Poly(tuple(kind(c) for c in self.coeffs))

    def real_part(self) -> "Poly":
        return Poly(tuple(complex(c).real for c in self.coeffs))

    def max_imag(self) -> float:
        return max((abs(complex(c).imag) for c in self.coeffs), default=0.0)

    def to_json(self) -> list:
        return [coeff_to_json(c) for c in self.coeffs]

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c != 0:
                terms.append(f"{c}" if k == 0 else f"{c}*u^{k}")
        return "Poly(" + " + ".join(terms) + ")"


def coeff_to_json(c):
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    if isinstance(c, int):
        return f"{c}/1"
    z = complex(c)
    return [z.real, z.imag]


def coeff_from_json(c):
    if isinstance(c, str):
        return Fraction(c)
    re, im = c
    return complex(re, im) if im else float(re)


def poly_from_json(data) -> Poly:
    return Poly(tuple(coeff_from_json(c) for c in data))


U = Poly((0, 1))


def _vandermonde(ks: Sequence[int]) -> int:
    out = 1
    for i in range(len(ks)):
        for j in range(i + 1, len(ks)):
            out *= ks[j] - ks[i]
    return out


def raw_wronskian(polys: Sequence[Poly]) -> Poly:
    """Determinant of the matrix of successive derivatives, unnormalized.

    Multilinearity reduces it to monomials: ``Wr(u^k1, ..., u^kr)`` equals
    ``prod_{i<j}(k_j - k_i) u^{sum k - r(r-1)/2}``.
    """
    polys = list(polys)
    if not polys:
        raise DomainError("Wronskian of an empty sequence")
    r = len(polys)
    shift = r * (r - 1) // 2
    supports = [[k for k, c in enumerate(p.coeffs) if c != 0] for p in polys]
    zero = _zero_like(next((c for p in polys for c in p.coeffs), Fraction(0)))
    top = sum(len(p.coeffs) for p in polys)
    out = [zero] * max(top - shift, 1)
    for ks in itertools.product(*supports):
        v = _vandermonde(ks)
        if v == 0:
            continue
        term = v
        for p, k in zip(polys, ks):
            term = term * p.coeffs[k]
        out[sum(ks) - shift] = out[sum(ks) - shift] + term
    return Poly(tuple(out))


def wronskian(polys: Sequence[Poly]) -> tuple[Poly, object]:
    """Monic-normalized Wronskian and the discarded leading scalar."""
    return raw_wronskian(polys).monic()


@lru_cache(maxsize=None)
def wronskian_tensor(r: int, width: int) -> np.ndarray:
    """Tensor ``W[m, k1..kr]`` with ``Wr(rows)[m] = sum W * prod rows[i, k_i]``."""
    shift = r * (r - 1) // 2
    out_len = max(r * (width - 1) - shift + 1, 1)
    W = np.zeros((out_len,) + (width,) * r)
    for ks in itertools.product(range(width), repeat=r):
        v = _vandermonde(ks)
        if v:
            W[(sum(ks) - shift,) + ks] = v
    return W


_LETTERS = "abcdefghij"


def wronskian_coeffs(A: np.ndarray) -> np.ndarray:
    """Wronskian coefficients for a coefficient matrix ``A`` (one row per polynomial)."""
    r, width = A.shape
    W = wronskian_tensor(r, width)
    idx = _LETTERS[:r]
    return np.einsum("m" + idx + "," + ",".join(idx) + "->m", W, *A)


def wronskian_row_jacobian(A: np.ndarray, i: int) -> np.ndarray:
    """``d Wr / d A[i, k]`` as a matrix with shape ``(out_len, width)``."""
    r, width = A.shape
    W = wronskian_tensor(r, width)
    idx = _LETTERS[:r]
    others = [idx[j] for j in range(r) if j != i]
    spec = ",".join(["m" + idx] + others) + "->m" + idx[i]
    return np.einsum(spec, W, *[A[j] for j in range(r) if j != i])


@dataclass(frozen=True)
class Subspace:
    basis: tuple
    d: int

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if not self.basis:
            raise DomainError("empty basis")
        for p in self.basis:
            if p.degree >= self.d:
                raise DomainError(f"{p} has degree >= d={self.d}")

    @property
    def r(self) -> int:
        return len(self.basis)

    def matrix(self) -> list[list]:
        return [p.padded(self.d) for p in self.basis]

    def to_json(self) -> dict:
        return {"d": self.d, "basis": [p.to_json() for p in self.basis]}


def cell_degrees(mu: Partition, r: int) -> tuple[int, ...]:
    """Echelon degree sequence ``d_i = mu_i + r - i`` of the cell of ``mu^c`` at infinity."""
    if len(mu) > r:
        raise DomainError(f"{mu} has more than {r} rows")
    return tuple(part(mu, i) + r - i for i in range(1, r + 1))


def free_exponents(degrees: Sequence[int], i: int) -> list[int]:
    """Exponents below ``degrees[i]`` (0-based row) that are not pivot degrees, descending."""
    ds = set(degrees)
    return [k for k in range(degrees[i] - 1, -1, -1) if k not in ds]


@dataclass(frozen=True)
class EchelonCoordinates:
    """Reduced monic basis with strictly descending degrees."""

    degrees: tuple
    rows: tuple  # Poly per row, monic, zero at every other pivot degree
    d: int

    @property
    def r(self) -> int:
        return len(self.degrees)

    @property
    def mu(self) -> Partition:
        r = self.r
        return make_partition(self.degrees[i] - (r - 1 - i) for i in range(r))

    def a(self, i: int, j: int):
        """Coefficient of ``u^{d_i - j}`` in ``f_i`` (1-based ``i``)."""
        return self.rows[i - 1].coeff(self.degrees[i - 1] - j)

    def table(self) -> dict[tuple[int, int], object]:
        out = {}
        for i in range(self.r):
            for k in free_exponents(self.degrees, i):
                out[(i + 1, self.degrees[i] - k)] = self.rows[i].coeff(k)
        return out

    def vector(self) -> list:
        return [self.rows[i].coeff(k) for i in range(self.r) for k in free_exponents(self.degrees, i)]

    @classmethod
    def from_vector(cls, degrees, vec, d: int) -> "EchelonCoordinates":
        vec = list(vec)
        rows = []
        pos = 0
        for i in range(len(degrees)):
            c = [0.0 if not vec or not _is_exact(vec[0]) else Fraction(0)] * (degrees[i] + 1)
            c[degrees[i]] = 1 if vec and _is_exact(vec[0]) else 1.0
            for k in free_exponents(degrees, i):
                c[k] = vec[pos]
                pos += 1
            rows.append(Poly(tuple(c)))
        return cls(tuple(degrees), tuple(rows), d)

    def subspace(self) -> Subspace:
        return Subspace(self.rows, self.d)

    def to_json(self) -> dict:
        return {"degrees": list(self.degrees), "d": self.d, "rows": [p.to_json() for p in self.rows]}


def _echelon_rows(X: Subspace, pivot_tol: float):
    """Column reduction from the top exponent down; returns rows, degrees, near-pivots."""
    M = X.matrix()
    exact_mode = all(_is_exact(c) for row in M for c in row)
    if exact_mode:
        M = exact.to_fractions(M)
        scale = 1
    else:
        M = [[complex(c) for c in row] for row in M]
        scale = max((abs(c) for row in M for c in row), default=0.0) or 1.0
    r = len(M)
    free_rows = list(range(r))
    order, degrees, near = [], [], []
    for k in range(X.d - 1, -1, -1):
        if not free_rows:
            break
        best = max(free_rows, key=lambda i: abs(M[i][k]))
        c = M[best][k]
        if exact_mode:
            if c == 0:
                continue
        else:
            if abs(c) <= pivot_tol * scale:
                if abs(c) > _NOISE * scale:
                    near.append((k, abs(c) / scale))
                for i in free_rows:
                    M[i][k] = 0
                continue
        M[best] = [x / c for x in M[best]]
        for i in range(r):
            if i != best and M[i][k] != 0:
                f = M[i][k]
                M[i] = [a - f * b for a, b in zip(M[i], M[best])]
                M[i][k] = _zero_like(M[i][k]) if exact_mode else 0
        free_rows.remove(best)
        order.append(best)
        degrees.append(k)
    if len(order) < r:
        raise DomainError("basis is linearly dependent")
    rows = []
    for i, k in zip(order, degrees):
        row = M[i][: k + 1]
        if not exact_mode and all(abs(complex(x).imag) == 0 for x in row):
            row = [complex(x).real for x in row]
        row[k] = Fraction(1) if exact_mode else 1.0
        rows.append(Poly(tuple(row)))
    return tuple(rows), tuple(degrees), near


def echelon_basis(X: Subspace, pivot_tol: float = 1e-9) -> EchelonCoordinates:
    """The unique reduced monic basis of ``X`` with strictly descending degrees."""
    rows, degrees, near = _echelon_rows(X, pivot_tol)
    if near:
        warnings.warn(f"sub-tolerance pivots treated as zero: {near}", ConditioningWarning, stacklevel=2)
    return EchelonCoordinates(degrees, rows, X.d)


def detect_cell(X: Subspace, r: int, d: int, pivot_tol: float = 1e-9) -> Partition:
    """The partition ``mu`` with ``X`` in the open cell of ``mu^c`` at infinity."""
    if X.r != r or X.d != d:
        raise DomainError(f"subspace is in Gr({X.r},{X.d}), expected Gr({r},{d})")
    rows, degrees, near = _echelon_rows(X, pivot_tol)
    if near:
        alternatives = [degrees]
        for k, _ in near:
            alt = sorted(set(degrees) | {k}, reverse=True)[:r]
            alternatives.append(tuple(alt))
        raise CellUndecidable("leading coefficients within pivot tolerance", degree_sequences=alternatives)
    mu = make_partition(degrees[i] - (r - 1 - i) for i in range(r))
    if not fits_box(mu, r, d):
        raise DomainError(f"cell {mu} does not fit the {r} x {d - r} box")
    wr, _ = wronskian(rows)
    if wr.degree != size(mu):
        raise CellUndecidable(f"deg Wr = {wr.degree} but |mu| = {size(mu)}", degree_sequences=[degrees])
    return mu


def coordinate_map(X: Subspace | EchelonCoordinates, pivot_tol: float = 1e-9) -> tuple[Poly, ...]:
    """``(y_0, ..., y_{r-1})`` with ``y_a`` the monic Wronskian of ``f_{a+1}, ..., f_r``."""
    E = X if isinstance(X, EchelonCoordinates) else echelon_basis(X, pivot_tol)
    return tuple(wronskian(E.rows[a:])[0] for a in range(E.r))


def invert_coordinate_map(y: Sequence[Poly], mu: Partition, wr_target: Poly, d: int | None = None,
                          tol: float = 1e-10) -> Subspace:
    """Rebuild the subspace whose coordinate map is ``y`` (``y[0]`` proportional to ``wr_target``).

    Works bottom-up: ``f_r = y_{r-1}``, then each ``f_{a+1}`` solves the linear
    system ``Wr(f_{a+1}, ..., f_r) = kappa * y_a``.
    """
    y = [p.monic()[0] for p in y]
    r = len(y)
    mu = make_partition(mu)
    degrees = cell_degrees(mu, r)
    d = degrees[0] + 1 if d is None else d
    if not fits_box(mu, r, d):
        raise DomainError(f"{mu} does not fit the {r} x {d - r} box")
    ls = (size(mu),) + l_vector(mu, r)
    for a, (p, la) in enumerate(zip(y, ls)):
        if p.degree != la:
            raise DomainError(f"deg y_{a} = {p.degree}, expected {la}")
    target = wr_target.monic()[0]
    if proj_distance(y[0], target) > tol:
        raise ReconstructionDegenerate("y_0 is not proportional to the Wronskian target")
    exact_mode = all(p.is_exact for p in y) and target.is_exact
    y[0] = target
    fs = [y[r - 1]]
    for a in range(r - 2, -1, -1):
        lower = fs[::-1]  # f_{a+2}, ..., f_r
        free = free_exponents(degrees, a)
        base = raw_wronskian([Poly.monomial(degrees[a])] + lower)
        cols = [raw_wronskian([Poly.monomial(k)] + lower) for k in free]
        length = max([base.degree, y[a].degree] + [c.degree for c in cols]) + 1
        A = [[c.coeff(m) for c in cols] + [-y[a].coeff(m)] for m in range(length)]
        b = [-base.coeff(m) for m in range(length)]
        if exact_mode:
            try:
                sol = exact.solve(A, b)
            except (ValueError, ZeroDivisionError) as exc:
                raise ReconstructionDegenerate(f"linear solve failed at a={a}: {exc}") from exc
        else:
            An = np.array(A, dtype=complex).reshape(length, len(free) + 1)
            bn = np.array(b, dtype=complex)
            # coefficient rows live on very different scales: equilibrate rows, then columns
            rows_ = np.maximum(np.abs(An).max(axis=1), np.abs(bn))
            rows_[rows_ == 0] = 1.0
            As, bs = An / rows_[:, None], bn / rows_
            cols_ = np.abs(As).max(axis=0)
            cols_[cols_ == 0] = 1.0
            sol, _, rank, sv = np.linalg.lstsq(As / cols_[None, :], bs, rcond=None)
            if rank < An.shape[1] or sv[-1] < 1e-13 * sv[0]:
                raise ReconstructionDegenerate(f"singular system at a={a}", singular_values=sv)
            sol = sol / cols_
            resid = np.abs(As @ sol - bs).max()
            if resid > tol:
                raise ReconstructionDegenerate(f"inconsistent system at a={a}", residual=resid)
            sol = list(sol)
        coeffs = [Fraction(0) if exact_mode else 0.0] * (degrees[a] + 1)
        coeffs[degrees[a]] = Fraction(1) if exact_mode else 1.0
        for k, c in zip(free, sol[:-1]):
            coeffs[k] = c
        fs.append(Poly(tuple(coeffs)))
    return Subspace(tuple(reversed(fs)), d)


def proj_normalize(p: Poly, ref_index: int | None = None):
    """Scale so that the largest coefficient (or the one at ``ref_index``) is 1."""
    if not p.coeffs:
        return p
    k = ref_index if ref_index is not None else max(range(len(p.coeffs)), key=lambda i: abs(p.coeffs[i]))
    c = p.coeff(k)
    if c == 0:
        return None
    return Poly(tuple((Fraction(x) / c) if _is_exact(c) and _is_exact(x) else x / c for x in p.coeffs))


def proj_distance(p: Poly, q: Poly) -> float:
    """Distance between the points of P(C[u]) defined by ``p`` and ``q``."""
    qn = proj_normalize(q)
    if qn is None or not q.coeffs:
        return 0.0 if not p.coeffs else math.inf
    k = max(range(len(q.coeffs)), key=lambda i: abs(q.coeffs[i]))
    pn = proj_normalize(p, k)
    if pn is None:
        return math.inf
    m = max(len(pn.coeffs), len(qn.coeffs))
    return max(abs(pn.coeff(i) - qn.coeff(i)) for i in range(m))


def poly_distance(p: Poly, q: Poly) -> float:
    """Max coefficient difference relative to the larger coefficient scale."""
    m = max(len(p.coeffs), len(q.coeffs), 1)
    scale = max([1.0] + [abs(c) for c in p.coeffs] + [abs(c) for c in q.coeffs])
    return max(abs(p.coeff(i) - q.coeff(i)) for i in range(m)) / scale


# --- square systems on a cell: echelon coordinates with a prescribed Wronskian ---

def _coefficient_matrix(degrees: Sequence[int], vec: np.ndarray) -> np.ndarray:
    A = np.zeros((len(degrees), degrees[0] + 1), dtype=complex)
    pos = 0
    for i, di in enumerate(degrees):
        A[i, di] = 1.0
        for k in free_exponents(degrees, i):
            A[i, k] = vec[pos]
            pos += 1
    return A


def wronskian_lead(degrees: Sequence[int]) -> int:
    """Leading coefficient of the Wronskian of monic polynomials with the given degrees (in order)."""
    return _vandermonde(list(degrees))


def fiber_system(degrees: Sequence[int], vec, target: Sequence) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Residual, Jacobian and coefficient magnitudes of ``Wr(rows) = lead * target``.

    ``target`` holds the ascending coefficients of a monic polynomial of degree
    ``n = number of free coordinates``; the residual has one entry per
    non-leading coefficient, so the system is square.
    """
    degrees = tuple(degrees)
    vec = np.asarray(vec, dtype=complex)
    n = len(vec)
    target = np.asarray(target, dtype=complex)
    if len(target) != n + 1:
        raise DomainError(f"target must have degree {n}")
    A = _coefficient_matrix(degrees, vec)
    lead = wronskian_lead(degrees)
    W = wronskian_coeffs(A)
    r, width = A.shape
    F = W[:n] - lead * target[:n]
    Wt = wronskian_tensor(r, width)
    idx = _LETTERS[:r]
    mags = np.einsum("m" + idx + "," + ",".join(idx) + "->m", np.abs(Wt), *np.abs(A))[:n] + abs(lead) * np.abs(target[:n])
    J = np.zeros((n, n), dtype=complex)
    col = 0
    for i in range(r):
        free = free_exponents(degrees, i)
        if not free:
            continue
        Ji = wronskian_row_jacobian(A, i)
        for k in free:
            J[:, col] = Ji[:n, k]
            col += 1
    return F, J, mags


def _fiber_newton(degrees, vec, target, tol: float, max_iter: int):
    """Newton on the fiber system; returns (vec, converged, iterations, step norms)."""
    vec = np.asarray(vec, dtype=complex).copy()
    norms = []
    for it in range(max_iter + 1):
        F, J, mags = fiber_system(degrees, vec, target)
        if not len(vec):
            return vec, True, 0, norms
        rel = np.abs(F) / np.maximum(mags, 1e-300)
        if rel.max() <= tol:
            return vec, True, it, norms
        if it == max_iter:
            break
        rs = 1.0 / np.maximum(np.abs(J).max(axis=1), 1e-300)
        try:
            step = np.linalg.solve(rs[:, None] * J, -rs * F)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        norms.append(float(np.abs(step).max() / max(1.0, np.abs(vec).max())))
        vec = vec + step
    return vec, False, max_iter, norms


def solve_fiber(degrees, vec0, target, tol: float = 1e-13, max_iter: int = 50) -> np.ndarray:
    """Newton-solve ``Wr = lead * target`` in echelon coordinates from ``vec0``."""
    vec, ok, _, norms = _fiber_newton(degrees, vec0, target, tol, max_iter)
    if not ok:
        raise ReconstructionDegenerate("fiber Newton did not converge", steps=norms)
    return vec


def track_fiber(degrees, vec0, target_of: Callable[[float], Sequence], tol: float = 1e-13, h0: float = 0.02,
                checkpoints: Sequence[float] = (), h_min: float = 1e-10, max_steps: int = 100000):
    """Follow the solution of ``Wr = lead * target_of(tau)`` from ``tau = 0`` to ``1``.

    Tangent predictor, Newton corrector.  A step is accepted only if the
    corrector converges within four iterations with contraction and its
    correction is small next to the predictor move; otherwise the step is
    halved.  Returns the final coordinates and the coordinates at every
    requested checkpoint.
    """
    lead = wronskian_lead(degrees)
    vec = np.asarray(vec0, dtype=complex).copy()
    vec, ok, _, _ = _fiber_newton(degrees, vec, target_of(0.0), tol, 20)
    if not ok:
        raise PathStuck("start point is not on the fiber", tau=0.0)
    stops = sorted(set(float(c) for c in checkpoints if 0.0 < c < 1.0)) + [1.0]
    saved = {}
    tau, h, steps = 0.0, h0, 0
    while stops:
        goal = stops[0]
        if tau >= goal:
            saved[goal] = vec.copy()
            stops.pop(0)
            continue
        if h < h_min or steps > max_steps:
            raise PathStuck("fiber continuation stalled", tau=tau, step=h)
        tau_new = min(goal, tau + h)
        t0 = np.asarray(target_of(tau), dtype=complex)
        t1 = np.asarray(target_of(tau_new), dtype=complex)
        F, J, _ = fiber_system(degrees, vec, t0)
        try:
            rs = 1.0 / np.maximum(np.abs(J).max(axis=1), 1e-300)
            move = np.linalg.solve(rs[:, None] * J, rs * lead * (t1 - t0)[:len(vec)])
        except np.linalg.LinAlgError:
            h /= 2
            continue
        pred = vec + move
        new, ok, iters, norms = _fiber_newton(degrees, pred, t1, tol, 6)
        size_ = max(1.0, np.abs(vec).max())
        corr = np.abs(new - pred).max() / size_
        mv = np.abs(move).max() / size_
        contracting = all(b <= 0.5 * a for a, b in zip(norms, norms[1:])) if len(norms) > 1 else True
        if not ok or not contracting or iters > 4 or corr > max(0.1 * mv, 1e-9) or mv > 0.2:
            h /= 2
            continue
        vec, tau = new, tau_new
        steps += 1
        if iters <= 2 and corr < 0.01 * mv + 1e-12:
            h = min(2 * h, 0.1)
    return vec, saved
