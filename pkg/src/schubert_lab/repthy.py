"""Singular vectors in ``V^{(x)n}``, Gaudin Hamiltonians, Jucys-Murphy operators, joint spectra.

The singular weight space of weight ``mu`` is spanned by column-antisymmetrized
words: for a standard tableau ``T`` put ``e_{row(k)}`` in tensor slot ``k`` and
antisymmetrize over the columns of ``T``.  Each column then carries
``e_1 ^ ... ^ e_h`` and is killed by every raising operator.  Coordinates of
transposition images are solved exactly against these vectors.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import exact
from .combinatorics import Partition, StandardTableau, enumerate_syt, make_partition, size
from .errors import DomainError, NotCommuting, PathStuck, SpectrumDegenerate


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def weight_words(n: int, r: int, mu: Partition) -> list[tuple[int, ...]]:
    """Words in ``{1..r}^n`` with letter ``i`` used ``mu_i`` times, lexicographic."""
    counts = list(mu) + [0] * (r - len(mu))
    letters = [i + 1 for i, c in enumerate(counts) for _ in range(c)]
    return sorted(set(itertools.permutations(letters)))


def polytabloid(T: StandardTableau) -> dict[tuple[int, ...], int]:
    """Column-antisymmetrized word of ``T`` as a sparse integer vector."""
    n = T.n
    base = [0] * n
    for a in range(1, n + 1):
        base[a - 1] = T.row_of(a)
    columns = []
    for j in range(max(T.shape) if T.shape else 0):
        col = [T.rows[i][j] for i in range(len(T.rows)) if len(T.rows[i]) > j]
        columns.append(col)
    vec: dict[tuple[int, ...], int] = {}
    for perms in itertools.product(*[itertools.permutations(range(len(c))) for c in columns]):
        word = list(base)
        sign = 1
        for col, p in zip(columns, perms):
            sign *= _perm_sign(p)
            for slot, src in zip(col, p):
                word[slot - 1] = src + 1
        w = tuple(word)
        vec[w] = vec.get(w, 0) + sign
    return {w: c for w, c in vec.items() if c}


def raise_word_vector(vec: dict, i: int) -> dict:
    """Apply the raising operator ``e_{i,i+1}`` (acting as a derivation) to a sparse vector."""
    out: dict = {}
    for w, c in vec.items():
        for k, letter in enumerate(w):
            if letter == i + 1:
                nw = w[:k] + (i,) + w[k + 1:]
                out[nw] = out.get(nw, 0) + c
    return {w: c for w, c in out.items() if c}


def swap_word_vector(vec: dict, a: int, b: int) -> dict:
    out = {}
    for w, c in vec.items():
        nw = list(w)
        nw[a - 1], nw[b - 1] = nw[b - 1], nw[a - 1]
        out[tuple(nw)] = c
    return out


@dataclass(frozen=True)
class SingularWeightBasis:
    n: int
    r: int
    mu: Partition
    words: tuple
    tableaux: tuple
    vectors: tuple  # integer coordinate rows against ``words``

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def sparse(self, k: int) -> dict:
        return {self.words[i]: c for i, c in enumerate(self.vectors[k]) if c}

    @cached_property
    def _index(self) -> dict:
        return {w: i for i, w in enumerate(self.words)}

    @cached_property
    def _pivots(self):
        V = [list(v) for v in self.vectors]
        _, piv = exact.rref(V)
        if len(piv) < self.dim:
            raise DomainError("singular vectors are linearly dependent")
        B = [[V[k][p] for k in range(self.dim)] for p in piv]
        Binv = exact.inverse(B)
        if all(x.denominator == 1 for row in Binv for x in row):
            Binv = np.array([[int(x) for x in row] for row in Binv], dtype=np.int64)
        else:
            Binv = np.array(Binv, dtype=object)
        return piv, Binv

    def coordinates(self, vec: dict) -> np.ndarray:
        """Exact coordinates (integer or Fraction array) of a vector lying in the span."""
        piv, Binv = self._pivots
        where = {p: k for k, p in enumerate(piv)}
        rhs = np.zeros(len(piv), dtype=Binv.dtype)
        for w, c in vec.items():
            k = where.get(self._index[w])
            if k is not None:
                rhs[k] = c
        return Binv @ rhs

    @cached_property
    def swaps_integral(self) -> dict[tuple[int, int], np.ndarray]:
        """Transposition matrices ``(a,b)``; column ``k`` holds the image of basis vector ``k``."""
        sparse = [self.sparse(k) for k in range(self.dim)]
        out = {}
        for a in range(1, self.n + 1):
            for b in range(a + 1, self.n + 1):
                out[(a, b)] = np.column_stack([self.coordinates(swap_word_vector(v, a, b)) for v in sparse])
        return out

    @cached_property
    def swaps_exact(self) -> dict[tuple[int, int], list[list[Fraction]]]:
        return {key: [[Fraction(x) for x in row] for row in M] for key, M in self.swaps_integral.items()}

    @cached_property
    def gram(self) -> np.ndarray:
        V = np.array(self.vectors, dtype=float)
        return V @ V.T

    @cached_property
    def _cholesky(self) -> np.ndarray:
        return np.linalg.cholesky(self.gram)

    @cached_property
    def swaps_orthonormal(self) -> dict[tuple[int, int], np.ndarray]:
        """Transpositions in an orthonormal frame of the span (real symmetric)."""
        L = self._cholesky
        out = {}
        for key, M in self.swaps_integral.items():
            Mf = M.astype(float)
            S = L.T @ Mf @ np.linalg.inv(L.T)
            out[key] = (S + S.T) / 2
        return out

    def to_orthonormal(self, coords: np.ndarray) -> np.ndarray:
        return self._cholesky.T @ coords

    def swap(self, a: int, b: int, frame: str = "polytabloid"):
        a, b = min(a, b), max(a, b)
        return self.swaps_exact[(a, b)] if frame == "polytabloid" else self.swaps_orthonormal[(a, b)]


def singular_weight_basis(n: int, r: int, mu: Partition) -> SingularWeightBasis:
    """Exact basis of the weight-``mu`` highest-weight vectors in ``(C^r)^{(x)n}``."""
    mu = make_partition(mu)
    if size(mu) != n:
        raise DomainError(f"|mu| = {size(mu)} must equal n = {n}")
    if len(mu) > r:
        raise DomainError(f"{mu} has more than r = {r} rows: the singular space is empty")
    words = weight_words(n, r, mu)
    index = {w: i for i, w in enumerate(words)}
    tableaux = tuple(enumerate_syt(mu))
    vectors = []
    for T in tableaux:
        row = [0] * len(words)
        for w, c in polytabloid(T).items():
            row[index[w]] = c
        vectors.append(tuple(row))
    return SingularWeightBasis(n, r, mu, tuple(words), tableaux, tuple(vectors))


@dataclass(frozen=True)
class OperatorMatrix:
    matrix: object  # list of Fraction rows (exact) or ndarray (float)
    frame: str  # "polytabloid" (exact) or "orthonormal"
    label: str = ""

    @property
    def is_exact(self) -> bool:
        return not isinstance(self.matrix, np.ndarray)

    def as_float(self) -> np.ndarray:
        return np.array(self.matrix, dtype=float)

    def to_json(self):
        if self.is_exact:
            return [[f"{x.numerator}/{x.denominator}" for x in row] for row in self.matrix]
        return self.matrix.tolist()


def _check_z(z: Sequence) -> None:
    if len(set(z)) != len(z):
        raise DomainError("repeated parameter in z", z=tuple(z))


def gaudin_hamiltonian(a: int, z: Sequence, B: SingularWeightBasis, frame: str | None = None) -> OperatorMatrix:
    """``H_a(z) = sum_{b != a} (a,b) / (z_a - z_b)`` restricted to the singular space."""
    if len(z) != B.n:
        raise DomainError(f"need {B.n} parameters, got {len(z)}")
    _check_z(z)
    exact_z = all(isinstance(x, (int, Fraction)) for x in z)
    frame = frame or ("polytabloid" if exact_z else "orthonormal")
    if frame == "polytabloid":
        zq = [Fraction(x) for x in z]
        M = [[Fraction(0)] * B.dim for _ in range(B.dim)]
        for b in range(1, B.n + 1):
            if b == a:
                continue
            w = 1 / (zq[a - 1] - zq[b - 1])
            S = B.swap(a, b)
            M = [[m + w * s for m, s in zip(mr, sr)] for mr, sr in zip(M, S)]
        return OperatorMatrix(M, frame, f"H_{a}")
    zf = np.asarray(z, dtype=float)
    M = np.zeros((B.dim, B.dim))
    for b in range(1, B.n + 1):
        if b != a:
            M += B.swap(a, b, "orthonormal") / (zf[a - 1] - zf[b - 1])
    return OperatorMatrix(M, frame, f"H_{a}")


def gaudin_family(z: Sequence, B: SingularWeightBasis, frame: str | None = None) -> list[OperatorMatrix]:
    return [gaudin_hamiltonian(a, z, B, frame) for a in range(1, B.n + 1)]


def jucys_murphy(a: int, B: SingularWeightBasis, frame: str = "polytabloid") -> OperatorMatrix:
    """``L_a = sum_{b<a} (a,b)``; exact integer matrix in the polytabloid frame."""
    if not 1 <= a <= B.n:
        raise DomainError(f"JM index {a} outside 1..{B.n}")
    if frame == "polytabloid":
        M = [[Fraction(0)] * B.dim for _ in range(B.dim)]
        for b in range(1, a):
            S = B.swap(b, a)
            M = [[m + s for m, s in zip(mr, sr)] for mr, sr in zip(M, S)]
        return OperatorMatrix(M, frame, f"L_{a}")
    M = np.zeros((B.dim, B.dim))
    for b in range(1, a):
        M += B.swap(b, a, "orthonormal")
    return OperatorMatrix(M, frame, f"L_{a}")


@dataclass(frozen=True)
class Eigenline:
    values: tuple
    vector: tuple  # coordinates in the operators' frame

    def to_json(self) -> dict:
        vals = [f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else v for v in self.values]
        vec = [f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else v for v in self.vector]
        return {"eigenvalues": vals, "vector": vec}


def _as_object_array(M) -> np.ndarray:
    """Exact matrix as a numpy array of Python ints (scaled by a common denominator) or Fractions."""
    flat = [x for row in M for x in row]
    if all(Fraction(x).denominator == 1 for x in flat):
        return np.array([[int(x) for x in row] for row in M], dtype=object)
    return np.array([[Fraction(x) for x in row] for row in M], dtype=object)


def _integral_columns(vectors: list[list[Fraction]]) -> np.ndarray:
    """Stack rational vectors as columns, each cleared of denominators."""
    cols = []
    for v in vectors:
        den = math.lcm(*(Fraction(x).denominator for x in v))
        cols.append([int(Fraction(x) * den) for x in v])
    return np.array(cols, dtype=object).T


def _exact_joint_spectrum(mats: list) -> list[Eigenline]:
    """Split the space one operator at a time.

    Float eigenvalues only propose rational candidates; every eigenspace is an
    exact nullspace and the dimensions must add up, so nothing is trusted to
    floating point.
    """
    dim = len(mats[0])
    arrays = [_as_object_array(M) for M in mats]
    spaces = [((), np.identity(dim, dtype=int).astype(object))]  # basis stored as columns
    for M in arrays:
        new = []
        for values, basis in spaces:
            k = basis.shape[1]
            MB = M.dot(basis)
            Bf = basis.astype(float)
            R = np.linalg.lstsq(Bf, MB.astype(float), rcond=None)[0]
            approx = np.linalg.eigvals(R)
            candidates = sorted({Fraction(round(float(v.real) * 720), 720) for v in approx})
            found = 0
            for c in candidates:
                shifted = MB - basis * c
                ker = exact.nullspace(shifted.tolist(), k)
                if ker:
                    sub = basis.dot(_integral_columns(ker))
                    new.append((values + (c,), sub))
                    found += len(ker)
            if found != k:
                raise SpectrumDegenerate("exact spectrum is not rational and diagonalizable", found=found, expected=k)
        spaces = new
    out = []
    for values, basis in spaces:
        if basis.shape[1] != 1:
            raise SpectrumDegenerate("joint eigenspace of dimension > 1", values=values)
        out.append(Eigenline(values, tuple(Fraction(x) for x in basis[:, 0])))
    out.sort(key=lambda e: e.values)
    return out


def _joint_eigenbasis(mats: list[np.ndarray], scale: float, tol: float, seed: int = 0, tries: int = 8):
    """Orthonormal joint eigenbasis of commuting real symmetric matrices."""
    rng = np.random.default_rng(seed)
    dim = mats[0].shape[0]
    last = None
    for attempt in range(tries):
        w = rng.uniform(0.5, 1.5, size=len(mats)) if attempt else np.linspace(1.0, 1.7, len(mats)) ** 0.5
        K = sum(wi * M for wi, M in zip(w, mats))
        _, V = np.linalg.eigh((K + K.T) / 2)
        off = max((np.abs(V.T @ M @ V - np.diag(np.diag(V.T @ M @ V))).max() for M in mats), default=0.0)
        last = off
        if off <= tol * max(scale, 1.0):
            return V
    raise SpectrumDegenerate("could not separate joint eigenvectors", off_diagonal=last, dim=dim)


def joint_spectrum(ops: Sequence[OperatorMatrix], commutator_tol: float = 1e-12, separation_tol: float = 1e-6,
                   imag_tol: float = 1e-8) -> list[Eigenline]:
    """Simultaneous eigenlines and eigenvalue tuples of commuting operators."""
    if not ops:
        raise DomainError("no operators")
    if all(op.is_exact for op in ops):
        mats = [op.matrix for op in ops]
        arrays = [_as_object_array(M) for M in mats]
        for A, B in itertools.combinations(arrays, 2):
            if np.any(A.dot(B) - B.dot(A) != 0):
                raise NotCommuting("exact operators do not commute")
        try:
            return _exact_joint_spectrum(mats)
        except SpectrumDegenerate:
            pass  # irrational eigenvalues (Gaudin at rational z): diagonalize the exact matrices in floats
    mats = [op.as_float() for op in ops]
    scale = max(float(np.abs(M).max()) for M in mats) or 1.0
    worst = 0.0
    for A, B in itertools.combinations(mats, 2):
        worst = max(worst, float(np.abs(A @ B - B @ A).max()))
    if worst > commutator_tol * scale ** 2:
        raise NotCommuting("commutator above tolerance", norm=worst, scale=scale)
    symmetric = all(np.abs(M - M.T).max() <= 1e-12 * scale for M in mats)
    if symmetric:
        V = _joint_eigenbasis(mats, scale, 1e-9)
        lines = [Eigenline(tuple(float(V[:, k] @ M @ V[:, k]) for M in mats), tuple(V[:, k])) for k in range(V.shape[1])]
    else:
        K = sum((1 + 0.1 * i) * M for i, M in enumerate(mats))
        vals, V = np.linalg.eig(K)
        lines = []
        for k in range(V.shape[1]):
            v = V[:, k]
            tup = tuple(complex(np.vdot(v, M @ v) / np.vdot(v, v)) for M in mats)
            if max(abs(t.imag) for t in tup) > imag_tol * scale:
                raise SpectrumDegenerate("complex eigenvalues", values=tup)
            lines.append(Eigenline(tuple(t.real for t in tup), tuple(v)))
    lines.sort(key=lambda e: e.values)
    for e1, e2 in itertools.combinations(lines, 2):
        sep = max(abs(a - b) for a, b in zip(e1.values, e2.values))
        if sep <= separation_tol * scale:
            raise SpectrumDegenerate("eigenvalue tuples not separated", cluster=(e1.values, e2.values), separation=sep)
    return lines


def scaling_path(z: Sequence[float], t: float) -> np.ndarray:
    """``z_i(t) = z'_i t^i`` with ``z'`` the translate of ``z`` having ``z'_1 = 1``."""
    zf = np.asarray(z, dtype=float)
    shifted = zf - zf[0] + 1.0
    return shifted * t ** np.arange(1, len(zf) + 1)


def scaled_gaudin(z: Sequence[float], t: float, B: SingularWeightBasis) -> list[np.ndarray]:
    """The operators ``z_a(t) H_a(z(t))`` in the orthonormal frame."""
    zt = scaling_path(z, t)
    return [zt[a] * gaudin_hamiltonian(a + 1, zt, B).matrix for a in range(B.n)]


@dataclass
class Transport:
    """Follows one joint eigenline of the Gaudin family along the scaling path."""

    z: tuple
    basis: SingularWeightBasis
    vector: np.ndarray
    t: float = 1.0
    min_gap: float = math.inf
    steps: int = 0

    def advance(self, t_target: float, tol: float = 1e-9, max_steps: int = 20000) -> None:
        if t_target < self.t:
            raise DomainError("transport runs towards larger t only")
        h = 0.05
        while self.t < t_target:
            if self.steps >= max_steps:
                raise PathStuck("eigenline transport exceeded step budget", t=self.t)
            t_new = min(self.t * math.exp(h), t_target)
            mats = scaled_gaudin(self.z, t_new, self.basis)
            scale = max(float(np.abs(M).max()) for M in mats) or 1.0
            V = _joint_eigenbasis(mats, scale, 1e-9)
            overlaps = np.abs(V.T @ self.vector)
            order = np.argsort(overlaps)[::-1]
            best = overlaps[order[0]]
            second = overlaps[order[1]] if len(order) > 1 else 0.0
            tuples = np.array([[V[:, k] @ M @ V[:, k] for M in mats] for k in range(V.shape[1])])
            gaps = [np.abs(tuples[i] - tuples[j]).max() for i, j in itertools.combinations(range(len(tuples)), 2)]
            gap = min(gaps) if gaps else math.inf
            if best < 0.95 or second > 0.3 or gap < 10 * tol * scale:
                h /= 2
                if h < 1e-9:
                    raise PathStuck("eigenline transport step underflow", t=self.t, overlap=best)
                continue
            v = V[:, order[0]]
            self.vector = v if v @ self.vector >= 0 else -v
            self.t = t_new
            self.min_gap = min(self.min_gap, gap)
            self.steps += 1
            if best > 0.999:
                h = min(h * 1.5, 0.5)

    def values(self) -> np.ndarray:
        """Current eigenvalues of ``z_a(t) H_a(z(t))`` on the tracked line."""
        mats = scaled_gaudin(self.z, self.t, self.basis)
        return np.array([self.vector @ M @ self.vector for M in mats])
