"""GF(4)-linear stabilizer codes from self-adjoint boundary operators.

The field GF(4) = {0, 1, w, W} (W = w^2) is represented by 2-bit codes
0->00, 1->01, w->10, W->11, so a code is lo + 2*hi and addition is XOR.
Writing an element as a + b*w, the bit planes are a = lo and b = hi, which
turns field arithmetic into plane-wise GF(2) arithmetic:

    w * x       = (hi, lo ^ hi)
    conj(x)     = x^2 = (lo ^ hi, hi)
    x * y (lo)  = x_lo&y_lo ^ x_hi&y_hi
    x * y (hi)  = x_lo&y_hi ^ x_hi&y_lo ^ x_hi&y_hi

A matrix is stored as two packed GF(2) planes, so matrix products and
Kronecker products reduce to three plane products each.

A self-orthogonal subspace C (Hermitian products (f,g) = sum conj(f_j) g_j
all zero) defines a stabilizer code with k = n - 2 dim C.  A boundary
operator here is a square matrix with delta* = delta and delta^2 = 0; its
image is self-orthogonal and the code distance is the minimum weight over
ker(delta) \ im(delta).  The distance engine mirrors the GF(2) one: the
image is spanned over GF(2) by the pairs {g, w*g}, scanned as a subset-XOR
table plus a Gray-code walk, and only one representative per projective
homology class {c, w*c, W*c} is enumerated since weights are invariant
under scalars.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    BudgetError,
    DimensionError,
    NoLogicalsError,
    ParameterError,
    PreconditionError,
)
from .gf2 import BitMatrix, vector_from_bits

DEFAULT_BUDGET = 1 << 32
_LO_BITS = 18

SYMBOLS = "01wW"

# Multiplication from the cyclic group {1, w, W}: codes 1, 2, 3 are w^0, w^1,
# w^2 and exponents add mod 3.  Conjugation is squaring, inversion is cubing
# less one.  Addition needs no table: codes add by XOR.
_MUL = np.zeros((4, 4), dtype=np.uint8)
for _a in range(1, 4):
    for _b in range(1, 4):
        _MUL[_a, _b] = 1 + ((_a - 1) + (_b - 1)) % 3
_CONJ = np.array([_MUL[x, x] for x in range(4)], dtype=np.uint8)
_INV = np.array([0, 1, 3, 2], dtype=np.uint8)


@dataclass(frozen=True)
class Gf4Element:
    """One field element, stored as its 2-bit code."""

    value: int

    def __post_init__(self):
        if not 0 <= self.value <= 3:
            raise ParameterError(f"GF(4) code must be in 0..3, got {self.value}")

    def __add__(self, other: "Gf4Element") -> "Gf4Element":
        return Gf4Element(self.value ^ other.value)

    def __mul__(self, other: "Gf4Element") -> "Gf4Element":
        return Gf4Element(int(_MUL[self.value, other.value]))

    def conjugate(self) -> "Gf4Element":
        return Gf4Element(int(_CONJ[self.value]))

    def inverse(self) -> "Gf4Element":
        if self.value == 0:
            raise ParameterError("zero has no inverse")
        return Gf4Element(int(_INV[self.value]))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"Gf4Element({SYMBOLS[self.value]})"


ZERO = Gf4Element(0)
ONE = Gf4Element(1)
OMEGA = Gf4Element(2)
OMEGA2 = Gf4Element(3)


def gf4_vector(spec) -> np.ndarray:
    """Coerce a symbol string, code sequence, or element sequence to codes.

    Symbols follow the text alphabet: 0, 1, w (= omega), W (= omega^2).
    """
    if isinstance(spec, str):
        try:
            return np.array([SYMBOLS.index(ch) for ch in spec], dtype=np.uint8)
        except ValueError:
            raise ParameterError(f"symbols must come from {SYMBOLS!r}: {spec!r}")
    if len(spec) and isinstance(spec[0], Gf4Element):
        return np.array([e.value for e in spec], dtype=np.uint8)
    v = np.asarray(spec, dtype=np.uint8)
    if v.ndim != 1:
        raise DimensionError(f"expected a vector, got shape {v.shape}")
    if v.size and v.max() > 3:
        raise ParameterError("GF(4) codes must be in 0..3")
    return v


def vector_symbols(v: np.ndarray) -> str:
    return "".join(SYMBOLS[int(c)] for c in v)


def gf4_weight(v: np.ndarray) -> int:
    """Number of nonzero components."""
    return int(np.count_nonzero(v))


class Gf4Matrix:
    """A rows x cols matrix over GF(4), stored as two packed bit planes."""

    __slots__ = ("rows", "cols", "lo", "hi")

    def __init__(self, lo: BitMatrix, hi: BitMatrix):
        if (lo.rows, lo.cols) != (hi.rows, hi.cols):
            raise DimensionError(
                f"plane shapes differ: {lo.rows}x{lo.cols} vs {hi.rows}x{hi.cols}"
            )
        self.rows = lo.rows
        self.cols = lo.cols
        self.lo = lo
        self.hi = hi

    # -- construction -------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf4Matrix":
        return cls(BitMatrix.zeros(rows, cols), BitMatrix.zeros(rows, cols))

    @classmethod
    def identity(cls, n: int) -> "Gf4Matrix":
        return cls(BitMatrix.identity(n), BitMatrix.zeros(n, n))

    @classmethod
    def from_codes(cls, codes) -> "Gf4Matrix":
        codes = np.atleast_2d(np.asarray(codes, dtype=np.uint8))
        if codes.size and codes.max() > 3:
            raise ParameterError("GF(4) codes must be in 0..3")
        return cls(BitMatrix.from_dense(codes & 1), BitMatrix.from_dense(codes >> 1))

    @classmethod
    def from_symbol_rows(cls, lines) -> "Gf4Matrix":
        return cls.from_codes(np.array([gf4_vector(line) for line in lines]))

    def to_codes(self) -> np.ndarray:
        return (self.lo.to_dense() | (self.hi.to_dense() << 1)).astype(np.uint8)

    # -- element access ------------------------------------------------------

    def get(self, i: int, j: int) -> Gf4Element:
        return Gf4Element(self.lo.get(i, j) | (self.hi.get(i, j) << 1))

    def set(self, i: int, j: int, value) -> None:
        code = value.value if isinstance(value, Gf4Element) else int(value)
        self.lo.set(i, j, code & 1)
        self.hi.set(i, j, code >> 1)

    # -- algebra -------------------------------------------------------------

    def copy(self) -> "Gf4Matrix":
        return Gf4Matrix(self.lo.copy(), self.hi.copy())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf4Matrix):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __add__(self, other: "Gf4Matrix") -> "Gf4Matrix":
        return Gf4Matrix(self.lo ^ other.lo, self.hi ^ other.hi)

    def __matmul__(self, other: "Gf4Matrix") -> "Gf4Matrix":
        lo = (self.lo @ other.lo) ^ (self.hi @ other.hi)
        hi = (self.lo @ other.hi) ^ (self.hi @ other.lo) ^ (self.hi @ other.hi)
        return Gf4Matrix(lo, hi)

    def scale(self, s) -> "Gf4Matrix":
        code = s.value if isinstance(s, Gf4Element) else int(s)
        if code == 0:
            return Gf4Matrix.zeros(self.rows, self.cols)
        if code == 1:
            return self.copy()
        if code == 2:
            return Gf4Matrix(self.hi.copy(), self.lo ^ self.hi)
        return Gf4Matrix(self.lo ^ self.hi, self.lo.copy())

    def conjugate(self) -> "Gf4Matrix":
        return Gf4Matrix(self.lo ^ self.hi, self.hi.copy())

    def transpose(self) -> "Gf4Matrix":
        return Gf4Matrix(self.lo.transpose(), self.hi.transpose())

    def adjoint(self) -> "Gf4Matrix":
        """Conjugate transpose; the * in delta* = delta."""
        return Gf4Matrix((self.lo ^ self.hi).transpose(), self.hi.transpose())

    def kron(self, other: "Gf4Matrix") -> "Gf4Matrix":
        lo = self.lo.kron(other.lo) ^ self.hi.kron(other.hi)
        hi = (
            self.lo.kron(other.hi)
            ^ self.hi.kron(other.lo)
            ^ self.hi.kron(other.hi)
        )
        return Gf4Matrix(lo, hi)

    def is_zero(self) -> bool:
        return self.lo.is_zero() and self.hi.is_zero()

    # -- weights -------------------------------------------------------------

    def row_weight(self, i: int) -> int:
        return int(np.bitwise_count(self.lo.data[i] | self.hi.data[i]).sum())

    def max_row_weight(self) -> int:
        if self.rows == 0:
            return 0
        return int(np.bitwise_count(self.lo.data | self.hi.data).sum(axis=1).max())

    def max_column_weight(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        dense = self.lo.to_dense() | self.hi.to_dense()
        return int(dense.sum(axis=0, dtype=np.int64).max())

    def __repr__(self) -> str:
        return f"Gf4Matrix({self.rows}x{self.cols})"


# -- elimination --------------------------------------------------------------
#
# Row reduction works on dense code arrays with table lookups; pivots follow
# the same leftmost-column, topmost-row rule as the GF(2) kit and are
# normalized to 1, so reduced forms are canonical for the row space.


def _rref_codes(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    a = np.atleast_2d(np.array(a, dtype=np.uint8, copy=True))
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = _MUL[_INV[a[r, c]], a[r]]
        factors = a[:, c].copy()
        factors[r] = 0
        a ^= _MUL[factors[:, None], a[r][None, :]]
        pivots.append(c)
        r += 1
    return a, pivots


def gf4_rank(m: Gf4Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_rref_codes(m.to_codes())[1])


def _row_space_codes(codes: np.ndarray) -> np.ndarray:
    """Canonical basis of the GF(4) row space, one row per basis vector."""
    if codes.size == 0:
        return np.zeros((0, codes.shape[1] if codes.ndim == 2 else 0), dtype=np.uint8)
    reduced, pivots = _rref_codes(codes)
    return reduced[: len(pivots)].copy()


def gf4_row_space(m: Gf4Matrix) -> np.ndarray:
    return _row_space_codes(m.to_codes())


def gf4_image(m: Gf4Matrix) -> np.ndarray:
    """Canonical basis of the column space, one code row per basis vector."""
    return _row_space_codes(m.to_codes().T)


def gf4_kernel(m: Gf4Matrix) -> np.ndarray:
    """Canonical basis of the right kernel, one code row per basis vector."""
    codes = m.to_codes()
    rows, cols = codes.shape
    reduced, pivots = _rref_codes(codes)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for out, f in enumerate(free):
        basis[out, f] = 1
        for i, p in enumerate(pivots):
            basis[out, p] = reduced[i, f]
    return basis


def _in_row_span(rows: np.ndarray, v: np.ndarray) -> bool:
    if rows.shape[0] == 0:
        return not v.any()
    stacked = np.vstack([rows, v[None, :]])
    return len(_rref_codes(stacked)[1]) == rows.shape[0]


def _extend_rows(base: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Candidate rows that enlarge the span of `base`, in candidate order."""
    picked = []
    current = base
    for v in candidates:
        if not _in_row_span(current, v):
            picked.append(v)
            current = np.vstack([current, v[None, :]])
    return (
        np.array(picked, dtype=np.uint8)
        if picked
        else np.zeros((0, base.shape[1]), dtype=np.uint8)
    )


def _matvec_codes(mat_codes: np.ndarray, v: np.ndarray) -> np.ndarray:
    if mat_codes.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8)
    return np.bitwise_xor.reduce(_MUL[mat_codes, v[None, :]], axis=1)


# -- boundary operators --------------------------------------------------------


class Gf4Boundary:
    """A square GF(4) matrix with delta* = delta and delta^2 = 0.

    The image of such an operator is self-orthogonal, so it serves as the
    parity-check space of a stabilizer code on m qubits with
    k = m - 2 rank = dim ker - dim im logical qubits.
    """

    __slots__ = ("delta", "rank", "hom_dim")

    def __init__(self, delta: Gf4Matrix):
        if delta.rows != delta.cols:
            raise DimensionError("boundary operator must be square")
        if not (delta.adjoint() == delta):
            raise PreconditionError("operator is not self-adjoint")
        if not (delta @ delta).is_zero():
            raise PreconditionError("operator does not square to zero")
        self.delta = delta
        self.rank = gf4_rank(delta)
        self.hom_dim = delta.rows - 2 * self.rank

    @property
    def m(self) -> int:
        return self.delta.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf4Boundary):
            return NotImplemented
        return self.delta == other.delta

    def __repr__(self) -> str:
        return f"Gf4Boundary(m={self.m}, H={self.hom_dim})"


def hermitian_inner(f, g) -> Gf4Element:
    """Sum of conj(f_j) * g_j over GF(4)."""
    f = gf4_vector(f)
    g = gf4_vector(g)
    if f.shape != g.shape:
        raise DimensionError(f"length mismatch: {f.size} vs {g.size}")
    if f.size == 0:
        return ZERO
    return Gf4Element(int(np.bitwise_xor.reduce(_MUL[_CONJ[f], g])))


def is_self_orthogonal(basis) -> bool:
    """True when all pairwise Hermitian products of the span vanish.

    Checking the generator pairs (including each with itself) suffices:
    the product is sesquilinear, so it vanishes on spans iff it vanishes
    on generators, and (g,f) is the conjugate of (f,g).
    """
    vecs = [gf4_vector(v) for v in basis]
    return all(
        not hermitian_inner(vecs[i], vecs[j])
        for i in range(len(vecs))
        for j in range(i, len(vecs))
    )


def gf4_boundary_from_checks(basis, u: Gf4Matrix, ambient_dim: int | None = None) -> Gf4Boundary:
    """Boundary operator sum_ij u_ij a^i conj(a^j)^T from self-orthogonal checks.

    The check vectors must be linearly independent and span a self-orthogonal
    space, and `u` must be invertible and self-adjoint; the image of the
    result is then exactly the span of the checks.
    """
    vecs = [gf4_vector(v) for v in basis]
    m = len(vecs)
    if m == 0:
        n = 0 if ambient_dim is None else ambient_dim
        return Gf4Boundary(Gf4Matrix.zeros(n, n))
    n = vecs[0].size
    if any(v.size != n for v in vecs):
        raise DimensionError("check vectors must share one length")
    if ambient_dim is not None and ambient_dim != n:
        raise DimensionError(f"ambient_dim {ambient_dim} does not match vectors of length {n}")
    if (u.rows, u.cols) != (m, m):
        raise DimensionError(f"u must be {m}x{m} for {m} checks, got {u.rows}x{u.cols}")
    if not is_self_orthogonal(vecs):
        raise PreconditionError("check vectors do not span a self-orthogonal space")
    if not (u.adjoint() == u):
        raise PreconditionError("u is not self-adjoint")
    if gf4_rank(u) != m:
        raise PreconditionError("u is singular")
    a = Gf4Matrix.from_codes(np.array(vecs).T)
    if gf4_rank(a) != m:
        raise PreconditionError("check vectors are not linearly independent")
    return Gf4Boundary(a @ u @ a.adjoint())


def enumerate_selfadjoint_invertible(m: int) -> list[Gf4Matrix]:
    """All invertible self-adjoint m x m matrices, in a fixed order.

    Self-adjointness pins the lower triangle to the conjugate of the upper
    and restricts the diagonal to {0, 1}, so the search space has
    2^m * 4^(m(m-1)/2) candidates; each is kept iff it has full rank.
    """
    if m < 0:
        raise ParameterError("matrix size must be nonnegative")
    if m > 3:
        raise BudgetError(
            f"enumeration of self-adjoint {m}x{m} matrices is capped at m=3; "
            f"the candidate space grows as 2^m * 4^(m(m-1)/2)"
        )
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    out: list[Gf4Matrix] = []
    for diag in itertools.product((0, 1), repeat=m):
        for upper in itertools.product(range(4), repeat=len(pairs)):
            codes = np.zeros((m, m), dtype=np.uint8)
            for i in range(m):
                codes[i, i] = diag[i]
            for (i, j), val in zip(pairs, upper):
                codes[i, j] = val
                codes[j, i] = _CONJ[val]
            if len(_rref_codes(codes)[1]) == m:
                out.append(Gf4Matrix.from_codes(codes))
    return out


def gf4_product(d1: Gf4Boundary, d2: Gf4Boundary) -> Gf4Boundary:
    """The boundary operator d1 (x) I + I (x) d2 on the tensor product.

    Index (i, j) of the factors maps to row-major position i * m2 + j.
    Self-adjointness and squaring to zero are inherited: the cross terms of
    the square cancel in characteristic 2.
    """
    i1 = Gf4Matrix.identity(d1.m)
    i2 = Gf4Matrix.identity(d2.m)
    return Gf4Boundary(d1.delta.kron(i2) + i1.kron(d2.delta))


# -- fixed check bases ----------------------------------------------------------


def five_qubit_check_basis() -> list[np.ndarray]:
    """Two cyclic checks spanning the [[5,1,3]] parity space over GF(4)."""
    return [gf4_vector("0wWWw"), gf4_vector("w0wWW")]


def steane_gf4_check_basis() -> list[np.ndarray]:
    """The three Steane checks, viewed as GF(4) vectors with 0/1 entries."""
    return [gf4_vector("1000111"), gf4_vector("0101011"), gf4_vector("0011101")]


# -- distance ---------------------------------------------------------------------


@dataclass
class Gf4DistanceResult:
    d: int
    witness: np.ndarray
    cosets_scanned: int
    wall_time: float


def _pack_codes(codes: np.ndarray) -> np.ndarray:
    """Concatenated packed planes [lo words | hi words] of a code vector."""
    return np.concatenate([vector_from_bits(codes & 1), vector_from_bits(codes >> 1)])


def _unpack_codes(packed: np.ndarray, n: int) -> np.ndarray:
    w = packed.size // 2
    j = np.arange(n)
    lo = (packed[:w][j >> 6] >> (j & 63).astype(np.uint64)) & np.uint64(1)
    hi = (packed[w:][j >> 6] >> (j & 63).astype(np.uint64)) & np.uint64(1)
    return (lo | (hi << np.uint64(1))).astype(np.uint8)


def _scale_codes(s: int, codes: np.ndarray) -> np.ndarray:
    return _MUL[s, codes]


def _projective_labels(h: int):
    """Coefficient vectors over GF(4)^h whose first nonzero entry is 1.

    One representative per scalar class of nonzero vectors; there are
    (4^h - 1) / 3 of them.
    """
    for p in range(h):
        for tail in itertools.product(range(4), repeat=h - 1 - p):
            yield (0,) * p + (1,) + tail


class _Gf4Scan:
    """Shared data for scanning the nontrivial cycles of one operator."""

    def __init__(self, d: Gf4Boundary):
        self.n = d.m
        self.codes = d.delta.to_codes()
        self.words = max(1, (self.n + 63) >> 6)
        self.im_rows = gf4_image(d.delta)
        ker_rows = gf4_kernel(d.delta)
        self.hom_rows = _extend_rows(self.im_rows, ker_rows)
        order = sorted(
            range(self.im_rows.shape[0]),
            key=lambda i: (gf4_weight(self.im_rows[i]), i),
        )
        gens = []
        for i in order:
            gens.append(_pack_codes(self.im_rows[i]))
            gens.append(_pack_codes(_scale_codes(2, self.im_rows[i])))
        self.gens = (
            np.array(gens, dtype=np.uint64)
            if gens
            else np.zeros((0, 2 * self.words), dtype=np.uint64)
        )
        self.nlo = min(len(gens), _LO_BITS)
        self.nhi = len(gens) - self.nlo
        self.table = self._subset_table(self.gens[: self.nlo])

    def _subset_table(self, lo_gens: np.ndarray) -> np.ndarray:
        table = np.zeros((1 << len(lo_gens), 2 * self.words), dtype=np.uint64)
        size = 1
        for g in lo_gens:
            np.bitwise_xor(table[:size], g, out=table[size : 2 * size])
            size *= 2
        return table

    def coset_rep(self, coeffs: tuple[int, ...]) -> np.ndarray:
        rep = np.zeros(self.n, dtype=np.uint8)
        for c, row in zip(coeffs, self.hom_rows):
            if c:
                rep ^= _scale_codes(c, row)
        return _pack_codes(rep)

    def _weights(self, arr: np.ndarray) -> np.ndarray:
        w = self.words
        merged = arr[:, :w] | arr[:, w:]
        if w == 1:
            return np.bitwise_count(merged[:, 0])
        return np.bitwise_count(merged).sum(axis=1, dtype=np.uint16)

    def _weight_one(self, packed: np.ndarray) -> int:
        w = self.words
        return int(np.bitwise_count(packed[:w] | packed[w:]).sum())

    def _lex_key(self, packed: np.ndarray) -> bytes:
        return _unpack_codes(packed, self.n).tobytes()

    def _advance(self, base: np.ndarray, t: int, t_prev: int | None) -> np.ndarray:
        if t_prev is None:
            gray = t ^ (t >> 1)
            for i in range(self.nhi):
                if (gray >> i) & 1:
                    base = base ^ self.gens[self.nlo + i]
        else:
            flip = (t & -t).bit_length() - 1
            base = base ^ self.gens[self.nlo + flip]
        return base

    def scan_chunk(self, coeffs: tuple[int, ...], t_start: int, t_stop: int):
        """Exact (weight, lex-key, vector) minimum over part of one coset."""
        base = self._advance(self.coset_rep(coeffs), t_start, None)
        arr = np.empty_like(self.table)
        best_w, best_key, best_vec = None, None, None
        for t in range(t_start, t_stop):
            if t != t_start:
                base = self._advance(base, t, t - 1)
            np.bitwise_xor(self.table, base, out=arr)
            weights = self._weights(arr)
            bm = int(weights.min())
            if best_w is None or bm <= best_w:
                for cand in arr[weights == bm]:
                    key = self._lex_key(cand)
                    if best_w is None or bm < best_w or key < best_key:
                        best_w, best_key, best_vec = bm, key, cand.copy()
        return best_w, best_key, best_vec

    def scan_chunk_bounded(self, coeffs: tuple[int, ...], bound: int):
        """First vector of weight <= bound in scan order over a coset, or None."""
        base = self.coset_rep(coeffs)
        arr = np.empty_like(self.table)
        for t in range(1 << self.nhi):
            if t:
                base = self._advance(base, t, t - 1)
            np.bitwise_xor(self.table, base, out=arr)
            weights = self._weights(arr)
            hits = weights <= bound
            if hits.any():
                return arr[int(np.argmax(hits))].copy()
        return None

    def greedy_descent(self, packed: np.ndarray) -> tuple[np.ndarray, int]:
        """Deterministic local weight descent within one coset.

        Repeatedly adds the first generator that strictly lowers the weight
        until none does.  Cheap, and often lands on or near the coset
        minimum long before the exhaustive walk would reach it.
        """
        cur = packed.copy()
        w = self._weight_one(cur)
        improved = True
        while improved:
            improved = False
            for g in self.gens:
                cand = cur ^ g
                cw = self._weight_one(cand)
                if cw < w:
                    cur, w = cand, cw
                    improved = True
        return cur, w


def _check_budget(d: Gf4Boundary, budget: int) -> None:
    if d.hom_dim == 0:
        raise NoLogicalsError("operator has no homology; distance is undefined")
    steps = 4 ** (d.rank + d.hom_dim)
    if steps > budget:
        raise BudgetError(
            f"exhaustive search needs 4^{d.rank + d.hom_dim} = {steps} steps, "
            f"which exceeds the budget of {budget}; raise the budget to at least {steps}"
        )


def _verify_witness(scan: _Gf4Scan, witness: np.ndarray, weight: int) -> None:
    assert gf4_weight(witness) == weight
    assert not _matvec_codes(scan.codes, witness).any(), "witness is not a cycle"
    assert not _in_row_span(scan.im_rows, witness), "witness is a trivial cycle"


def gf4_distance(
    d: Gf4Boundary, budget: int = DEFAULT_BUDGET, threads: int = 1
) -> Gf4DistanceResult:
    """Exact minimum weight over ker(delta) \\ im(delta).

    Enumerates one coset per projective homology class; scalar multiples
    have equal weight, so the minimum is unaffected.  Work splits across
    class labels and Gray-step ranges, and partial minima merge by
    (weight, lexicographic codes), so results are thread-count independent.
    Fails fast when 4^(rank + H) exceeds `budget`.
    """
    t0 = time.perf_counter()
    _check_budget(d, budget)
    scan = _Gf4Scan(d)
    labels = list(_projective_labels(d.hom_dim))
    hi_total = 1 << scan.nhi
    chunks = 1
    if threads > 1 and hi_total > 1:
        chunks = min(hi_total, 1 << max(1, (threads - 1).bit_length()))
    step = max(1, hi_total // chunks)
    units = [
        (coeffs, start, min(start + step, hi_total))
        for coeffs in labels
        for start in range(0, hi_total, step)
    ]

    if threads > 1 and len(units) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda u: scan.scan_chunk(*u), units))
    else:
        results = [scan.scan_chunk(*u) for u in units]

    weight, _, vec = min(results, key=lambda r: (r[0], r[1]))
    witness = _unpack_codes(vec, scan.n)
    _verify_witness(scan, witness, weight)
    return Gf4DistanceResult(
        d=weight,
        witness=witness,
        cosets_scanned=len(labels),
        wall_time=time.perf_counter() - t0,
    )


def _bounded_steps(kdim: int, bound: int) -> int:
    return sum(math.comb(kdim, t) * 3**t for t in range(1, min(bound, kdim) + 1))


def _support_witness(d: Gf4Boundary, bound: int) -> np.ndarray | None:
    """Exhaustive search for a nontrivial cycle of weight <= bound.

    Works in kernel coordinates: the canonical kernel basis carries one
    unit free coordinate per vector, so any cycle of weight <= bound has at
    most `bound` nonzero coefficients over it.  Supports are enumerated in
    ascending size then lexicographic order, coefficient grids {1,w,W}^t in
    a fixed mixed-radix order, and the first qualifying vector outside
    im(delta) is returned.  A None return is a proof that d > bound.
    """
    ker = gf4_kernel(d.delta)
    kdim = ker.shape[0]
    if kdim == 0 or bound <= 0:
        return None
    im_rows = gf4_image(d.delta)
    words = max(1, (d.m + 63) >> 6)
    scaled = np.zeros((kdim, 3, 2 * words), dtype=np.uint64)
    for i in range(kdim):
        for c in (1, 2, 3):
            scaled[i, c - 1] = _pack_codes(_scale_codes(c, ker[i]))
    for t in range(1, min(bound, kdim) + 1):
        for support in itertools.combinations(range(kdim), t):
            arr = scaled[support[0]]
            for i in support[1:]:
                arr = (arr[:, None, :] ^ scaled[i][None, :, :]).reshape(-1, 2 * words)
            merged = arr[:, :words] | arr[:, words:]
            if words == 1:
                weights = np.bitwise_count(merged[:, 0])
            else:
                weights = np.bitwise_count(merged).sum(axis=1, dtype=np.uint32)
            for idx in np.flatnonzero(weights <= bound):
                v = _unpack_codes(arr[idx], d.m)
                if not _in_row_span(im_rows, v):
                    return v
    return None


def gf4_distance_upper_bound(
    d: Gf4Boundary, bound: int, budget: int = DEFAULT_BUDGET
) -> np.ndarray | None:
    """First nontrivial cycle of weight <= bound found, if any.

    Projective cosets are first probed by greedy descent from each coset
    representative and single-generator offset; failing that, every cycle
    light enough to qualify is enumerated directly through its kernel
    coordinates with early exit.  A None return means that enumeration
    completed, so the distance exceeds `bound`.  The budget bounds the
    enumeration's step count, which grows with dim(ker) and `bound` rather
    than with the full sweep size.
    """
    if d.hom_dim == 0:
        raise NoLogicalsError("operator has no homology; distance is undefined")
    if bound <= 0:
        return None
    steps = _bounded_steps(d.m - d.rank, bound)
    if steps > budget:
        raise BudgetError(
            f"bounded search needs {steps} steps, which exceeds the budget of "
            f"{budget}; raise the budget to at least {steps}"
        )
    scan = _Gf4Scan(d)
    for coeffs in _projective_labels(d.hom_dim):
        rep = scan.coset_rep(coeffs)
        for start in [rep] + [rep ^ g for g in scan.gens]:
            cand, w = scan.greedy_descent(start)
            if w <= bound:
                witness = _unpack_codes(cand, scan.n)
                _verify_witness(scan, witness, w)
                return witness
    witness = _support_witness(d, bound)
    if witness is not None:
        _verify_witness(scan, witness, gf4_weight(witness))
        return witness
    return None
