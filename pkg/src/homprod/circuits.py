"""Encoding circuits for factor and product codes, verified by tableau propagation.

A code whose checks come from a square boundary operator can be encoded by
initializing single qubits in |0> or |+> and applying a CNOT circuit that
realizes a canonical-form witness U as a linear map on Z-type Pauli vectors.
For a two-factor product the witness factorizes, so the circuit is the
second factor's circuit on every row of an M1 x M2 grid followed by the
first factor's circuit on every column.  ``verify_encoder`` is the arbiter
for every orientation convention in this module: it propagates the initial
stabilizer generators through the gate list and demands that the resulting
spans equal the code's check spaces exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import BoundaryOperator, canonical_witness
from .errors import DimensionError, ParameterError, PreconditionError
from .gf2 import BitMatrix, image_basis, row_space_basis
from .product import ProductComplex

VALID_TAGS = ("data", "zero", "plus", "epr_a", "epr_b")


@dataclass(frozen=True)
class QubitInit:
    """Initialization tag for one qubit; EPR tags carry the partner index."""

    tag: str
    partner: int | None = None

    def __post_init__(self):
        if self.tag not in VALID_TAGS:
            raise ParameterError(f"unknown init tag {self.tag!r}")
        needs_partner = self.tag in ("epr_a", "epr_b")
        if needs_partner != (self.partner is not None):
            raise ParameterError("partner is required exactly for EPR tags")


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ParameterError("control and target must differ")


@dataclass(frozen=True)
class EncodingCircuit:
    """Grid of initialized qubits followed by an ordered CNOT list."""

    n_qubits: int
    init: tuple[QubitInit, ...]
    gates: tuple[Cnot, ...]

    def __post_init__(self):
        if len(self.init) != self.n_qubits:
            raise DimensionError("need exactly one init tag per qubit")
        for q, tag in enumerate(self.init):
            if tag.partner is None:
                continue
            p = tag.partner
            if not 0 <= p < self.n_qubits or p == q:
                raise ParameterError(f"qubit {q}: partner {p} out of range")
            other = self.init[p]
            expected = "epr_b" if tag.tag == "epr_a" else "epr_a"
            if other.tag != expected or other.partner != q:
                raise ParameterError(f"qubit {q}: EPR partner mismatch")
        for g in self.gates:
            if not (0 <= g.control < self.n_qubits and 0 <= g.target < self.n_qubits):
                raise DimensionError("gate touches a qubit outside the circuit")

    @property
    def data_qubits(self) -> tuple[int, ...]:
        return tuple(q for q, tag in enumerate(self.init) if tag.tag == "data")

    def tag_counts(self) -> dict[str, int]:
        counts = {tag: 0 for tag in VALID_TAGS}
        for tag in self.init:
            counts[tag.tag] += 1
        return counts


def _xor_column(mat: BitMatrix, src: int, dst: int) -> None:
    """XOR column src into column dst, vectorized over all rows."""
    bits = (mat.data[:, src >> 6] >> np.uint64(src & 63)) & np.uint64(1)
    mat.data[:, dst >> 6] ^= bits << np.uint64(dst & 63)


class PauliTableau:
    """Tracked stabilizer generators: row r has X support x_part[r], Z support z_part[r]."""

    __slots__ = ("x_part", "z_part")

    def __init__(self, x_part: BitMatrix, z_part: BitMatrix):
        if x_part.rows != z_part.rows or x_part.cols != z_part.cols:
            raise DimensionError("X and Z parts must have identical shape")
        self.x_part = x_part
        self.z_part = z_part

    @property
    def n_rows(self) -> int:
        return self.x_part.rows

    @property
    def n_qubits(self) -> int:
        return self.x_part.cols

    def apply_cnot(self, control: int, target: int) -> None:
        """Conjugate every row: X on the control spreads to the target, Z on the target to the control."""
        _xor_column(self.x_part, control, target)
        _xor_column(self.z_part, target, control)

    def apply_circuit(self, gates) -> None:
        for g in gates:
            self.apply_cnot(g.control, g.target)


def initial_tableau(circuit: EncodingCircuit) -> PauliTableau:
    """Stabilizers of the initialized state: Z on zeros, X on pluses, XX and ZZ on EPR pairs."""
    n = circuit.n_qubits
    x_rows: list[list[int]] = []
    z_rows: list[list[int]] = []
    for q, tag in enumerate(circuit.init):
        if tag.tag == "zero":
            x_rows.append([])
            z_rows.append([q])
        elif tag.tag == "plus":
            x_rows.append([q])
            z_rows.append([])
        elif tag.tag == "epr_a":
            pair = [q, tag.partner]
            x_rows.append(pair)
            z_rows.append([])
            x_rows.append([])
            z_rows.append(pair)
    x = BitMatrix.zeros(len(x_rows), n)
    z = BitMatrix.zeros(len(z_rows), n)
    for r, support in enumerate(x_rows):
        for q in support:
            x.set(r, q, 1)
    for r, support in enumerate(z_rows):
        for q in support:
            z.set(r, q, 1)
    return PauliTableau(x, z)


def decompose_invertible(u: BitMatrix) -> list[tuple[int, int]]:
    """Factor an invertible matrix into row additions.

    Each op (src, dst) means "add row src to row dst"; multiplying the
    corresponding elementary matrices in list order reproduces u exactly.
    Zero pivots are repaired by adding a lower row instead of swapping, so
    at most M ops are spent per column and the list length is below M^2 + M.
    """
    if u.rows != u.cols:
        raise PreconditionError("only square matrices can be factored")
    m = u.rows
    work = u.to_dense()
    ops: list[tuple[int, int]] = []

    def add_row(src: int, dst: int) -> None:
        work[dst, :] ^= work[src, :]
        ops.append((src, dst))

    for c in range(m):
        if work[c, c] == 0:
            pivot = next((r for r in range(c + 1, m) if work[r, c]), None)
            if pivot is None:
                raise PreconditionError("matrix is singular")
            add_row(pivot, c)
        for r in range(m):
            if r != c and work[r, c]:
                add_row(c, r)
    return ops


def gates_for_linear_map(ops) -> tuple[Cnot, ...]:
    """The CNOT list acting on Z-type Pauli vectors as the composed row additions.

    A CNOT copies Z from target to control, so op (src, dst) becomes
    CNOT(control=dst, target=src); the factorization is emitted in reverse
    because the left-most factor must act last.
    """
    return tuple(Cnot(dst, src) for (src, dst) in reversed(ops))


def factor_encoder(d: BoundaryOperator) -> EncodingCircuit:
    """Canonical |0>/|+> init followed by the CNOT realization of a witness."""
    m, h = d.m, d.hom_dim
    l = (m - h) // 2
    gates = gates_for_linear_map(decompose_invertible(canonical_witness(d)))
    init = (
        [QubitInit("data")] * h + [QubitInit("zero")] * l + [QubitInit("plus")] * l
    )
    return EncodingCircuit(m, tuple(init), gates)


def _block(index: int, h: int, l: int) -> str:
    if index < h:
        return "h"
    if index < h + l:
        return "z"
    return "p"


def product_encoder(p: ProductComplex) -> EncodingCircuit:
    """Grid init for the canonical product code, then row circuits, then column circuits.

    Qubit (i, j) sits at row-major index i * M2 + j.  Classifying each grid
    coordinate against the canonical blocks of its factor gives the tag:
    both coordinates free of checks means a data qubit, a Z-check position
    in either factor (and no X position) means |0>, the X-check analogue
    means |+>, and the mixed Z/X corner pairs up into EPR states.
    """
    d1, d2 = p.factor1, p.factor2
    m1, h1 = d1.m, d1.hom_dim
    m2, h2 = d2.m, d2.hom_dim
    l1, l2 = (m1 - h1) // 2, (m2 - h2) // 2

    init: list[QubitInit] = []
    for i in range(m1):
        b1 = _block(i, h1, l1)
        for j in range(m2):
            b2 = _block(j, h2, l2)
            if b1 == "h" and b2 == "h":
                init.append(QubitInit("data"))
            elif "p" not in (b1, b2):
                init.append(QubitInit("zero"))
            elif "z" not in (b1, b2):
                init.append(QubitInit("plus"))
            elif (b1, b2) == ("z", "p"):
                init.append(QubitInit("epr_a", (i + l1) * m2 + (j - l2)))
            else:
                init.append(QubitInit("epr_b", (i - l1) * m2 + (j + l2)))

    row_gates = gates_for_linear_map(decompose_invertible(canonical_witness(d2)))
    col_gates = gates_for_linear_map(decompose_invertible(canonical_witness(d1)))
    gates: list[Cnot] = []
    for i in range(m1):
        base = i * m2
        gates.extend(Cnot(base + g.control, base + g.target) for g in row_gates)
    for j in range(m2):
        gates.extend(Cnot(g.control * m2 + j, g.target * m2 + j) for g in col_gates)
    return EncodingCircuit(m1 * m2, tuple(init), tuple(gates))


def verify_encoder(circuit: EncodingCircuit, target) -> bool:
    """True iff the propagated stabilizers span exactly the target's check spaces.

    The target is a boundary operator or a product complex.  The initial
    generators are conjugated through the gate list; acceptance requires the
    Z rows to span the image of the operator and the X rows the image of its
    transpose, compared in canonical echelon form.
    """
    op = target.partial if isinstance(target, ProductComplex) else target
    if circuit.n_qubits != op.m:
        raise DimensionError(
            f"circuit has {circuit.n_qubits} qubits but the code needs {op.m}"
        )
    tableau = initial_tableau(circuit)
    tableau.apply_circuit(circuit.gates)
    z_ok = row_space_basis(tableau.z_part) == image_basis(op.matrix)
    x_ok = row_space_basis(tableau.x_part) == image_basis(op.matrix.transpose())
    return z_ok and x_ok
