"""Exact matrices over the ring of numbers ``a / sqrt(2)**k``.

Entries of every circuit over {MINUS1, H, Z, CZ} have this shape, so a
matrix is kept as an integer numerator array (numpy ``object`` dtype, so
products never overflow) over one shared power of ``sqrt(2)``.  Wire 0 is
the most significant bit of a basis index.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from realclifford.circuit import Circuit, Gate, expand_circuit
from realclifford.pauli import PauliOperator


DEFAULT_MATRIX_CAP = 10


class MatrixCapExceeded(ValueError):
    """Raised when a dense matrix would exceed the configured qubit cap."""


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootTwoScalar:
    """The number ``numerator / sqrt(2)**half_power`` in canonical form."""

    numerator: int
    half_power: int = 0

    @classmethod
    def of(cls, numerator: int, half_power: int = 0) -> "RootTwoScalar":
        if numerator == 0:
            return cls(0, 0)
        while half_power < 0:
            numerator, half_power = numerator * 2, half_power + 2
        while half_power >= 2 and numerator % 2 == 0:
            numerator, half_power = numerator // 2, half_power - 2
        return cls(numerator, half_power)

    def is_canonical(self) -> bool:
        return self == RootTwoScalar.of(self.numerator, self.half_power)

    def __add__(self, other: "RootTwoScalar") -> "RootTwoScalar":
        return scalar_add(self, other)

    def __mul__(self, other: "RootTwoScalar") -> "RootTwoScalar":
        return scalar_mul(self, other)

    def __neg__(self) -> "RootTwoScalar":
        return scalar_neg(self)

    def times_root_two(self) -> "RootTwoScalar":
        return RootTwoScalar.of(self.numerator, self.half_power - 1)

    def __str__(self) -> str:
        if self.half_power == 0:
            return str(self.numerator)
        return f"{self.numerator}/r^{self.half_power}"


def scalar_add(a: RootTwoScalar, b: RootTwoScalar) -> RootTwoScalar:
    """Exact sum.

    Values with exponents of different parity sum to ``p + q·sqrt(2)``,
    which has no single-numerator form; that raises ``ArithmeticError``.
    """
    if a.numerator == 0:
        return b
    if b.numerator == 0:
        return a
    if (a.half_power - b.half_power) % 2:
        raise ArithmeticError(f"{a} + {b} is not of the form a/r^k")
    k = max(a.half_power, b.half_power)
    total = a.numerator * 2 ** ((k - a.half_power) // 2) + b.numerator * 2 ** ((k - b.half_power) // 2)
    return RootTwoScalar.of(total, k)


def scalar_mul(a: RootTwoScalar, b: RootTwoScalar) -> RootTwoScalar:
    return RootTwoScalar.of(a.numerator * b.numerator, a.half_power + b.half_power)


def scalar_neg(a: RootTwoScalar) -> RootTwoScalar:
    return RootTwoScalar(-a.numerator, a.half_power)


# ---------------------------------------------------------------------------
# Matrices and vectors
# ---------------------------------------------------------------------------

def _reduce(numerators: np.ndarray, half_power: int) -> Tuple[np.ndarray, int]:
    if all(v == 0 for v in numerators.flat):
        return np.zeros_like(numerators), 0
    while half_power >= 2 and all(v % 2 == 0 for v in numerators.flat):
        numerators = numerators // 2
        half_power -= 2
    return numerators, half_power


class ExactMatrix:
    """A ``2**n × 2**n`` matrix ``numerators / sqrt(2)**half_power``."""

    __slots__ = ("numerators", "half_power")

    def __init__(self, numerators: np.ndarray, half_power: int = 0):
        numerators = np.asarray(numerators, dtype=object)
        if numerators.ndim != 2 or numerators.shape[0] != numerators.shape[1]:
            raise ValueError("ExactMatrix requires a square 2-D array")
        self.numerators, self.half_power = _reduce(numerators, half_power)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(np.identity(1 << n, dtype=int).astype(object))

    @property
    def dim(self) -> int:
        return self.numerators.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def entry(self, row: int, col: int) -> RootTwoScalar:
        return RootTwoScalar.of(int(self.numerators[row, col]), self.half_power)

    @property
    def entries(self):
        return [[self.entry(r, c) for c in range(self.dim)] for r in range(self.dim)]

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.dim != other.dim:
            raise ValueError(f"Dimension mismatch: {self.dim} != {other.dim}")
        return ExactMatrix(self.numerators @ other.numerators, self.half_power + other.half_power)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(-self.numerators, self.half_power)

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.numerators.T.copy(), self.half_power)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.half_power == other.half_power
            and bool(np.array_equal(self.numerators, other.numerators))
        )

    def __hash__(self):
        return hash((self.half_power, tuple(self.numerators.flat)))

    def is_orthogonal(self) -> bool:
        return self.T @ self == ExactMatrix.identity(self.n_qubits)

    def __repr__(self) -> str:
        return f"ExactMatrix(dim={self.dim}, half_power={self.half_power})"


@dataclass(frozen=True)
class ExactVector:
    """A column ``numerators / sqrt(2)**half_power``; hashable."""

    numerators: Tuple[int, ...]
    half_power: int = 0

    @classmethod
    def from_array(cls, numerators: np.ndarray, half_power: int) -> "ExactVector":
        reduced, k = _reduce(np.asarray(numerators, dtype=object), half_power)
        return cls(tuple(int(v) for v in reduced), k)

    def __neg__(self) -> "ExactVector":
        return ExactVector(tuple(-v for v in self.numerators), self.half_power)

    def entry(self, index: int) -> RootTwoScalar:
        return RootTwoScalar.of(self.numerators[index], self.half_power)


def _check_cap(n: int, cap: Optional[int]) -> None:
    limit = DEFAULT_MATRIX_CAP if cap is None else cap
    if n > limit:
        raise MatrixCapExceeded(
            f"{n} qubits exceeds the dense matrix cap of {limit}; raise it with --matrix-cap"
        )


def _bit(n: int, wire: int) -> int:
    return 1 << (n - 1 - wire)


def _apply_primitive(gate: Gate, rows: np.ndarray, n: int) -> int:
    """Left-multiply ``rows`` in place by a primitive gate.

    Returns the increase of the sqrt(2) exponent (1 for H, else 0).
    """
    index = np.arange(1 << n)
    if gate.name == "MINUS1":
        rows *= -1
        return 0
    if gate.name == "Z":
        mask = (index & _bit(n, gate.wires[0])) != 0
        rows[mask] *= -1
        return 0
    if gate.name == "CZ":
        a, b = _bit(n, gate.wires[0]), _bit(n, gate.wires[1])
        mask = ((index & a) != 0) & ((index & b) != 0)
        rows[mask] *= -1
        return 0
    if gate.name == "H":
        bit = _bit(n, gate.wires[0])
        low = index[(index & bit) == 0]
        high = low | bit
        top, bottom = rows[low].copy(), rows[high].copy()
        rows[low] = top + bottom
        rows[high] = top - bottom
        return 1
    raise ValueError(f"Not a primitive gate: {gate.name}")


def _evolve(c: Circuit, rows: np.ndarray) -> Tuple[np.ndarray, int]:
    k = 0
    for gate in expand_circuit(c).gates:
        k += _apply_primitive(gate, rows, c.n_qubits)
    return rows, k


def circuit_matrix(c: Circuit, cap: Optional[int] = None) -> ExactMatrix:
    """Exact matrix ``G_k ··· G_1``; the first gate listed acts first."""
    _check_cap(c.n_qubits, cap)
    rows = np.identity(1 << c.n_qubits, dtype=int).astype(object)
    rows, k = _evolve(c, rows)
    return ExactMatrix(rows, k)


def gate_matrix(gate: Gate) -> ExactMatrix:
    """Matrix of a gate on its own span of wires (MINUS1 gives ``[[-1]]``)."""
    if not gate.wires:
        return circuit_matrix(Circuit(0, (gate,)))
    low = min(gate.wires)
    width = max(gate.wires) - low + 1
    return circuit_matrix(Circuit(width, (gate.shifted(-low),)))


def apply_to_basis_state(c: Circuit, index: int, cap: Optional[int] = None) -> ExactVector:
    """Exact image of basis vector ``e_index``, evolved gate by gate."""
    _check_cap(c.n_qubits, cap)
    dim = 1 << c.n_qubits
    if not 0 <= index < dim:
        raise ValueError(f"Basis index {index} out of range for {c.n_qubits} qubits")
    vector = np.zeros(dim, dtype=object)
    vector[index] = 1
    vector, k = _evolve(c, vector)
    return ExactVector.from_array(vector, k)


def apply_gate_to_vector(v: ExactVector, gate: Gate, n: int) -> ExactVector:
    """Exact image of ``v`` under one gate on ``n`` wires."""
    vector = np.array(v.numerators, dtype=object)
    k = v.half_power
    for primitive in expand_circuit(Circuit(n, (gate,))).gates:
        k += _apply_primitive(primitive, vector, n)
    return ExactVector.from_array(vector, k)


def conjugate(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """``a · b · a⁻¹`` for orthogonal ``a``."""
    if a.dim != b.dim:
        raise ValueError(f"Dimension mismatch: {a.dim} != {b.dim}")
    if not a.is_orthogonal():
        raise ValueError("conjugate requires an orthogonal matrix")
    return a @ b @ a.T


# ---------------------------------------------------------------------------
# Pauli matrices
# ---------------------------------------------------------------------------

def _index_mask(mask: int, n: int) -> int:
    """Convert a wire bit mask (bit q = wire q) to basis-index bits."""
    return sum(_bit(n, q) for q in range(n) if (mask >> q) & 1)


def pauli_matrix(p: PauliOperator) -> ExactMatrix:
    """Exact matrix of ``sign · X**x Z**z`` per wire: ``|j> -> ± |j ^ x>``."""
    dim = 1 << p.n
    x_bits, z_bits = _index_mask(p.x, p.n), _index_mask(p.z, p.n)
    numerators = np.zeros((dim, dim), dtype=object)
    for j in range(dim):
        phase = -1 if (j & z_bits).bit_count() & 1 else 1
        numerators[j ^ x_bits, j] = p.sign * phase
    return ExactMatrix(numerators)


def matrix_to_signed_pauli(m: ExactMatrix) -> Optional[PauliOperator]:
    """The signed Pauli word whose matrix is ``m``, or None when there is none."""
    n = m.n_qubits
    if m.half_power != 0:
        return None
    column = m.numerators[:, 0]
    nonzero = [r for r in range(m.dim) if column[r] != 0]
    if len(nonzero) != 1 or column[nonzero[0]] not in (1, -1):
        return None
    row = nonzero[0]
    sign = int(column[row])
    x = sum(1 << q for q in range(n) if row & _bit(n, q))
    z = 0
    for q in range(n):
        value = m.numerators[row ^ _bit(n, q), _bit(n, q)]
        if value == -sign:
            z |= 1 << q
        elif value != sign:
            return None
    candidate = PauliOperator(sign, n, x, z)
    return candidate if pauli_matrix(candidate) == m else None


def format_matrix(m: ExactMatrix) -> str:
    """Row-major text, tab-separated, entries as ``a/r^k`` (r = sqrt 2)."""
    return "\n".join(
        "\t".join(str(m.entry(r, c)) for c in range(m.dim)) for r in range(m.dim)
    )


def matrices_equal(circuits: Sequence[Circuit], cap: Optional[int] = None) -> bool:
    first, *rest = [circuit_matrix(c, cap) for c in circuits]
    return all(first == other for other in rest)

