"""Conjugation tableaux of real Clifford operators.

A tableau records ``U · Z_q · U⁻¹`` and ``U · X_q · U⁻¹`` for every wire.
By linearity these images determine ``U · P · U⁻¹`` for every Pauli word,
and they determine ``U`` itself up to a global ``±1``; the image of the
first basis vector resolves that sign.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from realclifford.circuit import Circuit, Gate, expand, expand_circuit
from realclifford.exact import ExactVector, apply_to_basis_state
from realclifford.pauli import (
    PauliLetter,
    PauliOperator,
    pauli_mul,
    squares_to_identity,
    symplectic_product,
)


class TableauError(ValueError):
    """Raised for tableaux of mismatched width."""


# ---------------------------------------------------------------------------
# Primitive conjugation rules on packed words
# ---------------------------------------------------------------------------

def conjugate_by_primitive(gate: Gate, p: PauliOperator) -> PauliOperator:
    """``G · p · G⁻¹`` for a primitive gate G."""
    name = gate.name
    sign, x, z = p.sign, p.x, p.z
    if name == "MINUS1":
        return p
    if name == "H":
        bit = 1 << gate.wires[0]
        xq, zq = x & bit, z & bit
        if xq and zq:
            sign = -sign
        x = (x & ~bit) | zq
        z = (z & ~bit) | xq
    elif name == "Z":
        if x >> gate.wires[0] & 1:
            sign = -sign
    elif name == "CZ":
        a, b = gate.wires
        xa, xb = x >> a & 1, x >> b & 1
        if xa and xb:
            sign = -sign
        z ^= (xb << a) | (xa << b)
    else:
        raise ValueError(f"Not a primitive gate: {name}")
    return PauliOperator(sign, p.n, x, z)


def conjugate_by_gate(gate: Gate, p: PauliOperator) -> PauliOperator:
    for primitive in expand(gate):
        p = conjugate_by_primitive(primitive, p)
    return p


# ---------------------------------------------------------------------------
# Tableau
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tableau:
    """Signed images of each single-wire Z and X under conjugation."""

    n: int
    z_images: Tuple[PauliOperator, ...]
    x_images: Tuple[PauliOperator, ...]

    @classmethod
    def identity(cls, n: int) -> "Tableau":
        return cls(
            n,
            tuple(PauliOperator.single(n, q, PauliLetter.Z) for q in range(n)),
            tuple(PauliOperator.single(n, q, PauliLetter.X) for q in range(n)),
        )

    @classmethod
    def from_gate(cls, gate: Gate, n: Optional[int] = None) -> "Tableau":
        width = max(gate.wires, default=-1) + 1 if n is None else n
        return cls.identity(width).then(gate)

    @classmethod
    def from_circuit(cls, c: Circuit) -> "Tableau":
        t = cls.identity(c.n_qubits)
        for gate in expand_circuit(c).gates:
            t = t.then(gate)
        return t

    def then(self, gate: Gate) -> "Tableau":
        """Tableau of this operator followed by ``gate``."""
        return Tableau(
            self.n,
            tuple(conjugate_by_gate(gate, p) for p in self.z_images),
            tuple(conjugate_by_gate(gate, p) for p in self.x_images),
        )

    def then_all(self, gates: Iterable[Gate]) -> "Tableau":
        t = self
        for gate in gates:
            t = t.then(gate)
        return t

    def images(self) -> Tuple[PauliOperator, ...]:
        return self.z_images + self.x_images

    def key(self) -> Tuple[Tuple[int, int, int], ...]:
        """Hashable, sign-sensitive identity of the tableau."""
        return tuple((p.sign, p.x, p.z) for p in self.images())

    def unsigned_key(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((p.x, p.z) for p in self.images())

    def packed(self) -> int:
        """The tableau as one integer: per image a sign bit then x and z masks."""
        width = 2 * self.n + 1
        value = 0
        for p in self.images():
            value = (value << width) | ((p.sign < 0) << (2 * self.n)) | (p.x << self.n) | p.z
        return value

    def restrict(self, n: int) -> "Tableau":
        """Drop the wires ``n`` and below; the tableau must act trivially there."""
        return Tableau(
            n,
            tuple(p.truncate(n) for p in self.z_images[:n]),
            tuple(p.truncate(n) for p in self.x_images[:n]),
        )


def _check_width(t: Tableau, n: int) -> None:
    if t.n != n:
        raise TableauError(f"Tableau width mismatch: {t.n} != {n}")


def apply(t: Tableau, p: PauliOperator) -> PauliOperator:
    """``U · p · U⁻¹``.

    ``p`` is the ordered product of ``X_q**x_q Z_q**z_q`` over the wires, so
    its image is the same product of the generator images.
    """
    _check_width(t, p.n)
    result = PauliOperator.identity(t.n, p.sign)
    for q in range(t.n):
        if p.x >> q & 1:
            result = pauli_mul(result, t.x_images[q])
        if p.z >> q & 1:
            result = pauli_mul(result, t.z_images[q])
    return result


def compose(a: Tableau, b: Tableau) -> Tableau:
    """Tableau of ``a ∘ b``: ``b`` acts first.

    For circuits, ``from_circuit(c1 + c2) == compose(from_circuit(c2), from_circuit(c1))``.
    """
    _check_width(a, b.n)
    return Tableau(
        a.n,
        tuple(apply(a, p) for p in b.z_images),
        tuple(apply(a, p) for p in b.x_images),
    )


def inverse(t: Tableau) -> Tableau:
    """Solve ``t(P) = g`` for every generator ``g``.

    Conjugation preserves commutation, so the x and z bits of ``P`` on wire
    ``j`` are the commutation bits of ``g`` with ``t(Z_j)`` and ``t(X_j)``.
    The sign follows from applying ``t`` to the unsigned solution.
    """
    def solve(target: PauliOperator) -> PauliOperator:
        x = z = 0
        for j in range(t.n):
            x |= symplectic_product(target, t.z_images[j]) << j
            z |= symplectic_product(target, t.x_images[j]) << j
        candidate = PauliOperator(1, t.n, x, z)
        image = apply(t, candidate)
        if (image.x, image.z) != (target.x, target.z):
            raise TableauError("Tableau is not invertible")
        return candidate.with_sign(image.sign * target.sign)

    ident = Tableau.identity(t.n)
    return Tableau(
        t.n,
        tuple(solve(g) for g in ident.z_images),
        tuple(solve(g) for g in ident.x_images),
    )


def is_pauli_automorphism(t: Tableau) -> bool:
    """True iff ``t`` is the conjugation action of a real Clifford.

    Every image must square to ``+I`` and the images must satisfy the
    commutation relations of the generators they replace.
    """
    if len(t.z_images) != t.n or len(t.x_images) != t.n:
        return False
    if any(p.n != t.n or not squares_to_identity(p) for p in t.images()):
        return False
    for i in range(t.n):
        for j in range(t.n):
            if symplectic_product(t.z_images[i], t.x_images[j]) != (i == j):
                return False
            if symplectic_product(t.z_images[i], t.z_images[j]):
                return False
            if symplectic_product(t.x_images[i], t.x_images[j]):
                return False
    return True


# ---------------------------------------------------------------------------
# Operator fingerprints
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorFingerprint:
    """Tableau plus the exact image of ``e_0``: equal iff the operators are."""

    tableau: Tableau
    column0: ExactVector

    def key(self):
        return self.tableau.key(), self.column0


def fingerprint(c: Circuit, cap: Optional[int] = None) -> OperatorFingerprint:
    return OperatorFingerprint(Tableau.from_circuit(c), apply_to_basis_state(c, 0, cap))


def embed(t: Tableau, n: int) -> Tableau:
    """Lift ``t`` to ``n`` wires, acting trivially on the wires below it."""
    if n < t.n:
        raise TableauError(f"Cannot embed a {t.n}-wire tableau into {n} wires")
    ident = Tableau.identity(n)
    return Tableau(
        n,
        tuple(PauliOperator(p.sign, n, p.x, p.z) for p in t.z_images) + ident.z_images[t.n:],
        tuple(PauliOperator(p.sign, n, p.x, p.z) for p in t.x_images) + ident.x_images[t.n:],
    )
