"""The real Pauli group: signed words over the letters I, X, Z and XZ.

A word is stored as two packed bit masks, ``x`` and ``z``, where bit ``q``
belongs to wire ``q`` (wire 0 is the top wire and the leftmost tensor
factor).  The letter on a wire is ``X**x · Z**z``, so ``XZ`` is the real,
antisymmetric matrix product ``X·Z``.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Tuple


class PauliError(ValueError):
    """Raised for malformed Pauli text or mismatched word lengths."""


class PauliLetter(Enum):
    """One tensor factor ``X**x · Z**z``."""

    I = (0, 0)
    X = (1, 0)
    Z = (0, 1)
    XZ = (1, 1)

    @property
    def x(self) -> int:
        return self.value[0]

    @property
    def z(self) -> int:
        return self.value[1]

    @classmethod
    def from_bits(cls, x: int, z: int) -> "PauliLetter":
        return _LETTERS_BY_BITS[(x & 1, z & 1)]

    @classmethod
    def parse(cls, token: str) -> "PauliLetter":
        try:
            return cls[token]
        except KeyError:
            raise PauliError(f"Invalid Pauli letter: {token!r}") from None


_LETTERS_BY_BITS = {letter.value: letter for letter in PauliLetter}


def letter_mul(a: PauliLetter, b: PauliLetter) -> Tuple[int, PauliLetter]:
    """Multiply two letters exactly, returning ``(sign, letter)``.

    Moving ``Z**za`` past ``X**xb`` costs a factor ``(-1)**(za·xb)``.
    """
    sign = -1 if (a.z & b.x) else 1
    return sign, PauliLetter.from_bits(a.x ^ b.x, a.z ^ b.z)


@dataclass(frozen=True)
class PauliOperator:
    """A signed Pauli word ``sign · (P_0 ⊗ … ⊗ P_{n-1})``."""

    sign: int
    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise PauliError(f"Pauli sign must be +1 or -1, got {self.sign}")
        if self.n < 0:
            raise PauliError(f"Pauli length must be non-negative, got {self.n}")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise PauliError("Pauli bit masks exceed the word length")

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, n: int, sign: int = 1) -> "PauliOperator":
        return cls(sign, n)

    @classmethod
    def from_letters(cls, sign: int, letters: Iterable[PauliLetter]) -> "PauliOperator":
        x = z = 0
        n = 0
        for q, letter in enumerate(letters):
            x |= letter.x << q
            z |= letter.z << q
            n = q + 1
        return cls(sign, n, x, z)

    @classmethod
    def single(cls, n: int, wire: int, letter: PauliLetter, sign: int = 1) -> "PauliOperator":
        """The word with ``letter`` on ``wire`` and ``I`` elsewhere."""
        if not 0 <= wire < n:
            raise PauliError(f"Wire {wire} out of range for {n} qubits")
        return cls(sign, n, letter.x << wire, letter.z << wire)

    # -- accessors ----------------------------------------------------------

    @property
    def letters(self) -> List[PauliLetter]:
        return [self.letter(q) for q in range(self.n)]

    def letter(self, wire: int) -> PauliLetter:
        return PauliLetter.from_bits(self.x >> wire, self.z >> wire)

    @property
    def support(self) -> int:
        """Bit mask of wires carrying a non-identity letter."""
        return self.x | self.z

    def is_identity(self) -> bool:
        """True for ``±I``; the sign is ignored."""
        return self.support == 0

    def negate(self) -> "PauliOperator":
        return PauliOperator(-self.sign, self.n, self.x, self.z)

    def with_sign(self, sign: int) -> "PauliOperator":
        return PauliOperator(sign, self.n, self.x, self.z)

    def unsigned(self) -> "PauliOperator":
        return self.with_sign(1)

    def truncate(self, n: int) -> "PauliOperator":
        """Drop the wires ``n`` and below; they must carry ``I``."""
        if self.support >> n:
            raise PauliError(f"Cannot truncate {format_pauli(self)} to {n} qubits")
        return PauliOperator(self.sign, n, self.x, self.z)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return pauli_mul(self, other)

    def __str__(self) -> str:
        return format_pauli(self)


def _check_lengths(p: PauliOperator, q: PauliOperator) -> None:
    if p.n != q.n:
        raise PauliError(f"Pauli length mismatch: {p.n} != {q.n}")


def pauli_mul(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact product ``p·q`` with the accumulated reordering sign."""
    _check_lengths(p, q)
    sign = p.sign * q.sign
    if (p.z & q.x).bit_count() & 1:
        sign = -sign
    return PauliOperator(sign, p.n, p.x ^ q.x, p.z ^ q.z)


def squares_to_identity(p: PauliOperator) -> bool:
    """True iff ``p·p = +I``, i.e. ``p`` has evenly many ``XZ`` letters."""
    return (p.x & p.z).bit_count() % 2 == 0


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """0 if ``p`` and ``q`` commute, 1 if they anticommute."""
    _check_lengths(p, q)
    return ((p.x & q.z) ^ (p.z & q.x)).bit_count() & 1


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    return symplectic_product(p, q) == 0


def tensor(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """``p ⊗ q`` with ``p`` on the upper wires."""
    return PauliOperator(p.sign * q.sign, p.n + q.n, p.x | (q.x << p.n), p.z | (q.z << p.n))


# ---------------------------------------------------------------------------
# Text format: optional leading "-", letters joined by "."
# ---------------------------------------------------------------------------

def format_pauli(p: PauliOperator) -> str:
    prefix = "-" if p.sign < 0 else ""
    return prefix + ".".join(letter.name for letter in p.letters)


def parse_pauli(text: str) -> PauliOperator:
    """Parse ``"-Z.XZ.I"``-style text; an empty word denotes ``n = 0``."""
    body = text.strip()
    sign = 1
    if body.startswith("-"):
        sign, body = -1, body[1:]
    elif body.startswith("+"):
        body = body[1:]
    if not body:
        return PauliOperator(sign, 0)
    if any(ch.isspace() for ch in body):
        raise PauliError(f"Whitespace inside Pauli word: {text!r}")
    return PauliOperator.from_letters(sign, [PauliLetter.parse(tok) for tok in body.split(".")])
