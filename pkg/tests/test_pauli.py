"""Tests for the Pauli module."""

import itertools

import pytest

from realclifford.exact import pauli_matrix
from realclifford.pauli import (
    PauliError,
    PauliLetter,
    PauliOperator,
    commutes,
    format_pauli,
    letter_mul,
    parse_pauli,
    pauli_mul,
    squares_to_identity,
    symplectic_product,
    tensor,
)


def all_paulis(n):
    for sign in (1, -1):
        for letters in itertools.product(PauliLetter, repeat=n):
            yield PauliOperator.from_letters(sign, letters) if n else PauliOperator(sign, 0)


class TestLetters:
    """Tests for single-letter multiplication."""

    def test_xz_squares_to_minus_identity(self):
        assert letter_mul(PauliLetter.XZ, PauliLetter.XZ) == (-1, PauliLetter.I)

    def test_z_times_x(self):
        """Z·X = -X·Z."""
        assert letter_mul(PauliLetter.Z, PauliLetter.X) == (-1, PauliLetter.XZ)

    def test_x_times_z(self):
        assert letter_mul(PauliLetter.X, PauliLetter.Z) == (1, PauliLetter.XZ)

    def test_parse_rejects_unknown(self):
        with pytest.raises(PauliError, match="Invalid Pauli letter"):
            PauliLetter.parse("Y")


class TestPauliOperator:
    """Tests for construction and validation."""

    def test_bad_sign(self):
        with pytest.raises(PauliError, match="sign"):
            PauliOperator(2, 1)

    def test_mask_beyond_length(self):
        with pytest.raises(PauliError, match="exceed"):
            PauliOperator(1, 1, x=2)

    def test_single(self):
        p = PauliOperator.single(3, 1, PauliLetter.X)
        assert p.letters == [PauliLetter.I, PauliLetter.X, PauliLetter.I]

    def test_single_out_of_range(self):
        with pytest.raises(PauliError, match="out of range"):
            PauliOperator.single(2, 2, PauliLetter.Z)

    def test_identity_ignores_sign(self):
        assert PauliOperator.identity(2, sign=-1).is_identity()

    def test_negate(self):
        assert parse_pauli("Z.X").negate() == parse_pauli("-Z.X")

    def test_truncate(self):
        p = parse_pauli("Z.I")
        assert p.truncate(1) == parse_pauli("Z")
        with pytest.raises(PauliError, match="Cannot truncate"):
            parse_pauli("I.Z").truncate(1)

    def test_tensor_puts_left_on_top(self):
        assert tensor(parse_pauli("-X"), parse_pauli("Z")) == parse_pauli("-X.Z")


class TestMultiplication:
    """Tests for pauli_mul against exact matrices."""

    def test_two_qubit_example(self):
        p = parse_pauli("X.Z")
        q = parse_pauli("Z.X")
        assert pauli_mul(p, q) == parse_pauli("-XZ.XZ")

    def test_length_mismatch(self):
        with pytest.raises(PauliError, match="length mismatch"):
            pauli_mul(parse_pauli("X"), parse_pauli("X.X"))

    @pytest.mark.parametrize("n", [1, 2])
    def test_agrees_with_matrix_product(self, n):
        paulis = list(all_paulis(n))
        matrices = {p: pauli_matrix(p) for p in paulis}
        for p, q in itertools.product(paulis, repeat=2):
            assert pauli_matrix(p * q) == matrices[p] @ matrices[q]


class TestPredicates:
    """Tests for squaring and commutation."""

    def test_squares_to_identity(self):
        assert squares_to_identity(parse_pauli("X.Z"))
        assert not squares_to_identity(parse_pauli("XZ.I"))
        assert squares_to_identity(parse_pauli("XZ.XZ"))

    def test_squares_agrees_with_product(self):
        for p in all_paulis(2):
            assert squares_to_identity(p) == ((p * p).sign == 1)

    def test_symplectic_product(self):
        assert symplectic_product(parse_pauli("Z"), parse_pauli("X")) == 1
        assert symplectic_product(parse_pauli("Z.Z"), parse_pauli("X.X")) == 0
        assert commutes(parse_pauli("Z.Z"), parse_pauli("X.X"))

    def test_commutation_agrees_with_products(self):
        for p, q in itertools.product(all_paulis(2), repeat=2):
            assert commutes(p, q) == (p * q == q * p)


class TestTextFormat:
    """Tests for the Pauli text format."""

    def test_format(self):
        p = PauliOperator.from_letters(-1, [PauliLetter.Z, PauliLetter.XZ, PauliLetter.I])
        assert format_pauli(p) == "-Z.XZ.I"
        assert str(p) == "-Z.XZ.I"

    def test_parse_plus_sign(self):
        assert parse_pauli("+X") == parse_pauli("X")

    def test_parse_empty_word(self):
        assert parse_pauli("-") == PauliOperator(-1, 0)

    def test_parse_rejects_whitespace(self):
        with pytest.raises(PauliError, match="Whitespace"):
            parse_pauli("X. Z")
