"""Tests for closed-form counts, enumeration and the bijection check."""

import pytest

from realclifford.counting import (
    MAX_BIJECTION_QUBITS,
    BijectionReport,
    bfs_closure,
    clifford_order,
    count_report,
    count_x_circuits,
    count_z_circuits,
    enumerate_normal_forms,
    parity_holds,
    primitive_generators,
    verify_bijection,
    verify_x_circuits,
    verify_z_circuits,
    z_circuit_partial_sums,
)
from realclifford.normal_form import identity_normal_form


class TestClosedForms:
    """Tests for the counting formulas."""

    @pytest.mark.parametrize("n,z,x", [(1, 4, 2), (2, 18, 8), (3, 70, 32), (4, 270, 128)])
    def test_stage_counts(self, n, z, x):
        assert count_z_circuits(n) == z
        assert count_x_circuits(n) == x

    @pytest.mark.parametrize("n,order", [(0, 2), (1, 16), (2, 2304), (3, 5160960)])
    def test_operator_count(self, n, order):
        assert clifford_order(n) == order

    def test_partial_sums(self):
        assert z_circuit_partial_sums(1) == (4, 0)
        assert z_circuit_partial_sums(2) == (16, 2)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_partial_sums_add_up(self, n):
        assert sum(z_circuit_partial_sums(n)) == count_z_circuits(n)

    def test_width_must_be_positive(self):
        with pytest.raises(ValueError, match="at least 1"):
            count_z_circuits(0)
        with pytest.raises(ValueError, match="non-negative"):
            clifford_order(-1)


class TestCountReport:
    def test_json(self):
        assert count_report(2).to_json() == {
            "n": 2,
            "z_count": 18,
            "x_count": 8,
            "z_partial_sums": {"A1_A2": 16, "A3": 2},
            "clifford_order": 2304,
        }

    def test_enumerated(self):
        report = count_report(3, enumerate_stages_too=True)
        assert report.enumerated == 70 * 32
        assert report.to_json()["enumerated"] == 2240


class TestEnumeration:
    """Tests for normal-form enumeration and stage checks."""

    @pytest.mark.parametrize("n,total", [(1, 16), (2, 2304)])
    def test_length(self, n, total):
        assert sum(1 for _ in enumerate_normal_forms(n)) == total

    def test_identity_first(self):
        assert next(enumerate_normal_forms(2)) == identity_normal_form(2)

    def test_negative_half_follows(self):
        forms = list(enumerate_normal_forms(1))
        assert [nf.sign for nf in forms] == [1] * 8 + [-1] * 8

    def test_parity(self):
        assert parity_holds(3)

    @pytest.mark.parametrize("width", [1, 2, 3])
    def test_stage_circuits(self, width):
        assert verify_z_circuits(width)
        assert verify_x_circuits(width)


class TestClosure:
    """Breadth-first closure of the primitive gates."""

    def test_generators(self):
        names = [str(g) for g in primitive_generators(2)]
        assert len(names) == 6

    @pytest.mark.parametrize("n,size", [(1, 16), (2, 2304)])
    def test_size_matches_order(self, n, size):
        assert len(bfs_closure(n)) == size


class TestBijection:
    """Each operator has exactly one normal form."""

    @pytest.mark.parametrize("n", [1, 2])
    def test_small(self, n):
        report = verify_bijection(n)
        assert report.ok, report.to_json()
        assert report.enumerated == report.distinct == report.closure == clifford_order(n)

    def test_report_json(self):
        data = verify_bijection(1).to_json()
        assert data["ok"] is True
        assert data["collisions"] == []
        assert data["expected"] == 16

    def test_report_flags_collisions(self):
        nf = identity_normal_form(1)
        report = BijectionReport(1, 16, enumerated=16, distinct=15, collisions=[(nf, nf)])
        assert not report.ok
        assert len(report.to_json()["collisions"]) == 1

    def test_too_many_qubits(self):
        with pytest.raises(ValueError, match="0..3 qubits"):
            verify_bijection(MAX_BIJECTION_QUBITS + 1)

    @pytest.mark.slow
    def test_three_qubits(self):
        report = verify_bijection(3, workers=1)
        assert report.ok
        assert report.distinct == 5160960
