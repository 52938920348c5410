"""Tests for normal forms, synthesis and stage enumeration."""

from functools import lru_cache

import numpy as np
import pytest

from realclifford.circuit import SIGNATURES, Circuit, Gate, WireColor, make_gate, random_circuit
from realclifford.exact import ExactMatrix, circuit_matrix
from realclifford.normal_form import (
    ACTION_SOURCES,
    MultipleMatchesError,
    NoMatchError,
    NormalForm,
    NormalFormError,
    SynthesisError,
    TRACK_LETTER,
    ZCircuit,
    action_table,
    build_stage,
    build_x_circuit,
    build_z_circuit,
    enumerate_stages,
    enumerate_x_circuits,
    enumerate_z_circuits,
    identity_normal_form,
    is_normal,
    nf_from_json,
    nf_to_circuit,
    nf_to_json,
    normalize_by_synthesis,
    parse_normal_form,
    select_generator,
    synthesize,
)
from realclifford.pauli import PauliLetter, PauliOperator, parse_pauli
from realclifford.tableau import Tableau, apply, fingerprint


def same_operator(a: Circuit, b: Circuit) -> bool:
    return fingerprint(a).key() == fingerprint(b).key()


@lru_cache(maxsize=None)
def stages_of_width(width):
    return tuple(enumerate_stages(width))


def random_normal_form(n, rng):
    stages = []
    for width in range(n, 0, -1):
        choices = stages_of_width(width)
        stages.append(choices[rng.integers(len(choices))])
    return NormalForm(n, tuple(stages), int(rng.choice([1, -1])))


class TestIdentityForm:
    """Tests for the identity normal form."""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_is_identity(self, n):
        assert circuit_matrix(nf_to_circuit(identity_normal_form(n))) == ExactMatrix.identity(n)

    def test_two_qubit_layout(self):
        gates = identity_normal_form(2).gates()
        assert gates == [
            Gate("A1", (1,)), make_gate("B1", 0), Gate("C1", (0,)), make_gate("D1", 0), Gate("E1", (1,)),
            Gate("A1", (0,)), Gate("C1", (0,)), Gate("E1", (0,)),
        ]

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_synthesis_of_identity(self, n):
        assert synthesize(Tableau.identity(n)) == identity_normal_form(n)

    def test_empty_register(self):
        assert identity_normal_form(0).gates() == []


class TestActionTable:
    """Each generator's characteristic action, computed from its expansion."""

    def test_covers_every_generator(self):
        assert {row.gate for row in action_table()} == set(ACTION_SOURCES)
        assert len(action_table()) == sum(len(s) for s in ACTION_SOURCES.values())

    def test_z_track_letters(self):
        for row in action_table():
            if row.gate[0] in "ABC":
                colors = SIGNATURES[row.gate][1]
                for wire, color in enumerate(colors):
                    expected = TRACK_LETTER.get(color, PauliLetter.I if row.gate[0] == "B" else None)
                    if expected is not None:
                        assert row.image.letter(wire) is expected, row.to_json()

    def test_c_and_e_land_on_positive_letters(self):
        images = {(row.gate, str(row.source)): str(row.image) for row in action_table()}
        assert images[("C1", "Z")] == "Z"
        assert images[("C2", "-Z")] == "Z"
        assert images[("E1", "X")] == "X"
        assert images[("E2", "-X")] == "X"
        assert images[("A2", "X")] == "Z"

    def test_d_gates_move_z_down(self):
        for row in action_table():
            if row.gate[0] == "D":
                assert row.image.letter(0) is PauliLetter.I
                if str(row.source) == "Z.I":
                    assert str(row.image) == "I.Z"

    def test_row_json(self):
        row = action_table()[0]
        assert row.to_json() == {"gate": "A1", "inputs": "P", "outputs": "S", "source": "Z", "image": "Z"}


class TestGeneratorSelection:
    def test_no_match(self):
        with pytest.raises(NoMatchError, match="No C gate"):
            select_generator("C", (WireColor.SIMPLE,), parse_pauli("X"), (PauliLetter.Z,))

    def test_multiple_matches(self):
        with pytest.raises(MultipleMatchesError, match="E1, E2"):
            select_generator("E", (WireColor.PLAIN,), parse_pauli("X"), (None,))

    def test_sign_disambiguates(self):
        assert select_generator("E", (WireColor.PLAIN,), parse_pauli("-X"), (PauliLetter.X,), sign=1) == "E2"


class TestStageSynthesis:
    """Tests for Z-circuit, X-circuit and stage construction."""

    def test_z_circuit_for_top_z(self):
        assert build_z_circuit(parse_pauli("Z.I")) == ZCircuit(0, "A1", (), "C1")

    def test_z_circuit_rejects_odd_xz(self):
        with pytest.raises(SynthesisError, match="does not square"):
            build_z_circuit(parse_pauli("XZ.I"))

    def test_z_circuit_rejects_identity(self):
        with pytest.raises(SynthesisError, match="must not be"):
            build_z_circuit(PauliOperator.identity(2, sign=-1))

    def test_x_circuit_needs_anticommuting_input(self):
        with pytest.raises(SynthesisError, match="anticommute"):
            build_x_circuit(parse_pauli("Z.X"))

    def test_stage_needs_anticommuting_pair(self):
        with pytest.raises(SynthesisError, match="must anticommute"):
            build_stage(parse_pauli("Z.I"), parse_pauli("I.X"))

    def test_stage_maps_pair_to_bottom(self):
        p, q = parse_pauli("X.Z"), parse_pauli("Z.I")
        stage = build_stage(p, q)
        t = Tableau.identity(2).then_all(stage.gates())
        assert apply(t, p) == parse_pauli("I.Z")
        assert apply(t, q) == parse_pauli("I.X")

    def test_not_an_automorphism(self):
        broken = Tableau(1, (parse_pauli("Z"),), (parse_pauli("Z"),))
        with pytest.raises(SynthesisError, match="not the action"):
            synthesize(broken)


class TestNormalizeBySynthesis:
    """Synthesis returns the unique normal form of any circuit."""

    def test_minus_hadamard(self):
        c = Circuit(1, (Gate("MINUS1"), Gate("H", (0,))))
        nf = normalize_by_synthesis(c)
        assert nf.sign == -1
        assert same_operator(nf_to_circuit(nf), c)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_random_circuits(self, n):
        rng = np.random.default_rng(40 + n)
        for _ in range(8):
            c = random_circuit(n, 20, rng)
            nf = normalize_by_synthesis(c)
            out = nf_to_circuit(nf)
            assert same_operator(out, c)
            assert is_normal(out)
            assert nf.clean_gate_count <= n * n + 2 * n

    def test_equal_operators_share_a_form(self):
        hh = Circuit(2, (Gate("H", (1,)), Gate("H", (1,)), Gate("CZ", (0, 1)), Gate("CZ", (0, 1))))
        assert normalize_by_synthesis(hh) == normalize_by_synthesis(Circuit(2))

    def test_reference_mismatch(self):
        with pytest.raises(SynthesisError, match="does not realize"):
            synthesize(Tableau.identity(1), Circuit(1, (Gate("H", (0,)), Gate("Z", (0,)), Gate("H", (0,)))))


class TestParseNormalForm:
    """Tests for reading circuits back as normal forms."""

    def test_round_trip(self):
        rng = np.random.default_rng(8)
        nf = normalize_by_synthesis(random_circuit(3, 30, rng))
        assert parse_normal_form(nf_to_circuit(nf)) == nf

    def test_accepts_commuting_interleaving(self):
        # Stage-1 gates on wire 0 may come before the last gate of stage 2 on wire 1.
        gates = identity_normal_form(2).gates()
        reordered = gates[:4] + gates[5:] + [gates[4]]
        assert parse_normal_form(Circuit(2, tuple(reordered))) == identity_normal_form(2)

    def test_two_signs(self):
        with pytest.raises(NormalFormError, match="at most one MINUS1"):
            parse_normal_form(Circuit(1, (Gate("MINUS1"), Gate("MINUS1"))))

    def test_sign_must_come_last(self):
        c = Circuit(1, (Gate("MINUS1"),) + tuple(identity_normal_form(1).gates()))
        with pytest.raises(NormalFormError, match="last gate"):
            parse_normal_form(c)

    def test_primitive_gate(self):
        with pytest.raises(NormalFormError, match="not a generator"):
            parse_normal_form(Circuit(1, (Gate("H", (0,)),)))

    def test_missing_stage(self):
        assert not is_normal(Circuit(2, tuple(identity_normal_form(2).gates()[:5])))

    def test_mistyped_stage(self):
        c = Circuit(1, (Gate("A3", (0,)), Gate("C1", (0,)), Gate("E1", (0,))))
        with pytest.raises(NormalFormError, match="mistyped"):
            parse_normal_form(c)


class TestJson:
    def test_round_trip(self):
        nf = normalize_by_synthesis(Circuit(2, (Gate("H", (0,)), Gate("CZ", (0, 1)), Gate("MINUS1"))))
        assert nf_from_json(nf_to_json(nf)) == nf

    def test_json_shape(self):
        data = nf_to_json(identity_normal_form(1))
        assert data == {
            "n": 1,
            "sign": 1,
            "stages": [{"z": {"m": 0, "a": "A1", "bs": [], "c": "C1"}, "x": {"ds": [], "e": "E1"}}],
        }

    def test_invalid(self):
        with pytest.raises(NormalFormError, match="Invalid normal-form JSON"):
            nf_from_json({"n": 1, "sign": 1})

    def test_ill_typed(self):
        data = nf_to_json(identity_normal_form(1))
        data["stages"][0]["z"]["a"] = "A3"
        with pytest.raises(NormalFormError):
            nf_from_json(data)


class TestEnumeration:
    """Tests for stage enumeration order and counts."""

    @pytest.mark.parametrize("width,z,x", [(1, 4, 2), (2, 18, 8), (3, 70, 32)])
    def test_counts(self, width, z, x):
        assert sum(1 for _ in enumerate_z_circuits(width)) == z
        assert sum(1 for _ in enumerate_x_circuits(width)) == x

    def test_identity_stage_first(self):
        first = next(enumerate_stages(3))
        assert first == identity_normal_form(3).stages[0]

    def test_single_wire_z_circuits(self):
        assert [(z.a, z.c) for z in enumerate_z_circuits(1)] == [
            ("A1", "C1"), ("A1", "C2"), ("A2", "C1"), ("A2", "C2"),
        ]

    def test_enumerated_stages_are_well_formed(self):
        for stage in enumerate_stages(2):
            nf = NormalForm(2, (stage,) + identity_normal_form(1).stages)
            assert is_normal(nf_to_circuit(nf))


class TestSynthesisIsIdempotent:
    """Synthesizing the operator of a normal form gives the form back."""

    @pytest.mark.parametrize("n,count", [(1, 16), (2, 40), (3, 30), (4, 10)])
    def test_random_forms(self, n, count):
        rng = np.random.default_rng(400 + n)
        for _ in range(count):
            nf = random_normal_form(n, rng)
            c = nf_to_circuit(nf)
            assert synthesize(Tableau.from_circuit(c), c) == nf

    def test_every_single_wire_form(self):
        for stage in stages_of_width(1):
            for sign in (1, -1):
                nf = NormalForm(1, (stage,), sign)
                c = nf_to_circuit(nf)
                assert synthesize(Tableau.from_circuit(c), c) == nf
