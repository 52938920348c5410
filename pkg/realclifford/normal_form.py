"""Normal forms of real Clifford operators and their synthesis.

A normal form on n wires is a sequence of stages for i = n down to 1.
Stage i lives on wires 0..i-1: a Z-circuit (one A gate, a ladder of B
gates up to wire 0, one C gate) followed by an X-circuit (a ladder of D
gates down to wire i-1, one E gate).  A trailing sign completes the form.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from realclifford.circuit import (
    GENERATOR_NAMES,
    SIGNATURES,
    Circuit,
    CircuitTypeError,
    Gate,
    WireColor,
    make_gate,
    type_check,
)
from realclifford.exact import apply_to_basis_state
from realclifford.pauli import (
    PauliLetter,
    PauliOperator,
    format_pauli,
    parse_pauli,
    squares_to_identity,
    symplectic_product,
)
from realclifford.tableau import (
    Tableau,
    apply,
    compose,
    conjugate_by_gate,
    inverse,
    is_pauli_automorphism,
)


class SynthesisError(ValueError):
    """Raised when synthesis preconditions do not hold."""


class NoMatchError(LookupError):
    """Raised when no generator of a kind realizes the requested action."""


class MultipleMatchesError(LookupError):
    """Raised when more than one generator of a kind realizes an action."""


class NormalFormError(ValueError):
    """Raised when a circuit is not laid out as a normal form."""


# Letter carried by a colored wire.
TRACK_LETTER = {WireColor.SIMPLE: PauliLetter.Z, WireColor.DOUBLE: PauliLetter.XZ}


# ---------------------------------------------------------------------------
# Stage data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZCircuit:
    """A gate on wire ``m``, B gates from pair (m-1, m) up to (0, 1), then C."""

    m: int
    a: str
    bs: Tuple[str, ...]
    c: str

    def gates(self) -> List[Gate]:
        ladder = [make_gate(b, j) for j, b in zip(range(self.m - 1, -1, -1), self.bs)]
        return [Gate(self.a, (self.m,))] + ladder + [Gate(self.c, (0,))]

    @property
    def swap_count(self) -> int:
        """Number of color-swapping B gates (B4 and B8)."""
        return sum(b in ("B4", "B8") for b in self.bs)


@dataclass(frozen=True)
class XCircuit:
    """D gates on pairs (0, 1) ... (i-2, i-1), then E on wire i-1."""

    ds: Tuple[str, ...]
    e: str

    @property
    def width(self) -> int:
        return len(self.ds) + 1

    def gates(self) -> List[Gate]:
        return [make_gate(d, j) for j, d in enumerate(self.ds)] + [Gate(self.e, (len(self.ds),))]


@dataclass(frozen=True)
class Stage:
    z: ZCircuit
    x: XCircuit

    @property
    def width(self) -> int:
        return self.x.width

    def gates(self) -> List[Gate]:
        return self.z.gates() + self.x.gates()


@dataclass(frozen=True)
class NormalForm:
    n: int
    stages: Tuple[Stage, ...]
    sign: int = 1

    def gates(self) -> List[Gate]:
        gates = [g for stage in self.stages for g in stage.gates()]
        if self.sign < 0:
            gates.append(Gate("MINUS1"))
        return gates

    @property
    def clean_gate_count(self) -> int:
        return sum(len(stage.gates()) for stage in self.stages)


def nf_to_circuit(nf: NormalForm) -> Circuit:
    return Circuit(nf.n, tuple(nf.gates()))


def identity_normal_form(n: int) -> NormalForm:
    """The form built from A1, B1, C1, D1 and E1 at every stage."""
    stages = tuple(
        Stage(ZCircuit(i - 1, "A1", ("B1",) * (i - 1), "C1"), XCircuit(("D1",) * (i - 1), "E1"))
        for i in range(n, 0, -1)
    )
    return NormalForm(n, stages, 1)


# ---------------------------------------------------------------------------
# Generator selection
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def generator_tableau(name: str) -> Tableau:
    """Tableau of a generator placed at wire 0 (pairs on wires 0 and 1)."""
    return Tableau.from_gate(make_gate(name, 0))


def select_generator(
    kind: str,
    input_colors: Sequence[WireColor],
    source: PauliOperator,
    target: Sequence[Optional[PauliLetter]],
    sign: Optional[int] = None,
) -> str:
    """The unique generator of ``kind`` whose action sends ``source`` to ``target``.

    ``target`` holds one letter per wire, ``None`` meaning any letter.  A
    wire leaving the gate with a simple color must carry Z and one with a
    double color must carry XZ.  When ``sign`` is given the image sign must
    match it as well.
    """
    matches = []
    for name in GENERATOR_NAMES[kind]:
        inputs, outputs = SIGNATURES[name]
        if tuple(inputs) != tuple(input_colors):
            continue
        image = apply(generator_tableau(name), source)
        letters = image.letters
        if any(want is not None and got is not want for got, want in zip(letters, target)):
            continue
        if any(color in TRACK_LETTER and letters[w] is not TRACK_LETTER[color]
               for w, color in enumerate(outputs)):
            continue
        if sign is not None and image.sign != sign:
            continue
        matches.append(name)
    description = f"{kind} gate with inputs {''.join(c.value for c in input_colors)} for {format_pauli(source)}"
    if not matches:
        raise NoMatchError(f"No {description}")
    if len(matches) > 1:
        raise MultipleMatchesError(f"Several {description}: {', '.join(matches)}")
    return matches[0]


def _local(p: PauliOperator, *wires: int, sign: int = 1) -> PauliOperator:
    return PauliOperator.from_letters(sign, [p.letter(w) for w in wires])


def _check_stage_pauli(p: PauliOperator, what: str) -> None:
    if not squares_to_identity(p):
        raise SynthesisError(f"{what} {format_pauli(p)} does not square to the identity")
    if p.is_identity():
        raise SynthesisError(f"{what} must not be ±I")


# ---------------------------------------------------------------------------
# Synthesis
# ---------------------------------------------------------------------------

def build_z_circuit(p: PauliOperator) -> ZCircuit:
    """The Z-circuit on ``p.n`` wires mapping ``p`` to ``+Z`` on wire 0."""
    _check_stage_pauli(p, "Z-circuit input")
    m = p.support.bit_length() - 1
    a = select_generator("A", (WireColor.PLAIN,), _local(p, m), (None,))
    current = conjugate_by_gate(Gate(a, (m,)), p)
    color = SIGNATURES[a][1][0]
    bs = []
    for j in range(m - 1, -1, -1):
        b = select_generator(
            "B", (WireColor.PLAIN, color), _local(current, j, j + 1), (None, PauliLetter.I)
        )
        bs.append(b)
        current = conjugate_by_gate(make_gate(b, j), current)
        color = SIGNATURES[b][1][0]
    if color is not WireColor.SIMPLE or current.support != 1:
        raise SynthesisError(f"Z-circuit ladder ended on {format_pauli(current)}")
    c = select_generator(
        "C", (WireColor.SIMPLE,), _local(current, 0, sign=current.sign), (PauliLetter.Z,), sign=1
    )
    return ZCircuit(m, a, tuple(bs), c)


def build_x_circuit(q: PauliOperator) -> XCircuit:
    """The X-circuit on ``q.n`` wires mapping ``q`` to ``+X`` on the bottom wire."""
    _check_stage_pauli(q, "X-circuit input")
    if q.letter(0) not in (PauliLetter.X, PauliLetter.XZ):
        raise SynthesisError(f"X-circuit input {format_pauli(q)} must anticommute with Z on wire 0")
    current = q
    ds = []
    for j in range(q.n - 1):
        d = select_generator(
            "D", (WireColor.PLAIN, WireColor.PLAIN), _local(current, j, j + 1), (PauliLetter.I, None)
        )
        ds.append(d)
        current = conjugate_by_gate(make_gate(d, j), current)
    bottom = q.n - 1
    if current.support != 1 << bottom or current.letter(bottom) is not PauliLetter.X:
        raise SynthesisError(f"X-circuit ladder ended on {format_pauli(current)}")
    e = select_generator(
        "E", (WireColor.PLAIN,), _local(current, bottom, sign=current.sign), (PauliLetter.X,), sign=1
    )
    return XCircuit(tuple(ds), e)


def build_stage(p: PauliOperator, q: PauliOperator) -> Stage:
    """The stage sending ``p`` to Z and ``q`` to X on the bottom wire."""
    if p.n != q.n:
        raise SynthesisError("Stage Paulis must have equal length")
    if not symplectic_product(p, q):
        raise SynthesisError(f"{format_pauli(p)} and {format_pauli(q)} must anticommute")
    z = build_z_circuit(p)
    moved = q
    for gate in z.gates():
        moved = conjugate_by_gate(gate, moved)
    return Stage(z, build_x_circuit(moved))


def stage_tableau(stage: Stage) -> Tableau:
    return Tableau.identity(stage.width).then_all(stage.gates())


def synthesize(t: Tableau, reference: Optional[Circuit] = None, cap: Optional[int] = None) -> NormalForm:
    """The normal form whose tableau is ``t``.

    With a ``reference`` circuit the sign is chosen so that both operators
    agree exactly; otherwise the sign is +1.
    """
    if not is_pauli_automorphism(t):
        raise SynthesisError("Tableau is not the action of a real Clifford operator")
    stages = []
    current = t
    for i in range(t.n, 0, -1):
        back = inverse(current)
        p = apply(back, PauliOperator.single(i, i - 1, PauliLetter.Z))
        q = apply(back, PauliOperator.single(i, i - 1, PauliLetter.X))
        stage = build_stage(p, q)
        stages.append(stage)
        current = compose(current, inverse(stage_tableau(stage))).restrict(i - 1)
    nf = NormalForm(t.n, tuple(stages), 1)
    if reference is None:
        return nf
    if reference.n_qubits != t.n:
        raise SynthesisError("Reference circuit width does not match the tableau")
    mine = apply_to_basis_state(nf_to_circuit(nf), 0, cap)
    theirs = apply_to_basis_state(reference, 0, cap)
    if mine == theirs:
        return nf
    if -mine == theirs:
        return NormalForm(nf.n, nf.stages, -1)
    raise SynthesisError("Reference circuit does not realize the given tableau")


def normalize_by_synthesis(c: Circuit, cap: Optional[int] = None) -> NormalForm:
    return synthesize(Tableau.from_circuit(c), c, cap)


# ---------------------------------------------------------------------------
# Recognizing normal forms
# ---------------------------------------------------------------------------

def _ends_stage_on(gate: Gate, wire: int) -> bool:
    return gate.kind == "E" or (gate.kind == "D" and gate.top == wire)


def parse_normal_form(c: Circuit) -> NormalForm:
    """Read a circuit back as a normal form.

    Each wire's gates are split into stages after the E gate or the D gate
    using it as top wire, so any interleaving of commuting gates that keeps
    every wire's order is accepted.
    """
    n = c.n_qubits
    minus = sum(g.name == "MINUS1" for g in c.gates)
    if minus > 1:
        raise NormalFormError("A normal form carries at most one MINUS1")
    if minus and c.gates[-1].name != "MINUS1":
        raise NormalFormError("MINUS1 must be the last gate of a normal form")
    per_wire: List[List[int]] = [[] for _ in range(n)]
    for index, gate in enumerate(c.gates):
        if gate.name == "MINUS1":
            continue
        if not gate.is_generator:
            raise NormalFormError(f"{gate} is not a generator gate")
        for w in gate.wires:
            per_wire[w].append(index)

    stage_of: Dict[int, int] = {}
    for w, indices in enumerate(per_wire):
        k = 0
        for index in indices:
            if k >= n - w:
                raise NormalFormError(f"Wire {w} has gates after its last stage")
            if stage_of.setdefault(index, k) != k:
                raise NormalFormError(f"{c.gates[index]} straddles two stages")
            if _ends_stage_on(c.gates[index], w):
                k += 1
        if k != n - w:
            raise NormalFormError(f"Wire {w} takes part in {k} stages, expected {n - w}")

    stages = []
    for k in range(n):
        width = n - k
        gates = [c.gates[index] for index in sorted(i for i, s in stage_of.items() if s == k)]
        stages.append(_parse_stage(gates, width))
    return NormalForm(n, tuple(stages), -1 if minus else 1)


def _parse_stage(gates: List[Gate], width: int) -> Stage:
    if not gates or gates[0].kind != "A":
        raise NormalFormError(f"Stage on {width} wires does not start with an A gate")
    a_gate = gates[0]
    m = a_gate.top
    kinds = "".join(g.kind for g in gates)
    if kinds != "A" + "B" * m + "C" + "D" * (width - 1) + "E":
        raise NormalFormError(f"Malformed stage on {width} wires: {kinds}")
    bs = gates[1:1 + m]
    z = ZCircuit(m, a_gate.name, tuple(g.name for g in bs), gates[1 + m].name)
    x = XCircuit(tuple(g.name for g in gates[2 + m:-1]), gates[-1].name)
    stage = Stage(z, x)
    if stage.gates() != gates:
        raise NormalFormError(f"Malformed stage on {width} wires: {' '.join(map(str, gates))}")
    try:
        type_check(Circuit(width, tuple(gates)))
    except CircuitTypeError as e:
        raise NormalFormError(f"Stage on {width} wires is mistyped: {e}") from None
    return stage


def is_normal(c: Circuit) -> bool:
    try:
        parse_normal_form(c)
    except NormalFormError:
        return False
    return True


# ---------------------------------------------------------------------------
# JSON codec
# ---------------------------------------------------------------------------

def nf_to_json(nf: NormalForm) -> dict:
    return {
        "n": nf.n,
        "sign": nf.sign,
        "stages": [
            {
                "z": {"m": s.z.m, "a": s.z.a, "bs": list(s.z.bs), "c": s.z.c},
                "x": {"ds": list(s.x.ds), "e": s.x.e},
            }
            for s in nf.stages
        ],
    }


def nf_from_json(data: dict) -> NormalForm:
    try:
        stages = tuple(
            Stage(
                ZCircuit(int(s["z"]["m"]), s["z"]["a"], tuple(s["z"]["bs"]), s["z"]["c"]),
                XCircuit(tuple(s["x"]["ds"]), s["x"]["e"]),
            )
            for s in data["stages"]
        )
        nf = NormalForm(int(data["n"]), stages, int(data["sign"]))
        parsed = parse_normal_form(nf_to_circuit(nf))
    except (KeyError, TypeError, ValueError) as e:
        raise NormalFormError(f"Invalid normal-form JSON: {e}") from None
    if parsed != nf:
        raise NormalFormError("Normal-form JSON does not describe a well-formed stage list")
    return parsed


# ---------------------------------------------------------------------------
# Enumeration of stages
# ---------------------------------------------------------------------------

def _b_ladders(length: int, color: WireColor) -> Iterator[Tuple[Tuple[str, ...], WireColor]]:
    if length == 0:
        yield (), color
        return
    for b in GENERATOR_NAMES["B"]:
        inputs, outputs = SIGNATURES[b]
        if inputs[1] is not color:
            continue
        for rest, final in _b_ladders(length - 1, outputs[0]):
            yield (b,) + rest, final


def enumerate_z_circuits(width: int) -> Iterator[ZCircuit]:
    """All well-typed Z-circuits of a stage on ``width`` wires.

    Order: start wire descending, then A1 < A2 < A3, B ladders in
    lexicographic order, then C1 < C2.
    """
    for m in range(width - 1, -1, -1):
        for a in GENERATOR_NAMES["A"]:
            for bs, color in _b_ladders(m, SIGNATURES[a][1][0]):
                if color is not WireColor.SIMPLE:
                    continue
                for c in GENERATOR_NAMES["C"]:
                    yield ZCircuit(m, a, bs, c)


def enumerate_x_circuits(width: int) -> Iterator[XCircuit]:
    for ds in itertools.product(GENERATOR_NAMES["D"], repeat=width - 1):
        for e in GENERATOR_NAMES["E"]:
            yield XCircuit(ds, e)


def enumerate_stages(width: int) -> Iterator[Stage]:
    xs = list(enumerate_x_circuits(width))
    for z in enumerate_z_circuits(width):
        for x in xs:
            yield Stage(z, x)


# ---------------------------------------------------------------------------
# Generator action table
# ---------------------------------------------------------------------------

# Source Paulis of the characteristic action of each generator.
ACTION_SOURCES: Dict[str, Tuple[str, ...]] = {
    "A1": ("Z",), "A2": ("X",), "A3": ("XZ",),
    "B1": ("I.Z",), "B2": ("X.Z",), "B3": ("Z.Z",), "B4": ("XZ.Z",),
    "B5": ("I.XZ",), "B6": ("X.XZ",), "B7": ("Z.XZ",), "B8": ("XZ.XZ",),
    "C1": ("Z",), "C2": ("-Z",),
    "D1": ("X.I", "XZ.I", "Z.I"),
    "D2": ("X.X", "XZ.X", "Z.I"),
    "D3": ("X.Z", "XZ.Z", "Z.I"),
    "D4": ("X.XZ", "XZ.XZ", "Z.I"),
    "E1": ("X",), "E2": ("-X",),
}


@dataclass(frozen=True)
class ActionRow:
    gate: str
    inputs: str
    outputs: str
    source: PauliOperator
    image: PauliOperator

    def to_json(self) -> dict:
        return {
            "gate": self.gate,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "source": format_pauli(self.source),
            "image": format_pauli(self.image),
        }


def action_table() -> List[ActionRow]:
    """Each generator's characteristic action, computed from its expansion."""
    rows = []
    for name, sources in ACTION_SOURCES.items():
        inputs, outputs = SIGNATURES[name]
        for text in sources:
            source = parse_pauli(text)
            rows.append(ActionRow(
                name,
                "".join(c.value for c in inputs),
                "".join(c.value for c in outputs),
                source,
                apply(generator_tableau(name), source),
            ))
    return rows
