"""Gates, circuits, wire colors and the ``.rsc`` circuit text format."""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np


class CircuitParseError(ValueError):
    """Raised when circuit text cannot be parsed."""

    def __init__(self, message: str, line_number: int = 0, token: str = ""):
        self.line_number = line_number
        self.token = token
        if line_number:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class CircuitTypeError(TypeError):
    """Raised when a gate's input colors do not match the incoming wires."""

    def __init__(self, gate_index: int, wire: int, expected: "WireColor", found: "WireColor"):
        self.gate_index = gate_index
        self.wire = wire
        self.expected = expected
        self.found = found
        super().__init__(
            f"gate {gate_index} expects {expected.name} on wire {wire}, found {found.name}"
        )


class WireColor(Enum):
    PLAIN = "P"
    SIMPLE = "S"
    DOUBLE = "D"


P, S, D = WireColor.PLAIN, WireColor.SIMPLE, WireColor.DOUBLE

PRIMITIVES = ("MINUS1", "H", "Z", "CZ")
DERIVED = ("X", "CXZ", "CX")

GENERATOR_NAMES: Dict[str, Tuple[str, ...]] = {
    "A": ("A1", "A2", "A3"),
    "B": tuple(f"B{k}" for k in range(1, 9)),
    "C": ("C1", "C2"),
    "D": ("D1", "D2", "D3", "D4"),
    "E": ("E1", "E2"),
}
GENERATORS = tuple(name for names in GENERATOR_NAMES.values() for name in names)

# Gates addressed by their top wire but acting on (q, q + 1).
PAIR_GENERATOR_KINDS = ("B", "D")

# (input colors, output colors), top wire first.
SIGNATURES: Dict[str, Tuple[Tuple[WireColor, ...], Tuple[WireColor, ...]]] = {
    "A1": ((P,), (S,)),
    "A2": ((P,), (S,)),
    "A3": ((P,), (D,)),
    "B1": ((P, S), (S, P)),
    "B2": ((P, S), (S, P)),
    "B3": ((P, S), (S, P)),
    "B4": ((P, S), (D, P)),
    "B5": ((P, D), (D, P)),
    "B6": ((P, D), (D, P)),
    "B7": ((P, D), (D, P)),
    "B8": ((P, D), (S, P)),
    "C1": ((S,), (P,)),
    "C2": ((S,), (P,)),
    "D1": ((P, P), (P, P)),
    "D2": ((P, P), (P, P)),
    "D3": ((P, P), (P, P)),
    "D4": ((P, P), (P, P)),
    "E1": ((P,), (P,)),
    "E2": ((P,), (P,)),
}


@dataclass(frozen=True)
class Gate:
    """A gate and the wires it acts on.

    Pair generators (B and D) store both wires ``(q, q + 1)``; the text form
    names only the top wire.  ``CXZ`` stores ``(t, c)`` with ``t`` the wire
    carrying the H gates, ``CX`` stores ``(control, target)``.
    """

    name: str
    wires: Tuple[int, ...] = ()

    def __post_init__(self):
        arity = gate_arity(self.name)
        if len(self.wires) != arity:
            raise ValueError(f"{self.name} acts on {arity} wire(s), got {len(self.wires)}")
        if any(w < 0 for w in self.wires):
            raise ValueError(f"Negative wire index in {self.name} {self.wires}")
        if arity == 2 and self.wires[0] == self.wires[1]:
            raise ValueError(f"{self.name} needs two distinct wires")
        if self.kind in PAIR_GENERATOR_KINDS and self.wires[1] != self.wires[0] + 1:
            raise ValueError(f"{self.name} acts on adjacent wires (q, q+1)")

    @property
    def kind(self) -> str:
        """Generator family letter (A-E), or the gate name for non-generators."""
        return self.name[0] if self.name in SIGNATURES else self.name

    @property
    def is_generator(self) -> bool:
        return self.name in SIGNATURES

    @property
    def top(self) -> int:
        return self.wires[0]

    def shifted(self, offset: int) -> "Gate":
        return Gate(self.name, tuple(w + offset for w in self.wires))

    def __str__(self) -> str:
        return format_gate(self)


def gate_arity(name: str) -> int:
    if name == "MINUS1":
        return 0
    if name in ("H", "Z", "X"):
        return 1
    if name in ("CZ", "CXZ", "CX"):
        return 2
    if name in SIGNATURES:
        return 2 if name[0] in PAIR_GENERATOR_KINDS else 1
    raise ValueError(f"Unknown gate: {name}")


def make_gate(name: str, *wires: int) -> Gate:
    """Build a gate from its text arguments (pair generators take the top wire)."""
    if name in SIGNATURES and name[0] in PAIR_GENERATOR_KINDS:
        if len(wires) != 1:
            raise ValueError(f"{name} takes its top wire only")
        return Gate(name, (wires[0], wires[0] + 1))
    if name == "CZ" and len(wires) == 2:
        return Gate(name, tuple(sorted(wires)))
    return Gate(name, tuple(wires))


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: Tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 0:
            raise ValueError("Qubit count must be non-negative")
        for gate in self.gates:
            if any(w >= self.n_qubits for w in gate.wires):
                raise ValueError(f"{format_gate(gate)} exceeds {self.n_qubits} qubits")

    def __add__(self, other: "Circuit") -> "Circuit":
        if self.n_qubits != other.n_qubits:
            raise ValueError("Cannot concatenate circuits of different widths")
        return Circuit(self.n_qubits, self.gates + other.gates)


@dataclass(frozen=True)
class TypedCircuit:
    """A circuit with the wire colors before each gate and after the last."""

    circuit: Circuit
    colors: Tuple[Tuple[WireColor, ...], ...]

    @property
    def output_colors(self) -> Tuple[WireColor, ...]:
        return self.colors[-1]


# ---------------------------------------------------------------------------
# Expansion into primitives
# ---------------------------------------------------------------------------

def _pair_expansion(name: str, t: int, b: int) -> List[Gate]:
    cz = Gate("CZ", (t, b))
    ht, hb = Gate("H", (t,)), Gate("H", (b,))
    return {
        "B1": [hb, cz, hb, ht, cz, hb, ht, cz],
        "B2": [cz, ht, hb, cz],
        "B3": [ht, cz, hb, ht, cz],
        "B4": [hb, cz, hb, cz, hb, ht, cz],
        "D1": [cz, ht, hb, cz, ht, hb, cz, hb],
        "D2": [ht, cz, ht, hb, cz, hb],
        "D3": [ht, hb, cz, ht, hb, cz, hb],
        "D4": [ht, cz, ht, hb, cz, hb, cz],
    }[name]


# B5-B8 share their circuits with B1-B4 and differ only in typing.
_PAIR_ALIASES = {"B5": "B1", "B6": "B2", "B7": "B3", "B8": "B4"}


def expand(gate: Gate) -> List[Gate]:
    """Primitive {MINUS1, H, Z, CZ} word for a gate, in application order."""
    name = gate.name
    if name in PRIMITIVES:
        return [gate]
    if name == "X":
        q = gate.wires[0]
        return [Gate("H", (q,)), Gate("Z", (q,)), Gate("H", (q,))]
    if name == "CXZ":
        t, c = gate.wires
        cz = Gate("CZ", tuple(sorted((t, c))))
        return [Gate("H", (t,)), cz, Gate("H", (t,)), cz]
    if name == "CX":
        c, t = gate.wires
        return [Gate("H", (t,)), Gate("CZ", tuple(sorted((c, t)))), Gate("H", (t,))]
    if name in ("A1", "A3", "C1", "E1"):
        return []
    if name == "A2":
        return [Gate("H", gate.wires)]
    if name == "C2":
        return expand(Gate("X", gate.wires))
    if name == "E2":
        return [Gate("Z", gate.wires)]
    t, b = gate.wires
    return _pair_expansion(_PAIR_ALIASES.get(name, name), t, b)


def expand_circuit(c: Circuit) -> Circuit:
    return Circuit(c.n_qubits, tuple(p for g in c.gates for p in expand(g)))


def inverse_circuit(c: Circuit) -> Circuit:
    """Inverse of a circuit: every primitive is an involution."""
    return Circuit(c.n_qubits, tuple(reversed(expand_circuit(c).gates)))


def _swap(a: int) -> List[Gate]:
    return expand(Gate("CX", (a, a + 1))) + expand(Gate("CX", (a + 1, a))) + expand(Gate("CX", (a, a + 1)))


def to_adjacent(c: Circuit) -> Circuit:
    """Primitive circuit whose CZ gates all act on neighbouring wires.

    A distant ``CZ a c`` is conjugated by the SWAP chain that brings wire
    ``c`` up to ``a + 1``.
    """
    out: List[Gate] = []
    for gate in expand_circuit(c).gates:
        if gate.name != "CZ" or gate.wires[1] == gate.wires[0] + 1:
            out.append(gate)
            continue
        a, far = gate.wires
        chain = [g for q in range(far - 1, a, -1) for g in _swap(q)]
        out.extend(chain)
        out.append(Gate("CZ", (a, a + 1)))
        out.extend(reversed(chain))
    return Circuit(c.n_qubits, tuple(out))


# ---------------------------------------------------------------------------
# Wire typing
# ---------------------------------------------------------------------------

def signature(gate: Gate) -> Tuple[Tuple[WireColor, ...], Tuple[WireColor, ...]]:
    if gate.name in SIGNATURES:
        return SIGNATURES[gate.name]
    plain = (P,) * len(gate.wires)
    return plain, plain


def type_check(c: Circuit, initial: Optional[Sequence[WireColor]] = None) -> TypedCircuit:
    """Propagate colors from all-Plain wires and fail at the first mismatch."""
    colors = list(initial) if initial is not None else [P] * c.n_qubits
    history = [tuple(colors)]
    for index, gate in enumerate(c.gates):
        inputs, outputs = signature(gate)
        for wire, expected in zip(gate.wires, inputs):
            if colors[wire] is not expected:
                raise CircuitTypeError(index, wire, expected, colors[wire])
        for wire, produced in zip(gate.wires, outputs):
            colors[wire] = produced
        history.append(tuple(colors))
    return TypedCircuit(c, tuple(history))


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

def format_gate(gate: Gate) -> str:
    if gate.name in SIGNATURES and gate.name[0] in PAIR_GENERATOR_KINDS:
        return f"{gate.name} {gate.wires[0]}"
    return " ".join([gate.name, *map(str, gate.wires)])


def parse_gate(text: str, line_number: int = 0) -> Gate:
    tokens = text.split()
    if not tokens:
        raise CircuitParseError("empty gate", line_number)
    name = tokens[0]
    try:
        arity = gate_arity(name)
    except ValueError:
        raise CircuitParseError(f"unknown gate {name!r}", line_number, name) from None
    if name in SIGNATURES and name[0] in PAIR_GENERATOR_KINDS:
        arity = 1
    args = tokens[1:]
    if len(args) != arity:
        raise CircuitParseError(
            f"{name} expects {arity} wire index(es), got {len(args)}", line_number, text.strip()
        )
    wires = []
    for tok in args:
        if not (tok.isascii() and tok.isdigit()):
            raise CircuitParseError(f"invalid wire index {tok!r}", line_number, tok)
        wires.append(int(tok))
    try:
        return make_gate(name, *wires)
    except ValueError as e:
        raise CircuitParseError(str(e), line_number, text.strip()) from None


def parse_circuit(text: str) -> Circuit:
    """Parse ``.rsc`` text: a ``qubits N`` header and one gate per line."""
    n_qubits: Optional[int] = None
    gates: List[Gate] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n_qubits is None:
            tokens = line.split()
            if len(tokens) != 2 or tokens[0] != "qubits" or not (tokens[1].isascii() and tokens[1].isdigit()):
                raise CircuitParseError("expected 'qubits N' header", line_number, line)
            n_qubits = int(tokens[1])
            continue
        gate = parse_gate(line, line_number)
        if any(w >= n_qubits for w in gate.wires):
            raise CircuitParseError(
                f"wire index out of range for {n_qubits} qubits", line_number, line
            )
        gates.append(gate)
    if n_qubits is None:
        raise CircuitParseError("missing 'qubits N' header")
    return Circuit(n_qubits, tuple(gates))


def format_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n_qubits}"] + [format_gate(g) for g in c.gates]
    return "\n".join(lines) + "\n"


def random_circuit(n: int, length: int, rng: np.random.Generator) -> Circuit:
    """Random circuit over MINUS1, H, Z, X, CZ and CXZ."""
    names = ["MINUS1", "H", "Z", "X"] + (["CZ", "CXZ"] if n >= 2 else [])
    gates = []
    for _ in range(length):
        name = names[rng.integers(len(names))]
        if gate_arity(name) == 0:
            gates.append(Gate(name))
        elif gate_arity(name) == 1:
            gates.append(Gate(name, (int(rng.integers(n)),)))
        else:
            a, b = (int(w) for w in rng.choice(n, size=2, replace=False))
            gates.append(make_gate(name, a, b))
    return Circuit(n, tuple(gates))
