"""Wire labels of a normal form and where dirty gates may sit.

A position on a wire is labelled by the clean gate that precedes it on
that wire: 1 at the start and after a B gate's bottom or a D gate's top
output, 2 after an A gate or a B gate's top output (simple or double like
the wire color), 3 after C, 4 after a D gate's bottom output.  Nothing
may follow an E gate.
"""

from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

from realclifford.circuit import SIGNATURES, Gate, WireColor
from realclifford.normal_form import NormalForm


class WireLabel(Enum):
    ONE = "1"
    TWO_SIMPLE = "2S"
    TWO_DOUBLE = "2D"
    THREE = "3"
    FOUR = "4"
    TAIL = "T"

    @property
    def number(self) -> int:
        """The plain label 1-4; the tail after an E gate counts as 0."""
        return 0 if self is WireLabel.TAIL else int(self.value[0])


_TWO = {WireColor.SIMPLE: WireLabel.TWO_SIMPLE, WireColor.DOUBLE: WireLabel.TWO_DOUBLE}


def output_label(gate: Gate, wire: int) -> WireLabel:
    """Label of ``wire`` right after the clean generator ``gate``."""
    kind = gate.kind
    if kind == "A":
        return _TWO[SIGNATURES[gate.name][1][0]]
    if kind == "B":
        return _TWO[SIGNATURES[gate.name][1][0]] if wire == gate.top else WireLabel.ONE
    if kind == "C":
        return WireLabel.THREE
    if kind == "D":
        return WireLabel.ONE if wire == gate.top else WireLabel.FOUR
    if kind == "E":
        return WireLabel.TAIL
    raise ValueError(f"{gate} is not a generator gate")


def wire_labels(n: int, clean_gates: Iterable[Gate]) -> List[List[WireLabel]]:
    """Per wire, the label before the first gate and after each gate."""
    labels = [[WireLabel.ONE] for _ in range(n)]
    for gate in clean_gates:
        for wire in gate.wires:
            labels[wire].append(output_label(gate, wire))
    return labels


def label(nf: NormalForm) -> List[List[WireLabel]]:
    """The labelled normal form, one label sequence per wire."""
    return wire_labels(nf.n, [g for g in nf.gates() if g.name != "MINUS1"])


def final_labels(width: int, clean_gates: Sequence[Gate],
                 initial: Optional[Sequence[WireLabel]] = None) -> Tuple[WireLabel, ...]:
    labels = list(initial) if initial is not None else [WireLabel.ONE] * width
    for gate in clean_gates:
        for wire in gate.wires:
            labels[wire] = output_label(gate, wire)
    return tuple(labels)


# ---------------------------------------------------------------------------
# Placement rules for dirty gates
# ---------------------------------------------------------------------------

DIRTY_GATES = ("H", "Z", "X", "CZ", "CXZ")

_SINGLE_PLACEMENT = {
    "H": (WireLabel.ONE, WireLabel.TWO_DOUBLE),
    "Z": (WireLabel.ONE, WireLabel.TWO_SIMPLE, WireLabel.TWO_DOUBLE, WireLabel.THREE, WireLabel.FOUR),
    "X": (WireLabel.ONE, WireLabel.TWO_SIMPLE, WireLabel.TWO_DOUBLE),
}
_CZ_TOP = (WireLabel.ONE, WireLabel.THREE, WireLabel.TWO_SIMPLE)


def is_dirty_placement_legal(gate: Gate, labels: Sequence[WireLabel]) -> bool:
    """Whether ``gate`` may sit where its wires carry ``labels``.

    ``labels`` follows ``gate.wires``.  Two-wire gates must act on
    neighbouring wires with label 1 on the lower one; CZ takes label 1, 3
    or a simple 2 on top, CXZ needs a double 2 on its H-carrying top wire.
    """
    name = gate.name
    if name in _SINGLE_PLACEMENT:
        return labels[0] in _SINGLE_PLACEMENT[name]
    if name == "CZ":
        top, bottom = gate.wires
        return bottom == top + 1 and labels[1] is WireLabel.ONE and labels[0] in _CZ_TOP
    if name == "CXZ":
        t, c = gate.wires
        return c == t + 1 and labels[1] is WireLabel.ONE and labels[0] is WireLabel.TWO_DOUBLE
    return False


# Single-wire dirty gates used when searching for right-hand sides.  X on
# label 1 is legal but never produced, so no rule needs to consume it.
SEARCH_MOVES = {
    WireLabel.ONE: ("H", "Z"),
    WireLabel.TWO_SIMPLE: ("X", "Z"),
    WireLabel.TWO_DOUBLE: ("H", "X", "Z"),
    WireLabel.THREE: ("Z",),
    WireLabel.FOUR: ("Z",),
    WireLabel.TAIL: (),
}


def search_moves(config: Sequence[WireLabel]) -> List[Gate]:
    """Dirty gates available on a window whose wires carry ``config``."""
    moves = [Gate(name, (w,)) for w, lab in enumerate(config) for name in SEARCH_MOVES[lab]]
    for w in range(len(config) - 1):
        pair = config[w:w + 2]
        for name in ("CZ", "CXZ"):
            gate = Gate(name, (w, w + 1))
            if is_dirty_placement_legal(gate, pair):
                moves.append(gate)
    return moves
