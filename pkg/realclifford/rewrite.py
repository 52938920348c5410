"""Normalization by rewriting dirty normal forms.

The input circuit becomes a row of dirty gates in front of the identity
normal form.  The leftmost dirty gate that touches clean gates on all of
its wires is pushed through them by a typed rule, until no dirty gate is
left.  Every step lowers the termination measure.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from realclifford.circuit import Circuit, Gate, format_circuit, to_adjacent
from realclifford.labels import WireLabel, is_dirty_placement_legal, output_label
from realclifford.normal_form import NormalForm, NormalFormError, identity_normal_form, parse_normal_form
from realclifford.rules import RewriteRule, RuleDatabase, family_part, on_demand_database, window_key


class NoRuleAppliesError(Exception):
    """Raised when a dirty gate meets clean gates no rule covers."""

    def __init__(self, message: str, reproducer: str = ""):
        self.reproducer = reproducer
        super().__init__(message)


class RewriteInvariantError(Exception):
    """Raised when a rewrite step breaks legality, wire order or the measure."""


@dataclass(frozen=True, order=True)
class TerminationMeasure:
    """Per clean gate, the number of dirty gates in front of it."""

    s: Tuple[int, ...]


@dataclass(frozen=True)
class TraceStep:
    position: int
    rule: str
    family: str
    measure: TerminationMeasure

    def to_json(self) -> dict:
        return {
            "position": self.position,
            "rule": self.rule,
            "family": self.family,
            "part": family_part(self.family),
            "measure": list(self.measure.s),
        }


Entry = Tuple[Gate, bool]


@dataclass
class DirtyNormalForm:
    """Clean generators interleaved with dirty gates, plus a global sign.

    Each entry is ``(gate, clean)``; entries are in application order.
    """

    n: int
    entries: List[Entry] = field(default_factory=list)
    sign: int = 1

    @classmethod
    def start(cls, c: Circuit) -> "DirtyNormalForm":
        """``c`` as dirty gates followed by the identity normal form."""
        sign = 1
        entries: List[Entry] = []
        for gate in to_adjacent(c).gates:
            if gate.name == "MINUS1":
                sign = -sign
            else:
                entries.append((gate, False))
        entries.extend((gate, True) for gate in identity_normal_form(c.n_qubits).gates())
        return cls(c.n_qubits, entries, sign)

    def clean_gates(self) -> List[Gate]:
        return [gate for gate, clean in self.entries if clean]

    def dirty_gates(self) -> List[Gate]:
        return [gate for gate, clean in self.entries if not clean]

    def base(self) -> NormalForm:
        """The clean part read as a normal form, with the accumulated sign."""
        nf = parse_normal_form(Circuit(self.n, tuple(self.clean_gates())))
        return NormalForm(nf.n, nf.stages, self.sign)

    def to_circuit(self) -> Circuit:
        gates = [gate for gate, _ in self.entries]
        if self.sign < 0:
            gates.append(Gate("MINUS1"))
        return Circuit(self.n, tuple(gates))

    def is_legal(self) -> bool:
        """Clean part is a normal form and every dirty gate sits on allowed labels."""
        try:
            self.base()
        except NormalFormError:
            return False
        labels = [WireLabel.ONE] * self.n
        for gate, clean in self.entries:
            if clean:
                for wire in gate.wires:
                    labels[wire] = output_label(gate, wire)
            elif not is_dirty_placement_legal(gate, [labels[w] for w in gate.wires]):
                return False
        return True

    @property
    def measure(self) -> TerminationMeasure:
        return measure(self)


def measure(d: DirtyNormalForm) -> TerminationMeasure:
    counts = []
    dirty = 0
    for _, clean in d.entries:
        if clean:
            counts.append(dirty)
        else:
            dirty += 1
    return TerminationMeasure(tuple(counts))


# ---------------------------------------------------------------------------
# Window location
# ---------------------------------------------------------------------------

def _next_on(entries: List[Entry]) -> List[Dict[int, Optional[int]]]:
    """For each entry, the index of the next entry on each of its wires."""
    following: Dict[int, int] = {}
    table: List[Dict[int, Optional[int]]] = [{} for _ in entries]
    for i in range(len(entries) - 1, -1, -1):
        gate = entries[i][0]
        table[i] = {w: following.get(w) for w in gate.wires}
        for w in gate.wires:
            following[w] = i
    return table


def _window(entries: List[Entry], next_on, i: int) -> Optional[List[int]]:
    """Clean gates the dirty gate at ``i`` is pushed through, in rule order.

    None when a wire of the gate has no clean gate next; an empty list when
    the clean gates next to it form no known window.
    """
    gate = entries[i][0]
    nexts = [next_on[i][w] for w in gate.wires]
    if any(j is None or not entries[j][1] for j in nexts):
        return None
    if len(nexts) == 1:
        return nexts
    t, b = gate.wires
    jt, jb = nexts
    gt, gb = entries[jt][0], entries[jb][0]
    if gt.kind in ("A", "C"):
        return [jt]
    if gt.kind == "B" and gt.wires == (t - 1, t):
        return [jt]
    if gt.kind == "D" and jt == jb:
        return [jt]
    if gt.kind == "B" and gt.wires == (t, b) and next_on[jb].get(b) == jt:
        if gb.kind == "A" or (gb.kind == "B" and gb.wires == (b, b + 1)):
            return [jb, jt]
    if gt.kind == "D" and gt.wires == (t - 1, t) and gb.kind == "D" and next_on[jt].get(t) == jb:
        return [jt, jb]
    return []


def _reproducer(lhs: List[Gate], offset: int) -> str:
    width = max(w for g in lhs for w in g.wires) + 1 - offset
    return format_circuit(Circuit(width, tuple(g.shifted(-offset) for g in lhs)))


def _find_redex(d: DirtyNormalForm, database: RuleDatabase) -> Optional[Tuple[int, List[int], int, RewriteRule]]:
    """The leftmost dirty gate with a rule for its window.

    A gate whose clean neighbours are split by another dirty gate is
    skipped; it becomes reducible once that gate has moved on.
    """
    next_on = _next_on(d.entries)
    blocked: Optional[Tuple[int, List[Gate]]] = None
    for i, (gate, clean) in enumerate(d.entries):
        if clean:
            continue
        window = _window(d.entries, next_on, i)
        if window is None:
            continue
        if not window:
            if blocked is None:
                nexts = sorted({next_on[i][w] for w in gate.wires})
                blocked = (i, [gate] + [d.entries[j][0] for j in nexts])
            continue
        lhs = [gate] + [d.entries[j][0] for j in window]
        offset = min(w for g in lhs for w in g.wires)
        key = window_key([g.shifted(-offset) for g in lhs])
        rule = database.get(key)
        if rule is None:
            raise NoRuleAppliesError(f"No rule for window {key!r} at position {i}", _reproducer(lhs, offset))
        return i, window, offset, rule
    if blocked is not None:
        i, lhs = blocked
        offset = min(w for g in lhs for w in g.wires)
        key = window_key([g.shifted(-offset) for g in lhs])
        raise NoRuleAppliesError(f"No window for {key!r} at position {i}", _reproducer(lhs, offset))
    if any(not clean for _, clean in d.entries):
        raise NoRuleAppliesError("Dirty gates remain but none is followed by clean gates")
    return None


def apply_rule(d: DirtyNormalForm, i: int, window: List[int], offset: int, rule: RewriteRule) -> DirtyNormalForm:
    """Replace the dirty gate at ``i`` and its window by the rule's right side."""
    removed = {i, *window}
    p0 = min(window)
    rhs: List[Entry] = [(g.shifted(offset), True) for g in rule.clean]
    rhs += [(g.shifted(offset), False) for g in rule.dirty]
    for wire in {w for g, _ in rhs for w in g.wires}:
        span = [j for j in removed if wire in d.entries[j][0].wires] + [p0]
        lo, hi = min(span), max(span)
        if any(j not in removed and wire in d.entries[j][0].wires for j in range(lo + 1, hi)):
            raise RewriteInvariantError(f"Rule {rule.key!r} at position {i} would reorder wire {wire}")
    before = [e for j, e in enumerate(d.entries[:p0]) if j not in removed]
    after = [e for j, e in enumerate(d.entries[p0:], start=p0) if j not in removed]
    return DirtyNormalForm(d.n, before + rhs + after, d.sign * rule.scalar)


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def rewrite(c: Circuit, database: Optional[RuleDatabase] = None,
            on_step: Optional[Callable[[TraceStep], None]] = None,
            check: bool = True) -> DirtyNormalForm:
    """Rewrite ``c`` until no dirty gate is left and return the final form.

    With ``check`` set, every step must strictly lower the measure, keep the
    clean part within ``n² + 2n`` gates and leave a legal dirty normal form.
    """
    if database is None:
        database = on_demand_database()
    state = DirtyNormalForm.start(c)
    if check and not state.is_legal():
        raise RewriteInvariantError("Initial dirty normal form is not legal")
    current = state.measure
    limit = state.n * state.n + 2 * state.n
    while True:
        redex = _find_redex(state, database)
        if redex is None:
            return state
        i, window, offset, rule = redex
        state = apply_rule(state, i, window, offset, rule)
        following = state.measure
        if check:
            if not following < current:
                raise RewriteInvariantError(f"Rule {rule.key!r} did not lower the measure")
            if len(following.s) > limit:
                raise RewriteInvariantError(f"Clean part grew beyond {limit} gates")
            if not state.is_legal():
                raise RewriteInvariantError(f"Rule {rule.key!r} left an illegal dirty normal form")
        current = following
        if on_step is not None:
            on_step(TraceStep(i, rule.key, rule.family, following))


def normalize_by_rewriting(c: Circuit, database: Optional[RuleDatabase] = None,
                           on_step: Optional[Callable[[TraceStep], None]] = None,
                           check: bool = True) -> NormalForm:
    return rewrite(c, database, on_step, check).base()
