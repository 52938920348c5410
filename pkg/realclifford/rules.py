"""Typed rewrite rules and their derivation.

A rule replaces one dirty gate followed by one or two clean generators
with clean generators followed by dirty gates, possibly times -1.  Right
sides are not written down by hand: for every candidate clean sequence
the operator left over once it is undone must be a short word of dirty
gates that may legally follow it, and normal forms being unique leaves
exactly one such candidate.
"""

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from realclifford import rule_store
from realclifford.circuit import (
    GENERATOR_NAMES,
    SIGNATURES,
    Circuit,
    CircuitParseError,
    CircuitTypeError,
    Gate,
    WireColor,
    format_gate,
    inverse_circuit,
    make_gate,
    parse_gate,
    type_check,
)
from realclifford.exact import apply_to_basis_state, circuit_matrix
from realclifford.labels import WireLabel, final_labels, is_dirty_placement_legal, search_moves
from realclifford.normal_form import identity_normal_form
from realclifford.tableau import Tableau


# Dirty word lengths tried in turn before giving up on a window.
DERIVATION_BOUNDS = (6, 8, 10)

IDENTITY_FAMILY = "identity"

# Each window family and the part of the published rule figure it reproduces.
FAMILY_PARTS: Dict[str, str] = {
    "z-start": "I",
    "z-ladder": "II",
    "z-cross": "III",
    "z-pair-simple": "IV",
    "z-pair-double": "V",
    "x-ladder": "VI",
    "x-pair": "VII",
    IDENTITY_FAMILY: "VIII",
}


def family_part(family: str) -> str:
    """Figure part of a family; empty for untagged or unknown families."""
    return FAMILY_PARTS.get(family, "")

Shape = Tuple[Tuple[str, int], ...]


class RuleDerivationError(Exception):
    """Raised when a window has no well-defined right-hand side."""


class NoCandidateError(RuleDerivationError):
    """Raised when no clean sequence fits within the search bounds."""


class AmbiguousRuleError(RuleDerivationError):
    """Raised when several clean sequences realize the same window."""


class RuleFileError(ValueError):
    """Raised for malformed, duplicate or unsound rules in rule text."""

    def __init__(self, message: str, line_number: int = 0):
        self.line_number = line_number
        if line_number:
            message = f"line {line_number}: {message}"
        super().__init__(message)


def window_key(gates: Sequence[Gate]) -> str:
    return ";".join(format_gate(g) for g in gates)


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RewriteRule:
    """``lhs = clean · dirty · scalar`` on ``len(colors)`` wires.

    ``colors`` are the wire colors entering the window.  Gates are listed in
    application order and use wires relative to the window.
    """

    family: str
    lhs: Tuple[Gate, ...]
    colors: Tuple[WireColor, ...]
    clean: Tuple[Gate, ...]
    dirty: Tuple[Gate, ...] = ()
    scalar: int = 1

    @property
    def width(self) -> int:
        return len(self.colors)

    @property
    def part(self) -> str:
        return family_part(self.family)

    @property
    def key(self) -> str:
        return window_key(self.lhs)

    def rhs(self) -> Tuple[Gate, ...]:
        minus = (Gate("MINUS1"),) if self.scalar < 0 else ()
        return self.clean + self.dirty + minus

    def lhs_circuit(self) -> Circuit:
        return Circuit(self.width, self.lhs)

    def rhs_circuit(self) -> Circuit:
        return Circuit(self.width, self.rhs())

    def is_sound(self) -> bool:
        return circuit_matrix(self.lhs_circuit()) == circuit_matrix(self.rhs_circuit())

    def labels(self) -> Tuple[WireLabel, ...]:
        """Wire labels right after the clean part of the right side."""
        return final_labels(self.width, self.clean)

    def is_legal(self) -> bool:
        """Clean part keeps the window's output colors; dirty gates sit legally."""
        window = tuple(g for g in self.lhs if g.is_generator)
        try:
            ours = type_check(Circuit(self.width, self.clean), self.colors).output_colors
            theirs = type_check(Circuit(self.width, window), self.colors).output_colors
        except CircuitTypeError:
            return False
        if ours != theirs:
            return False
        config = self.labels()
        return all(is_dirty_placement_legal(g, [config[w] for w in g.wires]) for g in self.dirty)


# ---------------------------------------------------------------------------
# Window catalogue
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowSpec:
    """A left-hand side and the clean shapes its right side may take."""

    family: str
    lhs: Tuple[Gate, ...]
    shapes: Optional[Tuple[Shape, ...]] = None

    @property
    def part(self) -> str:
        return family_part(self.family)

    @property
    def key(self) -> str:
        return window_key(self.lhs)

    def candidate_shapes(self) -> Tuple[Shape, ...]:
        if self.shapes is not None:
            return self.shapes
        return (tuple((g.kind, g.top) for g in self.lhs[1:]),)


# A CZ reaching an A gate can grow the Z-circuit by one wire or shrink it.
CZ_A_SHAPES: Tuple[Shape, ...] = ((("A", 0),), (("A", 1), ("B", 0)))

_A, _B, _C, _D, _E = (GENERATOR_NAMES[k] for k in "ABCDE")


def _g(name: str, *wires: int) -> Gate:
    return make_gate(name, *wires)


def _output_color(name: str, index: int = 0) -> WireColor:
    return SIGNATURES[name][1][index]


def _input_color(name: str, index: int) -> WireColor:
    return SIGNATURES[name][0][index]


def _z_start() -> Iterator[WindowSpec]:
    for dirty in ("Z", "H"):
        for a in _A:
            yield WindowSpec("z-start", (_g(dirty, 0), _g(a, 0)))
    for a in _A:
        yield WindowSpec("z-start", (_g("CZ", 0, 1), _g(a, 0)), CZ_A_SHAPES)
    for a in _A:
        for b in _B:
            if _input_color(b, 1) is _output_color(a):
                yield WindowSpec("z-start", (_g("CZ", 0, 1), _g(a, 1), _g(b, 0)), CZ_A_SHAPES)
    for b in _B:
        if _input_color(b, 1) is WireColor.DOUBLE:
            yield WindowSpec("z-start", (_g("H", 1), _g(b, 0)))


def _z_ladder() -> Iterator[WindowSpec]:
    for b in _B:
        for dirty in (_g("X", 1), _g("H", 0), _g("Z", 0), _g("Z", 1)):
            yield WindowSpec("z-ladder", (dirty, _g(b, 0)))
    for c in _C:
        for dirty in (_g("Z", 0), _g("X", 0), _g("CZ", 0, 1)):
            yield WindowSpec("z-ladder", (dirty, _g(c, 0)))


def _z_cross() -> Iterator[WindowSpec]:
    for b in _B:
        dirty = "CZ" if _input_color(b, 1) is WireColor.SIMPLE else "CXZ"
        yield WindowSpec("z-cross", (_g(dirty, 1, 2), _g(b, 0)))


def _z_pair() -> Iterator[WindowSpec]:
    for first in _B:
        family = "z-pair-simple" if _input_color(first, 1) is WireColor.SIMPLE else "z-pair-double"
        for second in _B:
            if _input_color(second, 1) is _output_color(first):
                yield WindowSpec(family, (_g("CZ", 0, 1), _g(first, 1), _g(second, 0)))


def _x_ladder() -> Iterator[WindowSpec]:
    for d in _D:
        for dirty in (_g("Z", 0), _g("Z", 1), _g("H", 1), _g("CZ", 0, 1)):
            yield WindowSpec("x-ladder", (dirty, _g(d, 0)))
    for e in _E:
        yield WindowSpec("x-ladder", (_g("Z", 0), _g(e, 0)))


def _x_pair() -> Iterator[WindowSpec]:
    for first, second in itertools.product(_D, _D):
        yield WindowSpec("x-pair", (_g("CZ", 1, 2), _g(first, 0), _g(second, 1)))


@lru_cache(maxsize=None)
def window_catalogue() -> Tuple[WindowSpec, ...]:
    """Every window a legal dirty gate can meet, grouped by family."""
    return tuple(itertools.chain(_z_start(), _z_ladder(), _z_cross(), _z_pair(), _x_ladder(), _x_pair()))


@lru_cache(maxsize=None)
def catalogue_by_key() -> Dict[str, WindowSpec]:
    return {spec.key: spec for spec in window_catalogue()}


def identity_rules() -> List[RewriteRule]:
    """Expansions of the identity into clean generators on one and two wires."""
    P, S = WireColor.PLAIN, WireColor.SIMPLE
    return [
        RewriteRule(IDENTITY_FAMILY, (), (P,), tuple(identity_normal_form(1).gates())),
        RewriteRule(IDENTITY_FAMILY, (_g("C1", 1),), (P, S), (_g("B1", 0), _g("C1", 0), _g("D1", 0))),
    ]


def catalogue_text() -> str:
    """Text identifying the catalogue and bounds; a cache key for derived rules."""
    lines = [f"bounds {' '.join(map(str, DERIVATION_BOUNDS))}"]
    lines += [f"{rule.family}\t{rule.key}" for rule in identity_rules()]
    lines += [f"{spec.family}\t{spec.key}\t{spec.candidate_shapes()}" for spec in window_catalogue()]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Derivation
# ---------------------------------------------------------------------------

class DirtyWordSearch:
    """Shortest dirty word, by tableau, among the moves legal on ``config``.

    The search grows one layer at a time and keeps what it has found, so
    asking for a larger bound only explores the missing layers.
    """

    def __init__(self, config: Sequence[WireLabel]):
        self.config = tuple(config)
        self.moves = search_moves(self.config)
        start = Tableau.identity(len(self.config))
        self.words: Dict[tuple, Tuple[Gate, ...]] = {start.key(): ()}
        self._frontier = [(start, ())]
        self.depth = 0

    def extend(self, depth: int) -> Dict[tuple, Tuple[Gate, ...]]:
        while self.depth < depth and self._frontier:
            layer = []
            for tableau, word in self._frontier:
                for gate in self.moves:
                    nxt = tableau.then(gate)
                    key = nxt.key()
                    if key not in self.words:
                        self.words[key] = word + (gate,)
                        layer.append((nxt, word + (gate,)))
            self._frontier = layer
            self.depth += 1
        return self.words


@lru_cache(maxsize=None)
def word_search(config: Tuple[WireLabel, ...]) -> DirtyWordSearch:
    return DirtyWordSearch(config)


def window_colors(width: int, clean: Sequence[Gate]) -> Tuple[WireColor, ...]:
    """Per wire, the input color of the first clean gate on it (Plain if none)."""
    colors: List[Optional[WireColor]] = [None] * width
    for gate in clean:
        for wire, color in zip(gate.wires, SIGNATURES[gate.name][0]):
            if colors[wire] is None:
                colors[wire] = color
    return tuple(WireColor.PLAIN if c is None else c for c in colors)


def _candidates(shape: Shape, width: int, colors: Tuple[WireColor, ...],
                outputs: Tuple[WireColor, ...]) -> Iterator[Tuple[Gate, ...]]:
    for names in itertools.product(*(GENERATOR_NAMES[kind] for kind, _ in shape)):
        try:
            gates = tuple(make_gate(name, top) for name, (_, top) in zip(names, shape))
            typed = type_check(Circuit(width, gates), colors)
        except (ValueError, CircuitTypeError):
            continue
        if typed.output_colors == outputs:
            yield gates


def _scalar(remainder: Circuit, word: Tuple[Gate, ...]) -> int:
    mine = apply_to_basis_state(Circuit(remainder.n_qubits, word), 0)
    theirs = apply_to_basis_state(remainder, 0)
    if mine == theirs:
        return 1
    if -mine == theirs:
        return -1
    raise RuleDerivationError("Dirty word and remainder differ by more than a sign")


def derive_rule(lhs: Sequence[Gate], family: str = "",
                shapes: Optional[Tuple[Shape, ...]] = None,
                bounds: Sequence[int] = DERIVATION_BOUNDS) -> RewriteRule:
    """The unique rule for a dirty gate followed by clean generators.

    Candidates are the clean sequences of the given ``shapes`` (by default
    the kinds and top wires of the window) that type-check from the
    window's input colors to its output colors.  A candidate fits when the
    window, with the candidate undone, equals a dirty word legal after the
    candidate, up to sign.  Bounds on the word length are tried in order.
    """
    lhs = tuple(lhs)
    key = window_key(lhs)
    if len(lhs) < 2 or lhs[0].is_generator or not all(g.is_generator for g in lhs[1:]):
        raise RuleDerivationError(f"{key!r} is not a dirty gate followed by clean generators")
    window = lhs[1:]
    width = max(w for g in lhs for w in g.wires) + 1
    colors = window_colors(width, window)
    try:
        outputs = type_check(Circuit(width, window), colors).output_colors
    except CircuitTypeError as e:
        raise RuleDerivationError(f"{key}: {e}") from None
    if shapes is None:
        shapes = WindowSpec(family, lhs).candidate_shapes()

    remainders = []
    for shape in shapes:
        for clean in _candidates(shape, width, colors, outputs):
            remainder = inverse_circuit(Circuit(width, clean)) + Circuit(width, lhs)
            remainders.append((clean, remainder, Tableau.from_circuit(remainder).key()))

    for bound in bounds:
        matches = []
        for clean, remainder, target in remainders:
            words = word_search(final_labels(width, clean)).extend(bound)
            if target in words and len(words[target]) <= bound:
                matches.append((clean, remainder, words[target]))
        if len(matches) > 1:
            found = " | ".join(window_key(m[0] + m[2]) for m in matches)
            raise AmbiguousRuleError(f"{key}: several right-hand sides: {found}")
        if matches:
            clean, remainder, word = matches[0]
            return RewriteRule(family, lhs, colors, clean, word, _scalar(remainder, word))
    raise NoCandidateError(
        f"{key}: no right-hand side with at most {bounds[-1]} dirty gates "
        f"among {len(remainders)} candidates"
    )


def derive_typed_rules(bounds: Sequence[int] = DERIVATION_BOUNDS) -> List[RewriteRule]:
    rules = identity_rules()
    for spec in window_catalogue():
        rules.append(derive_rule(spec.lhs, spec.family, spec.shapes, bounds))
    return rules


# ---------------------------------------------------------------------------
# Database
# ---------------------------------------------------------------------------

class RuleDatabase:
    """Rules indexed by left-hand side.

    Identity expansions are kept for verification but never looked up.
    With ``on_demand`` set, a catalogued window without a rule is derived
    on first lookup and kept.
    """

    def __init__(self, rules: Iterable[RewriteRule] = (), on_demand: bool = False):
        self.rules: List[RewriteRule] = []
        self._by_key: Dict[str, RewriteRule] = {}
        self.on_demand = on_demand
        for rule in rules:
            self.add(rule)

    def add(self, rule: RewriteRule) -> None:
        if rule.family != IDENTITY_FAMILY:
            if rule.key in self._by_key:
                raise RuleFileError(f"Duplicate rule for {rule.key}")
            self._by_key[rule.key] = rule
        self.rules.append(rule)

    def get(self, key: str) -> Optional[RewriteRule]:
        rule = self._by_key.get(key)
        if rule is None and self.on_demand:
            spec = catalogue_by_key().get(key)
            if spec is not None:
                rule = derive_rule(spec.lhs, spec.family, spec.shapes)
                self.add(rule)
        return rule

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[RewriteRule]:
        return iter(self.rules)

    def family_counts(self) -> Dict[str, int]:
        return dict(Counter(rule.family for rule in self.rules))

    def unsound(self) -> List[RewriteRule]:
        return [rule for rule in self.rules if not (rule.is_sound() and rule.is_legal())]


@lru_cache(maxsize=None)
def on_demand_database() -> RuleDatabase:
    """Process-wide database deriving typed rules as windows are met."""
    return RuleDatabase(identity_rules(), on_demand=True)


# ---------------------------------------------------------------------------
# Rule file format
# ---------------------------------------------------------------------------

_RULE_LINE = re.compile(
    r"^(?P<lhs>.*?)\s*@colors\s+(?P<colors>[PSD]+)\s*->\s*(?P<rhs>[^#]*?)\s*(?:#\s*(?P<family>\S+))?$"
)


def format_rule(rule: RewriteRule) -> str:
    rhs = [format_gate(g) for g in rule.clean + rule.dirty]
    if rule.scalar < 0:
        rhs.append("SCALAR -1")
    lhs = f"{rule.key} " if rule.lhs else ""
    colors = "".join(c.value for c in rule.colors)
    tail = f" # {rule.family}" if rule.family else ""
    return f"{lhs}@colors {colors} -> {';'.join(rhs)}{tail}"


def format_rules(rules: Iterable[RewriteRule]) -> str:
    lines = ["# LHS @colors C -> RHS # family"] + [format_rule(r) for r in rules]
    return "\n".join(lines) + "\n"


def _gate_tokens(text: str) -> List[str]:
    return [tok.strip() for tok in text.split(";") if tok.strip()]


def _parse_rule(match: "re.Match", line_number: int) -> RewriteRule:
    try:
        lhs = tuple(parse_gate(tok) for tok in _gate_tokens(match["lhs"]))
        colors = tuple(WireColor(ch) for ch in match["colors"])
        clean: List[Gate] = []
        dirty: List[Gate] = []
        scalar = 1
        for tok in _gate_tokens(match["rhs"]):
            if tok.split() == ["SCALAR", "-1"]:
                scalar = -scalar
                continue
            gate = parse_gate(tok)
            if gate.is_generator:
                if dirty:
                    raise RuleFileError(f"clean gate {tok!r} after a dirty gate", line_number)
                clean.append(gate)
            else:
                dirty.append(gate)
    except CircuitParseError as e:
        raise RuleFileError(str(e), line_number) from None
    if not clean:
        raise RuleFileError("right-hand side has no clean gate", line_number)
    if any(w >= len(colors) for g in lhs + tuple(clean) + tuple(dirty) for w in g.wires):
        raise RuleFileError(f"wire index out of range for {len(colors)} colors", line_number)
    return RewriteRule(match["family"] or "", lhs, colors, tuple(clean), tuple(dirty), scalar)


def parse_rules(text: str) -> List[RewriteRule]:
    rules = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _RULE_LINE.match(line)
        if not match:
            raise RuleFileError("expected 'LHS @colors C -> RHS'", line_number)
        rules.append(_parse_rule(match, line_number))
    return rules


def load_rules(text: str, check: bool = True) -> RuleDatabase:
    """Parse rule text into a database, checking every rule on the way in."""
    database = RuleDatabase(parse_rules(text))
    if check:
        bad = database.unsound()
        if bad:
            raise RuleFileError(f"Unsound or illegal rule: {format_rule(bad[0])}")
    return database


def typed_rule_database(use_cache: bool = True) -> RuleDatabase:
    """All typed rules, read from the rule cache or derived and cached."""
    catalogue = catalogue_text()
    if use_cache:
        text = rule_store.get_rules(catalogue)
        if text is not None:
            try:
                return load_rules(text)
            except RuleFileError:
                rule_store.clear_rules(catalogue)
    database = RuleDatabase(derive_typed_rules())
    if use_cache:
        rule_store.save_rules(catalogue, format_rules(database.rules))
    return database
