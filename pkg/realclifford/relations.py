"""Relation sets and their verification as exact matrix identities.

Relations are written with the circuit gate tokens, gates separated by
``;`` and listed in application order.  An empty side is the identity.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from realclifford.circuit import Circuit, Gate, parse_gate
from realclifford.exact import circuit_matrix, format_matrix
from realclifford.rules import RuleDatabase, format_rule, typed_rule_database


_ZH4 = ";".join(["Z 0;H 0"] * 4)

# name: (wires, left side, right side)
REDUCED_RELATIONS: Dict[str, Tuple[int, str, str]] = {
    "R1": (1, "MINUS1;MINUS1", ""),
    "R2": (1, "Z 0;Z 0", ""),
    "R3": (1, "H 0;H 0", ""),
    "R4": (1, _ZH4, "MINUS1"),
    "R5": (2, "CZ 0 1;CZ 0 1", ""),
    "R6": (2, "Z 1;CZ 0 1", "CZ 0 1;Z 1"),
    "R7": (2, "Z 0;CZ 0 1", "CZ 0 1;Z 0"),
    "R8": (2, "H 1;Z 1;H 1;CZ 0 1", "CZ 0 1;H 1;Z 1;H 1;Z 0"),
    "R9": (2, "H 0;Z 0;H 0;CZ 0 1", "CZ 0 1;H 0;Z 0;H 0;Z 1"),
    "R10": (2, "H 1;CZ 0 1;H 1;CZ 0 1", "CZ 0 1;H 1;CZ 0 1;H 1;Z 0"),
    "R11": (2, "H 0;CZ 0 1;H 0;CZ 0 1", "CZ 0 1;H 0;CZ 0 1;H 0;Z 1"),
    "R12": (
        2,
        "H 0;CZ 0 1;H 0;H 1;CZ 0 1;H 0;H 1;CZ 0 1",
        "CZ 0 1;H 0;H 1;CZ 0 1;H 0;H 1;CZ 0 1;H 1",
    ),
    "R13": (3, "CZ 1 2;CZ 0 1", "CZ 0 1;CZ 1 2"),
    "R14": (
        3,
        "H 0;CZ 0 1;H 1;H 0;CZ 0 1;H 1;CZ 1 2;H 1;CZ 0 1;H 0;H 1;CZ 0 1;H 0",
        "H 2;CZ 1 2;H 2;H 1;CZ 1 2;H 1;CZ 0 1;H 1;CZ 1 2;H 2;H 1;CZ 1 2;H 2",
    ),
    "R15": (
        3,
        "CZ 1 2;H 2;H 1;CZ 1 2;H 2;H 1;CZ 0 1;CZ 1 2;H 2;H 1;CZ 1 2;H 2;H 1;CZ 0 1",
        "CZ 0 1;H 2;H 1;CZ 1 2;H 2;H 1;CZ 1 2",
    ),
    "R16": (
        3,
        "CZ 0 1;H 1;H 0;CZ 0 1;H 1;H 0;CZ 1 2;CZ 0 1;H 1;H 0;CZ 0 1;H 1;H 0;CZ 1 2",
        "CZ 1 2;H 1;H 0;CZ 0 1;H 1;H 0;CZ 0 1",
    ),
}

# Stated with X and CX (control first) as well.
ALTERNATIVE_RELATIONS: Dict[str, Tuple[int, str, str]] = {
    "S1": (1, "MINUS1;MINUS1", ""),
    "S2": (1, "Z 0;Z 0", ""),
    "S3": (1, "H 0;H 0", ""),
    "S4": (1, "X 0", "H 0;Z 0;H 0"),
    "S5": (1, "Z 0;X 0;Z 0;X 0", "MINUS1"),
    "S6": (2, "CZ 0 1;CZ 0 1", ""),
    "S7": (2, "CX 1 0", "H 0;CZ 0 1;H 0"),
    "S8": (2, "CX 0 1", "H 1;CZ 0 1;H 1"),
    "S9": (2, "Z 1;CZ 0 1", "CZ 0 1;Z 1"),
    "S10": (2, "Z 0;CZ 0 1", "CZ 0 1;Z 0"),
    "S11": (2, "X 1;CZ 0 1", "CZ 0 1;X 1;Z 0"),
    "S12": (2, "X 0;CZ 0 1", "CZ 0 1;X 0;Z 1"),
    "S13": (2, "CX 0 1;CZ 0 1", "CZ 0 1;CX 0 1;Z 0"),
    "S14": (3, "CZ 1 2;CZ 0 1", "CZ 0 1;CZ 1 2"),
    "S15": (2, "CX 1 0;CZ 0 1", "CZ 0 1;CX 1 0;Z 1"),
    "S16": (2, "H 0;CX 0 1;CX 1 0;CX 0 1", "CX 1 0;CX 0 1;CX 1 0;H 1"),
    "S17": (
        3,
        "CX 1 0;CX 0 1;CZ 1 2;CX 0 1;CX 1 0",
        "CX 1 2;CX 2 1;CZ 0 1;CX 2 1;CX 1 2",
    ),
    "S18": (3, "CX 1 2;CX 2 1;CZ 0 1;CX 2 1;CX 1 2;CZ 0 1", "CX 2 1;CZ 0 1;CX 2 1"),
    "S19": (3, "CX 1 0;CX 0 1;CZ 1 2;CX 0 1;CX 1 0;CZ 1 2", "CX 0 1;CZ 1 2;CX 0 1"),
}

RELATION_SETS = ("typed", "reduced", "alt")
_SET_ALIASES = {"alternative": "alt"}


class UnknownRelationSetError(ValueError):
    """Raised for a relation set name other than typed, reduced or alt."""


def _parse_side(text: str) -> Tuple[Gate, ...]:
    return tuple(parse_gate(tok) for tok in text.split(";") if tok.strip())


@dataclass(frozen=True)
class Relation:
    name: str
    width: int
    lhs: Tuple[Gate, ...]
    rhs: Tuple[Gate, ...]

    @classmethod
    def from_text(cls, name: str, width: int, lhs: str, rhs: str) -> "Relation":
        return cls(name, width, _parse_side(lhs), _parse_side(rhs))

    def circuits(self) -> Tuple[Circuit, Circuit]:
        return Circuit(self.width, self.lhs), Circuit(self.width, self.rhs)


@dataclass(frozen=True)
class RelationFailure:
    name: str
    lhs_matrix: str
    rhs_matrix: str

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": self.lhs_matrix, "rhs": self.rhs_matrix}


@dataclass
class RelationReport:
    set: str
    total: int = 0
    verified: int = 0
    failures: List[RelationFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verified == self.total

    def summary(self) -> str:
        return f"{self.verified}/{self.total} verified"

    def to_json(self) -> dict:
        return {
            "set": self.set,
            "total": self.total,
            "verified": self.verified,
            "failures": [f.to_json() for f in self.failures],
        }


def relations(set_name: str) -> List[Relation]:
    """The fixed relations of the reduced or alternative set."""
    name = _SET_ALIASES.get(set_name, set_name)
    table = {"reduced": REDUCED_RELATIONS, "alt": ALTERNATIVE_RELATIONS}.get(name)
    if table is None:
        raise UnknownRelationSetError(f"No fixed relation list for set {set_name!r}")
    return [Relation.from_text(key, *spec) for key, spec in table.items()]


def check_relation(relation: Relation, cap: Optional[int] = None) -> Optional[RelationFailure]:
    lhs, rhs = (circuit_matrix(c, cap) for c in relation.circuits())
    if lhs == rhs:
        return None
    return RelationFailure(relation.name, format_matrix(lhs), format_matrix(rhs))


def verify_relations(set_name: str, database: Optional[RuleDatabase] = None,
                     cap: Optional[int] = None) -> RelationReport:
    """Check every relation of a set as an exact matrix identity.

    The typed set checks each rule of ``database`` (the cached typed rule
    database by default), including that its right side is a legal dirty
    fragment.
    """
    name = _SET_ALIASES.get(set_name, set_name)
    if name not in RELATION_SETS:
        raise UnknownRelationSetError(
            f"Unknown relation set {set_name!r}; expected one of {', '.join(RELATION_SETS)}"
        )
    report = RelationReport(name)
    if name == "typed":
        rules = database if database is not None else typed_rule_database()
        checked = [
            (Relation(format_rule(rule), rule.width, rule.lhs, rule.rhs()), rule.is_legal())
            for rule in rules
        ]
    else:
        checked = [(relation, True) for relation in relations(name)]
    for relation, legal in checked:
        report.total += 1
        failure = check_relation(relation, cap)
        if failure is None and not legal:
            lhs, rhs = (format_matrix(circuit_matrix(c, cap)) for c in relation.circuits())
            failure = RelationFailure(relation.name + " (illegal right-hand side)", lhs, rhs)
        if failure is None:
            report.verified += 1
        else:
            report.failures.append(failure)
    return report
