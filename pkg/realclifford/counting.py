"""Counting normal forms and checking that they name each operator once.

The number of real Clifford operators on n wires is
``2 · ∏_{i=1..n} (4^i + 2^i - 2) · 2 · 4^(i-1)``: one Z-circuit and one
X-circuit per stage, times the global sign.
"""

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Set, Tuple

import numpy as np

from realclifford.circuit import Circuit, Gate
from realclifford.exact import apply_gate_to_vector, apply_to_basis_state
from realclifford.normal_form import (
    NormalForm,
    Stage,
    enumerate_stages,
    enumerate_x_circuits,
    enumerate_z_circuits,
    nf_to_circuit,
    nf_to_json,
    stage_tableau,
)
from realclifford.pauli import PauliLetter, PauliOperator, squares_to_identity
from realclifford.tableau import Tableau, apply, compose, embed, fingerprint, inverse


# Largest n the bijection check accepts.
MAX_BIJECTION_QUBITS = 3

# Outer stages handed to one worker at a time.
BIJECTION_CHUNK = 64


def _check_width(n: int) -> None:
    if n < 1:
        raise ValueError(f"Stage width must be at least 1, got {n}")


def count_z_circuits(n: int) -> int:
    _check_width(n)
    return 4 ** n + 2 ** n - 2


def z_circuit_partial_sums(n: int) -> Tuple[int, int]:
    """Z-circuits starting with A1 or A2, and those starting with A3."""
    _check_width(n)
    even = sum(2 ** (m - 1) * (2 ** m + 2) for m in range(1, n + 1))
    odd = sum(2 ** (m - 1) * (2 ** (m - 1) - 1) for m in range(1, n + 1))
    return even, odd


def count_x_circuits(n: int) -> int:
    _check_width(n)
    return 2 * 4 ** (n - 1)


def clifford_order(n: int) -> int:
    if n < 0:
        raise ValueError(f"Number of qubits must be non-negative, got {n}")
    order = 2
    for i in range(1, n + 1):
        order *= count_z_circuits(i) * count_x_circuits(i)
    return order


@dataclass
class CountReport:
    n: int
    z_count: int
    x_count: int
    z_start_even: int
    z_start_odd: int
    clifford_order: int
    enumerated: Optional[int] = None

    def to_json(self) -> dict:
        data = {
            "n": self.n,
            "z_count": self.z_count,
            "x_count": self.x_count,
            "z_partial_sums": {"A1_A2": self.z_start_even, "A3": self.z_start_odd},
            "clifford_order": self.clifford_order,
        }
        if self.enumerated is not None:
            data["enumerated"] = self.enumerated
        return data


def count_report(n: int, enumerate_stages_too: bool = False) -> CountReport:
    even, odd = z_circuit_partial_sums(n)
    report = CountReport(n, count_z_circuits(n), count_x_circuits(n), even, odd, clifford_order(n))
    if enumerate_stages_too:
        report.enumerated = sum(1 for _ in enumerate_z_circuits(n)) * sum(1 for _ in enumerate_x_circuits(n))
    return report


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def enumerate_normal_forms(n: int) -> Iterator[NormalForm]:
    """Every normal form on ``n`` wires, sign +1 first; the identity leads."""
    stage_lists = [list(enumerate_stages(i)) for i in range(n, 0, -1)]
    for sign in (1, -1):
        for stages in itertools.product(*stage_lists):
            yield NormalForm(n, stages, sign)


def parity_holds(n: int) -> bool:
    """A Z-circuit starts with A1 or A2 iff it has an even number of B4/B8."""
    return all(
        (z.a != "A3") == (z.swap_count % 2 == 0)
        for width in range(1, n + 1)
        for z in enumerate_z_circuits(width)
    )


def z_circuit_preimages(width: int) -> List[PauliOperator]:
    """For each Z-circuit, the signed Pauli it sends to ``+Z`` on wire 0."""
    target = PauliOperator.single(width, 0, PauliLetter.Z)
    return [
        apply(inverse(Tableau.identity(width).then_all(z.gates())), target)
        for z in enumerate_z_circuits(width)
    ]


def verify_z_circuits(width: int) -> bool:
    """Each admissible stage Pauli is sent to ``+Z`` by exactly one Z-circuit."""
    images = z_circuit_preimages(width)
    admissible = all(squares_to_identity(p) and not p.is_identity() for p in images)
    return admissible and len(set(images)) == len(images) == count_z_circuits(width)


def verify_x_circuits(width: int) -> bool:
    """Every X-circuit sends ``+Z`` on wire 0 to ``+Z`` on the bottom wire,
    and distinct X-circuits send distinct Paulis to ``+X`` there."""
    z_top = PauliOperator.single(width, 0, PauliLetter.Z)
    z_bottom = PauliOperator.single(width, width - 1, PauliLetter.Z)
    x_bottom = PauliOperator.single(width, width - 1, PauliLetter.X)
    preimages = set()
    for x in enumerate_x_circuits(width):
        t = Tableau.identity(width).then_all(x.gates())
        if apply(t, z_top) != z_bottom:
            return False
        preimages.add(apply(inverse(t), x_bottom))
    return len(preimages) == count_x_circuits(width)


# ---------------------------------------------------------------------------
# Closure under the primitive gates
# ---------------------------------------------------------------------------

def primitive_generators(n: int) -> List[Gate]:
    return (
        [Gate("MINUS1")]
        + [Gate("H", (q,)) for q in range(n)]
        + [Gate("Z", (q,)) for q in range(n)]
        + [Gate("CZ", (q, q + 1)) for q in range(n - 1)]
    )


def bfs_closure(n: int, cap: Optional[int] = None) -> Set[tuple]:
    """Fingerprint keys of every operator reachable from the identity."""
    start = (Tableau.identity(n), apply_to_basis_state(Circuit(n), 0, cap))
    gens = primitive_generators(n)
    seen = {(start[0].key(), start[1])}
    frontier = [start]
    while frontier:
        following = []
        for t, v in frontier:
            for gate in gens:
                state = (t.then(gate), apply_gate_to_vector(v, gate, n))
                key = (state[0].key(), state[1])
                if key not in seen:
                    seen.add(key)
                    following.append(state)
        frontier = following
    return seen


# ---------------------------------------------------------------------------
# Bijection check
# ---------------------------------------------------------------------------

@dataclass
class BijectionReport:
    n: int
    expected: int
    enumerated: int = 0
    distinct: int = 0
    closure: Optional[int] = None
    parity: bool = True
    collisions: List[Tuple[NormalForm, NormalForm]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        counts = self.enumerated == self.distinct == self.expected
        closed = self.closure is None or self.closure == self.expected
        return counts and closed and self.parity and not self.collisions

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "expected": self.expected,
            "enumerated": self.enumerated,
            "distinct": self.distinct,
            "closure": self.closure,
            "parity": self.parity,
            "collisions": [[nf_to_json(a), nf_to_json(b)] for a, b in self.collisions],
            "ok": self.ok,
        }


@lru_cache(maxsize=None)
def _outer_stages(n: int) -> Tuple[Stage, ...]:
    return tuple(enumerate_stages(n))


@lru_cache(maxsize=None)
def _tails(n: int) -> Tuple[Tuple[Tuple[Stage, ...], ...], Tuple[Tableau, ...]]:
    """Stages for widths n-1 down to 1 and their tableaux lifted to n wires."""
    combos = tuple(itertools.product(*(list(enumerate_stages(i)) for i in range(n - 1, 0, -1))))
    tableaux = tuple(
        embed(Tableau.identity(n - 1).then_all([g for s in combo for g in s.gates()]), n)
        for combo in combos
    )
    return combos, tableaux


def _outer_keys(n: int, start: int, stop: int) -> np.ndarray:
    """Packed tableaux for outer stages ``start..stop`` against every tail."""
    _, tails = _tails(n)
    keys = []
    for stage in _outer_stages(n)[start:stop]:
        head = stage_tableau(stage)
        keys.extend(compose(tail, head).packed() for tail in tails)
    return np.array(keys, dtype=np.uint64)


def _check_small(n: int, report: BijectionReport, cap: Optional[int]) -> None:
    seen: Dict[tuple, NormalForm] = {}
    for nf in enumerate_normal_forms(n):
        report.enumerated += 1
        key = fingerprint(nf_to_circuit(nf), cap).key()
        if key in seen:
            report.collisions.append((seen[key], nf))
        else:
            seen[key] = nf
    report.distinct = len(seen)
    closure = bfs_closure(n, cap)
    # Reported as the size of the union so that a form outside the closure shows up.
    report.closure = len(closure | set(seen))


def _check_split(n: int, report: BijectionReport, workers: Optional[int]) -> None:
    # Normal forms differing only in sign are distinct operators, so unsigned
    # forms need pairwise distinct tableaux.
    total = len(_outer_stages(n))
    starts = list(range(0, total, BIJECTION_CHUNK))
    stops = [min(s + BIJECTION_CHUNK, total) for s in starts]
    if workers == 1:
        parts = [_outer_keys(n, s, e) for s, e in zip(starts, stops)]
    else:
        with ProcessPoolExecutor(max_workers=workers or os.cpu_count()) as pool:
            parts = list(pool.map(_outer_keys, [n] * len(starts), starts, stops))
    keys = np.concatenate(parts)
    values, counts = np.unique(keys, return_counts=True)
    report.enumerated = 2 * len(keys)
    report.distinct = 2 * len(values)
    combos, _ = _tails(n)
    outer = _outer_stages(n)
    for value in values[counts > 1][:10]:
        first, second = (int(i) for i in np.nonzero(keys == value)[0][:2])
        forms = []
        for index in (first, second):
            o, t = divmod(index, len(combos))
            forms.append(NormalForm(n, (outer[o],) + combos[t], 1))
        report.collisions.append((forms[0], forms[1]))


def verify_bijection(n: int, workers: Optional[int] = None, cap: Optional[int] = None) -> BijectionReport:
    """Enumerate every normal form on ``n`` wires and check they are distinct.

    Up to two wires the fingerprints are compared against the closure of
    the primitive gates.  At three wires the work is split by outer stage
    across processes and compared as packed tableaux.
    """
    if not 0 <= n <= MAX_BIJECTION_QUBITS:
        raise ValueError(f"Bijection check supports 0..{MAX_BIJECTION_QUBITS} qubits, got {n}")
    report = BijectionReport(n, clifford_order(n), parity=parity_holds(n))
    if n < MAX_BIJECTION_QUBITS:
        _check_small(n, report, cap)
    else:
        _check_split(n, report, workers)
    return report
