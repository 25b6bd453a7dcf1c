"""
shared/protocol/concentration.py

The concentration protocol on a 1D chain of 2n + 1 qubits:

  1. measure every even site (2, 4, ..., 2n) in its basis
  2. keep the all -1 record and apply R_z[n(pi - phi)] to the last
     surviving qubit; the survivors (1, 3, ..., 2n+1) then hold an
     (n+1)-qubit GHZ state

Every measurement record is enumerated exactly, in canonical order
(site 2 is the most significant outcome, +1 before -1). Failure branches
are returned alongside the success branch.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, replace
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from shared.metrics.fidelity import ghz_state
from shared.optimize.basis import analytic_basis_guess
from shared.qsim.ops import H, I2, S, X, Z, apply_single_qubit_gate, discard_qubit, measure_qubit, rz
from shared.qsim.states import DensityMatrix, MeasurementBasis, PureState, State
from shared.wgs.builder import build_uniform_chain
from shared.wgs.graph import ChainSpec, WeightedGraph, normalize_angle

logger = logging.getLogger(__name__)

PI_TOL = 1e-12
CORRECTION_FIDELITY_TOL = 1e-10


class ProtocolError(ValueError):
    """Raised when the protocol is called on an input it is not defined for."""


@dataclass(frozen=True)
class ProtocolOutcome:
    outcomes: tuple[int, ...]
    probability: float
    post_state: Optional[State]
    corrected: bool = False
    corrections: tuple[str, ...] = ()

    @property
    def succeeded(self) -> bool:
        return all(o == -1 for o in self.outcomes)

    @property
    def label(self) -> str:
        return "".join("-" if o == -1 else "+" for o in self.outcomes) or "(none)"


# ── Measurement cascade ──────────────────────────────────────

def _descend(
    state: State,
    sites: Sequence[int],
    bases: Sequence[MeasurementBasis],
    record: tuple[int, ...],
    probability: float,
) -> Iterator[tuple[tuple[int, ...], float, Optional[State]]]:
    if not sites:
        yield record, probability, state
        return
    for branch in measure_qubit(state, sites[0], bases[0]):
        prob = probability * branch.probability
        if branch.is_null:
            for rest in itertools.product((1, -1), repeat=len(sites) - 1):
                yield record + (branch.outcome,) + rest, 0.0, None
            continue
        yield from _descend(branch.state, sites[1:], bases[1:], record + (branch.outcome,), prob)


def run_concentration(state: State, bases: Sequence[MeasurementBasis]) -> list[ProtocolOutcome]:
    num_qubits = state.num_qubits
    if num_qubits % 2 == 0:
        raise ProtocolError(f"Chain must have an odd number of qubits (2n+1), got {num_qubits}")
    n = (num_qubits - 1) // 2
    if len(bases) != n:
        raise ProtocolError(f"Expected {n} bases for the even sites of a {num_qubits}-qubit chain, got {len(bases)}")

    even_sites = [2 * k for k in range(1, n + 1)]
    results = []
    for record, prob, post in _descend(state, even_sites, list(bases), (), 1.0):
        if post is not None:
            for site in reversed(even_sites):
                post = discard_qubit(post, site)
        results.append(ProtocolOutcome(record, prob, post))

    total = sum(r.probability for r in results)
    logger.debug(f"Enumerated {len(results)} branches on {num_qubits} qubits (total p={total:.15f})")
    return results


def success_outcome(outcomes: Sequence[ProtocolOutcome]) -> ProtocolOutcome:
    return next(o for o in outcomes if o.succeeded)


# ── Bases and correction ─────────────────────────────────────

def uniform_bases(n: int, phi: float) -> list[MeasurementBasis]:
    return [MeasurementBasis.equatorial(phi)] * n


def analytic_bases(graph: WeightedGraph) -> list[MeasurementBasis]:
    """M_phi' on each even site, phi' the mean of its two edge weights."""
    if not graph.is_path() or graph.num_vertices % 2 == 0:
        raise ProtocolError("Protocol bases are defined for chains 1-2-...-(2n+1) only")
    return [
        analytic_basis_guess(graph.weight(k - 1, k), graph.weight(k, k + 1))
        for k in range(2, graph.num_vertices, 2)
    ]


def correction_rotation(n: int, phi: float) -> np.ndarray:
    """R_z[n(pi - phi)]."""
    return rz(n * (math.pi - phi))


def correction_rotation_for(bases: Sequence[MeasurementBasis]) -> np.ndarray:
    """Sum of (pi - lam_k) over the measured sites; equals the uniform formula for lam_k = phi."""
    return rz(sum(math.pi - b.lam for b in bases))


def apply_correction(outcome: ProtocolOutcome, gate: np.ndarray, qubit: Optional[int] = None) -> ProtocolOutcome:
    """Apply the step-2 rotation on one surviving qubit (default: the last one)."""
    if outcome.post_state is None:
        return replace(outcome, corrected=True)
    target = qubit or outcome.post_state.num_qubits
    corrected = apply_single_qubit_gate(outcome.post_state, target, gate)
    return replace(outcome, post_state=corrected, corrected=True)


# ── phi = pi: deterministic conversion ───────────────────────

def _clifford_table() -> list[tuple[str, np.ndarray]]:
    """The 24 single-qubit Cliffords (mod phase) as words in I, X, Z, H, S."""
    generators = [("H", H), ("S", S)]
    table: list[tuple[str, np.ndarray]] = [("I", I2)]
    frontier = [("I", I2)]

    def known(u: np.ndarray) -> bool:
        return any(abs(abs(np.vdot(v, u)) - 2.0) < 1e-9 for _, v in table)

    while frontier:
        nxt = []
        for name, u in frontier:
            for g_name, g in generators:
                w = g @ u
                if not known(w):
                    word = g_name if name == "I" else f"{g_name}.{name}"
                    table.append((word, w))
                    nxt.append((word, w))
        frontier = nxt
    return table


PAULI_CORRECTIONS = [("I", I2), ("X", X), ("Z", Z), ("X.Z", X @ Z)]
CLIFFORD_CORRECTIONS = _clifford_table()
MAX_SEARCH = 20_000


def _search_corrections(state: State, candidates: list[tuple[str, np.ndarray]]) -> Optional[tuple[tuple[str, ...], float]]:
    k = state.num_qubits
    if len(candidates) ** k > MAX_SEARCH:
        return None
    target = ghz_state(k).amplitudes
    best = None
    for combo in itertools.product(candidates, repeat=k):
        # combo[0] acts on qubit 1 (least significant)
        u = np.ones((1, 1), dtype=np.complex128)
        for _, g in combo:
            u = np.kron(g, u)
        if isinstance(state, PureState):
            fid = abs(np.vdot(target, u @ state.amplitudes)) ** 2
        else:
            fid = np.vdot(target, u @ state.elements @ u.conj().T @ target).real
        if best is None or fid > best[1] + 1e-15:
            best = (tuple(name for name, _ in combo), float(fid))
        if fid >= 1.0 - CORRECTION_FIDELITY_TOL:
            return best
    return best


def deterministic_cluster_conversion(n: int, phi: float = math.pi) -> list[ProtocolOutcome]:
    """
    At phi = pi every X-measurement record is correctable to GHZ by single-qubit
    gates. Corrections are searched per branch: Pauli products first, then
    the full single-qubit Clifford set while the search space stays bounded.
    """
    if abs(normalize_angle(phi) - math.pi) > PI_TOL:
        raise ProtocolError(f"Deterministic conversion needs phi = pi exactly, got {phi}")
    spec = ChainSpec(n, math.pi)
    outcomes = run_concentration(build_uniform_chain(spec), uniform_bases(n, math.pi))

    converted = []
    for outcome in outcomes:
        if outcome.post_state is None:
            converted.append(replace(outcome, corrected=True))
            continue
        found = _search_corrections(outcome.post_state, PAULI_CORRECTIONS)
        if found is None or found[1] < 1.0 - CORRECTION_FIDELITY_TOL:
            wider = _search_corrections(outcome.post_state, CLIFFORD_CORRECTIONS)
            if wider is not None and (found is None or wider[1] > found[1]):
                found = wider
        if found is None:
            raise ProtocolError(f"Correction search space too large for n={n}")

        names, fidelity = found
        if fidelity < 1.0 - CORRECTION_FIDELITY_TOL:
            raise ProtocolError(
                f"Branch {outcome.label}: best correction {names} reaches GHZ fidelity {fidelity:.12f} only"
            )
        post = outcome.post_state
        lookup = dict(CLIFFORD_CORRECTIONS + PAULI_CORRECTIONS)
        for qubit, name in enumerate(names, start=1):
            if name != "I":
                post = apply_single_qubit_gate(post, qubit, lookup[name])
        logger.info(f"Branch {outcome.label}: corrections {names} -> GHZ fidelity {fidelity:.12f}")
        converted.append(replace(outcome, post_state=post, corrected=True, corrections=names))
    return converted
