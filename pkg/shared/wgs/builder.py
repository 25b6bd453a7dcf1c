"""
shared/wgs/builder.py

Weighted graph states: |+>^N followed by one CP(phi_ab) per edge.

CP gates are diagonal and mutually commute, so the full product is a single
diagonal phase vector over the computational basis; edge order never
matters.
"""
from __future__ import annotations

import logging
from typing import Sequence, Union

import numpy as np

from shared.qsim.channels import apply_channel
from shared.qsim.ops import controlled_phase_diagonal
from shared.qsim.states import DensityMatrix, NoiseSpec, PureState
from shared.wgs.graph import ChainSpec, WeightedGraph

logger = logging.getLogger(__name__)

NoiseArg = Union[NoiseSpec, Sequence[NoiseSpec]]


def plus_state(num_qubits: int) -> PureState:
    dim = 1 << num_qubits
    return PureState(num_qubits, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


def edge_phases(graph: WeightedGraph) -> np.ndarray:
    """Diagonal of prod_e CP_e(phi_e)."""
    diag = np.ones(1 << graph.num_vertices, dtype=np.complex128)
    for e in graph.edges:
        diag = diag * controlled_phase_diagonal(graph.num_vertices, e.a, e.b, e.weight)
    return diag


def build_state(graph: WeightedGraph) -> PureState:
    plus = plus_state(graph.num_vertices)
    return PureState(graph.num_vertices, plus.amplitudes * edge_phases(graph))


def build_uniform_chain(spec: ChainSpec) -> PureState:
    return build_state(spec.graph())


def _per_qubit_noise(noise: NoiseArg, num_qubits: int) -> list[NoiseSpec]:
    if isinstance(noise, NoiseSpec):
        return [noise] * num_qubits
    specs = list(noise)
    if len(specs) != num_qubits:
        raise ValueError(f"Expected {num_qubits} per-qubit noise specs, got {len(specs)}")
    return specs


def build_noisy_state(graph: WeightedGraph, noise: NoiseArg) -> DensityMatrix:
    """
    Noise hits every |+> before the CP gates. A single NoiseSpec is applied
    to all qubits; a sequence gives one spec per qubit (qubit 1 first).
    """
    n = graph.num_vertices
    rho = plus_state(n).to_density()
    for qubit, spec in enumerate(_per_qubit_noise(noise, n), start=1):
        rho = apply_channel(rho, qubit, spec)
    diag = edge_phases(graph)
    logger.debug(f"Noisy WGS built on {n} qubits with {len(graph.edges)} edges")
    return DensityMatrix(n, rho.elements * np.outer(diag, diag.conj()))
