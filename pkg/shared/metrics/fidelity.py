"""
shared/metrics/fidelity.py

Fidelity against pure targets, GHZ references and the GHZ orbit under a
single-qubit Z (the +/- relative-sign pair).
"""
from __future__ import annotations

from typing import Union

import numpy as np

from shared.qsim.states import DensityMatrix, PureState, StateError


def ghz_state(num_qubits: int, sign: int = 1) -> PureState:
    """(|0...0> + sign |1...1>) / sqrt(2)."""
    if num_qubits < 1:
        raise StateError(f"GHZ state needs at least one qubit, got {num_qubits}")
    vec = np.zeros(1 << num_qubits, dtype=np.complex128)
    vec[0] = 1.0
    vec[-1] = sign
    return PureState(num_qubits, vec / np.sqrt(2))


def fidelity_with_pure(rho: Union[DensityMatrix, PureState], psi: PureState) -> float:
    """<psi| rho |psi>, clipped to [0, 1]."""
    if rho.num_qubits != psi.num_qubits:
        raise StateError(
            f"Dimension mismatch: state has {rho.num_qubits} qubits, target has {psi.num_qubits}"
        )
    if isinstance(rho, PureState):
        value = abs(np.vdot(psi.amplitudes, rho.amplitudes)) ** 2
    else:
        value = np.vdot(psi.amplitudes, rho.elements @ psi.amplitudes).real
    return float(min(max(value, 0.0), 1.0))


def ghz_orbit_fidelity(rho: Union[DensityMatrix, PureState]) -> float:
    """Best fidelity against GHZ+ and GHZ- on the same register."""
    n = rho.num_qubits
    return max(fidelity_with_pure(rho, ghz_state(n, 1)), fidelity_with_pure(rho, ghz_state(n, -1)))
