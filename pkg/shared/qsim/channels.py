"""
shared/qsim/channels.py

Single-qubit Pauli noise channels in Kraus form:

    depolarizing  E(rho) = (1 - p) rho + p/3 (X rho X + Y rho Y + Z rho Z)
    dephasing     E(rho) = (1 - p) rho + p Z rho Z
"""
import numpy as np

from shared.qsim.ops import I2, X, Y, Z, _apply_local, _check_qubit, _hermitize
from shared.qsim.states import DensityMatrix, NoiseKind, NoiseSpec


def kraus_operators(noise: NoiseSpec) -> list[np.ndarray]:
    p = noise.probability
    if noise.kind is NoiseKind.DEPOLARIZING:
        return [np.sqrt(1.0 - p) * I2] + [np.sqrt(p / 3.0) * P for P in (X, Y, Z)]
    if noise.kind is NoiseKind.DEPHASING:
        return [np.sqrt(1.0 - p) * I2, np.sqrt(p) * Z]
    raise ValueError(f"Unsupported noise kind: {noise.kind}")


def apply_channel(rho: DensityMatrix, qubit: int, noise: NoiseSpec) -> DensityMatrix:
    _check_qubit(rho, qubit)
    if noise.is_trivial:
        return rho
    out = sum(_apply_local(rho, qubit, k) for k in kraus_operators(noise))
    return DensityMatrix(rho.num_qubits, _hermitize(out))
