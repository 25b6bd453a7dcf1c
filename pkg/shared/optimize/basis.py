"""
shared/optimize/basis.py

Optimizes the single-qubit projective basis (theta, lam) used on the middle
qubit of a 3-qubit chain so that the outer pair ends up as entangled as
possible.

Objective: the larger of the two branch concurrences (ties go to the -1
branch). Search:
  1. coarse grid, theta x lam = 25 x 50, evaluated as one batch
  2. Nelder-Mead refinement (scipy) from the 4 best grid points, plus the
     caller's seed basis when given, to parameter tolerance 1e-7

theta is folded back into [0, pi] inside the objective, (theta, lam) and
(2pi - theta, lam + pi) being the same Bloch point, so the simplex can
cross the poles freely.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize

from shared.metrics.concurrence import concurrence_values, pure_concurrence_values
from shared.qsim.ops import NULL_BRANCH_TOL
from shared.qsim.states import DensityMatrix, MeasurementBasis, PureState, StateError

logger = logging.getLogger(__name__)

GRID_THETA = 25
GRID_LAMBDA = 50
XATOL = 1e-7
FATOL = 1e-13
MULTI_START = 4
MAX_ITER = 4000
TIE_TOL = 1e-12

State3 = Union[PureState, DensityMatrix]


@dataclass(frozen=True)
class OptimizationResult:
    best_basis: MeasurementBasis
    best_concurrence: float
    best_branch: int
    success_probability: float
    minus_branch_probability: float
    evaluations: int


def analytic_basis_guess(phi12: float, phi23: float) -> MeasurementBasis:
    """M_phi' with phi' = (phi12 + phi23) / 2."""
    return MeasurementBasis.equatorial(0.5 * (phi12 + phi23))


# ── Batched branch evaluation ────────────────────────────────

@dataclass(frozen=True, eq=False)
class BranchTable:
    """Per-basis arrays for the +1 and -1 branches (index 0 = +1, 1 = -1)."""
    probabilities: np.ndarray   # (K, 2)
    concurrences: np.ndarray    # (K, 2)


def _fold(theta: np.ndarray, lam: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    theta = np.mod(theta, 2 * math.pi)
    over = theta > math.pi
    theta = np.where(over, 2 * math.pi - theta, theta)
    lam = np.where(over, lam + math.pi, lam)
    return theta, np.mod(lam, 2 * math.pi)


def _basis_vectors(theta: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """(K, 2, 2): [k, 0] = |m+>, [k, 1] = |m->."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * lam)
    plus = np.stack([c + 0j, e * s], axis=-1)
    minus = np.stack([s + 0j, -e * c], axis=-1)
    return np.stack([plus, minus], axis=1)


def branch_table(state: State3, theta, lam) -> BranchTable:
    """Measure qubit 2 of a 3-qubit state in each basis (theta[k], lam[k])."""
    if state.num_qubits != 3:
        raise StateError(f"Basis optimization needs a 3-qubit state, got {state.num_qubits}")
    theta, lam = _fold(np.atleast_1d(np.asarray(theta, float)), np.atleast_1d(np.asarray(lam, float)))
    bras = _basis_vectors(theta, lam).conj()   # (K, 2, 2)

    if isinstance(state, PureState):
        t = state.tensor()                      # (q3, q2, q1)
        out = np.einsum("kob,cba->koca", bras, t).reshape(len(theta), 2, 4)
        probs = np.sum(np.abs(out) ** 2, axis=-1)
        concs = pure_concurrence_values(out)
    else:
        t = state.tensor()                      # (q3, q2, q1, q3', q2', q1')
        out = np.einsum("kob,cbaxyz,koy->kocaxz", bras, t, bras.conj())
        out = out.reshape(len(theta), 2, 4, 4)
        probs = np.real(np.trace(out, axis1=-2, axis2=-1))
        safe = np.where(probs > NULL_BRANCH_TOL, probs, 1.0)
        concs = concurrence_values(out / safe[..., None, None])

    probs = np.clip(probs, 0.0, 1.0)
    concs = np.where(probs > NULL_BRANCH_TOL, concs, 0.0)
    return BranchTable(probs, concs)


def _best_of(table: BranchTable) -> tuple[np.ndarray, np.ndarray]:
    """(best value, branch index) per basis; ties prefer -1 (index 1)."""
    c_plus, c_minus = table.concurrences[:, 0], table.concurrences[:, 1]
    use_minus = c_minus >= c_plus - TIE_TOL
    return np.where(use_minus, c_minus, c_plus), np.where(use_minus, 1, 0)


def basis_concurrence(state: State3, basis: MeasurementBasis) -> float:
    """Objective value (best branch concurrence) at a single basis."""
    best, _ = _best_of(branch_table(state, [basis.theta], [basis.lam]))
    return float(best[0])


# ── Optimizer ────────────────────────────────────────────────

def optimize_basis(
    state: State3,
    seed: Optional[MeasurementBasis] = None,
    grid_theta: int = GRID_THETA,
    grid_lambda: int = GRID_LAMBDA,
    xatol: float = XATOL,
) -> OptimizationResult:
    evaluations = 0

    thetas = np.linspace(0.0, math.pi, grid_theta)
    lams = np.linspace(0.0, 2 * math.pi, grid_lambda, endpoint=False)
    tt, ll = np.meshgrid(thetas, lams, indexing="ij")
    tt, ll = tt.ravel(), ll.ravel()
    grid_best, _ = _best_of(branch_table(state, tt, ll))
    evaluations += len(tt)

    order = np.argsort(-grid_best, kind="stable")[:MULTI_START]
    starts = [(float(tt[i]), float(ll[i])) for i in order]
    if seed is not None:
        starts.insert(0, (seed.theta, seed.lam))

    def objective(x: np.ndarray) -> float:
        best, _ = _best_of(branch_table(state, [x[0]], [x[1]]))
        return -float(best[0])

    best_x, best_val = None, -math.inf
    for x0 in starts:
        res = minimize(
            objective,
            np.array(x0),
            method="Nelder-Mead",
            options={"xatol": xatol, "fatol": FATOL, "maxiter": MAX_ITER},
        )
        evaluations += int(res.nfev)
        if -res.fun > best_val + TIE_TOL:
            best_x, best_val = res.x, -float(res.fun)

    theta, lam = _fold(np.array([best_x[0]]), np.array([best_x[1]]))
    basis = MeasurementBasis(float(theta[0]), float(lam[0]))
    basis = _canonical_labeling(state, basis, seed)

    table = branch_table(state, [basis.theta], [basis.lam])
    value, branch_index = _best_of(table)
    branch = -1 if int(branch_index[0]) == 1 else 1
    result = OptimizationResult(
        best_basis=basis,
        best_concurrence=float(value[0]),
        best_branch=branch,
        success_probability=float(table.probabilities[0, int(branch_index[0])]),
        minus_branch_probability=float(table.probabilities[0, 1]),
        evaluations=evaluations,
    )
    logger.debug(
        f"Optimized basis theta={basis.theta:.6f} lam={basis.lam:.6f} "
        f"C={result.best_concurrence:.9f} branch={branch:+d} evals={evaluations}"
    )
    return result


def _canonical_labeling(state: State3, basis: MeasurementBasis, seed: Optional[MeasurementBasis]) -> MeasurementBasis:
    """
    A basis and its flip are the same measurement with swapped labels.
    With a seed, keep the labeling whose |m+> is closer to the seed's |m+>;
    otherwise keep the labeling in which the best branch is -1.
    """
    flipped = basis.flipped()
    if seed is not None:
        overlap = abs(np.vdot(seed.vector(1), basis.vector(1))) ** 2
        return basis if overlap >= 0.5 else flipped
    _, branch_index = _best_of(branch_table(state, [basis.theta], [basis.lam]))
    return basis if int(branch_index[0]) == 1 else flipped
