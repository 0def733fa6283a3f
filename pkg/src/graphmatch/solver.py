"""Relaxed graph-matching solver.

Maximizes f(M) = 1/2 tr(M'A M A~) + lambda tr(M'K) over doubly stochastic
matrices by a projected fixed-point iteration whose projection is an
entrywise softmax followed by Sinkhorn row/column balancing. An outer loop
gradually sharpens the softmax so the iterate escapes flat early stages
before committing to a near-permutation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .discretize import Assignment, hungarian
from .errors import InputError, NumericalError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    alpha: float = 0.5              # fixed-point step fraction in (0, 1]
    lam: float = 1.0                # node-term weight
    beta0: float = 1e-6             # initial softmax sharpness
    beta_r: float = 1.2             # sharpness growth per outer stage
    beta_m: float = 5e-6            # sharpness cap (loop runs while beta < beta_m)
    eps1: float = 1e-4              # fixed-point tolerance, max-abs entry change
    eps2: float = 1e-6              # Sinkhorn tolerance, Frobenius change per sweep
    max_inner: int = 30             # fixed-point iterations per sharpness stage
    sinkhorn_max_iters: int = 1000  # cap on row/column sweeps

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise InputError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.lam < 0:
            raise InputError(f"lambda must be nonnegative, got {self.lam}")
        if self.beta0 <= 0:
            raise InputError(f"beta0 must be positive, got {self.beta0}")
        if self.beta_r <= 1:
            raise InputError(f"beta_r must exceed 1, got {self.beta_r}")
        if self.beta_m <= self.beta0:
            raise InputError(f"beta_m must exceed beta0, got {self.beta_m} <= {self.beta0}")
        if self.eps1 <= 0 or self.eps2 <= 0:
            raise InputError("tolerances must be positive")
        if self.max_inner < 1 or self.sinkhorn_max_iters < 1:
            raise InputError("iteration caps must be at least 1")


# Sharpness presets for raw-pixel adjacency at the two image scales the
# defaults were tuned for.
PRESET_LARGE = {"beta0": 1e-6, "beta_m": 5e-6}
PRESET_SMALL = {"beta0": 1e-5, "beta_m": 5e-5}


@dataclass
class SolveTrace:
    """Diagnostics from one solve."""

    outer_stages: int = 0
    inner_iterations: list[int] = field(default_factory=list)
    converged: list[bool] = field(default_factory=list)
    objective_history: list[float] = field(default_factory=list)
    final_beta: float = 0.0
    max_marginal_deviation: float = 0.0  # worst |row/col sum - 1| seen on the slack iterate


def objective(m: np.ndarray, a1: np.ndarray, a2: np.ndarray,
              affinity: np.ndarray, lam: float) -> float:
    """1/2 tr(M'A1 M A2) + lambda tr(M'K)."""
    m = np.asarray(m, dtype=np.float64)
    _check_dims(m, a1, a2, affinity)
    edge = 0.5 * np.trace(m.T @ a1 @ m @ a2)
    node = lam * np.sum(m * affinity)
    return float(edge + node)


def gradient(m: np.ndarray, a1: np.ndarray, a2: np.ndarray,
             affinity: np.ndarray, lam: float) -> np.ndarray:
    """A1 M A2 + lambda K, valid for symmetric adjacencies."""
    m = np.asarray(m, dtype=np.float64)
    _check_dims(m, a1, a2, affinity)
    return a1 @ m @ a2 + lam * affinity


def softmax_sinkhorn(n: np.ndarray, beta: float, eps2: float = 1e-6,
                     max_iters: int = 1000) -> np.ndarray:
    """Project a square matrix to a doubly stochastic one.

    Exponentiates entrywise with sharpness beta (max-subtracted, so overflow
    never occurs and any additive constant in the input cancels), then
    alternates row and column normalization until the Frobenius change of a
    full sweep drops below eps2.
    """
    n = np.asarray(n, dtype=np.float64)
    if n.ndim != 2 or n.shape[0] != n.shape[1]:
        raise InputError("softmax_sinkhorn needs a square matrix")
    if not np.all(np.isfinite(n)):
        raise InputError("softmax_sinkhorn input contains non-finite entries")
    if beta <= 0:
        raise InputError(f"beta must be positive, got {beta}")
    current = np.exp(beta * (n - n.max()))
    for _ in range(max_iters):
        previous = current
        current = current / current.sum(axis=1, keepdims=True)
        current = current / current.sum(axis=0, keepdims=True)
        if np.linalg.norm(current - previous) < eps2:
            break
    deviation = max(
        np.abs(current.sum(axis=1) - 1.0).max(),
        np.abs(current.sum(axis=0) - 1.0).max(),
    )
    if deviation > eps2:
        # Near-degenerate inputs (very large beta) make plain sweeps stall with
        # marginals still off; a few Newton steps on the scaling vectors finish
        # the balancing without breaking positivity.
        current = _newton_balance(current, tol=eps2 * 1e-3)
    return current


def _newton_balance(p: np.ndarray, tol: float, max_steps: int = 100) -> np.ndarray:
    """Drive row/column sums of a positive matrix to 1 by damped Newton steps
    on log scaling vectors. Positivity is preserved exactly."""
    m = p.shape[0]
    for _ in range(max_steps):
        rows = p.sum(axis=1)
        cols = p.sum(axis=0)
        if max(np.abs(rows - 1.0).max(), np.abs(cols - 1.0).max()) < tol:
            break
        jac = np.eye(2 * m)
        # the 1/(2m) shift removes the scaling-gauge null direction
        jac[:m, m:] = p / rows[:, None] + 1.0 / (2 * m)
        jac[m:, :m] = (p / cols[None, :]).T + 1.0 / (2 * m)
        rhs = -np.concatenate([np.log(rows), np.log(cols)])
        try:
            step = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, rhs, rcond=None)[0]
        step = np.clip(step, -1.0, 1.0)
        p = p * np.exp(step[:m])[:, None] * np.exp(step[m:])[None, :]
    return p


def fixed_point_step(n: np.ndarray, grad: np.ndarray, alpha: float, beta: float,
                     eps2: float = 1e-6, max_iters: int = 1000) -> np.ndarray:
    """(1 - alpha) N + alpha P(grad); stays doubly stochastic by convexity."""
    n = np.asarray(n, dtype=np.float64)
    if n.shape != grad.shape:
        raise InputError(f"iterate shape {n.shape} does not match gradient shape {grad.shape}")
    return (1.0 - alpha) * n + alpha * softmax_sinkhorn(grad, beta, eps2, max_iters)


def gsspf(
    a1: np.ndarray,
    a2: np.ndarray,
    affinity: np.ndarray,
    config: SolverConfig | None = None,
    on_iterate=None,
) -> tuple[Assignment, SolveTrace]:
    """Graduated softmax-Sinkhorn projected fixed-point solve.

    Requires n1 >= n2 >= 2 (callers swap arguments and un-swap the result).
    When n1 > n2 the gradient occupies the top-left block of an n1 x n1 slack
    matrix so the Sinkhorn projection is square; the iterate lives on the
    slack matrix and only its top-left block drives the gradient and the
    final discretization. on_iterate, if given, receives the full slack
    iterate after every inner step.
    """
    cfg = config or SolverConfig()
    a1 = np.asarray(a1, dtype=np.float64)
    a2 = np.asarray(a2, dtype=np.float64)
    affinity = np.asarray(affinity, dtype=np.float64)
    n1, n2 = affinity.shape
    if n2 < 2:
        raise InputError(f"smaller graph must have at least 2 nodes, got {n2}")
    if n1 < n2:
        raise InputError(f"gsspf requires n1 >= n2, got {n1} < {n2}")
    for name, adj, size in (("a1", a1, n1), ("a2", a2, n2)):
        if adj.shape != (size, size):
            raise InputError(f"{name} must be {size}x{size}, got {adj.shape}")
        if not np.allclose(adj, adj.T, atol=1e-9):
            raise InputError(f"{name} is not symmetric")

    iterate = np.full((n1, n1), 1.0 / n1)  # uniform barycenter start
    slack = np.zeros((n1, n1))
    trace = SolveTrace()
    beta = cfg.beta0
    while beta < cfg.beta_m:
        converged = False
        inner = 0
        for inner in range(1, cfg.max_inner + 1):
            block = iterate[:, :n2]
            grad = a1 @ block @ a2 + cfg.lam * affinity
            slack[:] = 0.0
            slack[:, :n2] = grad
            projected = softmax_sinkhorn(slack, beta, cfg.eps2, cfg.sinkhorn_max_iters)
            new_iterate = (1.0 - cfg.alpha) * iterate + cfg.alpha * projected
            if not np.all(np.isfinite(new_iterate)):
                raise NumericalError(
                    f"non-finite iterate at stage {trace.outer_stages + 1}, "
                    f"inner iteration {inner}, beta={beta:g}"
                )
            delta = np.abs(new_iterate - iterate).max()
            iterate = new_iterate
            deviation = max(
                np.abs(iterate.sum(axis=0) - 1.0).max(),
                np.abs(iterate.sum(axis=1) - 1.0).max(),
            )
            trace.max_marginal_deviation = max(trace.max_marginal_deviation, deviation)
            trace.objective_history.append(
                objective(iterate[:, :n2], a1, a2, affinity, cfg.lam)
            )
            if on_iterate is not None:
                on_iterate(iterate)
            if delta < cfg.eps1:
                converged = True
                break
        trace.outer_stages += 1
        trace.inner_iterations.append(inner)
        trace.converged.append(converged)
        trace.final_beta = beta
        beta *= cfg.beta_r

    assignment = hungarian(iterate[:, :n2])
    return assignment, trace


def sharpness_scale_hint(a1, a2, affinity, config: SolverConfig) -> float:
    """beta0 times the gradient magnitude at the uniform start.

    Values far outside [1e-3, 1e2] mean the softmax is effectively flat or a
    hard max; the CLI warns in that case.
    """
    n1, n2 = np.asarray(affinity).shape
    uniform = np.full((n1, n2), 1.0 / max(n1, n2))
    grad = gradient(uniform, a1, a2, affinity, config.lam)
    return float(config.beta0 * np.abs(grad).max())


def _check_dims(m, a1, a2, affinity):
    n1, n2 = m.shape
    if a1.shape != (n1, n1) or a2.shape != (n2, n2) or affinity.shape != (n1, n2):
        raise InputError(
            f"dimension mismatch: M {m.shape}, A1 {a1.shape}, A2 {a2.shape}, K {affinity.shape}"
        )
