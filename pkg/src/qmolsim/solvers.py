"""Classical numerics: eigensolvers, regularized solves, minimizers, FCI oracle.

The generalized eigenproblem uses canonical orthogonalization: overlap
directions with eigenvalue below a trim threshold are discarded before the
ordinary Hermitian solve, and the retained dimension is reported.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .paulis import QubitOperator, qubit_operator_matrix

DEFAULT_TRIM_THRESHOLD = 1e-9
DEFAULT_RIDGE = 1e-8
FD_STEP = 1e-6


class SolverError(RuntimeError):
    """Numerical solve failed (empty subspace, singular system, ...)."""


@dataclass
class GeneralizedEigProblem:
    h: np.ndarray
    s: np.ndarray
    trim_threshold: float = DEFAULT_TRIM_THRESHOLD


def solve_generalized_eig(
    problem: GeneralizedEigProblem,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Solve H c = S c E by canonical orthogonalization.

    Returns (eigenvalues ascending, eigenvectors in the original basis
    as columns, retained dimension).
    """
    h = np.asarray(problem.h, dtype=complex)
    s = np.asarray(problem.s, dtype=complex)
    if h.shape != s.shape or h.shape[0] != h.shape[1]:
        raise ValueError("H and S must be square matrices of equal dimension")
    s_vals, s_vecs = np.linalg.eigh(s)
    if s_vals.min() < -1e-10:
        raise ValueError(f"overlap matrix is not PSD (min eigenvalue {s_vals.min():.3e})")
    keep = s_vals >= problem.trim_threshold
    retained = int(keep.sum())
    if retained == 0:
        raise SolverError("canonical orthogonalization trimmed every direction")
    x = s_vecs[:, keep] / np.sqrt(s_vals[keep])
    h_ortho = x.conj().T @ h @ x
    h_ortho = 0.5 * (h_ortho + h_ortho.conj().T)
    e_vals, e_vecs = np.linalg.eigh(h_ortho)
    return e_vals, x @ e_vecs, retained


def solve_linear_regularized(
    s: np.ndarray, b: np.ndarray, ridge: float = DEFAULT_RIDGE
) -> np.ndarray:
    """Solve (S + ridge*I) alpha = b for Hermitian S."""
    s = np.asarray(s)
    b = np.asarray(b)
    if s.shape[0] != s.shape[1] or s.shape[0] != b.shape[0]:
        raise ValueError("dimension mismatch in linear solve")
    mat = s + ridge * np.eye(s.shape[0], dtype=s.dtype)
    try:
        return np.linalg.solve(mat, b)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"regularized linear solve failed: {exc}") from exc


def fci_oracle(
    h: QubitOperator,
    n_qubits: int,
    n_electrons: int | None = None,
) -> tuple[float, np.ndarray]:
    """Exact ground eigenpair by dense diagonalization (n_qubits <= 12).

    With n_electrons given, the matrix is projected onto the fixed
    particle-number sector first. The returned vector is full length
    2^n_qubits either way.
    """
    if n_qubits > 12:
        raise ValueError("FCI oracle limited to 12 qubits")
    mat = qubit_operator_matrix(h, n_qubits)
    dim = 1 << n_qubits
    if n_electrons is None:
        vals, vecs = np.linalg.eigh(mat)
        return float(vals[0]), vecs[:, 0]
    sector = [j for j in range(dim) if bin(j).count("1") == n_electrons]
    sub = mat[np.ix_(sector, sector)]
    vals, vecs = np.linalg.eigh(sub)
    full = np.zeros(dim, dtype=complex)
    full[sector] = vecs[:, 0]
    return float(vals[0]), full


# ---------------------------------------------------------------------------
# Minimizers
# ---------------------------------------------------------------------------

@dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    n_evals: int
    n_iterations: int
    converged: bool
    message: str = ""


def _finite_difference_gradient(
    f: Callable[[np.ndarray], float], x: np.ndarray, step: float = FD_STEP
) -> tuple[np.ndarray, int]:
    grad = np.empty_like(x)
    for k in range(len(x)):
        shift = np.zeros_like(x)
        shift[k] = step
        grad[k] = (f(x + shift) - f(x - shift)) / (2.0 * step)
    return grad, 2 * len(x)


def minimize(
    f: Callable[[np.ndarray], float],
    x0: Sequence[float],
    method: str = "bfgs",
    tol: float = 1e-6,
    max_iter: int = 200,
    gradient: Callable[[np.ndarray], np.ndarray] | None = None,
) -> MinimizeResult:
    """Minimize a scalar function; 'bfgs' (default) or 'nelder-mead'.

    BFGS convergence: gradient infinity-norm below tol. Nelder--Mead
    convergence: simplex function spread below tol. Every objective
    evaluation is counted, finite-difference gradient calls included.
    """
    x0 = np.asarray(x0, dtype=float)
    if method == "bfgs":
        return _bfgs(f, x0, tol, max_iter, gradient)
    if method in ("nelder-mead", "nm"):
        return _nelder_mead(f, x0, tol, max_iter)
    raise ValueError(f"unknown minimizer '{method}'")


def _bfgs(f, x0, tol, max_iter, gradient) -> MinimizeResult:
    n_evals = 0

    def fval(x):
        nonlocal n_evals
        n_evals += 1
        val = float(f(x))
        if not np.isfinite(val):
            raise SolverError("objective returned a non-finite value")
        return val

    def grad(x):
        nonlocal n_evals
        if gradient is not None:
            return np.asarray(gradient(x), dtype=float)
        g, used = _finite_difference_gradient(f, x, FD_STEP)
        n_evals += used
        return g

    x = x0.copy()
    fx = fval(x)
    g = grad(x)
    h_inv = np.eye(len(x))
    c1, c2 = 1e-4, 0.9

    if len(x) == 0:
        return MinimizeResult(x, fx, n_evals, 0, True)

    for iteration in range(1, max_iter + 1):
        if np.max(np.abs(g)) < tol:
            return MinimizeResult(x, fx, n_evals, iteration - 1, True)
        direction = -h_inv @ g
        slope = float(g @ direction)
        if slope >= 0:  # reset on loss of descent
            h_inv = np.eye(len(x))
            direction = -g
            slope = float(g @ direction)

        # Line search: unit trial, then exact-for-quadratics interpolation,
        # then halving until the Armijo condition holds.
        alpha = 1.0
        f_trial = fval(x + alpha * direction)
        if f_trial > fx + c1 * alpha * slope:
            denom = 2.0 * (f_trial - fx - slope * alpha)
            if denom > 0:
                alpha_q = -slope * alpha * alpha / denom
                if 1e-12 < alpha_q < alpha:
                    alpha = alpha_q
                    f_trial = fval(x + alpha * direction)
        halvings = 0
        while f_trial > fx + c1 * alpha * slope and halvings < 40:
            alpha *= 0.5
            f_trial = fval(x + alpha * direction)
            halvings += 1
        if f_trial > fx + c1 * alpha * slope:
            return MinimizeResult(
                x, fx, n_evals, iteration, False, "line search failed"
            )

        x_new = x + alpha * direction
        g_new = grad(x_new)
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-14:  # curvature condition; skip update otherwise
            rho = 1.0 / sy
            eye = np.eye(len(x))
            left = eye - rho * np.outer(s, y)
            h_inv = left @ h_inv @ left.T + rho * np.outer(s, s)
        x, fx, g = x_new, f_trial, g_new

    converged = bool(np.max(np.abs(g)) < tol)
    return MinimizeResult(
        x, fx, n_evals, max_iter, converged,
        "" if converged else "max_iter exceeded",
    )


def _nelder_mead(f, x0, tol, max_iter) -> MinimizeResult:
    n = len(x0)
    n_evals = 0

    def fval(x):
        nonlocal n_evals
        n_evals += 1
        val = float(f(x))
        if not np.isfinite(val):
            raise SolverError("objective returned a non-finite value")
        return val

    simplex = [x0.copy()]
    for k in range(n):
        vertex = x0.copy()
        vertex[k] += 0.05 if x0[k] == 0 else 0.05 * abs(x0[k]) + 0.05
        simplex.append(vertex)
    values = [fval(v) for v in simplex]

    for iteration in range(1, max_iter + 1):
        order = np.argsort(values)
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        if abs(values[-1] - values[0]) < tol:
            return MinimizeResult(simplex[0], values[0], n_evals, iteration, True)
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        reflected = centroid + (centroid - worst)
        f_ref = fval(reflected)
        if values[0] <= f_ref < values[-2]:
            simplex[-1], values[-1] = reflected, f_ref
        elif f_ref < values[0]:
            expanded = centroid + 2.0 * (centroid - worst)
            f_exp = fval(expanded)
            if f_exp < f_ref:
                simplex[-1], values[-1] = expanded, f_exp
            else:
                simplex[-1], values[-1] = reflected, f_ref
        else:
            contracted = centroid + 0.5 * (worst - centroid)
            f_con = fval(contracted)
            if f_con < values[-1]:
                simplex[-1], values[-1] = contracted, f_con
            else:  # shrink toward the best vertex
                for k in range(1, n + 1):
                    simplex[k] = simplex[0] + 0.5 * (simplex[k] - simplex[0])
                    values[k] = fval(simplex[k])
    return MinimizeResult(
        simplex[0], values[0], n_evals, max_iter, False, "max_iter exceeded"
    )
