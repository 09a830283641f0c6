"""Independent reference solver for the reduced rate problem.

For a fixed time split ``alpha`` the pair-balance equalities pin the
relay-side fractions to ``mu_bar = cost * mu`` with
``cost_n = a_n / (g b_n)`` and ``g = 2 alpha / (1 - alpha)``, so the
problem collapses to water-filling over ``mu`` under the two linear
budgets ``sum mu <= 1`` and ``sum cost mu <= 1``.  A scan over ``alpha``
plus golden-section refinement completes the solution.

This module shares only the problem coefficients with the augmented
Lagrangian optimizer; the solution path (dual water levels and scalar
bisection) is entirely separate, which is what makes it usable as a
cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ehrelay.auglag import ALPHA_MAX, ALPHA_MIN, ReducedProblem

__all__ = ["OracleSolution", "inner_waterfill", "solve"]

_FEAS_SLACK = 1e-12


@dataclass(frozen=True)
class OracleSolution:
    """Best allocation found by grid search plus refinement."""

    alpha_star: float
    mu_star: np.ndarray
    mu_bar_star: np.ndarray
    rate_star: float
    alpha_grid_profile: tuple[tuple[float, float], ...]


def inner_waterfill(alpha: float, problem: ReducedProblem) -> tuple[np.ndarray, np.ndarray, float]:
    """Optimal power fractions for a fixed time split.

    Maximizes ``sum log2(1 + a mu)`` subject to ``sum mu <= 1`` and
    ``sum cost mu <= 1`` with ``cost_n = a_n (1 - alpha) / (2 alpha b_n)``,
    then recovers ``mu_bar = cost * mu`` so the per-pair SNR balance holds
    exactly by construction.  Subchannels with a zero coefficient on
    either hop are switched off.

    Returns ``(mu, mu_bar, rate_bps)``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    a = problem.a_coeffs
    b = problem.b_coeffs
    n = problem.n_pairs
    g = 2.0 * alpha / (1.0 - alpha)

    ok = (a > 0.0) & (b > 0.0)
    mu = np.zeros(n)
    mu_bar = np.zeros(n)
    if not ok.any():
        return mu, mu_bar, 0.0

    a_ok = a[ok]
    cost = a_ok / (g * b[ok])

    mu_ok = _waterfill_single(a_ok, np.ones(a_ok.size))
    if float(cost @ mu_ok) > 1.0 + _FEAS_SLACK:
        mu_ok = _waterfill_single(a_ok, cost)
        if float(mu_ok.sum()) > 1.0 + _FEAS_SLACK:
            mu_ok = _waterfill_two_budgets(a_ok, cost)

    mu[ok] = mu_ok
    mu_bar[ok] = cost * mu_ok
    weight = (1.0 - alpha) * problem.bandwidth_hz / (2.0 * problem.k_subcarriers)
    rate = weight * float(np.sum(np.log2(1.0 + a_ok * mu_ok)))
    return mu, mu_bar, rate


def solve(problem: ReducedProblem, grid_points: int = 199, refine_tol: float = 1e-6) -> OracleSolution:
    """Grid search over the time split plus golden-section refinement.

    Evaluates :func:`inner_waterfill` on ``grid_points`` uniform values
    of ``alpha``, then refines around the best grid point until the
    bracket is narrower than ``refine_tol``.
    """
    if grid_points < 8:
        raise ValueError("grid_points must be >= 8")
    alphas = np.linspace(ALPHA_MIN, ALPHA_MAX, grid_points)
    profile = []
    rates = np.empty(grid_points)
    for i, al in enumerate(alphas):
        _, _, rate = inner_waterfill(float(al), problem)
        rates[i] = rate
        profile.append((float(al), float(rate)))

    best = int(np.argmax(rates))
    lo = float(alphas[max(0, best - 1)])
    hi = float(alphas[min(grid_points - 1, best + 1)])
    best_alpha, best_rate = _golden_max(
        lambda al: inner_waterfill(al, problem)[2], lo, hi, refine_tol
    )
    if rates[best] > best_rate:
        best_alpha, best_rate = float(alphas[best]), float(rates[best])

    mu, mu_bar, rate = inner_waterfill(best_alpha, problem)
    return OracleSolution(
        alpha_star=best_alpha,
        mu_star=mu,
        mu_bar_star=mu_bar,
        rate_star=rate,
        alpha_grid_profile=tuple(profile),
    )


def _waterfill_single(a: np.ndarray, cost: np.ndarray) -> np.ndarray:
    """Exact water-filling under one budget ``sum cost mu <= 1``.

    Maximizes ``sum ln(1 + a mu)``; the water level over the active set
    has the closed form ``L_k = (1 + sum theta) / k`` with
    ``theta = cost / a`` sorted ascending.
    """
    theta = cost / a
    order = np.argsort(theta, kind="stable")
    theta_s = theta[order]
    ks = np.arange(1, a.size + 1, dtype=float)
    levels = (1.0 + np.cumsum(theta_s)) / ks
    active = levels > theta_s
    k = int(np.nonzero(active)[0][-1]) + 1
    level = float(levels[k - 1])
    mu = np.clip(level / cost - 1.0 / a, 0.0, None)
    mu[order[k:]] = 0.0
    return mu


def _waterfill_two_budgets(a: np.ndarray, cost: np.ndarray) -> np.ndarray:
    """Water-filling with both budgets tight.

    Prices the two budgets with duals ``(p1, p2)`` so that
    ``mu_n = max(0, 1 / (p1 + p2 cost_n) - 1 / a_n)``.  For a given
    ``p2`` the unit budget pins ``p1`` by a scalar bisection; an outer
    bisection on ``p2`` closes the cost budget.  Both residuals are
    monotone in their dual, so the nested bisection is exact to
    floating-point resolution.
    """

    def mu_at(p1: float, p2: float) -> np.ndarray:
        return np.clip(1.0 / (p1 + p2 * cost) - 1.0 / a, 0.0, None)

    def p1_for(p2: float) -> float:
        # Root of sum(mu) = 1 in p1; sum decreases from its p1=0 value.
        if float(mu_at(0.0, p2).sum()) <= 1.0:
            return 0.0
        lo, hi = 0.0, float(a.size) + 1.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if float(mu_at(mid, p2).sum()) > 1.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def cost_usage(p2: float) -> float:
        return float(cost @ mu_at(p1_for(p2), p2))

    lo, hi = 0.0, float(np.max(a / cost)) + 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if cost_usage(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    p2 = 0.5 * (lo + hi)
    return mu_at(p1_for(p2), p2)


def _golden_max(fun, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section maximization on ``[lo, hi]`` to bracket width ``tol``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = fun(x1)
    f2 = fun(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo = x1
            x1, f1 = x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = fun(x2)
        else:
            hi = x2
            x2, f2 = x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = fun(x1)
    if f1 >= f2:
        return x1, f1
    return x2, f2
