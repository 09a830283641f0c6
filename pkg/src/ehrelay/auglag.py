"""Augmented Lagrangian penalty optimizer for the reduced rate problem.

After the energy beam and the rank-ordered pairing are fixed, maximizing
the end-to-end rate reduces to choosing the time split ``alpha`` and the
per-subchannel power fractions ``mu`` (source) and ``mu_bar`` (relay)
under two unit budgets and one SNR-balance equality per pair.  The
inequality budgets are turned into equalities with slack variables
``s1, s2``; violations are driven to zero by an augmented Lagrangian
outer loop with per-constraint multipliers and penalties:

* solve the penalized subproblem,
* stop when the violation norm is small enough,
* grow the penalty of every constraint whose violation did not shrink
  by a factor of four, then step the multipliers.

The primal vector is laid out as ``[alpha, mu (n), mu_bar (n), s1, s2]``
and the constraint vector as ``[budget1, budget2, pair 0 .. pair n-1]``.

The penalized subproblem mixes O(1) budget terms with SNR-scaled pair
terms, which makes plain projected gradient over the full vector
hopelessly ill-conditioned.  :func:`solve_subproblem` therefore runs a
spectral projected gradient over ``(alpha, mu)`` only, recovering
``(mu_bar, s1, s2)`` at every trial point by exact partial minimization
(closed-form for the slacks, an exact piecewise-linear scalar solve for
``mu_bar``).  This is still a first-order method; the line search is
Armijo backtracking by halving.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ehrelay.system import Allocation, Pairing

__all__ = [
    "ALPHA_MAX",
    "ALPHA_MIN",
    "AlpfResult",
    "AlpfState",
    "ReducedProblem",
    "SubproblemResult",
    "default_initial_point",
    "optimize",
    "pack_point",
    "penalty_gradient",
    "penalty_value",
    "rate_of_point",
    "solve_subproblem",
    "unpack_point",
    "update_multipliers",
    "update_penalties",
    "violation",
]

# Box clamp keeping the time split away from the singular endpoints.
ALPHA_MIN = 1e-4
ALPHA_MAX = 1.0 - 1e-4

_LN2 = float(np.log(2.0))
_ARMIJO = 1e-4
_MAX_HALVINGS = 60


@dataclass(frozen=True)
class ReducedProblem:
    """Coefficients of the reduced rate problem over paired subchannels.

    ``a_coeffs[n]`` is the hop-1 SNR per unit power fraction and
    ``b_coeffs[n]`` the hop-2 SNR per unit power fraction divided by the
    time-split factor ``2 alpha / (1 - alpha)``.  Entries are paired by
    index (rank-ordered pairing applied beforehand).
    """

    a_coeffs: np.ndarray
    b_coeffs: np.ndarray
    bandwidth_hz: float
    k_subcarriers: int

    def __post_init__(self):
        a = np.asarray(self.a_coeffs, dtype=float)
        b = np.asarray(self.b_coeffs, dtype=float)
        object.__setattr__(self, "a_coeffs", a)
        object.__setattr__(self, "b_coeffs", b)
        if a.ndim != 1 or a.shape != b.shape or a.size < 1:
            raise ValueError("a_coeffs and b_coeffs must be equal-length 1-D arrays")
        if a.min() < 0 or b.min() < 0:
            raise ValueError("SNR coefficients must be nonnegative")
        if int(self.k_subcarriers) < 1:
            raise ValueError("k_subcarriers must be >= 1")
        if not self.bandwidth_hz > 0:
            raise ValueError("bandwidth_hz must be > 0")

    @property
    def n_pairs(self) -> int:
        return int(self.a_coeffs.size)


@dataclass
class AlpfState:
    """Mutable optimizer iterate: primal point, multipliers, penalties."""

    x: np.ndarray
    nu: np.ndarray
    sigma: np.ndarray
    iter: int = 0
    violation: float = np.inf


@dataclass(frozen=True)
class SubproblemResult:
    """Outcome of one penalized subproblem solve.

    ``residual`` is the constraint violation at ``x`` in the elimination's
    cancellation-free form; at SNR-scale coefficients it is far more
    accurate than re-deriving the pair balances by subtraction.
    """

    x: np.ndarray
    residual: np.ndarray
    iterations: int
    stalled: bool


@dataclass(frozen=True)
class AlpfResult:
    """Converged (or best-effort) allocation plus a convergence report."""

    allocation: Allocation
    rate_bps: float
    converged: bool
    outer_iterations: int
    inner_iterations: int
    final_violation: float
    final_nu: np.ndarray
    final_sigma: np.ndarray
    stalled: bool

    def report_text(self) -> str:
        lines = [
            f"converged: {self.converged}",
            f"outer_iterations: {self.outer_iterations}",
            f"inner_iterations: {self.inner_iterations}",
            f"final_violation: {self.final_violation!r}",
            f"rate_bps: {self.rate_bps!r}",
            f"alpha: {self.allocation.alpha!r}",
            "final_penalties: " + " ".join(repr(float(s)) for s in self.final_sigma),
            "final_multipliers: " + " ".join(repr(float(v)) for v in self.final_nu),
        ]
        if self.stalled:
            lines.append("note: inner line search stalled at least once")
        return "\n".join(lines)


def pack_point(alpha: float, mu, mu_bar, s1: float, s2: float) -> np.ndarray:
    """Flatten the primal variables into a single vector."""
    mu = np.asarray(mu, dtype=float)
    mu_bar = np.asarray(mu_bar, dtype=float)
    return np.concatenate([[float(alpha)], mu, mu_bar, [float(s1), float(s2)]])


def unpack_point(x: np.ndarray, n_pairs: int):
    """Inverse of :func:`pack_point`."""
    alpha = float(x[0])
    mu = x[1 : 1 + n_pairs]
    mu_bar = x[1 + n_pairs : 1 + 2 * n_pairs]
    s1 = float(x[1 + 2 * n_pairs])
    s2 = float(x[2 + 2 * n_pairs])
    return alpha, mu, mu_bar, s1, s2


def default_initial_point(problem: ReducedProblem) -> np.ndarray:
    """Standard starting point: even split, small positive slacks."""
    n = problem.n_pairs
    return pack_point(0.5, np.full(n, 1.0 / n), np.full(n, 1.0 / n), 0.05, 0.05)


def violation(x: np.ndarray, problem: ReducedProblem) -> np.ndarray:
    """Constraint residuals ``[budget1, budget2, pair balances...]``.

    Budget residuals are ``sum + slack - 1``; each pair residual is the
    hop-1 SNR minus the hop-2 SNR of that pair.
    """
    alpha, mu, mu_bar, s1, s2 = unpack_point(x, problem.n_pairs)
    g = _duty_ratio(alpha)
    c1 = mu.sum() + s1 - 1.0
    c2 = mu_bar.sum() + s2 - 1.0
    pairs = problem.a_coeffs * mu - g * problem.b_coeffs * mu_bar
    return np.concatenate([[c1, c2], pairs])


def penalty_value(x: np.ndarray, nu: np.ndarray, sigma: np.ndarray, problem: ReducedProblem) -> float:
    """Augmented Lagrangian penalty function (to be minimized).

    Objective part is the negated rate ``(alpha - 1) B / (2K) * sum
    log2(1 + a mu)``; each constraint contributes ``-nu c + sigma c^2 / 2``.

    Raises:
        ValueError: at ``alpha >= 1`` where the time-split factor blows up.
    """
    alpha, mu, _, _, _ = unpack_point(x, problem.n_pairs)
    if alpha >= 1.0:
        raise ValueError("alpha must be < 1")
    c = violation(x, problem)
    obj = _objective_prefactor(alpha, problem) * float(np.sum(np.log2(1.0 + problem.a_coeffs * mu)))
    return obj + float(np.sum(-nu * c + 0.5 * sigma * c * c))


def penalty_gradient(x: np.ndarray, nu: np.ndarray, sigma: np.ndarray, problem: ReducedProblem) -> np.ndarray:
    """Analytic gradient of :func:`penalty_value` w.r.t. the primal vector.

    The ``alpha`` component collects both the objective prefactor and the
    chain term of the time-split factor, whose derivative is
    ``2 / (1 - alpha)^2``.
    """
    n = problem.n_pairs
    alpha, mu, mu_bar, _, _ = unpack_point(x, n)
    if alpha >= 1.0:
        raise ValueError("alpha must be < 1")
    a = problem.a_coeffs
    b = problem.b_coeffs
    g = _duty_ratio(alpha)
    c = violation(x, problem)
    price = -nu + sigma * c  # d(penalty terms)/dc, per constraint
    p1, p2 = price[0], price[1]
    p_pair = price[2:]

    scale = problem.bandwidth_hz / (2.0 * problem.k_subcarriers)
    grad = np.zeros_like(x)
    grad[0] = scale * float(np.sum(np.log2(1.0 + a * mu))) + float(
        np.sum(p_pair * (-_duty_ratio_deriv(alpha) * b * mu_bar))
    )
    grad[1 : 1 + n] = (alpha - 1.0) * scale / _LN2 * a / (1.0 + a * mu) + p1 + p_pair * a
    grad[1 + n : 1 + 2 * n] = p2 - p_pair * g * b
    grad[1 + 2 * n] = p1
    grad[2 + 2 * n] = p2
    return grad


def update_multipliers(nu: np.ndarray, sigma: np.ndarray, violation_new: np.ndarray) -> np.ndarray:
    """Multiplier step: each ``nu`` moves by ``-sigma * c`` of its constraint."""
    return nu - sigma * violation_new


def update_penalties(
    sigma: np.ndarray,
    violation_new: np.ndarray,
    violation_old: np.ndarray,
    outer_iter: int,
) -> np.ndarray:
    """Per-constraint penalty growth on insufficient violation decrease.

    A penalty is kept when ``|c_new| <= |c_old| / 4`` and otherwise grows
    to ``max(10 sigma, k^2)`` where ``k`` is the 1-based outer iteration.
    """
    if outer_iter < 1:
        raise ValueError("outer_iter must be >= 1")
    keep = np.abs(violation_new) <= 0.25 * np.abs(violation_old)
    grown = np.maximum(10.0 * sigma, float(outer_iter) ** 2)
    return np.where(keep, sigma, grown)


def solve_subproblem(
    state: AlpfState,
    problem: ReducedProblem,
    inner_tol: float,
    max_inner_iters: int,
) -> SubproblemResult:
    """Approximately minimize the penalty over the box.

    Projected gradient over ``(alpha, mu)`` with per-coordinate diagonal
    curvature scaling and Armijo backtracking (halving from trial step
    1.0).  ``(mu_bar, s1, s2)`` are restored by exact partial
    minimization at every trial point, so the returned point never has a
    larger penalty value than the input point.  Terminates when the
    projected-gradient norm drops below ``inner_tol``, when any further
    descent falls below double-precision resolution of the penalty
    value, or at the iteration cap; a genuinely failed line search
    returns the best point found, flagged.
    """
    n = problem.n_pairs
    nu, sigma = state.nu, state.sigma
    z = _project(np.concatenate([[state.x[0]], state.x[1 : 1 + n]]))
    point = _assemble(z, nu, sigma, problem)

    stalled = False
    iterations = 0
    for _ in range(max_inner_iters):
        grad = point.gradient
        pg = z - _project(z - grad)
        if float(np.max(np.abs(pg))) <= inner_tol:
            break
        direction = -grad * _inverse_curvature(grad, point.curvature)
        t = 1.0
        accepted = False
        at_value_floor = False
        for _ in range(_MAX_HALVINGS):
            z_new = _project(z + t * direction)
            decrease = float(grad @ (z_new - z))
            if decrease >= 0.0:
                # Projection produced no usable descent direction at this
                # step length; shrink and retry.
                t *= 0.5
                continue
            if -decrease <= 1e-14 * (1.0 + abs(point.value)):
                # Any remaining descent is below the double-precision
                # resolution of the penalty value: the subproblem is solved
                # as accurately as the arithmetic allows.
                at_value_floor = True
                break
            point_new = _assemble(z_new, nu, sigma, problem)
            if point_new.value <= point.value + _ARMIJO * decrease:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            stalled = not at_value_floor
            break
        iterations += 1
        z, point = z_new, point_new
    return SubproblemResult(
        x=point.x, residual=point.residual.copy(), iterations=iterations, stalled=stalled
    )


def _inverse_curvature(grad: np.ndarray, curvature: np.ndarray) -> np.ndarray:
    """Diagonal step scaling from curvature estimates.

    Coordinates with no measured curvature fall back to the largest seen
    (conservative small steps); the time-split coordinate is additionally
    limited to moves of 0.25 per iteration to keep it off the clamps.
    """
    cap = float(curvature.max())
    if cap <= 0.0:
        return np.ones_like(grad)
    floor = cap * 1e-12
    h = np.maximum(curvature, floor)
    # Trust limit on the time split.
    h[0] = max(h[0], abs(grad[0]) / 0.25)
    return 1.0 / h


def optimize(
    problem: ReducedProblem,
    init: np.ndarray | None = None,
    eps: float = 1e-6,
    max_outer_iters: int = 100,
    max_inner_iters: int = 5000,
    update_multipliers_first: bool = False,
) -> AlpfResult:
    """Run the full augmented Lagrangian loop.

    Each outer iteration solves the penalized subproblem warm-started at
    the previous point, stops if the violation norm is at most ``eps``,
    and otherwise updates penalties then multipliers.  The multiplier
    step always uses the penalties that were in force during the
    subproblem solve, so ``update_multipliers_first`` only swaps the
    bookkeeping order of the two updates (exposed for experimentation).

    Returns the allocation with slacks stripped plus a convergence
    report; a run that exhausts ``max_outer_iters`` is returned with
    ``converged=False`` and its final violation.
    """
    n = problem.n_pairs
    x = default_initial_point(problem) if init is None else np.asarray(init, dtype=float).copy()
    if x.shape != (2 * n + 3,):
        raise ValueError(f"init must have length {2 * n + 3}")
    if not ALPHA_MIN <= x[0] <= ALPHA_MAX or np.min(x[1:]) < 0.0:
        raise ValueError("init must lie inside the box")

    state = AlpfState(x=x, nu=np.zeros(n + 2), sigma=np.ones(n + 2))
    c_prev = violation(x, problem)
    state.violation = float(np.max(np.abs(c_prev)))

    converged = False
    stalled = False
    total_inner = 0
    outer_used = 0
    for k in range(1, max_outer_iters + 1):
        # Violation-proportional tolerance, capped: a loose early tolerance
        # lets the subproblem exit at non-stationary points whose violation
        # happens to be small, which derails the multiplier updates.
        inner_tol = max(1e-8, 0.1 * min(float(np.max(np.abs(c_prev))), 1e-2))
        sub = solve_subproblem(state, problem, inner_tol, max_inner_iters)
        total_inner += sub.iterations
        stalled = stalled or sub.stalled
        c_new = sub.residual
        state.x = sub.x
        state.iter = k
        state.violation = float(np.max(np.abs(c_new)))
        outer_used = k
        if state.violation <= eps:
            converged = True
            break
        sigma_used = state.sigma.copy()
        if update_multipliers_first:
            state.nu = update_multipliers(state.nu, sigma_used, c_new)
            state.sigma = update_penalties(state.sigma, c_new, c_prev, k)
        else:
            state.sigma = update_penalties(state.sigma, c_new, c_prev, k)
            state.nu = update_multipliers(state.nu, sigma_used, c_new)
        c_prev = c_new

    alpha, mu, mu_bar, _, _ = unpack_point(state.x, n)
    mu = np.clip(mu, 0.0, None)
    mu_bar = np.clip(mu_bar, 0.0, None)
    # The convergence tolerance allows budget overshoot up to eps; rescale
    # so the reported allocation is strictly feasible.
    mu = mu / max(1.0, mu.sum())
    mu_bar = mu_bar / max(1.0, mu_bar.sum())
    allocation = Allocation(
        alpha=alpha,
        mu=mu,
        mu_bar=mu_bar,
        pairing=Pairing(perm=tuple(range(n))),
    )
    return AlpfResult(
        allocation=allocation,
        rate_bps=rate_of_point(problem, alpha, mu, mu_bar),
        converged=converged,
        outer_iterations=outer_used,
        inner_iterations=total_inner,
        final_violation=state.violation,
        final_nu=state.nu.copy(),
        final_sigma=state.sigma.copy(),
        stalled=stalled,
    )


def rate_of_point(problem: ReducedProblem, alpha: float, mu, mu_bar) -> float:
    """End-to-end rate in bit/s: per pair the minimum of the hop rates."""
    mu = np.asarray(mu, dtype=float)
    mu_bar = np.asarray(mu_bar, dtype=float)
    g = _duty_ratio(alpha)
    r1 = np.log2(1.0 + problem.a_coeffs * mu)
    r2 = np.log2(1.0 + g * problem.b_coeffs * mu_bar)
    w = (1.0 - alpha) * problem.bandwidth_hz / (2.0 * problem.k_subcarriers)
    return float(w * np.sum(np.minimum(r1, r2)))


def _duty_ratio(alpha: float) -> float:
    if alpha >= 1.0:
        raise ValueError("alpha must be < 1")
    return 2.0 * alpha / (1.0 - alpha)


def _duty_ratio_deriv(alpha: float) -> float:
    return 2.0 / (1.0 - alpha) ** 2


def _objective_prefactor(alpha: float, problem: ReducedProblem) -> float:
    return (alpha - 1.0) * problem.bandwidth_hz / (2.0 * problem.k_subcarriers)


def _project(z: np.ndarray) -> np.ndarray:
    out = z.copy()
    out[0] = min(ALPHA_MAX, max(ALPHA_MIN, out[0]))
    np.clip(out[1:], 0.0, None, out=out[1:])
    return out


@dataclass(frozen=True)
class _ReducedPoint:
    """Eliminated point with cancellation-free residuals and prices.

    ``residual`` is the constraint vector and ``price`` the per-constraint
    quantity ``-nu + sigma * c``, both derived from the elimination's
    stationarity conditions rather than recomputed by subtraction.  At
    SNR-scale coefficients the direct difference ``a mu - g b mu_bar``
    loses all significant digits once the pair penalties grow, which
    turns numerically computed gradients into noise; the analytic forms
    stay exact.

    ``value`` is the penalty value at ``x``; ``curvature`` holds
    per-coordinate second-derivative estimates of the reduced function
    over ``(alpha, mu)``, used as a diagonal step scaling: the
    coordinates mix curvature scales spanning many orders of magnitude,
    which defeats any single-step-size gradient scheme.
    """

    x: np.ndarray
    residual: np.ndarray
    price: np.ndarray
    value: float
    gradient: np.ndarray
    curvature: np.ndarray


def _assemble(z: np.ndarray, nu: np.ndarray, sigma: np.ndarray, problem: ReducedProblem) -> _ReducedPoint:
    """Eliminate ``(mu_bar, s1, s2)`` at fixed ``z = (alpha, mu)``.

    The slack of budget 1 separates into a clipped affine expression.
    The ``mu_bar`` block minimizes a strictly convex quadratic whose
    stationarity reduces to one scalar equation in the budget-2 price;
    that equation is piecewise linear and solved exactly by a breakpoint
    sweep.  Residuals, prices, the penalty value, its reduced gradient
    and the diagonal curvature all fall out of the same intermediates.

    Curvature terms: the objective's own log curvature; the budget-1
    penalty (weighted by the active count so one collective step closes
    a rank-one residual exactly); the clipped-pair chain ``sigma a^2``;
    and the budget-2 price response, damped by ``1 + sigma2 * k_resp``
    and weighted by the summed sensitivities for the same rank-one
    reason.  Underestimates are guarded by the line search.
    """
    n = problem.n_pairs
    alpha = float(z[0])
    mu = z[1:]
    a = problem.a_coeffs
    b = problem.b_coeffs
    nu_pair = nu[2:]
    sig_pair = sigma[2:]
    sig1 = float(sigma[0])
    sig2 = float(sigma[1])
    scale = problem.bandwidth_hz / (2.0 * problem.k_subcarriers)

    # Budget 1: slack absorbs everything up to the multiplier shift.
    mu_sum = float(mu.sum())
    s1 = 1.0 + nu[0] / sig1 - mu_sum
    if s1 > 0.0:
        c1 = nu[0] / sig1
        p1 = 0.0
    else:
        s1 = 0.0
        c1 = mu_sum - 1.0
        p1 = -nu[0] + sig1 * c1

    g = 2.0 * alpha / (1.0 - alpha)
    d = g * b
    a_mu = a * mu
    q = a_mu - nu_pair / sig_pair
    r = 1.0 + nu[1] / sig2

    live = d > 0.0
    d_safe = np.where(live, d, 1.0)
    mu_bar = np.where(live, np.maximum(q, 0.0) / d_safe, 0.0)
    total = float(mu_bar.sum())

    k_resp = 0.0
    t2 = 0.0
    if total <= r:
        s2 = max(0.0, r - total)
    else:
        # Positive budget-2 price t solving t = sig2 * (sum mu_bar(t) - r).
        act = live & (q > 0.0)
        qd = mu_bar[act]  # value at t = 0
        slope = 1.0 / (sig_pair[act] * d[act] ** 2)  # -d mu_bar / d t
        tau = qd / slope  # price at which this pair's mu_bar reaches 0
        order = np.argsort(tau)
        tau_s = tau[order]
        suf_q = np.concatenate([np.cumsum(qd[order][::-1])[::-1], [0.0]])
        suf_k = np.concatenate([np.cumsum(slope[order][::-1])[::-1], [0.0]])
        lo = 0.0
        found = False
        for i in range(tau_s.size + 1):
            hi = float(tau_s[i]) if i < tau_s.size else np.inf
            cand = sig2 * (suf_q[i] - r) / (1.0 + sig2 * suf_k[i])
            if lo - 1e-300 <= cand <= hi:
                t2 = cand
                k_resp = float(suf_k[i])
                found = True
                break
            lo = hi
        if not found:  # pragma: no cover - the sweep is exhaustive
            raise RuntimeError("price sweep failed to bracket the budget-2 price")
        bar = np.zeros(n)
        bar[act] = np.maximum(qd - slope * t2, 0.0)
        mu_bar = bar
        s2 = 0.0

    if s2 > 0.0:
        c2 = nu[1] / sig2
        p2 = 0.0
    else:
        c2 = (nu[1] + t2) / sig2 if t2 > 0.0 else float(mu_bar.sum()) - 1.0
        p2 = -nu[1] + sig2 * c2

    # Pair residuals: where mu_bar is interior its stationarity gives the
    # residual exactly; where it is clipped to zero the residual is the
    # plain product a mu (no cancellation either way).
    interior = mu_bar > 0.0
    c_pair = np.where(interior, nu_pair / sig_pair + t2 / (sig_pair * d_safe), a_mu)
    p_pair = np.where(interior, t2 / d_safe, -nu_pair + sig_pair * a_mu)

    # Value, gradient and curvature share the intermediates.
    one_amu = 1.0 + a_mu
    log_sum = float(np.sum(np.log2(one_amu)))
    value = (
        (alpha - 1.0) * scale * log_sum
        + (-nu[0] * c1 + 0.5 * sig1 * c1 * c1)
        + (-nu[1] * c2 + 0.5 * sig2 * c2 * c2)
        + float(np.sum(-nu_pair * c_pair + 0.5 * sig_pair * c_pair * c_pair))
    )

    g1 = 2.0 / (1.0 - alpha) ** 2
    b_bar = b * mu_bar
    grad = np.empty(n + 1)
    grad[0] = scale * log_sum - g1 * float(np.sum(p_pair * b_bar))
    grad[1:] = (alpha - 1.0) * scale / _LN2 * a / one_amu + p1 + p_pair * a

    h_mu = (1.0 - alpha) * scale / _LN2 * (a / one_amu) ** 2
    if s1 <= 0.0:
        h_mu = h_mu + sig1 * n
    clipped = ~interior
    if clipped.any():
        h_mu = h_mu + np.where(clipped, sig_pair * a * a, 0.0)
    h_alpha = 0.0
    if t2 > 0.0:
        damp = sig2 / (1.0 + sig2 * k_resp)
        ratio = np.where(interior, a / d_safe, 0.0)
        ratio_sum = float(ratio.sum())
        h_mu = h_mu + damp * ratio * ratio_sum
        g2 = 4.0 / (1.0 - alpha) ** 3
        m_int = float(mu_bar.sum())
        alpha_sens = (g1 / g) * m_int
        h_alpha = damp * alpha_sens * (alpha_sens + ratio_sum) + t2 * m_int * g2 / g
        h_alpha += float(np.sum(np.abs(p_pair) * g2 * b_bar))
    curvature = np.empty(n + 1)
    curvature[0] = h_alpha
    curvature[1:] = h_mu

    x = pack_point(alpha, mu, mu_bar, s1, s2)
    residual = np.empty(n + 2)
    residual[0] = c1
    residual[1] = c2
    residual[2:] = c_pair
    price = np.empty(n + 2)
    price[0] = p1
    price[1] = p2
    price[2:] = p_pair
    return _ReducedPoint(
        x=x, residual=residual, price=price, value=value, gradient=grad, curvature=curvature
    )
