"""Finite-dimensional gluing sandbox: approximation pairs and the correction
iteration.

A Fredholm system here is a smooth map t: R^N -> R^F on a bounded ball; an
approximate-solution chart supplies x(s) with a right-inverse field Q(s) of
the Jacobian.  The correction step solves t(x + Q xi) = 0 by the fixed-point
iteration xi <- -t(x) - N_x(Q xi) with N_x(v) = t(x+v) - t(x) - L_x v, and the
constant estimator samples the uniform-continuity and approximation bounds
that make the iteration contract.  This module is the only floating-point
part of the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

FD_SCALE = 1e-6


class NonConvergenceError(RuntimeError):
    """Correction iteration diverged; carries the residual history."""

    def __init__(self, message: str, residuals: list[float]):
        super().__init__(message)
        self.residuals = residuals


def _as_vec(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float))


def fd_jacobian(func: Callable, x: np.ndarray, out_dim: int) -> np.ndarray:
    """Central finite differences with step 1e-6 * (1 + |x|)."""
    x = _as_vec(x)
    h = FD_SCALE * (1.0 + float(np.linalg.norm(x)))
    jac = np.zeros((out_dim, x.size))
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        jac[:, i] = (_as_vec(func(x + step)) - _as_vec(func(x - step))) / (2.0 * h)
    return jac


@dataclass
class FredholmSystem:
    """(W, W x F, s) data: the section as a map t with an optional Jacobian."""

    dim_b: int
    dim_f: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray] | None = None
    domain_bound: float = 10.0
    name: str = "system"

    def t(self, x) -> np.ndarray:
        value = _as_vec(self.evaluate(_as_vec(x)))
        if not np.all(np.isfinite(value)):
            raise FloatingPointError(f"{self.name}: t(x) is non-finite at x={x}")
        return value

    def jacobian(self, x) -> np.ndarray:
        x = _as_vec(x)
        if self.derivative is not None:
            jac = np.asarray(self.derivative(x), dtype=float).reshape(self.dim_f, self.dim_b)
        else:
            jac = fd_jacobian(self.t, x, self.dim_f)
        if not np.all(np.isfinite(jac)):
            raise FloatingPointError(f"{self.name}: Jacobian is non-finite at x={x}")
        return jac

    def quadratic_remainder(self, x, v) -> np.ndarray:
        """N_x(v) = t(x+v) - t(x) - L_x v."""
        x, v = _as_vec(x), _as_vec(v)
        return self.t(x + v) - self.t(x) - self.jacobian(x) @ v


@dataclass
class ApproxChart:
    """Approximate solutions x(s) with a right-inverse field Q(s), L x(s) Q(s) = Id."""

    dim: int
    param: Callable[[np.ndarray], np.ndarray]
    right_inverse: Callable[[np.ndarray], np.ndarray]
    s_low: np.ndarray = field(default_factory=lambda: np.array([-1.0]))
    s_high: np.ndarray = field(default_factory=lambda: np.array([1.0]))
    name: str = "chart"

    def x(self, s) -> np.ndarray:
        return _as_vec(self.param(_as_vec(s)))

    def q(self, s) -> np.ndarray:
        return np.asarray(self.right_inverse(_as_vec(s)), dtype=float)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.s_low, self.s_high)

    def check_right_inverse(self, system: FredholmSystem, s, tol: float = 1e-8) -> float:
        s = _as_vec(s)
        residual = system.jacobian(self.x(s)) @ self.q(s) - np.eye(system.dim_f)
        return float(np.linalg.norm(residual, 2))


@dataclass(frozen=True)
class ConditionReport:
    name: str
    estimate: float
    witness: tuple[float, ...]
    ok: bool
    note: str = ""


@dataclass(frozen=True)
class GlueConstants:
    c1: float
    c2: float
    eps1: float
    delta1: float
    k1: float
    ordering_ok: bool
    conditions: tuple[ConditionReport, ...]


def estimate_constants(
    system: FredholmSystem,
    chart: ApproxChart,
    sample_count: int = 200,
    seed: int = 0,
) -> GlueConstants:
    """Monte-Carlo estimates of the uniform-continuity constant C1, the chart
    approximation quality eps1, and the right-inverse bound C2, each reported
    with its witnessing sample.  delta1 is placed between eps1 and C2 and the
    ordering flag requires factor-10 separations eps1 << delta1 << C2."""
    if sample_count < 10:
        raise ValueError(f"sample_count must be >= 10, got {sample_count}")
    rng = np.random.default_rng(seed)
    ss = [chart.sample(rng) for _ in range(sample_count)]
    xs = [chart.x(s) for s in ss]

    def lipschitz(pairs, fn):
        best, witness = 0.0, (0.0,)
        for a, b in pairs:
            gap = float(np.linalg.norm(_as_vec(a) - _as_vec(b)))
            if gap < 1e-12:
                continue
            quotient = fn(a, b) / gap
            if quotient > best:
                best, witness = quotient, (float(_as_vec(a)[0]), float(_as_vec(b)[0]))
        return best, witness

    pairs = [(xs[i], xs[(i + 1) % len(xs)]) for i in range(len(xs))]
    b1, w1 = lipschitz(pairs, lambda a, b: float(np.linalg.norm(system.t(a) - system.t(b))))
    b2, w2 = lipschitz(pairs, lambda a, b: float(
        np.linalg.norm(system.jacobian(a) - system.jacobian(b), 2)))

    # (B3) quadratic remainder quotient |N_x(v1)-N_x(v2)| / ((|v1|+|v2|)|v1-v2|)
    b3, w3 = 0.0, (0.0,)
    scale = 0.1 * (1.0 + max(float(np.linalg.norm(x)) for x in xs))
    for i in range(min(sample_count, 100)):
        x = xs[i % len(xs)]
        v1 = rng.normal(size=system.dim_b) * scale
        v2 = rng.normal(size=system.dim_b) * scale
        denom = (np.linalg.norm(v1) + np.linalg.norm(v2)) * np.linalg.norm(v1 - v2)
        if denom < 1e-12:
            continue
        num = float(np.linalg.norm(
            system.quadratic_remainder(x, v1) - system.quadratic_remainder(x, v2)))
        quotient = num / float(denom)
        if quotient > b3:
            b3, w3 = quotient, (float(x[0]),)
    c1 = max(b1, b2, b3)

    # (C3) chart residual and (C4) tangential bound
    eps_res, w_res = 0.0, (0.0,)
    eps_tan, w_tan = 0.0, (0.0,)
    c2_norm, w_q = 0.0, (0.0,)
    for s in ss:
        x = chart.x(s)
        res = float(np.linalg.norm(system.t(x)))
        if res > eps_res:
            eps_res, w_res = res, tuple(float(v) for v in _as_vec(s))
        jac_x = fd_jacobian(chart.x, _as_vec(s), system.dim_b)
        lx = system.jacobian(x)
        for col in range(jac_x.shape[1]):
            tangent = jac_x[:, col]
            norm = float(np.linalg.norm(tangent))
            if norm < 1e-12:
                continue
            tan_bound = float(np.linalg.norm(lx @ tangent)) / norm
            if tan_bound > eps_tan:
                eps_tan, w_tan = tan_bound, tuple(float(v) for v in _as_vec(s))
        qn = float(np.linalg.norm(chart.q(s), 2))
        if qn > c2_norm:
            c2_norm, w_q = qn, tuple(float(v) for v in _as_vec(s))
    # (C6) Lipschitz bound on Q along the chart
    q_pairs = [(ss[i], ss[(i + 1) % len(ss)]) for i in range(len(ss))]
    c6, w6 = 0.0, (0.0,)
    for sa, sb in q_pairs:
        gap = float(np.linalg.norm(chart.x(sa) - chart.x(sb)))
        if gap < 1e-12:
            continue
        quotient = float(np.linalg.norm(chart.q(sa) - chart.q(sb), 2)) / gap
        if quotient > c6:
            c6, w6 = quotient, tuple(float(v) for v in _as_vec(sa))

    eps1 = max(eps_res, eps_tan)
    c2 = max(c2_norm, c6)
    k1 = max(float(np.linalg.norm(x)) for x in xs)
    delta1 = np.sqrt(eps1 * c2) if eps1 > 1e-14 else c2 / 10.0
    ordering_ok = (10.0 * eps1 <= delta1) and (10.0 * delta1 <= c2)
    conditions = (
        ConditionReport("B1 t Lipschitz", b1, w1, True),
        ConditionReport("B2 L Lipschitz", b2, w2, True),
        ConditionReport("B3 quadratic remainder", b3, w3, True),
        ConditionReport("C1 domain bound", k1, (k1,), k1 <= system.domain_bound,
                        f"K1={system.domain_bound}"),
        ConditionReport("C3 chart residual", eps_res, w_res, True),
        ConditionReport("C4 tangential bound", eps_tan, w_tan, True),
        ConditionReport("C5 right-inverse norm", c2_norm, w_q, True),
        ConditionReport("C6 right-inverse Lipschitz", c6, w6, True),
    )
    return GlueConstants(c1=c1, c2=c2, eps1=eps1, delta1=float(delta1), k1=k1,
                         ordering_ok=bool(ordering_ok), conditions=conditions)


@dataclass(frozen=True)
class CorrectionResult:
    xi: np.ndarray
    residual: float
    iterations: int
    residual_history: tuple[float, ...]
    xi_history: tuple[float, ...]


def correct(
    system: FredholmSystem,
    chart: ApproxChart,
    s,
    tol: float = 1e-10,
    max_iter: int = 50,
    eps1: float | None = None,
) -> CorrectionResult:
    """Fixed-point correction xi <- -t(x) - N_x(Q xi) until |t(x + Q xi)| <= tol.

    Divergence (residual growth over 5 consecutive steps) raises
    NonConvergenceError with the residual history; on success, when eps1 is
    supplied the contract |xi| <= 2 eps1 is verified.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    x = chart.x(s)
    q = chart.q(s)
    t0 = system.t(x)
    xi = np.zeros(system.dim_f)
    residuals: list[float] = []
    norms: list[float] = []
    growth = 0
    for iteration in range(max_iter + 1):
        residual = float(np.linalg.norm(system.t(x + q @ xi)))
        residuals.append(residual)
        norms.append(float(np.linalg.norm(xi)))
        if residual <= tol:
            if eps1 is not None and np.linalg.norm(xi) > 2.0 * eps1 + 1e-12:
                raise NonConvergenceError(
                    f"converged but |xi|={np.linalg.norm(xi):.3e} exceeds "
                    f"2*eps1={2 * eps1:.3e}", residuals)
            return CorrectionResult(xi=xi, residual=residual, iterations=iteration,
                                    residual_history=tuple(residuals),
                                    xi_history=tuple(norms))
        if len(residuals) >= 2 and residuals[-1] > residuals[-2]:
            growth += 1
            if growth >= 5:
                raise NonConvergenceError(
                    f"{system.name}: residual grew for 5 consecutive steps", residuals)
        else:
            growth = 0
        xi = -t0 - system.quadratic_remainder(x, q @ xi)
    raise NonConvergenceError(
        f"{system.name}: no convergence to {tol:g} in {max_iter} iterations "
        f"(last residual {residuals[-1]:.3e})", residuals)


@dataclass(frozen=True)
class ChartMapResult:
    point: np.ndarray
    derivative_norm: float
    within_bound: bool


def chart_map(system: FredholmSystem, chart: ApproxChart, s, eta) -> ChartMapResult:
    """Phi(s, eta) = x(s) + Q(s) eta with a finite-difference probe of |D Phi|.

    The derivative is taken with respect to arc length along the chart (the
    parameter block is measured through an orthonormal frame of dx/ds) and eta
    itself; the flag reports whether the operator norm stays within 2.
    """
    s, eta = _as_vec(s), _as_vec(eta)
    point = chart.x(s) + chart.q(s) @ eta

    def phi(se: np.ndarray) -> np.ndarray:
        s_part, eta_part = se[: s.size], se[s.size:]
        return chart.x(s_part) + chart.q(s_part) @ eta_part

    packed = np.concatenate([s, eta])
    jac = fd_jacobian(phi, packed, system.dim_b)
    dx = fd_jacobian(chart.x, s, system.dim_b)
    # reparameterize the s-block to unit speed: dx = T R with T orthonormal
    t_frame, r_factor = np.linalg.qr(dx)
    if abs(np.linalg.det(r_factor)) < 1e-12:
        norm = float(np.linalg.norm(jac, 2))
    else:
        jac_s = jac[:, : s.size] @ np.linalg.inv(r_factor)
        jac_full = np.hstack([jac_s, jac[:, s.size:]])
        norm = float(np.linalg.norm(jac_full, 2))
    return ChartMapResult(point=point, derivative_norm=norm, within_bound=norm <= 2.0)


@dataclass(frozen=True)
class InjectivityReport:
    pairs_checked: int
    collisions: tuple[tuple[float, ...], ...]

    @property
    def ok(self) -> bool:
        return not self.collisions


def injectivity_probe(
    system: FredholmSystem,
    chart: ApproxChart,
    sample_pairs: int = 500,
    delta1: float = 0.1,
    seed: int = 0,
    output_tol: float = 1e-9,
    input_bound: float = 1e-6,
) -> InjectivityReport:
    """Search for distinct chart inputs mapping to nearly the same point.

    A collision is |Phi(a) - Phi(b)| <= output_tol while the inputs are more
    than input_bound apart (inputs within the continuity bound are allowed to
    collide)."""
    rng = np.random.default_rng(seed)
    collisions: list[tuple[float, ...]] = []
    for _ in range(sample_pairs):
        s1, s2 = chart.sample(rng), chart.sample(rng)
        e1 = rng.uniform(-delta1, delta1, size=system.dim_f)
        e2 = rng.uniform(-delta1, delta1, size=system.dim_f)
        p1 = chart.x(s1) + chart.q(s1) @ e1
        p2 = chart.x(s2) + chart.q(s2) @ e2
        input_gap = float(np.linalg.norm(np.concatenate([s1 - s2, e1 - e2])))
        output_gap = float(np.linalg.norm(p1 - p2))
        if output_gap <= output_tol and input_gap > input_bound:
            collisions.append(tuple(float(v) for v in np.concatenate([s1, e1, s2, e2])))
    return InjectivityReport(pairs_checked=sample_pairs, collisions=tuple(collisions))


def sphere_model(scale: float = 1.0) -> tuple[FredholmSystem, ApproxChart]:
    """t(x) = |x|^2 - 1 on R^3 with a spherical chart of radius `scale`."""
    system = FredholmSystem(
        dim_b=3, dim_f=1,
        evaluate=lambda x: np.array([float(x @ x) - 1.0]),
        derivative=lambda x: 2.0 * x.reshape(1, 3),
        domain_bound=4.0,
        name="sphere",
    )

    def param(s: np.ndarray) -> np.ndarray:
        theta, phi = float(s[0]), float(s[1])
        return scale * np.array([
            np.sin(theta) * np.cos(phi),
            np.sin(theta) * np.sin(phi),
            np.cos(theta),
        ])

    def right_inverse(s: np.ndarray) -> np.ndarray:
        x = param(s)
        return (x / (2.0 * float(x @ x))).reshape(3, 1)

    chart = ApproxChart(
        dim=2, param=param, right_inverse=right_inverse,
        s_low=np.array([0.4, -3.0]), s_high=np.array([np.pi - 0.4, 3.0]),
        name=f"sphere-chart(scale={scale:g})",
    )
    return system, chart


def node_model(tau: float = 0.25) -> tuple[FredholmSystem, ApproxChart]:
    """Node smoothing t(x, y) = x y - tau with the exact hyperbola chart."""
    system = FredholmSystem(
        dim_b=2, dim_f=1,
        evaluate=lambda x: np.array([x[0] * x[1] - tau]),
        derivative=lambda x: np.array([[x[1], x[0]]]),
        domain_bound=8.0,
        name=f"node(tau={tau:g})",
    )

    def param(s: np.ndarray) -> np.ndarray:
        if tau == 0.0:
            return np.array([np.exp(float(s[0])), 0.0])
        a = np.sqrt(abs(tau)) * np.exp(float(s[0]))
        return np.array([a, tau / a])

    def right_inverse(s: np.ndarray) -> np.ndarray:
        x = param(s)
        grad = np.array([x[1], x[0]])
        return (grad / float(grad @ grad)).reshape(2, 1)

    chart = ApproxChart(
        dim=1, param=param, right_inverse=right_inverse,
        s_low=np.array([-1.0]), s_high=np.array([1.0]),
        name=f"node-chart(tau={tau:g})",
    )
    return system, chart


def linear_model(seed: int = 7) -> tuple[FredholmSystem, ApproxChart]:
    """A well-conditioned random affine system t(x) = A x - b on R^4 -> R^2."""
    rng = np.random.default_rng(seed)
    n, f = 4, 2
    a = rng.normal(size=(f, n)) + np.hstack([np.eye(f), np.zeros((f, n - f))])
    b = rng.normal(size=f)
    pseudo = a.T @ np.linalg.inv(a @ a.T)
    x0 = pseudo @ b
    _, _, vt = np.linalg.svd(a)
    null_basis = vt[f:].T  # n x (n-f), orthonormal columns

    system = FredholmSystem(
        dim_b=n, dim_f=f,
        evaluate=lambda x: a @ x - b,
        derivative=lambda x: a,
        domain_bound=16.0,
        name="linear",
    )
    chart = ApproxChart(
        dim=n - f,
        param=lambda s: x0 + null_basis @ s,
        right_inverse=lambda s: pseudo,
        s_low=-np.ones(n - f), s_high=np.ones(n - f),
        name="linear-chart",
    )
    return system, chart


def builtin_models() -> list[tuple[FredholmSystem, ApproxChart]]:
    """The shipped sandbox models: sphere, node smoothing, and a linear system."""
    return [sphere_model(), node_model(0.25), linear_model()]
