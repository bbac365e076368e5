"""Event-driven simulation with standard Filippov semantics.

This module is the package's independent cross-check: it never uses the
closed-form flows.  General nonlinear systems are integrated with
classic fixed-step 4th-order steps inside each regime (left field, right
field, or sliding), with events (surface hits, fold exits) localized by
bisection.  Sliding motion integrates the sliding vector field with a
projection back onto the surface after every step.

The piecewise-linear hybrid system gets its own small fixed-step engine
(same semantics, unrolled arithmetic), which provides the empirical
return-multiplier oracle and the orbit exporter.

An adaptive 5th/4th-order integrator is included as a high-accuracy
reference for smooth segments.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .core import (
    BoundaryData,
    FilippovSystem,
    RegionKind,
    classify_region,
    fold_curvature,
    sliding_field,
)
from .errors import (
    CorrectionDivergedError,
    FilippovError,
    NonFiniteStateError,
    RepellingSlidingEncounteredError,
)
from .expr import gradient_fd
from .hybrid import (
    HybridParams,
    LambdaResult,
    LambdaStatus,
    _lambda_from_value,
)

__all__ = [
    "SimConfig", "Terminal", "Segment", "Orbit",
    "simulate", "simulate_hybrid", "return_multiplier_empirical",
    "trace_tangency_curve", "export_orbit", "integrate_adaptive",
]


@dataclass(frozen=True)
class SimConfig:
    """Fixed-step simulation settings."""

    dt: float = 1e-3
    event_refine_tol: float = 1e-10
    t_max: float = 100.0
    norm_floor: float = 1e-6
    norm_ceiling: float = 1e6
    on_surface_tol: float = 1e-8

    def __post_init__(self):
        if self.dt <= 0.0 or self.t_max <= 0.0:
            raise ValueError("dt and t_max must be positive")
        if not 0.0 < self.event_refine_tol < self.dt:
            raise ValueError("need 0 < event_refine_tol < dt")
        if not (0.0 < self.norm_floor < 1.0 < self.norm_ceiling):
            raise ValueError("need 0 < norm_floor < 1 < norm_ceiling")
        if self.on_surface_tol <= 0.0:
            raise ValueError("on_surface_tol must be positive")


class Terminal(Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    TIMEOUT = "timeout"
    REACHED_EVENT = "reached-event"


@dataclass
class Segment:
    regime: str  # "L" | "R" | "S"
    samples: list[tuple[float, float, float, float]] = field(default_factory=list)


@dataclass
class Orbit:
    segments: list[Segment]
    terminal: Terminal
    detail: str = ""


# --------------------------------------------------------------------------
# adaptive reference integrator (Dormand-Prince 5(4))
# --------------------------------------------------------------------------

_DP_A = np.zeros((7, 7))
_DP_A[1, :1] = (1 / 5,)
_DP_A[2, :2] = (3 / 40, 9 / 40)
_DP_A[3, :3] = (44 / 45, -56 / 15, 32 / 9)
_DP_A[4, :4] = (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729)
_DP_A[5, :5] = (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176,
                -5103 / 18656)
_DP_A[6, :6] = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784,
                   11 / 84, 0.0])
_DP_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                   -92097 / 339200, 187 / 2100, 1 / 40])


def integrate_adaptive(f: Callable[[float, np.ndarray], np.ndarray], y0,
                       t_end: float, rtol: float = 1e-12,
                       atol: float = 1e-14) -> np.ndarray:
    """Integrate dy/dt = f(t, y) from t = 0 to t_end with adaptive
    5th/4th-order embedded steps; returns the final state."""
    y = np.asarray(y0, dtype=float).copy()
    t = 0.0
    if t_end == 0.0:
        return y
    if t_end < 0.0:
        raise ValueError("t_end must be non-negative")
    h = min(1e-2, t_end)
    stages = np.zeros((7, y.size))
    while t < t_end:
        h = min(h, t_end - t)
        stages[0] = f(t, y)
        for i in range(1, 7):
            yi = y + h * (_DP_A[i, :i] @ stages[:i])
            stages[i] = f(t + _DP_C[i] * h, yi)
        y5 = y + h * (_DP_B5 @ stages)
        err = h * ((_DP_B5 - _DP_B4) @ stages)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
        err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
        if err_norm <= 1.0 or h <= 1e-14:
            t += h
            y = y5
            if not np.all(np.isfinite(y)):
                raise NonFiniteStateError("adaptive integration blew up")
        factor = 0.9 * err_norm ** -0.2 if err_norm > 0.0 else 5.0
        h *= min(5.0, max(0.2, factor))
    return y


# --------------------------------------------------------------------------
# general Filippov simulation
# --------------------------------------------------------------------------

def _rk4(f, x: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(x)
    k2 = f(x + 0.5 * dt * k1)
    k3 = f(x + 0.5 * dt * k2)
    k4 = f(x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class _Sim:
    """State machine for one simulation run."""

    def __init__(self, system: FilippovSystem, x0, cfg: SimConfig,
                 stop: Optional[Callable[[float, np.ndarray], bool]] = None):
        self.system = system
        self.cfg = cfg
        self.stop = stop
        self.x = np.asarray(x0, dtype=float).copy()
        if not np.all(np.isfinite(self.x)):
            raise NonFiniteStateError("initial state is not finite")
        self.t = 0.0
        self.segments: list[Segment] = []
        self.h = system.switch
        self.terminal: Optional[Terminal] = None
        self.detail = ""

    # -- field helpers ------------------------------------------------

    def rate_left(self, x) -> float:
        return float(gradient_fd(self.h, x) @ self.system.left(x))

    def rate_right(self, x) -> float:
        return float(gradient_fd(self.h, x) @ self.system.right(x))

    def slide_f(self, x) -> np.ndarray:
        return sliding_field(self.system, x)

    def project(self, x: np.ndarray) -> np.ndarray:
        grad = gradient_fd(self.h, x)
        gg = float(grad @ grad)
        if gg == 0.0:
            return x
        return x - (self.h(x) / gg) * grad

    # -- bookkeeping ----------------------------------------------------

    def begin_segment(self, regime: str) -> Segment:
        seg = Segment(regime)
        seg.samples.append((self.t, *map(float, self.x)))
        self.segments.append(seg)
        return seg

    def check_terminal(self) -> bool:
        norm = float(np.linalg.norm(self.x))
        if not math.isfinite(norm):
            raise NonFiniteStateError(f"state not finite at t = {self.t:g}")
        if norm < self.cfg.norm_floor:
            self.terminal = Terminal.CONVERGED
            return True
        if norm > self.cfg.norm_ceiling:
            self.terminal = Terminal.DIVERGED
            return True
        if self.stop is not None and self.stop(self.t, self.x):
            self.terminal = Terminal.REACHED_EVENT
            return True
        if self.t >= self.cfg.t_max:
            self.terminal = Terminal.TIMEOUT
            return True
        return False

    # -- regime decisions ------------------------------------------------

    def regime_on_surface(self, x) -> str:
        region = classify_region(self.system, x)
        if region is RegionKind.ATTRACTING_SLIDING:
            return "S"
        if region is RegionKind.REPELLING_SLIDING:
            raise RepellingSlidingEncounteredError(
                f"repelling sliding region reached at t = {self.t:g}")
        if region is RegionKind.CROSSING:
            return "L" if self.rate_left(x) < 0.0 else "R"
        # tangency: decide by the fold type when the right field points
        # toward the surface (the setting with unique forward evolution)
        if self.rate_right(x) >= 0.0:
            raise FilippovError(
                f"tangency with outward right field at t = {self.t:g}; "
                "forward evolution not classified")
        curv = fold_curvature(self.system, x)
        if curv < 0.0:
            return "L"  # visible fold: the left orbit departs the surface
        if curv > 0.0:
            return "S"  # invisible fold: sliding carries on inward
        raise FilippovError(
            f"degenerate fold at t = {self.t:g}; forward evolution "
            "not classified")

    # -- regular-regime integration ----------------------------------------

    def run_regular(self, regime: str) -> Optional[str]:
        """Integrate the left or right field until a surface hit or a
        terminal condition; returns the next regime or None."""
        f = self.system.left if regime == "L" else self.system.right
        interior = -1.0 if regime == "L" else 1.0
        seg = self.begin_segment(regime)
        armed = abs(self.h(self.x)) > self.cfg.on_surface_tol
        while True:
            if self.check_terminal():
                return None
            dt = min(self.cfg.dt, self.cfg.t_max - self.t)
            x_new = _rk4(f, self.x, dt)
            h_new = self.h(x_new)
            if not armed:
                if h_new * interior > self.cfg.on_surface_tol:
                    armed = True
                elif h_new * interior < -10.0 * self.cfg.on_surface_tol:
                    raise FilippovError(
                        f"{regime}-segment left its own side at "
                        f"t = {self.t:g} before re-entering it")
            elif h_new * interior <= 0.0:
                tau, x_ev = self._bisect(f, self.x, dt,
                                         lambda x: self.h(x))
                self.t += tau
                self.x = x_ev
                seg.samples.append((self.t, *map(float, self.x)))
                return self.regime_on_surface(self.x)
            self.t += dt
            self.x = x_new
            seg.samples.append((self.t, *map(float, self.x)))

    def _bisect(self, fn, x_from: np.ndarray, dt: float,
                monitor) -> tuple[float, np.ndarray]:
        """Find tau in (0, dt] where the monitor of one RK4 substep from
        x_from vanishes, to the event tolerance."""
        lo, hi = 0.0, dt
        x_hi = _rk4(fn, x_from, hi)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            x_mid = _rk4(fn, x_from, mid)
            m_mid = monitor(x_mid)
            if abs(m_mid) <= self.cfg.event_refine_tol:
                return mid, x_mid
            if (m_mid > 0.0) == (monitor(x_hi) > 0.0):
                hi, x_hi = mid, x_mid
            else:
                lo = mid
        return hi, x_hi

    # -- sliding-regime integration -----------------------------------------

    def run_slide(self) -> Optional[str]:
        seg = self.begin_segment("S")
        self.x = self.project(self.x)
        armed = self.rate_left(self.x) > self.cfg.event_refine_tol
        wobbles = 0
        while True:
            if self.check_terminal():
                return None
            dt = min(self.cfg.dt, self.cfg.t_max - self.t)
            step = lambda x, tau: self.project(_rk4(self.slide_f, x, tau))
            x_new = step(self.x, dt)
            rate_new = self.rate_left(x_new)
            if self.rate_right(x_new) >= 0.0:
                raise RepellingSlidingEncounteredError(
                    f"right field stopped pointing at the surface during "
                    f"sliding at t = {self.t:g}")
            if not armed:
                if rate_new > self.cfg.event_refine_tol:
                    armed = True
            elif rate_new <= 0.0:
                tau, x_ev = self._bisect_slide(step, self.x, dt)
                curv = fold_curvature(self.system, x_ev)
                if curv < 0.0:
                    self.t += tau
                    self.x = x_ev
                    seg.samples.append((self.t, *map(float, self.x)))
                    return "L"  # visible fold: exit into the left domain
                # grazed the invisible side of the tangency curve; keep
                # sliding and re-arm once the rate is clearly positive again
                armed = False
                wobbles += 1
                if wobbles > 5:
                    raise FilippovError(
                        "sliding keeps grazing the tangency curve on its "
                        "invisible side; aborting")
            self.t += dt
            self.x = x_new
            seg.samples.append((self.t, *map(float, self.x)))

    def _bisect_slide(self, step, x_from: np.ndarray,
                      dt: float) -> tuple[float, np.ndarray]:
        lo, hi = 0.0, dt
        x_hi = step(x_from, hi)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            x_mid = step(x_from, mid)
            r_mid = self.rate_left(x_mid)
            if abs(r_mid) <= self.cfg.event_refine_tol:
                return mid, x_mid
            if (r_mid > 0.0) == (self.rate_left(x_hi) > 0.0):
                hi, x_hi = mid, x_mid
            else:
                lo = mid
        return hi, x_hi

    # -- main loop -------------------------------------------------

    def run(self) -> Orbit:
        h0 = self.h(self.x)
        if h0 < -self.cfg.on_surface_tol:
            regime = "L"
        elif h0 > self.cfg.on_surface_tol:
            regime = "R"
        else:
            if self.check_terminal():
                return Orbit([Segment("L", [(0.0, *map(float, self.x))])],
                             self.terminal, self.detail)
            regime = self.regime_on_surface(self.x)
        while regime is not None:
            if regime == "S":
                regime = self.run_slide()
            else:
                regime = self.run_regular(regime)
        assert self.terminal is not None
        return Orbit(self.segments, self.terminal, self.detail)


def simulate(system: FilippovSystem, x0, cfg: SimConfig,
             stop: Optional[Callable[[float, np.ndarray], bool]] = None,
             ) -> Orbit:
    """Run the event-driven Filippov integration from x0.

    Orbits follow the left field in H < 0 and the right field in H > 0;
    on reaching the surface they slide (attracting region), pass through
    (crossing region), or leave at visible folds, per the standard
    convention.  Repelling sliding aborts with an error since forward
    evolution is not unique there.

    The norm floor/ceiling terminations are measured from the origin;
    translate the system so the equilibrium of interest sits there.
    """
    return _Sim(system, x0, cfg, stop).run()


# --------------------------------------------------------------------------
# hybrid-system engine (independent of the closed forms)
# --------------------------------------------------------------------------

def _run_hybrid(params: HybridParams, z0: float, cfg: SimConfig,
                stop_at_return: bool, record: bool):
    """Fixed-step RK4 on the hybrid rules.  Returns (orbit, returns)
    where ``returns`` lists the third coordinates of successive hits of
    the return line."""
    a, b, c, d = params.a, params.b, params.c, params.d

    def f_left(y1: float, y2: float, y3: float):
        return ((a - 1.0) * y1 + y2, (a - b) * y1 + y3, -b * y1)

    def step_left(y1, y2, y3, h):
        k11, k12, k13 = f_left(y1, y2, y3)
        k21, k22, k23 = f_left(y1 + 0.5 * h * k11, y2 + 0.5 * h * k12,
                               y3 + 0.5 * h * k13)
        k31, k32, k33 = f_left(y1 + 0.5 * h * k21, y2 + 0.5 * h * k22,
                               y3 + 0.5 * h * k23)
        k41, k42, k43 = f_left(y1 + h * k31, y2 + h * k32, y3 + h * k33)
        return (y1 + h / 6.0 * (k11 + 2.0 * (k21 + k31) + k41),
                y2 + h / 6.0 * (k12 + 2.0 * (k22 + k32) + k42),
                y3 + h / 6.0 * (k13 + 2.0 * (k23 + k33) + k43))

    def f_slide(y2: float, y3: float):
        return (c * y2 + y3, -d * y2)

    def step_slide(y2, y3, h):
        k11, k12 = f_slide(y2, y3)
        k21, k22 = f_slide(y2 + 0.5 * h * k11, y3 + 0.5 * h * k12)
        k31, k32 = f_slide(y2 + 0.5 * h * k21, y3 + 0.5 * h * k22)
        k41, k42 = f_slide(y2 + h * k31, y3 + h * k32)
        return (y2 + h / 6.0 * (k11 + 2.0 * (k21 + k31) + k41),
                y3 + h / 6.0 * (k12 + 2.0 * (k22 + k32) + k42))

    dt = cfg.dt
    floor2 = cfg.norm_floor * cfg.norm_floor
    ceil2 = cfg.norm_ceiling * cfg.norm_ceiling
    t = 0.0
    y1, y2, y3 = 0.0, 0.0, float(z0)
    segments: list[Segment] = []
    returns: list[float] = []
    terminal = None
    detail = ""

    def bisect(stepper, state, monitor_idx):
        # first tau in (0, dt] where the monitored component vanishes
        lo, hi = 0.0, dt
        s_hi = stepper(*state, hi)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            s_mid = stepper(*state, mid)
            if abs(s_mid[monitor_idx]) <= cfg.event_refine_tol:
                return mid, s_mid
            if (s_mid[monitor_idx] > 0.0) == (s_hi[monitor_idx] > 0.0):
                hi, s_hi = mid, s_mid
            else:
                lo = mid
        return hi, s_hi

    while True:
        # --- regular segment from (0, 0, y3) or the current state ---
        seg = Segment("L")
        if record:
            seg.samples.append((t, y1, y2, y3))
            segments.append(seg)
        armed = y1 < 0.0
        while True:
            n2 = y1 * y1 + y2 * y2 + y3 * y3
            if n2 < floor2:
                terminal = Terminal.CONVERGED
                break
            if n2 > ceil2:
                terminal = Terminal.DIVERGED
                detail = "regular segment"
                break
            if t >= cfg.t_max:
                terminal = Terminal.TIMEOUT
                break
            h = min(dt, cfg.t_max - t)
            n1, n2_, n3 = step_left(y1, y2, y3, h)
            if not armed and n1 < 0.0:
                armed = True
            if armed and n1 >= 0.0:
                tau, (e1, e2, e3) = bisect(step_left, (y1, y2, y3), 0)
                t += tau
                y1, y2, y3 = 0.0, e2, e3
                if record:
                    seg.samples.append((t, y1, y2, y3))
                break
            t += h
            y1, y2, y3 = n1, n2_, n3
            if not (math.isfinite(y1) and math.isfinite(y2)
                    and math.isfinite(y3)):
                raise NonFiniteStateError("hybrid state not finite")
            if record:
                seg.samples.append((t, y1, y2, y3))
        if terminal is not None:
            break

        # --- sliding segment on the plane until y2 = 0 ---
        seg = Segment("S")
        if record:
            seg.samples.append((t, 0.0, y2, y3))
            segments.append(seg)
        while True:
            n2 = y2 * y2 + y3 * y3
            if n2 < floor2:
                terminal = Terminal.CONVERGED
                break
            if n2 > ceil2:
                terminal = Terminal.DIVERGED
                detail = "sliding segment"
                break
            if t >= cfg.t_max:
                terminal = Terminal.TIMEOUT
                break
            h = min(dt, cfg.t_max - t)
            m2, m3 = step_slide(y2, y3, h)
            if m2 <= 0.0:
                tau, (e2, e3) = bisect(step_slide, (y2, y3), 0)
                t += tau
                y2, y3 = 0.0, e3
                if record:
                    seg.samples.append((t, 0.0, y2, y3))
                returns.append(y3)
                break
            t += h
            y2, y3 = m2, m3
            if not (math.isfinite(y2) and math.isfinite(y3)):
                raise NonFiniteStateError("hybrid state not finite")
            if record:
                seg.samples.append((t, 0.0, y2, y3))
        if terminal is not None:
            break
        if stop_at_return:
            terminal = Terminal.REACHED_EVENT
            break
        if y3 >= 0.0:
            terminal = Terminal.CONVERGED
            detail = "return at or above the origin"
            break
        y1 = 0.0
        # next regular segment continues from (0, 0, y3)

    orbit = Orbit(segments if record else [], terminal, detail)
    return orbit, returns


def simulate_hybrid(params: HybridParams, z0: float,
                    cfg: SimConfig) -> Orbit:
    """Integrate the hybrid system numerically from (0, 0, z0), z0 < 0,
    recording the alternating regular/sliding segments."""
    if not z0 < 0.0:
        raise ValueError("z0 must be negative")
    orbit, _ = _run_hybrid(params, z0, cfg, stop_at_return=False, record=True)
    return orbit


def return_multiplier_empirical(params: HybridParams,
                                cfg: SimConfig) -> LambdaResult:
    """Return multiplier measured by direct numerical integration of the
    hybrid rules from (0, 0, -1); the independent oracle for the
    closed-form computation."""
    orbit, returns = _run_hybrid(params, -1.0, cfg,
                                 stop_at_return=True, record=False)
    if orbit.terminal is Terminal.REACHED_EVENT and returns:
        zeta = returns[0]
        if zeta >= 0.0:
            return LambdaResult(LambdaStatus.UNDEFINED_CONVERGED, None,
                                "return at or above the origin")
        return _lambda_from_value(-zeta, "empirical")
    if orbit.terminal is Terminal.CONVERGED:
        return LambdaResult(LambdaStatus.UNDEFINED_CONVERGED, None,
                            orbit.detail or "norm below floor")
    if orbit.terminal is Terminal.DIVERGED:
        return LambdaResult(LambdaStatus.UNDEFINED_DIVERGED, None,
                            orbit.detail or "norm above ceiling")
    raise FilippovError(
        f"empirical return-multiplier run ended with {orbit.terminal.value} "
        "before the first return; raise t_max")


# --------------------------------------------------------------------------
# tangency-curve tracing
# --------------------------------------------------------------------------

def trace_tangency_curve(system: FilippovSystem, bd: BoundaryData,
                         arc_span: float, n: int) -> list[np.ndarray]:
    """Sample the tangency curve (surface points where the left field is
    tangent) on both sides of the equilibrium by predictor-corrector
    continuation: predict along the curve tangent, correct with Newton
    steps on (H, left normal rate).

    Returns n points ordered along the curve, excluding the equilibrium.
    """
    if arc_span <= 0.0 or n < 2:
        raise ValueError("need arc_span > 0 and n >= 2")
    if abs(bd.det_phi) <= 1e-12:
        raise CorrectionDivergedError(
            "observability matrix is singular: the tangency curve is not "
            "guaranteed to be a curve here")
    h_field = system.switch

    def rate_left(x):
        return float(gradient_fd(h_field, x) @ system.left(x))

    def residual(x):
        return np.array([h_field(x), rate_left(x)])

    def two_jac(x):
        return np.vstack([gradient_fd(h_field, x),
                          gradient_fd(rate_left, x)])

    def correct(x):
        for _ in range(25):
            g = residual(x)
            if abs(g[0]) + abs(g[1]) <= 1e-11:
                return x
            jac = two_jac(x)
            gram = jac @ jac.T
            try:
                coef = np.linalg.solve(gram, -g)
            except np.linalg.LinAlgError as exc:
                raise CorrectionDivergedError(
                    f"singular corrector system at {x}") from exc
            x = x + jac.T @ coef
            if not np.all(np.isfinite(x)):
                raise CorrectionDivergedError("corrector produced non-finite "
                                              "iterates")
        g = residual(x)
        if abs(g[0]) + abs(g[1]) <= 1e-9:
            return x
        raise CorrectionDivergedError(
            f"corrector stalled with residual {abs(g[0]) + abs(g[1]):.3e}")

    def tangent(x, reference=None):
        jac = two_jac(x)
        t_vec = np.cross(jac[0], jac[1])
        norm = np.linalg.norm(t_vec)
        if norm == 0.0:
            raise CorrectionDivergedError(
                "tangency curve has no well-defined tangent here")
        t_vec = t_vec / norm
        if reference is not None and float(t_vec @ reference) < 0.0:
            t_vec = -t_vec
        return t_vec

    x_star = np.asarray(bd.x_star, dtype=float)
    n_neg = n // 2
    n_pos = n - n_neg
    out_pos: list[np.ndarray] = []
    out_neg: list[np.ndarray] = []
    for count, sign, sink in ((n_pos, 1.0, out_pos), (n_neg, -1.0, out_neg)):
        if count == 0:
            continue
        ds = arc_span / count
        x = x_star.copy()
        direction = sign * tangent(x_star)
        for _ in range(count):
            x = correct(x + ds * direction)
            sink.append(x)
            direction = tangent(x, reference=direction)
    return out_neg[::-1] + out_pos


# --------------------------------------------------------------------------
# orbit export
# --------------------------------------------------------------------------

def export_orbit(orbit: Orbit, path) -> None:
    """Write an orbit as CSV with header ``t,x1,x2,x3,regime``."""
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x1", "x2", "x3", "regime"])
        for seg in orbit.segments:
            for (t, x1, x2, x3) in seg.samples:
                writer.writerow([repr(t), repr(x1), repr(x2), repr(x3),
                                 seg.regime])
