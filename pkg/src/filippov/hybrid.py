"""The four-parameter piecewise-linear hybrid system and its return map.

Orbits alternate between a 3D linear flow in the half-space y1 <= 0
(switching to the sliding piece when they reach the plane y1 = 0) and a
planar linear flow on that plane (switching back when they reach the line
y1 = y2 = 0).  Both flows are evaluated from explicit spectral formulas,
never by numerical integration.  Events are located by fixed stepping
tied to the rotation period plus secant refinement (with a bisection
fallback); the stepping is replaced by the exact root when the sliding
block has real eigenvalues, where no oscillation can hide earlier roots.

The multiplier of the first-return map to the line decides stability:
values below 1 (or an orbit that never returns and decays) mean the
origin attracts, values above 1 mean it repels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np

from .errors import (
    ConstraintViolationError,
    FilippovError,
    NearDegenerateError,
    NotRotationalError,
)
from .spectrum import (
    NormalFormParams,
    RealPlusPair,
    ThreeReal,
    companion_matrix,
    eig3,
)

__all__ = [
    "HybridParams", "EventConfig", "DEFAULT_EVENT_CONFIG",
    "LambdaStatus", "LambdaResult", "MARGINAL_TOL",
    "SegmentEvent", "Termination", "ReturnOutcome",
    "left_matrix", "slide_block",
    "flow_left", "flow_slide",
    "first_hit_plane", "first_hit_line", "first_return",
    "return_multiplier", "return_multiplier_normal_form",
]

# A return multiplier within this distance of 1 makes no stability claim.
MARGINAL_TOL = 1e-9


@dataclass(frozen=True)
class HybridParams:
    """Parameters (a, b, c, d) of the piecewise-linear hybrid system.

    Validity requires b > a^2/4 (the regular piece must rotate), d > 0,
    and d > c^2/4 whenever c > 0 (the sliding eigenvalues are complex or
    both negative).
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        for name, value in (("a", a), ("b", b), ("c", c), ("d", d)):
            if not math.isfinite(value):
                raise ConstraintViolationError(f"parameter {name} is not finite")
        if b <= a * a / 4.0:
            raise ConstraintViolationError(
                f"b = {b:g} must exceed a^2/4 = {a * a / 4.0:g}")
        if d <= 0.0:
            raise ConstraintViolationError(f"d = {d:g} must be positive")
        if c > 0.0 and d <= c * c / 4.0:
            raise ConstraintViolationError(
                f"with c = {c:g} > 0, d = {d:g} must exceed c^2/4 = {c * c / 4.0:g}")


@dataclass(frozen=True)
class EventConfig:
    """Tuning knobs for event location.

    ``max_segments`` bounds the stepping iterations within one flow
    segment; exceeding it is treated as divergence, with a diagnostic.
    """

    steps_per_rotation: int = 256
    secant_tol: float = 1e-12
    max_secant_iters: int = 60
    norm_floor: float = 1e-6
    norm_ceiling: float = 1e6
    max_segments: int = 10000

    def __post_init__(self):
        if self.steps_per_rotation <= 0 or self.max_secant_iters <= 0 \
                or self.max_segments <= 0:
            raise ValueError("iteration counts must be positive")
        if self.secant_tol <= 0.0:
            raise ValueError("secant_tol must be positive")
        if not (0.0 < self.norm_floor < 1.0 < self.norm_ceiling):
            raise ValueError("need 0 < norm_floor < 1 < norm_ceiling")


DEFAULT_EVENT_CONFIG = EventConfig()


class LambdaStatus(Enum):
    DEFINED = "defined"
    MARGINAL = "marginal"
    UNDEFINED_CONVERGED = "undefined-converged"
    UNDEFINED_DIVERGED = "undefined-diverged"


@dataclass(frozen=True)
class LambdaResult:
    """Outcome of a return-multiplier computation."""

    status: LambdaStatus
    value: Optional[float] = None
    detail: str = ""

    @property
    def defined(self) -> bool:
        return self.status in (LambdaStatus.DEFINED, LambdaStatus.MARGINAL)

    def __post_init__(self):
        if self.status in (LambdaStatus.DEFINED, LambdaStatus.MARGINAL):
            if self.value is None or not math.isfinite(self.value) \
                    or self.value <= 0.0:
                raise FilippovError(
                    f"a defined multiplier must be finite and positive, "
                    f"got {self.value!r}")
            if (self.status is LambdaStatus.MARGINAL) != \
                    (abs(self.value - 1.0) <= MARGINAL_TOL):
                raise FilippovError("marginal status inconsistent with value")


def _lambda_from_value(value: float, detail: str = "") -> LambdaResult:
    status = (LambdaStatus.MARGINAL if abs(value - 1.0) <= MARGINAL_TOL
              else LambdaStatus.DEFINED)
    return LambdaResult(status, value, detail)


@dataclass(frozen=True)
class SegmentEvent:
    """A located switching event: the first positive time at which the
    monitored coordinate of the current flow reaches zero."""

    t_hit: float
    y_hit: tuple[float, float, float]
    transition: str  # "regular-to-slide" | "slide-to-return"


@dataclass(frozen=True)
class Termination:
    """A flow segment ended without an event (norm threshold, step
    limit, or a non-oscillatory slide with no root)."""

    status: LambdaStatus  # one of the UNDEFINED_* values
    detail: str


@dataclass(frozen=True)
class ReturnOutcome:
    """Result of composing regular and sliding segments from (0, 0, z)."""

    status: str  # "returned" | "converged" | "diverged"
    zeta: Optional[float]  # third coordinate of the return point
    detail: str = ""
    events: tuple[SegmentEvent, ...] = ()


# --------------------------------------------------------------------------
# matrices and closed-form flows
# --------------------------------------------------------------------------

def left_matrix(a: float, b: float) -> np.ndarray:
    """Matrix of the regular piece; eigenvalues -1 and (a +/- i*w)/2
    with w = sqrt(4b - a^2), eigenvector (1, -a, b) for -1."""
    return np.array([[a - 1.0, 1.0, 0.0],
                     [a - b, 0.0, 1.0],
                     [-b, 0.0, 0.0]])


def slide_block(c: float, d: float) -> np.ndarray:
    """2x2 block governing (y2, y3) on the switching plane."""
    return np.array([[c, 1.0], [-d, 0.0]])


def _spiral_flow(M, mu: float, alpha: float, beta: float, y0,
                 ) -> Callable[[float], tuple[float, float, float]]:
    """Closed-form flow of a 3x3 matrix with spectrum {mu, alpha +/- i*beta}.

    Splits y0 into its component along the real eigendirection (via the
    annihilating quadratic of the complex pair) and its component in the
    rotation plane, then evolves each part explicitly.
    """
    m = np.asarray(M, dtype=float)
    y = np.asarray(y0, dtype=float)
    my = m @ y
    s_y = m @ my - 2.0 * alpha * my + (alpha * alpha + beta * beta) * y
    denom = (mu - alpha) ** 2 + beta * beta
    ur = s_y / denom
    w = y - ur
    g = (m @ w - alpha * w) / beta
    u1, u2, u3 = float(ur[0]), float(ur[1]), float(ur[2])
    w1, w2, w3 = float(w[0]), float(w[1]), float(w[2])
    g1, g2, g3 = float(g[0]), float(g[1]), float(g[2])

    def flow(t: float) -> tuple[float, float, float]:
        er = math.exp(mu * t)
        ec = math.exp(alpha * t)
        co = math.cos(beta * t)
        si = math.sin(beta * t)
        return (er * u1 + ec * (co * w1 + si * g1),
                er * u2 + ec * (co * w2 + si * g2),
                er * u3 + ec * (co * w3 + si * g3))

    return flow


# Planar slide flow: eigenvalue structure of [[c, 1], [-d, 0]].
_PLANAR_COMPLEX = "complex"
_PLANAR_REAL = "real"
_PLANAR_RESONANT = "resonant"


def _planar_kind(c: float, d: float) -> tuple[str, float]:
    disc = c * c - 4.0 * d
    tol = 1e-12 * max(1.0, c * c + 4.0 * abs(d))
    if disc < -tol:
        return _PLANAR_COMPLEX, disc
    if disc > tol:
        return _PLANAR_REAL, disc
    return _PLANAR_RESONANT, disc


def _planar_flow(c: float, d: float, y2_0: float, y3_0: float,
                 ) -> Callable[[float], tuple[float, float]]:
    kind, disc = _planar_kind(c, d)
    if kind == _PLANAR_COMPLEX:
        alpha = c / 2.0
        beta = math.sqrt(-disc) / 2.0
        g2 = (c * y2_0 + y3_0 - alpha * y2_0) / beta
        g3 = (-d * y2_0 - alpha * y3_0) / beta

        def flow(t: float) -> tuple[float, float]:
            ec = math.exp(alpha * t)
            co = math.cos(beta * t)
            si = math.sin(beta * t)
            return ec * (co * y2_0 + si * g2), ec * (co * y3_0 + si * g3)

        return flow
    if kind == _PLANAR_REAL:
        root = math.sqrt(disc)
        r1 = (c + root) / 2.0
        r2 = (c - root) / 2.0
        k1 = (y3_0 + r1 * y2_0) / (r1 - r2)
        k2 = y2_0 - k1

        def flow(t: float) -> tuple[float, float]:
            e1 = math.exp(r1 * t)
            e2 = math.exp(r2 * t)
            # eigenvector for r_i is (1, r_i - c) = (1, -r_j)
            return k1 * e1 + k2 * e2, -k1 * r2 * e1 - k2 * r1 * e2

        return flow
    r = c / 2.0
    w2 = c * y2_0 + y3_0 - r * y2_0
    w3 = -d * y2_0 - r * y3_0

    def flow(t: float) -> tuple[float, float]:
        er = math.exp(r * t)
        return er * (y2_0 + t * w2), er * (y3_0 + t * w3)

    return flow


def _hybrid_spectrum(params: HybridParams) -> tuple[float, float, float]:
    """(mu, alpha, beta) of the regular piece: mu = -1 exactly."""
    alpha = params.a / 2.0
    beta = math.sqrt(4.0 * params.b - params.a * params.a) / 2.0
    return -1.0, alpha, beta


def flow_left(params: HybridParams, y0, t: float) -> np.ndarray:
    """Closed-form regular flow at time t >= 0."""
    if t < 0.0:
        raise ValueError("t must be non-negative")
    mu, alpha, beta = _hybrid_spectrum(params)
    flow = _spiral_flow(left_matrix(params.a, params.b), mu, alpha, beta, y0)
    return np.array(flow(float(t)))


def flow_slide(params: HybridParams, y0, t: float) -> np.ndarray:
    """Closed-form sliding flow at time t >= 0; y0 must lie on the
    switching plane (first component zero) and the first component of the
    result is exactly zero."""
    if t < 0.0:
        raise ValueError("t must be non-negative")
    y0 = np.asarray(y0, dtype=float)
    if abs(y0[0]) > 1e-9 * max(1.0, float(np.linalg.norm(y0))):
        raise ValueError("y0 is not on the switching plane (y1 != 0)")
    flow = _planar_flow(params.c, params.d, float(y0[1]), float(y0[2]))
    z2, z3 = flow(float(t))
    return np.array([0.0, z2, z3])


# --------------------------------------------------------------------------
# event location
# --------------------------------------------------------------------------

def _norm3(y: tuple[float, float, float]) -> float:
    return math.sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2])


def _refine_root(flow, idx: int, lo: float, m_lo: float, hi: float,
                 m_hi: float, cfg: EventConfig):
    """Secant iteration on t -> flow(t)[idx] inside a sign-change bracket,
    falling back to bisection whenever an iterate leaves the bracket."""
    if m_hi == 0.0:
        return hi, flow(hi)
    a_t, a_m = lo, m_lo
    b_t, b_m = hi, m_hi
    t0, f0 = a_t, a_m
    t1, f1 = b_t, b_m
    best_t, best_y, best_m = b_t, flow(b_t), abs(b_m)
    for _ in range(cfg.max_secant_iters):
        if f1 != f0:
            t2 = t1 - f1 * (t1 - t0) / (f1 - f0)
        else:
            t2 = 0.5 * (a_t + b_t)
        if not (a_t < t2 < b_t):
            t2 = 0.5 * (a_t + b_t)
        y2 = flow(t2)
        f2 = y2[idx]
        if abs(f2) <= cfg.secant_tol * max(1.0, _norm3(y2)):
            return t2, y2
        if abs(f2) < best_m:
            best_t, best_y, best_m = t2, y2, abs(f2)
        if (f2 > 0.0) == (a_m > 0.0):
            a_t, a_m = t2, f2
        else:
            b_t, b_m = t2, f2
        t0, f0 = t1, f1
        t1, f1 = t2, f2
    return best_t, best_y  # tolerance not met; proceed with the best point


def _find_crossing(flow, idx: int, interior_sign: float, dt: float,
                   cfg: EventConfig):
    """Step a closed-form flow until the monitored coordinate leaves the
    interior sign, then refine.  Returns ("event", t, y) or
    ("converged"|"diverged", detail).
    """
    try:
        y = flow(0.0)
    except OverflowError:
        return ("diverged", "overflow at segment start")
    norm0 = _norm3(y)
    if norm0 < cfg.norm_floor:
        return ("converged", "norm below floor at segment start")
    if norm0 > cfg.norm_ceiling:
        return ("diverged", "norm above ceiling at segment start")
    t_prev = 0.0
    m_prev = y[idx]
    if abs(m_prev) <= cfg.secant_tol * max(1.0, norm0):
        # trivial root at the segment start: advance one full step before
        # arming detection (the orbit enters the interior quadratically)
        t_prev = dt
        y = flow(dt)
        m_prev = y[idx]
        nrm = _norm3(y)
        if nrm < cfg.norm_floor:
            return ("converged", "norm below floor")
        if nrm > cfg.norm_ceiling:
            return ("diverged", "norm above ceiling")
        if m_prev * interior_sign < 0.0:
            # left the interior within the very first step; bracket against
            # a point just past the excluded trivial root
            lo = dt * 1e-9
            y_lo = flow(lo)
            m_lo = y_lo[idx]
            if m_lo * interior_sign > 0.0:
                t_hit, y_hit = _refine_root(flow, idx, lo, m_lo,
                                            dt, m_prev, cfg)
                return ("event", t_hit, y_hit)
    steps = 0
    while steps < cfg.max_segments:
        steps += 1
        t_cur = t_prev + dt
        try:
            y = flow(t_cur)
        except OverflowError:
            return ("diverged", "overflow during stepping")
        m_cur = y[idx]
        if not (math.isfinite(m_cur) and math.isfinite(y[0])
                and math.isfinite(y[1]) and math.isfinite(y[2])):
            return ("diverged", "non-finite state")
        if m_cur * interior_sign <= 0.0 and m_prev * interior_sign > 0.0:
            t_hit, y_hit = _refine_root(flow, idx, t_prev, m_prev,
                                        t_cur, m_cur, cfg)
            return ("event", t_hit, y_hit)
        nrm = _norm3(y)
        if nrm < cfg.norm_floor:
            return ("converged", "norm below floor")
        if nrm > cfg.norm_ceiling:
            return ("diverged", "norm above ceiling")
        t_prev, m_prev = t_cur, m_cur
    return ("diverged",
            f"no event within {cfg.max_segments} steps (step limit)")


def _termination(kind: str, detail: str) -> Termination:
    status = (LambdaStatus.UNDEFINED_CONVERGED if kind == "converged"
              else LambdaStatus.UNDEFINED_DIVERGED)
    return Termination(status, detail)


def _plane_hit_spiral(M, mu: float, alpha: float, beta: float, y0,
                      cfg: EventConfig) -> Union[SegmentEvent, Termination]:
    """First time the regular flow from y0 (with y1 <= 0) reaches y1 = 0."""
    flow = _spiral_flow(M, mu, alpha, beta, y0)
    dt = 2.0 * math.pi / (beta * cfg.steps_per_rotation)
    result = _find_crossing(flow, 0, -1.0, dt, cfg)
    if result[0] != "event":
        return _termination(result[0], result[1] + " (regular segment)")
    _, t_hit, y_hit = result
    return SegmentEvent(t_hit, (y_hit[0], y_hit[1], y_hit[2]),
                        "regular-to-slide")


def _line_hit_block(c: float, d: float, y2_0: float, y3_0: float,
                    cfg: EventConfig) -> Union[SegmentEvent, Termination]:
    """First time the sliding flow from (0, y2_0, y3_0), y2_0 > 0,
    reaches y2 = 0."""
    kind, disc = _planar_kind(c, d)
    if kind == _PLANAR_COMPLEX:
        flow2 = _planar_flow(c, d, y2_0, y3_0)

        def flow(t: float) -> tuple[float, float, float]:
            z2, z3 = flow2(t)
            return (0.0, z2, z3)

        omega = math.sqrt(-disc) / 2.0
        dt = 2.0 * math.pi / (omega * cfg.steps_per_rotation)
        result = _find_crossing(flow, 1, 1.0, dt, cfg)
        if result[0] != "event":
            return _termination(result[0], result[1] + " (sliding segment)")
        _, t_hit, y_hit = result
        return SegmentEvent(t_hit, (0.0, y_hit[1], y_hit[2]),
                            "slide-to-return")

    # Non-oscillatory block: the crossing time is available in closed form,
    # so stepping would only add cost and a step-limit failure mode.
    if kind == _PLANAR_REAL:
        root = math.sqrt(disc)
        r1 = (c + root) / 2.0
        r2 = (c - root) / 2.0
        k1 = (y3_0 + r1 * y2_0) / (r1 - r2)
        k2 = y2_0 - k1
        t_hit = None
        if k1 != 0.0 and k2 != 0.0 and (k1 > 0.0) != (k2 > 0.0):
            ratio = -k2 / k1
            if ratio > 1.0:
                t_hit = math.log(ratio) / (r1 - r2)
        if t_hit is None:
            rate = r1 if k1 != 0.0 else r2
            if rate < 0.0:
                return _termination("converged",
                                    "slide decays without returning "
                                    "(sliding segment)")
            return _termination("diverged",
                                "slide grows without returning "
                                "(sliding segment)")
        e1 = math.exp(r1 * t_hit)
        e2 = math.exp(r2 * t_hit)
        y3_hit = -k1 * r2 * e1 - k2 * r1 * e2
    else:
        r = c / 2.0
        w2 = y3_0 + r * y2_0
        if w2 >= 0.0:
            if r < 0.0:
                return _termination("converged",
                                    "slide decays without returning "
                                    "(sliding segment)")
            return _termination("diverged",
                                "slide grows without returning "
                                "(sliding segment)")
        t_hit = -y2_0 / w2
        er = math.exp(r * t_hit)
        y3_hit = er * (y3_0 + t_hit * (-d * y2_0 - r * y3_0))
    if abs(y3_hit) > cfg.norm_ceiling:
        return _termination("diverged",
                            "norm above ceiling at the return "
                            "(sliding segment)")
    return SegmentEvent(float(t_hit), (0.0, 0.0, float(y3_hit)),
                        "slide-to-return")


# --------------------------------------------------------------------------
# public event / return-map operations
# --------------------------------------------------------------------------

def first_hit_plane(params: HybridParams, y0,
                    cfg: EventConfig = DEFAULT_EVENT_CONFIG,
                    ) -> Union[SegmentEvent, Termination]:
    """First positive time at which the regular flow from y0 (in
    y1 <= 0) reaches the switching plane, or the reason it never does."""
    y0 = tuple(float(v) for v in y0)
    if y0[0] > 1e-9 * max(1.0, _norm3(y0)):
        raise ValueError("y0 must lie in the half-space y1 <= 0")
    mu, alpha, beta = _hybrid_spectrum(params)
    return _plane_hit_spiral(left_matrix(params.a, params.b),
                             mu, alpha, beta, y0, cfg)


def first_hit_line(params: HybridParams, y0,
                   cfg: EventConfig = DEFAULT_EVENT_CONFIG,
                   ) -> Union[SegmentEvent, Termination]:
    """First positive time at which the sliding flow from y0 (on the
    plane, with y2 > 0) reaches the return line y1 = y2 = 0."""
    y0 = tuple(float(v) for v in y0)
    if abs(y0[0]) > 1e-9 * max(1.0, _norm3(y0)):
        raise ValueError("y0 is not on the switching plane")
    if y0[1] <= 0.0:
        raise ValueError("y0 must have y2 > 0")
    return _line_hit_block(params.c, params.d, y0[1], y0[2], cfg)


def _compose_return(plane_result: Union[SegmentEvent, Termination],
                    c: float, d: float, cfg: EventConfig) -> ReturnOutcome:
    """Finish a first-return computation given the regular-segment result
    (which depends only on a, b, and the start point)."""
    ev1 = plane_result
    if isinstance(ev1, Termination):
        return ReturnOutcome(_outcome_of(ev1), None, ev1.detail)
    y2h, y3h = ev1.y_hit[1], ev1.y_hit[2]
    tol = cfg.secant_tol * max(1.0, _norm3(ev1.y_hit))
    if y2h <= tol:
        # the plane hit landed on the return line itself
        if y3h >= 0.0:
            return ReturnOutcome("converged", None,
                                 "return at or above the origin", (ev1,))
        return ReturnOutcome("returned", y3h,
                             "plane hit on the return line", (ev1,))
    ev2 = _line_hit_block(c, d, y2h, y3h, cfg)
    if isinstance(ev2, Termination):
        return ReturnOutcome(_outcome_of(ev2), None, ev2.detail, (ev1,))
    zeta = ev2.y_hit[2]
    if zeta >= 0.0:
        return ReturnOutcome("converged", None,
                             "return at or above the origin", (ev1, ev2))
    return ReturnOutcome("returned", zeta, "", (ev1, ev2))


def first_return(params: HybridParams, z: float,
                 cfg: EventConfig = DEFAULT_EVENT_CONFIG) -> ReturnOutcome:
    """Compose the regular and sliding segments from (0, 0, z), z < 0,
    and report the third coordinate of the first return to the line."""
    z = float(z)
    if not z < 0.0:
        raise ValueError("z must be negative")
    ev1 = first_hit_plane(params, (0.0, 0.0, z), cfg)
    return _compose_return(ev1, params.c, params.d, cfg)


def _outcome_of(term: Termination) -> str:
    return ("converged" if term.status is LambdaStatus.UNDEFINED_CONVERGED
            else "diverged")


def _result_from_outcome(out: ReturnOutcome) -> LambdaResult:
    if out.status == "returned":
        return _lambda_from_value(-out.zeta, out.detail)
    if out.status == "converged":
        return LambdaResult(LambdaStatus.UNDEFINED_CONVERGED, None, out.detail)
    return LambdaResult(LambdaStatus.UNDEFINED_DIVERGED, None, out.detail)


def return_multiplier(params: HybridParams,
                      cfg: EventConfig = DEFAULT_EVENT_CONFIG) -> LambdaResult:
    """The return-map multiplier: minus the image of -1 under the first
    return to the line, or the reason it is undefined."""
    return _result_from_outcome(first_return(params, -1.0, cfg))


def return_multiplier_normal_form(nf: NormalFormParams,
                                  cfg: EventConfig = DEFAULT_EVENT_CONFIG,
                                  ) -> LambdaResult:
    """Return multiplier of the five-parameter reduction.

    The regular piece must have a complex pair; three real eigenvalues
    raise :class:`NotRotationalError` (that case is decided by the
    eigenvalue classification, not by a return map).
    """
    M = companion_matrix(nf.tau_l, nf.sigma_l, nf.delta_l)
    try:
        eigs = eig3(M)
    except NearDegenerateError as exc:
        raise NotRotationalError(
            f"regular piece has (nearly) repeated eigenvalues: {exc}") from exc
    if isinstance(eigs, ThreeReal):
        raise NotRotationalError(
            f"regular piece has three real eigenvalues {eigs.lams}")
    assert isinstance(eigs, RealPlusPair)
    ev1 = _plane_hit_spiral(M, eigs.real_eig, eigs.alpha, eigs.beta,
                            (0.0, 0.0, -1.0), cfg)
    return _result_from_outcome(_compose_return(ev1, nf.tau_s, nf.delta_s,
                                                cfg))
