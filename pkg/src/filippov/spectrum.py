"""Closed-form eigen-analysis of 3x3 matrices.

Everything here is exact-arithmetic-style: the characteristic cubic is
solved by the depressed-cubic discriminant method (trigonometric form for
three real roots, Cardano for one real root plus a complex pair), and the
known zero eigenvalue of a sliding Jacobian is deflated analytically from
the trace and the sum of principal 2x2 minors.

The module also houses the closed-form forward orbit of the companion
system with three distinct negative eigenvalues started at (0, 0, -1),
used to verify that such orbits never re-cross the switching plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (
    EigenvalueOrderViolationError,
    NearDegenerateError,
    NoZeroEigenvalueError,
)

__all__ = [
    "ThreeReal", "RealPlusPair", "EigTriple", "eig3",
    "char_poly_coeffs", "nonzero_pair", "pair_sum_product",
    "NormalFormParams", "normal_form_from_spectrum",
    "companion_matrix", "companion_from_eigs",
    "decay_eigvectors", "decay_coefficients", "eig_gap_product",
    "companion_orbit", "crossing_function", "crossing_indicator",
    "DISC_TOL", "ZERO_EIG_TOL",
]

# Discriminant threshold for root-type classification, applied to the
# norm-scaled matrix so the test is invariant under M -> s*M.
DISC_TOL = 1e-10
# Relative tolerance for "has a zero eigenvalue".
ZERO_EIG_TOL = 1e-8


@dataclass(frozen=True)
class ThreeReal:
    """Three real eigenvalues in ascending order."""

    lams: tuple[float, float, float]


@dataclass(frozen=True)
class RealPlusPair:
    """One real eigenvalue and a complex pair alpha +/- i*beta, beta > 0."""

    real_eig: float
    alpha: float
    beta: float


EigTriple = Union[ThreeReal, RealPlusPair]


def char_poly_coeffs(M) -> tuple[float, float, float]:
    """Coefficients (tr, m, det) of det(lambda I - M) =
    lambda^3 - tr*lambda^2 + m*lambda - det, where m is the sum of the
    principal 2x2 minors."""
    M = np.asarray(M, dtype=float)
    tr = float(np.trace(M))
    m = float(
        M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1]
        + M[0, 0] * M[2, 2] - M[0, 2] * M[2, 0]
        + M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    )
    det = float(np.linalg.det(M))
    return tr, m, det


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _newton_polish(root: float, tr: float, m: float, det: float) -> float:
    for _ in range(2):
        val = ((root - tr) * root + m) * root - det
        slope = (3.0 * root - 2.0 * tr) * root + m
        if slope == 0.0:
            break
        root -= val / slope
    return root


def eig3(M) -> EigTriple:
    """Eigenvalues of a 3x3 real matrix by the depressed-cubic method.

    Classification by the sign of the cubic discriminant of the
    norm-scaled matrix; magnitudes below DISC_TOL raise
    :class:`NearDegenerateError` (repeated roots -- the caller decides).
    """
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    norm = float(np.linalg.norm(M))
    scale = norm if norm > 0.0 else 1.0
    tr, m, det = char_poly_coeffs(M / scale)

    # depressed cubic t^3 + p t + q via lambda = t + tr/3
    p = m - tr * tr / 3.0
    q = -2.0 * tr ** 3 / 27.0 + tr * m / 3.0 - det
    disc = -4.0 * p ** 3 - 27.0 * q * q

    if abs(disc) <= DISC_TOL:
        # repeated roots of the scaled cubic; report approximations
        approx = np.roots([1.0, -tr, m, -det]) * scale
        raise NearDegenerateError(
            f"characteristic cubic has (nearly) repeated roots "
            f"(scaled discriminant {disc:.3e})", roots=tuple(approx))

    if disc > 0.0:
        # three distinct real roots (trigonometric form)
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (2.0 * p) * math.sqrt(-3.0 / p)
        arg = min(1.0, max(-1.0, arg))
        theta = math.acos(arg)
        roots = sorted(
            _newton_polish(r * math.cos((theta - 2.0 * math.pi * k) / 3.0)
                           + tr / 3.0, tr, m, det)
            for k in range(3)
        )
        return ThreeReal(tuple(lam * scale for lam in roots))

    # one real root plus a complex pair (Cardano, cancellation-safe branch)
    s_d = math.sqrt(q * q / 4.0 + p ** 3 / 27.0)
    if q <= 0.0:
        u = _cbrt(-q / 2.0 + s_d)
        v = -p / (3.0 * u) if u != 0.0 else 0.0
    else:
        v = _cbrt(-q / 2.0 - s_d)
        u = -p / (3.0 * v) if v != 0.0 else 0.0
    real_root = _newton_polish(u + v + tr / 3.0, tr, m, det)

    # deflate: quotient quadratic lambda^2 + b1*lambda + b0
    b1 = real_root - tr
    b0 = m + real_root * b1
    rad = 4.0 * b0 - b1 * b1
    if rad <= 0.0:
        approx = np.roots([1.0, -tr, m, -det]) * scale
        raise NearDegenerateError(
            "deflated quadratic is not clearly complex", roots=tuple(approx))
    alpha = -b1 / 2.0
    beta = math.sqrt(rad) / 2.0
    return RealPlusPair(real_root * scale, alpha * scale, beta * scale)


def pair_sum_product(M) -> tuple[float, float]:
    """Sum and product of the two eigenvalues left after deflating the
    zero eigenvalue of M (these equal the trace and the sum of principal
    2x2 minors when one eigenvalue is zero)."""
    M = np.asarray(M, dtype=float)
    tr, m, det = char_poly_coeffs(M)
    norm = max(1.0, float(np.linalg.norm(M)))
    if abs(det) > ZERO_EIG_TOL * norm ** 3:
        raise NoZeroEigenvalueError(
            f"matrix determinant {det:.3e} is not zero to tolerance")
    return tr, m


def nonzero_pair(M, require_distinct: bool = False) -> tuple[complex, complex]:
    """The two non-zero eigenvalues of a matrix with a zero eigenvalue,
    as roots of the quadratic factor of its characteristic polynomial.

    Returned in descending order of real part (then imaginary part).
    With ``require_distinct``, a (nearly) repeated pair raises
    :class:`NearDegenerateError`.
    """
    s, pr = pair_sum_product(M)
    disc = s * s - 4.0 * pr
    scale = max(1.0, abs(s), math.sqrt(abs(pr)))
    if require_distinct and abs(disc) <= (1e-8 * scale) ** 2:
        raise NearDegenerateError(
            f"non-zero eigenvalue pair is (nearly) repeated "
            f"(quadratic discriminant {disc:.3e})",
            roots=(s / 2.0, s / 2.0))
    if disc >= 0.0:
        root = math.sqrt(disc)
        lam1 = complex((s + root) / 2.0)
        lam2 = complex((s - root) / 2.0)
    else:
        beta = math.sqrt(-disc) / 2.0
        lam1 = complex(s / 2.0, beta)
        lam2 = complex(s / 2.0, -beta)
    return (lam1, lam2)


# --------------------------------------------------------------------------
# characteristic-polynomial coefficients of the scaled reduction
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalFormParams:
    """Free coefficients of the five-parameter piecewise-linear reduction.

    tau_l, sigma_l, delta_l are the characteristic coefficients of the
    regular-piece matrix, tau_s and delta_s those of the planar sliding
    block.  Convention: delta_s is the *product* of the two non-zero
    sliding eigenvalues divided by gamma squared, and the sliding block
    is built as [[tau_s, 1], [-delta_s, 0]], whose characteristic
    polynomial is lambda^2 - tau_s*lambda + delta_s -- i.e. the constant
    term carries a plus sign, so the block has exactly those eigenvalues.
    (Writing the full cubic as lambda^3 - tau*lambda^2 - delta*lambda
    flips the sign of delta; that convention is not used here.)
    """

    tau_l: float
    sigma_l: float
    delta_l: float
    tau_s: float
    delta_s: float


def normal_form_from_spectrum(alpha: float, beta: float, gamma: float,
                              pair_sum: float, pair_product: float,
                              ) -> NormalFormParams:
    """Characteristic coefficients after rescaling time so the real
    eigenvalue of the regular piece becomes -1.

    alpha +/- i*beta and -gamma are the regular-piece eigenvalues
    (beta > 0, gamma > 0); pair_sum and pair_product describe the
    non-zero sliding eigenvalues.
    """
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    rot = (alpha * alpha + beta * beta) / (gamma * gamma)
    return NormalFormParams(
        tau_l=2.0 * alpha / gamma - 1.0,
        sigma_l=-2.0 * alpha / gamma + rot,
        delta_l=-rot,
        tau_s=pair_sum / gamma,
        delta_s=pair_product / (gamma * gamma),
    )


def companion_matrix(tau: float, sigma: float, delta: float) -> np.ndarray:
    """The 3x3 companion-form matrix with characteristic polynomial
    lambda^3 - tau*lambda^2 + sigma*lambda - delta."""
    return np.array([[tau, 1.0, 0.0],
                     [-sigma, 0.0, 1.0],
                     [delta, 0.0, 0.0]])


def companion_from_eigs(lams) -> np.ndarray:
    l1, l2, l3 = (float(v) for v in lams)
    return companion_matrix(l1 + l2 + l3,
                            l1 * l2 + l1 * l3 + l2 * l3,
                            l1 * l2 * l3)


# --------------------------------------------------------------------------
# closed-form decay orbit for three distinct negative eigenvalues
# --------------------------------------------------------------------------

def _check_ordered_negative(lams) -> tuple[float, float, float]:
    l1, l2, l3 = (float(v) for v in lams)
    if not (l1 < l2 < l3 < 0.0):
        raise EigenvalueOrderViolationError(
            f"eigenvalues must satisfy l1 < l2 < l3 < 0, got {(l1, l2, l3)}")
    return l1, l2, l3


def decay_eigvectors(lams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigenvectors of the companion matrix for the given triple: the
    vector for eigenvalue l_i is (1, -(l_j + l_k), l_j * l_k) with j, k
    the complementary indices."""
    l1, l2, l3 = _check_ordered_negative(lams)
    v1 = np.array([1.0, -(l2 + l3), l2 * l3])
    v2 = np.array([1.0, -(l3 + l1), l3 * l1])
    v3 = np.array([1.0, -(l1 + l2), l1 * l2])
    return v1, v2, v3


def eig_gap_product(lams) -> float:
    """(l1 - l2)(l2 - l3)(l3 - l1); positive for an ordered triple."""
    l1, l2, l3 = _check_ordered_negative(lams)
    return (l1 - l2) * (l2 - l3) * (l3 - l1)


def decay_coefficients(lams) -> tuple[float, float, float]:
    """Expansion coefficients of the orbit started at (0, 0, -1) in the
    eigenvector basis of :func:`decay_eigvectors`."""
    l1, l2, l3 = _check_ordered_negative(lams)
    gap = eig_gap_product(lams)
    return (l2 - l3) / gap, (l3 - l1) / gap, (l1 - l2) / gap


def companion_orbit(lams, t):
    """Closed-form forward orbit, from (0, 0, -1), of the companion
    system whose eigenvalues are the given strictly ordered negative
    triple.  ``t`` may be a scalar (returns shape (3,)) or an array
    (returns shape (3, n)).

    Evaluated as (0, 0, -1) + sum_i k_i expm1(l_i t) v_i, which is the
    eigenbasis expansion with the exact initial condition pulled out;
    this avoids the cancellation the plain exponential form suffers for
    clustered eigenvalues and small t.
    """
    l1, l2, l3 = _check_ordered_negative(lams)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("t must be non-negative")
    k1, k2, k3 = decay_coefficients(lams)
    v1, v2, v3 = decay_eigvectors(lams)
    e1 = np.expm1(l1 * t)
    e2 = np.expm1(l2 * t)
    e3 = np.expm1(l3 * t)
    out = (k1 * np.multiply.outer(v1, e1)
           + k2 * np.multiply.outer(v2, e2)
           + k3 * np.multiply.outer(v3, e3))
    out[2] -= 1.0
    # the first component is sign-critical at both ends of the t range:
    # the factored form is exact at t = 0 and keeps the (negative) sign
    # where the expm1 expansion would leave only cancellation residue
    out[0] = np.exp(l3 * t) * _indicator(l1, l2, l3, t) / eig_gap_product(lams)
    return out if t.ndim else out.reshape(3)


def crossing_function(lams, t):
    """The exponential combination equal to the gap product times the
    first orbit component; its sign decides whether the decay orbit can
    re-cross the switching plane.  For an ordered negative triple it
    vanishes at t = 0 and is strictly negative for t > 0 (the gap
    product is positive, and the first component stays negative).

    Computed as exp(l3 t) times :func:`crossing_indicator`; the
    prefactor can underflow to zero for strongly decaying triples at
    large t, where the indicator still carries the sign.
    """
    l1, l2, l3 = _check_ordered_negative(lams)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("t must be non-negative")
    out = np.exp(l3 * t) * _indicator(l1, l2, l3, t)
    return out if t.ndim else float(out)


def _indicator(l1: float, l2: float, l3: float, t):
    a = l1 - l3
    b = l2 - l3
    return b * np.expm1(a * t) - a * np.expm1(b * t)


def crossing_indicator(lams, t):
    """Same sign as the first orbit component (and as
    :func:`crossing_function`), with the positive decay prefactor
    removed: b*expm1(a t) - a*expm1(b t) for a = l1 - l3, b = l2 - l3.
    Cannot underflow on bounded t, so strict-sign checks stay honest
    where the orbit itself is denormal."""
    l1, l2, l3 = _check_ordered_negative(lams)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("t must be non-negative")
    out = _indicator(l1, l2, l3, t)
    return out if t.ndim else float(out)
