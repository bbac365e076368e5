"""Eigenvalue trichotomy for a boundary equilibrium.

Given the local data (p, q, A, B, observability matrix) the verdict is:
unstable when the right field points away from the surface or when A or
B has a positive real eigenvalue; asymptotically stable when A has three
distinct negative real eigenvalues and the non-zero eigenvalues of B are
complex or both negative; and in the rotational case (A has a complex
pair and a negative real eigenvalue) the question is delegated to the
return multiplier of the associated piecewise-linear hybrid system.
Sign patterns outside these hypotheses, and (nearly) repeated
eigenvalues, yield a Degenerate verdict rather than a guess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import BoundaryData
from .errors import NearDegenerateError, NoZeroEigenvalueError
from .hybrid import HybridParams
from .spectrum import ThreeReal, eig3, pair_sum_product

__all__ = [
    "UnstableRightward", "UnstableEigenvalue", "StableNode", "Rotational",
    "Degenerate", "StabilityVerdict",
    "classify_equilibrium", "hybrid_params_from_spectrum",
    "PBH_TOL", "SIGN_TOL", "DISTINCT_GAP_TOL",
]

# |det(obs)| below PBH_TOL times its row-norm bound fails the
# observability (genericity) requirement.
PBH_TOL = 1e-9
# Eigenvalue sign calls use this tolerance, scaled by the matrix norm;
# values inside the band give Degenerate verdicts.
SIGN_TOL = 1e-10
# Relative pairwise gap below which three real eigenvalues do not count
# as distinct.
DISTINCT_GAP_TOL = 1e-8


@dataclass(frozen=True)
class UnstableRightward:
    """The right field is directed away from the surface (p.q > 0)."""

    ptq: float


@dataclass(frozen=True)
class UnstableEigenvalue:
    """A positive real eigenvalue of the left or sliding Jacobian."""

    matrix: str  # "left" | "sliding"
    eigenvalue: float


@dataclass(frozen=True)
class StableNode:
    """Three distinct negative real eigenvalues of the left Jacobian,
    with the sliding pair complex or both negative: asymptotically
    stable with no return map needed."""

    left_eigs: tuple[float, float, float]
    sliding_pair: tuple[complex, complex]


@dataclass(frozen=True)
class Rotational:
    """The rotational case: stability is decided by the return
    multiplier of the hybrid system with these parameters."""

    params: HybridParams
    alpha: float
    beta: float
    gamma: float
    sliding_pair: tuple[complex, complex]


@dataclass(frozen=True)
class Degenerate:
    """Hypotheses of the trichotomy are not met."""

    reason: str


StabilityVerdict = Union[UnstableRightward, UnstableEigenvalue, StableNode,
                         Rotational, Degenerate]


def hybrid_params_from_spectrum(alpha: float, beta: float, gamma: float,
                                pair_sum: float, pair_product: float,
                                ) -> HybridParams:
    """Hybrid-system parameters from the spectral data of the rotational
    case: a = 2*alpha/gamma, b = (alpha^2 + beta^2)/gamma^2,
    c = pair_sum/gamma, d = pair_product/gamma^2.

    Homogeneous of degree zero in the time scale: multiplying
    (alpha, beta, gamma) by s and (pair_sum, pair_product) by (s, s^2)
    leaves the result unchanged.
    """
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    return HybridParams(
        a=2.0 * alpha / gamma,
        b=(alpha * alpha + beta * beta) / (gamma * gamma),
        c=pair_sum / gamma,
        d=pair_product / (gamma * gamma),
    )


def _pair_from_sum_product(s: float, pr: float) -> tuple[complex, complex]:
    disc = s * s - 4.0 * pr
    if disc >= 0.0:
        root = math.sqrt(disc)
        return (complex((s + root) / 2.0), complex((s - root) / 2.0))
    beta = math.sqrt(-disc) / 2.0
    return (complex(s / 2.0, beta), complex(s / 2.0, -beta))


def classify_equilibrium(bd: BoundaryData) -> StabilityVerdict:
    """Apply the trichotomy to boundary-equilibrium data."""
    if bd.ptq > 0.0:
        return UnstableRightward(bd.ptq)

    # observability (genericity) requirement
    rows = [np.linalg.norm(bd.phi[i]) for i in range(3)]
    det_scale = max(rows[0] * rows[1] * rows[2], 1e-300)
    if abs(bd.det_phi) <= PBH_TOL * det_scale:
        return Degenerate(
            "observability matrix is singular (an eigenvector of the left "
            "Jacobian is orthogonal to the surface normal)")

    norm_a = float(np.linalg.norm(bd.A))
    norm_b = float(np.linalg.norm(bd.B))
    ztol_a = SIGN_TOL * max(1.0, norm_a)
    ztol_b = SIGN_TOL * max(1.0, norm_b)

    try:
        eigs_a = eig3(bd.A)
    except NearDegenerateError:
        return Degenerate("left Jacobian has (nearly) repeated eigenvalues")
    try:
        s_sum, s_prod = pair_sum_product(bd.B)
    except NoZeroEigenvalueError as exc:
        return Degenerate(f"sliding Jacobian lacks its zero eigenvalue: {exc}")
    pair = _pair_from_sum_product(s_sum, s_prod)

    # a positive real eigenvalue of either matrix settles instability
    if isinstance(eigs_a, ThreeReal):
        if eigs_a.lams[2] > ztol_a:
            return UnstableEigenvalue("left", eigs_a.lams[2])
    elif eigs_a.real_eig > ztol_a:
        return UnstableEigenvalue("left", eigs_a.real_eig)
    if pair[0].imag == 0.0:
        top = max(pair[0].real, pair[1].real)
        if top > ztol_b:
            return UnstableEigenvalue("sliding", top)
        if top >= -ztol_b:
            return Degenerate(
                "a non-zero eigenvalue of the sliding Jacobian is zero to "
                "tolerance")

    if isinstance(eigs_a, ThreeReal):
        l1, l2, l3 = eigs_a.lams
        if min(l2 - l1, l3 - l2) <= DISTINCT_GAP_TOL * norm_a:
            return Degenerate(
                "left-Jacobian eigenvalues are not distinct to tolerance")
        if l3 >= -ztol_a:
            return Degenerate(
                "a left-Jacobian eigenvalue is zero to tolerance")
        return StableNode((l1, l2, l3), pair)

    if abs(eigs_a.real_eig) <= ztol_a:
        return Degenerate(
            "the real eigenvalue of the left Jacobian is zero to tolerance")
    gamma = -eigs_a.real_eig
    params = hybrid_params_from_spectrum(eigs_a.alpha, eigs_a.beta, gamma,
                                         s_sum, s_prod)
    return Rotational(params, eigs_a.alpha, eigs_a.beta, gamma, pair)
