"""Asymptotic classification of a generator at its attracting boundary
point: hyperbolic versus parabolic type, the exponents (alpha, mu), the
measured convergence regime, boundary Taylor data, and the criterion
inequalities (tangency, half-plane boundedness, rigidity).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .abel import LinearizationModel, abel_flow, linearize
from .errors import InversionFailureError
from .expr import Expr, Var, boundary_limit, const, div, mul, power, sub
from .extrapolate import looks_divergent, sequence_limit
from .flow import ConvergenceDiagnostics, convergence_profile

BETA_THRESHOLD = 1e-8
ANGLE_SLACK = 0.02


@dataclass(frozen=True)
class AsymptoticProfile:
    """Boundary data of a semigroup generator at the attracting point 1.

    ``taylor_a`` and ``taylor_b`` are the coefficients of the expansion
    f(z) = taylor_a (1-z)^2 + taylor_b (1-z)^3 + o((1-z)^3) in powers of
    1-z, when those limits exist (None otherwise).
    """

    beta: float
    type: str  # hyperbolic | parabolic
    alpha: float
    mu: complex
    a: complex  # -1/mu
    regime: str
    taylor_a: complex | None
    taylor_b: complex | None
    diagnostics: ConvergenceDiagnostics = None
    model: LinearizationModel = None


def classify(f: Expr, horizon: float = 1e6) -> AsymptoticProfile:
    """Full asymptotic profile of a validated generator."""
    one_minus_z = sub(const(1), Var())
    beta_est = boundary_limit(div(f, sub(Var(), const(1))), "radial", tol=1e-8)
    beta = max(beta_est.value.real, 0.0)
    kind = "hyperbolic" if beta > BETA_THRESHOLD else "parabolic"

    model = linearize(f)
    alpha, mu = model.alpha, model.mu
    a = -1.0 / mu if mu != 0 else complex(math.inf)

    # hyperbolic orbits reach 1 exponentially fast; past t ~ 30/beta the
    # gap 1 - F_t drops below machine resolution and diagnostics degrade
    profile_horizon = horizon
    if kind == "hyperbolic":
        profile_horizon = min(horizon, max(50.0, 30.0 / beta))
    diag = convergence_profile(f, 0j, horizon=profile_horizon, abel_flow=model.flow)

    ta_est = boundary_limit(div(f, power(one_minus_z, const(2))), "radial", tol=1e-7)
    taylor_a = ta_est.value if ta_est.converged and not ta_est.infinite else None
    taylor_b = None
    if taylor_a is not None:
        remainder = div(
            sub(f, _scaled_square(taylor_a)),
            power(one_minus_z, const(3)),
        )
        tb_est = boundary_limit(remainder, "radial", tol=1e-7)
        if tb_est.converged and not tb_est.infinite:
            taylor_b = tb_est.value
    return AsymptoticProfile(
        beta=beta,
        type=kind,
        alpha=0.0 if kind == "hyperbolic" else alpha,
        mu=mu,
        a=a,
        regime=diag.regime,
        taylor_a=taylor_a,
        taylor_b=taylor_b,
        diagnostics=diag,
        model=model,
    )


def _scaled_square(coeff: complex) -> Expr:
    one_minus_z = sub(const(1), Var())
    return mul(const(coeff), power(one_minus_z, const(2)))


def tangency_criterion(profile: AsymptoticProfile) -> dict:
    """Tangential convergence test: |arg(-a)| = (pi/2) alpha.

    Applies to parabolic profiles with finite a; the verdict carries the
    margin and is cross-checked against the measured regime.
    """
    if profile.type != "parabolic" or not _finite(profile.a):
        return {"tangential_expected": False, "applicable": False, "margin": None}
    lhs = abs(cmath.phase(-profile.a))
    rhs = (math.pi / 2) * profile.alpha
    margin = abs(lhs - rhs)
    expected = margin < ANGLE_SLACK
    measured = profile.regime in ("tangential", "strongly-tangential")
    return {
        "tangential_expected": expected,
        "applicable": True,
        "margin": margin,
        "agrees_with_regime": expected == measured,
    }


def halfplane_criterion_M(f: Expr, z_grid=None, horizon: float = 1e5,
                          model: LinearizationModel | None = None) -> dict:
    """Boundedness of the statistic M(z) = sup_t t(1-|F_t|)/|1-F_t|.

    The image h(Delta) lies in a horizontal half-plane exactly when the
    statistic stays bounded; a statistic still growing at the horizon is
    reported unbounded, sublinear undecided growth is flagged
    inconclusive.
    """
    if model is None:
        model = linearize(f)
    if z_grid is None:
        z_grid = [0j, 0.4 + 0j, -0.3 + 0.2j, 0.1 - 0.4j]
    overall_bounded = True
    inconclusive = False
    worst = 0.0
    for z0 in z_grid:
        stats = []
        t = 1.0
        while t <= horizon * (1 + 1e-9):
            try:
                u = abel_flow(model, complex(z0), t)
            except InversionFailureError:
                break
            gap = abs(1.0 - u)
            if gap < 1e-14:
                break
            stats.append(t * (1.0 - abs(u)) / gap)
            t *= 2.0
        if not stats:
            inconclusive = True
            continue
        worst = max(worst, max(stats))
        if looks_divergent(stats):
            overall_bounded = False
            continue
        value, converged, _ = sequence_limit(stats, tol=1e-3)
        if not converged:
            tail = stats[-5:]
            growing = all(b > a for a, b in zip(tail, tail[1:]))
            if growing and tail[-1] > 2.0 * tail[0]:
                overall_bounded = False
            else:
                inconclusive = True
    return {
        "bounded": overall_bounded,
        "max_statistic": worst,
        "inconclusive": inconclusive,
    }


def rigidity_criterion(profile: AsymptoticProfile) -> dict:
    """Half-plane prediction from the cubic boundary expansion.

    For alpha = 1 with f = a (1-z)^2 + b (1-z)^3 + o((1-z)^3), the image
    of the Abel function lies in a horizontal half-plane exactly when
    Re(conj(a) b) <= 0; the automorphism group case is Re a = 0, b = 0.
    """
    ta, tb = profile.taylor_a, profile.taylor_b
    if ta is None or tb is None:
        return {
            "halfplane_predicted": None,
            "is_automorphism_group": None,
            "applicable": False,
            "re_ab": None,
        }
    re_ab = (ta.conjugate() * tb).real
    return {
        "halfplane_predicted": re_ab <= 1e-9,
        "is_automorphism_group": abs(ta.real) < 1e-9 and abs(tb) < 1e-9,
        "applicable": True,
        "re_ab": re_ab,
    }


def theorem_argument_bound(profile: AsymptoticProfile) -> dict:
    """|arg mu| <= (pi/2) min(alpha, 2 - alpha), with the uniform slack."""
    if profile.type != "parabolic":
        return {"holds": True, "applicable": False, "margin": None}
    bound = (math.pi / 2) * min(profile.alpha, 2.0 - profile.alpha)
    lhs = abs(cmath.phase(profile.mu))
    return {
        "holds": lhs <= bound + ANGLE_SLACK,
        "applicable": True,
        "margin": bound + ANGLE_SLACK - lhs,
    }


def _finite(v: complex) -> bool:
    return v == v and abs(v) != math.inf
