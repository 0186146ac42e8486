"""Semigroup flow integration on the unit disk.

Integrates the Cauchy problem  u' = -f(u), u(0) = z0  with an embedded
Dormand-Prince 5(4) pair on the complex scalar, forward or backward in
time.  Forward trajectories of a generator must stay inside the disk;
backward trajectories terminate when they reach the boundary margin or
stagnate at a null point.  Convergence diagnostics (horocycle distance
limit, the M and L statistics, the argument limit) feed the classifier.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import StiffFailureError
from .expr import Expr, compile_expr
from .extrapolate import INFINITE_THRESHOLD, looks_divergent, sequence_limit
from .geometry import horocycle_distance

ATOL = 1e-10
EXIT_MARGIN = 1e-9
STAGNATION_SPEED = 1e-14
MAX_GROWTH = 5.0

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (
    5179 / 57600,
    0.0,
    7571 / 16695,
    393 / 640,
    -92097 / 339200,
    187 / 2100,
    1 / 40,
)


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped flow samples with the reason integration stopped."""

    samples: tuple  # of (t, z)
    direction: str  # forward | backward
    termination: str  # horizon-reached | boundary-exit | stagnation
    generator_id: str = ""
    tolerance: float = ATOL

    @property
    def end(self):
        return self.samples[-1]

    def csv_rows(self):
        """Rows for the trajectory CSV: t, re, im, d, |1-z|."""
        for t, z in self.samples:
            yield t, z.real, z.imag, horocycle_distance(z), abs(1 - z)


@dataclass(frozen=True)
class ConvergenceDiagnostics:
    d_limit: float
    M_estimate: float
    L_estimate: float  # math.inf when divergent
    arg_limit: float
    regime: str  # nontangential | tangential | strongly-tangential | undetermined
    horizon: float = 0.0
    samples: tuple = field(default=(), repr=False)


def _as_callable(f):
    return compile_expr(f) if isinstance(f, Expr) else f


def integrate(f, z0: complex, t_end: float, generator_id: str = "",
              atol: float = ATOL, max_samples: int = 2_000_000) -> Trajectory:
    """Adaptive integration of u' = -f(u) from u(0) = z0 to t = t_end.

    Negative ``t_end`` integrates backward.  Forward runs raise on any
    disk exit (a validated generator cannot leave); backward runs stop
    with termination "boundary-exit" at |u| > 1 - 1e-9.
    """
    fn = _as_callable(f)
    if abs(z0) >= 1.0:
        from .errors import NotInDiskError

        raise NotInDiskError(f"initial point |z0| = {abs(z0)} not inside the disk")
    direction = "backward" if t_end < 0 else "forward"
    sign = -1.0 if t_end < 0 else 1.0
    samples = [(0.0, complex(z0))]
    t, u = 0.0, complex(z0)
    if t_end == 0:
        return Trajectory(tuple(samples), "forward", "horizon-reached",
                          generator_id, atol)

    speed = abs(fn(u))
    h = sign * min(1e-2, abs(t_end) / 10) / max(speed, 1.0)
    k = [0j] * 7
    k[0] = -fn(u)
    termination = "horizon-reached"
    while sign * (t_end - t) > 0:
        if abs(h) > abs(t_end - t):
            h = t_end - t
        if abs(h) < 1e-13 * max(1.0, abs(t)):
            raise StiffFailureError(
                f"step size underflow at t = {t}",
                trajectory=Trajectory(tuple(samples), direction,
                                      "stagnation", generator_id, atol),
            )
        try:
            for i in range(1, 7):
                acc = 0j
                for j, a in enumerate(_A[i]):
                    acc += a * k[j]
                k[i] = -fn(u + h * acc)
            u5 = u + h * sum(b * ki for b, ki in zip(_B5, k))
            u4 = u + h * sum(b * ki for b, ki in zip(_B4, k))
            # tighten near the attracting boundary point: errors there map to
            # errors of size delta/(1-u)^2 in the linearizing coordinate
            # the extra 0.05 keeps the accumulated error over a run well
            # under the per-step budget
            scale = 0.05 * min(1.0, max(abs(1.0 - u) ** 2, 1e-5))
            err = abs(u5 - u4) / scale
            bad = not (err == err)  # NaN guard
        except Exception:
            bad = True
            err = math.inf
            u5 = u
        if direction == "backward" and not bad and abs(u5) >= 1.0:
            # reject steps that land outside the closed disk
            bad = True
        if bad or err > atol:
            h *= 0.5 if bad else max(0.2, 0.9 * (atol / err) ** 0.2)
            continue
        t += h
        u = u5
        samples.append((t, u))
        if len(samples) > max_samples:
            raise StiffFailureError(
                f"sample budget exhausted at t = {t}",
                trajectory=Trajectory(tuple(samples), direction,
                                      "stagnation", generator_id, atol),
            )
        if direction == "forward" and abs(u) >= 1.0:
            raise StiffFailureError(
                f"forward trajectory left the disk at t = {t}",
                trajectory=Trajectory(tuple(samples), direction,
                                      "boundary-exit", generator_id, atol),
            )
        if direction == "backward" and abs(u) > 1.0 - EXIT_MARGIN:
            termination = "boundary-exit"
            break
        k[0] = -fn(u)
        if abs(k[0]) < STAGNATION_SPEED:
            termination = "stagnation"
            break
        if err > 0:
            h *= min(MAX_GROWTH, 0.9 * (atol / err) ** 0.2)
        else:
            h *= MAX_GROWTH
    return Trajectory(tuple(samples), direction, termination, generator_id, atol)


def flow_point(f, z0: complex, t: float) -> complex:
    """F_t(z0) by direct integration."""
    return integrate(f, z0, t).end[1]


def semigroup_residual(f, z: complex, t: float, s: float) -> float:
    """|F_{t+s}(z) - F_t(F_s(z))|; the one-parameter group law defect."""
    fn = _as_callable(f)
    once = flow_point(fn, z, t + s)
    twice = flow_point(fn, flow_point(fn, z, s), t)
    return abs(once - twice)


def _geometric_times(horizon: float, per_decade: int = 8):
    t = 1.0
    ratio = 10.0 ** (1.0 / per_decade)
    while t <= horizon * (1 + 1e-12):
        yield t
        t *= ratio


def convergence_profile(f, z0: complex, horizon: float = 1e4,
                        abel_flow=None) -> ConvergenceDiagnostics:
    """Diagnose how the trajectory from z0 approaches the boundary point 1.

    Samples F_t at geometric times up to ``horizon``.  Direct ODE
    integration is used for t <= 1e4; beyond that an ``abel_flow(z, t)``
    callable must be supplied (exact flow through the Abel function),
    since raw stepping stalls once 1 - u decays polynomially.
    """
    fn = _as_callable(f)
    ode_cap = min(horizon, 1e4)
    times = [t for t in _geometric_times(horizon)]
    d_vals, ratio_vals, m_vals, arg_vals = [], [], [], []
    t_prev, u = 0.0, complex(z0)
    for t in times:
        if t <= ode_cap or abel_flow is None:
            if t > ode_cap:
                break
            u = flow_point(fn, u, t - t_prev)
            t_prev = t
        else:
            u = abel_flow(complex(z0), t)
        one_minus = 1.0 - u
        # once the gap reaches machine noise the quotients below are garbage
        if abs(one_minus) < 1e-15 or 1.0 - abs(u) < 4e-16:
            break
        ratio = (1.0 - abs(u)) / abs(one_minus)
        d_vals.append(horocycle_distance(u))
        ratio_vals.append(ratio)
        m_vals.append(t * ratio)
        arg_vals.append(cmath.phase(one_minus))
    if not d_vals:
        return ConvergenceDiagnostics(0.0, 0.0, 0.0, 0.0, "undetermined", horizon)

    d_limit, d_conv, _ = sequence_limit(d_vals, tol=1e-6)
    d_limit = max(d_limit.real, 0.0)
    M_estimate = max(m_vals)
    if looks_divergent(m_vals):
        L_estimate = math.inf
    else:
        L_val, L_conv, _ = sequence_limit(m_vals, tol=1e-3)
        L_estimate = L_val.real if L_conv else m_vals[-1]
        if abs(L_estimate) > INFINITE_THRESHOLD:
            L_estimate = math.inf
    arg_limit, arg_conv, _ = sequence_limit(arg_vals, tol=1e-4)
    arg_limit = arg_limit.real

    ratio_limit, ratio_conv, _ = sequence_limit(ratio_vals, tol=1e-4)
    ratio_to_zero = ratio_vals[-1] < 1e-3 or (
        ratio_conv and abs(ratio_limit) < 1e-3
    )
    d_decaying = len(d_vals) > 8 and d_vals[-1] < 0.7 * d_vals[len(d_vals) // 2]
    if d_limit > 1e-6 and d_conv and not d_decaying:
        regime = "strongly-tangential"
    elif ratio_to_zero:
        regime = "tangential"
    elif ratio_conv or ratio_vals[-1] > 1e-2:
        regime = "nontangential"
    else:
        regime = "undetermined"
    return ConvergenceDiagnostics(
        d_limit=d_limit,
        M_estimate=M_estimate,
        L_estimate=L_estimate,
        arg_limit=arg_limit,
        regime=regime,
        horizon=horizon,
        samples=tuple(zip(times, d_vals, ratio_vals)),
    )


def backward_extendability(f, z0: complex, horizon: float = 50.0) -> dict:
    """Probe whether the orbit through z0 extends to all negative times.

    A backward orbit that exists for all t < 0 converges to a boundary
    null point of f, so the trajectory reaches the boundary margin with
    |f(u)| small; a non-extendable orbit crosses the boundary at finite
    time with |f| of order one.  Returns ``{extendable, limit_point,
    exit_time}``.
    """
    fn = _as_callable(f)
    traj = integrate(fn, z0, -horizon)
    t_end, u_end = traj.end
    if traj.termination == "horizon-reached" or traj.termination == "stagnation":
        limit = _direction_limit(traj)
        return {"extendable": True, "limit_point": limit, "exit_time": None}
    # boundary-exit: distinguish asymptotic approach from a transversal crossing
    try:
        speed = abs(fn(u_end))
    except Exception:
        speed = math.inf
    if speed < 1e-6:
        return {
            "extendable": True,
            "limit_point": _direction_limit(traj),
            "exit_time": None,
        }
    return {"extendable": False, "limit_point": None, "exit_time": t_end}


def _direction_limit(traj: Trajectory):
    """Unimodular limit direction u/|u| of the trajectory tail.

    Resamples the trajectory at geometric times so the acceleration in
    :func:`sequence_limit` sees the expected power-law deviation.
    """
    samples = traj.samples
    t_last = abs(samples[-1][0])
    if t_last == 0:
        z = samples[-1][1]
        return z / abs(z) if z != 0 else None
    targets = [t_last / 2.0**j for j in range(14)][::-1]
    dirs = []
    times = [abs(t) for t, _ in samples]
    import bisect

    for target in targets:
        idx = min(bisect.bisect_left(times, target), len(samples) - 1)
        if 0 < idx < len(samples):
            t0, z0 = abs(samples[idx - 1][0]), samples[idx - 1][1]
            t1, z1 = abs(samples[idx][0]), samples[idx][1]
            frac = 0.0 if t1 == t0 else (target - t0) / (t1 - t0)
            z = z0 + frac * (z1 - z0)
        else:
            z = samples[idx][1]
        if z != 0:
            dirs.append(z / abs(z))
    if not dirs:
        return None
    if len(dirs) >= 3 and max(abs(d - dirs[-1]) for d in dirs[-3:]) < 1e-9:
        return dirs[-1]
    value, _, _ = sequence_limit(dirs, tol=1e-9)
    if abs(value) == 0:
        return None
    return value / abs(value)
