"""Sequence acceleration used by every limit estimator in the package.

The samplers in this package produce values along geometric schedules
(z_k = 1 - 2^-k e^{i theta}, t_k = t0 * 2^k, ...), so the raw sequences
behave like  s_k = L + c q^k  with an unknown ratio q.  A single Aitken
delta-squared pass removes the leading term; convergence is declared when
three consecutive accelerated values agree within the tolerance.
"""

from __future__ import annotations

INFINITE_THRESHOLD = 1e8
ZERO_THRESHOLD = 1e-10


def aitken(seq):
    """One delta-squared pass over a sequence of complex numbers."""
    out = []
    for a, b, c in zip(seq, seq[1:], seq[2:]):
        denom = c - 2 * b + a
        if abs(denom) < 1e-300:
            out.append(c)
        else:
            out.append(c - (c - b) ** 2 / denom)
    return out


def sequence_limit(seq, tol=1e-6):
    """Estimate the limit of ``seq``; returns ``(value, converged, used)``.

    Scans the accelerated sequence for the first window of three
    consecutive values that agree within ``tol``; ``used`` is the number
    of raw samples consumed up to that point.  Falls back to the plain
    sequence when it settles on its own (constant tails defeat Aitken
    because the denominator degenerates).
    """
    seq = list(seq)
    n = len(seq)
    if n == 0:
        return 0j, False, 0
    if n < 4:
        return seq[-1], False, n

    # Constant tail short-circuit: noise-level differences would only be
    # amplified by acceleration.
    for i in range(2, n):
        window = seq[i - 2 : i + 1]
        spread = max(abs(window[0] - window[2]), abs(window[1] - window[2]))
        scale = max(1.0, abs(window[2]))
        if spread <= 1e-13 * scale:
            return window[2], True, i + 1

    acc = aitken(seq)
    for i in range(2, len(acc)):
        a, b, c = acc[i - 2], acc[i - 1], acc[i]
        if max(abs(a - c), abs(b - c)) <= tol * max(1.0, abs(c)):
            return c, True, i + 3

    # Last resort: the raw sequence itself may meet the tolerance.
    for i in range(2, n):
        a, b, c = seq[i - 2], seq[i - 1], seq[i]
        if max(abs(a - c), abs(b - c)) <= tol * max(1.0, abs(c)):
            return c, True, i + 1

    return acc[-1] if acc else seq[-1], False, n


def looks_divergent(seq, growth=1.05):
    """True when the (real) sequence grows geometrically or beyond 1e8."""
    seq = [abs(s) for s in seq]
    if not seq:
        return False
    if seq[-1] > INFINITE_THRESHOLD:
        return True
    tail = seq[-4:]
    if len(tail) < 4:
        return False
    ratios = [b / a for a, b in zip(tail, tail[1:]) if a > 0]
    return len(ratios) == 3 and all(r > growth for r in ratios)
