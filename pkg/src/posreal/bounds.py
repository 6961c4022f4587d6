"""Lower bounds on the order of positive realizations, from impulse zeros.

Both bounds need the largest index k0 with t_{k0} = 0 followed by strictly
positive values.  ``zero_pattern`` certifies the scan horizon: beyond the
point where the non-dominant terms are enveloped below the unit dominant
contribution, every impulse value is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeImpulse, NotApplicable, PosrealError
from .tf import PartialFraction, TransferFunction, expand, impulse_response, normalize

_HORIZON_GUARD = 1_000_000


@dataclass(frozen=True)
class RootBoundInput:
    """Strictly decreasing positive bases with their polynomial degrees."""

    bases: tuple[float, ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        bases = tuple(float(b) for b in self.bases)
        degrees = tuple(int(d) for d in self.degrees)
        if len(bases) != len(degrees) or not bases:
            raise ValueError("bases and degrees must be nonempty and aligned")
        if any(b <= 0 for b in bases):
            raise ValueError("bases must be positive")
        if any(x <= y for x, y in zip(bases, bases[1:])):
            raise ValueError("bases must be strictly decreasing")
        if any(d < 0 for d in degrees):
            raise ValueError("degrees must be nonnegative")
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "degrees", degrees)


def exp_poly_root_bound(inp: RootBoundInput) -> int:
    """Maximal number of distinct real roots of sum_j p_j(x) * base_j^x."""
    return sum(d + 1 for d in inp.degrees) - 1


@dataclass(frozen=True)
class BoundsReport:
    k0: int
    zero_indices: tuple[int, ...]
    theo2: int | None  # linear bound, cone-generated realizations, positive real poles
    mn2: int | None  # quadratic bound, needs two consecutive zeros
    horizon_used: int


def _envelope(pf: PartialFraction, k: int) -> float:
    total = 0.0
    for term in pf.terms:
        mod = abs(term.pole)
        for i, c in enumerate(term.coeffs, start=1):
            if k < i:
                continue
            total += abs(c) * math.comb(k - 1, i - 1) * mod ** (k - i)
    return total


def _envelope_decreasing(pf: PartialFraction, k: int) -> bool:
    for term in pf.terms:
        mod = abs(term.pole)
        for i in range(1, term.order + 1):
            if k < i:
                return False
            if mod * k / (k + 1 - i) > 1.0:
                return False
    return True


def positivity_horizon(pf: PartialFraction) -> int:
    """Smallest k past which t_k > 0 is certified for a normalized function.

    t_k is at least 1 minus the envelope sum |c| * binom(k-1, i-1) *
    |lam|^(k-i); once that drops below one and keeps shrinking, the tail is
    positive.
    """
    if not pf.is_normalized:
        raise ValueError("positivity horizon requires a normalized partial fraction")
    k = 1
    while True:
        if _envelope(pf, k) < 1.0 and _envelope_decreasing(pf, k):
            return k
        k += 1
        if k > _HORIZON_GUARD:
            raise PosrealError("positivity horizon search exhausted")


def zero_pattern(tf: TransferFunction, tol: float | None = None):
    """Locate the impulse-response zeros below the certified horizon.

    Returns (k0, zero_indices, horizon_used).  The scan runs on the
    normalized response (zeros and signs are scale-invariant); a genuinely
    negative value raises ``NegativeImpulse``.
    """
    pf = normalize(expand(tf))
    horizon = positivity_horizon(pf)
    t = impulse_response(tf, horizon).values
    powers = pf.pole_scale ** np.arange(horizon)
    tnorm = t / (pf.scale_gamma * powers)
    if tol is None:
        tol = 1e-9 * (1.0 + float(np.max(np.abs(tnorm))))
    neg = np.nonzero(tnorm < -tol)[0]
    if neg.size:
        k = int(neg[0]) + 1
        raise NegativeImpulse(k, float(tnorm[neg[0]]))
    zeros = tuple(int(i) + 1 for i in np.nonzero(np.abs(tnorm) <= tol)[0])
    k0 = max(zeros) if zeros else 0
    return k0, zeros, horizon


def cone_order_bound(pf: PartialFraction, k0: int) -> int:
    """Lower bound ceil(k0 / (n-1)) on cone-generated realization order.

    Valid when every non-dominant pole is strictly positive real (any
    orders); each factor row can vanish at most n-1 times, while the first
    k0 Hankel columns each force a zero.
    """
    if not pf.terms:
        raise NotApplicable("no non-dominant poles")
    for term in pf.terms:
        if term.pole.imag != 0 or term.pole.real <= 0:
            raise NotApplicable("all non-dominant poles must be positive real")
    if k0 <= 0:
        return 1
    n = pf.mcmillan_degree
    return max(1, math.ceil(k0 / (n - 1)))


def quadratic_order_bound(N: int) -> int:
    """Smallest M with M(M+1)/2 - 1 + M^2 >= N (about sqrt(2N/3))."""
    if N < 1:
        raise ValueError("N must be positive")
    M = 1
    while M * (M + 1) // 2 - 1 + M * M < N:
        M += 1
    return M


def bounds_report(tf: TransferFunction, tol: float | None = None) -> BoundsReport:
    """Zero pattern plus whichever lower bounds apply."""
    k0, zeros, horizon = zero_pattern(tf, tol)
    pf = normalize(expand(tf))
    try:
        theo2 = cone_order_bound(pf, k0)
    except NotApplicable:
        theo2 = None
    mn2 = quadratic_order_bound(k0) if (k0 >= 2 and (k0 - 1) in zeros) else None
    return BoundsReport(k0, zeros, theo2, mn2, horizon)
