"""Transfer-function algebra for strictly proper SISO systems.

Everything downstream works on the partial-fraction form

    H(z) = g/(z - l0) + sum_j sum_i c_j^(i) / (z - lam_j)^i,

with a unique dominant pole l0 of maximal modulus. ``normalize`` rescales
the variable and the gain so that the dominant term becomes exactly
1/(z - 1); ``shift_once`` removes the leading impulse value, mapping the
tail t_2, t_3, ... back onto the same form with contracted coefficients.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ExpansionFailed,
    MultiplePoleUnsupported,
    NonpositiveDominantResidue,
    NotCoprime,
    NotPrimitive,
    NotStrictlyProper,
    ZeroDenominator,
)

# Conjugate pairing and dominance ties are resolved at relative 1e-9; the
# expansion must reproduce the input at relative 1e-8 on a test circle.
PAIR_RTOL = 1e-9
DOMINANCE_RTOL = 1e-9
RECONSTRUCT_RTOL = 1e-8

# Root clusters are formed at increasing radii until the reconstruction
# check passes; the first rung keeps well-separated simple poles intact,
# the later rungs absorb the eigenvalue splitting of multiple roots.
_CLUSTER_LADDER = (1e-9, 1e-7, 1e-5, 1e-3)


class _RetryExpansion(Exception):
    """Internal: current cluster radius produced an inconsistent expansion."""


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with coefficients in ascending powers."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        cs = tuple(float(c) for c in self.coeffs)
        if not cs:
            raise ValueError("empty coefficient list (the zero polynomial is [0])")
        if not all(math.isfinite(c) for c in cs):
            raise ValueError("non-finite polynomial coefficient")
        if len(cs) > 1 and cs[-1] == 0.0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        acc = z * 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc


@dataclass(frozen=True)
class TransferFunction:
    """Strictly proper rational function with a monic denominator."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den.degree < 1:
            raise NotStrictlyProper("denominator must have degree at least 1")
        if self.den.coeffs[-1] != 1.0:
            raise ValueError("denominator must be monic")
        if self.num.degree >= self.den.degree:
            raise NotStrictlyProper("numerator degree must be below denominator degree")

    @property
    def mcmillan_degree(self) -> int:
        return self.den.degree

    def __call__(self, z):
        return self.num(z) / self.den(z)


@dataclass(frozen=True)
class PoleTerm:
    """One pole with its chain of coefficients c^(1) ... c^(order)."""

    pole: complex
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        cs = tuple(complex(c) for c in self.coeffs)
        if not cs:
            raise ValueError("pole term needs at least one coefficient")
        if cs[-1] == 0:
            raise ValueError("top coefficient of a pole term must be nonzero")
        object.__setattr__(self, "pole", complex(self.pole))
        object.__setattr__(self, "coeffs", cs)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def top(self) -> complex:
        return self.coeffs[-1]


@dataclass(frozen=True)
class PartialFraction:
    """Dominant term plus the list of contracted pole terms.

    ``scale_gamma`` and ``pole_scale`` record the gain and variable scalings
    applied by ``normalize`` so the original function can be recovered.
    """

    dominant_pole: float
    dominant_residue: float
    terms: tuple[PoleTerm, ...]
    scale_gamma: float = 1.0
    pole_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def mcmillan_degree(self) -> int:
        return 1 + sum(t.order for t in self.terms)

    @property
    def is_normalized(self) -> bool:
        return (
            abs(self.dominant_pole - 1.0) <= 1e-12
            and abs(self.dominant_residue - 1.0) <= 1e-12
        )

    def evaluate(self, z):
        acc = self.dominant_residue / (z - self.dominant_pole)
        for t in self.terms:
            base = z - t.pole
            for i, c in enumerate(t.coeffs, start=1):
                acc = acc + c / base**i
        return acc


@dataclass(frozen=True, eq=False)
class ImpulsePrefix:
    """Leading impulse-response values t_1 ... t_K."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def _trimmed(coeffs) -> tuple[float, ...]:
    cs = [float(c) for c in coeffs]
    while cs and cs[-1] == 0.0:
        cs.pop()
    return tuple(cs)


def companion_roots(monic_coeffs) -> np.ndarray:
    """Eigenvalues of the companion matrix of a monic ascending polynomial."""
    coeffs = np.asarray(monic_coeffs, dtype=float)
    n = len(coeffs) - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    comp = np.zeros((n, n))
    if n > 1:
        comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -coeffs[:-1]
    return np.linalg.eigvals(comp)


def from_coefficients(num, den) -> TransferFunction:
    """Build a validated transfer function from ascending coefficient lists.

    The denominator is rescaled to monic form (the numerator is divided by
    the same factor, so the function is unchanged) and near-common factors
    are rejected.
    """
    den_c = _trimmed(den)
    if not den_c:
        raise ZeroDenominator("denominator is identically zero")
    num_c = _trimmed(num) or (0.0,)
    if len(num_c) >= len(den_c):
        raise NotStrictlyProper(
            f"numerator degree {len(num_c) - 1} not below denominator degree {len(den_c) - 1}"
        )
    if num_c == (0.0,):
        raise NotCoprime("zero numerator has no poles in common position")
    lead = den_c[-1]
    num_c = tuple(c / lead for c in num_c)
    den_c = tuple(c / lead for c in den_c[:-1]) + (1.0,)
    tf = TransferFunction(Polynomial(num_c), Polynomial(den_c))
    _reject_common_roots(tf)
    return tf


def _reject_common_roots(tf: TransferFunction) -> None:
    # Resultant-style test: the resultant of num and den is the product of
    # num over den's roots; a vanishing factor flags a common root.
    roots = companion_roots(tf.den.coeffs)
    nc = np.asarray(tf.num.coeffs)
    for beta in roots:
        scale = float(np.sum(np.abs(nc) * np.abs(beta) ** np.arange(len(nc))))
        if abs(tf.num(beta)) <= 1e-9 * (scale + 1e-300):
            raise NotCoprime(f"numerator vanishes at denominator root {beta:.12g}")


# ---------------------------------------------------------------------------
# partial-fraction expansion


def _cluster_indices(roots: np.ndarray, radius: float) -> list[list[int]]:
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _polyder(coeffs: np.ndarray) -> np.ndarray:
    return coeffs[1:] * np.arange(1, len(coeffs))


def _refine_root(coeffs: np.ndarray, z0: complex, mult: int) -> complex:
    # lam is a simple root of the (mult-1)-th derivative; plain Newton there.
    d = np.asarray(coeffs, dtype=complex)
    for _ in range(mult - 1):
        d = _polyder(d)
    dp = _polyder(d)

    def val(poly, z):
        acc = 0j
        for c in poly[::-1]:
            acc = acc * z + c
        return acc

    z = complex(z0)
    best, best_val = z, abs(val(d, z))
    for _ in range(12):
        fp = val(dp, z)
        if fp == 0:
            break
        z = z - val(d, z) / fp
        fv = abs(val(d, z))
        if fv < best_val:
            best, best_val = z, fv
    if z0.imag == 0:
        return complex(best.real, 0.0)
    return best


def _taylor_at(coeffs, z0: complex, k: int) -> np.ndarray:
    """First k Taylor coefficients of a polynomial at z0 (synthetic division)."""
    work = [complex(c) for c in reversed(coeffs)]
    out = []
    for _ in range(k):
        if not work:
            out.append(0j)
            continue
        acc = 0j
        quot = []
        for c in work:
            acc = acc * z0 + c
            quot.append(acc)
        out.append(acc)
        work = quot[:-1]
    return np.array(out)


def _series_mul_linear(series: np.ndarray, a: complex) -> np.ndarray:
    # multiply the truncated series by (a + w)
    out = series * a
    out[1:] += series[:-1]
    return out


def _series_div(num_t: np.ndarray, den_t: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros(k, dtype=complex)
    for s in range(k):
        acc = num_t[s]
        for t in range(1, s + 1):
            acc -= den_t[t] * out[s - t]
        out[s] = acc / den_t[0]
    return out


def _coeffs_at_cluster(tf, clusters, idx: int) -> np.ndarray:
    """Coefficients c^(1)..c^(m) at cluster idx, via truncated Taylor division."""
    lam, mult = clusters[idx]
    den_rest = np.zeros(mult, dtype=complex)
    den_rest[0] = 1.0
    for j, (mu, mj) in enumerate(clusters):
        if j == idx:
            continue
        for _ in range(mj):
            den_rest = _series_mul_linear(den_rest, lam - mu)
    num_t = _taylor_at(tf.num.coeffs, lam, mult)
    series = _series_div(num_t, den_rest, mult)
    # series[s] is the coefficient of (z - lam)^(s - mult); c^(i) = series[mult - i]
    return series[::-1]


def _term_sort_key(term: PoleTerm):
    return (term.pole.real, abs(term.pole.imag), term.pole.imag < 0)


def _expand_at_radius(tf: TransferFunction, roots: np.ndarray, radius: float) -> PartialFraction:
    groups = _cluster_indices(roots, radius)
    raw = [(np.mean(roots[g]), len(g)) for g in groups]

    clusters: list[tuple[complex, int]] = []
    uppers: list[tuple[complex, int]] = []
    lowers: list[tuple[complex, int]] = []
    for center, mult in raw:
        if abs(center.imag) <= radius:
            lam = _refine_root(np.asarray(tf.den.coeffs), complex(center.real, 0.0), mult)
            clusters.append((lam, mult))
        elif center.imag > 0:
            uppers.append((center, mult))
        else:
            lowers.append((center, mult))
    if len(uppers) != len(lowers):
        raise _RetryExpansion("unpaired complex clusters")
    used = [False] * len(lowers)
    for center, mult in uppers:
        match = None
        for i, (lc, lm) in enumerate(lowers):
            if not used[i] and lm == mult and abs(lc.conjugate() - center) <= 4 * radius + 1e-12:
                match = i
                break
        if match is None:
            raise _RetryExpansion("no conjugate partner for a complex cluster")
        used[match] = True
        lam = 0.5 * (center + lowers[match][0].conjugate())
        lam = _refine_root(np.asarray(tf.den.coeffs), lam, mult)
        clusters.append((lam, mult))
        clusters.append((lam.conjugate(), mult))

    if sum(m for _, m in clusters) != tf.mcmillan_degree:
        raise _RetryExpansion("cluster multiplicities inconsistent")

    mods = [abs(lam) for lam, _ in clusters]
    maxmod = max(mods)
    dominant = [i for i, m in enumerate(mods) if m >= maxmod * (1.0 - DOMINANCE_RTOL)]
    if len(dominant) != 1:
        raise NotPrimitive("dominant pole (maximal modulus) is not unique")
    d = dominant[0]
    lam0, mult0 = clusters[d]
    if lam0.imag != 0:
        raise NotPrimitive("dominant pole is not real")
    if lam0.real <= 0:
        raise NotPrimitive("dominant pole is not positive")
    if mult0 != 1:
        raise NotPrimitive("dominant pole is not simple")

    # A pole this close to the dominant one is numerically indistinguishable
    # from a multiple dominant root, which the construction cannot handle.
    for i, (mu, _) in enumerate(clusters):
        if i != d and abs(mu - lam0) <= 1e-6 * (1.0 + abs(lam0)):
            raise NotPrimitive("dominant pole is not separated (possibly multiple)")

    gamma_c = _coeffs_at_cluster(tf, clusters, d)[0]
    if abs(gamma_c.imag) > 1e-8 * (1.0 + abs(gamma_c)):
        raise _RetryExpansion("dominant residue has a nontrivial imaginary part")
    gamma = float(gamma_c.real)
    if gamma <= 0:
        raise NonpositiveDominantResidue(f"dominant residue {gamma:.6g} is not positive")

    terms: list[PoleTerm] = []
    for i, (lam, mult) in enumerate(clusters):
        if i == d or lam.imag < 0:
            continue
        coeffs = _coeffs_at_cluster(tf, clusters, i)
        if lam.imag == 0:
            scales = 1.0 + np.abs(coeffs)
            if np.any(np.abs(coeffs.imag) > 1e-7 * scales):
                raise _RetryExpansion("real pole with non-real coefficients")
            real_coeffs = tuple(complex(c.real, 0.0) for c in coeffs)
            terms.append(PoleTerm(lam, real_coeffs))
        else:
            terms.append(PoleTerm(lam, tuple(coeffs)))
            terms.append(PoleTerm(lam.conjugate(), tuple(c.conjugate() for c in coeffs)))

    pf = PartialFraction(
        dominant_pole=float(lam0.real),
        dominant_residue=gamma,
        terms=tuple(sorted(terms, key=_term_sort_key)),
    )

    r = 2.0 * max(1.0, maxmod)
    sample = r * np.exp(2j * np.pi * np.arange(32) / 32)
    href = tf(sample)
    resid = np.abs(pf.evaluate(sample) - href) / (1.0 + np.abs(href))
    if np.max(resid) > RECONSTRUCT_RTOL:
        raise _RetryExpansion(f"reconstruction residual {np.max(resid):.3g}")
    return pf


def expand(tf: TransferFunction) -> PartialFraction:
    """Partial-fraction expansion with a unique dominant pole.

    Poles come from the companion-matrix eigenvalues; conjugate pairs are
    symmetrized exactly and multiple roots are recovered by clustering at
    increasing radii until the expansion reproduces the input on a test
    circle.
    """
    roots = companion_roots(tf.den.coeffs)
    scale = 1.0 + float(np.max(np.abs(roots)))
    failure: Exception | None = None
    for rung in _CLUSTER_LADDER:
        try:
            return _expand_at_radius(tf, roots, rung * scale)
        except _RetryExpansion as exc:
            failure = exc
    raise ExpansionFailed(f"no consistent pole clustering found: {failure}")


# ---------------------------------------------------------------------------
# normalization and the shift recurrence


def normalize(pf: PartialFraction) -> PartialFraction:
    """Rescale so the dominant term is exactly 1/(z - 1).

    The variable substitution z -> l0*z divides every pole by l0; dividing
    the whole function by g/l0 makes the dominant residue 1, which sends an
    order-i coefficient c to c / (g * l0**(i-1)).  The impulse response
    transforms as t_k = g * l0**(k-1) * t~_k.
    """
    gamma = pf.dominant_residue
    lam0 = pf.dominant_pole
    if lam0 <= 0:
        raise NotPrimitive("dominant pole must be positive to normalize")
    if gamma <= 0:
        raise NonpositiveDominantResidue("dominant residue must be positive to normalize")
    terms = tuple(
        PoleTerm(
            t.pole / lam0,
            tuple(c / (gamma * lam0 ** (i - 1)) for i, c in enumerate(t.coeffs, start=1)),
        )
        for t in pf.terms
    )
    return PartialFraction(
        dominant_pole=1.0,
        dominant_residue=1.0,
        terms=terms,
        scale_gamma=pf.scale_gamma * gamma,
        pole_scale=pf.pole_scale * lam0,
    )


def denormalize(pf: PartialFraction) -> PartialFraction:
    """Invert ``normalize``, restoring the recorded gain and pole location."""
    gamma = pf.scale_gamma
    lam0 = pf.pole_scale
    terms = tuple(
        PoleTerm(
            t.pole * lam0,
            tuple(c * gamma * lam0 ** (i - 1) for i, c in enumerate(t.coeffs, start=1)),
        )
        for t in pf.terms
    )
    return PartialFraction(
        dominant_pole=pf.dominant_pole * lam0,
        dominant_residue=pf.dominant_residue * gamma,
        terms=terms,
    )


def impulse_response(tf: TransferFunction, K: int) -> ImpulsePrefix:
    """First K impulse-response values from the long-division recurrence.

    With H = (p_1 z^(n-1)+...+p_n)/(z^n+q_1 z^(n-1)+...+q_n), the values obey
    t_k = p_k - sum_{i=1..min(k-1,n)} q_i t_{k-i}, with p_k = 0 for k > n.
    """
    if K < 1:
        raise ValueError("K must be positive")
    n = tf.mcmillan_degree
    p = np.zeros(n + 1)
    for k in range(1, n + 1):
        idx = n - k
        if idx <= tf.num.degree:
            p[k] = tf.num.coeffs[idx]
    q = np.array([tf.den.coeffs[n - i] for i in range(1, n + 1)])
    t = np.zeros(K)
    for k in range(1, K + 1):
        acc = p[k] if k <= n else 0.0
        w = min(k - 1, n)
        if w:
            acc -= float(np.dot(q[:w], t[k - 2 :: -1][:w]))
        t[k - 1] = acc
    return ImpulsePrefix(t)


def _require_normalized(pf: PartialFraction) -> None:
    if not pf.is_normalized:
        raise ValueError("operation requires a normalized partial fraction")


def leading_impulse(pf: PartialFraction) -> float:
    """t_1 of a normalized partial fraction: one plus the order-1 coefficients."""
    _require_normalized(pf)
    total = 1.0 + 0j
    for t in pf.terms:
        total += t.coeffs[0]
    if abs(total.imag) >= 1e-10:
        raise ExpansionFailed("impulse value has a nontrivial imaginary part")
    return float(total.real)


def shift_once(pf: PartialFraction) -> tuple[float, PartialFraction]:
    """Remove the leading impulse value and return (t_1, tail function).

    Termwise, z/(z - lam)^i = 1/(z - lam)^(i-1) + lam/(z - lam)^i, so the new
    coefficients are c'_i = lam*c_i + c_{i+1}; simple poles contract by lam.
    The dominant residue stays exactly 1.
    """
    t = leading_impulse(pf)
    new_terms = []
    for term in pf.terms:
        cs = term.coeffs
        shifted = [
            term.pole * cs[i] + (cs[i + 1] if i + 1 < len(cs) else 0.0)
            for i in range(len(cs))
        ]
        while shifted and shifted[-1] == 0:
            shifted.pop()
        if shifted:
            new_terms.append(PoleTerm(term.pole, tuple(shifted)))
    return t, replace(pf, terms=tuple(new_terms))


def iteration_estimate(pf: PartialFraction) -> int:
    """Safety cap on the number of shifts before the sum test must pass.

    Only poles that are not nonnegative real with nonnegative residue count;
    their coefficients contract by max|lam| each shift, so
    ceil(|log(2^{5/2} n max|c|) / log max|lam||) shifts suffice.
    """
    _require_normalized(pf)
    if any(t.order > 1 for t in pf.terms):
        raise MultiplePoleUnsupported("iteration estimate requires simple poles")
    counted = [
        t
        for t in pf.terms
        if not (t.pole.imag == 0 and t.pole.real >= 0 and t.coeffs[0].real >= 0)
    ]
    if not counted:
        return 1
    maxc = max(abs(t.coeffs[0]) for t in counted)
    maxl = max(abs(t.pole) for t in counted)
    arg = 2**2.5 * len(counted) * maxc
    if arg <= 1.0 or maxl == 0.0:
        return 1
    if maxl >= 1.0:
        raise ValueError("iteration estimate requires contracted (normalized) poles")
    return max(1, math.ceil(abs(math.log(arg) / math.log(maxl))))


# ---------------------------------------------------------------------------
# reconstruction and loading helpers


def recombine(pf: PartialFraction) -> TransferFunction:
    """Collect a partial fraction over the common denominator."""
    factors: list[tuple[complex, int]] = [(complex(pf.dominant_pole), 1)]
    factors += [(t.pole, t.order) for t in pf.terms]

    def poly_power(root: complex, k: int) -> np.ndarray:
        out = np.array([1.0 + 0j])
        for _ in range(k):
            out = np.convolve(out, np.array([-root, 1.0 + 0j]))
        return out

    den = np.array([1.0 + 0j])
    for root, mult in factors:
        den = np.convolve(den, poly_power(root, mult))

    deg = len(den) - 1
    num = np.zeros(deg, dtype=complex)

    def rest_product(skip: int, reduce_by: int) -> np.ndarray:
        out = np.array([1.0 + 0j])
        for j, (root, mult) in enumerate(factors):
            k = mult - reduce_by if j == skip else mult
            out = np.convolve(out, poly_power(root, k))
        return out

    contrib = pf.dominant_residue * rest_product(0, 1)
    num[: len(contrib)] += contrib
    for j, term in enumerate(pf.terms, start=1):
        for i, c in enumerate(term.coeffs, start=1):
            contrib = c * rest_product(j, i)
            num[: len(contrib)] += contrib

    scale = 1.0 + np.max(np.abs(num)) + np.max(np.abs(den))
    if np.max(np.abs(num.imag)) > 1e-9 * scale or np.max(np.abs(den.imag)) > 1e-9 * scale:
        raise ExpansionFailed("recombination produced non-real coefficients")
    return from_coefficients(num.real, den.real)


def build_partial_fraction(dominant_pole, dominant_residue, raw_terms) -> PartialFraction:
    """Validate and canonicalize externally supplied pole terms.

    Near-real poles are made exactly real, conjugate pairs are matched at
    relative tolerance 1e-9 and symmetrized exactly, and terms are put in a
    deterministic order.
    """
    lam0 = float(dominant_pole)
    gamma = float(dominant_residue)
    if lam0 <= 0 or gamma <= 0:
        raise NotPrimitive("dominant pole and residue must be positive")

    reals: list[PoleTerm] = []
    complexes: list[PoleTerm] = []
    for term in raw_terms:
        pole = complex(term.pole)
        coeffs = tuple(complex(c) for c in term.coeffs)
        if abs(pole.imag) <= PAIR_RTOL * (1.0 + abs(pole)):
            rcs = []
            for c in coeffs:
                if abs(c.imag) > PAIR_RTOL * (1.0 + abs(c)):
                    raise ValueError("real pole carries a non-real coefficient")
                rcs.append(complex(c.real, 0.0))
            reals.append(PoleTerm(complex(pole.real, 0.0), tuple(rcs)))
        else:
            complexes.append(PoleTerm(pole, coeffs))

    paired: list[PoleTerm] = []
    used = [False] * len(complexes)
    for i, term in enumerate(complexes):
        if used[i] or term.pole.imag < 0:
            continue
        partner = None
        for j, other in enumerate(complexes):
            if used[j] or j == i or other.pole.imag > 0:
                continue
            if (
                other.order == term.order
                and abs(other.pole.conjugate() - term.pole)
                <= PAIR_RTOL * (1.0 + abs(term.pole))
                and all(
                    abs(oc.conjugate() - tc) <= PAIR_RTOL * (1.0 + abs(tc))
                    for oc, tc in zip(other.coeffs, term.coeffs)
                )
            ):
                partner = j
                break
        if partner is None:
            raise ValueError(f"complex pole {term.pole:.12g} has no conjugate partner")
        used[i] = used[partner] = True
        pole = 0.5 * (term.pole + complexes[partner].pole.conjugate())
        coeffs = tuple(
            0.5 * (tc + oc.conjugate())
            for tc, oc in zip(term.coeffs, complexes[partner].coeffs)
        )
        paired.append(PoleTerm(pole, coeffs))
        paired.append(PoleTerm(pole.conjugate(), tuple(c.conjugate() for c in coeffs)))
    if not all(used):
        raise ValueError("complex pole terms do not form conjugate pairs")

    terms = tuple(sorted(reals + paired, key=_term_sort_key))
    poles = [t.pole for t in terms]
    for i in range(len(poles)):
        for j in range(i + 1, len(poles)):
            if abs(poles[i] - poles[j]) <= 1e-12 * (1.0 + abs(poles[i])):
                raise ValueError("pole terms must have pairwise distinct poles")
        if abs(poles[i]) >= lam0 * (1.0 - DOMINANCE_RTOL):
            raise NotPrimitive("a listed pole reaches the dominant modulus")
    return PartialFraction(lam0, gamma, terms)
