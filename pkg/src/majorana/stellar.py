"""The Majorana map: state -> polynomial -> roots -> sphere points, and back.

A normalized spin-j state with amplitudes C_(S-r) becomes the polynomial

    sum_r a_r zeta^(2S - r),    a_r = (-1)^r C_(S-r) / sqrt((2S - r)! r!)

whose 2S roots, taken onto the unit sphere by inverse stereographic
projection zeta = tan(theta/2) e^(i phi), are the state's stars. Vanishing
leading coefficients lower the polynomial degree; each missing root lives
"at infinity" and projects to the south pole theta = pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spin_core import SpinState, check_two_j, normalize

# |a| below this times max|a| counts as an exactly-zero coefficient
LEADING_ZERO_RTOL = 1e-13
ROOT_BACKWARD_ERROR = 1e-9
ABERTH_TOL = 1e-13
ABERTH_MAX_ITER = 200

TWO_PI = 2.0 * math.pi


class RootFindingError(RuntimeError):
    """Polynomial solver failed to converge; carries the best roots found."""

    def __init__(self, message, partial_roots):
        super().__init__(message)
        self.partial_roots = list(partial_roots)


def normalization_weights(two_s):
    """Weights N_0..N_(2S) built by the Pascal-style recursion on their squares.

    Row two_s = 1 is [1, 1]; every later row keeps 1 at both ends and sets
    N_r = sqrt(N_(r-1)'^2 + N_r'^2) from the previous row, so N_r^2 ends up
    equal to the binomial coefficient (2S choose r).
    """
    check_two_j(two_s)
    sq = np.array([1.0, 1.0])
    for _ in range(two_s - 1):
        grown = np.ones(sq.size + 1)
        grown[1:-1] = sq[:-1] + sq[1:]
        sq = grown
    return np.sqrt(sq)


def _sqrt_fact_prod(two_s, r):
    # sqrt((2S - r)! r!); exact integer factorials up to 20!, log-gamma beyond
    if two_s <= 20:
        return math.sqrt(math.factorial(two_s - r) * math.factorial(r))
    return math.exp(0.5 * (math.lgamma(two_s - r + 1) + math.lgamma(r + 1)))


@dataclass
class MajoranaPolynomial:
    """Coefficients a_0..a_(2S), highest power of zeta first.

    effective_degree is the number of finite roots; the remaining
    2S - effective_degree roots sit at infinity.
    """

    two_s: int
    coeffs: np.ndarray
    effective_degree: int = field(init=False)

    def __post_init__(self):
        check_two_j(self.two_s)
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.shape != (self.two_s + 1,):
            raise ValueError(
                f"need {self.two_s + 1} coefficients for two_s={self.two_s}, got shape {coeffs.shape}"
            )
        biggest = float(np.max(np.abs(coeffs)))
        if biggest == 0.0:
            raise ValueError("all coefficients are zero")
        self.coeffs = coeffs
        lead = 0
        while abs(coeffs[lead]) <= LEADING_ZERO_RTOL * biggest:
            lead += 1
        self.effective_degree = self.two_s - lead


def majorana_coefficients(state):
    """Polynomial of a normalized state: a_r = (-1)^r C_(S-r) / sqrt((2S-r)! r!)."""
    two_s = state.two_j
    signs = (-1.0) ** np.arange(two_s + 1)
    scale = np.array([_sqrt_fact_prod(two_s, r) for r in range(two_s + 1)])
    return MajoranaPolynomial(two_s, signs * state.amplitudes / scale)


def _polyval(coeffs, z):
    # Horner with coefficients highest power first; z may be an array
    acc = np.full_like(z, coeffs[0])
    for c in coeffs[1:]:
        acc = acc * z + c
    return acc


def _backward_errors(coeffs, roots):
    # |p(z)| scaled by sum_i |a_i| |z|^(deg-i): relative size of the coefficient
    # perturbation that would make each z an exact root
    if len(roots) == 0:
        return np.zeros(0)
    mags = np.abs(np.asarray(roots))
    scale = _polyval(np.abs(coeffs), mags)
    return np.abs(_polyval(coeffs, np.asarray(roots))) / np.maximum(scale, 1e-300)


def _aberth(coeffs):
    """Simultaneous root iteration; returns (roots, converged flag)."""
    n = len(coeffs) - 1
    deriv = coeffs[:-1] * np.arange(n, 0, -1)
    radius = 1.0 + float(np.max(np.abs(coeffs[1:])) / abs(coeffs[0]))
    # perturbed circle: the angular offset breaks conjugate-pair symmetry
    angles = TWO_PI * np.arange(n) / n + 0.4
    z = radius * np.exp(1j * angles)
    for _ in range(ABERTH_MAX_ITER):
        dp = _polyval(deriv, z)
        stalled = dp == 0
        if np.any(stalled):
            z = np.where(stalled, z * (1.0 + 1e-8) + 1e-8, z)
            continue
        p = _polyval(coeffs, z)
        newton = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        recip = 1.0 / diff
        np.fill_diagonal(recip, 0.0)
        denom = 1.0 - newton * recip.sum(axis=1)
        denom = np.where(denom == 0, 1.0, denom)
        step = newton / denom
        z = z - step
        if np.all(np.abs(step) <= ABERTH_TOL * (1.0 + np.abs(z))):
            return z, True
    return z, False


def find_roots(poly):
    """Finite roots of a Majorana polynomial plus the count of roots at infinity.

    Leading coefficients within LEADING_ZERO_RTOL of zero (relative to the
    largest coefficient) are dropped as roots at infinity; trailing ones are
    deflated as exact roots at zeta = 0. The rest go through Aberth-Ehrlich
    iteration with companion-matrix eigenvalues (numpy.roots) as fallback;
    both exits are accepted only if every root's backward error passes.
    """
    coeffs = poly.coeffs
    biggest = float(np.max(np.abs(coeffs)))
    n_inf = poly.two_s - poly.effective_degree
    reduced = np.array(coeffs[n_inf:], dtype=complex)
    n_zero = 0
    while reduced.size > 1 and abs(reduced[-1]) <= LEADING_ZERO_RTOL * biggest:
        reduced = reduced[:-1]
        n_zero += 1
    degree = reduced.size - 1
    if degree == 0:
        roots = np.zeros(0, dtype=complex)
    elif degree == 1:
        roots = np.array([-reduced[1] / reduced[0]])
    else:
        roots, _ = _aberth(reduced)
        if np.max(_backward_errors(reduced, roots)) > ROOT_BACKWARD_ERROR:
            roots = np.roots(reduced)
            errs = _backward_errors(reduced, roots)
            if np.max(errs) > ROOT_BACKWARD_ERROR:
                raise RootFindingError(
                    f"root refinement stalled (worst backward error {np.max(errs):.3e})",
                    list(roots) + [0j] * n_zero,
                )
    return list(roots) + [0j] * n_zero, n_inf


def zeta_to_sphere(zeta):
    """Sphere point (theta, phi) of a finite root: theta = 2 atan|zeta|, phi = arg zeta.

    zeta = 0 maps to the north pole (0, 0); roots at infinity are the
    caller's job and belong at theta = pi.
    """
    zeta = complex(zeta)
    if zeta == 0:
        return 0.0, 0.0
    theta = 2.0 * math.atan(abs(zeta))
    phi = math.atan2(zeta.imag, zeta.real) % TWO_PI
    if phi >= TWO_PI:  # fold the rounding artifact of tiny negative angles
        phi = 0.0
    return theta, phi


def sphere_to_zeta(theta, phi):
    """tan(theta/2) e^(i phi), or None for the south pole (root at infinity)."""
    if theta < 0.0 or theta > math.pi + 1e-12:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    if theta >= math.pi - 1e-14:
        return None
    return math.tan(theta / 2.0) * complex(math.cos(phi), math.sin(phi))


@dataclass
class StarSet:
    """Multiset of 2j points (theta, phi) on the unit sphere."""

    two_j: int
    points: list

    def __post_init__(self):
        check_two_j(self.two_j)
        pts = [(float(t), float(p)) for t, p in self.points]
        if len(pts) != self.two_j:
            raise ValueError(f"expected {self.two_j} stars, got {len(pts)}")
        for t, p in pts:
            if t < 0.0 or t > math.pi:
                raise ValueError(f"theta out of [0, pi]: {t!r}")
            if p < 0.0 or p >= TWO_PI:
                raise ValueError(f"phi out of [0, 2 pi): {p!r}")
        self.points = pts


def stars(state):
    """All 2j stars of a state, sorted by (theta, phi) for deterministic output."""
    finite, n_inf = find_roots(majorana_coefficients(state))
    pts = [zeta_to_sphere(z) for z in finite]
    pts.extend((math.pi, 0.0) for _ in range(n_inf))
    pts.sort()
    return StarSet(state.two_j, pts)


def _fix_global_phase(state):
    # first amplitude with modulus above 1e-10 becomes real positive
    amps = state.amplitudes
    idx = np.flatnonzero(np.abs(amps) > 1e-10)
    lead = amps[idx[0]]
    return SpinState(state.two_j, amps * (abs(lead) / lead))


def state_from_stars(star_set):
    """The (phase-fixed) state whose stars are the given points.

    Finite points become roots of a monic polynomial via the elementary
    symmetric polynomials; each south-pole point prepends a zero leading
    coefficient; the coefficient map of majorana_coefficients is inverted
    and the result normalized.
    """
    if not star_set.points:
        raise ValueError("empty star set")
    zetas = [sphere_to_zeta(t, p) for t, p in star_set.points]
    finite = np.array([z for z in zetas if z is not None], dtype=complex)
    n_inf = len(zetas) - finite.size
    two_s = star_set.two_j
    monic = np.poly(finite) if finite.size else np.ones(1, dtype=complex)
    coeffs = np.concatenate([np.zeros(n_inf, dtype=complex), monic])
    signs = (-1.0) ** np.arange(two_s + 1)
    scale = np.array([_sqrt_fact_prod(two_s, r) for r in range(two_s + 1)])
    return _fix_global_phase(normalize(signs * coeffs * scale))
