"""Exact half-integer bookkeeping and normalized pure spin states.

Spin magnitudes and projections travel as doubled integers (two_j = 2j,
two_m = 2m) so half-integer arithmetic never touches floating point.
Amplitude index r holds the coefficient of |j, m> with m = j - r, i.e.
amplitudes run from m = +j down to m = -j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12


def check_two_j(two_j):
    """Validate a doubled spin magnitude."""
    if not isinstance(two_j, (int, np.integer)):
        raise TypeError(f"two_j must be an integer (doubled spin), got {two_j!r}")
    if two_j < 1:
        raise ValueError(f"spin magnitude needs two_j >= 1, got {two_j}")


def check_projection(two_j, two_m):
    """Validate a doubled projection against its doubled spin magnitude."""
    check_two_j(two_j)
    if not isinstance(two_m, (int, np.integer)):
        raise TypeError(f"two_m must be an integer (doubled projection), got {two_m!r}")
    if (two_j - two_m) % 2 != 0:
        raise ValueError(
            f"parity mismatch: two_m={two_m} and two_j={two_j} must have equal parity"
        )
    if abs(two_m) > two_j:
        raise ValueError(f"projection out of range: |two_m|={abs(two_m)} > two_j={two_j}")


def half_int_str(doubled):
    """Exact text form of a doubled half-integer: 3 -> '3/2', -4 -> '-2'."""
    if doubled % 2 == 0:
        return str(doubled // 2)
    return f"{doubled}/2"


@dataclass(frozen=True)
class SpinState:
    """Pure spin-j state: two_j plus 2j+1 unit-norm complex amplitudes."""

    two_j: int
    amplitudes: np.ndarray

    def __post_init__(self):
        check_two_j(self.two_j)
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.two_j + 1,):
            raise ValueError(
                f"need {self.two_j + 1} amplitudes for two_j={self.two_j}, got shape {amps.shape}"
            )
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"amplitudes not normalized: sum |C|^2 = {norm_sq!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self):
        return self.two_j + 1

    def projection_at(self, r):
        """Doubled projection 2m carried by amplitude index r."""
        return self.two_j - 2 * r


def basis_state(two_j, two_m):
    """|j, m>: amplitude 1 at index r = j - m, 0 elsewhere."""
    check_projection(two_j, two_m)
    amps = np.zeros(two_j + 1, dtype=complex)
    amps[(two_j - two_m) // 2] = 1.0
    return SpinState(two_j, amps)


def normalize(amplitudes):
    """Scale raw amplitudes to unit norm; two_j is inferred from the length."""
    amps = np.asarray(amplitudes, dtype=complex)
    if amps.ndim != 1 or amps.size < 2:
        raise ValueError("need a 1-d amplitude vector of length >= 2")
    nrm = float(np.linalg.norm(amps))
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return SpinState(amps.size - 1, amps / nrm)


def inner_product(a, b):
    """<a|b>, conjugating the left argument."""
    if a.two_j != b.two_j:
        raise ValueError(f"dimension mismatch: two_j {a.two_j} vs {b.two_j}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def random_state(two_j, seed):
    """Haar-uniform random state: seeded standard complex normal draw, normalized."""
    check_two_j(two_j)
    rng = np.random.default_rng(seed)
    re = rng.standard_normal(two_j + 1)
    im = rng.standard_normal(two_j + 1)
    return normalize(re + 1j * im)
