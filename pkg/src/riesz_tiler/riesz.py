"""Profile matrices, generic choice of the shift vectors, and Riesz constants.

For a profile t_1 < ... < t_k and shifts a_1..a_k the profile matrix is
``N[r, j] = exp(2 pi i a_j . t_r)``.  Every such matrix being invertible is
what makes the exponentials ``exp(2 pi i (a_j + m) . x)``, m in Z^d, a
Riesz basis of the (normalized) region.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import SelectionFailure, SingularProfileError
from .lattice import NormalizationMap
from .tiling import TranslateProfile

log = logging.getLogger(__name__)

DEFAULT_RESTARTS = 64
DEFAULT_TOLERANCE = 1e-6


def e(x):
    """exp(2 pi i x)."""
    return np.exp(2j * np.pi * np.asarray(x, dtype=float))


def _profile_array(profile) -> np.ndarray:
    ts = profile.translates if isinstance(profile, TranslateProfile) else profile
    return np.array([[float(c) for c in t] for t in ts], dtype=float)


def profile_matrix(profile, a: np.ndarray) -> np.ndarray:
    """The k x k matrix e(a_j . t_r) (rows r, columns j)."""
    t = _profile_array(profile)
    return e(t @ np.asarray(a, dtype=float).T)


def det_as_function_of_shifts(profile, a) -> complex:
    """det N(a); a trigonometric polynomial in a that never vanishes identically."""
    return complex(np.linalg.det(profile_matrix(profile, a)))


def min_singular_value(profile, a) -> float:
    return float(np.linalg.svd(profile_matrix(profile, a), compute_uv=False)[-1])


@dataclass(frozen=True)
class ShiftVectors:
    """k shift vectors in [0,1)^d.  ``seed`` is None when the shifts were given explicitly."""

    a: np.ndarray = field(compare=False)
    seed: int | None
    quality: float

    @property
    def k(self) -> int:
        return self.a.shape[0]

    @property
    def dim(self) -> int:
        return self.a.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, ShiftVectors)
            and self.seed == other.seed
            and self.quality == other.quality
            and np.array_equal(self.a, other.a)
        )

    __hash__ = None


@dataclass(frozen=True)
class ProfileMatrix:
    profile: TranslateProfile
    N: np.ndarray
    singular_values: np.ndarray  # descending
    abs_det: float

    @property
    def sigma_min(self) -> float:
        return float(self.singular_values[-1])

    @property
    def sigma_max(self) -> float:
        return float(self.singular_values[0])


def build_profile_matrix(profile: TranslateProfile, shifts) -> ProfileMatrix:
    a = shifts.a if isinstance(shifts, ShiftVectors) else np.asarray(shifts, dtype=float)
    if len(profile.translates) != a.shape[0]:
        raise ValueError(f"profile has {len(profile.translates)} translates but {a.shape[0]} shifts")
    n = profile_matrix(profile, a)
    sv = np.linalg.svd(n, compute_uv=False)
    return ProfileMatrix(profile, n, sv, float(abs(np.linalg.det(n))))


def shift_quality(profiles: Sequence[TranslateProfile], a) -> float:
    """Smallest sigma_min over all profile matrices."""
    a = np.asarray(a, dtype=float)
    return min(min_singular_value(p, a) for p in profiles)


def explicit_shifts(profiles: Sequence[TranslateProfile], a) -> ShiftVectors:
    """Wrap user-supplied shifts (reduced into [0,1)^d) with their quality."""
    a = np.mod(np.atleast_2d(np.asarray(a, dtype=float)), 1.0)
    return ShiftVectors(a, None, shift_quality(profiles, a))


def select_shifts(
    profiles: Sequence[TranslateProfile],
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ShiftVectors:
    """Best of ``restarts`` seeded uniform draws of a in [0,1)^{dk}.

    Quality is the smallest sigma_min over all profiles; the draw with the
    largest quality wins (first index on ties).  The failing set is a null
    set, so ``SelectionFailure`` signals an unreachable tolerance rather
    than bad luck.
    """
    profiles = list(profiles)
    if not profiles:
        raise ValueError("no profiles to condition")
    k = profiles[0].k
    d = len(profiles[0].translates[0])
    rng = np.random.default_rng(seed)
    candidates = rng.random((restarts, k, d))
    scores = np.array([shift_quality(profiles, c) for c in candidates])
    best = int(np.argmax(scores))
    q = float(scores[best])
    log.debug("select_shifts: seed=%s best candidate %d quality %.6g", seed, best, q)
    if q < tolerance:
        raise SelectionFailure(
            f"best quality {q:.3g} below tolerance {tolerance:.3g} after {restarts} draws",
            best=candidates[best],
            quality=q,
        )
    return ShiftVectors(candidates[best], seed, q)


@dataclass(frozen=True)
class RieszReport:
    A1: float
    A2: float
    k: int
    seed: int | None
    quality: float
    worst_profile: int
    min_abs_det: float
    matrices: tuple  # ProfileMatrix per profile

    @property
    def C1(self) -> float:
        return self.k * self.A1

    @property
    def C2(self) -> float:
        return self.k * self.A2

    @property
    def coefficient_bounds(self) -> tuple[float, float]:
        """A1 |f|^2 <= sum |c|^2 <= A2 |f|^2 on the normalized region."""
        return self.A1, self.A2

    def to_dict(self) -> dict:
        return {
            "A1": self.A1,
            "A2": self.A2,
            "C1": self.C1,
            "C2": self.C2,
            "k": self.k,
            "seed": self.seed,
            "quality": self.quality,
            "worst_profile": self.worst_profile,
            "min_abs_det": self.min_abs_det,
            "profiles": [
                {
                    "tuple": [list(t) for t in m.profile.translates],
                    "sigma_min": m.sigma_min,
                    "sigma_max": m.sigma_max,
                    "abs_det": m.abs_det,
                    "support_measure": m.profile.support_measure,
                }
                for m in self.matrices
            ],
        }


def bounds_from_singular_values(singular_values) -> tuple[float, float]:
    """(A1, A2) = (min 1/sigma_max^2, max 1/sigma_min^2) over a family of spectra."""
    smax = np.array([float(np.max(sv)) for sv in singular_values])
    smin = np.array([float(np.min(sv)) for sv in singular_values])
    return float(np.min(1.0 / smax**2)), float(np.max(1.0 / smin**2))


def riesz_bounds(
    profiles: Sequence[TranslateProfile], shifts: ShiftVectors, tolerance: float = DEFAULT_TOLERANCE
) -> RieszReport:
    """Per-point bounds A1 |F|^2 <= |N^{-1} F|^2 <= A2 |F|^2, uniform over profiles.

    A1 = min 1/sigma_max^2 and A2 = max 1/sigma_min^2.  Integrating over the
    fundamental cell gives the same constants for the coefficient norms, and
    k*A1, k*A2 for the norms of the periodic pieces over the whole region.
    """
    mats = tuple(build_profile_matrix(p, shifts) for p in profiles)
    smin = np.array([m.sigma_min for m in mats])
    worst = int(np.argmin(smin))
    if smin[worst] <= tolerance:
        raise SingularProfileError(
            f"profile {worst} has sigma_min {smin[worst]:.3g} <= tolerance {tolerance:.3g}"
        )
    a1, a2 = bounds_from_singular_values([m.singular_values for m in mats])
    return RieszReport(
        A1=a1,
        A2=a2,
        k=shifts.k,
        seed=shifts.seed,
        quality=float(smin[worst]),
        worst_profile=worst,
        min_abs_det=float(min(m.abs_det for m in mats)),
        matrices=mats,
    )


def spectrum(shifts: ShiftVectors, nmap: NormalizationMap | None = None, radius: int = 1) -> np.ndarray:
    """Frequencies A^{-T}(a_j + m) for m in [-radius, radius]^d, j = 1..k.

    A finite truncation of the full basis; rows are ordered by j, then m in
    lexicographic order.
    """
    d = shifts.dim
    window = np.array(list(itertools.product(range(-radius, radius + 1), repeat=d)), dtype=float)
    freqs = np.concatenate([window + a for a in shifts.a])
    if nmap is not None and not nmap.is_identity():
        back = np.array([[float(x) for x in row] for row in nmap.dual_inverse])
        freqs = freqs @ back.T
    return freqs
