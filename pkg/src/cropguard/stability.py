"""Linear stability analysis and a numeric Hopf-bifurcation scan.

Characteristic polynomials of the 4x4 Jacobian come from the
Faddeev-LeVerrier trace recursion; stability is decided both by
Routh-Hurwitz sign conditions and by the roots themselves (closed-form
quartic solver, no general eigensolver).  The basic reproduction-style
threshold R0 = alpha K / R separates stability of the pest-free state.

The Hopf scan samples the attack rate alpha, recomputes the coexistence
point and the Routh-Hurwitz combination Psi = C1 C2 C3 - C3^2 - C4 C1^2
at each sample, brackets sign changes, refines them by bisection, and
confirms each crossing with positivity side conditions plus a
finite-difference transversality slope of the leading real part.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .equilibria import Equilibrium, EquilibriumKind, coexistence
from .errors import CropguardError, DegenerateParameterError, DomainError
from .model import ModelParams, jacobian
from .quartic import quartic_roots

logger = logging.getLogger(__name__)

# Real parts within this band of zero count as marginal rather than a
# definite sign; separates genuine Hopf loci from floating-point noise.
EIG_TOL = 1e-9

_PSI_TOL = 1e-10
_TRANSVERSALITY_EPS = 1e-4
_TRANSVERSALITY_MIN_SLOPE = 1e-8


class Verdict(enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


class CharPoly4(NamedTuple):
    """Coefficients of the monic quartic rho^4 + C1 rho^3 + C2 rho^2 + C3 rho + C4."""

    c1: float
    c2: float
    c3: float
    c4: float

    def __call__(self, rho: complex) -> complex:
        return (((rho + self.c1) * rho + self.c2) * rho + self.c3) * rho + self.c4


@dataclass(frozen=True)
class StabilityReport:
    """Verdict for one equilibrium with its supporting numbers.

    ``rh_margins`` holds the five displayed stability conditions
    (C2, C3, C4, C1C2-C3, (C1C2-C3)C3 - C1^2 C4); C1 itself is its own
    margin and is available from ``char``.  ``rh_stable`` is the
    conjunction of all six signs.
    """

    equilibrium: Equilibrium
    verdict: Verdict
    max_real_part: float
    pure_imaginary: bool
    rh_stable: bool
    rh_margins: tuple[float, float, float, float, float]
    char: CharPoly4
    eigenvalues: tuple[complex, complex, complex, complex]


@dataclass(frozen=True)
class HopfCandidate:
    """A confirmed sign change of Psi(alpha) with its certificates."""

    alpha_star: float
    psi_values: tuple[float, float]
    transversality_slope: float
    side_conditions: tuple[float, float, float, float]


def char_poly(J: Sequence[Sequence[float]]) -> CharPoly4:
    """Characteristic polynomial of a 4x4 matrix (Faddeev-LeVerrier).

    Coefficients are for det(rho I - J) written as a monic quartic.
    """
    A = np.asarray(J, dtype=float)
    if A.shape != (4, 4):
        raise DomainError(f"need a 4x4 matrix, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise DomainError("matrix entries must be finite")
    eye = np.eye(4)
    M = A
    c1 = -float(np.trace(M))
    M = A @ (M + c1 * eye)
    c2 = -float(np.trace(M)) / 2.0
    M = A @ (M + c2 * eye)
    c3 = -float(np.trace(M)) / 3.0
    M = A @ (M + c3 * eye)
    c4 = -float(np.trace(M)) / 4.0
    return CharPoly4(c1, c2, c3, c4)


def routh_hurwitz(cp: CharPoly4) -> tuple[bool, tuple[float, float, float, float, float]]:
    """Routh-Hurwitz verdict and the five displayed margins.

    The margins are (C2, C3, C4, C1C2-C3, (C1C2-C3)C3 - C1^2 C4); the
    stability flag additionally requires C1 > 0, which is tested rather
    than assumed.
    """
    c1, c2, c3, c4 = cp
    h1 = c1 * c2 - c3
    h2 = h1 * c3 - c1 * c1 * c4
    margins = (c2, c3, c4, h1, h2)
    is_stable = c1 > 0.0 and all(m > 0.0 for m in margins)
    return is_stable, margins


def psi(cp: CharPoly4) -> float:
    """Hopf locator Psi = C1 C2 C3 - C3^2 - C4 C1^2 (zero at a crossing).

    Evaluated as (C1 C2 - C3) C3 - C1^2 C4, the same association the
    margin report uses, so the two are bit-for-bit identical.
    """
    c1, c2, c3, c4 = cp
    return (c1 * c2 - c3) * c3 - c1 * c1 * c4


def r0(params: ModelParams) -> float:
    """Pest-invasion threshold alpha K / R.

    R is the smaller of (c+K)(lam gamma + d(a eta + gamma))/(m1 (a eta
    + gamma)) and (c+K)(d+delta)/(m2 phi); the pest-free state is
    stable when the ratio is below one.
    """
    p = params
    pool = p.a * p.eta + p.gamma
    first = math.inf
    if p.m1 > 0.0:
        first = (p.c + p.K) * (p.lam * p.gamma + p.d * pool) / (p.m1 * pool)
    second = math.inf
    if p.m2 * p.phi > 0.0:
        second = (p.c + p.K) * (p.d + p.delta) / (p.m2 * p.phi)
    R = min(first, second)
    if math.isinf(R):
        return 0.0
    if R == 0.0:
        raise DegenerateParameterError("threshold denominator R is zero")
    return p.alpha * p.K / R


def _closed_form_eigs(params: ModelParams, kind: EquilibriumKind) -> tuple[float, ...]:
    p = params
    fade = p.lam * p.gamma / (p.a * p.eta + p.gamma) + p.d
    if kind is EquilibriumKind.AXIAL:
        return (p.r, -fade, -(p.d + p.delta), -p.eta)
    uptake = p.alpha * p.K / (p.c + p.K)
    return (
        -p.r,
        p.m1 * uptake - fade,
        p.m2 * p.phi * uptake - (p.d + p.delta),
        -p.eta,
    )


def classify(params: ModelParams, eq: Equilibrium) -> StabilityReport:
    """Stability report for an equilibrium of the uncontrolled system.

    Eigenvalues come from the closed-form quartic solver on the
    characteristic polynomial.  For the axial and pest-free points they
    are cross-checked against their triangular-factorization closed
    forms; disagreement beyond rounding raises.
    """
    J = jacobian(params, eq.point)
    cp = char_poly(J)
    rh_stable, margins = routh_hurwitz(cp)
    roots = quartic_roots(*cp)
    if eq.kind in (EquilibriumKind.AXIAL, EquilibriumKind.PEST_FREE):
        for ev in _closed_form_eigs(params, eq.kind):
            nearest = min(abs(z - ev) for z in roots)
            if nearest > 1e-6 * max(1.0, abs(ev)):
                raise CropguardError(
                    f"eigenvalue cross-check failed at {eq.kind.value}: "
                    f"closed form {ev:.12g} vs quartic roots {roots}"
                )
    max_re = max(z.real for z in roots)
    pure_imag = any(abs(z.real) <= EIG_TOL and abs(z.imag) > EIG_TOL for z in roots)
    if max_re < -EIG_TOL:
        verdict = Verdict.STABLE
    elif abs(max_re) <= EIG_TOL:
        verdict = Verdict.MARGINAL
    else:
        verdict = Verdict.UNSTABLE
    return StabilityReport(
        equilibrium=eq,
        verdict=verdict,
        max_real_part=max_re,
        pure_imaginary=pure_imag,
        rh_stable=rh_stable,
        rh_margins=margins,
        char=cp,
        eigenvalues=tuple(roots),
    )


def _star_at(params: ModelParams, alpha: float, near: float | None) -> Equilibrium | None:
    """Coexistence point at an overridden attack rate.

    With several admissible points, prefer the one whose awareness level
    is nearest ``near`` (continuity along the scan); otherwise the
    highest-awareness point.
    """
    try:
        stars = coexistence(replace(params, alpha=alpha))
    except (DegenerateParameterError, DomainError):
        return None
    if not stars:
        return None
    if near is None:
        return stars[-1]
    return min(stars, key=lambda s: abs(s.point.A - near))


def _leading_complex_real_part(params: ModelParams, alpha: float, near: float | None) -> float | None:
    star = _star_at(params, alpha, near)
    if star is None:
        return None
    roots = quartic_roots(*char_poly(jacobian(params_with_alpha(params, alpha), star.point)))
    pairs = [z for z in roots if abs(z.imag) > EIG_TOL]
    if not pairs:
        return None
    return max(z.real for z in pairs)


def params_with_alpha(params: ModelParams, alpha: float) -> ModelParams:
    return replace(params, alpha=alpha)


def hopf_scan(
    params: ModelParams,
    alpha_range: tuple[float, float],
    n_samples: int = 81,
) -> list[HopfCandidate]:
    """Locate Hopf crossings of the coexistence point over an alpha range.

    Samples Psi(alpha) on a uniform grid, skips (and logs) samples where
    no coexistence point exists, bisects each sign change to
    |Psi| < 1e-10, and keeps candidates whose side conditions
    (C2, C3, C4, C1C2-C3) are positive and whose central-difference
    transversality slope of the leading complex pair exceeds 1e-8 in
    magnitude.  Returns an empty list (with a logged diagnostic) when
    the coexistence point exists nowhere in the range.
    """
    lo, hi = alpha_range
    if not (math.isfinite(lo) and math.isfinite(hi)) or not 0.0 < lo < hi:
        raise DomainError(f"alpha range must satisfy 0 < lo < hi, got {alpha_range}")
    if n_samples < 2:
        raise DomainError("need at least two samples")

    alphas = np.linspace(lo, hi, n_samples)
    samples: list[tuple[float, float, float] | None] = []
    near: float | None = None
    for alpha in alphas:
        star = _star_at(params, float(alpha), near)
        if star is None:
            samples.append(None)
            continue
        near = star.point.A
        cp = char_poly(jacobian(params_with_alpha(params, float(alpha)), star.point))
        samples.append((float(alpha), psi(cp), star.point.A))

    valid = [s for s in samples if s is not None]
    if not valid:
        logger.warning(
            "hopf_scan: no coexistence equilibrium anywhere in alpha range [%g, %g]",
            lo, hi,
        )
        return []
    n_skipped = len(samples) - len(valid)
    if n_skipped:
        logger.info("hopf_scan: %d of %d samples had no coexistence point", n_skipped, len(samples))

    def psi_at(alpha: float, near_a: float | None) -> float | None:
        star = _star_at(params, alpha, near_a)
        if star is None:
            return None
        return psi(char_poly(jacobian(params_with_alpha(params, alpha), star.point)))

    out: list[HopfCandidate] = []
    for left, right in zip(samples, samples[1:]):
        if left is None or right is None:
            continue
        a0, psi0, near0 = left
        a1, psi1, _ = right
        if psi0 == 0.0 or (psi0 < 0.0) == (psi1 < 0.0):
            continue
        # bisect Psi(alpha) over the bracket
        x0, x1, f0 = a0, a1, psi0
        x_star, f_star = x0, f0
        for _ in range(200):
            xm = 0.5 * (x0 + x1)
            fm = psi_at(xm, near0)
            if fm is None:
                break
            x_star, f_star = xm, fm
            if abs(fm) < _PSI_TOL or (x1 - x0) < 1e-15 * max(1.0, xm):
                break
            if (f0 < 0.0) != (fm < 0.0):
                x1 = xm
            else:
                x0, f0 = xm, fm
        if abs(f_star) >= _PSI_TOL:
            continue
        star = _star_at(params, x_star, near0)
        if star is None:
            continue
        cp = char_poly(jacobian(params_with_alpha(params, x_star), star.point))
        c1, c2, c3, c4 = cp
        side = (c2, c3, c4, c1 * c2 - c3)
        if not all(v > 0.0 for v in side):
            continue
        re_hi = _leading_complex_real_part(params, x_star + _TRANSVERSALITY_EPS, star.point.A)
        re_lo = _leading_complex_real_part(params, x_star - _TRANSVERSALITY_EPS, star.point.A)
        if re_hi is None or re_lo is None:
            continue
        slope = (re_hi - re_lo) / (2.0 * _TRANSVERSALITY_EPS)
        if abs(slope) <= _TRANSVERSALITY_MIN_SLOPE:
            continue
        out.append(
            HopfCandidate(
                alpha_star=x_star,
                psi_values=(psi0, psi1),
                transversality_slope=slope,
                side_conditions=side,
            )
        )
    return out
