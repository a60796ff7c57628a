"""Equilibrium families of the crop-pest-awareness system.

Four families exist: the axial point (bare ground), the pest-free point
(crop at carrying capacity), the susceptible-pest-free point (every
surviving pest is infected), and coexistence points with all four
components positive.

The first three have closed forms.  Coexistence points are found by
reducing the steady-state system to a scalar residual in the awareness
level A: the susceptible-pest balance pins X*(A), the crop and
awareness balances then give S*(A) and I*(A) linearly, and the leftover
infected-pest balance h(A) is rooted by bracketed bisection.  The
quartic that the reduction is sometimes collapsed to is kept only as a
diagnostic because its printed coefficients do not withstand a residual
check (see quartic_coefficients).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .errors import DegenerateParameterError, DomainError
from .model import (
    POSITIVITY_TOL,
    ModelParams,
    State,
    attracting_region,
    rhs_uncontrolled,
)

# Bisection targets for the coexistence residual h(A).
_ROOT_RESIDUAL_TOL = 1e-12
_N_BRACKETS = 4096


class EquilibriumKind(enum.Enum):
    AXIAL = "Axial"
    PEST_FREE = "PestFree"
    SUSCEPTIBLE_FREE = "SusceptibleFree"
    COEXISTENCE = "Coexistence"


@dataclass(frozen=True)
class Equilibrium:
    """A steady state with its defect under the uncontrolled dynamics.

    ``residual_norm`` is the max-norm of the right-hand side at the
    point; every equilibrium this module returns keeps it below 1e-10.
    """

    kind: EquilibriumKind
    point: State
    residual_norm: float


@dataclass(frozen=True)
class Nonexistent:
    """Typed report that an equilibrium family has no admissible member."""

    kind: EquilibriumKind
    reason: str


def _make(kind: EquilibriumKind, params: ModelParams, point: Sequence[float]) -> Equilibrium:
    # Tiny negative components are floating-point dust from the closed
    # forms; anything larger means the caller's admissibility check failed.
    clean = []
    for v in point:
        if v < 0.0:
            if v < -POSITIVITY_TOL:
                raise DomainError(f"equilibrium has negative component: {tuple(point)}")
            v = 0.0
        clean.append(v)
    s = State(*clean)
    residual = max(abs(v) for v in rhs_uncontrolled(params, s))
    return Equilibrium(kind, s, residual)


def axial(params: ModelParams) -> Equilibrium:
    """Bare-ground steady state (0, 0, 0, gamma/eta)."""
    return _make(EquilibriumKind.AXIAL, params, (0.0, 0.0, 0.0, params.gamma / params.eta))


def pest_free(params: ModelParams) -> Equilibrium:
    """Pest-free steady state (K, 0, 0, gamma/eta)."""
    return _make(
        EquilibriumKind.PEST_FREE, params, (params.K, 0.0, 0.0, params.gamma / params.eta)
    )


def susceptible_free(params: ModelParams) -> Union[Equilibrium, Nonexistent]:
    """Steady state with only infected pests, or why it does not exist.

    Exists iff d + delta < m2 phi alpha K / (c + K); then
    X = c (d+delta) / (m2 phi alpha - (d+delta)),
    I = r (c+X)(K-X) / (phi alpha K) and A = (gamma + sigma I) / eta.
    """
    p = params
    consumption = p.m2 * p.phi * p.alpha
    death = p.d + p.delta
    if abs(consumption - death) <= 1e-14:
        raise DegenerateParameterError(
            "m2*phi*alpha is within 1e-14 of d+delta; the susceptible-free "
            "crop level is undefined"
        )
    threshold = consumption * p.K / (p.c + p.K)
    if not death < threshold:
        return Nonexistent(
            EquilibriumKind.SUSCEPTIBLE_FREE,
            "requires d+delta < m2*phi*alpha*K/(c+K): "
            f"{death:.6g} >= {threshold:.6g}",
        )
    X = p.c * death / (consumption - death)
    I = p.r * (p.c + X) * (p.K - X) / (p.phi * p.alpha * p.K)
    A = (p.gamma + p.sigma * I) / p.eta
    return _make(EquilibriumKind.SUSCEPTIBLE_FREE, params, (X, 0.0, I, A))


def _coexistence_closed_forms(params: ModelParams):
    """Return den(A), X*(A), S*(A), I*(A) and the scalar residual h(A).

    h(A) is the infected-pest balance evaluated on the reduced curve;
    its admissible roots are the coexistence awareness levels.
    """
    p = params
    if p.sigma == 0.0 or p.alpha == 0.0:
        raise DegenerateParameterError(
            "the coexistence reduction needs sigma > 0 and alpha > 0"
        )
    r, K, alpha, phi, c, a = p.r, p.K, p.alpha, p.phi, p.c, p.a
    lam, d, delta, m1, m2 = p.lam, p.d, p.delta, p.m1, p.m2
    gamma, sigma, eta = p.gamma, p.sigma, p.eta
    scale = sigma * alpha * K * (phi - 1.0)  # negative since phi < 1

    def den(A: float) -> float:
        return (m1 * alpha - d) * (a + A) - lam * A

    def point_at(A: float) -> tuple[float, float, float]:
        X = c * (lam * A + d * (a + A)) / den(A)
        grow = r * (K - X) * (c + X)
        lift = K * (eta * A - gamma)
        S = (alpha * phi * lift - sigma * grow) / scale
        I = (sigma * grow - alpha * lift) / scale
        return X, S, I

    def h(A: float) -> float:
        X, S, I = point_at(A)
        return (
            m2 * phi * alpha * X * I / (c + X)
            + lam * A * S / (a + A)
            - (d + delta) * I
        )

    return den, point_at, h


def _bisect(f: Callable[[float], float], x0: float, x1: float, f0: float, f1: float) -> float:
    """Bisection of a bracketed sign change down to |f| < 1e-12."""
    for _ in range(200):
        xm = 0.5 * (x0 + x1)
        fm = f(xm)
        if abs(fm) < _ROOT_RESIDUAL_TOL or (x1 - x0) < 1e-15 * max(1.0, abs(xm)):
            return xm
        if (f0 < 0.0) != (fm < 0.0):
            x1, f1 = xm, fm
        else:
            x0, f0 = xm, fm
    return 0.5 * (x0 + x1)


def coexistence(
    params: ModelParams,
    search_bounds: tuple[float, float] | None = None,
) -> list[Equilibrium]:
    """All admissible coexistence equilibria, sorted by awareness level.

    The residual h(A) is scanned over 4096 uniform brackets (default
    interval (1e-8, A_max] with A_max the containment bound started at
    the carrying capacity); sign changes are refined by bisection to
    |h| < 1e-12.  Only roots with a positive X* denominator and all
    components >= 0 qualify.  Returns an empty list when no admissible
    root exists.
    """
    den, point_at, h = _coexistence_closed_forms(params)

    a_cap = attracting_region(params, params.K).A_max
    if search_bounds is None:
        lo, hi = 1e-8, a_cap
    else:
        lo, hi = search_bounds
        if not (math.isfinite(lo) and math.isfinite(hi)) or not 0.0 < lo < hi:
            raise DomainError(f"search bounds must satisfy 0 < lo < hi, got {search_bounds}")
        if hi > a_cap * (1.0 + 1e-9) + 1e-12:
            raise DomainError(
                f"search upper bound {hi:.6g} exceeds the containment bound {a_cap:.6g}"
            )
    if not hi > lo:
        return []

    # The X* denominator is linear in A, so it changes sign at most once;
    # brackets straddling that pole are subdivided and only the side where
    # X* can be positive is scanned.
    slope = (params.m1 * params.alpha - params.d) - params.lam
    pole = None
    if slope != 0.0:
        candidate = -(params.m1 * params.alpha - params.d) * params.a / slope
        if lo < candidate < hi:
            pole = candidate

    edges = [lo + (hi - lo) * k / _N_BRACKETS for k in range(_N_BRACKETS + 1)]
    roots: list[float] = []

    def scan(x0: float, x1: float) -> None:
        if not x1 > x0 or den(x0) <= 0.0 or den(x1) <= 0.0:
            return
        f0, f1 = h(x0), h(x1)
        if not (math.isfinite(f0) and math.isfinite(f1)):
            return
        if f0 == 0.0:
            roots.append(x0)
        elif (f0 < 0.0) != (f1 < 0.0):
            roots.append(_bisect(h, x0, x1, f0, f1))

    for x0, x1 in zip(edges, edges[1:]):
        if pole is not None and x0 < pole < x1:
            eps = 1e-12 * max(1.0, abs(pole))
            scan(x0, pole - eps)
            scan(pole + eps, x1)
        else:
            scan(x0, x1)

    out: list[Equilibrium] = []
    last_a = None
    for A in sorted(roots):
        if last_a is not None and abs(A - last_a) <= 1e-9 * max(1.0, abs(A)):
            continue
        last_a = A
        X, S, I = point_at(A)
        if min(X, S, I) < -POSITIVITY_TOL or den(A) <= 0.0:
            continue
        out.append(_make(EquilibriumKind.COEXISTENCE, params, (X, S, I, A)))
    return out


def all_equilibria(params: ModelParams) -> list[Union[Equilibrium, Nonexistent]]:
    """Every equilibrium family at these parameters, in canonical order.

    Nonexistent families appear as Nonexistent entries; coexistence
    contributes zero or more points.
    """
    found: list[Union[Equilibrium, Nonexistent]] = [axial(params), pest_free(params)]
    found.append(susceptible_free(params))
    stars = coexistence(params)
    if stars:
        found.extend(stars)
    else:
        found.append(
            Nonexistent(EquilibriumKind.COEXISTENCE, "no admissible root of the reduced residual")
        )
    return found


def quartic_coefficients(params: ModelParams) -> tuple[float, float, float, float, float]:
    """The published quartic coefficients (D0..D4) for the awareness level.

    Transcribed verbatim for diagnostic use only: evaluating this
    quartic at the roots of the reduced residual h(A) generally does
    not give zero, which is why the solver roots h(A) instead.  See
    quartic_residuals.
    """
    p = params
    pivot = p.phi * p.m2 - p.m1
    if abs(pivot) <= 1e-14:
        raise DegenerateParameterError("phi*m2 is within 1e-14 of m1; quartic undefined")
    if p.alpha == 0.0 or p.m1 == 0.0 or p.sigma == 0.0 or p.r == 0.0:
        raise DegenerateParameterError(
            "quartic coefficients need alpha, m1, sigma, r all nonzero"
        )
    r, K, alpha, phi, c, a = p.r, p.K, p.alpha, p.phi, p.c, p.a
    lam, d, delta, m1, m2 = p.lam, p.d, p.delta, p.m1, p.m2
    gamma, sigma, eta = p.gamma, p.sigma, p.eta

    d0 = m1 + (m1 * (d - delta) + lam * m1 * delta - phi * m2 * (d + lam)) / (alpha * pivot)
    d1 = (
        ((K - 2 * c) * m2 * phi * alpha + (3 * c - K) * delta) * (d + lam)
        + alpha * (2 * c - K) * (d + lam + delta)
    ) / (alpha**2 * m1 * pivot)
    d2 = (
        -m1 * lam * gamma
        - (
            (m1 * lam - m2 * phi * lam)
            * (alpha**2 * m1 * K * gamma + sigma * r * (alpha * K * m1 - d))
        )
        / (sigma * m1 * alpha * pivot)
        + (
            ((d + delta) * m1 - m2 * phi * d) * (sigma * r * lam + alpha**2 * m1 * K * eta)
        )
        / (sigma * m1 * alpha * pivot)
    )
    d3 = (
        ((d + delta) * m1 - m2 * phi * d)
        * (alpha**2 * m1 * K * gamma + sigma * r * (alpha * K * m1 - d))
    ) / (sigma * m1 * alpha * pivot)
    d4 = (
        a * c**2 * d**2 * (phi - 1.0)
        + a * c * eta**2 * d * delta * (phi - 1.0)
        + c**2 * d * sigma * r * delta * (d + lam)
    ) / (sigma * r * m1 * pivot)
    return (d0, d1, d2, d3, d4)


def quartic_residuals(params: ModelParams, a_values: Sequence[float]) -> list[float]:
    """Evaluate the published quartic at given awareness levels.

    Cross-checks the printed coefficients against roots of h(A); large
    values flag the discrepancy between the two.
    """
    d0, d1, d2, d3, d4 = quartic_coefficients(params)
    return [(((d0 * A + d1) * A + d2) * A + d3) * A + d4 for A in a_values]
