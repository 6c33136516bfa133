"""Unit calculus for entanglement values denominated in a chosen unit state.

Given (formation, distillable) value pairs for a target state and for a unit
state sigma, the asymptotic conversion inequalities pin the sigma-denominated
formation and distillable values inside closed intervals.  This module does
that interval algebra exactly, evaluates the special values that hold when
the target is the unit itself or a Bell pair, and emits certificates showing
how dimensionless ratios shift when the unit changes (they shift exactly when
the unit has a formation/distillable gap).

Division-by-zero policy: a vanishing distillable value for the unit yields
explicit ``math.inf`` endpoints (an infeasible or unconstrained conversion),
never a float overflow.  A separable unit (F = 0) is rejected outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .states import ValidationError

DEFAULT_GAP_THRESHOLD = 1e-9


@dataclass(frozen=True)
class MeasureRecord:
    """A labeled (formation, distillable) pair in ebits, with 0 <= D <= F."""

    label: str
    F: float
    D: float

    def __post_init__(self):
        if not (0.0 <= self.D <= self.F):
            raise ValidationError(
                "record-order", f"record {self.label!r} needs 0 <= D <= F, got D={self.D}, F={self.F}"
            )


BELL_RECORD = MeasureRecord("bell", 1.0, 1.0)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValidationError("interval-order", f"empty interval [{self.lo}, {self.hi}]")

    def contains(self, x: float, tol: float = 1e-12) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def is_point(self, tol: float = 1e-12) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi) and self.hi - self.lo <= tol


def _div_lower(num: float, den: float) -> float:
    # lower endpoint from "num <= X * den": vacuous when both vanish,
    # infeasible (infinite) when den = 0 but num > 0
    if den > 0.0:
        return num / den
    return 0.0 if num == 0.0 else math.inf


def _div_upper(num: float, den: float) -> float:
    # upper endpoint from "X * den <= num": unconstrained when den = 0
    if den > 0.0:
        return num / den
    return math.inf


def _check_unit(sigma: MeasureRecord) -> None:
    if sigma.F <= 0.0:
        raise ValidationError(
            "degenerate unit", f"degenerate unit: {sigma.label!r} has F = 0 and cannot denominate"
        )


def sigma_formation_bounds(rho: MeasureRecord, sigma: MeasureRecord) -> Interval:
    """Interval for the sigma-denominated formation of rho.

    lo = max(D(rho)/D(sigma), F(rho)/F(sigma)),  hi = F(rho)/D(sigma);
    hi is +inf when D(sigma) = 0.
    """
    _check_unit(sigma)
    lo = max(_div_lower(rho.D, sigma.D), rho.F / sigma.F)
    hi = _div_upper(rho.F, sigma.D)
    return Interval(lo, hi)


def sigma_distillable_bounds(rho: MeasureRecord, sigma: MeasureRecord) -> Interval:
    """Interval for the sigma-denominated distillable value of rho.

    lo = D(rho)/F(sigma),  hi = min(D(rho)/D(sigma), F(rho)/F(sigma)).
    """
    _check_unit(sigma)
    lo = rho.D / sigma.F
    hi = min(_div_upper(rho.D, sigma.D), rho.F / sigma.F)
    return Interval(lo, hi)


@dataclass(frozen=True)
class SigmaUnitBounds:
    target_label: str
    unit_label: str
    F_sigma: Interval
    D_sigma: Interval


def sigma_unit_bounds(rho: MeasureRecord, sigma: MeasureRecord) -> SigmaUnitBounds:
    return SigmaUnitBounds(
        target_label=rho.label,
        unit_label=sigma.label,
        F_sigma=sigma_formation_bounds(rho, sigma),
        D_sigma=sigma_distillable_bounds(rho, sigma),
    )


@dataclass(frozen=True)
class SpecialValues:
    """Exact sigma-denominated values for the unit itself and the Bell pair."""

    F_sigma_sigma: float
    D_sigma_sigma: float
    F_sigma_bell: float
    D_sigma_bell: float


def special_values(sigma: MeasureRecord) -> SpecialValues:
    _check_unit(sigma)
    return SpecialValues(
        F_sigma_sigma=1.0,
        D_sigma_sigma=1.0,
        F_sigma_bell=1.0 / sigma.D if sigma.D > 0.0 else math.inf,
        D_sigma_bell=1.0 / sigma.F,
    )


@dataclass(frozen=True)
class RatioCertificate:
    """Witness that a dimensionless ratio depends on the chosen unit.

    ``sigma_unit_ratio`` and ``bell_unit_ratio`` are the same ratio of
    entanglement values evaluated in sigma units and in Bell units; they
    disagree by ``gap`` = F(sigma) - D(sigma).
    """

    unit_label: str
    quantity: str  # "distillable" | "formation"
    sigma_unit_ratio: float
    bell_unit_ratio: float
    gap: float
    ratio_problem_present: bool
    threshold: float


def ratio_certificate(sigma: MeasureRecord, threshold: float = DEFAULT_GAP_THRESHOLD) -> RatioCertificate:
    """Distillable-side certificate: D_sigma(sigma)/D_sigma(Bell) vs D(sigma)/D(Bell)."""
    _check_unit(sigma)
    gap = sigma.F - sigma.D
    return RatioCertificate(
        unit_label=sigma.label,
        quantity="distillable",
        sigma_unit_ratio=sigma.F,
        bell_unit_ratio=sigma.D,
        gap=gap,
        ratio_problem_present=gap > threshold,
        threshold=threshold,
    )


def formation_ratio_certificate(
    sigma: MeasureRecord, threshold: float = DEFAULT_GAP_THRESHOLD
) -> RatioCertificate:
    """Formation-side analogue: F_sigma(sigma)/F_sigma(Bell) vs F(sigma)/F(Bell)."""
    _check_unit(sigma)
    gap = sigma.F - sigma.D
    return RatioCertificate(
        unit_label=sigma.label,
        quantity="formation",
        sigma_unit_ratio=sigma.D,
        bell_unit_ratio=sigma.F,
        gap=gap,
        ratio_problem_present=gap > threshold,
        threshold=threshold,
    )


def ratio_certificates(sigma: MeasureRecord, threshold: float = DEFAULT_GAP_THRESHOLD):
    """Both certificates, distillable first."""
    return ratio_certificate(sigma, threshold), formation_ratio_certificate(sigma, threshold)
