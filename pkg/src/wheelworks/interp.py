"""Exact polynomial interpolation in one variable over any exact field."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


@dataclass
class PolyFit:
    coefficients: list             # ascending degree, trailing zeros removed
    samples: list                  # (x, y) pairs actually supplied
    used: int                      # points used to build the interpolant
    consistent: bool
    mismatches: list = field(default_factory=list)   # x values off the fitted curve

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self):
        return self.coefficients[-1] if self.coefficients else 0

    @property
    def consistency_points(self) -> int:
        return len(self.samples) - self.used

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


def _is_zero(c) -> bool:
    return not c


def newton_coefficients(xs: Sequence, ys: Sequence) -> list:
    """Monomial-basis coefficients of the interpolant through ``(xs, ys)``."""
    xs = [Fraction(x) for x in xs]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    n = len(xs)
    dd = list(ys)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) * Fraction(1, 1) / (xs[i] - xs[i - level])
    # expand the Newton form
    coeffs = [0 * dd[0]] * n if n else []
    for i in range(n - 1, -1, -1):
        # coeffs = coeffs * (x - xs[i]) + dd[i]
        new = [0 * dd[0]] * n
        for d in range(n - 1):
            new[d + 1] = new[d + 1] + coeffs[d]
            new[d] = new[d] - coeffs[d] * xs[i]
        new[0] = new[0] + dd[i]
        coeffs = new
    while coeffs and _is_zero(coeffs[-1]):
        coeffs.pop()
    return coeffs


def fit_poly(samples: Sequence[tuple], degree: int | None = None) -> PolyFit:
    """Interpolate through the first ``degree + 1`` samples and test the rest.

    Without ``degree`` all samples are interpolated and the fit is the
    lowest-degree polynomial through them (no consistency witnesses).
    """
    samples = list(samples)
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    if len({Fraction(x) for x, _ in samples}) != len(samples):
        raise ValueError("sample points must be distinct")
    used = len(samples) if degree is None else min(len(samples), degree + 1)
    xs = [x for x, _ in samples[:used]]
    ys = [y for _, y in samples[:used]]
    coeffs = newton_coefficients(xs, ys)
    fit = PolyFit(coeffs, samples, used, True)
    for x, y in samples[used:]:
        if fit(Fraction(x)) != y:
            fit.mismatches.append(x)
    fit.consistent = not fit.mismatches
    return fit
