"""Radius-of-convergence and entropy-exponent estimation from disk series.

Coefficients of a disk generating function behave like A mu^n n^(gamma - 2):
pure 2D gravity decays as n^(-5/2) (gamma = -1/2), branched polymers as
n^(-3/2) (gamma = +1/2), and the tuned transition as n^(-5/3) (gamma = 1/3).
The growth constant mu = 1/g_c comes from Richardson-accelerated ratios; the
exponent from a log-log fit of the tail with the geometric part removed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .sd import FloatSeries, Potential, catalan, solve_series_float


def richardson_table(values: Sequence[float], indices: Sequence[int], levels: int = 2) -> list[float]:
    """Neville extrapolation to n -> infinity of a sequence with 1/n corrections.

    Returns the sequence of diagonal estimates, one per level (level 0 is the
    last raw value).
    """
    x = [1.0 / n for n in indices]
    cur = list(values)
    out = [cur[-1]]
    for k in range(1, levels + 1):
        if len(cur) < 2:
            break
        nxt = []
        for i in range(len(cur) - 1):
            # cur[i] spans points i..i+k-1; combine with the extremes
            x0, x1 = x[i], x[i + k]
            nxt.append((cur[i + 1] * x0 - cur[i] * x1) / (x0 - x1))
        cur = nxt
        out.append(cur[-1])
    return out


@dataclass
class RadiusEstimate:
    radius: float
    uncertainty: float
    oscillating: bool
    growth: float  # 1 / radius

    def __repr__(self):
        return f"RadiusEstimate(radius={self.radius:.6g} +- {self.uncertainty:.2g})"


def radius_from_coefficients(
    coeffs: Sequence[float], scale: float = 1.0, skip: int = 4, levels: int = 3
) -> RadiusEstimate:
    """Radius of convergence by the ratio method with Richardson acceleration.

    Oscillating signs are flagged and magnitudes used.  ``scale`` undoes a
    coupling rescaling (true coefficient = coeffs[n] / scale^n).
    """
    c = np.asarray(coeffs, dtype=float)
    if len(c) < skip + 8:
        raise ValueError("need more coefficients for a radius estimate")
    signs = np.sign(c[np.nonzero(c)])
    oscillating = bool(np.any(signs[1:] * signs[:-1] < 0))
    a = np.abs(c)
    if np.any(a[skip:] == 0):
        raise ValueError("vanishing coefficients in the analyzed tail")
    ratios = a[skip + 1 :] / a[skip : -1]
    indices = list(range(skip + 1, len(a)))
    estimates = richardson_table(ratios, indices, levels)
    ratio_scaled = estimates[-1]
    spread = abs(estimates[-1] - estimates[-2]) if len(estimates) >= 2 else abs(
        estimates[-1] - ratios[-1]
    )
    growth = ratio_scaled / scale
    radius = 1.0 / growth
    return RadiusEstimate(
        radius=radius,
        uncertainty=spread / growth * radius,
        oscillating=oscillating,
        growth=growth,
    )


def critical_point(V: Potential, order: int = 200, p: int = 1) -> RadiusEstimate:
    """Critical value of the overall coupling of a one-parameter potential.

    Estimates the radius of convergence of the disk series C_p(g).  For the
    zero potential the sequence C_p itself (the Catalan numbers, read as an
    edge-weight series) is analyzed, giving radius 1/4.
    """
    if not V.monomials:
        seq = [float(catalan(n)) for n in range(order + 1)]
        return radius_from_coefficients(seq)
    fs = solve_series_float(V, order, p=p)
    return radius_from_coefficients(fs.coeffs, fs.scale)


@dataclass
class GammaFit:
    """Entropy exponent fit c_n ~ A mu^n n^(gamma - 2)."""

    gamma: float
    mu: float
    residual: float
    theta: float  # gamma - 2, the fitted power
    oscillating: bool
    window: tuple[int, int]

    def __repr__(self):
        return (
            f"GammaFit(gamma={self.gamma:.4f}, mu={self.mu:.6g}, "
            f"residual={self.residual:.2e}, window={self.window})"
        )


def gamma_estimate(
    coeffs: Sequence[float],
    scale: float = 1.0,
    window: tuple[int, int] | None = None,
) -> GammaFit:
    """Fit the subexponential decay of disk coefficients.

    Requires at least ~50 coefficients.  The tail window (default: the upper
    half) is fit by least squares to log|c_n| = log A + n log mu + theta log n
    and gamma = theta + 2 is returned with the rms fit residual.
    """
    c = np.asarray(coeffs, dtype=float)
    n_total = len(c) - 1
    if n_total < 50:
        raise ValueError("gamma estimate needs at least 50 coefficients")
    signs = np.sign(c[np.nonzero(c)])
    oscillating = bool(np.any(signs[1:] * signs[:-1] < 0))
    a = np.abs(c)
    if window is None:
        window = (max(10, n_total // 2), n_total)
    lo, hi = window
    ns = np.arange(lo, hi + 1)
    if np.any(a[ns] == 0):
        raise ValueError("vanishing coefficients inside the fit window")
    y = np.log(a[ns])
    X = np.stack([np.ones_like(ns, dtype=float), ns.astype(float), np.log(ns)], axis=1)
    sol, *_ = np.linalg.lstsq(X, y, rcond=None)
    _, logmu_scaled, theta = sol
    resid = float(np.sqrt(np.mean((X @ sol - y) ** 2)))
    mu = math.exp(logmu_scaled) / scale
    return GammaFit(
        gamma=float(theta + 2.0),
        mu=mu,
        residual=resid,
        theta=float(theta),
        oscillating=oscillating,
        window=(int(lo), int(hi)),
    )


def gamma_of_potential(V: Potential, order: int = 250, p: int = 1) -> GammaFit:
    fs = solve_series_float(V, order, p=p)
    return gamma_estimate(fs.coeffs, fs.scale)


@dataclass
class ScanPoint:
    ratio: float
    fit: GammaFit


def _scan_eval(args) -> GammaFit:
    family, r, order = args
    return gamma_of_potential(family(r), order)


def transition_scan(
    family: Callable[[float], Potential],
    ratios: Sequence[float],
    order: int = 250,
) -> list[ScanPoint]:
    """Gamma fits along a one-parameter family, parallel over grid points."""
    from ._parallel import pool_map

    fits = pool_map(_scan_eval, [(family, float(r), order) for r in ratios])
    return [ScanPoint(float(r), fit) for r, fit in zip(ratios, fits)]


def find_transition(
    family: Callable[[float], Potential],
    r_lo: float,
    r_hi: float,
    order: int = 250,
    steps: int = 24,
    target_theta: float = -5.0 / 3.0,
) -> tuple[float, GammaFit]:
    """Locate the branching/planar transition by bisection on the fit class.

    The fitted decay power moves from -5/2 (planar sector critical) to -3/2
    (branching critical) as the melonic-to-necklace ratio grows; the locus
    where it crosses -5/3 converges to the simultaneous critical point.
    Requires a sign change of theta - target over [r_lo, r_hi].
    """

    def theta_at(r: float) -> GammaFit:
        return gamma_of_potential(family(r), order)

    f_lo = theta_at(r_lo)
    f_hi = theta_at(r_hi)
    if (f_lo.theta - target_theta) * (f_hi.theta - target_theta) > 0:
        raise ValueError(
            "no fit-class switch in the given ratio interval: "
            f"theta({r_lo})={f_lo.theta:.3f}, theta({r_hi})={f_hi.theta:.3f}"
        )
    lo, hi = float(r_lo), float(r_hi)
    fit = f_lo
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        fit = theta_at(mid)
        if (fit.theta - target_theta) * (f_lo.theta - target_theta) > 0:
            lo = mid
            f_lo = fit
        else:
            hi = mid
    return 0.5 * (lo + hi), fit
