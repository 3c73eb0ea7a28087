"""Disk recursion solver for the rescaled necklace expectations C_p.

The loop equation solved here is

    C_p = sum_{k=0}^{p-1} C_k C_{p-k-1} + sum_j j d_jV(C_1, C_2, ...) C_{j+p-1}

with C_0 = 1.  The potential is stored as V(x) = -sum_L t_L prod_k x_{p_k},
absorbing the minus signs of the Schwinger-Dyson form, so the equation reads
with the plus sign as written.  V = 0 gives the Catalan numbers.

Three solution modes: exact order-by-order formal series in the coupling
symbols, a damped numeric fixed point at fixed couplings, and a fast float
series mode (single overall coupling) for long coefficient sequences.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .laurent import _as_fraction


class NonConvergenceError(RuntimeError):
    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class Monomial:
    """One interaction term: coupling t = coeff * symbol, variables x_j^e."""

    coeff: Fraction
    powers: tuple[tuple[int, int], ...]  # ((variable j, exponent), ...)
    symbol: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeff", _as_fraction(self.coeff))
        pw = tuple(sorted((int(j), int(e)) for j, e in self.powers if e))
        if any(j < 1 or e < 0 for j, e in pw):
            raise ValueError("variable indices must be >= 1, exponents >= 0")
        object.__setattr__(self, "powers", pw)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.powers)

    def max_index(self) -> int:
        return max((j for j, _ in self.powers), default=0)


@dataclass(frozen=True)
class Potential:
    """Sparse potential V(x) = -sum t_L prod x_j^e_j."""

    monomials: tuple[Monomial, ...] = ()

    @classmethod
    def zero(cls) -> "Potential":
        return cls(())

    @property
    def max_index(self) -> int:
        return max((m.max_index() for m in self.monomials), default=0)

    @property
    def symbols(self) -> tuple[str, ...]:
        seen = []
        for m in self.monomials:
            if m.symbol is not None and m.symbol not in seen:
                seen.append(m.symbol)
        return tuple(seen)

    def numeric(self) -> bool:
        return all(m.symbol is None for m in self.monomials)

    def to_json(self) -> dict:
        out = []
        for m in self.monomials:
            entry = {"coeff": str(m.coeff), "powers": {str(j): e for j, e in m.powers}}
            if m.symbol is not None:
                entry["symbol"] = m.symbol
            out.append(entry)
        return {"monomials": out}

    @classmethod
    def from_json(cls, data: Mapping) -> "Potential":
        mons = []
        for entry in data.get("monomials", []):
            mons.append(
                Monomial(
                    _as_fraction(entry["coeff"]),
                    tuple((int(j), int(e)) for j, e in entry["powers"].items()),
                    entry.get("symbol"),
                )
            )
        return cls(tuple(mons))


def necklace_potential(size: int = 2, weight=1, symbol: str | None = "g", per_slot: bool = False) -> Potential:
    """Single necklace interaction x_size with counting sign (+weight).

    ``per_slot`` divides the weight by the necklace size so that each
    composition corner carries weight g; for size 2 the disk series then
    matches the classical rooted 4-valent planar map counts (growth 12).
    """
    w = _as_fraction(weight)
    if per_slot:
        w = w / size
    return Potential((Monomial(-w, ((size, 1),), symbol),))


def melonic_quartic_potential(weight=1, symbol: str | None = "g") -> Potential:
    """Quartic melonic interaction as the tree type {1,1}: variables x_1^2."""
    return Potential((Monomial(-_as_fraction(weight), ((1, 2),), symbol),))


def transition_potential(ratio, symbol: str | None = "g") -> Potential:
    """Necklace plus melonic branching at fixed ratio of couplings."""
    return Potential(
        (
            Monomial(Fraction(-1), ((2, 1),), symbol),
            Monomial(-_as_fraction(ratio), ((1, 2),), symbol),
        )
    )


def potential_from_model(model) -> Potential:
    """Disk potential of a trees-of-necklaces measure.

    Every entry must carry its construction trace; the type multiset of an
    entry with coupling t becomes the monomial t * prod x_{p_k}.
    """
    from .bubbles import NecklaceTreeSpec

    mons = []
    for e in model.entries:
        if e.bubble.trace is None:
            raise ValueError("model entry lacks a tree-of-necklaces trace")
        spec = NecklaceTreeSpec(tuple(e.bubble.trace))
        counts: dict[int, int] = {}
        for s in spec.type_multiset:
            counts[s] = counts.get(s, 0) + 1
        mons.append(Monomial(Fraction(1), tuple(counts.items()), e.coupling))
    return Potential(tuple(mons))


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


# ---------------------------------------------------------------------------
# Formal mode (exact, multivariate)


@dataclass
class DiskSeries:
    """Solution container for the disk recursion.

    formal mode: ``coeffs[p]`` maps symbol-exponent tuples to exact Fractions.
    numeric mode: ``values[p]`` holds floats with convergence metadata.
    """

    mode: str
    p_max: int
    symbols: tuple[str, ...] = ()
    order: int | None = None
    coeffs: dict[int, dict[tuple[int, ...], Fraction]] | None = None
    values: np.ndarray | None = None
    residual: float | None = None
    iterations: int | None = None

    def coefficient(self, p: int, exponents: Sequence[int]) -> Fraction:
        return self.coeffs[p].get(tuple(exponents), Fraction(0))

    def univariate(self, p: int) -> list[Fraction]:
        """Coefficients of C_p by total order (single-symbol series only)."""
        if len(self.symbols) > 1:
            raise ValueError("univariate extraction needs a single symbol")
        out = [Fraction(0)] * (self.order + 1)
        for exp, val in self.coeffs[p].items():
            out[sum(exp)] += val
        return out

    def value(self, p: int) -> float:
        return float(self.values[p])

    def to_csv_rows(self) -> list:
        if self.mode == "numeric":
            return [(p, float(self.values[p])) for p in range(self.p_max + 1)]
        from .laurent import monomial_name

        rows = []
        for p in range(self.p_max + 1):
            for exp in sorted(self.coeffs[p], key=lambda t: (sum(t), t)):
                rows.append((p, monomial_name(self.symbols, exp), str(self.coeffs[p][exp])))
        return rows

    def to_json(self) -> dict:
        if self.mode == "numeric":
            return {
                "mode": "numeric",
                "residual": self.residual,
                "iterations": self.iterations,
                "C": [float(x) for x in self.values],
            }
        from .laurent import monomial_name

        return {
            "mode": "formal",
            "C": {
                str(p): {
                    monomial_name(self.symbols, e): str(v)
                    for e, v in sorted(self.coeffs[p].items(), key=lambda t: (sum(t[0]), t[0]))
                }
                for p in range(self.p_max + 1)
            },
        }


def _series_mul(a: dict, b: dict, cap: int) -> dict:
    out: dict[tuple[int, ...], Fraction] = {}
    for e1, v1 in a.items():
        d1 = sum(e1)
        for e2, v2 in b.items():
            if d1 + sum(e2) > cap:
                continue
            key = tuple(x + y for x, y in zip(e1, e2))
            s = out.get(key, Fraction(0)) + v1 * v2
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def solve_formal(V: Potential, order: int, p_max: int = 8) -> DiskSeries:
    """Exact term-by-term solution of the disk recursion.

    Unique order by order: the order-0 part is the Catalan sequence, and each
    coupling order is determined by lower orders and lower indices.  Every
    monomial of V must carry a symbol (its formal coupling).
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if any(m.symbol is None for m in V.monomials):
        raise ValueError("formal mode needs a symbol on every monomial")
    symbols = V.symbols
    ns = len(symbols)
    sym_index = {s: i for i, s in enumerate(symbols)}
    jmax = V.max_index
    growth = max(jmax - 1, 0)
    top = max(p_max, jmax) + order * growth

    zero_exp = (0,) * ns
    C: list[dict[tuple[int, ...], Fraction]] = [dict() for _ in range(top + 1)]
    C[0][zero_exp] = Fraction(1)
    for p in range(1, top + 1):
        C[p][zero_exp] = Fraction(catalan(p))

    for m in range(1, order + 1):
        width = max(p_max, jmax) + (order - m) * growth
        for p in range(1, width + 1):
            total = Fraction(0)
            acc: dict[tuple[int, ...], Fraction] = {}
            # quadratic term at exact order m
            for k in range(p):
                a, b = C[k], C[p - 1 - k]
                for e1, v1 in a.items():
                    d1 = sum(e1)
                    if d1 > m:
                        continue
                    for e2, v2 in b.items():
                        if d1 + sum(e2) != m:
                            continue
                        key = tuple(x + y for x, y in zip(e1, e2))
                        acc[key] = acc.get(key, Fraction(0)) + v1 * v2
            # potential term: j d_jV(C) C_{j+p-1}, order m overall
            for mon in V.monomials:
                si = sym_index[mon.symbol]
                for j, ej in mon.powers:
                    pref = -mon.coeff * ej * j
                    prod: dict[tuple[int, ...], Fraction] = {zero_exp: Fraction(1)}
                    for v, ev in mon.powers:
                        rep = ev - (1 if v == j else 0)
                        for _ in range(rep):
                            prod = _series_mul(prod, C[v], m - 1)
                    prod = _series_mul(prod, C[j + p - 1], m - 1)
                    for exp, val in prod.items():
                        if sum(exp) != m - 1:
                            continue
                        key = list(exp)
                        key[si] += 1
                        key = tuple(key)
                        acc[key] = acc.get(key, Fraction(0)) + pref * val
            for key, val in acc.items():
                if val:
                    cur = C[p].get(key, Fraction(0)) + val
                    if cur:
                        C[p][key] = cur
                    else:
                        C[p].pop(key, None)

    coeffs = {p: dict(C[p]) for p in range(p_max + 1)}
    return DiskSeries(
        mode="formal", p_max=p_max, symbols=symbols, order=order, coeffs=coeffs
    )


# ---------------------------------------------------------------------------
# Numeric fixed point


def _phi(C: np.ndarray, V: Potential, values: Mapping[str, float] | None) -> np.ndarray:
    """Right-hand side of the disk recursion on the truncated window.

    Indices beyond the window are closed to zero (the declared truncation
    rule); with subcritical couplings their influence on the reported range
    decays geometrically.
    """
    top = len(C) - 1
    conv = np.convolve(C, C)
    out = np.empty_like(C)
    out[0] = 1.0
    out[1:] = conv[0:top]
    for mon in V.monomials:
        t = float(mon.coeff)
        if mon.symbol is not None:
            t *= values[mon.symbol]
        for j, ej in mon.powers:
            pref = -t * ej * j
            det = 1.0
            for v, ev in mon.powers:
                det *= C[v] ** (ev - (1 if v == j else 0))
            shifted = np.zeros_like(C)
            hi = top - (j - 1)
            shifted[1 : hi + 1] = C[j : top + 1]
            out[1:] += pref * det * shifted[1:]
    return out


def solve_numeric(
    V: Potential,
    p_max: int,
    tolerance: float = 1e-12,
    max_iterations: int = 20000,
    damping: float = 0.5,
    values: Mapping[str, float] | None = None,
) -> DiskSeries:
    """Damped Jacobi fixed point from the Catalan initialization.

    Solves on the extended window [0, p_max + deg_max - 1]; convergence is
    max residual below tolerance on the full window.  Non-convergence raises
    NonConvergenceError (typically super-critical couplings).
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if not V.numeric() and values is None:
        raise ValueError("numeric mode needs coupling values for symbols")
    top = p_max + max(V.max_index - 1, 0)
    C = np.array([float(catalan(p)) for p in range(top + 1)])
    for it in range(1, max_iterations + 1):
        target = _phi(C, V, values)
        if not np.all(np.isfinite(target)) or np.max(np.abs(target)) > 1e250:
            raise NonConvergenceError(
                "fixed point diverged (couplings beyond the critical point?)",
                residual=float("inf"),
                iterations=it,
            )
        # per-component relative residual: float64 cannot hold absolute
        # 1e-12 next to Catalan-sized entries
        residual = float(np.max(np.abs(target - C) / np.maximum(1.0, np.abs(C))))
        C = (1.0 - damping) * C + damping * target
        if residual <= tolerance:
            return DiskSeries(
                mode="numeric",
                p_max=p_max,
                values=C[: p_max + 1].copy(),
                residual=residual,
                iterations=it,
            )
    raise NonConvergenceError(
        f"no convergence in {max_iterations} iterations", residual=residual, iterations=max_iterations
    )


# ---------------------------------------------------------------------------
# Float series mode (long univariate coefficient sequences)


@dataclass
class FloatSeries:
    """Coefficients of C_p(g) computed with the coupling rescaled by ``scale``.

    ``coeffs[n]`` approximates c_n * scale**n where c_n is the true
    coefficient; ratios of successive true coefficients are
    (coeffs[n+1] / coeffs[n]) / scale.
    """

    p: int
    coeffs: np.ndarray
    scale: float
    symbol: str

    def true_ratios(self) -> np.ndarray:
        a = np.abs(self.coeffs)
        return a[1:] / a[:-1] / self.scale

    def signs_alternate(self) -> bool:
        s = np.sign(self.coeffs)
        nz = s[s != 0]
        return bool(np.any(nz[1:] * nz[:-1] < 0))


def solve_series_float(
    V: Potential, order: int, p: int = 1, scale: float | None = None
) -> FloatSeries:
    """Univariate disk series in floating point, for long sequences.

    All monomials must share one symbol (the overall coupling, degree one
    each).  ``scale`` rescales the coupling to keep coefficients in range;
    by default it is chosen from a short pilot run.
    """
    syms = V.symbols
    if len(syms) != 1:
        raise ValueError("float series mode needs exactly one coupling symbol")
    if scale is None:
        pilot_order = min(order, 36)
        pilot = solve_series_float(V, pilot_order, p, scale=1.0)
        a = np.abs(pilot.coeffs)
        nz = np.nonzero(a > 0)[0]
        scale = 1.0
        if len(nz) >= 2 and nz[-1] >= 2:
            n = int(nz[-1])
            ratio = float(a[n] / a[n - 1])
            if np.isfinite(ratio) and ratio > 0:
                scale = 1.0 / ratio
    jmax = V.max_index
    growth = max(jmax - 1, 0)
    top = max(p, jmax, 1) + order * growth
    C = np.zeros((top + 1, order + 1))
    C[0, 0] = 1.0
    for q in range(1, top + 1):
        C[q, 0] = float(catalan(q))

    for m in range(1, order + 1):
        width = max(p, jmax, 1) + (order - m) * growth
        pot = np.zeros(width + 1)
        for mon in V.monomials:
            t = -float(mon.coeff) * scale
            for j, ej in mon.powers:
                pref = t * ej * j
                det = np.zeros(m)
                det[0] = 1.0
                for v, ev in mon.powers:
                    rep = ev - (1 if v == j else 0)
                    for _ in range(rep):
                        det = np.convolve(det, C[v, :m])[:m]
                block = C[j : j + width, :m]
                pot[1:] += pref * (block @ det[::-1])
        # quadratic term consumes same-order values of lower index, so the
        # column fills in increasing q
        for q in range(1, width + 1):
            quad = float(np.sum(C[0:q, 0 : m + 1] * C[q - 1 :: -1, m::-1]))
            C[q, m] = quad + pot[q]
        if not np.all(np.isfinite(C[1 : width + 1, m])):
            raise OverflowError("float series overflow; pass a larger scale")
    return FloatSeries(p=p, coeffs=C[p, : order + 1].copy(), scale=scale, symbol=syms[0])
