"""Exact Laurent polynomials in the tensor size N, and series over coupling monomials.

Amplitudes of closed graphs are integer powers of N with rational weights, so the
natural value domain is a sparse Laurent polynomial with Fraction coefficients.
Perturbative results pair each coupling monomial with one such polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str, float)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class LaurentPolynomial:
    """Sparse polynomial in N with integer exponents of either sign.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Fraction] | None = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                v = _as_fraction(v)
                if v:
                    c[int(k)] = v
        self._c = c

    @classmethod
    def constant(cls, value) -> "LaurentPolynomial":
        return cls({0: _as_fraction(value)})

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "LaurentPolynomial":
        return cls({power: _as_fraction(coeff)})

    def items(self):
        return self._c.items()

    def coeff(self, power: int) -> Fraction:
        return self._c.get(power, Fraction(0))

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ({0: _as_fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(other)
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, Fraction(0)) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        out = LaurentPolynomial.__new__(LaurentPolynomial)
        out._c = c
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentPolynomial.__new__(LaurentPolynomial)
        out._c = {k: -v for k, v in self._c.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _as_fraction(other)
            if not f:
                return LaurentPolynomial()
            out = LaurentPolynomial.__new__(LaurentPolynomial)
            out._c = {k: v * f for k, v in self._c.items()}
            return out
        c: dict[int, Fraction] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                s = c.get(k, Fraction(0)) + v1 * v2
                if s:
                    c[k] = s
                else:
                    c.pop(k, None)
        out = LaurentPolynomial.__new__(LaurentPolynomial)
        out._c = c
        return out

    __rmul__ = __mul__

    def shift(self, power: int) -> "LaurentPolynomial":
        """Multiply by N**power."""
        out = LaurentPolynomial.__new__(LaurentPolynomial)
        out._c = {k + power: v for k, v in self._c.items()}
        return out

    def evaluate(self, n) -> Fraction:
        n = _as_fraction(n)
        return sum((v * n**k for k, v in self._c.items()), Fraction(0))

    def max_power(self) -> int | None:
        return max(self._c) if self._c else None

    def leading_part(self) -> "LaurentPolynomial":
        """The terms of maximal N power (zero polynomial stays zero)."""
        if not self._c:
            return LaurentPolynomial()
        m = max(self._c)
        return LaurentPolynomial({m: self._c[m]})

    def to_json(self) -> dict[str, str]:
        return {str(k): str(v) for k, v in sorted(self._c.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, object]) -> "LaurentPolynomial":
        return cls({int(k): _as_fraction(v) for k, v in data.items()})

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, reverse=True):
            v = self._c[k]
            if k == 0:
                parts.append(f"{v}")
            elif k == 1:
                parts.append(f"{v}*N")
            else:
                parts.append(f"{v}*N^{k}")
        return " + ".join(parts)


N = LaurentPolynomial.monomial(1)
ONE = LaurentPolynomial.constant(1)


def monomial_name(symbols: tuple[str, ...], exponents: tuple[int, ...]) -> str:
    parts = []
    for s, e in zip(symbols, exponents):
        if e == 1:
            parts.append(s)
        elif e > 1:
            parts.append(f"{s}^{e}")
    return "*".join(parts) if parts else "1"


@dataclass
class CouplingSeries:
    """Formal series in coupling symbols with LaurentPolynomial coefficients.

    ``terms`` maps an exponent tuple (aligned with ``symbols``) to the exact
    N-dependence of that coupling monomial.
    """

    symbols: tuple[str, ...]
    terms: dict[tuple[int, ...], LaurentPolynomial] = field(default_factory=dict)

    def add_term(self, exponents: tuple[int, ...], value: LaurentPolynomial) -> None:
        cur = self.terms.get(exponents)
        new = value if cur is None else cur + value
        if new:
            self.terms[exponents] = new
        else:
            self.terms.pop(exponents, None)

    def coefficient(self, exponents: tuple[int, ...]) -> LaurentPolynomial:
        return self.terms.get(tuple(exponents), LaurentPolynomial())

    def total_orders(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def truncated(self, max_total_order: int) -> "CouplingSeries":
        return CouplingSeries(
            self.symbols,
            {e: v for e, v in self.terms.items() if sum(e) <= max_total_order},
        )

    def leading_parts(self) -> "CouplingSeries":
        """Keep only the maximal N power of each coupling monomial."""
        return CouplingSeries(
            self.symbols, {e: v.leading_part() for e, v in self.terms.items()}
        )

    def to_json(self) -> dict[str, dict[str, str]]:
        out = {}
        for e in sorted(self.terms, key=lambda t: (sum(t), t)):
            out[monomial_name(self.symbols, e)] = self.terms[e].to_json()
        return out

    def to_csv_rows(self) -> list[tuple[str, int, str]]:
        rows = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t)):
            name = monomial_name(self.symbols, e)
            for k, v in sorted(self.terms[e].items()):
                rows.append((name, k, str(v)))
        return rows

    def __repr__(self):
        items = ", ".join(
            f"{monomial_name(self.symbols, e)}: ({v!r})"
            for e, v in sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))
        )
        return f"CouplingSeries({items})"
