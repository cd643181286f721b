"""Truncated Laurent series with Fraction coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LaurentSeries:
    """``sum_i coeffs[i] * t^(valuation + i) + O(t^prec)``."""

    valuation: int
    coeffs: tuple
    prec: int

    def __post_init__(self):
        cs = [Fraction(c) for c in self.coeffs]
        cs = cs[: max(0, self.prec - self.valuation)]
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def one(cls, prec: int) -> "LaurentSeries":
        return cls(0, (1,), prec)

    @classmethod
    def binomial(cls, c: Fraction, alpha: Fraction, prec: int) -> "LaurentSeries":
        """``(1 + c t)^alpha`` for rational ``alpha``, to ``O(t^prec)``."""
        coeffs, term = [], Fraction(1)
        for j in range(max(prec, 0)):
            coeffs.append(term)
            term = term * (alpha - j) / (j + 1) * c
        return cls(0, tuple(coeffs), prec)

    def coefficient(self, j: int) -> Fraction:
        if j >= self.prec:
            raise ValueError(f"coefficient of t^{j} lies beyond precision O(t^{self.prec})")
        i = j - self.valuation
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    @property
    def leading(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def shift(self, n: int) -> "LaurentSeries":
        return LaurentSeries(self.valuation + n, self.coeffs, self.prec + n)

    def scale(self, c) -> "LaurentSeries":
        return LaurentSeries(self.valuation, tuple(c * x for x in self.coeffs), self.prec)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        val = self.valuation + other.valuation
        prec = min(self.prec + other.valuation, other.prec + self.valuation)
        n = max(0, prec - val)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs[:n]):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: n - i]):
                out[i + j] += a * b
        return LaurentSeries(val, tuple(out), prec)

    def power(self, alpha: Fraction) -> "LaurentSeries":
        """``u^alpha`` for a series with ``u = u_0 (1 + O(t))``, ``u_0 = 1``.

        Uses the recurrence ``n u_0 v_n = sum_{j=1}^n ((alpha+1) j - n) u_j v_{n-j}``.
        """
        if self.valuation != 0 or self.leading != 1:
            raise ValueError("power needs a series with constant term 1")
        alpha = Fraction(alpha)
        u = self.coeffs
        n_terms = self.prec
        v = [Fraction(1)]
        for n in range(1, n_terms):
            acc = Fraction(0)
            for j in range(1, min(n, len(u) - 1) + 1):
                if u[j]:
                    acc += ((alpha + 1) * j - n) * u[j] * v[n - j]
            v.append(acc / n)
        return LaurentSeries(0, tuple(v), n_terms)


def product(series: Sequence[LaurentSeries], prec: int) -> LaurentSeries:
    out = LaurentSeries.one(prec)
    for s in series:
        out = out * s
    return out
