"""Sparse Laurent polynomials with exact rational coefficients.

Variables are hashable, orderable ids (``("e", 4)``, ``("g", 0)``).  A
monomial is a sorted tuple of ``(var, exponent)`` pairs with nonzero
exponents; negative exponents are allowed for every variable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping


def monomial(exps: Mapping) -> tuple:
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def mono_mul(a: tuple, b: tuple) -> tuple:
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return monomial(d)


def mono_pow(a: tuple, n: int) -> tuple:
    return monomial({v: e * n for v, e in a})


def var_name(v) -> str:
    kind, idx = v
    return f"a_{kind}{idx}"


def mono_str(a: tuple) -> str:
    if not a:
        return "1"
    return " * ".join(var_name(v) + (f"^{e}" if e != 1 else "") for v, e in a)


class LaurentPolynomial:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[mono] = c

    @classmethod
    def mono(cls, exps: Mapping, coeff=1) -> "LaurentPolynomial":
        return cls({monomial(exps): coeff})

    @classmethod
    def const(cls, c) -> "LaurentPolynomial":
        return cls({(): c})

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            return other
        return LaurentPolynomial.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def substitute(self, subs: Mapping) -> "LaurentPolynomial":
        """Replace variables by Laurent monomials (``var -> monomial tuple``)."""
        out = {}
        for m, c in self.terms.items():
            new = ()
            for v, e in m:
                new = mono_mul(new, mono_pow(subs[v], e) if v in subs else ((v, e),))
            out[new] = out.get(new, 0) + c
        return LaurentPolynomial(out)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            parts.append(f"{c}*{mono_str(m)}" if c != 1 else mono_str(m))
        return " + ".join(parts)
