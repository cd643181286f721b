"""Residues and k-residues of k-differentials on the projective line.

A :class:`KDifferential0` is ``scalar * prod (z - b_j)^{m_j} (dz)^k``; the
point at infinity then has order ``m_inf = -2k - sum m_j``.  At infinity we
expand in ``w = 1/z``, where ``(dz)^k = (-1)^k w^{-2k} (dw)^k``; so for
``k = 1`` the residue at infinity is the usual one and all residues sum to 0.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import sympy
from mpmath import iv

from .errors import InputError
from .series import LaurentSeries, product

log = logging.getLogger(__name__)

INF = "inf"
Point = Union[Fraction, str]


def parse_point(text) -> Point:
    if isinstance(text, str) and text.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad point {text!r}") from exc


def rational_root(q: Fraction, k: int) -> Optional[Fraction]:
    """The real ``k``-th root of ``q`` if it is rational (positive for even k)."""
    q = Fraction(q)
    if q < 0:
        if k % 2 == 0:
            return None
        r = rational_root(-q, k)
        return None if r is None else -r
    num, exact_n = sympy.integer_nthroot(q.numerator, k)
    den, exact_d = sympy.integer_nthroot(q.denominator, k)
    if exact_n and exact_d:
        return Fraction(int(num), int(den))
    return None


@dataclass(frozen=True)
class KDifferential0:
    k: int
    scalar: Fraction
    factors: tuple  # ((location, multiplicity), ...)

    def __post_init__(self):
        if self.k < 1:
            raise InputError(f"k must be positive, got {self.k}")
        facs = tuple((Fraction(b), int(m)) for b, m in self.factors)
        locs = [b for b, _ in facs]
        if len(set(locs)) != len(locs):
            raise InputError(f"factor locations must be distinct: {locs}")
        if Fraction(self.scalar) == 0:
            raise InputError("scalar must be nonzero")
        object.__setattr__(self, "factors", facs)
        object.__setattr__(self, "scalar", Fraction(self.scalar))

    @classmethod
    def step1(cls, k: int, m1: int, m2: int) -> "KDifferential0":
        """``z^{m1} (1 - z)^{m2} (dz)^k``."""
        return cls(k, Fraction((-1) ** (m2 % 2)), ((0, m1), (1, m2)))

    @property
    def m_inf(self) -> int:
        return -2 * self.k - sum(m for _, m in self.factors)

    @property
    def points(self) -> list:
        return [b for b, _ in self.factors] + [INF]

    def order_at(self, point: Point) -> int:
        if point == INF:
            return self.m_inf
        for b, m in self.factors:
            if b == point:
                return m
        return 0

    def point_at(self, index) -> Point:
        """Resolve a 1-based factor index or ``"inf"``."""
        if isinstance(index, str) and index.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        i = int(index)
        if not 1 <= i <= len(self.factors):
            raise InputError(f"point index {i} out of range 1..{len(self.factors)}")
        return self.factors[i - 1][0]

    def expansion(self, point: Point, n_terms: int):
        """``(C, ord, u)`` with ``xi / (dt)^k = C t^ord u(t)`` and ``u(0) = 1``."""
        if point == INF:
            const = self.scalar * (-1) ** self.k
            parts = [LaurentSeries.binomial(-b, Fraction(m), n_terms)
                     for b, m in self.factors if b != 0]
            return const, self.m_inf, product(parts, n_terms)
        point = Fraction(point)
        const = self.scalar
        parts = []
        for b, m in self.factors:
            if b == point:
                continue
            const *= (point - b) ** m
            parts.append(LaurentSeries.binomial(1 / (point - b), Fraction(m), n_terms))
        return const, self.order_at(point), product(parts, n_terms)

    def affine_pullback(self, a: Fraction, c: Fraction) -> "KDifferential0":
        """The same differential in the coordinate ``w`` with ``z = a w + c``."""
        a, c = Fraction(a), Fraction(c)
        if a == 0:
            raise InputError("affine map needs a != 0")
        total = sum(m for _, m in self.factors)
        return KDifferential0(self.k, self.scalar * a ** (self.k + total),
                              tuple(((b - c) / a, m) for b, m in self.factors))


def residue(diff: KDifferential0, point: Point) -> Fraction:
    if diff.k != 1:
        raise InputError("residue needs k = 1; use k_residue")
    order = diff.order_at(point)
    if order >= 0:
        log.info("point %s is not a pole; residue 0", point)
        return Fraction(0)
    n = -1 - order
    const, _, u = diff.expansion(point, n + 1)
    return const * u.coefficient(n)


@dataclass(frozen=True)
class KResidueValue:
    value: Fraction
    k: int
    root: Optional[Fraction] = None  # a rational k-th root, when one exists

    def representatives(self) -> list:
        if self.value == 0:
            return ["0"]
        if self.root is not None:
            return [f"zeta_{self.k}^{j} * {self.root}" for j in range(self.k)]
        return [f"zeta_{self.k}^{j} * ({self.value})^(1/{self.k})" for j in range(self.k)]

    def to_json(self) -> dict:
        return {"value": self.value, "k": self.k,
                "root": self.root, "representatives": self.representatives()}


def k_residue(diff: KDifferential0, point: Point,
              leading_root: Optional[Fraction] = None) -> KResidueValue:
    """``s^k`` where ``s`` is the ``t^-1`` coefficient of a k-th root of ``xi``.

    ``leading_root`` picks the k-th root of the leading coefficient; the
    value does not depend on the choice.
    """
    k = diff.k
    order = diff.order_at(point)
    if order >= 0:
        raise InputError(f"point {point} has order {order} >= 0; not a pole")
    if order % k:
        raise InputError(f"pole order {order} at {point} is not divisible by k = {k}")
    n = -1 - order // k
    const, _, u = diff.expansion(point, n + 1)
    coef = u.power(Fraction(1, k)).coefficient(n)
    value = const * coef ** k
    if leading_root is not None:
        leading_root = Fraction(leading_root)
        if leading_root ** k != const:
            raise InputError(f"{leading_root}^{k} != leading coefficient {const}")
        s = leading_root * coef
        assert s ** k == value
        return KResidueValue(value, k, s)
    c0 = rational_root(const, k)
    return KResidueValue(value, k, None if c0 is None else c0 * coef)


def step1_closed_form(k: int, m1: int, m2: int) -> Fraction:
    """k-residue at 0 of ``z^{m1} (1-z)^{m2} (dz)^k`` by the falling factorial."""
    if k < 1 or m1 >= 0 or m1 % k:
        raise InputError(f"need m1 < 0 divisible by k, got m1={m1}, k={k}")
    if m2 >= 0 and m2 % k == 0:
        raise InputError(f"need m2 negative or not divisible by k, got m2={m2}")
    b = -m1 // k - 1
    alpha = Fraction(m2, k)
    ff = Fraction(1)
    for i in range(b):
        ff *= alpha - i
    value = ((-1) ** b * ff / math.factorial(b)) ** k
    if value == 0:
        raise AssertionError("closed form vanished")
    return value


# root sums ------------------------------------------------------------------

@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple:
    x = sympy.Symbol("x")
    coeffs = sympy.cyclotomic_poly(n, x, polys=True).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))  # low degree first


def _vanishes_in_cyclotomic(terms, k: int) -> bool:
    """Is ``sum q * zeta_{2k}^e`` zero?  ``terms`` are ``(q, e)`` pairs."""
    n = 2 * k
    poly = [Fraction(0)] * n
    for q, e in terms:
        poly[e % n] += q
    phi = _cyclotomic(n)
    d = len(phi) - 1
    for i in range(n - 1, d - 1, -1):
        c = poly[i]
        if c:
            for j, p in enumerate(phi):
                poly[i - d + j] -= c * p
    return not any(poly[:d])


def _certify_nonzero(abs_values, exps, k: int) -> Optional[bool]:
    """Decide whether ``sum |R_i|^{1/k} zeta_{2k}^{e_i}`` is nonzero.

    Interval enclosures at growing precision first; if zero stays enclosed,
    an exact minimal polynomial decides.  Returns None only if both fail.
    """
    for prec in (64, 128, 256, 512):
        old = iv.prec
        iv.prec = prec
        try:
            re = iv.mpf(0)
            im = iv.mpf(0)
            for a, e in zip(abs_values, exps):
                r = (iv.mpf(a.numerator) / a.denominator) ** (iv.mpf(1) / k)
                re += r * iv.cos(iv.pi * e / k)
                im += r * iv.sin(iv.pi * e / k)
            if 0 not in re or 0 not in im:
                return True
        finally:
            iv.prec = old
    x = sympy.Symbol("x")
    expr = sum(sympy.root(sympy.Rational(a.numerator, a.denominator), k)
               * sympy.exp(sympy.I * sympy.pi * e / k) for a, e in zip(abs_values, exps))
    try:
        poly = sympy.minimal_polynomial(expr, x)
    except (NotImplementedError, sympy.PolynomialError):
        return None
    return poly != x


@dataclass
class RootSumReport:
    k: int
    subset: tuple
    residues: tuple
    proper: bool            # hypotheses of the non-vanishing statement hold
    method: str             # "exact" or "interval"
    choices: int = 0
    zero_choices: list = field(default_factory=list)
    undetermined: int = 0

    @property
    def nonvanishing(self) -> bool:
        return not self.zero_choices and not self.undetermined

    def to_json(self) -> dict:
        return {"k": self.k, "subset": [str(p) for p in self.subset],
                "k_residues": list(self.residues), "proper": self.proper,
                "method": self.method, "choices": self.choices,
                "zero_choices": [list(c) for c in self.zero_choices],
                "undetermined": self.undetermined, "nonvanishing": self.nonvanishing}


def root_sum_check(diff: KDifferential0, subset: Sequence[Point]) -> RootSumReport:
    """Test ``r_1 + ... + r_n' != 0`` over every choice of k-th roots.

    Multiplying all roots by one root of unity does not change vanishing,
    so the first root is held fixed.
    """
    k = diff.k
    subset = tuple(subset)
    if not subset or len(set(subset)) != len(subset):
        raise InputError("subset must be a nonempty list of distinct points")
    for p in subset:
        m = diff.order_at(p)
        if m >= 0:
            raise InputError(f"point {p} has order {m} >= 0; subsets may contain poles only")
        if m % k:
            raise InputError(f"pole order {m} at {p} is not divisible by k = {k}")
    others = [p for p in diff.points if p not in subset]
    proper = any((m := diff.order_at(p)) < 0 or m % k for p in others)
    values = tuple(k_residue(diff, p).value for p in subset)
    signs = [0 if v >= 0 else 1 for v in values]
    mags = [rational_root(abs(v), k) for v in values]
    exact = all(q is not None for q in mags)
    report = RootSumReport(k, subset, values, proper, "exact" if exact else "interval")
    for js in itertools.product(range(k), repeat=len(subset) - 1):
        choice = (0,) + js
        exps = [a + 2 * j for a, j in zip(signs, choice)]
        report.choices += 1
        if exact:
            if _vanishes_in_cyclotomic(list(zip(mags, exps)), k):
                report.zero_choices.append(choice)
        else:
            verdict = _certify_nonzero([abs(v) for v in values], exps, k)
            if verdict is None:
                report.undetermined += 1
            elif not verdict:
                report.zero_choices.append(choice)
    return report


def random_differential(k: int, stratum: Sequence[int], rng: random.Random,
                        height: int = 10 ** 6) -> KDifferential0:
    """Random distinct finite rational points; infinity is regular."""
    if sum(stratum) != -2 * k:
        raise InputError(f"genus-0 signature must sum to -2k = {-2 * k}, got {sum(stratum)}")
    locs = set()
    while len(locs) < len(stratum):
        locs.add(Fraction(rng.randint(-height, height), rng.randint(1, height)))
    return KDifferential0(k, Fraction(1), tuple(zip(sorted(locs), stratum)))


@dataclass
class RootSumExperiment:
    k: int
    stratum: tuple
    subset: tuple           # 1-based marking indices
    trials: int
    nonzero: int
    zero: int
    undetermined: int
    failures: list          # factor tuples of differentials with a vanishing sum

    @property
    def frequency(self) -> Fraction:
        return Fraction(self.nonzero, self.trials) if self.trials else Fraction(0)

    def to_json(self) -> dict:
        return {"k": self.k, "stratum": list(self.stratum), "subset": list(self.subset),
                "trials": self.trials, "nonzero": self.nonzero, "zero": self.zero,
                "undetermined": self.undetermined, "frequency": self.frequency,
                "failures": [[[b, m] for b, m in f] for f in self.failures]}


def root_sum_experiment(k: int, stratum: Sequence[int], subset: Sequence[int],
                        trials: int, seed: int = 0) -> RootSumExperiment:
    stratum = tuple(int(x) for x in stratum)
    subset = tuple(int(i) for i in subset)
    nonzero = zero = undetermined = 0
    failures = []
    for t in range(trials):
        # one independent stream per trial keeps trials order-independent
        rng = random.Random(seed * 1_000_003 + t)
        diff = random_differential(k, stratum, rng)
        report = root_sum_check(diff, [diff.point_at(i) for i in subset])
        if not report.proper:
            raise InputError(f"subset {subset} of {stratum} is not a proper subset "
                             "with a remaining pole or non-divisible point")
        if report.zero_choices:
            zero += 1
            failures.append(diff.factors)
        elif report.undetermined:
            undetermined += 1
        else:
            nonzero += 1
    return RootSumExperiment(k, stratum, subset, trials, nonzero, zero, undetermined, failures)
