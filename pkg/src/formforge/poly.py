"""Sparse multivariate polynomials and rational functions over a coefficient field.

Terms are stored as {exponent tuple: coefficient}; the canonical term order is
graded lexicographic.  Identity checking offers a symbolic mode (canonical
subtraction, a proof) and a random mode (exact evaluation with a
Schwartz-Zippel style confidence bound).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .coeffield import FieldElement


class NotDivisible(ArithmeticError):
    """exact_div called on a non-multiple."""


class TermBudgetExceeded(RuntimeError):
    """A symbolic expansion was refused because its estimated size is too large."""

    def __init__(self, estimate: int, budget: int):
        super().__init__(
            "estimated %d terms exceeds the configured budget of %d" % (estimate, budget)
        )
        self.estimate = estimate
        self.budget = budget


DEFAULT_TERM_BUDGET = 5_000_000


def _grlex(e: Tuple[int, ...]):
    return (sum(e), e)


class Polynomial:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars: int, terms: dict):
        self.field = field
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(field, nvars: int) -> "Polynomial":
        return Polynomial(field, nvars, {})

    @staticmethod
    def const(field, nvars: int, c) -> "Polynomial":
        if not isinstance(c, FieldElement):
            c = field.from_rational(c)
        return Polynomial(field, nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(field, nvars: int, i: int) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return Polynomial(field, nvars, {tuple(e): field.one})

    @staticmethod
    def from_pairs(field, nvars: int, pairs) -> "Polynomial":
        terms = {}
        for e, c in pairs:
            if not isinstance(c, FieldElement):
                c = field.from_rational(c)
            e = tuple(e)
            terms[e] = terms[e] + c if e in terms else c
        return Polynomial(field, nvars, terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Polynomial(self.field, self.nvars, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] - c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = -c
        return Polynomial(self.field, self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = c1 * c2
                if e in out:
                    s = out[e] + p
                    if s.is_zero():
                        del out[e]
                    else:
                        out[e] = s
                else:
                    out[e] = p
        return Polynomial(self.field, self.nvars, out)

    def scale(self, c) -> "Polynomial":
        if not isinstance(c, FieldElement):
            c = self.field.from_rational(c)
        if c.is_zero():
            return Polynomial.zero(self.field, self.nvars)
        return Polynomial(self.field, self.nvars, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Polynomial.const(self.field, self.nvars, self.field.one)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Quotient when `other` divides exactly, else NotDivisible."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = self
        quot = Polynomial.zero(self.field, self.nvars)
        lt_e, lt_c = other.leading_term()
        lt_inv = lt_c.inv()
        while not rem.is_zero():
            re, rc = rem.leading_term()
            qe = tuple(a - b for a, b in zip(re, lt_e))
            if any(x < 0 for x in qe):
                raise NotDivisible("leading term %r not divisible by %r" % (re, lt_e))
            t = Polynomial(self.field, self.nvars, {qe: rc * lt_inv})
            quot = quot + t
            rem = rem - t * other
        return quot

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Degree of the zero polynomial is reported as -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self, d: Optional[int] = None) -> bool:
        if not self.terms:
            return True
        degs = {sum(e) for e in self.terms}
        if len(degs) != 1:
            return False
        return True if d is None else degs == {d}

    def leading_term(self):
        e = max(self.terms, key=_grlex)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    def constant_coeff(self) -> FieldElement:
        return self.terms.get((0,) * self.nvars, self.field.zero)

    # -- evaluation and substitution ----------------------------------------

    def eval(self, point: Sequence[FieldElement]) -> FieldElement:
        if len(point) != self.nvars:
            raise ValueError("point has %d coordinates, expected %d" % (len(point), self.nvars))
        maxes = [0] * self.nvars
        for e in self.terms:
            for i, ei in enumerate(e):
                if ei > maxes[i]:
                    maxes[i] = ei
        powers = []
        for i in range(self.nvars):
            row = [self.field.one]
            for _ in range(maxes[i]):
                row.append(row[-1] * point[i])
            powers.append(row)
        total = self.field.zero
        for e, c in self.terms.items():
            v = c
            for i, ei in enumerate(e):
                if ei:
                    v = v * powers[i][ei]
            total = total + v
        return total

    def eval_int(self, point: Sequence[int]) -> FieldElement:
        return self.eval([self.field.from_rational(x) for x in point])

    def compose(self, args: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute args[i] for variable i.  All args share one ambient ring."""
        if len(args) != self.nvars:
            raise ValueError("need %d substitution arguments" % (self.nvars,))
        if args:
            field, nvars = args[0].field, args[0].nvars
        else:
            field, nvars = self.field, 0
        cache = {}

        def arg_pow(i: int, k: int) -> "Polynomial":
            key = (i, k)
            if key not in cache:
                cache[key] = args[i] ** k
            return cache[key]

        out = Polynomial.zero(field, nvars)
        for e, c in self.terms.items():
            t = Polynomial.const(field, nvars, c)
            for i, ei in enumerate(e):
                if ei:
                    t = t * arg_pow(i, ei)
            out = out + t
        return out

    def embed(self, nvars: int, offset: int) -> "Polynomial":
        """The same polynomial with variables shifted into a larger ring."""
        if offset < 0 or offset + self.nvars > nvars:
            raise ValueError("embedding does not fit")
        out = {}
        pad_lo = (0,) * offset
        pad_hi = (0,) * (nvars - offset - self.nvars)
        for e, c in self.terms.items():
            out[pad_lo + e + pad_hi] = c
        return Polynomial(self.field, nvars, out)

    # -- plumbing ------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Polynomial):
            raise TypeError("expected a Polynomial, got %r" % (other,))
        if other.field != self.field or other.nvars != self.nvars:
            raise TypeError("polynomials from different rings")

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.field == other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = []
        for e, c in self.sorted_terms()[:8]:
            mono = "*".join(
                "x%d^%d" % (i, k) if k > 1 else "x%d" % i for i, k in enumerate(e) if k
            )
            bits.append("%r%s" % (c, "*" + mono if mono else ""))
        tail = " + ..." if len(self.terms) > 8 else ""
        return "Poly(%s%s)" % (" + ".join(bits), tail)


def poly_arith(op: str, p: Polynomial, q: Polynomial) -> Polynomial:
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "exact_div":
        return p.exact_div(q)
    raise ValueError("unknown op %r" % (op,))


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """num/den with den nonzero.  Reduction is lazy: the denominator is kept
    monic (graded-lex leading coefficient 1) and no multivariate gcd is run."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = Polynomial.const(num.field, num.nvars, num.field.one)
        else:
            _, lc = den.leading_term()
            if lc != num.field.one:
                inv = lc.inv()
                num = num.scale(inv)
                den = den.scale(inv)
        self.num = num
        self.den = den

    @staticmethod
    def from_poly(p: Polynomial) -> "RationalFunction":
        return RationalFunction(p, Polynomial.const(p.field, p.nvars, p.field.one))

    @staticmethod
    def const(field, nvars: int, c) -> "RationalFunction":
        return RationalFunction.from_poly(Polynomial.const(field, nvars, c))

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def inv(self) -> "RationalFunction":
        return RationalFunction(self.den, self.num)

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return self.inv() ** (-n)
        return RationalFunction(self.num**n, self.den**n)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        raise TypeError("rational functions are not hashable")

    def __repr__(self):
        if self.den.terms == {(0,) * self.den.nvars: self.den.field.one}:
            return repr(self.num)
        return "(%r)/(%r)" % (self.num, self.den)


# ---------------------------------------------------------------------------
# linear substitution with denominator clearing


def substitute_linear(p: Polynomial, M: Sequence[Sequence[RationalFunction]]):
    """For homogeneous p in Y and a square matrix M of rational functions in X,
    return (q, D) with q = D^deg(p) * p(M*Y), a polynomial in the X then Y
    variables, where D is the product of the distinct entry denominators."""
    n = p.nvars
    if len(M) != n or any(len(row) != n for row in M):
        raise ValueError("matrix must be %d x %d" % (n, n))
    if not p.is_homogeneous():
        raise ValueError("substitute_linear needs a homogeneous polynomial")
    if n == 0:
        raise ValueError("no variables to substitute")
    field = M[0][0].num.field
    nx = M[0][0].num.nvars
    if field != p.field:
        raise TypeError("matrix and polynomial use different coefficient fields")
    big = nx + n

    dens = []
    for row in M:
        for entry in row:
            if not any(entry.den == d for d in dens):
                dens.append(entry.den)
    D = Polynomial.const(field, nx, field.one)
    for d in dens:
        D = D * d

    args = []
    for i in range(n):
        w = Polynomial.zero(field, big)
        for j in range(n):
            entry = M[i][j]
            if entry.is_zero():
                continue
            coeff = entry.num * D.exact_div(entry.den)
            lifted = coeff.embed(big, 0)
            yj = Polynomial.variable(field, big, nx + j)
            w = w + lifted * yj
        args.append(w)
    q = p.compose(args)
    return q, D


# ---------------------------------------------------------------------------
# deterministic nonzero points


def first_nonzero_point(p: Polynomial):
    """First point of a fixed enumeration where p does not vanish.

    Tries the all-ones vector, then integer vectors from a seeded generator
    over boxes that double every eight attempts.  Deterministic across runs.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no nonzero point")
    n = p.nvars
    if n == 0:
        return ()
    point = (1,) * n
    if not p.eval_int(point).is_zero():
        return point
    rng = random.Random(0)
    bound = 2
    attempt = 0
    while True:
        point = tuple(rng.randint(-bound, bound) for _ in range(n))
        if not p.eval_int(point).is_zero():
            return point
        attempt += 1
        if attempt % 8 == 0:
            bound *= 2


# ---------------------------------------------------------------------------
# perfect d-th power detection


def _binom_frac(x: Fraction, j: int) -> Fraction:
    out = Fraction(1)
    for i in range(j):
        out *= (x - i) / (i + 1)
    return out


def _trunc(p: Polynomial, bound: int) -> Polynomial:
    return Polynomial(
        p.field, p.nvars, {e: c for e, c in p.terms.items() if sum(e) <= bound}
    )


def is_dth_power(p: Polynomial, d: int):
    """Decide whether p = c * g^d for a scalar c and a polynomial g.

    Returns (c, g) with g having leading coefficient 1, or None.  The root is
    extracted as a truncated power series after shifting so the constant
    section is nonzero, then certified by exact re-expansion.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    if p.is_zero():
        raise ValueError("is_dth_power needs a nonzero polynomial")
    deg = p.total_degree()
    if deg % d != 0:
        return None
    e = deg // d
    field = p.field
    n = p.nvars

    shift = first_nonzero_point(p)
    fwd = [
        Polynomial.variable(field, n, i)
        + Polynomial.const(field, n, field.from_rational(shift[i]))
        for i in range(n)
    ]
    q = p.compose(fwd) if n else p
    c0 = q.constant_coeff()

    r = q.scale(c0.inv())
    w = r - Polynomial.const(field, n, field.one)
    s = Polynomial.const(field, n, field.one)
    wj = Polynomial.const(field, n, field.one)
    for j in range(1, e + 1):
        wj = _trunc(wj * w, e)
        if wj.is_zero():
            break
        s = s + wj.scale(field.from_rational(_binom_frac(Fraction(1, d), j)))
    # certify: the series root must be an exact polynomial root
    if (s**d).scale(c0) != q:
        return None

    back = [
        Polynomial.variable(field, n, i)
        - Polynomial.const(field, n, field.from_rational(shift[i]))
        for i in range(n)
    ]
    g = s.compose(back) if n else s
    _, lc = g.leading_term()
    c = c0 * lc**d
    g = g.scale(lc.inv())
    return c, g


# ---------------------------------------------------------------------------
# identity checking


@dataclass(frozen=True)
class IdentityReport:
    verdict: str  # "proved" | "refuted" | "evidence"
    mode: str  # "symbolic" | "random"
    samples: Optional[int] = None
    seed: Optional[int] = None
    box_halfwidth: Optional[int] = None
    counterexample: Optional[Tuple[int, ...]] = None
    per_sample_bound: Optional[Fraction] = None
    overall_bound: Optional[Fraction] = None

    def holds(self) -> bool:
        return self.verdict in ("proved", "evidence")


DEFAULT_BOX_HALFWIDTH = 10**6
DEFAULT_SAMPLES = 50


def verify_identity(
    lhs: Polynomial,
    rhs: Polynomial,
    mode: str = "symbolic",
    samples: int = DEFAULT_SAMPLES,
    seed: Optional[int] = None,
    box_halfwidth: int = DEFAULT_BOX_HALFWIDTH,
) -> IdentityReport:
    """Compare two polynomials.

    symbolic: canonical subtraction; "proved" is a proof, and a refutation
    carries a concrete point where the sides differ.
    random: exact evaluation at uniformly drawn integer points; all-match is
    "evidence" with a (total degree)/(box size) bound per sample.
    """
    lhs._check(rhs)
    if mode == "symbolic":
        diff = lhs - rhs
        if diff.is_zero():
            return IdentityReport(verdict="proved", mode="symbolic")
        pt = first_nonzero_point(diff) if diff.nvars else ()
        return IdentityReport(verdict="refuted", mode="symbolic", counterexample=pt)
    if mode != "random":
        raise ValueError("mode must be 'symbolic' or 'random'")
    if seed is None:
        raise ValueError("random mode needs an explicit seed")
    rng = random.Random(seed)
    n = lhs.nvars
    deg = max(lhs.total_degree(), rhs.total_degree(), 0)
    size = 2 * box_halfwidth + 1
    for _ in range(samples):
        pt = tuple(rng.randint(-box_halfwidth, box_halfwidth) for _ in range(n))
        if lhs.eval_int(pt) != rhs.eval_int(pt):
            return IdentityReport(
                verdict="refuted",
                mode="random",
                samples=samples,
                seed=seed,
                box_halfwidth=box_halfwidth,
                counterexample=pt,
            )
    per = Fraction(deg, size)
    return IdentityReport(
        verdict="evidence",
        mode="random",
        samples=samples,
        seed=seed,
        box_halfwidth=box_halfwidth,
        per_sample_bound=per,
        overall_bound=per**samples,
    )


def compose_estimate(p: Polynomial, args: Sequence[Polynomial]) -> int:
    """Upper bound on the number of monomial products expanded by p.compose(args)."""
    total = 0
    for e, _ in p.terms.items():
        t = 1
        for i, ei in enumerate(e):
            if ei:
                t *= max(1, len(args[i].terms)) ** ei
            if t > 10**15:
                return 10**15
        total += t
        if total > 10**15:
            return 10**15
    return total


def ring_matrix_determinant(rows, zero):
    """Cofactor determinant over any commutative ring element type."""
    n = len(rows)
    if n == 0:
        return zero
    if n == 1:
        return rows[0][0]
    total = zero
    for j in range(n):
        a = rows[0][j]
        if a.is_zero():
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        sub = ring_matrix_determinant(minor, zero)
        term = a * sub
        total = total + term if j % 2 == 0 else total - term
    return total
