"""Exact multivariate polynomials over the rationals.

The variable universe is fixed to (x, y, z, a, b): x, y, z are the plane
coordinates and a, b parametrize target points in the symbolic derivations.
A polynomial is a dict mapping exponent 5-tuples to nonzero Fractions, so
equality is structural and every operation is exact.  Division helpers only
perform exact divisions and raise otherwise; callers clear denominators
themselves before substituting (substitution never introduces fractions).
"""

from fractions import Fraction

VARS = ("x", "y", "z", "a", "b")
_INDEX = {v: i for i, v in enumerate(VARS)}
_ZERO_EXP = (0, 0, 0, 0, 0)


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact (int or Fraction), got {type(c).__name__}")


class RationalPoly:
    """A polynomial in x, y, z, a, b with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for exp, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[tuple(exp)] = c
        self.terms = clean

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, c):
        c = _as_fraction(c)
        return cls({_ZERO_EXP: c}) if c else cls()

    @classmethod
    def var(cls, name):
        if name not in _INDEX:
            raise ValueError(f"unknown variable {name!r}, expected one of {VARS}")
        exp = [0] * 5
        exp[_INDEX[name]] = 1
        return cls({tuple(exp): Fraction(1)})

    # -- ring operations --

    def _coerce(self, other):
        if isinstance(other, RationalPoly):
            return other
        return RationalPoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, Fraction(0)) + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        out = RationalPoly.__new__(RationalPoly)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = RationalPoly.__new__(RationalPoly)
        out.terms = {exp: -c for exp, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3], e1[4] + e2[4])
                s = terms.get(exp, Fraction(0)) + c1 * c2
                if s:
                    terms[exp] = s
                else:
                    terms.pop(exp, None)
        out = RationalPoly.__new__(RationalPoly)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = RationalPoly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPoly.const(other)
        return isinstance(other, RationalPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def variables(self):
        """Names of the variables that actually occur."""
        seen = set()
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    seen.add(VARS[i])
        return seen

    def degree(self, name):
        i = _INDEX[name]
        return max((exp[i] for exp in self.terms), default=0)

    def total_degree(self):
        return max((sum(exp) for exp in self.terms), default=0)

    # -- substitution and evaluation --

    def substitute(self, name, poly):
        """Replace a variable by a polynomial and expand.  Exact."""
        i = _INDEX[name]
        poly = self._coerce(poly)
        powers = {0: RationalPoly.const(1)}
        out = RationalPoly.zero()
        for exp, c in self.terms.items():
            e = exp[i]
            if e not in powers:
                powers[e] = poly**e
            rest = list(exp)
            rest[i] = 0
            out = out + RationalPoly({tuple(rest): c}) * powers[e]
        return out

    def evaluate(self, values):
        """Evaluate at a dict name -> value (Fraction/int exact, complex/float numeric)."""
        for name in self.variables():
            if name not in values:
                raise ValueError(f"no value supplied for variable {name!r}")
        acc = None
        for exp, c in self.terms.items():
            term = c
            for i, e in enumerate(exp):
                if e:
                    term = term * values[VARS[i]] ** e
            acc = term if acc is None else acc + term
        return Fraction(0) if acc is None else acc

    # -- division helpers --

    def divide_exact(self, divisor):
        """Exact polynomial division; raises ValueError on a nonzero remainder."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead = max(divisor.terms, key=lambda e: (sum(e), e))
        lead_c = divisor.terms[lead]
        rem = RationalPoly(dict(self.terms))
        quo = RationalPoly.zero()
        while not rem.is_zero():
            e = max(rem.terms, key=lambda t: (sum(t), t))
            diff = tuple(a - b for a, b in zip(e, lead))
            if any(d < 0 for d in diff):
                raise ValueError("division is not exact")
            t = RationalPoly({diff: rem.terms[e] / lead_c})
            quo = quo + t
            rem = rem - t * divisor
        return quo

    def univariate_coeffs(self, name):
        """Coefficients of powers of one variable, as a dict degree -> RationalPoly."""
        i = _INDEX[name]
        out = {}
        for exp, c in self.terms.items():
            rest = list(exp)
            d = rest[i]
            rest[i] = 0
            cur = out.setdefault(d, RationalPoly.zero())
            out[d] = cur + RationalPoly({tuple(rest): c})
        return {d: p for d, p in out.items() if not p.is_zero()}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=lambda e: (-sum(e), tuple(-v for v in e))):
            c = self.terms[exp]
            factors = []
            for i, e in enumerate(exp):
                if e == 1:
                    factors.append(VARS[i])
                elif e > 1:
                    factors.append(f"{VARS[i]}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")


def univariate_gcd(f, g, name):
    """Monic gcd of two polynomials univariate in one variable over Q."""
    for p in (f, g):
        extra = p.variables() - {name}
        if extra:
            raise ValueError(f"polynomial is not univariate in {name!r}: has {sorted(extra)}")

    def coeff_list(p):
        cs = p.univariate_coeffs(name)
        deg = max(cs, default=0)
        return [cs.get(d, RationalPoly.zero()).terms.get(_ZERO_EXP, Fraction(0)) for d in range(deg + 1)]

    a, b = coeff_list(f), coeff_list(g)

    def trim(c):
        while c and c[-1] == 0:
            c.pop()
        return c

    a, b = trim(a), trim(b)
    while b:
        inv = 1 / b[-1]
        b = [c * inv for c in b]
        while len(a) >= len(b):
            if a[-1]:
                f_ = a[-1]
                for i in range(len(b)):
                    a[len(a) - len(b) + i] -= f_ * b[i]
            a.pop()
        a, b = b, trim(a)
    if not a:
        return RationalPoly.zero()
    inv = 1 / a[-1]
    x = RationalPoly.var(name)
    out = RationalPoly.zero()
    for d, c in enumerate(a):
        out = out + RationalPoly.const(c * inv) * x**d
    return out
