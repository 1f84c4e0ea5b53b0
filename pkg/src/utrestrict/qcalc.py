"""Exact integer-coefficient polynomials in the formal variable q.

QPoly stores coefficients little-endian by exponent, with no trailing zeros
(the zero polynomial is the empty tuple).  All the q-combinatorial quantities
(q-integers, q-factorials, Gaussian binomials, the phi products) live here,
together with exact Newton interpolation used by the decomposition solver.
"""

from fractions import Fraction
from functools import cache


class NonIntegralInterpolation(Exception):
    """Interpolation succeeded but the coefficients are not integers."""


class QPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        assert all(isinstance(x, int) for x in c)
        self.coeffs = tuple(c)

    @staticmethod
    def const(c):
        return QPoly((c,))

    @staticmethod
    def q_pow(e, c=1):
        assert e >= 0
        return QPoly((0,) * e + (c,))

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        # degree of 0 is -1 by convention
        return len(self.coeffs) - 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = QPoly.const(other)
        return isinstance(other, QPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, int):
            other = QPoly.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return QPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return QPoly([-x for x in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, int):
            other = QPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return QPoly.const(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return QPoly([other * x for x in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        assert n >= 0
        out = QPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, e):
        """Multiply by q^e."""
        assert e >= 0
        if not self.coeffs:
            return self
        return QPoly((0,) * e + self.coeffs)

    def __call__(self, q):
        """Evaluate at an integer or Fraction value of q (Horner)."""
        out = 0
        for c in reversed(self.coeffs):
            out = out * q + c
        return out

    def __str__(self):
        # sparse descending form, e.g. "q^5 - q^3 - q^2 + 1"
        if not self.coeffs:
            return "0"
        parts = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = str(a)
            else:
                term = "q" if e == 1 else f"q^{e}"
                body = term if a == 1 else f"{a}*{term}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"QPoly({str(self)})"

    def to_json(self):
        return {"coeffs": list(self.coeffs)}

    @staticmethod
    def from_json(obj):
        return QPoly(obj["coeffs"])

    @staticmethod
    def parse(text):
        """Parse the sparse descending text form produced by __str__."""
        s = text.replace("-", " - ").replace("+", " + ").split()
        coeffs = {}
        sign = 1
        i = 0
        while i < len(s):
            tok = s[i]
            if tok == "+":
                sign = 1
                i += 1
                continue
            if tok == "-":
                sign = -1
                i += 1
                continue
            if "*" in tok:
                a, term = tok.split("*")
                c = int(a)
            elif tok.startswith("q"):
                c, term = 1, tok
            else:
                c, term = int(tok), ""
            if term == "":
                e = 0
            elif term == "q":
                e = 1
            else:
                assert term.startswith("q^")
                e = int(term[2:])
            coeffs[e] = coeffs.get(e, 0) + sign * c
            sign = 1
            i += 1
        if not coeffs:
            return QPoly()
        out = [0] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            out[e] = c
        return QPoly(out)


ZERO = QPoly()
ONE = QPoly.const(1)
Q = QPoly.q_pow(1)
Q_MINUS_1 = QPoly((-1, 1))


class QRational:
    """Ratio of two QPoly, reduced only on demand (solver intermediate)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        if isinstance(num, int):
            num = QPoly.const(num)
        if isinstance(den, int):
            den = QPoly.const(den)
        assert not den.is_zero()
        self.num = num
        self.den = den

    def __add__(self, other):
        return QRational(self.num * other.den + other.num * self.den,
                         self.den * other.den)

    def __sub__(self, other):
        return QRational(self.num * other.den - other.num * self.den,
                         self.den * other.den)

    def __mul__(self, other):
        return QRational(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        assert not other.num.is_zero()
        return QRational(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        # cross multiplication avoids computing a gcd
        return self.num * other.den == other.num * self.den

    def is_zero(self):
        return self.num.is_zero()

    def reduced(self):
        """Return (num, den) with the polynomial gcd divided out."""
        if self.num.is_zero():
            return QRational(ZERO, ONE)
        a = [Fraction(c) for c in self.num.coeffs]
        b = [Fraction(c) for c in self.den.coeffs]

        def rem(u, v):
            u = u[:]
            while len(u) >= len(v) and any(u):
                while u and u[-1] == 0:
                    u.pop()
                if len(u) < len(v):
                    break
                f = u[-1] / v[-1]
                off = len(u) - len(v)
                for i, x in enumerate(v):
                    u[off + i] -= f * x
                u.pop()
            while u and u[-1] == 0:
                u.pop()
            return u

        while b:
            a, b = b, rem(a, b)
        # a is the gcd (fraction coefficients); divide both parts by it

        def divexact(u, g):
            u = [Fraction(c) for c in u]
            out = [Fraction(0)] * (len(u) - len(g) + 1)
            while len(u) >= len(g) and any(u):
                while u and u[-1] == 0:
                    u.pop()
                if len(u) < len(g):
                    break
                f = u[-1] / g[-1]
                off = len(u) - len(g)
                out[off] = f
                for i, x in enumerate(g):
                    u[off + i] -= f * x
                u.pop()
            return out

        num = divexact(list(self.num.coeffs), a)
        den = divexact(list(self.den.coeffs), a)
        # clear denominators and normalize leading sign of den
        mult = 1
        for c in num + den:
            mult = mult * c.denominator // _gcd(mult, c.denominator)
        num = [c * mult for c in num]
        den = [c * mult for c in den]
        if den and den[-1] < 0:
            num = [-c for c in num]
            den = [-c for c in den]
        g = 0
        for c in num + den:
            g = _gcd(g, int(c))
        if g > 1:
            num = [int(c) // g for c in num]
            den = [int(c) // g for c in den]
        return QRational(QPoly(int(c) for c in num), QPoly(int(c) for c in den))


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def qint(n):
    """[n] = 1 + q + ... + q^(n-1); qint(0) = 0."""
    assert n >= 0
    return QPoly((1,) * n)


@cache
def qfactorial(n):
    assert n >= 0
    if n == 0:
        return ONE
    return qfactorial(n - 1) * qint(n)


@cache
def qbinom(n, k):
    """Gaussian binomial via the division-free Pascal recurrence."""
    if k < 0 or k > n:
        return ZERO
    if k == 0 or k == n:
        return ONE
    return qbinom(n - 1, k - 1) + qbinom(n - 1, k).shift(k)


def qphi(n, k):
    """phi^n_k = prod_{j=0}^{k-1} (q^(n-j) - 1)."""
    assert 0 <= k <= n, "qphi requires k <= n"
    out = ONE
    for j in range(k):
        out = out * (QPoly.q_pow(n - j) - 1)
    return out


def qmultinom(n, ks):
    """[n]! / prod [k_j]!  with sum(ks) = n, as an exact polynomial."""
    assert sum(ks) == n
    # iterated qbinom keeps the computation division-free
    out = ONE
    rest = n
    for k in ks:
        out = out * qbinom(rest, k)
        rest -= k
    assert rest == 0
    return out


def interpolate(points, require_integer=True):
    """Newton interpolation through (x, value) pairs with exact rationals.

    Raises NonIntegralInterpolation when the result has a non-integer
    coefficient and an integer polynomial was demanded.
    """
    xs = [p[0] for p in points]
    assert len(set(xs)) == len(xs), "interpolation nodes must be distinct"
    ys = [Fraction(p[1]) for p in points]
    n = len(points)
    # divided differences
    dd = ys[:]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    # expand the Newton form into monomial coefficients
    coeffs = [Fraction(0)] * n
    basis = [Fraction(1)] + [Fraction(0)] * n  # running prod (x - x_i)
    deg = 0
    for level in range(n):
        c = dd[level]
        for i in range(deg + 1):
            coeffs[i] += c * basis[i]
        # basis *= (x - xs[level])
        new = [Fraction(0)] * (n + 1)
        for i in range(deg + 1):
            if basis[i]:
                new[i + 1] += basis[i]
                new[i] -= basis[i] * xs[level]
        basis = new
        deg += 1
    if require_integer:
        if any(c.denominator != 1 for c in coeffs):
            raise NonIntegralInterpolation(
                f"non-integer coefficients: {coeffs}")
        return QPoly(int(c) for c in coeffs)
    return coeffs


def primes(count, start=2):
    """First `count` primes >= start."""
    out = []
    p = max(2, start)
    while len(out) < count:
        if all(p % d for d in range(2, int(p ** 0.5) + 1)):
            out.append(p)
        p += 1
    return out
