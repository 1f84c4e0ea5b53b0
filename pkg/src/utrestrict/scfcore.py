"""Symbolic supercharacter values and the exact decomposition solver.

The supercharacter of a set partition lam evaluated at the canonical
superclass representative u_mu is

    (q-1)^|lam-mu| (-1)^|lam cap mu| q^(nst^lam_N - nst^lam_mu)

unless some arc i~k of lam has i~j or j~k in mu with i<j<k, in which case it
vanishes.  Multiset characters factor as the pointwise product of their arcs.
Any superclass function with polynomial values is expressed in the
supercharacter basis by sampling q at primes, solving exactly over the
rationals, and interpolating the coefficients.
"""

from fractions import Fraction

from .qcalc import (
    QPoly, ZERO, ONE, Q_MINUS_1, interpolate, primes,
    NonIntegralInterpolation,
)
from .setpart import (
    SetPartition, ArcMultiset, arcs_of, nst, nst_points,
    enumerate_partitions,
)


class SingularSystem(Exception):
    """The sampled linear system was singular (signals a bug: the
    supercharacter table is invertible)."""


def superchar_value(lam, mu, ambient):
    """chi^lam(u_mu) as a QPoly; lam may be a SetPartition or ArcMultiset,
    mu must be a SetPartition; both read over the `ambient` ground set."""
    if isinstance(lam, SetPartition):
        return _single_partition_value(lam, mu, ambient)
    out = ONE
    for arc in arcs_of(lam):
        one = SetPartition(ambient, [arc])
        out = out * _single_partition_value(one, mu, ambient)
        if out.is_zero():
            return ZERO
    return out


def _single_partition_value(lam, mu, ambient):
    mu_arcs = set(mu.arcs)
    for i, k in lam.arcs:
        for j in ambient:
            if i < j < k and ((i, j) in mu_arcs or (j, k) in mu_arcs):
                return ZERO
    diff = len(lam.arcs - mu_arcs)
    meet = len(lam.arcs & mu_arcs)
    e = nst_points(lam, list(ambient)) - nst(lam, mu)
    assert e >= 0
    val = (Q_MINUS_1 ** diff).shift(e)
    return val if meet % 2 == 0 else -val


class SuperclassFunction:
    """Total map from S_K to QPoly values (a symbolic superclass function)."""

    __slots__ = ("ground", "values")

    def __init__(self, ground, values):
        self.ground = ground
        self.values = dict(values)
        want = set(enumerate_partitions(ground))
        assert set(self.values) == want, "value map must be total on S_K"

    def __call__(self, mu):
        return self.values[mu]

    def odot(self, other):
        assert self.ground == other.ground, "pointwise product needs one ground"
        return SuperclassFunction(
            self.ground,
            {mu: v * other.values[mu] for mu, v in self.values.items()})

    __mul__ = odot


def character_function(lam, ambient, ground=None):
    """chi^lam as a SuperclassFunction on `ground` (default: ambient),
    evaluated in `ambient`."""
    ground = ground or ambient
    return SuperclassFunction(
        ground,
        {mu: superchar_value(lam, mu, ambient)
         for mu in enumerate_partitions(ground)})


def restrict_values(lam, sub):
    """Restriction of chi^lam from UT_N' to UT_K as a value table on S_K.

    lam lives over N' = lam.ground; sub = K is any subset of N'.  The value
    at mu in S_K is chi^lam(u_mu) with mu read as a partition of N'.
    """
    ambient = lam.ground
    assert all(x in ambient for x in sub)
    values = {}
    for mu in enumerate_partitions(sub):
        mu_big = SetPartition(ambient, mu.arcs)
        values[mu] = superchar_value(lam, mu_big, ambient)
    return SuperclassFunction(sub, values)


def partition_sort_key(lam):
    return (len(lam.arcs), tuple(sorted(lam.arcs)))


class Decomposition:
    """Coefficient map from basis labels to QPoly, tagged with the basis."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis, coeffs):
        self.basis = basis
        self.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}

    def __getitem__(self, label):
        return self.coeffs.get(label, ZERO)

    def __eq__(self, other):
        return (isinstance(other, Decomposition)
                and self.basis == other.basis and self.coeffs == other.coeffs)

    def items_sorted(self):
        def key(kv):
            label = kv[0]
            if isinstance(label, SetPartition):
                return (0, partition_sort_key(label))
            return (1, str(label))
        return sorted(self.coeffs.items(), key=key)

    def labels_text(self):
        out = []
        for label, coeff in self.items_sorted():
            text = label.label() if isinstance(label, SetPartition) else str(label)
            out.append((text, coeff))
        return out

    def to_json(self):
        return {"basis": self.basis,
                "terms": [{"label": t, "coeff": str(c)}
                          for t, c in self.labels_text()]}

    def check_nonnegative_at(self, qs=(2, 3)):
        """Supercharacter multiplicities must be nonnegative integers at
        prime powers."""
        for coeff in self.coeffs.values():
            for q in qs:
                v = coeff(q)
                assert v == int(v) and v >= 0, \
                    f"negative multiplicity {coeff} at q={q}"
        return True


def solve_exact(matrix, rhs):
    """Gaussian elimination over Fractions; returns the solution vector.

    Raises SingularSystem when the matrix is not invertible.
    """
    n = len(matrix)
    A = [[Fraction(x) for x in row] + [Fraction(rhs[i])]
         for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise SingularSystem(f"no pivot in column {col}")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[r][n] for r in range(n)]


def supercharacter_table(ground, q):
    """Matrix [chi^nu(u_mu)] at a fixed integer q, rows mu, cols nu, in the
    deterministic partition order."""
    parts = sorted(enumerate_partitions(ground), key=partition_sort_key)
    return parts, [[superchar_value(nu, mu, ground)(q) for nu in parts]
                   for mu in parts]


def decompose_at_prime(f, p):
    """Coefficients of f in the supercharacter basis at q = p (Fractions)."""
    parts, M = supercharacter_table(f.ground, p)
    rhs = [f(mu)(p) if isinstance(f(mu), QPoly) else f(mu) for mu in parts]
    sol = solve_exact(M, rhs)
    return dict(zip(parts, sol))


def decompose_exact(f, degree_bound):
    """Expand a symbolic SuperclassFunction in the supercharacter basis.

    Samples q at degree_bound+1 primes starting at 2, solves each system in
    exact rational arithmetic, interpolates every coefficient, verifies the
    interpolant at one extra prime, and asserts integer coefficients.  The
    degree bound is the caller's closed-form bound (or the m*|N|^2 overestimate).
    """
    assert len(f.ground) <= 6, "decompose_exact is desk scale (|K| <= 6)"
    ps = primes(degree_bound + 2)
    check_p = ps[-1]
    ps = ps[:-1]
    samples = {p: decompose_at_prime(f, p) for p in ps}
    parts = sorted(enumerate_partitions(f.ground), key=partition_sort_key)
    coeffs = {}
    for nu in parts:
        poly = interpolate([(p, samples[p][nu]) for p in ps])
        coeffs[nu] = poly
    # verification sample
    extra = decompose_at_prime(f, check_p)
    for nu in parts:
        assert coeffs[nu](check_p) == extra[nu], \
            f"degree bound {degree_bound} too small for {nu}"
    return Decomposition("supercharacter", coeffs)
