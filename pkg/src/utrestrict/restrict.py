"""Closed-form decomposition engines for supercharacter restrictions.

Each engine turns one family of modules (column-set, hook, core, rainbow,
peel, double rainbow, onion, the strictly-upper-triangular algebra) into an
explicit coefficient map, either over the supercharacter basis or over a
coarser module basis.  Engines emit coefficients only; the isomorphisms
themselves are witnessed by the brute-force oracle at small sizes.
"""

import itertools
from math import comb

from .qcalc import QPoly, ZERO, ONE, Q_MINUS_1, qbinom, qphi, qmultinom, qint
from .setpart import (
    GroundSet, SetPartition, ArcMultiset, DistinctEndpointViolation,
    enumerate_partitions, nst, nst_points, wt_up, arcs_of,
    RegionSplit, region_select,
)
from .nestposet import (
    block_poset, poset_binom, poset_multinom,
    blocks_with_max_in, blocks_with_min_in,
)
from .scfcore import Decomposition


class ModuleLabel:
    """Hashable tag for a non-supercharacter basis element."""

    __slots__ = ("kind", "payload")

    def __init__(self, kind, payload):
        self.kind = kind
        self.payload = tuple(payload)

    def __eq__(self, other):
        return (isinstance(other, ModuleLabel)
                and self.kind == other.kind and self.payload == other.payload)

    def __hash__(self):
        return hash((self.kind, self.payload))

    def __repr__(self):
        return f"ModuleLabel({self.kind!r}, {self.payload!r})"

    @staticmethod
    def _set_text(s):
        return "{" + ",".join(str(x) for x in sorted(s)) + "}"

    def __str__(self):
        if self.kind == "core":
            return f"V^{self.payload[0]}"
        if self.kind == "psiK":
            return "V^" + self._set_text(self.payload[0])
        if self.kind == "rowK":
            return "W^" + self._set_text(self.payload[0])
        if self.kind == "hook":
            cols, rows = self.payload
            return f"V^[{self._set_text(cols)}<-{self._set_text(rows)}]"
        if self.kind == "peel":
            b, f = self.payload
            return f"V^({b};{f})"
        if self.kind == "peel_rainbow":
            b, f, mm = self.payload
            return f"V^({b};{f})xRainbow({mm})"
        if self.kind == "onion":
            bs, fs = self.payload
            btxt = ",".join(str(x) for x in bs)
            ftxt = ",".join(str(x) for x in fs)
            return f"V^(b={btxt};f={ftxt})"
        return f"{self.kind}{self.payload}"


def _shift_signed(poly, e):
    """Multiply by q^e; for e < 0 the division must be exact."""
    if e >= 0:
        return poly.shift(e)
    e = -e
    assert all(c == 0 for c in poly.coeffs[:e]), \
        f"inexact division of {poly} by q^{e}"
    return QPoly(poly.coeffs[e:])


def _subsets(pool, size=None):
    pool = sorted(pool)
    if size is not None:
        return [frozenset(c) for c in itertools.combinations(pool, size)]
    out = []
    for r in range(len(pool) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(pool, r))
    return out


# --- column-set and hook modules --------------------------------------------

class PsiKModule:
    """The left module with basis the strictly-lower matrices supported on
    columns K; trivial for K empty, regular for K = N."""

    __slots__ = ("ground", "K")

    def __init__(self, ground, K):
        K = frozenset(K)
        if not all(x in ground for x in K):
            raise ValueError(f"column set {sorted(K)} not inside {ground.labels}")
        self.ground = ground
        self.K = K

    def value(self, mu):
        """Trace at the canonical superclass representative u_mu."""
        L = mu.left_endpoints()
        if L & self.K:
            return ZERO
        pool = [x for x in self.ground if x not in L]
        return QPoly.q_pow(wt_up(self.K, pool))

    def decomposition(self):
        coeffs = {}
        for lam in enumerate_partitions(self.ground):
            if lam.left_endpoints() <= self.K:
                extra = sorted(self.K - lam.left_endpoints())
                e = nst(lam, lam) + nst_points(lam, extra)
                coeffs[lam] = QPoly.q_pow(e)
        return Decomposition("supercharacter", coeffs)


def psiK(ground, K):
    return PsiKModule(ground, K)


def psi_hook(ground, K, J):
    """Supercharacter coefficients of the right-endpoint submodule with
    column support in K and right endpoints exactly J."""
    K, J = frozenset(K), frozenset(J)
    if not (all(x in ground for x in K) and all(x in ground for x in J)):
        raise ValueError("hook parameters must sit inside the ground set")
    coeffs = {}
    for lam in enumerate_partitions(ground):
        if lam.left_endpoints() <= K and lam.right_endpoints() == J:
            extra = sorted(K - lam.left_endpoints())
            coeffs[lam] = QPoly.q_pow(nst(lam, lam) + nst_points(lam, extra))
    return Decomposition("supercharacter", coeffs)


def endpoint_refine(ground, K, J):
    """Exponents of the left-endpoint refinement: the hook on columns K
    rewrites as the sum over I of q^exponent times the hook on columns I.

    Returns {I: integer exponent}; exponents may be negative only when the
    corresponding refined module vanishes.
    """
    K, J = frozenset(K), frozenset(J)
    out = {}
    for I in _subsets(K, len(J)):
        rest = K - I
        out[I] = wt_up(rest, J) - wt_up(rest, I)
    return out


# --- core modules -----------------------------------------------------------

class CoreModule:
    """Direct sum of the column-set modules over all k-subsets of N."""

    __slots__ = ("ground", "k")

    def __init__(self, ground, k):
        self.ground = ground
        self.k = k

    def value(self, mu):
        n = len(self.ground)
        if self.k < 0 or self.k > n:
            return ZERO
        return qbinom(n - len(mu), self.k).shift(comb(self.k, 2))

    def decomposition(self):
        coeffs = {}
        if self.k < 0 or self.k > len(self.ground):
            return Decomposition("supercharacter", coeffs)
        for lam in enumerate_partitions(self.ground):
            if len(lam) > self.k:
                continue
            P = block_poset(lam.uncross())
            c = poset_binom(P, self.k - len(lam))
            if not c.is_zero():
                coeffs[lam] = c.shift(nst(lam, lam))
        return Decomposition("supercharacter", coeffs)


def core(ground, k):
    return CoreModule(ground, k)


def core_tensor(j, k, n):
    """Core-basis coefficients of the tensor product of two core modules:
    maps m to the coefficient of the core module of size k+m."""
    assert 0 <= j <= k <= n
    out = {}
    for m in range(j + 1):
        out[m] = qmultinom(k + m, (k + m - j, m, j - m)).shift(comb(j - m, 2))
    return out


# --- rainbow ----------------------------------------------------------------

def rainbow(ground, m, target):
    """Restriction of the m-fold parallel-arc multiset spanning N.

    target "core": coefficients of the core modules; target "superchars":
    coefficients of the supercharacters.
    """
    assert m >= 0
    n = len(ground)
    if target == "core":
        coeffs = {}
        for k in range(min(m, n) + 1):
            coeffs[ModuleLabel("core", (k,))] = \
                (Q_MINUS_1 ** m) * qphi(m, k)
        return Decomposition("core", coeffs)
    if target == "superchars":
        coeffs = {}
        for lam in enumerate_partitions(ground):
            if len(lam) > m:
                continue
            P = block_poset(lam.uncross())
            total = ZERO
            for k in range(len(lam), m + 1):
                total = total + qphi(m, k) * poset_binom(P, k - len(lam))
            if total.is_zero():
                continue
            coeffs[lam] = ((Q_MINUS_1 ** m) * total).shift(nst(lam, lam))
        return Decomposition("supercharacter", coeffs)
    raise ValueError(f"unknown rainbow target {target!r}")


# --- interference -----------------------------------------------------------

def interference(ground, k_minus, k_plus, K, ell, mode, nu=None, J=None):
    """Decompositions of a partition module tensored with an anchored
    rainbow, in the presence of interfering arcs nu.

    mode "psi": coefficients of the column-set modules of UT_K.
    mode "superchars_a": coefficients of hook modules for the tensor with a
    single column-set module with columns J (requires J).
    mode "superchars_b": supercharacter coefficients of UT_K (requires nu a
    set partition).
    """
    K = frozenset(K)
    kbar = frozenset(x for x in ground if k_minus < x < k_plus)
    assert k_minus in ground and k_plus in ground and k_minus < k_plus
    if not K <= kbar:
        raise ValueError("K must sit inside the open anchor interval")
    if nu is None:
        nu = ArcMultiset(ground, ())

    if mode == "psi":
        if any(i in kbar and j in kbar for i, j in arcs_of(nu)):
            raise ValueError("nu may not have arcs inside the anchor interval")
        XL = nu.left_endpoints() & K
        pref = ell * len(kbar - K)
        coeffs = {}
        for size in range(min(ell, len(K - XL)) + 1):
            for Jp in _subsets(K - XL, size):
                e = pref + wt_up(XL, Jp) + (ell - size) * len(XL)
                coeffs[ModuleLabel("psiK", (Jp,))] = \
                    ((Q_MINUS_1 ** ell) * qphi(ell, size)).shift(e)
        return Decomposition("psiK", coeffs)

    if mode == "superchars_a":
        assert J is not None
        J = frozenset(J)
        if kbar != K:
            raise ValueError("anchor interval must be exactly K here")
        if any(i in K and j in K for i, j in arcs_of(nu)):
            raise ValueError("nu may not have arcs inside K")
        XR = nu.right_endpoints() & K
        coeffs = {}
        for size in range(len(J) + 1):
            for I in _subsets(K - XR, size):
                for Jp in _subsets(J, size):
                    rest = J - Jp
                    e = (wt_up(I, XR) + wt_up(rest, XR)
                         + wt_up(rest, I) - wt_up(rest, Jp))
                    label = ModuleLabel("hook", (Jp, I))
                    if e < 0:
                        # only admissible when the hook module vanishes
                        subK = ground.subset(K)
                        assert not psi_hook(subK, Jp, I).coeffs, \
                            "negative exponent on a nonzero hook module"
                        continue
                    coeffs[label] = QPoly.q_pow(e)
        return Decomposition("psiHook", coeffs)

    if mode == "superchars_b":
        assert isinstance(nu, SetPartition), "mode b needs a set partition"
        if kbar != K:
            raise ValueError("anchor interval must be exactly K here")
        if any(i in K and j in K for i, j in nu.arcs):
            raise ValueError("nu may not have arcs inside K")
        XL = nu.left_endpoints() & K
        npr = sum(1 for i, j in nu.arcs
                  if all(i < x < j for x in K))
        subK = ground.subset(K)
        coeffs = {}
        for lam in enumerate_partitions(subK):
            if len(lam) > ell:
                continue
            try:
                union = SetPartition(ground, set(nu.arcs) | lam.arcs)
            except DistinctEndpointViolation:
                continue
            P = block_poset(union.uncross())
            blR = blocks_with_max_in(P, K)
            base = nst(union, lam)
            total = ZERO
            for l in range(len(lam), ell + 1):
                mult = poset_multinom(
                    P, [(l - len(lam), blR), (0, None)])
                if mult.is_zero():
                    continue
                term = qphi(ell, l) * mult
                total = total + _shift_signed(
                    term, base + (ell - l) * len(XL) - l * npr)
            if total.is_zero():
                continue
            coeffs[lam] = (Q_MINUS_1 ** ell) * total
        return Decomposition("supercharacter", coeffs)

    raise ValueError(f"unknown interference mode {mode!r}")


# --- peel, double rainbow, onion --------------------------------------------

def _peel_pool(P, split):
    return (blocks_with_max_in(P, set(split.n_lt))
            | blocks_with_min_in(P, set(split.n_gt)))


def peel(split, b, f):
    """Supercharacter coefficients of the peel module with crossing rank b
    and total rank bound f."""
    a, c = len(split.n_lt), len(split.n_gt)
    if not (0 <= b <= min(a, c) and b <= f <= a + c):
        raise ValueError(f"peel parameters (b={b}, f={f}) out of range")
    coeffs = {}
    for nu in enumerate_partitions(split.inner):
        if len(nu) > f:
            continue
        if len(region_select(nu, split, "<", ">")) != b:
            continue
        if len(region_select(nu, split, "=", "=")) != 0:
            continue
        P = block_poset(nu.uncross())
        c_poly = poset_multinom(
            P, [(f - len(nu), _peel_pool(P, split)), (0, None)])
        if c_poly.is_zero():
            continue
        coeffs[nu] = c_poly.shift(nst(nu, nu))
    return Decomposition("supercharacter", coeffs)


def _anchor_prefactor(split, m):
    """Exponent contributed by the inner anchor spots: m per anchor of the
    inner pair lying strictly inside the outer pair."""
    spots = {a for a in (split.n_m, split.n_p)
             if split.n_mm < a < split.n_pp}
    return m * len(spots)


def double_rainbow(split, m, ell, target):
    """Restriction of the double rainbow (m outer arcs, ell inner arcs).

    target "peel": coefficients of peel-module tensor rainbow summands;
    target "superchars": supercharacter coefficients over the inner ground;
    target "trivial_coeff": the coefficient of the trivial supercharacter.
    """
    assert m >= 0 and ell >= 0
    a, c = len(split.n_lt), len(split.n_gt)
    pre = _anchor_prefactor(split, m)

    if target == "peel":
        coeffs = {}
        for f in range(min(m, a + c) + 1):
            for b in range(min(f, a, c) + 1):
                label = ModuleLabel("peel_rainbow", (b, f, m - f + ell))
                coeffs[label] = ((Q_MINUS_1 ** f) * qphi(m, f)) \
                    .shift(pre + (m - f) * b)
        return Decomposition("peel", coeffs)

    if target == "superchars":
        coeffs = {}
        for gam in enumerate_partitions(split.inner):
            g_eq = len(region_select(gam, split, "=", "="))
            g_neq = len(gam) - g_eq
            le_gt = len(region_select(gam, split, "<=", ">"))
            eq_gt = len(region_select(gam, split, "=", ">"))
            P = block_poset(gam.uncross())
            pool1 = _peel_pool(P, split)
            pool2 = blocks_with_max_in(P, set(split.n_eq))
            base = nst(gam, gam)
            total = ZERO
            for f in range(g_neq, m + 1):
                for l in range(g_eq, m - f + ell + 1):
                    mult = poset_multinom(
                        P, [(f - g_neq, pool1), (l - g_eq, pool2), (0, None)])
                    if mult.is_zero():
                        continue
                    term = qphi(m, f) * qphi(m - f + ell, l) * mult
                    total = total + _shift_signed(
                        term, base + (m - f - l) * le_gt + ell * eq_gt)
            if total.is_zero():
                continue
            coeffs[gam] = ((Q_MINUS_1 ** (m + ell)) * total).shift(pre)
        return Decomposition("supercharacter", coeffs)

    if target == "trivial_coeff":
        n_eq = len(split.n_eq)
        rest = len(split.inner) - n_eq
        total = ZERO
        for f in range(m + 1):
            for l in range(m - f + ell + 1):
                total = total + (qphi(m, f) * qphi(m - f + ell, l)) \
                    * QPoly.const(comb(rest, f) * comb(n_eq, l))
        empty = SetPartition(split.inner, ())
        return Decomposition(
            "supercharacter",
            {empty: ((Q_MINUS_1 ** (m + ell)) * total).shift(pre)})

    raise ValueError(f"unknown double_rainbow target {target!r}")


class OnionLayer:
    """One layer of the iterated geometry: a ground set with its two
    anchors just outside it."""

    __slots__ = ("ground", "n_minus", "n_plus")

    def __init__(self, ground, n_minus, n_plus):
        assert all(n_minus < x < n_plus for x in ground)
        self.ground = ground
        self.n_minus = n_minus
        self.n_plus = n_plus


def _layer_side_sizes(layer, inner_layer):
    """Sizes of the two side regions of one layer relative to the next one
    inside it; the deeper anchors themselves belong to neither region."""
    pts = set(layer.ground) - {inner_layer.n_minus, inner_layer.n_plus}
    a = sum(1 for x in pts if x < inner_layer.n_minus)
    c = sum(1 for x in pts if x > inner_layer.n_plus)
    return a, c


def onion(layers, ms):
    """Coefficients of the onion modules in the iterated restriction of
    nested rainbow multisets (m_j arcs at layer j)."""
    k = len(layers)
    assert k == len(ms) and all(mj >= 1 for mj in ms)
    for outer, inner in zip(layers, layers[1:]):
        assert set(inner.ground) <= set(outer.ground)
        assert outer.n_minus <= inner.n_minus < inner.n_plus <= outer.n_plus
    # literal prefactor: anchors of deeper layers nested under outer arcs
    anchors = set()
    arcs = []
    for layer, mj in zip(layers, ms):
        anchors |= {layer.n_minus, layer.n_plus}
        arcs += [(layer.n_minus, layer.n_plus)] * mj
    ambient = GroundSet(sorted(set(layers[0].ground) | anchors))
    mu = ArcMultiset(ambient, arcs)
    pre = nst_points(mu, sorted(anchors))

    sides = [_layer_side_sizes(layers[j], layers[j + 1]) for j in range(k - 1)]

    def valid(j, b, f):
        if j == k - 1:
            return b == 0 and f <= len(layers[j].ground)
        a, c = sides[j]
        return b <= min(a, c) and f <= a + c

    coeffs = {}
    total_m = sum(ms)

    def rec(j, bs, fs, used):
        if j == k:
            bsum = list(itertools.accumulate(reversed(bs)))[::-1]
            poly = ONE
            for i in range(k):
                top = sum(ms[:i + 1]) - sum(fs[:i])
                poly = poly * qphi(top, fs[i]).shift((ms[i] - fs[i]) * bsum[i])
            label = ModuleLabel("onion", (tuple(bs), tuple(fs)))
            coeffs[label] = ((Q_MINUS_1 ** total_m) * poly).shift(pre)
            return
        cap = sum(ms[:j + 1]) - used
        for f in range(cap + 1):
            bmax = 0 if j == k - 1 else f
            for b in range(bmax + 1):
                if valid(j, b, f):
                    rec(j + 1, bs + [b], fs + [f], used + f)

    rec(0, [], [], 0)
    return Decomposition("onion", coeffs)


# --- the strictly-upper-triangular algebra ----------------------------------

class UtAlgebra:
    """The span of the strictly upper-triangular matrices as a left module."""

    __slots__ = ("ground",)

    def __init__(self, ground):
        assert len(ground) >= 1
        self.ground = ground

    def trace(self, mu):
        """Fixed-point count of u_mu acting by left multiplication."""
        n = len(self.ground)
        e = comb(n, 2) - sum(
            sum(1 for c in self.ground if c > j) for _, j in mu.arcs)
        assert e >= 0
        return QPoly.q_pow(e)

    def row_module_value(self, A, mu):
        """Trace of the row-set module W^A at u_mu.

        W^A is the mirror of the column-set module: it vanishes on
        superclasses with a right endpoint in A.  Its value is obtained by
        transporting the column-set value through the order-reversing map.
        """
        A = frozenset(self.ground.w0(a) for a in A)
        return PsiKModule(self.ground, A).value(mu.dagger())

    def core_style(self):
        """Row-set module coefficients of the full auxiliary tensor product
        of the |N| single-arc modules realizing this trace."""
        n = len(self.ground)
        labels = sorted(self.ground)
        coeffs = {}
        for A in _subsets(labels):
            rest = [x for x in labels if x not in A]
            poly = ONE
            for x in A:
                poly = poly * qint(1 + sum(1 for c in rest if c > x))
            coeffs[ModuleLabel("rowK", (A,))] = \
                ((Q_MINUS_1 ** (n + len(A))) * poly).shift(comb(n, 2))
        return Decomposition("rowK", coeffs)

    def superchar_decomposition(self):
        n = len(self.ground)
        labels = sorted(self.ground)
        if n == 1:
            empty = SetPartition(self.ground, ())
            return Decomposition("supercharacter", {empty: ONE})
        top = labels[-1]
        coeffs = {}
        for lam in enumerate_partitions(self.ground):
            R = lam.right_endpoints()
            if top in R:
                continue
            inner = ZERO
            for extra in _subsets(set(labels) - R - {top}):
                A = R | extra
                rest = [x for x in labels if x not in A]
                poly = ONE
                for x in A:
                    w = sum(1 for c in rest if c > x)
                    poly = poly * (QPoly.q_pow(w) - 1)
                    if poly.is_zero():
                        break
                if poly.is_zero():
                    continue
                inner = inner + poly.shift(nst_points(lam, sorted(extra)))
            if inner.is_zero():
                continue
            coeffs[lam] = inner.shift(nst(lam, lam))
        return Decomposition("supercharacter", coeffs)


def ut_algebra(ground):
    return UtAlgebra(ground)
