"""Exact arithmetic in number fields K = Q[x]/(f).

Elements are dense Fraction coefficient vectors in the power basis; every
operation reduces modulo the minimal polynomial with no rounding anywhere.
Conjugate embeddings live in an exactly represented splitting container
built by iterated root adjunction (Trager-style factorization over the
current field, with sympy supplying resultants and rational factorization).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd as int_gcd

import sympy as sp

from . import linalg, qpoly
from .errors import DegreeCapExceeded, DivisionByZero, NonMonic, ReducibleMinPoly

_X = sp.Symbol("x")
_Y = sp.Symbol("y")


def _rational_factors(int_coeffs):
    """Irreducible factors over Q of an integer polynomial (monic assumed).

    Returns a list of qpoly tuples, each monic.
    """
    poly = sp.Poly(list(reversed([int(c) for c in int_coeffs])), _X, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        coeffs = [Fraction(sp.Rational(c)) for c in reversed(fac.all_coeffs())]
        fac_t = qpoly.monic(qpoly.trim(coeffs))
        out.extend([fac_t] * mult)
    return out


class NumberField:
    """Q[x]/(f) for a monic irreducible integer polynomial f."""

    def __init__(self, min_poly, _trusted=False):
        coeffs = tuple(int(c) for c in min_poly)
        if not coeffs or coeffs[-1] != 1:
            raise NonMonic(f"minimal polynomial must be monic: {coeffs}")
        if len(coeffs) < 2:
            raise NonMonic("minimal polynomial must be non-constant")
        self.min_poly = coeffs
        self.degree = len(coeffs) - 1
        if not _trusted and self.degree > 1:
            factors = _rational_factors(coeffs)
            if len(factors) > 1:
                raise ReducibleMinPoly(factors[0])
        self._min_poly_q = qpoly.from_ints(coeffs)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"NumberField({list(self.min_poly)})"

    # element constructors

    def element(self, coeffs) -> "NumberFieldElement":
        c = [Fraction(x) for x in coeffs]
        if len(c) > self.degree:
            rep = qpoly.mod(qpoly.trim(c), self._min_poly_q)
            c = list(rep)
        c += [Fraction(0)] * (self.degree - len(c))
        return NumberFieldElement(self, tuple(c))

    def from_rational(self, q) -> "NumberFieldElement":
        return self.element([Fraction(q)])

    def zero(self) -> "NumberFieldElement":
        return self.from_rational(0)

    def one(self) -> "NumberFieldElement":
        return self.from_rational(1)

    def gen(self) -> "NumberFieldElement":
        if self.degree == 1:
            return self.from_rational(Fraction(-self.min_poly[0]))
        return self.element([0, 1])

    def integral_basis(self):
        """Z-basis of the ring of integers for quadratic x^2 - d fields.

        Power basis elsewhere (equation order); callers that enumerate over
        this basis inherit that caveat for non-quadratic fields.
        """
        if self.degree == 2 and self.min_poly[1] == 0:
            d = -self.min_poly[0]
            if d % 4 == 1:
                return [self.one(), self.element([Fraction(1, 2), Fraction(1, 2)])]
        return [self.element([0] * i + [1]) for i in range(self.degree)]


@dataclass(frozen=True)
class NumberFieldElement:
    field: NumberField
    coeffs: tuple

    def _coerce(self, other):
        if isinstance(other, NumberFieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return NumberFieldElement(
            self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prod = qpoly.mul(qpoly.trim(self.coeffs), qpoly.trim(o.coeffs))
        rep = qpoly.mod(prod, self.field._min_poly_q)
        c = list(rep) + [Fraction(0)] * (self.field.degree - len(rep))
        return NumberFieldElement(self.field, tuple(c))

    __rmul__ = __mul__

    def inverse(self):
        rep = qpoly.trim(self.coeffs)
        if not rep:
            raise DivisionByZero("division by zero in number field")
        inv = qpoly.xgcd_mod(rep, self.field._min_poly_q)
        c = list(inv) + [Fraction(0)] * (self.field.degree - len(inv))
        return NumberFieldElement(self.field, tuple(c))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.field.from_rational(other) / self

    def __pow__(self, n):
        n = int(n)
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = self.field.one()
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, NumberFieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.min_poly, self.coeffs))

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"element is not rational: {self}")
        return self.coeffs[0]

    def __repr__(self):
        return f"NFElt{list(map(str, self.coeffs))}"


# ---------------------------------------------------------------------------
# field_create and element-level number theory
# ---------------------------------------------------------------------------


def field_create(min_poly) -> NumberField:
    """Build Q[x]/(f); raises ReducibleMinPoly / NonMonic on bad input."""
    return NumberField(min_poly)


def multiplication_matrix(a: NumberFieldElement):
    """Matrix of x -> a*x on the power basis, columns indexed by basis."""
    d = a.field.degree
    cols = []
    basis_elt = a.field.one()
    gen = a.field.gen()
    for _ in range(d):
        cols.append((a * basis_elt).coeffs)
        basis_elt = basis_elt * gen
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def norm(a: NumberFieldElement) -> Fraction:
    """Field norm N_{K/Q}(a), the determinant of multiplication by a."""
    if a.field.degree == 1:
        return a.coeffs[0]
    return linalg.det(multiplication_matrix(a), Fraction(0))


def trace(a: NumberFieldElement) -> Fraction:
    m = multiplication_matrix(a)
    return sum(m[i][i] for i in range(len(m)))


def char_poly(a: NumberFieldElement):
    """Characteristic polynomial of multiplication by a, monic, low-first."""
    return linalg.charpoly(multiplication_matrix(a))


def min_poly_of(a: NumberFieldElement):
    """Minimal polynomial of a over Q: the radical of the char poly."""
    cp = char_poly(a)
    rad, _ = qpoly.divmod_poly(cp, qpoly.gcd(cp, qpoly.deriv(cp)))
    return qpoly.monic(rad)


def is_algebraic_integer(a: NumberFieldElement) -> bool:
    mp = min_poly_of(a)
    return all(c.denominator == 1 for c in mp)


@lru_cache(maxsize=None)
def _torsion_candidate_orders(d: int):
    """All n >= 1 with euler_phi(n) <= d, ascending."""
    out = []
    # phi(n) > sqrt(n/2) for all n, so n <= 2*(d+1)^2 is a safe scan range
    limit = 2 * (d + 1) * (d + 1) + 1
    for n in range(1, limit):
        phi = n
        m, p = n, 2
        while p * p <= m:
            if m % p == 0:
                while m % p == 0:
                    m //= p
                phi -= phi // p
            p += 1
        if m > 1:
            phi -= phi // m
        if phi <= d:
            out.append(n)
    return tuple(out)


def is_root_of_unity(a: NumberFieldElement):
    """Least n with a^n = 1, or None. a must be nonzero."""
    if a.is_zero():
        raise DivisionByZero("zero is not a root of unity")
    if a == a.field.one():
        return 1
    if abs(norm(a)) != 1 or not is_algebraic_integer(a):
        return None
    for n in _torsion_candidate_orders(a.field.degree):
        if n == 1:
            continue
        if a**n == a.field.one():
            return n
    return None


def torsion_units(field: NumberField):
    """The roots of unity in the field: returns (order, elements).

    The torsion group is cyclic, so it suffices to find the largest order n
    for which a primitive n-th root of unity exists; -1 is always present.
    """
    for n in reversed(_torsion_candidate_orders(field.degree)):
        if n <= 2:
            break
        zeta = _find_primitive_root_of_unity(field, n)
        if zeta is not None:
            return n, [zeta**k for k in range(n)]
    minus_one = field.from_rational(-1)
    return 2, [field.one(), minus_one]


def _find_primitive_root_of_unity(field: NumberField, n: int):
    """Search for a primitive n-th root of unity in the field, exactly.

    Solves x^n = 1 by factoring the n-th cyclotomic polynomial over the
    field and looking for linear factors.
    """
    cyc = sp.Poly(sp.cyclotomic_poly(n, _X), _X)
    coeffs = [Fraction(int(c)) for c in reversed(cyc.all_coeffs())]
    if len(coeffs) - 1 > field.degree:
        return None
    lifted = [field.from_rational(c) for c in coeffs]
    for fac in factor_over_field(lifted, field):
        if len(fac) == 2:  # monic linear: x + c
            return -fac[0]
    return None


# ---------------------------------------------------------------------------
# Factorization over a number field (Trager) and root adjunction
# ---------------------------------------------------------------------------


def _lift_rational_poly(coeffs, field: NumberField):
    return [field.from_rational(c) for c in coeffs]


def _poly_trim(p):
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def _poly_monic(p, field):
    lead = p[-1]
    inv = lead.inverse()
    return [c * inv for c in p]


def _poly_mul(p, q, field):
    if not p or not q:
        return []
    out = [field.zero()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return _poly_trim(out)


def _poly_mod(p, q, field):
    rem = list(p)
    dq = len(q) - 1
    inv_lead = q[-1].inverse()
    for i in range(len(rem) - 1, dq - 1, -1):
        c = rem[i] * inv_lead
        if c.is_zero():
            continue
        for j in range(dq + 1):
            rem[i - dq + j] = rem[i - dq + j] - c * q[j]
    return _poly_trim(rem)


def _poly_divmod(p, q, field):
    rem = list(p)
    dq = len(q) - 1
    inv_lead = q[-1].inverse()
    quo = [field.zero()] * max(len(rem) - dq, 0)
    for i in range(len(rem) - 1, dq - 1, -1):
        c = rem[i] * inv_lead
        if c.is_zero():
            continue
        quo[i - dq] = c
        for j in range(dq + 1):
            rem[i - dq + j] = rem[i - dq + j] - c * q[j]
    return _poly_trim(quo), _poly_trim(rem)


def _poly_gcd(p, q, field):
    p, q = _poly_trim(p), _poly_trim(q)
    while q:
        p, q = q, _poly_mod(p, q, field)
    return _poly_monic(p, field)


def _poly_compose_shift(p, shift: NumberFieldElement, field):
    """p(x + shift) for p with field coefficients (Horner in x + shift)."""
    lin = [shift, field.one()]
    acc = []
    for c in reversed(p):
        acc = _poly_mul(acc, lin, field)
        if not acc:
            acc = [c]
        else:
            acc[0] = acc[0] + c
        acc = _poly_trim(acc)
    return acc


def _poly_eval(p, x: NumberFieldElement, field):
    acc = field.zero()
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _to_bivariate(p, field):
    """Sympy expression Sum c_ij y^j x^i for p with field coefficients."""
    expr = sp.Integer(0)
    for i, c in enumerate(p):
        for j, q in enumerate(c.coeffs):
            if q != 0:
                expr += sp.Rational(q.numerator, q.denominator) * _Y**j * _X**i
    return expr


def _field_gen_poly_sympy(field: NumberField):
    return sp.Poly(list(reversed(field.min_poly)), _Y, domain="QQ").as_expr()


def _norm_poly(p, field: NumberField, shift: int):
    """Res_y(g(y), p(x - shift*y)) as a qpoly tuple over Q."""
    shifted = _poly_compose_gen_shift(p, shift, field)
    bivar = _to_bivariate(shifted, field)
    g = _field_gen_poly_sympy(field)
    res = sp.resultant(g, bivar, _Y)
    res_poly = sp.Poly(sp.expand(res), _X, domain="QQ")
    coeffs = [Fraction(sp.Rational(c)) for c in reversed(res_poly.all_coeffs())]
    return qpoly.trim(coeffs)


def _poly_compose_gen_shift(p, shift: int, field):
    """p(x - shift*alpha) where alpha is the field generator."""
    if shift == 0:
        return list(p)
    return _poly_compose_shift(p, field.gen() * Fraction(-shift), field)


def factor_over_field(p, field: NumberField):
    """Monic irreducible factors of a squarefree polynomial over the field.

    p is a list of NumberFieldElements, lowest degree first, degree >= 1.
    """
    p = _poly_monic(_poly_trim(p), field)
    if field.degree == 1:
        rat = [c.as_rational() for c in p]
        return [
            _lift_rational_poly(f, field) for f in _rational_factors_fraction(rat)
        ]
    if len(p) == 2:
        return [p]
    for shift in _shift_candidates():
        npoly = _norm_poly(p, field, shift)
        if not qpoly.is_squarefree(npoly):
            continue
        rational_factors = _rational_factors_fraction(npoly)
        if len(rational_factors) == 1:
            return [p]
        shifted = _poly_compose_gen_shift(p, shift, field)
        out = []
        for fac in rational_factors:
            lifted = _lift_rational_poly(fac, field)
            g = _poly_gcd(shifted, lifted, field)
            if len(g) >= 2:
                out.append(_poly_compose_gen_shift(g, -shift, field))
        assert sum(len(f) - 1 for f in out) == len(p) - 1
        return out
    raise RuntimeError("no squarefree shift found (should not happen)")


def _shift_candidates():
    yield 0
    k = 1
    while k <= 40:
        yield k
        yield -k
        k += 1


def _rational_factors_fraction(coeffs):
    """Irreducible monic factors over Q of a rational polynomial."""
    fracs = [Fraction(c) for c in coeffs]
    den = 1
    for c in fracs:
        den = den * c.denominator // int_gcd(den, c.denominator)
    ints = [int(c * den) for c in fracs]
    poly = sp.Poly(list(reversed(ints)), _X, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        fc = qpoly.monic(
            qpoly.trim([Fraction(sp.Rational(c)) for c in reversed(fac.all_coeffs())])
        )
        out.extend([fc] * mult)
    return out


def _scale_to_integer_monic(min_poly):
    """Given a monic rational min poly of gamma, return (lam, integer min
    poly of lam*gamma)."""
    d = qpoly.degree(min_poly)
    lam = 1
    for c in min_poly[:-1]:
        lam = lam * c.denominator // int_gcd(lam, c.denominator)
    while True:
        scaled = tuple(
            min_poly[i] * Fraction(lam) ** (d - i) for i in range(d)
        ) + (Fraction(1),)
        if all(c.denominator == 1 for c in scaled):
            return lam, tuple(int(c) for c in scaled)
        lam *= 2


def extend_by_irreducible(field: NumberField, q, max_degree=None):
    """Adjoin a root of q (irreducible over field, degree >= 2).

    Returns (new_field, embed, root) where embed maps old elements into the
    new field and root is a root of the embedded q.
    """
    e = len(q) - 1
    new_degree = e * field.degree
    if max_degree is not None and new_degree > max_degree:
        raise DegreeCapExceeded(
            f"extension degree {new_degree} exceeds cap {max_degree}"
        )
    if field.degree == 1:
        rat = [c.as_rational() for c in q]
        lam, ints = _scale_to_integer_monic(qpoly.monic(qpoly.trim(rat)))
        new_field = NumberField(ints, _trusted=True)
        root = new_field.gen() * Fraction(1, lam)

        def embed(a, _nf=new_field):
            return _nf.from_rational(a.as_rational())

        return new_field, embed, root
    for shift in _shift_candidates():
        npoly = _norm_poly(q, field, shift)
        if not qpoly.is_squarefree(npoly):
            continue
        lam, ints = _scale_to_integer_monic(qpoly.monic(npoly))
        new_field = NumberField(ints, _trusted=True)
        gamma = new_field.gen() * Fraction(1, lam)
        # locate the image of the old generator: the unique common root of
        # g(y) and q(gamma - shift*y, y) in the new field
        g_lifted = _lift_rational_poly(
            [Fraction(c) for c in field.min_poly], new_field
        )
        shifted = _poly_compose_gen_shift(q, shift, field)
        # build q~(gamma, y): substitute x = gamma in the bivariate form
        acc = [new_field.zero()]
        gamma_pow = new_field.one()
        for i, c in enumerate(shifted):
            # c is an element of `field`: its coeffs give a poly in y
            cy = [new_field.from_rational(v) * gamma_pow for v in c.coeffs]
            acc = _poly_add_new(acc, cy, new_field)
            gamma_pow = gamma_pow * gamma
        h = _poly_gcd(g_lifted, _poly_trim(acc), new_field)
        assert len(h) == 2, "generator image gcd must be linear"
        alpha_img = -h[0]

        def embed(a, _imgs=None, _alpha=alpha_img, _nf=new_field):
            acc_e = _nf.zero()
            pw = _nf.one()
            for co in a.coeffs:
                if co != 0:
                    acc_e = acc_e + _nf.from_rational(co) * pw
                pw = pw * _alpha
            return acc_e

        root = gamma - alpha_img * Fraction(shift)
        return new_field, embed, root
    raise RuntimeError("no squarefree shift found for extension")


def _poly_add_new(p, q, field):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else field.zero()
        b = q[i] if i < len(q) else field.zero()
        out.append(a + b)
    return out


# ---------------------------------------------------------------------------
# Splitting container
# ---------------------------------------------------------------------------


class SplittingContainer:
    """An exactly represented field over which the base min poly splits,
    together with the images of the base generator (one per embedding)."""

    def __init__(self, base: NumberField, ambient: NumberField, roots):
        self.base = base
        self.ambient = ambient
        self.roots = list(roots)
        assert len(self.roots) == base.degree

    def embed(self, a: NumberFieldElement, i: int) -> NumberFieldElement:
        """sigma_i(a) as an element of the ambient field."""
        if a.field != self.base:
            raise ValueError("element not in the base field")
        acc = self.ambient.zero()
        pw = self.ambient.one()
        root = self.roots[i]
        for c in a.coeffs:
            if c != 0:
                acc = acc + self.ambient.from_rational(c) * pw
            pw = pw * root
        return acc

    def conjugates(self, a: NumberFieldElement):
        return [self.embed(a, i) for i in range(self.base.degree)]

    def preimage(self, b: NumberFieldElement, i: int) -> NumberFieldElement:
        """The a in the base field with sigma_i(a) = b; raises if none."""
        d = self.base.degree
        big_d = self.ambient.degree
        cols = []
        pw = self.ambient.one()
        for j in range(d):
            cols.append(pw.coeffs)
            pw = pw * self.roots[i]
        mat = [[cols[j][t] for j in range(d)] for t in range(big_d)]
        sol = linalg.solve(mat, list(b.coeffs), Fraction(0), Fraction(1))
        if sol is None:
            raise ValueError("element has no preimage under this embedding")
        return self.base.element(sol)


def splitting_container(field: NumberField, max_degree: int = 24) -> SplittingContainer:
    """Build the splitting container by iterated root adjunction."""
    ambient = field
    f_lifted = _lift_rational_poly([Fraction(c) for c in field.min_poly], ambient)
    if field.degree == 1:
        return SplittingContainer(field, field, [field.gen()])
    roots = [ambient.gen()]
    while True:
        remaining = f_lifted
        for r in roots:
            remaining, rem = _poly_divmod(
                remaining, [-r, ambient.one()], ambient
            )
            assert not rem, "known root fails exact division"
        if len(remaining) <= 1:
            break
        factors = factor_over_field(remaining, ambient)
        new_roots = [-(f[0]) for f in factors if len(f) == 2]
        nonlinear = [f for f in factors if len(f) > 2]
        if not nonlinear:
            roots.extend(new_roots)
            continue
        roots.extend(new_roots)
        new_field, embed, root = extend_by_irreducible(
            ambient, nonlinear[0], max_degree=max_degree
        )
        roots = [embed(r) for r in roots] + [root]
        f_lifted = _lift_rational_poly(
            [Fraction(c) for c in field.min_poly], new_field
        )
        ambient = new_field
    # verify the split by exact division (done above) and sort roots for
    # deterministic embedding order
    roots_sorted = sorted(roots, key=lambda r: r.coeffs)
    # keep the identity embedding first when the field splits itself
    if ambient == field:
        ident = field.gen()
        roots_sorted.remove(ident)
        roots_sorted = [ident] + roots_sorted
    return SplittingContainer(field, ambient, roots_sorted)


def conjugates(a: NumberFieldElement, sc: SplittingContainer):
    """All embeddings sigma_1(a), ..., sigma_d(a) in the ambient field."""
    return sc.conjugates(a)
