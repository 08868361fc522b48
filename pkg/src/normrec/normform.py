"""Norm form problems: brute-force oracle, norm-m representatives,
embedding matrices, component multi-recurrences, and lifts to extensions.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, product
from math import isqrt

from . import linalg, qpoly
from .errors import DegreeCapExceeded, NoNonsingularSelection
from .multirec import MPoly, MultiRecurrence
from .numberfield import (
    NumberField,
    NumberFieldElement,
    SplittingContainer,
    extend_by_irreducible,
    factor_over_field,
    is_algebraic_integer,
    norm,
    splitting_container,
)
from .units import UnitSystem


class NormFormProblem:
    """N_{K/Q}(x_1 a_1 + ... + x_n a_n) = m with algebraic-integer a_i."""

    def __init__(self, field, alphas, m, unit_system=None, max_splitting_degree=24):
        self.field = field
        self.alphas = list(alphas)
        self.m = int(m)
        self.unit_system = unit_system
        self.max_splitting_degree = max_splitting_degree
        if self.m == 0:
            raise ValueError("target norm m must be nonzero")
        n, d = len(self.alphas), field.degree
        if n > d:
            raise ValueError(f"{n} module generators in a degree-{d} field")
        coord_matrix = [list(a.coeffs) for a in self.alphas]
        if linalg.rank(coord_matrix, Fraction(0)) != n:
            raise ValueError("module generators are linearly dependent over Q")
        for a in self.alphas:
            if not is_algebraic_integer(a):
                raise ValueError(f"module generator {a} is not an algebraic integer")
        self._sc = None
        self._norm_poly = None
        self._embedding = None

    @property
    def n(self):
        return len(self.alphas)

    def splitting(self) -> SplittingContainer:
        if self._sc is None:
            self._sc = splitting_container(self.field, self.max_splitting_degree)
        return self._sc

    def norm_polynomial(self):
        """The norm form as {exponent tuple: int coefficient} in n variables."""
        if self._norm_poly is None:
            sc = self.splitting()
            amb = sc.ambient
            n = self.n
            prod_poly = MPoly.constant(amb, n, amb.one())
            for i in range(self.field.degree):
                mono = {}
                for j, a in enumerate(self.alphas):
                    exps = tuple(1 if t == j else 0 for t in range(n))
                    mono[exps] = sc.embed(a, i)
                prod_poly = prod_poly * MPoly(amb, n, mono)
            out = {}
            for exps, c in prod_poly.monomials.items():
                q = c.as_rational()
                assert q.denominator == 1, "norm form coefficient not integral"
                out[exps] = int(q)
            self._norm_poly = out
        return self._norm_poly

    def norm_of_vector(self, x):
        acc = 0
        for exps, c in self.norm_polynomial().items():
            val = c
            for e, xi in zip(exps, x):
                if e:
                    val *= xi**e
            acc += val
        return acc

    def linear_form(self, x) -> NumberFieldElement:
        acc = self.field.zero()
        for xi, a in zip(x, self.alphas):
            acc = acc + a * Fraction(xi)
        return acc


def solve_bruteforce(problem: NormFormProblem, box: int):
    """All x in Z^n with |x_i| <= box and N(x . alpha) = m, lex sorted.

    Enumerates the first n-1 coordinates and solves the last coordinate as
    an integer root problem of the univariate norm polynomial.
    """
    n = problem.n
    m = problem.m
    npoly = problem.norm_polynomial()
    if n == 1:
        sols = []
        for x in range(-box, box + 1):
            if x and problem.norm_of_vector((x,)) == m:
                sols.append((x,))
        return sorted(sols)
    # split monomials by the exponent of the last variable
    by_last = {}
    for exps, c in npoly.items():
        by_last.setdefault(exps[-1], []).append((exps[:-1], c))
    max_deg = max(by_last)
    quadratic = max_deg == 2
    sols = []
    for prefix in product(range(-box, box + 1), repeat=n - 1):
        coeffs = [0] * (max_deg + 1)
        for e_last, terms in by_last.items():
            acc = 0
            for pexps, c in terms:
                val = c
                for e, xi in zip(pexps, prefix):
                    if e:
                        val *= xi**e
                acc += val
            coeffs[e_last] = acc
        coeffs[0] -= m
        if quadratic:
            c0, c1, c2 = coeffs
            if c2 == 0:
                roots = qpoly.int_roots(coeffs, bound=box)
            else:
                disc = c1 * c1 - 4 * c2 * c0
                roots = []
                if disc >= 0:
                    sq = isqrt(disc)
                    if sq * sq == disc:
                        for sgn in (1, -1):
                            num = -c1 + sgn * sq
                            if num % (2 * c2) == 0:
                                rt = num // (2 * c2)
                                if abs(rt) <= box:
                                    roots.append(rt)
        else:
            roots = qpoly.int_roots(coeffs, bound=box)
        for rt in set(roots):
            sols.append(prefix + (rt,))
    return sorted(sols)


@dataclass
class RepresentativeSet:
    representatives: list
    coeff_bound: int
    box_limited: bool = True


def _is_associate(a: NumberFieldElement, b: NumberFieldElement) -> bool:
    q1 = a / b
    q2 = b / a
    return is_algebraic_integer(q1) and is_algebraic_integer(q2)


def norm_representatives(problem: NormFormProblem, coeff_bound: int):
    """Pairwise non-associate elements of norm m with integral-basis
    coordinates bounded by coeff_bound; complete within the box only."""
    basis = problem.field.integral_basis()
    found = []
    for coeffs in product(
        range(-coeff_bound, coeff_bound + 1), repeat=len(basis)
    ):
        if all(c == 0 for c in coeffs):
            continue
        mu = problem.field.zero()
        for c, w in zip(coeffs, basis):
            if c:
                mu = mu + w * Fraction(c)
        if norm(mu) == problem.m:
            found.append((coeffs, mu))
    # canonical representative per associate class: smallest coefficients,
    # positive signs preferred
    found.sort(
        key=lambda cm: (
            sum(c * c for c in cm[0]),
            tuple(abs(c) for c in cm[0]),
            tuple(0 if c >= 0 else 1 for c in cm[0]),
        )
    )
    reps = []
    for _, mu in found:
        if not any(_is_associate(mu, r) for r in reps):
            reps.append(mu)
    return RepresentativeSet(reps, coeff_bound)


@dataclass
class EmbeddingMatrix:
    sigma_indices: tuple
    matrix: list
    inverse: list


def embedding_matrix(problem: NormFormProblem, sc=None) -> EmbeddingMatrix:
    """Lexicographically first n-subset of embeddings whose matrix
    (sigma_i(alpha_j)) has nonzero determinant, with its exact inverse."""
    if sc is None:
        sc = problem.splitting()
    amb = sc.ambient
    n, d = problem.n, problem.field.degree
    conj = [[sc.embed(a, i) for a in problem.alphas] for i in range(d)]
    for subset in combinations(range(d), n):
        mat = [conj[i] for i in subset]
        if linalg.det(mat, amb.zero()) != amb.zero():
            inv = linalg.inverse(mat, amb.zero(), amb.one())
            return EmbeddingMatrix(subset, mat, inv)
    raise NoNonsingularSelection(
        "every embedding selection is singular; generators are dependent"
    )


@dataclass
class ComponentRecurrence:
    """x_component = H(h_1, ..., h_r) for solutions using this mu class.

    parity_mask / parity annotate which h give genuine solutions when some
    fundamental unit has norm -1: sum of masked h_v must be == parity mod 2.
    """

    component: int
    recurrence: MultiRecurrence
    mu: NumberFieldElement
    torsion_power: int
    parity_mask: tuple
    parity: int
    embedding_indices: tuple
    problem: NormFormProblem = dc_field(repr=False, default=None)

    def h_valid(self, h) -> bool:
        return sum(hv for hv, msk in zip(h, self.parity_mask) if msk) % 2 == self.parity

    def unit_for(self, h) -> NumberFieldElement:
        sys = self.problem.unit_system
        out = self.problem.field.one()
        for eps, hv in zip(sys.fundamental_units, h):
            out = out * eps ** int(hv)
        return out


def build_component_recurrences(
    problem: NormFormProblem, component: int, sc=None, coeff_bound: int = 5
):
    """The finite set of component recurrences H for x_component, one per
    (norm-m representative class, torsion class modulo signs)."""
    if not 1 <= component <= problem.n:
        raise ValueError(f"component must be in 1..{problem.n}")
    if problem.unit_system is None:
        raise ValueError("problem has no unit system")
    if sc is None:
        sc = problem.splitting()
    amb = sc.ambient
    emb = embedding_matrix(problem, sc)
    sys = problem.unit_system
    r = sys.rank
    reps = norm_representatives(problem, coeff_bound)
    unit_norms = [norm(e) for e in sys.fundamental_units]
    parity_mask = tuple(1 if s == -1 else 0 for s in unit_norms)
    from .numberfield import torsion_units

    t_order, t_elts = torsion_units(problem.field)
    # torsion classes modulo {+-1}: signs are absorbed into associate classes
    torsion_reps = list(range(t_order // 2)) if t_order % 2 == 0 else list(range(t_order))
    out = []
    for mu in reps.representatives:
        for t in torsion_reps:
            scaled_mu = mu * t_elts[1] ** t if t else mu
            n_scaled = norm(scaled_mu)
            assert abs(n_scaled) == abs(problem.m)
            parity = 0 if n_scaled == problem.m else 1
            if parity == 1 and not any(parity_mask):
                continue  # no h can repair the sign; class contributes nothing
            terms = []
            for pos, i in enumerate(emb.sigma_indices):
                tau = emb.inverse[component - 1][pos] * sc.embed(scaled_mu, i)
                base = tuple(sc.embed(e, i) for e in sys.fundamental_units)
                terms.append((tau, base))
            rec = MultiRecurrence(amb, r, terms)
            out.append(
                ComponentRecurrence(
                    component=component,
                    recurrence=rec,
                    mu=scaled_mu,
                    torsion_power=t,
                    parity_mask=parity_mask,
                    parity=parity,
                    embedding_indices=emb.sigma_indices,
                    problem=problem,
                )
            )
    return out


@dataclass
class LiftResult:
    problem: NormFormProblem
    relative_degree: int
    embed: object  # callable K -> L


def lift(problem: NormFormProblem, extension_specs) -> LiftResult:
    """Lift to N_{L/Q}(x . alpha) = m^[L:K] by adjoining the specified roots.

    Each spec is either ("poly", coeffs) for a rational polynomial or
    ("radical", element, e) for an e-th root of a field element.
    """
    current = problem.field
    embed = lambda a: a  # noqa: E731

    def compose(f, g):
        return lambda a: f(g(a))

    for spec in extension_specs:
        if spec[0] == "poly":
            coeffs = [current.from_rational(Fraction(c)) for c in spec[1]]
        elif spec[0] == "radical":
            elt, e = spec[1], int(spec[2])
            img = embed(elt)
            coeffs = [-img] + [current.zero()] * (e - 1) + [current.one()]
        else:
            raise ValueError(f"unknown extension spec {spec[0]!r}")
        factors = factor_over_field(coeffs, current)
        factors.sort(key=len)
        irreducible = factors[-1]
        if len(irreducible) == 2:
            continue  # the root already lies in the current field
        new_degree = (len(irreducible) - 1) * current.degree
        if new_degree > problem.max_splitting_degree:
            raise DegreeCapExceeded(
                f"lift degree {new_degree} exceeds cap {problem.max_splitting_degree}"
            )
        current, step_embed, _root = extend_by_irreducible(
            current, irreducible, max_degree=problem.max_splitting_degree
        )
        embed = compose(step_embed, embed)
    rel = current.degree // problem.field.degree
    lifted = NormFormProblem(
        current,
        [embed(a) for a in problem.alphas],
        problem.m**rel,
        unit_system=None,
        max_splitting_degree=problem.max_splitting_degree,
    )
    # tower formula sanity on a few base-field elements
    for probe in (problem.field.gen(), problem.field.one() + problem.field.gen()):
        assert norm(embed(probe)) == norm(probe) ** rel
    return LiftResult(lifted, rel, embed)
