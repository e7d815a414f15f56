"""Weighted-homogeneous isolated-singularity computations: Milnor basis by
graded exact linear algebra, Hodge/weight presentations from the weighted
grading, and the order-zero weighted microlocal multiplier ideals.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (NotIsolatedSingularity, NotQuasiHomogeneous,
                     PreconditionError)
from .exactalg import (Polynomial, WeightVector, graded_ideal, grlex_key,
                       mono_mul, monomials_of_weighted_degree,
                       monomials_upto_degree, weighted_degree)
from .linalg import Echelon
from .snc import HodgePresentation


def check_weight_one(f: Polynomial, w: WeightVector) -> None:
    """Exact check that every monomial of f has weighted degree 1, i.e. the
    Euler field sum w_i x_i d_i fixes f."""
    if f.dim != w.dim:
        raise NotQuasiHomogeneous("weight vector dimension mismatch")
    if f.is_zero():
        raise NotQuasiHomogeneous("zero polynomial")
    for m in f.terms:
        if weighted_degree(m, w) != 1:
            raise NotQuasiHomogeneous(
                f"monomial {m} has weighted degree {weighted_degree(m, w)} != 1")


def milnor_basis(f: Polynomial, w: WeightVector):
    """Monomial basis of the Jacobian quotient ring, computed degree by
    degree in the weighted grading up to the socle degree sum(1 - 2 w_i).

    Isolatedness is certified by checking that every monomial of weighted
    degree in (socle, socle + max w] reduces to zero modulo the Jacobian
    ideal; stripping one variable at a time pushes any higher-degree monomial
    into that window, so the certificate covers all degrees above the socle.
    """
    check_weight_one(f, w)
    if f.constant_term():
        raise NotQuasiHomogeneous("f does not vanish at the origin")
    partials = [f.partial(i) for i in range(f.dim)]
    if any(p.constant_term() for p in partials):
        raise NotIsolatedSingularity("f is smooth at the origin")

    socle = sum((1 - 2 * wi for wi in w.weights), Fraction(0))
    maxw = max(w.weights)

    def standard_at(gamma: Fraction):
        """(standard monomials, full_rank) at weighted degree gamma."""
        monos = monomials_of_weighted_degree(w, gamma)
        if not monos:
            return [], True
        ech = Echelon()
        for i, p in enumerate(partials):
            if p.is_zero():
                continue
            mult_deg = gamma - (1 - w.weights[i])
            for m in monomials_of_weighted_degree(w, mult_deg):
                vec = {mono_mul(m, mm): c for mm, c in p.terms.items()}
                ech.insert(vec)
        standard = [m for m in monos if m not in ech.rows]
        return standard, not standard

    # degrees actually occurring, up to socle + max w
    degrees = sorted({weighted_degree(m, w)
                      for m in _monomials_weighted_window(w, socle + maxw)})
    basis = []
    for gamma in degrees:
        std, full = standard_at(gamma)
        if gamma <= socle:
            basis.extend(std)
        elif not full:
            raise NotIsolatedSingularity(
                f"monomials of weighted degree {gamma} do not all reduce to 0 "
                "modulo the Jacobian ideal")
    basis.sort(key=grlex_key)
    return basis


def _monomials_weighted_window(w: WeightVector, bound: Fraction):
    out = []

    def rec(prefix, remaining, i):
        if i == w.dim:
            out.append(tuple(prefix))
            return
        e = 0
        while e * w.weights[i] <= remaining:
            rec(prefix + [e], remaining - e * w.weights[i], i + 1)
            e += 1

    if bound >= 0:
        rec([], Fraction(bound), 0)
    return out


class QuasiHomogeneousGerm:
    """f quasi-homogeneous of weight 1 with an isolated singularity at the
    origin; construction certifies both properties exactly."""

    __slots__ = ("f", "w", "milnor", "socle_degree")

    def __init__(self, f: Polynomial, w: WeightVector):
        self.f = f
        self.w = w
        self.milnor = tuple(milnor_basis(f, w))
        self.socle_degree = sum((1 - 2 * wi for wi in w.weights), Fraction(0))

    @property
    def dim(self) -> int:
        return self.f.dim

    @property
    def mu(self) -> int:
        return len(self.milnor)

    def exponents(self):
        """Deduplicated values wdeg(m) + |w| over the Milnor basis."""
        return sorted({weighted_degree(m, self.w) + self.w.total
                       for m in self.milnor})


def whom_weight_top(germ: QuasiHomogeneousGerm, alpha) -> int:
    """Top weight offset: 1 for alpha in (0,1), 2 for alpha = 1."""
    alpha = Fraction(alpha)
    if not (0 < alpha <= 1):
        raise PreconditionError("alpha outside (0,1]", hypothesis="alpha in (0,1]")
    if germ.dim < 2:
        raise PreconditionError("ambient dimension must be at least 2",
                                hypothesis="n >= 2")
    return 2 if alpha == 1 else 1


def _graded_summands(germ, alpha, k, strict):
    out = []
    for j in range(k + 1):
        ideal = graded_ideal(germ.w, Fraction(alpha) + j - germ.w.total, strict)
        for g in ideal.gens:
            out.append((k - j, Polynomial.monomial(g), j))
    return out


def whom_hodge_weight(germ: QuasiHomogeneousGerm, alpha, k: int,
                      l: int) -> HodgePresentation:
    """Hodge step k of the weight-(n+l) piece, as graded slices:
    sum over j of budget-(k-j) operators on the monomials of weighted degree
    > alpha + j - |w| (strict, for the stratum below the top) or >= (at the
    top stratum), each at pole step j.

    Strata carrying a closed form: l = 0 (strict) and l = 1 (top) for
    alpha in (0,1); l = 1 (strict) and l = 2 (top) for alpha = 1.
    """
    alpha = Fraction(alpha)
    top = whom_weight_top(germ, alpha)
    if k < 0:
        raise PreconditionError("k must be non-negative")
    if not (0 <= l <= top):
        raise PreconditionError(f"l={l} outside 0..{top}",
                                hypothesis="l <= top weight offset")
    if alpha == 1 and l == 0:
        raise PreconditionError(
            "no closed form at the lowest weight stratum for integral twist",
            hypothesis="(alpha, l) carries a closed form")
    strict = l < top
    return HodgePresentation.build(alpha, germ.dim,
                                   _graded_summands(germ, alpha, k, strict))


def whom_micromult_ideal(germ: QuasiHomogeneousGerm, alpha, k: int):
    """Generators of the order-zero weighted microlocal multiplier ideal at
    level k + alpha: for j = 0..k the products of the degree-(k-j) symmetric
    power sum of the partials of f with the monomials of weighted degree
    > alpha + j - |w|.  Emitted unminimalized: minimalization of non-monomial
    generator lists is out of scope."""
    alpha = Fraction(alpha)
    if not (0 < alpha <= 1):
        raise PreconditionError("alpha outside (0,1]", hypothesis="alpha in (0,1]")
    if k < 0:
        raise PreconditionError("k must be non-negative")
    partials = [germ.f.partial(i) for i in range(germ.dim)]
    gens = []
    for j in range(k + 1):
        power_sum = Polynomial.zero(germ.dim)
        for gamma in monomials_upto_degree(germ.dim, k - j):
            if sum(gamma) != k - j:
                continue
            prod = Polynomial.one(germ.dim)
            for i, e in enumerate(gamma):
                prod = prod * partials[i] ** e
            power_sum = power_sum + prod
        ideal = graded_ideal(germ.w, alpha + j - germ.w.total, True)
        for g in ideal.gens:
            gens.append(power_sum * Polynomial.monomial(g))
    return [g for g in gens if not g.is_zero()]


def micromult_contains_one(gens) -> bool:
    """True iff some generator is a nonzero constant (the emitted list is
    unminimalized, so the unit shows up as a literal constant)."""
    return any(not g.is_zero() and g.total_degree() == 0 for g in gens)
