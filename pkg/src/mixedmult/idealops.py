"""The ideal calculus: sum, product, power, intersection, colon, saturation.

Ideals of a quotient ring A = R/H are presented by homogeneous generator
lists; every operation lifts to the free ring by appending H, so one engine
serves both R and R/H.  Results are GB-canonicalized: the stored generators
are the reduced Groebner basis elements not already contained in H.
"""

from __future__ import annotations

from .groebner import GroebnerBasis, buchberger, divide_by, eliminate, normal_form
from .polyring import GREVLEX, Polynomial, RingPresentation, mono_div, mono_lcm

__all__ = [
    "IdealPresentation", "PowerProducts", "NilpotentProductError",
    "quotient_ring", "map_ideal", "maximal_ideal",
]


class NilpotentProductError(ValueError):
    """The product ideal is nilpotent, so the ambient hypotheses fail."""


def _relations_gb(ring: RingPresentation) -> GroebnerBasis:
    gb = ring._relations_gb
    if gb is None:
        gb = buchberger([], GREVLEX, ring)
        object.__setattr__(ring, "_relations_gb", gb)
    return gb


class IdealPresentation:
    """A finite homogeneous generating set of an ideal of A = R/H.

    Generators are nonzero polynomials; the zero ideal is the empty list and
    the unit ideal is presented as (1).  Equality of presentations is
    equality of the reduced Groebner bases of the lifted ideals.
    """

    __slots__ = ("ring", "gens", "_gb", "_canonical")

    def __init__(self, ring: RingPresentation, gens=()):
        self.ring = ring
        cleaned = []
        for g in gens:
            if g.ring != ring:
                raise ValueError("ideal generator from a different ambient ring")
            if not g:
                continue
            if not g.is_homogeneous():
                raise ValueError(f"ideal generators must be homogeneous: {g}")
            cleaned.append(g)
        self.gens = tuple(cleaned)
        self._gb = None
        self._canonical = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ring) -> "IdealPresentation":
        return cls(ring, ())

    @classmethod
    def unit(cls, ring) -> "IdealPresentation":
        return cls(ring, (ring.one(),))

    @classmethod
    def principal(cls, element: Polynomial) -> "IdealPresentation":
        return cls(element.ring, (element,))

    # -- canonical form ------------------------------------------------------

    @property
    def gb(self) -> GroebnerBasis:
        """Reduced grevlex Groebner basis of (gens) + H, cached."""
        if self._gb is None:
            self._gb = buchberger(self.gens, GREVLEX, self.ring)
        return self._gb

    def canonical(self) -> "IdealPresentation":
        """The presentation whose generators are the reduced GB modulo H."""
        if self._canonical is not None:
            return self._canonical
        rel_gb = _relations_gb(self.ring)
        gens = tuple(p for p in self.gb.polys if not rel_gb.contains(p))
        if gens == self.gens:
            canon = self
        else:
            canon = IdealPresentation(self.ring, gens)
            canon._gb = self.gb
        canon._canonical = canon
        self._canonical = canon
        return canon

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.canonical().gens

    def is_unit(self) -> bool:
        return any(g.degree() == 0 for g in self.canonical().gens)

    def contains(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.gb.contains(other)
        self._check_ring(other)
        return all(self.gb.contains(g) for g in other.gens)

    def __eq__(self, other):
        if not isinstance(other, IdealPresentation):
            return NotImplemented
        if self.ring != other.ring:
            return False
        return self.gb.polys == other.gb.polys

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise ValueError("ideals live in different ambient rings")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "IdealPresentation":
        self._check_ring(other)
        return IdealPresentation(self.ring, self.gens + other.gens).canonical()

    def __mul__(self, other) -> "IdealPresentation":
        self._check_ring(other)
        prods = {}
        for a in self.gens:
            for b in other.gens:
                p = a * b
                if p:
                    prods[tuple(sorted(p.terms.items()))] = p
        return IdealPresentation(self.ring, list(prods.values())).canonical()

    def times(self, element: Polynomial) -> "IdealPresentation":
        """The ideal x*U generated by x times each generator."""
        if element.ring != self.ring:
            raise ValueError("element from a different ambient ring")
        return IdealPresentation(self.ring, [element * g for g in self.gens]).canonical()

    def __pow__(self, n: int) -> "IdealPresentation":
        if not isinstance(n, int) or n < 0:
            raise ValueError("ideal powers need nonnegative integer exponents")
        result = IdealPresentation.unit(self.ring)
        square = self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    # -- intersection, colon, saturation --------------------------------------

    def intersect(self, other) -> "IdealPresentation":
        self._check_ring(other)
        if self.is_unit():
            return other.canonical()
        if other.is_unit():
            return self.canonical()
        if self.is_zero() or other.is_zero():
            return IdealPresentation.zero(self.ring)
        rels = [r.in_ring(self.ring) for r in self.ring.relations]
        mine = list(self.gens) + rels
        theirs = list(other.gens) + rels
        if all(len(p.terms) == 1 for p in mine + theirs):
            # monomial ideals intersect by pairwise lcms
            lcms = {mono_lcm(next(iter(a.terms)), next(iter(b.terms)))
                    for a in mine for b in theirs}
            gens = [Polynomial(self.ring, {m: 1}) for m in lcms]
            return IdealPresentation(self.ring, gens).canonical()
        raw = _intersect_raw(self.ring, mine, theirs)
        return IdealPresentation(self.ring, raw).canonical()

    def colon(self, other) -> "IdealPresentation":
        """U : V = {a in A : a*V contained in U}."""
        self._check_ring(other)
        rel_gb = _relations_gb(self.ring)
        divisors = [g for g in other.gens if not rel_gb.contains(g)]
        if not divisors:
            raise ValueError("colon by the zero ideal")
        rels = [r.in_ring(self.ring) for r in self.ring.relations]
        mine = list(self.gens) + rels
        monomial_self = all(len(p.terms) == 1 for p in mine)
        result = None
        for f in divisors:
            if monomial_self and len(f.terms) == 1:
                mf = next(iter(f.terms))
                quots = {mono_div(mono_lcm(next(iter(p.terms)), mf), mf) for p in mine}
                quotients = [Polynomial(self.ring, {m: 1}) for m in quots]
            else:
                raw = _intersect_raw(self.ring, mine, [f])
                quotients = []
                for g in raw:
                    q, r = divide_by(g, f)
                    if r:
                        raise RuntimeError("inexact division in colon computation")
                    quotients.append(q)
            part = IdealPresentation(self.ring, quotients).canonical()
            result = part if result is None else result.intersect(part)
        return result

    def saturate(self, other):
        """Iterate the colon until it stabilizes: returns (U : V^inf, steps)."""
        current = self.canonical()
        steps = 0
        while True:
            nxt = current.colon(other)
            if nxt == current:
                return current, steps
            current = nxt
            steps += 1

    def __repr__(self):
        return "IdealPresentation(" + ", ".join(str(g) for g in self.gens) + ")"


def _fresh_tag_name(variables) -> str:
    if "t" not in variables:
        return "t"
    i = 0
    while f"t{i}" in variables:
        i += 1
    return f"t{i}"


def _intersect_raw(ring: RingPresentation, gens_a, gens_b):
    """Intersection of two raw generator lists in the free ring over `ring`.

    Uses the tag construction t*A + (1-t)*B and eliminates the (ungraded)
    tag variable.  The heavier list goes on the t side, where its term
    count is not doubled; intersection is symmetric, so this is free.
    """
    if sum(len(p.terms) for p in gens_b) > sum(len(p.terms) for p in gens_a):
        gens_a, gens_b = gens_b, gens_a
    tag_ring = RingPresentation(ring.field, (_fresh_tag_name(ring.variables),) + ring.variables)

    def lift(p, tag_exp):
        return Polynomial._raw(tag_ring, {(tag_exp,) + m: c for m, c in p.terms.items()})

    tagged = [lift(p, 1) for p in gens_a if p]
    tagged += [lift(p, 0) - lift(p, 1) for p in gens_b if p]
    eliminated = eliminate(tagged, 1, tag_ring)
    out = []
    for g in eliminated:
        terms = {}
        for m, c in g.terms.items():
            assert m[0] == 0
            terms[m[1:]] = c
        out.append(Polynomial._raw(ring, terms))
    return out


def quotient_ring(ring: RingPresentation, ideal: IdealPresentation) -> RingPresentation:
    """The presentation of A/U: relations accumulate literally as H + gens(U).

    Quotienting by the unit ideal yields the flagged zero-ring presentation,
    legal only inside dimension and length computations.
    """
    if ideal.ring != ring:
        raise ValueError("ideal lives in a different ring")
    if ideal.is_unit():
        return ring.quotient((ring.free.one(),))
    rel_gb = _relations_gb(ring)
    extra = [g.in_ring(ring.free) for g in ideal.gens if not rel_gb.contains(g)]
    return ring.quotient(extra)


def map_ideal(ideal: IdealPresentation, target: RingPresentation) -> IdealPresentation:
    """Reinterpret the generators in another presentation of the same variables."""
    return IdealPresentation(target, [g.in_ring(target) for g in ideal.gens])


def maximal_ideal(ring: RingPresentation) -> IdealPresentation:
    """The irrelevant ideal m generated by all the variables."""
    return IdealPresentation(ring, ring.gens())


class PowerProducts:
    """Memoized products I0^(a0) * I1^(a1) * ... for a fixed tuple of ideals.

    Each product is built from a cached neighbor by one ideal multiplication,
    so a window of exponent vectors costs one multiplication per new point.
    """

    def __init__(self, ideals):
        ideals = tuple(ideals)
        if not ideals:
            raise ValueError("need at least one ideal")
        ring = ideals[0].ring
        for ideal in ideals:
            if ideal.ring != ring:
                raise ValueError("ideals live in different ambient rings")
        self.ring = ring
        self.ideals = ideals
        self._memo = {(0,) * len(ideals): IdealPresentation.unit(ring)}

    def get(self, exponents) -> IdealPresentation:
        exponents = tuple(exponents)
        if len(exponents) != len(self.ideals) or any(e < 0 for e in exponents):
            raise ValueError(f"bad exponent vector {exponents}")
        cached = self._memo.get(exponents)
        if cached is not None:
            return cached
        i = next(k for k, e in enumerate(exponents) if e > 0)
        prev = self.get(exponents[:i] + (exponents[i] - 1,) + exponents[i + 1:])
        value = prev * self.ideals[i]
        self._memo[exponents] = value
        return value
