"""Verifiers and samplers for (FC)-elements, weak-(FC)-elements, and superficial elements.

The "for all large exponents" quantifiers are checked on a finite window
cube and reported as verified-on-window, never as proved; every certificate
carries the window it was checked on.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product as cartesian

from .idealops import (
    IdealPresentation, NilpotentProductError, PowerProducts, map_ideal, quotient_ring,
)
from .invariants import EMPTY, krull_dimension, quotient_numerator
from .polyring import Polynomial, RingPresentation, monomials_of_degree

__all__ = [
    "ExponentWindow", "WindowCheck", "DimCheck", "ElementCertificate",
    "SequenceCertificate", "check_fc1", "check_fc2", "check_fc3",
    "check_superficial", "colon_ladder_check", "torsion_meets_window_power",
    "is_weak_fc", "is_fc", "sample_element", "find_sequence",
    "SAMPLE_BOX", "DEFAULT_WINDOW",
]

SAMPLE_BOX = 10  # coefficients for generic elements are drawn from [-10, 10]


@dataclass(frozen=True)
class ExponentWindow:
    """The finite test cube prod [base, base + width] for eventual conditions."""

    base: int = 4
    width: int = 3

    def __post_init__(self):
        if self.base < 0 or self.width < 0:
            raise ValueError("window base and width must be nonnegative")

    def points(self, axes: int, floors=None):
        """Cube points in lexicographic order; floors raise single coordinates."""
        floors = floors or {}
        ranges = [range(max(self.base, floors.get(i, 0)), self.base + self.width + 1)
                  for i in range(axes)]
        return cartesian(*ranges)


@dataclass(frozen=True)
class WindowCheck:
    """Outcome of a windowed equality test: verified, or failed at a witness."""

    verified: bool
    witness: tuple | None = None

    def as_dict(self):
        return {"verified": self.verified,
                "witness": list(self.witness) if self.witness else None}


@dataclass(frozen=True)
class DimCheck:
    """Outcome of the dimension-drop test dim A/(x):I^inf = dim A/0:I^inf - 1."""

    holds: bool
    element_dim: object
    ambient_dim: object

    def as_dict(self):
        return {"holds": self.holds,
                "element_dim": repr(self.element_dim) if self.element_dim is EMPTY else self.element_dim,
                "ambient_dim": repr(self.ambient_dim) if self.ambient_dim is EMPTY else self.ambient_dim}


@dataclass
class ElementCertificate:
    """Windowed verdicts for one element against a tuple of ideals.

    `index` is the 0-based position of the ideal the element belongs to.
    Fields left as None were skipped for the requested mode.
    """

    element: Polynomial
    ideals: tuple
    index: int
    window: ExponentWindow
    fc1: WindowCheck | None = None
    fc2: bool | None = None
    fc3: DimCheck | None = None
    superficial: WindowCheck | None = None

    def passes(self, mode: str) -> bool:
        if mode == "superficial":
            return self.superficial is not None and self.superficial.verified
        ok = (self.fc1 is not None and self.fc1.verified) and bool(self.fc2)
        if mode == "weak-fc":
            return ok
        if mode == "fc":
            return ok and self.fc3 is not None and self.fc3.holds
        raise ValueError(f"unknown mode {mode!r}")

    def as_dict(self):
        return {
            "element": str(self.element),
            "index": self.index,
            "window": {"base": self.window.base, "width": self.window.width},
            "fc1": self.fc1.as_dict() if self.fc1 else None,
            "fc2": self.fc2,
            "fc3": self.fc3.as_dict() if self.fc3 else None,
            "superficial": self.superficial.as_dict() if self.superficial else None,
        }


@dataclass
class SequenceCertificate:
    """A chain of element certificates through successive quotient rings.

    steps[j] holds the presentation the j-th element was verified in; that
    ring is the quotient of the previous step's ring by its element.  When
    `complete` is False the search stopped after len(steps) steps.
    """

    epsilon_indices: tuple
    steps: list = field(default_factory=list)
    complete: bool = False

    @property
    def depth(self) -> int:
        return len(self.steps)

    def elements_in(self, ring: RingPresentation):
        """The sequence elements reinterpreted (lifted) in the given presentation."""
        return [cert.element.in_ring(ring) for _, cert in self.steps]

    def composition(self, tuple_size: int):
        counts = [0] * tuple_size
        for _, cert in self.steps:
            counts[cert.index] += 1
        return tuple(counts)

    def as_dict(self):
        return {
            "epsilon_indices": list(self.epsilon_indices),
            "complete": self.complete,
            "steps": [{"ring": str(ring), "certificate": cert.as_dict()}
                      for ring, cert in self.steps],
        }


def _require_membership(x: Polynomial, ideal: IdealPresentation):
    if not x:
        raise ValueError("the element must be nonzero")
    if not x.is_homogeneous():
        raise ValueError(f"the element must be homogeneous: {x}")
    if not ideal.contains(x):
        raise ValueError(f"element {x} does not lie in the designated ideal")


# Numerator arithmetic on trailing-zero-normalized integer coefficient tuples.
# Since the smaller side of every windowed equality is contained in the
# larger one by construction, equality of the two ideals is equivalent to
# equality of their Hilbert series, i.e. of these numerators; that avoids
# materializing intersections.

def _c_norm(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _c_sub(a, b):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _c_norm(out)


def _c_add(a, b):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _c_norm(out)


def _c_shift(a, d):
    return _c_norm((0,) * d + tuple(a))


def _intersection_numerator(u: IdealPresentation, v: IdealPresentation):
    """D(U ∩ V) = D(U) + D(V) - D(U + V), from the standard exact sequence."""
    return _c_sub(_c_add(quotient_numerator(u), quotient_numerator(v)),
                  quotient_numerator(u + v))


def _products(ideals, cache):
    if cache is not None:
        if tuple(cache.ideals) != tuple(ideals):
            raise ValueError("power-product cache built for a different ideal tuple")
        return cache
    return PowerProducts(ideals)


def check_fc1(x, ideals, index, window: ExponentWindow, products: PowerProducts | None = None):
    """Windowed test of (x) ∩ I1^n1...Ii^ni...Is^ns = x * I1^n1...Ii^(ni-1)...Is^ns.

    The right side is contained in the left unconditionally (x lies in the
    i-th ideal), so per point the two sides are compared through their
    Hilbert-series numerators: D((x) ∩ U) by inclusion-exclusion and
    D(x*V) through the isomorphism x*V = V/(V ∩ 0:x) shifted by deg x.
    """
    ideals = tuple(ideals)
    _require_membership(x, ideals[index])
    products = _products(ideals, products)
    ring = x.ring
    principal = IdealPresentation.principal(x)
    annihilator = IdealPresentation.zero(ring).colon(principal)
    ann_trivial = annihilator.is_zero()
    d = x.degree()
    d_zero = quotient_numerator(IdealPresentation.zero(ring))
    d_principal = quotient_numerator(principal)
    for point in window.points(len(ideals), floors={index: 1}):
        big = products.get(point)
        lowered = point[:index] + (point[index] - 1,) + point[index + 1:]
        small = products.get(lowered)
        lhs = _c_sub(_c_add(quotient_numerator(big), d_principal),
                     quotient_numerator(big + principal))
        torsion_part = d_zero if ann_trivial else quotient_numerator(small.intersect(annihilator))
        rhs = _c_sub(d_zero, _c_shift(_c_sub(torsion_part, quotient_numerator(small)), d))
        if lhs != rhs:
            return WindowCheck(False, point)
    return WindowCheck(True)


def _filter_product(ideals, filter_positions):
    positions = range(len(ideals)) if filter_positions is None else filter_positions
    chosen = [ideals[i] for i in positions]
    if not chosen:
        raise ValueError("the filter product needs at least one ideal")
    out = chosen[0].canonical()
    for ideal in chosen[1:]:
        out = out * ideal
    return out


def _torsion(ring, product: IdealPresentation) -> IdealPresentation:
    """0 : I^inf; raises when I is nilpotent (torsion is everything)."""
    if product.is_zero():
        raise NilpotentProductError("the product of the tuple's ideals is zero")
    torsion, _ = IdealPresentation.zero(ring).saturate(product)
    if torsion.is_unit():
        raise NilpotentProductError("the product of the tuple's ideals is nilpotent")
    return torsion


def check_fc2(x, ideals, filter_positions=None) -> bool:
    """Filter-regularity 0:x ⊆ 0:I^inf, with I the product over the tuple.

    `filter_positions` restricts which tuple entries enter the product (the
    alternative reading used by the theorem checkers); the default is all.
    """
    ideals = tuple(ideals)
    if not x:
        raise ValueError("the element must be nonzero")
    ring = x.ring
    product = _filter_product(ideals, filter_positions)
    torsion = _torsion(ring, product)
    annihilator = IdealPresentation.zero(ring).colon(IdealPresentation.principal(x))
    return torsion.contains(annihilator)


def check_fc3(x, ideals, filter_positions=None) -> DimCheck:
    """Dimension drop dim A/(x):I^inf = dim A/0:I^inf - 1; EMPTY always fails."""
    ideals = tuple(ideals)
    if not x:
        raise ValueError("the element must be nonzero")
    ring = x.ring
    product = _filter_product(ideals, filter_positions)
    ambient_dim = krull_dimension(ring, _torsion(ring, product))
    saturated, _ = IdealPresentation.principal(x).saturate(product)
    element_dim = krull_dimension(ring, saturated)
    holds = element_dim is not EMPTY and element_dim == ambient_dim - 1
    return DimCheck(holds, element_dim, ambient_dim)


def check_superficial(x, ideals, eps_index, window: ExponentWindow,
                      products: PowerProducts | None = None):
    """Windowed superficiality test via the colon equation.

    With the distinguished index written first, the condition is
    (I1^(n1+2) I2^(n2+1)...Is^(ns+1) : x) ∩ I1^n1...Is^ns
    = I1^(n1+1) I2^(n2+1)...Is^(ns+1) on every window point.
    """
    ideals = tuple(ideals)
    _require_membership(x, ideals[eps_index])
    products = _products(ideals, products)
    principal = IdealPresentation.principal(x)
    axes = len(ideals)
    for point in window.points(axes):
        raised = tuple(n + (2 if i == eps_index else 1) for i, n in enumerate(point))
        target = tuple(n + 1 for n in point)
        colon = products.get(raised).colon(principal)
        lhs = _intersection_numerator(colon, products.get(point))
        if lhs != quotient_numerator(products.get(target)):
            return WindowCheck(False, point)
    return WindowCheck(True)


def colon_ladder_check(x, ideals, eps_index, k, window: ExponentWindow,
                       products: PowerProducts | None = None):
    """Derived consequence of superficiality, one rung per k >= 2:

    (I1^(n1+k) I2^(n2+1)... : x) ∩ I1^n1 I2^(n2+1)... = I1^(n1+k-1) I2^(n2+1)...
    """
    if k < 2:
        raise ValueError("the colon ladder starts at k = 2")
    ideals = tuple(ideals)
    _require_membership(x, ideals[eps_index])
    products = _products(ideals, products)
    principal = IdealPresentation.principal(x)
    for point in window.points(len(ideals)):
        raised = tuple(n + (k if i == eps_index else 1) for i, n in enumerate(point))
        middle = tuple(n + (0 if i == eps_index else 1) for i, n in enumerate(point))
        target = tuple(n + (k - 1 if i == eps_index else 1) for i, n in enumerate(point))
        colon = products.get(raised).colon(principal)
        lhs = _intersection_numerator(colon, products.get(middle))
        if lhs != quotient_numerator(products.get(target)):
            return WindowCheck(False, point)
    return WindowCheck(True)


def torsion_meets_window_power(x, ideals, window: ExponentWindow) -> bool:
    """Filter-regular consequence: (0:x) ∩ I^n = 0 at n = base + width."""
    ideals = tuple(ideals)
    ring = x.ring
    annihilator = IdealPresentation.zero(ring).colon(IdealPresentation.principal(x))
    power = _filter_product(ideals, None) ** (window.base + window.width)
    return annihilator.intersect(power).is_zero()


def is_weak_fc(x, ideals, index, window: ExponentWindow,
               filter_positions=None, products=None) -> ElementCertificate:
    """Certificate aggregating the windowed intersection law and filter-regularity."""
    ideals = tuple(ideals)
    cert = ElementCertificate(element=x, ideals=ideals, index=index, window=window)
    cert.fc1 = check_fc1(x, ideals, index, window, products)
    cert.fc2 = check_fc2(x, ideals, filter_positions)
    return cert


def is_fc(x, ideals, index, window: ExponentWindow,
          filter_positions=None, products=None) -> ElementCertificate:
    """Certificate for the full (FC) condition, adding the dimension drop."""
    cert = is_weak_fc(x, ideals, index, window, filter_positions, products)
    cert.fc3 = check_fc3(x, ideals, filter_positions)
    return cert


def sample_element(ideal: IdealPresentation, seed) -> Polynomial:
    """Deterministic generic element: sum of generators times random forms.

    The degree is leveled to the maximum generator degree; coefficients are
    uniform over [-SAMPLE_BOX, SAMPLE_BOX] (uniform field elements over a
    prime field, where smallness of p can defeat genericity).
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    gens = ideal.gens
    if not gens:
        raise ValueError("cannot sample from the zero ideal")
    ring = ideal.ring
    level = max(g.degree() for g in gens)
    total = ring.zero()
    for g in gens:
        cofactor_terms = {}
        for mono in monomials_of_degree(ring.nvars, level - g.degree()):
            if ring.field.char == 0:
                c = rng.randint(-SAMPLE_BOX, SAMPLE_BOX)
            else:
                c = rng.randrange(ring.field.char)
            if c:
                cofactor_terms[mono] = c
        total = total + g * Polynomial(ring, cofactor_terms)
    return total


DEFAULT_WINDOW = ExponentWindow(base=4, width=3)
DEFAULT_TRIES = 50


def find_sequence(ring, ideals, epsilon_indices, mode: str,
                  window: ExponentWindow = DEFAULT_WINDOW,
                  tries: int = DEFAULT_TRIES, seed=0,
                  filter_positions=None) -> SequenceCertificate:
    """Greedy randomized search for an FC / weak-FC / superficial sequence.

    Per step, candidates are sampled from the image of the designated ideal
    in the current quotient; a verified candidate extends the chain and the
    search descends through the quotient by it.  The result is a value even
    on failure: `complete` is False and the steps list shows how deep the
    search got.  Absence of a sequence is evidence, never proof.
    """
    epsilon_indices = tuple(epsilon_indices)
    if list(epsilon_indices) != sorted(epsilon_indices):
        raise ValueError("epsilon indices must be nondecreasing")
    for e in epsilon_indices:
        if not 0 <= e < len(ideals):
            raise ValueError(f"epsilon index {e} out of range")
    if mode not in ("fc", "weak-fc", "superficial"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    certificate = SequenceCertificate(epsilon_indices=epsilon_indices)
    current_ring = ring
    current_ideals = [ideal.canonical() for ideal in ideals]
    for eps in epsilon_indices:
        target = current_ideals[eps]
        if target.is_zero():
            return certificate
        products = PowerProducts(current_ideals)
        found = None
        for _ in range(tries):
            candidate = sample_element(target, rng)
            if not candidate:
                continue
            if IdealPresentation.zero(current_ring).contains(candidate):
                continue  # zero in the current quotient
            try:
                if mode == "superficial":
                    cert = ElementCertificate(element=candidate, ideals=tuple(current_ideals),
                                              index=eps, window=window)
                    cert.superficial = check_superficial(candidate, current_ideals, eps,
                                                         window, products)
                elif mode == "weak-fc":
                    cert = is_weak_fc(candidate, current_ideals, eps, window,
                                      filter_positions, products)
                else:
                    cert = is_fc(candidate, current_ideals, eps, window,
                                 filter_positions, products)
            except NilpotentProductError:
                return certificate  # the hypotheses fail in this quotient: dead end
            if cert.passes(mode):
                found = cert
                break
        if found is None:
            return certificate
        certificate.steps.append((current_ring, found))
        next_ring = quotient_ring(current_ring, IdealPresentation.principal(found.element))
        current_ideals = [map_ideal(ideal, next_ring).canonical() for ideal in current_ideals]
        current_ring = next_ring
    certificate.complete = True
    return certificate
