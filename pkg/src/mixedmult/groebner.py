"""Buchberger's algorithm, normal forms, reduced bases, and elimination.

All computations happen in the free polynomial ring; quotient rings are
handled by appending the presentation's relations to every generator list.
"""

from __future__ import annotations

import heapq

from .polyring import (
    GREVLEX, MonomialOrder, Polynomial, RingPresentation,
    elimination_order, mono_div, mono_divides, mono_lcm, mono_mul,
)

__all__ = ["GroebnerBasis", "buchberger", "normal_form", "eliminate", "reduce_poly", "divide_by"]


def spoly(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    """S-polynomial of two nonzero polynomials."""
    mf, cf = f.leading(order)
    mg, cg = g.leading(order)
    lcm = mono_lcm(mf, mg)
    field = f.ring.field
    a = _mono_times(f, mono_div(lcm, mf), field.div(1, cf))
    b = _mono_times(g, mono_div(lcm, mg), field.div(1, cg))
    return a - b


def _mono_times(p: Polynomial, mono, coeff):
    reduce = p.ring.field.reduce
    out = {}
    for m, c in p.terms.items():
        v = reduce(c * coeff)
        if v:
            out[mono_mul(m, mono)] = v
    return Polynomial._raw(p.ring, out)


def reduce_poly(p: Polynomial, basis, order: MonomialOrder, leads=None) -> Polynomial:
    """Full normal form of p modulo a list of nonzero polynomials.

    No term of the result is divisible by any basis leading monomial; the
    reducer chosen at each step is the first match in list order, so the
    result is deterministic (and unique when basis is a Groebner basis).
    The working terms sit in a lazy-deletion heap keyed by the reversed
    order, so the current maximum costs O(log T) instead of a scan.
    """
    if leads is None:
        leads = [b.leading(order)[0] for b in basis]
    field = p.ring.field
    neg_key = order.neg_key
    reducers = list(zip(basis, leads))
    work = dict(p.terms)
    heap = [(neg_key(m), m) for m in work]
    heapq.heapify(heap)
    remainder = {}
    while heap:
        m = heapq.heappop(heap)[1]
        if m not in work:
            continue
        c = work.pop(m)
        for g, mg in reducers:
            if mono_divides(mg, m):
                shift = mono_div(m, mg)
                scale = field.div(c, g.terms[mg])
                for mt, ct in g.terms.items():
                    if mt == mg:
                        continue
                    mm = mono_mul(mt, shift)
                    old = work.get(mm)
                    v = field.reduce((old or 0) - scale * ct)
                    if v:
                        work[mm] = v
                        if old is None:
                            heapq.heappush(heap, (neg_key(mm), mm))
                    else:
                        work.pop(mm, None)
                break
        else:
            remainder[m] = c
    return Polynomial._raw(p.ring, remainder)


def divide_by(p: Polynomial, f: Polynomial, order: MonomialOrder = GREVLEX):
    """Division with quotient by a single polynomial: p = q*f + r."""
    mf, cf = f.leading(order)
    field = p.ring.field
    neg_key = order.neg_key
    work = dict(p.terms)
    heap = [(neg_key(m), m) for m in work]
    heapq.heapify(heap)
    quotient = {}
    remainder = {}
    while heap:
        m = heapq.heappop(heap)[1]
        if m not in work:
            continue
        c = work.pop(m)
        if mono_divides(mf, m):
            shift = mono_div(m, mf)
            scale = field.div(c, cf)
            quotient[shift] = field.reduce(quotient.get(shift, 0) + scale)
            for mt, ct in f.terms.items():
                if mt == mf:
                    continue
                mm = mono_mul(mt, shift)
                old = work.get(mm)
                v = field.reduce((old or 0) - scale * ct)
                if v:
                    work[mm] = v
                    if old is None:
                        heapq.heappush(heap, (neg_key(mm), mm))
                else:
                    work.pop(mm, None)
        else:
            remainder[m] = c
    q = Polynomial._raw(p.ring, {m: c for m, c in quotient.items() if c})
    r = Polynomial._raw(p.ring, remainder)
    return q, r


class GroebnerBasis:
    """A reduced Groebner basis of (generators) + (ring relations).

    Basis elements are monic, pairwise tail-reduced, and sorted by
    decreasing leading monomial; the basis is the unique reduced one for the
    order, so equal ideals yield identical objects.
    """

    __slots__ = ("ring", "order", "polys", "source", "_leads")

    def __init__(self, ring, order, polys, source):
        self.ring = ring
        self.order = order
        self.polys = tuple(polys)
        self.source = tuple(source)
        self._leads = tuple(p.leading(order)[0] for p in self.polys)

    def reduce(self, p: Polynomial) -> Polynomial:
        if p.ring != self.ring:
            raise ValueError("polynomial and basis have different ambient rings")
        return reduce_poly(p, self.polys, self.order, self._leads)

    def contains(self, p: Polynomial) -> bool:
        return not self.reduce(p)

    @property
    def leads(self):
        return self._leads

    def __eq__(self, other):
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return (self.ring == other.ring and self.order == other.order
                and self.polys == other.polys)

    __hash__ = None

    def __repr__(self):
        return f"GroebnerBasis([{', '.join(str(p) for p in self.polys)}])"


def _signature(p: Polynomial):
    return tuple(sorted(p.terms.items()))


def _pair_update(G, lmG, P, f, order):
    """Gebauer-Moeller update: add f, pruning pairs by the coprime and chain criteria."""
    lmf = f.leading(order)[0]
    m = len(G)
    kept = set()
    for (i, j) in P:
        lcm_ij = mono_lcm(lmG[i], lmG[j])
        if (not mono_divides(lmf, lcm_ij)
                or mono_lcm(lmG[i], lmf) == lcm_ij
                or mono_lcm(lmG[j], lmf) == lcm_ij):
            kept.add((i, j))
    by_lcm = {}
    for i in range(m):
        by_lcm.setdefault(mono_lcm(lmG[i], lmf), []).append(i)
    minimal = []
    for lcm in sorted(by_lcm, key=order.key):
        if all(not mono_divides(prev, lcm) for prev in minimal):
            minimal.append(lcm)
    for lcm in minimal:
        if not any(mono_lcm(lmG[i], lmf) == mono_mul(lmG[i], lmf) for i in by_lcm[lcm]):
            kept.add((min(by_lcm[lcm]), m))
    G.append(f)
    lmG.append(lmf)
    return kept


def _interreduce(G, order):
    """Minimalize and tail-reduce a Groebner basis; output monic, sorted."""
    key = order.key
    G = sorted((g for g in G if g), key=lambda g: key(g.leading(order)[0]))
    minimal = []
    minimal_leads = []
    for g in G:
        lm = g.leading(order)[0]
        if not any(mono_divides(h, lm) for h in minimal_leads):
            minimal.append(g)
            minimal_leads.append(lm)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        leads = minimal_leads[:i] + minimal_leads[i + 1:]
        r = reduce_poly(g, others, order, leads) if others else g
        if r:
            reduced.append(r.monic(order))
    reduced.sort(key=lambda g: key(g.leading(order)[0]), reverse=True)
    return reduced


def buchberger(gens, order: MonomialOrder = GREVLEX, ring: RingPresentation | None = None,
               reduced: bool = True) -> GroebnerBasis:
    """Reduced Groebner basis of (gens) + (ring relations), deterministically.

    Pair selection is the normal strategy (smallest lcm degree, then order
    key); pair pruning applies Buchberger's coprime and chain criteria.
    `reduced=False` skips the final interreduction and returns a raw
    (still correct) basis; elimination uses it to avoid tail-reducing the
    block that is about to be discarded.
    """
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("need a ring when no generators are given")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators come from different ambient rings")
    source = tuple(gens)
    work = [g for g in gens if g] + [r.in_ring(ring) for r in ring.relations]
    work = [g.monic(order) for g in work]
    seen = set()
    unique = []
    for g in work:
        sig = _signature(g)
        if sig not in seen:
            seen.add(sig)
            unique.append(g)
    unique.sort(key=lambda g: (order.key(g.leading(order)[0]), len(g.terms), _signature(g)))

    if not unique:
        return GroebnerBasis(ring, order, (), source)

    if all(len(g.terms) == 1 for g in unique):
        # Monomial ideal: every S-polynomial vanishes identically.
        monos = sorted({next(iter(g.terms)) for g in unique}, key=order.key)
        minimal = []
        for m in monos:
            if not any(mono_divides(p, m) for p in minimal):
                minimal.append(m)
        polys = [Polynomial(ring, {m: 1}) for m in
                 sorted(minimal, key=order.key, reverse=True)]
        return GroebnerBasis(ring, order, polys, source)

    G: list[Polynomial] = []
    lmG: list[tuple] = []
    P: set = set()
    for g in unique:
        P = _pair_update(G, lmG, P, g, order)

    def pair_key(pair):
        i, j = pair
        lcm = mono_lcm(lmG[i], lmG[j])
        return (sum(lcm), order.key(lcm), i, j)

    while P:
        pair = min(P, key=pair_key)
        P.remove(pair)
        i, j = pair
        if len(G[i].terms) == 1 and len(G[j].terms) == 1:
            continue  # the S-polynomial of two monomials vanishes identically
        s = spoly(G[i], G[j], order)
        r = reduce_poly(s, G, order, lmG)
        if r:
            P = _pair_update(G, lmG, P, r.monic(order), order)

    return GroebnerBasis(ring, order, _interreduce(G, order) if reduced else G, source)


def normal_form(p: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Remainder of p modulo the basis; zero iff p lies in the ideal."""
    return gb.reduce(p)


def eliminate(gens, drop: int, ring: RingPresentation | None = None):
    """Generators of (gens + relations) intersected with k[variables after the first `drop`]."""
    if ring is None:
        if not gens:
            raise ValueError("need a ring when no generators are given")
        ring = gens[0].ring
    if drop < 0 or drop > ring.nvars:
        raise ValueError(f"cannot drop {drop} of {ring.nvars} variables")
    if drop == 0:
        return list(buchberger(gens, GREVLEX, ring).polys)
    gb = buchberger(gens, elimination_order(drop), ring, reduced=False)
    out = []
    for g in gb.polys:
        lead = g.leading(gb.order)[0]
        if any(lead[:drop]):
            continue
        assert all(not any(m[:drop]) for m in g.terms)
        out.append(g)
    return out
