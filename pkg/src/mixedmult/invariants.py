"""Krull dimension, exact Hilbert series, graded lengths, and Samuel multiplicity.

Lengths are computed by exact Hilbert-series subtraction: finiteness is
detected by exact divisibility of the numerator difference by (1-t)^n,
never by a truncation heuristic.
"""

from __future__ import annotations

from itertools import combinations

from .idealops import IdealPresentation, map_ideal
from .polyring import RingPresentation

__all__ = [
    "EMPTY", "INFINITE", "StabilizationError", "HilbertNumerator",
    "krull_dimension", "hilbert_numerator", "quotient_numerator",
    "length_quotient", "ring_length", "samuel_multiplicity",
]


class _Extremum:
    """Sentinel that compares strictly below (or above) every integer."""

    __slots__ = ("_name", "_below")

    def __init__(self, name, below):
        self._name = name
        self._below = below

    def __lt__(self, other):
        return False if other is self else self._below

    def __gt__(self, other):
        return False if other is self else not self._below

    def __le__(self, other):
        return other is self or self._below

    def __ge__(self, other):
        return other is self or not self._below

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self

    def __hash__(self):
        return hash(self._name)

    def __repr__(self):
        return self._name


EMPTY = _Extremum("EMPTY", below=True)       # dimension of the zero ring
INFINITE = _Extremum("INFINITE", below=False)  # length of an unbounded module


class StabilizationError(RuntimeError):
    """A windowed limit computation failed to stabilize; carries partial data."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


# ---------------------------------------------------------------------------
# Krull dimension via the initial ideal.

def krull_dimension(ring: RingPresentation, ideal: IdealPresentation | None = None):
    """dim of (R/H)/U: the variable count minus a minimum cover of the
    initial ideal's generator supports.  The unit ideal gives EMPTY."""
    if ideal is None:
        ideal = IdealPresentation.zero(ring)
    leads = ideal.gb.leads
    if any(not any(m) for m in leads):
        return EMPTY
    supports = set()
    for m in leads:
        supports.add(frozenset(i for i, e in enumerate(m) if e))
    supports = [s for s in supports if not any(t < s for t in supports)]
    n = ring.nvars
    if not supports:
        return n
    for size in range(1, n + 1):
        for cover in combinations(range(n), size):
            cover = set(cover)
            if all(s & cover for s in supports):
                return n - size
    raise AssertionError("variable set always covers all supports")


# ---------------------------------------------------------------------------
# Hilbert series numerators for monomial ideals.

class HilbertNumerator:
    """Integer polynomial N(t) with HS_{R/M}(t) = N(t) / (1-t)^n."""

    __slots__ = ("coeffs", "nvars")

    def __init__(self, coeffs, nvars):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.nvars = nvars

    def __eq__(self, other):
        if not isinstance(other, HilbertNumerator):
            return NotImplemented
        return self.coeffs == other.coeffs and self.nvars == other.nvars

    __hash__ = None

    def hilbert_function(self, degree: int) -> int:
        """Coefficient of t^degree in N(t)/(1-t)^n, by direct convolution."""
        total = 0
        for d, c in enumerate(self.coeffs):
            if d > degree:
                break
            total += c * _binom(degree - d + self.nvars - 1, self.nvars - 1)
        return total

    def quotient_dimension(self):
        """dim R/M = n minus the multiplicity of the root t = 1; EMPTY for N = 0."""
        if not self.coeffs:
            return EMPTY
        coeffs = list(self.coeffs)
        mult = 0
        while True:
            divided = _exact_div_one_minus_t(coeffs)
            if divided is None:
                return self.nvars - mult
            coeffs = divided
            mult += 1
            if not coeffs:
                raise AssertionError("nonzero numerator cannot vanish under exact division")

    def __repr__(self):
        return f"HilbertNumerator({list(self.coeffs)}, nvars={self.nvars})"


def _binom(n, k):
    if n < 0 or k < 0 or n < k:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def _poly1_sub(a, b):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly1_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly1_shift(a, k):
    return [0] * k + list(a) if a else []


def _exact_div_one_minus_t(coeffs):
    """coeffs / (1 - t) when exact (the prefix sums), else None."""
    run = 0
    out = []
    for c in coeffs:
        run += c
        out.append(run)
    if run != 0:
        return None
    while out and out[-1] == 0:
        out.pop()
    return out


def _minimal_monomials(monos):
    ordered = sorted(set(monos), key=lambda m: (sum(m), m))
    minimal = []
    for m in ordered:
        if not any(all(x <= y for x, y in zip(p, m)) for p in minimal):
            minimal.append(m)
    return tuple(minimal)


_NUMERATOR_MEMO: dict = {}


def _numerator(monos) -> list:
    """Numerator coefficients for the monomial ideal generated by `monos`.

    Standard pivot recursion N(M) = N(M + (x)) + t * N(M : x) with the pivot
    chosen as the variable hitting the most generator supports.
    """
    gens = _minimal_monomials(monos)
    cached = _NUMERATOR_MEMO.get(gens)
    if cached is not None:
        return list(cached)
    if not gens:
        result = [1]
    elif any(sum(m) == 0 for m in gens):
        result = []  # unit ideal: the quotient is the zero ring
    else:
        supports = [frozenset(i for i, e in enumerate(m) if e) for m in gens]
        if all(not (supports[i] & supports[j])
               for i in range(len(gens)) for j in range(i + 1, len(gens))):
            result = [1]
            for m in gens:
                result = _poly1_mul(result, _poly1_sub([1], _poly1_shift([1], sum(m))))
        else:
            counts = {}
            for s in supports:
                for i in s:
                    counts[i] = counts.get(i, 0) + 1
            pivot = min(counts, key=lambda i: (-counts[i], i))
            colon = tuple(m[:pivot] + (m[pivot] - 1,) + m[pivot + 1:] if m[pivot] else m
                          for m in gens)
            unit_vec = tuple(1 if i == pivot else 0 for i in range(len(gens[0])))
            plus = (unit_vec,) + tuple(m for m in gens if not m[pivot])
            result = list(_numerator(plus))
            shifted = _poly1_shift(_numerator(colon), 1)
            out = [0] * max(len(result), len(shifted))
            for i, c in enumerate(result):
                out[i] += c
            for i, c in enumerate(shifted):
                out[i] += c
            while out and out[-1] == 0:
                out.pop()
            result = out
    _NUMERATOR_MEMO[gens] = tuple(result)
    return result


def hilbert_numerator(ideal: IdealPresentation) -> HilbertNumerator:
    """Exact numerator N(t) for a monomial ideal (relations must be monomial too)."""
    monos = []
    for g in list(ideal.gens) + [r for r in ideal.ring.relations]:
        if len(g.terms) != 1:
            raise ValueError(f"not a monomial ideal: generator {g}")
        monos.append(next(iter(g.terms)))
    return HilbertNumerator(_numerator(monos), ideal.ring.nvars)


def quotient_numerator(ideal: IdealPresentation) -> tuple:
    """Numerator coefficients of HS_{A/W}: the initial ideal of (gens + H)
    under grevlex shares the Hilbert function of the ideal itself."""
    return tuple(_numerator(ideal.gb.leads))


# ---------------------------------------------------------------------------
# Lengths.

def length_quotient(big: IdealPresentation, small: IdealPresentation):
    """Length of big/small over A, or INFINITE.

    Computed as the value at t = 1 of (N_small - N_big)/(1-t)^n; the series
    is a polynomial exactly when the module has finite length, which the
    exact divisions certify.  For homogeneous input this graded length
    equals the local length at the irrelevant maximal ideal.
    """
    if big.ring != small.ring:
        raise ValueError("ideals live in different ambient rings")
    if not big.contains(small):
        raise ValueError("length_quotient needs small contained in big")
    diff = _poly1_sub(quotient_numerator(small), quotient_numerator(big))
    for _ in range(big.ring.nvars):
        diff = _exact_div_one_minus_t(diff)
        if diff is None:
            return INFINITE
    return sum(diff)


def ring_length(ring: RingPresentation):
    """Total length of A itself (finite iff dim A <= 0)."""
    return length_quotient(IdealPresentation.unit(ring), IdealPresentation.zero(ring))


# ---------------------------------------------------------------------------
# Hilbert-Samuel multiplicity.

SAMUEL_BASES = (4, 8, 16)
SAMUEL_WIDTH = 8
SAMUEL_NEED = 3


def samuel_multiplicity(J: IdealPresentation, ring_mod: RingPresentation) -> int:
    """e(J, A') for an ideal J that is primary for the maximal ideal of A'.

    Evaluates n -> length(A'/J^(n+1)) on a window, takes the t-th forward
    difference for t = dim A', and requires the last three values to agree;
    the base escalates before the computation is declared inconclusive.
    """
    if ring_mod.is_zero_ring:
        raise ValueError("Samuel multiplicity of the zero ring is undefined")
    if J.ring != ring_mod:
        J = map_ideal(J, ring_mod)
    t = krull_dimension(ring_mod)
    if krull_dimension(ring_mod, J) != 0:
        raise ValueError("J is not primary for the maximal ideal (dim A/J != 0)")
    unit = IdealPresentation.unit(ring_mod)
    if t == 0:
        value = ring_length(ring_mod)
        if value is INFINITE:
            raise AssertionError("zero-dimensional ring with infinite length")
        return value

    powers = [unit]

    def power(k):
        while len(powers) <= k:
            powers.append(powers[-1] * J)
        return powers[k]

    tables = []
    for base in SAMUEL_BASES:
        ns = list(range(base, base + SAMUEL_WIDTH + 1))
        values = []
        for n in ns:
            v = length_quotient(unit, power(n + 1))
            if v is INFINITE:
                raise AssertionError("m-primary colength must be finite")
            values.append(v)
        tables.append({"base": base, "lengths": dict(zip(ns, values))})
        diffs = values
        for _ in range(t):
            diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
        if len(diffs) >= SAMUEL_NEED:
            tail = diffs[-SAMUEL_NEED:]
            if all(d == tail[0] for d in tail) and tail[0] > 0:
                return tail[0]
    raise StabilizationError(
        "Samuel multiplicity did not stabilize on any window", partial=tables)
