"""Bhattacharya-function grids and mixed-multiplicity extraction.

The function (n0, n1, ..., ns) -> length(J^n0 I1^n1...Is^ns / J^(n0+1) I1^n1...)
is eventually a polynomial of total degree q - 1 with q = dim A/0:I^inf;
its top coefficients, normalized by factorials, are the mixed multiplicities.
They are extracted per key by iterated finite differences, certified by
observed constancy, never by interpolation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product as cartesian

from .idealops import IdealPresentation, NilpotentProductError, PowerProducts
from .invariants import EMPTY, INFINITE, StabilizationError, krull_dimension, length_quotient

__all__ = [
    "BhattacharyaGrid", "MixedMultiplicityTable",
    "evaluate_grid", "certify_degree", "mixed_multiplicities",
    "product_ideal", "saturation_dimension",
]

ESCALATION_CAP = 16


@dataclass(frozen=True)
class BhattacharyaGrid:
    """Exact length table over the cube prod [base_i, base_i + width]."""

    base: tuple
    width: int
    table: dict

    @property
    def axes(self) -> int:
        return len(self.base)

    def value(self, point) -> int:
        return self.table[tuple(point)]


@dataclass(frozen=True)
class MixedMultiplicityTable:
    """q and the map (k0..ks) -> e(J^[k0+1], I1^[k1], ..., Is^[ks]).

    Keys run over the compositions of q - 1; `base`/`width` record the
    window the values were extracted from.
    """

    q: int
    entries: dict
    base: tuple
    width: int


def product_ideal(ideals) -> IdealPresentation:
    """The product I = I1 * ... * Is of a nonempty ideal list."""
    ideals = list(ideals)
    if not ideals:
        raise ValueError("need at least one ideal")
    result = ideals[0].canonical()
    for ideal in ideals[1:]:
        result = result * ideal
    return result


def saturation_dimension(ring, ideals):
    """q = dim A/0:I^inf for I the product of the given ideals.

    Raises NilpotentProductError when I is nilpotent (the saturation is the
    unit ideal), since then no Bhattacharya polynomial exists.
    """
    I = product_ideal(ideals)
    if I.is_zero():
        raise NilpotentProductError("the product of the ideals is zero")
    torsion, _ = IdealPresentation.zero(ring).saturate(I)
    if torsion.is_unit():
        raise NilpotentProductError("the product of the ideals is nilpotent")
    return krull_dimension(ring, torsion)


def _as_base_vector(base, axes):
    if isinstance(base, int):
        return (base,) * axes
    base = tuple(base)
    if len(base) != axes:
        raise ValueError(f"base vector must have {axes} coordinates")
    return base


def evaluate_grid(ring, J, ideals, base, width, jobs: int = 1) -> BhattacharyaGrid:
    """Exact lengths of J^n0 I^(n)/J^(n0+1) I^(n) on the window cube.

    J must be primary for the maximal ideal and the product of `ideals`
    non-nilpotent; every entry is then finite by construction.
    """
    ideals = list(ideals)
    if krull_dimension(ring, J) != 0:
        raise ValueError("J is not primary for the maximal ideal (dim A/J != 0)")
    saturation_dimension(ring, ideals)  # proves I non-nilpotent
    axes = len(ideals) + 1
    base = _as_base_vector(base, axes)
    if width < 0:
        raise ValueError("width must be >= 0")
    powers = PowerProducts([J] + ideals)
    points = list(cartesian(*[range(b, b + width + 1) for b in base]))

    def entry(point):
        big = powers.get(point)
        small = powers.get((point[0] + 1,) + point[1:])
        value = length_quotient(big, small)
        if value is INFINITE:
            raise AssertionError(f"grid entry at {point} is infinite; J is not m-primary")
        return value

    table = {}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for point, value in zip(points, pool.map(entry, points)):
                table[point] = value
    else:
        for point in points:
            table[point] = entry(point)
    return BhattacharyaGrid(base=base, width=width, table=table)


def _axis_difference(table, axis):
    out = {}
    for point, value in table.items():
        neighbor = point[:axis] + (point[axis] + 1,) + point[axis + 1:]
        if neighbor in table:
            out[point] = table[neighbor] - value
    return out


def iterated_difference(table, orders):
    """Apply the forward difference orders[i] times along axis i."""
    for axis, k in enumerate(orders):
        for _ in range(k):
            table = _axis_difference(table, axis)
    return table


def compositions(total, parts):
    """All tuples of `parts` nonnegative ints summing to `total`."""
    if total < 0:
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in compositions(total - head, parts - 1):
            yield (head,) + rest


def certify_degree(grid: BhattacharyaGrid, q) -> bool:
    """True iff every total-order-q mixed difference vanishes on the grid and
    some order-(q-1) difference does not."""
    if q is EMPTY or not isinstance(q, int) or q < 0:
        raise ValueError(f"q must be a nonnegative integer, got {q!r}")
    if grid.width < q + 1:
        raise ValueError(f"window width {grid.width} is too small for q = {q} (need >= {q + 1})")
    for alpha in compositions(q, grid.axes):
        diffs = iterated_difference(grid.table, alpha)
        if any(v != 0 for v in diffs.values()):
            return False
    if q == 0:
        return True
    for alpha in compositions(q - 1, grid.axes):
        diffs = iterated_difference(grid.table, alpha)
        if any(v != 0 for v in diffs.values()):
            return True
    return False


def _escalation_bases(start):
    bases = [start]
    while bases[-1] < ESCALATION_CAP:
        bases.append(min(2 * bases[-1], ESCALATION_CAP))
    return bases


def mixed_multiplicities(ring, J, ideals, base: int = 4, jobs: int = 1) -> MixedMultiplicityTable:
    """All mixed multiplicities of (J, I1, ..., Is), extracted exactly.

    q is computed from the product of the I's alone; the window width is
    pinned to q + 2 and the base escalates (doubling, capped) until the
    grid certifies total degree q - 1.  Failure to certify raises
    StabilizationError carrying the last grid.
    """
    ideals = list(ideals)
    q = saturation_dimension(ring, ideals)
    if q is EMPTY:
        raise ValueError("the ambient ring is the zero ring")
    width = q + 2
    last = None
    for b in _escalation_bases(base):
        grid = evaluate_grid(ring, J, ideals, b, width, jobs=jobs)
        last = grid
        if not certify_degree(grid, q):
            continue
        entries = {}
        for alpha in compositions(q - 1, grid.axes):
            diffs = iterated_difference(grid.table, alpha)
            values = set(diffs.values())
            if len(values) != 1:
                break  # constancy must follow certification; escalate
            entries[alpha] = values.pop()
        else:
            return MixedMultiplicityTable(q=q, entries=entries, base=grid.base, width=width)
    raise StabilizationError(
        "Bhattacharya grid did not certify degree q-1 on any window", partial=last)
