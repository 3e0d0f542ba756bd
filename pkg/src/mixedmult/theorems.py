"""Executable checkers for the claims the engine is built to test.

Claim tags used in reports and by the CLI:

  prop6   -- a superficial element is a weak-(FC)-element for the tuple.
  thm3    -- a mixed multiplicity e(J^[k0+1], I1^[k1], ..., Is^[ks]) is
             nonzero iff an (FC)-sequence with matching composition exists,
             and then equals the Samuel multiplicity e(J, A/(x1..xt):I^inf).
  thm5    -- for Q generated by a superficial sequence, e != 0 iff
             dim A/Q:I^inf = k0 + 1, and then e = e(J, A/Q:I^inf).
  remark7 -- dim A/Q:I^inf <= q - m, with equality iff the sequence is (FC).
  remark2 -- multiplication by a filter-regular element preserves the
             Bhattacharya layer lengths.

Where the definition of I as a product over a tuple containing J is
ambiguous (include J or not), checkers evaluate both readings and report
them; divergent readings yield an inconclusive verdict, never a silent
choice.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bhattacharya import mixed_multiplicities, product_ideal, saturation_dimension
from .idealops import (
    IdealPresentation, NilpotentProductError, PowerProducts, map_ideal,
    maximal_ideal, quotient_ring,
)
from .invariants import (
    EMPTY, INFINITE, StabilizationError, krull_dimension, length_quotient,
    samuel_multiplicity,
)
from .sequences import (
    DEFAULT_TRIES, DEFAULT_WINDOW, ElementCertificate, ExponentWindow,
    check_fc2, check_superficial, find_sequence, is_fc, is_weak_fc,
    sample_element,
)

__all__ = [
    "TheoremReport", "PreconditionError",
    "CONFIRMED", "COUNTEREXAMPLE", "INCONCLUSIVE",
    "check_prop6", "check_thm3", "check_thm5", "check_remark7", "check_remark2",
]

CONFIRMED = "confirmed"
COUNTEREXAMPLE = "counterexample"
INCONCLUSIVE = "inconclusive"

READING_WITH_J = "I-includes-J"
READING_WITHOUT_J = "I-excludes-J"


class PreconditionError(ValueError):
    """A checker was invoked on an instance violating its hypotheses."""


@dataclass
class TheoremReport:
    """Per-instance verdict with every compared quantity attached.

    A confirmed verdict means every compared quantity agreed exactly under
    at least one documented reading; counterexample reports carry full
    reproduction data (instance, seed, window).
    """

    theorem: str
    verdict: str
    reason: str | None
    instance: dict
    computed: dict
    certificates: list = field(default_factory=list)

    def as_dict(self):
        return {
            "theorem": self.theorem,
            "verdict": self.verdict,
            "reason": self.reason,
            "instance": self.instance,
            "computed": _plain(self.computed),
            "certificates": [_plain(c) for c in self.certificates],
        }


def _plain(value):
    """Recursively convert report payloads to plain JSON-friendly data."""
    if value is EMPTY or value is INFINITE:
        return repr(value)
    if isinstance(value, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): _plain(v)
                for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "as_dict"):
        return _plain(value.as_dict())
    if isinstance(value, IdealPresentation):
        return [str(g) for g in value.gens]
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)


def _echo(ring, window, seed, tries, **named):
    out = {
        "ring": str(ring),
        "window": {"base": window.base, "width": window.width},
        "seed": seed,
        "tries": tries,
    }
    for key, value in named.items():
        if isinstance(value, IdealPresentation):
            out[key] = [str(g) for g in value.gens]
        elif isinstance(value, (list, tuple)) and value and isinstance(value[0], IdealPresentation):
            out[key] = [[str(g) for g in ideal.gens] for ideal in value]
        elif isinstance(value, (list, tuple)):
            out[key] = list(value)
        elif isinstance(value, (int, bool)) or value is None:
            out[key] = value
        else:
            out[key] = str(value)
    return out


def _dim_value(d):
    return repr(d) if d is EMPTY else d


# ---------------------------------------------------------------------------
# prop6: superficial implies weak-(FC).

def check_prop6(ring, ideals, eps_index, window: ExponentWindow = DEFAULT_WINDOW,
                tries: int = DEFAULT_TRIES, seed=0, element=None) -> TheoremReport:
    """Find (or accept) a verified superficial element and test weak-(FC) on it.

    A candidate that fails the superficial window test is rejected upstream
    and can never produce a counterexample verdict.
    """
    ideals = tuple(ideals)
    instance = _echo(ring, window, seed, tries, ideals=ideals,
                     eps_index=eps_index, element=element)
    certificates = []
    rng = random.Random(seed)

    chosen = None
    superficial_check = None
    if element is not None:
        superficial_check = check_superficial(element, ideals, eps_index, window)
        if superficial_check.verified:
            chosen = element
    else:
        for _ in range(tries):
            candidate = sample_element(ideals[eps_index], rng)
            if not candidate or IdealPresentation.zero(ring).contains(candidate):
                continue
            superficial_check = check_superficial(candidate, ideals, eps_index, window)
            if superficial_check.verified:
                chosen = candidate
                break
    if chosen is None:
        return TheoremReport(
            theorem="prop6", verdict=INCONCLUSIVE,
            reason="no verified superficial element found within the try budget",
            instance=instance,
            computed={"last_superficial_check": superficial_check},
            certificates=certificates)

    weak = is_weak_fc(chosen, ideals, eps_index, window)
    weak.superficial = superficial_check
    certificates.append(weak)
    ok = weak.passes("weak-fc")
    return TheoremReport(
        theorem="prop6",
        verdict=CONFIRMED if ok else COUNTEREXAMPLE,
        reason=None if ok else "a verified superficial element failed weak-(FC)",
        instance=instance,
        computed={"element": str(chosen),
                  "fc1": weak.fc1, "fc2": weak.fc2,
                  "superficial": superficial_check},
        certificates=certificates)


# ---------------------------------------------------------------------------
# thm3: mixed multiplicities vs (FC)-sequences.

def _epsilon_from_composition(k_tail):
    """k_tail = (k1..ks) -> tuple positions in (J, I1..Is): k1 ones, k2 twos, ..."""
    eps = []
    for i, k in enumerate(k_tail, start=1):
        eps.extend([i] * k)
    return tuple(eps)


def _samuel_comparisons(ring, J, ideals, elements, e_value):
    """e(J, A/(x1..xt):I^inf) under both saturation readings of I.

    Returns (comparisons, matched) where comparisons maps a reading label to
    the saturation, its dimension, and the Samuel value or failure note.
    """
    Q = IdealPresentation(ring, elements).canonical()
    I_without = product_ideal(ideals)
    I_with = (J * I_without).canonical()
    comparisons = {}
    matched = False
    seen = []
    for label, prod in ((READING_WITHOUT_J, I_without), (READING_WITH_J, I_with)):
        saturated, steps = Q.saturate(prod)
        duplicate = next((lbl for lbl, sat in seen if sat == saturated), None)
        if duplicate is not None:
            comparisons[label] = {"same_saturation_as": duplicate}
            continue
        seen.append((label, saturated))
        entry = {
            "saturation": saturated,
            "saturation_steps": steps,
            "quotient_dim": _dim_value(krull_dimension(ring, saturated)),
        }
        if saturated.is_unit():
            entry["samuel"] = None
            entry["note"] = "the saturation is the unit ideal; the quotient is the zero ring"
        else:
            abar = quotient_ring(ring, saturated)
            try:
                value = samuel_multiplicity(J, abar)
                entry["samuel"] = value
                matched = matched or value == e_value
            except (ValueError, StabilizationError) as exc:
                entry["samuel"] = None
                entry["note"] = str(exc)
        comparisons[label] = entry
    return comparisons, matched


def check_thm3(ring, J, ideals, k_vector, window: ExponentWindow = DEFAULT_WINDOW,
               tries: int = DEFAULT_TRIES, seed=0, base: int = 4) -> TheoremReport:
    """Check e != 0 <-> an (FC)-sequence exists, and the Samuel equality.

    The (FC)-sequence is sought with respect to the tuple (J, I1..Is) under
    both readings of I (the tuple product with or without J); the verdict
    is inconclusive when the readings disagree.
    """
    ideals = tuple(ideals)
    k_vector = tuple(k_vector)
    s = len(ideals)
    if len(k_vector) != s + 1:
        raise ValueError(f"k-vector needs {s + 1} entries, got {len(k_vector)}")
    instance = _echo(ring, window, seed, tries, J=J, ideals=ideals, k=k_vector)

    try:
        table = mixed_multiplicities(ring, J, ideals, base=base)
    except StabilizationError as exc:
        return TheoremReport(theorem="thm3", verdict=INCONCLUSIVE,
                             reason=f"mixed-multiplicity extraction failed: {exc}",
                             instance=instance, computed={}, certificates=[])
    q = table.q
    if sum(k_vector) != q - 1:
        raise ValueError(f"k-vector must sum to q - 1 = {q - 1}, got {sum(k_vector)}")
    e_value = table.entries[k_vector]
    eps = _epsilon_from_composition(k_vector[1:])
    tuple_with_j = (J,) + ideals

    computed = {"q": q, "e": e_value, "mixed_table": table.entries}
    certificates = []
    readings = {}
    for label, positions in ((READING_WITH_J, None),
                             (READING_WITHOUT_J, tuple(range(1, s + 1)))):
        seq = find_sequence(ring, tuple_with_j, eps, mode="fc", window=window,
                            tries=tries, seed=seed, filter_positions=positions)
        entry = {"found": seq.complete, "depth": seq.depth}
        certificates.append(seq)
        if seq.complete:
            elements = seq.elements_in(ring)
            entry["elements"] = [str(x) for x in elements]
            comparisons, matched = _samuel_comparisons(ring, J, ideals, elements, e_value)
            entry["samuel"] = comparisons
            entry["samuel_matches_e"] = matched
        readings[label] = entry
    computed["readings"] = readings

    found_labels = [lbl for lbl, r in readings.items() if r["found"]]
    if e_value != 0:
        if not found_labels:
            verdict, reason = INCONCLUSIVE, (
                "e != 0 but no (FC)-sequence was found within the try budget; "
                "the existence search is one-sided")
        elif any(readings[lbl]["samuel_matches_e"] for lbl in found_labels):
            verdict, reason = CONFIRMED, None
        else:
            verdict, reason = COUNTEREXAMPLE, (
                "e != 0 and an (FC)-sequence exists, but e differs from the "
                "Samuel multiplicity under every reading")
    else:
        if not found_labels:
            verdict, reason = INCONCLUSIVE, (
                "negative evidence only: e = 0 and no (FC)-sequence was found "
                "within the try budget; randomized search cannot certify absence")
        elif len(found_labels) == len(readings):
            verdict, reason = COUNTEREXAMPLE, "e = 0 yet an (FC)-sequence exists under every reading"
        else:
            verdict, reason = INCONCLUSIVE, (
                f"the readings diverge: an (FC)-sequence exists under "
                f"{found_labels[0]} but not under the other reading")
    return TheoremReport(theorem="thm3", verdict=verdict, reason=reason,
                         instance=instance, computed=computed, certificates=certificates)


# ---------------------------------------------------------------------------
# thm5: superficial sequences and the dimension criterion.

def check_thm5(ring, J, ideals, k_vector, window: ExponentWindow = DEFAULT_WINDOW,
               tries: int = DEFAULT_TRIES, seed=0, base: int = 4) -> TheoremReport:
    """Check e != 0 <-> dim A/Q:I^inf = k0 + 1 and the Samuel equality.

    Q is generated by a superficial sequence for (J, I1..Is) with k_i
    elements from I_i; the documented reading saturates by I = I1...Is, and
    the variant saturation by J*I is reported whenever it differs.
    """
    ideals = tuple(ideals)
    k_vector = tuple(k_vector)
    s = len(ideals)
    if len(k_vector) != s + 1:
        raise ValueError(f"k-vector needs {s + 1} entries, got {len(k_vector)}")
    instance = _echo(ring, window, seed, tries, J=J, ideals=ideals, k=k_vector)

    try:
        table = mixed_multiplicities(ring, J, ideals, base=base)
    except StabilizationError as exc:
        return TheoremReport(theorem="thm5", verdict=INCONCLUSIVE,
                             reason=f"mixed-multiplicity extraction failed: {exc}",
                             instance=instance, computed={}, certificates=[])
    q = table.q
    if sum(k_vector) != q - 1:
        raise ValueError(f"k-vector must sum to q - 1 = {q - 1}, got {sum(k_vector)}")
    k0 = k_vector[0]
    e_value = table.entries[k_vector]
    eps = _epsilon_from_composition(k_vector[1:])
    tuple_with_j = (J,) + ideals

    seq = find_sequence(ring, tuple_with_j, eps, mode="superficial",
                        window=window, tries=tries, seed=seed)
    certificates = [seq]
    computed = {"q": q, "e": e_value, "mixed_table": table.entries,
                "target_dim": k0 + 1}
    if not seq.complete:
        return TheoremReport(theorem="thm5", verdict=INCONCLUSIVE,
                             reason=f"no superficial sequence found (reached depth {seq.depth})",
                             instance=instance, computed=computed, certificates=certificates)

    elements = seq.elements_in(ring)
    Q = IdealPresentation(ring, elements).canonical()
    computed["Q"] = Q
    I_without = product_ideal(ideals)
    saturated, steps = Q.saturate(I_without)
    dim = krull_dimension(ring, saturated)
    computed["saturation"] = saturated
    computed["saturation_steps"] = steps
    computed["dim"] = _dim_value(dim)

    alt_sat, _ = Q.saturate((J * I_without).canonical())
    if alt_sat != saturated:
        computed["saturation_includes_J"] = alt_sat
        computed["dim_includes_J"] = _dim_value(krull_dimension(ring, alt_sat))

    nonzero = e_value != 0
    dim_ok = dim == k0 + 1
    if nonzero != dim_ok:
        return TheoremReport(
            theorem="thm5", verdict=COUNTEREXAMPLE,
            reason=f"biconditional fails: e = {e_value} while dim A/Q:I^inf = {_dim_value(dim)} "
                   f"and k0 + 1 = {k0 + 1}",
            instance=instance, computed=computed, certificates=certificates)
    if not nonzero:
        return TheoremReport(theorem="thm5", verdict=CONFIRMED,
                             reason="both sides vanish: e = 0 and dim A/Q:I^inf != k0 + 1",
                             instance=instance, computed=computed, certificates=certificates)

    abar = quotient_ring(ring, saturated)
    try:
        samuel = samuel_multiplicity(J, abar)
    except (ValueError, StabilizationError) as exc:
        return TheoremReport(theorem="thm5", verdict=INCONCLUSIVE,
                             reason=f"Samuel multiplicity on A/Q:I^inf failed: {exc}",
                             instance=instance, computed=computed, certificates=certificates)
    computed["samuel"] = samuel
    if samuel == e_value:
        return TheoremReport(theorem="thm5", verdict=CONFIRMED, reason=None,
                             instance=instance, computed=computed, certificates=certificates)
    return TheoremReport(
        theorem="thm5", verdict=COUNTEREXAMPLE,
        reason=f"e = {e_value} but e(J, A/Q:I^inf) = {samuel}",
        instance=instance, computed=computed, certificates=certificates)


# ---------------------------------------------------------------------------
# remark7: the dimension bound.

def check_remark7(ring, J, ideals, eps_vector, window: ExponentWindow = DEFAULT_WINDOW,
                  tries: int = DEFAULT_TRIES, seed=0,
                  verify_fc_equality: bool = False) -> TheoremReport:
    """Check dim A/Q:I^inf <= q - m for Q from a superficial sequence.

    eps_vector lists 1-based positions among the I's (k1 ones, etc.).  With
    `verify_fc_equality` the equality case is additionally compared against
    every step being a full (FC)-element under the literal tuple reading.
    """
    ideals = tuple(ideals)
    eps_vector = tuple(eps_vector)
    for e in eps_vector:
        if not 1 <= e <= len(ideals):
            raise ValueError(f"epsilon index {e} out of range 1..{len(ideals)}")
    m = len(eps_vector)
    instance = _echo(ring, window, seed, tries, J=J, ideals=ideals, eps=eps_vector)
    if krull_dimension(ring, J) != 0:
        raise PreconditionError("J is not primary for the maximal ideal")
    q = saturation_dimension(ring, ideals)
    tuple_with_j = (J,) + ideals

    seq = find_sequence(ring, tuple_with_j, eps_vector, mode="superficial",
                        window=window, tries=tries, seed=seed)
    computed = {"q": q, "m": m, "bound": q - m}
    certificates = [seq]
    if not seq.complete:
        return TheoremReport(theorem="remark7", verdict=INCONCLUSIVE,
                             reason=f"no superficial sequence found (reached depth {seq.depth})",
                             instance=instance, computed=computed, certificates=certificates)
    elements = seq.elements_in(ring)
    Q = IdealPresentation(ring, elements).canonical()
    saturated, _ = Q.saturate(product_ideal(ideals))
    dim = krull_dimension(ring, saturated)
    computed["Q"] = Q
    computed["saturation"] = saturated
    computed["dim"] = _dim_value(dim)
    if not dim <= q - m:
        return TheoremReport(theorem="remark7", verdict=COUNTEREXAMPLE,
                             reason=f"dim A/Q:I^inf = {_dim_value(dim)} exceeds q - m = {q - m}",
                             instance=instance, computed=computed, certificates=certificates)
    if verify_fc_equality:
        equality = dim == q - m
        fc_checks = []
        for step_ring, cert in seq.steps:
            fc_cert = is_fc(cert.element, cert.ideals, cert.index, window)
            fc_checks.append(fc_cert)
            certificates.append(fc_cert)
        all_fc = all(c.passes("fc") for c in fc_checks)
        computed["equality_holds"] = equality
        computed["sequence_is_fc"] = all_fc
        if equality != all_fc:
            return TheoremReport(
                theorem="remark7", verdict=COUNTEREXAMPLE,
                reason="the equality criterion and the (FC)-sequence property disagree",
                instance=instance, computed=computed, certificates=certificates)
    return TheoremReport(theorem="remark7", verdict=CONFIRMED, reason=None,
                         instance=instance, computed=computed, certificates=certificates)


# ---------------------------------------------------------------------------
# remark2: length invariance under a filter-regular multiplier.

def check_remark2(ring, J, ideals, element, index,
                  window: ExponentWindow = DEFAULT_WINDOW) -> TheoremReport:
    """Compare the layer lengths of x*F^n/x*F^(n+1) against F^n/F^(n+1).

    F runs over J and the maximal ideal as the distinguished factor; the
    element must be filter-regular for the tuple product (precondition).
    """
    ideals = tuple(ideals)
    instance = _echo(ring, window, seed=None, tries=None, J=J, ideals=ideals,
                     element=element, index=index)
    if not check_fc2(element, ideals):
        raise PreconditionError(
            "the element is not filter-regular for the tuple product (0:x not in 0:I^inf)")
    if krull_dimension(ring, J) != 0:
        raise PreconditionError("J is not primary for the maximal ideal")

    mismatches = []
    checked = 0
    axes = len(ideals) + 1
    for label, front in (("J", J), ("m", maximal_ideal(ring))):
        products = PowerProducts([front] + list(ideals))
        for point in window.points(axes, floors={index + 1: 1}):
            vec = list(point)
            vec[index + 1] -= 1
            vec = tuple(vec)
            big = products.get(vec)
            small = products.get((vec[0] + 1,) + vec[1:])
            plain = length_quotient(big, small)
            scaled = length_quotient(big.times(element), small.times(element))
            checked += 1
            if plain != scaled:
                mismatches.append({"front": label, "point": list(point),
                                   "plain": plain, "scaled": scaled})
    computed = {"points_checked": checked, "mismatches": mismatches}
    if mismatches:
        return TheoremReport(theorem="remark2", verdict=COUNTEREXAMPLE,
                             reason="multiplication by the element changed a layer length",
                             instance=instance, computed=computed, certificates=[])
    return TheoremReport(theorem="remark2", verdict=CONFIRMED, reason=None,
                         instance=instance, computed=computed, certificates=[])
