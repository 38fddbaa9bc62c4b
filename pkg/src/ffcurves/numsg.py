"""Numerical semigroups: gaps, genus, weight, symmetry and the Buchweitz test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Sequence

from .errors import InconsistencyError, UsageError


def _minimal_generators(members: Sequence[bool]) -> tuple[int, ...]:
    """Generators read off a membership bitmap that extends past the conductor
    by at least the multiplicity."""
    gens = []
    for n in range(1, len(members)):
        if not members[n]:
            continue
        if any(members[n - a] for a in gens if n - a >= 0):
            continue
        gens.append(n)
    return tuple(gens)


@dataclass(frozen=True)
class NumericalSemigroup:
    generators: tuple[int, ...]
    gaps: tuple[int, ...]

    @property
    def genus(self) -> int:
        return len(self.gaps)

    @property
    def frobenius_number(self) -> int:
        """Largest gap (-1 for N_0)."""
        return self.gaps[-1] if self.gaps else -1

    @property
    def conductor(self) -> int:
        return self.frobenius_number + 1

    @property
    def multiplicity(self) -> int:
        return self.generators[0] if self.generators else 1

    def __contains__(self, n: int) -> bool:
        return n >= 0 and n not in set(self.gaps)

    def members(self, bound: int) -> list[bool]:
        gs = set(self.gaps)
        return [n not in gs for n in range(bound + 1)]

    def non_gaps(self, count: int) -> list[int]:
        """n_1 < n_2 < ...: the first ``count`` positive elements."""
        out, n, gs = [], 1, set(self.gaps)
        while len(out) < count:
            if n not in gs:
                out.append(n)
            n += 1
        return out

    def n(self, i: int) -> int:
        return self.non_gaps(i)[-1] if i >= 1 else 0

    def __repr__(self):
        return f"<{','.join(map(str, self.generators))}>"


def from_generators(gens: Iterable[int]) -> NumericalSemigroup:
    gens = sorted({int(a) for a in gens if int(a) != 0})
    if not gens:
        raise UsageError("need at least one nonzero generator")
    if any(a < 0 for a in gens):
        raise UsageError("generators must be positive")
    if reduce(math.gcd, gens) != 1:
        raise UsageError(f"gcd of {gens} is not 1: complement is infinite")
    a = gens[0]
    # residues mod a are reached at the Apery minima, which bound the conductor
    bound = a * max(gens) + a
    members = [False] * (bound + 1)
    members[0] = True
    for n in range(1, bound + 1):
        members[n] = any(n >= b and members[n - b] for b in gens)
    gaps = tuple(n for n in range(bound + 1) if not members[n])
    return NumericalSemigroup(_minimal_generators(members), gaps)


def from_gaps(gapset: Iterable[int]) -> NumericalSemigroup:
    gaps = tuple(sorted({int(x) for x in gapset}))
    if any(x < 1 for x in gaps):
        raise UsageError("gaps must be positive integers")
    f = gaps[-1] if gaps else -1
    bound = 2 * f + 2
    gs = set(gaps)
    members = [n not in gs for n in range(bound + 1)]
    for a in range(1, f + 1):
        if not members[a]:
            continue
        for b in range(a, f + 1 - a + 1):
            if members[b] and a + b <= f and not members[a + b]:
                raise UsageError(f"not a semigroup: {a} + {b} = {a + b} is listed as a gap")
    return NumericalSemigroup(_minimal_generators(members), gaps)


def weight(H: NumericalSemigroup) -> int:
    g = H.genus
    w1 = (3 * g * g + g) // 2 - sum(H.non_gaps(g))
    w2 = sum(l - i for i, l in enumerate(H.gaps, 1))
    if w1 != w2:
        raise InconsistencyError(f"weight mismatch {w1} != {w2}")
    return w1


def sumset(H: NumericalSemigroup, n: int) -> set[int]:
    """nG(H): sums of n gaps."""
    acc = {0}
    for _ in range(n):
        acc = {a + b for a in acc for b in H.gaps}
    return acc


def buchweitz_check(H: NumericalSemigroup, n: int = 2) -> dict:
    if n < 2:
        raise UsageError("Buchweitz test needs n >= 2")
    card = len(sumset(H, n))
    bound = (2 * n - 1) * (H.genus - 1)
    return {"n": n, "card": card, "bound": bound, "pass": card <= bound}


def kato_bounds(H: NumericalSemigroup) -> dict:
    """Refined weight bounds for non-hyperelliptic semigroups; informational."""
    g = H.genus
    return {"non_hyperelliptic_max": (g * g - 3 * g + 4) // 2 if g >= 2 else 0,
            "note": "informational only, not asserted"}


def classify_symmetry(H: NumericalSemigroup) -> dict:
    g = H.genus
    f = H.frobenius_number
    if g > 0 and f == 2 * g - 1:
        kind = "symmetric"
    elif g > 0 and f == 2 * g - 2:
        kind = "quasi-symmetric"
    else:
        kind = "neither"
    hyper = 2 in H and g > 0
    w = weight(H)
    nis = H.non_gaps(max(g, 1))
    if g and not 0 <= w <= g * (g - 1) // 2:
        raise InconsistencyError(f"weight {w} outside [0, g(g-1)/2]")
    if g and (w == g * (g - 1) // 2) != hyper:
        raise InconsistencyError("weight extremality does not match hyperellipticity")
    if g and nis[0] >= 3:
        for i in range(1, g - 1):
            if nis[i - 1] < 2 * i + 1:
                raise InconsistencyError(f"n_{i} = {nis[i - 1]} < {2 * i + 1}")
        if g >= 2 and w > (g * g - 3 * g + 4) // 2:
            raise InconsistencyError(f"weight {w} exceeds (g^2-3g+4)/2")
    return {"class": kind, "hyperelliptic": hyper, "genus": g, "frobenius_number": f,
            "weight": w, "kato": kato_bounds(H)}


def parse_int_list(text: str) -> list[int]:
    """'1..12,19,21' -> [1, ..., 12, 19, 21]."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..")
                lo, hi = int(lo), int(hi)
                if lo > hi:
                    raise UsageError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError as exc:
            raise UsageError(f"bad integer list entry {part!r}") from exc
    return out


def iter_semigroups(genus: int) -> Iterator[NumericalSemigroup]:
    """All numerical semigroups of the given genus, by removing generators
    larger than the Frobenius number (each semigroup arises exactly once)."""
    def rec(H: NumericalSemigroup, depth: int):
        if depth == genus:
            yield H
            return
        f = H.frobenius_number
        for a in H.generators:
            if a > f:
                yield from rec(_remove(H, a), depth + 1)

    yield from rec(NumericalSemigroup((1,), ()), 0)


def _remove(H: NumericalSemigroup, a: int) -> NumericalSemigroup:
    gaps = tuple(sorted(H.gaps + (a,)))
    gs = set(gaps)
    bound = 2 * a + 2
    members = [n not in gs for n in range(bound + 1)]
    return NumericalSemigroup(_minimal_generators(members), gaps)
