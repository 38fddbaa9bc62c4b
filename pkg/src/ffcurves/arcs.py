"""Arcs in PG(2, q): verification, completeness, secant counts and size bounds."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import UsageError
from .gf import FieldCtx, format_element, make_field, parse_element, prime_power
from .zeta import QuadExt

Triple = tuple[int, int, int]


def field_for(q: int) -> FieldCtx:
    pp = prime_power(q)
    if pp is None:
        raise UsageError(f"q={q} is not a prime power")
    return make_field(*pp)


def normalize(ctx: FieldCtx, pt: Sequence[int]) -> Triple:
    """Scale so that the first nonzero coordinate is 1."""
    if len(pt) != 3:
        raise UsageError(f"projective points have three coordinates, got {len(pt)}")
    if any(not 0 <= c < ctx.order for c in pt):
        raise UsageError(f"coordinate outside F_{ctx.order}")
    lead = next((c for c in pt if c), None)
    if lead is None:
        raise UsageError("(0:0:0) is not a projective point")
    inv = ctx.inv(lead)
    return tuple(ctx.mul(c, inv) for c in pt)


def plane_points(ctx: FieldCtx) -> list[Triple]:
    """All q^2+q+1 normalised points, ascending as code triples."""
    Q = ctx.order
    pts = [(1, y, z) for y in range(Q) for z in range(Q)]
    pts += [(0, 1, z) for z in range(Q)]
    pts.append((0, 0, 1))
    return sorted(pts)


def join(ctx: FieldCtx, P: Triple, R: Triple) -> Triple:
    """The line through two distinct points, as normalised dual coordinates."""
    m, s = ctx.mul, ctx.sub
    L = (s(m(P[1], R[2]), m(P[2], R[1])),
         s(m(P[2], R[0]), m(P[0], R[2])),
         s(m(P[0], R[1]), m(P[1], R[0])))
    return normalize(ctx, L)


def on_line(ctx: FieldCtx, L: Triple, P: Triple) -> bool:
    a = ctx.add(ctx.mul(L[0], P[0]), ctx.mul(L[1], P[1]))
    return ctx.add(a, ctx.mul(L[2], P[2])) == 0


@dataclass(frozen=True)
class ArcInstance:
    q: int
    points: tuple[Triple, ...]

    @property
    def k(self) -> int:
        return len(self.points)

    @property
    def ctx(self) -> FieldCtx:
        return field_for(self.q)

    @classmethod
    def build(cls, q: int, points: Iterable[Sequence[int]]) -> "ArcInstance":
        ctx = field_for(q)
        norm = [normalize(ctx, p) for p in points]
        if len(set(norm)) != len(norm):
            dup = next(p for p in norm if norm.count(p) > 1)
            raise UsageError(f"duplicate point {format_point(ctx, dup)}")
        return cls(q, tuple(norm))


def format_point(ctx: FieldCtx, P: Triple) -> str:
    return "(" + ":".join(format_element(ctx, c) for c in P) + ")"


def _as_arc(points, q: int | None) -> ArcInstance:
    if isinstance(points, ArcInstance):
        return points
    if q is None:
        raise UsageError("q is required")
    return ArcInstance.build(q, points)


def collinear_triple(arc: ArcInstance) -> tuple[Triple, Triple, Triple] | None:
    """The lexicographically first (by index) collinear triple, if any."""
    ctx = arc.ctx
    lines: dict[Triple, list[int]] = {}
    for i, j in itertools.combinations(range(arc.k), 2):
        L = join(ctx, arc.points[i], arc.points[j])
        members = lines.setdefault(L, [])
        for idx in (i, j):
            if idx not in members:
                members.append(idx)
    best = None
    for members in lines.values():
        if len(members) >= 3:
            t = tuple(sorted(members)[:3])
            if best is None or t < best:
                best = t
    if best is None:
        return None
    return tuple(arc.points[i] for i in best)


def is_arc(points, q: int | None = None) -> tuple[bool, tuple | None]:
    arc = _as_arc(points, q)
    bad = collinear_triple(arc)
    return bad is None, bad


def _require_arc(arc: ArcInstance):
    ok, bad = is_arc(arc)
    if not ok:
        ctx = arc.ctx
        raise UsageError("not an arc: " + ", ".join(format_point(ctx, P) for P in bad) + " are collinear")


def extending_points(arc: ArcInstance, first_only: bool = False) -> list[Triple]:
    """Points off the arc lying on no secant, in plane order."""
    ctx = arc.ctx
    on_arc = set(arc.points)
    out = []
    for R in plane_points(ctx):
        if R in on_arc:
            continue
        seen = set()
        for P in arc.points:
            L = join(ctx, R, P)
            if L in seen:
                break
            seen.add(L)
        else:
            out.append(R)
            if first_only:
                break
    return out


def is_complete(points, q: int | None = None) -> tuple[bool, Triple | None]:
    arc = _as_arc(points, q)
    _require_arc(arc)
    ext = extending_points(arc, first_only=True)
    return (not ext), (ext[0] if ext else None)


def all_lines(ctx: FieldCtx) -> list[Triple]:
    return plane_points(ctx)


def secant_stats(points, q: int | None = None) -> dict:
    """Per point: number of 1-secants (tangents) and 2-secants through it."""
    arc = _as_arc(points, q)
    _require_arc(arc)
    ctx = arc.ctx
    t = arc.q - arc.k + 2
    tangents = {P: 0 for P in arc.points}
    secants = {P: 0 for P in arc.points}
    total_one = 0
    for L in all_lines(ctx):
        hit = [P for P in arc.points if on_line(ctx, L, P)]
        if len(hit) == 1:
            tangents[hit[0]] += 1
            total_one += 1
        elif len(hit) == 2:
            for P in hit:
                secants[P] += 1
    per_point = [{"point": format_point(ctx, P), "tangents": tangents[P], "secants": secants[P]}
                 for P in arc.points]
    return {"q": arc.q, "k": arc.k, "t": t, "per_point": per_point,
            "total_tangents": total_one,
            "consistent": all(tangents[P] == t for P in arc.points) and total_one == arc.k * t}


def greedy_complete_arc(q: int, start: Iterable[Sequence[int]] = ()) -> ArcInstance:
    """Extend by the first extending point in plane order until complete."""
    arc = ArcInstance.build(q, start)
    _require_arc(arc)
    while True:
        ext = extending_points(arc, first_only=True)
        if not ext:
            return arc
        arc = ArcInstance(q, arc.points + (ext[0],))


# ---------------------------------------------------------------------------
# bounds


def envelope_degree(q: int, k: int) -> int:
    """Degree 2t of the envelope of a complete k-arc, t = q - k + 2."""
    if k < 1 or k > q + 2:
        raise UsageError("arc size out of range")
    return 2 * (q - k + 2)


def _bound(x: QuadExt) -> dict:
    return {"exact": str(x), "floor": x.floor(), "approx": float(x)}


def arc_bounds(q: int, nu4: int | None = None) -> dict:
    pp = prime_power(q)
    if pp is None:
        raise UsageError(f"q={q} is not a prime power")
    p, e = pp
    s = QuadExt.sqrt(q)
    odd = q % 2 == 1
    square = e % 2 == 0
    out: dict = {"q": q, "p": p, "odd": odd, "square": square, "notes": []}
    out["m2q"] = q + 1 if odd else q + 2
    out["threshold"] = _bound(QuadExt(Fraction(3 * q + 5, 4)))
    if odd:
        out["segre"] = _bound(q - s / 4 + Fraction(7, 4))
        out["thas"] = _bound(q - s / 4 + Fraction(25, 16))
        if square:
            out["hirschfeld_korchmaros"] = _bound(q - s / 2 + Fraction(5, 2))
    else:
        out["segre"] = _bound(q - s + 1)
        out["notes"].append("odd-case bounds do not apply for even q")
    out["ratio_44_45"] = _bound(QuadExt(Fraction(44 * q + 40, 45)))
    if p == 3:
        out["char3_ratio_52_53"] = _bound(QuadExt(Fraction(52 * q + 44, 53)))
    if square:
        r = QuadExt(Fraction(p)) * s
        out["sqrt_pq_segre"] = _bound(q - r / 4 + Fraction(7, 4))
        out["sqrt_pq_refined"] = _bound(q - r / 4 + Fraction(29 * p * p, 16) + Fraction(1, 2))
    else:
        r = QuadExt.sqrt(p * q)
        out["sqrt_pq_segre"] = _bound(q - r / 4 + Fraction(7, 4))
        out["sqrt_pq_refined"] = _bound(q - r / 4 + Fraction(29 * p, 16) + Fraction(1, 2))
    if nu4 is not None:
        if nu4 < 1:
            raise UsageError("nu4 must be a positive integer")
        out["nu4_bound"] = _bound(QuadExt(nu4_bound(q, nu4)))
    return out


def nu4_bound(q: int, nu4: int) -> Fraction:
    """Size bound for a complete arc from the invariant nu4: the smaller of two
    rational expressions."""
    first = q - Fraction(nu4, 4) + Fraction(7, 4)
    second = Fraction((28 + 4 * nu4) * q + 32 + 2 * nu4, 29 + 4 * nu4)
    return min(first, second)


def parse_points(ctx: FieldCtx, text: str) -> list[Triple]:
    """One triple per line; coordinates separated by ':', ',' or whitespace,
    optionally in parentheses.  Blank lines and '#' comments are skipped."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        line = line.strip("()[] ")
        for sep in (":", ","):
            line = line.replace(sep, " ")
        parts = line.split()
        if len(parts) != 3:
            raise UsageError(f"points file line {lineno}: expected three coordinates")
        try:
            out.append(tuple(parse_element(ctx, s) for s in parts))
        except UsageError as exc:
            raise UsageError(f"points file line {lineno}: {exc}") from exc
    return out
