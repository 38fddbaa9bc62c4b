"""Plane curve models over F_q: point counting, smoothness scans, local expansions."""

from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .errors import BudgetExceeded, InconsistencyError, UsageError
from .gf import FieldCtx, embedding, extension, format_element, root_codes
from .series import TruncSeries

COUNT_LIMIT = 1 << 16
SAMPLE_LIMIT = 1 << 16

Poly = dict  # exponent tuple -> coefficient code

AFFINE = "affine"
PROJECTIVE = "projective"
_CHART_AXES = {"Z": (0, 1, 2), "Y": (0, 2, 1), "X": (1, 2, 0)}


# ---------------------------------------------------------------------------
# polynomial helpers


def poly_clean(poly: Poly) -> Poly:
    return {e: c for e, c in poly.items() if c}


def poly_degree(poly: Poly) -> int:
    return max((sum(e) for e in poly), default=0)


def poly_embed(poly: Poly, src: FieldCtx, tgt: FieldCtx) -> Poly:
    if src == tgt:
        return dict(poly)
    emb = embedding(src, tgt)
    return {e: emb(c) for e, c in poly.items()}


def poly_partial(poly: Poly, var: int, ctx: FieldCtx) -> Poly:
    out: Poly = {}
    for e, c in poly.items():
        if e[var]:
            c2 = ctx.scale_int(c, e[var])
            if c2:
                ne = list(e)
                ne[var] -= 1
                out[tuple(ne)] = ctx.add(out.get(tuple(ne), 0), c2)
    return poly_clean(out)


def poly_eval(poly: Poly, ctx: FieldCtx, point: Sequence[int]) -> int:
    acc = 0
    for e, c in poly.items():
        term = c
        for x, k in zip(point, e):
            if k:
                term = ctx.mul(term, ctx.pow(x, k))
        acc = ctx.add(acc, term)
    return acc


def poly_eval_series(poly: Poly, ctx: FieldCtx, args: Sequence[TruncSeries]) -> TruncSeries:
    N = min(s.precision for s in args)
    args = [s.truncate(N) for s in args]
    pows: list[list[TruncSeries]] = []
    for v, s in enumerate(args):
        top = max((e[v] for e in poly), default=0)
        row = [TruncSeries.constant(ctx, 1, N)]
        for _ in range(top):
            row.append(row[-1] * s)
        pows.append(row)
    acc = TruncSeries.constant(ctx, 0, N)
    for e, c in poly.items():
        term = None
        for v, k in enumerate(e):
            if k:
                term = pows[v][k] if term is None else term * pows[v][k]
        if term is None:
            term = TruncSeries.constant(ctx, 1, N)
        acc = acc + term.scale(c)
    return acc


def format_poly(poly: Poly, ctx: FieldCtx, names: str = "xyz") -> str:
    terms = []
    for e in sorted(poly, reverse=True):
        mono = "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k)
        coef = format_element(ctx, poly[e])
        if not mono:
            terms.append(coef)
        elif coef == "1":
            terms.append(mono)
        else:
            terms.append(f"({coef})*{mono}")
    return " + ".join(terms) or "0"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Point:
    """A point of a model over the extension of degree ``m`` of the base field.

    ``coords`` are affine ``(x, y)`` for affine models and normalised
    homogeneous ``(X, Y, Z)`` (last nonzero coordinate 1) for projective ones.
    """

    ctx: FieldCtx
    m: int
    coords: tuple[int, ...]

    def label(self) -> str:
        inner = ", ".join(format_element(self.ctx, c) for c in self.coords)
        sep = ":" if len(self.coords) == 3 else ","
        return f"({inner.replace(', ', sep)})@{self.ctx!r}"

    def coords_in(self, degree: int) -> bool:
        """All coordinates lie in the subfield F_{p^degree} of ctx."""
        return all(self.ctx.in_subfield(c, degree) for c in self.coords)


@dataclass
class PlaneCurveModel:
    base: FieldCtx
    kind: str
    poly: Poly
    genus: int | None = None
    infinity_branches: int | None = None
    name: str = ""
    check_smooth: bool = True
    smoothness_depth: int = 2
    degree: int = field(init=False)

    def __post_init__(self):
        self.poly = poly_clean(dict(self.poly))
        if not self.poly:
            raise UsageError("defining polynomial is zero")
        if any(not 0 <= c < self.base.order for c in self.poly.values()):
            raise UsageError("coefficient code outside the base field")
        self.degree = poly_degree(self.poly)
        if self.kind == PROJECTIVE:
            if any(len(e) != 3 for e in self.poly):
                raise UsageError("projective models need three exponents per monomial")
            if any(sum(e) != self.degree for e in self.poly):
                raise UsageError("projective polynomial is not homogeneous")
            if self.infinity_branches is not None:
                raise UsageError("infinity_branches: not allowed for projective models")
            smooth_genus = (self.degree - 1) * (self.degree - 2) // 2
            if self.genus is None:
                self.genus = smooth_genus
            elif self.genus != smooth_genus:
                raise UsageError(f"genus: smooth plane curve of degree {self.degree} has genus {smooth_genus}")
            if self.check_smooth:
                bad = smoothness_scan(self, self.smoothness_depth)
                if bad:
                    raise UsageError(f"model is singular at {bad[0].label()}")
        elif self.kind == AFFINE:
            if any(len(e) != 2 for e in self.poly):
                raise UsageError("affine models need two exponents per monomial")
            if self.genus is None:
                raise UsageError("genus: required for affine models")
            if self.infinity_branches is None:
                raise UsageError("infinity_branches: required for affine models")
            if self.infinity_branches < 0:
                raise UsageError("infinity_branches: must be non-negative")
        else:
            raise UsageError(f"kind: unknown model kind {self.kind!r}")
        if self.genus < 0:
            raise UsageError("genus: must be non-negative")

    @property
    def q(self) -> int:
        return self.base.order

    def __hash__(self):
        return id(self)

    def ext(self, m: int) -> FieldCtx:
        return extension(self.base, m)

    def poly_over(self, ctx: FieldCtx) -> Poly:
        return _poly_over_cached(self, ctx)

    def chart_poly(self, ctx: FieldCtx, chart: str = "Z") -> Poly:
        """Bivariate polynomial of the affine chart over ctx."""
        P = self.poly_over(ctx)
        if self.kind == AFFINE:
            return P
        return _chart_cached(self, ctx, chart)


@functools.lru_cache(maxsize=256)
def _poly_over_cached(model: PlaneCurveModel, ctx: FieldCtx) -> Poly:
    return poly_embed(model.poly, model.base, ctx)


@functools.lru_cache(maxsize=256)
def _chart_cached(model: PlaneCurveModel, ctx: FieldCtx, chart: str) -> Poly:
    a, b, _ = _CHART_AXES[chart]
    out: Poly = {}
    for e, c in model.poly_over(ctx).items():
        key = (e[a], e[b])
        out[key] = ctx.add(out.get(key, 0), c)
    return poly_clean(out)


def _fiber_coeffs(poly2: Poly, ctx: FieldCtx, x0: int) -> list[int]:
    """Coefficients (in y) of poly2(x0, y)."""
    deg_y = max(e[1] for e in poly2)
    coeffs = [0] * (deg_y + 1)
    for (i, j), c in poly2.items():
        coeffs[j] = ctx.add(coeffs[j], ctx.mul(c, ctx.pow(x0, i)))
    return coeffs


def _fiber_roots(poly2: Poly, ctx: FieldCtx, x0: int) -> list[int]:
    coeffs = _fiber_coeffs(poly2, ctx, x0)
    if not any(coeffs):
        return list(range(ctx.order))
    return root_codes(ctx, coeffs)


def _line_points(ctx: FieldCtx, chart: str) -> list[tuple[int, int, int]]:
    """Projective points on the line {chart coordinate = 0}, normalised."""
    a, b, c = _CHART_AXES[chart]
    pts = []
    for x in range(ctx.order):
        v = [0, 0, 0]
        v[a], v[b] = x, 1
        pts.append(tuple(v))
    v = [0, 0, 0]
    v[a] = 1
    pts.append(tuple(v))
    return pts


def normalize_projective(ctx: FieldCtx, pt: Sequence[int]) -> tuple[int, ...]:
    """Scale so the last nonzero coordinate is 1."""
    for c in reversed(pt):
        if c:
            inv = ctx.inv(c)
            return tuple(ctx.mul(x, inv) for x in pt)
    raise UsageError("the zero vector is not a projective point")


def count_points(model: PlaneCurveModel, i: int = 1, *, chart: str = "Z",
                 limit: int = COUNT_LIMIT, threads: int = 1) -> int:
    """Number of points over F_{q^i}, by enumerating x and scanning y."""
    if i < 1:
        raise UsageError("extension degree must be >= 1")
    if model.q**i > limit:
        raise BudgetExceeded(f"counting over F_{model.q}^{i} exceeds the budget of {limit} elements")
    ctx = model.ext(i)
    poly2 = model.chart_poly(ctx, chart)
    Q = ctx.order

    def chunk(lo: int, hi: int) -> int:
        return sum(len(_fiber_roots(poly2, ctx, x)) for x in range(lo, hi))

    if threads > 1:
        step = (Q + threads - 1) // threads
        with ThreadPoolExecutor(threads) as pool:
            affine = sum(pool.map(lambda lo: chunk(lo, min(Q, lo + step)), range(0, Q, step)))
    else:
        affine = chunk(0, Q)
    if model.kind == AFFINE:
        return affine + model.infinity_branches
    F = model.poly_over(ctx)
    at_inf = sum(1 for pt in _line_points(ctx, chart) if poly_eval(F, ctx, pt) == 0)
    return affine + at_inf


def _is_singular(model: PlaneCurveModel, ctx: FieldCtx, pt: Sequence[int]) -> bool:
    return all(poly_eval(d, ctx, pt) == 0 for d in _partials(model, ctx))


@functools.lru_cache(maxsize=256)
def _partials(model: PlaneCurveModel, ctx: FieldCtx) -> tuple[Poly, ...]:
    F = model.poly_over(ctx)
    n = 3 if model.kind == PROJECTIVE else 2
    return tuple(poly_partial(F, v, ctx) for v in range(n))


def iter_points(model: PlaneCurveModel, m: int) -> Iterator[Point]:
    """All points over F_{q^m} in scan order (affine chart by x then y, then
    the line at infinity for projective models)."""
    ctx = model.ext(m)
    poly2 = model.chart_poly(ctx, "Z")
    for x in range(ctx.order):
        for y in _fiber_roots(poly2, ctx, x):
            yield Point(ctx, m, (x, y) if model.kind == AFFINE else (x, y, 1))
    if model.kind == PROJECTIVE:
        F = model.poly_over(ctx)
        for pt in _line_points(ctx, "Z"):
            if poly_eval(F, ctx, pt) == 0:
                yield Point(ctx, m, normalize_projective(ctx, pt))


def smoothness_scan(model: PlaneCurveModel, depth: int = 2, limit: int = COUNT_LIMIT) -> list[Point]:
    """Singular points over F_{q^m} for m <= depth."""
    if model.kind != PROJECTIVE:
        raise UsageError("smoothness_scan needs a projective model")
    found: list[Point] = []
    for m in range(1, depth + 1):
        if model.q**m > limit:
            raise BudgetExceeded(f"smoothness scan over F_{model.q}^{m} exceeds the budget")
        for pt in iter_points(model, m):
            if any(m % d == 0 and d < m and pt.coords_in(model.base.k * d) for d in range(1, m)):
                continue
            if _is_singular(model, pt.ctx, pt.coords):
                found.append(pt)
    return found


def sample_points(model: PlaneCurveModel, count: int, schedule: Sequence[int] | None = None,
                  exclude: Callable[[Point], bool] | None = None,
                  limit: int = SAMPLE_LIMIT) -> list[Point]:
    """The first ``count`` smooth points in scan order, extension degree ascending.

    A point already defined over an earlier field of the schedule is not
    repeated.
    """
    if count <= 0:
        return []
    out = []
    for pt in _iter_samples(model, schedule, exclude, limit):
        out.append(pt)
        if len(out) == count:
            return out
    raise BudgetExceeded(f"only {len(out)} sample points found within the budget")


def _iter_samples(model, schedule, exclude, limit) -> Iterator[Point]:
    if schedule is None:
        schedule = []
        m = 1
        while model.q**m <= limit:
            schedule.append(m)
            m += 1
    done: list[int] = []
    for m in schedule:
        if model.q**m > limit:
            break
        smaller = [d for d in done if m % d == 0 and d < m]
        for pt in iter_points(model, m):
            if any(pt.coords_in(model.base.k * d) for d in smaller):
                continue
            if _is_singular(model, pt.ctx, pt.coords):
                continue
            if exclude is not None and exclude(pt):
                continue
            yield pt
        done.append(m)


def is_base_rational(model: PlaneCurveModel, pt: Point) -> bool:
    return pt.coords_in(model.base.k)


# ---------------------------------------------------------------------------
# local expansions


@dataclass(frozen=True)
class LocalFrame:
    """Expansions of the chart coordinates (u, v) at a smooth point.

    For affine models (u, v) = (x, y); for projective ones the chart says
    which homogeneous coordinate was set to 1.
    """

    point: Point
    chart: str
    parameter_choice: str
    u: TruncSeries
    v: TruncSeries

    @property
    def precision(self) -> int:
        return min(self.u.precision, self.v.precision)

    def homogeneous(self) -> tuple[TruncSeries, TruncSeries, TruncSeries]:
        one = TruncSeries.constant(self.u.ctx, 1, self.precision)
        out = [None, None, None]
        a, b, c = _CHART_AXES[self.chart]
        out[a], out[b], out[c] = self.u, self.v, one
        return tuple(out)


def _chart_of(model: PlaneCurveModel, pt: Point) -> tuple[str, tuple[int, int]]:
    if model.kind == AFFINE:
        return "Z", pt.coords
    X, Y, Z = pt.coords
    ctx = pt.ctx
    for chart in ("Z", "Y", "X"):
        a, b, c = _CHART_AXES[chart]
        if pt.coords[c]:
            inv = ctx.inv(pt.coords[c])
            return chart, (ctx.mul(pt.coords[a], inv), ctx.mul(pt.coords[b], inv))
    raise UsageError("zero projective point")


def expand_at(model: PlaneCurveModel, pt: Point, N: int, frame: str | None = None) -> LocalFrame:
    """Newton-lift the curve at a smooth point to precision N.

    ``frame`` forces the local parameter: ``"x"`` means t = u - u0 (requires
    dG/dv != 0), ``"y"`` means t = v - v0 (requires dG/du != 0).
    """
    ctx = pt.ctx
    chart, (u0, v0) = _chart_of(model, pt)
    G = model.chart_poly(ctx, chart)
    if poly_eval(G, ctx, (u0, v0)) != 0:
        raise UsageError(f"{pt.label()} is not on the curve")
    Gu = poly_partial(G, 0, ctx)
    Gv = poly_partial(G, 1, ctx)
    gu = poly_eval(Gu, ctx, (u0, v0))
    gv = poly_eval(Gv, ctx, (u0, v0))
    if frame is None:
        frame = "x" if gv else "y"
    if frame == "x":
        if not gv:
            raise UsageError(f"{pt.label()}: x - x0 is not a local parameter there")
        u = TruncSeries.param(ctx, N, u0)
        v = _newton_lift(G, Gv, ctx, u, v0, dependent=1)
        choice = "x-x0"
    elif frame == "y":
        if not gu:
            raise UsageError(f"{pt.label()}: y - y0 is not a local parameter there")
        v = TruncSeries.param(ctx, N, v0)
        u = _newton_lift(G, Gu, ctx, v, u0, dependent=0)
        choice = "y-y0"
    else:
        raise UsageError(f"unknown frame {frame!r}")
    if not poly_eval_series(G, ctx, (u, v)).is_zero():
        raise InconsistencyError("nonzero residual after Newton lifting")
    return LocalFrame(pt, chart, choice, u, v)


def _newton_lift(G: Poly, Gs: Poly, ctx: FieldCtx, known: TruncSeries, s0: int, dependent: int) -> TruncSeries:
    N = known.precision
    s = TruncSeries.constant(ctx, s0, 1)
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        s = TruncSeries.from_codes(ctx, s.coeffs, prec)
        kn = known.truncate(prec)
        args = (kn, s) if dependent == 1 else (s, kn)
        val = poly_eval_series(G, ctx, args)
        der = poly_eval_series(Gs, ctx, args)
        s = s - val * der.reciprocal()
    return s
