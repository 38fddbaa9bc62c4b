"""Order sequences, Frobenius orders and the Stöhr-Voloch bound.

A linear series is given by an explicit basis of functions on a plane model.
At a smooth point the basis is expanded in a local parameter; the (D, P)-orders
are the valuations occurring in the span of those expansions.  The generic
orders are read off at sampled points: the order sequence is the
componentwise minimum over all points, and the number of points where the
minimum is not attained is bounded by deg R (resp. deg S), which gives the
certified sampling mode.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curve import (AFFINE, PROJECTIVE, LocalFrame, PlaneCurveModel, Point, Poly,
                    _iter_samples, expand_at, is_base_rational, iter_points,
                    poly_eval_series)
from .errors import BudgetExceeded, InconsistencyError, PrecisionExhausted, UsageError
from .gf import FieldCtx, embedding
from .series import TruncSeries, binom_det_mod_p, binom_mod, order_tuple

STATISTICAL = "statistical"
CERTIFIED = "certified"
MAX_PRECISION = 4096


@dataclass
class LinearSeriesSpec:
    """A base-point-free g^r_d given by r+1 functions.

    ``basis`` entries are ``(numerator, denominator)`` polynomials; the
    denominator may be None.  On projective models with kind "lines" or
    "conics" they are ternary forms, otherwise bivariate polynomials in the
    affine coordinates x = X/Z, y = Y/Z.
    """

    model: PlaneCurveModel
    basis_kind: str
    basis: list[tuple[Poly, Poly | None]]
    d: int

    @property
    def r(self) -> int:
        return len(self.basis) - 1

    @property
    def uses_forms(self) -> bool:
        return self.model.kind == PROJECTIVE and self.basis_kind in ("lines", "conics")

    @classmethod
    def lines(cls, model: PlaneCurveModel) -> "LinearSeriesSpec":
        if model.kind == PROJECTIVE:
            basis = [{(1, 0, 0): 1}, {(0, 1, 0): 1}, {(0, 0, 1): 1}]
        else:
            basis = [{(0, 0): 1}, {(1, 0): 1}, {(0, 1): 1}]
        return cls(model, "lines", [(b, None) for b in basis], model.degree)

    @classmethod
    def conics(cls, model: PlaneCurveModel) -> "LinearSeriesSpec":
        if model.kind == PROJECTIVE:
            exps = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
        else:
            exps = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        return cls(model, "conics", [({e: 1}, None) for e in exps], 2 * model.degree)

    @classmethod
    def custom(cls, model: PlaneCurveModel, basis: Sequence, degree: int) -> "LinearSeriesSpec":
        norm = []
        for item in basis:
            num, den = item if isinstance(item, tuple) else (item, None)
            if any(len(e) != 2 for e in num) or (den and any(len(e) != 2 for e in den)):
                raise UsageError("custom basis functions are bivariate in x, y")
            norm.append((dict(num), dict(den) if den else None))
        if len(norm) < 2:
            raise UsageError("a linear series needs at least two basis functions")
        if degree < 1:
            raise UsageError("series degree must be positive")
        return cls(model, "custom", norm, degree)


@dataclass
class OrderReport:
    epsilon: tuple[int, ...]
    nu: tuple[int, ...]
    removed_index: int
    deg_R: int
    deg_S: int
    sv_bound: int
    samples: dict[str, tuple[int, ...]]
    frobenius_samples: dict[str, tuple[int, ...]]
    rational_orders: dict[str, tuple[int, ...]]
    certification_mode: str
    r: int
    d: int
    g: int
    q: int
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        hist = Counter(self.samples.values())
        fhist = Counter(self.frobenius_samples.values())
        return {
            "epsilon": list(self.epsilon),
            "nu": list(self.nu),
            "removed_index": self.removed_index,
            "deg_R": self.deg_R,
            "deg_S": self.deg_S,
            "sv_bound": self.sv_bound,
            "r": self.r, "d": self.d, "g": self.g, "q": self.q,
            "certification_mode": self.certification_mode,
            "sample_count": len(self.samples),
            "sample_histogram": {",".join(map(str, k)): v for k, v in sorted(hist.items())},
            "frobenius_sample_count": len(self.frobenius_samples),
            "frobenius_histogram": {",".join(map(str, k)): v for k, v in sorted(fhist.items())},
            "rational_orders": {k: list(v) for k, v in self.rational_orders.items()},
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# expansions of the basis at a point


def _basis_series(ls: LinearSeriesSpec, frame: LocalFrame) -> list[TruncSeries]:
    """Regularised basis expansions: every entry has non-negative valuation and
    at least one is a unit."""
    ctx = frame.u.ctx
    base = ls.model.base
    emb = embedding(base, ctx)
    shifted: list[tuple[int, TruncSeries]] = []
    if ls.uses_forms:
        args = frame.homogeneous()
    else:
        if frame.chart != "Z":
            raise UsageError("custom bases are evaluated in the chart Z = 1 only")
        args = (frame.u, frame.v)
    for num, den in ls.basis:
        n = poly_eval_series({e: emb(c) for e, c in num.items()}, ctx, args)
        vn = n.valuation()
        if vn >= n.precision:
            raise PrecisionExhausted("basis function vanishes to the working precision")
        n = n.shift(-vn)
        if den:
            dser = poly_eval_series({e: emb(c) for e, c in den.items()}, ctx, args)
            vd = dser.valuation()
            if vd >= dser.precision:
                raise PrecisionExhausted("denominator vanishes to the working precision")
            dser = dser.shift(-vd)
            M = min(n.precision, dser.precision)
            n = n.truncate(M) * dser.truncate(M).reciprocal()
            vn -= vd
        shifted.append((vn, n))
    low = min(v for v, _ in shifted)
    out = [s.shift(v - low) for v, s in shifted]
    M = min(s.precision for s in out)
    return [s.truncate(M) for s in out]


def _pivot_columns(ctx: FieldCtx, rows: list[list[int]], ncols: int, want: int) -> list[int]:
    rows = [list(r) for r in rows]
    pivots = []
    for col in range(ncols):
        idx = next((i for i, r in enumerate(rows) if r[col]), None)
        if idx is None:
            continue
        piv = rows.pop(idx)
        pivots.append(col)
        if len(pivots) == want:
            break
        inv = ctx.inv(piv[col])
        for r in rows:
            if r[col]:
                f = ctx.neg(ctx.mul(r[col], inv))
                for k in range(col, ncols):
                    if piv[k]:
                        r[k] = ctx.add(r[k], ctx.mul(f, piv[k]))
    return pivots


def _expansions(ls: LinearSeriesSpec, pt: Point, N: int | None, frame: str | None):
    need = ls.d + 1
    N = N or ls.d + 2
    attempts = 0
    while True:
        fr = expand_at(ls.model, pt, N, frame=frame)
        gs = _basis_series(ls, fr)
        if gs[0].precision >= need or attempts >= 3:
            return gs
        attempts += 1
        N = min(2 * N, MAX_PRECISION)


def point_orders(ls: LinearSeriesSpec, pt: Point, N: int | None = None,
                 frame: str | None = None) -> tuple[int, ...]:
    """The (D, P)-orders j_0 < ... < j_r at a smooth point."""
    gs = _expansions(ls, pt, N, frame)
    ctx = gs[0].ctx
    P = gs[0].precision
    piv = _pivot_columns(ctx, [list(g.coeffs) for g in gs], P, ls.r + 1)
    if len(piv) < ls.r + 1:
        if P > ls.d:
            raise InconsistencyError(
                f"only {len(piv)} orders below precision {P} > d={ls.d}: basis dependent or d too small")
        raise PrecisionExhausted("precision insufficient for the (D,P)-orders")
    if piv[-1] > ls.d:
        raise InconsistencyError(f"order {piv[-1]} exceeds the series degree {ls.d}")
    return tuple(piv)


def point_frobenius_orders(ls: LinearSeriesSpec, pt: Point, N: int | None = None,
                           frame: str | None = None) -> tuple[int, ...]:
    """Greedy orders for the matrix with first row g(P)^q and then the
    coefficient rows of t^s; generic value equals the Frobenius orders."""
    gs = _expansions(ls, pt, N, frame)
    ctx = gs[0].ctx
    q = ls.model.q
    P = gs[0].precision
    first = [ctx.pow(g.coeffs[0], q) for g in gs]
    echelon: list[tuple[int, list[int]]] = []

    def reduce(vec: list[int]) -> list[int]:
        vec = list(vec)
        for pc, row in echelon:
            if vec[pc]:
                f = ctx.neg(ctx.div(vec[pc], row[pc]))
                vec = [ctx.add(a, ctx.mul(f, b)) for a, b in zip(vec, row)]
        return vec

    def push(vec: list[int]) -> bool:
        v = reduce(vec)
        pc = next((i for i, c in enumerate(v) if c), None)
        if pc is None:
            return False
        echelon.append((pc, v))
        return True

    if not push(first):
        raise InconsistencyError("basis vanishes at the point")
    nu = []
    for s in range(P):
        if push([g.coeffs[s] for g in gs]):
            nu.append(s)
            if len(nu) == ls.r:
                return tuple(nu)
    raise PrecisionExhausted("precision insufficient for the Frobenius orders")


# ---------------------------------------------------------------------------
# generic orders by sampling


def ramification_sample_bound(r: int, d: int, g: int) -> int:
    """An upper bound for deg R that does not need the order sequence."""
    return (r + 1) * d * max(2 * g - 2, 0) + (r + 1) * d


def frobenius_sample_bound(r: int, d: int, g: int, q: int) -> int:
    """An upper bound for deg S that does not need the Frobenius orders."""
    return r * d * max(2 * g - 2, 0) + (q + r) * d


def _sample_filter(ls: LinearSeriesSpec, skip_rational: bool):
    model = ls.model

    def exclude(pt: Point) -> bool:
        if skip_rational and is_base_rational(model, pt):
            return True
        if model.kind == PROJECTIVE and not ls.uses_forms and pt.coords[2] == 0:
            return True
        return False

    return exclude


def _scan(ls: LinearSeriesSpec, mode: str, frobenius: bool, *, hits: int = 3,
          max_samples: int = 20000, frame: str | None = None):
    model = ls.model
    if mode == CERTIFIED:
        if frobenius:
            target = frobenius_sample_bound(ls.r, ls.d, model.genus, model.q) + 1
        else:
            target = ramification_sample_bound(ls.r, ls.d, model.genus) + 1
        skip_rational = frobenius
    elif mode == STATISTICAL:
        target = None
        skip_rational = True
    else:
        raise UsageError(f"unknown mode {mode!r}")
    fn = point_frobenius_orders if frobenius else point_orders
    samples: dict[str, tuple[int, ...]] = {}
    counts: Counter = Counter()
    best = None
    for pt in _iter_samples(model, None, _sample_filter(ls, skip_rational), _sample_limit(model)):
        j = fn(ls, pt, frame=frame)
        samples[pt.label()] = j
        counts[j] += 1
        if best is None or j < best:
            best = j
        if target is not None and len(samples) >= target:
            return best, samples
        if target is None and counts[best] >= hits:
            return best, samples
        if len(samples) >= max_samples:
            break
    raise BudgetExceeded(
        f"{mode} sampling stopped after {len(samples)} points"
        + (f" (needed {target})" if target else ""))


def _sample_limit(model: PlaneCurveModel) -> int:
    from .curve import SAMPLE_LIMIT
    return SAMPLE_LIMIT


def p_adic_violations(eps: Sequence[int], p: int, below: int | None = None) -> list[tuple[int, int]]:
    """Pairs (e, mu) with C(e, mu) != 0 mod p but mu missing from eps.
    With ``below`` only entries e < below are checked."""
    s = set(eps)
    out = []
    for e in eps:
        if below is not None and e >= below:
            continue
        for mu in range(e):
            if mu not in s and binom_mod(e, mu, p):
                out.append((e, mu))
    return out


def order_sequence(ls: LinearSeriesSpec, mode: str = STATISTICAL, *, frame: str | None = None,
                   return_samples: bool = False):
    eps, samples = _scan(ls, mode, False, frame=frame)
    bad = p_adic_violations(eps, ls.model.base.p)
    if bad:
        raise InconsistencyError(f"order sequence {eps} fails the p-adic criterion at {bad[0]}")
    if ls.d % ls.model.base.p and eps[1] != 1:
        raise InconsistencyError(f"epsilon_1 = {eps[1]} although p does not divide d")
    return (eps, samples) if return_samples else eps


def removed_index(eps: Sequence[int], nu: Sequence[int]) -> int:
    missing = [i for i, e in enumerate(eps) if e not in set(nu)]
    if len(nu) != len(eps) - 1 or len(missing) != 1 or not set(nu) <= set(eps):
        raise InconsistencyError(f"Frobenius orders {tuple(nu)} are not {tuple(eps)} minus one entry")
    if missing[0] == 0:
        raise InconsistencyError("the Frobenius orders must contain 0")
    return missing[0]


def validate_frobenius(eps: Sequence[int], nu: Sequence[int], p: int, q: int) -> int:
    I = removed_index(eps, nu)
    r = len(eps) - 1
    if I < r and eps[I + 1] % p:
        raise InconsistencyError(f"p={p} does not divide epsilon_{I + 1} = {eps[I + 1]}")
    bad = p_adic_violations(nu, p, below=q)
    if bad:
        raise InconsistencyError(f"Frobenius orders {tuple(nu)} fail the p-adic closure at {bad[0]}")
    return I


def frobenius_orders(ls: LinearSeriesSpec, mode: str = STATISTICAL, *, eps: Sequence[int] | None = None,
                     frame: str | None = None, return_samples: bool = False):
    """(nu, I) with nu = eps minus eps_I."""
    if eps is None:
        eps = order_sequence(ls, mode, frame=frame)
    nu, samples = _scan(ls, mode, True, frame=frame)
    I = validate_frobenius(eps, nu, ls.model.base.p, ls.model.q)
    return (nu, I, samples) if return_samples else (nu, I)


def divisor_degrees(eps: Sequence[int], nu: Sequence[int], g: int, d: int, r: int, q: int) -> tuple[int, int]:
    eps = order_tuple(eps)
    nu = order_tuple(nu)
    if len(eps) != r + 1 or len(nu) != r:
        raise UsageError("need r+1 orders and r Frobenius orders")
    deg_R = sum(eps) * (2 * g - 2) + (r + 1) * d
    deg_S = sum(nu) * (2 * g - 2) + (q + r) * d
    if deg_R < 0 or deg_S < 0:
        raise UsageError(f"negative divisor degree ({deg_R}, {deg_S}): inconsistent inputs")
    return deg_R, deg_S


def sv_bound(nu: Sequence[int], g: int, d: int, r: int, q: int) -> int:
    """Stöhr-Voloch: #X(F_q) <= (sum(nu)(2g-2) + (q+r)d) / r."""
    nu = order_tuple(nu)
    if len(nu) != r or r < 1:
        raise UsageError("need r >= 1 Frobenius orders")
    deg_S = sum(nu) * (2 * g - 2) + (q + r) * d
    if deg_S < 0:
        raise UsageError("negative Frobenius divisor degree")
    return deg_S // r


def weight_bound_at(j: Sequence[int], eps: Sequence[int], p: int) -> tuple[int, bool]:
    """Lower bound sum(j_i - eps_i) for v_P(R), exact iff det C(j, eps) != 0 mod p."""
    if len(j) != len(eps):
        raise UsageError("order tuples of different lengths")
    if any(a < b for a, b in zip(j, eps)):
        raise UsageError(f"j-orders {tuple(j)} below the order sequence {tuple(eps)}")
    return sum(a - b for a, b in zip(j, eps)), binom_det_mod_p(j, eps, p) != 0


def castelnuovo_bound(d_prime: int, r: int) -> Fraction:
    """c0(d', r): the genus bound for a simple g^r_{d'}."""
    if r < 2:
        raise UsageError("Castelnuovo's bound needs r >= 2")
    if d_prime < 1:
        raise UsageError("d' must be positive")
    e = (d_prime - 1) % (r - 1)
    return Fraction((d_prime - 1 - e) * (d_prime - r + e), 2 * (r - 1))


def rational_point_orders(ls: LinearSeriesSpec) -> dict[str, tuple[int, ...]]:
    exclude = _sample_filter(ls, False)
    out = {}
    for pt in iter_points(ls.model, 1):
        if exclude(pt):
            continue
        out[pt.label()] = point_orders(ls, pt)
    return out


def analyze(ls: LinearSeriesSpec, mode: str = STATISTICAL, *, with_rational: bool = True) -> OrderReport:
    model = ls.model
    eps, samples = order_sequence(ls, mode, return_samples=True)
    nu, I, fsamples = frobenius_orders(ls, mode, eps=eps, return_samples=True)
    g, q = model.genus, model.q
    deg_R, deg_S = divisor_degrees(eps, nu, g, ls.d, ls.r, q)
    notes = []
    if model.kind == AFFINE:
        notes.append("rational orders cover affine points only")
    return OrderReport(
        epsilon=eps, nu=nu, removed_index=I, deg_R=deg_R, deg_S=deg_S,
        sv_bound=deg_S // ls.r, samples=samples, frobenius_samples=fsamples,
        rational_orders=rational_point_orders(ls) if with_rational else {},
        certification_mode=mode, r=ls.r, d=ls.d, g=g, q=q, notes=notes)
