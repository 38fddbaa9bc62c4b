"""Truncated power series over a finite field, Hasse derivatives and Wronskians.

A :class:`TruncSeries` holds the coefficient codes ``c_0 .. c_{N-1}`` of
``sum c_j t^j`` known modulo ``t^N``.  Every operation returns a series whose
precision is no larger than what its inputs determine.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import PrecisionExhausted, UsageError
from .gf import FieldCtx, FieldElement


def binom_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem."""
    if k < 0 or n < 0 or k > n:
        return 0
    out = 1
    while n or k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        c = 1
        for i in range(kd):
            c = c * (nd - i) // (i + 1)
        out = out * c % p
        n //= p
        k //= p
    return out


def order_tuple(values: Sequence[int], *, first_zero: bool = True) -> tuple[int, ...]:
    t = tuple(int(v) for v in values)
    if any(b <= a for a, b in zip(t, t[1:])):
        raise UsageError(f"order tuple {t} is not strictly increasing")
    if t and t[0] < 0:
        raise UsageError(f"order tuple {t} has a negative entry")
    if first_zero and t and t[0] != 0:
        raise UsageError(f"order tuple {t} must start at 0")
    return t


@dataclass(frozen=True)
class TruncSeries:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    # construction ------------------------------------------------------------
    @classmethod
    def from_codes(cls, ctx: FieldCtx, codes: Sequence[int], N: int | None = None):
        codes = list(codes)
        if N is not None:
            codes = (codes + [0] * N)[:N]
        return cls(ctx, tuple(codes))

    @classmethod
    def from_elements(cls, elems: Sequence[FieldElement], N: int | None = None):
        ctx = elems[0].ctx
        return cls.from_codes(ctx, [ctx.code_of(e) for e in elems], N)

    @classmethod
    def constant(cls, ctx: FieldCtx, c: int, N: int):
        return cls.from_codes(ctx, [c], N)

    @classmethod
    def param(cls, ctx: FieldCtx, N: int, a0: int = 0):
        """The series a0 + t."""
        return cls.from_codes(ctx, [a0, 1], N)

    # basic properties --------------------------------------------------------
    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def valuation(self) -> int:
        """Least j with c_j != 0; equals the precision when nothing is known to
        be nonzero (read it as "at least N")."""
        for j, c in enumerate(self.coeffs):
            if c:
                return j
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self.ctx, c) for c in self.coeffs]

    def __getitem__(self, j: int) -> int:
        return self.coeffs[j]

    def truncate(self, N: int) -> "TruncSeries":
        if N > self.precision:
            raise PrecisionExhausted(f"cannot raise precision {self.precision} to {N}")
        return TruncSeries(self.ctx, self.coeffs[:N])

    def _check(self, other: "TruncSeries"):
        if other.ctx != self.ctx:
            raise UsageError(f"series over {self.ctx} and {other.ctx}")

    # ring operations ---------------------------------------------------------
    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        add = self.ctx.add
        return TruncSeries(self.ctx, tuple(add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.ctx, tuple(self.ctx.neg(a) for a in self.coeffs))

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        sub = self.ctx.sub
        return TruncSeries(self.ctx, tuple(sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return self.scale(self.ctx.code_of(other))
        self._check(other)
        ctx = self.ctx
        N = min(self.precision, other.precision)
        a, b = self.coeffs, other.coeffs
        out = [0] * N
        mul, add = ctx.mul, ctx.add
        for i in range(N):
            ai = a[i]
            if not ai:
                continue
            for j in range(N - i):
                bj = b[j]
                if bj:
                    out[i + j] = add(out[i + j], mul(ai, bj))
        return TruncSeries(ctx, tuple(out))

    __rmul__ = __mul__

    def scale(self, c: int) -> "TruncSeries":
        mul = self.ctx.mul
        return TruncSeries(self.ctx, tuple(mul(c, a) for a in self.coeffs))

    def shift(self, m: int) -> "TruncSeries":
        """Multiply by t^m (m may be negative when the low terms vanish)."""
        if m >= 0:
            return TruncSeries(self.ctx, (0,) * m + self.coeffs)
        if self.valuation() < -m:
            raise UsageError("negative shift of a series with low-order terms")
        return TruncSeries(self.ctx, self.coeffs[-m:])

    def reciprocal(self) -> "TruncSeries":
        ctx = self.ctx
        a = self.coeffs
        if not a or not a[0]:
            raise UsageError("reciprocal of a non-unit series")
        N = len(a)
        b0 = ctx.inv(a[0])
        nb0 = ctx.neg(b0)
        b = [b0] + [0] * (N - 1)
        for n in range(1, N):
            acc = 0
            for i in range(1, n + 1):
                if a[i] and b[n - i]:
                    acc = ctx.add(acc, ctx.mul(a[i], b[n - i]))
            b[n] = ctx.mul(nb0, acc)
        return TruncSeries(ctx, tuple(b))

    def __truediv__(self, other: "TruncSeries") -> "TruncSeries":
        """Exact quotient; precision drops by the divisor's valuation."""
        self._check(other)
        v = other.valuation()
        if v >= other.precision:
            raise PrecisionExhausted("division by a series with no known nonzero term")
        if self.valuation() < v:
            raise UsageError("quotient would have negative valuation")
        num = self.shift(-v)
        den = other.shift(-v)
        N = min(num.precision, den.precision)
        return num.truncate(N) * den.truncate(N).reciprocal()

    def __pow__(self, n: int) -> "TruncSeries":
        if n < 0:
            return self.reciprocal() ** (-n)
        result = TruncSeries.constant(self.ctx, 1, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius_power(self, q: int) -> "TruncSeries":
        """(sum a_j t^j)^q = sum a_j^q t^{jq}; precision grows to N*q."""
        ctx = self.ctx
        N = self.precision
        out = [0] * (N * q)
        for j, a in enumerate(self.coeffs):
            if a:
                out[j * q] = ctx.pow(a, q)
        return TruncSeries(ctx, tuple(out))

    def compose(self, g: "TruncSeries") -> "TruncSeries":
        """f(g(t)) for g with positive valuation."""
        self._check(g)
        if g.valuation() < 1:
            raise UsageError("composition needs an inner series with zero constant term")
        N = min(self.precision, g.precision)
        g = g.truncate(N)
        acc = TruncSeries.constant(self.ctx, 0, N)
        for a in reversed(self.coeffs[:N]):
            acc = acc * g
            if a:
                acc = TruncSeries(self.ctx, (self.ctx.add(acc.coeffs[0], a),) + acc.coeffs[1:])
        return acc

    def reversion(self) -> "TruncSeries":
        """The series h with self(h(u)) = u; requires valuation exactly 1."""
        ctx = self.ctx
        if self.valuation() != 1:
            raise UsageError("series reversion needs valuation 1")
        N = self.precision
        g1_inv = ctx.inv(self.coeffs[1])
        h = [0, g1_inv] + [0] * (N - 2)
        for n in range(2, N):
            partial = TruncSeries(ctx, tuple(h[:n]) + (0,) * (N - n))
            c = self.compose(partial).coeffs[n]
            h[n] = ctx.neg(ctx.mul(c, g1_inv))
        return TruncSeries(ctx, tuple(h[:N]))

    def qth_root(self, q: int) -> "TruncSeries | None":
        """g with g^q = self when self is supported on multiples of q."""
        ctx = self.ctx
        if any(c for j, c in enumerate(self.coeffs) if j % q):
            return None
        root_exp = ctx.order // q if ctx.order % q == 0 else None
        n = (self.precision + q - 1) // q
        out = []
        for j in range(n):
            c = self.coeffs[j * q]
            # x -> x^{Q/q} inverts x -> x^q on F_Q when q | Q
            out.append(ctx.pow(c, root_exp) if root_exp else _qth_root_scan(ctx, c, q))
        return TruncSeries(ctx, tuple(out))

    def __repr__(self):
        terms = [f"{self.ctx.elt(c)!r}*t^{j}" for j, c in enumerate(self.coeffs) if c]
        return f"TruncSeries({' + '.join(terms) or '0'} + O(t^{self.precision}))"


def _qth_root_scan(ctx: FieldCtx, c: int, q: int) -> int:
    for x in range(ctx.order):
        if ctx.pow(x, q) == c:
            return x
    raise UsageError("no q-th root")


def hasse_derive(s: TruncSeries, i: int) -> TruncSeries:
    """D^i(sum a_j t^j) = sum C(j, i) a_j t^{j-i}."""
    if i < 0:
        raise UsageError("Hasse derivative order must be non-negative")
    N = s.precision
    if i >= N:
        warnings.warn(f"D^{i} of a series of precision {N} carries no information", stacklevel=2)
        return TruncSeries(s.ctx, ())
    p = s.ctx.p
    scale = s.ctx.scale_int
    return TruncSeries(s.ctx, tuple(scale(s.coeffs[j], binom_mod(j, i, p)) for j in range(i, N)))


def product_rule_expand(f: TruncSeries, g: TruncSeries, i: int) -> TruncSeries:
    """sum_{j=0}^{i} D^j f * D^{i-j} g, which equals D^i(fg)."""
    N = min(f.precision, g.precision) - i
    acc = TruncSeries.constant(f.ctx, 0, N)
    for j in range(i + 1):
        acc = acc + (hasse_derive(f, j).truncate(N) * hasse_derive(g, i - j).truncate(N))
    return acc


def product_rule_check(f: TruncSeries, g: TruncSeries, i: int) -> bool:
    rhs = product_rule_expand(f, g, i)
    lhs = hasse_derive(f * g, i).truncate(rhs.precision)
    return lhs == rhs


def chain_rule_apply(f: TruncSeries, old_in_new: TruncSeries, i: int) -> TruncSeries:
    """D^i with respect to a new local parameter u.

    ``old_in_new`` expresses the old parameter t as a series in u and must have
    valuation 1.  Returns D^i_u f as a series in u.
    """
    if old_in_new.valuation() != 1:
        raise UsageError("reparametrisation must have valuation 1")
    return hasse_derive(f.compose(old_in_new), i)


# ---------------------------------------------------------------------------
# determinants over the series ring


def _det_minors(M: list[list[TruncSeries]]) -> TruncSeries:
    """Laplace expansion along rows with memoised column subsets."""
    n = len(M)
    ctx = M[0][0].ctx
    N = min(e.precision for row in M for e in row)
    M = [[e.truncate(N) for e in row] for row in M]
    one = TruncSeries.constant(ctx, 1, N)
    # minors of the last (n - i) rows over column subsets of size n - i
    prev: dict[tuple[int, ...], TruncSeries] = {(): one}
    for i in range(n - 1, -1, -1):
        size = n - i
        cur: dict[tuple[int, ...], TruncSeries] = {}
        for cols in combinations(range(n), size):
            acc = TruncSeries.constant(ctx, 0, N)
            for pos, c in enumerate(cols):
                rest = cols[:pos] + cols[pos + 1:]
                term = M[i][c] * prev[rest]
                acc = acc - term if pos % 2 else acc + term
            cur[cols] = acc
        prev = cur
    return prev[tuple(range(n))]


def _det_bareiss(M: list[list[TruncSeries]]) -> TruncSeries:
    """Fraction-free elimination; exact divisions lose precision by the
    valuation of the previous pivot."""
    n = len(M)
    ctx = M[0][0].ctx
    A = [list(row) for row in M]
    sign = 1
    prev = None
    for k in range(n - 1):
        piv = min(range(k, n), key=lambda r: A[r][k].valuation())
        if A[piv][k].valuation() >= A[piv][k].precision:
            return TruncSeries.constant(ctx, 0, min(e.precision for row in A for e in row))
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = num / prev if prev is not None else num
        prev = A[k][k]
    d = A[n - 1][n - 1]
    return -d if sign < 0 else d


def series_det(M: list[list[TruncSeries]]) -> TruncSeries:
    return _det_minors(M) if len(M) <= 6 else _det_bareiss(M)


def wronskian(rows: Sequence[TruncSeries], orders: Sequence[int]) -> TruncSeries:
    """det(D^{orders[a]} rows[b])."""
    if len(rows) != len(orders):
        raise UsageError("need one derivative order per function")
    orders = order_tuple(orders, first_zero=False)
    if max(orders) >= min(r.precision for r in rows):
        raise PrecisionExhausted("input precision does not reach the highest order")
    M = [[hasse_derive(f, l) for f in rows] for l in orders]
    return series_det(M)


def frobenius_wronskian(rows: Sequence[TruncSeries], orders: Sequence[int], q: int) -> TruncSeries:
    """det with first row f_b^q and remaining rows D^{orders[a]} f_b.

    Valid as a function identity when the f_b are defined over F_q, since then
    f o Frobenius = f^q.
    """
    if len(rows) != len(orders) + 1:
        raise UsageError("need r derivative orders for r+1 functions")
    orders = order_tuple(orders, first_zero=False)
    N = min(r.precision for r in rows)
    if orders and max(orders) >= N:
        raise PrecisionExhausted("input precision does not reach the highest order")
    M = [[f.frobenius_power(q).truncate(N) for f in rows]]
    M += [[hasse_derive(f, l) for f in rows] for l in orders]
    return series_det(M)


def binom_det_mod_p(js: Sequence[int], ms: Sequence[int], p: int) -> int:
    """det(C(js[a], ms[b])) mod p."""
    if len(js) != len(ms):
        raise UsageError("binomial determinant needs tuples of equal length")
    n = len(js)
    A = [[binom_mod(j, m, p) for m in ms] for j in js]
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for r in range(c + 1, n):
            f = A[r][c] * inv % p
            if f:
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[c])]
    return det % p
