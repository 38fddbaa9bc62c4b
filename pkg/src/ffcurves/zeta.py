"""Zeta numerators from point counts, and the classical bounds on #X(F_q)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InconsistencyError, UsageError
from .gf import isqrt_exact, prime_power

ROOT_TOL = 1e-6
GRID_STEP = 1e-3
GRID_TOL = -1e-9


def _check_q(q: int) -> tuple[int, int]:
    pp = prime_power(q)
    if pp is None:
        raise UsageError(f"q={q} is not a prime power")
    return pp


def _squarefree_part(n: int) -> int:
    out, d = 1, 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e % 2:
            out *= d
        d += 1
    return out * n


# ---------------------------------------------------------------------------
# Q(sqrt m)


@dataclass(frozen=True)
class QuadExt:
    """a + b*sqrt(m) with rational a, b and square-free m (m = 1: plain rationals)."""

    a: Fraction
    b: Fraction = Fraction(0)
    m: int = 1

    def __post_init__(self):
        if self.m < 1 or _squarefree_part(self.m) != self.m:
            raise UsageError(f"m={self.m} is not a positive square-free integer")
        a, b = Fraction(self.a), Fraction(self.b)
        if self.m == 1:
            a, b = a + b, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def sqrt(cls, n: int) -> "QuadExt":
        """sqrt(n) for a positive integer n."""
        if n < 0:
            raise UsageError("negative radicand")
        m = _squarefree_part(n)
        return cls(Fraction(0), Fraction(math.isqrt(n // m)), m) if m > 1 else cls(Fraction(math.isqrt(n)))

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(Fraction(other), Fraction(0), self.m)
        return NotImplemented

    def _common(self, other: "QuadExt") -> int:
        if self.m == other.m or other.b == 0:
            return self.m
        if self.b == 0:
            return other.m
        raise UsageError(f"cannot combine Q(sqrt {self.m}) and Q(sqrt {other.m})")

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadExt(self.a + other.a, self.b + other.b, self._common(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.m)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self._common(other)
        return QuadExt(self.a * other.a + self.b * other.b * m,
                       self.a * other.b + self.b * other.a, m)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.m)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.m

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt m)")
        c = self.conjugate()
        return QuadExt(c.a / n, c.b / n, self.m)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QuadExt(Fraction(1), Fraction(0), self.m), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, QuadExt):
            return NotImplemented
        if self.b == 0 and other.b == 0:
            return self.a == other.a
        return (self.a, self.b, self.m) == (other.a, other.b, other.m)

    def __hash__(self):
        return hash((self.a, self.b, self.m if self.b else 1))

    def is_rational(self) -> bool:
        return self.b == 0

    def sign(self) -> int:
        """Exact sign of a + b sqrt(m)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        lhs = self.a * self.a
        rhs = self.b * self.b * self.m
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def floor(self) -> int:
        n = math.floor(float(self))
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        surd = f"{self.b}*sqrt({self.m})"
        if self.a == 0:
            return surd
        return f"{self.a}-{-self.b}*sqrt({self.m})" if self.b < 0 else f"{self.a}+{surd}"


# ---------------------------------------------------------------------------
# zeta numerators


@dataclass
class ZetaData:
    q: int
    g: int
    counts: tuple[int, ...]
    a: tuple[int, ...]
    notes: list[str] = field(default_factory=list)

    @property
    def h_coeffs(self) -> tuple[int, ...]:
        """Coefficients of h(t) = t^{2g} P(1/t), constant term first."""
        return tuple(reversed(self.a))

    def as_dict(self) -> dict:
        return {"q": self.q, "g": self.g, "counts": [str(c) for c in self.counts],
                "a": [str(c) for c in self.a], "h": [str(c) for c in self.h_coeffs]}


def _exp_series(s: Sequence[Fraction], n: int) -> list[Fraction]:
    """exp of sum s_i t^i (s_0 = 0) mod t^{n+1}, via n Z_n = sum i s_i Z_{n-i}."""
    z = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        z[k] = sum((i * s[i] * z[k - i] for i in range(1, k + 1)), Fraction(0)) / k
    return z


def numerator_from_counts(q: int, g: int, counts: Sequence[int]) -> ZetaData:
    _check_q(q)
    if g < 0:
        raise UsageError("genus must be non-negative")
    counts = tuple(int(c) for c in counts)
    if len(counts) != g:
        raise UsageError(f"need exactly g={g} counts, got {len(counts)}")
    if any(c < 0 for c in counts):
        raise UsageError("point counts must be non-negative")
    s = [Fraction(0)] + [Fraction(c, i) for i, c in enumerate(counts, 1)]
    z = _exp_series(s, g)
    # multiply by (1 - t)(1 - q t) = 1 - (q+1) t + q t^2
    mult = [1, -(q + 1), q]
    low = []
    for n in range(g + 1):
        low.append(sum((mult[k] * z[n - k] for k in range(3) if k <= n), Fraction(0)))
    bad = [i for i, c in enumerate(low) if c.denominator != 1]
    if bad:
        raise InconsistencyError(
            f"a_{bad[0]} = {low[bad[0]]} is not an integer: counts inconsistent with genus {g}")
    a = [int(c) for c in low] + [0] * g
    for i in range(g):
        a[2 * g - i] = q ** (g - i) * a[i]
    zd = ZetaData(q, g, counts, tuple(a))
    if g:
        check_root_moduli(zd)
    return zd


def counts_from_numerator(zeta: ZetaData, i: int) -> int:
    """#X(F_{q^i}) = q^i + 1 - s_i, with s_i the power sums of the reciprocal roots."""
    if i < 1:
        raise UsageError("extension degree must be positive")
    a = zeta.a
    top = len(a) - 1
    s = [0] * (i + 1)
    for n in range(1, i + 1):
        acc = -n * a[n] if n <= top else 0
        for k in range(1, min(n, top + 1)):
            acc -= a[k] * s[n - k]
        s[n] = acc
    return zeta.q ** i + 1 - s[i]


# exact polynomial helpers over Q (coefficients constant term first)

def _qtrim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _qderiv(p: list[Fraction]) -> list[Fraction]:
    return _qtrim([i * c for i, c in enumerate(p)][1:])


def _qdivmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    out = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        sh = len(a) - len(b)
        out[sh] = c
        for i, bc in enumerate(b):
            a[sh + i] -= c * bc
        _qtrim(a)
    return _qtrim(out), a


def _qgcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _qtrim(list(a)), _qtrim(list(b))
    while b:
        a, b = b, _qdivmod(a, b)[1]
    return [c / a[-1] for c in a]


def squarefree_factors(coeffs: Sequence[int]) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: pairs (factor, multiplicity) with squarefree factors."""
    f = _qtrim([Fraction(c) for c in coeffs])
    out = []
    a = _qgcd(f, _qderiv(f))
    b = _qdivmod(f, a)[0]
    c = _qdivmod(_qderiv(f), a)[0]
    d = [x - y for x, y in _pad(c, _qderiv(b))]
    i = 1
    while len(b) > 1:
        a = _qgcd(b, _qtrim(d))
        b = _qdivmod(b, a)[0]
        c = _qdivmod(_qtrim(d), a)[0]
        d = [x - y for x, y in _pad(c, _qderiv(b))]
        if len(a) > 1:
            out.append((a, i))
        i += 1
    return out


def _pad(x, y):
    n = max(len(x), len(y))
    return list(zip(list(x) + [Fraction(0)] * (n - len(x)), list(y) + [Fraction(0)] * (n - len(y))))


def root_moduli(zeta: ZetaData) -> list[float]:
    """|root| for every root of h, each squarefree factor solved once and
    repeated by its multiplicity."""
    out = []
    for fac, mult in squarefree_factors(zeta.h_coeffs):
        roots = np.roots([float(c) for c in reversed(fac)])
        out.extend(abs(complex(r)) for r in roots for _ in range(mult))
    return out


def check_root_moduli(zeta: ZetaData, tol: float = ROOT_TOL) -> float:
    """Maximal deviation of |root| from sqrt(q); raises above ``tol``."""
    mods = root_moduli(zeta)
    if len(mods) != 2 * zeta.g:
        raise InconsistencyError("root count differs from 2g")
    sq = math.sqrt(zeta.q)
    dev = max((abs(m - sq) for m in mods), default=0.0)
    if dev >= tol:
        raise InconsistencyError(f"root modulus deviates from sqrt(q) by {dev:.3g}")
    return dev


# ---------------------------------------------------------------------------
# classification and bounds


def _poly_pow(base: list[int], e: int) -> list[int]:
    out = [1]
    for _ in range(e):
        nxt = [0] * (len(out) + len(base) - 1)
        for i, x in enumerate(out):
            for j, y in enumerate(base):
                nxt[i + j] += x * y
        out = nxt
    return out


def classify(zeta: ZetaData | None = None, *, q: int | None = None, g: int | None = None,
             n1: int | None = None) -> tuple[str, list[str]]:
    if zeta is not None:
        q, g, n1 = zeta.q, zeta.g, (zeta.counts[0] if zeta.g else zeta.q + 1)
    if q is None or g is None or n1 is None:
        raise UsageError("classify needs ZetaData or q, g and N_1")
    _check_q(q)
    notes: list[str] = []
    if g == 0:
        if n1 != q + 1:
            raise InconsistencyError(f"a genus 0 curve has q+1 = {q + 1} points, not {n1}")
        return "maximal", ["genus 0: all four labels coincide"]
    m = math.isqrt(4 * q)
    root = isqrt_exact(q)
    label = "none"
    expect = None
    if root is not None and n1 == q + 1 + 2 * root * g:
        label, expect = "maximal", _poly_pow([root, 1], 2 * g)
    elif root is not None and n1 == q + 1 - 2 * root * g:
        label, expect = "minimal", _poly_pow([-root, 1], 2 * g)
    elif n1 == q + 1 + m * g:
        label, expect = "serre-maximal", _poly_pow([q, m, 1], g)
    elif n1 == q + 1 - m * g:
        label, expect = "serre-minimal", _poly_pow([q, -m, 1], g)
    if zeta is not None and expect is not None:
        if tuple(expect) != zeta.h_coeffs:
            raise InconsistencyError(f"{label} count but h(t) is not of the expected form")
        notes.append("h(t) cross-check passed")
    return label, notes


def serre_m(q: int) -> int:
    """floor(2 sqrt q), exactly."""
    return math.isqrt(4 * q)


def bound_table(q: int, g: int, n1: int | None = None) -> dict:
    _check_q(q)
    if g < 0:
        raise UsageError("genus must be non-negative")
    m = serre_m(q)
    root = isqrt_exact(q)
    out: dict = {"q": q, "g": g, "floor_2sqrt_q": m, "notes": []}
    if root is not None:
        out["weil_upper"] = q + 1 + 2 * root * g
        out["weil_lower"] = q + 1 - 2 * root * g
        out["hermitian_genus_max"] = root * (root - 1) // 2
        out["maximal_admissible"] = g <= root * (root - 1) // 2
    else:
        out["weil_upper"] = q + 1 + 2 * math.sqrt(q) * g
        out["weil_lower"] = q + 1 - 2 * math.sqrt(q) * g
        out["notes"].append("q is not a square: Weil bound reported as a real number")
        out["maximal_admissible"] = False
    out["serre_upper"] = q + 1 + m * g
    out["serre_lower"] = q + 1 - m * g
    denom = m * m + m - 2 * q
    out["serre_maximal_genus_max"] = Fraction(q * q - q, denom)
    out["serre_maximal_admissible"] = g <= Fraction(q * q - q, denom)
    if n1 is not None:
        if n1 < 1:
            raise UsageError("n_1 must be positive")
        out["lewittes"] = 1 + q * n1
    return out


def lam(c: Sequence[QuadExt], x: QuadExt) -> QuadExt:
    """lambda(x) = sum c_i x^i, i >= 1."""
    acc = QuadExt(Fraction(0), Fraction(0), x.m)
    p = x
    for ci in c:
        acc = acc + ci * p
        p = p * x
    return acc


def positivity_min(c: Sequence[QuadExt], step: float = GRID_STEP) -> float:
    """min over a theta grid of 1 + sum c_i 2 cos(i theta)."""
    theta = np.arange(0.0, 2 * math.pi + step, step)
    f = np.ones_like(theta)
    for i, ci in enumerate(c, 1):
        f += 2 * float(ci) * np.cos(i * theta)
    return float(f.min())


def explicit_formula_bound(q: int, g: int, c: Sequence[QuadExt | Fraction | int]) -> QuadExt:
    """(lambda(sqrt q) + lambda(1/sqrt q) + g) / lambda(1/sqrt q)."""
    _check_q(q)
    if g < 0:
        raise UsageError("genus must be non-negative")
    if not c:
        raise UsageError("the coefficient vector c must be nonempty")
    c = [ci if isinstance(ci, QuadExt) else QuadExt(Fraction(ci)) for ci in c]
    low = positivity_min(c)
    if low < GRID_TOL:
        raise InconsistencyError(f"1 + sum c_i 2cos(i theta) reaches {low:.3g} < 0")
    s = QuadExt.sqrt(q)
    lo = lam(c, 1 / s)
    if lo.sign() <= 0:
        raise InconsistencyError("lambda(1/sqrt q) must be positive")
    return (lam(c, s) + lo + g) / lo
