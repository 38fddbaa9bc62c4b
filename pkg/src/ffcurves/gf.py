"""Finite fields GF(p^k) with explicit moduli.

Elements are stored as integer *codes*: the coefficient vector
``(c_0, ..., c_{k-1})`` of the power-basis representation packed as
``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``.  A :class:`FieldCtx` does all the
arithmetic on codes; :class:`FieldElement` is a thin operator-overloading
wrapper for callers who prefer objects.

Multiplication is dense polynomial arithmetic modulo the field modulus.  For
fields up to ``TABLE_LIMIT`` elements the context also builds exp/log/Zech
tables (from the dense routine) and uses them as a cache; the dense path stays
available as ``dense_mul`` and is what the tables are checked against.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, InconsistencyError, UsageError

TABLE_LIMIT = 1 << 16
ENUM_LIMIT = 1 << 24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e`` or None if q is not a prime power."""
    if q < 2:
        return None
    fs = prime_factors(q)
    if len(fs) != 1:
        return None
    p = fs[0]
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return p, e


# ---------------------------------------------------------------------------
# Polynomials over F_p as coefficient lists, low degree first.

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _ppowmod(a: list[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(list(a), f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Ben-Or test: f (monic, degree k) is irreducible iff
    gcd(f, x^{p^i} - x) = 1 for 1 <= i <= k/2."""
    f = list(f)
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    xpow = [0, 1]
    for _ in range(k // 2):
        xpow = _ppowmod(xpow, p, f, p)
        diff = list(xpow) + [0] * max(0, 2 - len(xpow))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, _trim(diff), p)) > 1:
            return False
    return True


def first_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible polynomial of degree k over F_p.

    Candidates ``(c_0, ..., c_{k-1}, 1)`` are compared starting from the
    constant coefficient.
    """
    import itertools

    for low in itertools.product(range(p), repeat=k):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise InconsistencyError(f"no irreducible polynomial of degree {k} over F_{p}")


# ---------------------------------------------------------------------------


class FieldCtx:
    """The field F_{p^k} = F_p[z]/(modulus)."""

    def __init__(self, p: int, k: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise UsageError(f"p={p} is not prime")
        if k < 1:
            raise UsageError("extension degree k must be >= 1")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise UsageError("modulus must be monic of degree k")
        if not is_irreducible(modulus, p):
            raise UsageError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.modulus = modulus
        self.order = p**k
        self._log: list[int] | None = None
        self._exp: list[int] | None = None
        self._zech: list[int] | None = None
        self._neg: list[int] | None = None
        self._np: dict[str, np.ndarray] | None = None
        self._gen: int | None = None

    # identity -------------------------------------------------------------
    def _key(self):
        return (self.p, self.k, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (make_field_with_modulus, (self.p, self.k, self.modulus))

    @property
    def q(self) -> int:
        return self.order

    # conversions ----------------------------------------------------------
    def coeffs(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_coeffs(self, cs: Iterable[int]) -> int:
        p = self.p
        cs = [int(c) % p for c in cs]
        cs = _pmod(cs, self.modulus, p) if len(cs) > self.k else cs
        code = 0
        for c in reversed(cs):
            code = code * p + c
        return code

    def code_of(self, x) -> int:
        """Accept a FieldElement, an int (image of the integer in the prime
        field) or a coefficient sequence."""
        if isinstance(x, FieldElement):
            if x.ctx != self:
                raise UsageError(f"element of {x.ctx} used in {self}")
            return x.code
        if isinstance(x, (int, np.integer)):
            return int(x) % self.p
        return self.from_coeffs(x)

    def __call__(self, x) -> "FieldElement":
        return FieldElement(self, self.code_of(x))

    def elt(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    # dense reference arithmetic ------------------------------------------
    def dense_add(self, a: int, b: int) -> int:
        p = self.p
        out, scale = 0, 1
        for _ in range(self.k):
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * scale
            scale *= p
        return out

    def dense_neg(self, a: int) -> int:
        p = self.p
        out, scale = 0, 1
        for _ in range(self.k):
            a, ra = divmod(a, p)
            out += ((-ra) % p) * scale
            scale *= p
        return out

    def dense_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        prod = _pmul(self.coeffs(a), self.coeffs(b), self.p)
        return self.from_coeffs(_pmod(prod, self.modulus, self.p))

    def dense_pow(self, a: int, e: int) -> int:
        """Square-and-multiply on the dense representation."""
        if e < 0:
            a = self.dense_pow(a, self.order - 2)
            e = -e
        result = 1
        while e:
            if e & 1:
                result = self.dense_mul(result, a)
            a = self.dense_mul(a, a)
            e >>= 1
        return result

    # tables ---------------------------------------------------------------
    @property
    def has_tables(self) -> bool:
        if self.k == 1:
            return False
        if self._log is None and self.order <= TABLE_LIMIT:
            self._build_tables()
        return self._log is not None

    def generator(self) -> int:
        """Code of the first primitive element in enumeration order."""
        if self._gen is None:
            n = self.order - 1
            fs = prime_factors(n) if n > 1 else []
            for g in range(1, self.order):
                if all(self.dense_pow(g, n // f) != 1 for f in fs):
                    self._gen = g
                    break
        return self._gen

    def _build_tables(self):
        Q = self.order
        n = Q - 1
        g = self.generator()
        exp = [0] * (2 * n)
        log = [0] * Q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self.dense_mul(x, g)
        if x != 1:
            raise InconsistencyError("generator order mismatch")
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        neg = [self.dense_neg(a) for a in range(Q)]
        zech = [-1] * n
        if self.p != 2:
            for i in range(n):
                s = self.dense_add(1, exp[i])
                zech[i] = log[s] if s else -1
        else:
            for i in range(n):
                s = 1 ^ exp[i]
                zech[i] = log[s] if s else -1
        self._exp, self._log, self._zech, self._neg = exp, log, zech, neg

    def np_tables(self) -> dict[str, np.ndarray]:
        if self._np is None:
            if not self.has_tables:
                raise BudgetExceeded(f"{self} too large for vectorised tables")
            self._np = {
                "exp": np.asarray(self._exp, dtype=np.int64),
                "log": np.asarray(self._log, dtype=np.int64),
                "zech": np.asarray(self._zech, dtype=np.int64),
                "neg": np.asarray(self._neg, dtype=np.int64),
            }
        return self._np

    # code arithmetic ------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if not a:
            return b
        if not b:
            return a
        if self.has_tables:
            la = self._log[a]
            n = self.order - 1
            z = self._zech[(self._log[b] - la) % n]
            return 0 if z < 0 else self._exp[la + z]
        return self.dense_add(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        if self.has_tables:
            return self._neg[a]
        return self.dense_neg(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self.k == 1:
            return a * b % self.p
        if self.has_tables:
            return self._exp[self._log[a] + self._log[b]]
        return self.dense_mul(a, b)

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.k == 1:
            return pow(a, -1, self.p)
        if self.has_tables:
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return self.dense_pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if not a:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 0
        n = self.order - 1
        if self.k == 1:
            return pow(a, e % n, self.p)
        if self.has_tables:
            return self._exp[(self._log[a] * e) % n]
        return self.dense_pow(a, e % n)

    def scale_int(self, a: int, m: int) -> int:
        """Multiply by the image of the integer m."""
        m %= self.p
        if m == 0 or not a:
            return 0
        if m == 1:
            return a
        return self.mul(a, m)

    def in_subfield(self, a: int, degree: int) -> bool:
        """True when a lies in F_{p^degree} (degree must divide k)."""
        return self.pow(a, self.p**degree) == a

    # vectorised arithmetic (numpy int64 arrays of codes) --------------------
    def vmul(self, A: np.ndarray, B) -> np.ndarray:
        if self.k == 1:
            return (A * B) % self.p
        t = self.np_tables()
        B = np.broadcast_to(np.asarray(B, dtype=np.int64), A.shape)
        mask = (A != 0) & (B != 0)
        out = np.zeros(A.shape, dtype=np.int64)
        out[mask] = t["exp"][t["log"][A[mask]] + t["log"][B[mask]]]
        return out

    def vadd(self, A: np.ndarray, B) -> np.ndarray:
        if self.k == 1:
            return (A + B) % self.p
        B = np.broadcast_to(np.asarray(B, dtype=np.int64), A.shape)
        if self.p == 2:
            return A ^ B
        t = self.np_tables()
        out = np.where(A == 0, B, A).astype(np.int64)
        mask = (A != 0) & (B != 0)
        la = t["log"][A[mask]]
        z = t["zech"][(t["log"][B[mask]] - la) % (self.order - 1)]
        res = np.where(z < 0, 0, t["exp"][la + np.where(z < 0, 0, z)])
        out[mask] = res
        return out

    def veval(self, coeffs: Sequence[int], X: np.ndarray) -> np.ndarray:
        """Horner evaluation of a univariate polynomial (codes, low first)."""
        acc = np.full(X.shape, coeffs[-1] if coeffs else 0, dtype=np.int64)
        for c in reversed(coeffs[:-1]):
            acc = self.vmul(acc, X)
            if c:
                acc = self.vadd(acc, c)
        return acc

    def eval_poly(self, coeffs: Sequence[int], x: int) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc


@functools.lru_cache(maxsize=None)
def make_field_with_modulus(p: int, k: int, modulus: tuple[int, ...]) -> FieldCtx:
    return FieldCtx(p, k, modulus)


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldCtx:
    """F_{p^k} with the lexicographically first irreducible modulus."""
    if not isinstance(p, int) or not is_prime(p):
        raise UsageError(f"p={p} is not prime")
    if not isinstance(k, int) or k < 1:
        raise UsageError(f"extension degree must be a positive integer, got {k}")
    return make_field_with_modulus(p, k, first_irreducible(p, k))


def extension(ctx: FieldCtx, m: int) -> FieldCtx:
    """The canonical field of degree m over ctx (as built by make_field)."""
    return make_field(ctx.p, ctx.k * m)


@dataclass(frozen=True)
class FieldElement:
    ctx: FieldCtx
    code: int

    @property
    def coeffs(self) -> list[int]:
        return self.ctx.coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise UsageError(f"context mismatch: {self.ctx} vs {other.ctx}")
            return other.code
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.sub(b, self.code))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.div(b, self.code))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.code, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv(self.code))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return format_element(self.ctx, self.code)


def format_element(ctx: FieldCtx, code: int, gen: str = "g") -> str:
    """Render as a polynomial in the generator, e.g. ``g^2+2*g+1``."""
    cs = ctx.coeffs(code)
    terms = []
    for i in range(len(cs) - 1, -1, -1):
        c = cs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = gen if i == 1 else f"{gen}^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


def parse_element(ctx: FieldCtx, text: str, gen: str = "g") -> int:
    """Parse an integer polynomial in the generator (``"g+1"``, ``"2*g^3-g"``)
    and return its code in ctx."""
    import re

    s = text.replace(" ", "")
    if not s:
        raise UsageError("empty field element")
    if s[0] not in "+-":
        s = "+" + s
    pattern = re.compile(rf"([+-])(\d+)?(\*?{gen}(?:\^(\d+))?)?")
    pos = 0
    coeffs: dict[int, int] = {}
    while pos < len(s):
        m = pattern.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise UsageError(f"cannot parse field element {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) is not None else 1
        if m.group(3) is None:
            e = 0
        elif m.group(3).startswith("*") and m.group(2) is None:
            raise UsageError(f"cannot parse field element {text!r}")
        else:
            e = int(m.group(4)) if m.group(4) is not None else 1
        coeffs[e] = coeffs.get(e, 0) + sign * c
        pos = m.end()
    deg = max(coeffs)
    return ctx.from_coeffs([coeffs.get(i, 0) for i in range(deg + 1)])


# ---------------------------------------------------------------------------


def field_ops(a: FieldElement, b: FieldElement) -> dict[str, FieldElement]:
    """All binary operations at once; handy for smoke checks."""
    out = {"add": a + b, "sub": a - b, "mul": a * b}
    if b:
        out["div"] = a / b
    return out


class Embedding:
    """Ring embedding F_{p^k} -> F_{p^{km}} fixed by a root of the source
    modulus, the first one in the target's enumeration order."""

    def __init__(self, src: FieldCtx, tgt: FieldCtx):
        if src.p != tgt.p or tgt.k % src.k:
            raise UsageError(f"cannot embed {src} into {tgt}")
        self.src, self.tgt = src, tgt
        if src.k == 1:
            self.root = 0
        else:
            roots = root_codes(tgt, list(src.modulus))
            if not roots:
                raise InconsistencyError(f"modulus of {src} has no root in {tgt}")
            self.root = roots[0]
        self._table: list[int] | None = None
        if src.order <= TABLE_LIMIT:
            self._table = [self._map(c) for c in range(src.order)]

    def _map(self, code: int) -> int:
        tgt = self.tgt
        if self.src.k == 1:
            return code
        acc = 0
        for c in reversed(self.src.coeffs(code)):
            acc = tgt.add(tgt.mul(acc, self.root), c)
        return acc

    def __call__(self, code: int) -> int:
        if self._table is not None:
            return self._table[code]
        return self._map(code)


@functools.lru_cache(maxsize=None)
def embedding(src: FieldCtx, tgt: FieldCtx) -> Embedding:
    return Embedding(src, tgt)


def embed(a: FieldElement, target: FieldCtx) -> FieldElement:
    return FieldElement(target, embedding(a.ctx, target)(a.code))


def frobenius(a: FieldElement, q: int) -> FieldElement:
    """a -> a^q for q a power of the characteristic."""
    pp = prime_power(q)
    if pp is None or pp[0] != a.ctx.p:
        raise UsageError(f"q={q} is not a power of p={a.ctx.p}")
    return a**q


def enumerate_field(ctx: FieldCtx, limit: int = ENUM_LIMIT) -> list[FieldElement]:
    if ctx.order > limit:
        raise BudgetExceeded(f"{ctx} has more than {limit} elements")
    return [FieldElement(ctx, c) for c in range(ctx.order)]


def root_codes(ctx: FieldCtx, coeffs: Sequence[int]) -> list[int]:
    """Codes a with poly(a) = 0, ascending; exhaustive scan of the field."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise UsageError("find_roots of the zero polynomial")
    if len(coeffs) == 1:
        return []
    if ctx.order > ENUM_LIMIT:
        raise BudgetExceeded(f"{ctx} too large for exhaustive root scan")
    if ctx.k == 1 or ctx.has_tables:
        X = np.arange(ctx.order, dtype=np.int64)
        vals = ctx.veval(coeffs, X)
        return [int(i) for i in np.flatnonzero(vals == 0)]
    return [a for a in range(ctx.order) if ctx.eval_poly(coeffs, a) == 0]


def find_roots(poly: Sequence, ctx: FieldCtx) -> list[FieldElement]:
    """Distinct roots of ``poly`` (coefficients low degree first) in ctx."""
    return [FieldElement(ctx, c) for c in root_codes(ctx, [ctx.code_of(c) for c in poly])]


def isqrt_exact(n: int) -> int | None:
    r = math.isqrt(n)
    return r if r * r == n else None
