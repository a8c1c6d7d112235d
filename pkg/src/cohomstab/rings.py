"""Exact coefficient rings.

Every ring is represented by a :class:`CoeffRing` instance that knows how to
operate on its own element representation:

================  =======================================
ring              element representation
================  =======================================
Integers          ``int``
Rationals         ``fractions.Fraction``
PrimeField(p)     ``int`` in ``[0, p)``
FiniteField(p,n)  tuple of ``n`` ints mod p (poly coeffs, low degree first)
LocalizedIntegers(p)  ``Fraction`` with denominator coprime to p
IntegersMod(m)    ``int`` in ``[0, m)``
================  =======================================

No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import UnsupportedRing


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class CoeffRing:
    """Base class; concrete rings override the arithmetic hooks."""

    tag: str
    characteristic: int
    is_field = False
    is_dvr = False  # discrete valuation ring Z_(p)

    # -- element construction -------------------------------------------------

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        raise NotImplementedError

    # -- arithmetic -----------------------------------------------------------

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def divides(self, a, b) -> bool:
        """Whether a | b in the ring (a may be zero only if b is)."""
        raise NotImplementedError

    def exact_div(self, b, a):
        """b / a, assuming ``divides(a, b)``."""
        raise NotImplementedError

    # -- misc -----------------------------------------------------------------

    def element_str(self, a) -> str:
        return str(a)

    def __repr__(self):
        return self.tag

    def __eq__(self, other):
        return isinstance(other, CoeffRing) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)


class IntegerRing(CoeffRing):
    tag = "Z"
    characteristic = 0

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit in Z")
        return a

    def divides(self, a, b):
        if a == 0:
            return b == 0
        return b % a == 0

    def exact_div(self, b, a):
        q, r = divmod(b, a)
        if r:
            raise ZeroDivisionError(f"{a} does not divide {b}")
        return q


class RationalField(CoeffRing):
    tag = "Q"
    characteristic = 0
    is_field = True

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        return 1 / Fraction(a)

    def divides(self, a, b):
        return a != 0 or b == 0

    def exact_div(self, b, a):
        return Fraction(b) / a


class PrimeField(CoeffRing):
    characteristic: int
    is_field = True

    def __init__(self, p: int):
        if not _is_prime(p):
            raise UnsupportedRing(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.tag = f"F{p}"

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        return pow(a, self.p - 2, self.p)

    def divides(self, a, b):
        return a % self.p != 0 or b % self.p == 0

    def exact_div(self, b, a):
        return (b * self.inv(a)) % self.p

    def elements(self):
        return range(self.p)


def _poly_mul_mod(a, b, modulus, p):
    n = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1 if a and b else 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] = (prod[i + j] + x * y) % p
    # reduce: x^(n+k) = -sum modulus[i] x^(i+k)
    for k in range(len(prod) - 1, n - 1, -1):
        lead = prod[k]
        if lead:
            prod[k] = 0
            for i in range(n):
                prod[k - n + i] = (prod[k - n + i] - lead * modulus[i]) % p
    out = [x % p for x in prod[:n]]
    while len(out) < n:
        out.append(0)
    return tuple(out)


def _find_irreducible(p: int, n: int):
    """First monic irreducible of degree n over F_p in lexicographic coeff order.

    Returned as the list of lower coefficients [c0,...,c_{n-1}] of
    x^n + c_{n-1} x^{n-1} + ... + c0.
    """

    def is_irreducible(lower):
        # trial division by all monic polys of degree 1..n//2
        full = list(lower) + [1]

        def divmod_poly(num, den):
            num = list(num)
            dn = len(den) - 1
            while len(num) - 1 >= dn and any(num):
                if num[-1] == 0:
                    num.pop()
                    continue
                shift = len(num) - 1 - dn
                lead = num[-1]
                for i in range(dn + 1):
                    num[shift + i] = (num[shift + i] - lead * den[i]) % p
                while num and num[-1] == 0:
                    num.pop()
            return num  # remainder

        for d in range(1, n // 2 + 1):
            for idx in range(p**d):
                low = []
                t = idx
                for _ in range(d):
                    low.append(t % p)
                    t //= p
                den = low + [1]
                rem = divmod_poly(full, den)
                if not any(rem):
                    return False
        return True

    for idx in range(p**n):
        lower = []
        t = idx
        for _ in range(n):
            lower.append(t % p)
            t //= p
        if is_irreducible(lower):
            return lower
    raise UnsupportedRing(f"no irreducible of degree {n} over F_{p}")


class FiniteField(CoeffRing):
    """F_{p^n} as F_p[x]/(f) for the first irreducible monic f of degree n."""

    is_field = True

    def __init__(self, p: int, n: int):
        if not _is_prime(p):
            raise UnsupportedRing(f"{p} is not prime")
        if n < 1:
            raise UnsupportedRing("extension degree must be >= 1")
        self.p = p
        self.n = n
        self.characteristic = p
        self.tag = f"F{p}^{n}" if n > 1 else f"F{p}"
        self.modulus = _find_irreducible(p, n)  # lower coeffs of monic modulus

    def from_int(self, k):
        c = [0] * self.n
        c[0] = k % self.p
        return tuple(c)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        return _poly_mul_mod(a, b, self.modulus + [1], self.p)

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def is_unit(self, a):
        return any(a)

    def inv(self, a):
        # a^(q-2)
        q = self.p**self.n
        return self.pow(a, q - 2)

    def pow(self, a, k):
        out = self.one()
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def divides(self, a, b):
        return any(a) or not any(b)

    def exact_div(self, b, a):
        return self.mul(b, self.inv(a))

    def elements(self):
        for idx in range(self.p**self.n):
            c = []
            t = idx
            for _ in range(self.n):
                c.append(t % self.p)
                t //= self.p
            yield tuple(c)

    def in_subfield(self, a, m: int) -> bool:
        """Whether a lies in the subfield F_{p^m} (requires m | n)."""
        return self.pow(a, self.p**m) == a

    def element_str(self, a):
        if not any(a[1:]):
            return str(a[0])
        return "+".join(
            f"{c}t^{i}" if i else str(c) for i, c in enumerate(a) if c
        )


class LocalizedIntegers(CoeffRing):
    """Z localized at a prime p: fractions a/b with p not dividing b."""

    is_dvr = True

    def __init__(self, p: int):
        if not _is_prime(p):
            raise UnsupportedRing(f"{p} is not prime")
        self.p = p
        self.characteristic = 0
        self.tag = f"Z({p})"

    def from_int(self, n):
        return Fraction(n)

    def check(self, a: Fraction):
        if a.denominator % self.p == 0:
            raise UnsupportedRing(f"{a} is not p-integral at p={self.p}")
        return a

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def valuation(self, a: Fraction) -> int:
        """p-adic valuation; valuation of 0 is a large sentinel."""
        if a == 0:
            return 1 << 60
        v = 0
        num = a.numerator
        while num % self.p == 0:
            num //= self.p
            v += 1
        return v

    def is_unit(self, a):
        return a != 0 and self.valuation(a) == 0

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit in Z_({self.p})")
        return 1 / Fraction(a)

    def divides(self, a, b):
        if a == 0:
            return b == 0
        return self.valuation(a) <= self.valuation(b)

    def exact_div(self, b, a):
        if not self.divides(a, b):
            raise ZeroDivisionError(f"{a} does not divide {b} in Z_({self.p})")
        return Fraction(b) / a


class IntegersMod(CoeffRing):
    """Z/m; supports arithmetic and reduction maps only (no SNF)."""

    def __init__(self, m: int):
        if m < 2:
            raise UnsupportedRing("modulus must be >= 2")
        self.m = m
        self.characteristic = m
        self.tag = f"Z/{m}"

    def from_int(self, n):
        return n % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def is_unit(self, a):
        return gcd(a, self.m) == 1

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit mod {self.m}")
        return pow(a, -1, self.m)

    def divides(self, a, b):
        g = gcd(a, self.m)
        return b % g == 0

    def exact_div(self, b, a):
        g = gcd(a, self.m)
        if b % g:
            raise ZeroDivisionError(f"{a} does not divide {b} mod {self.m}")
        # solve a x = b mod m
        return (pow(a // g, -1, self.m // g) * (b // g)) % (self.m // g)


ZZ = IntegerRing()
QQ = RationalField()

_cache: dict[str, CoeffRing] = {}


def Fp(p: int) -> PrimeField:
    key = f"F{p}"
    if key not in _cache:
        _cache[key] = PrimeField(p)
    return _cache[key]  # type: ignore[return-value]


def GF(p: int, n: int) -> FiniteField:
    key = f"F{p}^{n}"
    if key not in _cache:
        _cache[key] = FiniteField(p, n)
    return _cache[key]  # type: ignore[return-value]


def Zloc(p: int) -> LocalizedIntegers:
    key = f"Z({p})"
    if key not in _cache:
        _cache[key] = LocalizedIntegers(p)
    return _cache[key]  # type: ignore[return-value]


def Zmod(m: int) -> IntegersMod:
    key = f"Z/{m}"
    if key not in _cache:
        _cache[key] = IntegersMod(m)
    return _cache[key]  # type: ignore[return-value]


def parse_ring(spec: str) -> CoeffRing:
    """Parse a ring descriptor: Z | Q | Fp:p | Fq:p,n | Zp:p | Zmod:m | F2, F3...

    Shorthands like ``F2`` mean the prime field.
    """
    s = spec.strip()
    if s == "Z":
        return ZZ
    if s == "Q":
        return QQ
    if s.startswith("Fp:"):
        return Fp(int(s[3:]))
    if s.startswith("Fq:"):
        p, n = s[3:].split(",")
        return GF(int(p), int(n))
    if s.startswith("Zp:"):
        return Zloc(int(s[3:]))
    if s.startswith("Zmod:"):
        return Zmod(int(s[5:]))
    if s.startswith("F") and s[1:].isdigit():
        return Fp(int(s[1:]))
    raise UnsupportedRing(f"cannot parse ring {spec!r}")
