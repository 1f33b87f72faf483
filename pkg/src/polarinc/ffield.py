"""Arithmetic in odd-characteristic finite fields F_q, q = p^e.

Elements are plain integers in ``[0, q)``.  For a prime field the integer is
the residue; for an extension field it is the base-p digit string of the
coefficient vector, digit ``k`` holding the coefficient of ``t^k``.  So the
constant polynomial ``c`` is encoded as ``c`` itself, and ``-1`` is ``p - 1``
in every field.

Multiplication in an extension field is a schoolbook product followed by
reduction modulo the defining polynomial.  Nothing here uses log tables; the
numpy tables returned by :meth:`FieldSpec.tables` are derived from the scalar
operations and exist only for bulk evaluation.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DivisionByZero, EvenCharacteristic, FieldSpecError, NotPrime

__all__ = [
    "Chi",
    "FieldSpec",
    "is_prime",
    "make_prime_field",
    "make_extension_field",
    "make_field",
    "parse_field",
    "is_irreducible",
    "smallest_irreducible",
]


class Chi(enum.Enum):
    """Quadratic character value."""

    ZERO = 0
    SQUARE = 1
    NONSQUARE = -1

    @property
    def sign(self) -> int:
        return self.value


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- polynomials over F_p as coefficient tuples, constant term first ---------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m`` over F_p."""
    a = _poly_trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for k, c in enumerate(m):
            a[shift + k] = (a[shift + k] - lead * c) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, d: int):
    """All monic degree-``d`` polynomials over F_p, in increasing encoded order."""
    for low in range(p**d):
        coeffs = []
        for _ in range(d):
            low, c = divmod(low, p)
            coeffs.append(c)
        yield tuple(coeffs) + (1,)


def is_irreducible(modulus, p: int) -> bool:
    """Trial division by every monic polynomial of degree at most deg/2."""
    modulus = tuple(c % p for c in modulus)
    e = len(modulus) - 1
    if e < 1 or modulus[-1] != 1:
        return False
    for d in range(1, e // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(modulus, f, p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree ``e`` with the smallest encoded lower part.

    Candidates ``t^e + c_{e-1} t^{e-1} + ... + c_0`` are scanned by the
    integer ``sum(c_k * p**k)``, i.e. the same base-p encoding used for field
    elements.
    """
    for f in _monic_polys(p, e):
        if is_irreducible(f, p):
            return f
    raise AssertionError("an irreducible polynomial exists for every degree")


@dataclass(frozen=True)
class FieldSpec:
    """The field F_q with q = p**e, given by a monic irreducible modulus.

    Immutable; all arithmetic methods are pure.
    """

    p: int
    e: int
    modulus: tuple[int, ...]
    q: int = field(init=False)

    def __post_init__(self):
        if self.p == 2:
            raise EvenCharacteristic("characteristic 2 is not supported: the polar form divides by 2")
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.e < 1:
            raise FieldSpecError(f"exponent must be positive, got {self.e}")
        modulus = tuple(int(c) for c in self.modulus)
        if len(modulus) != self.e + 1 or modulus[-1] != 1 or any(not 0 <= c < self.p for c in modulus):
            raise FieldSpecError(f"modulus {modulus} is not a monic degree-{self.e} polynomial over F_{self.p}")
        if self.e > 1 and not is_irreducible(modulus, self.p):
            raise FieldSpecError(f"modulus {modulus} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "q", self.p**self.e)

    def __str__(self):
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.e}"

    def describe(self) -> dict:
        return {"q": self.q, "p": self.p, "e": self.e, "modulus": list(self.modulus)}

    # -- encoding ---------------------------------------------------------

    def _check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element index of {self}")
        return a

    def to_coeffs(self, a: int) -> tuple[int, ...]:
        """Coefficient vector of ``a``, constant term first, length e."""
        self._check(a)
        out = []
        for _ in range(self.e):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.e:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        idx = 0
        for c in reversed(coeffs):
            idx = idx * self.p + c % self.p
        return idx

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> F_q."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    # -- arithmetic --------------------------------------------------------

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a: int, b: int) -> int:
        self._check(a), self._check(b)
        if self.e == 1:
            return (a + b) % self.p
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        return self.from_coeffs([(x + y) % self.p for x, y in zip(ca, cb)])

    def neg(self, a: int) -> int:
        self._check(a)
        if self.e == 1:
            return -a % self.p
        return self.from_coeffs([-c % self.p for c in self.to_coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        self._check(a), self._check(b)
        if self.e == 1:
            return a * b % self.p
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        prod_ = [0] * (2 * self.e - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod_[i + j] += x * y
        return self.from_coeffs(_poly_mod(prod_, self.modulus, self.p))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        result, base = self.one, self._check(a)
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        if self._check(a) == 0:
            raise DivisionByZero(f"0 has no inverse in {self}")
        # a^(q-2) = a^-1 by Lagrange on the cyclic group of order q-1
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def chi(self, a: int) -> Chi:
        """Quadratic character by Euler's criterion."""
        if self._check(a) == 0:
            return Chi.ZERO
        r = self.pow(a, (self.q - 1) // 2)
        if r == self.one:
            return Chi.SQUARE
        assert r == self.neg(self.one), "Euler criterion produced neither 1 nor -1"
        return Chi.NONSQUARE

    def is_square(self, a: int) -> bool:
        return self.chi(a) is Chi.SQUARE

    @cached_property
    def canonical_nonsquare(self) -> int:
        """Smallest-index nonsquare element."""
        return next(a for a in range(1, self.q) if self.chi(a) is Chi.NONSQUARE)

    def sqrt(self, a: int) -> int | None:
        """Some square root of ``a`` by exhaustive search, or None."""
        for x in range(self.q):
            if self.mul(x, x) == a:
                return x
        return None

    # -- bulk tables -------------------------------------------------------

    @cached_property
    def _tables(self):
        q = self.q
        idx = np.arange(q)
        digits = np.stack([(idx // self.p**k) % self.p for k in range(self.e)], axis=1)
        weights = self.p ** np.arange(self.e)
        add = (((digits[:, None, :] + digits[None, :, :]) % self.p) @ weights).astype(np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                mul[a, b] = mul[b, a] = self.mul(a, b)
        neg = np.array([self.neg(a) for a in range(q)], dtype=np.int64)
        chi = np.array([self.chi(a).sign for a in range(q)], dtype=np.int8)
        for t in (add, mul, neg, chi):
            t.setflags(write=False)
        return add, mul, neg, chi

    def tables(self):
        """Read-only ``(add, mul, neg, chi)`` lookup arrays for vectorized use.

        ``add`` and ``mul`` are q x q, ``neg`` has length q, and ``chi`` holds
        the character as -1/0/1.
        """
        return self._tables


def make_prime_field(p: int) -> FieldSpec:
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported: the polar form divides by 2")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return FieldSpec(p, 1, (0, 1))


def make_extension_field(p: int, e: int, modulus=None) -> FieldSpec:
    """F_{p^e}; the modulus defaults to :func:`smallest_irreducible`."""
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported: the polar form divides by 2")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e == 1 and modulus is None:
        return make_prime_field(p)
    if modulus is None:
        modulus = smallest_irreducible(p, e)
    return FieldSpec(p, e, tuple(modulus))


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NotPrime(f"{q} is not a prime power")
    return p, e


def make_field(q: int, modulus=None) -> FieldSpec:
    """Field of order ``q`` (any odd prime power)."""
    p, e = _prime_power(q)
    return make_extension_field(p, e, modulus)


_FIELD_RE = re.compile(r"^\s*(?:q\s*=\s*)?(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_field(text: str, modulus: str | None = None) -> FieldSpec:
    """Parse ``"9"``, ``"3^2"`` or ``"q=3^2"``, with an optional modulus override.

    The modulus is written ``"c0,c1,...,1"`` (constant term first) and may be
    prefixed by ``modulus=``.
    """
    m = _FIELD_RE.match(str(text))
    if not m:
        raise FieldSpecError(f"cannot parse field description {text!r}")
    base, exp = int(m.group(1)), m.group(2)
    coeffs = None
    if modulus is not None:
        body = modulus.strip()
        if body.startswith("modulus="):
            body = body[len("modulus="):]
        try:
            coeffs = tuple(int(c) for c in body.split(","))
        except ValueError:
            raise FieldSpecError(f"cannot parse modulus {modulus!r}") from None
    if exp is None:
        return make_field(base, coeffs)
    e = int(exp)
    if base == 2:
        raise EvenCharacteristic("characteristic 2 is not supported: the polar form divides by 2")
    if not is_prime(base):
        raise NotPrime(f"{base} is not prime")
    return make_extension_field(base, e, coeffs)
