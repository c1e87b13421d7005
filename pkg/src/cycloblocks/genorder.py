"""Exact arithmetic of cyclotomic products in the Frobenius parameter q.

A :class:`GenericOrder` is a signed product

    scalar * q^N * prod_d Phi_d(q)^{a_d}

with ``scalar`` a rational number and integer exponents.  Group orders,
character degrees and centre orders of finite reductive groups all have
this shape, and every identity we care about (divisibility, ell-parts,
defects, Ennola duality) can be checked by exact evaluation at concrete
prime powers.  No floating point is used anywhere.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


# ---------------------------------------------------------------------------
# integer polynomials (dense, constant coefficient first)

def poly_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c == 0:
            continue
        for j, d in enumerate(b):
            out[i + j] += c * d
    return tuple(out)


def poly_divmod(num: tuple[int, ...], den: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Exact division in Z[q]; the denominator must be monic."""
    num_l = list(num)
    q = [0] * max(1, len(num) - len(den) + 1)
    for shift in range(len(num) - len(den), -1, -1):
        c = num_l[shift + len(den) - 1]
        q[shift] = c
        for j, d in enumerate(den):
            num_l[shift + j] -= c * d
    rem = tuple(num_l[: len(den) - 1]) if len(den) > 1 else ()
    return tuple(q), rem


def poly_trim(a: Iterable[int]) -> tuple[int, ...]:
    out = list(a)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> tuple[int, ...]:
    """Coefficients of the d-th cyclotomic polynomial Phi_d.

    Computed by dividing q^d - 1 by Phi_e for all proper divisors e of d,
    which is the defining recursion.
    """
    if d < 1:
        raise ValueError(f"cyclotomic index must be >= 1, got {d}")
    poly: tuple[int, ...] = tuple([-1] + [0] * (d - 1) + [1])
    for e in range(1, d):
        if d % e == 0:
            poly, rem = poly_divmod(poly, cyclotomic_poly(e))
            assert rem == () or all(c == 0 for c in rem)
            poly = poly_trim(poly)
    return poly


def cyclotomic(d: int) -> "GenericOrder":
    """Phi_d as a GenericOrder."""
    return GenericOrder(Fraction(1), 0, ((d, 1),))


@functools.lru_cache(maxsize=None)
def cyclotomic_value(d: int, q: int) -> int:
    acc = 0
    for i, c in enumerate(cyclotomic_poly(d)):
        acc += c * q**i
    return acc


def factor_into_cyclotomics(coeffs: tuple[int, ...]) -> "GenericOrder":
    """Factor an integer polynomial in q as scalar * q^N * prod Phi_d^a_d.

    Raises ValueError when a non-cyclotomic factor remains; for the
    polynomials handled here (orders, degrees, substitutions q -> q^k of
    cyclotomic products) that signals corrupted input.
    """
    poly = poly_trim(coeffs)
    if not poly:
        raise ValueError("cannot factor the zero polynomial")
    qpow = 0
    while poly[0] == 0:
        qpow += 1
        poly = poly[1:]
    cyclo: dict[int, int] = {}
    deg = len(poly) - 1
    bound = 6 * deg * deg + 6
    d = 1
    while len(poly) > 1:
        if _totient(d) <= len(poly) - 1:
            phi = cyclotomic_poly(d)
            while len(phi) <= len(poly):
                quo, rem = poly_divmod(poly, phi)
                if any(rem):
                    break
                poly = poly_trim(quo)
                cyclo[d] = cyclo.get(d, 0) + 1
        d += 1
        if d > bound:
            raise ValueError("polynomial has a non-cyclotomic factor")
    scalar = Fraction(poly[0])
    return GenericOrder(scalar, qpow, tuple(sorted(cyclo.items())))


@functools.lru_cache(maxsize=None)
def _totient(d: int) -> int:
    out = d
    n = d
    p = 2
    while p * p <= n:
        if n % p == 0:
            out -= out // p
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out -= out // n
    return out


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenericOrder:
    """A signed rational multiple of q^N * prod Phi_d(q)^{a_d}.

    Immutable; all arithmetic returns new instances.  Exponents may be
    negative (quotients of orders are first-class citizens), the scalar
    may be a non-integral rational (generic character degrees need 1/b).
    """

    scalar: Fraction
    qpow: int
    cyclo: tuple[tuple[int, int], ...]

    @staticmethod
    def one() -> "GenericOrder":
        return GenericOrder(Fraction(1), 0, ())

    @staticmethod
    def from_parts(scalar: Fraction | int, qpow: int, cyclo: Mapping[int, int]) -> "GenericOrder":
        items = tuple(sorted((d, m) for d, m in cyclo.items() if m != 0))
        return GenericOrder(Fraction(scalar), qpow, items)

    @staticmethod
    def q_power(n: int) -> "GenericOrder":
        return GenericOrder(Fraction(1), n, ())

    @staticmethod
    def q_pow_minus_one(d: int) -> "GenericOrder":
        """q^d - 1 = prod_{e | d} Phi_e."""
        return GenericOrder.from_parts(1, 0, {e: 1 for e in range(1, d + 1) if d % e == 0})

    @staticmethod
    def q_pow_plus_one(d: int) -> "GenericOrder":
        """q^d + 1 = prod over e dividing 2d but not d."""
        return GenericOrder.from_parts(
            1, 0, {e: 1 for e in range(1, 2 * d + 1) if (2 * d) % e == 0 and d % e != 0}
        )

    # -- ring structure ----------------------------------------------------

    def __mul__(self, other: "GenericOrder") -> "GenericOrder":
        acc = dict(self.cyclo)
        for d, m in other.cyclo:
            acc[d] = acc.get(d, 0) + m
        return GenericOrder.from_parts(self.scalar * other.scalar, self.qpow + other.qpow, acc)

    def __truediv__(self, other: "GenericOrder") -> "GenericOrder":
        acc = dict(self.cyclo)
        for d, m in other.cyclo:
            acc[d] = acc.get(d, 0) - m
        return GenericOrder.from_parts(self.scalar / other.scalar, self.qpow - other.qpow, acc)

    def __pow__(self, n: int) -> "GenericOrder":
        return GenericOrder.from_parts(
            self.scalar**n, self.qpow * n, {d: m * n for d, m in self.cyclo}
        )

    def __neg__(self) -> "GenericOrder":
        return GenericOrder(-self.scalar, self.qpow, self.cyclo)

    def __abs__(self) -> "GenericOrder":
        return GenericOrder(abs(self.scalar), self.qpow, self.cyclo)

    # -- inspection ----------------------------------------------------------

    def multiplicity(self, d: int) -> int:
        """Exponent of Phi_d."""
        for e, m in self.cyclo:
            if e == d:
                return m
        return 0

    @property
    def degree(self) -> int:
        """Degree in q (the sum of phi(d)*a_d plus N)."""
        return self.qpow + sum(m * (len(cyclotomic_poly(d)) - 1) for d, m in self.cyclo)

    def is_laurent_free(self) -> bool:
        return all(m >= 0 for _, m in self.cyclo) and self.qpow >= 0

    def substitute_q_power(self, k: int) -> "GenericOrder":
        """The image under q -> q^k, refactored into cyclotomic form."""
        if k == 1:
            return self
        num: dict[int, int] = {}
        den: dict[int, int] = {}
        for d, m in self.cyclo:
            part = factor_into_cyclotomics(substituted_cyclotomic(d, k))
            for e, me in part.cyclo:
                tgt = num if m > 0 else den
                tgt[e] = tgt.get(e, 0) + me * abs(m)
        acc = {e: num.get(e, 0) - den.get(e, 0) for e in set(num) | set(den)}
        return GenericOrder.from_parts(self.scalar, self.qpow * k, acc)

    def evaluate(self, q: int) -> Fraction:
        """Exact value at a concrete q >= 2."""
        val = self.scalar * Fraction(q) ** self.qpow
        for d, m in self.cyclo:
            val *= Fraction(cyclotomic_value(d, q)) ** m
        return val

    def evaluate_int(self, q: int) -> int:
        val = self.evaluate(q)
        if val.denominator != 1:
            raise ValueError(f"{self} does not evaluate to an integer at q={q}")
        return val.numerator

    def expand(self) -> tuple[int, ...]:
        """Dense integer coefficients; requires integral scalar and no negative exponents."""
        if self.scalar.denominator != 1:
            raise ValueError("cannot expand with a fractional scalar")
        if not self.is_laurent_free():
            raise ValueError("cannot expand with negative exponents")
        poly: tuple[int, ...] = (self.scalar.numerator,)
        poly = poly_mul(poly, tuple([0] * self.qpow + [1]))
        for d, m in self.cyclo:
            for _ in range(m):
                poly = poly_mul(poly, cyclotomic_poly(d))
        return poly_trim(poly)

    def divides(self, other: "GenericOrder", samples: Iterable[int] = (2, 3, 5, 7, 11)) -> bool:
        """Integer divisibility of evaluations at the sampled q."""
        for q in samples:
            a = self.evaluate(q)
            b = other.evaluate(q)
            if a == 0:
                return False
            if (b / a).denominator != 1:
                return False
        return True

    # -- canonical text form -------------------------------------------------

    def __str__(self) -> str:
        parts: list[str] = []
        if self.qpow:
            parts.append(f"q^{self.qpow}")
        for d, m in self.cyclo:
            parts.append(f"Phi{d}" + (f"^{m}" if m != 1 else ""))
        sign = "-" if self.scalar < 0 else ""
        s = abs(self.scalar)
        if s != 1 or not parts:
            num = str(s.numerator) if s.denominator == 1 else f"{s.numerator}/{s.denominator}"
            parts.insert(0, num)
        return sign + "*".join(parts)

    def expanded_str(self) -> str:
        """Human form like (q-1)^6 or q^4-q^2+1, expanded monomially."""
        poly = self.expand()
        terms = []
        for i in range(len(poly) - 1, -1, -1):
            c = poly[i]
            if c == 0:
                continue
            mag = abs(c)
            body = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            coeff = str(mag) if (i == 0 or mag != 1) else ""
            glue = "*" if coeff and body else ""
            term = coeff + glue + body
            if not terms:
                terms.append(("-" if c < 0 else "") + term)
            else:
                terms.append(("-" if c < 0 else "+") + term)
        return "".join(terms) if terms else "0"


def substituted_cyclotomic(d: int, k: int) -> tuple[int, ...]:
    """Coefficients of Phi_d(q^k)."""
    base = cyclotomic_poly(d)
    out = [0] * ((len(base) - 1) * k + 1)
    for i, c in enumerate(base):
        out[i * k] = c
    return tuple(out)


# ---------------------------------------------------------------------------
# parsing:  [+-]? [INT/INT*]? [q^INT] (*Phi INT [^INT])*   whitespace-insensitive

_TOKEN = re.compile(
    r"""
    (?P<sign>[+-])
    | (?P<frac>\d+/\d+)
    | (?P<q>q\^?(?P<qexp>\d+)?)
    | (?P<phi>Phi(?P<phid>\d+)(\^(?P<phim>-?\d+))?)
    | (?P<int>\d+)
    | (?P<mul>\*)
    """,
    re.VERBOSE,
)


def parse_order(text: str) -> GenericOrder:
    """Parse the degree-expression grammar used in data files.

    Examples: ``1/3*q^7*Phi3^2*Phi6^2*Phi9``, ``Phi1^6``, ``q^12``, ``-q^2``.
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty order expression")
    pos = 0
    scalar = Fraction(1)
    qpow = 0
    cyclo: dict[int, int] = {}
    seen = False
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"cannot parse order expression {text!r} at {s[pos:]!r}")
        pos = m.end()
        if m.lastgroup in ("sign",) or m.group("sign"):
            if seen:
                raise ValueError(f"misplaced sign in {text!r}")
            if m.group("sign") == "-":
                scalar = -scalar
            continue
        if m.group("mul"):
            continue
        seen = True
        if m.group("frac"):
            num, den = m.group("frac").split("/")
            scalar *= Fraction(int(num), int(den))
        elif m.group("q"):
            qpow += int(m.group("qexp")) if m.group("qexp") is not None else 1
        elif m.group("phi"):
            d = int(m.group("phid"))
            mult = int(m.group("phim")) if m.group("phim") is not None else 1
            cyclo[d] = cyclo.get(d, 0) + mult
        elif m.group("int"):
            scalar *= int(m.group("int"))
    return GenericOrder.from_parts(scalar, qpow, cyclo)


# ---------------------------------------------------------------------------
# ell-adic bookkeeping

def ell_valuation(n: int, ell: int) -> int:
    """v_ell(n) for a nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def ell_part(n: int, ell: int) -> int:
    """The largest power of ell dividing n."""
    if n < 1:
        raise ValueError(f"ell_part needs a positive integer, got {n}")
    return ell**ell_valuation(n, ell)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, n + 1):
        if p * p > n:
            return True  # n itself is prime
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return False


def e_of(ell: int, q: int) -> int:
    """The relevant order of q: mod ell for odd ell, mod 4 for ell = 2."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if q % ell == 0:
        raise ValueError(f"ell={ell} divides q={q}")
    if ell == 2:
        return 1 if q % 4 == 1 else 2
    e = 1
    r = q % ell
    while r != 1:
        r = (r * q) % ell
        e += 1
    return e


@dataclass(frozen=True)
class EllAdicContext:
    """A choice of prime ell and prime power q with ell not dividing q."""

    ell: int
    q: int

    def __post_init__(self) -> None:
        if not is_prime(self.ell):
            raise ValueError(f"ell={self.ell} is not prime")
        if not is_prime_power(self.q):
            raise ValueError(f"q={self.q} is not a prime power")
        if self.q % self.ell == 0:
            raise ValueError(f"ell={self.ell} divides q={self.q}")

    @property
    def e(self) -> int:
        return e_of(self.ell, self.q)


def ennola(g: GenericOrder) -> GenericOrder:
    """The image under q -> -q, in cyclotomic form.

    Phi_d moves to Phi_{2d} (d odd), Phi_{d/2} (d = 2 mod 4), or stays put
    (4 | d); the emerging sign is folded into the scalar, so the map is an
    exact involution on all GenericOrders.
    """
    cyclo: dict[int, int] = {}
    sign = -1 if g.qpow % 2 else 1
    for d, m in g.cyclo:
        if d == 1:
            tgt = 2
            sign *= -1 if m % 2 else 1
        elif d == 2:
            tgt = 1
            sign *= -1 if m % 2 else 1
        elif d % 2 == 1:
            tgt = 2 * d
        elif d % 4 == 2:
            tgt = d // 2
        else:
            tgt = d
        cyclo[tgt] = cyclo.get(tgt, 0) + m
    return GenericOrder.from_parts(g.scalar * sign, g.qpow, cyclo)


def defect(chi_degree: GenericOrder, order: GenericOrder, ctx: EllAdicContext) -> int:
    """def(chi) = v_ell(|G|(q)) - v_ell(chi(1)(q)), evaluated exactly."""
    n = order.evaluate_int(ctx.q)
    c = chi_degree.evaluate_int(ctx.q)
    if n % c != 0:
        raise ValueError("character degree does not divide the group order")
    d = ell_valuation(n, ctx.ell) - ell_valuation(c, ctx.ell)
    if d < 0:
        raise ValueError("negative defect signals inconsistent data")
    return d
