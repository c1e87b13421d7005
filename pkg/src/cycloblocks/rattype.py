"""Rational types of finite reductive groups and their generic orders.

A rational type is a finite product of (possibly twisted) simple factors
over extension fields together with a torus part, e.g.::

    2E6(q).2A2(q)        Phi1^3.D4(q)        A2(q^2).2A2(q)       Phi1^6

The generic order of such a type is an exact cyclotomic product; twisted
factors use the eigenvalues of the diagram automorphism on the invariant
degrees, extension fields substitute q -> q^k.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from fractions import Fraction

from .genorder import GenericOrder, ennola, parse_order
from .rootdata import build_root_system, weyl_degrees


@dataclass(frozen=True)
class Congruence:
    """q is admissible when q mod modulus lies in residues."""

    modulus: int
    residues: frozenset[int]

    def matches(self, q: int) -> bool:
        return q % self.modulus in self.residues

    def __str__(self) -> str:
        res = ",".join(str(r) for r in sorted(self.residues))
        return f"{res}mod{self.modulus}"

    @staticmethod
    def parse(text: str) -> "Congruence":
        if text in ("any", "*"):
            return Congruence(1, frozenset({0}))
        m = re.fullmatch(r"([\d,]+)mod(\d+)", text)
        if not m:
            raise ValueError(f"bad congruence {text!r}")
        return Congruence(int(m.group(2)), frozenset(int(r) for r in m.group(1).split(",")))


@dataclass(frozen=True)
class SimpleFactor:
    """One twisted simple factor TYPE_rank(q^k), tilde marks short-root copies."""

    letter: str
    rank: int
    twist: int = 1
    field: int = 1
    tilde: bool = False

    def __post_init__(self) -> None:
        if self.twist not in (1, 2, 3):
            raise ValueError(f"unsupported twist {self.twist}")
        if self.twist == 3 and (self.letter, self.rank) != ("D", 4):
            raise ValueError("twist 3 only exists on D4")
        if self.twist == 2 and self.letter not in ("A", "D", "E"):
            raise ValueError(f"no order-2 twist on type {self.letter}")
        if self.letter == "E" and self.twist == 2 and self.rank != 6:
            raise ValueError("among E-types only E6 admits a twist")

    @property
    def type_label(self) -> str:
        return f"{self.letter}{self.rank}"

    def __str__(self) -> str:
        twist = str(self.twist) if self.twist > 1 else ""
        tilde = "~" if self.tilde else ""
        field = "(q)" if self.field == 1 else f"(q^{self.field})"
        return f"{twist}{self.letter}{self.rank}{tilde}{field}"


@dataclass(frozen=True)
class RationalType:
    """A product of simple factors and a torus part, with optional congruence.

    component_group > 1 marks a disconnected centralizer C with
    |C^F : C^{o F}| component group order (printed as a trailing .2).
    """

    factors: tuple[SimpleFactor, ...]
    torus: GenericOrder
    congruence: Congruence | None = None
    component_group: int = 1

    def __str__(self) -> str:
        parts = []
        if self.torus != GenericOrder.one():
            parts.append(str(self.torus).replace("*", ""))
        seen: list[tuple[str, int]] = []
        for f in self.factors:
            s = str(f)
            if seen and seen[-1][0] == s:
                seen[-1] = (s, seen[-1][1] + 1)
            else:
                seen.append((s, 1))
        parts.extend(s + (f"^{k}" if k > 1 else "") for s, k in seen)
        body = ".".join(parts) if parts else "1"
        return body + (f".{self.component_group}" if self.component_group > 1 else "")

    @property
    def is_torus(self) -> bool:
        return not self.factors

    def derived_key(self) -> tuple[tuple[str, int, int, int], ...]:
        """Multiset fingerprint of [G,G]: (letter, rank, twist, field) sorted."""
        return tuple(sorted((f.letter, f.rank, f.twist, f.field) for f in self.factors))

    def semisimple_label(self) -> str:
        """Type label of the derived subgroup, tilde-free, e.g. A5+A2+A1."""
        toks = sorted(
            (f"{f.twist if f.twist > 1 else ''}{f.letter}{f.rank}" + (f"(q^{f.field})" if f.field > 1 else ""))
            for f in self.factors
        )
        return "+".join(toks) if toks else "-"


# ---------------------------------------------------------------------------
# parsing

_FACTOR_RE = re.compile(
    r"(?P<twist>[23])?(?P<letter>[A-G])(?P<rank>\d+)(?P<tilde>~)?"
    r"(\(q(\^(?P<field>\d+))?\))?(\^(?P<mult>\d+))?$"
)


def parse_rational_type(text: str, congruence: Congruence | None = None) -> RationalType:
    """Parse strings like ``Phi1^2.D4(q)`` or ``2A5(q).2A2(q)A1(q)``.

    Parts are separated by dots; a juxtaposed tail like ``A2(q)A1(q)`` inside
    one part is tolerated since closing parens make the split unambiguous.
    """
    text = text.strip()
    if text in ("1", "-"):
        return RationalType((), GenericOrder.one(), congruence)
    component_group = 1
    m_cg = re.fullmatch(r"(.*)\.([23])", text)
    if m_cg:
        text, component_group = m_cg.group(1), int(m_cg.group(2))
    factors: list[SimpleFactor] = []
    torus = GenericOrder.one()
    for part in _split_parts(text):
        if part.startswith("Phi"):
            g = parse_order(re.sub(r"(?<=\d)Phi", "*Phi", part))
            if g.scalar != 1 or g.qpow != 0 or any(m < 0 for _, m in g.cyclo):
                raise ValueError(f"bad torus part {part!r} in {text!r}")
            torus = torus * g
            continue
        m = _FACTOR_RE.match(part)
        if not m:
            raise ValueError(f"bad factor {part!r} in rational type {text!r}")
        fac = SimpleFactor(
            letter=m.group("letter"),
            rank=int(m.group("rank")),
            twist=int(m.group("twist") or 1),
            field=int(m.group("field") or 1),
            tilde=bool(m.group("tilde")),
        )
        factors.extend([fac] * int(m.group("mult") or 1))
    return RationalType(tuple(factors), torus, congruence, component_group)


_PART_TOKEN = re.compile(
    r"(?:Phi\d+(?:\^\d+)?)+|[23]?[A-G]\d+~?(?:\(q(?:\^\d+)?\))?(?:\^\d+)?"
)


def _split_parts(text: str) -> list[str]:
    parts = []
    for chunk in text.split("."):
        pos = 0
        while pos < len(chunk):
            m = _PART_TOKEN.match(chunk, pos)
            if not m:
                raise ValueError(f"cannot tokenize {chunk!r} in rational type {text!r}")
            parts.append(m.group(0))
            pos = m.end()
    return parts


def split_torus(rank: int) -> RationalType:
    return RationalType((), GenericOrder.from_parts(1, 0, {1: rank}))


# ---------------------------------------------------------------------------
# generic orders

@functools.lru_cache(maxsize=None)
def _untwisted_order(letter: str, rank: int) -> GenericOrder:
    rs = build_root_system(f"{letter}{rank}")
    order = GenericOrder.q_power(len(rs.positive_roots))
    for d in weyl_degrees(rs):
        order = order * GenericOrder.q_pow_minus_one(d)
    return order


@functools.lru_cache(maxsize=None)
def _factor_order_base(letter: str, rank: int, twist: int) -> GenericOrder:
    """Order of TYPE(q) with the given twist, before field substitution."""
    if twist == 1:
        return _untwisted_order(letter, rank)
    if twist == 3:
        # 3D4: q^12 (q^2-1)(q^6-1)(q^8+q^4+1); the triality eigenvalues on the
        # two degree-4 invariants contribute (q^4-w)(q^4-w^2) = q^8+q^4+1.
        g = GenericOrder.q_power(12)
        g = g * GenericOrder.q_pow_minus_one(2) * GenericOrder.q_pow_minus_one(6)
        return g * GenericOrder.from_parts(1, 0, {3: 1, 6: 1, 12: 1})
    if letter == "A":
        n = rank
        g = GenericOrder.q_power(n * (n + 1) // 2)
        for d in range(2, n + 2):
            g = g * (GenericOrder.q_pow_minus_one(d) if d % 2 == 0 else GenericOrder.q_pow_plus_one(d))
        return g
    if letter == "D":
        n = rank
        g = GenericOrder.q_power(n * (n - 1)) * GenericOrder.q_pow_plus_one(n)
        for i in range(1, n):
            g = g * GenericOrder.q_pow_minus_one(2 * i)
        return g
    if letter == "E" and rank == 6:
        g = GenericOrder.q_power(36)
        for d, sign in ((2, -1), (5, 1), (6, -1), (8, -1), (9, 1), (12, -1)):
            g = g * (GenericOrder.q_pow_plus_one(d) if sign > 0 else GenericOrder.q_pow_minus_one(d))
        return g
    raise ValueError(f"unsupported twist {twist} on {letter}{rank}")


def factor_order(f: SimpleFactor) -> GenericOrder:
    base = _factor_order_base(f.letter, f.rank, f.twist)
    return base.substitute_q_power(f.field)


def group_order(rt: RationalType) -> GenericOrder:
    """|G^F| as a generic order; the invariant scalar = 1 always holds here."""
    order = rt.torus
    for f in rt.factors:
        order = order * factor_order(f)
    return order


# ---------------------------------------------------------------------------
# Ennola duality on rational types

def _ennola_factor(f: SimpleFactor) -> SimpleFactor:
    if f.field % 2 == 0:
        return f
    if f.letter == "A" or (f.letter == "D" and f.rank % 2 == 1) or (f.letter, f.rank) == ("E", 6):
        if f.twist in (1, 2):
            return SimpleFactor(f.letter, f.rank, 3 - f.twist, f.field, f.tilde)
    return f


def ennola_rational_type(rt: RationalType) -> RationalType:
    """q -> -q on the level of rational types: swaps split and twisted forms."""
    return RationalType(
        tuple(_ennola_factor(f) for f in rt.factors),
        abs(ennola(rt.torus)),
        rt.congruence,
    )
