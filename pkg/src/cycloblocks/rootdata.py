"""Crystallographic root systems for types A-G up to rank 8.

Roots are kept as integer vectors in simple-root coordinates, so heights,
reflections and closure are exact integer operations.  The Weyl degrees
are recovered by factoring the Poincare polynomial of the height
distribution, not from a lookup table; a hardcoded table exists only in
the test-suite as an oracle.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .genorder import factor_into_cyclotomics, poly_mul, poly_trim

Vector = tuple[int, ...]

_LETTERS = "ABCDEFG"


def _chain_cartan(n: int) -> list[list[int]]:
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        c[i][i + 1] = -1
        c[i + 1][i] = -1
    return c


def cartan_matrix(letter: str, rank: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Cartan matrix C[i][j] = <alpha_j, alpha_i-coroot> and symmetrizers d_i.

    Bourbaki numbering throughout; (alpha_i, alpha_j) = d_i * C[i][j].
    """
    n = rank
    if letter == "A":
        c = _chain_cartan(n)
        d = [1] * n
    elif letter == "B":
        if n < 2:
            raise ValueError("B needs rank >= 2")
        c = _chain_cartan(n)
        c[n - 1][n - 2] = -2
        d = [2] * (n - 1) + [1]
    elif letter == "C":
        if n < 2:
            raise ValueError("C needs rank >= 2")
        c = _chain_cartan(n)
        c[n - 2][n - 1] = -2
        d = [1] * (n - 1) + [2]
    elif letter == "D":
        if n < 3:
            raise ValueError("D needs rank >= 3")
        c = _chain_cartan(n - 1)
        for row in c:
            row.append(0)
        c.append([0] * n)
        c[n - 1][n - 1] = 2
        c[n - 1][n - 3] = -1
        c[n - 3][n - 1] = -1
        c[n - 1][n - 2] = 0
        c[n - 2][n - 1] = 0
        d = [1] * n
    elif letter == "E":
        if n not in (6, 7, 8):
            raise ValueError("E needs rank 6, 7 or 8")
        # Bourbaki: chain 1-3-4-5-...-n, node 2 hangs off node 4.
        c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        chain = [1, 3, 4, 5, 6, 7, 8][: n - 1]
        for a, b in zip(chain, chain[1:]):
            c[a - 1][b - 1] = c[b - 1][a - 1] = -1
        c[1][3] = c[3][1] = -1
        d = [1] * n
    elif letter == "F":
        if n != 4:
            raise ValueError("F needs rank 4")
        c = _chain_cartan(4)
        c[2][1] = -2
        d = [2, 2, 1, 1]
    elif letter == "G":
        if n != 2:
            raise ValueError("G needs rank 2")
        c = [[2, -3], [-1, 2]]
        d = [1, 3]
    else:
        raise ValueError(f"unknown type letter {letter!r}")
    return tuple(tuple(row) for row in c), tuple(d)


def parse_type_label(label: str) -> tuple[str, int]:
    label = label.strip()
    if len(label) < 2 or label[0] not in _LETTERS or not label[1:].isdigit():
        raise ValueError(f"not a Cartan type label: {label!r}")
    return label[0], int(label[1:])


@dataclass(frozen=True)
class RootSystem:
    """An irreducible root system with exact integer root data."""

    type_label: str
    cartan: tuple[tuple[int, ...], ...]
    symmetrizer: tuple[int, ...]
    roots: tuple[Vector, ...]
    positive_roots: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def letter(self) -> str:
        return self.type_label[0]

    def height(self, root: Vector) -> int:
        return sum(root)

    @property
    def heights(self) -> dict[Vector, int]:
        return {r: self.height(r) for r in self.positive_roots}

    def bilinear(self, v: Vector, w: Vector) -> int:
        """(v, w) in the symmetrized form, long roots of norm 2*max(d)."""
        total = 0
        for i, vi in enumerate(v):
            if vi == 0:
                continue
            for j, wj in enumerate(w):
                if wj:
                    total += vi * wj * self.symmetrizer[i] * self.cartan[i][j]
        return total

    def norm(self, v: Vector) -> int:
        return self.bilinear(v, v)

    @property
    def highest_root(self) -> Vector:
        return max(self.positive_roots, key=self.height)

    def reflect(self, i: int, v: Vector) -> Vector:
        """Simple reflection s_i applied to v in simple-root coordinates."""
        pairing = sum(self.cartan[i][j] * v[j] for j in range(self.rank))
        out = list(v)
        out[i] -= pairing
        return tuple(out)

    def simple_root(self, i: int) -> Vector:
        return tuple(1 if j == i else 0 for j in range(self.rank))


@functools.lru_cache(maxsize=None)
def build_root_system(type_label: str) -> RootSystem:
    """Construct a root system by reflection closure from its Cartan matrix."""
    letter, rank = parse_type_label(type_label)
    if rank > 8:
        raise ValueError(f"rank {rank} exceeds the supported bound 8")
    cartan, symm = cartan_matrix(letter, rank)
    simples = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    roots = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(rank):
                pairing = sum(cartan[i][j] * v[j] for j in range(rank))
                w = list(v)
                w[i] -= pairing
                w_t = tuple(w)
                if w_t not in roots:
                    roots.add(w_t)
                    nxt.append(w_t)
        frontier = nxt
    all_roots = roots | {tuple(-c for c in r) for r in roots}
    positives = sorted(r for r in all_roots if sum(r) > 0)
    rs = RootSystem(type_label, cartan, symm, tuple(sorted(all_roots)), tuple(positives))
    _validate(rs)
    return rs


def _validate(rs: RootSystem) -> None:
    n = rs.rank
    for i in range(n):
        if rs.cartan[i][i] != 2:
            raise AssertionError("Cartan diagonal must be 2")
        for j in range(n):
            if i != j:
                prod = rs.cartan[i][j] * rs.cartan[j][i]
                if rs.cartan[i][j] > 0 or prod not in (0, 1, 2, 3):
                    raise AssertionError("invalid Cartan off-diagonal")
    if len(rs.roots) != 2 * len(rs.positive_roots):
        raise AssertionError("roots must split evenly into positive and negative")
    for r in rs.positive_roots:
        if any(c < 0 for c in r):
            raise AssertionError("positive root with negative coefficient")


# ---------------------------------------------------------------------------
# Weyl degrees via the Poincare polynomial of the height distribution

def poincare_polynomial(rs: RootSystem) -> tuple[int, ...]:
    """prod_{alpha>0} (1-t^{ht+1})/(1-t^ht) as an integer polynomial.

    Telescoping over the height multiset turns the product into
    prod_h [h]_t^{m_{h-1}-m_h} with m_h the number of positive roots of
    height h and m_0 the rank, which is polynomial term by term.
    """
    mult: dict[int, int] = {}
    for r in rs.positive_roots:
        h = rs.height(r)
        mult[h] = mult.get(h, 0) + 1
    top = max(mult)
    m = [rs.rank] + [mult.get(h, 0) for h in range(1, top + 2)]
    poly: tuple[int, ...] = (1,)
    for h in range(1, top + 2):
        exponent = m[h - 1] - m[h] if h <= top else m[top]
        if exponent < 0:
            raise ValueError("height multiset is not unimodal; corrupted root system")
        block = tuple([1] * h)  # [h]_t
        for _ in range(exponent):
            poly = poly_mul(poly, block)
    return poly_trim(poly)


def weyl_degrees(rs: RootSystem) -> tuple[int, ...]:
    """Fundamental degrees d_1 <= ... <= d_r, from the Poincare polynomial.

    The polynomial is factored into cyclotomics and the degree multiset is
    peeled off greedily from the largest Phi present; a leftover factor
    signals a corrupted root system.
    """
    factored = factor_into_cyclotomics(poincare_polynomial(rs))
    if factored.scalar != 1 or factored.qpow != 0:
        raise ValueError("Poincare polynomial failed to factor into [d]-blocks")
    counts = dict(factored.cyclo)
    degrees: list[int] = []
    while counts:
        d = max(counts)
        degrees.append(d)
        for e in range(2, d + 1):
            if d % e == 0:
                counts[e] = counts.get(e, 0) - 1
                if counts[e] < 0:
                    raise ValueError("Poincare polynomial is not a product of [d]-blocks")
                if counts[e] == 0:
                    del counts[e]
    degrees += [1] * 0
    if len(degrees) < rs.rank:
        # degrees equal to 1 cannot occur for a root system; rank must match
        raise ValueError("factorization produced too few degrees")
    if len(degrees) != rs.rank:
        raise ValueError("factorization produced too many degrees")
    out = tuple(sorted(degrees))
    if sum(d - 1 for d in out) != len(rs.positive_roots):
        raise ValueError("degrees inconsistent with the number of positive roots")
    return out


def weyl_order(rs: RootSystem) -> int:
    order = 1
    for d in weyl_degrees(rs):
        order *= d
    return order


# ---------------------------------------------------------------------------
# extended (affine) diagram and abstract diagram classification

@dataclass(frozen=True)
class ExtendedDiagram:
    """Simple roots plus the lowest root, with their mutual Cartan pairings.

    Node 0 is the adjoined lowest root -theta; nodes 1..rank are the simple
    roots.  This is the substrate for the Borel-de Siebenthal algorithm.
    """

    ambient: RootSystem
    nodes: tuple[Vector, ...]
    cartan: tuple[tuple[int, ...], ...]
    norms: tuple[int, ...]


def extended_diagram(rs: RootSystem) -> ExtendedDiagram:
    lowest = tuple(-c for c in rs.highest_root)
    nodes = (lowest,) + tuple(rs.simple_root(i) for i in range(rs.rank))
    size = len(nodes)
    cart = [[0] * size for _ in range(size)]
    norms = [rs.norm(v) for v in nodes]
    for i in range(size):
        for j in range(size):
            # <alpha_j, alpha_i-coroot> = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)
            num = 2 * rs.bilinear(nodes[i], nodes[j])
            if num % norms[i] != 0:
                raise AssertionError("non-integral Cartan pairing on extended diagram")
            cart[i][j] = num // norms[i]
    return ExtendedDiagram(rs, nodes, tuple(tuple(r) for r in cart), tuple(norms))


def classify_diagram(cartan: list[list[int]]) -> str:
    """Type label of a connected diagram given by its Cartan matrix."""
    n = len(cartan)
    if n == 1:
        return "A1"
    bonds = {}
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            m = cartan[i][j] * cartan[j][i]
            if m:
                bonds[(i, j)] = m
                adj[i].append(j)
                adj[j].append(i)
    maxbond = max(bonds.values())
    degrees = sorted(len(v) for v in adj.values())
    if maxbond == 3:
        return "G2"
    if maxbond == 2:
        if degrees[-1] > 2:
            raise ValueError("unclassifiable multiply-laced branched diagram")
        # relative norms along the chain decide B versus C versus F4
        norm = _relative_norms(cartan, adj)
        long_count = sum(1 for x in norm if x == max(norm))
        short_count = n - long_count
        if long_count >= 2 and short_count >= 2:
            if n != 4:
                raise ValueError("F-shaped diagram of wrong rank")
            return "F4"
        if short_count == 1:
            return f"B{n}"
        if n == 2:
            return "B2"  # B2 = C2; single canonical name
        return f"C{n}"
    # simply laced
    if degrees[-1] <= 2:
        return f"A{n}"
    if degrees.count(3) > 1 or degrees[-1] > 3:
        raise ValueError("unclassifiable simply-laced diagram")
    center = next(i for i in adj if len(adj[i]) == 3)
    arms = sorted(_arm_length(adj, center, first) for first in adj[center])
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    raise ValueError(f"unclassifiable branched diagram with arms {arms}")


def _arm_length(adj: dict[int, list[int]], center: int, first: int) -> int:
    length = 1
    prev, cur = center, first
    while True:
        nxt = [x for x in adj[cur] if x != prev]
        if not nxt:
            return length
        prev, cur = cur, nxt[0]
        length += 1


def _relative_norms(cartan: list[list[int]], adj: dict[int, list[int]]) -> list[Fraction]:
    norm = [Fraction(0)] * len(cartan)
    norm[0] = Fraction(1)
    stack = [0]
    seen = {0}
    while stack:
        i = stack.pop()
        for j in adj[i]:
            if j not in seen:
                # (a_j,a_j)/(a_i,a_i) = C[i][j]/C[j][i]
                norm[j] = norm[i] * Fraction(cartan[i][j], cartan[j][i])
                seen.add(j)
                stack.append(j)
    return norm


# ---------------------------------------------------------------------------
# diagram automorphisms

@dataclass(frozen=True)
class DiagramAutomorphism:
    """A permutation of the simple roots preserving the Cartan matrix."""

    type_label: str
    permutation: tuple[int, ...]

    def __post_init__(self) -> None:
        rs = build_root_system(self.type_label)
        p = self.permutation
        if sorted(p) != list(range(rs.rank)):
            raise ValueError("not a permutation of the simple-root indices")
        for i in range(rs.rank):
            for j in range(rs.rank):
                if rs.cartan[p[i]][p[j]] != rs.cartan[i][j]:
                    raise ValueError("permutation does not preserve the Cartan matrix")
        if self.order == 3 and self.type_label != "D4":
            raise ValueError("order-3 diagram automorphisms exist only on D4")
        if self.order not in (1, 2, 3):
            raise ValueError(f"diagram automorphism of order {self.order} is not supported")

    @property
    def order(self) -> int:
        seen = tuple(range(len(self.permutation)))
        cur = self.permutation
        n = 1
        while cur != seen:
            cur = tuple(self.permutation[i] for i in cur)
            n += 1
        return n


def standard_automorphism(type_label: str, order: int) -> DiagramAutomorphism:
    """The graph automorphism of the given order in Bourbaki numbering."""
    letter, rank = parse_type_label(type_label)
    if order == 1:
        return DiagramAutomorphism(type_label, tuple(range(rank)))
    if order == 2:
        if letter == "A":
            return DiagramAutomorphism(type_label, tuple(reversed(range(rank))))
        if letter == "D":
            perm = list(range(rank))
            perm[-2], perm[-1] = perm[-1], perm[-2]
            return DiagramAutomorphism(type_label, tuple(perm))
        if type_label == "E6":
            return DiagramAutomorphism("E6", (5, 1, 4, 3, 2, 0))
    if order == 3 and type_label == "D4":
        # leaves are nodes 1, 3, 4 around the trivalent node 2
        return DiagramAutomorphism("D4", (2, 1, 3, 0))
    raise ValueError(f"no standard automorphism of order {order} on {type_label}")
