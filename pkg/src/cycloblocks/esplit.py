"""Sylow Phi_e-tori, e-split Levi subgroups and relative Weyl groups.

For the exceptional ambient types the e-split Levi lists are dataset-backed
(transcribed from the block tables plus the minimal and maximal cases) and
verified against order divisibility and Phi_e-multiplicities.  For split
types of rank <= 4 everything is computed from scratch: F-stable Levi
subgroups are enumerated as pairs (J, w) of a simple-root subset and a
twisting class in N_W(W_J)/W_J, their rational types are read off from the
w-action, and e-splitness is decided by the root-theoretic criterion
L = C_G(Z(L)_e).  The computed lists double as the acceptance oracle.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .genorder import GenericOrder, cyclotomic_poly, factor_into_cyclotomics
from .rattype import RationalType, SimpleFactor, group_order, parse_rational_type
from .rootdata import RootSystem, build_root_system, classify_diagram

Matrix = tuple[tuple[int, ...], ...]


def sylow_e_torus_multiplicity(g: RationalType, e: int) -> int:
    """The Phi_e-exponent a(e) of the generic order of G."""
    if e < 1:
        raise ValueError("e must be positive")
    return group_order(g).multiplicity(e)


@dataclass(frozen=True)
class ESplitLevi:
    ambient: str
    e: int
    label: str

    @property
    def rational_type(self) -> RationalType:
        return parse_rational_type(self.label.replace("(A1(q)^3)'", "A1(q)^3"))

    @property
    def order(self) -> GenericOrder:
        return group_order(self.rational_type)


@dataclass(frozen=True)
class RelativeWeylGroup:
    label: str
    order: int


# ---------------------------------------------------------------------------
# Weyl groups as integer matrices in simple-root coordinates

@functools.lru_cache(maxsize=None)
def weyl_elements(type_label: str) -> tuple[Matrix, ...]:
    rs = build_root_system(type_label)
    n = rs.rank
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    gens = []
    for i in range(n):
        cols = []
        for j in range(n):
            v = rs.reflect(i, rs.simple_root(j))
            cols.append(v)
        # matrix with columns = images of basis vectors
        gens.append(tuple(tuple(cols[j][i2] for j in range(n)) for i2 in range(n)))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = _mat_mul(g, m)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return tuple(sorted(seen))


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


def _mat_vec(m: Matrix, v: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sum(m[i][k] * v[k] for k in range(len(v))) for i in range(len(v)))


def weyl_orbit_order(type_label: str) -> int:
    """|W| via the orbit of a regular vector (orbit-stabilizer oracle).

    The vector v solving <v, alpha_i-coroot> = 1 for all i is dominant and
    regular, so its orbit has size exactly |W|.
    """
    rs = build_root_system(type_label)
    n = rs.rank
    rows = [[Fraction(rs.cartan[i][j]) for j in range(n)] + [Fraction(1)] for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if rows[i][c] != 0)
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = rows[c][c]
        rows[c] = [x / inv for x in rows[c]]
        for i in range(n):
            if i != c and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    sol = [rows[i][n] for i in range(n)]
    scale = 1
    for s in sol:
        scale = scale * s.denominator // __import__("math").gcd(scale, s.denominator)
    v0 = tuple(int(s * scale) for s in sol)
    seen = {v0}
    frontier = [v0]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                w = _reflect_vec(rs, i, v)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return len(seen)


def _reflect_vec(rs: RootSystem, i: int, v):
    pairing = sum(rs.cartan[i][j] * v[j] for j in range(rs.rank))
    out = list(v)
    out[i] -= pairing
    return tuple(out)


# ---------------------------------------------------------------------------
# brute-force enumeration of e-split Levi subgroups for small split types

def _charpoly(m: list[list[Fraction]]) -> tuple[int, ...]:
    """Characteristic polynomial by exact Faddeev-LeVerrier."""
    n = len(m)
    coeffs = [Fraction(1)]  # leading
    mat = [[Fraction(0)] * n for _ in range(n)]
    prev = [row[:] for row in mat]
    for i in range(n):
        prev[i][i] = Fraction(1)
    acc = prev
    for k in range(1, n + 1):
        acc = _fr_mul(m, acc)
        tr = sum(acc[i][i] for i in range(n))
        c = -tr / k
        coeffs.append(c)
        for i in range(n):
            acc[i][i] += c
    out = [c for c in reversed(coeffs)]
    ints = []
    for c in out:
        if c.denominator != 1:
            raise AssertionError("charpoly of an integer matrix must be integral")
        ints.append(c.numerator)
    return tuple(ints)


def _fr_mul(a, b):
    n = len(a)
    return [
        [sum(Fraction(a[i][k]) * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def _kernel_basis(m: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of ker(m) by Gaussian elimination over Q."""
    n = len(m)
    a = [row[:] for row in m]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -a[ri][fc]
        basis.append(v)
    return basis


def enumerate_e_split_levis(type_label: str, e: int) -> set[str]:
    """All e-split Levi subgroups of the split group of the given type,
    up to conjugacy, as canonical rational-type strings.

    Honest brute force over pairs (J, w W_J) with w in N_W(W_J); intended
    for rank <= 4.
    """
    rs = build_root_system(type_label)
    n = rs.rank
    W = weyl_elements(type_label)
    bil = [[rs.bilinear(rs.simple_root(i), rs.simple_root(j)) for j in range(n)] for i in range(n)]
    out: set[str] = set()
    for J in _subsets(range(n)):
        roots_J = _subsystem_roots(rs, J)
        normalizer = [w for w in W if _stabilizes(w, roots_J)]
        inner = [w for w in W if _generated_by(rs, w, J, roots_J)]
        cosets = _coset_classes(normalizer, inner)
        for w in cosets:
            rt = _rational_type_of(rs, J, w, bil)
            if rt is None:
                continue
            if _is_e_split(rs, J, w, e, bil, roots_J):
                out.add(rt)
    return out


def _subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def _subsystem_roots(rs: RootSystem, J) -> frozenset:
    simple = [rs.simple_root(j) for j in J]
    roots = set()
    for r in rs.roots:
        # r lies in span of J iff its support is inside J
        if all(r[i] == 0 for i in range(rs.rank) if i not in J):
            roots.add(r)
    return frozenset(roots)


def _stabilizes(w: Matrix, roots: frozenset) -> bool:
    return all(_mat_vec(w, r) in roots for r in roots)


@functools.lru_cache(maxsize=None)
def _wj_elements(type_label: str, J: tuple[int, ...]) -> frozenset:
    rs = build_root_system(type_label)
    n = rs.rank
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    gens = []
    for i in J:
        cols = [rs.reflect(i, rs.simple_root(j)) for j in range(n)]
        gens.append(tuple(tuple(cols[j][k] for j in range(n)) for k in range(n)))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = _mat_mul(g, m)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return frozenset(seen)


def _generated_by(rs: RootSystem, w: Matrix, J, roots_J) -> bool:
    return w in _wj_elements(rs.type_label, tuple(J))


def _coset_classes(normalizer, inner):
    """Conjugacy classes of N_W(W_J)/W_J, one representative each (split F)."""
    cosets: dict[frozenset, Matrix] = {}
    for w in normalizer:
        key = frozenset(_mat_mul(w, u) for u in inner)
        cosets.setdefault(key, w)
    classes = []
    seen: set[frozenset] = set()
    for key, w in cosets.items():
        if key in seen:
            continue
        orbit = {key}
        for g in normalizer:
            conj = frozenset(_mat_mul(_mat_mul(g, u), _inv(g)) for u in key)
            orbit.add(conj)
        seen |= orbit
        classes.append(w)
    return classes


def _inv(w: Matrix) -> Matrix:
    # Weyl group elements have finite order; invert by powering
    n = len(w)
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    acc = w
    prev = ident
    while acc != ident:
        prev = acc
        acc = _mat_mul(acc, w)
    return prev


def _rational_type_of(rs: RootSystem, J, w: Matrix, bil) -> str | None:
    """Canonical rational-type string of the Levi (J, wF), split ambient."""
    n = rs.rank
    J = list(J)
    # adjust w by an element of W_J so that it permutes the simple system J
    simples = [rs.simple_root(j) for j in J]
    adj = None
    for u in _wj_elements(rs.type_label, tuple(J)):
        uw = _mat_mul(u, w)
        if all(_mat_vec(uw, s) in simples for s in simples):
            adj = uw
            break
    if adj is None:
        return None  # should not happen: some W_J-translate maps J to J
    perm = {j: J[simples.index(_mat_vec(adj, rs.simple_root(j)))] for j in J}
    # components of J
    comps = []
    seen: set[int] = set()
    for j in J:
        if j in seen:
            continue
        stack, comp = [j], set()
        while stack:
            i = stack.pop()
            if i in comp:
                continue
            comp.add(i)
            for k in J:
                if k not in comp and rs.cartan[i][k] != 0:
                    stack.append(k)
        seen |= comp
        comps.append(sorted(comp))
    # orbits of components under perm
    factors = []
    comp_of = {}
    for ci, comp in enumerate(comps):
        for j in comp:
            comp_of[j] = ci
    remaining = set(range(len(comps)))
    while remaining:
        ci = min(remaining)
        orbit = [ci]
        cur = ci
        while True:
            nxt = comp_of[perm[comps[cur][0]]]
            if nxt == ci:
                break
            orbit.append(nxt)
            cur = nxt
        remaining -= set(orbit)
        field = len(orbit)
        comp = comps[ci]
        sub = [[rs.cartan[i][j] for j in comp] for i in comp]
        lab = classify_diagram(sub)
        # twist: order of perm^field restricted to the component
        twist = 1
        p = {j: j for j in comp}
        for _ in range(field):
            p = {j: perm[p[j]] for j in comp}
        cur_p = dict(p)
        while any(cur_p[j] != j for j in comp):
            twist += 1
            cur_p = {j: p[cur_p[j]] for j in comp}
        letter, rank = lab[0], int(lab[1:])
        factors.append(SimpleFactor(letter, rank, twist, field))
    # torus part: charpoly of adj on the orthogonal complement of span(J)
    basis = _complement_basis(rs, J, bil)
    if basis:
        mat = _restrict(adj, basis, bil, rs)
        cp = _charpoly(mat)
        torus = factor_into_cyclotomics(_reverse_to_qminus(cp))
    else:
        torus = GenericOrder.one()
    rt = RationalType(tuple(sorted(factors, key=str)), abs(torus))
    return str(rt)


def _reverse_to_qminus(charpoly: tuple[int, ...]) -> tuple[int, ...]:
    """det(q - w) from charpoly coefficients (monic, constant first)."""
    return charpoly


def _complement_basis(rs: RootSystem, J, bil):
    n = rs.rank
    rows = [[Fraction(bil[j][k]) for k in range(n)] for j in J]
    if not rows:
        ident = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
        return [row[:] for row in ident]
    return _kernel_basis(rows + [[Fraction(0)] * n] * (n - len(rows)))


def _restrict(w: Matrix, basis, bil, rs: RootSystem):
    """Matrix of w on the span of basis (w preserves it)."""
    n = rs.rank
    images = []
    for b in basis:
        img = [sum(Fraction(w[i][k]) * b[k] for k in range(n)) for i in range(n)]
        images.append(img)
    # solve images = basis * coeffs
    out = []
    for img in images:
        coeffs = _solve_in_span(basis, img)
        out.append(coeffs)
    # columns are coefficient vectors of images
    m = [[out[j][i] for j in range(len(basis))] for i in range(len(basis))]
    return m


def _solve_in_span(basis, vec):
    n = len(vec)
    k = len(basis)
    a = [[basis[j][i] for j in range(k)] + [vec[i]] for i in range(n)]
    # gaussian
    r = 0
    pivots = []
    for c in range(k):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    sol = [Fraction(0)] * k
    for ri, c in enumerate(pivots):
        sol[c] = a[ri][k]
    return sol


def _is_e_split(rs: RootSystem, J, w: Matrix, e: int, bil, roots_J) -> bool:
    """L = C_G(Z(L)_e): roots vanishing on the Phi_e-part must be exactly J's."""
    n = rs.rank
    J = list(J)
    simples = [rs.simple_root(j) for j in J]
    adj = None
    for u in _wj_elements(rs.type_label, tuple(J)):
        uw = _mat_mul(u, w)
        if all(_mat_vec(uw, s) in simples for s in simples):
            adj = uw
            break
    if adj is None:
        return False
    basis = _complement_basis(rs, J, bil)
    if not basis:
        return len(roots_J) == len(rs.roots)
    m = _restrict(adj, basis, bil, rs)
    k = len(basis)
    phi = cyclotomic_poly(e)
    # Phi_e(m)
    acc = [[Fraction(1 if i == j else 0) * phi[0] for j in range(k)] for i in range(k)]
    powm = [[Fraction(1 if i == j else 0) for j in range(k)] for i in range(k)]
    for c in phi[1:]:
        powm = _fr_mul([[Fraction(x) for x in row] for row in m], powm)
        for i in range(k):
            for j in range(k):
                acc[i][j] += c * powm[i][j]
    kern = _kernel_basis(acc)
    if not kern:
        return len(roots_J) == len(rs.roots)  # only G itself is e-split then
    # lift kernel vectors back to coordinate space
    vecs = []
    for kv in kern:
        v = [sum(kv[j] * basis[j][i] for j in range(k)) for i in range(rs.rank)]
        vecs.append(v)
    fixed = set()
    for r in rs.roots:
        ok = True
        for v in vecs:
            pairing = sum(
                Fraction(r[i]) * Fraction(bil[i][j]) * v[j]
                for i in range(rs.rank)
                for j in range(rs.rank)
            )
            if pairing != 0:
                ok = False
                break
        if ok:
            fixed.add(r)
    return fixed == set(roots_J)
