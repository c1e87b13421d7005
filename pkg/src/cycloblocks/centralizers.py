"""Pseudo-Levi subsystems and centralizers of isolated semisimple elements.

The Borel-de Siebenthal closure of an ambient type is computed honestly:
iterate (adjoin the lowest root, delete a nonempty node subset) on each
irreducible component, classify the induced subdiagrams, and deduplicate
by canonical component labels together with the torsion index of the
generated sublattice.  Root lengths are tracked relative to the ambient
long roots so that short components (A1~ in G2, A2~ in F4, ...) keep
their tilde.

The rational forms of centralizers of isolated elements are curated data
keyed to the block tables; every semisimple type in the dataset must lie
in the computed closure.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .rootdata import (
    build_root_system,
    classify_diagram,
    extended_diagram,
    parse_type_label,
)
from .rattype import Congruence, RationalType, group_order, parse_rational_type


@dataclass(frozen=True)
class SubsystemClass:
    """A maximal-rank subsystem up to the dedup invariants.

    components: sorted tuple of type labels, '~' marking components made of
    roots strictly shorter than the ambient long roots.
    torsion: order of the torsion of (ambient root lattice) / (subsystem
    lattice saturation defect), i.e. the index invariant of the embedding.
    """

    components: tuple[str, ...]
    torsion: int

    @property
    def label(self) -> str:
        return "+".join(self.components) if self.components else "-"


def _component_label(type_label: str, scale: Fraction) -> str:
    return type_label + ("~" if scale < 1 else "")


def _smith_torsion(rows: list[tuple[int, ...]], dim: int) -> int:
    """Torsion order of Z^dim / <rows>, restricted to the saturation.

    Small integer Smith normal form; the product of elementary divisors.
    """
    m = [list(r) for r in rows]
    if not m:
        return 1
    rows_n, cols_n = len(m), dim
    torsion = 1
    r = 0
    for c in range(cols_n):
        pivot = None
        for i in range(r, rows_n):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        # reduce column c below row r
        changed = True
        while changed:
            changed = False
            for i in range(r + 1, rows_n):
                if m[i][c] != 0:
                    if abs(m[i][c]) < abs(m[r][c]):
                        m[r], m[i] = m[i], m[r]
                    qv = m[i][c] // m[r][c]
                    for j in range(cols_n):
                        m[i][j] -= qv * m[r][j]
                    if m[i][c] != 0:
                        changed = True
        torsion *= abs(m[r][c]) if m[r][c] else 1
        r += 1
    return torsion


@functools.lru_cache(maxsize=None)
def _bds_irreducible(type_label: str) -> frozenset[tuple[tuple[tuple[str, Fraction], ...], int]]:
    """One Borel-de Siebenthal step on an irreducible type.

    Returns the subsystems obtained by deleting a nonempty subset of nodes
    of the extended diagram, each as (components-with-scales, torsion).
    Scales are relative to this type's own long roots.
    """
    rs = build_root_system(type_label)
    ext = extended_diagram(rs)
    n = len(ext.nodes)
    long_norm = max(ext.norms)
    out = set()
    for keep_mask in range(1, 2**n - 1):
        keep = [i for i in range(n) if keep_mask & (1 << i)]
        if len(keep) >= n:
            continue
        comps = _graph_components(ext.cartan, keep)
        labels = []
        ok = True
        for comp in comps:
            sub = [[ext.cartan[i][j] for j in comp] for i in comp]
            try:
                lab = classify_diagram(sub)
            except ValueError:
                ok = False
                break
            scale = Fraction(max(ext.norms[i] for i in comp), long_norm)
            labels.append((lab, scale))
        if not ok:
            continue
        vectors = [ext.nodes[i] for i in keep]
        torsion = _smith_torsion(vectors, rs.rank)
        out.add((tuple(sorted(labels)), torsion))
    return frozenset(out)


def _graph_components(cartan, keep):
    keep_set = set(keep)
    seen: set[int] = set()
    comps = []
    for start in keep:
        if start in seen:
            continue
        stack = [start]
        comp = []
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in keep_set:
                if j not in seen and cartan[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def borel_de_siebenthal(ambient: str) -> set[SubsystemClass]:
    """All subsystem types in the Borel-de Siebenthal closure of the ambient.

    The closure iterates the extend-and-delete step on every component of
    every subsystem found so far; the ambient itself is included.  Results
    are deduplicated by (component labels, torsion index).
    """
    parse_type_label(ambient)
    start = SubsystemClass((ambient,), 1)
    seen: dict[tuple[tuple[str, ...], int], SubsystemClass] = {}
    frontier = [((ambient, Fraction(1)),)]
    seen[(start.components, 1)] = start
    results = {start}
    # track subsystems as tuples of (type_label, scale); torsion is tracked
    # only at the first level (deeper steps keep the coarse label invariant)
    explored: set[tuple[tuple[str, Fraction], ...]] = set()
    while frontier:
        subsystem = frontier.pop()
        if subsystem in explored:
            continue
        explored.add(subsystem)
        for idx, (lab, scale) in enumerate(subsystem):
            for child_labels, torsion in _bds_irreducible(lab):
                rest = subsystem[:idx] + subsystem[idx + 1 :]
                scaled_child = tuple((cl, cs * scale) for cl, cs in child_labels)
                new_sub = tuple(sorted(rest + scaled_child))
                components = tuple(sorted(_component_label(l, s) for l, s in new_sub))
                cls = SubsystemClass(components, torsion if len(subsystem) == 1 else 1)
                if cls not in results:
                    results.add(cls)
                if new_sub not in explored:
                    frontier.append(new_sub)
    return results


def bds_labels(ambient: str) -> set[str]:
    return {c.label for c in borel_de_siebenthal(ambient)}


# ---------------------------------------------------------------------------
# isolated classes (curated)

@dataclass(frozen=True)
class IsolatedClass:
    """A class of isolated semisimple elements with its rational forms."""

    ambient: str
    order: int
    forms: tuple[RationalType, ...]

    @property
    def semisimple_label(self) -> str:
        return self.forms[0].semisimple_label()

    def rational_form(self, q: int) -> RationalType:
        """The unique form whose congruence admits q.

        Raises if no stored congruence matches, which signals an excluded q
        (for instance ell dividing the order of s).
        """
        matches = [f for f in self.forms if f.congruence is None or f.congruence.matches(q)]
        if not matches:
            raise ValueError(
                f"q={q} matches no stored congruence of the order-{self.order} "
                f"class in {self.ambient}"
            )
        if len(matches) > 1:
            # congruences of a class are exclusive by construction
            raise ValueError(f"ambiguous rational form for q={q} in {self.ambient}")
        return matches[0]


def load_isolated_classes(records: list[tuple[str, int, str, str]]) -> dict[str, list[IsolatedClass]]:
    """Group raw `isolated` records into classes keyed by ambient type.

    Records with the same (ambient, order, semisimple type up to twist) are
    the congruence forms of one class.
    """
    grouped: dict[tuple[str, int, str], list[RationalType]] = {}
    order_of: dict[str, list[tuple[int, tuple[str, int, str, str]]]] = {}
    for ambient, order, cong_text, rt_text in records:
        cong = None if cong_text == "any" else Congruence.parse(cong_text)
        rt = parse_rational_type(rt_text, cong)
        key = (ambient, order, _untwisted_key(rt))
        grouped.setdefault(key, []).append(rt)
    out: dict[str, list[IsolatedClass]] = {}
    for (ambient, order, _), forms in sorted(grouped.items()):
        out.setdefault(ambient, []).append(IsolatedClass(ambient, order, tuple(forms)))
    return out


def _untwisted_key(rt: RationalType) -> str:
    toks = sorted(f"{f.letter}{f.rank}^{f.field}{'~' if f.tilde else ''}" for f in rt.factors)
    return "+".join(toks)


def centralizer_in_closure(rt: RationalType, ambient: str) -> bool:
    """Borel-de Siebenthal membership of the semisimple type of a form.

    Twists and extension fields are rational data invisible to the
    subsystem lattice, so the comparison strips them; tildes are kept.
    """
    want = []
    for f in rt.factors:
        lab = f"{f.letter}{f.rank * f.field if False else f.rank}"
        # an A_k(q^j) factor comes from j conjugate A_k components
        for _ in range(f.field):
            want.append(lab + ("~" if f.tilde else ""))
    want_label = "+".join(sorted(want)) if want else "-"
    closure = bds_labels(_strip_ambient(ambient))
    return want_label in closure


def _strip_ambient(ambient: str) -> str:
    # dataset ambient tokens like E6ad / 2E6ad / 3D4 name the same root system
    amb = ambient
    if amb.endswith("ad"):
        amb = amb[:-2]
    if amb and amb[0] in "23":
        amb = amb[1:]
    return amb


def index_order(ambient: str, rt: RationalType) -> Fraction:
    """|G^F| / |C^F| as an exact evaluation helper (used by invariants)."""
    amb = parse_rational_type(f"{_strip_ambient(ambient)}(q)")
    return group_order(amb).evaluate(2) / group_order(rt).evaluate(2)
