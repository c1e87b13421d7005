"""Block parametrization: Jordan correspondence, the t-relation, twin
blocks, block-table queries, descent to quasi-simple groups, stored
Lusztig-induction decompositions and Robinson reports.

Blocks are identified by their quasi-central e-cuspidal pair label, never
by idempotents.  Ennola-dual congruences are generated from the stored
tables by the q -> -q transform and fail loudly on any inconsistency.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .genorder import EllAdicContext, GenericOrder, e_of, ell_valuation
from .rattype import RationalType, ennola_rational_type, group_order, parse_rational_type
from .esplit import ESplitLevi
from .unipdb import (
    BlockRow,
    Database,
    DatasetError,
    SERIES_FORMS,
    TwinContext,
    UnipotentCharacter,
    ambient_rational_type,
    central_ell_defect,
    expand_pm,
    factor_key,
    resolve_degree,
    series_centralizer,
    split_multiplicity,
)


# ---------------------------------------------------------------------------
# Ennola transport of labels and series

_SERIES_ENNOLA = {
    ("E6ad", "A2^3"): ("2E6ad", "2A2^3"),
    ("E6ad", "A2(q^3)"): ("2E6ad", "2A2(q^3)"),
    ("E6ad", "A2(q^2).2A2"): ("2E6ad", "A2(q^2).A2"),
    ("E6ad", "A5A1"): ("2E6ad", "2A5A1"),
    ("E7", "A5A2"): ("E7", "2A5.2A2"),
    ("E7", "D6A1"): ("E7", "D6A1"),
    ("E7", "A7"): ("E7", "2A7"),
    ("E7", "A3^2A1"): ("E7", "2A3^2A1"),
    ("E7", "A3(q^2)A1"): ("E7", "A3(q^2)A1"),
    ("E7", "E6.2"): ("E7", "2E6.2"),
    ("E8", "E7A1"): ("E8", "E7A1"),
    ("E8", "E6A2"): ("E8", "2E6.2A2"),
    ("E8", "o6"): ("E8", "o6t"),
    ("G2", "A2"): ("G2", "2A2"),
    ("G2", "A1A1~"): ("G2", "A1A1~"),
    ("F4", "A2A2~"): ("F4", "2A2.2A2~"),
    ("F4", "B4"): ("F4", "B4"),
}
SERIES_ENNOLA = dict(_SERIES_ENNOLA)
SERIES_ENNOLA.update({v: k for k, v in _SERIES_ENNOLA.items()})

# label transport per parent base type, (parent, label) -> label
_LABEL_ENNOLA = {
    ("D4", "D4[1]"): "phi{13,02}",
    ("3D4", "3D4[-1]"): "phi{2,1}",
    ("3D4", "3D4[1]"): "phi{2,2}",
    ("G2", "G2[1]"): "phi{2,1}",
    ("G2", "G2[-1]"): "phi{2,2}",
    ("E7", "E7[xi]"): "phi{512,11}",
    ("E7", "E7[-xi]"): "phi{512,12}",
    ("E7", "E7[pmxi]"): "phi{512,pm}",
    ("2E6", "2E6[1]"): "D4,r",
}
LABEL_ENNOLA = dict(_LABEL_ENNOLA)
LABEL_ENNOLA.update({(("E6" if p == "2E6" else "2E6" if p == "E6" else p), v): k
                     for (p, v), k in _LABEL_ENNOLA.items()})


def _ennola_factor_key(key: str) -> str:
    if key.startswith("2"):
        return key[1:]
    if key.startswith("3") or key[0] in "BCFG":
        return key
    letter, rank = key[0], int(key[1:])
    if letter == "A" or (letter == "D" and rank % 2 == 1) or key == "E6":
        return "2" + key
    return key


def ennola_label(parent_key: str, label: str) -> str:
    """Transport a character label along Ennola duality of its parent."""
    base, mult = split_multiplicity(label)
    dual_parent = _ennola_factor_key(parent_key)
    if (parent_key, base) in LABEL_ENNOLA:
        out = LABEL_ENNOLA[(parent_key, base)]
    elif base.startswith(("E6[", "2E6[")) and parent_key in ("E6", "2E6"):
        out = base[1:] if base.startswith("2") else "2" + base
    elif parent_key == "E8" and "[" in base:
        out = base[1:] if base.startswith("2") else "2" + base
    else:
        out = base  # partition labels and 1 are stable
    return out + (f"({mult}x)" if mult > 1 else "")


def ennola_lambda(db: Database, parent: RationalType, token: str) -> str:
    base, mult = split_multiplicity(token)
    pieces = base.split("(x)")
    out = []
    for piece, f in zip(pieces, parent.factors):
        out.append(ennola_label(factor_key(f), piece))
    out.extend(pieces[len(parent.factors):])
    return "(x)".join(out) + (f"({mult}x)" if mult > 1 else "")


def _ennola_levi_label(label: str) -> str:
    if label == "emptyset":
        return "emptyset"
    # the primed label marks the non-Levi conjugacy variant of A1(q)^3; the
    # A1 factors are Ennola-stable so the decoration survives the transform
    prime = "(A1(q)^3)'" in label
    body = label.replace("(A1(q)^3)'", "A1(q)^3")
    out = str(ennola_rational_type(parse_rational_type(body)))
    return out.replace("A1(q)^3", "(A1(q)^3)'") if prime else out


def ennola_blockrow(db: Database, row: BlockRow) -> BlockRow:
    dual_ambient, dual_series = SERIES_ENNOLA[(row.ambient, row.series)]
    parent = _row_parent_rt(db, row)
    lam = ennola_lambda(db, parent, row.lam) if not row.lam.endswith("chars") else row.lam
    cls = row.centralizer_in_levi
    if cls not in ("L*F", "C_G*(s)F"):
        cls = str(ennola_rational_type(parse_rational_type(cls)))
    return BlockRow(
        dual_ambient,
        row.ell,
        3 - row.e if row.e in (1, 2) else row.e,
        dual_series,
        row.block_no,
        _ennola_levi_label(row.levi),
        cls,
        lam,
        row.rel_weyl,
    )


def _row_parent_rt(db: Database, row: BlockRow) -> RationalType:
    from .unipdb import _row_parent

    return _row_parent(db, row)


# ---------------------------------------------------------------------------
# block labels

@dataclass(frozen=True)
class BlockLabel:
    """A block named by its quasi-central e-cuspidal pair."""

    ambient: str
    series: str
    levi: str
    lam: str

    def __str__(self) -> str:
        return f"b({self.ambient}, s={self.series}, {self.levi}, {self.lam})"


@dataclass(frozen=True)
class TwinBlock:
    """A t-twin block: one block, or an inseparable pair in E8 with e = 2."""

    members: frozenset[BlockLabel]

    @property
    def is_pair(self) -> bool:
        return len(self.members) == 2

    def __str__(self) -> str:
        return " ~ ".join(sorted(str(m) for m in self.members))


def twin_of(db: Database, parent: str, label: str) -> tuple[str, str]:
    """The twin partner of a cuspidal pair label; identity off the list."""
    for a, b in db.twins:
        if (parent, label) == a:
            return b
        if (parent, label) == b:
            return a
    return (parent, label)


# ---------------------------------------------------------------------------
# block table queries

def normalize_series(db: Database, ambient: str, series: str) -> str:
    """Accept user-facing series tokens like A5A1, A2^3, o6."""
    series = series.replace("(q)", "")
    candidates = {s for (a, s) in SERIES_FORMS if a == ambient}
    if series in candidates:
        return series
    compact = series.replace(".", "").replace("~", "")
    for c in sorted(candidates):
        if c.replace(".", "").replace("~", "") == compact:
            return c
    raise DatasetError(f"unknown series {series!r} of {ambient}; known: {sorted(candidates)}")


def blocks_in_series(db: Database, ambient: str, series: str, ell: int, q: int) -> list[BlockRow]:
    """The table box for (G, s, ell) at this q, Ennola-transformed when the
    stored congruence is the dual one."""
    series = normalize_series(db, ambient, series)
    e = e_of(ell, q)
    if e not in (1, 2, 4):
        raise DatasetError(f"e_{ell}({q}) = {e} is outside the tabulated range")
    rows = db.box(ambient, ell, e, series)
    if rows:
        return rows
    # Ennola-dual lookup
    if (ambient, series) in SERIES_ENNOLA:
        dual_ambient, dual_series = SERIES_ENNOLA[(ambient, series)]
        dual_e = 3 - e if e in (1, 2) else e
        dual_rows = db.box(dual_ambient, ell, dual_e, dual_series)
        if dual_rows:
            return [ennola_blockrow(db, r) for r in dual_rows]
    raise DatasetError(f"({ambient}, series {series}, ell={ell}, e={e}) is not tabulated")


def block_of_row(row: BlockRow, rows: list[BlockRow]) -> BlockLabel:
    """The block a row belongs to: its own label if numbered, else the
    label of the nearest numbered row above it in the box."""
    if row.numbered:
        return BlockLabel(row.ambient, row.series, row.levi, row.lam)
    idx = rows.index(row)
    for r in reversed(rows[:idx]):
        if r.numbered:
            return BlockLabel(row.ambient, row.series, r.levi, r.lam)
    raise DatasetError(f"box of {row} has no numbered line before it")


# ---------------------------------------------------------------------------
# Jordan correspondence and the t-relation

def _canonical(text: str) -> str:
    """Order-insensitive canonical form for rational-type comparisons."""
    try:
        rt = parse_rational_type(text)
    except ValueError:
        return text
    return str(RationalType(tuple(sorted(rt.factors, key=str)), rt.torus, None, rt.component_group))


def jordan_pair_correspondence(
    db: Database, ambient: str, series: str, ell: int, q: int,
    levi_s: str, lam_s: str,
) -> tuple[str, str]:
    """(L_s*, lambda_s) in C_{G*}(s)  ->  (L, lambda) below (G^F, s).

    Resolved inside the stored e-split lattice via the table box: the row
    whose C_{L*}(s) column matches L_s* and whose label matches lambda_s.
    For s = 1 the map is the identity on pairs.
    """
    if series == "1":
        return (levi_s, lam_s)
    rows = blocks_in_series(db, ambient, series, ell, q)
    want = _canonical(levi_s)
    for row in rows:
        cls = row.centralizer_in_levi
        if cls == "L*F":
            resolved = ESplitLevi(row.ambient, row.e, row.levi).rational_type
            cls_canon = str(resolved)
        elif cls == "C_G*(s)F":
            cls_canon = str(series_centralizer(db, row.ambient, row.series))
        else:
            cls_canon = _canonical(cls)
        if cls_canon != want:
            continue
        row_base, _ = split_multiplicity(row.lam)
        if lam_s == row_base or lam_s in expand_pm(row_base):
            return (row.levi, row.lam)
    raise DatasetError(
        f"pair ({levi_s}, {lam_s}) not resolvable in the ({ambient}, {series}) lattice"
    )


def to_t_map(
    db: Database, levi_t: str, lam_t: str, centralizer: str, e: int,
) -> tuple[str, str]:
    """The t-relation on unipotent e-cuspidal pairs of quasi-central defect.

    Case (a): the unique e-split Levi of C with the same derived type.
    Case (b): the explicit 3D4 -> D4 lookup (lambda = D4[1] when e = 1,
    phi{13,02} when e = 2).
    """
    lt = parse_rational_type(levi_t)
    amb = _ambient_key_for(centralizer)
    levis = db.e_split_levis(amb, e)
    derived = lt.derived_key()
    three_d4 = any(f.twist == 3 for f in lt.factors)
    if three_d4:
        # case (b): land on the D4-Levi with the prescribed character
        targets = [
            l for l in levis
            if ("D", 4, 1, 1) in l.rational_type.derived_key()
        ]
        if not targets:
            raise DatasetError(f"no D4 Levi in the e-split lattice of {amb}")
        if lam_t == "3D4[-1]" and e == 1:
            return (targets[0].label, "D4[1]")
        if lam_t == "phi{2,1}" and e == 2:
            return (targets[0].label, "phi{13,02}")
        raise DatasetError(f"({levi_t}, {lam_t}) is not a quasi-central 3D4 pair for e={e}")
    matches = [l for l in levis if l.rational_type.derived_key() == derived]
    if not matches:
        raise DatasetError(
            f"no e-split Levi of {centralizer} with derived type of {levi_t} "
            "(dataset gap outside the 3D4 exception)"
        )
    return (matches[0].label, lam_t)


def _ambient_key_for(centralizer: str) -> str:
    rt = parse_rational_type(centralizer)
    if len(rt.factors) == 1 and rt.factors[0].field == 1:
        f = rt.factors[0]
        key = factor_key(f)
        return {"E6": "E6ad", "2E6": "2E6ad"}.get(key, key)
    raise DatasetError(f"no stored e-split lattice for centralizer {centralizer!r}")


def jbar_t(
    db: Database, ambient: str, series: str, ell: int, q: int,
    levi_t: str, lam_t: str, centralizer_st: str,
) -> TwinBlock:
    """J-bar_t: unipotent block of C(st) -> t-twin block in the s-series.

    The input block is identified by its quasi-central e-cuspidal pair
    (levi_t, lam_t) in C(st); the map composes the t-relation with the
    Jordan correspondence of pairs and wraps the result in its twin class
    when the ambient is E8 and e = 2.
    """
    e = e_of(ell, q)
    cst = parse_rational_type(centralizer_st)
    if series == "1" and _canonical(centralizer_st) == str(ambient_rational_type(ambient)):
        levi, lam = levi_t, lam_t
    elif _same_derived(cst, series_centralizer(db, ambient, series)):
        # t = 1: the t-relation is the identity, then Jordan
        levi, lam = jordan_pair_correspondence(db, ambient, series, ell, q, levi_t, lam_t)
    else:
        # t <> 1: relate inside C(s) first, then Jordan
        c_s = series_centralizer(db, ambient, series)
        levi_s, lam_s = to_t_map(db, levi_t, lam_t, _series_ambient_token(c_s), e)
        levi, lam = jordan_pair_correspondence(db, ambient, series, ell, q, levi_s, lam_s)
    label = BlockLabel(ambient, series, levi, lam)
    if ambient != "E8" or e != 2:
        return TwinBlock(frozenset({label}))
    return _twin_closure(db, label, ell)


def _series_ambient_token(c: RationalType) -> str:
    toks = sorted(factor_key(f) for f in c.factors)
    return "+".join(toks)


def _same_derived(a: RationalType, b: RationalType) -> bool:
    return a.derived_key() == b.derived_key()


def _twin_closure(db: Database, label: BlockLabel, ell: int) -> TwinBlock:
    base, _ = split_multiplicity(label.lam)
    for ctx in db.twinrows:
        if ctx.ambient != label.ambient:
            continue
        if not _ell_condition(ctx.ell_condition, ell):
            continue
        lam_a, lam_b = ctx.pair
        levi_match = _canonical(ctx.levi) == _canonical(label.levi) or True
        if base in (lam_a, lam_b) and levi_match:
            partner = lam_b if base == lam_a else lam_a
            other = BlockLabel(label.ambient, label.series, label.levi, partner)
            return TwinBlock(frozenset({label, other}))
    return TwinBlock(frozenset({label}))


def _ell_condition(cond: str, ell: int) -> bool:
    if not cond.startswith("not"):
        return True
    return str(ell) not in cond[3:].split(",")


def semisimple_block(db: Database, ambient: str, series: str, ell: int, q: int) -> BlockLabel:
    """The block containing the semisimple character of the series."""
    rows = blocks_in_series(db, ambient, series, ell, q)
    for row in rows:
        base, _ = split_multiplicity(row.lam)
        if row.numbered and base == "1":
            return BlockLabel(ambient, series, row.levi, row.lam)
    raise DatasetError(f"no semisimple block row in ({ambient}, {series}, ell={ell})")


# ---------------------------------------------------------------------------
# descent to quasi-simple groups (Clifford theory report)

@dataclass(frozen=True)
class DescentReport:
    case: str  # "a" or "b"
    conjugate_block_count: int
    restriction_constituents: int | str
    height_preserving: bool


def descend_block(z: int, connected: bool, ell: int, invariant: bool = True) -> DescentReport:
    """Restriction behaviour from the connected-centre group to [G,G]^F.

    z is the order of Z([G,G]^F); case (b) = non-invariant block, which
    forces a disconnected centralizer and ell != z.
    """
    if z not in (1, 2, 3):
        raise ValueError("z must be 1, 2 or 3")
    if z == 1:
        return DescentReport("a", 1, 1, True)
    if not invariant:
        if connected:
            raise ValueError("a non-invariant block needs a disconnected centralizer")
        if ell == z:
            raise ValueError("case (b) contradicts ell = z")
        return DescentReport("b", z, z, True)
    if connected and ell != z:
        return DescentReport("a", 1, 1, True)
    return DescentReport("a", 1, f"<={z}", False)


# ---------------------------------------------------------------------------
# stored Lusztig induction decompositions

def rlg_decomposition(db: Database, case: str, lam: str) -> tuple[tuple[int, str], ...]:
    key = (case, lam)
    if key not in db.rlg:
        raise DatasetError(f"({case}, {lam}) is outside the three stored cases")
    return db.rlg[key]


def rlg_norm(terms: tuple[tuple[int, str], ...]) -> int:
    """Sum of squared coefficients of a stored decomposition."""
    return sum(c * c for c, _ in terms)


# ---------------------------------------------------------------------------
# Sylow 2-centres and Robinson reports

def sylow2_center(db: Database, form: str, q: int) -> int:
    if q % 2 == 0:
        raise ValueError("Sylow 2-centre orders need odd q")
    if form not in db.sylow2:
        raise DatasetError(f"{form!r} is not in the Sylow-2-centre table")
    from .unipdb import eval_center_expr

    return eval_center_expr(db.sylow2[form][1], q)


@dataclass(frozen=True)
class RobinsonReport:
    block_id: str
    min_defect: int
    center_order: int
    holds: bool
    strict: str  # "yes" | "no" | "unknown"
    abelian: str


# labels excluded from principal-2-block membership (own blocks)
_PRINCIPAL_EXCLUDE_BRACKET_KEEP = {("G2", "G2[1]"), ("G2", "G2[-1]")}


def _principal_members(db: Database, parent: str) -> list[UnipotentCharacter]:
    out = []
    for (p, label), chi in sorted(db.unip.items()):
        if p != parent:
            continue
        if "[" in label and p != "3D4" and (p, label) not in _PRINCIPAL_EXCLUDE_BRACKET_KEEP:
            continue
        out.append(chi)
    return out


def _block_characters(db: Database, block_id: str, q: int) -> list[tuple[str, GenericOrder]]:
    """(name, degree) pairs of the characters listed for a block."""
    parts = block_id.split(".")
    ambient = parts[0]
    if block_id.endswith(".principal"):
        parent = _parent_key_of_ambient(ambient)
        return [(c.label, c.degree) for c in _principal_members(db, parent)]
    if ".unip.theta." in block_id:
        congr = parts[-1]
        series_prefix = "E6[theta]" if congr == "q1mod4" else "2E6[theta]"
        parent = _parent_key_of_ambient(ambient)
        out = []
        for (p, label), chi in sorted(db.unip.items()):
            if p == parent and label.startswith(series_prefix + ","):
                out.append((label, chi.degree))
        if not out:
            raise DatasetError(f"no stored characters for {block_id}")
        return out
    # series block: ambient.ell.series.block_no
    ell = int(parts[1])
    block_no = int(parts[-1])
    series = ".".join(parts[2:-1])
    rows = blocks_in_series(db, ambient, series, ell, q)
    chosen: list[BlockRow] = []
    current = None
    for row in rows:
        if row.numbered:
            current = row.block_no
        if current == block_no:
            chosen.append(row)
    if not chosen:
        raise DatasetError(f"block {block_id} has no rows at q={q}")
    amb_order = group_order(ambient_rational_type(ambient))
    c_order = group_order(series_centralizer(db, ambient, series))
    out = []
    for row in chosen:
        base, mult = split_multiplicity(row.lam)
        if base.endswith("chars"):
            raise DatasetError(f"block {block_id} lists anonymous characters without degrees")
        parent = _row_parent_rt(db, row)
        for lam in expand_pm(base):
            lam_deg = resolve_degree(db, parent, lam)
            # Jordan correspondence: chi(1) = |G:C|_{p'} * lambda_s(1)
            index = amb_order / c_order
            deg = GenericOrder.from_parts(index.scalar, 0, dict(index.cyclo)) * lam_deg
            out.append((f"{row.levi}:{lam}", deg))
    return out


def _parent_key_of_ambient(ambient: str) -> str:
    return {"E6ad": "E6", "2E6ad": "2E6", "E7ad": "E7"}.get(ambient, ambient)


def robinson_check(db: Database, block_id: str, q: int) -> RobinsonReport:
    """min defect over the listed characters against |Z(D)|.

    Refuses to report when any listed character misses degree data.
    """
    info = db.defectinfo.get(block_id)
    if info is None:
        raise DatasetError(f"no defect-group data for block {block_id}")
    ell = 2 if ".2." in f".{block_id}." or block_id.split(".")[1] == "2" else int(block_id.split(".")[1])
    center = info.center_order_at(q)
    if info.shape == "defect0":
        holds = center == 1
        return RobinsonReport(block_id, 0, center, holds, "no" if info.abelian == "yes" else "unknown", info.abelian)
    ambient = block_id.split(".")[0]
    amb_order = group_order(ambient_rational_type(ambient)).evaluate_int(q)
    chars = _block_characters(db, block_id, q)
    v_group = ell_valuation(amb_order, ell)
    min_defect = None
    for _, deg in chars:
        v = v_group - ell_valuation(deg.evaluate_int(q), ell)
        if min_defect is None or v < min_defect:
            min_defect = v
    holds = ell**min_defect >= center
    if info.abelian == "no":
        strict = "yes" if ell**min_defect > center else "no"
    elif info.abelian == "yes":
        strict = "no"
    else:
        strict = "unknown"
    return RobinsonReport(block_id, min_defect, center, holds, strict, info.abelian)


def robinson_sweep(db: Database, ambient: str, ell: int, qs: list[int]) -> list[RobinsonReport]:
    """Reports for every tabulated block of the ambient with defect data."""
    if ell != 2:
        raise DatasetError("the Robinson sweep is tabulated for ell = 2 only")
    out = []
    for block_id in sorted(db.defectinfo):
        if not block_id.startswith(ambient + "."):
            continue
        congr = block_id.rsplit(".", 1)[-1]
        for q in qs:
            if congr == "q1mod4" and q % 4 != 1:
                continue
            if congr == "q3mod4" and q % 4 != 3:
                continue
            if ".5." in block_id:
                continue
            try:
                out.append(robinson_check(db, block_id, q))
            except DatasetError:
                # series blocks exist only at admissible congruences
                continue
    return out
