"""The curated dataset: unipotent characters, block tables, defect data.

`load_dataset` parses the line-oriented data file, resolves every cross
reference and checks the structural invariants (degree divisibility at
sampled q, quasi-central-defect flags against the numbered table lines,
Borel-de Siebenthal membership of centralizer types, e-split order and
Sylow-torus consistency).  The returned Database is immutable in spirit:
nothing mutates it after loading, so concurrent reads are safe.
"""

from __future__ import annotations

import importlib.resources
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .genorder import (
    GenericOrder,
    EllAdicContext,
    e_of,
    ell_valuation,
    is_prime,
    parse_order,
)
from .rattype import Congruence, RationalType, SimpleFactor, group_order, parse_rational_type
from .rootdata import build_root_system, parse_type_label, weyl_order
from .centralizers import IsolatedClass, centralizer_in_closure, load_isolated_classes
from .esplit import ESplitLevi, RelativeWeylGroup, sylow_e_torus_multiplicity


class DatasetError(Exception):
    """Parse error or invariant violation in the curated dataset."""


@dataclass(frozen=True)
class UnipotentCharacter:
    parent: str
    label: str
    degree: GenericOrder
    frobenius_class: str
    e_cuspidal_for: frozenset[int]
    quasi_central_for: frozenset[tuple[int, int]]

    @property
    def is_rational(self) -> bool:
        return self.frobenius_class == "rational"


@dataclass(frozen=True)
class CuspidalPair:
    levi: str
    character: str
    parent: str


@dataclass(frozen=True)
class BlockRow:
    ambient: str
    ell: int
    e: int
    series: str
    block_no: int | None
    levi: str
    centralizer_in_levi: str
    lam: str
    rel_weyl: str

    @property
    def numbered(self) -> bool:
        return self.block_no is not None


@dataclass(frozen=True)
class TwinContext:
    ambient: str
    series: str
    ell_condition: str
    levi: str
    pair: tuple[str, str]


@dataclass(frozen=True)
class DefectGroupInfo:
    block_id: str
    shape: str
    center_order: str
    abelian: str  # yes | no | unknown

    def center_order_at(self, q: int) -> int:
        return eval_center_expr(self.center_order, q)


@dataclass
class Database:
    unip: dict[tuple[str, str], UnipotentCharacter] = field(default_factory=dict)
    isolated: dict[str, list[IsolatedClass]] = field(default_factory=dict)
    levis: dict[tuple[str, int], list[str]] = field(default_factory=list)
    relweyl: dict[tuple[str, str, str], RelativeWeylGroup] = field(default_factory=dict)
    blockrows: list[BlockRow] = field(default_factory=list)
    twins: list[tuple[tuple[str, str], tuple[str, str]]] = field(default_factory=list)
    twinrows: list[TwinContext] = field(default_factory=list)
    defectinfo: dict[str, DefectGroupInfo] = field(default_factory=dict)
    rlg: dict[tuple[str, str], tuple[tuple[int, str], ...]] = field(default_factory=dict)
    sylow2: dict[str, tuple[str, str]] = field(default_factory=dict)

    # ------------------------------------------------------------- lookups

    def character(self, parent_key: str, label: str) -> UnipotentCharacter:
        try:
            return self.unip[(parent_key, label)]
        except KeyError:
            raise DatasetError(f"no unipotent character {label!r} of {parent_key!r}") from None

    def isolated_classes(self, ambient: str) -> list[IsolatedClass]:
        if ambient not in self.isolated:
            raise DatasetError(f"no isolated-class data for ambient {ambient!r}")
        return self.isolated[ambient]

    def e_split_levis(self, ambient: str, e: int) -> list[ESplitLevi]:
        key = (ambient, e)
        if key not in self.levis:
            raise DatasetError(f"no e-split Levi data for ({ambient}, e={e})")
        return [ESplitLevi(ambient, e, lab) for lab in self.levis[key]]

    def relative_weyl_group(self, ambient: str, levi: str, lam: str, series: str | None = None) -> RelativeWeylGroup:
        if series is not None:
            hit = self.relweyl.get((ambient, levi, f"{lam}:{series}"))
            if hit:
                return hit
        hit = self.relweyl.get((ambient, levi, lam))
        if hit:
            return hit
        matches = {
            k: v for k, v in self.relweyl.items()
            if k[0] == ambient and k[1] == levi and k[2].split(":")[0] == lam
        }
        if len(matches) == 1:
            return next(iter(matches.values()))
        if not matches:
            raise DatasetError(f"pair ({levi}, {lam}) of {ambient} not in dataset")
        raise DatasetError(
            f"pair ({levi}, {lam}) of {ambient} is ambiguous; give the series "
            f"(candidates: {sorted(k[2] for k in matches)})"
        )

    def box(self, ambient: str, ell: int, e: int, series: str) -> list[BlockRow]:
        rows = [
            r for r in self.blockrows
            if (r.ambient, r.ell, r.e, r.series) == (ambient, ell, e, series)
        ]
        return rows


# ---------------------------------------------------------------------------
# label handling

PM_EXPANSIONS = {
    "E6[theta^pm1]": ("E6[theta]", "E6[theta^2]"),
    "2E6[theta^pm1]": ("2E6[theta]", "2E6[theta^2]"),
    "E7[pmxi]": ("E7[xi]", "E7[-xi]"),
    "phi{512,pm}": ("phi{512,11}", "phi{512,12}"),
}

_MULT_RE = re.compile(r"^(?P<base>.*)\((?P<n>\d+)x\)$")


def split_multiplicity(token: str) -> tuple[str, int]:
    m = _MULT_RE.match(token)
    if m:
        return m.group("base"), int(m.group("n"))
    return token, 1


def expand_pm(token: str) -> tuple[str, ...]:
    """Expand a +-1 label into its members; other labels are singletons."""
    for key, expansion in PM_EXPANSIONS.items():
        if token == key:
            return expansion
        if token.startswith(key + "(x)"):
            rest = token[len(key):]
            return tuple(e + rest for e in expansion)
    return (token,)


def factor_key(f: SimpleFactor) -> str:
    return f"{f.twist if f.twist > 1 else ''}{f.letter}{f.rank}"


def resolve_degree(db: Database, parent: RationalType, token: str) -> GenericOrder:
    """Degree of the unipotent character with the given label of parent^F.

    Tensor labels are matched factor by factor in order; extension-field
    factors substitute q -> q^k into the base-type degree.  Anonymous slot
    labels (``6chars`` etc.) have no degree and raise.
    """
    token, _ = split_multiplicity(token)
    token = expand_pm(token)[0]
    if token.endswith("chars"):
        raise DatasetError(f"anonymous slot label {token!r} carries no degree")
    if token == "1":
        return GenericOrder.one()
    # exact record on a single-factor parent (covers comma-labels like
    # E6[theta],phi{1,0} of E8)
    if len(parent.factors) == 1:
        f = parent.factors[0]
        rec = db.unip.get((factor_key(f), token))
        if rec is not None:
            return rec.degree.substitute_q_power(f.field)
    pieces = token.split("(x)")
    if len(pieces) > len(parent.factors):
        raise DatasetError(f"label {token!r} has more tensor factors than {parent}")
    deg = GenericOrder.one()
    for piece, f in zip(pieces, parent.factors):
        if piece == "1":
            continue
        rec = db.unip.get((factor_key(f), piece))
        if rec is None:
            raise DatasetError(f"no character {piece!r} of factor {factor_key(f)} in {parent}")
        deg = deg * rec.degree.substitute_q_power(f.field)
    return deg


# ---------------------------------------------------------------------------
# centres of simply connected covers (finite parts, F-fixed points)

def center_order_sc(f: SimpleFactor, q: int) -> int:
    qk = q**f.field
    if f.letter == "A":
        return math.gcd(f.rank + 1, qk + 1 if f.twist == 2 else qk - 1)
    if f.letter in ("B", "C"):
        return math.gcd(2, q - 1)
    if f.letter == "D":
        if f.twist == 3:
            return 1
        if f.rank % 2 == 0:
            return math.gcd(2, q - 1) ** 2 if f.twist == 1 else math.gcd(2, q - 1)
        return math.gcd(4, qk + 1 if f.twist == 2 else qk - 1)
    if (f.letter, f.rank) == ("E", 6):
        return math.gcd(3, qk + 1 if f.twist == 2 else qk - 1)
    if (f.letter, f.rank) == ("E", 7):
        return math.gcd(2, q - 1)
    return 1


def central_ell_defect(db: Database, parent: RationalType, token: str, ctx: EllAdicContext) -> bool:
    """|chi(1)|_l |Z|_l = |G|_l, with the centre taken in the derived part.

    For unipotent characters this is the (quasi-)central l-defect predicate
    of the paper; torus parents (trivial derived part) always pass.
    """
    if not parent.factors:
        return True
    deg = resolve_degree(db, parent, token)
    v_deg = ell_valuation(deg.evaluate_int(ctx.q), ctx.ell)
    v_grp = 0
    v_z = 0
    for f in parent.factors:
        from .rattype import factor_order

        v_grp += ell_valuation(factor_order(f).evaluate_int(ctx.q), ctx.ell)
        v_z += ell_valuation(center_order_sc(f, ctx.q), ctx.ell)
    return v_deg + v_z == v_grp


def quasi_central_pairs(db: Database, ambient: str, ell: int, e: int, series: str) -> list[CuspidalPair]:
    """The quasi-central e-cuspidal pairs of a table box: its numbered lines."""
    rows = db.box(ambient, ell, e, series)
    if not rows:
        raise DatasetError(f"({ambient}, ell={ell}, e={e}, series={series}) not covered")
    return [
        CuspidalPair(r.levi, r.lam, r.centralizer_in_levi)
        for r in rows
        if r.numbered
    ]


# ---------------------------------------------------------------------------
# congruence-aware sampling of admissible q

def sample_q(ell: int, e: int, congruence: Congruence | None = None, count: int = 2,
             odd_only: bool = False, exclude: tuple[int, ...] = ()) -> list[int]:
    """The first `count` prime powers q with e_ell(q) = e matching the congruence."""
    out = []
    q = 2
    while len(out) < count and q < 20000:
        q += 1
        if not _is_prime_power(q):
            continue
        if q % ell == 0 or q in exclude or (odd_only and q % 2 == 0):
            continue
        if e_of(ell, q) != e:
            continue
        if congruence is not None and not congruence.matches(q):
            continue
        out.append(q)
    if len(out) < count:
        raise DatasetError(f"cannot sample q for ell={ell}, e={e}, {congruence}")
    return out


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return True


# ---------------------------------------------------------------------------
# series identifiers

# (ambient, series-id) -> (order of s, congruence picking the form, C-form string)
SERIES_FORMS: dict[tuple[str, str], tuple[int, str]] = {
    ("E6ad", "A2^3"): (3, "A2(q)^3"),
    ("E6ad", "A2(q^3)"): (3, "A2(q^3)"),
    ("E6ad", "A2(q^2).2A2"): (3, "A2(q^2).2A2(q)"),
    ("E6ad", "A5A1"): (2, "A5(q)A1(q)"),
    ("2E6ad", "2A2^3"): (3, "2A2(q)^3"),
    ("2E6ad", "2A2(q^3)"): (3, "2A2(q^3)"),
    ("2E6ad", "A2(q^2).A2"): (3, "A2(q^2).A2(q)"),
    ("2E6ad", "2A5A1"): (2, "2A5(q)A1(q)"),
    ("E7", "A5A2"): (3, "A5(q)A2(q)"),
    ("E7", "2A5.2A2"): (3, "2A5(q)2A2(q)"),
    ("E7", "D6A1"): (2, "D6(q)A1(q)"),
    ("E7", "A7"): (2, "A7(q)"),
    ("E7", "2A7"): (2, "2A7(q)"),
    ("E7", "A3^2A1"): (4, "A3(q)^2A1(q)"),
    ("E7", "2A3^2A1"): (4, "2A3(q)^2A1(q)"),
    ("E7", "A3(q^2)A1"): (4, "A3(q^2)A1(q)"),
    ("E7", "E6.2"): (2, "Phi1.E6(q).2"),
    ("E8", "E7A1"): (2, "E7(q)A1(q)"),
    ("E8", "E6A2"): (3, "E6(q)A2(q)"),
    ("E8", "2E6.2A2"): (3, "2E6(q)2A2(q)"),
    ("E8", "o6"): (6, "A5(q)A2(q)A1(q)"),
    ("E8", "o6t"): (6, "2A5(q).2A2(q)A1(q)"),
    ("G2", "A2"): (3, "A2(q)"),
    ("G2", "2A2"): (3, "2A2(q)"),
    ("G2", "A1A1~"): (2, "A1(q)A1~(q)"),
    ("F4", "A2A2~"): (3, "A2(q)A2~(q)"),
    ("F4", "2A2.2A2~"): (3, "2A2(q)2A2~(q)"),
}


def series_centralizer(db: Database, ambient: str, series: str) -> RationalType:
    try:
        _, form = SERIES_FORMS[(ambient, series)]
    except KeyError:
        raise DatasetError(f"unknown series {series!r} for {ambient!r}") from None
    disconnected = form.endswith(".2")
    if disconnected:
        form = form[:-2]
    rt = parse_rational_type(form)
    for cls in db.isolated.get(ambient, []):
        for f in cls.forms:
            if _same_type(f, rt):
                return f
    return rt


def _same_type(a: RationalType, b: RationalType) -> bool:
    return a.derived_key() == b.derived_key() and a.torus == b.torus


def series_congruence(db: Database, ambient: str, series: str) -> Congruence | None:
    return series_centralizer(db, ambient, series).congruence


# ---------------------------------------------------------------------------
# parsing

def _default_path():
    return importlib.resources.files("cycloblocks").joinpath("data/dataset.txt")


def load_dataset(path=None, validate: bool = True) -> Database:
    """Parse and validate the dataset; errors carry line numbers."""
    src = _default_path() if path is None else path
    text = src.read_text() if hasattr(src, "read_text") else open(src).read()
    db = Database()
    db.levis = {}
    raw_isolated: list[tuple[str, int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        try:
            _parse_record(db, raw_isolated, kind, parts)
        except (DatasetError, ValueError) as exc:
            raise DatasetError(f"line {lineno}: {exc}") from exc
    db.isolated = load_isolated_classes(raw_isolated)
    if validate:
        validate_database(db)
    return db


def _parse_record(db: Database, raw_isolated, kind: str, parts: list[str]) -> None:
    if kind == "unip":
        if len(parts) != 7:
            raise DatasetError(f"unip record needs 7 fields, got {len(parts)}")
        _, parent, label, degree_s, frob, cusp_s, qc_s = parts
        if frob not in ("rational", "theta", "theta2", "i", "-i", "xi", "-xi", "ptheta", "-theta"):
            raise DatasetError(f"unknown Frobenius class {frob!r}")
        if not cusp_s.startswith("cusp:") or not qc_s.startswith("qc:"):
            raise DatasetError("malformed cusp:/qc: fields")
        cusp = frozenset(
            int(x) for x in cusp_s[5:].split(",") if x not in ("", "-")
        )
        qc = frozenset(
            (int(a), int(b))
            for a, b in re.findall(r"\((\d+),(\d+)\)", qc_s[3:])
        )
        degree = parse_order(degree_s)
        key = (parent, label)
        if key in db.unip:
            raise DatasetError(f"duplicate unipotent character {key}")
        db.unip[key] = UnipotentCharacter(parent, label, degree, frob, cusp, qc)
    elif kind == "isolated":
        _, ambient, order, cong, rt = parts
        raw_isolated.append((ambient, int(order), cong, rt))
    elif kind == "levi":
        _, ambient, e, label = parts
        db.levis.setdefault((ambient, int(e)), []).append(label)
    elif kind == "relweyl":
        _, ambient, levi, lam, label, order = parts
        expected = coxeter_label_order(label)
        if expected != int(order):
            raise DatasetError(
                f"relative Weyl group {label} has order {expected}, record says {order}"
            )
        db.relweyl[(ambient, levi, lam)] = RelativeWeylGroup(label, int(order))
    elif kind == "blockrow":
        _, ambient, ell, e, series, no, levi, cls, lam, rw = parts
        db.blockrows.append(
            BlockRow(
                ambient, int(ell), int(e), series,
                None if no == "-" else int(no), levi, cls, lam, rw,
            )
        )
    elif kind == "twin":
        a, b = parts[1], parts[2]
        pa = tuple(a.split(":"))
        pb = tuple(b.split(":"))
        db.twins.append((pa, pb))
    elif kind == "twinrow":
        _, ambient, series, cond, levi, pair = parts
        labels = _split_outside_braces(pair)
        if len(labels) != 2:
            raise DatasetError(f"twin pair {pair!r} must have two labels")
        db.twinrows.append(TwinContext(ambient, series, cond, levi, (labels[0], labels[1])))
    elif kind == "defectinfo":
        _, block_id, shape, center, abelian = parts
        if abelian not in ("yes", "no", "unknown"):
            raise DatasetError(f"bad abelian flag {abelian!r}")
        db.defectinfo[block_id] = DefectGroupInfo(block_id, shape, center, abelian)
    elif kind == "rlg":
        _, case, lam = parts[:3]
        terms = []
        for term in parts[3:]:
            m = re.match(r"([+-])(?:(\d+)\*)?(.+)$", term)
            if not m:
                raise DatasetError(f"bad signed term {term!r}")
            sign = 1 if m.group(1) == "+" else -1
            coeff = int(m.group(2) or 1)
            terms.append((sign * coeff, m.group(3)))
        db.rlg[(case, lam)] = tuple(terms)
    elif kind == "sylow2":
        _, form, cent, expr = parts
        db.sylow2[form] = (cent, expr)
    else:
        raise DatasetError(f"unknown record kind {kind!r}")


def _split_outside_braces(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def coxeter_label_order(label: str) -> int:
    """Order of a relative Weyl group from its label, e.g. A5xA1, Z4xA1, E6.2."""
    if label in ("1", "-"):
        return 1
    total = 1
    for comp in label.split("x"):
        double = comp.endswith(".2")
        if double:
            comp = comp[:-2]
        m = re.fullmatch(r"(?:Z(\d+)|(\d+)|([A-G]\d+)(?:\^(\d+))?)", comp)
        if not m:
            raise DatasetError(f"bad Coxeter label component {comp!r}")
        if m.group(1):
            part = int(m.group(1))
        elif m.group(2):
            part = int(m.group(2))
        else:
            part = weyl_order(build_root_system(m.group(3)))
            if m.group(4):
                part **= int(m.group(4))
        total *= part * (2 if double else 1)
    return total


# ---------------------------------------------------------------------------
# centre-order expressions for defect data:  INT | (q-1)_2 | (q+1)_2 | products

_CENTER_TOKEN = re.compile(r"\(q([+-])1\)_2(?:\^(\d+))?|(\d+)|\*")


def eval_center_expr(expr: str, q: int) -> int:
    if expr in ("1", "defect0"):
        return 1
    total = 1
    pos = 0
    while pos < len(expr):
        m = _CENTER_TOKEN.match(expr, pos)
        if not m:
            raise DatasetError(f"bad centre-order expression {expr!r}")
        pos = m.end()
        if m.group(3):
            total *= int(m.group(3))
        elif m.group(1):
            base = q - 1 if m.group(1) == "-" else q + 1
            part = 1
            while base % 2 == 0:
                base //= 2
                part *= 2
            total *= part ** int(m.group(2) or 1)
    return total


# ---------------------------------------------------------------------------
# validation

AMBIENT_ROOT = {
    "E6ad": "E6", "2E6ad": "E6", "E7": "E7", "E7ad": "E7", "E8": "E8",
    "G2": "G2", "F4": "F4", "3D4": "D4", "A1": "A1", "A2": "A2", "A3": "A3",
}

# exceptional-type components where e-cuspidality may depend on the parabolic
Q2_UNRELIABLE = ("2E6ad", "E7", "E8")

SAMPLE_QS = (2, 3, 4, 5, 7, 8, 9, 11, 13)


def ambient_rational_type(ambient: str) -> RationalType:
    twist = 2 if ambient.startswith("2") else 3 if ambient.startswith("3") else 1
    root = AMBIENT_ROOT[ambient]
    letter, rank = parse_type_label(root)
    return RationalType((SimpleFactor(letter, rank, twist, 1),), GenericOrder.one())


def validate_database(db: Database) -> None:
    _check_degrees_divide_orders(db)
    _check_isolated_membership(db)
    _check_levis(db)
    _check_blockrows(db)
    _check_numbered_iff_quasicentral(db)
    _check_classical_two_defect(db)
    _check_type_a_cuspidality(db)


def _parent_order_bound(parent_key: str) -> GenericOrder:
    twist = 2 if parent_key.startswith("2") else 3 if parent_key.startswith("3") else 1
    base = parent_key[1:] if twist > 1 else parent_key
    letter, rank = parse_type_label(base)
    from .rattype import factor_order

    return factor_order(SimpleFactor(letter, rank, twist, 1))


def _check_degrees_divide_orders(db: Database) -> None:
    for (parent, label), chi in sorted(db.unip.items()):
        order = _parent_order_bound(parent)
        for q in SAMPLE_QS:
            if q == 2 and parent in ("2E6", "E7", "E8"):
                continue  # q = 2 is excluded for these types
            val = chi.degree.evaluate(q)
            if val.denominator != 1 or val <= 0:
                raise DatasetError(f"{parent}:{label} degree not a positive integer at q={q}")
            if order.evaluate_int(q) % val.numerator != 0:
                raise DatasetError(f"{parent}:{label} degree does not divide |{parent}| at q={q}")


def _check_isolated_membership(db: Database) -> None:
    for ambient, classes in db.isolated.items():
        for cls in classes:
            for form in cls.forms:
                if not centralizer_in_closure(form, ambient):
                    raise DatasetError(
                        f"centralizer {form} of {ambient} outside the "
                        "Borel-de Siebenthal closure"
                    )
                amb_order = group_order(ambient_rational_type(ambient))
                for q in (3, 4, 5, 7, 9, 11, 13):
                    if form.congruence and not form.congruence.matches(q):
                        continue
                    if amb_order.evaluate_int(q) % group_order(form).evaluate_int(q) != 0:
                        raise DatasetError(f"|{form}| does not divide |{ambient}| at q={q}")


def _check_levis(db: Database) -> None:
    for (ambient, e), labels in sorted(db.levis.items()):
        amb = ambient_rational_type(ambient)
        amb_order = group_order(amb)
        a_e = amb_order.multiplicity(e)
        max_exp = -1
        max_count = 0
        for label in labels:
            levi = ESplitLevi(ambient, e, label)
            lr = levi.rational_type
            lo = group_order(lr)
            if lo.multiplicity(e) != a_e:
                raise DatasetError(
                    f"levi {label} of ({ambient}, e={e}) misses the Sylow Phi_{e}-torus"
                )
            for q in (3, 4, 5, 7):
                if amb_order.evaluate_int(q) % lo.evaluate_int(q) != 0:
                    raise DatasetError(f"|{label}| does not divide |{ambient}| at q={q}")
            exp = lr.torus.multiplicity(e)
            if exp > max_exp:
                max_exp, max_count = exp, 1
            elif exp == max_exp:
                max_count += 1
        if str(amb) not in labels and f"{AMBIENT_ROOT[ambient]}(q)" not in [
            l.replace("ad", "") for l in labels
        ]:
            raise DatasetError(f"({ambient}, e={e}) Levi list misses G itself")
        if max_count != 1:
            raise DatasetError(
                f"({ambient}, e={e}): minimal e-split Levi not unique "
                f"(torus Phi_{e}-exponent {max_exp} occurs {max_count} times)"
            )


def _row_parent(db: Database, row: BlockRow) -> RationalType:
    token = row.centralizer_in_levi
    if token in ("L*F", "C_G*(s)F"):
        if token == "C_G*(s)F":
            return series_centralizer(db, row.ambient, row.series)
        # L*F: s is central in L*, the parent is the Levi itself
        return ESplitLevi(row.ambient, row.e, row.levi).rational_type
    return parse_rational_type(token)


def _check_blockrows(db: Database) -> None:
    for row in db.blockrows:
        if (row.ambient, row.e) not in db.levis:
            raise DatasetError(f"row {row}: no Levi data for e={row.e}")
        levi_labels = db.levis[(row.ambient, row.e)]
        if row.levi not in levi_labels and row.levi != "emptyset":
            raise DatasetError(f"row {row}: Levi {row.levi} not in the e-split list")
        parent = _row_parent(db, row)
        for lam in expand_pm(split_multiplicity(row.lam)[0]):
            if lam.endswith("chars"):
                continue
            resolve_degree(db, parent, lam)  # raises on dangling references
        # relative Weyl labels must be consistent with stored pairs
        rw = db.relative_weyl_group(row.ambient, row.levi, row.lam, row.series)
        if rw.label != row.rel_weyl:
            raise DatasetError(
                f"row {row}: relative Weyl label {row.rel_weyl} != stored {rw.label}"
            )
        # partition property: no repeated lambda inside one box
    seen_boxes: dict[tuple, list[str]] = {}
    for row in db.blockrows:
        seen_boxes.setdefault((row.ambient, row.ell, row.e, row.series), []).append(row.lam)
    for box, lams in seen_boxes.items():
        if len(set(lams)) != len(lams):
            raise DatasetError(f"box {box}: repeated lambda label breaks the partition")


def _box_sample_qs(db: Database, ambient: str, ell: int, e: int, series: str) -> list[int]:
    cong = series_congruence(db, ambient, series)
    exclude = (2,) if ambient in Q2_UNRELIABLE else ()
    return sample_q(ell, e, cong, count=2, odd_only=(ell == 2), exclude=exclude)


def _check_numbered_iff_quasicentral(db: Database) -> None:
    for row in db.blockrows:
        base, _ = split_multiplicity(row.lam)
        if base.endswith("chars"):
            continue  # anonymous counted slots carry no degree data
        parent = _row_parent(db, row)
        for q in _box_sample_qs(db, row.ambient, row.ell, row.e, row.series):
            ctx = EllAdicContext(row.ell, q)
            got = all(
                central_ell_defect(db, parent, lam, ctx) for lam in expand_pm(base)
            )
            if got != row.numbered:
                raise DatasetError(
                    f"row ({row.ambient}, l={row.ell}, e={row.e}, {row.series}, "
                    f"{row.levi}, {row.lam}): quasi-central defect {got} at q={q} "
                    f"but the line is {'numbered' if row.numbered else 'unnumbered'}"
                )


def _check_classical_two_defect(db: Database) -> None:
    # quasi-central 2-defect with all components classical forces a torus
    for (parent, label), chi in db.unip.items():
        if (2, 1) in chi.quasi_central_for or (2, 2) in chi.quasi_central_for:
            letter = parent[1] if parent[0] in "23" else parent[0]
            if letter in "ABCD" and not (parent == "3D4"):
                raise DatasetError(
                    f"{parent}:{label} flagged quasi-central at ell=2 with "
                    "classical components; the Levi must be a torus"
                )


def _check_type_a_cuspidality(db: Database) -> None:
    """For type A the e-cuspidal unipotent characters are the d-core labels."""
    for (parent, label), chi in sorted(db.unip.items()):
        letter = parent[1] if parent[0] in "23" else parent[0]
        if letter != "A" or not label.startswith("phi{"):
            continue
        partition = [int(c) for c in label[4:-1]]
        twisted = parent.startswith("2")
        for e in chi.e_cuspidal_for:
            # Ennola: d-cuspidality of the twisted group at e matches the
            # untwisted group at the Ennola-partner d'
            d = _ennola_e(e) if twisted else e
            if d > 1 and not _is_d_core(partition, d):
                raise DatasetError(f"{parent}:{label} flagged {e}-cuspidal but not a core")


def _ennola_e(e: int) -> int:
    if e == 1:
        return 2
    if e == 2:
        return 1
    if e % 4 == 2:
        return e // 2
    if e % 2 == 1:
        return 2 * e
    return e


def _is_d_core(partition: list[int], d: int) -> bool:
    hooks = _hook_lengths(partition)
    return all(h % d != 0 for h in hooks)


def _hook_lengths(partition: list[int]) -> list[int]:
    out = []
    cols = [0] * (partition[0] if partition else 0)
    for row_len in partition:
        for c in range(row_len):
            cols[c] += 1
    for i, row_len in enumerate(partition):
        for j in range(row_len):
            arm = row_len - j - 1
            leg = cols[j] - i - 1
            out.append(arm + leg + 1)
    return out
