"""Byte-stable emission of the block-distribution tables as TSV.

Each emitter regenerates one committed golden file from the loaded
database; `verify` byte-compares a regeneration against a golden
directory.  Output is deterministic: fields are taken from the dataset in
storage order, all labels are ASCII.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

from .unipdb import Database, DatasetError


@dataclass(frozen=True)
class TableSpec:
    table_id: str
    title: str
    kind: str  # blockbox | twins | sylow | defect
    ambient: str = ""
    ells: tuple[int, ...] = ()
    series: tuple[str, ...] = ()


TABLES: tuple[TableSpec, ...] = (
    TableSpec(
        "e6ad_ehc_series",
        "e-Harish-Chandra series in E6(q)ad",
        "blockbox",
        "E6ad",
        (2, 3),
        ("A2^3", "A2(q^3)", "A2(q^2).2A2", "A5A1"),
    ),
    TableSpec(
        "e7ad_ehc_series",
        "e-Harish-Chandra series in E7(q)ad",
        "blockbox",
        "E7",
        (2, 3),
        ("A5A2", "2A5.2A2", "D6A1", "A7", "2A7", "A3^2A1", "2A3^2A1", "A3(q^2)A1"),
    ),
    TableSpec(
        "e8_l5_q1mod5",
        "Quasi-isolated 5-blocks in E8(q), q=1 mod 5",
        "blockbox",
        "E8",
        (5,),
        ("o6", "o6t"),
    ),
    TableSpec(
        "e8_l5_q2mod5",
        "Quasi-isolated 5-blocks in E8(q), q=+-2 mod 5",
        "blockbox4",
        "E8",
        (5,),
        ("o6",),
    ),
    TableSpec(
        "e7_l3_corrected",
        "Harish-Chandra series in some isolated 3-blocks of E7(q), q=1 mod 3",
        "blockbox",
        "E7",
        (3,),
        ("E6.2",),
    ),
    TableSpec(
        "e8_l3_corrected",
        "Harish-Chandra series in some isolated 3-blocks of E8(q), q=1 mod 3",
        "blockbox",
        "E8",
        (3,),
        ("E7A1",),
    ),
    TableSpec(
        "e8_l2_q1mod4",
        "Harish-Chandra series in some isolated 2-blocks of E8(q), q=1 mod 4",
        "blockbox",
        "E8",
        (2,),
        ("E6A2", "2E6.2A2"),
    ),
    TableSpec("twin_blocks", "t-Twin blocks, ell | (q+1)", "twins"),
    TableSpec("sylow2_centers", "Centres of Sylow 2-subgroups", "sylow"),
    TableSpec(
        "nonabelian_defect",
        "Non-principal unipotent 2-blocks of non-abelian defect",
        "defect",
    ),
)

TABLE_IDS = tuple(t.table_id for t in TABLES)


def emit_table(db: Database, table_id: str) -> str:
    spec = next((t for t in TABLES if t.table_id == table_id), None)
    if spec is None:
        raise DatasetError(f"unknown table id {table_id!r}; known: {', '.join(TABLE_IDS)}")
    out = io.StringIO()
    out.write(f"# {spec.title}\n")
    if spec.kind in ("blockbox", "blockbox4"):
        _emit_blockbox(db, spec, out)
    elif spec.kind == "twins":
        _emit_twins(db, out)
    elif spec.kind == "sylow":
        _emit_sylow(db, out)
    elif spec.kind == "defect":
        _emit_defect(db, out)
    return out.getvalue()


def _emit_blockbox(db: Database, spec: TableSpec, out: io.StringIO) -> None:
    out.write("no\tseries\tl\te\tL\tC_L(s)\tlambda\tW(L,lambda)\n")
    want_e = (4,) if spec.kind == "blockbox4" else (1, 2)
    for ell in spec.ells:
        for e in want_e:
            for series in spec.series:
                for row in db.box(spec.ambient, ell, e, series):
                    out.write(
                        "\t".join(
                            (
                                str(row.block_no) if row.numbered else "-",
                                row.series,
                                str(row.ell),
                                str(row.e),
                                row.levi,
                                row.centralizer_in_levi,
                                row.lam,
                                row.rel_weyl,
                            )
                        )
                        + "\n"
                    )


def _emit_twins(db: Database, out: io.StringIO) -> None:
    out.write("G\tseries\tl\tL_t\tlambda_t,lambda_t'\n")
    for ctx in db.twinrows:
        out.write(
            "\t".join(
                (ctx.ambient, ctx.series, ctx.ell_condition, ctx.levi, ",".join(ctx.pair))
            )
            + "\n"
        )


def _emit_sylow(db: Database, out: io.StringIO) -> None:
    out.write("S\tC_G(t)\tZ(P)\n")
    for form, (cent, expr) in db.sylow2.items():
        out.write(f"{form}\t{cent}\t{expr}\n")


def _emit_defect(db: Database, out: io.StringIO) -> None:
    out.write("block\tD\t|Z(D)|\tabelian\n")
    for block_id, info in db.defectinfo.items():
        if ".unip.theta." not in block_id:
            continue
        out.write(f"{block_id}\t{info.shape}\t{info.center_order}\t{info.abelian}\n")


def emit_all(db: Database) -> dict[str, str]:
    return {tid: emit_table(db, tid) for tid in TABLE_IDS}
