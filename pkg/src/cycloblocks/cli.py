"""Command-line front end: queries, table emission, golden verification,
Robinson sweeps.

Exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
3 dataset invariant violation.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .genorder import EllAdicContext, ell_part, ell_valuation, parse_order
from .rattype import parse_rational_type, group_order
from .unipdb import Database, DatasetError, load_dataset
from . import blocks as blocks_mod
from . import tables as tables_mod

_DB: Database | None = None


def _db() -> Database:
    global _DB
    if _DB is None:
        path = os.environ.get("CYCLOBLOCKS_DATASET")
        try:
            _DB = load_dataset(path)
        except DatasetError as exc:
            click.echo(f"dataset invariant violation: {exc}", err=True)
            sys.exit(3)
    return _DB


def _fail_usage(msg: str):
    click.echo(msg, err=True)
    sys.exit(2)


@click.group()
def main() -> None:
    """Exact generic structure theory of exceptional groups of Lie type."""


@main.command()
@click.argument("type_string")
@click.option("--q", type=int, default=None, help="evaluate at this prime power")
@click.option("--ell", type=int, default=None, help="also report the ell-part")
def order(type_string: str, q: int | None, ell: int | None) -> None:
    """Generic order of a rational type, or a cyclotomic expression."""
    try:
        if type_string.startswith("Phi") or type_string.startswith("q"):
            g = parse_order(type_string)
        else:
            token = type_string if "(" in type_string else f"{type_string}(q)"
            g = group_order(parse_rational_type(token))
    except ValueError as exc:
        _fail_usage(f"parse error: {exc}")
    click.echo(f"order = {g}")
    click.echo(f"expanded = {g.expanded_str()}")
    if q is not None:
        value = g.evaluate_int(q)
        click.echo(f"value at q={q}: {value}")
        if ell is not None:
            click.echo(f"{ell}-part: {ell_part(value, ell)}")


@main.command()
@click.argument("ambient")
@click.option("--q", type=int, default=None, help="resolve rational forms at this q")
def centralizers(ambient: str, q: int | None) -> None:
    """Isolated classes of the ambient type and their rational forms."""
    db = _db()
    try:
        classes = db.isolated_classes(ambient)
    except DatasetError as exc:
        _fail_usage(str(exc))
    for cls in classes:
        click.echo(f"order {cls.order}:")
        if q is None:
            for form in cls.forms:
                cong = str(form.congruence) if form.congruence else "any q"
                click.echo(f"  {form}  [{cong}]")
        else:
            try:
                click.echo(f"  {cls.rational_form(q)}")
            except ValueError as exc:
                click.echo(f"  excluded: {exc}")


@main.command()
@click.argument("ambient")
@click.option("--e", type=int, required=True)
def esplit(ambient: str, e: int) -> None:
    """e-split Levi subgroups of the ambient type."""
    db = _db()
    try:
        levis = db.e_split_levis(ambient, e)
    except DatasetError as exc:
        _fail_usage(str(exc))
    for levi in levis:
        click.echo(levi.label)


@main.command(name="blocks")
@click.argument("ambient")
@click.option("--series", required=True)
@click.option("--ell", type=int, required=True)
@click.option("--q", type=int, required=True)
@click.option("--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv")
def blocks_cmd(ambient: str, series: str, ell: int, q: int, fmt: str) -> None:
    """The block-table box of a Lusztig series at (ell, q)."""
    db = _db()
    try:
        rows = blocks_mod.blocks_in_series(db, ambient, series, ell, q)
    except (DatasetError, ValueError) as exc:
        _fail_usage(str(exc))
    records = [
        {
            "no": row.block_no if row.numbered else "-",
            "series": row.series,
            "l": row.ell,
            "e": row.e,
            "L": row.levi,
            "C_L(s)": row.centralizer_in_levi,
            "lambda": row.lam,
            "W(L,lambda)": row.rel_weyl,
        }
        for row in rows
    ]
    if fmt == "json":
        click.echo(json.dumps(records, indent=0, sort_keys=True))
    else:
        cols = ["no", "series", "l", "e", "L", "C_L(s)", "lambda", "W(L,lambda)"]
        click.echo("\t".join(cols))
        for rec in records:
            click.echo("\t".join(str(rec[c]) for c in cols))


@main.command()
@click.argument("ambient")
@click.option("--ell", type=int, default=2, show_default=True)
@click.option("--q", "q_list", required=True, help="comma-separated prime powers")
def robinson(ambient: str, ell: int, q_list: str) -> None:
    """Robinson-conjecture reports for the tabulated blocks of a type."""
    db = _db()
    try:
        qs = [int(x) for x in q_list.split(",")]
    except ValueError:
        _fail_usage(f"bad q list {q_list!r}")
    try:
        reports = blocks_mod.robinson_sweep(db, ambient, ell, qs)
    except DatasetError as exc:
        _fail_usage(str(exc))
    if not reports:
        _fail_usage(f"no tabulated {ell}-blocks with defect data for {ambient}")
    for r in reports:
        click.echo(
            f"{r.block_id}\tmin_defect={r.min_defect}\t|Z(D)|={r.center_order}"
            f"\tholds={str(r.holds).lower()}\tstrict={r.strict}"
        )
    if not all(r.holds for r in reports):
        sys.exit(1)


@main.command()
@click.option("--emit", "table_id", required=True,
              help="table id, or 'all' to write every table")
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="write files into this directory instead of stdout")
def tables(table_id: str, out_dir: str | None) -> None:
    """Regenerate golden tables."""
    db = _db()
    ids = tables_mod.TABLE_IDS if table_id == "all" else (table_id,)
    try:
        rendered = {tid: tables_mod.emit_table(db, tid) for tid in ids}
    except DatasetError as exc:
        _fail_usage(str(exc))
    if out_dir is None:
        for tid in ids:
            click.echo(rendered[tid], nl=False)
    else:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        for tid in ids:
            (path / f"{tid}.tsv").write_text(rendered[tid])
            click.echo(f"wrote {path / f'{tid}.tsv'}")


@main.command()
@click.option("--golden", "golden_dir", type=click.Path(exists=False), required=True)
def verify(golden_dir: str) -> None:
    """Byte-compare regenerated tables against a golden directory."""
    db = _db()
    path = Path(golden_dir)
    if not path.is_dir():
        click.echo(f"missing golden directory {golden_dir}", err=True)
        sys.exit(2)
    failures = []
    for tid in tables_mod.TABLE_IDS:
        golden_file = path / f"{tid}.tsv"
        if not golden_file.exists():
            click.echo(f"missing table file {golden_file}", err=True)
            sys.exit(2)
        want = golden_file.read_text()
        got = tables_mod.emit_table(db, tid)
        if want != got:
            failures.append(tid)
            for i, (a, b) in enumerate(zip(want.splitlines(), got.splitlines())):
                if a != b:
                    click.echo(f"{tid}: first diff at line {i + 1}:")
                    click.echo(f"  golden:      {a}")
                    click.echo(f"  regenerated: {b}")
                    break
            else:
                click.echo(f"{tid}: line-count mismatch")
        else:
            click.echo(f"{tid}: ok")
    if failures:
        click.echo(f"{len(failures)} table(s) differ: {', '.join(failures)}")
        sys.exit(1)


if __name__ == "__main__":
    main()
