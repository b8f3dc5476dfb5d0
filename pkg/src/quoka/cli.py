"""Operator CLI: build an index directory, serve the API, run offline queries."""

from __future__ import annotations

import json
import os
import sys
import time

import click

from . import kernels, scoring, storage
from .analyzer import AnalyzerConfig, load_stopwords
from .corpus import ValidationConfig, load_corpus
from .errors import QuokaError
from .index import build_search_index
from .scoring import YearRange


def _fatal(code: str, message: str) -> None:
    click.echo(f"error: {code}: {message}", err=True)
    sys.exit(1)


@click.group()
def main():
    """Faceted scholarly search over institution-year and DOI indexes."""


@main.command()
@click.option("--publications", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--institutions", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--c", "c_param", type=float, default=1.0, show_default=True,
              help="H2 normalization parameter, baked into the index.")
@click.option("--stopwords", type=click.Path(exists=True, dir_okay=False),
              help="Custom stopword file (one term per line, # comments).")
@click.option("--min-year", type=int, default=1800, show_default=True)
@click.option("--max-year", type=int, default=2100, show_default=True)
def build(publications, institutions, out, c_param, stopwords, min_year, max_year):
    """Load corpus files, build both indexes, write them to OUT."""
    analyzer = AnalyzerConfig(
        stopwords=load_stopwords(stopwords) if stopwords else AnalyzerConfig().stopwords
    )
    started = time.perf_counter()
    try:
        corpus, pub_report, inst_report = load_corpus(
            publications, institutions, ValidationConfig(min_year, max_year)
        )
        index = build_search_index(corpus, analyzer, c=c_param)
        storage.save_index(index, out)
    except QuokaError as exc:
        _fatal("build_failed", str(exc))
        return
    elapsed = time.perf_counter() - started

    def report_line(label, report):
        click.echo(
            f"{label}: total={report.total_lines} accepted={report.accepted} "
            f"rejected={report.rejected} duplicates={report.duplicates}"
        )
        for reason in report.rejection_reasons:
            click.echo(f"  rejected {reason}")

    report_line("publications", pub_report)
    report_line("institutions", inst_report)
    click.echo(f"unresolved affiliations: {corpus.unresolved_affiliations}")
    iy, di = index.institution_year, index.doi
    click.echo(
        f"institution-year index: N={iy.meta.document_count} "
        f"vocabulary={iy.postings.vocabulary_size} "
        f"average_length={iy.meta.average_length:.2f}"
    )
    click.echo(
        f"doi index: N={di.meta.document_count} "
        f"vocabulary={di.postings.vocabulary_size} "
        f"average_length={di.meta.average_length:.2f}"
    )
    click.echo(f"elapsed: {elapsed:.2f}s")
    click.echo(f"index written to {out}")


@main.command()
@click.option("--index", "index_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--port", type=int, default=8080, show_default=True,
              help="Overridden by QUOKA_PORT when set.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--shoebox", "shoebox_path", required=True, type=click.Path(dir_okay=False))
@click.option("--static", "static_dir", type=click.Path(exists=True, file_okay=False),
              help="Directory of UI assets to serve at /.")
@click.option("--cors", "cors_origin", help="Origin to allow via CORS.")
def serve(index_dir, port, host, shoebox_path, static_dir, cors_origin):
    """Serve the JSON API (and optionally the UI) over HTTP."""
    import uvicorn

    from .server import create_app
    from .shoebox import Shoebox

    try:
        index = storage.load_index(index_dir)
    except QuokaError as exc:
        _fatal("index_unreadable", str(exc))
        return
    kernels.warmup()
    app = create_app(index, Shoebox(shoebox_path), cors_origin, static_dir)
    port = int(os.environ.get("QUOKA_PORT", port))
    uvicorn.run(app, host=host, port=port, log_level="warning")


def _parse_years(spec: str | None) -> YearRange | None:
    if not spec:
        return None
    try:
        lo, hi = spec.split(":", 1)
        return YearRange(int(lo), int(hi))
    except ValueError as exc:
        raise click.UsageError(f"--years must look like 1990:2005 ({exc})")


@main.command()
@click.option("--index", "index_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--q", "query_text", required=True)
@click.option("--years", help="Inclusive range, e.g. 1990:2005; default full span.")
@click.option("--docs/--institutions", "docs_mode", default=False,
              help="Rank documents instead of institutions.")
@click.option("--top", type=int, default=10, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="table",
              show_default=True)
def query(index_dir, query_text, years, docs_mode, top, fmt):
    """Run one ranked query against a built index and print the results."""
    try:
        index = storage.load_index(index_dir)
    except QuokaError as exc:
        _fatal("index_unreadable", str(exc))
        return
    kernels.warmup()
    year_range = _parse_years(years)
    q = scoring.analyze_query(query_text, index.analyzer)

    if docs_mode:
        ranked = scoring.rank_documents(q, top, index, year_range=year_range)
        rows = [
            {"doi": r.doi, "score": r.score, "year": r.year, "title": r.title}
            for r in ranked
        ]
        header = f"{'#':>3}  {'score':>12}  {'year':>5}  doi / title"
        lines = [
            f"{i + 1:>3}  {row['score']:>12.6f}  {row['year']:>5}  {row['doi']}  {row['title']}"
            for i, row in enumerate(rows)
        ]
    else:
        ranked = scoring.rank_institutions(q, year_range, top, index)
        rows = [
            {
                "institution_id": r.institution_id,
                "score": r.score,
                "name": r.name,
                "per_year": r.per_year,
            }
            for r in ranked
        ]
        header = f"{'#':>3}  {'score':>12}  institution"
        lines = [
            f"{i + 1:>3}  {row['score']:>12.6f}  {row['institution_id']}"
            + (f"  {row['name']}" if row["name"] else "")
            for i, row in enumerate(rows)
        ]

    if fmt == "json":
        click.echo(json.dumps(rows, indent=2, sort_keys=True))
    else:
        click.echo(header)
        for line in lines:
            click.echo(line)
        if not lines:
            click.echo("(no results)")


if __name__ == "__main__":
    main()
