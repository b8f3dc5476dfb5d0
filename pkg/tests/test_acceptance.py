"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
(via the hook in conftest). Tolerances are pinned here and nowhere else.

The expected-value authority throughout is tests/oracle.py, the
independent brute-force evaluator; frozen constants in this file were
computed with it.
"""

import dataclasses
import json
import math
import random
import signal
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

import oracle
import shoebox_worker
import test_service as contract
from conftest import make_t1_corpus, random_corpus, random_query_terms, write_jsonl
from quoka import kernels
from quoka.aggregate import ALLOWED_CELL_DEGREES, heatmap, timeline
from quoka.analyzer import AnalyzerConfig
from quoka.corpus import Corpus, InstitutionRecord, PublicationRecord
from quoka.index import build_search_index
from quoka.scoring import (
    YearRange,
    analyze_query,
    h2_normalize,
    rank_documents,
    rank_institutions,
    score_institution,
    score_institution_year,
    term_weight,
)
from quoka.server import create_app
from quoka.shoebox import Shoebox
from quoka.storage import load_index, save_index

CFG = AnalyzerConfig()
REL_ORACLE = 1e-9
REL_ADDITIVITY = 1e-12


def q(text):
    return analyze_query(text, CFG)


def _assert_matches_oracle(corpus, index, rng):
    lo, hi = index.institution_year.year_span()
    for _ in range(3):
        terms = random_query_terms(rng)
        query = q(" ".join(terms))
        y_lo = rng.randint(lo - 1, hi)
        y_hi = rng.randint(y_lo, hi + 1)

        expected = oracle.rank_institutions(corpus, CFG, terms, y_lo, y_hi, 100)
        actual = rank_institutions(query, YearRange(y_lo, y_hi), 100, index)
        assert [r.institution_id for r in actual] == [row[0] for row in expected]
        for got, (_, total, per_year) in zip(actual, expected):
            assert got.score == pytest.approx(total, rel=REL_ORACLE)
            assert got.per_year.keys() == per_year.keys()
            for year, value in per_year.items():
                assert got.per_year[year] == pytest.approx(value, rel=REL_ORACLE)

        inst_filter = rng.choice([None] + sorted(corpus.institutions))
        expected_docs = oracle.rank_documents(
            corpus, CFG, terms, 100,
            institution_id=inst_filter, year_from=y_lo, year_to=y_hi,
        )
        actual_docs = rank_documents(
            query, 100, index,
            institution_id=inst_filter, year_range=YearRange(y_lo, y_hi),
        )
        assert [d.doi for d in actual_docs] == [doi for doi, _ in expected_docs]
        for got, (_, score) in zip(actual_docs, expected_docs):
            assert got.score == pytest.approx(score, rel=REL_ORACLE)

        expected_timeline = oracle.timeline(corpus, CFG, terms)
        buckets = timeline(query, index)
        assert [b.year for b in buckets] == sorted(expected_timeline)
        for bucket in buckets:
            total, relative = expected_timeline[bucket.year]
            assert bucket.total == pytest.approx(total, rel=REL_ORACLE, abs=1e-300)
            assert bucket.relative == pytest.approx(relative, rel=REL_ORACLE, abs=1e-300)

        cell_degrees = rng.choice(ALLOWED_CELL_DEGREES)
        expected_cells = oracle.heatmap(corpus, CFG, terms, y_lo, y_hi, cell_degrees)
        cells = heatmap(query, YearRange(y_lo, y_hi), cell_degrees, index)
        assert {(c.cell_lat_index, c.cell_lon_index) for c in cells} == set(expected_cells)
        for cell in cells:
            key = (cell.cell_lat_index, cell.cell_lon_index)
            assert cell.value == pytest.approx(expected_cells[key], rel=REL_ORACLE)


def test_criterion_1_formula_oracle_suite():
    """T1 plus 50 seeded corpora match the brute-force oracle; < 60 s."""
    started = time.perf_counter()
    t1 = make_t1_corpus()
    _assert_matches_oracle(t1, build_search_index(t1, CFG), random.Random(0))
    for seed in range(50):
        rng = random.Random(1000 + seed)
        corpus = random_corpus(rng)
        index = build_search_index(corpus, CFG)
        _assert_matches_oracle(corpus, index, rng)
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0, f"oracle suite took {elapsed:.1f}s"


def test_criterion_2_closed_form_checkpoints():
    """Fixed-point values of the scoring primitives; both constants are
    direct formula evaluations, e.g. -ln((0.5^0.75 - 0.5)/0.5) = 1.6649130..."""
    assert term_weight(0.5, 1.0) == pytest.approx(0.8813735870195428, abs=1e-6)
    assert term_weight(0.5, 3.0) == pytest.approx(1.6649130173488096, abs=1e-6)
    # agreement with an in-test direct evaluation, the stated oracle
    for lam, t in ((0.5, 1.0), (0.5, 3.0)):
        direct = -math.log((lam ** (t / (t + 1.0)) - lam) / (1.0 - lam))
        assert term_weight(lam, t) == pytest.approx(direct, rel=1e-12)
    for lam in (0.1, 0.5, 0.9):
        assert term_weight(lam, 0.0) == 0.0
    for tf in (1, 2, 3, 10, 250):
        assert h2_normalize(tf, 17, 17.0, 1.0) == tf  # dl == avgdl, c == 1: exact


def test_criterion_3_property_suite(tmp_path):
    """Additivity, monotonicity, rarity, conservation, round-trip, determinism."""
    # year-sum additivity over disjoint ranges at 1e-12 relative
    for seed in (40, 41, 42):
        rng = random.Random(seed)
        corpus = random_corpus(rng)
        index = build_search_index(corpus, CFG)
        lo, hi = index.institution_year.year_span()
        mid = rng.randint(lo, hi)
        query = q(" ".join(random_query_terms(rng)))
        for inst in sorted(corpus.institutions):
            whole = score_institution(query, inst, YearRange(lo, hi), index)
            left = score_institution(query, inst, YearRange(lo, mid), index)
            right = (
                score_institution(query, inst, YearRange(mid + 1, hi), index)
                if mid < hi else 0.0
            )
            assert whole == pytest.approx(left + right, rel=REL_ADDITIVITY, abs=1e-300)

    # tf-monotonicity: one more occurrence, same length, strictly larger score
    base = make_t1_corpus()
    bumped = make_t1_corpus()
    bumped.publications[2] = dataclasses.replace(
        bumped.publications[2],
        title="Quantum quantum sensing",
        abstract="theta iota kappa mu nu xi omicron",
    )
    query = q("quantum")
    assert score_institution_year(query, "I2", 2019, build_search_index(bumped, CFG)) > \
        score_institution_year(query, "I2", 2019, build_search_index(base, CFG))

    # rarity law: equal t, smaller lambda earns the strictly larger weight
    for t in (0.5, 1.0, 3.0, 10.0):
        weights = [term_weight(lam, t) for lam in (0.1, 0.3, 0.5, 0.7, 0.9)]
        assert all(a > b for a, b in zip(weights, weights[1:]))

    # heatmap mass conservation at every supported resolution, 1e-9 relative
    for seed in (43, 44):
        rng = random.Random(seed)
        corpus = random_corpus(rng)
        index = build_search_index(corpus, CFG)
        lo, hi = index.institution_year.year_span()
        years = YearRange(lo, hi)
        query = q(" ".join(random_query_terms(rng)))
        expected = sum(
            score_institution(query, inst, years, index)
            for inst in sorted(corpus.institutions)
        )
        for cell_degrees in ALLOWED_CELL_DEGREES:
            total = sum(c.value for c in heatmap(query, years, cell_degrees, index))
            assert total == pytest.approx(expected, rel=REL_ORACLE, abs=1e-300)

    # save/load round-trip answers queries bit-identically
    rng = random.Random(45)
    corpus = random_corpus(rng)
    index = build_search_index(corpus, CFG)
    save_index(index, tmp_path / "rt")
    loaded = load_index(tmp_path / "rt")
    for _ in range(5):
        query = q(" ".join(random_query_terms(rng)))
        lo, hi = index.institution_year.year_span()
        years = YearRange(lo, hi)
        assert rank_institutions(query, years, 100, index) == \
            rank_institutions(query, years, 100, loaded)
        assert rank_documents(query, 100, index) == rank_documents(query, 100, loaded)
        assert timeline(query, index) == timeline(query, loaded)
        assert heatmap(query, years, 1.0, index) == heatmap(query, years, 1.0, loaded)

    # build determinism: byte-identical directories modulo built_at
    from test_index import _tree_bytes
    a = build_search_index(corpus, CFG, built_at="a")
    b = build_search_index(corpus, CFG, built_at="b")
    save_index(a, tmp_path / "det_a")
    save_index(b, tmp_path / "det_b")
    assert _tree_bytes(tmp_path / "det_a") == _tree_bytes(tmp_path / "det_b")


GROWTH_YEARS = range(1990, 2011)
PLATEAU_YEARS = range(2010, 2016)


def _planted_trend_corpus(seed: int) -> Corpus:
    """Topic-term density ramps linearly 1990-2010, then plateaus to 2015.

    Every publication analyzes to exactly 40 tokens, so document lengths
    (and H2 normalization) stay flat and the planted signal is the only
    moving part.
    """
    rng = random.Random(seed)
    filler_pool = [f"filler{i:03d}" for i in range(60)]
    institutions = {}
    for i in range(4):
        inst_id = f"grid.t{i}"
        institutions[inst_id] = InstitutionRecord(
            inst_id, f"Trend U{i}", rng.uniform(-60, 60), rng.uniform(-150, 150), ""
        )
    publications = []
    serial = 0
    for year in range(1985, 2016):
        if year < 1990:
            density = 0
        elif year <= 2010:
            density = 1 + (9 * (year - 1990)) // 20  # 1 .. 10, max first hit at 2010
        else:
            density = 10
        for inst_id in institutions:
            for _ in range(3):
                fillers = rng.choices(filler_pool, k=40 - density)
                words = ["topicx"] * density + fillers
                rng.shuffle(words)
                publications.append(
                    PublicationRecord(
                        doi=f"10.77/t{serial:05d}",
                        title=" ".join(words[:8]),
                        abstract=" ".join(words[8:]),
                        year=year,
                        institution_ids=(inst_id,),
                    )
                )
                serial += 1
    return Corpus(publications, institutions)


def test_criterion_4_planted_trend_recovery():
    """Timeline total-score curve is non-decreasing over the growth years
    and peaks inside the plateau, for 10 seeds."""
    for seed in range(10):
        corpus = _planted_trend_corpus(seed)
        index = build_search_index(corpus, CFG)
        buckets = {b.year: b.total for b in timeline(q("topicx"), index)}
        growth = [buckets[year] for year in GROWTH_YEARS]
        assert all(later >= earlier for earlier, later in zip(growth, growth[1:])), \
            f"seed {seed}: growth not non-decreasing"
        argmax_year = max(buckets, key=lambda year: (buckets[year], -year))
        assert argmax_year in PLATEAU_YEARS, f"seed {seed}: argmax {argmax_year}"
        assert buckets[1989] == 0.0  # quiet before the ramp


def _perf_corpus(n_pubs: int, n_inst: int, seed: int) -> Corpus:
    """Zipf-ish synthetic corpus: ~15-token titles, ~150-token abstracts."""
    rng = np.random.default_rng(seed)
    vocab = np.array([f"w{i:04d}" for i in range(5000)])
    probs = 1.0 / np.arange(1, vocab.size + 1)
    probs /= probs.sum()
    institutions = {
        f"grid.p{i:03d}": InstitutionRecord(
            f"grid.p{i:03d}", f"Perf U{i}",
            float(rng.uniform(-85, 85)), float(rng.uniform(-175, 175)), "",
        )
        for i in range(n_inst)
    }
    inst_ids = sorted(institutions)
    publications = []
    chunk = 10_000
    for base in range(0, n_pubs, chunk):
        count = min(chunk, n_pubs - base)
        title_ids = rng.choice(vocab.size, size=(count, 15), p=probs)
        abstract_ids = rng.choice(vocab.size, size=(count, 150), p=probs)
        years = rng.integers(1995, 2020, size=count)
        affil_counts = rng.integers(1, 3, size=count)
        affil_picks = rng.integers(0, n_inst, size=(count, 2))
        for i in range(count):
            publications.append(
                PublicationRecord(
                    doi=f"10.9999/p{base + i:06d}",
                    title=" ".join(vocab[title_ids[i]]),
                    abstract=" ".join(vocab[abstract_ids[i]]),
                    year=int(years[i]),
                    institution_ids=tuple(
                        {inst_ids[j] for j in affil_picks[i, : affil_counts[i]]}
                    ),
                    citation_count=int(rng.integers(0, 100)),
                )
            )
    return Corpus(publications, institutions)


@pytest.mark.slow
def test_criterion_5_desk_scale_performance(tmp_path):
    """100k publications index in < 10 min; p95 latency: institutions < 200 ms,
    documents < 100 ms, over the full year span."""
    corpus = _perf_corpus(100_000, 200, seed=5)

    started = time.perf_counter()
    index = build_search_index(corpus, CFG)
    save_index(index, tmp_path / "perf")
    build_seconds = time.perf_counter() - started
    print(f"\n  indexed 100000 publications in {build_seconds:.1f}s")
    assert build_seconds < 600.0

    assert index.doi.meta.document_count == 100_000
    kernels.warmup()
    client = TestClient(create_app(index, Shoebox(tmp_path / "box.json")))
    rng = random.Random(7)
    words = [f"w{rng.randint(0, 4999):04d}" for _ in range(300)]

    def measure(path, params_for, n=100):
        for _ in range(3):
            client.get(path, params=params_for(rng))
        samples = []
        for _ in range(n):
            t0 = time.perf_counter()
            response = client.get(path, params=params_for(rng))
            samples.append(time.perf_counter() - t0)
            assert response.status_code == 200
        samples.sort()
        return samples[int(0.95 * (n - 1))]

    def inst_params(r):
        return {"q": " ".join(r.sample(words, r.randint(1, 3)))}

    def doc_params(r):
        return {"q": " ".join(r.sample(words, r.randint(1, 3)))}

    p95_inst = measure("/api/institutions", inst_params)
    p95_docs = measure("/api/documents", doc_params)
    print(f"  p95 /api/institutions {p95_inst * 1000:.1f}ms, /api/documents {p95_docs * 1000:.1f}ms")
    assert p95_inst < 0.200, f"p95 institutions {p95_inst * 1000:.1f}ms"
    assert p95_docs < 0.100, f"p95 documents {p95_docs * 1000:.1f}ms"


def test_criterion_6_api_contract(t1_index, tmp_path):
    """Golden schema + documented error codes for every endpoint, UI-free."""
    client = TestClient(
        create_app(t1_index, Shoebox(tmp_path / "box.json")),
        raise_server_exceptions=False,
    )

    body = client.get("/api/institutions", params={"q": "quantum"}).json()
    assert set(body) == {"query", "year_from", "year_to", "results"}
    for result in body["results"]:
        contract.check_schema(result, contract.INSTITUTION_RESULT_SCHEMA)

    body = client.get("/api/documents", params={"q": "quantum"}).json()
    assert set(body) == {"query", "institution", "year_from", "year_to", "results"}
    for result in body["results"]:
        contract.check_schema(result, contract.DOCUMENT_RESULT_SCHEMA)

    body = client.get("/api/timeline", params={"q": "quantum"}).json()
    for bucket in body["buckets"]:
        contract.check_schema(bucket, contract.BUCKET_SCHEMA)

    body = client.get("/api/heatmap", params={"q": "quantum", "cells": 10}).json()
    for cell in body["cells"]:
        contract.check_schema(cell, contract.CELL_SCHEMA)

    entry = client.post("/api/shoebox", json={"doi": "10.1/d1"}).json()
    contract.check_schema(entry, contract.SHOEBOX_ENTRY_SCHEMA)
    listed = client.get("/api/shoebox").json()
    for item in listed["entries"]:
        contract.check_schema(item, contract.SHOEBOX_ENTRY_SCHEMA)

    error_cases = [
        (client.get("/api/institutions"), 400, "missing_query"),
        (client.get("/api/documents"), 400, "missing_query"),
        (client.get("/api/timeline"), 400, "missing_query"),
        (client.get("/api/heatmap"), 400, "missing_query"),
        (client.get("/api/heatmap", params={"q": "x", "cells": 3}), 400, "bad_resolution"),
        (client.get("/api/institutions", params={"q": "x", "limit": "-2"}), 400, "bad_parameter"),
        (client.get("/api/institutions", params={"q": "x", "year_from": "NaNo"}), 400, "bad_parameter"),
        (client.patch("/api/shoebox/ghost", json={"notes": ""}), 404, "not_found"),
        (client.delete("/api/shoebox/ghost"), 404, "not_found"),
        (client.post("/api/shoebox", json={"doi": ""}), 400, "missing_doi"),
        (client.post("/api/shoebox", json={"nope": 1}), 400, "invalid_body"),
    ]
    for response, status, code in error_cases:
        assert response.status_code == status, (response.status_code, status, code)
        body = response.json()
        contract.check_schema(body, contract.ERROR_SCHEMA)
        assert body["code"] == code
        assert body["status"] == status


def _project(store: Shoebox):
    return sorted(
        (e.entry_id, e.doi, e.title, e.query, e.institution_id,
         e.year_from, e.year_to, e.notes)
        for e in store.list_entries()
    )


def test_criterion_7_shoebox_durability(tmp_path):
    """1000 ops with a SIGKILL every 100; after each restart the store is
    uncorrupted and equals the pre- or post-state of the in-flight op."""
    store_path = tmp_path / "box.json"
    journal_path = tmp_path / "journal.log"
    journal_path.touch()
    model = Shoebox(tmp_path / "model.json")
    worker = Path(shoebox_worker.__file__)
    seed = 1234
    total_ops, batch = 1000, 100
    applied = 0
    kill_rng = random.Random(99)
    rounds = 0
    while applied < total_ops:
        rounds += 1
        assert rounds <= 80, "durability harness stalled"
        baseline = journal_path.stat().st_size
        proc = subprocess.Popen(
            [sys.executable, str(worker), str(store_path), str(journal_path),
             str(seed), str(applied), str(batch)],
            stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
        )
        # let the worker get past interpreter startup, then strike mid-batch
        deadline = time.time() + 30
        while time.time() < deadline:
            if journal_path.stat().st_size > baseline or proc.poll() is not None:
                break
            time.sleep(0.002)
        time.sleep(kill_rng.uniform(0.005, 0.12))
        proc.send_signal(signal.SIGKILL)
        proc.wait()

        lines = journal_path.read_text().splitlines()
        ends = [int(line.split()[1]) for line in lines if line.startswith("END")]
        begins = [int(line.split()[1]) for line in lines if line.startswith("BEGIN")]
        last_end = max(ends, default=-1)
        in_flight = max(begins, default=-1) > last_end

        live = Shoebox(store_path)  # raises if the file is torn
        while applied <= last_end:
            shoebox_worker.apply_op(model, seed, applied)
            applied += 1
        snapshot = _project(live)
        if snapshot != _project(model):
            assert in_flight, "store ahead of journal without an open BEGIN"
            shoebox_worker.apply_op(model, seed, applied)
            applied += 1
            assert snapshot == _project(model), \
                "store matches neither pre- nor post-state of the in-flight op"
    assert applied >= total_ops
