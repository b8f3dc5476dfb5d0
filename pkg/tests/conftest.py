"""Shared fixtures: the T1 reference corpus and a seeded corpus generator.

T1 (used throughout): institutions I1@(40,-74) and I2@(48,2); four
publications that analyze to exactly 10 tokens each:
  d1 = (I1, 2019) with "quantum" x3,   d2 = (I1, 2020) without it,
  d3 = (I2, 2019) with "quantum" x1,   d4 = (I2, 2020) without it.
So the institution-year index has N=4, avgdl=10, and lambda("quantum")=0.5,
and the DOI index has the same statistics.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for `import oracle`

from quoka.analyzer import AnalyzerConfig
from quoka.corpus import Corpus, InstitutionRecord, PublicationRecord
from quoka.index import build_search_index

T1_PUBLICATIONS = [
    PublicationRecord(
        doi="10.1/d1",
        title="Quantum quantum quantum advances",
        abstract="alpha beta gamma delta epsilon zeta",
        year=2019,
        institution_ids=("I1",),
        authors=("A. One",),
        citation_count=12,
        open_access=True,
    ),
    PublicationRecord(
        doi="10.1/d2",
        title="Neural networks overview",
        abstract="alpha beta gamma delta epsilon zeta eta",
        year=2020,
        institution_ids=("I1",),
    ),
    PublicationRecord(
        doi="10.1/d3",
        title="Quantum sensing",
        abstract="theta iota kappa mu nu xi omicron pi",
        year=2019,
        institution_ids=("I2",),
    ),
    PublicationRecord(
        doi="10.1/d4",
        title="Climate modeling",
        abstract="rho sigma tau upsilon phi chi psi omega",
        year=2020,
        institution_ids=("I2",),
    ),
]

T1_INSTITUTIONS = {
    "I1": InstitutionRecord(id="I1", name="Institution One", latitude=40.0, longitude=-74.0, country="US"),
    "I2": InstitutionRecord(id="I2", name="Institution Two", latitude=48.0, longitude=2.0, country="FR"),
}

# Frozen from the direct-formula oracle (see tests/oracle.py):
# weight(lam=0.5, t=3) and weight(lam=0.5, t=1).
T1_SCORE_I1_2019 = 1.6649130173488096
T1_SCORE_I2_2019 = 0.8813735870195428


def make_t1_corpus() -> Corpus:
    return Corpus(list(T1_PUBLICATIONS), dict(T1_INSTITUTIONS))


@pytest.fixture()
def t1_corpus() -> Corpus:
    return make_t1_corpus()


@pytest.fixture(scope="session")
def t1_index():
    return build_search_index(make_t1_corpus(), AnalyzerConfig(), built_at="2026-01-01T00:00:00+00:00")


def write_jsonl(path: Path, lines) -> Path:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def t1_files(tmp_path):
    pubs = write_jsonl(tmp_path / "pubs.jsonl", [p.to_json() for p in T1_PUBLICATIONS])
    insts = write_jsonl(
        tmp_path / "insts.jsonl", [r.to_json() for r in T1_INSTITUTIONS.values()]
    )
    return pubs, insts


VOCAB = [f"topic{i:02d}" for i in range(18)] + [
    "quantum", "neural", "climate", "genome", "robotics", "carbon", "galaxy",
]
FILLER = "the and of in with for a is on at"


def random_corpus(rng: random.Random, max_pubs: int = 50, max_insts: int = 8,
                  max_years: int = 6) -> Corpus:
    """Seeded corpus within the acceptance bounds; exercises the edges:
    multi-affiliation papers, unknown institution ids, empty abstracts,
    zero-affiliation papers, stopword noise."""
    n_inst = rng.randint(2, max_insts)
    institutions = {}
    for i in range(n_inst):
        inst_id = f"grid.{i:04d}"
        institutions[inst_id] = InstitutionRecord(
            id=inst_id,
            name=f"Institution {i}",
            latitude=rng.uniform(-89.0, 89.0),
            longitude=rng.uniform(-179.0, 179.0),
            country=rng.choice(["US", "NZ", "FR", "JP", ""]),
        )
    inst_ids = sorted(institutions)
    year_lo = rng.randint(1960, 2015)
    year_hi = year_lo + rng.randint(0, max_years - 1)

    publications = []
    n_pubs = rng.randint(3, max_pubs)
    for i in range(n_pubs):
        words = rng.choices(VOCAB, k=rng.randint(2, 6))
        title = " ".join(words).capitalize()
        if rng.random() < 0.15:
            abstract = ""
        else:
            body = rng.choices(VOCAB, k=rng.randint(3, 30))
            if rng.random() < 0.5:
                body += rng.choices(FILLER.split(), k=rng.randint(1, 6))
            rng.shuffle(body)
            abstract = " ".join(body) + "."
        k = rng.choices([0, 1, 2, 3], weights=[1, 10, 4, 2])[0] if i > 0 else 1
        affiliations = rng.sample(inst_ids, k=min(k, len(inst_ids)))
        if rng.random() < 0.1:
            affiliations.append("grid.unknown")
        publications.append(
            PublicationRecord(
                doi=f"10.5555/p{i:04d}",
                title=title,
                abstract=abstract,
                year=rng.randint(year_lo, year_hi),
                institution_ids=tuple(affiliations),
                fields_of_study=tuple(rng.sample(["physics", "biology", "cs"], k=rng.randint(0, 2))),
                authors=(f"Author {i}",),
                publisher=rng.choice(["", "Springer", "Elsevier"]),
                journal=rng.choice(["", "Nature", "PLOS ONE"]),
                citation_count=rng.randint(0, 500),
                open_access=rng.random() < 0.4,
            )
        )
    return Corpus(publications, institutions)


def random_query_terms(rng: random.Random) -> list[str]:
    terms = rng.sample(VOCAB, k=rng.randint(1, 3))
    if rng.random() < 0.2:
        terms.append("unseenword")
    return terms


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL line per acceptance criterion."""
    if report.when == "call" and "test_acceptance" in report.nodeid:
        status = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"\n[ACCEPTANCE {status}] {name}")
