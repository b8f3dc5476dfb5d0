"""The two inverted indexes: institution-year aggregates and per-DOI documents.

Both share one posting layout (CSR over lexicographically sorted terms,
doc ids ascending within a term) and carry the statistics the scoring
model needs: per-document lengths, document count N, average length, and
per-term document frequency (lambda = df/N).
"""

from __future__ import annotations

from array import array
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .analyzer import AnalyzerConfig, tokenize
from .corpus import Corpus, InstitutionRecord
from .errors import EmptyCorpusError

FORMAT_VERSION = 1


@dataclass(frozen=True)
class IndexMetadata:
    document_count: int
    average_length: float
    analyzer_config_hash: str
    scoring_c: float
    built_at: str
    format_version: int = FORMAT_VERSION


@dataclass(frozen=True)
class TermStatistics:
    """Per-term collection statistics. lam is df/N, the rarity signal."""

    term: str
    document_frequency: int
    lam: float


class PostingStore:
    """CSR posting lists: for term id t, docs/tfs in [offsets[t], offsets[t+1])."""

    def __init__(self, terms: list[str], offsets, docs, tfs):
        self.terms = terms
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.docs = np.asarray(docs, dtype=np.int32)
        self.tfs = np.asarray(tfs, dtype=np.int32)
        self._term_ids = {term: tid for tid, term in enumerate(terms)}

    def term_id(self, term: str) -> int | None:
        return self._term_ids.get(term)

    def postings(self, tid: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.offsets[tid], self.offsets[tid + 1]
        return self.docs[lo:hi], self.tfs[lo:hi]

    def df(self, tid: int) -> int:
        return int(self.offsets[tid + 1] - self.offsets[tid])

    def tf(self, tid: int, doc: int) -> int:
        """Term frequency of term tid in document doc (0 if absent)."""
        docs, tfs = self.postings(tid)
        pos = np.searchsorted(docs, doc)
        if pos < docs.size and docs[pos] == doc:
            return int(tfs[pos])
        return 0

    @property
    def vocabulary_size(self) -> int:
        return len(self.terms)


class _StatsMixin:
    meta: IndexMetadata
    postings: PostingStore

    def term_stats(self, term: str) -> TermStatistics | None:
        """Exact stored statistics for an analyzed term; None if unseen."""
        tid = self.postings.term_id(term)
        if tid is None:
            return None
        df = self.postings.df(tid)
        return TermStatistics(term, df, df / self.meta.document_count)


class InstitutionYearIndex(_StatsMixin):
    """One document per (institution, year) pair, sorted by that key."""

    def __init__(self, meta, postings, doc_institutions, doc_years, doc_lengths, doc_pub_counts):
        self.meta = meta
        self.postings = postings
        self.doc_institutions: list[str] = doc_institutions
        self.doc_years = np.asarray(doc_years, dtype=np.int32)
        self.doc_lengths = np.asarray(doc_lengths, dtype=np.int64)
        self.doc_pub_counts = np.asarray(doc_pub_counts, dtype=np.int32)
        self._key_to_doc = {
            (inst, int(year)): d
            for d, (inst, year) in enumerate(zip(doc_institutions, self.doc_years))
        }
        # docs are sorted by (institution, year): institutions form runs
        bounds = [0]
        for d in range(1, len(doc_institutions)):
            if doc_institutions[d] != doc_institutions[d - 1]:
                bounds.append(d)
        bounds.append(len(doc_institutions))
        self.group_starts = np.asarray(bounds, dtype=np.int64)
        self.group_institutions = [doc_institutions[s] for s in bounds[:-1]]

    def doc_id(self, institution_id: str, year: int) -> int | None:
        return self._key_to_doc.get((institution_id, year))

    def year_span(self) -> tuple[int, int]:
        return int(self.doc_years.min()), int(self.doc_years.max())


class DoiIndex(_StatsMixin):
    """One document per DOI, sorted by DOI; stored fields round-trip the record."""

    def __init__(self, meta, postings, dois, doc_years, doc_lengths, stored):
        self.meta = meta
        self.postings = postings
        self.dois: list[str] = dois
        self.doc_years = np.asarray(doc_years, dtype=np.int32)
        self.doc_lengths = np.asarray(doc_lengths, dtype=np.int64)
        self.stored: list[dict] = stored
        self._doi_to_doc = {doi: d for d, doi in enumerate(dois)}
        members: dict[str, list[int]] = {}
        for d, fields_ in enumerate(stored):
            for inst in fields_["institution_ids"]:
                members.setdefault(inst, []).append(d)
        self._institution_docs = {
            inst: np.asarray(ds, dtype=np.int64) for inst, ds in members.items()
        }

    def doc_id(self, doi: str) -> int | None:
        return self._doi_to_doc.get(doi)

    def institution_docs(self, institution_id: str) -> np.ndarray:
        return self._institution_docs.get(institution_id, np.empty(0, dtype=np.int64))


@dataclass
class SearchIndex:
    """Everything one atlas deployment queries: both indexes plus lookups."""

    institution_year: InstitutionYearIndex
    doi: DoiIndex
    institutions: dict[str, InstitutionRecord]
    analyzer: AnalyzerConfig


def term_stats(index, term: str) -> TermStatistics | None:
    """Module-level spelling of index.term_stats(term)."""
    return index.term_stats(term)


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _freeze_postings(enc_docs, enc_tids, enc_tfs, doc_rank, term_rank, n_docs, n_terms,
                     aggregate: bool):
    """Sort raw (doc, term, tf) rows into CSR postings over final ids.

    doc_rank/term_rank map encounter-order ids to final sorted ids. With
    aggregate=True, rows sharing (term, doc) are summed (multiple
    publications feeding one institution-year document).
    """
    docs = doc_rank[np.frombuffer(enc_docs, dtype=np.int32)]
    tids = term_rank[np.frombuffer(enc_tids, dtype=np.int32)]
    tfs = np.frombuffer(enc_tfs, dtype=np.int32).astype(np.int64)
    order = np.lexsort((docs, tids))
    docs, tids, tfs = docs[order], tids[order], tfs[order]
    if aggregate and docs.size:
        head = np.empty(docs.size, dtype=bool)
        head[0] = True
        head[1:] = (tids[1:] != tids[:-1]) | (docs[1:] != docs[:-1])
        starts = np.flatnonzero(head)
        tfs = np.add.reduceat(tfs, starts)
        docs = docs[starts]
        tids = tids[starts]
    df = np.bincount(tids, minlength=n_terms)
    offsets = np.zeros(n_terms + 1, dtype=np.int64)
    np.cumsum(df, out=offsets[1:])
    doc_lengths = np.zeros(n_docs, dtype=np.int64)
    if docs.size:
        np.add.at(doc_lengths, docs, tfs)
    return offsets, docs.astype(np.int32), tfs.astype(np.int32), doc_lengths


def _rank_map(encounter: dict, sort_key=None) -> tuple[list, np.ndarray]:
    """Final sorted order for encounter-keyed ids; returns (sorted keys, rank array)."""
    items = sorted(encounter, key=sort_key) if sort_key else sorted(encounter)
    rank = np.empty(len(items), dtype=np.int64)
    for final_id, key in enumerate(items):
        rank[encounter[key]] = final_id
    return items, rank


def build_institution_year_index(
    corpus: Corpus,
    analyzer_config: AnalyzerConfig | None = None,
    c: float = 1.0,
    built_at: str | None = None,
) -> InstitutionYearIndex:
    """Aggregate every publication's tokens into its (institution, year) documents.

    A publication with k distinct affiliations contributes its full token
    multiset to each of the k documents (full attribution). Pairs that
    never receive a token are not materialized.
    """
    cfg = analyzer_config or AnalyzerConfig()
    vocab: dict[str, int] = {}
    keys: dict[tuple[str, int], int] = {}
    pub_counts: Counter = Counter()
    enc_docs, enc_tids, enc_tfs = array("i"), array("i"), array("i")
    for pub in corpus.publications:
        affiliations = list(dict.fromkeys(pub.institution_ids))
        if not affiliations:
            continue
        tokens = tokenize(pub.text(), cfg)
        if not tokens:
            continue
        encoded = [
            (vocab.setdefault(term, len(vocab)), tf)
            for term, tf in Counter(tokens).items()
        ]
        for inst in affiliations:
            key_id = keys.setdefault((inst, pub.year), len(keys))
            pub_counts[key_id] += 1
            for tid, tf in encoded:
                enc_docs.append(key_id)
                enc_tids.append(tid)
                enc_tfs.append(tf)
    if not keys:
        raise EmptyCorpusError("empty corpus")

    sorted_keys, key_rank = _rank_map(keys)
    sorted_terms, term_rank = _rank_map(vocab)
    offsets, docs, tfs, doc_lengths = _freeze_postings(
        enc_docs, enc_tids, enc_tfs, key_rank, term_rank,
        n_docs=len(keys), n_terms=len(vocab), aggregate=True,
    )
    doc_pub_counts = np.zeros(len(keys), dtype=np.int32)
    for enc_id, count in pub_counts.items():
        doc_pub_counts[key_rank[enc_id]] = count

    meta = IndexMetadata(
        document_count=len(sorted_keys),
        average_length=float(doc_lengths.mean()),
        analyzer_config_hash=cfg.config_hash(),
        scoring_c=float(c),
        built_at=built_at or _now_iso(),
    )
    return InstitutionYearIndex(
        meta,
        PostingStore(sorted_terms, offsets, docs, tfs),
        doc_institutions=[inst for inst, _ in sorted_keys],
        doc_years=np.asarray([year for _, year in sorted_keys], dtype=np.int32),
        doc_lengths=doc_lengths,
        doc_pub_counts=doc_pub_counts,
    )


def _stored_fields(pub) -> dict:
    return {
        "title": pub.title,
        "year": pub.year,
        "institution_ids": list(pub.institution_ids),
        "fields_of_study": list(pub.fields_of_study),
        "authors": list(pub.authors),
        "publisher": pub.publisher,
        "journal": pub.journal,
        "citation_count": pub.citation_count,
        "open_access": pub.open_access,
    }


def build_doi_index(
    corpus: Corpus,
    analyzer_config: AnalyzerConfig | None = None,
    c: float = 1.0,
    built_at: str | None = None,
) -> DoiIndex:
    """One entry per accepted DOI; zero-token entries exist but never match terms."""
    cfg = analyzer_config or AnalyzerConfig()
    if not corpus.publications:
        raise EmptyCorpusError("empty corpus")
    vocab: dict[str, int] = {}
    doc_ids: dict[str, int] = {}
    stored_by_enc: dict[int, dict] = {}
    years_by_enc: dict[int, int] = {}
    enc_docs, enc_tids, enc_tfs = array("i"), array("i"), array("i")
    for pub in corpus.publications:
        doc_id = doc_ids.setdefault(pub.doi, len(doc_ids))
        stored_by_enc[doc_id] = _stored_fields(pub)
        years_by_enc[doc_id] = pub.year
        for term, tf in Counter(tokenize(pub.text(), cfg)).items():
            enc_docs.append(doc_id)
            enc_tids.append(vocab.setdefault(term, len(vocab)))
            enc_tfs.append(tf)

    sorted_dois, doc_rank = _rank_map(doc_ids)
    sorted_terms, term_rank = _rank_map(vocab)
    offsets, docs, tfs, doc_lengths = _freeze_postings(
        enc_docs, enc_tids, enc_tfs, doc_rank, term_rank,
        n_docs=len(doc_ids), n_terms=len(vocab), aggregate=False,
    )
    n = len(sorted_dois)
    stored: list[dict | None] = [None] * n
    doc_years = np.zeros(n, dtype=np.int32)
    for enc_id, fields_ in stored_by_enc.items():
        final = doc_rank[enc_id]
        stored[final] = fields_
        doc_years[final] = years_by_enc[enc_id]

    meta = IndexMetadata(
        document_count=n,
        average_length=float(doc_lengths.mean()),
        analyzer_config_hash=cfg.config_hash(),
        scoring_c=float(c),
        built_at=built_at or _now_iso(),
    )
    return DoiIndex(meta, PostingStore(sorted_terms, offsets, docs, tfs),
                    sorted_dois, doc_years, doc_lengths, stored)


def build_search_index(
    corpus: Corpus,
    analyzer_config: AnalyzerConfig | None = None,
    c: float = 1.0,
    built_at: str | None = None,
) -> SearchIndex:
    """Build both indexes plus the institution registry in one pass."""
    cfg = analyzer_config or AnalyzerConfig()
    stamp = built_at or _now_iso()
    return SearchIndex(
        institution_year=build_institution_year_index(corpus, cfg, c, stamp),
        doi=build_doi_index(corpus, cfg, c, stamp),
        institutions=dict(corpus.institutions),
        analyzer=cfg,
    )
