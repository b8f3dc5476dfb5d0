"""Information-based ranking over the two indexes.

A query term's contribution to a document is the information content of
its H2-normalized frequency under a smoothed power-law model:

    t = tf * log2(1 + c * avgdl / dl)
    weight = -ln((lam^(t/(t+1)) - lam) / (1 - lam)),   lam = df/N

An institution's score for a year range is the sum of its per-year
document scores; a DOI's score uses the same weight with the DOI entry's
own length and the DOI index's statistics. Terms present in every
document (lam = 1) carry no information and are skipped; so are terms
absent from the vocabulary. Natural log throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import groupby

import numpy as np

from . import kernels
from .analyzer import AnalyzerConfig, tokenize
from .errors import AnalyzerMismatchError
from .index import SearchIndex

__all__ = [
    "Query",
    "YearRange",
    "ScoredInstitution",
    "ScoredDocument",
    "analyze_query",
    "h2_normalize",
    "term_weight",
    "score_institution_year",
    "score_institution",
    "rank_institutions",
    "score_document",
    "rank_documents",
]


@dataclass(frozen=True)
class Query:
    raw: str
    terms: tuple[str, ...]  # deduplicated, sorted
    analyzer_hash: str


@dataclass(frozen=True)
class YearRange:
    year_from: int
    year_to: int  # inclusive

    def __post_init__(self):
        if self.year_from > self.year_to:
            raise ValueError("year_from must be <= year_to")

    def __iter__(self):
        return iter(range(self.year_from, self.year_to + 1))


@dataclass(frozen=True)
class ScoredInstitution:
    institution_id: str
    name: str | None
    latitude: float | None
    longitude: float | None
    score: float
    per_year: dict[int, float]


@dataclass(frozen=True)
class ScoredDocument:
    doi: str
    title: str
    year: int
    institution_ids: tuple[str, ...]
    score: float
    citation_count: int
    open_access: bool


def analyze_query(raw: str, config: AnalyzerConfig) -> Query:
    """Analyze query text with the same pipeline as indexing; set semantics."""
    return Query(raw, tuple(sorted(set(tokenize(raw, config)))), config.config_hash())


def h2_normalize(tf: float, doc_length: float, average_length: float, c: float) -> float:
    """H2 term-frequency normalization: tf * log2(1 + c*avgdl/dl).

    Equal to tf when dl == avgdl and c == 1; grows with tf, shrinks as the
    document gets longer than average.
    """
    if tf <= 0 or doc_length <= 0 or average_length <= 0 or c <= 0:
        raise ValueError("h2_normalize requires positive inputs")
    return tf * math.log2(1.0 + c * average_length / doc_length)


def term_weight(lam: float, t: float) -> float:
    """SPL information weight -ln((lam^(t/(t+1)) - lam)/(1 - lam)).

    0 at t == 0; strictly increasing in t; for fixed t > 0, strictly
    decreasing in lam (rarer terms weigh more). lam must lie in (0, 1);
    lam == 1 terms are skipped by callers.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError("lam must be in (0, 1)")
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return 0.0
    return -math.log((lam ** (t / (t + 1.0)) - lam) / (1.0 - lam))


def _check_analyzer(query: Query, meta) -> None:
    if query.analyzer_hash != meta.analyzer_config_hash:
        raise AnalyzerMismatchError(
            "analyzer mismatch: query analyzed with a different config "
            f"(query {query.analyzer_hash[:12]}, index {meta.analyzer_config_hash[:12]})"
        )


def _accumulate_scores(query: Query, sub, doc_mask: np.ndarray) -> np.ndarray:
    """Per-document score array for one sub-index, via the active kernel."""
    meta = sub.meta
    n = meta.document_count
    scores = np.zeros(n, dtype=np.float64)
    if meta.average_length <= 0.0:
        return scores  # every document is empty; nothing can match
    for term in query.terms:
        tid = sub.postings.term_id(term)
        if tid is None:
            continue
        df = sub.postings.df(tid)
        if df >= n:
            continue  # lam == 1: no information
        docs, tfs = sub.postings.postings(tid)
        kernels.accumulate_term(
            docs, tfs, sub.doc_lengths, doc_mask,
            df / n, meta.scoring_c, meta.average_length, scores,
        )
    return scores


def _year_mask(sub, year_range: YearRange | None) -> np.ndarray:
    if year_range is None:
        return np.ones(sub.meta.document_count, dtype=np.uint8)
    years = sub.doc_years
    return ((years >= year_range.year_from) & (years <= year_range.year_to)).astype(np.uint8)


def score_institution_year(query: Query, institution_id: str, year: int, index: SearchIndex) -> float:
    """Score of one (institution, year) document; 0 if the pair has no document."""
    iy = index.institution_year
    _check_analyzer(query, iy.meta)
    doc = iy.doc_id(institution_id, year)
    if doc is None:
        return 0.0
    dl = int(iy.doc_lengths[doc])
    if dl <= 0:
        return 0.0
    n = iy.meta.document_count
    score = 0.0
    for term in query.terms:
        tid = iy.postings.term_id(term)
        if tid is None:
            continue
        df = iy.postings.df(tid)
        if df >= n:
            continue
        tf = iy.postings.tf(tid, doc)
        if tf == 0:
            continue
        t = h2_normalize(tf, dl, iy.meta.average_length, iy.meta.scoring_c)
        score += term_weight(df / n, t)
    return score


def score_institution(query: Query, institution_id: str, year_range: YearRange, index: SearchIndex) -> float:
    """Sum of per-year scores over the inclusive range."""
    return sum(
        score_institution_year(query, institution_id, year, index)
        for year in year_range
    )


def _institution_scores(query: Query, year_range: YearRange | None, index: SearchIndex):
    """All institutions with positive score, in institution-id order.

    Yields (institution_id, score, per_year). The score is the plain sum
    of the per_year values in ascending year order, so the reported total
    and breakdown are exactly consistent.
    """
    iy = index.institution_year
    _check_analyzer(query, iy.meta)
    scores = _accumulate_scores(query, iy, _year_mask(iy, year_range))
    nz = np.flatnonzero(scores > 0.0)
    if nz.size == 0:
        return
    groups = np.searchsorted(iy.group_starts, nz, side="right") - 1
    for group, members in groupby(zip(groups, nz), key=lambda pair: pair[0]):
        per_year = {int(iy.doc_years[d]): float(scores[d]) for _, d in members}
        yield iy.group_institutions[group], sum(per_year.values()), per_year


def rank_institutions(
    query: Query, year_range: YearRange | None, limit: int, index: SearchIndex
) -> list[ScoredInstitution]:
    """Institutions by descending score, ties by id; truncated to limit.

    Institutions not present in the registry (unresolved affiliations)
    are ranked with null name/coordinates; map layers drop them downstream.
    """
    results = []
    for inst_id, score, per_year in _institution_scores(query, year_range, index):
        record = index.institutions.get(inst_id)
        results.append(
            ScoredInstitution(
                institution_id=inst_id,
                name=record.name if record else None,
                latitude=record.latitude if record else None,
                longitude=record.longitude if record else None,
                score=score,
                per_year=per_year,
            )
        )
    results.sort(key=lambda r: (-r.score, r.institution_id))
    return results[:limit]


def score_document(query: Query, doi: str, index: SearchIndex) -> float:
    """Score of a single DOI entry under the DOI index's statistics."""
    di = index.doi
    _check_analyzer(query, di.meta)
    doc = di.doc_id(doi)
    if doc is None:
        return 0.0
    dl = int(di.doc_lengths[doc])
    if dl <= 0:
        return 0.0
    n = di.meta.document_count
    score = 0.0
    for term in query.terms:
        tid = di.postings.term_id(term)
        if tid is None:
            continue
        df = di.postings.df(tid)
        if df >= n:
            continue
        tf = di.postings.tf(tid, doc)
        if tf == 0:
            continue
        t = h2_normalize(tf, dl, di.meta.average_length, di.meta.scoring_c)
        score += term_weight(df / n, t)
    return score


def rank_documents(
    query: Query,
    limit: int,
    index: SearchIndex,
    institution_id: str | None = None,
    year_range: YearRange | None = None,
) -> list[ScoredDocument]:
    """Documents by descending score, ties by DOI; optional facet filters.

    The institution filter keeps documents whose stored institution_ids
    contain the id; an unknown id simply matches nothing.
    """
    di = index.doi
    _check_analyzer(query, di.meta)
    mask = _year_mask(di, year_range)
    if institution_id is not None:
        members = di.institution_docs(institution_id)
        member_mask = np.zeros(di.meta.document_count, dtype=np.uint8)
        member_mask[members] = 1
        mask &= member_mask
    scores = _accumulate_scores(query, di, mask)
    nz = np.flatnonzero(scores > 0.0)
    if nz.size == 0:
        return []
    # doc ids are DOI-sorted, so (score desc, doc id asc) == (score desc, doi asc)
    order = np.lexsort((nz, -scores[nz]))
    results = []
    for doc in nz[order][:limit]:
        fields = di.stored[doc]
        results.append(
            ScoredDocument(
                doi=di.dois[doc],
                title=fields["title"],
                year=fields["year"],
                institution_ids=tuple(fields["institution_ids"]),
                score=float(scores[doc]),
                citation_count=fields["citation_count"],
                open_access=fields["open_access"],
            )
        )
    return results
