"""Faceted scholarly search: institution-year and DOI indexes with
information-based ranking, timeline/heatmap aggregation, and a saved-article
shoebox, exposed over a JSON API and CLI."""

from .aggregate import ALLOWED_CELL_DEGREES, HeatmapCell, TimelineBucket, heatmap, timeline
from .analyzer import AnalyzerConfig, load_stopwords, tokenize
from .corpus import (
    Corpus,
    InstitutionRecord,
    LoadReport,
    PublicationRecord,
    ValidationConfig,
    load_corpus,
    load_institutions,
    load_publications,
    validate_record,
)
from .errors import (
    AnalyzerMismatchError,
    CorpusLoadError,
    EmptyCorpusError,
    EntryNotFoundError,
    IndexCorruptionError,
    IndexFormatError,
    InvalidResolutionError,
    QuokaError,
)
from .index import (
    DoiIndex,
    IndexMetadata,
    InstitutionYearIndex,
    SearchIndex,
    TermStatistics,
    build_doi_index,
    build_institution_year_index,
    build_search_index,
    term_stats,
)
from .scoring import (
    Query,
    ScoredDocument,
    ScoredInstitution,
    YearRange,
    analyze_query,
    h2_normalize,
    rank_documents,
    rank_institutions,
    score_document,
    score_institution,
    score_institution_year,
    term_weight,
)
from .shoebox import Shoebox, ShoeboxEntry
from .storage import load_index, save_index

__version__ = "0.1.0"
