"""Publication/institution data model and line-delimited corpus loading.

External format: one JSON object per line (*.jsonl). Unknown keys are
ignored; malformed lines are rejected individually and never abort a load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import CorpusLoadError

DEFAULT_MIN_YEAR = 1800
DEFAULT_MAX_YEAR = 2100

_MAX_REPORTED_REASONS = 10


@dataclass(frozen=True)
class PublicationRecord:
    doi: str
    title: str = ""
    abstract: str = ""
    year: int = 0
    institution_ids: tuple[str, ...] = ()
    fields_of_study: tuple[str, ...] = ()
    authors: tuple[str, ...] = ()
    publisher: str = ""
    journal: str = ""
    citation_count: int = 0
    open_access: bool = False

    def text(self) -> str:
        """The searchable text: title and abstract."""
        return f"{self.title} {self.abstract}" if self.abstract else self.title

    def to_json(self) -> str:
        """One external-format line; reloading it yields an equal record."""
        return json.dumps(
            {
                "doi": self.doi,
                "title": self.title,
                "abstract": self.abstract,
                "year": self.year,
                "institution_ids": list(self.institution_ids),
                "fields_of_study": list(self.fields_of_study),
                "authors": list(self.authors),
                "publisher": self.publisher,
                "journal": self.journal,
                "citation_count": self.citation_count,
                "open_access": self.open_access,
            },
            ensure_ascii=False,
        )


@dataclass(frozen=True)
class InstitutionRecord:
    id: str
    name: str
    latitude: float
    longitude: float
    country: str = ""

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "name": self.name,
                "latitude": self.latitude,
                "longitude": self.longitude,
                "country": self.country,
            },
            ensure_ascii=False,
        )


@dataclass(frozen=True)
class ValidationConfig:
    min_year: int = DEFAULT_MIN_YEAR
    max_year: int = DEFAULT_MAX_YEAR


@dataclass
class LoadReport:
    """Accounting for one load pass: accepted + rejected + duplicates = total_lines.

    Blank lines are skipped before counting. rejection_reasons keeps the
    first few "line N: code" strings for diagnostics.
    """

    total_lines: int = 0
    accepted: int = 0
    rejected: int = 0
    duplicates: int = 0
    rejection_reasons: list[str] = field(default_factory=list)

    def _reject(self, line_no: int, reason: str) -> None:
        self.rejected += 1
        if len(self.rejection_reasons) < _MAX_REPORTED_REASONS:
            self.rejection_reasons.append(f"line {line_no}: {reason}")


@dataclass
class Corpus:
    publications: list[PublicationRecord]
    institutions: dict[str, InstitutionRecord]
    unresolved_affiliations: int = 0

    def __post_init__(self):
        known = self.institutions
        self.unresolved_affiliations = sum(
            1
            for pub in self.publications
            for inst in pub.institution_ids
            if inst not in known
        )


def validate_record(record: PublicationRecord, config: ValidationConfig = ValidationConfig()) -> str | None:
    """Return None to accept, or a machine-readable reason code."""
    if not record.doi:
        return "missing_doi"
    if not isinstance(record.year, int) or isinstance(record.year, bool):
        return "invalid_year"
    if not (config.min_year <= record.year <= config.max_year):
        return "year_out_of_range"
    if not isinstance(record.citation_count, int) or record.citation_count < 0:
        return "invalid_citation_count"
    return None


def _string_list(value, name: str) -> tuple[str, ...]:
    if value is None:
        return ()
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise ValueError(f"invalid_{name}")
    return tuple(value)


def _parse_publication(obj: dict) -> PublicationRecord:
    """Build a record from a parsed line; raises ValueError(reason_code)."""
    doi = obj.get("doi")
    if not isinstance(doi, str) or not doi.strip():
        raise ValueError("missing_doi")
    year = obj.get("year")
    if year is None:
        raise ValueError("missing_year")
    if isinstance(year, bool) or not isinstance(year, int):
        raise ValueError("invalid_year")
    citation_count = obj.get("citation_count", 0)
    if isinstance(citation_count, bool) or not isinstance(citation_count, int):
        raise ValueError("invalid_citation_count")
    return PublicationRecord(
        doi=doi.strip().lower(),
        title=str(obj.get("title") or ""),
        abstract=str(obj.get("abstract") or ""),
        year=year,
        institution_ids=_string_list(obj.get("institution_ids"), "institution_ids"),
        fields_of_study=_string_list(obj.get("fields_of_study"), "fields_of_study"),
        authors=_string_list(obj.get("authors"), "authors"),
        publisher=str(obj.get("publisher") or ""),
        journal=str(obj.get("journal") or ""),
        citation_count=citation_count,
        open_access=bool(obj.get("open_access", False)),
    )


def _iter_lines(path):
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise CorpusLoadError(f"cannot read {path}: {exc}") from exc
    with fh:
        for line_no, line in enumerate(fh, start=1):
            if line.strip():
                yield line_no, line


def load_publications(
    path, config: ValidationConfig = ValidationConfig()
) -> tuple[list[PublicationRecord], LoadReport]:
    """Load a publications .jsonl file. Duplicate DOIs: last occurrence wins."""
    report = LoadReport()
    by_doi: dict[str, PublicationRecord] = {}
    for line_no, line in _iter_lines(path):
        report.total_lines += 1
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("invalid_json")
            record = _parse_publication(obj)
        except json.JSONDecodeError:
            report._reject(line_no, "invalid_json")
            continue
        except ValueError as exc:
            report._reject(line_no, str(exc))
            continue
        reason = validate_record(record, config)
        if reason is not None:
            report._reject(line_no, reason)
            continue
        if record.doi in by_doi:
            report.duplicates += 1
        by_doi[record.doi] = record
    publications = list(by_doi.values())
    report.accepted = len(publications)
    return publications, report


def _parse_institution(obj: dict) -> InstitutionRecord:
    inst_id = obj.get("id")
    if not isinstance(inst_id, str) or not inst_id.strip():
        raise ValueError("missing_id")
    name = obj.get("name")
    if not isinstance(name, str) or not name.strip():
        raise ValueError("missing_name")
    lat = obj.get("latitude")
    if not isinstance(lat, (int, float)) or isinstance(lat, bool):
        raise ValueError("missing_latitude")
    lon = obj.get("longitude")
    if not isinstance(lon, (int, float)) or isinstance(lon, bool):
        raise ValueError("missing_longitude")
    if not -90.0 <= lat <= 90.0:
        raise ValueError("latitude_out_of_range")
    if not -180.0 <= lon <= 180.0:
        raise ValueError("longitude_out_of_range")
    return InstitutionRecord(
        id=inst_id.strip(),
        name=name,
        latitude=float(lat),
        longitude=float(lon),
        country=str(obj.get("country") or ""),
    )


def load_institutions(path) -> tuple[dict[str, InstitutionRecord], LoadReport]:
    """Load an institutions .jsonl file. Duplicate ids: last occurrence wins."""
    report = LoadReport()
    by_id: dict[str, InstitutionRecord] = {}
    for line_no, line in _iter_lines(path):
        report.total_lines += 1
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("invalid_json")
            record = _parse_institution(obj)
        except json.JSONDecodeError:
            report._reject(line_no, "invalid_json")
            continue
        except ValueError as exc:
            report._reject(line_no, str(exc))
            continue
        if record.id in by_id:
            report.duplicates += 1
        by_id[record.id] = record
    report.accepted = len(by_id)
    return by_id, report


def load_corpus(
    publications_path,
    institutions_path,
    config: ValidationConfig = ValidationConfig(),
) -> tuple[Corpus, LoadReport, LoadReport]:
    """Load both files and link them into a Corpus.

    Affiliations naming unknown institutions are kept (they still rank)
    but counted in Corpus.unresolved_affiliations and excluded from any
    geographic output.
    """
    publications, pub_report = load_publications(publications_path, config)
    institutions, inst_report = load_institutions(institutions_path)
    return Corpus(publications, institutions), pub_report, inst_report
