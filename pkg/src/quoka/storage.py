"""Index directory persistence: manifest.json plus numpy/json payloads.

The manifest is the only externally inspected file; it carries the format
version, both indexes' statistics, the analyzer config hash, and a sha256
per payload file. Loading verifies every checksum, so load(save(x))
answers queries bit-identically to x (statistics are stored, never
recomputed).
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .analyzer import AnalyzerConfig
from .corpus import InstitutionRecord
from .errors import IndexCorruptionError, IndexFormatError
from .index import (
    FORMAT_VERSION,
    DoiIndex,
    IndexMetadata,
    InstitutionYearIndex,
    PostingStore,
    SearchIndex,
)

MANIFEST_NAME = "manifest.json"

_IY_ARRAYS = ("offsets", "docs", "tfs", "doc_lengths", "doc_years", "doc_pub_counts")
_DOI_ARRAYS = ("offsets", "docs", "tfs", "doc_lengths", "doc_years")


def _dump_json(path: Path, obj, written: list[str] | None = None) -> None:
    path.write_text(
        json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False),
        encoding="utf-8",
    )
    if written is not None:
        written.append(path.name)


def _load_json(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _save_arrays(directory: Path, prefix: str, arrays: dict[str, np.ndarray],
                 written: list[str]) -> None:
    for name, arr in arrays.items():
        np.save(directory / f"{prefix}_{name}.npy", arr)
        written.append(f"{prefix}_{name}.npy")


def save_index(index: SearchIndex, directory) -> None:
    """Write a complete index directory; overwrites files in place."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written: list[str] = []

    iy, di = index.institution_year, index.doi
    _dump_json(directory / "analyzer.json", index.analyzer.to_dict(), written)
    _dump_json(
        directory / "institutions.json",
        {
            inst_id: {
                "name": rec.name,
                "latitude": rec.latitude,
                "longitude": rec.longitude,
                "country": rec.country,
            }
            for inst_id, rec in index.institutions.items()
        },
        written,
    )

    _dump_json(directory / "iy_terms.json", iy.postings.terms, written)
    _dump_json(directory / "iy_doc_institutions.json", iy.doc_institutions, written)
    _save_arrays(
        directory,
        "iy",
        {
            "offsets": iy.postings.offsets,
            "docs": iy.postings.docs,
            "tfs": iy.postings.tfs,
            "doc_lengths": iy.doc_lengths,
            "doc_years": iy.doc_years,
            "doc_pub_counts": iy.doc_pub_counts,
        },
        written,
    )

    _dump_json(directory / "doi_terms.json", di.postings.terms, written)
    _dump_json(directory / "doi_dois.json", di.dois, written)
    _dump_json(directory / "doi_stored.json", di.stored, written)
    _save_arrays(
        directory,
        "doi",
        {
            "offsets": di.postings.offsets,
            "docs": di.postings.docs,
            "tfs": di.postings.tfs,
            "doc_lengths": di.doc_lengths,
            "doc_years": di.doc_years,
        },
        written,
    )

    # checksum exactly what this save wrote; stale files never enter the manifest
    payload_names = sorted(written)
    manifest = {
        "format_version": FORMAT_VERSION,
        "built_at": iy.meta.built_at,
        "scoring_c": iy.meta.scoring_c,
        "analyzer_config_hash": iy.meta.analyzer_config_hash,
        "institution_year": {
            "document_count": iy.meta.document_count,
            "average_length": iy.meta.average_length,
        },
        "doi": {
            "document_count": di.meta.document_count,
            "average_length": di.meta.average_length,
        },
        "checksums": {name: _sha256(directory / name) for name in payload_names},
    }
    _dump_json(directory / MANIFEST_NAME, manifest)


def _load_array(directory: Path, name: str) -> np.ndarray:
    return np.load(directory / name, allow_pickle=False)


def load_index(directory) -> SearchIndex:
    """Open an index directory, verifying the format version and checksums."""
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.is_file():
        raise IndexFormatError(f"missing index manifest: {manifest_path}")
    manifest = _load_json(manifest_path)

    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise IndexFormatError(
            f"index format version mismatch: found {version}, expected {FORMAT_VERSION}"
        )
    for name, expected in manifest["checksums"].items():
        path = directory / name
        if not path.is_file():
            raise IndexFormatError(f"index incomplete: missing {name}")
        actual = _sha256(path)
        if actual != expected:
            raise IndexCorruptionError(f"checksum mismatch for {name}")

    analyzer = AnalyzerConfig.from_dict(_load_json(directory / "analyzer.json"))
    institutions = {
        inst_id: InstitutionRecord(
            id=inst_id,
            name=fields["name"],
            latitude=fields["latitude"],
            longitude=fields["longitude"],
            country=fields.get("country", ""),
        )
        for inst_id, fields in _load_json(directory / "institutions.json").items()
    }

    def meta_for(section: str) -> IndexMetadata:
        stats = manifest[section]
        return IndexMetadata(
            document_count=stats["document_count"],
            average_length=stats["average_length"],
            analyzer_config_hash=manifest["analyzer_config_hash"],
            scoring_c=manifest["scoring_c"],
            built_at=manifest["built_at"],
            format_version=version,
        )

    iy_arrays = {name: _load_array(directory, f"iy_{name}.npy") for name in _IY_ARRAYS}
    institution_year = InstitutionYearIndex(
        meta_for("institution_year"),
        PostingStore(
            _load_json(directory / "iy_terms.json"),
            iy_arrays["offsets"],
            iy_arrays["docs"],
            iy_arrays["tfs"],
        ),
        doc_institutions=_load_json(directory / "iy_doc_institutions.json"),
        doc_years=iy_arrays["doc_years"],
        doc_lengths=iy_arrays["doc_lengths"],
        doc_pub_counts=iy_arrays["doc_pub_counts"],
    )

    doi_arrays = {name: _load_array(directory, f"doi_{name}.npy") for name in _DOI_ARRAYS}
    doi = DoiIndex(
        meta_for("doi"),
        PostingStore(
            _load_json(directory / "doi_terms.json"),
            doi_arrays["offsets"],
            doi_arrays["docs"],
            doi_arrays["tfs"],
        ),
        dois=_load_json(directory / "doi_dois.json"),
        doc_years=doi_arrays["doc_years"],
        doc_lengths=doi_arrays["doc_lengths"],
        stored=_load_json(directory / "doi_stored.json"),
    )

    return SearchIndex(institution_year, doi, institutions, analyzer)
