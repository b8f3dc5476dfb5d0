"""Saved-article store: each entry keeps the search state that found it.

Single-user, single file. Every mutation rewrites the whole store through
a temp file + fsync + atomic rename, so a crash at any point leaves either
the previous or the new state on disk, never a torn file.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .errors import EntryNotFoundError, QuokaError

FORMAT_VERSION = 1


@dataclass
class ShoeboxEntry:
    entry_id: str
    doi: str
    title: str
    query: str
    institution_id: str
    year_from: int
    year_to: int
    notes: str
    created_at: str  # ISO-8601 UTC
    updated_at: str

    def to_dict(self) -> dict:
        return {
            "entry_id": self.entry_id,
            "doi": self.doi,
            "title": self.title,
            "query": self.query,
            "institution_id": self.institution_id,
            "year_from": self.year_from,
            "year_to": self.year_to,
            "notes": self.notes,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ShoeboxEntry":
        return cls(**{key: data[key] for key in (
            "entry_id", "doi", "title", "query", "institution_id",
            "year_from", "year_to", "notes", "created_at", "updated_at",
        )})


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def _bump(timestamp: str) -> str:
    """A timestamp strictly after both now and the given one."""
    now = datetime.now(timezone.utc)
    prev = datetime.fromisoformat(timestamp)
    if now <= prev:
        now = prev + timedelta(microseconds=1)
    return now.isoformat()


class Shoebox:
    """Mutations serialize through one lock; reads see consistent snapshots."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[str, ShoeboxEntry] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        try:
            data = json.loads(self.path.read_text(encoding="utf-8"))
            entries = [ShoeboxEntry.from_dict(e) for e in data["entries"]]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise QuokaError(f"corrupt shoebox file {self.path}: {exc}") from exc
        self._entries = {e.entry_id: e for e in entries}

    def _persist(self) -> None:
        payload = {
            "format_version": FORMAT_VERSION,
            "entries": [e.to_dict() for e in self._ordered()],
        }
        tmp = self.path.with_name(self.path.name + ".tmp")
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self.path)

    def _ordered(self) -> list[ShoeboxEntry]:
        # newest first; id decides between same-instant entries
        return sorted(
            self._entries.values(),
            key=lambda e: (e.created_at, e.entry_id),
            reverse=True,
        )

    def _next_id(self) -> str:
        top = 0
        for entry_id in self._entries:
            if entry_id.startswith("e") and entry_id[1:].isdigit():
                top = max(top, int(entry_id[1:]))
        return f"e{top + 1:06d}"

    def add_entry(
        self,
        doi: str,
        title: str = "",
        query: str = "",
        institution_id: str = "",
        year_from: int = 0,
        year_to: int = 0,
    ) -> ShoeboxEntry:
        """Persist a new entry. Same doi under a different search state is
        a distinct entry (the provenance is the point)."""
        if not doi or not doi.strip():
            raise ValueError("doi must be non-empty")
        with self._lock:
            now = _now_iso()
            entry = ShoeboxEntry(
                entry_id=self._next_id(),
                doi=doi.strip(),
                title=title,
                query=query,
                institution_id=institution_id,
                year_from=int(year_from),
                year_to=int(year_to),
                notes="",
                created_at=now,
                updated_at=now,
            )
            self._entries[entry.entry_id] = entry
            self._persist()
            return entry

    def update_notes(self, entry_id: str, notes: str) -> ShoeboxEntry:
        with self._lock:
            entry = self._entries.get(entry_id)
            if entry is None:
                raise EntryNotFoundError(f"no shoebox entry {entry_id}")
            entry.notes = notes
            entry.updated_at = _bump(entry.updated_at)
            self._persist()
            return entry

    def delete_entry(self, entry_id: str) -> None:
        with self._lock:
            if entry_id not in self._entries:
                raise EntryNotFoundError(f"no shoebox entry {entry_id}")
            del self._entries[entry_id]
            self._persist()

    def list_entries(self) -> list[ShoeboxEntry]:
        with self._lock:
            return self._ordered()

    def get_entry(self, entry_id: str) -> ShoeboxEntry:
        with self._lock:
            entry = self._entries.get(entry_id)
            if entry is None:
                raise EntryNotFoundError(f"no shoebox entry {entry_id}")
            return entry
