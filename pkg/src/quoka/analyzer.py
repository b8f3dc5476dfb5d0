"""Text normalization shared by index building and query parsing.

Both sides must run the exact same pipeline; a hash of the effective
config (including the stopword list) is stored in every index and
checked again at query time.
"""

from __future__ import annotations

import hashlib
import json
import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

# Unicode alphanumeric runs: \w minus the underscore.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def _read_stopword_lines(lines) -> frozenset[str]:
    words = set()
    for line in lines:
        term = line.split("#", 1)[0].strip()
        if term:
            words.add(term.lower())
    return frozenset(words)


def load_stopwords(path) -> frozenset[str]:
    """Read a stopword file: one lowercase term per line, '#' comments allowed."""
    with open(path, encoding="utf-8") as fh:
        return _read_stopword_lines(fh)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """The packaged English list (~120 terms)."""
    text = resources.files("quoka").joinpath("data/stopwords.txt").read_text("utf-8")
    return _read_stopword_lines(text.splitlines())


@dataclass(frozen=True)
class AnalyzerConfig:
    lowercase: bool = True
    min_token_length: int = 2
    max_token_length: int = 40
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    fold_diacritics: bool = True

    def __post_init__(self):
        if self.min_token_length < 1:
            raise ValueError("min_token_length must be >= 1")
        if self.max_token_length < self.min_token_length:
            raise ValueError("max_token_length must be >= min_token_length")
        if not isinstance(self.stopwords, frozenset):
            object.__setattr__(self, "stopwords", frozenset(self.stopwords))

    def config_hash(self) -> str:
        """sha256 over a canonical serialization; stored in index metadata."""
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "min_token_length": self.min_token_length,
            "max_token_length": self.max_token_length,
            "stopwords": sorted(self.stopwords),
            "fold_diacritics": self.fold_diacritics,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnalyzerConfig":
        return cls(
            lowercase=bool(data["lowercase"]),
            min_token_length=int(data["min_token_length"]),
            max_token_length=int(data["max_token_length"]),
            stopwords=frozenset(data["stopwords"]),
            fold_diacritics=bool(data["fold_diacritics"]),
        )


def fold_diacritics(text: str) -> str:
    """NFKD-decompose and drop combining marks ("Schrödinger" -> "Schrodinger")."""
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def tokenize(text: str, config: AnalyzerConfig) -> list[str]:
    """Normalize text into a token stream.

    Splits on any non-alphanumeric codepoint, then lowercases, folds
    diacritics, drops tokens outside the configured length bounds, and
    drops stopwords. Lowercasing/folding happen on the whole text before
    the split so decompositions that introduce separators still split;
    this keeps re-analysis of the output a no-op.
    """
    if not text:
        return []
    if config.lowercase:
        text = text.lower()
    if config.fold_diacritics:
        text = fold_diacritics(text)
        if config.lowercase:
            # compatibility decomposition can surface uppercase forms
            # (e.g. U+1D400 folds to "A"), so lowercase once more
            text = text.lower()
    lo, hi = config.min_token_length, config.max_token_length
    stop = config.stopwords
    return [
        tok
        for tok in _TOKEN_RE.findall(text)
        if lo <= len(tok) <= hi and tok not in stop
    ]
