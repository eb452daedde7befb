"""Apply a trained model to a document and emit an extract."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .corpus import Document
from .errors import ConfigError, ValidationError
from .features import extract_features, top_fraction_count
from .learners import Model
from .pipeline import Resources
from .userfocus import KeywordMap


@dataclass
class Summary:
    doc_id: str
    compression: float
    sentences: list[tuple[int, str]]
    model_id: str

    def to_text(self) -> str:
        return "\n".join(text for _, text in self.sentences) + "\n"

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "compression": self.compression,
            "sentences": [{"index": i, "text": t} for i, t in self.sentences],
        }

    def save(self, path: str | Path, as_json: bool = False) -> None:
        if as_json:
            Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", "utf-8")
        else:
            Path(path).write_text(self.to_text(), "utf-8")


def summarize(
    doc: Document,
    model: Model,
    res: Resources,
    compression: float,
    keywords: KeywordMap | None = None,
    model_id: str = "model",
) -> Summary:
    """Rank sentences by model score and keep the top ceil(c*N), source order."""
    sentences = doc.sentences()
    if not sentences:
        raise ValidationError(f"document {doc.id!r} is empty")
    referenced = model.weights.keys() if hasattr(model, "weights") else model.referenced_features()
    if any(f in ("keyword_count", "keyword_ratio") for f in referenced) and keywords is None:
        raise ConfigError("this model requires a keyword map (user-focused features)")
    vectors = extract_features(
        doc,
        res.stats,
        res.table,
        res.lex,
        compression,
        res.stoplist,
        keywords=keywords.weights if keywords is not None else None,
    )
    scores = [model.score(v) for v in vectors]
    k = top_fraction_count(len(sentences), compression)
    order = sorted(range(len(sentences)), key=lambda i: (-scores[i], i))
    chosen = sorted(order[:k])
    return Summary(
        doc_id=doc.id,
        compression=compression,
        sentences=[(i, sentences[i].raw_text) for i in chosen],
        model_id=model_id,
    )
