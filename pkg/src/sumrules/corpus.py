"""Document model, ingestion, and corpus-level count statistics."""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ParseError, ValidationError

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

SECTION_KINDS = ("introduction", "conclusion", "other")


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    is_content: bool
    is_name_mention: bool


@dataclass
class Sentence:
    doc_index: int
    para_index: int
    tokens: list[Token]
    raw_text: str

    def content_terms(self) -> list[str]:
        return [t.normalized for t in self.tokens if t.is_content]


@dataclass
class Section:
    heading: str
    depth: int
    kind: str
    paragraphs: list[list[Sentence]]


@dataclass
class Document:
    id: str
    title: str
    abstract: list[Sentence] | None
    sections: list[Section]

    def sentences(self) -> list[Sentence]:
        out = []
        for sec in self.sections:
            for para in sec.paragraphs:
                out.extend(para)
        return out

    def content_term_counts(self) -> Counter:
        counts: Counter = Counter()
        for sent in self.sentences():
            counts.update(sent.content_terms())
        return counts


@dataclass
class CorpusStats:
    n_docs: int
    df: dict[str, int]
    doc_token_totals: dict[str, int]
    corpus_token_total: int
    term_corpus_counts: dict[str, int]
    doc_term_counts: dict[str, Counter] = field(default_factory=dict)
    doc_max_counts: dict[str, int] = field(default_factory=dict)


def tokenize(raw_text: str, stoplist: set[str]) -> list[Token]:
    """Split on non-alphanumeric boundaries; flag content words and likely names.

    Name mentions are capitalized, non-sentence-initial, non-stoplist tokens
    (heuristic stand-in for a proper name tagger).
    """
    tokens = []
    for i, match in enumerate(_WORD_RE.finditer(raw_text)):
        surface = match.group(0)
        normalized = surface.lower()
        is_content = normalized not in stoplist
        is_name = surface[0].isupper() and i > 0 and is_content
        tokens.append(Token(surface, normalized, is_content, is_name))
    return tokens


def load_stoplist(path: str | Path | None = None) -> set[str]:
    """Load a stoplist file (one word per line, '#' comments).

    Without a path, the bundled default list is used.
    """
    if path is None:
        text = resources.files("sumrules.data").joinpath("stoplist.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = set()
    for line in text.splitlines():
        word = line.split("#", 1)[0].strip().lower()
        if word:
            words.add(word)
    return words


def _infer_kind(heading: str) -> str:
    h = heading.lower()
    if "introduction" in h:
        return "introduction"
    if "conclusion" in h or "summary" in h:
        return "conclusion"
    return "other"


def parse_document(data: bytes | str, stoplist: set[str], source: str = "<memory>") -> Document:
    """Parse a UTF-8 JSON document file into a Document.

    Sentences are pre-split in the file; sentence indices are assigned in
    file order. Section kind comes from the explicit "kind" field when
    present, else from the heading.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError(f"{source}: document must be a JSON object")
    for key in ("id", "title", "sections"):
        if key not in obj:
            raise ParseError(f"{source}: missing required field '{key}'")
    doc_id = obj["id"]
    if not isinstance(doc_id, str) or not doc_id:
        raise ParseError(f"{source}: 'id' must be a non-empty string")

    sections = []
    doc_index = 0
    n_sentences = 0
    for si, sec in enumerate(obj["sections"]):
        where = f"{source}: sections[{si}]"
        if not isinstance(sec, dict) or "heading" not in sec or "paragraphs" not in sec:
            raise ParseError(f"{where}: expected object with 'heading' and 'paragraphs'")
        heading = sec["heading"]
        depth = sec.get("depth", 1)
        if depth not in (1, 2, 3, 4):
            raise ValidationError(f"{where}: depth must be in 1..4, got {depth!r}")
        kind = sec.get("kind") or _infer_kind(heading)
        if kind not in SECTION_KINDS:
            raise ValidationError(f"{where}: unknown kind {kind!r}")
        paragraphs = []
        for pi, para in enumerate(sec["paragraphs"]):
            if not isinstance(para, list):
                raise ParseError(f"{where}.paragraphs[{pi}]: expected a list of sentences")
            sent_objs = []
            for raw in para:
                if not isinstance(raw, str):
                    raise ParseError(f"{where}.paragraphs[{pi}]: sentences must be strings")
                tokens = tokenize(raw, stoplist)
                if not tokens:
                    raise ValidationError(f"{where}.paragraphs[{pi}]: sentence with no tokens: {raw!r}")
                sent_objs.append(Sentence(doc_index, len(sent_objs), tokens, raw))
                doc_index += 1
                n_sentences += 1
            if sent_objs:
                paragraphs.append(sent_objs)
        if not paragraphs:
            raise ValidationError(f"{where}: section contains zero sentences")
        sections.append(Section(heading, depth, kind, paragraphs))
    if not sections or n_sentences == 0:
        raise ValidationError(f"{source}: document has no sentences")

    abstract = None
    if obj.get("abstract"):
        abstract = []
        for i, raw in enumerate(obj["abstract"]):
            tokens = tokenize(raw, stoplist)
            if not tokens:
                raise ValidationError(f"{source}: abstract[{i}] has no tokens")
            abstract.append(Sentence(i, i, tokens, raw))

    return Document(doc_id, obj["title"], abstract, sections)


def document_to_json(doc: Document) -> dict:
    """Serialize back to the document-file schema (round-trips via parse)."""
    out: dict = {"id": doc.id, "title": doc.title}
    if doc.abstract is not None:
        out["abstract"] = [s.raw_text for s in doc.abstract]
    out["sections"] = [
        {
            "heading": sec.heading,
            "depth": sec.depth,
            "kind": sec.kind,
            "paragraphs": [[s.raw_text for s in para] for para in sec.paragraphs],
        }
        for sec in doc.sections
    ]
    return out


def load_corpus(corpus_dir: str | Path, stoplist: set[str]) -> list[Document]:
    """Load every *.json document in a directory, sorted by filename."""
    paths = sorted(Path(corpus_dir).glob("*.json"))
    if not paths:
        raise ValidationError(f"no *.json documents found in {corpus_dir}")
    docs = [parse_document(p.read_bytes(), stoplist, source=str(p)) for p in paths]
    return docs


def build_corpus_stats(docs: list[Document]) -> CorpusStats:
    """Count document frequencies and token totals over content tokens only."""
    if not docs:
        raise ValidationError("empty corpus")
    seen_ids: set[str] = set()
    df: Counter = Counter()
    term_corpus_counts: Counter = Counter()
    doc_token_totals: dict[str, int] = {}
    doc_term_counts: dict[str, Counter] = {}
    doc_max_counts: dict[str, int] = {}
    for doc in docs:
        if doc.id in seen_ids:
            raise ValidationError(f"duplicate document id: {doc.id!r}")
        seen_ids.add(doc.id)
        counts = doc.content_term_counts()
        df.update(counts.keys())
        term_corpus_counts.update(counts)
        doc_token_totals[doc.id] = sum(counts.values())
        doc_term_counts[doc.id] = counts
        doc_max_counts[doc.id] = max(counts.values()) if counts else 0
    return CorpusStats(
        n_docs=len(docs),
        df=dict(df),
        doc_token_totals=doc_token_totals,
        corpus_token_total=sum(doc_token_totals.values()),
        term_corpus_counts=dict(term_corpus_counts),
        doc_term_counts=doc_term_counts,
        doc_max_counts=doc_max_counts,
    )
