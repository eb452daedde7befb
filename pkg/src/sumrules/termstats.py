"""Term-level scores: tf, tf.idf, G2, co-occurrence links, synonym links.

These are the raw scores behind the thematic and cohesion sentence features.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import CorpusStats, Document, Sentence, tokenize
from .errors import ValidationError

DEFAULT_COOC_WINDOW = 40
DEFAULT_COOC_MIN_COUNT = 10
DEFAULT_COOC_MIN_SCORE = 10.0


def tf_norm(term: str, doc: Document, stats: CorpusStats | None = None) -> float:
    """Term frequency normalized by the document's maximum term frequency."""
    if stats is not None and doc.id in stats.doc_term_counts:
        counts = stats.doc_term_counts[doc.id]
        max_count = stats.doc_max_counts[doc.id]
    else:
        counts = doc.content_term_counts()
        max_count = max(counts.values()) if counts else 0
    if max_count == 0:
        return 0.0
    return counts.get(term, 0) / max_count


def idf(term: str, stats: CorpusStats) -> float:
    """ln(n) - ln(df) + 1; zero for terms unseen in the corpus."""
    df = stats.df.get(term, 0)
    if df == 0:
        return 0.0
    return math.log(stats.n_docs) - math.log(df) + 1.0


def tf_idf_weight(term: str, doc: Document, stats: CorpusStats) -> float:
    """tf_norm * (ln n - ln df + 1); 0 when the term is unseen in the corpus."""
    df = stats.df.get(term, 0)
    if df == 0:
        return 0.0
    return tf_norm(term, doc, stats) * (math.log(stats.n_docs) - math.log(df) + 1.0)


def g2_score(term: str, doc: Document, stats: CorpusStats) -> float:
    """One-sided log-likelihood ratio for over-representation of a term.

    The 2x2 table compares occurrences of the term inside the document
    against the rest of the corpus; 0 when the in-document rate does not
    exceed the corpus rate.
    """
    doc_total = stats.doc_token_totals.get(doc.id)
    if doc_total is None:
        raise ValidationError(f"document {doc.id!r} not present in corpus stats")
    if doc_total == 0 or stats.corpus_token_total == 0:
        return 0.0
    k_doc = stats.doc_term_counts[doc.id].get(term, 0)
    k_corpus = stats.term_corpus_counts.get(term, 0)
    n_corpus = stats.corpus_token_total
    if k_doc / doc_total <= k_corpus / n_corpus:
        return 0.0
    # Cells: term/doc, term/rest, other/doc, other/rest.
    cells = (
        (k_doc, doc_total),
        (k_corpus - k_doc, n_corpus - doc_total),
        (doc_total - k_doc, doc_total),
        ((n_corpus - doc_total) - (k_corpus - k_doc), n_corpus - doc_total),
    )
    row_totals = (k_corpus, n_corpus - k_corpus)
    g2 = 0.0
    for i, (obs, col_total) in enumerate(cells):
        expected = row_totals[i // 2] * col_total / n_corpus
        if obs > 0:
            g2 += obs * math.log(obs / expected)
    return 2.0 * g2


@dataclass
class CooccurrenceTable:
    entries: dict[tuple[str, str], tuple[int, float]] = field(default_factory=dict)
    window: int = DEFAULT_COOC_WINDOW
    min_count: int = DEFAULT_COOC_MIN_COUNT
    min_score: float = DEFAULT_COOC_MIN_SCORE

    @staticmethod
    def key(a: str, b: str) -> tuple[str, str]:
        return (a, b) if a <= b else (b, a)

    def lookup(self, a: str, b: str) -> tuple[int, float] | None:
        return self.entries.get(self.key(a, b))

    def __contains__(self, pair: tuple[str, str]) -> bool:
        return self.key(*pair) in self.entries

    def save(self, path: str | Path) -> None:
        lines = []
        for (a, b), (count, score) in sorted(self.entries.items()):
            lines.append(f"{a}\t{b}\t{count}\t{score!r}")
        header = f"#window={self.window}\tmin_count={self.min_count}\tmin_score={self.min_score!r}"
        Path(path).write_text("\n".join([header, *lines]) + "\n", "utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "CooccurrenceTable":
        table = cls(entries={})
        for line in Path(path).read_text("utf-8").splitlines():
            if line.startswith("#"):
                for part in line[1:].split("\t"):
                    k, v = part.split("=")
                    if k == "window":
                        table.window = int(v)
                    elif k == "min_count":
                        table.min_count = int(v)
                    elif k == "min_score":
                        table.min_score = float(v)
                continue
            a, b, count, score = line.split("\t")
            table.entries[(a, b)] = (int(count), float(score))
        return table


def build_cooccurrence_table(
    docs: list[Document],
    window: int = DEFAULT_COOC_WINDOW,
    min_count: int = DEFAULT_COOC_MIN_COUNT,
    min_score: float = DEFAULT_COOC_MIN_SCORE,
) -> CooccurrenceTable:
    """Mutual-information co-occurrence table over the corpus content stream.

    Pairs are counted within `window` content tokens, never across document
    boundaries. Both thresholds are strict.
    """
    if not docs:
        raise ValidationError("empty corpus")
    pair_counts: dict[tuple[str, str], int] = {}
    term_counts: dict[str, int] = {}
    total = 0
    for doc in docs:
        stream = [t.normalized for s in doc.sentences() for t in s.tokens if t.is_content]
        total += len(stream)
        for term in stream:
            term_counts[term] = term_counts.get(term, 0) + 1
        for i, a in enumerate(stream):
            for b in stream[i + 1 : i + 1 + window]:
                if a == b:
                    continue
                key = CooccurrenceTable.key(a, b)
                pair_counts[key] = pair_counts.get(key, 0) + 1
    entries = {}
    for (a, b), count in pair_counts.items():
        if count <= min_count:
            continue
        score = math.log(total * count / (term_counts[a] * term_counts[b]))
        if score > min_score:
            entries[(a, b)] = (count, score)
    return CooccurrenceTable(entries, window, min_count, min_score)


@dataclass
class SynonymLexicon:
    synsets: list[frozenset[str]] = field(default_factory=list)
    index: dict[str, set[int]] = field(default_factory=dict)

    @classmethod
    def from_synsets(cls, synsets: list[set[str]]) -> "SynonymLexicon":
        lex = cls()
        for words in synsets:
            sid = len(lex.synsets)
            lex.synsets.append(frozenset(words))
            for w in words:
                lex.index.setdefault(w, set()).add(sid)
        return lex

    @classmethod
    def load(cls, path: str | Path) -> "SynonymLexicon":
        """One synset per line, space-separated lowercase lemmas."""
        synsets = []
        for line in Path(path).read_text("utf-8").splitlines():
            words = {w for w in line.split() if w and not w.startswith("#")}
            if line.strip().startswith("#"):
                continue
            if len(words) >= 2:
                synsets.append(words)
        return cls.from_synsets(synsets)

    @classmethod
    def empty(cls) -> "SynonymLexicon":
        return cls()

    def linked(self, a: str, b: str) -> bool:
        sa = self.index.get(a)
        if not sa:
            return False
        sb = self.index.get(b)
        return bool(sb) and not sa.isdisjoint(sb)


def cohesion_link_counts(
    sentence: Sentence,
    doc: Document,
    table: CooccurrenceTable,
    lex: SynonymLexicon,
) -> tuple[int, int]:
    """Count of unique other sentences linked by synonymy / co-occurrence."""
    own_terms = set(sentence.content_terms())
    syn_links = 0
    cooc_links = 0
    for other in doc.sentences():
        if other.doc_index == sentence.doc_index:
            continue
        other_terms = set(other.content_terms())
        if any(lex.linked(a, b) for a in own_terms for b in other_terms):
            syn_links += 1
        if any((a, b) in table for a in own_terms for b in other_terms):
            cooc_links += 1
    return syn_links, cooc_links


def title_term_mentions(sentence: Sentence, doc: Document, stoplist: set[str]) -> int:
    """Tokens of the sentence whose normalized form occurs in the title or any heading."""
    title_terms: set[str] = set()
    for text in [doc.title, *(sec.heading for sec in doc.sections)]:
        for tok in tokenize(text, stoplist):
            if tok.is_content:
                title_terms.add(tok.normalized)
    return sum(1 for t in sentence.tokens if t.is_content and t.normalized in title_terms)
