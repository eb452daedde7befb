"""Per-sentence feature vectors and the top-fraction discretization filter."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import CorpusStats, Document
from .errors import ValidationError
from .termstats import (
    CooccurrenceTable,
    SynonymLexicon,
    cohesion_link_counts,
    g2_score,
    tf_idf_weight,
    tf_norm,
    title_term_mentions,
)

GENERIC_FEATURES = (
    "sent_loc_para",
    "para_loc_section",
    "sent_special_section",
    "depth_sent_section",
    "in_highest_tf",
    "in_highest_tfidf",
    "in_highest_g2",
    "in_highest_title",
    "in_highest_pname",
    "in_highest_syn",
    "in_highest_cooc",
)
USER_FEATURES = ("keyword_count", "keyword_ratio")
ALL_FEATURES = GENERIC_FEATURES + USER_FEATURES

# Declared value domains for categorical features (None = numeric).
FEATURE_DOMAINS: dict[str, tuple[int, ...] | None] = {
    "sent_loc_para": (1, 2, 3),
    "para_loc_section": (1, 2, 3),
    "sent_special_section": (1, 2, 3),
    "depth_sent_section": (1, 2, 3, 4),
    "in_highest_tf": (0, 1),
    "in_highest_tfidf": (0, 1),
    "in_highest_g2": (0, 1),
    "in_highest_title": (0, 1),
    "in_highest_pname": (0, 1),
    "in_highest_syn": (0, 1),
    "in_highest_cooc": (0, 1),
    "keyword_count": None,
    "keyword_ratio": None,
}

_SPECIAL_SECTION = {"introduction": 1, "conclusion": 2, "other": 3}


@dataclass
class FeatureVector:
    doc_id: str
    sent_index: int
    sent_loc_para: int
    para_loc_section: int
    sent_special_section: int
    depth_sent_section: int
    in_highest_tf: int
    in_highest_tfidf: int
    in_highest_g2: int
    in_highest_title: int
    in_highest_pname: int
    in_highest_syn: int
    in_highest_cooc: int
    keyword_count: int | None = None
    keyword_ratio: float | None = None
    label: bool | None = None
    raw_scores: dict[str, float] = field(default_factory=dict, repr=False)

    def get(self, feature: str):
        return getattr(self, feature)

    def feature_key(self) -> tuple:
        """Equality key over feature fields (doc identity excluded)."""
        return tuple(getattr(self, f) for f in ALL_FEATURES)

    def has_user_features(self) -> bool:
        return self.keyword_count is not None


def thirds_position(index: int, total: int) -> int:
    """Map a 1-based position to first/middle/last third via ceil(3*i/total)."""
    if not 1 <= index <= total:
        raise ValidationError(f"position {index} out of range 1..{total}")
    return min(3, max(1, math.ceil(3 * index / total)))


def top_fraction_count(n: int, compression: float) -> int:
    return math.ceil(compression * n)


def filter1(scores: list[float], compression: float) -> list[int]:
    """Mark the top ceil(compression*N) scores with 1.

    Ties break toward earlier positions.
    """
    if not 0.0 < compression <= 1.0:
        raise ValidationError(f"compression must be in (0, 1], got {compression}")
    if not scores:
        raise ValidationError("filter1 needs at least one score")
    k = top_fraction_count(len(scores), compression)
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    out = [0] * len(scores)
    for i in order[:k]:
        out[i] = 1
    return out


def extract_features(
    doc: Document,
    stats: CorpusStats,
    table: CooccurrenceTable,
    lex: SynonymLexicon,
    compression: float,
    stoplist: set[str],
    keywords: dict[str, float] | None = None,
) -> list[FeatureVector]:
    """One FeatureVector per sentence of the document.

    Thematic/cohesion scores pass through filter1 at the given compression;
    keyword features are filled only when a keyword map is supplied.
    """
    if doc.id not in stats.doc_token_totals:
        raise ValidationError(f"document {doc.id!r} not present in corpus stats")

    sentences = doc.sentences()
    n = len(sentences)
    loc: dict[int, tuple[int, int, int, int]] = {}
    for sec in doc.sections:
        special = _SPECIAL_SECTION[sec.kind]
        n_paras = len(sec.paragraphs)
        for p_i, para in enumerate(sec.paragraphs):
            para_loc = thirds_position(p_i + 1, n_paras)
            for s_i, sent in enumerate(para):
                sent_loc = thirds_position(s_i + 1, len(para))
                loc[sent.doc_index] = (sent_loc, para_loc, special, sec.depth)

    def avg(values: list[float]) -> float:
        return sum(values) / len(values) if values else 0.0

    doc_terms = stats.doc_term_counts.get(doc.id, doc.content_term_counts())
    tf_map = {t: tf_norm(t, doc, stats) for t in doc_terms}
    tfidf_map = {t: tf_idf_weight(t, doc, stats) for t in doc_terms}
    g2_map = {t: g2_score(t, doc, stats) for t in doc_terms}

    tf_scores, tfidf_scores, g2_scores = [], [], []
    title_scores, pname_scores, syn_scores, cooc_scores = [], [], [], []
    for sent in sentences:
        terms = sent.content_terms()
        tf_scores.append(avg([tf_map[t] for t in terms]))
        tfidf_scores.append(avg([tfidf_map[t] for t in terms]))
        g2_scores.append(avg([g2_map[t] for t in terms]))
        title_scores.append(float(title_term_mentions(sent, doc, stoplist)))
        pname_scores.append(float(sum(1 for t in sent.tokens if t.is_name_mention)))
        syn, cooc = cohesion_link_counts(sent, doc, table, lex)
        syn_scores.append(float(syn))
        cooc_scores.append(float(cooc))

    filtered = {
        "in_highest_tf": filter1(tf_scores, compression),
        "in_highest_tfidf": filter1(tfidf_scores, compression),
        "in_highest_g2": filter1(g2_scores, compression),
        "in_highest_title": filter1(title_scores, compression),
        "in_highest_pname": filter1(pname_scores, compression),
        "in_highest_syn": filter1(syn_scores, compression),
        "in_highest_cooc": filter1(cooc_scores, compression),
    }
    raw = {
        "tf": tf_scores,
        "tfidf": tfidf_scores,
        "g2": g2_scores,
        "title": title_scores,
        "pname": pname_scores,
        "syn": syn_scores,
        "cooc": cooc_scores,
    }

    vectors = []
    for i, sent in enumerate(sentences):
        sent_loc, para_loc, special, depth = loc[sent.doc_index]
        vec = FeatureVector(
            doc_id=doc.id,
            sent_index=sent.doc_index,
            sent_loc_para=sent_loc,
            para_loc_section=para_loc,
            sent_special_section=special,
            depth_sent_section=depth,
            in_highest_tf=filtered["in_highest_tf"][i],
            in_highest_tfidf=filtered["in_highest_tfidf"][i],
            in_highest_g2=filtered["in_highest_g2"][i],
            in_highest_title=filtered["in_highest_title"][i],
            in_highest_pname=filtered["in_highest_pname"][i],
            in_highest_syn=filtered["in_highest_syn"][i],
            in_highest_cooc=filtered["in_highest_cooc"][i],
            raw_scores={k: v[i] for k, v in raw.items()},
        )
        if keywords is not None:
            terms = sent.content_terms()
            count = sum(1 for t in terms if t in keywords)
            vec.keyword_count = count
            vec.keyword_ratio = count / len(terms) if terms else 0.0
        vectors.append(vec)
    return vectors


TSV_COLUMNS = ("doc_id", "sent_index", *ALL_FEATURES, "label")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_vectors_tsv(vectors: list[FeatureVector], path: str | Path) -> None:
    lines = ["\t".join(TSV_COLUMNS)]
    for v in vectors:
        row = [v.doc_id, str(v.sent_index)]
        row.extend(_cell(v.get(f)) for f in ALL_FEATURES)
        row.append(_cell(v.label))
        lines.append("\t".join(row))
    Path(path).write_text("\n".join(lines) + "\n", "utf-8")


def load_vectors_tsv(path: str | Path) -> list[FeatureVector]:
    lines = Path(path).read_text("utf-8").splitlines()
    header = lines[0].split("\t")
    if tuple(header) != TSV_COLUMNS:
        raise ValidationError(f"{path}: unexpected feature TSV header")
    vectors = []
    for line in lines[1:]:
        cells = line.split("\t")
        row = dict(zip(header, cells))
        vectors.append(
            FeatureVector(
                doc_id=row["doc_id"],
                sent_index=int(row["sent_index"]),
                sent_loc_para=int(row["sent_loc_para"]),
                para_loc_section=int(row["para_loc_section"]),
                sent_special_section=int(row["sent_special_section"]),
                depth_sent_section=int(row["depth_sent_section"]),
                in_highest_tf=int(row["in_highest_tf"]),
                in_highest_tfidf=int(row["in_highest_tfidf"]),
                in_highest_g2=int(row["in_highest_g2"]),
                in_highest_title=int(row["in_highest_title"]),
                in_highest_pname=int(row["in_highest_pname"]),
                in_highest_syn=int(row["in_highest_syn"]),
                in_highest_cooc=int(row["in_highest_cooc"]),
                keyword_count=int(row["keyword_count"]) if row["keyword_count"] else None,
                keyword_ratio=float(row["keyword_ratio"]) if row["keyword_ratio"] else None,
                label=bool(int(row["label"])) if row["label"] else None,
            )
        )
    return vectors
