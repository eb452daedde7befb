"""Deterministic synthetic corpora with known salient sentences.

Three profiles:
  lead-bias       salient sentences sit in introduction/conclusion sections
                  and carry document-specific theme terms.
  keyword-planted salience is carried almost entirely by a global topic
                  vocabulary; positions and thematic scores are noise.
  mixed           graded lead sentences whose similarity, tf, tf.idf and G2
                  rankings all coincide, so labels nest across compressions.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

PROFILES = ("lead-bias", "keyword-planted", "mixed")

_CONSONANTS = "bcdfgklmnprstvz"
_VOWELS = "aeiou"


@dataclass
class SynthCorpus:
    profile: str
    seed: int
    documents: list[dict]
    planted: dict[str, list[int]]
    interest_ids: list[str] = field(default_factory=list)
    topic_words: list[str] = field(default_factory=list)
    synsets: list[list[str]] = field(default_factory=list)

    def write(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        corpus = out / "corpus"
        corpus.mkdir(parents=True, exist_ok=True)
        for doc in self.documents:
            path = corpus / f"{doc['id']}.json"
            path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", "utf-8")
        default_stoplist = resources.files("sumrules.data").joinpath("stoplist.txt").read_text("utf-8")
        (out / "stoplist.txt").write_text(default_stoplist, "utf-8")
        (out / "synonyms.txt").write_text(
            "\n".join(" ".join(s) for s in self.synsets) + ("\n" if self.synsets else ""), "utf-8"
        )
        (out / "interest.txt").write_text(
            "\n".join(self.interest_ids) + ("\n" if self.interest_ids else ""), "utf-8"
        )
        truth = {
            "profile": self.profile,
            "seed": self.seed,
            "planted": self.planted,
            "interest_ids": self.interest_ids,
            "topic_words": self.topic_words,
        }
        (out / "truth.json").write_text(json.dumps(truth, indent=2, sort_keys=True) + "\n", "utf-8")


def _word(rng: random.Random, n_syllables: int = 3) -> str:
    return "".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(n_syllables))


def _word_pool(rng: random.Random, count: int, taken: set[str]) -> list[str]:
    pool = []
    while len(pool) < count:
        w = _word(rng)
        if w not in taken:
            taken.add(w)
            pool.append(w)
    return pool


def _sentence(words: list[str]) -> str:
    text = " ".join(words)
    return text[0].upper() + text[1:] + "."


def generate(profile: str, n_docs: int, seed: int) -> SynthCorpus:
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; expected one of {PROFILES}")
    if n_docs < 10:
        raise ValueError(f"n_docs must be >= 10, got {n_docs}")
    rng = random.Random(seed)
    if profile == "lead-bias":
        return _gen_lead_bias(n_docs, seed, rng)
    if profile == "keyword-planted":
        return _gen_keyword_planted(n_docs, seed, rng)
    return _gen_mixed(n_docs, seed, rng)


def _gen_lead_bias(n_docs: int, seed: int, rng: random.Random) -> SynthCorpus:
    taken: set[str] = set()
    common = _word_pool(rng, 120, taken)
    glue = _word_pool(rng, 20, taken)  # appears only in planted sentences + abstracts
    documents = []
    planted: dict[str, list[int]] = {}
    for d in range(n_docs):
        theme = _word_pool(rng, 6, taken)
        def planted_sentence() -> str:
            words = rng.sample(theme, 3)
            words.append(rng.choice(words))  # repeat one theme word
            words.append(rng.choice(glue))
            rng.shuffle(words)
            return _sentence(["the", *words])

        def filler_sentence() -> str:
            return _sentence(["the", *[rng.choice(common) for _ in range(rng.randint(8, 10))]])

        intro = [planted_sentence(), planted_sentence()]
        conclusion = [planted_sentence(), planted_sentence()]
        body_sections = []
        n_fill = rng.randint(12, 16)
        per_section = [n_fill // 3] * 3
        per_section[0] += n_fill - sum(per_section)
        for s, count in enumerate(per_section):
            paras = []
            remaining = count
            while remaining > 0:
                size = min(remaining, rng.randint(2, 3))
                paras.append([filler_sentence() for _ in range(size)])
                remaining -= size
            body_sections.append(
                {
                    "heading": f"{rng.choice(common)} {rng.choice(common)}",
                    "depth": rng.randint(1, 2),
                    "kind": "other",
                    "paragraphs": paras,
                }
            )
        doc_id = f"doc{d:03d}"
        n_total = 4 + n_fill
        doc = {
            "id": doc_id,
            "title": f"A study of {theme[0]} {theme[1]}",
            "abstract": intro + conclusion,
            "sections": [
                {"heading": "Introduction", "depth": 1, "kind": "introduction",
                 "paragraphs": [intro]},
                *body_sections,
                {"heading": "Conclusion", "depth": 1, "kind": "conclusion",
                 "paragraphs": [conclusion]},
            ],
        }
        documents.append(doc)
        planted[doc_id] = [0, 1, n_total - 2, n_total - 1]
    return SynthCorpus("lead-bias", seed, documents, planted)


def _gen_keyword_planted(n_docs: int, seed: int, rng: random.Random) -> SynthCorpus:
    taken: set[str] = set()
    common = _word_pool(rng, 120, taken)
    glue = _word_pool(rng, 20, taken)
    topic = _word_pool(rng, 8, taken)
    # Three interchangeable variants per topic word, linked through synsets;
    # variants acquire activation only when their topic word is in the doc.
    variants_by_topic = {t: _word_pool(rng, 3, taken) for t in topic}
    all_variants = [v for vs in variants_by_topic.values() for v in vs]
    synsets = [[t, *variants_by_topic[t]] for t in topic]
    n_interest = 10
    documents = []
    planted: dict[str, list[int]] = {}
    interest_ids = []

    def interest_salient() -> str:
        words = list(topic)
        words.append(rng.choice(all_variants))
        words.extend(rng.sample(glue, 2))
        words.append(rng.choice(common))
        rng.shuffle(words)
        return _sentence(["the", *words])

    def interest_filler() -> str:
        words = [rng.choice(topic)]
        words.extend(rng.choice(common) for _ in range(7))
        rng.shuffle(words)
        return _sentence(["the", *words])

    def regular_salient(doc_topics: list[str]) -> str:
        k = rng.choice(doc_topics)
        words = [k, *rng.sample(variants_by_topic[k], 3)]
        words.extend(rng.sample(glue, 2))
        words.extend(rng.choice(common) for _ in range(2))
        rng.shuffle(words)
        return _sentence(["the", *words])

    def regular_filler(hot: list[str], rare: list[str]) -> str:
        # Variant sprinkles keep lexicon membership and synonym links from
        # separating salient sentences; hot words and rare repeats add tf
        # and tf.idf noise at random positions.
        words = []
        if rng.random() < 0.7:
            words.extend(rng.sample(all_variants, rng.randint(1, 2)))
        words.extend(rng.choice(hot) for _ in range(rng.randint(1, 2)))
        if rng.random() < 0.4:
            words.extend([rng.choice(rare)] * rng.randint(2, 4))
        while len(words) < 8:
            words.append(rng.choice(common))
        rng.shuffle(words)
        return _sentence(["the", *words])

    for d in range(n_docs):
        doc_id = f"doc{d:03d}"
        hot = rng.sample(common, 6)
        rare_filler = _word_pool(rng, 4, taken)
        is_interest = d < n_interest
        if is_interest:
            interest_ids.append(doc_id)
            salient = [interest_salient() for _ in range(4)]
            others = [interest_filler() for _ in range(16)]
        else:
            doc_topics = rng.sample(topic, 2)
            salient = [regular_salient(doc_topics) for _ in range(4)]
            others = [regular_filler(hot, rare_filler) for _ in range(16)]
        # Scatter salient sentences at random positions.
        n_total = 4 + len(others)
        positions = sorted(rng.sample(range(n_total), 4))
        sentences: list[str] = []
        it = iter(others)
        for i in range(n_total):
            sentences.append(salient[positions.index(i)] if i in positions else next(it))
        sections = []
        per_section = [n_total // 4] * 4
        per_section[0] += n_total - sum(per_section)
        start = 0
        for s, count in enumerate(per_section):
            sections.append(
                {
                    "heading": f"{rng.choice(common)} {rng.choice(common)}",
                    "depth": rng.randint(1, 3),
                    "kind": "other",
                    "paragraphs": [sentences[start : start + count]],
                }
            )
            start += count
        documents.append(
            {
                "id": doc_id,
                "title": f"On {rng.choice(common)} and {rng.choice(common)}",
                "abstract": salient,
                "sections": sections,
            }
        )
        planted[doc_id] = positions
    return SynthCorpus(
        "keyword-planted", seed, documents, planted, interest_ids, list(topic), synsets
    )


def _gen_mixed(n_docs: int, seed: int, rng: random.Random) -> SynthCorpus:
    taken: set[str] = set()
    common = _word_pool(rng, 120, taken)
    documents = []
    planted: dict[str, list[int]] = {}
    def chunk(items: list[str], lo: int = 2, hi: int = 4) -> list[list[str]]:
        paras = []
        start = 0
        while start < len(items):
            size = min(len(items) - start, rng.randint(lo, hi))
            paras.append(items[start : start + size])
            start += size
        return paras

    for d in range(n_docs):
        doc_id = f"doc{d:03d}"
        anchor = _word_pool(rng, 1, taken)[0]
        extras = _word_pool(rng, 15, taken)
        graded = []
        used = 0
        for r in range(6):
            words = [anchor] * (8 - r) + extras[used : used + r]
            used += r
            graded.append(_sentence(["the", *words]))

        def filler() -> str:
            return _sentence(["the", *[rng.choice(common) for _ in range(rng.randint(7, 9))]])

        # Keep the document at <= 20 sentences so the top 30% never reaches
        # past the six graded ones; vary intro padding and paragraph sizes
        # so locational features differ between documents.
        n_fill = rng.randint(10, 14)
        n_intro_fill = rng.randint(0, 2)
        intro = list(graded)
        for _ in range(n_intro_fill):
            intro.insert(rng.randrange(len(intro) + 1), filler())
        body = [filler() for _ in range(n_fill - n_intro_fill)]
        half = len(body) // 2
        sections = [
            {"heading": "Introduction", "depth": 1, "kind": "introduction",
             "paragraphs": chunk(intro)},
            {"heading": f"{rng.choice(common)} methods", "depth": rng.randint(1, 2),
             "kind": "other", "paragraphs": chunk(body[:half])},
            {"heading": f"{rng.choice(common)} results", "depth": rng.randint(1, 2),
             "kind": "other", "paragraphs": chunk(body[half:])},
        ]
        documents.append(
            {
                "id": doc_id,
                "title": f"Toward {rng.choice(common)} {rng.choice(common)}",
                "abstract": [graded[0]],
                "sections": sections,
            }
        )
        planted[doc_id] = [intro.index(g) for g in graded]
    return SynthCorpus("mixed", seed, documents, planted)
