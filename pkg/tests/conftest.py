"""Shared fixtures: a tiny hand-written corpus and generated synthetic corpora."""

from __future__ import annotations

import json

import pytest

from sumrules import synth
from sumrules.corpus import Document, load_stoplist, parse_document
from sumrules.pipeline import Resources, prepare_resources
from sumrules.termstats import SynonymLexicon


@pytest.fixture(scope="session")
def stoplist() -> set[str]:
    return load_stoplist(None)


def make_doc(obj: dict, stoplist: set[str]) -> Document:
    return parse_document(json.dumps(obj), stoplist)


def tiny_corpus_dicts() -> list[dict]:
    """Three small documents with abstracts, stable under the default stoplist."""
    return [
        {
            "id": "alpha",
            "title": "Parsing strategies overview",
            "abstract": [
                "Parsing strategies determine coverage.",
                "Robust parsing needs fallback strategies.",
            ],
            "sections": [
                {
                    "heading": "Introduction",
                    "depth": 1,
                    "kind": "introduction",
                    "paragraphs": [
                        [
                            "Parsing strategies determine coverage.",
                            "Grammars grow quickly without control.",
                        ],
                        ["Robust parsing needs fallback strategies."],
                    ],
                },
                {
                    "heading": "Evaluation setup",
                    "depth": 2,
                    "kind": "other",
                    "paragraphs": [
                        [
                            "Corpus counts drive every score here.",
                            "Scores alone rarely explain behavior.",
                            "Behavior varies across domains widely.",
                        ]
                    ],
                },
                {
                    "heading": "Conclusion",
                    "depth": 1,
                    "kind": "conclusion",
                    "paragraphs": [["Fallback parsing wins on noisy text."]],
                },
            ],
        },
        {
            "id": "beta",
            "title": "Alignment models",
            "abstract": ["Alignment quality depends on corpus size."],
            "sections": [
                {
                    "heading": "Introduction",
                    "depth": 1,
                    "kind": "introduction",
                    "paragraphs": [
                        [
                            "Alignment quality depends on corpus size.",
                            "Small corpora mislead simple models.",
                        ]
                    ],
                },
                {
                    "heading": "Models compared",
                    "depth": 1,
                    "kind": "other",
                    "paragraphs": [
                        [
                            "Simple models train faster than rich ones.",
                            "Rich models capture rare alignment links.",
                        ],
                        ["Corpus size dominates both model families."],
                    ],
                },
            ],
        },
        {
            "id": "gamma",
            "title": "Summarization habits",
            "abstract": ["Editors keep opening sentences verbatim."],
            "sections": [
                {
                    "heading": "Background",
                    "depth": 1,
                    "kind": "other",
                    "paragraphs": [
                        [
                            "Editors keep opening sentences verbatim.",
                            "Closing remarks get trimmed aggressively.",
                            "Middle paragraphs vanish most often.",
                        ]
                    ],
                },
                {
                    "heading": "Summary",
                    "depth": 1,
                    "kind": "conclusion",
                    "paragraphs": [["Position explains extraction better than wording."]],
                },
            ],
        },
    ]


@pytest.fixture(scope="session")
def tiny_docs(stoplist) -> list[Document]:
    return [make_doc(obj, stoplist) for obj in tiny_corpus_dicts()]


@pytest.fixture(scope="session")
def tiny_resources(tiny_docs, stoplist) -> Resources:
    return prepare_resources(tiny_docs, stoplist)


def build_synth_resources(profile: str, n_docs: int, seed: int):
    """Parse a generated corpus into Resources plus its ground truth."""
    corpus = synth.generate(profile, n_docs, seed)
    stop = load_stoplist(None)
    docs = [make_doc(obj, stop) for obj in corpus.documents]
    lex = SynonymLexicon.from_synsets([set(s) for s in corpus.synsets])
    res = prepare_resources(docs, stop, lex=lex)
    return res, corpus


@pytest.fixture(scope="session")
def lead_bias():
    return build_synth_resources("lead-bias", 50, 42)


@pytest.fixture(scope="session")
def keyword_planted():
    return build_synth_resources("keyword-planted", 50, 42)


@pytest.fixture(scope="session")
def mixed():
    return build_synth_resources("mixed", 50, 42)
