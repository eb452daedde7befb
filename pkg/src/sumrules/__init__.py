"""Corpus-trained extractive summarization with learnable, editable salience rules."""

__version__ = "0.1.0"
