"""Unsupervised baseline extractors sharing one candidate stage."""

from .candidates import Candidate, ExtractionResult, generate_candidates
from .embedrank import extract_embedrank
from .termfreq import extract_termfreq
from .yake import (
    TermFeatures,
    extract_yake,
    levenshtein_similarity,
    yake_term_features,
)

__all__ = [
    "Candidate",
    "ExtractionResult",
    "TermFeatures",
    "extract_embedrank",
    "extract_termfreq",
    "extract_yake",
    "generate_candidates",
    "levenshtein_similarity",
    "yake_term_features",
]
