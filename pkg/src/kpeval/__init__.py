"""Keyphrase extraction baselines and evaluation harness for Russian
scholarly abstracts: deterministic text processing, corpus statistics,
three unsupervised extractors, string/embedding metrics, and a
reporting CLI."""

from .corpus import (
    Corpus,
    CorpusStats,
    Document,
    MeanStd,
    corpus_stats,
    load_corpus,
    phrase_appears_in,
)
from .embed import CacheProvider, EmbeddingProvider, HashProvider, RemoteProvider, cosine
from .extract import (
    Candidate,
    ExtractionResult,
    extract_embedrank,
    extract_termfreq,
    extract_yake,
    generate_candidates,
    yake_term_features,
)
from .harness import (
    EvalReport,
    GeneratedStats,
    PredictionSet,
    ReportRow,
    cross_matrix,
    evaluate,
    export_finetune,
    load_predictions,
    parse_causal_line,
    render_report,
)
from .metrics import (
    MetricScore,
    TopKConfig,
    abstractness,
    aggregate,
    bertscore,
    fullmatch_f1,
    join_keyphrases,
    rouge1,
    truncate_topk,
)
from .textproc import (
    LowercaseNormalizer,
    Normalizer,
    RussianStemNormalizer,
    default_normalizer,
    is_stopword,
    normalize_phrase,
    split_sentences,
    stem_ru,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "CacheProvider",
    "Candidate",
    "Corpus",
    "CorpusStats",
    "Document",
    "EmbeddingProvider",
    "EvalReport",
    "ExtractionResult",
    "GeneratedStats",
    "HashProvider",
    "LowercaseNormalizer",
    "MeanStd",
    "MetricScore",
    "Normalizer",
    "PredictionSet",
    "RemoteProvider",
    "ReportRow",
    "RussianStemNormalizer",
    "TopKConfig",
    "abstractness",
    "aggregate",
    "bertscore",
    "corpus_stats",
    "cosine",
    "cross_matrix",
    "default_normalizer",
    "evaluate",
    "export_finetune",
    "extract_embedrank",
    "extract_termfreq",
    "extract_yake",
    "fullmatch_f1",
    "generate_candidates",
    "is_stopword",
    "join_keyphrases",
    "load_corpus",
    "load_predictions",
    "normalize_phrase",
    "parse_causal_line",
    "phrase_appears_in",
    "render_report",
    "rouge1",
    "split_sentences",
    "stem_ru",
    "tokenize",
    "truncate_topk",
    "yake_term_features",
]
