"""corpusforge: mine parallel text for low-resource translation.

The package covers the full path from raw documents to a filtered
parallel corpus plus a blind human-evaluation kit:

- ingest: HTML and plain-text extraction into Document records
- textprep: normalization, language ID, sentence splitting, dedup
- lexmodel: IBM-style lexical translation tables and cross-entropy
- miner: dual cross-entropy filtering over candidate sentence pairs
- augment: back-translation of monolingual target text
- evalkit / evalservice: blind Likert scoring, aggregation, HTTP API
- cli: the `corpusforge` pipeline command
"""

from importlib import resources as _resources

from .augment import (
    AugmentedCorpus,
    CommandTranslator,
    NaiveTranslator,
    Translator,
    back_translate,
    merge_corpora,
)
from .config import ConfigError, PipelineConfig, load_config
from .evalkit import (
    BlindItem,
    BlindSession,
    EvalItem,
    EvalStore,
    ReportCell,
    ScoreRecord,
    create_session,
    export_eval_dataset,
    format_cell,
    import_eval_dataset,
    permutation_for,
    render_report,
    unblind_and_aggregate,
)
from .ingest import Document, extract_text, load_corpus, read_documents, write_documents
from .langid import (
    LangPrediction,
    LangProfile,
    LanguageIdentifier,
    detect_language,
    script_census,
)
from .lexmodel import (
    LexTable,
    SentencePair,
    corpus_log_likelihood,
    cross_entropy,
    read_table,
    sentence_log_prob,
    tokens,
    train_model1,
    translate_naive,
    translate_text,
    write_table,
)
from .miner import (
    CandidatePair,
    FilterConfig,
    ScoredPair,
    dual_score,
    dual_score_value,
    generate_candidates,
    mine_corpus,
    read_corpus,
    write_corpus,
)
from .textprep import (
    MinHasher,
    Sentence,
    dedup_exact,
    dedup_near,
    jaccard,
    normalize,
    read_sentences,
    shingles,
    split_sentences,
    split_text,
    write_sentences,
)

__version__ = "0.1.0"


def toy_path():
    """Path of the bundled toy corpus (documents, seed table, config)."""
    return _resources.files("corpusforge") / "data" / "toy"


__all__ = [
    "AugmentedCorpus",
    "BlindItem",
    "BlindSession",
    "CandidatePair",
    "CommandTranslator",
    "ConfigError",
    "Document",
    "EvalItem",
    "EvalStore",
    "FilterConfig",
    "LangPrediction",
    "LangProfile",
    "LanguageIdentifier",
    "LexTable",
    "MinHasher",
    "NaiveTranslator",
    "PipelineConfig",
    "ReportCell",
    "ScoreRecord",
    "ScoredPair",
    "Sentence",
    "SentencePair",
    "Translator",
    "back_translate",
    "corpus_log_likelihood",
    "create_session",
    "cross_entropy",
    "dedup_exact",
    "dedup_near",
    "detect_language",
    "dual_score",
    "dual_score_value",
    "export_eval_dataset",
    "extract_text",
    "format_cell",
    "generate_candidates",
    "import_eval_dataset",
    "jaccard",
    "load_config",
    "load_corpus",
    "merge_corpora",
    "mine_corpus",
    "normalize",
    "permutation_for",
    "read_corpus",
    "read_documents",
    "read_sentences",
    "read_table",
    "render_report",
    "script_census",
    "sentence_log_prob",
    "shingles",
    "split_sentences",
    "split_text",
    "tokens",
    "toy_path",
    "train_model1",
    "translate_naive",
    "translate_text",
    "unblind_and_aggregate",
    "write_corpus",
    "write_documents",
    "write_sentences",
    "write_table",
    "__version__",
]
