"""Latent-topic discovery in bag-of-codes corpora.

Thin Python surface over the C++ core: corpus assembly, collapsed Gibbs
fitting, Jensen-Shannon topic evaluation, and synthetic-corpus generation.
"""

from ._core import (
    ConfigError,
    CorpusStats,
    DataError,
    EventLog,
    GeneratorConfig,
    GroundTruth,
    Hyperparameters,
    PatientConditionsCorpus,
    SyntheticCorpus,
    TightnessReport,
    TightnessRow,
    TopicMatching,
    TopicModel,
    Vocabulary,
    align_to_vocabulary,
    build_matrix,
    build_vocabulary,
    corpus_stats,
    distinctiveness_summary,
    fit,
    generate_corpus,
    ingest_events_file,
    ingest_events_text,
    inter_topic_distances,
    jsd,
    make_ground_truth_topics,
    match_topics,
    tightness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
