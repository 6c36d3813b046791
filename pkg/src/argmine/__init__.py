"""Argument component identification and annotation analysis for
user-generated web discourse.

The toolkit covers the full pipeline: an annotated-corpus data model with a
canonical JSON file format, token-level majority-vote gold construction,
annotation agreement metrics (unitized alpha over token continua, Fleiss'
kappa, probabilistic confusion, readability correlates), sentence-level BIO
encoding with a measured approximation oracle, feature extraction with a
context window, a linear-chain sequence labeler, a persuasiveness document
classifier, and the all-data / in-domain / cross-domain evaluation scenarios.
"""

from .corpus import (
    AnnotationSet,
    ComponentSpan,
    Corpus,
    Document,
    Finding,
    Paragraph,
    PersuasiveLabel,
    Sentence,
    Token,
    UnresolvedRegion,
    build_document,
    build_gold_majority,
    corpus_statistics,
    parse_corpus,
    serialize_corpus,
    validate_corpus,
    validate_document,
)
from .encoding import (
    BIO_LABELS,
    SentenceLabeling,
    expand_to_tokens,
    oracle_eval,
    sentence_approximate,
    tokens_from_annotation,
)
from .agreement import (
    AgreementResult,
    Continuum,
    alpha_u,
    corpus_alpha_u,
    disagreement_correlates,
    fleiss_kappa,
    pearson_r,
    prob_confusion_matrix,
    readability,
)
from .features import (
    EmbeddingTable,
    FeatureConfig,
    LinguisticLayers,
    Resources,
    SentenceFeatureExtractor,
    Vocabulary,
    build_vocabulary,
    extract_features,
    load_embeddings,
    load_layers,
    sentence_embedding,
)
from .lda import GibbsLda
from .labeler import (
    ArgumentComponentLabeler,
    LinearChainModel,
    load_model,
    predict_document,
    save_model,
    viterbi_decode,
)
from .persuasiveness import PersuasivenessClassifier, crossval_persuasive, evaluate_docs
from .evaluation import (
    EvalCore,
    EvalReport,
    ExperimentResources,
    Segmentation,
    boundary_similarity,
    liddell_exact_test,
    run_crossdomain,
    run_crossval,
    run_indomain,
    segmentation_from_labels,
    token_macro_f1,
)
from .report import render_report

__version__ = "0.1.0"
