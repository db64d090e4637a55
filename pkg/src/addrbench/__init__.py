"""Address parsing benchmark: error injection, dataset synthesis, rule and
perceptron parsers, and component-weighted evaluation."""
from .address import (
    COMPONENTS,
    OUTSIDE,
    TAGS,
    AddressRecord,
    ComponentLabel,
    IOBTag,
    LabeledSequence,
    extract_chunks,
    gold_labels,
    render,
    tokenize,
    validate_iob,
)
from .evaluation import DEFAULT_WEIGHTS, EvalReport, chunk_prf, evaluate_parser, parsing_score
from .exceptions import (
    AddrBenchError,
    AlignmentError,
    EmptyInput,
    EmptyRecord,
    IngestError,
    InvalidRecord,
    LexiconLoadError,
    ModelLoadError,
    NotApplicable,
    TrainDataError,
)
from .injector import AddressCorruptor, ErrorKind, InjectionOutcome, InjectionPolicy, corrupt, inject, typo
from .lexicons import LexiconSet, default_lexicons, load_lexicons
from .rule_parser import RuleConfig, RuleParser, parse_rule
from .tagger import PerceptronTagger, TaggerModel, TrainConfig, load_model, save_model, train, viterbi

__version__ = "0.1.0"

__all__ = [
    "COMPONENTS",
    "OUTSIDE",
    "TAGS",
    "AddressRecord",
    "ComponentLabel",
    "IOBTag",
    "LabeledSequence",
    "extract_chunks",
    "gold_labels",
    "render",
    "tokenize",
    "validate_iob",
    "DEFAULT_WEIGHTS",
    "EvalReport",
    "chunk_prf",
    "evaluate_parser",
    "parsing_score",
    "AddrBenchError",
    "AlignmentError",
    "EmptyInput",
    "EmptyRecord",
    "IngestError",
    "InvalidRecord",
    "LexiconLoadError",
    "ModelLoadError",
    "NotApplicable",
    "TrainDataError",
    "AddressCorruptor",
    "ErrorKind",
    "InjectionOutcome",
    "InjectionPolicy",
    "corrupt",
    "inject",
    "typo",
    "LexiconSet",
    "default_lexicons",
    "load_lexicons",
    "RuleConfig",
    "RuleParser",
    "parse_rule",
    "PerceptronTagger",
    "TaggerModel",
    "TrainConfig",
    "load_model",
    "save_model",
    "train",
    "viterbi",
]
