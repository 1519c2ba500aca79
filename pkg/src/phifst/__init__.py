"""Weighted transducers with failure (phi) transitions, phi-transduction via
the Gallic semiring, and a MaxMatch tokenizer built on it."""

from .compose import ComposeConfig, ComposeStats, MatchPath, PhiCycleError, compose, phi_final_weight, phi_lookup
from .fst import (
    EPSILON,
    PHI_SYMBOL,
    Arc,
    Fst,
    FstError,
    SymbolTable,
    accepted_strings,
    linear_acceptor,
    read_text,
    to_dot,
    weighted_language,
    write_text,
)
from .maxmatch import (
    MaxMatchTokenizer,
    MaxMatchTrie,
    Vocabulary,
    VocabularyError,
    build_trie,
    compile_transducer,
    greedy_reference_tokenize,
    load_vocab,
    tokenize,
    tokenize_language,
)
from .phi_transduce import build_output_eraser, naive_phi_compose, phi_compose, phi_compose_stages
from .semiring import GallicWeight, StringWeight, TropicalWeight, commutes_with_all, plus, times
from .transforms import (
    ProjectSide,
    connect,
    determinize,
    factor_weights,
    from_gallic,
    minimize,
    project,
    rm_epsilon,
    to_gallic,
)

__version__ = "0.1.0"
