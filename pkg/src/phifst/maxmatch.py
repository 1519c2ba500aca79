"""MaxMatch (WordPiece-style greedy longest-match) tokenization.

The vocabulary is compiled into a trie whose nodes also carry a failure
link and the tokens to emit ("pops") when the failure link is taken.  That
trie becomes a transducer: child edges ``c:<epsilon>``, and per node a
``<phi>:t1`` arc followed by ``<epsilon>:t2 ... <epsilon>:tk`` leading to the
failure node.  Composing a string acceptor with it via ``phi_compose``
yields the greedy tokenization.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .compose import ComposeStats
from .fst import EPSILON, PHI_SYMBOL, Fst, FstError, SymbolTable, linear_acceptor
from .phi_transduce import phi_compose
from .semiring import TropicalWeight


class VocabularyError(FstError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    tokens: frozenset[str]
    sigma: frozenset[str]

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> Vocabulary:
        return load_vocab(tokens)

    def __contains__(self, token: object) -> bool:
        return token in self.tokens

    def __len__(self) -> int:
        return len(self.tokens)


def load_vocab(lines: Iterable[str] | str) -> Vocabulary:
    """One token per line; blank lines and ``#`` comments are skipped.

    Every character used by a token must itself be a token, otherwise some
    inputs could not be tokenized.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    tokens: list[str] = []
    seen: set[str] = set()
    for raw in lines:
        token = raw.strip()
        if not token or token.startswith("#"):
            continue
        if token in seen:
            raise VocabularyError(f"duplicate token {token!r}")
        if token in (PHI_SYMBOL, "<epsilon>") or any(c.isspace() for c in token):
            raise VocabularyError(f"invalid token {token!r}")
        seen.add(token)
        tokens.append(token)
    sigma = {c for t in tokens for c in t}
    for c in sorted(sigma):
        if c not in seen:
            raise VocabularyError(f"character {c!r} is not in the vocabulary as a token")
    return Vocabulary(frozenset(tokens), frozenset(sigma))


@dataclass
class TrieNode:
    string: str
    children: dict[str, TrieNode] = field(default_factory=dict)
    is_token: bool = False
    pops: tuple[str, ...] = ()
    fail: TrieNode | None = None

    @property
    def depth(self) -> int:
        return len(self.string)


@dataclass
class MaxMatchTrie:
    root: TrieNode
    nodes: dict[str, TrieNode]

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, string: str) -> TrieNode:
        return self.nodes[string]


def _longest_token_prefix(text: str, vocab: Vocabulary) -> str:
    for n in range(len(text), 0, -1):
        if text[:n] in vocab.tokens:
            return text[:n]
    raise VocabularyError(f"no token is a prefix of {text!r}")


def build_trie(vocab: Vocabulary) -> MaxMatchTrie:
    """Prefix trie of the vocabulary with pops and failure links.

    For node ``s``: pop the longest token prefix of what is left until the
    remainder is itself a trie node; that node is the failure target.
    """
    root = TrieNode("")
    nodes = {"": root}
    for token in sorted(vocab.tokens):
        node = root
        for c in token:
            if c not in node.children:
                child = TrieNode(node.string + c)
                node.children[c] = child
                nodes[child.string] = child
            node = node.children[c]
        node.is_token = True
    for string, node in nodes.items():
        if not string:
            continue
        rest = string
        pops = []
        while True:
            token = _longest_token_prefix(rest, vocab)
            pops.append(token)
            rest = rest[len(token):]
            if rest in nodes:
                break
        node.pops = tuple(pops)
        node.fail = nodes[rest]
    return MaxMatchTrie(root, nodes)


def make_symbols(vocab: Vocabulary, syms: SymbolTable | None = None) -> SymbolTable:
    """Add ``<phi>``, the characters and the tokens to ``syms`` (or a new table)."""
    syms = syms if syms is not None else SymbolTable.with_phi()
    syms.add_symbol(PHI_SYMBOL)
    for c in sorted(vocab.sigma):
        syms.add_symbol(c)
    for t in sorted(vocab.tokens, key=lambda t: (len(t), t)):
        syms.add_symbol(t)
    return syms


def compile_transducer(trie: MaxMatchTrie, syms: SymbolTable) -> Fst:
    """The MaxMatch phi-transducer; the root is the start and only final state."""
    phi = syms.find(PHI_SYMBOL)
    f = Fst(TropicalWeight)
    # Breadth-first numbering keeps the root at 0 and shallow nodes first.
    order: list[TrieNode] = []
    queue = deque([trie.root])
    while queue:
        node = queue.popleft()
        order.append(node)
        queue.extend(node.children[c] for c in sorted(node.children))
    ids = {node.string: f.add_state() for node in order}
    f.set_start(0)
    f.set_final(0)
    for node in order:
        s = ids[node.string]
        for c in sorted(node.children):
            f.add_arc(s, syms.find(c), EPSILON, None, ids[node.children[c].string])
        if node.fail is None:
            continue
        labels = [syms.find(t) for t in node.pops]
        src, ilabel = s, phi
        for i, label in enumerate(labels):
            dst = ids[node.fail.string] if i == len(labels) - 1 else f.add_state()
            f.add_arc(src, ilabel, label, None, dst)
            src, ilabel = dst, EPSILON
    return f


def greedy_reference_tokenize(text: str, vocab: Vocabulary) -> list[str]:
    """Plain greedy longest-prefix tokenization."""
    for c in text:
        if c not in vocab.sigma:
            raise VocabularyError(f"character {c!r} is outside the vocabulary alphabet")
    out = []
    i = 0
    while i < len(text):
        best = 0
        for j in range(i + 1, len(text) + 1):
            if text[i:j] in vocab.tokens:
                best = j
        out.append(text[i:best])
        i = best
    return out


def single_path_labels(f: Fst) -> list[int]:
    """Labels along the only successful path of a deterministic acceptor."""
    if f.start is None:
        raise FstError("machine accepts nothing")
    labels = []
    s = f.start
    seen = {s}
    while True:
        arcs = f.arcs(s)
        if f.is_final(s):
            if arcs:
                raise FstError("machine accepts more than one sequence")
            return labels
        if len(arcs) != 1:
            raise FstError("machine accepts more than one sequence")
        labels.append(arcs[0].ilabel)
        s = arcs[0].nextstate
        if s in seen:
            raise FstError("machine is cyclic")
        seen.add(s)


class MaxMatchTokenizer:
    """Vocabulary, trie, symbols and compiled transducer bundled together."""

    def __init__(self, vocab: Vocabulary, syms: SymbolTable | None = None) -> None:
        self.vocab = vocab
        self.syms = make_symbols(vocab, syms)
        self.phi = self.syms.find(PHI_SYMBOL)
        self.trie = build_trie(vocab)
        self.transducer = compile_transducer(self.trie, self.syms)

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> MaxMatchTokenizer:
        return cls(load_vocab(tokens))

    def tokenize(self, text: str, stats: ComposeStats | None = None) -> list[str]:
        for c in text:
            if c not in self.vocab.sigma:
                raise VocabularyError(f"character {c!r} is outside the vocabulary alphabet")
        pattern = linear_acceptor(text, self.syms)
        result = phi_compose(pattern, self.transducer, self.syms, self.phi, stats)
        return [self.syms.symbol(x) for x in single_path_labels(result)]

    def tokenize_language(self, pattern: Fst) -> Fst:
        """Token acceptor holding the greedy tokenization of every string
        ``pattern`` accepts.  ``pattern`` must use ``self.syms``."""
        return phi_compose(pattern, self.transducer, self.syms, self.phi)

    def pattern(self, strings: Sequence[str]) -> Fst:
        """Acceptor of a finite set of strings over the vocabulary alphabet."""
        f = Fst(TropicalWeight)
        root = f.add_state()
        f.set_start(root)
        for text in strings:
            s = root
            for c in text:
                nxt = f.add_state()
                label = self.syms.find(c)
                f.add_arc(s, label, label, None, nxt)
                s = nxt
            f.set_final(s)
        return f


def tokenize(text: str, vocab: Vocabulary) -> list[str]:
    return MaxMatchTokenizer(vocab).tokenize(text)


def tokenize_language(pattern: Fst, vocab: Vocabulary, syms: SymbolTable) -> Fst:
    """``pattern``'s labels must come from ``syms``; missing vocabulary
    symbols are added to it."""
    return MaxMatchTokenizer(vocab, syms).tokenize_language(pattern)


def format_tokens(tokens: Sequence[str]) -> str:
    return " ".join(f"[{t}]" for t in tokens)
