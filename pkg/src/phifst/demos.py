"""The small worked examples: phi composition of automata and transducers,
and the MaxMatch walkthrough for the vocabulary {a, b, ab, aaaba}."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .fst import PHI_SYMBOL, Fst, SymbolTable, accepted_strings, linear_acceptor
from .maxmatch import MaxMatchTokenizer, greedy_reference_tokenize
from .phi_transduce import naive_phi_compose, phi_compose, phi_compose_stages
from .compose import ComposeConfig, compose
from .transforms import determinize, is_trim, minimize

WALKTHROUGH_VOCAB = ("a", "b", "ab", "aaaba")
WALKTHROUGH_INPUT = "aaab"


def abc_symbols() -> SymbolTable:
    return SymbolTable.with_phi(["a", "b", "c"])


def a_acceptor(syms: SymbolTable) -> Fst:
    return linear_acceptor(["a"], syms)


def phi_sigma_acceptor(syms: SymbolTable) -> Fst:
    """Accepts any single symbol: ``<phi>`` from the start, then ``a``."""
    f = Fst()
    f.add_states(3)
    f.set_start(0)
    f.set_final(2)
    phi = syms.find(PHI_SYMBOL)
    f.add_arc(0, phi, phi, None, 1)
    f.add_arc(1, syms.find("a"), syms.find("a"), None, 2)
    return f


def phi_cb_transducer(syms: SymbolTable) -> Fst:
    """``<phi>:c`` then ``a:b``; maps ``a`` to ``c b`` under failure semantics."""
    f = Fst()
    f.add_states(3)
    f.set_start(0)
    f.set_final(2)
    f.add_arc(0, syms.find(PHI_SYMBOL), syms.find("c"), None, 1)
    f.add_arc(1, syms.find("a"), syms.find("b"), None, 2)
    return f


def language(f: Fst, syms: SymbolTable, max_len: int = 6) -> set[tuple[str, ...]]:
    return {tuple(syms.symbol(x) for x in seq) for seq in accepted_strings(f, max_len)}


def render_language(lang: set[tuple[str, ...]]) -> str:
    items = sorted("".join(f"[{t}]" for t in seq) for seq in lang)
    return "{" + ", ".join(items) + "}"


@dataclass
class DemoResult:
    name: str
    observed: set[tuple[str, ...]]
    expected: set[tuple[str, ...]]
    notes: str = ""

    @property
    def passed(self) -> bool:
        return self.observed == self.expected


def demo_phi_automata() -> DemoResult:
    syms = abc_symbols()
    composed = compose(a_acceptor(syms), phi_sigma_acceptor(syms), ComposeConfig(phi_label=syms.find(PHI_SYMBOL)))
    result = minimize(determinize(composed))
    return DemoResult("fig1-automata", language(result, syms, 3), {("a",)})


def demo_naive_transducer() -> DemoResult:
    syms = abc_symbols()
    result = naive_phi_compose(a_acceptor(syms), phi_cb_transducer(syms), syms, syms.find(PHI_SYMBOL))
    return DemoResult(
        "fig1-transducer-naive",
        language(result, syms),
        {("b",)},
        "the naive method drops the c on the phi arc; [b] is the known wrong answer",
    )


def demo_gallic_transducer() -> DemoResult:
    syms = abc_symbols()
    result = phi_compose(a_acceptor(syms), phi_cb_transducer(syms), syms, syms.find(PHI_SYMBOL))
    return DemoResult("fig1-transducer-correct", language(result, syms), {("c", "b")})


def demo_walkthrough() -> DemoResult:
    tok = MaxMatchTokenizer.from_tokens(WALKTHROUGH_VOCAB)
    stages = phi_compose_stages(linear_acceptor(WALKTHROUGH_INPUT, tok.syms), tok.transducer, tok.syms, tok.phi)
    det = stages["det"]
    expected = {tuple(greedy_reference_tokenize(WALKTHROUGH_INPUT, tok.vocab))}
    counts = ", ".join(f"{k}={v.num_states()}" for k, v in stages.items())
    trim = all(is_trim(f) for f in stages.values())
    shape_ok = det.num_states() == 4 and det.num_arcs() == 3
    observed = language(det, tok.syms)
    if not (trim and shape_ok):
        observed = observed | {("<malformed>",)}
    return DemoResult("fig2", observed, expected, f"stage states: {counts}; all trim: {trim}")


DEMOS: dict[str, Callable[[], DemoResult]] = {
    "fig1-automata": demo_phi_automata,
    "fig1-transducer-naive": demo_naive_transducer,
    "fig1-transducer-correct": demo_gallic_transducer,
    "fig2": demo_walkthrough,
}
