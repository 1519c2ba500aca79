import random
import string

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_greedy, random_text, random_vocab
from phifst.compose import PhiCycleError, phi_lookup
from phifst.fst import EPSILON, Fst, SymbolTable, accepted_strings, linear_acceptor
from phifst.maxmatch import (
    MaxMatchTokenizer,
    VocabularyError,
    build_trie,
    compile_transducer,
    format_tokens,
    greedy_reference_tokenize,
    load_vocab,
    make_symbols,
    tokenize,
    tokenize_language,
)

GAMMA = ["a", "b", "ab", "aaaba"]


@pytest.fixture(scope="module")
def tok():
    return MaxMatchTokenizer.from_tokens(GAMMA)


class TestVocab:
    def test_load(self):
        v = load_vocab("a\nb\nab\naaaba\n")
        assert v.tokens == frozenset(GAMMA) and v.sigma == {"a", "b"}

    def test_bikes(self):
        v = load_vocab(["bike", "s", "b", "i", "k", "e"])
        assert greedy_reference_tokenize("bikes", v) == ["bike", "s"]

    def test_missing_char(self):
        with pytest.raises(VocabularyError, match="'a'"):
            load_vocab(["ab", "b"])

    def test_duplicate(self):
        with pytest.raises(VocabularyError, match="duplicate"):
            load_vocab(["a", "a"])

    def test_comments_and_blanks(self):
        v = load_vocab(["# comment", "", "a", "  b  "])
        assert v.tokens == {"a", "b"}

    def test_reserved_symbol(self):
        with pytest.raises(VocabularyError):
            load_vocab(["<phi>"])


class TestTrie:
    def test_pops_and_fail(self):
        trie = build_trie(load_vocab(GAMMA))
        assert set(trie.nodes) == {"", "a", "aa", "aaa", "aaab", "aaaba", "b", "ab"}
        expect = {
            "a": (("a",), ""),
            "aa": (("a",), "a"),
            "aaa": (("a",), "aa"),
            "aaab": (("a", "a"), "ab"),
            "aaaba": (("aaaba",), ""),
            "ab": (("ab",), ""),
            "b": (("b",), ""),
        }
        for s, (pops, fail) in expect.items():
            node = trie.node(s)
            assert node.pops == pops and node.fail.string == fail, s
        assert trie.root.fail is None

    def test_failure_reduces_length(self):
        rng = random.Random(0)
        for _ in range(50):
            trie = build_trie(load_vocab(random_vocab(rng, "abc")))
            for s, node in trie.nodes.items():
                if s:
                    assert len(node.fail.string) < len(s)
                    assert "".join(node.pops) + node.fail.string == s


class TestTransducer:
    def test_shape(self, tok):
        f = tok.transducer
        assert f.start == 0 and list(f.finals()) == [0]
        assert f.num_states() == 9  # 8 trie nodes plus one chain state
        phi_arcs = [a for s in f.states() for a in f.arcs(s) if a.ilabel == tok.phi]
        assert len(phi_arcs) == 7

    def test_multi_pop_chain(self, tok):
        f, syms = tok.transducer, tok.syms
        s = 0
        for c in "aaab":
            s = next(a.nextstate for a in f.arcs(s) if a.ilabel == syms.find(c))
        (phi_arc,) = [a for a in f.arcs(s) if a.ilabel == tok.phi]
        assert phi_arc.olabel == syms.find("a")
        (eps_arc,) = f.arcs(phi_arc.nextstate)
        assert (eps_arc.ilabel, eps_arc.olabel) == (EPSILON, syms.find("a"))
        # lands on node "ab"
        ab = next(a.nextstate for a in f.arcs(next(a.nextstate for a in f.arcs(0) if a.ilabel == syms.find("a")))
                  if a.ilabel == syms.find("b"))
        assert eps_arc.nextstate == ab

    def test_single_chars(self):
        t = MaxMatchTokenizer.from_tokens(["a", "b", "c"])
        f = t.transducer
        assert f.num_states() == 4
        for s in (1, 2, 3):
            (phi_arc,) = [a for a in f.arcs(s) if a.ilabel == t.phi]
            assert phi_arc.nextstate == 0
            assert t.syms.symbol(phi_arc.olabel) == t.syms.symbol(next(a.ilabel for a in f.arcs(0) if a.nextstate == s))

    def test_missing_symbol(self):
        v = load_vocab(GAMMA)
        with pytest.raises(Exception):
            compile_transducer(build_trie(v), SymbolTable.with_phi(["a", "b"]))

    def test_no_phi_cycles(self):
        rng = random.Random(1)
        for _ in range(30):
            t = MaxMatchTokenizer.from_tokens(random_vocab(rng, "abc"))
            for s in t.transducer.states():
                for c in "abc":
                    try:
                        phi_lookup(t.transducer, s, t.syms.find(c), t.phi)
                    except PhiCycleError:  # pragma: no cover
                        pytest.fail("phi cycle")


class TestTokenize:
    @pytest.mark.parametrize(
        "text, expected",
        [("aaab", ["a", "a", "ab"]), ("", []), ("b", ["b"]), ("a", ["a"]), ("aaaba", ["aaaba"])],
    )
    def test_examples(self, tok, text, expected):
        assert tok.tokenize(text) == expected
        assert greedy_reference_tokenize(text, tok.vocab) == expected

    def test_brute_oracle_agrees_on_examples(self):
        assert brute_greedy("aaab", GAMMA) == ["a", "a", "ab"]

    def test_module_level(self):
        assert tokenize("bikes", load_vocab(["bike", "s", "b", "i", "k", "e"])) == ["bike", "s"]

    def test_unknown_char(self, tok):
        with pytest.raises(VocabularyError):
            tok.tokenize("abz")
        with pytest.raises(VocabularyError):
            greedy_reference_tokenize("z", tok.vocab)

    @pytest.mark.parametrize("seed", range(100))
    def test_random_against_greedy(self, seed):
        rng = random.Random(seed)
        alphabet = rng.choice(["ab", "abc"])
        vocab = random_vocab(rng, alphabet)
        t = MaxMatchTokenizer.from_tokens(vocab)
        text = random_text(rng, alphabet)
        got = t.tokenize(text)
        assert got == brute_greedy(text, vocab)
        assert "".join(got) == text

    def test_format(self):
        assert format_tokens(["a", "a", "ab"]) == "[a] [a] [ab]"


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.text(alphabet="abc", min_size=2, max_size=5), max_size=8),
    st.text(alphabet="abc", max_size=15),
)
def test_greedy_property(extra, text):
    vocab = sorted(set(extra) | set("abc"))
    assert MaxMatchTokenizer.from_tokens(vocab).tokenize(text) == brute_greedy(text, vocab)


class TestLanguage:
    def _lang(self, tok, out):
        return {tuple(tok.syms.symbol(x) for x in seq) for seq in accepted_strings(out, 8)}

    def test_single_string(self, tok):
        out = tok.tokenize_language(linear_acceptor("aaab", tok.syms))
        assert self._lang(tok, out) == {("a", "a", "ab")}

    def test_single_chars(self, tok):
        out = tok.tokenize_language(tok.pattern(["a", "b"]))
        assert self._lang(tok, out) == {("a",), ("b",)}

    def test_two_strings(self, tok):
        out = tok.tokenize_language(tok.pattern(["ab", "b"]))
        assert self._lang(tok, out) == {("ab",), ("b",)}

    def test_module_level_with_shared_symbols(self):
        syms = SymbolTable.with_phi(["a", "b"])
        pattern = linear_acceptor("aaab", syms)
        out = tokenize_language(pattern, load_vocab(GAMMA), syms)
        assert {tuple(syms.symbol(x) for x in s) for s in accepted_strings(out, 5)} == {("a", "a", "ab")}

    def test_cyclic_pattern(self, tok):
        # (ab)* tokenizes every member to repeated [ab].
        a, b = tok.syms.find("a"), tok.syms.find("b")
        p = Fst()
        p.add_states(2)
        p.set_start(0)
        p.set_final(0)
        p.add_arc(0, a, a, None, 1)
        p.add_arc(1, b, b, None, 0)
        got = self._lang(tok, tok.tokenize_language(p))
        assert got == {("ab",) * n for n in range(9)}

    @pytest.mark.parametrize("seed", range(20))
    def test_random_string_sets(self, seed):
        rng = random.Random(seed)
        vocab = random_vocab(rng, "ab")
        t = MaxMatchTokenizer.from_tokens(vocab)
        texts = {random_text(rng, "ab", 8) for _ in range(4)}
        out = t.tokenize_language(t.pattern(sorted(texts)))
        got = {tuple(t.syms.symbol(x) for x in s) for s in accepted_strings(out, 8)}
        assert got == {tuple(brute_greedy(x, vocab)) for x in texts}


def test_make_symbols_reuses_char_ids():
    syms = make_symbols(load_vocab(GAMMA))
    assert syms.find("a") < syms.find("ab")
    assert list(string.ascii_lowercase[:2]) == [syms.symbol(2), syms.symbol(3)]
