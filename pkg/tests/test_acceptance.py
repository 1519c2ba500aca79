"""Exit criteria for the package.

Each test is one criterion. It checks the exact expected outcome and its
wall-clock budget, then records a one-line summary that the terminal report
prints as ``criterion N: PASS|FAIL ...``.
"""

import math
import random
import statistics
import time

import pytest

from oracles import (
    brute_greedy,
    expand_phi,
    random_acceptor,
    random_phi_transducer,
    random_text,
    random_transducer,
    random_vocab,
)
from phifst.cli import main
from phifst.compose import ComposeConfig, ComposeStats, compose
from phifst.demos import a_acceptor, abc_symbols, language, phi_cb_transducer, phi_sigma_acceptor
from phifst.fst import PHI_SYMBOL, SymbolTable, accepted_strings, read_text, weighted_language
from phifst.maxmatch import MaxMatchTokenizer, greedy_reference_tokenize, load_vocab
from phifst.phi_transduce import STAGES, naive_phi_compose, phi_compose
from phifst.semiring import GallicWeight, StringWeight, TropicalWeight, commutes_with_all, plus, times
from phifst.transforms import factor_weights, from_gallic, is_trim, to_gallic

pytestmark = pytest.mark.acceptance


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@pytest.fixture
def criterion(record_property):
    def note(n, summary):
        record_property("criterion", n)
        record_property("summary", summary)

    return note


def test_phi_automata_language(criterion):
    with Clock() as c:
        syms = abc_symbols()
        out = compose(a_acceptor(syms), phi_sigma_acceptor(syms), ComposeConfig(phi_label=syms.find(PHI_SYMBOL)))
        got = language(out, syms, 3)
    criterion(1, f"phi automata composition gives {sorted(got)} in {c.elapsed:.3f}s")
    assert got == {("a",)}
    assert c.elapsed < 1


def test_gallic_transduction_of_toy_pair(criterion):
    with Clock() as c:
        syms = abc_symbols()
        got = language(phi_compose(a_acceptor(syms), phi_cb_transducer(syms), syms, syms.find(PHI_SYMBOL)), syms)
    criterion(2, f"phi_compose gives {sorted(got)} in {c.elapsed:.3f}s")
    assert got == {("c", "b")}
    assert c.elapsed < 1


def test_naive_transduction_drops_phi_output(criterion):
    with Clock() as c:
        syms = abc_symbols()
        got = language(naive_phi_compose(a_acceptor(syms), phi_cb_transducer(syms), syms, syms.find(PHI_SYMBOL)), syms)
    criterion(3, f"naive_phi_compose gives {sorted(got)} in {c.elapsed:.3f}s")
    assert got == {("b",)}
    assert c.elapsed < 1


def test_maxmatch_walkthrough(criterion, tmp_path, capsys):
    vocab_file = tmp_path / "vocab.txt"
    vocab_file.write_text("a\nb\nab\naaaba\n")
    machine = tmp_path / "mm.fst"
    dumps = tmp_path / "stages"
    with Clock() as c:
        assert main(["build", "--vocab", str(vocab_file), "--out", str(machine)]) == 0
        assert main(["transduce", "--text", "aaab", "--transducer", str(machine), "--dump-stages", str(dumps)]) == 0
        printed = capsys.readouterr().out
        syms = SymbolTable.with_phi()
        final = read_text(printed, syms)
        untrimmed = []
        for k, name in enumerate(STAGES, 1):
            text = (dumps / f"stage_{k}_{name}.fst").read_text()
            assert (dumps / f"stage_{k}_{name}.dot").exists()
            wtype = GallicWeight if name in {"pattern_gal", "transducer_gal", "composed_gal", "factored"} else TropicalWeight
            if not is_trim(read_text(text, syms, wtype)):
                untrimmed.append(name)
    expected = tuple(greedy_reference_tokenize("aaab", load_vocab(["a", "b", "ab", "aaaba"])))
    got = language(final, syms, 6)
    single_path = final.num_states() == 4 and final.num_arcs() == 3 and all(
        len(final.arcs(s)) <= 1 for s in final.states()
    )
    criterion(
        4,
        f"final machine {final.num_states()} states/{final.num_arcs()} arcs, language {sorted(got)}, "
        f"{len(STAGES)} stage dumps, untrimmed {untrimmed} in {c.elapsed:.3f}s",
    )
    assert expected == ("a", "a", "ab")
    assert got == {expected}
    assert single_path
    assert untrimmed == []
    assert c.elapsed < 1


def test_tokenize_matches_greedy(criterion):
    rng = random.Random(2024)
    cases = mismatches = 0
    with Clock() as c:
        for _ in range(500):
            alphabet = rng.choice(["ab", "abc"])
            vocab = random_vocab(rng, alphabet, max_tokens=12, max_token_len=5)
            text = random_text(rng, alphabet, max_len=20)
            tok = MaxMatchTokenizer.from_tokens(vocab)
            if tok.tokenize(text) != brute_greedy(text, vocab):
                mismatches += 1
            cases += 1
    criterion(5, f"{cases - mismatches}/{cases} tokenizations equal greedy in {c.elapsed:.2f}s")
    assert cases >= 500 and mismatches == 0
    assert c.elapsed < 30


def test_phi_expansion_equivalence(criterion):
    syms = SymbolTable.with_phi(["a", "b", "c", "x", "y"])
    phi = syms.find(PHI_SYMBOL)
    outputs = [syms.find(x) for x in "xya"]
    rng = random.Random(77)
    cases = mismatches = nonempty = 0
    with Clock() as c:
        for _ in range(120):
            sigma = [syms.find(x) for x in rng.choice(["ab", "abc"])]
            pattern = random_acceptor(rng, sigma, eps=True)
            machine = random_phi_transducer(rng, sigma, outputs, phi)
            got = accepted_strings(phi_compose(pattern, machine, syms, phi), 6)
            want = accepted_strings(compose(pattern, expand_phi(machine, sigma, phi)), 6)
            mismatches += got != want
            nonempty += bool(want)
            cases += 1
    criterion(6, f"{cases - mismatches}/{cases} pairs agree ({nonempty} non-empty) in {c.elapsed:.2f}s")
    assert cases >= 100 and mismatches == 0
    assert nonempty >= cases // 2
    assert c.elapsed < 60


def _tropical(rng):
    return TropicalWeight.zero() if rng.random() < 0.1 else TropicalWeight(rng.randint(0, 50))


def _string(rng):
    return StringWeight.zero() if rng.random() < 0.1 else _string_nonzero(rng)


def _gallic(rng):
    if rng.random() < 0.1:
        return GallicWeight.zero()
    return GallicWeight(_string_nonzero(rng), TropicalWeight(rng.randint(0, 50)))


def _string_nonzero(rng):
    return StringWeight(tuple(rng.choice("abc") for _ in range(rng.randint(0, 4))))


def _axiom_failures(kind, draw, rng, n):
    zero, one = kind.zero(), kind.one()
    failures = 0
    for _ in range(n):
        a, b, c = draw(rng), draw(rng), draw(rng)
        checks = [
            plus(plus(a, b), c) == plus(a, plus(b, c)),
            times(times(a, b), c) == times(a, times(b, c)),
            plus(a, zero) == a == plus(zero, a),
            times(a, one) == a == times(one, a),
            times(a, zero).is_zero() and times(zero, a).is_zero(),
            times(a, plus(b, c)) == plus(times(a, b), times(a, c)),
        ]
        if kind is StringWeight:
            checks.append(plus(a, a) == a)
        if kind is GallicWeight:
            e = GallicWeight(StringWeight.one(), _tropical(rng))
            if e.weight.is_zero():
                e = GallicWeight.zero()
            checks.append(times(e, a) == times(a, e) and commutes_with_all(e))
            checks.append(times(zero, a) == times(a, zero))
        failures += not all(checks)
    return failures


def test_semiring_axioms(criterion):
    rng = random.Random(99)
    n = 1000
    with Clock() as c:
        failures = {
            kind.__name__: _axiom_failures(kind, draw, rng, n)
            for kind, draw in [(TropicalWeight, _tropical), (StringWeight, _string), (GallicWeight, _gallic)]
        }
    criterion(7, f"{n} cases per semiring, failures {failures} in {c.elapsed:.2f}s")
    assert all(v == 0 for v in failures.values())
    assert c.elapsed < 10


def test_gallic_round_trip(criterion):
    syms = SymbolTable.with_phi(["a", "b", "c"])
    ilabels = [syms.find("a"), syms.find("b")]
    olabels = [syms.find(x) for x in "abc"]
    rng = random.Random(8)
    cases = mismatches = 0
    with Clock() as c:
        for _ in range(120):
            f = random_transducer(rng, ilabels, olabels)
            back = from_gallic(factor_weights(to_gallic(f)))
            mismatches += weighted_language(back, 5) != weighted_language(f, 5)
            cases += 1
    criterion(8, f"{cases - mismatches}/{cases} round trips preserve the weighted language in {c.elapsed:.2f}s")
    assert cases >= 100 and mismatches == 0
    assert c.elapsed < 30


def test_tokenize_work_is_linear(criterion):
    tok = MaxMatchTokenizer.from_tokens(["a", "b", "c", "ab", "aaaba", "abc", "bca", "cab", "abcab", "bb"])
    rng = random.Random(5)
    inputs = {
        "random": lambda n: "".join(rng.choice("abc") for _ in range(n)),
        "failure-heavy": lambda n: ("aaab" * n)[:n],
    }
    lengths = list(range(10, 1001, 45)) + [1000]
    fits = {}
    with Clock() as c:
        for name, make in inputs.items():
            work = []
            for n in lengths:
                stats = ComposeStats()
                tok.tokenize(make(n), stats=stats)
                work.append(stats.explored)
            r2 = statistics.correlation(lengths, work) ** 2
            loglog = statistics.linear_regression([math.log(n) for n in lengths], [math.log(w) for w in work]).slope
            fits[name] = (r2, loglog)
    shown = ", ".join(f"{k}: R^2={r2:.4f} log-log slope={s:.3f}" for k, (r2, s) in fits.items())
    criterion(9, f"{shown} in {c.elapsed:.2f}s")
    for r2, slope in fits.values():
        assert r2 >= 0.99
        assert slope < 1.5
    assert c.elapsed < 30


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
