"""Command-line entry point: ``phifst <subcommand>``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from .compose import ComposeConfig, compose
from .demos import DEMOS, render_language
from .fst import PHI_SYMBOL, FstError, SymbolTable, linear_acceptor, read_text, to_dot, write_text
from .maxmatch import MaxMatchTokenizer, format_tokens, load_vocab
from .phi_transduce import naive_phi_compose, phi_compose_stages


def _read_fst(path: str, syms: SymbolTable):
    return read_text(Path(path).read_text(encoding="utf-8").splitlines(), syms)


def _emit(lines: list[str]) -> None:
    for line in lines:
        print(line)


def _tokenizer(path: str) -> MaxMatchTokenizer:
    return MaxMatchTokenizer(load_vocab(Path(path).read_text(encoding="utf-8")))


def cmd_build(args: argparse.Namespace) -> int:
    tok = _tokenizer(args.vocab)
    text = "\n".join(write_text(tok.transducer, tok.syms)) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_tokenize(args: argparse.Namespace) -> int:
    tok = _tokenizer(args.vocab)
    texts = [args.text] if args.text is not None else [line.rstrip("\n") for line in sys.stdin]
    for text in texts:
        print(format_tokens(tok.tokenize(text)))
    return 0


def cmd_transduce(args: argparse.Namespace) -> int:
    syms = SymbolTable.with_phi()
    transducer = _read_fst(args.transducer, syms)
    if args.pattern is not None:
        pattern = _read_fst(args.pattern, syms)
    else:
        pattern = linear_acceptor(args.text, syms)
    phi = syms.find(args.phi) if args.phi in syms else syms.add_symbol(args.phi)
    if args.naive:
        _emit(write_text(naive_phi_compose(pattern, transducer, syms, phi), syms))
        return 0
    stages = phi_compose_stages(pattern, transducer, syms, phi)
    if args.dump_stages:
        out_dir = Path(args.dump_stages)
        out_dir.mkdir(parents=True, exist_ok=True)
        for k, (name, f) in enumerate(stages.items(), 1):
            stem = out_dir / f"stage_{k}_{name}"
            stem.with_suffix(".fst").write_text("\n".join(write_text(f, syms)) + "\n", encoding="utf-8")
            stem.with_suffix(".dot").write_text(to_dot(f, syms, name), encoding="utf-8")
    _emit(write_text(stages["det"], syms))
    return 0


def cmd_compose(args: argparse.Namespace) -> int:
    syms = SymbolTable.with_phi()
    left = _read_fst(args.left, syms)
    right = _read_fst(args.right, syms)
    cfg = ComposeConfig(phi_label=syms.find(args.phi) if args.phi else None)
    _emit(write_text(compose(left, right, cfg), syms))
    return 0


def cmd_print(args: argparse.Namespace) -> int:
    syms = SymbolTable.with_phi()
    _emit(write_text(_read_fst(args.fst, syms), syms))
    return 0


def cmd_draw(args: argparse.Namespace) -> int:
    syms = SymbolTable.with_phi()
    sys.stdout.write(to_dot(_read_fst(args.fst, syms), syms, Path(args.fst).stem))
    return 0


def cmd_demo(args: argparse.Namespace) -> int:
    names = list(DEMOS) if args.name == "all" else [args.name]
    ok = True
    for name in names:
        result = DEMOS[name]()
        status = "PASS" if result.passed else "FAIL"
        ok &= result.passed
        print(f"{name}: observed {render_language(result.observed)} "
              f"expected {render_language(result.expected)} {status}")
        if result.notes:
            print(f"  {result.notes}")
    return 0 if ok else 1


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phifst", description="Phi-transductions and MaxMatch tokenization.")
    p.add_argument("-v", "--verbose", action="store_true", help="log per-stage machine sizes")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("build", help="compile a vocabulary into a MaxMatch transducer")
    s.add_argument("--vocab", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("tokenize", help="tokenize text with a vocabulary")
    s.add_argument("--vocab", required=True)
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--text")
    src.add_argument("--stdin", action="store_true")
    s.set_defaults(func=cmd_tokenize)

    s = sub.add_parser("transduce", help="phi-transduce a pattern through a transducer")
    pat = s.add_mutually_exclusive_group(required=True)
    pat.add_argument("--pattern", help="pattern acceptor in text format")
    pat.add_argument("--text", help="literal input string, one symbol per character")
    s.add_argument("--transducer", required=True)
    s.add_argument("--phi", default=PHI_SYMBOL)
    s.add_argument("--dump-stages", metavar="DIR")
    s.add_argument("--naive", action="store_true", help="use the naive (incorrect) method")
    s.set_defaults(func=cmd_transduce)

    s = sub.add_parser("compose", help="compose two machines")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--phi", help="failure symbol on the right machine")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("print", help="normalize and print a text-format machine")
    s.add_argument("fst")
    s.set_defaults(func=cmd_print)

    s = sub.add_parser("draw", help="write a machine as Graphviz DOT")
    s.add_argument("fst")
    s.set_defaults(func=cmd_draw)

    s = sub.add_parser("demo", help="reproduce the worked examples")
    s.add_argument("name", choices=[*DEMOS, "all"])
    s.set_defaults(func=cmd_demo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (FstError, OSError) as e:
        print(f"phifst: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
