"""FST data model, symbol tables, AT&T text format and DOT export."""

from __future__ import annotations

from collections import deque
from typing import Any, Iterable, Iterator, NamedTuple, Sequence

from .semiring import TropicalWeight, Weight

EPSILON = 0
EPSILON_SYMBOL = "<epsilon>"
PHI_SYMBOL = "<phi>"


class FstError(Exception):
    """Raised for malformed machines or invalid operation inputs."""


class SymbolTable:
    """Bijection between symbol strings and integer labels; 0 is epsilon."""

    def __init__(self, symbols: Iterable[str] = ()) -> None:
        self._ids: dict[str, int] = {EPSILON_SYMBOL: EPSILON}
        self._symbols: list[str] = [EPSILON_SYMBOL]
        for sym in symbols:
            self.add_symbol(sym)

    @classmethod
    def with_phi(cls, symbols: Iterable[str] = ()) -> SymbolTable:
        """Table holding ``<epsilon>``, ``<phi>`` and then ``symbols``."""
        return cls([PHI_SYMBOL, *symbols])

    def add_symbol(self, symbol: str) -> int:
        if not symbol or any(c.isspace() for c in symbol):
            raise FstError(f"invalid symbol {symbol!r}")
        if symbol in self._ids:
            return self._ids[symbol]
        self._ids[symbol] = len(self._symbols)
        self._symbols.append(symbol)
        return self._ids[symbol]

    def find(self, symbol: str) -> int:
        try:
            return self._ids[symbol]
        except KeyError:
            raise FstError(f"unknown symbol {symbol!r}") from None

    def symbol(self, label: int) -> str:
        if not 0 <= label < len(self._symbols):
            raise FstError(f"unknown label {label}")
        return self._symbols[label]

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._ids

    def __len__(self) -> int:
        return len(self._symbols)

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(enumerate(self._symbols))

    def labels(self) -> list[int]:
        return list(range(len(self._symbols)))


class Arc(NamedTuple):
    ilabel: int
    olabel: int
    weight: Any
    nextstate: int


class Fst:
    """Mutable weighted transducer with contiguous integer states.

    Final weights live in a dict; a state is non-final exactly when it has
    no entry, so semiring zero is never stored.
    """

    def __init__(self, weight_type: Any = TropicalWeight) -> None:
        self.weight_type = weight_type
        self._arcs: list[list[Arc]] = []
        self._finals: dict[int, Weight] = {}
        self._start: int | None = None

    # -- construction --------------------------------------------------

    def add_state(self) -> int:
        self._arcs.append([])
        return len(self._arcs) - 1

    def add_states(self, n: int) -> list[int]:
        return [self.add_state() for _ in range(n)]

    def _check_state(self, state: int) -> None:
        if not isinstance(state, int) or not 0 <= state < len(self._arcs):
            raise FstError(f"invalid state id {state!r}")

    def _check_weight(self, weight: Any) -> None:
        if not isinstance(weight, self.weight_type):
            raise FstError(
                f"expected {self.weight_type.__name__}, got {type(weight).__name__}"
            )

    def set_start(self, state: int) -> None:
        self._check_state(state)
        self._start = state

    def set_final(self, state: int, weight: Weight | None = None) -> None:
        self._check_state(state)
        if weight is None:
            weight = self.weight_type.one()
        self._check_weight(weight)
        if weight.is_zero():
            self._finals.pop(state, None)
        else:
            self._finals[state] = weight

    def add_arc(
        self,
        state: int,
        ilabel: int | Arc,
        olabel: int | None = None,
        weight: Weight | None = None,
        nextstate: int | None = None,
    ) -> None:
        """Add an arc, given either as an ``Arc`` or as its four fields.

        A ``None`` weight means one.
        """
        if isinstance(ilabel, Arc):
            arc = ilabel
        else:
            if olabel is None or nextstate is None:
                raise FstError("add_arc needs ilabel, olabel and nextstate")
            w = self.weight_type.one() if weight is None else weight
            arc = Arc(ilabel, olabel, w, nextstate)
        self._check_state(state)
        self._check_state(arc.nextstate)
        self._check_weight(arc.weight)
        if arc.ilabel < 0 or arc.olabel < 0:
            raise FstError(f"negative label on arc {arc}")
        self._arcs[state].append(arc)

    def delete_arcs(self, state: int) -> None:
        self._check_state(state)
        self._arcs[state] = []

    # -- access --------------------------------------------------------

    @property
    def start(self) -> int | None:
        return self._start

    def num_states(self) -> int:
        return len(self._arcs)

    def states(self) -> range:
        return range(len(self._arcs))

    def arcs(self, state: int) -> list[Arc]:
        self._check_state(state)
        return self._arcs[state]

    def num_arcs(self, state: int | None = None) -> int:
        if state is None:
            return sum(len(a) for a in self._arcs)
        return len(self.arcs(state))

    def final(self, state: int) -> Weight:
        self._check_state(state)
        return self._finals.get(state, self.weight_type.zero())

    def is_final(self, state: int) -> bool:
        return state in self._finals

    def finals(self) -> dict[int, Weight]:
        return dict(self._finals)

    def is_acceptor(self) -> bool:
        return all(a.ilabel == a.olabel for arcs in self._arcs for a in arcs)

    def copy(self) -> Fst:
        out = Fst(self.weight_type)
        out._arcs = [list(a) for a in self._arcs]
        out._finals = dict(self._finals)
        out._start = self._start
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Fst):
            return NotImplemented
        return (
            self.weight_type is other.weight_type
            and self._start == other._start
            and self._arcs == other._arcs
            and self._finals == other._finals
        )

    def __repr__(self) -> str:
        return (
            f"<Fst {self.weight_type.name} states={self.num_states()} "
            f"arcs={self.num_arcs()} start={self._start}>"
        )


def linear_acceptor(text: Sequence[str], syms: SymbolTable, weight_type: Any = TropicalWeight) -> Fst:
    """Chain acceptor for a symbol sequence (a ``str`` is split into characters)."""
    labels = [syms.find(sym) for sym in text]
    f = Fst(weight_type)
    f.add_states(len(labels) + 1)
    f.set_start(0)
    for i, label in enumerate(labels):
        f.add_arc(i, label, label, None, i + 1)
    f.set_final(len(labels))
    return f


# -- text format -------------------------------------------------------


def _fields(line: str) -> list[str]:
    return line.split("\t") if "\t" in line else line.split()


def _parse_state(field: str, lineno: int) -> int:
    try:
        state = int(field)
    except ValueError:
        raise FstError(f"line {lineno}: bad state id {field!r}") from None
    if state < 0:
        raise FstError(f"line {lineno}: bad state id {field!r}")
    return state


def read_text(
    lines: Iterable[str] | str,
    syms: SymbolTable | None = None,
    weight_type: Any = TropicalWeight,
) -> Fst:
    """Parse AT&T text: ``src dst isym osym [weight]`` and ``state [weight]``.

    Unknown symbols are added to ``syms``.  The first line's source state is
    the start state.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    if syms is None:
        syms = SymbolTable.with_phi()
    arcs: list[tuple[int, Arc]] = []
    finals: list[tuple[int, Weight]] = []
    start = None
    max_state = -1
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        fields = _fields(line)
        try:
            if len(fields) in (4, 5):
                src = _parse_state(fields[0], lineno)
                dst = _parse_state(fields[1], lineno)
                w = weight_type.from_text(fields[4]) if len(fields) == 5 else weight_type.one()
                arc = Arc(syms.add_symbol(fields[2]), syms.add_symbol(fields[3]), w, dst)
                arcs.append((src, arc))
                max_state = max(max_state, src, dst)
            elif len(fields) in (1, 2):
                src = _parse_state(fields[0], lineno)
                w = weight_type.from_text(fields[1]) if len(fields) == 2 else weight_type.one()
                finals.append((src, w))
                max_state = max(max_state, src)
            else:
                raise FstError(f"line {lineno}: expected 1, 2, 4 or 5 fields, got {len(fields)}")
        except ValueError as e:
            raise FstError(f"line {lineno}: {e}") from None
        if start is None:
            start = src
    f = Fst(weight_type)
    f.add_states(max_state + 1)
    if start is not None:
        f.set_start(start)
    for src, arc in arcs:
        f.add_arc(src, arc)
    for state, w in finals:
        f.set_final(state, w)
    return f


def write_text(f: Fst, syms: SymbolTable) -> list[str]:
    """Serialize to AT&T text lines; the start state's lines come first."""
    if f.num_states() == 0 or f.start is None:
        return []
    one = f.weight_type.one()
    order = [f.start] + [s for s in f.states() if s != f.start]
    out = []
    for s in order:
        for arc in f.arcs(s):
            fields = [str(s), str(arc.nextstate), syms.symbol(arc.ilabel), syms.symbol(arc.olabel)]
            if arc.weight != one:
                fields.append(arc.weight.to_text())
            out.append("\t".join(fields))
        if f.is_final(s):
            w = f.final(s)
            out.append(str(s) if w == one else f"{s}\t{w.to_text()}")
    return out


# -- DOT ---------------------------------------------------------------


def _weight_label(w: Any, syms: SymbolTable | None) -> str:
    string = getattr(w, "string", None)
    if string is None:
        return w.to_text()
    if syms is not None and not string.infinite and string.labels:
        text = "_".join(syms.symbol(x) for x in string.labels)
    else:
        text = string.to_text()
    if not w.weight.is_zero() and w.weight.value == 0:
        return text
    return f"{text},{w.weight.to_text()}"


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(f: Fst, syms: SymbolTable | None = None, title: str = "FST") -> str:
    """Graphviz rendering.  Final states are double circles; weights other
    than one go in square brackets after a slash."""
    one = f.weight_type.one()

    def name(label: int) -> str:
        return syms.symbol(label) if syms is not None else str(label)

    lines = [f"digraph {_dot_quote(title)} {{", "  rankdir = LR;"]
    for s in f.states():
        shape = "doublecircle" if f.is_final(s) else "circle"
        label = str(s)
        if f.is_final(s) and f.final(s) != one:
            label += f"/[{_weight_label(f.final(s), syms)}]"
        style = ", style = bold" if s == f.start else ""
        lines.append(f"  {s} [label = {_dot_quote(label)}, shape = {shape}{style}];")
    for s in f.states():
        for arc in f.arcs(s):
            label = name(arc.ilabel)
            if arc.olabel != arc.ilabel:
                label += ":" + name(arc.olabel)
            if arc.weight != one:
                label += f"/[{_weight_label(arc.weight, syms)}]"
            lines.append(f"  {s} -> {arc.nextstate} [label = {_dot_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- enumeration -------------------------------------------------------


def accepted_strings(f: Fst, max_len: int, side: str = "output") -> set[tuple[int, ...]]:
    """Label sequences (epsilon-free, length <= ``max_len``) on ``side`` of
    some successful path, ignoring weights."""
    if f.start is None:
        return set()
    pick = (lambda a: a.olabel) if side == "output" else (lambda a: a.ilabel)
    seen = {(f.start, ())}
    queue = deque(seen)
    out: set[tuple[int, ...]] = set()
    while queue:
        s, seq = queue.popleft()
        if f.is_final(s):
            out.add(seq)
        for arc in f.arcs(s):
            label = pick(arc)
            nseq = seq if label == EPSILON else seq + (label,)
            if len(nseq) > max_len:
                continue
            key = (arc.nextstate, nseq)
            if key not in seen:
                seen.add(key)
                queue.append(key)
    return out


def weighted_language(f: Fst, max_len: int) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Weight]:
    """Map ``(input, output)`` label sequences of length <= ``max_len`` to the
    sum of their path weights.

    Right-distributive semirings are summed by relaxation, which tolerates
    cycles.  Otherwise paths are enumerated one by one (prefix sums would be
    wrong for the string semiring), and a cycle that consumes no labels
    raises ``FstError``.
    """
    if f.start is None:
        return {}
    if f.weight_type.right_distributive:
        return _language_relax(f, max_len)
    return _language_paths(f, max_len)


def _language_relax(f: Fst, max_len: int) -> dict:
    dist: dict[tuple, Weight] = {(f.start, (), ()): f.weight_type.one()}
    queue = deque(dist)
    queued = set(dist)
    while queue:
        key = queue.popleft()
        queued.discard(key)
        s, inp, out = key
        w = dist[key]
        for arc in f.arcs(s):
            ni = inp if arc.ilabel == EPSILON else inp + (arc.ilabel,)
            no = out if arc.olabel == EPSILON else out + (arc.olabel,)
            if len(ni) > max_len or len(no) > max_len:
                continue
            nkey = (arc.nextstate, ni, no)
            nw = w.times(arc.weight)
            old = dist.get(nkey)
            new = nw if old is None else old.plus(nw)
            if new != old:
                dist[nkey] = new
                if nkey not in queued:
                    queued.add(nkey)
                    queue.append(nkey)
    lang: dict = {}
    for (s, inp, out), w in dist.items():
        if f.is_final(s):
            term = w.times(f.final(s))
            lang[(inp, out)] = term if (inp, out) not in lang else lang[(inp, out)].plus(term)
    return lang


def _language_paths(f: Fst, max_len: int) -> dict:
    lang: dict = {}

    def visit(s: int, inp: tuple, out: tuple, w: Weight, on_path: set) -> None:
        if f.is_final(s):
            term = w.times(f.final(s))
            key = (inp, out)
            lang[key] = term if key not in lang else lang[key].plus(term)
        for arc in f.arcs(s):
            ni = inp if arc.ilabel == EPSILON else inp + (arc.ilabel,)
            no = out if arc.olabel == EPSILON else out + (arc.olabel,)
            if len(ni) > max_len or len(no) > max_len:
                continue
            cfg = (arc.nextstate, len(ni), len(no))
            if cfg in on_path:
                raise FstError("cycle without label consumption; path enumeration diverges")
            on_path.add(cfg)
            visit(arc.nextstate, ni, no, w.times(arc.weight), on_path)
            on_path.discard(cfg)

    visit(f.start, (), (), f.weight_type.one(), {(f.start, 0, 0)})
    return lang


def strings_to_symbols(seqs: Iterable[Sequence[int]], syms: SymbolTable) -> set[tuple[str, ...]]:
    return {tuple(syms.symbol(x) for x in seq) for seq in seqs}
