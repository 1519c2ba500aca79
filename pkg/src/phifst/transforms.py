"""Structural operations used by the phi-transduction pipeline."""

from __future__ import annotations

import enum
from collections import deque
from typing import Any, Iterable

from .fst import EPSILON, Arc, Fst, FstError
from .semiring import GallicWeight, StringWeight, TropicalWeight


class ProjectSide(enum.Enum):
    INPUT = "input"
    OUTPUT = "output"


def connect(f: Fst) -> Fst:
    """Keep only states that are both accessible and coaccessible."""
    out = Fst(f.weight_type)
    if f.start is None:
        return out
    access = {f.start}
    stack = [f.start]
    while stack:
        s = stack.pop()
        for arc in f.arcs(s):
            if arc.nextstate not in access:
                access.add(arc.nextstate)
                stack.append(arc.nextstate)
    preds: dict[int, set[int]] = {}
    for s in access:
        for arc in f.arcs(s):
            preds.setdefault(arc.nextstate, set()).add(s)
    coaccess = {s for s in access if f.is_final(s)}
    stack = list(coaccess)
    while stack:
        s = stack.pop()
        for p in preds.get(s, ()):
            if p not in coaccess:
                coaccess.add(p)
                stack.append(p)
    if f.start not in coaccess:
        return out
    keep = sorted(coaccess)
    renum = {s: out.add_state() for s in keep}
    out.set_start(renum[f.start])
    for s in keep:
        for arc in f.arcs(s):
            if arc.nextstate in renum:
                out.add_arc(renum[s], arc._replace(nextstate=renum[arc.nextstate]))
        if f.is_final(s):
            out.set_final(renum[s], f.final(s))
    return out


def is_trim(f: Fst) -> bool:
    return connect(f).num_states() == f.num_states()


def project(f: Fst, side: ProjectSide = ProjectSide.OUTPUT) -> Fst:
    side = ProjectSide(side)
    out = f.copy()
    for s in out.states():
        arcs = list(out.arcs(s))
        out.delete_arcs(s)
        for a in arcs:
            label = a.ilabel if side is ProjectSide.INPUT else a.olabel
            out.add_arc(s, a._replace(ilabel=label, olabel=label))
    return out


def _map(f: Fst, weight_type: Any, arc_fn, final_fn) -> Fst:
    out = Fst(weight_type)
    out.add_states(f.num_states())
    if f.start is not None:
        out.set_start(f.start)
    for s in f.states():
        for a in f.arcs(s):
            out.add_arc(s, arc_fn(a))
        if f.is_final(s):
            out.set_final(s, final_fn(f.final(s)))
    return out


def to_gallic(f: Fst) -> Fst:
    """Move each output label into the string half of a Gallic weight.

    ``i:o/w`` becomes ``i:i/(o, w)``; an epsilon output gives the empty
    string.
    """
    if f.weight_type is not TropicalWeight:
        raise FstError("to_gallic expects a tropical machine")

    def arc_fn(a: Arc) -> Arc:
        s = StringWeight(() if a.olabel == EPSILON else (a.olabel,))
        return Arc(a.ilabel, a.ilabel, GallicWeight(s, a.weight), a.nextstate)

    return _map(f, GallicWeight, arc_fn, lambda w: GallicWeight(StringWeight.one(), w))


def _short_string(w: GallicWeight, where: str) -> tuple:
    if w.string.infinite or len(w.string) > 1:
        raise FstError(
            f"{where} has string weight {w.string.to_text()}; run factor_weights first"
        )
    return w.string.labels


def from_gallic(f: Fst) -> Fst:
    """Inverse of ``to_gallic`` for machines whose string weights have at
    most one label.  A one-label final weight becomes an ``<epsilon>:label``
    arc into a fresh final state carrying the tropical part."""
    if f.weight_type is not GallicWeight:
        raise FstError("from_gallic expects a Gallic machine")
    out = Fst(TropicalWeight)
    out.add_states(f.num_states())
    if f.start is not None:
        out.set_start(f.start)
    for s in f.states():
        for a in f.arcs(s):
            labels = _short_string(a.weight, f"arc {s}->{a.nextstate}")
            olabel = labels[0] if labels else EPSILON
            out.add_arc(s, a.ilabel, olabel, a.weight.weight, a.nextstate)
        if f.is_final(s):
            w = f.final(s)
            labels = _short_string(w, f"final weight of state {s}")
            if labels:
                fresh = out.add_state()
                out.add_arc(s, EPSILON, labels[0], None, fresh)
                out.set_final(fresh, w.weight)
            else:
                out.set_final(s, w.weight)
    return out


def factor_weights(f: Fst) -> Fst:
    """Split every multi-label string weight into a chain of one-label arcs.

    The first arc of a chain keeps the original labels and the tropical
    weight; the continuation arcs are ``<epsilon>:<epsilon>``.
    """
    if f.weight_type is not GallicWeight:
        raise FstError("factor_weights expects a Gallic machine")
    out = Fst(GallicWeight)
    out.add_states(f.num_states())
    if f.start is not None:
        out.set_start(f.start)

    def chain(src: int, first: tuple[int, int], labels: tuple, w: TropicalWeight, dst: int | None) -> None:
        # dst None: end in a fresh final state.
        prev = src
        ilabel, olabel = first
        for i, label in enumerate(labels):
            last = i == len(labels) - 1
            if last and dst is not None:
                nxt = dst
            else:
                nxt = out.add_state()
            weight = GallicWeight(StringWeight((label,)), w if i == 0 else TropicalWeight.one())
            out.add_arc(prev, ilabel if i == 0 else EPSILON, olabel if i == 0 else EPSILON, weight, nxt)
            prev = nxt
        if dst is None:
            out.set_final(prev)

    for s in f.states():
        for a in f.arcs(s):
            st = a.weight.string
            if st.infinite or len(st) <= 1:
                out.add_arc(s, a)
            else:
                chain(s, (a.ilabel, a.olabel), st.labels, a.weight.weight, a.nextstate)
        if f.is_final(s):
            w = f.final(s)
            if w.string.infinite or len(w.string) <= 1:
                out.set_final(s, w)
            else:
                chain(s, (EPSILON, EPSILON), w.string.labels, w.weight, None)
    return out


# -- epsilon removal ---------------------------------------------------


def _eps_reach(f: Fst, s: int) -> set[int]:
    seen = {s}
    stack = [s]
    while stack:
        x = stack.pop()
        for a in f.arcs(x):
            if a.ilabel == EPSILON and a.nextstate not in seen:
                seen.add(a.nextstate)
                stack.append(a.nextstate)
    return seen


def _epsilon_cycle_check(f: Fst) -> None:
    # Every epsilon arc lying on an epsilon cycle must weigh one.
    one = f.weight_type.one()
    for s in f.states():
        for a in f.arcs(s):
            if a.ilabel == EPSILON and a.weight != one and s in _eps_reach(f, a.nextstate):
                raise FstError(f"epsilon cycle through state {s} has a non-one weight")


def _eps_closure(f: Fst, s: int) -> dict[int, Any]:
    """Sum of epsilon-path weights from ``s`` to every reachable state."""
    one = f.weight_type.one()
    if f.weight_type.right_distributive:
        dist = {s: one}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for a in f.arcs(x):
                if a.ilabel != EPSILON:
                    continue
                nw = dist[x].times(a.weight)
                old = dist.get(a.nextstate)
                new = nw if old is None else old.plus(nw)
                if new != old:
                    dist[a.nextstate] = new
                    queue.append(a.nextstate)
        return dist
    # Prefix sums are wrong without right distributivity: sum whole paths.
    # Cycles have weight one here, so skipping revisits loses nothing.
    dist = {}

    def visit(x: int, w: Any, on_path: set) -> None:
        dist[x] = w if x not in dist else dist[x].plus(w)
        for a in f.arcs(x):
            if a.ilabel == EPSILON and a.nextstate not in on_path:
                on_path.add(a.nextstate)
                visit(a.nextstate, w.times(a.weight), on_path)
                on_path.discard(a.nextstate)

    visit(s, one, {s})
    return dist


def rm_epsilon(f: Fst) -> Fst:
    """Remove epsilon arcs from an acceptor, folding closure weights into
    the following arcs and final weights.  The result is trimmed."""
    if not f.is_acceptor():
        raise FstError("rm_epsilon expects an acceptor")
    _epsilon_cycle_check(f)
    out = Fst(f.weight_type)
    out.add_states(f.num_states())
    if f.start is None:
        return out
    out.set_start(f.start)
    zero = f.weight_type.zero()
    for s in f.states():
        final = zero
        for r, w in _eps_closure(f, s).items():
            for a in f.arcs(r):
                if a.ilabel != EPSILON:
                    out.add_arc(s, a._replace(weight=w.times(a.weight)))
            if f.is_final(r):
                final = final.plus(w.times(f.final(r)))
        out.set_final(s, final)
    return connect(out)


# -- determinization and minimization ------------------------------------


def _require_unweighted_acceptor(f: Fst, op: str) -> None:
    one = f.weight_type.one()
    for s in f.states():
        for a in f.arcs(s):
            if a.ilabel != a.olabel:
                raise FstError(f"{op} expects an acceptor")
            if a.ilabel == EPSILON:
                raise FstError(f"{op} expects an epsilon-free machine; run rm_epsilon first")
            if a.weight != one:
                raise FstError(f"{op} supports only unweighted machines (found arc weight {a.weight})")
        if f.is_final(s) and f.final(s) != one:
            raise FstError(f"{op} supports only unweighted machines (found final weight {f.final(s)})")


def _subset(
    weight_type: Any,
    starts: Iterable[int],
    arcs_of,
    is_final,
) -> Fst:
    out = Fst(weight_type)
    first = frozenset(starts)
    if not first:
        return out
    index = {first: out.add_state()}
    out.set_start(0)
    queue = deque([first])
    while queue:
        subset = queue.popleft()
        s = index[subset]
        if any(is_final(x) for x in subset):
            out.set_final(s)
        moves: dict[int, set[int]] = {}
        for x in sorted(subset):
            for label, nxt in arcs_of(x):
                moves.setdefault(label, set()).add(nxt)
        for label in sorted(moves):
            target = frozenset(moves[label])
            if target not in index:
                index[target] = out.add_state()
                queue.append(target)
            out.add_arc(s, label, label, None, index[target])
    return out


def determinize(f: Fst) -> Fst:
    """Subset construction for unweighted, epsilon-free acceptors."""
    _require_unweighted_acceptor(f, "determinize")
    if f.start is None:
        return Fst(f.weight_type)
    return _subset(
        f.weight_type,
        [f.start],
        lambda x: [(a.ilabel, a.nextstate) for a in f.arcs(x)],
        f.is_final,
    )


def is_deterministic(f: Fst) -> bool:
    for s in f.states():
        labels = [a.ilabel for a in f.arcs(s)]
        if EPSILON in labels or len(labels) != len(set(labels)):
            return False
    return True


def _determinize_reverse(f: Fst) -> Fst:
    preds: dict[int, list[tuple[int, int]]] = {}
    for s in f.states():
        for a in f.arcs(s):
            preds.setdefault(a.nextstate, []).append((a.ilabel, s))
    return _subset(
        f.weight_type,
        f.finals().keys(),
        lambda x: preds.get(x, []),
        lambda x: x == f.start,
    )


def minimize(f: Fst) -> Fst:
    """Minimal DFA by Brzozowski's double reversal."""
    _require_unweighted_acceptor(f, "minimize")
    if not is_deterministic(f):
        raise FstError("minimize expects a deterministic machine; run determinize first")
    if f.start is None:
        return Fst(f.weight_type)
    return connect(_determinize_reverse(_determinize_reverse(f)))
