"""Composition with exact, epsilon and failure (phi) matching on the right.

A phi arc is a non-consuming fallback: at a state with no arc for the
sought input label, the matcher follows the phi arc and tries again at its
target, multiplying the weights of every arc it hops over.  The labels on
the hopped arcs are dropped; only weights survive.  That is exactly why
transducer outputs must be moved into (Gallic) weights before a phi
composition can carry them, see ``phi_transduce``.

Once a hop has left the original state, input-epsilon arcs are hopped over
the same way as phi arcs.  Multi-token failure outputs are encoded as a phi
arc followed by a chain of ``<epsilon>:token`` arcs, and a lookup that
stopped at the first chain state would find nothing.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any

from .fst import EPSILON, Arc, Fst, FstError
from .transforms import connect


class PhiCycleError(FstError):
    """A chain of phi/epsilon hops revisited a state."""


@dataclass(frozen=True)
class MatchPath:
    """One way of matching a label: the hops taken, then the matching arc.

    ``acc_weight`` is the product of the hop weights and excludes the
    matched arc's own weight.
    """

    hops: tuple[Arc, ...]
    match: Arc
    acc_weight: Any


@dataclass
class ComposeConfig:
    phi_label: int | None = None
    allow_noncommute: bool = False


@dataclass
class ComposeStats:
    """Work counters filled in by ``compose``."""

    states: int = 0
    lookups: int = 0
    hops: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def explored(self) -> int:
        return self.states + self.hops


def phi_lookup(
    fst: Fst, state: int, label: int, phi: int, stats: ComposeStats | None = None
) -> list[MatchPath]:
    """All ways to match ``label`` at ``state`` under failure semantics.

    An empty list means no match.  Deterministic failure machines give at
    most one path.
    """
    if label in (EPSILON, phi):
        raise FstError("phi_lookup needs a consuming label other than epsilon and phi")
    one = fst.weight_type.one()
    results: list[MatchPath] = []

    def visit(s: int, hops: tuple[Arc, ...], acc: Any, on_chain: frozenset, hopped: bool) -> None:
        direct = [a for a in fst.arcs(s) if a.ilabel == label]
        if direct:
            results.extend(MatchPath(hops, a, acc) for a in direct)
            fallbacks = []
        else:
            fallbacks = [a for a in fst.arcs(s) if a.ilabel == phi]
        if hopped:
            fallbacks += [a for a in fst.arcs(s) if a.ilabel == EPSILON]
        for arc in fallbacks:
            if arc.nextstate in on_chain:
                raise PhiCycleError(
                    f"failure cycle through state {arc.nextstate} while matching label {label}"
                )
            if stats is not None:
                stats.hops += 1
            visit(
                arc.nextstate,
                hops + (arc,),
                acc.times(arc.weight),
                on_chain | {arc.nextstate},
                True,
            )

    if stats is not None:
        stats.lookups += 1
    visit(state, (), one, frozenset([state]), False)
    return results


def phi_final_weight(fst: Fst, state: int, phi: int, stats: ComposeStats | None = None) -> Any:
    """Final weight of ``state`` once input has run out.

    Final states answer directly; other states sum, over every phi/epsilon
    path to a final state, the path weight times that state's final weight.
    """
    zero = fst.weight_type.zero()

    def visit(s: int, on_chain: frozenset) -> Any:
        if fst.is_final(s):
            return fst.final(s)
        total = zero
        for arc in fst.arcs(s):
            if arc.ilabel not in (phi, EPSILON):
                continue
            if arc.nextstate in on_chain:
                raise PhiCycleError(f"phi/epsilon cycle through state {arc.nextstate}")
            if stats is not None:
                stats.hops += 1
            rest = visit(arc.nextstate, on_chain | {arc.nextstate})
            if not rest.is_zero():
                total = total.plus(arc.weight.times(rest))
        return total

    return visit(state, frozenset([state]))


def compose(
    left: Fst,
    right: Fst,
    cfg: ComposeConfig | None = None,
    stats: ComposeStats | None = None,
) -> Fst:
    """Eager composition ``left o right``, trimmed.

    There is no epsilon filter, so redundant epsilon paths may appear; with
    an idempotent plus they do not change the weighted relation.
    """
    cfg = cfg or ComposeConfig()
    wt = left.weight_type
    if right.weight_type is not wt:
        raise FstError(f"weight types differ: {wt.name} vs {right.weight_type.name}")
    if not wt.idempotent:
        raise FstError("composition without an epsilon filter needs an idempotent plus")
    if not wt.commutative and not cfg.allow_noncommute:
        raise FstError(
            f"{wt.name} weights do not commute; set allow_noncommute to compose anyway"
        )
    stats = stats if stats is not None else ComposeStats()
    phi = cfg.phi_label

    out = Fst(wt)
    if left.start is None or right.start is None:
        return out
    index: dict[tuple[int, int], int] = {}
    queue: deque[tuple[int, int]] = deque()

    def state_of(p: int, q: int) -> int:
        key = (p, q)
        if key not in index:
            index[key] = out.add_state()
            queue.append(key)
        return index[key]

    def emit(src: int, ilabel: int, olabel: int, w: Any, p: int, q: int) -> None:
        if not w.is_zero():
            out.add_arc(src, ilabel, olabel, w, state_of(p, q))

    out.set_start(state_of(left.start, right.start))
    while queue:
        p, q = queue.popleft()
        s = index[(p, q)]
        stats.states += 1

        if left.is_final(p):
            fq = phi_final_weight(right, q, phi, stats) if phi is not None else right.final(q)
            out.set_final(s, left.final(p).times(fq))

        for la in left.arcs(p):
            if la.olabel == EPSILON:
                emit(s, la.ilabel, EPSILON, la.weight, la.nextstate, q)
            elif phi is not None:
                for m in phi_lookup(right, q, la.olabel, phi, stats):
                    w = la.weight.times(m.acc_weight).times(m.match.weight)
                    emit(s, la.ilabel, m.match.olabel, w, la.nextstate, m.match.nextstate)
            else:
                for ra in right.arcs(q):
                    if ra.ilabel == la.olabel:
                        emit(s, la.ilabel, ra.olabel, la.weight.times(ra.weight), la.nextstate, ra.nextstate)
        for ra in right.arcs(q):
            if ra.ilabel == EPSILON:
                emit(s, EPSILON, ra.olabel, ra.weight, p, ra.nextstate)

    return connect(out)
