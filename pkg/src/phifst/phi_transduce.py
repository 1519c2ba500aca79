"""Phi-transduction through the Gallic semiring, and the naive method it fixes.

Composing directly with a phi matcher loses the output labels of hopped
phi arcs, since a failure match only accumulates weights.  Moving the
transducer's outputs into Gallic string weights lets the hops carry them;
factoring the weights and mapping back restores them as labels.
"""

from __future__ import annotations

import logging
from collections import OrderedDict

from .compose import ComposeConfig, ComposeStats, compose
from .fst import EPSILON, Fst, FstError, SymbolTable
from .semiring import TropicalWeight
from .transforms import (
    ProjectSide,
    determinize,
    factor_weights,
    from_gallic,
    minimize,
    project,
    rm_epsilon,
    to_gallic,
)

logger = logging.getLogger(__name__)

# Stage names follow the variables of the reference pipeline, in order.
STAGES = (
    "pattern_erased",
    "pattern_gal",
    "transducer_gal",
    "composed_gal",
    "factored",
    "converted_back",
    "composed_proj",
    "composed_proj_rm_eps",
    "det",
)


def build_output_eraser(syms: SymbolTable, phi: int | None = None) -> Fst:
    """One-state transducer mapping every ordinary symbol to epsilon."""
    f = Fst(TropicalWeight)
    f.add_state()
    f.set_start(0)
    f.set_final(0)
    for label, _ in syms:
        if label not in (EPSILON, phi):
            f.add_arc(0, label, EPSILON, None, 0)
    return f


def _check_inputs(pattern: Fst, transducer: Fst) -> None:
    for name, f in (("pattern", pattern), ("transducer", transducer)):
        if f.weight_type is not TropicalWeight:
            raise FstError(f"{name} must be a tropical machine")
    if not pattern.is_acceptor():
        raise FstError("pattern must be an acceptor")


def phi_compose_stages(
    pattern: Fst,
    transducer: Fst,
    syms: SymbolTable,
    phi: int,
    stats: ComposeStats | None = None,
) -> "OrderedDict[str, Fst]":
    """Run the full pipeline and return every intermediate machine by name."""
    _check_inputs(pattern, transducer)
    st: OrderedDict[str, Fst] = OrderedDict()
    st["pattern_erased"] = compose(pattern, build_output_eraser(syms, phi))
    st["pattern_gal"] = to_gallic(st["pattern_erased"])
    st["transducer_gal"] = to_gallic(transducer)
    # Left weights all have empty strings, so they commute with everything.
    cfg = ComposeConfig(phi_label=phi, allow_noncommute=True)
    st["composed_gal"] = compose(st["pattern_gal"], st["transducer_gal"], cfg, stats)
    st["factored"] = factor_weights(st["composed_gal"])
    st["converted_back"] = from_gallic(st["factored"])
    st["composed_proj"] = project(st["converted_back"], ProjectSide.OUTPUT)
    st["composed_proj_rm_eps"] = rm_epsilon(st["composed_proj"])
    st["det"] = minimize(determinize(st["composed_proj_rm_eps"]))
    for name, f in st.items():
        logger.debug("stage %s: %d states, %d arcs", name, f.num_states(), f.num_arcs())
    return st


def phi_compose(
    pattern: Fst,
    transducer: Fst,
    syms: SymbolTable,
    phi: int,
    stats: ComposeStats | None = None,
) -> Fst:
    """Minimal acceptor of the outputs ``transducer`` assigns to ``pattern``,
    with failure arcs contributing their output labels."""
    return phi_compose_stages(pattern, transducer, syms, phi, stats)["det"]


def naive_phi_compose(pattern: Fst, transducer: Fst, syms: SymbolTable, phi: int) -> Fst:
    """Phi composition straight in the tropical semiring.

    Kept as a regression reference: hopped phi arcs contribute their weight
    but not their output label, so the result is wrong for transducers
    (``a`` through ``<phi>:c a:b`` yields ``b``, not ``c b``).
    """
    _check_inputs(pattern, transducer)
    composed = compose(pattern, transducer, ComposeConfig(phi_label=phi))
    proj = rm_epsilon(project(composed, ProjectSide.OUTPUT))
    return minimize(determinize(proj))
