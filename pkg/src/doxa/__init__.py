"""doxa: a workbench for the logics of false belief and radical ignorance.

Finite Kripke models, a false-belief operator alongside the plain box,
radical and factive ignorance, bounded countermodel search, axiom
rewrite chains, truth-preserving model constructions, and Hilbert-style
proof checking for the systems built on these operators.
"""

from .semantics import (
    ALL_FRAMES,
    Frame,
    FrameClass,
    Model,
    dump_model,
    evaluate,
    evaluate_aux,
    frame_class,
    has_property,
    load_model,
    successors,
)
from .syntax import (
    FI,
    IR,
    And,
    Atom,
    Bot,
    Box,
    Formula,
    FormulaMeasures,
    Iff,
    Imp,
    Not,
    Or,
    Top,
    W,
    measures,
    parse,
    print_formula,
    substitute,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_FRAMES",
    "And",
    "Atom",
    "Bot",
    "Box",
    "FI",
    "Formula",
    "FormulaMeasures",
    "Frame",
    "FrameClass",
    "IR",
    "Iff",
    "Imp",
    "Model",
    "Not",
    "Or",
    "Top",
    "W",
    "dump_model",
    "evaluate",
    "evaluate_aux",
    "frame_class",
    "has_property",
    "load_model",
    "measures",
    "parse",
    "print_formula",
    "substitute",
    "successors",
    "__version__",
]
