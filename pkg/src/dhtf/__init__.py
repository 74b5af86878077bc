"""Linear dynamic logic of here-and-there over finite traces.

Parsing, converse normal form, Fisher-Ladner closure, translation into
temporal logic programs, and bounded enumeration of here-and-there and
temporal equilibrium models.
"""

from .ast import (
    FALSE, STEP, TRUE, Atom, Box, Choice, Converse, Diamond, Falsity, Seq, Star,
    Step, Test, Truth, atoms, converse_normal_form, derived, path_of_formula, power, size,
)
from .closure import fl_closure, is_closed
from .equilibrium import (
    ModelSet, check_dht_equivalence, check_strong_faithfulness, del_models, dht_models,
    label_extension, restrict, verify_normal_form,
)
from .errors import BudgetExceeded, DHTError, ParseError, PreconditionError, SourceSpan, UnsupportedConstruct
from .parser import (
    emit_del, parse_formula, parse_ht_trace, parse_program, parse_theory, print_formula,
    print_ht_trace, print_program,
)
from .semantics import HTTrace, accessibility, satisfies, satisfies_classical, trivalue, trivalue_path
from .translate import (
    LabelRegistry, Literal, Rule, RuleKind, TemporalProgram, eta, program_as_formulas, sigma,
    translate, unfold,
)

__version__ = "0.1.0"

__all__ = [
    "accessibility",
    "Atom",
    "atoms",
    "Box",
    "BudgetExceeded",
    "check_dht_equivalence",
    "check_strong_faithfulness",
    "Choice",
    "Converse",
    "converse_normal_form",
    "del_models",
    "derived",
    "dht_models",
    "DHTError",
    "Diamond",
    "emit_del",
    "eta",
    "FALSE",
    "Falsity",
    "fl_closure",
    "HTTrace",
    "is_closed",
    "label_extension",
    "LabelRegistry",
    "Literal",
    "ModelSet",
    "parse_formula",
    "parse_ht_trace",
    "parse_program",
    "parse_theory",
    "ParseError",
    "path_of_formula",
    "power",
    "PreconditionError",
    "print_formula",
    "print_ht_trace",
    "print_program",
    "program_as_formulas",
    "restrict",
    "Rule",
    "RuleKind",
    "satisfies",
    "satisfies_classical",
    "Seq",
    "sigma",
    "size",
    "SourceSpan",
    "Star",
    "Step",
    "STEP",
    "TemporalProgram",
    "Test",
    "translate",
    "trivalue",
    "trivalue_path",
    "TRUE",
    "Truth",
    "unfold",
    "UnsupportedConstruct",
    "verify_normal_form",
]
