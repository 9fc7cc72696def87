"""Regularity, strong regularity and μ-term extraction for infinite λ-terms."""

from .chains import (Bound, ChainBound, ChainVerdict, ChainWitness, binding_capturing_relations,
                     has_infinite_chain, max_chain_length, recover_chain, validate_chain)
from .decompose import (Answer, Budget, PumpWitness, RegularityResult, TransitionGraph, Verdict,
                        explore, explore_annotated, is_del_reduct, is_regular, is_strongly_regular,
                        lift_sequence, project_sequence)
from .dot import emit_dot
from .errors import (BudgetError, CyclamError, OpenTermError, ParseError, SystemDefinitionError,
                     UnguardedError)
from .proofs import (CheckResult, Derivation, DerivationNode, NotRegularError, ProofSystem, Rule,
                     annotate_to_expr, build_derivation, check_derivation, erase, extract_mu_term,
                     format_derivation, parse_derivation, truncations_agree, verify_expresses)
from .states import (PrefixedState, RuleLabel, Strategy, alpha_eq, compress, decompose_step,
                     make_state, prefix_names)
from .syntax import parse_formula, parse_lambda_mu, parse_term
from .systems import Equation, RegularSystem, parse_regular_system, system_from_term
from .terms import (Abs, App, Call, Const, Cut, Mu, Var, alpha_eq_terms, canonical, free_vars,
                    pretty, size)
from .unfold import (InfiniteTermHandle, handle_of, is_mu_guarded, truncate, unfold_step,
                     unfold_to_depth)

__all__ = [
    "Bound",
    "ChainBound",
    "ChainVerdict",
    "ChainWitness",
    "binding_capturing_relations",
    "has_infinite_chain",
    "max_chain_length",
    "recover_chain",
    "validate_chain",
    "Answer",
    "Budget",
    "PumpWitness",
    "RegularityResult",
    "TransitionGraph",
    "Verdict",
    "explore",
    "explore_annotated",
    "is_del_reduct",
    "is_regular",
    "is_strongly_regular",
    "lift_sequence",
    "project_sequence",
    "emit_dot",
    "BudgetError",
    "CyclamError",
    "OpenTermError",
    "ParseError",
    "SystemDefinitionError",
    "UnguardedError",
    "CheckResult",
    "Derivation",
    "DerivationNode",
    "NotRegularError",
    "ProofSystem",
    "Rule",
    "annotate_to_expr",
    "build_derivation",
    "check_derivation",
    "erase",
    "extract_mu_term",
    "format_derivation",
    "parse_derivation",
    "truncations_agree",
    "verify_expresses",
    "PrefixedState",
    "RuleLabel",
    "Strategy",
    "alpha_eq",
    "compress",
    "decompose_step",
    "make_state",
    "prefix_names",
    "parse_formula",
    "parse_lambda_mu",
    "parse_term",
    "Equation",
    "RegularSystem",
    "parse_regular_system",
    "system_from_term",
    "Abs",
    "App",
    "Call",
    "Const",
    "Cut",
    "Mu",
    "Var",
    "alpha_eq_terms",
    "canonical",
    "free_vars",
    "pretty",
    "size",
    "InfiniteTermHandle",
    "handle_of",
    "is_mu_guarded",
    "truncate",
    "unfold_step",
    "unfold_to_depth",
]

__version__ = "0.1.0"
