"""aelab: a desk-scale workbench for embedding disjunctive logic programs
into first-order autoepistemic logic and machine-checking correspondence
claims between the embeddings and their combinations with first-order
theories."""

from .errors import (
    AelabError, CapExceeded, GroundingError, InconsistentKernel,
    ModalNotAllowed, ModalScopeTooRich, NotGHorn, NotNamed, NotNormal,
    ParseError, SemanticError,
)
from .syntax import (
    And, BeliefKernel, Caps, Const, DEFAULT_CAPS, Eq, Exists, Forall, Formula,
    Func, Implies, Modal, Neq, Not, Or, Pred, Program, Rule, Signature, Term,
    Theory, Var, apply_substitution, desugar, free_vars, ground_atoms,
    universal_closure,
)
from .textio import parse_formula, parse_program, parse_theory, render
from .lp import (
    classify_program, grounding, is_stable_model, minimal_models, reduct,
    stable_models,
)
from .embed import (
    EB, EBV, EH, EHV, HP, HPV, EmbeddingVariant, combine, embed_program,
    embed_rule, pia_axioms, una_axioms,
)
from .foael import (
    Bounded, Entailed, CountermodelFound, ExpansionMembership, Interpretation,
    KernelLookup, StandardNames, TheoryClass, associated_substitutions,
    classify_theory, default_bounded, entails, enumerate_interpretations,
    holds, intersect_models, satisfies, skolemize,
)
from .expand import (
    Expansion, MemberVerdict, candidate_kernels, consequences,
    is_stable_kernel, member, membership_matrix, stable_expansions,
)
from .corr import (
    OGA, OG, O, Full, CorrespondenceVerdict, closed_domain_check,
    cn_subset_at, equiv_at, figure1_check, grounding_invariance, probe_family,
    table1_check,
)

__version__ = "0.1.0"
