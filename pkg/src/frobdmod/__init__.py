"""Divided-power differential operators over F_p[x] and Frobenius-descent D-modules."""
from .diffop import BasisOp, Operator, apply, apply_basis, bernstein_basis, min_level, op_mul
from .fieldpoly import Prime, SparsePoly, binom_mod_p, format_poly, frobenius_level, parse_poly
from .frobmod import FrobModule, GeneratorSequence, ModuleElement, ses_embed, ses_project, validate_sequence

__version__ = "0.1.0"
