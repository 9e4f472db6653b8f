from .core import (EXP, ONE, ZERO, add_all, PHI, THETA, Atom, Expr, ExprError, Func, Jet, JetOrderError, Param,
                   PowBase, Var, as_expr, atom, collect, const, cos_, differentiate, exp_, jet,
                   ln_, map_factors, param, phi_power, pow_, sin_, subs, substitute,
                   total_derivative, total_derivative_multi, var)
from .parser import KNOWN_PARAMS, ParseError, parse
from .printer import to_text
from .numeric import (ConstraintViolation, DomainError, EvalError, PointAssignment,
                      UnassignedAtomError, eval_numeric, term_magnitudes)
from .zerotest import (Constraints, UnsatisfiableConstraints, Verdict, ZeroReport,
                       clear_denominators, expand_defined, is_zero, rewrite, zero_report)
