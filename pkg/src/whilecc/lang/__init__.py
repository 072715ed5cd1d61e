from .ast import (Term, Var, Lit, App, Choose, Stmt, Skip, Div, Assign, Seq,
                  If, While, Procedure, Program, is_atomic)
from .parser import (parse, parse_program, auto_init, validate_star, WccError,
                     pretty_term, pretty_stmt, pretty_procedure)

__all__ = [
    "Term", "Var", "Lit", "App", "Choose", "Stmt", "Skip", "Div", "Assign",
    "Seq", "If", "While", "Procedure", "Program", "is_atomic",
    "parse", "parse_program", "auto_init", "validate_star", "WccError",
    "pretty_term", "pretty_stmt", "pretty_procedure",
]
