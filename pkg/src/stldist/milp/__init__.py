from .bnb import SolverBudgetError, SolverConfig, solve
from .encoding import ASSERT_FALSE, ASSERT_TRUE, Encoder, encode_satisfaction, trace_variables
from .lpformat import export_lp, parse_lp
from .model import Constraint, MilpModel, MilpSolution, ModelError
from .programs import (
    build_feasibility_program,
    build_ph_program,
    build_trace_distance_program,
    build_violation_program,
)

__all__ = [
    "ASSERT_FALSE",
    "ASSERT_TRUE",
    "Constraint",
    "Encoder",
    "MilpModel",
    "MilpSolution",
    "ModelError",
    "SolverBudgetError",
    "SolverConfig",
    "build_feasibility_program",
    "build_ph_program",
    "build_trace_distance_program",
    "build_violation_program",
    "encode_satisfaction",
    "export_lp",
    "parse_lp",
    "solve",
    "trace_variables",
]
