"""Reversible Toom-2.5, Karatsuba and shift-add multiplier circuits."""
from ._backend import BACKEND
from .costmodel import (MirrorRecurrence, crossover, fit_exponent, mirror_cost, paper_cnot_recurrence, paper_cost,
                        paper_toffoli_recurrence)
from .multipliers import (LimbSplit, MultiplierConfig, ProductTerms, build_karatsuba, build_multiplier, build_naive,
                          build_toom25, decompose)
from .netlist import (Circuit, CircuitBuilder, Gate, GateKind, Register, ResourceReport, Role, concat,
                      count_resources, reverse, schedule_depth)
from .pebble import PebbleSchedule, RecursionTree, make_schedule, optimal_cut_level
from .sim import TestVectorPlan, Verdict, simulate, verify_multiplier

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Circuit", "CircuitBuilder", "Gate", "GateKind", "LimbSplit", "MirrorRecurrence",
    "MultiplierConfig", "PebbleSchedule", "ProductTerms", "RecursionTree", "Register", "ResourceReport", "Role",
    "TestVectorPlan", "Verdict", "build_karatsuba", "build_multiplier", "build_naive", "build_toom25", "concat",
    "count_resources", "crossover", "decompose", "fit_exponent", "make_schedule", "mirror_cost",
    "optimal_cut_level", "paper_cnot_recurrence", "paper_cost", "paper_toffoli_recurrence", "reverse",
    "schedule_depth", "simulate", "verify_multiplier",
]
