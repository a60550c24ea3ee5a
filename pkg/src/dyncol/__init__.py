"""Regular graphs whose r-dynamic chromatic number is r times their chromatic number."""

from .construction import (
    Budget,
    ConstructionParams,
    LabeledGraph,
    Part,
    Selector,
    build,
    canonical_index,
    construction_params,
    with_explicit_m,
)
from .colouring import Colouring, is_proper, is_r_dynamic, witness_proper, witness_r_dynamic
from .graph import Graph
from .refuter import refute_domination, refute_dynamic
from .solvers import chromatic_number, gamma, r_dynamic_chromatic_number
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"
