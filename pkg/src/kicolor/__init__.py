"""Set multicoloring: (q, k, i)-colorings, where adjacent vertices share at most i of their k colors."""

from .colorset import ColorSet, Psi, complement_set, enumerate_psi, is_legal_pair, make_color_set
from .errors import DomainError, KiColorError, ParseError, ResourceExceeded, UnsupportedPaletteError
from .fvs import FvsResult, find_fvs, find_fvs_exact, find_fvs_greedy, verify_fvs
from .graph import Graph, RootedForest, induced_forest, parse_dimacs_graph, write_dimacs_graph
from .kernels import BACKEND
from .solver import (
    Params, chromatic_number_ki, count_colorings, decide, extend_decide, extend_extract,
    find_coloring, h_compatible_sets, is_proper,
)

__version__ = "0.1.0"
