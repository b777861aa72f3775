"""Fronts, colorings, mixing, canonical maps and canonization."""
from .counting import CountRow, c_recursion, count_canonical, stair_counts
from .front import RULES, Coloring, Front, FrontCheck, front_check, front_derived
from .maps import CanonicalMap, Group, apply_canonical, count_canonical_maps, enumerate_canonical_maps
from .mixing import INCOMPARABLE, MIXED, SEPARATED, MixReport, decide_mixing, separates
from .search import THEOREM1, THEOREM2, Canonized, canonize, verify_canonical
