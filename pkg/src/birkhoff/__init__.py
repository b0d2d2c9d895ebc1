"""Birkhoff sections of geodesic flows built from Eulerian coorientations of filling multi-curves."""

from .coorient import Coorientation, enumerate_eulerian, flip_algorithm, is_acyclic, representations
from .cohomology import Cochain, class_of, construct_coorientation
from .errors import BirkhoffError
from .monodromy import Monodromy, twist_word
from .surface_map import MultiCurveMap, build_map, grid_map, load_map, shipped_map

__version__ = "0.1.0"

__all__ = [
    "BirkhoffError",
    "Cochain",
    "Coorientation",
    "Monodromy",
    "MultiCurveMap",
    "build_map",
    "class_of",
    "construct_coorientation",
    "enumerate_eulerian",
    "flip_algorithm",
    "grid_map",
    "is_acyclic",
    "load_map",
    "representations",
    "shipped_map",
    "twist_word",
]
