"""Minimal singular metrics on toric bundles over abelian surfaces.

The envelope weight of a big line bundle, its Lelong and Kiselman numbers,
non-nef locus, multiplier ideals and jumping numbers are all read off one
convex region, the nef box. Submodules:

``geometry``    exact/float convex regions with one quadratic constraint
``torus``       Néron–Severi classes and nef tests on the base torus
``bundle``      fans, Cartier data, the nef box, charts and subdivisions
``envelope``    the envelope weight, gluing and singularity germs
``positivity``  Lelong/Kiselman numbers, non-nef locus, negative part
``multiplier``  multiplier ideals, jumping numbers, lct, section counts
``io``, ``svg``, ``cli``  problem files, plots and the command line
"""

from .bundle import BundleProblem, ChartPoint, Fan, box_nef, is_big
from .errors import MathError, ProblemParseError
from .fixtures import pentagon_bundle, triangle_bundle, nakayama, nakayama_symmetric, named_point
from .multiplier import Monomial, in_multiplier_ideal, jumping_numbers, lct
from .positivity import kiselman_number, lelong_number, nnef_locus

__all__ = [
    "BundleProblem",
    "ChartPoint",
    "Fan",
    "MathError",
    "Monomial",
    "ProblemParseError",
    "box_nef",
    "pentagon_bundle",
    "triangle_bundle",
    "in_multiplier_ideal",
    "is_big",
    "jumping_numbers",
    "kiselman_number",
    "lct",
    "lelong_number",
    "nakayama",
    "nakayama_symmetric",
    "named_point",
    "nnef_locus",
]
