"""Degenerations of representations of tame quivers."""
from .quiver import Quiver, affine_a, dynkin, extended_dynkin, from_type, kronecker, linear_a
from .catalog import Catalog, Indec, ModuleSum
from .hom import HomTable
from .order import DegenOrder, DeformationPoset
from .tubes import TubeCategory
from .blocs import classify, run_classification

__all__ = [
    "Catalog", "DegenOrder", "DeformationPoset", "HomTable", "Indec", "ModuleSum", "Quiver",
    "TubeCategory", "affine_a", "classify", "dynkin", "extended_dynkin", "from_type", "kronecker",
    "linear_a", "run_classification",
]
