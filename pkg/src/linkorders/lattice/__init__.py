"""Equal-characteristic lattice model: linking orders in M2(F) x B."""
from .algebras import ModelAlgebras, QuadraticExtension, StratumParams
from .laurent import Laurent, Window
from .linking import LevelZeroModel, LinkingModel, quotient_iso
from .modules import LatticeModule, annihilator, module_product

__all__ = [
    "Laurent", "Window", "StratumParams", "QuadraticExtension", "ModelAlgebras",
    "LatticeModule", "module_product", "annihilator", "LinkingModel", "LevelZeroModel",
    "quotient_iso",
]
