from .cochains import CochainAlgebra, cochain_structure, complex_structure, getzler_form
from .complexes import FinComplex, SimplicialMap
from .config import DEFAULT_BUDGET, Budget
from .deligne import (
    DeligneSimplex,
    HornData,
    StarData,
    abelian_homotopy_groups,
    bch,
    gauge,
    gauge_witness,
    higher_bch,
    horn_fill,
    lift_horn,
    simplex_from_star,
)
from .descent import (
    CosimplicialLInfty,
    Cover,
    DiagramOverS,
    SemicosimplicialLInfty,
    Totalization,
    abelian_descent_check,
    cartesian_check,
    cech_builder,
    holim_k,
    matching_lift,
    matching_space,
    tot,
    tot_k,
    tot_vertex_iso,
)
from .documents import bundled_algebra, load, load_algebra
from .errors import DelinfError
from .extensions import CentralExtension, mc_lift, obstruction_mc
from .forms import PolyForm, dupont_contraction
from .kuranishi import kuranishi_forward, kuranishi_solve
from .linfty import (
    LInftyAlgebra,
    LInftyMorphism,
    check_linfty,
    check_morphism,
    curvature,
    dgla_import,
    is_mc,
)
from .transfer import Contraction, Transfer, check_contraction

__all__ = [
    "DEFAULT_BUDGET",
    "Budget",
    "CentralExtension",
    "CochainAlgebra",
    "Contraction",
    "CosimplicialLInfty",
    "Cover",
    "DeligneSimplex",
    "DelinfError",
    "DiagramOverS",
    "FinComplex",
    "HornData",
    "LInftyAlgebra",
    "LInftyMorphism",
    "PolyForm",
    "SemicosimplicialLInfty",
    "SimplicialMap",
    "StarData",
    "Totalization",
    "Transfer",
    "abelian_descent_check",
    "abelian_homotopy_groups",
    "bch",
    "bundled_algebra",
    "cartesian_check",
    "cech_builder",
    "check_contraction",
    "check_linfty",
    "check_morphism",
    "cochain_structure",
    "complex_structure",
    "curvature",
    "dgla_import",
    "dupont_contraction",
    "gauge",
    "gauge_witness",
    "getzler_form",
    "higher_bch",
    "holim_k",
    "horn_fill",
    "is_mc",
    "kuranishi_forward",
    "kuranishi_solve",
    "lift_horn",
    "load",
    "load_algebra",
    "matching_lift",
    "matching_space",
    "mc_lift",
    "obstruction_mc",
    "simplex_from_star",
    "tot",
    "tot_k",
    "tot_vertex_iso",
]
