"""Effective second-harmonic-generation coefficients and C-eigenvalues of
second-order susceptibility tensors in uniaxial crystals."""
from .c_eigen import (
    CEigenConfig,
    CEigenReport,
    CEigenTriple,
    lambda_of_y,
    rank_one_error,
    residual,
    sign_quadruple,
    solve_lambda_max,
)
from .crystal_db import CrystalTemplate, build, list_classes
from .oracle import OracleResult, grid_max_ceig, grid_max_deff
from .shg_models import (
    AngleSet,
    OptResult,
    PhaseMatchType,
    SolverOptions,
    angle_scan,
    chi_eff,
    d_eff1,
    d_eff2,
    e_polarization,
    eig2_max,
    o_polarization,
)
from .tensor_core import (
    SymmetryClass,
    SymmetryError,
    classify_symmetry,
    contract_xy,
    contract_xyy,
    contract_yy,
    from_voigt,
    q_forms,
    r_forms,
    random_kleinman,
    random_piezo,
    rotate,
    to_voigt,
)

__version__ = "0.1.0"
