"""Classification and verification of proper k-harmonic maps into spheres."""

from .errors import FormulaInapplicable, ModelError, NotApplicable, ResidualCheckFailed
from .models import (
    CliffordTorus,
    HypersurfaceSubmersion,
    ProductSphereSubmersion,
    ScalarInvariants,
    SmallSphere,
    harmonic_parameter,
    invariants,
    is_harmonic,
)
from .polysolve import (
    MasterPolynomial,
    RootReport,
    classify,
    isolate_roots,
    master_clifford,
    master_hypersurface,
    master_product_sphere,
    refine_root,
)
from .tension import TensionEvaluation, tau_k

__version__ = "0.1.0"
