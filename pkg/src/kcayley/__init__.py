"""kcayley: Cayley transforms, van Daele classes and Kasparov cycles at
finite matrix scale, with bulk and boundary invariants of tight-binding
insulators."""

__version__ = "0.1.0"

from .numkit import (DEFAULT_TOL, ToleranceProfile, eig_hermitian,
                     mat_func_hermitian, polar_phase, kernel_dim,
                     is_unitary, is_hermitian, is_projection)
from .graded import (Grading, RealStructure, Osu, check_osu, assert_osu,
                     parity_decompose, graded_commutator, direct_sum,
                     perturbation_average)
from .clifford import (CliffordAlgebra, build_clifford, orientation_element,
                       graded_tensor, eta)
from .cayley import (cayley, cayley_inv, graded_cayley, graded_cayley_inv,
                     skew_cayley, skew_cayley_inv, RestrictedOperator)
from .vandaele import (DkClass, dk_from_unitary, ubiquitous_iso, psi_e,
                       phi_e, standard_osu_Z, dk_to_kk, kk_to_dk,
                       compare_classes)
from .kasparov import (FiniteKasparovCycle, Insulator, SymmetryData, flatten,
                       graph_projection, bott_projector,
                       detect_symmetry_class, chiral_reduction, bulk_class)
from .boundary import (GapLift, lift_flattened, vd_boundary,
                       boundary_cycle_unbounded, boundary_cycle_bounded,
                       edge_invariants, boundary_from_cycle)
from .pairing import (UnitaryLoop, HermitianPath, winding_number,
                      spectral_flow, index_pairing, kasparov_product_rep,
                      approx_unit_check)
from .models import (circle_spectral_triple, cot_product_operator,
                     real_line_generator, bott_plane, ssh_model,
                     kitaev_chain, bloch, halfspace)
