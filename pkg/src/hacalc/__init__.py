"""Truncated analytic cyclic homology of algebras over F_p, with oracles."""

from .errors import (HacalcError, InstanceTooLarge, InvariantViolation, PrecisionError,
                     PreconditionError)
from .padic import PadicConfig, PadicScalar, decode
from .linalg import (RankReport, SmithForm, SparseMatrix, cokernel_presentation, kernel_basis,
                     padic_rank, rank, smith_normal_form)
from .freealg import (FormElement, FormMonomial, LiftSpec, TensorElement, closed_form_fedosov,
                      fast_product, fedosov_product, ideal_decompose, iota, iota_inverse)
from .tube import (TubeElement, TubeParams, brute_force_ideal_power, tube_bound, tube_contains,
                   tube_multiply)
from .xcomplex import (ChainMap, HomologyReport, TruncatedAlgebra, Z2Complex, build_X,
                       holim_finite, homology, mapping_cone, x_functor)
from .leavitt import DirectedGraph, LeavittReport, build_NE, ha_cohn, ha_leavitt, parse_graph
from .curves import DeRhamReport, LocalizedRing, compare_with_leavitt_torus, de_rham
from .pipeline import (HacReport, PipelineConfig, canonical_lift, hac_truncated,
                       stabilization_verdict)
from .cli import run_cli

__version__ = "0.1.0"
