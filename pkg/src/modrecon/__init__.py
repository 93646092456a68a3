"""Modular computation over Q with bad-prime tolerant rational reconstruction."""
from .arith import Residue, ext_gcd, is_prime, mod_inverse, prime_stream
from .crt import crt_list, crt_pair, crt_vector
from .engine import FaultPlan, ModularOptions, modular_groebner, run_modular
from .groebner import buchberger, lead_signature, normal_form
from .poly import Polynomial, Ring, parse_ideal, parse_poly
from .reconstruct import error_tolerant, farey_preimage, gauss_lagrange

__version__ = "0.1.0"
