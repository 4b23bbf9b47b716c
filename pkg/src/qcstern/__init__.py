"""Quasi-cyclic Stern proof of knowledge, its signature scheme and parameter tools."""

from .algebra import BitVector, CirculantBlock, Permutation, QCParityCheck, rotate, rotate_pair, syndrome
from .fiatshamir import Signature, expected_signature_bits, sign, verify_signature
from .params import (QCS_128_S1, QCS_128_S4, QCS_128_S20, TOY, ParameterSet, builtin_parameter_sets,
                     get_parameter_set, select_parameters)
from .protocol import (PublicKey, SecretKey, keygen, prover_commit1, prover_commit2, prover_respond,
                       verify)

__version__ = "0.1.0"
