"""Spatially-coupled LDPC codes on the binary erasure channel.

Construction of coupled-chain base matrices (original and modified
variants), permutation lifting, sequential encoding with dense-solve or
accumulator termination, peeling decoding with Monte Carlo harness, and
protograph density evolution with threshold search.
"""

from .channel import DecodeResult, ReceivedWord, SimReport, decode, run_monte_carlo, transmit
from .de import (DEState, ThresholdResult, bp_threshold, converges, de_step,
                 threshold_table, trajectory)
from .encoder import (Codeword, EncoderState, OpCounter, encode, sequential_step,
                      terminate_accumulator, terminate_generic, verify_codeword)
from .errors import (DimensionError, ParameterError, ParseError, RankRepairError,
                     ScldpcError, SingularMatrixError, StateError, TerminationError)
from .gf2 import (Gf2Matrix, MaskedPermutation, PermutationMap, ShiftBlock,
                  apply_permutation, rank, solve_dense)
from .lifting import (LiftedCode, TermPatch, apply_accumulator_patch,
                      full_rank_status, lift, make_code, repair_term_rank,
                      term_corank_bound)
from .protograph import (BaseMatrix, BitAccounting, CodeParams, bit_accounting,
                         build_base, design_rate, rate_string)
from .serialize import export_code, import_code, read_alist, write_alist

__version__ = "0.1.0"

__all__ = [
    "BaseMatrix", "BitAccounting", "CodeParams", "Codeword", "DEState",
    "DecodeResult", "DimensionError", "EncoderState", "Gf2Matrix", "LiftedCode",
    "MaskedPermutation", "OpCounter", "ParameterError", "ParseError", "PermutationMap",
    "RankRepairError", "ReceivedWord", "ScldpcError", "ShiftBlock", "SimReport",
    "SingularMatrixError", "StateError", "TermPatch", "TerminationError",
    "ThresholdResult", "apply_accumulator_patch", "apply_permutation",
    "bit_accounting", "bp_threshold", "build_base", "converges", "de_step",
    "decode", "design_rate", "encode", "export_code", "full_rank_status",
    "import_code", "lift", "make_code", "rank", "rate_string", "read_alist",
    "repair_term_rank", "run_monte_carlo", "sequential_step", "solve_dense",
    "term_corank_bound", "terminate_accumulator", "terminate_generic", "threshold_table",
    "trajectory", "transmit", "verify_codeword", "write_alist",
]
