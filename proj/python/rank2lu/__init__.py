"""Local-unitary equivalence of rank-two bipartite mixed states."""

from ._core import (
    BipartiteShape,
    CanonicalForm,
    LUWitness,
    OracleConfig,
    OracleResult,
    Rank2LUError,
    RankTwoState,
    SloccWitness,
    ToleranceConfig,
    Verdict,
    canonicalize,
    check_class_condition,
    concurrence_2x2,
    decide_lu,
    decide_slocc,
    decompose,
    equivalent_pair,
    fingerprint,
    haar_unitary,
    inequivalent_pair,
    oracle_search,
    random_class_state,
    slocc_pair,
    standard_form,
    state_from_json,
    two_qubit_family,
    verify_lu_witness,
)

__version__ = "0.1.0"
