import json
import os
import pathlib

import numpy as np
import pytest

import rank2lu

GOLDEN = pathlib.Path(os.environ.get("RANK2LU_GOLDEN_DIR", pathlib.Path(__file__).parents[1] / "golden"))


def bell(lam=0.7):
    return rank2lu.two_qubit_family(0.0, 0.0, lam)


def test_bell_fingerprint():
    f = rank2lu.fingerprint(bell())
    assert f["purity"] == pytest.approx(0.58)
    assert abs(f["trace_powers"][0]) < 1e-15
    assert f["trace_powers"][1] == pytest.approx(0.5)
    assert f["rank_ba_powers"] == [2, 2]


def test_state_from_golden_file():
    s = rank2lu.state_from_json((GOLDEN / "bell_mixture.json").read_text())
    assert s.lambda1 == pytest.approx(0.7)
    np.testing.assert_allclose(s.a, np.eye(2) / np.sqrt(2), atol=1e-15)


def test_decide_lu_and_witness():
    base = rank2lu.random_class_state(3, 4, 0.7, seed=5)
    image, generating = rank2lu.equivalent_pair(base, seed=6)
    v = rank2lu.decide_lu(base, image)
    assert v.decision == "Equivalent"
    w = v.lu_witness
    k = np.kron(w.u1, w.u2)
    assert np.linalg.norm(image.rho() - k @ base.rho() @ k.conj().T) <= 1e-8
    assert rank2lu.decide_lu(base, image, method="canonical").decision == "Equivalent"


def test_not_equivalent():
    a, b = rank2lu.inequivalent_pair(3, 3, 0.7, seed=1)
    assert rank2lu.decide_lu(a, b).decision == "NotEquivalent"
    v = rank2lu.decide_lu(bell(0.7), bell(0.6))
    assert v.diagnosis.startswith("(i)")


def test_decompose_round_trip():
    s = rank2lu.random_class_state(2, 3, 0.8, seed=2)
    d = rank2lu.decompose(2, 3, s.rho())
    np.testing.assert_allclose(d.rho(), s.rho(), atol=1e-9)


def test_errors_carry_codes():
    rho = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
    with pytest.raises(rank2lu.Rank2LUError) as info:
        rank2lu.decompose(2, 2, rho)
    assert info.value.code == "DegenerateSpectrum"
    assert isinstance(info.value, ValueError)


def test_slocc_and_oracle():
    base = rank2lu.random_class_state(2, 2, 0.7, seed=3)
    image, _ = rank2lu.slocc_pair(base, seed=4)
    assert rank2lu.decide_slocc(base, image).decision == "Equivalent"
    r = rank2lu.oracle_search(base, base, rank2lu.OracleConfig(restarts=2), seed=1)
    assert r.verdict == "Equivalent"


def test_canonical_and_concurrence():
    c = rank2lu.canonicalize(rank2lu.two_qubit_family(0.4, 0.9, 0.7))
    spec = sorted(c.gamma_spectra[0], key=lambda z: z.real)
    assert spec[0] == pytest.approx(-1.0)
    assert spec[1] == pytest.approx(1.0)
    assert rank2lu.concurrence_2x2(rank2lu.two_qubit_family(0.4, 0.9, 0.7).a) == pytest.approx(1.0)
    assert json.loads(bell().to_json())["m"] == 2
