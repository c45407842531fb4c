import math

import numpy as np
import pytest

import pstchain


def test_transfer_reaches_the_mirror():
    out = pstchain.evolve("n=6\nstate=110000\nobserve=self,twin\nt_max=1\n")
    tau = np.asarray(out["tau"])
    twin = np.asarray(out["columns"]["twin"])
    i = int(np.argmin(abs(tau - 0.5)))
    assert twin[i] == pytest.approx(1.0, abs=1e-9)
    assert out["columns"]["self"][0] == pytest.approx(1.0)


def test_bell_state_concurrence():
    psi = np.array([0, 1, 1, 0]) / math.sqrt(2)
    assert pstchain.concurrence(np.outer(psi, psi.conj())) == pytest.approx(1.0, abs=1e-10)
    assert pstchain.concurrence(np.eye(4) / 4) == 0.0
    assert pstchain.eof_from_concurrence(1.0) == pytest.approx(1.0)


def test_couplings_and_fit():
    assert pstchain.pst_couplings(4) == pytest.approx([math.sqrt(3), 2.0, math.sqrt(3)])
    assert pstchain.j0(6, 1.0) == pytest.approx(1 / 3)
    points = [(n, p, math.exp(-n * p * p / 0.21**2)) for n in range(4, 16) for p in (0.01, 0.05)]
    assert pstchain.fit(points)["p0"] == pytest.approx(0.21, rel=1e-9)


def test_small_scan_is_reproducible():
    text = "scan=chain_length\nfamily=unentangled\nperturbation=epsilon\nepsilon_scale_ref=Jmax\n" \
           "values=0.1\nn_min=4\nn_max=5\nn_realizations=8\nseed=3\n"
    a = pstchain.scan(text)
    b = pstchain.scan(text, {"threads": "2"})
    assert a == b
    assert a["axes"] == ["n", "p"]
    assert all(0.5 < p["mean"] <= 1.0 for p in a["points"])


def test_errors_map_to_python_exceptions():
    with pytest.raises(pstchain.ConfigError, match="unknown key"):
        pstchain.canonical_config("bogus=1\n")
    with pytest.raises(ValueError):
        pstchain.evolve("n=6\nstate=11\n")
    with pytest.raises(pstchain.NumericError):
        pstchain.fit([(4, 0.1, 0.9), (5, 0.1, 0.9)])


def test_inject_reports_weights():
    out = pstchain.inject("n=6\nmethod=swap\nt_max=1\n")
    assert set(out["columns"]) >= {"target", "twin"}
    assert 0.0 <= out["kept_probability"] <= 1.0
