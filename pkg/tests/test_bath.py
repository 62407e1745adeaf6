import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from dotgate import bath
from dotgate.constants import KB_MEV_PER_K

ORACLE = Path(__file__).with_name("spectral_si_oracle.py")

MODEL = bath.build_spectral_model(bath.GAAS)


def test_material_validation():
    with pytest.raises(ValueError, match="mass_density"):
        bath.MaterialParams(mass_density=-1.0)


def test_widths_and_cutoffs_frozen_values():
    # frozen from an independent SI evaluation of the confinement widths
    assert MODEL.d_e == pytest.approx(2.16460, rel=1e-5)
    assert MODEL.d_h == pytest.approx(1.44220, rel=1e-5)
    assert MODEL.w_e == pytest.approx(2.06416, rel=1e-5)
    assert MODEL.w_eh == pytest.approx(2.42934, rel=1e-5)
    assert MODEL.w_h == pytest.approx(3.09810, rel=1e-5)
    assert MODEL.prefactor == pytest.approx(6.73660, rel=1e-5)


def test_against_si_oracle_script():
    out = subprocess.run([sys.executable, str(ORACLE)], capture_output=True,
                         text=True, check=True)
    ref = json.loads(out.stdout)
    assert MODEL.d_e == pytest.approx(ref["d_e_nm"], rel=1e-3)
    assert MODEL.d_h == pytest.approx(ref["d_h_nm"], rel=1e-3)
    assert MODEL.w_e == pytest.approx(ref["w_e_mev"], rel=1e-3)
    assert MODEL.w_eh == pytest.approx(ref["w_eh_mev"], rel=1e-3)
    assert MODEL.w_h == pytest.approx(ref["w_h_mev"], rel=1e-3)
    assert MODEL.prefactor == pytest.approx(ref["prefactor_per_ps_mev3"], rel=1e-3)


def test_cutoff_ratio_identity():
    # w_e / w_h = d_h / d_e follows from the cutoff definitions
    assert MODEL.w_e / MODEL.w_h == pytest.approx(MODEL.d_h / MODEL.d_e, rel=1e-12)


def test_cutoff_ordering_follows_widths():
    # d_e > d_h, so the electron cutoff is the lowest and the mixed one sits
    # in between
    assert MODEL.d_e > MODEL.d_h
    assert MODEL.w_e < MODEL.w_eh < MODEL.w_h


def test_spectral_density_vanishes_at_zero():
    assert bath.spectral_density(MODEL, 0.0) == 0.0


def test_spectral_density_positive_on_grid():
    grid = np.arange(0.01, 50.0, 0.01)
    j = bath.spectral_density(MODEL, grid)
    assert np.all(j > 0.0)


def test_spectral_density_cutoff_suppression():
    grid = np.arange(0.0, 50.0, 0.01)
    j = bath.spectral_density(MODEL, grid)
    jmax = float(np.max(j))
    assert np.all(j[grid >= 15.0] < 1e-6 * jmax)


def test_spectral_density_smooth():
    h = 1e-4
    grid = np.arange(0.0, 20.0, h)
    j = bath.spectral_density(MODEL, grid)
    deriv = np.diff(j) / h
    # consecutive finite-difference slopes change by at most |J''| * h
    curvature = np.abs(np.diff(deriv))
    assert np.max(curvature) < 50.0 * h


def test_spectral_density_has_interlobe_dip():
    grid = np.linspace(0.5, 8.0, 2001)
    j = bath.spectral_density(MODEL, grid)
    ipeak = int(np.argmax(j))
    after = j[ipeak:]
    idip = ipeak + int(np.argmin(after[: int(len(after) * 0.8)]))
    assert j[idip] < 0.05 * j[ipeak]            # pronounced dip
    assert np.max(j[idip:]) > 5.0 * j[idip]     # second lobe recovers


def test_spectral_density_rejects_negative():
    with pytest.raises(ValueError):
        bath.spectral_density(MODEL, -1.0)


def test_bose_zero_temperature():
    assert bath.bose_occupation(1.0, 0.0) == 0.0


def test_bose_definitional_point():
    t = 5.0
    omega = KB_MEV_PER_K * t
    assert bath.bose_occupation(omega, t) == pytest.approx(1.0 / (math.e - 1.0))
    assert bath.bose_occupation(omega, t) == pytest.approx(0.58198, abs=1e-5)


def test_bose_value_1mev_5k():
    # 1/(exp(1/0.43087) - 1)
    x = 1.0 / (KB_MEV_PER_K * 5.0)
    assert bath.bose_occupation(1.0, 5.0) == pytest.approx(1.0 / math.expm1(x), rel=1e-12)
    assert bath.bose_occupation(1.0, 5.0) == pytest.approx(0.1088, abs=2e-4)


def test_bose_detailed_balance_identity():
    for x in np.geomspace(0.1, 20.0, 25):
        t = 7.0
        omega = x * KB_MEV_PER_K * t
        n = bath.bose_occupation(omega, t)
        assert n + 1.0 == pytest.approx(math.exp(x) * n, rel=1e-12)


def test_bose_monotonic_in_temperature():
    ns = [bath.bose_occupation(1.0, t) for t in (1.0, 2.0, 5.0, 10.0, 50.0)]
    assert np.all(np.diff(ns) > 0)


def test_bose_underflow_and_errors():
    assert bath.bose_occupation(100.0, 1e-3) == 0.0
    with pytest.raises(ValueError):
        bath.bose_occupation(0.0, 5.0)
    with pytest.raises(ValueError):
        bath.bose_occupation(-1.0, 5.0)
    with pytest.raises(ValueError):
        bath.bose_occupation(1.0, -5.0)


def test_piezo_channel_shares_cutoffs():
    p = 1e-9
    assert bath.spectral_density_piezo(MODEL, 0.0, p) == 0.0
    grid = np.arange(0.01, 50.0, 0.01)
    jp = np.abs(bath.spectral_density_piezo(MODEL, grid, p))
    jmax = float(np.max(jp))
    assert np.all(jp[grid >= 15.0] < 1e-6 * jmax)


def test_piezo_prefactor_scales_quadratically():
    a = bath.piezo_prefactor(MODEL, 1e-9)
    b = bath.piezo_prefactor(MODEL, 2e-9)
    assert b == pytest.approx(4.0 * a, rel=1e-12)
