import json
import math

import pytest

import isoball


def test_closed_forms():
    assert isoball.ball_volume(3, 1.0) == pytest.approx(4 * math.pi / 3, rel=1e-14)
    r = isoball.unit_volume_radius(5)
    assert isoball.ball_volume(5, r) == pytest.approx(1.0, abs=1e-12)
    assert isoball.cap_volume(2, 1.0, math.pi / 2) == pytest.approx(math.pi / 2)
    assert isoball.reg_inc_beta(0.5, 1.0, 1.0) == pytest.approx(0.5)


def test_lens_round_trip():
    lens = isoball.solve_rho_for_volume(3, 0.1)
    assert isinstance(lens, isoball.LensShape)
    assert lens.volume == pytest.approx(0.1, abs=1e-12)
    assert lens.center_dist ** 2 == pytest.approx(lens.R ** 2 + lens.rho ** 2)
    assert lens.free_area <= isoball.flat_cut_free_area(3, 0.1)


def test_profile_and_distance():
    m = isoball.iso_profile(2, [0.1, 0.5])
    assert m[1] == pytest.approx(2 / math.sqrt(math.pi))
    assert m[0] < m[1]
    d = isoball.distance_bound(3, 0.1)
    assert 2 * isoball.growth_ode(3, 0.1) == pytest.approx(d, abs=1e-4)
    assert isoball.distance_bound(3, 0.5) == 0.0
    scan = isoball.dimension_scan(0.2, [2, 3, 4, 5])
    assert len(scan["D"]) == 4
    assert scan["sup_D"] == max(scan["D"])


def test_variational():
    res = isoball.minimize_profile(3, 0.1, m=500, seed=2, starts=2)
    lens = isoball.solve_rho_for_volume(3, 0.1)
    assert res["converged"]
    assert abs(res["area"] / lens.free_area - 1) < 5e-3
    assert len(res["grid"]) == len(res["radii"]) == 501


def test_errors():
    with pytest.raises(ValueError):
        isoball.solve_rho_for_volume(3, 0.7)
    with pytest.raises(isoball.NumericError):
        isoball.general_cap_free_area_at_volume(3, 0.9, 0.01)


def test_lemma_suite_coarse():
    checks = isoball.run_lemma_suite(resolution_divisor=20, random_bodies=5)
    assert all(c["status"] != "fail" for c in checks)
    assert any(c["status"] == "skipped" for c in checks)


def test_cli(tmp_path):
    code, out, err = isoball.cli(["profile", "--n", "3", "--eps", "0.2", "--out", str(tmp_path)])
    assert code == 0, err
    manifest = json.loads((tmp_path / "profile.manifest.json").read_text())
    assert manifest["config"]["n"] == 3
    assert isoball.cli(["distance", "--eps", "0", "--n", "3"])[0] == 2
