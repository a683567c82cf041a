import math
import os
import subprocess
from pathlib import Path

import pytest

import irslab

ROOT = Path(__file__).resolve().parents[2]
FIXTURES = ROOT / "fixtures"


def test_translation_length_matches_trace_formula():
    g = irslab.Isometry(2.0, 0.0, 0.0, 0.5)
    assert irslab.translation_length(g) == pytest.approx(2 * math.acosh(1.25), abs=1e-12)
    assert irslab.translation_length(irslab.Isometry(1.0, 1.0, 0.0, 1.0)) == 0.0


def test_distance_is_invariant():
    h = irslab.rotation_about_i(0.3) * irslab.dilation(1.7)
    z, w = irslab.HPoint(0.2, 1.1), irslab.HPoint(-0.5, 2.0)
    assert irslab.distance(h(z), h(w)) == pytest.approx(irslab.distance(z, w), abs=1e-12)


def test_dirichlet_area_is_two_pi_chi():
    torus = irslab.punctured_torus(2.0, 2.0, 0.0)
    assert torus.signature == (1, 1)
    assert irslab.dirichlet_area(torus) == pytest.approx(2 * math.pi, abs=1e-6)
    pants = irslab.pair_of_pants(1.0, 1.0, 1.0)
    assert irslab.dirichlet_area(pants) == pytest.approx(2 * math.pi, abs=1e-6)
    genus2 = irslab.load_group(str(FIXTURES / "genus2.grp"))
    assert irslab.certify_group(genus2) == pytest.approx(4 * math.pi, abs=1e-3)


def test_corrupted_fixture_fails_certification():
    bad = irslab.load_group(str(FIXTURES / "corrupted_torus.grp"))
    with pytest.raises(irslab.IrslabError):
        irslab.certify_group(bad)


def test_group_text_round_trip():
    g = irslab.punctured_torus(1.5, 2.5, 0.3)
    back = irslab.parse_group(g.to_text())
    for p, q in zip(g.generators, back.generators):
        assert irslab.frobenius_distance(p, q) < 1e-12


def test_fiber_bound_and_euler_characteristic():
    assert irslab.fiber_bound(2, 0) == 1152
    assert irslab.fiber_bound(1, 1) == 6
    assert irslab.euler_char(2, 0) == -2


def test_thin_part_areas():
    for delta in (0.5, 1.0, 2.0, 4.0):
        check = irslab.check_cusp_strip(delta)
        assert check["closed_form"] == pytest.approx(2 * math.sinh(delta / 2), rel=1e-14)
        assert check["relative_error"] <= 1e-4
    funnel = irslab.check_funnel_sector(1.0, 2.0)
    assert funnel["relative_error"] <= 1e-4
    assert funnel["quadrature"] <= funnel["cusp_bound"]


def test_cusp_escape_is_abelian():
    torus = irslab.punctured_torus(2.0, 2.0, 0.0)
    assert irslab.escape_is_abelian(torus, steps=8, radius=3.0)
    assert not irslab.escape_is_abelian(torus, steps=0, radius=3.0)


def test_estimates_are_reproducible_and_conjugation_invariant():
    sphere = irslab.pair_of_pants(0.0, 0.0, 0.0)
    a = irslab.estimate(sphere, "ClippedInjRad(1)", n=1500, seed=5, threads=1)
    b = irslab.estimate(sphere, "ClippedInjRad(1)", n=1500, seed=5, threads=2)
    assert a == b
    conj = sphere.conjugate(irslab.rotation_about_i(0.4) * irslab.dilation(1.3))
    c = irslab.estimate(conj, "ClippedInjRad(1)", n=1500, seed=9)
    assert abs(a["mean"] - c["mean"]) <= 3 * math.hypot(a["std_error"], c["std_error"])


def test_constant_functional_is_normalised():
    est = irslab.estimate(irslab.pair_of_pants(0.0, 0.0, 0.0), "Constant(1)", n=200)
    assert est["mean"] == 1.0


def test_degenerate_csv_shape():
    out = irslab.degenerate("torus", [1.0, 0.5], ["ClippedInjRad(1)"], n=200, seed=3)
    lines = out["csv"].strip().splitlines()
    assert lines[0] == "t,functional,mean,std_error,bias_bound,n,seed"
    assert len(lines) == 4
    assert lines[-1].startswith("target,")
    assert '"verdicts"' in out["json"] or "verdict" in out["json"]


def test_bad_functional_raises():
    with pytest.raises(irslab.IrslabError):
        irslab.estimate(irslab.pair_of_pants(0.0, 0.0, 0.0), "Mystery(1)", n=10)


@pytest.mark.skipif("IRSLAB_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_fiber_bound():
    out = subprocess.run([os.environ["IRSLAB_CLI"], "fiber-bound", "--surface", "2,0"],
                         capture_output=True, text=True, check=True)
    assert "= 1152" in out.stdout
