import math
import os
import subprocess

import numpy as np
import pytest

import jws


def test_eval_and_distance():
    s = jws.FunctionSpec.sin()
    assert jws.eval(s, 0) == 0
    assert jws.eval(s, 1j * math.pi).imag == pytest.approx(math.sinh(math.pi))
    assert jws.eval(s, 800j) is None
    assert jws.chordal_distance(1, -1) == pytest.approx(2.0)
    assert jws.chordal_distance_to_infinity(0) == 2.0


def test_catalog_errors():
    with pytest.raises(ValueError):
        jws.FunctionSpec.morosawa_g(0.5)
    with pytest.raises(ValueError):
        jws.FunctionSpec.from_name("tan", [])
    assert "lambda-sin" in jws.FunctionSpec.catalog_names()


def test_max_modulus_and_table():
    s = jws.FunctionSpec.sin()
    assert jws.log_max_modulus(s, 2.0) == pytest.approx(math.log(math.sinh(2.0)), rel=1e-10)
    r = jws.find_escape_radius(s)
    t = jws.build_table(s, r, 6)
    assert math.exp(t.log_levels[0]) == pytest.approx(r)
    assert all(b > a for a, b in zip(t.log_levels, t.log_levels[1:]))


def test_classify_and_render(tmp_path):
    d = jws.prepare_dynamics(jws.FunctionSpec.sin())
    assert d.classify(0).tag == jws.Tag.Attracted
    assert d.classify(10j).tag == jws.Tag.FastEscaping
    assert d.in_A_R(3j * d.table.radius)

    g = jws.render(d, jws.Region(-5, 5, -5, 5), 64, 48, threads=2)
    codes = g.codes
    assert codes.shape == (48, 64) and codes.dtype == np.uint8
    # conjugation symmetry of the label field
    assert np.array_equal(codes, codes[::-1, :])

    p = tmp_path / "g.jwsg"
    jws.save_grid(g, str(p))
    back = jws.load_grid(str(p))
    assert back == g
    assert p.read_bytes() == g.encode()
    assert jws.decode_grid(g.encode()) == g
    with pytest.raises(ValueError):
        jws.decode_grid(g.encode()[:-1])
    rebuilt = jws.GridField(codes, g.region, g.meta)
    assert rebuilt == g


def test_reports():
    rep = jws.verify_report("koebe", 500)
    assert list(rep) == ["claim", "spec", "settings", "outcome", "evidence"]
    assert rep["outcome"] == "pass"
    assert jws.verify_report("real-line-trapped", 200)["outcome"] == "pass"
    web = jws.spiderweb_report(jws.FunctionSpec.sin(), region=jws.Region(-1, 1, -1, 1), resolution=64,
                               buried_samples=5)
    assert web["outcome"] == "fail"
    assert web["evidence"]["chain_found"] is False


def test_diameter_report():
    d = jws.prepare_dynamics(jws.FunctionSpec.sin())
    g = jws.render(d, jws.Region(-10, 10, -5, 5), 128, 64)
    import json
    rep = json.loads(jws.diameter_report(g, [0.01, 3.0]))
    assert rep["evidence"]["spherical_counts"][1]["components"] == 0


@pytest.mark.skipif("JWS_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_agrees_with_module(tmp_path):
    out = tmp_path / "c.jwsg"
    subprocess.run([os.environ["JWS_CLI"], "render", "--function", "sin", "--region", "-5,5,-5,5",
                    "--res", "64x48", "--out", str(out)], check=True)
    d = jws.prepare_dynamics(jws.FunctionSpec.sin())
    assert jws.load_grid(str(out)) == jws.render(d, jws.Region(-5, 5, -5, 5), 64, 48)
