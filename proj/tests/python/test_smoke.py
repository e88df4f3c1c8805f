"""Smoke tests for the python bindings and the installed CLI binary."""

import json
import os
import subprocess

import pytest

import twistlab


def test_rank_of_the_designated_cubic_twist():
    report = twistlab.rank(n=1, kind="cubic-tau", g="z*t^4")
    assert report["rank"] == 6
    assert report["m_values"] == {"mX": 0, "mC": 3}
    assert report["fast_path_used"] is True
    assert report["l_polynomials"]["C"]["coefficients"][-1] == "729"


def test_twist_model_and_certified_partner():
    report = twistlab.twist(kind="sextic-tau", f="t", g="t")
    assert report["model"]["a4"] == "2*t^2"
    assert report["model"]["a6"] == "t^4"
    assert report["isomorphic_partner"]["kind"] == "sextic-tau5"
    assert report["isomorphic_partner"]["verified"] is True


def test_fiber_classifications_agree():
    report = twistlab.fibers(kind="quartic-tau", f="t")
    assert report["all_agree"] is True
    assert [f["tate"]["type"] for f in report["fibers"]] == ["III", "III*"]


def test_surface_shioda_tate_block():
    report = twistlab.surface(kind="cubic-tau", g="z*t^4")
    assert report["b2"] == 10
    assert report["shioda_tate"]["rank_equals_geometric"] is True


def test_verify_example_headline_numbers():
    report = twistlab.verify_example(n=1)
    assert (report["N1"], report["genus"], report["rank"]) == (28, 3, 6)


def test_validation_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        twistlab.rank(n=1, kind="quad", f="t^2")  # square f is not a twist
    with pytest.raises(ValueError):
        twistlab.verify_example(n=2)  # the example requires odd n
    with pytest.raises(ValueError):
        twistlab.run_command("bogus", n=1)


def test_cli_binary_matches_bindings():
    cli = os.environ.get("TWISTLAB_CLI")
    if not cli:
        pytest.skip("TWISTLAB_CLI not set")
    proc = subprocess.run(
        [cli, "rank", "--n", "1", "--kind", "sextic-tau", "--f", "t", "--g", "t",
         "--json-indent", "-1"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout) == twistlab.rank(n=1, kind="sextic-tau", f="t", g="t")

    bad = subprocess.run([cli, "rank", "--kind", "quad", "--f", "t^2"], capture_output=True)
    assert bad.returncode == 2
