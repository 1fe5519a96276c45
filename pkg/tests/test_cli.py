"""Command-line surface: JSON contracts, exit codes, determinism."""
import json
import subprocess
import sys

import pytest

from wstarkit import core, sampling
from wstarkit.cli import main


def run_cli(*argv, env_tol=None):
    cmd = [sys.executable, "-m", "wstarkit.cli", *argv]
    env = None
    if env_tol is not None:
        import os
        env = dict(os.environ, WSTARKIT_TOLERANCE=str(env_tol))
    return subprocess.run(cmd, capture_output=True, text=True, env=env)


@pytest.fixture(scope="module")
def fixtures(tmp_path_factory):
    d = tmp_path_factory.mktemp("elements")
    gen = sampling.rng(71)
    x = sampling.random_element((2,), gen)
    u = sampling.random_partial_isometry((2,), gen, ranks=[1])
    rho = sampling.random_density((2,), gen)
    paths = {}
    for name, el in [("x", x), ("u", u), ("rho", rho)]:
        f = d / f"{name}.json"
        f.write_text(core.dumps(el))
        paths[name] = str(f)
    paths["dir"] = d
    return paths


def test_polar_verb_round_trip(fixtures):
    r = run_cli("polar", fixtures["x"])
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    u = core.from_json_dict(out["u"])
    absx = core.from_json_dict(out["absx"])
    x = core.loads(open(fixtures["x"]).read())
    assert core.dist(u * absx, x) < 1e-9


def test_supports_verb(fixtures):
    r = run_cli("supports", fixtures["u"])
    assert r.returncode == 0
    out = json.loads(r.stdout)
    assert out["rank"] == [1]
    left = core.from_json_dict(out["left"])
    assert core.is_projection(left)


def test_exit_code_1_on_bad_input(fixtures):
    r = run_cli("polar", "/does/not/exist.json")
    assert r.returncode == 1
    assert "error" in r.stderr
    bad = fixtures["dir"] / "bad.json"
    bad.write_text("{not json")
    r2 = run_cli("polar", str(bad))
    assert r2.returncode == 1
    r3 = run_cli("verify", "no-such-suite")
    assert r3.returncode == 1


def test_exit_code_2_on_failing_report(fixtures):
    # s = e11 + e12 violates s s* s = s; its closure is not an inverse
    # semigroup and the emitted report must say so with exit code 2
    from fractions import Fraction
    from wstarkit.exact import QI
    s = core.Element([[[QI(1), QI(1)], [QI(0), QI(0)]]], core.QQI)
    f = fixtures["dir"] / "noninv.json"
    f.write_text(core.dumps(s))
    r = run_cli("check-isg", str(f), "--cap", "40")
    assert r.returncode == 2
    out = json.loads(r.stdout)
    assert out["pass"] is False
    assert out["witness"]["kind"] == "s s* s != s"


def test_verify_deterministic_bytes(fixtures):
    a = run_cli("verify", "free-action", "--samples", "30", "--seed", "5")
    b = run_cli("verify", "free-action", "--samples", "30", "--seed", "5")
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout
    c = run_cli("verify", "free-action", "--samples", "30", "--seed", "6")
    assert c.stdout != a.stdout


def test_verify_report_schema(fixtures):
    r = run_cli("verify", "properly-infinite", "--seed", "3")
    out = json.loads(r.stdout)
    for key in ("check", "params", "seed", "max_defect", "pass"):
        assert key in out, key
    assert out["seed"] == 3


def test_tolerance_env_and_flag(fixtures):
    r = run_cli("supports", fixtures["x"], "--tolerance", "0.99")
    coarse = json.loads(r.stdout)["rank"]
    r2 = run_cli("supports", fixtures["x"], env_tol=1e-9)
    fine = json.loads(r2.stdout)["rank"]
    assert fine == [2]
    assert coarse != fine


def test_backend_conversion(fixtures):
    r = run_cli("supports", fixtures["x"], "--backend", "f64")
    assert r.returncode == 0
    # exact backend keeps rational arithmetic: a float-loaded projection
    # converts and the answer comes back on the exact backend
    from wstarkit.cli import _to_backend
    x = core.loads(open(fixtures["x"]).read())
    q = _to_backend(x, core.QQI)
    assert q.backend == core.QQI
    assert core.dist(_to_backend(q, core.F64), x) == 0.0


def test_word_verbs():
    r = run_cli("cuntz-mul", "--n", "2", "s[1,2]S[]", "s[]S[1]")
    assert json.loads(r.stdout)["product"] == "s[1,2]S[1]"
    r2 = run_cli("cuntz-mul", "--n", "2", "s[]S[1]", "s[2]S[]")
    assert json.loads(r2.stdout)["product"] == "0"
    r3 = run_cli("car-mul", "--n", "2", "+P{}Q{}C{1}A{}", "+P{}Q{}C{}A{1}")
    assert json.loads(r3.stdout)["product"] == "+P{}Q{1}C{}A{}"
    r4 = run_cli("monogenic-nf", "uuU")
    out = json.loads(r4.stdout)
    assert out["q"] == 2 and out["power"] == 1
    assert out["gluskin"] == [2, 2, 1]


def test_main_callable_directly(fixtures):
    # console entry point returns exit codes rather than raising
    assert main(["monogenic-nf", "Uu"]) == 0
    assert main(["polar", "/missing.json"]) == 1
