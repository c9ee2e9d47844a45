import math

import pytest

import whfact as w


def test_version():
    assert w.__version__ == "0.1.0"


def test_model_round_trip():
    m = w.CoefficientModel.one_jump(1.0, -1.0, 1.0, 2.0, 0.5)
    assert m.drift_at(0.5) == -1.0
    assert w.CoefficientModel.parse(str(m)) == m


def test_gamma_total_constant():
    assert w.gamma_total_const(w.ConstCoeff(1.0, 1.0), 1.0) == pytest.approx(2.33326188235074519, rel=1e-13)


def test_laplace_exponent_quadratic():
    lam = w.laplace_exponent(w.ConstCoeff(1.0, 1.0), 1.0, w.Sign.Plus)
    assert lam == pytest.approx(1.0 - math.sqrt(3.0))


def test_factorization_constant_model():
    m = w.CoefficientModel.constant(1.0, 1.0)
    u = w.Payoff.gaussian_bump(0.0, 0.5)
    h = w.TestFunction.exponential(1.0)
    lhs = w.wh_lhs(m, u, h, 0.0, 0.0)
    assert w.wh_rhs(m, u, h, 0.0, 0.0) == pytest.approx(lhs, rel=1e-3)


def test_resolvent_one_jump():
    m = w.CoefficientModel.one_jump(1.0, -1.0, 1.0, 1.0, 0.5)
    assert w.resolvent(m, w.TestFunction.exponential(1.0), 0.0) == pytest.approx(0.323261462412451, rel=1e-4)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        w.CoefficientModel.constant(1.0, -1.0)
    with pytest.raises(w.ConfigError):
        w.CoefficientModel.parse("v=[1")


def test_strict_passages_agree():
    cfg = w.SimConfig()
    cfg.n_paths = 200
    cfg.dt = 1e-3
    m = w.CoefficientModel.constant(0.5, 1.0)
    assert w.first_passage(m, 0.3, w.Sign.Plus, cfg) == w.first_passage(m, 0.3, w.Sign.Plus, cfg, strict=True)


def test_experiment_reports():
    reports = w.run_experiment("volterra")
    assert reports and all(r.passed for r in reports)


def test_cli_exit_code(tmp_path):
    code, out, err = w.run_cli(["--out", str(tmp_path), "volterra"])
    assert code == 0, err
    assert (tmp_path / "volterra.csv").exists()
