import math
import os
import json

import pytest

import decaylab as dl


def test_heat_kernel_mass_scaling():
    t = 2.0
    assert dl.heat_kernel([0.0, 0.0, 0.0], t) == pytest.approx((4 * math.pi * t) ** -1.5, rel=1e-14)
    lam = 3.0
    x = [0.3, -0.2, 0.5]
    y = [lam * c for c in x]
    assert dl.heat_kernel(y, lam * lam * t) == pytest.approx(dl.heat_kernel(x, t) / lam**3, rel=1e-13)


def test_omega_at_origin_is_finite():
    t = 1.0
    assert dl.omega([0.0, 0.0, 0.0], t) == pytest.approx(-1.0 / (4 * math.pi * math.sqrt(math.pi * t)), rel=1e-12)
    assert len(dl.omega_derivatives([1.0, 0.5, 0.2], t, 2)) == 9


def test_oseen_tensor_is_divergence_free():
    dg = dl.oseen_tensor([0.7, -0.3, 1.1], 0.5, 1)
    for i in range(3):
        assert abs(sum(dg[9 * i + 3 * j + j] for j in range(3))) < 1e-12


def test_heat_rate_alpha_one():
    ts = [10 * 10 ** (2 * k / 14) for k in range(15)]
    vals = [dl.heat_lq_norm(1.0, 1.0, math.inf, t) for t in ts]
    fit = dl.fit_decay_exponent(ts, vals, 10.0, 1000.0)
    assert fit["slope"] == pytest.approx(-0.5, abs=0.05)


def test_fit_rejects_short_windows():
    with pytest.raises(dl.DomainError):
        dl.fit_decay_exponent([1.0, 2.0, 3.0], [1.0, 0.5, 0.3], 1.0, 3.0)


def test_convolution_routes_agree():
    a = dl.convolution_integral(1.0, 1.0, 2.0, 4.0, 10.0)
    b = dl.convolution_integral_closed_inner(1.0, 1.0, 2.0, 4.0, 10.0)
    assert a == pytest.approx(b, rel=1e-7)
    with pytest.raises(dl.DomainError):
        dl.convolution_integral(1.0, 1.0, 3.5, 4.0, 10.0)


def test_time_integral_closed_form():
    grid = [0.0, 1.0, 10.0, 100.0]
    vals = dl.time_integral(2.0, 2.0, grid)
    for t, v in zip(grid, vals):
        assert v == pytest.approx(1.0 - 1.0 / (1.0 + t), abs=1e-10)


def test_unit_cutoff_representation():
    res = dl.representation_residual(2.0, 1.0, [[10.0, 0.0, 0.0]], 1.0, unit_cutoff=True)
    assert res[0] < 1e-6


def test_picard_small_data_contracts():
    out = dl.picard_run(m0=0.5, N=32, L=16.0, t_final=10.0, time_nodes=12, max_iterations=4)
    assert out["contracting"]
    assert out["max_divergence"] < 1e-10
    assert len(out["linf"]) == len(out["times"])


def test_picard_rejects_bad_exponents():
    with pytest.raises(dl.ConfigError):
        dl.picard_run(alpha=1.0, q=2.0, m0=0.1)


def test_run_command_writes_summary(tmp_path):
    cfg = {"kernels.points": 4, "kernels.envelope_count": 17, "kernels.envelope_t_min": 1e-4,
           "kernels.envelope_t_max": 1e6}
    config_dir = os.environ.get("DECAYLAB_CONFIG_DIR")
    if config_dir is None:
        pytest.skip("DECAYLAB_CONFIG_DIR not set")
    budgets = dl.load_config(os.path.join(config_dir, "budgets.cfg"))
    rc = dl.run_command("verify-kernels", cfg, budgets, str(tmp_path))
    assert rc == 0
    report = json.loads((tmp_path / "verify-kernels.json").read_text())
    assert all(c["pass"] for c in report["checks"])
    assert (tmp_path / "summary.tsv").read_text().startswith("check\tpredicted")
