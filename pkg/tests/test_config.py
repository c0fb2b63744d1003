import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from patternsparse import InputError, RunConfig
from patternsparse.planar import C_F


def test_defaults_round_trip():
    cfg = RunConfig(k=9, d=1, seed=3)
    assert RunConfig.from_dict(cfg.to_dict()) == cfg
    assert cfg.improve_config().d == 1


@pytest.mark.parametrize("bad", [{"k": 1}, {"d": -1}, {"h": 2}, {"seed": -1}, {"trials": 0},
                                 {"lam_c": 0}, {"heavy_scale": -1.0}, {"sparsity_c": 0}])
def test_validation(bad):
    with pytest.raises(InputError):
        RunConfig(**bad)


def test_unknown_keys():
    with pytest.raises(InputError, match="bogus"):
        RunConfig.from_dict({"k": 4, "bogus": 2})


def test_sparsity_bound_values():
    # 0.2 * 3 * log2(9)^2 = 6.03 and 0.2 * 4 * 16 = 12.8
    assert RunConfig(k=9).sparsity_bound() == 6
    assert RunConfig(k=16).sparsity_bound() == 12
    assert RunConfig(k=4, d=1).sparsity_bound() == 14


@given(st.integers(2, 500), st.integers(0, 3))
def test_sparsity_bound_formula(k, d):
    want = math.floor(0.2 * math.sqrt(k) * math.log2(k) ** 2 * (2 * d + 1) ** 2)
    assert RunConfig(k=k, d=d).sparsity_bound() == want


@given(st.integers(2, 400), st.integers(0, 50))
def test_budgets(k, diam):
    lam_r, lam_c = RunConfig(k=k).budgets(diam)
    klog = k * math.log2(k)
    assert lam_r == pytest.approx(100 * C_F * (diam + 1) + 100 * klog)
    assert lam_c == pytest.approx(2 * C_F * (diam + 1) + 2 * klog)


def test_depth_cap():
    assert RunConfig().depth_cap(100) == math.ceil(5 * math.log(100) / math.log(7 / 6))
