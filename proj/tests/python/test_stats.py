# Copyright 2026 The Coins Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest
import statsmodels.api as sm

import coins


def logistic_data(n, seed):
    rng = np.random.default_rng(seed)
    x = np.column_stack([np.ones(n), rng.normal(size=n), rng.normal(size=n)])
    p = 1 / (1 + np.exp(-(x @ np.array([0.3, -0.8, 0.5]))))
    return x, (rng.uniform(size=n) < p).astype(float)


def test_logistic_matches_statsmodels():
    x, y = logistic_data(400, 1)
    fit = coins.fit_logistic(x, y, ["const", "a", "b"])
    ref = sm.Logit(y, x).fit(disp=0)
    est = [c["estimate"] for c in fit["coefficients"]]
    se = [c["se"] for c in fit["coefficients"]]
    np.testing.assert_allclose(est, ref.params, atol=1e-8)
    np.testing.assert_allclose(se, ref.bse, rtol=1e-6)
    assert fit["loglik"] == pytest.approx(ref.llf, abs=1e-8)
    assert fit["aic"] == pytest.approx(ref.aic, abs=1e-8)


def test_fractional_logit_matches_quasi_binomial():
    rng = np.random.default_rng(2)
    x = np.column_stack([np.ones(300), rng.normal(size=300)])
    y = np.clip(1 / (1 + np.exp(-(0.2 + 0.7 * x[:, 1]))) + rng.normal(0, 0.1, 300), 0, 1)
    fit = coins.fit_fractional_logit(x, y)
    ref = sm.GLM(y, x, family=sm.families.Binomial()).fit(scale="X2")
    np.testing.assert_allclose([c["estimate"] for c in fit["coefficients"]], ref.params, atol=1e-8)
    np.testing.assert_allclose([c["se"] for c in fit["coefficients"]], ref.bse, rtol=1e-6)


def test_linear_matches_ols():
    rng = np.random.default_rng(3)
    x = np.column_stack([np.ones(100), rng.normal(size=100)])
    y = 1.0 + 2.0 * x[:, 1] + rng.normal(size=100)
    fit = coins.fit_linear(x, y)
    ref = sm.OLS(y, x).fit()
    np.testing.assert_allclose([c["estimate"] for c in fit["coefficients"]], ref.params, atol=1e-10)
    assert fit["loglik"] == pytest.approx(ref.llf, abs=1e-8)


def test_separation_is_reported():
    x = np.column_stack([np.ones(6), np.arange(6.0)])
    with pytest.raises(coins.SeparationError):
        coins.fit_logistic(x, np.array([0, 0, 0, 1, 1, 1.0]))


def test_two_way_anova_matches_statsmodels():
    import pandas as pd
    from statsmodels.formula.api import ols

    rng = np.random.default_rng(4)
    a = np.repeat(["0", "45"], 40)
    b = np.tile(np.repeat(["0.0", "0.5"], 20), 2)
    y = rng.normal(size=80) + (a == "45") * 0.8
    keep = np.arange(80) % 7 != 3  # unbalanced cells
    a, b, y = a[keep], b[keep], y[keep]
    table = {r["effect"]: r for r in coins.two_way_anova(list(y), list(a), list(b), "theta",
                                                         "epsilon")}
    df = pd.DataFrame({"y": y, "a": a, "b": b})
    ref = sm.stats.anova_lm(ols("y ~ C(a, Sum) * C(b, Sum)", df).fit(), typ=3)
    assert table["theta"]["ss"] == pytest.approx(ref.loc["C(a, Sum)", "sum_sq"], rel=1e-9)
    assert table["theta:epsilon"]["f"] == pytest.approx(ref.loc["C(a, Sum):C(b, Sum)", "F"],
                                                        rel=1e-9)


def test_icc_and_spearman_brown():
    assert coins.icc([[1, 1], [3, 3], [5, 5]])["value"] == 1.0
    r = coins.spearman_brown_inverse(0.93)
    assert coins.spearman_brown(r) == pytest.approx(0.93, abs=1e-12)
    with pytest.raises(coins.ValidationError):
        coins.spearman_brown(1.5)


def test_compare_models_tie_break():
    rows = coins.compare_models([("big", 4, -10.0), ("small", 3, -11.0), ("worse", 2, -20.0)])
    assert [r["name"] for r in rows] == ["small", "big", "worse"]
    assert rows[0]["delta_aic"] == 0.0
