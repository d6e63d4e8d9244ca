import numpy as np
import pytest
from scipy import stats

from bridgecast.ols import INTERCEPT, DesignMatrix, RegressionFit, fit, predict, summary_table


def normal_equations_oracle(X, y, intercept=True):
    """Textbook normal-equations fit with an explicit matrix inverse."""
    if intercept:
        X = np.column_stack([np.ones(len(X)), X])
    n, k = X.shape
    xtx_inv = np.linalg.inv(X.T @ X)
    beta = xtx_inv @ X.T @ y
    resid = y - X @ beta
    rss = float(resid @ resid)
    s2 = rss / (n - k)
    se = np.sqrt(s2 * np.diag(xtx_inv))
    tss = float(np.sum((y - y.mean()) ** 2)) if intercept else float(y @ y)
    r2 = 1.0 - rss / tss
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - k)
    n_slope = k - 1 if intercept else k
    f = ((tss - rss) / n_slope) / (rss / (n - k))
    return beta, se, r2, adj, np.sqrt(s2), f


def random_problem(rng, n, k):
    X = rng.standard_normal((n, k)) * rng.uniform(0.5, 3.0, size=k)
    beta = rng.standard_normal(k + 1)
    y = beta[0] + X @ beta[1:] + rng.standard_normal(n)
    return X, y


def test_perfect_line():
    design = DesignMatrix(("x",), np.array([[1.0], [2.0], [3.0]]))
    result = fit(design, np.array([1.0, 2.0, 3.0]))
    assert result.coefficients[INTERCEPT] == pytest.approx(0.0, abs=1e-12)
    assert result.coefficients["x"] == pytest.approx(1.0, abs=1e-12)
    assert result.r2 == pytest.approx(1.0)
    np.testing.assert_allclose(result.residuals, 0.0, atol=1e-12)
    assert result.f_stat == np.inf


def test_constant_column_collinear_with_intercept():
    design = DesignMatrix(("x",), np.full((5, 1), 2.0))
    with pytest.raises(ValueError, match="collinear"):
        fit(design, np.arange(5.0))


def test_duplicate_columns_named_in_error():
    data = np.column_stack([np.arange(6.0), np.arange(6.0) * 2.0])
    design = DesignMatrix(("a", "b"), data)
    with pytest.raises(ValueError) as exc:
        fit(design, np.arange(6.0))
    assert "a" in str(exc.value) or "b" in str(exc.value)


def test_matches_normal_equations_oracle():
    rng = np.random.default_rng(3)
    X, y = random_problem(rng, 50, 4)
    result = fit(DesignMatrix(tuple("abcd"), X), y)
    beta, se, r2, adj, rse, f = normal_equations_oracle(X, y)
    got_beta = [result.coefficients[n] for n in (INTERCEPT, "a", "b", "c", "d")]
    got_se = [result.std_errors[n] for n in (INTERCEPT, "a", "b", "c", "d")]
    np.testing.assert_allclose(got_beta, beta, rtol=1e-8)
    np.testing.assert_allclose(got_se, se, rtol=1e-8)
    assert result.r2 == pytest.approx(r2, rel=1e-8)
    assert result.adj_r2 == pytest.approx(adj, rel=1e-8)
    assert result.resid_std_error == pytest.approx(rse, rel=1e-8)
    assert result.f_stat == pytest.approx(f, rel=1e-8)


def test_oracle_equivalence_on_many_random_problems():
    rng = np.random.default_rng(17)
    for _ in range(25):
        n = int(rng.integers(12, 100))
        k = int(rng.integers(1, min(8, n - 2)))
        X, y = random_problem(rng, n, k)
        names = tuple(f"x{i}" for i in range(k))
        result = fit(DesignMatrix(names, X), y)
        beta, se, *_ = normal_equations_oracle(X, y)
        got = [result.coefficients[c] for c in (INTERCEPT,) + names]
        np.testing.assert_allclose(got, beta, rtol=1e-8)
        np.testing.assert_allclose(
            [result.std_errors[c] for c in (INTERCEPT,) + names], se, rtol=1e-8
        )


def test_scale_equivariance_is_exact():
    rng = np.random.default_rng(29)
    X, y = random_problem(rng, 40, 3)
    names = ("a", "b", "c")
    base = fit(DesignMatrix(names, X), y)
    scaled_X = X.copy()
    c = 10.0  # power of two times ten keeps the comparison clean
    scaled_X[:, 1] *= c
    scaled = fit(DesignMatrix(names, scaled_X), y)
    assert scaled.coefficients["b"] == pytest.approx(
        base.coefficients["b"] / c, rel=1e-10
    )
    assert scaled.std_errors["b"] == pytest.approx(
        base.std_errors["b"] / c, rel=1e-10
    )
    assert scaled.r2 == pytest.approx(base.r2, rel=1e-10)
    assert scaled.f_stat == pytest.approx(base.f_stat, rel=1e-10)
    np.testing.assert_allclose(scaled.residuals, base.residuals, atol=1e-10)


def test_residuals_orthogonal_to_design():
    rng = np.random.default_rng(31)
    X, y = random_problem(rng, 60, 5)
    result = fit(DesignMatrix(tuple("abcde"), X), y)
    full = np.column_stack([np.ones(60), X])
    assert np.max(np.abs(full.T @ result.residuals)) <= 1e-8 * np.linalg.norm(y)
    assert abs(result.residuals.sum()) <= 1e-8 * np.linalg.norm(y)
    np.testing.assert_array_equal(result.fitted + result.residuals, y)


def test_adjusted_r2_never_exceeds_r2():
    rng = np.random.default_rng(43)
    X, y = random_problem(rng, 30, 4)
    result = fit(DesignMatrix(tuple("abcd"), X), y)
    assert result.adj_r2 <= result.r2


def test_p_values_match_t_distribution():
    rng = np.random.default_rng(47)
    X, y = random_problem(rng, 40, 2)
    result = fit(DesignMatrix(("a", "b"), X), y)
    t = result.coefficients["a"] / result.std_errors["a"]
    expected = 2 * stats.t.sf(abs(t), result.n_obs - result.n_params)
    assert result.p_values["a"] == pytest.approx(expected, rel=1e-12)


def test_predict_reference_point():
    fit_result = RegressionFit(
        coefficients={INTERCEPT: 0.736, "sum": 0.497, "ESI_c": 0.0,
                      "ICE": 0.0, "ipi": 0.0, "cem": 0.0},
        std_errors={}, p_values={}, fitted=np.zeros(1), residuals=np.zeros(1),
        r2=1.0, adj_r2=1.0, resid_std_error=0.0, f_stat=np.inf,
        n_obs=96, n_params=6, intercept=True,
    )
    row = {"sum": 1.0, "ESI_c": 0.0, "ICE": 0.0, "ipi": 0.0, "cem": 0.0}
    assert predict(fit_result, row) == pytest.approx(1.233)


def test_predict_linearity_and_intercept():
    rng = np.random.default_rng(53)
    X, y = random_problem(rng, 25, 3)
    result = fit(DesignMatrix(("a", "b", "c"), X), y)
    zero = {"a": 0.0, "b": 0.0, "c": 0.0}
    assert predict(result, zero) == pytest.approx(result.coefficients[INTERCEPT])
    x1 = {"a": 1.0, "b": -2.0, "c": 0.5}
    x2 = {"a": 0.3, "b": 0.7, "c": -1.1}
    both = {k: x1[k] + x2[k] for k in x1}
    assert predict(result, x1) + predict(result, x2) - predict(result, zero) == (
        pytest.approx(predict(result, both))
    )


def test_predict_missing_regressor_named():
    rng = np.random.default_rng(59)
    X, y = random_problem(rng, 25, 2)
    result = fit(DesignMatrix(("a", "b"), X), y)
    with pytest.raises(ValueError, match="'b'"):
        predict(result, {"a": 1.0})
    # extra keys are fine: callers pass the full regressor row
    assert isinstance(predict(result, {"a": 1.0, "b": 2.0, "zz": 9.9}), float)


def test_too_few_observations_rejected():
    design = DesignMatrix(("a", "b"), np.ones((3, 2)) + np.eye(3, 2))
    with pytest.raises(ValueError, match="observations"):
        fit(design, np.ones(3))


def test_design_validation():
    with pytest.raises(ValueError, match="duplicate"):
        DesignMatrix(("a", "a"), np.ones((3, 2)))
    with pytest.raises(ValueError, match="reserved"):
        DesignMatrix((INTERCEPT,), np.ones((3, 1)))
    with pytest.raises(ValueError, match="non-finite"):
        DesignMatrix(("a",), np.array([[1.0], [np.inf]]))
    with pytest.raises(ValueError, match="missing regressor"):
        DesignMatrix.from_rows([{"a": 1.0}], ("a", "b"))


def test_summary_table_layout():
    rng = np.random.default_rng(61)
    X, y = random_problem(rng, 96, 3)
    result = fit(DesignMatrix(("sum", "ESI_c", "ipi"), X), y)
    text = summary_table([result, result], labels=["1", "2"])
    assert "Constant" in text
    assert "(" in text  # standard errors beneath coefficients
    assert "Observations" in text and "96" in text
    assert "Adjusted R2" in text
    assert "Residual Std. Error" in text
    assert "F Statistic" in text
    assert "p-values" in text
