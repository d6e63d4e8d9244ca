"""Ordinary least squares with classical inference statistics.

The solver works through a rank-revealing QR decomposition rather than the
raw normal equations; coefficient covariance is recovered from the
triangular factor.  Reported statistics are the classical ones: standard
errors from ``s^2 (X'X)^-1``, (adjusted) R-squared, residual standard error
and the overall F statistic.  p-values come from the t distribution with
``n - k`` degrees of freedom and feed only the significance stars of the
text summary, never any numeric logic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import linalg as sla
from scipy import stats as sstats

INTERCEPT = "const"

_STAR_LEVELS = ((0.01, "***"), (0.05, "**"), (0.1, "*"))


@dataclass(frozen=True)
class DesignMatrix:
    """Named regressor columns; the intercept is added at fit time."""

    names: tuple[str, ...]
    data: np.ndarray
    intercept: bool = True

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2:
            raise ValueError(f"design data must be 2-D, got shape {data.shape}")
        if data.shape[1] != len(self.names):
            raise ValueError(
                f"{len(self.names)} names for {data.shape[1]} columns"
            )
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate regressor names in {self.names}")
        if INTERCEPT in self.names:
            raise ValueError(f"{INTERCEPT!r} is reserved for the intercept column")
        if data.size and not np.all(np.isfinite(data)):
            raise ValueError("design matrix contains non-finite entries")
        object.__setattr__(self, "data", data)

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Mapping[str, float]],
        names: Sequence[str],
        intercept: bool = True,
    ) -> "DesignMatrix":
        """Assemble a design from per-observation dicts; missing keys raise."""
        names = tuple(names)
        try:
            data = np.array([[row[name] for name in names] for row in rows], float)
        except KeyError as exc:
            raise ValueError(f"row is missing regressor {exc.args[0]!r}") from None
        return cls(names=names, data=data, intercept=intercept)

    @property
    def n_obs(self) -> int:
        return self.data.shape[0]

    @property
    def n_params(self) -> int:
        return self.data.shape[1] + (1 if self.intercept else 0)


@dataclass(frozen=True)
class RegressionFit:
    """OLS estimates plus the usual summary statistics."""

    coefficients: dict[str, float]
    std_errors: dict[str, float]
    p_values: dict[str, float]
    fitted: np.ndarray
    residuals: np.ndarray
    r2: float
    adj_r2: float
    resid_std_error: float
    f_stat: float
    n_obs: int
    n_params: int
    intercept: bool

    @property
    def regressor_names(self) -> tuple[str, ...]:
        return tuple(name for name in self.coefficients if name != INTERCEPT)


def fit(design: DesignMatrix, y) -> RegressionFit:
    """Estimate ``y = X beta + e`` by least squares.

    Parameters
    ----------
    design : DesignMatrix
        Full-column-rank regressors; an intercept column is prepended when
        ``design.intercept`` is set.
    y : array_like
        Dependent variable, one value per design row.

    Raises
    ------
    ValueError
        If the design is rank deficient (the message names the collinear
        columns), the system has no residual degrees of freedom, or inputs
        are non-finite.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size != design.n_obs:
        raise ValueError(
            f"dependent variable has shape {y.shape}, expected ({design.n_obs},)"
        )
    if y.size and not np.all(np.isfinite(y)):
        raise ValueError("dependent variable contains non-finite values")

    names = ((INTERCEPT,) if design.intercept else ()) + design.names
    if design.intercept:
        X = np.column_stack([np.ones(design.n_obs), design.data])
    else:
        X = design.data
    n, k = X.shape
    if n <= k:
        raise ValueError(f"{n} observations cannot identify {k} parameters")

    q, r, piv = sla.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = max(n, k) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    rank = int(np.sum(diag > tol))
    if rank < k:
        dropped = [names[piv[j]] for j in range(rank, k)]
        raise ValueError(f"design matrix is rank deficient; collinear columns: "
                         f"{', '.join(sorted(dropped))}")

    beta_piv = sla.solve_triangular(r, q.T @ y)
    beta = np.empty(k)
    beta[piv] = beta_piv

    fitted = X @ beta
    residuals = y - fitted
    rss = float(residuals @ residuals)
    df_resid = n - k
    s2 = rss / df_resid

    r_inv = sla.solve_triangular(r, np.eye(k))
    cov_piv = r_inv @ r_inv.T
    xtx_inv = np.empty((k, k))
    xtx_inv[np.ix_(piv, piv)] = cov_piv
    std_errors = np.sqrt(s2 * np.diag(xtx_inv))

    if design.intercept:
        tss = float(np.sum((y - y.mean()) ** 2))
    else:
        tss = float(y @ y)
    if tss <= 0.0:
        raise ValueError("dependent variable has zero variation")
    r2 = 1.0 - rss / tss
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / df_resid

    # F = (R2 / n_slope) / ((1 - R2) / df_resid), written in RSS/TSS form so
    # a perfect fit yields inf instead of 0/0.
    n_slope = k - 1 if design.intercept else k
    if rss == 0.0:
        f_stat = float("inf")
    else:
        f_stat = ((tss - rss) / n_slope) / (rss / df_resid)

    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(std_errors > 0, beta / std_errors, np.inf)
    p_values = 2.0 * sstats.t.sf(np.abs(t_stats), df_resid)

    return RegressionFit(
        coefficients={name: float(b) for name, b in zip(names, beta)},
        std_errors={name: float(s) for name, s in zip(names, std_errors)},
        p_values={name: float(p) for name, p in zip(names, p_values)},
        fitted=fitted,
        residuals=residuals,
        r2=float(r2),
        adj_r2=float(adj_r2),
        resid_std_error=float(np.sqrt(s2)),
        f_stat=float(f_stat),
        n_obs=n,
        n_params=k,
        intercept=design.intercept,
    )


def predict(fit_result: RegressionFit, row: Mapping[str, float]) -> float:
    """Evaluate the fitted equation at a named regressor row.

    Extra keys in `row` are ignored; a missing regressor raises with its
    name so callers can report which input could not be built.
    """
    total = fit_result.coefficients.get(INTERCEPT, 0.0)
    for name in fit_result.regressor_names:
        if name not in row:
            raise ValueError(f"prediction row is missing regressor {name!r}")
        total += fit_result.coefficients[name] * float(row[name])
    return float(total)


def _stars(p: float) -> str:
    for level, marker in _STAR_LEVELS:
        if p < level:
            return marker
    return ""


def summary_table(
    fits: Sequence[RegressionFit],
    labels: Sequence[str] | None = None,
) -> str:
    """Side-by-side text summary of one or more fits.

    Coefficients are printed with significance stars and standard errors in
    parentheses beneath, followed by observation counts, R-squared,
    adjusted R-squared, residual standard error and the F statistic.
    """
    if not fits:
        raise ValueError("no fits to summarise")
    if labels is None:
        labels = [str(i + 1) for i in range(len(fits))]
    if len(labels) != len(fits):
        raise ValueError("one label per fit required")

    names: list[str] = []
    for f in fits:
        for name in f.regressor_names:
            if name not in names:
                names.append(name)
    rows: list[tuple[str, list[str]]] = []
    display = names + ([INTERCEPT] if any(f.intercept for f in fits) else [])
    for name in display:
        shown = "Constant" if name == INTERCEPT else name
        coefs, errs = [], []
        for f in fits:
            if name in f.coefficients:
                coefs.append(f"{f.coefficients[name]:.3f}{_stars(f.p_values[name])}")
                errs.append(f"({f.std_errors[name]:.3f})")
            else:
                coefs.append("")
                errs.append("")
        rows.append((shown, coefs))
        rows.append(("", errs))

    footer = [
        ("Observations", [str(f.n_obs) for f in fits]),
        ("R2", [f"{f.r2:.3f}" for f in fits]),
        ("Adjusted R2", [f"{f.adj_r2:.3f}" for f in fits]),
        ("Residual Std. Error", [f"{f.resid_std_error:.3f}" for f in fits]),
        ("F Statistic", [f"{f.f_stat:.1f}" for f in fits]),
    ]

    label_width = max(
        [len("Residual Std. Error")] + [len(r[0]) for r in rows]
    )
    col_width = max(12, max(len(str(l)) for l in labels) + 2)
    lines = [
        " " * label_width + "".join(f"{str(l):>{col_width}}" for l in labels)
    ]
    lines.append("-" * (label_width + col_width * len(fits)))
    for shown, cells in rows:
        lines.append(
            f"{shown:<{label_width}}" + "".join(f"{c:>{col_width}}" for c in cells)
        )
    lines.append("-" * (label_width + col_width * len(fits)))
    for shown, cells in footer:
        lines.append(
            f"{shown:<{label_width}}" + "".join(f"{c:>{col_width}}" for c in cells)
        )
    lines.append("p-values: * p<0.1; ** p<0.05; *** p<0.01")
    return "\n".join(lines)
