"""Code-length scoring of candidate PCA ranks and argmin selection.

The score of rank k combines four closed-form terms derived from a linear
regression code-length identity:

    lower_total = (nm - kn) * ln(residual energy beyond rank k)
                + nk * ln(gram energy)
                + (mn - kn - 1) * ln(mn / (mn - kn))
                - (nk + 1) * ln(nk)

plus a nonnegative slack ``delta_upper = m*k*ln(2/(m*eps))`` coming from the
step quantization of the loadings; the true score lies between
``lower_total`` and ``lower_total + delta_upper``. Natural logarithms
throughout. Minimizing either total over k = 1..m-1 selects a rank.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, DomainError
from .linalg import SvdResult, as_matrix, svd, tail_energy
from .quantization import validate_epsilon

# substituted for the residual energy before taking ln, so exactly low-rank
# inputs still rank instead of producing -inf arithmetic
TAIL_FLOOR = 1e-300

GRAM_MODES = ("full_gram", "per_row_sum")


def default_epsilon(m: int) -> float:
    """Default quantization step 1/(2m): integer reciprocal and < 1/m."""
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    return 1.0 / (2 * m)


@dataclass(frozen=True)
class ComplexityTerms:
    """Per-k score terms; totals follow the module formula."""

    k: int
    tail_term: float
    gram_term: float
    ratio_term: float
    count_term: float
    delta_lower: float
    delta_upper: float
    floored: bool = False

    @property
    def lower_total(self) -> float:
        return self.tail_term + self.gram_term + self.ratio_term - self.count_term

    @property
    def upper_total(self) -> float:
        return self.lower_total + self.delta_upper


@dataclass(frozen=True)
class ComplexityReport:
    """Scores for every candidate k plus the two argmin selections.

    The slack ``delta_upper`` grows with k, so the argmins of the lower and
    upper totals can differ; ``k_bracket`` is the closed interval spanned by
    the two.
    """

    n: int
    m: int
    epsilon: float
    gram_mode: str
    per_k: tuple
    k_lower_opt: int
    k_upper_opt: int
    k_bracket: tuple


@dataclass(frozen=True)
class RegressionNmlInputs:
    """Arguments of the regression code-length kernel.

    n_obs/n_params are the total observation and parameter counts of the
    vectorized regression; tau_hat is the ML residual variance estimate and
    fit_energy the squared norm of the fitted response.
    """

    n_obs: int
    n_params: int
    tau_hat: float
    fit_energy: float

    def __post_init__(self):
        if self.n_params < 1:
            raise DomainError(f"n_params must be >= 1, got {self.n_params}")
        if self.n_params >= self.n_obs:
            raise DomainError(
                f"n_params={self.n_params} must be < n_obs={self.n_obs}"
            )
        if not self.tau_hat > 0:
            raise DomainError(f"tau_hat must be positive, got {self.tau_hat}")
        if not self.fit_energy > 0:
            raise DomainError(
                f"fit_energy must be positive, got {self.fit_energy}"
            )


def regression_nml(inp: RegressionNmlInputs) -> float:
    """Closed-form regression code length (natural log), four terms."""
    n_obs, n_params = inp.n_obs, inp.n_params
    return (
        (n_obs - n_params) * math.log(inp.tau_hat)
        + n_params * math.log(inp.fit_energy)
        + (n_obs - n_params - 1) * math.log(n_obs / (n_obs - n_params))
        - (n_params + 1) * math.log(n_params)
    )


def stochastic_complexity_terms(
    s: SvdResult,
    gram_fro_sq: float,
    n: int,
    m: int,
    k: int,
    epsilon: float,
) -> ComplexityTerms:
    """Score terms for one candidate rank k (1 <= k <= m-1).

    ``gram_fro_sq`` is the gram-energy argument of the nk*ln(...) term;
    callers choose it per gram mode. A residual energy below TAIL_FLOOR is
    floored and the result marked accordingly.
    """
    if not 1 <= k <= m - 1:
        raise DomainError(f"k={k} outside [1, {m - 1}]")
    if len(s.singular_values) != m:
        raise DomainError(
            f"m={m} does not match the decomposition ({len(s.singular_values)} values)"
        )
    if n != s.u.shape[0]:
        raise DomainError(f"n={n} does not match the decomposition ({s.u.shape[0]} rows)")
    if not gram_fro_sq > 0:
        raise DomainError(f"gram_fro_sq must be positive, got {gram_fro_sq}")
    validate_epsilon(epsilon, m)

    tail = tail_energy(s, k)
    floored = tail < TAIL_FLOOR
    if floored:
        tail = TAIL_FLOOR
    return ComplexityTerms(
        k=k,
        tail_term=(n * m - k * n) * math.log(tail),
        gram_term=n * k * math.log(gram_fro_sq),
        ratio_term=(m * n - k * n - 1) * math.log((m * n) / (m * n - k * n)),
        count_term=(n * k + 1) * math.log(n * k),
        delta_lower=0.0,
        delta_upper=m * k * math.log(2.0 / (m * epsilon)),
        floored=floored,
    )


def _gram_argument(x: np.ndarray, gram_mode: str) -> float:
    """Gram-energy argument g such that gram_term = n*k*ln(g).

    full_gram uses the squared Frobenius norm of X^T X. per_row_sum encodes
    the per-row form k * sum_j ln(X_j . X_j) by passing the geometric mean
    of the row energies, since n*k*ln(geomean) equals that sum.
    """
    if gram_mode == "full_gram":
        gram = x.T @ x
        return float(np.sum(gram * gram))
    if gram_mode == "per_row_sum":
        row_energy = np.sum(x * x, axis=1)
        row_energy = np.maximum(row_energy, TAIL_FLOOR)
        return float(np.exp(np.mean(np.log(row_energy))))
    raise DomainError(f"gram_mode must be one of {GRAM_MODES}, got {gram_mode!r}")


def _argmin_by(per_k, total_attr: str) -> int:
    """k of the smallest total; equal totals break toward the smallest k,
    independent of the order the terms are listed in."""
    return min(per_k, key=lambda t: (getattr(t, total_attr), t.k)).k


def select_rank(x, epsilon: float = None, gram_mode: str = "full_gram") -> ComplexityReport:
    """Score every k in 1..m-1 and select by argmin of both totals.

    Ties break toward the smallest k. ``epsilon=None`` uses the default
    1/(2m). The matrix must be taller than wide (or square) with at least
    one nonzero entry.
    """
    a = as_matrix(x)
    n, m = a.shape
    if n < 2 or m < 2:
        raise DomainError(f"need at least a 2 x 2 matrix, got {n} x {m}")
    if n < m:
        raise DomainError(
            f"select_rank expects rows >= cols, got {n} x {m}; transpose so "
            "observations are rows"
        )
    if not np.any(a):
        raise DegenerateInputError("all-zero matrix has no signal to rank")
    if epsilon is None:
        epsilon = default_epsilon(m)
    validate_epsilon(epsilon, m)
    if gram_mode not in GRAM_MODES:
        raise DomainError(f"gram_mode must be one of {GRAM_MODES}, got {gram_mode!r}")

    s = svd(a)
    gram_arg = _gram_argument(a, gram_mode)
    per_k = tuple(
        stochastic_complexity_terms(s, gram_arg, n, m, k, epsilon)
        for k in range(1, m)
    )
    k_lower_opt = _argmin_by(per_k, "lower_total")
    k_upper_opt = _argmin_by(per_k, "upper_total")
    bracket = (min(k_lower_opt, k_upper_opt), max(k_lower_opt, k_upper_opt))
    return ComplexityReport(
        n=n,
        m=m,
        epsilon=epsilon,
        gram_mode=gram_mode,
        per_k=per_k,
        k_lower_opt=k_lower_opt,
        k_upper_opt=k_upper_opt,
        k_bracket=bracket,
    )


def bound_gap_ratio(report: ComplexityReport) -> list:
    """Per-k relative gap (upper - lower) / |lower|.

    Entries where the lower total is exactly zero are undefined and
    reported as None rather than raising.
    """
    out = []
    for t in report.per_k:
        lower = t.lower_total
        if lower == 0.0:
            out.append((t.k, None))
        else:
            out.append((t.k, (t.upper_total - lower) / abs(lower)))
    return out
