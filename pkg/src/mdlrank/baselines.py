"""Classical component-count selectors: the Kaiser rule and knee detection
on scree curves."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, DomainError
from .linalg import SvdResult


@dataclass(frozen=True)
class ScreeCurve:
    """Per-component explained variance, nonincreasing; optionally scaled
    to sum to one."""

    variances: np.ndarray
    normalized: bool


def scree(s: SvdResult, normalized: bool = False) -> ScreeCurve:
    """Explained-variance curve: squared singular values, in order."""
    variances = np.asarray(s.singular_values, dtype=np.float64) ** 2
    if normalized:
        total = variances.sum()
        if total == 0.0:
            raise DegenerateInputError(
                "cannot normalize a scree curve with zero total variance"
            )
        variances = variances / total
    return ScreeCurve(variances=variances, normalized=normalized)


def kaiser(eigenvalues_of_correlation) -> int:
    """Count of correlation eigenvalues at least one (inclusive boundary)."""
    eig = np.asarray(eigenvalues_of_correlation, dtype=np.float64)
    return int(np.sum(eig >= 1.0))


def kneedle(curve: ScreeCurve, sensitivity: float = 1.0) -> Optional[int]:
    """Knee of a decreasing curve, or None when no bend clears the
    sensitivity threshold.

    Procedure: min-max normalize both axes; for a decreasing curve the
    difference curve is the gap below the normalized endpoint chord,
    d_i = 1 - x_i - y_i; scan the interior local maxima of d and accept the
    first one exceeding sensitivity * (mean x-gap). The returned count is
    the number of components strictly before the accepted point, which for
    a sharp spectral drop is the retained-component count.

    Identical output for any positive affine transform of the y axis.
    """
    if sensitivity <= 0:
        raise DomainError(f"sensitivity must be positive, got {sensitivity}")
    y = np.asarray(curve.variances, dtype=np.float64)
    n = len(y)
    if n < 3:
        raise DomainError(f"knee detection needs at least 3 points, got {n}")
    y_span = y.max() - y.min()
    if y_span == 0.0:
        return None
    x_norm = np.arange(n) / (n - 1)
    y_norm = (y - y.min()) / y_span
    diff = 1.0 - x_norm - y_norm
    threshold = sensitivity / (n - 1)
    for i in range(1, n - 1):
        if diff[i] >= diff[i - 1] and diff[i] >= diff[i + 1] and diff[i] > threshold:
            return i
    return None
