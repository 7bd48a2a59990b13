"""Coherence, entanglement and copy-quality measures."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .config import TOL
from .core import DensityMatrix, _as_complex, psd_sqrt, singular_values
from .errors import InvariantError, ParameterError

__all__ = [
    "XFormState",
    "MeasureReport",
    "BoundCheck",
    "l1_coherence",
    "concurrence",
    "concurrence_xform",
    "xform_l1",
    "hs_distance",
    "check_bound",
    "measure_report",
    "SIGMA_YY",
]

SIGMA_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def l1_coherence(rho):
    """Sum of moduli of the off-diagonal entries in the computational basis."""
    m = _as_complex(rho)
    total = np.sum(np.abs(m), axis=(-2, -1))
    diag = np.sum(np.abs(np.diagonal(m, axis1=-2, axis2=-1)), axis=-1)
    return _scalar(np.maximum(total - diag, 0.0))


def concurrence(rho):
    """Wootters concurrence of a two-qubit state (or a stack of them).

    With ``S = sqrt(rho)`` the eigenvalues ``lambda_i`` of
    ``rho @ rho_tilde`` are those of the Hermitian ``S @ rho_tilde @ S``,
    which equals ``N @ N^H`` for ``N = S @ (Y (x) Y) @ conj(S)``. The
    ``sqrt(lambda_i)`` are therefore the singular values of ``N``; taking
    them directly avoids square roots of roundoff-level eigenvalues.
    """
    m = _as_complex(rho)
    if m.shape[-2:] != (4, 4):
        raise ParameterError(f"concurrence needs a 4x4 two-qubit matrix, got {m.shape[-2:]}")
    root = psd_sqrt(m)
    s = singular_values(root @ SIGMA_YY @ np.conj(root))
    c = s[..., 0] - s[..., 1] - s[..., 2] - s[..., 3]
    return _scalar(np.clip(c, 0.0, 1.0))


@dataclass(frozen=True)
class XFormState:
    """Two-qubit state whose only coherence couples ``|01>`` and ``|10>``.

    ``a, b, d, e`` are the populations of ``|00>, |01>, |10>, |11>`` and
    ``c`` is the ``<01|rho|10>`` element.
    """

    a: float
    b: float
    d: float
    e: float
    c: complex

    def __post_init__(self):
        pops = (self.a, self.b, self.d, self.e)
        tol = TOL.normalization
        if any(p < -tol for p in pops):
            raise ParameterError(f"populations must be nonnegative, got {pops}")
        if abs(sum(pops) - 1.0) > tol:
            raise ParameterError(f"populations sum to {sum(pops)!r}, expected 1")
        if abs(self.c) > np.sqrt(max(self.b * self.d, 0.0)) + tol:
            raise ParameterError("|c| exceeds sqrt(b*d); the matrix would not be positive")
        object.__setattr__(self, "c", complex(self.c))

    @property
    def matrix(self) -> np.ndarray:
        m = np.diag([self.a, self.b, self.d, self.e]).astype(complex)
        m[1, 2] = self.c
        m[2, 1] = np.conj(self.c)
        return m

    @property
    def density(self) -> DensityMatrix:
        return DensityMatrix(self.matrix)


def concurrence_xform(s: XFormState) -> float:
    """Closed-form concurrence ``max(0, 2(|c| - sqrt(a e)))``."""
    return max(0.0, 2.0 * (abs(s.c) - np.sqrt(s.a * s.e)))


def xform_l1(s: XFormState) -> float:
    return 2.0 * abs(s.c)


def hs_distance(x, y):
    """Squared Hilbert-Schmidt distance ``Tr[(x - y)^2]``.

    This is the squared convention (no square root is taken).
    """
    mx, my = _as_complex(x), _as_complex(y)
    if mx.shape[-2:] != my.shape[-2:]:
        raise ParameterError(f"dimension mismatch: {mx.shape[-2:]} vs {my.shape[-2:]}")
    diff = mx - my
    val = np.einsum("...ij,...ji->...", diff, diff).real
    return _scalar(np.maximum(val, 0.0))


class BoundCheck(NamedTuple):
    concurrence: float
    l1: float
    holds: bool


def check_bound(s: XFormState) -> BoundCheck:
    """Compare concurrence with l1 coherence for an X-form state."""
    conc = concurrence_xform(s)
    l1 = xform_l1(s)
    return BoundCheck(conc, l1, conc <= l1 + TOL.bound)


@dataclass(frozen=True)
class MeasureReport:
    l1_coherence: float
    concurrence: float
    hs_distance: Optional[float] = None

    def __post_init__(self):
        if self.l1_coherence < 0:
            raise InvariantError("negative l1 coherence")
        if not 0.0 <= self.concurrence <= 1.0:
            raise InvariantError(f"concurrence {self.concurrence} outside [0, 1]")
        if self.hs_distance is not None and self.hs_distance < 0:
            raise InvariantError("negative Hilbert-Schmidt distance")


def measure_report(rho: DensityMatrix, reference: DensityMatrix | None = None) -> MeasureReport:
    """Coherence and concurrence of a two-qubit state, plus an optional distance."""
    dist = None if reference is None else hs_distance(reference, rho)
    return MeasureReport(l1_coherence(rho), concurrence(rho), dist)
