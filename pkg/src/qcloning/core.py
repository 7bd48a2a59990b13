"""Small dense complex linear algebra and qubit-register bookkeeping.

Conventions
-----------
Qubit 0 is the most significant bit of a computational-basis index, so the
ket ``|q0 q1 q2>`` has index ``4*q0 + 2*q1 + q2``. For the cloners the
input mode is qubit 0, the blank is qubit 1 and the machine register
follows.

Most array-level functions accept a stack of matrices (``(..., d, d)``)
so that parameter sweeps can be evaluated in one pass.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import TOL
from .errors import InvariantError, ParameterError

__all__ = [
    "PureState",
    "InputQubit",
    "DensityMatrix",
    "tensor_product",
    "partial_trace",
    "reduced_density",
    "hermitian_eigensystem",
    "psd_sqrt",
    "singular_values",
    "pure_to_density",
    "num_qubits_for",
]


def num_qubits_for(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise ParameterError(f"dimension {dim} is not a power of two")
    return n


def _as_complex(x) -> np.ndarray:
    if isinstance(x, (DensityMatrix, PureState)):
        x = x.data
    arr = np.asarray(x, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ParameterError("non-finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector of ``num_qubits`` qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = _as_complex(self.amplitudes).reshape(-1)
        num_qubits_for(amp.size)
        norm = float(np.vdot(amp, amp).real)
        if abs(norm - 1.0) > TOL.normalization:
            raise InvariantError(f"state is not normalized (norm^2 = {norm!r})")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def data(self) -> np.ndarray:
        return self.amplitudes

    @property
    def num_qubits(self) -> int:
        return num_qubits_for(self.amplitudes.size)

    @classmethod
    def basis(cls, bits: str) -> "PureState":
        """Computational basis ket from a bit string such as ``"011"``."""
        amp = np.zeros(2 ** len(bits), dtype=complex)
        amp[int(bits, 2)] = 1.0
        return cls(amp)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix on n qubits."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_complex(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvariantError(f"density matrix must be square, got shape {m.shape}")
        num_qubits_for(m.shape[0])
        if np.max(np.abs(m - m.conj().T)) > TOL.hermitian:
            raise InvariantError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > TOL.trace:
            raise InvariantError(f"density matrix trace is {tr!r}, expected 1")
        w, _ = hermitian_eigensystem(m)
        if w[-1] < -TOL.psd:
            raise InvariantError(f"density matrix has negative eigenvalue {w[-1]!r}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def data(self) -> np.ndarray:
        return self.matrix

    @property
    def num_qubits(self) -> int:
        return num_qubits_for(self.matrix.shape[0])

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class InputQubit:
    """Pure input qubit ``alpha|0> + beta|1>``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise ParameterError("amplitudes must be finite")
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1.0) > TOL.normalization:
            raise ParameterError(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def from_alpha(cls, alpha: float, phase: float = 0.0) -> "InputQubit":
        """Real ``alpha`` in [0, 1]; ``beta = sqrt(1 - alpha^2) e^{i phase}``."""
        alpha = float(alpha)
        if not -TOL.normalization <= alpha <= 1.0 + TOL.normalization:
            raise ParameterError(f"alpha must lie in [0, 1], got {alpha}")
        alpha = min(max(alpha, 0.0), 1.0)
        beta = np.sqrt(1.0 - alpha * alpha) * np.exp(1j * phase)
        return cls(alpha, beta)

    @property
    def state(self) -> PureState:
        return PureState(np.array([self.alpha, self.beta]))

    @property
    def density(self) -> DensityMatrix:
        return pure_to_density(self.state)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; the first factor is the more significant qubit."""
    return np.kron(_as_complex(a), _as_complex(b))


def _check_qubits(indices: Iterable[int], n: int) -> list[int]:
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise ParameterError(f"duplicate qubit indices {idx}")
    for i in idx:
        if not 0 <= i < n:
            raise ParameterError(f"qubit index {i} out of range for {n} qubits")
    return idx


def partial_trace(rho, traced_qubits: Sequence[int]):
    """Trace out ``traced_qubits``; the remaining qubits keep their order.

    Accepts a :class:`DensityMatrix` (returns one) or an array of shape
    ``(..., d, d)`` (returns an array).
    """
    wrap = isinstance(rho, DensityMatrix)
    m = _as_complex(rho)
    n = num_qubits_for(m.shape[-1])
    traced = _check_qubits(traced_qubits, n)
    if len(traced) >= n:
        raise ParameterError("at least one qubit must remain after the partial trace")
    batch = m.shape[:-2]
    nb = len(batch)
    t = m.reshape(batch + (2,) * (2 * n))
    remaining = n
    for q in sorted(traced, reverse=True):
        t = np.trace(t, axis1=nb + q, axis2=nb + q + remaining)
        remaining -= 1
    d = 2**remaining
    out = t.reshape(batch + (d, d))
    return DensityMatrix(out) if wrap else out


def reduced_density(amplitudes, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of a pure state (or a stack of them) on ``keep``.

    Works directly from amplitudes, so a 16-dimensional register never has
    to be expanded into a 16x16 density matrix.
    """
    psi = _as_complex(amplitudes)
    n = num_qubits_for(psi.shape[-1])
    keep = _check_qubits(keep, n)
    if not keep:
        raise ParameterError("keep at least one qubit")
    batch = psi.shape[:-1]
    nb = len(batch)
    rest = [q for q in range(n) if q not in keep]
    t = psi.reshape(batch + (2,) * n)
    perm = list(range(nb)) + [nb + q for q in keep] + [nb + q for q in rest]
    mat = t.transpose(perm).reshape(batch + (2 ** len(keep), 2 ** len(rest)))
    return mat @ np.conj(np.swapaxes(mat, -1, -2))


def hermitian_eigensystem(m, *, check: bool = True):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : array_like, shape (..., n, n)
        Hermitian matrix or stack of matrices.
    check : bool
        Reject input whose anti-Hermitian part exceeds the tolerance.

    Returns
    -------
    w : ndarray, shape (..., n)
        Real eigenvalues in descending order.
    v : ndarray, shape (..., n, n)
        Unitary matrix whose columns are the matching eigenvectors.

    Notes
    -----
    Every ``(p, q)`` rotation first removes the phase of ``a[p, q]`` and
    then applies the real symmetric Jacobi rotation, so ``a[p, q]`` is
    annihilated exactly. The sweep order is fixed (row-cyclic) which makes
    the result bit-reproducible. Stacks are rotated in lock-step.
    """
    a = np.array(_as_complex(m), dtype=complex, copy=True)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise InvariantError(f"expected square matrices, got shape {a.shape}")
    single = a.ndim == 2
    if single:
        a = a[None]
    else:
        a = a.reshape((-1,) + a.shape[-2:])
    n = a.shape[-1]
    if check and a.size and np.max(np.abs(a - np.conj(np.swapaxes(a, -1, -2)))) > TOL.hermitian:
        raise InvariantError("matrix is not Hermitian")
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy()

    scale = np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))
    threshold = TOL.jacobi_eps * np.maximum(scale, np.finfo(float).tiny)
    offmask = ~np.eye(n, dtype=bool)
    skip = 1e-3 * threshold

    for _ in range(TOL.jacobi_max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=-1))
        if np.all(off <= threshold):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                r = np.abs(apq)
                rot = r > skip
                if not rot.any():
                    continue
                rs = np.where(rot, r, 1.0)
                theta = (a[:, q, q].real - a[:, p, p].real) / (2.0 * rs)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(rot, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ph = np.where(rot, np.conj(apq) / rs, 1.0)  # e^{-i arg a_pq}
                c_, s_, ph_ = c[:, None], s[:, None], ph[:, None]

                # A <- A G with G[p,p]=c, G[p,q]=s, G[q,p]=-s*ph, G[q,q]=c*ph
                col_p = a[:, :, p].copy()
                col_q = a[:, :, q]
                a[:, :, p] = c_ * col_p - s_ * ph_ * col_q
                a[:, :, q] = s_ * col_p + c_ * ph_ * col_q
                # A <- G^H A
                row_p = a[:, p, :].copy()
                row_q = a[:, q, :]
                a[:, p, :] = c_ * row_p - s_ * np.conj(ph_) * row_q
                a[:, q, :] = s_ * row_p + c_ * np.conj(ph_) * row_q
                a[:, p, q] = np.where(rot, 0.0, a[:, p, q])
                a[:, q, p] = np.where(rot, 0.0, a[:, q, p])

                vp = v[:, :, p].copy()
                vq = v[:, :, q]
                v[:, :, p] = c_ * vp - s_ * ph_ * vq
                v[:, :, q] = s_ * vp + c_ * ph_ * vq

    w = np.real(np.diagonal(a, axis1=-2, axis2=-1))
    order = np.argsort(-w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    if single:
        return w[0], v[0]
    shape = np.shape(m)[:-2]
    return w.reshape(shape + (n,)), v.reshape(shape + (n, n))


def psd_sqrt(rho) -> np.ndarray:
    """Hermitian positive square root of a PSD matrix (or stack).

    Eigenvalues in ``[-TOL.psd, 0)`` are treated as zero; anything more
    negative raises :class:`InvariantError`. Positive eigenvalues below
    ``TOL.rank`` times the largest one are roundoff and are dropped too,
    otherwise their square roots (~1e-9) leak into the result.
    """
    m = _as_complex(rho)
    w, v = hermitian_eigensystem(m)
    if w.size and np.min(w) < -TOL.psd:
        raise InvariantError(f"matrix is not positive semidefinite (eigenvalue {np.min(w)!r})")
    floor = TOL.rank * np.maximum(w[..., :1], 0.0)
    w = np.where(w > floor, w, 0.0)
    root = np.sqrt(w)
    return (v * root[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def singular_values(m) -> np.ndarray:
    """Singular values (descending) by one-sided Jacobi rotations.

    Column pairs of ``m`` are rotated until mutually orthogonal; the column
    norms are then the singular values. This is the Hermitian Jacobi method
    applied to ``m^H m`` without forming the product, which keeps tiny
    singular values accurate to roundoff in ``m`` instead of its square root.
    """
    u = np.array(_as_complex(m), dtype=complex, copy=True)
    single = u.ndim == 2
    if single:
        u = u[None]
    else:
        u = u.reshape((-1,) + u.shape[-2:])
    n = u.shape[-1]
    eps = TOL.jacobi_eps
    # couplings below this cannot move a singular value by more than ~eps * ||m||
    floor = (eps * np.sum(np.abs(u) ** 2, axis=(-2, -1))) ** 2
    for _ in range(TOL.jacobi_max_sweeps):
        done = True
        for p in range(n - 1):
            for q in range(p + 1, n):
                up = u[:, :, p]
                uq = u[:, :, q]
                alpha = np.sum(np.abs(up) ** 2, axis=-1)
                beta = np.sum(np.abs(uq) ** 2, axis=-1)
                gamma = np.sum(np.conj(up) * uq, axis=-1)
                g = np.abs(gamma)
                rot = (g > eps * np.sqrt(alpha * beta)) & (g > floor)
                if not rot.any():
                    continue
                done = False
                gs = np.where(rot, g, 1.0)
                theta = (beta - alpha) / (2.0 * gs)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(rot, t, 0.0)
                c = (1.0 / np.sqrt(t * t + 1.0))[:, None]
                s = t[:, None] * c
                ph = np.where(rot, np.conj(gamma) / gs, 1.0)[:, None]
                up = up.copy()
                u[:, :, p] = c * up - s * ph * uq
                u[:, :, q] = s * up + c * ph * uq
        if done:
            break
    sv = np.sqrt(np.sum(np.abs(u) ** 2, axis=-2))
    sv = -np.sort(-sv, axis=-1)
    if single:
        return sv[0]
    return sv.reshape(np.shape(m)[:-2] + (n,))


def pure_to_density(state) -> DensityMatrix:
    """``|psi><psi|`` for a normalized state."""
    if not isinstance(state, PureState):
        state = PureState(state)
    amp = state.amplitudes
    return DensityMatrix(np.outer(amp, amp.conj()))
