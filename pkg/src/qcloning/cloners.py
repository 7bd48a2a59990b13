"""Catalog of 1 -> 2 qubit cloning transformations.

Every machine is stored as an isometry with two columns: the images of
``|0>`` and ``|1>`` on the register ``input (x) blank (x) machine``. The
input and blank qubits are qubits 0 and 1; machine qubits follow.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .config import TOL
from .core import DensityMatrix, InputQubit, PureState, num_qubits_for, reduced_density
from .errors import ParameterError
from .measures import hs_distance

__all__ = [
    "Machine",
    "BHMachineParams",
    "MachineVectors",
    "StateDepParams",
    "ClonerSpec",
    "CloneOutput",
    "UnitarityReport",
    "schwarz_bound",
    "make_machine_vectors",
    "build_isometry",
    "output_states",
    "reduced_outputs",
    "apply_cloner",
    "copy_quality",
    "verify_unitarity",
]


class Machine(str, enum.Enum):
    WOOTTERS_ZUREK = "wz"
    PHASE_COVARIANT = "phase-cov"
    BH_GENERAL = "bh-general"
    BH_OPTIMAL = "bh-optimal"
    COHERENCE_MACHINE = "coherence-machine"
    STATE_DEPENDENT = "state-dep"
    CNOT = "cnot"

    @classmethod
    def from_token(cls, token: str) -> "Machine":
        try:
            return cls(token)
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ParameterError(f"unknown machine {token!r}; expected one of: {names}") from None


def schwarz_bound(mu: float) -> float:
    """Largest admissible ``nu`` for a given ``mu``: ``2 sqrt(mu (1 - 2 mu))``."""
    return 2.0 * np.sqrt(max(mu * (1.0 - 2.0 * mu), 0.0))


@dataclass(frozen=True)
class BHMachineParams:
    """Overlaps of the general B-H machine.

    ``mu = <Y0|Y0> = <Y1|Y1>`` and ``nu / 2 = <Y0|Q1> = <Q0|Y1>``.
    """

    mu: float
    nu: float

    def __post_init__(self):
        tol = TOL.parameters
        mu, nu = float(self.mu), float(self.nu)
        if not (np.isfinite(mu) and np.isfinite(nu)):
            raise ParameterError("mu and nu must be finite")
        if not -tol <= mu <= 0.5 + tol:
            raise ParameterError(f"mu={mu} outside [0, 1/2]")
        bound = schwarz_bound(min(max(mu, 0.0), 0.5))
        if nu < -tol or nu > bound + tol:
            raise ParameterError(
                f"nu={nu} violates the Schwarz bound 0 <= nu <= 2*sqrt(mu*(1-2*mu)) = {bound:.12g}"
            )
        object.__setattr__(self, "mu", min(max(mu, 0.0), 0.5))
        object.__setattr__(self, "nu", min(max(nu, 0.0), bound))


@dataclass(frozen=True, eq=False)
class MachineVectors:
    """Machine states ``Q0, Y0, Q1, Y1`` in a four-dimensional register."""

    q0: np.ndarray
    y0: np.ndarray
    q1: np.ndarray
    y1: np.ndarray

    def residuals(self, nu: float) -> dict[str, float]:
        ip = np.vdot
        q0, y0, q1, y1 = self.q0, self.y0, self.q1, self.y1
        return {
            "unitarity_0": abs(ip(q0, q0) + 2 * ip(y0, y0) - 1),
            "unitarity_1": abs(ip(q1, q1) + 2 * ip(y1, y1) - 1),
            "y0_y1": abs(ip(y0, y1)),
            "q0_y0": abs(ip(q0, y0)),
            "q1_y1": abs(ip(q1, y1)),
            "q0_q1": abs(ip(q0, q1)),
            "y0_q1": abs(ip(y0, q1) - nu / 2),
            "q0_y1": abs(ip(q0, y1) - nu / 2),
            "y_norms_equal": abs(ip(y0, y0) - ip(y1, y1)),
        }


def make_machine_vectors(p: BHMachineParams) -> MachineVectors:
    """Explicit machine vectors realizing ``(mu, nu)`` in the basis m0..m3.

    ``Q0 = s m0``, ``Q1 = s m1``, ``Y0 = x m1 + y m2``, ``Y1 = x m0 + y m3``
    with ``s = sqrt(1 - 2 mu)``, ``x = nu / (2 s)`` and ``y = sqrt(mu - x^2)``.
    """
    s = np.sqrt(1.0 - 2.0 * p.mu)
    x = 0.0 if s == 0.0 else p.nu / (2.0 * s)
    y = np.sqrt(max(p.mu - x * x, 0.0))
    m = np.eye(4, dtype=complex)
    return MachineVectors(q0=s * m[0], y0=x * m[1] + y * m[2], q1=s * m[1], y1=x * m[0] + y * m[3])


@dataclass(frozen=True)
class StateDepParams:
    """Real amplitudes of the state-dependent cloner.

    ``|0> -> a|00>|0> + b1|01>|1> + b2|10>|1>`` and
    ``|1> -> a_t|11>|1> + b1_t|01>|0> + b2_t|10>|0>``.
    """

    a: float
    b1: float
    b2: float
    a_t: float
    b1_t: float
    b2_t: float
    norm_tol: float = TOL.normalization

    def __post_init__(self):
        for branch, amps in (("|0>", (self.a, self.b1, self.b2)), ("|1>", (self.a_t, self.b1_t, self.b2_t))):
            if not all(np.isfinite(amps)):
                raise ParameterError("amplitudes must be finite")
            norm = sum(v * v for v in amps)
            if abs(norm - 1.0) > self.norm_tol:
                raise ParameterError(f"{branch} branch amplitudes have squared norm {norm!r}, expected 1")

    @property
    def symmetric(self) -> bool:
        return abs(self.b1 - self.b2) <= TOL.parameters and abs(self.b1_t - self.b2_t) <= TOL.parameters

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "StateDepParams":
        """Symmetric machine with ``a = cos(theta)``, ``b1 = b2 = sin(theta)/sqrt(2)``."""
        b = np.sin(theta) / np.sqrt(2.0)
        bt = np.sin(phi) / np.sqrt(2.0)
        return cls(float(np.cos(theta)), float(b), float(b), float(np.cos(phi)), float(bt), float(bt))

    @classmethod
    def reference_optimum(cls) -> "StateDepParams":
        """Optimum tabulated to six decimals; normalized only to about 1e-6."""
        return cls(0.695654, 0.507969, 0.507969, 0.718377, 0.491902, 0.491902, norm_tol=1e-5)


Params = Union[BHMachineParams, StateDepParams, None]

_MACHINE_DIM = {
    Machine.CNOT: 1,
    Machine.WOOTTERS_ZUREK: 2,
    Machine.PHASE_COVARIANT: 2,
    Machine.BH_OPTIMAL: 2,
    Machine.COHERENCE_MACHINE: 2,
    Machine.STATE_DEPENDENT: 2,
    Machine.BH_GENERAL: 4,
}


@dataclass(frozen=True)
class ClonerSpec:
    kind: Machine
    params: Params = None

    def __post_init__(self):
        kind = Machine.from_token(self.kind) if isinstance(self.kind, str) else self.kind
        object.__setattr__(self, "kind", kind)
        if kind is Machine.BH_GENERAL and not isinstance(self.params, BHMachineParams):
            raise ParameterError("bh-general needs BHMachineParams(mu, nu)")
        if kind is Machine.STATE_DEPENDENT and not isinstance(self.params, StateDepParams):
            raise ParameterError("state-dep needs StateDepParams")
        if kind not in (Machine.BH_GENERAL, Machine.STATE_DEPENDENT) and self.params is not None:
            raise ParameterError(f"{kind.value} takes no parameters")

    @classmethod
    def bh_general(cls, mu: float, nu: float) -> "ClonerSpec":
        return cls(Machine.BH_GENERAL, BHMachineParams(mu, nu))

    @classmethod
    def state_dependent(cls, params: Optional[StateDepParams] = None) -> "ClonerSpec":
        return cls(Machine.STATE_DEPENDENT, params or StateDepParams.reference_optimum())

    @property
    def machine_dimension(self) -> int:
        return _MACHINE_DIM[self.kind]

    @property
    def num_qubits(self) -> int:
        return 2 + num_qubits_for(self.machine_dimension)

    @property
    def symmetric(self) -> bool:
        return self.kind is not Machine.CNOT


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


@functools.lru_cache(maxsize=256)
def _isometry(spec: ClonerSpec) -> np.ndarray:
    k = _ket
    kind = spec.kind
    if kind is Machine.CNOT:
        # CNOT applied to |psi>|0>
        col0, col1 = k("00"), k("11")
    elif kind is Machine.WOOTTERS_ZUREK:
        col0, col1 = k("000"), k("111")
    elif kind is Machine.PHASE_COVARIANT:
        # |Sigma> = |Q> = |up> = |0>, |down> = |1>
        big = 0.5 + np.sqrt(1 / 8)
        small = 0.5 - np.sqrt(1 / 8)
        r = 1 / np.sqrt(8)
        col0 = big * k("000") + small * k("110") + r * (k("011") + k("101"))
        col1 = big * k("111") + small * k("001") + r * (k("010") + k("100"))
    elif kind is Machine.BH_OPTIMAL:
        col0 = np.sqrt(2 / 3) * k("000") + np.sqrt(1 / 6) * (k("011") + k("101"))
        col1 = np.sqrt(2 / 3) * k("111") + np.sqrt(1 / 6) * (k("010") + k("100"))
    elif kind is Machine.COHERENCE_MACHINE:
        col0 = np.sqrt(1 / 2) * (k("010") + k("100"))
        col1 = np.sqrt(1 / 2) * (k("011") + k("101"))
    elif kind is Machine.STATE_DEPENDENT:
        p = spec.params
        # A = |0>, B1 = B2 = |1>, A~ = |1>, B1~ = B2~ = |0>
        col0 = p.a * k("000") + p.b1 * k("011") + p.b2 * k("101")
        col1 = p.a_t * k("111") + p.b1_t * k("010") + p.b2_t * k("100")
    elif kind is Machine.BH_GENERAL:
        mv = make_machine_vectors(spec.params)
        sym = k("01") + k("10")
        col0 = np.kron(k("00"), mv.q0) + np.kron(sym, mv.y0)
        col1 = np.kron(k("11"), mv.q1) + np.kron(sym, mv.y1)
    else:  # pragma: no cover
        raise ParameterError(f"unsupported machine {kind}")
    iso = np.stack([col0, col1], axis=1)
    iso.setflags(write=False)
    return iso


def build_isometry(spec: ClonerSpec) -> np.ndarray:
    """Matrix whose columns are the images of ``|0>`` and ``|1>``."""
    return _isometry(spec)


def output_states(spec: ClonerSpec, alpha, beta) -> np.ndarray:
    """Full output amplitudes for one input or an array of inputs.

    The result is renormalized, which only matters for machines whose
    coefficients are given to finite precision (the six-decimal
    state-dependent optimum).
    """
    iso = build_isometry(spec)
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    psi = alpha[..., None] * iso[:, 0] + beta[..., None] * iso[:, 1]
    norm = np.sqrt(np.sum(np.abs(psi) ** 2, axis=-1, keepdims=True))
    return psi / norm


def reduced_outputs(spec: ClonerSpec, alpha, beta):
    """``(two_qubit, clone_a, clone_b)`` reduced matrices as raw arrays."""
    psi = output_states(spec, alpha, beta)
    return (
        reduced_density(psi, (0, 1)),
        reduced_density(psi, (0,)),
        reduced_density(psi, (1,)),
    )


@dataclass(frozen=True, eq=False)
class CloneOutput:
    full_state: PureState
    two_qubit: DensityMatrix
    clone_a: DensityMatrix
    clone_b: DensityMatrix


def apply_cloner(spec: ClonerSpec, inp: InputQubit) -> CloneOutput:
    two, ca, cb = reduced_outputs(spec, inp.alpha, inp.beta)
    psi = output_states(spec, inp.alpha, inp.beta)
    return CloneOutput(PureState(psi), DensityMatrix(two), DensityMatrix(ca), DensityMatrix(cb))


def copy_quality(spec: ClonerSpec, inp: InputQubit) -> float:
    """Squared Hilbert-Schmidt distance between the input and clone ``a``."""
    return hs_distance(inp.density, apply_cloner(spec, inp).clone_a)


def copy_quality_batch(spec: ClonerSpec, alpha, beta) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    vec = np.stack([alpha, beta], axis=-1)
    rho_in = vec[..., :, None] * np.conj(vec[..., None, :])
    _, clone_a, _ = reduced_outputs(spec, alpha, beta)
    return hs_distance(rho_in, clone_a)


@dataclass(frozen=True)
class UnitarityReport:
    max_violation: float
    column_norms: tuple[float, float]
    overlap: float
    machine_vector_violation: Optional[float] = None

    def ok(self, tol: float = TOL.isometry) -> bool:
        worst = self.max_violation
        if self.machine_vector_violation is not None:
            worst = max(worst, self.machine_vector_violation)
        return worst <= tol


def verify_unitarity(spec: ClonerSpec) -> UnitarityReport:
    """Column orthonormality of the isometry (and the machine-vector relations)."""
    iso = build_isometry(spec)
    gram = iso.conj().T @ iso
    norms = (float(gram[0, 0].real), float(gram[1, 1].real))
    overlap = float(abs(gram[0, 1]))
    violation = float(np.max(np.abs(gram - np.eye(2))))
    mv = None
    if spec.kind is Machine.BH_GENERAL:
        res = make_machine_vectors(spec.params).residuals(spec.params.nu)
        mv = float(max(res.values()))
    return UnitarityReport(violation, norms, overlap, mv)
