"""Dense state-vector register and the carving map as a conditional
two-qubit operation.

A heralded carve acts on a chosen qubit pair as a diagonal Kraus operator
in the pair's computational basis, one diagonal per detector.  The
diagonal entries are the closed-form per-final-state amplitudes of the
protocol (independent of the staged propagation in
:mod:`carvesim.carving`, which must reproduce them - the two code paths
cross-check each other).  The map may be conjugated by a local two-qubit
frame, and the detector-conditioned Pauli correction is applied inside
that frame, so that in the ideal limit every detector branch collapses to
the same output state.

Registers are subnormalized: the squared norm carries the accumulated
heralding probability.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .carving import DETECTORS, correction_for
from .cavity import ScatterCoeffs

MAX_QUBITS = 20

_SQRT2 = np.sqrt(2.0)

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / _SQRT2


@dataclass(frozen=True)
class QubitRegister:
    """Dense complex amplitude vector over n qubits (2 <= n <= 20).

    Qubit 0 is the most significant bit of the basis index.  The squared
    norm may be below 1; it represents the probability weight of the
    branch the register lives on.
    """

    n: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not (2 <= self.n <= MAX_QUBITS):
            raise ValueError(f"n = {self.n} outside supported range [2, {MAX_QUBITS}]")
        if self.amplitudes.shape != (2**self.n,):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, "
                f"expected ({2**self.n},)"
            )
        if self.norm_sq() > 1.0 + 1e-12:
            raise ValueError(f"squared norm {self.norm_sq()} exceeds 1")

    def norm_sq(self) -> float:
        return float(np.real(np.vdot(self.amplitudes, self.amplitudes)))


def plus_state(n: int) -> QubitRegister:
    """|+>^n, the starting register for carving."""
    amps = np.full(2**n, 2.0 ** (-n / 2.0), dtype=complex)
    return QubitRegister(n=n, amplitudes=amps)


def attach_plus(register: QubitRegister) -> QubitRegister:
    """Append one fresh qubit in |+> as the new least significant qubit."""
    amps = np.kron(register.amplitudes, np.array([1.0, 1.0], dtype=complex) / _SQRT2)
    return QubitRegister(n=register.n + 1, amplitudes=amps)


@dataclass(frozen=True)
class LocalFrame:
    """Local basis change on a carved pair: 2x2 unitaries applied to the
    first and second qubit before the diagonal carve (and undone after).
    """

    first: np.ndarray
    second: np.ndarray

    @staticmethod
    def identity() -> "LocalFrame":
        eye = np.eye(2, dtype=complex)
        return LocalFrame(first=eye, second=eye)

    @staticmethod
    def hadamard_on_first() -> "LocalFrame":
        """Default chain-growth frame: Hadamard on the existing qubit,
        identity on the newly attached one."""
        return LocalFrame(first=_HADAMARD.copy(), second=np.eye(2, dtype=complex))

    def matrix(self) -> np.ndarray:
        return np.kron(self.first, self.second)


def detector_diagonals(
    coeffs: tuple[ScatterCoeffs, ScatterCoeffs, ScatterCoeffs],
) -> dict[str, np.ndarray]:
    """Closed-form heralded amplitudes of the two-pass protocol, one
    diagonal 4-vector per detector over the final pair basis
    (|00>, |01>, |10>, |11>).

    With (r_N, t_N) the N-coupled-atom cavity amplitudes:

        D1: (r2 r0, r1^2, r1^2, r0 r2)
        D2: ((t2 + r2 t0)/sqrt2, t1(1+r1)/sqrt2, ..., (t0 + r0 t2)/sqrt2)
        D3: as D2 with minus signs.

    The first/last entries swap the atom-number order because the NOT
    gates between passes exchange the |00> and |11> branches.
    """
    s0, s1, s2 = coeffs
    r0, r1, r2 = s0.r, s1.r, s2.r
    t0, t1, t2 = s0.t, s1.t, s2.t
    d1 = np.array([r2 * r0, r1 * r1, r1 * r1, r0 * r2])
    d2 = np.array(
        [t2 + r2 * t0, t1 * (1 + r1), t1 * (1 + r1), t0 + r0 * t2]
    ) / _SQRT2
    d3 = np.array(
        [t2 - r2 * t0, t1 * (1 - r1), t1 * (1 - r1), t0 - r0 * t2]
    ) / _SQRT2
    return {"D1": d1, "D2": d2, "D3": d3}


def standard_diagonal(
    coeffs: tuple[ScatterCoeffs, ScatterCoeffs, ScatterCoeffs],
) -> np.ndarray:
    """Closed-form heralded amplitudes of the two-photon protocol; equal
    to the two-pass D1 diagonal for the same parameters."""
    return detector_diagonals(coeffs)["D1"]


def loss_diagonal(
    coeffs: tuple[ScatterCoeffs, ScatterCoeffs, ScatterCoeffs],
) -> np.ndarray:
    """Per-final-basis-state probability that the photon is lost during a
    two-pass carve; completes the detector diagonals to unity:
    sum_det |diag_det|^2 + loss = 1 elementwise."""
    s0, s1, s2 = coeffs
    l0, l1, l2 = s0.loss_prob, s1.loss_prob, s2.loss_prob
    r0_sq, r1_sq, r2_sq = abs(s0.r) ** 2, abs(s1.r) ** 2, abs(s2.r) ** 2
    return np.array(
        [
            l2 + r2_sq * l0,
            l1 + r1_sq * l1,
            l1 + r1_sq * l1,
            l0 + r0_sq * l2,
        ]
    )


def _apply_pair_operator(
    amps: np.ndarray, n: int, pair: tuple[int, int], op: np.ndarray
) -> np.ndarray:
    """Apply a 4x4 operator to the given qubit pair of a 2**n vector."""
    work = np.moveaxis(amps.reshape([2] * n), pair, (0, 1))
    flat = op @ work.reshape(4, -1)
    restored = np.moveaxis(flat.reshape([2] * n), (0, 1), pair)
    return restored.reshape(-1).copy()


def _pair_populations(amps: np.ndarray, n: int, pair: tuple[int, int]) -> np.ndarray:
    """Summed |amplitude|^2 per computational basis state of the pair."""
    work = np.moveaxis(amps.reshape([2] * n), pair, (0, 1))
    return np.sum(np.abs(work.reshape(4, -1)) ** 2, axis=1)


def apply_carve_map(
    register: QubitRegister,
    pair: tuple[int, int],
    detector: str,
    coeffs: tuple[ScatterCoeffs, ScatterCoeffs, ScatterCoeffs],
    frame: LocalFrame | None = None,
) -> QubitRegister:
    """Apply one detector's heralded carve to a qubit pair of the register.

    The detector's diagonal Kraus amplitudes act in the pair's
    computational basis, conjugated by ``frame`` (rotate in, carve,
    rotate back); the detector-conditioned Pauli correction is applied in
    the rotated basis so that ideal-limit outcomes coincide across
    detectors.  The output register is subnormalized by the outcome
    probability.  Spectator qubits are untouched.
    """
    i, j = pair
    if i == j:
        raise ValueError(f"pair indices must be distinct, got {pair}")
    for q in pair:
        if not (0 <= q < register.n):
            raise ValueError(f"qubit index {q} out of range for n = {register.n}")
    if detector == "standard":
        diag = standard_diagonal(coeffs)
        corr = np.eye(4, dtype=complex)
    elif detector in DETECTORS:
        diag = detector_diagonals(coeffs)[detector]
        corr = correction_for(detector).matrix()
    else:
        raise ValueError(f"unknown detector {detector!r}")

    op = corr @ np.diag(diag).astype(complex)
    if frame is not None:
        f = frame.matrix()
        op = f.conj().T @ op @ f

    out = _apply_pair_operator(register.amplitudes, register.n, (i, j), op)
    return QubitRegister(n=register.n, amplitudes=out)


def carve_step_loss(
    register: QubitRegister,
    pair: tuple[int, int],
    coeffs: tuple[ScatterCoeffs, ScatterCoeffs, ScatterCoeffs],
    frame: LocalFrame | None = None,
    mode: str = "efficient",
) -> float:
    """Probability that the carve photon is lost in this step, given the
    current register; together with the summed detector-branch norms this
    restores the register's pre-step squared norm."""
    if mode == "efficient":
        loss = loss_diagonal(coeffs)
    elif mode == "standard":
        loss = 1.0 - np.abs(standard_diagonal(coeffs)) ** 2
    else:
        raise ValueError(f"unknown mode {mode!r}")
    amps = register.amplitudes
    if frame is not None:
        amps = _apply_pair_operator(amps, register.n, pair, frame.matrix())
    pops = _pair_populations(amps, register.n, pair)
    return float(np.sum(pops * loss))


def reduced_density_matrix(register: QubitRegister, keep: tuple[int, ...]) -> np.ndarray:
    """Reduced density matrix of the kept qubits (normalized only if the
    register is); used to check locality of carve operations."""
    n = register.n
    keep = tuple(keep)
    traced = tuple(q for q in range(n) if q not in keep)
    psi = register.amplitudes.reshape([2] * n)
    perm = keep + traced
    psi = np.transpose(psi, perm).reshape(2 ** len(keep), 2 ** len(traced))
    return psi @ psi.conj().T
