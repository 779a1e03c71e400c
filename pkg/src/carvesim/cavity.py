"""Single-photon scattering off a two-sided cavity coupled to N atoms.

A two-sided cavity has two transmissive mirrors with coupling rates kappa_1
(input side) and kappa_2 (output side) plus an intracavity scattering/
absorption rate kappa_sc, summing to the total linewidth kappa.  Atoms in
the coupled ground state block the cavity resonance with strength set by
the cooperativity C; atoms in the uncoupled state are invisible to the
photon.  Everything downstream of this module consumes only the complex
reflection and transmission amplitudes (r_N, t_N) and the incoherent loss
probability for N = 0, 1, 2 coupled atoms.

All rates enter as fractions of kappa, because the observable physics
depends only on the ratios and on C.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

FRACTION_SUM_TOL = 1e-12


@dataclass(frozen=True)
class CavityParams:
    """Cavity knob set: mirror couplings and loss as fractions of the total
    linewidth, plus cooperativity and an optional probe detuning.

    kappa1_frac + kappa2_frac + kappa_sc_frac must equal 1 (within 1e-12);
    detuning_frac is the probe detuning in units of kappa (0 = resonant).
    """

    kappa1_frac: float
    kappa2_frac: float
    kappa_sc_frac: float
    cooperativity: float
    detuning_frac: float = 0.0

    def __post_init__(self) -> None:
        validate_params(self)


@dataclass(frozen=True)
class ScatterCoeffs:
    """Complex reflection/transmission amplitudes and incoherent loss
    probability for one pass of a single photon.

    |r|^2 + |t|^2 + loss_prob = 1 (photon is reflected, transmitted, or
    scattered out of the mode).
    """

    r: complex
    t: complex
    loss_prob: float


def validate_params(params: CavityParams) -> CavityParams:
    """Check the parameter invariants, returning the params unchanged.

    Raises ValueError naming the violated invariant: fractions outside
    [0, 1], fractions not summing to 1 within 1e-12, or nonpositive
    cooperativity.
    """
    for name in ("kappa1_frac", "kappa2_frac", "kappa_sc_frac"):
        value = getattr(params, name)
        if not (0.0 <= value <= 1.0):
            raise ValueError(f"{name} = {value} is outside [0, 1]")
    total = params.kappa1_frac + params.kappa2_frac + params.kappa_sc_frac
    if abs(total - 1.0) > FRACTION_SUM_TOL:
        raise ValueError(
            f"kappa fractions sum to {total}, expected 1 within {FRACTION_SUM_TOL}"
        )
    if not (params.cooperativity > 0.0):
        raise ValueError(f"cooperativity = {params.cooperativity} must be > 0")
    if not math.isfinite(params.detuning_frac):
        raise ValueError(f"detuning_frac = {params.detuning_frac} must be finite")
    return params


def coefficients(params: CavityParams, n_atoms: int) -> ScatterCoeffs:
    """Reflection/transmission amplitudes for a photon probing the cavity
    with ``n_atoms`` coupled atoms.

    On resonance the amplitudes are real:

        r_N = (2 kappa1/kappa) / (1 + N C) - 1
        t_N = (2 sqrt(kappa1 kappa2)/kappa) / (1 + N C)

    so the empty-cavity reflection satisfies -r_0 = 1 - 2 kappa1/kappa.
    A nonzero probe detuning adds the usual 2i*delta/kappa term to the
    Lorentzian denominator (the atomic linewidth enters only through C,
    i.e. the atomic response is taken flat across the cavity line); the
    detuned expression reduces exactly to the resonant one at delta = 0.

    Loss probability is the remaining unitarity deficit
    1 - |r_N|^2 - |t_N|^2, covering intracavity scattering and atomic
    emission into free space.
    """
    validate_params(params)
    if not isinstance(n_atoms, (int,)) or isinstance(n_atoms, bool):
        raise TypeError(f"n_atoms must be an integer, got {n_atoms!r}")
    if n_atoms < 0:
        raise ValueError(f"n_atoms = {n_atoms} must be nonnegative")

    denom = 1.0 + n_atoms * params.cooperativity + 2j * params.detuning_frac
    r = 2.0 * params.kappa1_frac / denom - 1.0
    t = 2.0 * math.sqrt(params.kappa1_frac * params.kappa2_frac) / denom
    loss = 1.0 - abs(r) ** 2 - abs(t) ** 2
    # Clamp the rounding dust so loss_prob stays a probability.
    if -1e-15 < loss < 0.0:
        loss = 0.0
    if params.detuning_frac == 0.0:
        r = complex(r.real, 0.0)
        t = complex(t.real, 0.0)
    return ScatterCoeffs(r=r, t=t, loss_prob=loss)


def coefficients_up_to(params: CavityParams, n_max: int = 2) -> tuple[ScatterCoeffs, ...]:
    """Coefficients for 0..n_max coupled atoms, as consumed by the carving
    protocol (which only ever sees 0, 1, or 2 coupled atoms)."""
    return tuple(coefficients(params, n) for n in range(n_max + 1))


def epsilon1(params: CavityParams) -> float:
    """Empty-cavity reflection deficit, 1 - 2*kappa1/kappa.

    Equals -r_0 on resonance and sets the fidelity ceiling 1 - epsilon1^2/2
    of the two-pass protocol.
    """
    return 1.0 - 2.0 * params.kappa1_frac
