"""Physical parameters, derived spectral constants and the Lorentzian reservoir.

Frequencies are measured in units of the spectral width ``lambda_width`` and
times in units of its inverse. The coupling is stored through the
dimensionless vacuum Rabi ratio ``R = calR / lambda`` and the relative
couplings ``r1``, ``r2``; the collective coupling is normalised to one so the
reservoir strength ``W`` coincides with ``calR``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "InvalidParamsError",
    "SystemParams",
    "DerivedConstants",
    "RegimeReport",
    "compensating_detuning",
    "derive_constants",
    "spectral_density",
    "memory_kernel",
    "classify_regime",
]

NORM_TOL = 1e-12
SYMMETRIC = 1.0 / math.sqrt(2.0)


class InvalidParamsError(ValueError):
    """Raised when a parameter bundle violates its physical constraints."""


def compensating_detuning(nu: float, omega0: float) -> float:
    """Detuning ``2 nu / (2 nu + 1) * omega0`` that makes the kernel decay rate real.

    With this choice the dynamics no longer depend on ``omega0``.
    """
    return 2.0 * nu / (2.0 * nu + 1.0) * omega0


@dataclass(frozen=True)
class SystemParams:
    """Validated parameter bundle of the charger-battery-reservoir model.

    Parameters
    ----------
    nu : float
        Parity deformation, ``nu > -1/2``; ``nu = 0`` is the bosonic reservoir.
    omega0 : float
        Qubit transition frequency.
    lambda_width : float
        Lorentzian half width; sets the frequency unit.
    delta : float
        Detuning between qubits and reservoir centre.
    rabi_ratio : float
        ``R = calR / lambda_width``.
    r1, r2 : float
        Relative couplings of charger and battery, ``r1**2 + r2**2 = 1``.
    """

    nu: float = 0.0
    omega0: float = 5.0
    lambda_width: float = 1.0
    delta: float = 0.0
    rabi_ratio: float = 0.4
    r1: float = SYMMETRIC
    r2: float = SYMMETRIC

    def __post_init__(self):
        for name in ("nu", "omega0", "lambda_width", "delta", "rabi_ratio", "r1", "r2"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise InvalidParamsError(f"{name} must be finite, got {value!r}")
        if not self.nu > -0.5:
            raise InvalidParamsError(f"nu must exceed -0.5, got {self.nu}")
        if not self.omega0 > 0:
            raise InvalidParamsError(f"omega0 must be positive, got {self.omega0}")
        if not self.lambda_width > 0:
            raise InvalidParamsError(f"lambda_width must be positive, got {self.lambda_width}")
        if self.rabi_ratio < 0:
            raise InvalidParamsError(f"rabi_ratio must be non-negative, got {self.rabi_ratio}")
        for name in ("r1", "r2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidParamsError(f"{name} must lie in [0, 1], got {value}")
        if abs(self.r1**2 + self.r2**2 - 1.0) > NORM_TOL:
            raise InvalidParamsError(
                f"r1**2 + r2**2 must equal 1, got {self.r1**2 + self.r2**2!r}"
            )

    @classmethod
    def compensated(
        cls,
        nu: float,
        rabi_ratio: float,
        r1: float = SYMMETRIC,
        omega0: float = 5.0,
        lambda_width: float = 1.0,
    ) -> "SystemParams":
        """Parameters with the omega0-compensating detuning and ``r2`` fixed by ``r1``."""
        r2 = math.sqrt(max(0.0, 1.0 - r1 * r1))
        return cls(
            nu=nu,
            omega0=omega0,
            lambda_width=lambda_width,
            delta=compensating_detuning(nu, omega0),
            rabi_ratio=rabi_ratio,
            r1=r1,
            r2=r2,
        )

    def with_r1(self, r1: float) -> "SystemParams":
        return replace(self, r1=r1, r2=math.sqrt(max(0.0, 1.0 - r1 * r1)))

    @property
    def deformation_factor(self) -> float:
        """``2 nu + 1``, the factor the deformation puts on frequencies and couplings."""
        return 2.0 * self.nu + 1.0

    @property
    def calR(self) -> float:
        """Vacuum Rabi frequency ``R * lambda``."""
        return self.rabi_ratio * self.lambda_width

    @property
    def W(self) -> float:
        # collective coupling normalised to 1, so W equals calR
        return self.calR


@dataclass(frozen=True)
class DerivedConstants:
    lambda_bar: complex
    lambda_prime: complex
    beta: complex
    calR: float
    deformation_factor: float

    @property
    def W(self) -> float:
        return self.calR


def derive_constants(params: SystemParams) -> DerivedConstants:
    """Kernel decay rate ``lambda'`` and the root ``beta`` of the survival amplitude.

    ``lambda_bar = lambda + i (omega0 - Delta)``,
    ``lambda' = (2 nu + 1) lambda_bar - i omega0`` and
    ``beta = sqrt(lambda'**2 - 4 (2 nu + 1) calR**2)`` (principal branch).
    """
    if not isinstance(params, SystemParams):
        raise InvalidParamsError(f"expected SystemParams, got {type(params).__name__}")
    a = params.deformation_factor
    lam_bar = complex(params.lambda_width, params.omega0 - params.delta)
    lam_p = a * lam_bar - 1j * params.omega0
    beta = complex(np.sqrt(complex(lam_p * lam_p - 4.0 * a * params.calR**2)))
    return DerivedConstants(
        lambda_bar=lam_bar,
        lambda_prime=lam_p,
        beta=beta,
        calR=params.calR,
        deformation_factor=a,
    )


def spectral_density(params: SystemParams, omega):
    """Lorentzian ``J(omega) = W**2 lambda / (pi ((omega0 - omega - Delta)**2 + lambda**2))``.

    Integrates to ``W**2`` over the real line.
    """
    omega = np.asarray(omega, dtype=float)
    lam = params.lambda_width
    out = params.W**2 * lam / (np.pi * ((params.omega0 - omega - params.delta) ** 2 + lam**2))
    return out if out.ndim else float(out)


def memory_kernel(consts: DerivedConstants, tau):
    """Reservoir correlation function ``f(tau) = W**2 exp(-lambda' tau)`` for ``tau >= 0``.

    This is the exact Fourier transform of :func:`spectral_density` in the
    frame rotating at ``-omega0 + (2 nu + 1) omega``; its amplitude ``W**2``
    is the one consistent with ``beta``.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("memory kernel is defined for tau >= 0")
    out = consts.W**2 * np.exp(-consts.lambda_prime * tau)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class RegimeReport:
    """Outcome of :func:`classify_regime`.

    ``regime`` follows the shape of the survival amplitude: an oscillating
    ``p(t)`` (``beta**2`` with negative real part) is tagged
    ``"strong/non-Markovian"``. The two textbook criteria are kept alongside.
    """

    regime: str
    oscillatory: bool
    beta_is_real: bool
    width_minus_2W: float
    rabi_ratio: float
    rabi_label: str
    beta: complex

    @property
    def markovian(self) -> bool:
        return not self.oscillatory


def classify_regime(params: SystemParams, rtol: float = 1e-12) -> RegimeReport:
    consts = derive_constants(params)
    beta = consts.beta
    lam_p = consts.lambda_prime
    beta_sq = lam_p * lam_p - 4.0 * consts.deformation_factor * consts.calR**2
    scale = max(abs(lam_p) ** 2, 1e-300)
    beta_is_real = abs(beta.imag) <= rtol * max(abs(beta), abs(lam_p), 1.0)
    # with complex lambda' the damped and oscillating parts mix; use the sign of Re(beta**2)
    oscillatory = beta_sq.real < -rtol * scale
    if params.rabi_ratio < 1:
        rabi_label = "Markovian (R < 1)"
    elif params.rabi_ratio > 1:
        rabi_label = "non-Markovian (R > 1)"
    else:
        rabi_label = "crossover (R = 1)"
    return RegimeReport(
        regime="strong/non-Markovian" if oscillatory else "weak/Markovian",
        oscillatory=bool(oscillatory),
        beta_is_real=bool(beta_is_real),
        width_minus_2W=params.lambda_width - 2.0 * params.W,
        rabi_ratio=params.rabi_ratio,
        rabi_label=rabi_label,
        beta=beta,
    )
