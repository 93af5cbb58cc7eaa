"""Truncated matrix representation of the parity-deformed (Wigner) oscillator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class TruncationTooSmallError(ValueError):
    pass


@dataclass(frozen=True)
class DeformedFockSpace:
    """Operators on the generalized Fock states ``||0>, ..., ||M-1>``.

    The annihilator lowers even levels with ``sqrt(n)`` and odd levels with
    ``sqrt(n + 2 nu)``; the parity operator is ``(-1)**n``.
    """

    nu: float
    M: int

    def __post_init__(self):
        if self.M < 4:
            raise TruncationTooSmallError(f"truncation M must be >= 4, got {self.M}")
        if not self.nu > -0.5:
            raise ValueError(f"nu must exceed -0.5, got {self.nu}")

    @property
    def levels(self) -> np.ndarray:
        return np.arange(self.M)

    @property
    def a(self) -> np.ndarray:
        n = self.levels[1:]
        amp = np.where(n % 2 == 0, np.sqrt(n), np.sqrt(n + 2.0 * self.nu))
        return np.diag(amp, k=1)

    @property
    def adag(self) -> np.ndarray:
        return self.a.T.copy()

    @property
    def parity(self) -> np.ndarray:
        return np.diag((-1.0) ** self.levels)

    @property
    def number(self) -> np.ndarray:
        return np.diag(self.levels.astype(float))

    @property
    def boson_a(self) -> np.ndarray:
        return np.diag(np.sqrt(self.levels[1:].astype(float)), k=1)

    @property
    def intensity(self) -> np.ndarray:
        """``F(n) = sqrt((n + nu (1 - (-1)**n)) / n)``, with ``F(0) = 1``."""
        n = self.levels.astype(float)
        num = n + self.nu * (1 - (-1.0) ** self.levels)
        f = np.ones_like(n)
        f[1:] = np.sqrt(num[1:] / n[1:])
        return np.diag(f)


@dataclass(frozen=True)
class WignerReport:
    nu: float
    M: int
    violations: dict

    @property
    def max_violation(self) -> float:
        return max(self.violations.values())

    def ok(self, tol: float = 1e-12) -> bool:
        return self.max_violation <= tol


def check_wigner_algebra(nu: float, M: int) -> WignerReport:
    """Largest violation of each defining relation on the interior levels ``0..M-3``."""
    F = DeformedFockSpace(nu, M)
    a, ad, R = F.a, F.adag, F.parity
    inner = slice(0, M - 2)
    eye = np.eye(M)

    def err(x):
        return float(np.max(np.abs(x[inner, inner])))

    # level actions checked against the closed formulas, column by column
    lower = 0.0
    raise_ = 0.0
    for n in range(M - 2):
        ket = eye[:, n]
        if n > 0:
            coef = np.sqrt(n) if n % 2 == 0 else np.sqrt(n + 2 * nu)
            lower = max(lower, float(np.max(np.abs(a @ ket - coef * eye[:, n - 1]))))
        coef = np.sqrt(n + 2 * nu + 1) if n % 2 == 0 else np.sqrt(n + 1)
        raise_ = max(raise_, float(np.max(np.abs(ad @ ket - coef * eye[:, n + 1]))))
    parity_err = max(
        float(np.max(np.abs(R @ eye[:, n] - (-1) ** n * eye[:, n]))) for n in range(M)
    )

    n = F.levels
    occupation = n + nu * (1 - (-1.0) ** n)
    violations = {
        "annihilation": lower,
        "creation": raise_,
        "parity": parity_err,
        "commutator": err(a @ ad - ad @ a - (eye + 2 * nu * R)),
        "anticommutator_a": err(R @ a + a @ R),
        "anticommutator_adag": err(R @ ad + ad @ R),
        "number_operator": float(np.max(np.abs(np.diag(ad @ a)[: M - 2] - occupation[: M - 2]))),
        "f_deformed": err(a - F.boson_a @ F.intensity),
    }
    return WignerReport(nu, M, violations)
