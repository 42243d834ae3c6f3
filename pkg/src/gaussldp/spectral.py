"""Spectral densities and the symbol of the quadratic form.

All evaluators accept scalars or arrays of frequencies; frequencies are
reduced to the torus ``[-pi, pi)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def wrap(omega):
    return np.mod(np.asarray(omega, dtype=float) + np.pi, 2.0 * np.pi) - np.pi


def g_theta(omega, theta: float):
    """AR(1) spectral density ``1 / (1 + theta^2 - 2 theta cos w)``."""
    w = wrap(omega)
    return 1.0 / (1.0 + theta * theta - 2.0 * theta * np.cos(w))


def h_phi(omega, phi: float):
    """MA(1) spectral density ``1 + phi^2 + 2 phi cos w``."""
    w = wrap(omega)
    return 1.0 + phi * phi + 2.0 * phi * np.cos(w)


def phi_lambda(omega, lam):
    lam1, lam2 = lam
    return lam1 + lam2 * np.cos(wrap(omega))


@dataclass(frozen=True)
class Symbol:
    """An evaluable function on the torus.

    ``kind`` is one of ``g_theta``, ``h_phi``, ``phi_lambda`` or ``product``
    (the last one is ``phi_lambda * g_theta``).
    """

    kind: str
    theta: float = 0.0
    phi: float = 0.0
    lam: tuple = (0.0, 0.0)

    def __call__(self, omega):
        if self.kind == "g_theta":
            return g_theta(omega, self.theta)
        if self.kind == "h_phi":
            return h_phi(omega, self.phi)
        if self.kind == "phi_lambda":
            return phi_lambda(omega, self.lam)
        if self.kind == "product":
            return phi_lambda(omega, self.lam) * g_theta(omega, self.theta)
        raise ValueError(f"unknown symbol kind {self.kind!r}")


def product_extrema(lam, theta: float) -> tuple[float, float]:
    """Minimum and maximum of ``phi_lambda * g_theta`` over the torus.

    The product is a monotone function of ``cos w``, so its extrema sit at
    ``w = -pi`` and ``w = 0``; which one is the max depends on the sign of
    ``lambda2 + 2 theta lambda1 / (1 + theta^2)``.
    """
    lam1, lam2 = float(lam[0]), float(lam[1])
    at_pi = (lam1 - lam2) / (1.0 + theta * theta + 2.0 * theta)
    at_zero = (lam1 + lam2) / (1.0 + theta * theta - 2.0 * theta)
    knife = -2.0 * theta * lam1 / (1.0 + theta * theta)
    if lam2 == knife:
        return lam1, lam1
    if lam2 < knife:
        return at_zero, at_pi
    return at_pi, at_zero
