"""scipy oracles for the structure factors that need numerical integration.
Values printed here are frozen into tests/unit/test_models.cpp."""
import numpy as np
from scipy import integrate, special


def lgcp(k, mu=0.0, s2=0.5, alpha=1.0):
    f = lambda s: np.expm1(s2 * np.exp(-s / alpha)) * special.j0(s * k) * s
    val, _ = integrate.quad(f, 0, 60 * alpha, limit=500, epsabs=1e-13, epsrel=1e-12)
    return 1 + np.exp(mu + s2 / 2) * 2 * np.pi * val


def bump(u):
    v = 1 - 16 * u * u
    return np.where(v > 0, np.exp(-1 / np.where(v > 0, v, 1)), 0.0)


def autocorr_raw(t):
    # int phi(|y|) phi(|t e1 - y|) dy in polar coordinates around the origin
    f = lambda a, u: u * bump(u) * bump(np.sqrt(max(0.0, t * t + u * u - 2 * t * u * np.cos(a))))
    val, _ = integrate.dblquad(f, 0, 0.25, 0, 2 * np.pi, epsabs=1e-13, epsrel=1e-10)
    return val


A0 = autocorr_raw(0.0)


def c0(t):
    return autocorr_raw(t) / A0 if t < 0.5 else 0.0


def arcsin_s0(sigma=0.5, rho=1.0):
    s2 = sigma**2
    f = lambda s: np.exp(-s2) * np.sinh(s2 * c0(s / rho)) * 2 * np.pi * s
    val, _ = integrate.quad(f, 0, 0.5 * rho, limit=200, epsabs=1e-12)
    return 1 + val


if __name__ == "__main__":
    for k in (0.0, 1.0, 3.0):
        print(f"lgcp S({k}) = {lgcp(k):.15g}")
    print(f"c0(0.1) = {c0(0.1):.12g}")
    print(f"c0(0.3) = {c0(0.3):.12g}")
    print(f"arcsin S(0) = {arcsin_s0():.12g}")
