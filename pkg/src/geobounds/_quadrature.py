"""Thin wrapper around scipy's adaptive quadrature with hard failure reporting."""

from __future__ import annotations

from scipy import integrate


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


def quad_checked(func, a, b, *, epsabs=1e-12, epsrel=1e-10, limit=200, points=None):
    """Integrate func over [a, b]; raise QuadratureError instead of returning
    a silently inaccurate value."""
    out = integrate.quad(
        func, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit,
        points=points, full_output=1,
    )
    if len(out) > 3:
        raise QuadratureError(
            f"quadrature over [{a}, {b}] failed to converge: {out[-1]}"
        )
    value, abserr = out[0], out[1]
    if abserr > 1e-6 * (1.0 + abs(value)):
        raise QuadratureError(
            f"quadrature over [{a}, {b}] error estimate {abserr:.3g} too large"
        )
    return value
