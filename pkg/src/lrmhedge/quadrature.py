"""Numerical integration helpers.

``jump_integral`` integrates against the Levy density over x with QUADPACK
(adaptive Gauss-Kronrod); it is the independent oracle for every closed form
in :mod:`lrmhedge.model`.  ``adaptive_gauss_legendre`` integrates smooth
vector-valued functions of time.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate

TAIL_DECAY = 40.0


def jump_integral(model, t: float, f: Callable[[float], complex], growth: float = 0.0,
                  decay_left: float = 0.0, epsabs: float = 1e-13, epsrel: float = 1e-11) -> complex:
    """int_{R_0} f(x) pi(t, x) dx for complex f.

    Works in the scaled variable ``y = t^{-H} x`` so the density becomes
    ``C H t^{-1} (M e^{-M y} 1{y>0} + G e^{G y} 1{y<0})`` regardless of how
    concentrated ``pi(t, .)`` is at small t.

    :param growth: exponential growth rate of ``|f|`` as ``x -> +inf``
    :param decay_left: growth rate of ``|f|`` as ``x -> -inf`` (positive = grows)
    """
    p = model.params
    if t <= 0:
        raise ValueError("t must be > 0")
    w = t**p.H
    rate_right = p.M - growth * w
    rate_left = p.G - decay_left * w
    if rate_right <= 0 or rate_left <= 0:
        raise ValueError("integrand grows faster than the Levy density decays")
    y_right = TAIL_DECAY / rate_right
    y_left = TAIL_DECAY / rate_left
    pref = p.C * p.H / t

    def part(y, side, comp):
        x = w * y
        dens = p.M * np.exp(-p.M * y) if side > 0 else p.G * np.exp(p.G * y)
        v = f(x) * dens
        return v.real if comp == 0 else v.imag

    total = 0.0 + 0.0j
    for side, a, b in ((1, 0.0, y_right), (-1, -y_left, 0.0)):
        re = integrate.quad(part, a, b, args=(side, 0), epsabs=epsabs, epsrel=epsrel, limit=1000)[0]
        im = integrate.quad(part, a, b, args=(side, 1), epsabs=epsabs, epsrel=epsrel, limit=1000)[0]
        total += complex(re, im)
    return pref * total


@lru_cache(maxsize=8)
def _gl_nodes(order: int):
    return np.polynomial.legendre.leggauss(order)


def _gl_panel(f, a, b, order):
    x, w = _gl_nodes(order)
    half = 0.5 * (b - a)
    nodes = a + half * (x + 1.0)
    vals = f(nodes)  # (order, ...) array
    return half * np.tensordot(w, vals, axes=(0, 0))


def adaptive_gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                            tol: float = 1e-11, order: int = 64, max_depth: int = 48):
    """Integrate ``f`` over ``[a, b]`` by recursive bisection of a fixed
    Gauss-Legendre rule.

    ``f`` maps a 1-d array of nodes to an array whose first axis runs over
    the nodes; trailing axes are integrated elementwise.  A panel is accepted
    once its two halves agree with the whole to ``tol * max(1, |value|)`` for
    every trailing element.
    """
    whole = _gl_panel(f, a, b, order)
    stack = [(a, b, whole, 0)]
    total = np.zeros_like(whole)
    while stack:
        lo, hi, est, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _gl_panel(f, lo, mid, order)
        right = _gl_panel(f, mid, hi, order)
        refined = left + right
        err = np.abs(refined - est)
        scale = np.maximum(1.0, np.abs(refined))
        if depth >= max_depth or np.all(err <= tol * scale):
            total = total + refined
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    return total
