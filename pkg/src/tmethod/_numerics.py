"""Small numerical helpers: Richardson-extrapolated differences, golden section."""
import math

import numpy as np

EPS = np.finfo(float).eps


def richardson_derivative(f, x, order=1, step=None):
    """Central-difference derivative of ``f`` at ``x`` with one Richardson step.

    ``order`` is 1 or 2. The default step is ``max(|x|, 1) * eps**(1/3)`` for
    the first derivative and ``max(|x|, 1) * eps**(1/5)`` for the second, and
    the h / h/2 pair is combined to cancel the O(h^2) truncation term.
    """
    scale = max(abs(x), 1.0)
    if order == 1:
        h = scale * EPS ** (1 / 3) if step is None else step

        def diff(h):
            return (f(x + h) - f(x - h)) / (2 * h)
    elif order == 2:
        h = scale * EPS ** (1 / 5) if step is None else step
        fx = f(x)

        def diff(h):
            return (f(x + h) - 2 * fx + f(x - h)) / (h * h)
    else:
        raise ValueError(f"unsupported derivative order {order}")
    coarse = diff(h)
    fine = diff(h / 2)
    return (4 * fine - coarse) / 3


_INVPHI = (math.sqrt(5) - 1) / 2


def golden_section_max(f, lo, hi, tol=1e-10, max_iter=200):
    """Maximize a unimodal ``f`` on [lo, hi]. Returns (x, f(x))."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    if fc > fd:
        return c, fc
    return d, fd
