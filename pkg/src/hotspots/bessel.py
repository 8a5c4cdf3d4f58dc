"""Bessel functions J0, J1, Y0, Y1 for real arguments.

The ascending series is summed in ``decimal`` arithmetic with enough guard
digits to absorb the cancellation between terms, so the result is accurate
to double precision even next to zeros.  Above ``SERIES_LIMIT`` the Hankel
asymptotic expansion is used in floating point.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext

import numpy as np

SERIES_LIMIT = 50.0

_PI = Decimal("3.14159265358979323846264338327950288419716939937510582097494459")
_GAMMA = Decimal("0.57721566490153286060651209008240243104215933593992359880576723")

KINDS = ("J0", "J1", "Y0", "Y1")


def _series(kind: str, x: float) -> float:
    # sum |terms| ~ I_n(x) ~ e^x, so that many digits are lost to cancellation
    digits = 30 + int(x / math.log(10.0))
    with localcontext() as ctx:
        ctx.prec = digits
        X = Decimal(x)
        q = X * X / 4
        order1 = kind.endswith("1")
        eps = Decimal(10) ** (-digits + 2)
        # t_k = (-q)^k / (k! (k+n)!)
        t = Decimal(1)
        k = 0
        J = Decimal(0)
        H = Decimal(0)  # harmonic number H_k
        Hs = Decimal(0)  # accumulated log-derivative sum
        Hn1 = Decimal(1)  # H_{k+1}, used for order 1
        while True:
            J += t
            if kind == "Y0":
                Hs += H * t
            elif kind == "Y1":
                Hs += (H + Hn1) * t
            k += 1
            t = -t * q / (k * (k + 1) if order1 else k * k)
            H += Decimal(1) / k
            Hn1 = H + Decimal(1) / (k + 1)
            if k > x and abs(t) < eps * max(abs(J), eps):
                break
        if order1:
            J = J * X / 2
        if kind == "J0" or kind == "J1":
            return float(J)
        L = (X / 2).ln() + _GAMMA
        if kind == "Y0":
            return float(2 / _PI * (L * J - Hs))
        return float(-2 / (_PI * X) + 2 / _PI * L * J - X / (2 * _PI) * Hs)


def _hankel(kind: str, x: float) -> float:
    nu = 1.0 if kind.endswith("1") else 0.0
    mu = 4.0 * nu * nu
    P = Q = 0.0
    term = 1.0
    k = 0
    while True:
        if k % 2 == 0:
            P += (-1) ** (k // 2) * term
        else:
            Q += (-1) ** (k // 2) * term
        k += 1
        nxt = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-18:
            break
        term = nxt
    chi = x - (0.5 * nu + 0.25) * math.pi
    amp = math.sqrt(2.0 / (math.pi * x))
    if kind.startswith("J"):
        return amp * (P * math.cos(chi) - Q * math.sin(chi))
    return amp * (P * math.sin(chi) + Q * math.cos(chi))


def _scalar(kind: str, x: float) -> float:
    x = float(x)
    if kind.startswith("Y"):
        if x <= 0:
            raise ValueError(f"{kind} is singular for x <= 0")
    elif x < 0:
        # J0 even, J1 odd
        v = _scalar(kind, -x)
        return v if kind == "J0" else -v
    if x == 0:
        return 1.0 if kind == "J0" else 0.0
    if x <= SERIES_LIMIT:
        return _series(kind, x)
    return _hankel(kind, x)


_vec = np.vectorize(_scalar, otypes=[float])


def bessel(kind: str, x):
    """Evaluate ``kind`` in {"J0", "J1", "Y0", "Y1"} at scalar or array ``x``."""
    if kind not in KINDS:
        raise ValueError(f"unknown Bessel kind {kind!r}")
    if np.ndim(x) == 0:
        return _scalar(kind, x)
    return _vec(kind, np.asarray(x, float))


def j0(x):
    return bessel("J0", x)


def bessel_zero_j0(start: float = 2.4, tol: float = 1e-14) -> float:
    """First positive zero of J0 by Newton's method (J0' = -J1)."""
    x = start
    for _ in range(50):
        step = _scalar("J0", x) / _scalar("J1", x)
        x += step
        if abs(_scalar("J0", x)) <= tol and abs(step) < 1e-15 * x:
            break
    return x


J0_FIRST_ZERO = bessel_zero_j0()
