"""Complex digamma function.

The argument is lifted with psi(z) = psi(z + 1) - 1/z until Re(z) >= 8,
then the asymptotic series

    psi(z) ~ log z - 1/(2z) - sum_k B_2k / (2k z^2k),   k = 1..7

is summed. For |z| >= 8 the first omitted term is below 2e-15 relative.
"""

from __future__ import annotations

import cmath
import math

# B_2k / (2k) for k = 1..7
_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
_LIFT = 8.0


def complex_digamma(z) -> complex:
    """psi(z) for complex z away from the poles 0, -1, -2, ...

    Raises
    ------
    ValueError
        At a pole.
    """
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise ValueError(f"digamma has a pole at {z.real:g}")

    shift = 0j
    steps = max(0, math.ceil(_LIFT - z.real))
    for _ in range(steps):
        shift += 1.0 / z
        z += 1.0

    inv2 = 1.0 / (z * z)
    series = 0j
    for coeff in reversed(_ASYMPTOTIC):
        series = series * inv2 + coeff
    series *= inv2
    return cmath.log(z) - 0.5 / z - series - shift
