"""Multimode Lamb-shift sums and the renormalized qubit gap.

The qubit gap is renormalized by every mode as

    Delta = Delta0 exp(-2 sum_n (g_n/omega_n)^2).

With the idealized couplings of the quarter-wave device the exponent is
(g_0/omega_0)^2 times

    S_odd(n_c) = sum_{m = 1, 3, 5, ...} 1 / (m (1 + m^2/n_c^2)),

which the high-frequency decoupling keeps finite. Mode n of the resonator
corresponds to the odd summand m = 2n + 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .digamma import complex_digamma
from .params import EULER_GAMMA

ODD = "odd"
ALL = "all"
_IMAG_TOL = 1e-13
_CHUNK = 1 << 20


@dataclass(frozen=True)
class LambSum:
    n_cutoff: float
    parity: str
    value: float
    method: str  # "digamma", "partial_sum(N)", "asymptotic"
    tail_bound: float = 0.0


@dataclass(frozen=True)
class RenormalizedGap:
    delta0: float
    delta: float
    exponent: float


def _check_parity(parity):
    if parity not in (ODD, ALL):
        raise ValueError(f"parity must be 'odd' or 'all', got {parity!r}")


def _real(z, scale):
    if abs(z.imag) > _IMAG_TOL * max(1.0, abs(scale)):
        raise ArithmeticError(f"closed form left imaginary residue {z.imag:.3g}")
    return z.real


def lamb_sum_odd(n_cutoff) -> LambSum:
    """Closed form of the odd-m sum via the digamma function."""
    if not n_cutoff > 0:
        raise ValueError("n_cutoff must be > 0")
    if math.isinf(n_cutoff):
        return LambSum(n_cutoff, ODD, math.inf, "digamma")
    z = complex(0.5, 0.5 * n_cutoff)
    pair = complex_digamma(z) + complex_digamma(z.conjugate())
    value = (EULER_GAMMA + 2 * math.log(2)) / 2 + _real(pair, pair.real) / 4
    return LambSum(n_cutoff, ODD, value, "digamma")


def lamb_sum_all(n_cutoff) -> LambSum:
    """Closed form of the sum over all positive integers."""
    if not n_cutoff > 0:
        raise ValueError("n_cutoff must be > 0")
    if math.isinf(n_cutoff):
        return LambSum(n_cutoff, ALL, math.inf, "digamma")
    z = complex(1.0, n_cutoff)
    pair = complex_digamma(z) + complex_digamma(z.conjugate())
    value = EULER_GAMMA + _real(pair, pair.real) / 2
    return LambSum(n_cutoff, ALL, value, "digamma")


def lamb_sum(n_cutoff, parity=ODD) -> LambSum:
    _check_parity(parity)
    return lamb_sum_odd(n_cutoff) if parity == ODD else lamb_sum_all(n_cutoff)


def tail_bound(n_cutoff, parity, n_terms):
    """Rigorous bound on the omitted tail after ``n_terms`` summands.

    Each summand is below n_c^2/m^3; the tail of that majorant is bounded by
    an integral. The result never exceeds n_c^2 / n_terms.
    """
    c2 = n_cutoff * n_cutoff
    if parity == ODD:
        # sum_{k >= N} 1/(2k+1)^3 <= int_{N-1}^inf dk/(2k+1)^3
        return c2 / (4.0 * (2 * n_terms - 1) ** 2)
    return c2 / (2.0 * n_terms**2)


def _terms(c2, m):
    return 1.0 / (m * (1.0 + m * m / c2))


def lamb_sum_partial(n_cutoff, parity=ODD, n_terms=10**6) -> LambSum:
    """Direct summation of the first ``n_terms`` summands.

    The summands are accumulated with :func:`math.fsum` (correctly rounded),
    chunk by chunk in ascending m, so the result does not depend on the
    chunk size beyond one rounding per chunk.
    """
    _check_parity(parity)
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    c2 = float(n_cutoff) ** 2
    step = 2 if parity == ODD else 1
    partials = []
    for start in range(0, n_terms, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, n_terms), dtype=np.float64)
        m = step * idx + 1.0
        partials.append(math.fsum(_terms(c2, m)))
    value = math.fsum(partials)
    return LambSum(n_cutoff, parity, value, f"partial_sum({n_terms})",
                   tail_bound(n_cutoff, parity, n_terms))


def lamb_sum_asymptotic(n_cutoff, parity=ODD) -> LambSum:
    """Large-n_cutoff forms: (gamma + log 2)/2 + log(n_c)/2, or gamma + log n_c."""
    _check_parity(parity)
    if parity == ODD:
        value = (EULER_GAMMA + math.log(2)) / 2 + math.log(n_cutoff) / 2
    else:
        value = EULER_GAMMA + math.log(n_cutoff)
    return LambSum(n_cutoff, parity, value, "asymptotic")


def renormalized_gap(delta0, couplings: Iterable[tuple[float, float]],
                     margin=0.5) -> RenormalizedGap:
    """Delta = Delta0 exp(-2 sum (g_n/omega_n)^2) over the supplied modes.

    The step-wise picture (highest modes first) is valid while the running
    Delta stays below ``margin * omega_n``; a warning is emitted otherwise.
    """
    pairs = sorted(((float(g), float(w)) for g, w in couplings), key=lambda p: -p[1])
    if any(w <= 0 for _, w in pairs):
        raise ValueError("mode frequencies must be > 0")
    terms = [(g / w) ** 2 for g, w in pairs]
    running = 0.0
    for (g, w), t in zip(pairs, terms):
        running += t
        if delta0 * math.exp(-2 * running) >= margin * w:
            warnings.warn(f"renormalized gap not below {margin} omega_n at omega_n={w:.4g}",
                          stacklevel=2)
            break
    exponent = 2 * math.fsum(terms)
    return RenormalizedGap(delta0=delta0, delta=delta0 * math.exp(-exponent), exponent=exponent)


def renormalized_gap_factored(delta0, g0, omega0, n_cutoff) -> RenormalizedGap:
    """Delta ~ Delta0 exp(-2 (g0/omega0)^2 S_odd(n_cutoff))."""
    exponent = 2 * (g0 / omega0) ** 2 * lamb_sum_odd(n_cutoff).value
    return RenormalizedGap(delta0=delta0, delta=delta0 * math.exp(-exponent), exponent=exponent)
