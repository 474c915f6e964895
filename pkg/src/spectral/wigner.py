"""
Wigner 3j symbols, Wigner small-d functions and spin-weighted spherical harmonics.

All angular momentum labels are carried as doubled integers internally (2j, 2m, 2s);
the public functions accept HalfInteger, int, float or Fraction labels. The phase
convention is Condon-Shortley, with

    sY_lm(theta, phi) = sqrt((2l + 1) / 4pi) d^l_{m,-s}(theta) e^{i m phi}

so that 0Y_lm is the ordinary spherical harmonic and
conj(sY_lm) = (-1)^(s+m) (-s)Y_{l,-m}.
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Tuple, Union

import numpy as np

from src.types.half_integer import HalfInteger
from src.util.errors import Err, ForgeError

log = logging.getLogger(__name__)

Label = Union[HalfInteger, int, float, Fraction]

# largest supported |2s|: spin weights -1, -1/2, 0, 1/2, 1
MAX_TWICE_SPIN = 2


def _twice(x: Label) -> int:
    return HalfInteger.of(x).twice_value


def _check_pair(tj: int, tm: int) -> None:
    if tj < 0:
        raise ForgeError(Err.INVALID_LABELS, [f"j = {tj}/2 < 0"])
    if abs(tm) > tj:
        raise ForgeError(Err.INVALID_LABELS, [f"|m| = {abs(tm)}/2 > j = {tj}/2"])
    if (tj - tm) % 2 != 0:
        raise ForgeError(Err.INVALID_LABELS, [f"j - m not an integer: {tj}/2, {tm}/2"])


def _check_spin(ts: int) -> None:
    if abs(ts) > MAX_TWICE_SPIN:
        raise ForgeError(Err.INVALID_LABELS, [f"unsupported spin weight {ts}/2"])


def _selection_rules_hold(tj1: int, tj2: int, tj3: int, tm1: int, tm2: int, tm3: int) -> bool:
    if tm1 + tm2 + tm3 != 0:
        return False
    if (tj1 + tj2 + tj3) % 2 != 0:
        return False
    return abs(tj1 - tj2) <= tj3 <= tj1 + tj2


def wigner_3j(j1: Label, j2: Label, j3: Label, m1: Label, m2: Label, m3: Label) -> float:
    tj = (_twice(j1), _twice(j2), _twice(j3))
    tm = (_twice(m1), _twice(m2), _twice(m3))
    for a, b in zip(tj, tm):
        _check_pair(a, b)
    return wigner_3j_twice(*tj, *tm)


@lru_cache(maxsize=None)
def wigner_3j_twice(tj1: int, tj2: int, tj3: int, tm1: int, tm2: int, tm3: int) -> float:
    """
    Racah's formula on doubled labels. The alternating sum is accumulated in exact
    rationals and the square root is taken of the exact square of the result, so the
    returned float is correctly rounded up to the final sqrt.
    """
    if not _selection_rules_hold(tj1, tj2, tj3, tm1, tm2, tm3):
        return 0.0
    f = math.factorial
    j1, j2, j3 = Fraction(tj1, 2), Fraction(tj2, 2), Fraction(tj3, 2)
    m1, m2, m3 = Fraction(tm1, 2), Fraction(tm2, 2), Fraction(tm3, 2)

    def n(x: Fraction) -> int:
        return int(x)

    radicand = Fraction(
        f(n(j1 + j2 - j3))
        * f(n(j1 - j2 + j3))
        * f(n(-j1 + j2 + j3))
        * f(n(j1 + m1))
        * f(n(j1 - m1))
        * f(n(j2 + m2))
        * f(n(j2 - m2))
        * f(n(j3 + m3))
        * f(n(j3 - m3)),
        f(n(j1 + j2 + j3 + 1)),
    )
    k_min = max(0, n(j2 - j3 - m1), n(j1 - j3 + m2))
    k_max = min(n(j1 + j2 - j3), n(j1 - m1), n(j2 + m2))
    total = Fraction(0)
    for k in range(k_min, k_max + 1):
        denominator = (
            f(k)
            * f(n(j1 + j2 - j3) - k)
            * f(n(j1 - m1) - k)
            * f(n(j2 + m2) - k)
            * f(n(j3 - j2 + m1) + k)
            * f(n(j3 - j1 - m2) + k)
        )
        total += Fraction((-1) ** k, denominator)
    if total == 0:
        return 0.0
    sign = (-1) ** ((tj1 - tj2 - tm3) // 2 % 2)
    if total < 0:
        sign = -sign
    return sign * math.sqrt(radicand * total * total)


def wigner_3j_oracle(j1: Label, j2: Label, j3: Label, m1: Label, m2: Label, m3: Label) -> float:
    """
    Independent evaluation from the raising-operator recursion

        sqrt((j1-m1)(j1+m1+1)) (m1+1, m2, m3) + sqrt((j2-m2)(j2+m2+1)) (m1, m2+1, m3)
            + sqrt((j3-m3)(j3+m3+1)) (m1, m2, m3+1) = 0    for m1+m2+m3 = -1,

    which fixes the whole table of a (j1, j2, j3) triad up to scale. The scale comes
    from sum over all m of 3j^2 = 1 and the sign from the Condon-Shortley choice
    (j1 j2 j3; j1, j3-j1, -j3) having sign (-1)^(j1-j2+j3).
    """
    tj = (_twice(j1), _twice(j2), _twice(j3))
    tm = (_twice(m1), _twice(m2), _twice(m3))
    for a, b in zip(tj, tm):
        _check_pair(a, b)
    if not _selection_rules_hold(*tj, *tm):
        return 0.0
    return _oracle_table(*tj)[tm[0], tm[1]]


@lru_cache(maxsize=256)
def _oracle_table(tj1: int, tj2: int, tj3: int):
    def ms(tj: int):
        return range(-tj, tj + 1, 2)

    def raise_coefficient(tj: int, tm: int) -> float:
        return math.sqrt((tj - tm) * (tj + tm + 2)) / 2

    columns = [(a, b) for a in ms(tj1) for b in ms(tj2) if abs(a + b) <= tj3]
    index = {c: i for i, c in enumerate(columns)}
    rows = [
        (a, b, c)
        for a in ms(tj1)
        for b in ms(tj2)
        for c in ms(tj3)
        if a + b + c == 2
    ]
    system = np.zeros((max(len(rows), 1), len(columns)))
    for r, (a, b, c) in enumerate(rows):
        # each row collects the three ways of raising into (a, b, c)
        for lowered, tj, tm in (((a - 2, b), tj1, a - 2), ((a, b - 2), tj2, b - 2)):
            if lowered in index and abs(tm) <= tj:
                system[r, index[lowered]] += raise_coefficient(tj, tm)
        if (a, b) in index and abs(c - 2) <= tj3:
            system[r, index[(a, b)]] += raise_coefficient(tj3, c - 2)
    _, _, vh = np.linalg.svd(system)
    null = vh[-1]
    null = null / np.linalg.norm(null)
    reference = null[index[(tj1, tj3 - tj1)]]
    expected_sign = (-1) ** (((tj1 - tj2 + tj3) // 2) % 2)
    if reference * expected_sign < 0:
        null = -null
    return {c: float(null[i]) for c, i in index.items()}


def wigner_small_d(j: Label, m_prime: Label, m: Label, theta) -> np.ndarray:
    tj, tmp, tm = _twice(j), _twice(m_prime), _twice(m)
    _check_pair(tj, tmp)
    _check_pair(tj, tm)
    return wigner_small_d_twice(tj, tmp, tm, theta)


def wigner_small_d_twice(tj: int, tmp: int, tm: int, theta) -> np.ndarray:
    """
    Wigner's explicit sum for d^j_{m'm}(theta), e.g. d^1_{10} = -sin(theta)/sqrt(2).
    """
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    f = math.factorial
    jp_mp, jm_mp = (tj + tmp) // 2, (tj - tmp) // 2
    jp_m, jm_m = (tj + tm) // 2, (tj - tm) // 2
    m_diff = (tmp - tm) // 2
    numerator = math.sqrt(f(jp_mp) * f(jm_mp) * f(jp_m) * f(jm_m))
    result = np.zeros_like(theta)
    for k in range(max(0, -m_diff), min(jp_m, jm_mp) + 1):
        denominator = f(jp_m - k) * f(k) * f(jm_mp - k) * f(k + m_diff)
        sign = -1.0 if (k + m_diff) % 2 else 1.0
        cos_power = tj - 2 * k - m_diff
        sin_power = 2 * k + m_diff
        result = result + sign * numerator / denominator * c ** cos_power * s ** sin_power
    return result


def spin_weighted_Y(s: Label, l: Label, m: Label, theta, phi):
    ts, tl, tm = _twice(s), _twice(l), _twice(m)
    _check_spin(ts)
    _check_pair(tl, ts)
    _check_pair(tl, tm)
    return spin_weighted_Y_twice(ts, tl, tm, theta, phi)


def spin_weighted_Y_twice(ts: int, tl: int, tm: int, theta, phi):
    norm = math.sqrt((tl + 1) / (4 * math.pi))
    d = wigner_small_d_twice(tl, tm, -ts, theta)
    value = norm * d * np.exp(1j * (tm / 2) * np.asarray(phi, dtype=float))
    if np.ndim(value) == 0:
        return complex(value)
    return value


def triple_integral(
    s1: Label, l1: Label, m1: Label, l2: Label, m2: Label, s3: Label, l3: Label, m3: Label
) -> complex:
    """
    Integral over the sphere of conj(s1Y_{l1 m1}) Y_{l2 m2} s3Y_{l3 m3}. The middle
    factor is an ordinary harmonic (spin weight 0).
    """
    ts1, ts3 = _twice(s1), _twice(s3)
    tl1, tm1, tl2, tm2, tl3, tm3 = map(_twice, (l1, m1, l2, m2, l3, m3))
    _check_spin(ts1)
    _check_spin(ts3)
    _check_pair(tl1, ts1)
    _check_pair(tl3, ts3)
    _check_pair(tl1, tm1)
    _check_pair(tl2, tm2)
    _check_pair(tl3, tm3)
    if tl2 % 2 != 0:
        raise ForgeError(Err.INVALID_LABELS, ["middle harmonic must have integer l"])
    return complex(triple_integral_twice(ts1, tl1, tm1, tl2, tm2, ts3, tl3, tm3))


@lru_cache(maxsize=None)
def triple_integral_twice(
    ts1: int, tl1: int, tm1: int, tl2: int, tm2: int, ts3: int, tl3: int, tm3: int
) -> float:
    if ts1 != ts3 or tm1 != tm2 + tm3:
        return 0.0
    m_symbol = wigner_3j_twice(tl1, tl2, tl3, -tm1, tm2, tm3)
    if m_symbol == 0.0:
        return 0.0
    s_symbol = wigner_3j_twice(tl1, tl2, tl3, ts1, 0, -ts3)
    if s_symbol == 0.0:
        return 0.0
    sign = -1.0 if ((ts1 + tm1) // 2) % 2 else 1.0
    norm = math.sqrt((tl1 + 1) * (tl2 + 1) * (tl3 + 1) / (4 * math.pi))
    return sign * norm * m_symbol * s_symbol


def cache_sizes() -> Tuple[int, int]:
    return (
        wigner_3j_twice.cache_info().currsize,
        triple_integral_twice.cache_info().currsize,
    )


def clear_caches() -> None:
    wigner_3j_twice.cache_clear()
    triple_integral_twice.cache_clear()
    _oracle_table.cache_clear()
