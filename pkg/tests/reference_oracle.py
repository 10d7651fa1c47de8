"""Line-by-line transliteration of the original R routine for barycentric coding.

Kept deliberately close to the original (1-based index arithmetic, cumulative
bound construction, exact float equality for bound hits). Used only as a test
oracle; the package implementation is written independently.
"""

import math


def _low_level_split(s, sx, a, b):
    return sx * (b - s) / (b - a)


def gen_split_w_center(s, p):
    # p is 1-based in the original; pad index 0
    p = [None] + list(p)
    n_p = len(p) - 1
    x = [None] + [0.0] * (n_p - 1)
    flag = 0
    base = base_a = None
    for u in range(1, n_p):
        if s == p[u]:
            flag = 1
            base = u
            base_a = base - 1
        elif p[u] < s < p[u + 1]:
            base = u
            base_a = base
    a = p[base_a]
    b = p[base + 1]
    xa = _low_level_split(s, 1, a, b)
    xb = 1 - xa
    if flag == 1:
        a = p[base]
    if base + 1 <= n_p - 1:
        for i in range(base + 1, n_p):
            a2 = (b + a) / 2
            b2 = p[i + 1]
            xa2 = _low_level_split(b, xb, a2, b2)
            xb2 = xb - xa2
            x[i - 1] = xa2
            a = b
            b = b2
            xb = xb2
    x[n_p - 1] = xb
    a = p[base_a]
    b = p[base + 1]
    xa = _low_level_split(s, 1, a, b)
    xb = 1 - xa
    if flag == 1:
        b = p[base]
    if base_a >= 2:
        for k in range(base_a, 1, -1):
            b2 = (a + b) / 2
            a2 = p[k - 1]
            xa2 = _low_level_split(a, xa, a2, b2)
            xb2 = xa - xa2
            x[k] = x[k] + xb2
            b = a
            a = a2
            xa = xa2
    x[1] = x[1] + xa
    return x[1:]


def barycentric(values, cats=5, con=True):
    values = list(values)
    if con:
        lo, hi = min(values), max(values)
        dmin = min(abs(u - v) for u in values for v in values if abs(u - v) > 0)
        values = [math.trunc((v - lo) / dmin) + 1 for v in values]
    top = max(values)
    p_low = 0.5
    p_high = top + 0.5
    p = [0.0] * (cats + 1)
    p[0] = p_low
    for cnt in range(cats):
        p[cnt + 1] = p[cnt] + (p_high - p_low) / cats
    return [gen_split_w_center(v, p) for v in values]


def tuple_for_level(level, m, n):
    """Oracle tuple for a single level on an m-point scale (top fixed at m)."""
    p_low = 0.5
    p_high = m + 0.5
    p = [0.0] * (n + 1)
    p[0] = p_low
    for cnt in range(n):
        p[cnt + 1] = p[cnt] + (p_high - p_low) / n
    return gen_split_w_center(level, p)


def tuple_for_level_exact(level, m, n):
    """Same routine evaluated in exact rational arithmetic.

    Bounds are built from ``Fraction`` so bound hits are never missed through
    rounding of the cumulative sums; the result is converted to float.
    """
    from fractions import Fraction

    p_low = Fraction(1, 2)
    step = Fraction(m, n)
    p = [p_low + cnt * step for cnt in range(n + 1)]
    return [float(v) for v in gen_split_w_center(Fraction(level), p)]
