"""Independent oracle for the frozen expected values used by the unit tests.

Everything here is brute force or closed form evaluated in extended precision;
none of it shares code with the C++ implementation.
"""
import math

import mpmath
import numpy as np
from scipy import stats

mpmath.mp.dps = 40


def radius(count, t, k, alpha):
    return mpmath.sqrt(alpha * mpmath.log(t * mpmath.mpf(k) ** (mpmath.mpf(1) / alpha)) / (2 * count))


def tmin_scan(predicate, start=2, chunk=1 << 22):
    """Smallest integer t >= start with predicate(t) true, ascending scan."""
    lo = start
    while True:
        t = np.arange(lo, lo + chunk, dtype=np.float64)
        hit = np.nonzero(predicate(t))[0]
        if hit.size:
            return int(t[hit[0]])
        lo += chunk


def literal(k, beta, gap):
    c = 4 * k * beta / (gap ** 4 * math.log(k))
    return lambda t: t >= c * np.log(t) ** 2


def crossing(k, beta, gap):
    return lambda t: beta * np.log(t) / (t * gap ** 2) <= 0.5 * np.sqrt(math.log(k) / (t * k))


def main():
    print("hoeffding n=50 d=0.01", mpmath.sqrt(mpmath.log(100) / 100))
    print("radius(100,100,2,3)", radius(100, 100, 2, 3))
    print("radius(10,100,2,3)", radius(10, 100, 2, 3))
    r = radius(100, 100, 2, 3)
    print("ucb", mpmath.mpf("0.3") + r, "lcb", mpmath.mpf("0.3") - r, "lcb(60/100)", mpmath.mpf("0.6") - r)
    s = mpmath.fsum(mpmath.mpf(k) ** -3 for k in range(2, 1001))
    print("sum k^-3, 2..1000", s)
    print("SB bound e^-1.25", mpmath.exp(-1.25), "e^-12.5", mpmath.exp(-12.5))
    print("Bin(200,0.05) <= 5", stats.binom.cdf(5, 200, 0.05))
    print("bernstein 100,2,0.01", mpmath.sqrt(200 * mpmath.log(100)) + 2 * mpmath.log(100) / 3)
    print("xi 256,100,0.3", 256 * mpmath.log(100) / (100 * mpmath.mpf("0.09")))
    print("xi 256,1e6,1", 256 * mpmath.log(10 ** 6) / 10 ** 6)
    print("eps mid K=2 t=100", 0.5 * mpmath.sqrt(mpmath.log(2) / 200))
    print("eps mid K=2 t=4", 0.5 * mpmath.sqrt(mpmath.log(2) / 8))
    print("eta K=2 t=50", 0.5 * mpmath.sqrt(mpmath.log(2) / 100), "t=1", 0.5 * mpmath.sqrt(mpmath.log(2) / 2))
    e = mpmath.exp(-1)
    print("gibbs (0,10) eta .1", 1 / (1 + e), e / (1 + e))
    print("thm1 bound K=2 T=1e4", 4 * mpmath.sqrt(2 * 10 ** 4 * mpmath.log(2)),
          "K=10", 4 * mpmath.sqrt(10 * 10 ** 4 * mpmath.log(10)))
    print("checkpoints T=100 2/decade", [round(10 ** (k / 2)) for k in range(2, 5)])
    for gap in (1.0, 0.9, 0.5):
        print("tmin_literal K=2 beta=256 gap", gap, tmin_scan(literal(2, 256, gap)))
    for gap in (1.0, 0.9, 0.5):
        print("tmin_crossing K=2 beta=256 gap", gap, tmin_scan(crossing(2, 256, gap)))
    print("tmin beta=1 gap=0.5", tmin_scan(literal(2, 1, 0.5)), tmin_scan(crossing(2, 1, 0.5)))


if __name__ == "__main__":
    main()
