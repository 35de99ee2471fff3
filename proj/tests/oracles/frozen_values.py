#!/usr/bin/env python3
"""High-precision oracle for constants frozen into the C++ unit tests.

Run with `python3 tests/oracles/frozen_values.py`; every value printed here is
pasted verbatim into the test that asserts it.
"""
import mpmath as mp

mp.mp.dps = 50
log2 = lambda x: mp.log(x, 2)


def entropy(p):
    return -sum(x * log2(x) for x in p if x > 0)


def varentropy(p):
    h = entropy(p)
    return sum(x * (-log2(x) - h) ** 2 for x in p if x > 0)


def c_minus(m):
    return (1 - m) / mp.mpf(2) * log2(2 * mp.pi) - m / (12 * mp.log(2))


def n_f(counts):
    n = sum(counts)
    m = len(counts)
    t = [mp.mpf(c) / n for c in counts]
    val = entropy(t) + (1 - m) / (2 * mp.mpf(n)) * log2(n)
    val += sum(min(log2(n), -log2(x)) if x > 0 else log2(n) for x in t) / (2 * mp.mpf(n))
    return n * val


def q(x):
    # Quadrature of the Gaussian density, independent of erfc.
    return mp.quad(lambda t: mp.exp(-t * t / 2), [x, mp.inf]) / mp.sqrt(2 * mp.pi)


if __name__ == "__main__":
    print("H(0.3,0.7)      ", mp.nstr(entropy([0.3, 0.7]), 20))
    print("V(0.3,0.7)      ", mp.nstr(varentropy([mp.mpf('0.3'), mp.mpf('0.7')]), 20))
    print("H(.5,.3,.2)     ", mp.nstr(entropy([mp.mpf('0.5'), mp.mpf('0.3'), mp.mpf('0.2')]), 20))
    print("V(.5,.3,.2)     ", mp.nstr(varentropy([mp.mpf('0.5'), mp.mpf('0.3'), mp.mpf('0.2')]), 20))
    print("C-(2)           ", mp.nstr(c_minus(2), 20))
    print("C-(3)           ", mp.nstr(c_minus(3), 20))
    print("n f(3,2)        ", mp.nstr(n_f([3, 2]), 20))
    print("log2(0.21)      ", mp.nstr(log2(mp.mpf('0.21')), 20))
    print("Q(1.96)         ", mp.nstr(q(mp.mpf('1.96')), 20))
    print("Q(-1.3)         ", mp.nstr(q(mp.mpf('-1.3')), 20))
    print("Qinv(0.1)       ", mp.nstr(mp.findroot(lambda x: q(x) - mp.mpf('0.1'), 1.28), 20))
    for p in ([0.3, 0.7], [0.25, 0.35, 0.4]):
        p = [mp.mpf(str(x)) for x in p]
        beta = min(min(p), varentropy(p))
        k = len(p)
        b = max(4 / beta ** 2, 1 + k / beta + 400 * k ** 3 / beta ** 1.5 + 1 / mp.sqrt(2 * mp.pi * beta))
        print("beta, B", [float(x) for x in p], mp.nstr(beta, 20), mp.nstr(b, 20))
    # Quartic Laplace integral, exact by quadrature, for the catalog test.
    for n in (64, 128):
        j = mp.quad(lambda x: mp.exp(-n * (x * x / 2 + x ** 4)), [-mp.inf, 0, mp.inf])
        print("quartic J(%d)    " % n, mp.nstr(j, 25))
    # Binary entropy root for the two-point manifold example.
    h = entropy([mp.mpf('0.3'), mp.mpf('0.7')])
    root = mp.findroot(lambda p: entropy([p, 1 - p]) - mp.mpf('0.8813'), 0.3)
    print("binary root for Gamma=0.8813", mp.nstr(root, 20))
    # Laplace integral along the J = Gamma curve through (.5,.3,.2), eps=.1,
    # curve built at n=500; arc length taken from the numerically
    # differentiated point map.
    mp.dps = 20
    t = [mp.mpf('0.5'), mp.mpf('0.3'), mp.mpf('0.2')]
    qi = mp.findroot(lambda x: q(x) - mp.mpf('0.1'), 1.28)
    jf = lambda p: entropy(p) + mp.sqrt(varentropy(p) / 500) * qi
    gam = jf(t)
    u1 = [1 / mp.sqrt(2), -1 / mp.sqrt(2), 0]
    u2 = [1 / mp.sqrt(6), 1 / mp.sqrt(6), -2 / mp.sqrt(6)]
    def pt(th, r):
        return [mp.mpf(1) / 3 + r * (mp.cos(th) * a + mp.sin(th) * b) for a, b in zip(u1, u2)]
    def rad(th):
        return mp.findroot(lambda r: jf(pt(th, r)) - gam, 0.2)
    def curve(th):
        return pt(th, rad(th))
    th0 = mp.atan2(sum((x - mp.mpf(1) / 3) * b for x, b in zip(t, u2)),
                   sum((x - mp.mpf(1) / 3) * a for x, a in zip(t, u1)))
    def integrand(th, n):
        p = curve(th)
        d = [mp.diff(lambda s: curve(s)[i], th) for i in range(3)]
        kl = sum(a * mp.log(a / b) for a, b in zip(t, p))
        return mp.exp(-n * kl) * mp.sqrt(sum(x * x for x in d))
    for n in (64,):
        j = mp.quad(lambda th: integrand(th, n), [th0 - mp.pi, th0 - 1, th0, th0 + 1, th0 + mp.pi])
        print("entropy curve J(%d)" % n, mp.nstr(j, 16))
