"""Reference values for the Monte Carlo layer.

Run with `python3 probabilistic_oracle.py`; the printed constants are frozen
into tests/unit/test_sphere.cpp, tests/unit/test_cylinder.cpp and the
acceptance suite. Every value is computed directly by mpmath quadrature of
its defining integral, independently of the C++ code.
"""
import mpmath as mp

mp.mp.dps = 20


def df_plane(A, b):
    # int_C |x|^-A |x - 1|^-b d^2x in polar coordinates about 0.
    def radial(r):
        return r ** (1 - A) * mp.quad(lambda t: abs(r * mp.expj(t) - 1) ** (-b), [0, mp.pi, 2 * mp.pi])
    return mp.quad(radial, [0, mp.mpf(1) / 2, 1, 2, mp.inf])


def circle_variance(c, eps):
    # Double circle average of -ln|x - y| + ln|x|_+ + ln|y|_+ for x, y on |x - c| = eps.
    def lp(x):
        return max(mp.mpf(0), mp.log(abs(x)))
    # -ln|x - y| averages to -ln eps; only the |.|_+ terms need quadrature.
    # Split at the crossings with the unit circle, where ln|x|_+ has kinks.
    pts = [mp.mpf(0), 2 * mp.pi]
    cosv = (1 - abs(c) ** 2 - eps ** 2) / (2 * eps * abs(c))
    if -1 < cosv < 1:
        for sgn in (1, -1):
            pts.append((mp.arg(c) + sgn * mp.acos(cosv)) % (2 * mp.pi))
    h = mp.quad(lambda t: lp(c + eps * mp.expj(t)), sorted(pts)) / (2 * mp.pi)
    return -mp.log(eps) + 2 * h


def main():
    print("DF plane integral (A=b=1.5) =", mp.nstr(df_plane(mp.mpf('1.5'), mp.mpf('1.5')), 18))
    print("DF plane integral (A=1.2, b=1.4) =", mp.nstr(df_plane(mp.mpf('1.2'), mp.mpf('1.4')), 18))
    print("circle variance c=1.05 eps=0.1 =", mp.nstr(circle_variance(mp.mpf('1.05'), mp.mpf('0.1')), 18))
    print("circle variance c=0.7+0.75i eps=0.2 =", mp.nstr(circle_variance(mp.mpc('0.7', '0.75'), mp.mpf('0.2')), 18))
    g = mp.mpf(1)
    for a in ['1.2', '1.5']:
        a = mp.mpf(a)
        print("E[I(%s)] =" % a, mp.nstr(2 * mp.pi * mp.quad(lambda r: r ** (1 - g * a), [0, 1]), 18))


if __name__ == "__main__":
    main()
