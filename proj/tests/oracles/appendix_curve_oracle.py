"""Independent high-precision oracle for the explicit boundary curve.

Produces the frozen constants used by the C++ curve tests.  Runs with
mpmath only; shares no code with the library.
"""
import mpmath as mp

mp.mp.dps = 40


def position(t):
    rho = mp.sqrt(1 + t * t)
    y = 1 / ((2 - rho) ** (mp.mpf(2) / 3) * (1 + rho) ** (mp.mpf(1) / 3))
    return t * y, y


def speed(t):
    dx = mp.diff(lambda u: position(u)[0], t)
    dy = mp.diff(lambda u: position(u)[1], t)
    return mp.sqrt(dx * dx + dy * dy)


def simpson(f, a, b, panels):
    h = (b - a) / panels
    total = f(a) + f(b)
    for i in range(1, panels):
        total += (4 if i % 2 else 2) * f(a + i * h)
    return total * h / 3


def main():
    print("pos(0)   =", [mp.nstr(v, 20) for v in position(mp.mpf(0))])
    print("pos(1)   =", [mp.nstr(v, 20) for v in position(mp.mpf(1))])
    print("pos(-1)  =", [mp.nstr(v, 20) for v in position(mp.mpf(-1))])
    rho = mp.mpf(1)
    kappa0 = (2 - rho) ** (mp.mpf(5) / 3) * (1 + rho) ** (mp.mpf(5) / 6) / (
        2 ** mp.mpf(1.5) * rho ** mp.mpf(2.5))
    print("kappa(0) =", mp.nstr(kappa0, 20))
    # Brute-force composite Simpson in double precision on analytic speed.
    import math

    def fast_speed(t):
        r = math.sqrt(1 + t * t)
        y = (2 - r) ** (-2 / 3) * (1 + r) ** (-1 / 3)
        yp = t * (2 - r) ** (-5 / 3) * (1 + r) ** (-4 / 3)
        xp = y + t * yp
        return math.hypot(xp, yp)

    n = 10 ** 6
    h = 2.0 / n
    acc = math.fsum((4 if i % 2 else 2) * fast_speed(-1 + i * h) for i in range(1, n))
    total = (acc + fast_speed(-1.0) + fast_speed(1.0)) * h / 3
    print("simpson length(-1..1) =", repr(total))
    print("mp quad length        =", mp.nstr(mp.quad(speed, [-1, 0, 1]), 20))
    print("2^(-1/3) =", mp.nstr(mp.mpf(2) ** (-mp.mpf(1) / 3), 20))
    print("2^(-2/3) =", mp.nstr(mp.mpf(2) ** (-mp.mpf(2) / 3), 20))


if __name__ == "__main__":
    main()
