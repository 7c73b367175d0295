"""Regenerate the frozen oracle values in ``tests/oracle_values.py``.

Every value comes from mpmath at high precision by a route that shares no
code with the package: quadrature for complete integrals and for inverting
the incomplete integral, ``findroot`` for the degree equation, and, for the
extremal products of degree 2 and 3, the characterization by real zeros,
``B(0) = tau^-1/2`` and critical values alternating in sign with modulus
``tau^-1/2`` (no elliptic functions involved).

    python3 tests/oracles/generate_oracles.py
"""
import mpmath as mp

mp.mp.dps = 60


def K_quad(k):
    return mp.quad(lambda th: 1 / mp.sqrt(1 - k * k * mp.sin(th) ** 2), [0, mp.pi / 2])


def F_quad(phi, k):
    return mp.quad(lambda th: 1 / mp.sqrt(1 - k * k * mp.sin(th) ** 2), [0, phi])


def sncndn_quad(u, k):
    phi = mp.findroot(lambda p: F_quad(p, k) - u, u)
    s, c = mp.sin(phi), mp.cos(phi)
    return s, c, mp.sqrt(1 - k * k * s * s)


def kprime_ratio(k):
    return K_quad(mp.sqrt(1 - k * k)) / K_quad(k)


def modulus(n, kappa):
    target = n * kprime_ratio(kappa)
    # solve in x = log(k/k') for conditioning
    g = lambda x: kprime_ratio(1 / mp.sqrt(1 + mp.exp(-2 * x))) - target
    x = mp.findroot(g, mp.log(kappa) - 2)
    return 1 / mp.sqrt(1 + mp.exp(-2 * x))


def blaschke_real(zs, z):
    out = mp.mpf(1)
    for a in zs:
        out *= (z - a) / (1 - a * z)
    return out


def extremal_zeros(n, tau, guess):
    """Real zeros with B(0) = t and alternating critical values +-t."""
    t = 1 / mp.sqrt(tau)

    def crit(zs, lo, hi):
        # B'/B has a simple pole at each zero, so it changes sign between them
        L = lambda z: sum((1 - a * a) / ((z - a) * (1 - a * z)) for a in zs)
        a, b = lo, hi
        for _ in range(240):
            m = (a + b) / 2
            if L(m) > 0:
                a = m
            else:
                b = m
        return (a + b) / 2

    def eqs(*zs):
        zs = sorted(zs)
        out = [blaschke_real(zs, 0) - t]
        for j in range(n - 1):
            c = crit(zs, zs[j], zs[j + 1])
            sign = 1 if (n - 2 - j) % 2 else -1
            out.append(blaschke_real(zs, c) - sign * t)
        return out

    return sorted(mp.findroot(eqs, guess))


def main():
    print("AGM_1_HALF =", mp.nstr(mp.agm(1, 0.5), 20))
    ks = [mp.mpf(i) / 100 for i in range(5, 100, 5)]
    print("K_TABLE = {")
    for k in ks:
        print(f"    {float(k)!r}: {mp.nstr(K_quad(k), 20)},")
    print("}")
    s, c, d = sncndn_quad(mp.mpf("0.7"), mp.mpf("0.5"))
    print("SNCNDN_07_05 =", tuple(mp.nstr(v, 20) for v in (s, c, d)))
    s, c, d = sncndn_quad(mp.mpf("1.3"), mp.mpf("0.9"))
    print("SNCNDN_13_09 =", tuple(mp.nstr(v, 20) for v in (s, c, d)))
    print("MODULUS_2_025 =", mp.nstr(modulus(2, mp.mpf("0.25")), 20))
    print("MODULUS_3_05 =", mp.nstr(modulus(3, mp.mpf("0.5")), 20))
    z2 = extremal_zeros(2, 9, [-0.95, -0.35])
    print("ZEROS_2_9 =", [mp.nstr(v, 20) for v in z2])
    z3 = extremal_zeros(3, 4, [-0.9995, -0.98, -0.51])
    print("ZEROS_3_4 =", [mp.nstr(v, 20) for v in z3])
    # dfntau0 for n = 2: (b - a)/(1 - ab) with the zeros a < b
    for tau in (4, 200):
        a, b = extremal_zeros(2, tau, [-0.95, -0.5] if tau == 4 else [-0.999, -0.2])
        print(f"DFNTAU0_2_{tau} =", mp.nstr((b - a) / (1 - a * b), 20))


if __name__ == "__main__":
    main()
