#!/usr/bin/env python3
"""High-precision values of the smooth cut-off bridge on (1,2).

psi(r) = r * E1 / (E1 + E2) with E1 = exp(-1/(r-1)), E2 = exp(-1/(2-r)).
Printed at 25 significant digits; frozen into tests/test_taming.cpp.
"""
import mpmath as mp

mp.mp.dps = 50


def psi(r):
    r = mp.mpf(r)
    if r <= 1:
        return mp.mpf(0)
    if r >= 2:
        return r
    e1 = mp.e ** (-1 / (r - 1))
    e2 = mp.e ** (-1 / (2 - r))
    return r * e1 / (e1 + e2)


for r in ["1.1", "1.25", "1.5", "1.75", "1.9"]:
    print(f"psi({r}) = {mp.nstr(psi(mp.mpf(r)), 25)}")

# identity-region / linear-region ratio checks used by property tests
print("psi(1.5)/1.5 =", mp.nstr(psi(mp.mpf('1.5')) / mp.mpf('1.5'), 25))
# worst-case ratio r/(1+psi(r)) on (1,2): scan to confirm the factor-2 bound headroom
best = max((mp.mpf(1) + mp.mpf(i) / 10000 for i in range(1, 10000)),
           key=lambda r: r / (1 + psi(r)))
print("argmax r/(1+psi) =", mp.nstr(best, 10),
      " value =", mp.nstr(best / (1 + psi(best)), 10))
