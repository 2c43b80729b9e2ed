#!/usr/bin/env python3
"""Independent CAS oracle (sympy) for line-closure and saturation-profile goldens.

Usage:  python3 scripts/oracle_saturation_profile.py

For a Laurent series f in QQ[x^-1, y][[t]] truncated at t^N this clears
denominators (multiply by the minimal x power), saturates (q, t^N) by x in
QQ[x,y,t], and prints the reduced grevlex basis of J_N together with the
projection pi_M(J_N) = J_N + (t^M).  Used to freeze golden generator lists
in tests/test_closures.cpp and the acceptance suite.
"""

import sympy as sp
from sympy import symbols, groebner, factorial

x, y, t, u = symbols("x y t u")


def fmt(p):
    return sp.sstr(sp.expand(p), order="grevlex").replace("**", "^").replace(" ", "")


def red_gb(gens, gen_order):
    gens = [g for g in gens if sp.expand(g) != 0]
    if not gens:
        return []
    g = groebner(gens, *gen_order, order="grevlex", field=True)
    return [fmt(p) for p in g.exprs]


def eliminate_u(gens, ring):
    g = groebner(gens, u, *ring, order="lex", field=True)
    keep = [p for p in g.exprs if u not in p.free_symbols]
    return keep


def saturate_by_x(gens, ring):
    return eliminate_u(list(gens) + [u * x - 1], ring)


def laurent_clear(f):
    """Return q = f * x^v with the minimal v >= 0 making q polynomial."""
    num, den = sp.fraction(sp.together(sp.expand(f)))
    return sp.expand(num), den


def profile(f_trunc_by_N, Ns, M, label):
    print(f"# {label}")
    for N in Ns:
        f = f_trunc_by_N(N)
        q, _ = laurent_clear(f)
        JN = saturate_by_x([q, t**N], [x, y, t])
        piM = red_gb(JN + [t**M], [x, y, t])
        print(f"{label}_J{N} = {red_gb(JN, [x, y, t])}")
        print(f"{label}_pi{M}_J{N} = {piM}")


def counterexample(N):
    return y + sum(factorial(i) * x ** (-i) * t**i for i in range(1, N))


print("# oracle: J_2 for f = y + x^-1*t (spec worked example)")
q2 = sp.expand((y + x ** (-1) * t) * x)
J2 = saturate_by_x([q2, t**2], [x, y, t])
print("simple_J2 =", red_gb(J2, [x, y, t]))

profile(counterexample, [2, 3, 4, 5, 6], 2, "ctrex")

print("# oracle: polynomial control f' = y + x*t, M = 2")
for N in [2, 3, 4]:
    f = y + x * t
    JN = saturate_by_x([f, t**N], [x, y, t])
    print(f"poly_J{N} =", red_gb(JN, [x, y, t]))
    print(f"poly_pi2_J{N} =", red_gb(JN + [t**2], [x, y, t]))

print("# oracle: line closures in QQ[x,t]")
for name, f, N in [("xt", x * t, 3), ("xinvt", t / x, 3), ("xplust", x + t, 3)]:
    q, _ = laurent_clear(f)
    J = saturate_by_x([q, t**N], [x, t])
    print(f"line_{name}_N{N} =", red_gb(J, [x, t]))

print("# oracle: strictness of pi_2 chain (ctrex): each pi2(J_{N+1}) strictly inside pi2(J_N)")
prev = None
for N in [2, 3, 4, 5, 6]:
    f = counterexample(N)
    q, _ = laurent_clear(f)
    JN = saturate_by_x([q, t**N], [x, y, t])
    cur = groebner(JN + [t**2], x, y, t, order="grevlex", field=True)
    if prev is not None:
        inside = all(prev.reduce(g)[1] == 0 for g in cur.exprs)
        equal = inside and all(cur.reduce(g)[1] == 0 for g in prev.exprs)
        print(f"pi2(J_{N}) contained in pi2(J_{N-1}):", inside, "| equal:", equal)
    prev = cur
