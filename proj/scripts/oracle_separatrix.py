#!/usr/bin/env python3
"""Independent CAS oracle (sympy) for separatrix jets and the Jouanolou family.

Usage:  python3 scripts/oracle_separatrix.py

Solves the graph equation omega|_{Z=phi(X,Y)} = 0 order by order with sympy
rational-function arithmetic, certifies each jet by substituting back into
the form, and prints:
  * the sphere-form jet at (0,0,1) (closed form -(X^2+Y^2)/2 - (X^2+Y^2)^2/8),
  * the Jouanolou m=3 family jet over the line w*(1,2,3) with the per-order
    maximal w-pole of the coefficient denominators,
  * specializations at w = 1, 2, -3 cross-checked against pointwise jets.
Golden values frozen into tests/test_foliations.cpp and the acceptance suite.
"""

import sympy as sp
from sympy import symbols, Rational, cancel, expand, together, fraction

X, Y, Z, w = symbols("X Y Z w")


def homog_part(e, k):
    e = sp.expand(e)
    out = 0
    for term in sp.Add.make_args(e):
        if sp.total_degree(term, X, Y) == k:
            out += term
    return out


def solve_jet(w1, w2, w3, point, N, axis=2):
    """omega = w1 dx + w2 dy + w3 dz with polynomial components in ambient x,y,z.

    Centers at `point` and solves for phi on the graph axis_var = phi(other two),
    coefficients may be rational functions of w.  Returns phi (expanded).
    """
    amb = sp.symbols("ax_ ay_ az_")
    comps = [w1, w2, w3]
    free = [i for i in range(3) if i != axis]
    # X, Y denote the two free centered coordinates, Z the solved one.
    sub = {amb[free[0]]: point[free[0]] + X,
           amb[free[1]]: point[free[1]] + Y,
           amb[axis]: point[axis] + Z}
    hw1 = expand(comps[free[0]].subs(sub))
    hw2 = expand(comps[free[1]].subs(sub))
    hw3 = expand(comps[axis].subs(sub))
    phi = sp.Integer(0)
    for k in range(0, N):
        s1 = expand(hw1.subs(Z, phi))
        s2 = expand(hw2.subs(Z, phi))
        s3 = expand(hw3.subs(Z, phi))
        # series inverse of s3 up to degree k
        c0 = cancel(homog_part(s3, 0))
        inv = [cancel(1 / c0)]
        for d in range(1, k + 1):
            acc = 0
            for j in range(0, d):
                acc += inv[j] * homog_part(s3, d - j)
            inv.append(cancel(expand(-cancel(acc) / c0)))
        def series_quot(snum, k):
            acc = 0
            for j in range(0, k + 1):
                acc += expand(homog_part(snum, j) * inv[k - j])
            return expand(-acc)
        Ak = series_quot(s1, k)
        Bk = series_quot(s2, k)
        phik1 = expand((X * Ak + Y * Bk) / (k + 1))
        # cross-derivative consistency
        assert sp.simplify(sp.diff(phik1, X) - Ak) == 0, f"consistency X at order {k}"
        assert sp.simplify(sp.diff(phik1, Y) - Bk) == 0, f"consistency Y at order {k}"
        phi = expand(phi + phik1)
    return phi


def certify(w1, w2, w3, point, phi, N, axis=2):
    """Residual of omega on the graph must vanish below total degree N."""
    amb = sp.symbols("ax_ ay_ az_")
    comps = [w1, w2, w3]
    free = [i for i in range(3) if i != axis]
    sub = {amb[free[0]]: point[free[0]] + X,
           amb[free[1]]: point[free[1]] + Y,
           amb[axis]: point[axis] + Z}
    hw1 = expand(comps[free[0]].subs(sub).subs(Z, phi))
    hw2 = expand(comps[free[1]].subs(sub).subs(Z, phi))
    hw3 = expand(comps[axis].subs(sub).subs(Z, phi))
    rx = expand(hw1 + hw3 * sp.diff(phi, X))
    ry = expand(hw2 + hw3 * sp.diff(phi, Y))
    for k in range(0, N):
        assert sp.simplify(cancel(homog_part(rx, k))) == 0, f"residual X deg {k}"
        assert sp.simplify(cancel(homog_part(ry, k))) == 0, f"residual Y deg {k}"
    return True


x_, y_, z_ = sp.symbols("ax_ ay_ az_")

print("# sphere form omega = x dx + y dy + z dz at (0,0,1)")
phi = solve_jet(x_, y_, z_, (0, 0, 1), 5)
certify(x_, y_, z_, (0, 0, 1), phi, 5)
closed = expand(-(X**2 + Y**2) / 2 - (X**2 + Y**2) ** 2 / 8)
print("sphere_jet_matches_closed_form =", sp.simplify(phi - closed) == 0)
print("sphere_jet =", sp.sstr(phi).replace("**", "^").replace(" ", ""))

print("# Jouanolou m=3 family along w*(1,2,3), axis z")
m = 3
j1 = x_ ** (m - 1) * z_ - y_**m
j2 = y_ ** (m - 1) * x_ - z_**m
j3 = z_ ** (m - 1) * y_ - x_**m
N = 4
phiw = solve_jet(j1, j2, j3, (w, 2 * w, 3 * w), N)
certify(j1, j2, j3, (w, 2 * w, 3 * w), phiw, N)
poly = sp.Poly(phiw, X, Y)
pole = {}
coeff_strs = {}
for mon, coeff in zip(poly.monoms(), poly.coeffs()):
    k = mon[0] + mon[1]
    c = cancel(together(coeff))
    num, den = fraction(c)
    mult = 0
    dp = sp.Poly(den, w)
    while dp.eval(0) == 0:
        dp = sp.Poly(sp.cancel(dp.as_expr() / w), w)
        mult += 1
    pole[k] = max(pole.get(k, 0), mult)
    coeff_strs[(mon[0], mon[1])] = sp.sstr(c).replace("**", "^").replace(" ", "")
print("jouanolou_pole_profile =", dict(sorted(pole.items())))
print("# per-coefficient (X^a Y^b -> coeff(w)):")
for k_ in sorted(coeff_strs):
    print(f"  coef[{k_[0]},{k_[1]}] = {coeff_strs[k_]}")

print("# specialization cross-check at w0 in {1, 2, -3}")
for w0 in [1, 2, -3]:
    phi_pt = solve_jet(j1, j2, j3, (w0, 2 * w0, 3 * w0), N)
    diff = sp.simplify(expand(phiw.subs(w, w0)) - phi_pt)
    print(f"specialize_w{w0}_matches =", diff == 0)

print("# rotational control omega = y dx - x dy, direction (1,0,0): leaves contain planes y = const slope")
phir = solve_jet(y_, -x_, sp.Integer(0), (w, 0, 0), 4, axis=1)
certify(y_, -x_, sp.Integer(0), (w, 0, 0), phir, 4, axis=1)
print("rotational_family_jet =", sp.sstr(expand(phir)).replace("**", "^").replace(" ", ""))
polyr = sp.Poly(phir + X * 0 + Y * 0, X, Y)
maxpole = 0
for mon, coeff in zip(polyr.monoms(), polyr.coeffs()):
    num, den = fraction(cancel(together(coeff)))
    dp = sp.Poly(den, w)
    mult = 0
    while dp.eval(0) == 0:
        dp = sp.Poly(sp.cancel(dp.as_expr() / w), w)
        mult += 1
    maxpole = max(maxpole, mult)
print("rotational_family_max_pole =", maxpole)
