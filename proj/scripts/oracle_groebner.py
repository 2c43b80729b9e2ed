#!/usr/bin/env python3
"""Independent CAS oracle (sympy) for Groebner-kernel golden values.

Usage:  python3 scripts/oracle_groebner.py

Prints frozen test data: reduced Groebner bases, eliminations and
saturations for the pinned instances used by tests/test_groebner.cpp and
the acceptance suite.  Output polynomials use the formalis text grammar
(^ for powers, * between factors).
"""

import sympy as sp
from sympy import symbols, groebner, QQ

x, y, z, t, u = symbols("x y z t u")


def fmt(p):
    s = sp.sstr(sp.expand(p), order="grevlex")
    return s.replace("**", "^").replace(" ", "")


def red_gb(gens, gen_order, order="grevlex"):
    g = groebner(gens, *gen_order, order=order, field=True)
    return [fmt(p) for p in g.exprs]


def eliminate(gens, gen_order, drop):
    """Elimination via lex with dropped variables first."""
    seq = list(drop) + [v for v in gen_order if v not in drop]
    g = groebner(gens, *seq, order="lex", field=True)
    keep = [p for p in g.exprs if not any(v in p.free_symbols for v in drop)]
    kept_vars = [v for v in gen_order if v not in drop]
    if not keep:
        return []
    return red_gb(keep, kept_vars)


def saturate(gens, gen_order, f):
    return eliminate(list(gens) + [u * f - 1], list(gen_order) + [u], [u])


def show(name, val):
    print(f"{name} = {val}")


print("# oracle: reduced Groebner bases (grevlex unless stated)")
show("gb_circle_line_lex", red_gb([x**2 + y**2 - 1, x - y], [x, y], order="lex"))
show("gb_zero", red_gb([sp.Integer(0) * x], [x]))
show("gb_x2_x", red_gb([x**2, x], [x]))

print("# oracle: eliminations")
show("elim_uxm1_ymu", eliminate([u * x - 1, y - u], [x, y, u], [u]))

print("# oracle: saturations")
show("sat_xy_xt_by_x", saturate([x * y, x * t], [x, y, t], x))
show("sat_y_by_x", saturate([y], [x, y], x))
show("sat_x2_by_x", saturate([x**2], [x], x))

print("# oracle: 20 pinned saturate/eliminate instances (criterion: kernel soundness)")
pinned = [
    ("sat", [x * y, x * t], [x, y, t], x),
    ("sat", [x**2 * y - x * t, x * y**2], [x, y, t], x),
    ("sat", [x**3, x * y + t**2], [x, y, t], x),
    ("sat", [y**2 - x * t, x * y], [x, y, t], y),
    ("sat", [x * y - t, t**3], [x, y, t], t),
    ("sat", [(x - 1) * y, (x - 1) * t**2], [x, y, t], x - 1),
    ("sat", [x**2 + y**2 - 1, x * y], [x, y], x),
    ("sat", [x * (y - 1), x * (y + 1)], [x, y], x),
    ("sat", [x**2 * t, y * t**2], [x, y, t], t),
    ("sat", [x * y * z, x * z**2], [x, y, z], z),
    ("elim", [u * x - 1, y - u], [x, y, u], [u]),
    ("elim", [u**2 - x, u**3 - y], [x, y, u], [u]),
    ("elim", [x + y + z, x * y + y * z + x * z, x * y * z - 1], [x, y, z], [x]),
    ("elim", [y - x**2, z - x**3], [x, y, z], [x]),
    ("elim", [u * y - x, u * t - 1], [x, y, t, u], [u]),
    ("elim", [x - u - u**2, y - u**2], [x, y, u], [u]),
    ("elim", [u * x - y**2, u * y - t], [x, y, t, u], [u]),
    ("elim", [x**2 - u, y - u**2], [x, y, u], [u]),
    ("elim", [u * (x + y) - 1, u * t - x], [x, y, t, u], [u]),
    ("elim", [x - u * y, z - u**2], [x, y, z, u], [u]),
]
for i, inst in enumerate(pinned):
    if inst[0] == "sat":
        _, gens, ring, f = inst
        res = saturate(gens, ring, f)
        show(f"pin{i:02d}_sat[{','.join(fmt(g) for g in gens)};{fmt(f)}]", res)
    else:
        _, gens, ring, drop = inst
        res = eliminate(gens, ring, drop)
        show(f"pin{i:02d}_elim[{','.join(fmt(g) for g in gens)};{','.join(str(d) for d in drop)}]", res)

print("# oracle: radical membership checks")
show("radical_xplusy_in_x2_y3", sp.simplify(sp.expand((x + y) ** 4 - (x**2 * (x**2 + 4 * x * y + 6 * y**2) + y**3 * (4 * x + y)))) == 0)

print("# oracle: intersections for chevalley")


def intersect(g1, g2, ring):
    w = symbols("__w")
    gens = [w * p for p in g1] + [(1 - w) * p for p in g2]
    return eliminate(gens, list(ring) + [w], [w])


show("int_xy_x2y2", intersect([x, y], [x**2, x * y, y**2], [x, y]))
show("int_xy2_xy3", intersect([x, y**2], [x, y**3], [x, y]))
