"""Stationarity of |t|, -|t| and max{0, min{x1, x2}} at the origin.

|t| is Fréchet and Clarke stationary at 0. -|t| is only Clarke stationary:
its Fréchet subdifferential is empty, so the distance is infinite.
max{0, min{x1, x2}} has Fréchet subdifferential {0} but a Clarke
subdifferential with three vertices.
"""
from gmpy2 import mpq

from pastat import CLARKE, FRECHET, MaxMinFormula, local_model, reduce_vertices, test
from pastat.rational import fmt_rational, fmt_vec
from pastat.subdiff import clarke_slopes_maxmin

Z = mpq(0)
E = {1: ((mpq(1),), Z), -1: ((mpq(-1),), Z)}

examples = {
    "|t|": MaxMinFormula(1, (E[1], E[-1]), ((0,), (1,))),
    "-|t|": MaxMinFormula(1, (E[1], E[-1]), ((0, 1),)),
    "max{0,min{x1,x2}}": MaxMinFormula(
        2, (((Z, Z), Z), ((mpq(1), Z), Z), ((Z, mpq(1)), Z)), ((0,), (1, 2))),
}

for name, f in examples.items():
    w = (Z,) * f.dim
    row = [f"{name:>20}"]
    for notion in (FRECHET, CLARKE):
        v = test(f, w, 0, notion)
        row.append(f"{notion}: dist^2 = {fmt_rational(v.dist_sq):>3}  stationary = {v.yes}")
    print("   ".join(row))

f = examples["max{0,min{x1,x2}}"]
hull = reduce_vertices(clarke_slopes_maxmin(local_model(f, (Z, Z))))
print("Clarke vertices of max{0,min{x1,x2}} at 0:", sorted(fmt_vec(p) for p in hull.vertices))
