"""A two-layer ReLU convolutional network whose training loss encodes k-clique.

The network output, its closed form and its max-min form agree at random
rational points, and the stationarity pattern follows the clique gadgets.
"""
import random

from gmpy2 import mpq

from pastat import CLARKE, FRECHET, cnn_forward, eval_maxmin, gen_cnn_losses, test
from pastat.gadgets import complete_graph, path_graph
from pastat.rational import fmt_rational, zeros

rng = random.Random(7)
k = 3
for name, G in {"K4": complete_graph(4), "P4": path_graph(4)}.items():
    L = gen_cnn_losses(G, k)
    for _ in range(20):
        p = tuple(mpq(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(2 * k + 1))
        assert L["lc_closed"](p) == cnn_forward(L["net_c"], p) == eval_maxmin(L["lc_maxmin"], p)
        assert L["lf_closed"](p[:-1]) == cnn_forward(L["net_f"], p[:-1]) == eval_maxmin(L["lf_maxmin"], p[:-1])
    fr = test(L["lf_maxmin"], zeros(2 * k), 0, FRECHET)
    cl = test(L["lc_maxmin"], zeros(2 * k + 1), 0, CLARKE)
    print(f"{name}: network = closed form = max-min at 20 points; "
          f"Fréchet dist^2 {fmt_rational(fr.dist_sq)}, Clarke dist^2 {fmt_rational(cl.dist_sq)}")
