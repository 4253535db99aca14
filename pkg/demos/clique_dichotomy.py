"""The clique gadgets separate graphs with a k-clique from graphs without one.

For the Fréchet gadget the distance is 0 without a k-clique and infinite
with one. For the Clarke gadget it is 1/4 without and 0 with.
"""
from pastat import CLARKE, FRECHET, gen_clarke_gadget, gen_frechet_gadget, test
from pastat.gadgets import complete_graph, cycle_graph, path_graph
from pastat.oracle import has_k_clique
from pastat.rational import fmt_rational, zeros

graphs = {"triangle": complete_graph(3), "C5": cycle_graph(5), "P4": path_graph(4), "K5": complete_graph(5)}

print(f"{'graph':>8} {'k':>2} {'clique':>6} {'frechet':>8} {'clarke':>7}")
for name, G in graphs.items():
    for k in (2, 3):
        fg, cg = gen_frechet_gadget(G, k)["dc"], gen_clarke_gadget(G, k)["dc"]
        fr = test(fg, zeros(fg.dim), 0, FRECHET)
        cl = test(cg, zeros(cg.dim), 0, CLARKE)
        print(f"{name:>8} {k:>2} {str(has_k_clique(G, k)):>6} "
              f"{fmt_rational(fr.dist_sq):>8} {fmt_rational(cl.dist_sq):>7}")
