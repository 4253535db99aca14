import pytest
from gmpy2 import mpq

from pastat import oracle
from pastat.gadgets import (Graph, clique_direction, cnn_dc, cnn_forward, complete_graph,
                            cycle_graph, forb_pairs, gen_clarke_gadget, gen_cnn_losses,
                            gen_frechet_gadget, moment_points, parse_graph, path_graph,
                            relu_penalty)
from pastat.pa import eval_dc, eval_maxmin

from helpers import rand_vec, v


def test_moment_points():
    assert moment_points(3) == [v(1, 1), v(2, 4), v(3, 9)]
    assert moment_points(2) == [v(1, 1), v(2, 4)]
    with pytest.raises(ValueError):
        moment_points(1)


def test_moment_points_are_exposed():
    p = moment_points(5)
    r2 = v(4, -1)
    assert sum((a - b) * c for a, b, c in zip(p[1], p[0], r2)) == 1
    for c in range(1, 6):
        r = v(2 * c, -1)
        vals = [sum(x * y for x, y in zip(q, r)) for q in p]
        assert vals.index(max(vals)) == c - 1 and vals.count(max(vals)) == 1


def test_forb_pairs():
    assert forb_pairs(complete_graph(3)) == [(1, 1), (2, 2), (3, 3)]
    assert forb_pairs(Graph(2)) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert set(forb_pairs(path_graph(3))) == {(1, 1), (2, 2), (3, 3), (1, 3), (3, 1)}


def test_graph_parsing():
    G = parse_graph("3 2\n1 2\n2 3\n")
    assert G == path_graph(3)
    assert parse_graph(G.to_text()) == G
    for bad in ["", "3\n", "3 2\n1 2\n", "3 1\n1 1\n", "3 1\n1 4\n", "3 2\n1 2\n2 1\n", "2 1\n1 x\n"]:
        with pytest.raises(ValueError):
            parse_graph(bad)


def test_frechet_gadget_shape():
    fg = gen_frechet_gadget(complete_graph(3), 2)
    f = fg["maxmin"]
    assert f.dim == 4 and len(f.groups) == 3
    assert all(len(g) == 9 for g in f.groups)
    f = gen_frechet_gadget(path_graph(4), 3)["maxmin"]
    assert f.dim == 6 and len(f.groups) == 3 * len(forb_pairs(path_graph(4)))
    for g in f.groups:
        blocks = {r for j in g for r in range(3) if f.affine[j][0][2 * r:2 * r + 2] != v(0, 0)}
        assert len(blocks) == 2


def test_frechet_gadget_no_clique_is_zero(rng):
    fg = gen_frechet_gadget(path_graph(3), 3)
    for _ in range(50):
        z = rand_vec(rng, 6)
        assert eval_maxmin(fg["maxmin"], z) == 0 == eval_dc(fg["dc"], z)


def test_frechet_gadget_clique_direction():
    fg = gen_frechet_gadget(complete_graph(3), 2)
    z = clique_direction((2, 3), 2)
    assert z == v(8, -2, 12, -2)
    assert eval_maxmin(fg["maxmin"], z) <= -2
    assert eval_dc(fg["dc"], z) == eval_maxmin(fg["maxmin"], z)


def test_gadget_padding_and_errors():
    fg = gen_frechet_gadget(Graph(2, frozenset({(1, 2)})), 2)
    assert fg["maxmin"].dim == 4
    with pytest.raises(ValueError):
        gen_frechet_gadget(complete_graph(3), 1)
    with pytest.raises(ValueError):
        gen_clarke_gadget(complete_graph(3), 1)
    with pytest.raises(ValueError):
        gen_cnn_losses(complete_graph(3), 1)


def test_clarke_gadget(rng):
    for G, k in [(path_graph(3), 3), (complete_graph(3), 2), (cycle_graph(4), 2)]:
        cg = gen_clarke_gadget(G, k)
        assert cg["maxmin"].dim == 2 * k + 1
        assert eval_maxmin(cg["maxmin"], (mpq(0),) * (2 * k + 1)) == 0
        fF = gen_frechet_gadget(G, k)["maxmin"]
        for _ in range(30):
            z = rand_vec(rng, 2 * k + 1)
            t = z[-1]
            want = t / 2 + max(eval_maxmin(fF, z[:-1]), -abs(t) / 2)
            assert eval_maxmin(cg["maxmin"], z) == want == eval_dc(cg["dc"], z)


def test_relu_penalty():
    for c in range(1, 6):
        assert relu_penalty(c, v(2 * c, -1), 5) == 0
    assert relu_penalty(1, v(6, -1), 5) == 3
    s = v(7, -2)
    p = moment_points(5)
    best = max(range(1, 6), key=lambda u: sum(a * b for a, b in zip(p[u - 1], s)))
    assert relu_penalty(best, s, 5) == 0
    with pytest.raises(ValueError):
        relu_penalty(0, s, 5)


def test_cnn_no_clique_is_flat(rng):
    L = gen_cnn_losses(path_graph(3), 3)
    for _ in range(50):
        z = rand_vec(rng, 6)
        assert L["lf_closed"](z) == 0
        zt = rand_vec(rng, 7)
        assert L["lc_closed"](zt) == zt[-1] / 2


def test_cnn_clique_dips():
    L = gen_cnn_losses(complete_graph(3), 2)
    z = clique_direction((1, 2), 2)
    assert L["lf_closed"](z) <= -2
    assert cnn_forward(L["net_f"], z) == L["lf_closed"](z)


def test_cnn_forward_examples():
    L = gen_cnn_losses(path_graph(3), 3)
    assert cnn_forward(L["net_c"], (mpq(0),) * 6 + (mpq(4),)) == 2
    for G in (complete_graph(3), path_graph(4)):
        net = gen_cnn_losses(G, 2)["net_f"]
        assert cnn_forward(net, (mpq(0),) * 4) == 0
    with pytest.raises(ValueError):
        cnn_forward(L["net_f"], v(1, 2))


def test_cnn_maxmin_piece_bound():
    L = gen_cnn_losses(cycle_graph(5), 3)
    assert all(len(g) <= 16 for g in L["lf_maxmin"].groups)
    assert L["lf_maxmin"].dim == 6 and L["lc_maxmin"].dim == 7


def test_cnn_forms_agree(rng):
    for G, k in [(complete_graph(4), 2), (cycle_graph(5), 3), (Graph(3), 2)]:
        L = gen_cnn_losses(G, k)
        dcf, dcc = cnn_dc(G, k), cnn_dc(G, k, True)
        for _ in range(25):
            z = rand_vec(rng, 2 * k)
            val = L["lf_closed"](z)
            assert val <= 0
            assert val == cnn_forward(L["net_f"], z) == eval_maxmin(L["lf_maxmin"], z) == eval_dc(dcf, z)
            zt = rand_vec(rng, 2 * k + 1)
            val = L["lc_closed"](zt)
            assert val == cnn_forward(L["net_c"], zt) == eval_maxmin(L["lc_maxmin"], zt) == eval_dc(dcc, zt)


def test_has_clique_ground_truth():
    assert oracle.has_k_clique(complete_graph(3), 3)
    assert not oracle.has_k_clique(path_graph(3), 3)
    assert not oracle.has_k_clique(cycle_graph(5), 3)
    assert oracle.has_k_clique(cycle_graph(5), 2)
