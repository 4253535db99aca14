import random

import pytest
from gmpy2 import mpq

from pastat import oracle
from pastat import subdiff as sd
from pastat.gadgets import (complete_graph, gen_clarke_gadget, gen_frechet_gadget, moment_points,
                            path_graph)
from pastat.lp import OPTIMAL, LpProblem, lp_solve
from pastat.pa import DcFunction, Leaf, Max, MaxMinFormula, Sum, eval_dc, eval_maxmin, local_model
from pastat.polytope import erosion, in_hull
from pastat.rational import INF

from helpers import abs_t, abs_tree, dc_abs, dc_neg_abs, neg_abs_t, rand_vec, relu_min, v

ZERO1, ZERO2 = v(0), v(0, 0)


def test_subdiff_mc_examples():
    assert sd.subdiff_mc(abs_tree(), ZERO1).vertices == (v(-1), v(1))
    assert sd.subdiff_mc(Sum((abs_tree(), abs_tree())), ZERO1).vertices == (v(-2), v(2))
    assert sd.subdiff_mc(abs_tree(), v(3)).vertices == (v(1),)
    g = gen_frechet_gadget(complete_graph(3), 2)["dc"].g
    Y = sd.subdiff_mc(g, (mpq(0),) * 4)
    p = moment_points(3)
    assert set(Y.vertices) == {p[a] + p[b] for a in range(3) for b in range(3)}


def test_active_slopes_examples():
    assert set(sd.active_slopes(local_model(abs_t(), ZERO1))) == {v(1), v(-1)}
    assert set(sd.active_slopes(local_model(relu_min(), ZERO2))) == {v(0, 0), v(1, 0), v(0, 1)}
    single = MaxMinFormula(2, ((v(3, -1), 0),), ((0,),))
    assert sd.active_slopes(local_model(single, ZERO2)) == [v(3, -1)]
    assert len(sd.active_slope_cells(local_model(single, ZERO2))) == 1


def test_active_slopes_skip_inessential_pieces():
    f = MaxMinFormula(1, ((v(1), 0), (v(2), 0), (v(3), 0)), ((0, 1), (0, 2)))
    # max{min{x,2x}, min{x,3x}}: slope 1 on x > 0, max{2x, 3x} = 2x on x < 0.
    assert set(sd.active_slopes(local_model(f, ZERO1))) == {v(1), v(2)}


def test_frechet_maxmin_examples():
    dist, wit, _ = sd.frechet_dist_maxmin(abs_t(), ZERO1)
    assert dist == 0 and wit == ZERO1
    dist, wit, cert = sd.frechet_dist_maxmin(neg_abs_t(), ZERO1)
    assert dist == INF and wit is None and cert["farkas"]
    dist, wit, _ = sd.frechet_dist_maxmin(relu_min(), ZERO2)
    assert dist == 0 and wit == ZERO2


def test_frechet_of_relu_min_is_the_origin_only():
    model = local_model(relu_min(), ZERO2)
    assert oracle.directional_audit(model, ZERO2)
    for xi in [v("1/10", 0), v(0, "1/10"), v("-1/10", 0), v(0, "-1/10")]:
        assert not oracle.directional_audit(model, xi)


def test_frechet_dc_examples():
    f = DcFunction(abs_tree(), abs_tree())
    dist, wit, _ = sd.frechet_dist_dc(f, ZERO1)
    assert dist == 0 and wit == ZERO1
    f = DcFunction(Leaf(v(1)), abs_tree())
    assert sd.frechet_dist_dc(f, ZERO1)[0] == INF
    twin = MaxMinFormula(1, ((v(0), 0), (v(2), 0)), ((0, 1),))
    assert sd.frechet_dist_maxmin(twin, ZERO1)[0] == INF
    f = gen_frechet_gadget(complete_graph(3), 2)["dc"]
    assert sd.frechet_dist_dc(f, (mpq(0),) * 4)[0] == INF


def test_frechet_dc_erosion_witness_nonzero():
    # X = [1, 3], Y = {0}
    h = Max((Leaf(v(3)), Leaf(v(1))))
    g = Leaf(v(0))
    dist, wit, _ = sd.frechet_dist_dc(DcFunction(h, g), ZERO1)
    assert dist == 1 and wit == v(1)


def test_clarke_examples():
    assert sd.clarke_dist(abs_t(), ZERO1)[0] == 0
    assert sd.clarke_dist(neg_abs_t(), ZERO1)[0] == 0
    assert sd.clarke_dist(dc_neg_abs(), ZERO1)[0] == 0
    dist, _, cert = sd.clarke_dist(relu_min(), ZERO2)
    assert dist == 0
    slopes = sd.clarke_slopes_maxmin(local_model(relu_min(), ZERO2))
    assert set(slopes) == {v(0, 0), v(1, 0), v(0, 1)}


def test_clarke_seesaw():
    t_half = MaxMinFormula(1, ((v("1/2"), 0),), ((0,),))
    assert sd.clarke_dist(t_half, ZERO1)[0] == mpq(1, 4)
    cg = gen_clarke_gadget(path_graph(3), 3)
    for f in cg.values():
        assert sd.clarke_dist(f, (mpq(0),) * 7)[0] == mpq(1, 4)
    cg = gen_clarke_gadget(complete_graph(3), 2)
    for f in cg.values():
        assert sd.clarke_dist(f, (mpq(0),) * 5)[0] == 0


def test_clarke_full_dc_route_without_shortcuts():
    cg = gen_clarke_gadget(path_graph(3), 2)["dc"]
    w = (mpq(0),) * 5
    X, Y = sd.subdiff_mc(cg.h, w), sd.subdiff_mc(cg.g, w)
    S = sd.clarke_slopes_dc(X, Y)
    want = sd.clarke_dist(gen_clarke_gadget(path_graph(3), 2)["maxmin"], w)[0]
    assert sd._clarke_from_slopes(S, "dc")[0] == want


def test_clarke_pair_agrees():
    for G, k in [(complete_graph(3), 2), (path_graph(3), 3), (path_graph(4), 2)]:
        cg = gen_clarke_gadget(G, k)
        w = (mpq(0),) * (2 * k + 1)
        assert sd.clarke_dist_pair(cg["dc"], cg["maxmin"], w)[0] == sd.clarke_dist(cg["maxmin"], w)[0]


def test_test_polarities():
    assert sd.test(abs_t(), ZERO1, 0, sd.FRECHET, "yes").holds
    seesaw = MaxMinFormula(1, ((v("1/2"), 0),), ((0,),))
    vd = sd.test(seesaw, ZERO1, mpq(1, 3), sd.CLARKE, "no")
    assert vd.holds and not vd.yes
    vd = sd.test(neg_abs_t(), ZERO1, 1000, sd.FRECHET, "yes")
    assert not vd.holds and vd.dist_sq == INF
    assert sd.test(seesaw, ZERO1, mpq(1, 2), sd.CLARKE).yes
    with pytest.raises(ValueError):
        sd.test(abs_t(), ZERO1, -1)
    with pytest.raises(ValueError):
        sd.test(abs_t(), ZERO1, 0, "goldstein")


def test_verdict_json_shape():
    js = sd.test(neg_abs_t(), ZERO1, 5).to_json()
    assert js["dist_sq"] == "inf" and js["yes"] is False and js["witness"] is None
    assert set(js) >= {"notion", "epsilon", "dist_sq", "yes", "witness", "certificate"}


def test_is_local_min():
    assert sd.is_local_min(abs_t(), ZERO1)
    assert sd.is_local_min(dc_abs(), ZERO1)
    assert not sd.is_local_min(neg_abs_t(), ZERO1)
    assert not sd.is_local_min(dc_neg_abs(), ZERO1)
    f = gen_frechet_gadget(complete_graph(3), 2)
    for rep in f.values():
        assert not sd.is_local_min(rep, (mpq(0),) * 4)


def test_decreasing_direction_checks_by_evaluation():
    for f, w, ev in [(neg_abs_t(), ZERO1, eval_maxmin), (dc_neg_abs(), ZERO1, eval_dc)]:
        u = sd.decreasing_direction(f, w)
        assert ev(f, tuple(mpq(1, 100) * c for c in u)) < ev(f, w)
    f = gen_frechet_gadget(complete_graph(3), 2)
    for rep, ev in [(f["maxmin"], eval_maxmin), (f["dc"], eval_dc)]:
        u = sd.decreasing_direction(rep, (mpq(0),) * 4)
        assert ev(rep, tuple(mpq(1, 1000) * c for c in u)) < 0
    assert sd.decreasing_direction(abs_t(), ZERO1) is None


def test_frechet_witness_sound(rng):
    for _ in range(15):
        d = rng.randint(1, 2)
        leaves = lambda n: Max(tuple(Leaf(rand_vec(rng, d, -3, 3, 1)) for _ in range(n)))
        h = Sum((leaves(rng.randint(1, 3)), leaves(rng.randint(1, 3))))
        g = leaves(rng.randint(1, 2))
        w = (mpq(0),) * d
        dist, wit, _ = sd.frechet_dist_dc(DcFunction(h, g), w)
        if dist == INF:
            continue
        X, Y = sd.subdiff_mc(h, w), sd.subdiff_mc(g, w)
        assert erosion(X, Y).contains(wit)
        assert oracle.containment_audit(wit, X, Y)


def test_clarke_witness_sound():
    f = MaxMinFormula(2, ((v(1, 1), 0), (v(1, -1), 0), (v(2, 0), 0)), ((0,), (1,), (2,)))
    dist, wit, cert = sd.clarke_dist(f, v(0, 0))
    assert dist == 1 and wit == v(1, 0)
    slopes = [tuple(mpq(x) for x in s) for s in cert["slopes"]]
    coeffs = [mpq(c) for c in cert["coeffs"]]
    assert sum(coeffs) == 1 and all(c >= 0 for c in coeffs)
    assert tuple(sum(c * s[i] for c, s in zip(coeffs, slopes)) for i in range(2)) == wit
    assert sum(x * x for x in wit) == dist
    assert in_hull(wit, slopes)


def test_single_max_examples():
    h = Max((Leaf(v(1)), Leaf(v(-1))))
    g = Max((Leaf(v("1/2")), Leaf(v("-1/2"))))
    vd = sd.single_max_dc_test(h, g, ZERO1, 0, sd.FRECHET)
    assert vd.yes and vd.dist_sq == 0
    assert sd.frechet_dist_dc(DcFunction(h, g), ZERO1)[0] == 0
    assert sd.single_max_dc_test(h, h, v(5), 0).dist_sq == 0
    vd = sd.single_max_dc_test(Leaf(v(1)), abs_tree(), ZERO1, 0, sd.CLARKE)
    assert vd.dist_sq == 0
    assert set(tuple(mpq(x) for x in s) for s in vd.certificate["slopes"]) == {v(0), v(2)}
    with pytest.raises(ValueError):
        sd.single_max_dc_test(Sum((h, h)), g, ZERO1)


def test_inclusion_frechet_at_least_clarke(rng):
    for _ in range(15):
        f = _random_formula(rng)
        w = (mpq(0),) * f.dim
        assert sd.frechet_dist(f, w)[0] >= sd.clarke_dist(f, w)[0]


def _random_formula(rng):
    from helpers import random_maxmin
    f = random_maxmin(rng, rng.randint(1, 3))
    return MaxMinFormula(f.dim, tuple((x, mpq(0)) for x, _ in f.affine), f.groups)
