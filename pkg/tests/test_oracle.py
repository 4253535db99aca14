import random

from gmpy2 import mpq

from pastat import oracle
from pastat import subdiff as sd
from pastat.gadgets import complete_graph, gen_frechet_gadget, moment_points, path_graph
from pastat.minnorm import min_norm_hrep, min_norm_vrep
from pastat.pa import local_model, make_local_model
from pastat.polytope import Polytope, minkowski_sum, reduce_vertices

from helpers import abs_t, neg_abs_t, random_maxmin, relu_min, v


def test_naive_minkowski_examples():
    seg_x, seg_y = reduce_vertices([v(0, 0), v(1, 0)]), reduce_vertices([v(0, 0), v(0, 1)])
    assert len(oracle.naive_minkowski([seg_x, seg_y]).vertices) == 4
    T = reduce_vertices([v(0, 0), v(2, 0), v(0, 2)])
    moved = oracle.naive_minkowski([T, Polytope.point(v(1, 1))])
    assert moved.vertices == tuple(sorted((a + 1, b + 1) for a, b in T.vertices))
    T2 = reduce_vertices([v(0, 0), v(-1, 1), v(1, 3)])
    assert oracle.naive_minkowski([T, T2]) == minkowski_sum([T, T2])


def test_lp_reduce_matches_engine(rng):
    for _ in range(20):
        d = rng.randint(1, 3)
        pts = [tuple(mpq(rng.randint(-3, 3)) for _ in range(d)) for _ in range(rng.randint(1, 8))]
        assert tuple(oracle.lp_reduce(pts)) == reduce_vertices(pts).vertices


def test_containment_audit_examples():
    X = reduce_vertices([v(0, 0), v(1, 0), v(0, 1)])
    assert oracle.containment_audit(v(0, 0), X, X)
    Y = reduce_vertices([v(0, 0), v(2, 0), v(0, 2)])
    assert not oracle.containment_audit(v(0, 0), X, Y)


def test_containment_audit_names_clique_tuple():
    f = gen_frechet_gadget(complete_graph(3), 2)["dc"]
    w = (mpq(0),) * 4
    X, Y = sd.subdiff_mc(f.h, w), sd.subdiff_mc(f.g, w)
    res = oracle.containment_audit(w, X, Y)
    assert not res
    p = moment_points(3)
    clique_tuples = {p[a] + p[b] for a in range(3) for b in range(3) if a != b}
    assert res.missing in clique_tuples


def test_directional_audit_examples():
    assert oracle.directional_audit(local_model(abs_t(), v(0)), v(0))
    assert not oracle.directional_audit(local_model(neg_abs_t(), v(0)), v(0))
    assert not oracle.directional_audit(local_model(relu_min(), v(0, 0)), v(1, 0))


def test_arrangement_oracle_matches_active_slopes(rng):
    for _ in range(25):
        f = random_maxmin(rng, rng.randint(1, 3), pieces=4)
        w = (mpq(0),) * f.dim
        f = type(f)(f.dim, tuple((x, mpq(0)) for x, _ in f.affine), f.groups)
        model = local_model(f, w)
        assert sorted(sd.active_slopes(model)) == oracle.oracle_active_slopes(model)


def test_arrangement_oracle_matches_frechet(rng):
    for _ in range(25):
        f = random_maxmin(rng, rng.randint(1, 3), pieces=4)
        f = type(f)(f.dim, tuple((x, mpq(0)) for x, _ in f.affine), f.groups)
        w = (mpq(0),) * f.dim
        model = local_model(f, w)
        cons = oracle.oracle_frechet_constraints(model)
        if cons:
            want = oracle.kkt_min_norm_hrep(cons, f.dim)
        else:
            s = model.slopes[0]
            want = sum(x * x for x in s)
        assert sd.frechet_dist_maxmin(f, w)[0] == want


def test_kkt_references(rng):
    for _ in range(30):
        d = rng.randint(1, 3)
        pts = [tuple(mpq(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(d))
               for _ in range(rng.randint(1, 5))]
        assert min_norm_vrep(pts).dist_sq == oracle.kkt_min_norm_vrep(pts)
        cons = [(tuple(mpq(rng.randint(-3, 3)) for _ in range(d)), mpq(rng.randint(-3, 3)))
                for _ in range(rng.randint(1, 4))]
        assert min_norm_hrep(cons, (), d).dist_sq == oracle.kkt_min_norm_hrep(cons, d)


def test_graph_record_small():
    rec = oracle.graph_record(complete_graph(3), 3)
    assert rec["match"] and rec["oracle"]["has_clique"]
    assert rec["engine"] == {"frechet_dist_sq": "inf", "clarke_dist_sq": "0"}
    rec = oracle.graph_record(path_graph(3), 3)
    assert rec["match"] and rec["engine"] == {"frechet_dist_sq": "0", "clarke_dist_sq": "1/4"}


def test_audits_small():
    assert all(r["match"] for r in oracle.audit_graphs(3))
    assert all(r["match"] for r in oracle.audit_polytopes(3, 12, seed=4))


def test_fault_injection_is_caught():
    with oracle.inject_fault():
        graphs = list(oracle.audit_graphs(3))
        polys = list(oracle.audit_polytopes(2, 10, seed=1))
    assert not all(r["match"] for r in graphs)
    assert not all(r["match"] for r in polys)
    assert all(r["match"] for r in oracle.audit_graphs(3))


def test_all_graphs_count():
    assert sum(1 for _ in oracle.all_graphs(4)) == 64
    assert sum(1 for _ in oracle.all_graphs(1)) == 1


def test_make_local_model_dedups():
    m = make_local_model(1, [[v(1), v(1)], [v(1)], [v(-1)]])
    assert m.slopes == (v(1), v(-1)) and m.groups == ((0,), (1,))
