"""Small builders shared by the test modules."""
from gmpy2 import mpq

from pastat.pa import DcFunction, Leaf, Max, MaxMinFormula


def q(p, r=1):
    return mpq(p, r)


def v(*xs):
    return tuple(mpq(x) if not isinstance(x, str) else mpq(*map(int, x.split("/"))) for x in xs)


def abs_t():
    """|t| = max{min{t}, min{-t}}."""
    return MaxMinFormula(1, ((v(1), q(0)), (v(-1), q(0))), ((0,), (1,)))


def neg_abs_t():
    """-|t| = max{min{t, -t}}."""
    return MaxMinFormula(1, ((v(1), q(0)), (v(-1), q(0))), ((0, 1),))


def relu_min():
    """max{0, min{x1, x2}}."""
    return MaxMinFormula(2, ((v(0, 0), q(0)), (v(1, 0), q(0)), (v(0, 1), q(0))), ((0,), (1, 2)))


def abs_tree():
    return Max((Leaf(v(1)), Leaf(v(-1))))


def dc_abs():
    return DcFunction(abs_tree(), Leaf(v(0)))


def dc_neg_abs():
    return DcFunction(Leaf(v(0)), abs_tree())


def rand_q(rng, lo=-6, hi=6, den=4):
    return mpq(rng.randint(lo, hi), rng.randint(1, den))


def rand_vec(rng, d, lo=-6, hi=6, den=4):
    return tuple(rand_q(rng, lo, hi, den) for _ in range(d))


def random_maxmin(rng, d, pieces=5, groups=3, span=3):
    aff = tuple((tuple(mpq(rng.randint(-span, span)) for _ in range(d)), mpq(rng.randint(-1, 1)))
                for _ in range(pieces))
    gs = tuple(tuple(sorted(rng.sample(range(pieces), rng.randint(1, min(3, pieces)))))
               for _ in range(groups))
    return MaxMinFormula(d, aff, gs)
