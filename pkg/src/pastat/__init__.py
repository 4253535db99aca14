"""Exact stationarity tests for piecewise-affine functions."""
from .gadgets import (Graph, cnn_forward, gen_clarke_gadget, gen_cnn_losses,
                      gen_frechet_gadget)
from .io import parse_instance, serialize_instance
from .minnorm import min_norm_hrep, min_norm_vrep
from .pa import DcFunction, Leaf, Max, MaxMinFormula, Sum, eval_dc, eval_maxmin, local_model
from .polytope import Polytope, facets, minkowski_sum, reduce_vertices
from .subdiff import (CLARKE, FRECHET, Verdict, clarke_dist, frechet_dist, is_local_min,
                      single_max_dc_test, test)

# keep pytest from collecting the decision procedure when tests star-import
test.__test__ = False

__all__ = [
    "CLARKE", "FRECHET", "DcFunction", "Graph", "Leaf", "Max", "MaxMinFormula", "Polytope",
    "Sum", "Verdict", "clarke_dist", "cnn_forward", "eval_dc", "eval_maxmin", "facets",
    "frechet_dist", "gen_clarke_gadget", "gen_cnn_losses", "gen_frechet_gadget",
    "is_local_min", "local_model", "min_norm_hrep", "min_norm_vrep", "minkowski_sum",
    "parse_instance", "reduce_vertices", "serialize_instance", "single_max_dc_test", "test",
]
