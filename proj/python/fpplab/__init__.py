import json

from ._core import (
    BoundRatio,
    GuardFailure,
    PassageField,
    WeightModel,
    YStatistic,
    __version__,
    bound_ratio,
    boundary_timeline,
    compute_passage,
    contour_count_bound,
    count_edge_boundary,
    count_fixed_star_animals,
    default_config,
    hole_counts,
    recipe_names,
    seed_stream,
)
from ._core import run_recipe as _run_recipe


def run_recipe(recipe, write=False, **overrides):
    """Run a recipe with config overrides (values as in a config file); returns the summary dict."""
    text = {k: v if isinstance(v, str) else ",".join(map(str, v)) if isinstance(v, (list, tuple)) else str(v)
            for k, v in overrides.items()}
    return json.loads(_run_recipe(recipe, text, write))
