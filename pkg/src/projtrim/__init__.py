"""Projection depth, depth regions and projection-depth trimmed means."""

__version__ = "0.1.0"

from .errors import (
    EmptyRegionError,
    GeneralPositionError,
    InputError,
    ProjTrimError,
    UndefinedInfluenceError,
)
from .univariate import LocationScalePair, evaluate_pair, mad_k, mean_sd, med_k
from .depth import (
    Combined,
    DataDriven,
    DepthFunction,
    Exact2D,
    ProjectionDepth,
    RandomSphere,
    fit_depth,
    outlyingness,
    projection_depth,
)
from .regions import (
    ProjectionMedian,
    directional_radius,
    max_depth,
    projection_median,
    radius_profile,
)
from .trim import (
    ConstantWeight,
    PowerWeight,
    ProjectionTrimmedMean,
    TrimSpec,
    alpha_d,
    breakdown_point,
    breakdown_probe,
    ptm,
    ptm_fit,
)
from .theory import (
    EllipticalModel,
    are_vs_mean,
    asy_variance,
    gre,
    if_constants,
    if_ptm,
    if_radius,
)
from .competitors import HalfspaceMedian, StahelDonohoMean, halfspace_depth, halfspace_median, stahel_donoho
from .simulate import StudyConfig, mixture_model, normal_model, run_study, sample

__all__ = [n for n, v in list(globals().items())
           if not n.startswith("_") and not isinstance(v, type(__import__("sys")))]
