"""Synthetic smart-health mobility datasets and route recommendations.

Generates citizen populations with configurable health prevalences,
synthesizes route ratings from health-driven feature modifiers, and serves
health-filtered top-N route recommendations via user-based collaborative
filtering, with a statistical evaluation harness on top.
"""

__version__ = "0.1.0"

from .errors import ConfigurationError, HealthRoutesError, ParseError, ValidationError
from .population import (
    AgePyramid,
    Citizen,
    DEFAULT_PYRAMID,
    HealthConditions,
    PrevalenceConfig,
    generate_population,
    sample_age,
    sample_conditions,
)
from .profiles import ProfileId, age_bracket, classify, profile_census
from .routes import (
    FeatureScores,
    GeoPoint,
    Pavement,
    Route,
    RouteStatus,
    format_dms,
    haversine_km,
    normalize_features,
    parse_dms,
)
from .rating_sim import (
    DEFAULT_MODIFIERS,
    ModifierTable,
    NoiseConfig,
    RatingsMatrix,
    citizen_modifiers,
    deterministic_rating,
    generate_ratings,
    noisy_rating,
)
from .recommender import (
    HealthFilterConfig,
    Recommendation,
    Recommender,
    SimilarityModel,
    health_filter,
    predict,
    similarity,
    top_n,
)
from .evaluation import (
    accuracy,
    evaluate_recommender,
    holdout_split,
    noise_floor,
    prevalence_report,
)
from .config import SimulationConfig, default_config, load_config

__all__ = [
    "AgePyramid",
    "Citizen",
    "ConfigurationError",
    "DEFAULT_MODIFIERS",
    "DEFAULT_PYRAMID",
    "FeatureScores",
    "GeoPoint",
    "HealthConditions",
    "HealthFilterConfig",
    "HealthRoutesError",
    "ModifierTable",
    "NoiseConfig",
    "ParseError",
    "Pavement",
    "PrevalenceConfig",
    "ProfileId",
    "RatingsMatrix",
    "Recommendation",
    "Recommender",
    "Route",
    "RouteStatus",
    "SimilarityModel",
    "SimulationConfig",
    "ValidationError",
    "accuracy",
    "age_bracket",
    "citizen_modifiers",
    "classify",
    "default_config",
    "deterministic_rating",
    "evaluate_recommender",
    "format_dms",
    "generate_population",
    "generate_ratings",
    "haversine_km",
    "health_filter",
    "holdout_split",
    "load_config",
    "noise_floor",
    "noisy_rating",
    "normalize_features",
    "parse_dms",
    "predict",
    "prevalence_report",
    "profile_census",
    "sample_age",
    "sample_conditions",
    "similarity",
    "top_n",
]
