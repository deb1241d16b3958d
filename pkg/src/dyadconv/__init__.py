"""Behavioral convergence analytics for dyadic conversation transcripts.

Quantifies how two conversation partners grow alike over a recorded session:
unit-root convergence tests on paralinguistic feature differences, causality
tests between rapport and convergence, warping-distance alignment of
conversational-strategy timings, and shared concept-map structure extracted
from the dialog itself.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .align import AlignmentResult, EventSeries, InsufficientEvents, dtw, strategy_alignment
from .conceptnet import (
    ConceptMap,
    Lexicon,
    MapStats,
    betweenness,
    build_map,
    build_map_from_text,
    intersect,
    map_stats,
    preprocess,
    worksheet_overlap,
)
from .corpus import (
    Session,
    Slice,
    Utterance,
    load_session,
    parse_session,
    segment,
    serialize_session,
)
from .paraling import FEATURES, FeatureSeries, extract_series
from .stats import (
    CorrelationResult,
    dummy_ols_outcomes,
    f_cdf,
    paired_t,
    pearson,
    point_biserial,
    spearman,
    zscore,
)
from .synth import SynthSpec, gen_feature_pair, gen_rapport_driven, gen_session, gen_strategy_events
from .tsa import (
    AdfResult,
    AdfSpec,
    DifferencedSeries,
    GrangerResult,
    StrengthScore,
    adf_test,
    convergence_strength,
    critical_value,
    detrend,
    difference,
    granger_causes,
    ols_fit,
    simulate_critical_values,
    smooth,
)
