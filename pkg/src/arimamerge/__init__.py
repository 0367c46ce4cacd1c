"""Hierarchical ARIMA model merging and message-cost simulation for sensor
networks: fit one autoregressive model per node, average sibling models
pairwise up a binary aggregation tree (keeping per-child deviations so the
children can be approximately recovered), and account for what that saves in
transmitted values."""

from .arima import ArimaModel, ModelSpec, ResidualTrace, fit_ar, forecast_next, model_rmse, residuals
from .errors import (
    ArimaMergeError,
    DegenerateDataError,
    EmptyInputError,
    EmptySubtreeError,
    InconsistentColumnsError,
    InputError,
    InsufficientHistoryError,
    NumericError,
    OddInputError,
    SeedMismatchError,
    SeriesTooShortError,
    SpecMismatchError,
    TooLargeError,
    UnsupportedSpecError,
    WindowLengthMismatchError,
)
from .grouping import (
    MergeNode,
    MergeTree,
    build_merge_tree,
    count_pairings,
    count_trees,
    enumerate_pairings,
    render_tree,
    tree_to_dict,
)
from .merging import (
    DeviationRecord,
    IntervalModel,
    MergedModel,
    average_merge,
    merge_error_ar1,
    merge_error_general,
    propagated_error_bound,
    recover_children,
    weighted_merge,
)
from .series import DiffSeed, Series, SeriesSummary, difference, integrate, summary
from .simulate import (
    LevelReport,
    ReportRow,
    SimulationReport,
    SuppressionPolicy,
    count_suppression_events,
    message_cost,
    percentage_error,
    run_pipeline,
    should_transmit,
)

__version__ = "0.1.0"
