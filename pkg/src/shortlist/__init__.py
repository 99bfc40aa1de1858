"""Decision-support engine for shortlisting multi-attribute products.

The pipeline runs in four stages over a typed product catalog:

1. filtering through a hierarchical attribute wheel,
2. a two-axis scatter comparison with dominance highlighting and a
   compare bucket,
3. per-product detail views,
4. a color-coded comparison chart with ascending rank arrows, from which
   the final choice is made.

Sessions tie the stages together as an event-sourced state machine, and an
experiment harness (tasks with exhaustive-scan oracles, trial timing, t-test
and Likert analytics) measures how well people shortlist with it.
"""

from .catalog import (
    AttributeDef,
    Bucket,
    Catalog,
    Product,
    attribute_range,
    catalog_from_json,
    catalog_to_json,
    load_catalog,
    save_catalog,
)
from .chart import COLOR_PALETTE, ComparisonChart, build_chart
from .detail import ProductDetail, product_detail
from .errors import ShortlistError
from .experiment import (
    Objective,
    SurveyResponse,
    TaskSpec,
    TrialLog,
    assign_ordering,
    canonical_tasks,
    correct_answer_set,
    efficacy_score,
    score_trial,
)
from .filters import FilterSpec, NumericRange, ValueSet, apply_filter
from .generator import generate_catalog, smartphone_schema
from .report import UsabilityReport, build_report
from .scatter import ScatterProjection, dominant_set, scatter_projection
from .session import Session, SessionStore, replay_session
from .stats import (
    SampleSummary,
    TestResult,
    accuracy,
    ci95,
    likert_summary,
    student_t_cdf,
    student_t_quantile,
    summarize,
    t_test_one_tailed,
)
from .wheel import WheelIndex, WheelNode, WheelState, build_wheel, selected_filter_spec, toggle_select

__version__ = "0.1.0"

__all__ = [
    "AttributeDef",
    "Bucket",
    "Catalog",
    "Product",
    "attribute_range",
    "catalog_from_json",
    "catalog_to_json",
    "load_catalog",
    "save_catalog",
    "COLOR_PALETTE",
    "ComparisonChart",
    "build_chart",
    "ProductDetail",
    "product_detail",
    "ShortlistError",
    "Objective",
    "SurveyResponse",
    "TaskSpec",
    "TrialLog",
    "assign_ordering",
    "canonical_tasks",
    "correct_answer_set",
    "efficacy_score",
    "score_trial",
    "FilterSpec",
    "NumericRange",
    "ValueSet",
    "apply_filter",
    "generate_catalog",
    "smartphone_schema",
    "UsabilityReport",
    "build_report",
    "ScatterProjection",
    "dominant_set",
    "scatter_projection",
    "Session",
    "SessionStore",
    "replay_session",
    "SampleSummary",
    "TestResult",
    "accuracy",
    "ci95",
    "likert_summary",
    "student_t_cdf",
    "student_t_quantile",
    "summarize",
    "t_test_one_tailed",
    "WheelIndex",
    "WheelNode",
    "WheelState",
    "build_wheel",
    "selected_filter_spec",
    "toggle_select",
]
