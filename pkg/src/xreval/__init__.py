"""Model-based and survey-based evaluation of XR interaction modes.

Two halves: a GOMS/KLM-style predictor (operator catalogs, mode files,
additive time prediction with symbolic parameters) and a survey pipeline
(SUS, NASA-TLX, Friedman and Wilcoxon comparisons across modes).
"""

from importlib import resources

from .catalog import (Catalog, Fixed, OperatorCategory, OperatorDef, Parameter,
                      builtin_catalog, lookup, override_operator)
from .dsl import (load_catalog, load_modes, parse_catalog, parse_modes, serialize_catalog,
                  serialize_modes)
from .errors import (DuplicateSymbol, InsufficientData, ItemOutOfRange, MalformedCsv,
                     NegativeDuration, ParseError, UnboundParameter, UnknownOperator,
                     WeightsDontSumTo15, WrongItemCount, XrEvalError)
from .model import Mode, ModelSet, OperatorTerm, operator_count
from .predictor import Affine, Prediction, Ranking, bind, compare, predict, sweep
from .stats import (BlockMatrix, TestResult, bonferroni, chi2_sf, compare_modes,
                    descriptives, friedman, wilcoxon_signed_rank)
from .survey import (ScoredResponse, SurveyResponse, ingest_csv, score_all, score_sus,
                     score_tlx_raw, score_tlx_weighted)

__version__ = "0.1.0"


def data_path(name: str):
    """Path to a file shipped in ``xreval/data`` (models, demo survey, schema)."""
    return resources.files(__name__).joinpath("data", name)
