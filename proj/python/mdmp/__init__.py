"""Multidimensional Matrix Profile for time series anomaly detection."""

from ._mdmp import (
    MdmpError,
    auc_roc,
    detect_semisupervised,
    detect_supervised,
    detect_unsupervised,
    find_knn,
    generate_fixture,
    mp_ab_join,
    mp_self_join,
    range_pr_auc,
    znorm_distance,
)

__all__ = [
    "MdmpError",
    "auc_roc",
    "detect_semisupervised",
    "detect_supervised",
    "detect_unsupervised",
    "find_knn",
    "generate_fixture",
    "mp_ab_join",
    "mp_self_join",
    "range_pr_auc",
    "znorm_distance",
]
