"""Geomagnetic storm forecasting from solar images.

Thin Python surface over the C++ core: Canny-based sunspot extraction,
DBSCAN region clustering, SMOTE oversampling, a Gaussian-kernel SVM, and the
evaluation metrics (PCC, ROC/AUC, per-class precision/recall).
"""

from stormcast._core import (
    DataError,
    Scaler,
    SvmModel,
    WORKING_SIZE,
    canny,
    classification_metrics,
    count_sunspots,
    dbscan,
    extract_counts,
    find_contours,
    gaussian_smooth,
    load_image,
    mean_signed_difference,
    parse_kp_file,
    pearson,
    roc_curve,
    smote,
    sobel_magnitude,
    solar_disk,
    storm_day,
    stratified_split_indices,
    train_gsvm,
    wolf_proxy,
)

split_indices = stratified_split_indices

__all__ = [
    "DataError",
    "Scaler",
    "SvmModel",
    "WORKING_SIZE",
    "canny",
    "classification_metrics",
    "count_sunspots",
    "dbscan",
    "extract_counts",
    "find_contours",
    "gaussian_smooth",
    "load_image",
    "mean_signed_difference",
    "parse_kp_file",
    "pearson",
    "roc_curve",
    "smote",
    "sobel_magnitude",
    "solar_disk",
    "split_indices",
    "storm_day",
    "stratified_split_indices",
    "train_gsvm",
    "wolf_proxy",
]
