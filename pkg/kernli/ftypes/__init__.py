"""
    File types package
"""
from .dataset_dir import (
    parse_edges,
    parse_features,
    parse_labels,
    parse_split,
    format_edges,
    format_features,
    format_labels,
)
