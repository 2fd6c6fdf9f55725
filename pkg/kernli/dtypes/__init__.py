"""
    All data type objects are contained in this module
"""
from .graph import Graph, DegreeVector, normalize_adjacency
from .dataset import Dataset, Split
