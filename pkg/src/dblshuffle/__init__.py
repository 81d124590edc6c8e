"""Regularized double shuffle relations for multiple zeta values."""

from .errors import DomainError
from .words import format_index, index_to_word, parse_index, shuffle, stuffle, word_to_index
from .symbols import Poly
from .regularization import check_regularization_relation, l_map, reg_integral, reg_series

__all__ = [
    "DomainError",
    "Poly",
    "check_regularization_relation",
    "format_index",
    "index_to_word",
    "l_map",
    "parse_index",
    "reg_integral",
    "reg_series",
    "shuffle",
    "stuffle",
    "word_to_index",
]

__version__ = "0.1.0"
