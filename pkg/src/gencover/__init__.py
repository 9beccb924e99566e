"""Generalized (t-th order) covering radii of q-ary codes."""
from .errors import BudgetExceeded
from .words import Alphabet, Code, MatrixWord, Word, ball_size, hamming_distance, t_distance, t_weight

__all__ = [
    "Alphabet", "BudgetExceeded", "Code", "MatrixWord", "Word",
    "ball_size", "hamming_distance", "t_distance", "t_weight",
]
__version__ = "0.1.0"
