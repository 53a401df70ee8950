"""Exact bookkeeping for orbifold degeneration formulas.

Submodules: inertia (groups, sectors, CR grading), contact (fractional contact
orders and partitions), graph (decorated relative dual graphs), dimension
(virtual dimensions), expand (degeneration-formula terms), glue (the
finite-dimensional correction sandbox), cli / io (front end).
"""

from .contact import ContactOrder, MonodromyTable, RelInsertion
from .graph import HomologyModel, RelGraph

__all__ = [
    "ContactOrder",
    "MonodromyTable",
    "RelInsertion",
    "HomologyModel",
    "RelGraph",
]

__version__ = "0.1.0"
