"""Exact finite-group toolkit for structure maps on subsets and their torsor laws."""

from .groups import (
    FiniteGroup,
    builtin_group,
    from_cayley_table,
    load_group,
    make_cyclic,
    make_dihedral,
    make_direct_product,
    make_quaternion,
    make_symmetric,
    opposite,
)
from .subsets import Subset, grassmannian, parse_subset
from .structure import gamma, gamma_check, sigma, sigma_check
from .verdict import Verdict

__version__ = "0.1.0"
