"""Finite dynamical systems over GF(p^r) and Z_{p^n}."""

from .errors import BudgetExceeded, FDSError, LocalityError, ValidationError
from .ffcore import (
    Basis,
    FieldContext,
    FieldElement,
    ModMatrix,
    PolyZp,
    PrimePower,
    elem_to_vec,
    find_normal_basis,
    frobenius,
    make_extension_field,
    parse_field_spec,
    polynomial_basis,
    vec_to_elem,
)
from .fds import FunctionTable, StateDiagram, StateSpace, build_state_diagram, isomorphic, order_of
from .linpoly import LinearizedPoly
from .modsys import Bijection, OrderCertificate, matrix_order_direct, matrix_order_lifted

__version__ = "0.1.0"
