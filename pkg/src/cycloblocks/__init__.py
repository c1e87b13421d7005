"""Exact structure theory of finite reductive groups, generic in q.

Everything in this package is a polynomial identity in the Frobenius
parameter q: group orders and character degrees are signed products
q^N * prod Phi_d(q)^{a_d} with a rational scalar, evaluated with exact
big-integer arithmetic only.  On top of that currency the package models
Borel-de Siebenthal subsystems, centralizers of isolated semisimple
elements, Sylow Phi_e-tori and e-split Levi subgroups, a curated database
of unipotent characters, and the block-distribution tables for bad primes
in exceptional groups, together with defect/Robinson bookkeeping.
"""

from .genorder import (
    GenericOrder,
    EllAdicContext,
    cyclotomic,
    cyclotomic_poly,
    defect,
    e_of,
    ell_part,
    ell_valuation,
    ennola,
    parse_order,
)
from .rootdata import RootSystem, DiagramAutomorphism, build_root_system
from .rattype import RationalType, group_order, ennola_rational_type

__all__ = [
    "GenericOrder",
    "EllAdicContext",
    "cyclotomic",
    "cyclotomic_poly",
    "defect",
    "e_of",
    "ell_part",
    "ell_valuation",
    "ennola",
    "parse_order",
    "RootSystem",
    "DiagramAutomorphism",
    "build_root_system",
    "RationalType",
    "group_order",
    "ennola_rational_type",
]
