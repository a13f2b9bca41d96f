"""Exact symbolic engine for the Lie random field star-algebra."""

import json

from .indices import (AlgebraError, Generator, InvalidExpressionError, IPSymbol,
                      UndefinedInnerProductError, XiIndex, XiNode, as_index,
                      flatten_xi, ip, xi)
from .ops import (ANN, CRE, DressedOp, OpPoly, ann, check_jacobi, commutator,
                  commutator_step, cre, free_field_limit, is_normal_ordered,
                  lambda_degree, normal_order, phi, star, vacuum_part, vev)
from .scalars import I, ONE, Coefficient, GaussianRational


def dumps(obj) -> str:
    """Canonical JSON text (sorted keys) for an OpPoly or Coefficient."""
    return json.dumps(obj.to_json(), sort_keys=True, separators=(",", ":"))


def loads_oppoly(text: str) -> OpPoly:
    return OpPoly.from_json(json.loads(text))


def loads_coefficient(text: str) -> Coefficient:
    return Coefficient.from_json(json.loads(text))


__all__ = [
    "ANN", "CRE", "AlgebraError", "Coefficient", "DressedOp", "Generator",
    "GaussianRational", "I", "IPSymbol", "InvalidExpressionError", "ONE",
    "OpPoly", "UndefinedInnerProductError", "XiIndex", "XiNode", "ann",
    "as_index", "check_jacobi", "commutator", "commutator_step", "cre",
    "dumps", "flatten_xi", "free_field_limit", "ip", "is_normal_ordered",
    "lambda_degree", "loads_coefficient", "loads_oppoly", "normal_order",
    "phi", "star", "vacuum_part", "vev", "xi",
]
