"""JSON encoding of families and grids.

A family is a tagged object selected by its ``kind`` field:

``{"kind": "system", "bridge": "formula1", "system": {...}}``
``{"kind": "relation", "tag": "aarep", "relation": {...}}``
``{"kind": "fixed_point", "which": "Q0", "dim_m": 1}``
``{"kind": "constant", "relation": {...}}`` or ``{"kind": "constant", "matrix": {...}}``
``{"kind": "projection", "p": {...}}``
``{"kind": "inner", "form": "stieltjes", "relation" | "matrix": {...}}``
``{"kind": "model", "model": "weighted_l2"}``
``{"kind": "mapped", "op": "phi_plus", "base": {...}}``
"""
import json

from .families import (
    ConstantFamily,
    FixedPointFamily,
    InnerFamily,
    MappedFamily,
    OmegaFamily,
    RelationFamily,
    m_operator,
    projection_family,
)
from .models import HalfLineModel, model_family
from .relation import LinearRelation
from .subspace import matrix_from_json
from .systems import PassiveSystem

FAMILY_KINDS = ("system", "relation", "fixed_point", "constant", "projection",
                "inner", "model", "mapped")


def _need(obj, key, where="family"):
    if key not in obj:
        raise ValueError(f"{where}: missing field '{key}'")
    return obj[key]


def _m_relation_from(obj):
    if "relation" in obj:
        rel = LinearRelation.from_json(obj["relation"])
        if rel.split.dim_k != 0:
            raise ValueError("family: field 'relation' must have dim_k = 0")
        return rel
    if "matrix" in obj:
        return m_operator(matrix_from_json(obj["matrix"], "matrix"))
    raise ValueError("family: missing field 'relation' (or 'matrix')")


def family_from_json(obj):
    if not isinstance(obj, dict):
        raise ValueError("family: expected an object")
    kind = _need(obj, "kind")
    if kind == "system":
        return OmegaFamily(PassiveSystem.from_json(_need(obj, "system")),
                           obj.get("bridge", "formula1"))
    if kind == "relation":
        return RelationFamily(LinearRelation.from_json(_need(obj, "relation")),
                              _need(obj, "tag"))
    if kind == "fixed_point":
        return FixedPointFamily(_need(obj, "which"), int(obj.get("dim_m", 1)))
    if kind == "constant":
        return ConstantFamily(_m_relation_from(obj))
    if kind == "projection":
        return projection_family(matrix_from_json(_need(obj, "p"), "p"))
    if kind == "inner":
        return InnerFamily(_m_relation_from(obj), obj.get("form", "stieltjes"))
    if kind == "model":
        return model_family(HalfLineModel(obj.get("model", "weighted_l2")),
                            int(obj.get("dim_m", 1)))
    if kind == "mapped":
        return MappedFamily(family_from_json(_need(obj, "base")), _need(obj, "op"))
    raise ValueError(f"family: field 'kind' must be one of {FAMILY_KINDS}, got {kind!r}")


def family_to_json(fam):
    if isinstance(fam, OmegaFamily):
        if fam.system is None:
            raise ValueError("only system-backed transfer functions can be serialized")
        return {"kind": "system", "bridge": fam.bridge, "system": fam.system.to_json()}
    if isinstance(fam, RelationFamily):
        return {"kind": "relation", "tag": fam.tag, "relation": fam.relation.to_json()}
    if isinstance(fam, FixedPointFamily):
        return {"kind": "fixed_point", "which": fam.which, "dim_m": fam.dim_m}
    if isinstance(fam, ConstantFamily):
        return {"kind": "constant", "relation": fam.relation.to_json()}
    if isinstance(fam, InnerFamily):
        return {"kind": "inner", "form": fam.form, "relation": fam.relation.to_json()}
    if isinstance(fam, MappedFamily):
        return {"kind": "mapped", "op": fam.op, "base": family_to_json(fam.base)}
    raise ValueError(f"cannot serialize {fam!r}")


def grid_from_json(obj):
    """A grid is a list of ``[re, im]`` pairs (or plain real numbers)."""
    if not isinstance(obj, list) or not obj:
        raise ValueError("grid: expected a non-empty array of [re, im] pairs")
    out = []
    for i, p in enumerate(obj):
        if isinstance(p, (int, float)):
            out.append(complex(p))
        elif isinstance(p, list) and len(p) == 2:
            out.append(complex(float(p[0]), float(p[1])))
        else:
            raise ValueError(f"grid[{i}]: expected [re, im]")
    return out


def load_json(path):
    with open(path) as fh:
        return json.load(fh)

