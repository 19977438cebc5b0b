"""JSON wire formats for groups, automorphisms, matrices and polynomials.

Every decoder raises ``InvalidInputError``; malformed JSON reports its line and column.
"""

import json
import sys
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveInt, ValidationError

from rcclab.domain.errors import InvalidInputError
from rcclab.domain.models.automorphism import Automorphism
from rcclab.domain.models.config import DEFAULT_CONFIG, AnalysisConfig
from rcclab.domain.models.construction import ConstructedInstance
from rcclab.domain.models.gf import FrobeniusDecomposition, GFMatrix, GFPoly
from rcclab.domain.models.group import FiniteGroup
from rcclab.domain.services.automorphisms import automorphism_from_generator_images
from rcclab.domain.services.catalog import catalog_from_spec, permutation_group
from rcclab.domain.services.group_kernel import validate_group

STDIN = "-"

type JsonObject = dict[str, Any]


class _Wire(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class GroupTableInput(_Wire):
    order: PositiveInt
    table: list[list[int]]
    labels: list[str] | None = None
    identity: NonNegativeInt | None = None
    generators: list[int] | None = None
    tag: str | None = None


class PermutationGroupInput(_Wire):
    degree: PositiveInt
    generators: list[list[list[int]]]


class CatalogInput(_Wire):
    catalog: str


class AutomorphismInput(_Wire):
    group: JsonObject | None = None
    perm: list[int] | None = None
    gens: list[int] | None = None
    images: list[int] | None = None


class MatrixInput(_Wire):
    p: PositiveInt
    n: PositiveInt
    entries: list[list[int]]


class PolyInput(_Wire):
    p: PositiveInt
    coeffs: list[int] = Field(default_factory=list)


def read_source(source: str | Path) -> str:
    """Text of a file, or of stdin when the source is ``-``."""
    if str(source) == STDIN:
        return sys.stdin.read()
    path = Path(source)
    if not path.exists():
        raise InvalidInputError(f"input file not found: {path}")
    return path.read_text(encoding="utf-8")


def load_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInputError(
            f"malformed JSON in {source} at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from e


def read_json(source: str | Path) -> Any:
    return load_json(read_source(source), "stdin" if str(source) == STDIN else str(source))


def _parse[M: BaseModel](model: type[M], data: Any, what: str) -> M:
    if not isinstance(data, dict):
        raise InvalidInputError(f"{what} must be a JSON object, got {type(data).__name__}")
    try:
        return model.model_validate(data)
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}"
            for err in e.errors()
        )
        raise InvalidInputError(f"invalid {what}: {details}") from e


# --- groups ----------------------------------------------------------------


def group_from_json(data: Any, config: AnalysisConfig = DEFAULT_CONFIG) -> FiniteGroup:
    """Decode the table format, the permutation format or a ``{"catalog": name}`` reference.

    A constructed instance (``{"group": ..., "automorphism": ...}``) decodes to its group.
    """
    if isinstance(data, dict) and "automorphism" in data and "group" in data:
        return group_from_json(data["group"], config)
    if isinstance(data, dict) and "catalog" in data:
        return catalog_from_spec(_parse(CatalogInput, data, "catalog reference").catalog, config)
    if isinstance(data, dict) and "degree" in data:
        perms = _parse(PermutationGroupInput, data, "permutation group")
        return permutation_group(perms.degree, perms.generators, config)

    raw = _parse(GroupTableInput, data, "group")
    if len(raw.table) != raw.order:
        raise InvalidInputError(f"table has {len(raw.table)} rows for order {raw.order}")
    group = validate_group(
        raw.table, labels=raw.labels, generators=raw.generators, tag=raw.tag, config=config
    )
    if raw.identity is not None and raw.identity != group.identity:
        raise InvalidInputError(
            f"declared identity {raw.identity} but the table's identity is {group.identity}"
        )
    return group


def group_to_json(group: FiniteGroup) -> JsonObject:
    data: JsonObject = {
        "order": group.order,
        "labels": list(group.labels),
        "table": group.rows,
        "identity": group.identity,
    }
    if group.generators is not None:
        data["generators"] = list(group.generators)
    if group.tag is not None:
        data["tag"] = group.tag
    return data


# --- automorphisms -----------------------------------------------------------


def automorphism_from_json(
    data: Any, group: FiniteGroup | None = None, config: AnalysisConfig = DEFAULT_CONFIG
) -> Automorphism:
    """Decode ``{"perm": [...]}`` or ``{"gens": [...], "images": [...]}``.

    The group comes from the embedded ``group`` field or, failing that, from the
    argument; when both are present they must agree.
    """
    raw = _parse(AutomorphismInput, data, "automorphism")
    embedded = group_from_json(raw.group, config) if raw.group is not None else None
    if embedded is not None and group is not None and embedded != group:
        raise InvalidInputError("automorphism refers to a different group")
    target = embedded or group
    if target is None:
        raise InvalidInputError("automorphism input names no group")

    if raw.perm is not None:
        if raw.gens is not None or raw.images is not None:
            raise InvalidInputError("give either 'perm' or 'gens'/'images', not both")
        try:
            return Automorphism(group=target, perm=tuple(raw.perm))
        except ValidationError as e:
            raise InvalidInputError(f"not an automorphism: {e.errors()[0]['msg']}") from e
    if raw.gens is None or raw.images is None:
        raise InvalidInputError("automorphism needs 'perm' or both 'gens' and 'images'")
    if len(raw.gens) != len(raw.images):
        raise InvalidInputError("'gens' and 'images' must have the same length")
    if any(not 0 <= g < target.order for g in [*raw.gens, *raw.images]):
        raise InvalidInputError(f"element indices must lie in [0, {target.order})")
    automorphism = automorphism_from_generator_images(target, raw.gens, raw.images)
    if automorphism is None:
        raise InvalidInputError("generator images do not extend to an automorphism")
    return automorphism


def automorphism_to_json(automorphism: Automorphism, embed_group: bool = False) -> JsonObject:
    data: JsonObject = {"perm": list(automorphism.perm)}
    if embed_group:
        data["group"] = group_to_json(automorphism.group)
    return data


def instance_to_json(instance: ConstructedInstance) -> JsonObject:
    return {
        "name": instance.name,
        "group": group_to_json(instance.group),
        "automorphism": automorphism_to_json(instance.automorphism),
        "expected": instance.expected.model_dump(mode="json", exclude_none=True),
    }


def packaged_automorphism(
    data: Any, group: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG
) -> Automorphism | None:
    """The automorphism shipped alongside a group by ``construct``, if any."""
    if isinstance(data, dict) and "automorphism" in data and "group" in data:
        return automorphism_from_json(data["automorphism"], group, config)
    return None


# --- linear algebra ----------------------------------------------------------


def matrix_from_json(data: Any) -> GFMatrix:
    raw = _parse(MatrixInput, data, "matrix")
    if len(raw.entries) != raw.n or any(len(row) != raw.n for row in raw.entries):
        raise InvalidInputError(f"matrix entries must be {raw.n}x{raw.n}")
    try:
        return GFMatrix.from_rows(raw.p, raw.entries)
    except ValidationError as e:
        raise InvalidInputError(f"invalid matrix: {e.errors()[0]['msg']}") from e


def matrix_to_json(matrix: GFMatrix) -> JsonObject:
    return {"p": matrix.p, "n": matrix.n, "entries": [list(row) for row in matrix.entries]}


def poly_from_json(data: Any) -> GFPoly:
    raw = _parse(PolyInput, data, "polynomial")
    try:
        return GFPoly.from_coeffs(raw.p, raw.coeffs)
    except ValidationError as e:
        raise InvalidInputError(f"invalid polynomial: {e.errors()[0]['msg']}") from e


def poly_to_json(poly: GFPoly) -> JsonObject:
    return {"p": poly.p, "coeffs": list(poly.coeffs)}


def frobenius_to_json(decomposition: FrobeniusDecomposition) -> JsonObject:
    return {
        "basis_change": matrix_to_json(decomposition.basis_change),
        "invariant_factors": [poly_to_json(f) for f in decomposition.invariant_factors],
        "display": [str(f) for f in decomposition.invariant_factors],
    }


def dumps(data: Any, pretty: bool = False) -> str:
    """Serialize for stdout: compact by default, indented and key-sorted with ``pretty``."""
    if pretty:
        return json.dumps(data, indent=2, sort_keys=True)
    return json.dumps(data, separators=(",", ":"))
