"""Built-in table of the twelve bundled models and the model-file format.

Twelve bundled entries: two models of degrees 16 and 18, three of projective
3-space, four of the quadric threefold, and three of the intersection of two
quadrics (one of them carried by a non-reflexive octahedron).  Each entry
records the invariants the verifier checks the polynomial against.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass

from .laurent import LaurentPolynomial, LaurentError, parse


class CatalogError(ValueError):
    """Base class for catalog problems."""


class UnknownModelError(CatalogError):
    def __init__(self, model_id: str):
        super().__init__(f"unknown model id {model_id!r}")
        self.model_id = model_id


class CatalogSchemaError(CatalogError):
    """Model file violates the schema; `field` names the offending key."""

    def __init__(self, field_name: str, reason: str):
        super().__init__(f"field {field_name!r}: {reason}")
        self.field = field_name


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    fano_name: str
    table1_row: int
    index: int
    degree: int
    h12: int
    polynomial: LaurentPolynomial
    is_toric_claimed: bool
    is_canonical_claimed: bool
    source: str
    expected_critical_values: tuple = None
    own_components_over_0: int = None

    @property
    def expected_components_over_0(self) -> int:
        # central-fiber component count of the minimal compactification
        return self.h12 + 1


_CBRT108 = 108 ** (1 / 3)
_OMEGA = cmath.exp(2j * cmath.pi / 3)

# (id, fano_name, row, index, degree, h12, expression, toric, canonical,
#  critical values, own component count, source)
_ENTRIES = (
    (
        "v16",
        "V16",
        8,
        1,
        16,
        3,
        "(x+1)(y+1)(z+1)(x+y+z+1)/(xyz)",
        True,
        False,
        None,
        None,
        "degree 16 example (dehomogenized from its pencil form)",
    ),
    (
        "v18",
        "V18",
        9,
        1,
        18,
        2,
        "(x+y+z)(x+xz+xy+xyz+z+y+yz)/(xyz)",
        True,
        False,
        None,
        None,
        "degree 18 example",
    ),
    (
        "p3_a",
        "P3",
        17,
        4,
        64,
        0,
        "x+y+z+1/(xyz)",
        True,
        True,
        (4 + 0j, -4 + 0j, 4j, -4j),
        None,
        "projective 3-space model list, first entry",
    ),
    (
        "p3_b",
        "P3",
        17,
        4,
        64,
        0,
        "(x+1)^2/(xyz)+y/z+z",
        True,
        True,
        (4 + 0j, -4 + 0j, 4j, -4j),
        None,
        "projective 3-space model list, second entry",
    ),
    (
        "p3_c",
        "P3",
        17,
        4,
        64,
        0,
        "x+y/x+z/x+1/(xy)+1/(xz)",
        True,
        True,
        (4 + 0j, -4 + 0j, 4j, -4j),
        None,
        "projective 3-space model list, third entry",
    ),
    (
        "q3_a",
        "Q3",
        16,
        3,
        54,
        0,
        "(x+1)^2/(xyz)+y+z",
        True,
        True,
        (_CBRT108 + 0j, _CBRT108 * _OMEGA, _CBRT108 * _OMEGA ** 2),
        None,
        "quadric threefold model list, first entry",
    ),
    (
        "q3_b",
        "Q3",
        16,
        3,
        54,
        0,
        "x+y+z+1/(xy)+1/(xz)",
        True,
        True,
        (_CBRT108 + 0j, _CBRT108 * _OMEGA, _CBRT108 * _OMEGA ** 2),
        None,
        "quadric threefold model list, second entry",
    ),
    (
        "q3_c",
        "Q3",
        16,
        3,
        54,
        0,
        "(x+y)^2/x+1/(xy)+z/x+y/(xz)",
        True,
        True,
        (_CBRT108 + 0j, _CBRT108 * _OMEGA, _CBRT108 * _OMEGA ** 2),
        None,
        "quadric threefold model list, third entry",
    ),
    (
        "q3_d",
        "Q3",
        16,
        3,
        54,
        0,
        "(x+1)^3/(xyz)+y/z+2/z+2x/z+z^2/y",
        True,
        True,
        (_CBRT108 + 0j, _CBRT108 * _OMEGA, _CBRT108 * _OMEGA ** 2),
        None,
        "quadric threefold model list, fourth entry",
    ),
    (
        "x22_a",
        "X2.2",
        14,
        2,
        32,
        2,
        "(x+1)^2(y+1)^2/(xyz)+z",
        True,
        True,
        (8 + 0j, -8 + 0j),
        None,
        "intersection of two quadrics, first model",
    ),
    (
        "x22_b",
        "X2.2",
        14,
        2,
        32,
        2,
        "x+y+z+1/(xyz)+1/x+1/y+1/z+xyz",
        True,
        True,
        (8 + 0j, -8 + 0j),
        None,
        "intersection of two quadrics, second model",
    ),
    (
        "x22_nontoric",
        "X2.2",
        14,
        2,
        32,
        2,
        "(x+1/x)(y+1/y)(z+1/z)",
        False,
        False,
        (8 + 0j, -8 + 0j),
        30,
        "octahedron model of the intersection of two quadrics",
    ),
)


def load_catalog() -> list:
    """All twelve bundled entries, in fixed order."""
    out = []
    for (
        id_,
        name,
        row,
        index,
        degree,
        h12,
        expr,
        toric,
        canonical,
        critical,
        own_components,
        source,
    ) in _ENTRIES:
        out.append(
            CatalogEntry(
                id=id_,
                fano_name=name,
                table1_row=row,
                index=index,
                degree=degree,
                h12=h12,
                polynomial=parse(expr),
                is_toric_claimed=toric,
                is_canonical_claimed=canonical,
                source=source,
                expected_critical_values=critical,
                own_components_over_0=own_components,
            )
        )
    return out


def find_entry(model_id: str) -> CatalogEntry:
    for entry in load_catalog():
        if entry.id == model_id:
            return entry
    raise UnknownModelError(model_id)


_REQUIRED_FIELDS = (
    ("id", str),
    ("fano_name", str),
    ("table1_row", int),
    ("index", int),
    ("degree", int),
    ("h12", int),
    ("polynomial", str),
    ("is_toric_claimed", bool),
    ("is_canonical_claimed", bool),
    ("source", str),
)


def entry_to_obj(entry: CatalogEntry) -> dict:
    obj = {
        "id": entry.id,
        "fano_name": entry.fano_name,
        "table1_row": entry.table1_row,
        "index": entry.index,
        "degree": entry.degree,
        "h12": entry.h12,
        "polynomial": entry.polynomial.to_text(),
        "is_toric_claimed": entry.is_toric_claimed,
        "is_canonical_claimed": entry.is_canonical_claimed,
        "source": entry.source,
    }
    if entry.expected_critical_values is not None:
        obj["expected_critical_values"] = [
            [v.real, v.imag] for v in entry.expected_critical_values
        ]
    if entry.own_components_over_0 is not None:
        obj["own_components_over_0"] = entry.own_components_over_0
    return obj


def entry_from_obj(obj: dict) -> CatalogEntry:
    if not isinstance(obj, dict):
        raise CatalogSchemaError("<document>", "model file must hold an object")
    for name, typ in _REQUIRED_FIELDS:
        if name not in obj:
            raise CatalogSchemaError(name, "missing")
        value = obj[name]
        if typ is int and isinstance(value, bool):
            raise CatalogSchemaError(name, "expected an integer, got a boolean")
        if not isinstance(value, typ):
            raise CatalogSchemaError(name, f"expected {typ.__name__}")
    try:
        poly = parse(obj["polynomial"])
    except LaurentError as exc:
        raise CatalogSchemaError("polynomial", str(exc)) from exc

    critical = None
    if "expected_critical_values" in obj:
        raw = obj["expected_critical_values"]
        if not isinstance(raw, list):
            raise CatalogSchemaError("expected_critical_values", "expected a list")
        values = []
        for pair in raw:
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, (int, float)) for v in pair)
            ):
                raise CatalogSchemaError(
                    "expected_critical_values", "entries must be [re, im] pairs"
                )
            values.append(complex(pair[0], pair[1]))
        critical = tuple(values)

    own_components = None
    if "own_components_over_0" in obj:
        if isinstance(obj["own_components_over_0"], bool) or not isinstance(
            obj["own_components_over_0"], int
        ):
            raise CatalogSchemaError("own_components_over_0", "expected an integer")
        own_components = obj["own_components_over_0"]

    # reject silently-misspelled keys rather than ignoring them
    known = {name for name, _ in _REQUIRED_FIELDS} | {
        "expected_critical_values",
        "own_components_over_0",
    }
    for key in obj:
        if key not in known:
            raise CatalogSchemaError(key, "unknown field")

    from .polytopes import newton_polytope

    newton_polytope(poly)  # full-dimensionality check; raises if degenerate

    return CatalogEntry(
        id=obj["id"],
        fano_name=obj["fano_name"],
        table1_row=obj["table1_row"],
        index=obj["index"],
        degree=obj["degree"],
        h12=obj["h12"],
        polynomial=poly,
        is_toric_claimed=obj["is_toric_claimed"],
        is_canonical_claimed=obj["is_canonical_claimed"],
        source=obj["source"],
        expected_critical_values=critical,
        own_components_over_0=own_components,
    )


def load_model_file(path) -> CatalogEntry:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CatalogSchemaError("<document>", f"not valid JSON: {exc}") from exc
    return entry_from_obj(obj)


def save_model_file(entry: CatalogEntry, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(entry_to_obj(entry), fh, indent=2)
        fh.write("\n")
