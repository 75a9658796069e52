"""Context and model files, DOT export and JSON reports.

Context files
    CSV: first row is ``name,<attribute>...``, then one row per object.
    JSON: ``{"objects": [...], "attributes": [...], "incidence": [[...]]}``
    or, for several relations, ``"relations": {"a": [[...]], ...}``.

Model files are context JSON plus ``"valuation": {"objects": {"p": [...]},
"properties": {"q": [...]}}``.

Cells are read exactly: JSON numbers are taken from their text, so 0.3 is
3/10. Fractions are written as strings (``"1/3"``).
"""

from __future__ import annotations

import csv
import io as _io
import json
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Union

from .concepts import ConceptLattice
from .core import FuzzyContext, Sort, degree, format_degree
from .multirel import MultiContext
from .semantics import Model

AnyContext = Union[FuzzyContext, MultiContext]


class FormatError(ValueError):
    pass


def _cell(value: object, where: str) -> Fraction:
    try:
        return degree(value)
    except (ValueError, TypeError) as exc:
        raise FormatError(f"{where}: {exc}") from None


def _json_number(text: str) -> str:
    return text


def load_json_text(text: str) -> Any:
    return json.loads(text, parse_float=_json_number, parse_int=_json_number)


def context_from_json(data: Mapping[str, Any]) -> AnyContext:
    try:
        objects = [str(g) for g in data["objects"]]
        attributes = [str(m) for m in data["attributes"]]
    except (KeyError, TypeError):
        raise FormatError("context needs 'objects' and 'attributes' lists") from None
    if ("incidence" in data) == ("relations" in data):
        raise FormatError("give exactly one of 'incidence' or 'relations'")

    def matrix(rows: Any, label: str):
        if not isinstance(rows, list) or len(rows) != len(objects):
            raise FormatError(f"{label}: expected {len(objects)} rows")
        out = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != len(attributes):
                raise FormatError(f"{label}: row {i + 1} should have {len(attributes)} cells")
            out.append(tuple(_cell(v, f"{label}[{objects[i]}][{attributes[j]}]") for j, v in enumerate(row)))
        return tuple(out)

    try:
        if "incidence" in data:
            return FuzzyContext(tuple(objects), tuple(attributes), matrix(data["incidence"], "incidence"))
        rels = data["relations"]
        if not isinstance(rels, dict) or not rels:
            raise FormatError("'relations' must be a non-empty object")
        return MultiContext(tuple(objects), tuple(attributes),
                            {str(k): matrix(v, f"relation {k}") for k, v in rels.items()})
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def context_from_csv(text: str) -> FuzzyContext:
    rows = [r for r in csv.reader(_io.StringIO(text)) if any(cell.strip() for cell in r)]
    if len(rows) < 2:
        raise FormatError("CSV context needs a header and at least one row")
    header = [h.strip() for h in rows[0]]
    attributes = header[1:]
    objects, matrix = [], []
    for k, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FormatError(f"row {k}: expected {len(header)} cells, found {len(row)}")
        name = row[0].strip()
        objects.append(name)
        matrix.append(tuple(_cell(v.strip(), f"row {k} ({name}), column {attributes[j]}")
                            for j, v in enumerate(row[1:])))
    try:
        return FuzzyContext(tuple(objects), tuple(attributes), tuple(matrix))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def parse_context(text: str, fmt: str = "json") -> AnyContext:
    if fmt == "csv":
        return context_from_csv(text)
    try:
        data = load_json_text(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise FormatError("context JSON must be an object")
    return context_from_json(data)


def _fmt_of(path: Path) -> str:
    return "csv" if path.suffix.lower() == ".csv" else "json"


def load_context(path: str | Path) -> AnyContext:
    path = Path(path)
    return parse_context(path.read_text(), _fmt_of(path))


def cell_text(d: Fraction) -> Union[str, float, int]:
    return format_degree(d)


def context_to_json(ctx: AnyContext) -> dict:
    out: dict[str, Any] = {"objects": list(ctx.objects), "attributes": list(ctx.attributes)}
    if isinstance(ctx, MultiContext):
        out["relations"] = {k: [[_json_cell(v) for v in row] for row in m] for k, m in ctx.relations.items()}
    else:
        out["incidence"] = [[_json_cell(v) for v in row] for row in ctx.incidence]
    return out


class _Raw(str):
    """A number spelled exactly; emitted without quotes."""


def _json_cell(d: Fraction) -> Any:
    text = format_degree(d)
    return _Raw(text) if "/" not in text else text


def dumps(data: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, exact numbers."""
    return _dump(data, 0) + "\n"


def _dump(x: Any, level: int) -> str:
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(x, _Raw):
        return str(x)
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, Fraction):
        return _dump(_json_cell(x), level)
    if isinstance(x, (int, float, str, Decimal)):
        return json.dumps(x if not isinstance(x, Decimal) else str(x))
    if isinstance(x, Mapping):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_dump(v, level + 1)}" for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, (list, tuple)):
        if not x:
            return "[]"
        if all(isinstance(v, (str, int, float, _Raw, Fraction)) and not isinstance(v, bool) for v in x):
            return "[" + ", ".join(_dump(v, level + 1) for v in x) + "]"
        return "[\n" + ",\n".join(inner + _dump(v, level + 1) for v in x) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def context_to_csv(ctx: FuzzyContext) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", *ctx.attributes])
    for g, row in zip(ctx.objects, ctx.incidence):
        writer.writerow([g, *(format_degree(v) for v in row)])
    return buf.getvalue()


def save_context(ctx: AnyContext, path: str | Path) -> None:
    path = Path(path)
    if _fmt_of(path) == "csv":
        if isinstance(ctx, MultiContext):
            raise FormatError("several relations need the JSON format")
        path.write_text(context_to_csv(ctx))
    else:
        path.write_text(dumps(context_to_json(ctx)))


def model_from_json(data: Mapping[str, Any]) -> Model:
    ctx = context_from_json(data)
    val = data.get("valuation", {}) or {}
    if not isinstance(val, dict):
        raise FormatError("'valuation' must be an object")
    unknown = set(val) - {"objects", "properties"}
    if unknown:
        raise FormatError(f"unknown valuation section(s): {', '.join(sorted(unknown))}")
    try:
        v1 = {str(k): [str(e) for e in v] for k, v in (val.get("objects") or {}).items()}
        v2 = {str(k): [str(e) for e in v] for k, v in (val.get("properties") or {}).items()}
        return Model(ctx, v1, v2)
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"bad valuation: {exc}") from None


def load_model(path: str | Path) -> Model:
    path = Path(path)
    try:
        data = load_json_text(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return model_from_json(data)


def model_to_json(model: Model) -> dict:
    out = context_to_json(model.context)  # type: ignore[arg-type]
    out["valuation"] = {
        "objects": {k: model.symbol_set(k, Sort.OBJECT).sorted() for k in sorted(model.v1)},
        "properties": {k: model.symbol_set(k, Sort.PROPERTY).sorted() for k in sorted(model.v2)},
    }
    return out


def _dot_id(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def _set_text(items: list[str]) -> str:
    return "{" + ", ".join(items) + "}" if items else "∅"


def lattice_to_dot(lattice: ConceptLattice, name: str = "lattice") -> str:
    """Hasse diagram, larger extents drawn on top."""
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=BT;", "  node [shape=box];"]
    for k, concept in enumerate(lattice.concepts):
        label = _set_text(concept.extent.sorted()) + "\\n" + _set_text(concept.intent.sorted())
        lines.append(f"  c{k} [label={_dot_id(label)}];")
    for lo, hi in lattice.hasse_edges():
        lines.append(f"  c{lo} -> c{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_to_json(lattice: ConceptLattice) -> dict:
    return {
        "flavor": lattice.flavor.value,
        "threshold": lattice.threshold,
        "concepts": [{"extent": c.extent.sorted(), "intent": c.intent.sorted()} for c in lattice.concepts],
        "hasse": [list(e) for e in lattice.hasse_edges()],
    }
