"""Meta-object framework: reflective class definitions for every editable kind.

A MetaClass declares typed, ranged, documented fields. The same declaration
feeds three consumers: instance validation, inspector parameter schemas, and
LLM function-calling tool descriptors. Adding a class needs no prompt or UI
changes anywhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .errors import (
    DuplicateClass,
    InvalidField,
    RangeViolation,
    UnknownClass,
    UnknownField,
)
from .ids import IdGenerator, is_object_id

VALUE_KINDS = frozenset(
    {
        "number",
        "integer",
        "string",
        "color",
        "enum",
        "time_seconds",
        "point2d_normalized",
        "asset_ref",
        "boolean",
    }
)

CATEGORIES = frozenset({"asset", "timeline_element", "animation_effect"})


@dataclass(frozen=True)
class MetaField:
    """One editable attribute: kind, optional range, default, and UI text."""

    name: str
    value_kind: str
    default: Any
    description: str = ""
    tooltip: str = ""
    # Closed [lo, hi] interval for numeric kinds, allowed-value list for enum.
    range: tuple[float, float] | tuple[str, ...] | None = None
    unit: str | None = None


@dataclass(frozen=True)
class MetaClass:
    name: str
    category: str
    fields: tuple[MetaField, ...]

    def field_map(self) -> dict[str, MetaField]:
        return {f.name: f for f in self.fields}


@dataclass
class MetaInstance:
    """A validated bag of field values produced by the factory."""

    id: str
    cls: str
    values: dict[str, Any] = field(default_factory=dict)


def _is_finite_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def validate_value(f: MetaField, value: Any) -> Any:
    """Check ``value`` against the field's kind and range; returns the
    normalized value (tuples for color/point). Raises RangeViolation."""

    kind = f.value_kind
    if kind in ("number", "time_seconds"):
        if not _is_finite_number(value):
            raise RangeViolation(f"{f.name}: expected a finite number, got {value!r}", field=f.name)
        value = float(value)
        if kind == "time_seconds" and value < 0:
            raise RangeViolation(f"{f.name}: time must be >= 0", field=f.name, value=value)
        if f.range is not None:
            lo, hi = f.range  # type: ignore[misc]
            if not (float(lo) <= value <= float(hi)):
                raise RangeViolation(
                    f"{f.name}: {value} outside [{lo}, {hi}]", field=f.name, value=value
                )
        return value
    if kind == "integer":
        if isinstance(value, bool) or not isinstance(value, int):
            raise RangeViolation(f"{f.name}: expected an integer, got {value!r}", field=f.name)
        if f.range is not None:
            lo, hi = f.range  # type: ignore[misc]
            if not (lo <= value <= hi):
                raise RangeViolation(
                    f"{f.name}: {value} outside [{lo}, {hi}]", field=f.name, value=value
                )
        return value
    if kind == "string":
        if not isinstance(value, str):
            raise RangeViolation(f"{f.name}: expected a string, got {value!r}", field=f.name)
        return value
    if kind == "enum":
        allowed = f.range or ()
        if value not in allowed:
            raise RangeViolation(
                f"{f.name}: {value!r} not one of {list(allowed)}", field=f.name, value=value
            )
        return value
    if kind == "color":
        if not isinstance(value, (list, tuple)) or len(value) != 4:
            raise RangeViolation(f"{f.name}: color must be [r,g,b,a]", field=f.name)
        channels = []
        for c in value:
            if not _is_finite_number(c) or not (0.0 <= float(c) <= 1.0):
                raise RangeViolation(f"{f.name}: color channels must be in [0,1]", field=f.name)
            channels.append(float(c))
        return tuple(channels)
    if kind == "point2d_normalized":
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            raise RangeViolation(f"{f.name}: point must be [x,y]", field=f.name)
        coords = []
        for c in value:
            if not _is_finite_number(c) or not (0.0 <= float(c) <= 1.0):
                raise RangeViolation(f"{f.name}: point must lie in the unit square", field=f.name)
            coords.append(float(c))
        return tuple(coords)
    if kind == "asset_ref":
        if not isinstance(value, str) or (value and not is_object_id(value)):
            raise RangeViolation(f"{f.name}: expected an object id, got {value!r}", field=f.name)
        return value
    if kind == "boolean":
        if not isinstance(value, bool):
            raise RangeViolation(f"{f.name}: expected a boolean, got {value!r}", field=f.name)
        return value
    raise RangeViolation(f"{f.name}: unknown value kind {kind!r}", field=f.name)


def _check_class(cls: MetaClass) -> None:
    if cls.category not in CATEGORIES:
        raise InvalidField(f"{cls.name}: unknown category {cls.category!r}")
    seen: set[str] = set()
    for f in cls.fields:
        if f.name in seen:
            raise InvalidField(f"{cls.name}: duplicate field {f.name!r}")
        seen.add(f.name)
        if f.value_kind not in VALUE_KINDS:
            raise InvalidField(f"{cls.name}.{f.name}: unknown value kind {f.value_kind!r}")
        if f.value_kind == "enum" and not f.range:
            raise InvalidField(f"{cls.name}.{f.name}: enum requires allowed values")
        try:
            validate_value(f, f.default)
        except RangeViolation as exc:
            raise InvalidField(f"{cls.name}.{f.name}: default out of range: {exc.message}") from exc


class MetaRegistry:
    """Holds MetaClass definitions; the source of truth for schemas and tools."""

    def __init__(self) -> None:
        self._classes: dict[str, MetaClass] = {}
        # Kind prefix used for ids of instances of a class; filled per category
        # unless overridden at registration.
        self._id_kinds: dict[str, str] = {}

    def register(self, cls: MetaClass, id_kind: str | None = None) -> str:
        if cls.name in self._classes:
            raise DuplicateClass(f"class {cls.name!r} already registered", name=cls.name)
        _check_class(cls)
        self._classes[cls.name] = cls
        if id_kind is None:
            id_kind = {"asset": "asset", "timeline_element": "clip", "animation_effect": "anim"}[
                cls.category
            ]
        self._id_kinds[cls.name] = id_kind
        return cls.name

    def get(self, name: str) -> MetaClass:
        cls = self._classes.get(name)
        if cls is None:
            raise UnknownClass(f"class {name!r} is not registered", name=name)
        return cls

    def has(self, name: str) -> bool:
        return name in self._classes

    def names(self) -> list[str]:
        return sorted(self._classes)

    def by_category(self, category: str) -> list[MetaClass]:
        return [c for c in self._classes.values() if c.category == category]

    def id_kind(self, name: str) -> str:
        self.get(name)
        return self._id_kinds[name]

    def validate_fields(
        self, name: str, values: dict[str, Any], partial: bool = False
    ) -> dict[str, Any]:
        """Validate overrides against the class schema. With partial=False the
        result is a complete field map (defaults filled in)."""
        cls = self.get(name)
        fmap = cls.field_map()
        for key in values:
            if key not in fmap:
                raise UnknownField(f"{name} has no field {key!r}", field=key)
        out: dict[str, Any] = {}
        for f in cls.fields:
            if f.name in values:
                out[f.name] = validate_value(f, values[f.name])
            elif not partial:
                out[f.name] = validate_value(f, f.default)
        return out

    def instantiate(
        self, name: str, overrides: dict[str, Any], idgen: IdGenerator, taken: set[str] | None = None
    ) -> MetaInstance:
        values = self.validate_fields(name, overrides)
        return MetaInstance(id=idgen.new(self.id_kind(name), taken), cls=name, values=values)

    def reflect_schema(self, name: str) -> dict[str, Any]:
        """Parameter schema document for inspector panels and tool derivation.
        Field order equals declaration order; output is deterministic."""
        cls = self.get(name)
        fields = []
        for f in cls.fields:
            entry: dict[str, Any] = {
                "name": f.name,
                "kind": f.value_kind,
                "default": _plain(f.default),
                "description": f.description,
                "tooltip": f.tooltip,
            }
            if f.range is not None:
                entry["range"] = list(f.range)
            if f.unit is not None:
                entry["unit"] = f.unit
            fields.append(entry)
        return {"class": cls.name, "category": cls.category, "fields": fields}


def _plain(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    return value
