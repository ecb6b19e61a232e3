"""Function-calling tools derived from the meta-object registry.

Every registered class yields create/update/delete/query descriptors (plus
batch variants) whose parameter schemas come straight from reflect_schema, so
agents gain new capabilities the moment a class is registered — no prompt or
dispatcher changes. Dispatch validates arguments against the derived schema
before touching the project and appends exactly one audit entry per call.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Any, Optional

from .engine import ProjectEngine, clip_class_name
from .errors import EditorError, SchemaViolation, UnknownAnimation, UnknownClip, UnknownTool
from .meta import MetaClass, MetaField, MetaRegistry, validate_value
from .model import (
    ElementClipPayload,
    MediaClipPayload,
    TextClipPayload,
    TextStyle,
    to_ms,
)
from .serialize import animation_to_doc, asset_to_doc, clip_to_doc, track_to_doc

SINGLE_VERBS = ("create", "update", "delete", "query")
BATCH_VERBS = ("create", "update", "delete")

_CLIP_CLASSES = ("text_clip", "media_clip", "element_clip")

_ID_PARAM = {"type": "string", "description": "Object id"}


@dataclass(frozen=True)
class ToolDescriptor:
    name: str
    target_class: str
    mode: str  # "single" | "batch" | "query"
    parameter_schema: dict[str, Any]
    description: str

    def to_function_schema(self) -> dict[str, Any]:
        """Chat-completions style function schema, consumable verbatim."""
        return {
            "name": self.name,
            "description": self.description,
            "parameters": self.parameter_schema,
        }


@dataclass
class BatchResult:
    applied: int
    rolled_back: bool
    first_error: Optional[dict[str, Any]] = None


def _field_schema(f: MetaField) -> dict[str, Any]:
    kind = f.value_kind
    schema: dict[str, Any]
    if kind in ("number", "time_seconds"):
        schema = {"type": "number"}
        if f.range is not None:
            schema["minimum"], schema["maximum"] = float(f.range[0]), float(f.range[1])
        elif kind == "time_seconds":
            schema["minimum"] = 0
    elif kind == "integer":
        schema = {"type": "integer"}
        if f.range is not None:
            schema["minimum"], schema["maximum"] = int(f.range[0]), int(f.range[1])
    elif kind == "enum":
        schema = {"type": "string", "enum": list(f.range or ())}
    elif kind == "color":
        schema = {
            "type": "array",
            "items": {"type": "number", "minimum": 0, "maximum": 1},
            "minItems": 4,
            "maxItems": 4,
        }
    elif kind == "point2d_normalized":
        schema = {
            "type": "array",
            "items": {"type": "number", "minimum": 0, "maximum": 1},
            "minItems": 2,
            "maxItems": 2,
        }
    elif kind == "boolean":
        schema = {"type": "boolean"}
    else:  # string, asset_ref
        schema = {"type": "string"}
    if f.description:
        schema["description"] = f.description
    if f.unit:
        schema["unit"] = f.unit
    return schema


def _context_params(cls: MetaClass) -> dict[str, dict[str, Any]]:
    """Id/selector parameters beyond the class's own fields."""
    if cls.category == "animation_effect":
        return {
            "clip_id": {"type": "string", "description": "Clip the effect attaches to"},
            "phase": {
                "type": "string",
                "enum": ["enter", "emphasis", "exit"],
                "description": "When in the clip's life the effect plays",
            },
        }
    if cls.name in _CLIP_CLASSES:
        return {"track_id": {"type": "string", "description": "Track holding the clip"}}
    return {}


def _single_schema(cls: MetaClass, verb: str) -> dict[str, Any]:
    properties: dict[str, Any] = {}
    required: list[str] = []
    context = _context_params(cls)
    if verb == "create":
        properties.update(context)
        if cls.category == "animation_effect":
            required.append("clip_id")
        elif cls.name in _CLIP_CLASSES:
            required.append("track_id")
        for f in cls.fields:
            properties[f.name] = _field_schema(f)
    elif verb == "update":
        properties["id"] = dict(_ID_PARAM)
        required.append("id")
        properties.update(context)
        for f in cls.fields:
            properties[f.name] = _field_schema(f)
    elif verb == "delete":
        properties["id"] = dict(_ID_PARAM)
        required.append("id")
    else:  # query
        properties["id"] = dict(_ID_PARAM)
        properties.update(
            {k: v for k, v in context.items() if k in ("clip_id", "track_id")}
        )
    schema: dict[str, Any] = {"type": "object", "properties": properties}
    if required:
        schema["required"] = required
    return schema


def _describe(cls: MetaClass, verb: str, batch: bool) -> str:
    field_bits = "; ".join(f"{f.name}: {f.description}" for f in cls.fields)
    verb_text = {
        "create": f"Create a {cls.name}",
        "update": f"Update fields of an existing {cls.name}",
        "delete": f"Delete a {cls.name} by id",
        "query": f"Query {cls.name} objects as serialized documents",
    }[verb]
    text = f"{verb_text}."
    if verb in ("create", "update") and field_bits:
        text += f" Fields: {field_bits}."
    if batch:
        text += " Batch mode: applies to every item, all-or-nothing."
    return text


def derive_tools(registry: MetaRegistry) -> list[ToolDescriptor]:
    """Descriptors for every registered class, sorted by name. Deterministic:
    regenerating over an unchanged registry yields identical output."""
    descriptors: list[ToolDescriptor] = []
    for name in registry.names():
        cls = registry.get(name)
        for verb in SINGLE_VERBS:
            descriptors.append(
                ToolDescriptor(
                    name=f"{verb}_{cls.name}",
                    target_class=cls.name,
                    mode="query" if verb == "query" else "single",
                    parameter_schema=_single_schema(cls, verb),
                    description=_describe(cls, verb, batch=False),
                )
            )
        for verb in BATCH_VERBS:
            descriptors.append(
                ToolDescriptor(
                    name=f"{verb}_{cls.name}_batch",
                    target_class=cls.name,
                    mode="batch",
                    parameter_schema={
                        "type": "object",
                        "properties": {
                            "items": {
                                "type": "array",
                                "items": _single_schema(cls, verb),
                                "minItems": 1,
                            }
                        },
                        "required": ["items"],
                    },
                    description=_describe(cls, verb, batch=True),
                )
            )
    descriptors.sort(key=lambda d: d.name)
    return descriptors


def validate_args(
    descriptor: ToolDescriptor, args: Any, registry: MetaRegistry
) -> dict[str, Any]:
    """Validate a tool invocation against its parameter schema. Field values
    go through the same range validation as every other write path."""
    schema = descriptor.parameter_schema
    return _validate_object(schema, args, descriptor, registry)


def _validate_object(
    schema: dict[str, Any], args: Any, descriptor: ToolDescriptor, registry: MetaRegistry
) -> dict[str, Any]:
    if not isinstance(args, dict):
        raise SchemaViolation(f"{descriptor.name}: arguments must be an object")
    properties = schema.get("properties", {})
    for key in args:
        if key not in properties:
            raise SchemaViolation(f"{descriptor.name}: unknown parameter {key!r}", parameter=key)
    for key in schema.get("required", []):
        if key not in args:
            raise SchemaViolation(f"{descriptor.name}: missing parameter {key!r}", parameter=key)
    cls = registry.get(descriptor.target_class)
    fmap = cls.field_map()
    out: dict[str, Any] = {}
    for key, value in args.items():
        if key == "items":
            item_schema = properties["items"]["items"]
            if not isinstance(value, list) or not value:
                raise SchemaViolation(f"{descriptor.name}: items must be a non-empty array")
            out["items"] = [
                _validate_object(item_schema, item, descriptor, registry) for item in value
            ]
        elif key in fmap:
            try:
                out[key] = validate_value(fmap[key], value)
            except EditorError as exc:
                raise SchemaViolation(f"{descriptor.name}: {exc.message}", parameter=key) from exc
        else:
            out[key] = _validate_plain(properties[key], key, value, descriptor)
    return out


def _validate_plain(
    prop: dict[str, Any], key: str, value: Any, descriptor: ToolDescriptor
) -> Any:
    expected = prop.get("type")
    if expected == "string":
        if not isinstance(value, str):
            raise SchemaViolation(f"{descriptor.name}: {key} must be a string", parameter=key)
        allowed = prop.get("enum")
        if allowed and value not in allowed:
            raise SchemaViolation(
                f"{descriptor.name}: {key} must be one of {allowed}", parameter=key
            )
    elif expected == "number":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaViolation(f"{descriptor.name}: {key} must be a number", parameter=key)
    elif expected == "integer":
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaViolation(f"{descriptor.name}: {key} must be an integer", parameter=key)
    return value


class ToolDispatcher:
    """Routes validated tool calls onto the engine and keeps the audit log."""

    def __init__(self, engine: ProjectEngine):
        self.engine = engine
        self.refresh()

    def refresh(self) -> None:
        """Re-derive descriptors after registry changes."""
        self._descriptors = {d.name: d for d in derive_tools(self.engine.registry)}

    def descriptors(self) -> list[ToolDescriptor]:
        return [self._descriptors[name] for name in sorted(self._descriptors)]

    def get(self, name: str) -> ToolDescriptor:
        descriptor = self._descriptors.get(name)
        if descriptor is None:
            raise UnknownTool(f"no tool named {name!r}", tool=name)
        return descriptor

    def dispatch(self, tool: str, args: dict[str, Any], actor: str = "user") -> Any:
        """Validate, execute, and log one tool call. Domain errors propagate
        after the error entry is appended; nothing is mutated on failure."""
        engine = self.engine
        with engine.acting_as(actor):
            try:
                descriptor = self.get(tool)
                validated = validate_args(descriptor, args, engine.registry)
            except EditorError as exc:
                engine.log_failure(tool, _plain(args), f"{exc.code}: {exc.message}")
                raise
            try:
                if descriptor.mode == "query":
                    result = self._execute_query(descriptor, validated)
                    engine.log_read(tool, _plain(validated))
                    return result
                with engine.operation_label(tool, _plain(validated)):
                    return self._execute(descriptor, validated)
            except EditorError as exc:
                engine.log_failure(tool, _plain(validated), f"{exc.code}: {exc.message}")
                raise

    def dispatch_batch(self, tool: str, items: list[dict[str, Any]], actor: str = "user") -> BatchResult:
        """All-or-nothing batch: items apply in order; the first failure rolls
        the project back to the pre-batch snapshot (revision, log, and all)."""
        descriptor = self.get(tool)
        if descriptor.mode != "batch":
            raise SchemaViolation(f"{tool} is not a batch tool", tool=tool)
        if not items:
            raise SchemaViolation("batch items must be non-empty", tool=tool)
        single_tool = tool[: -len("_batch")]
        engine = self.engine
        snapshot = copy.deepcopy(engine.project)
        issued = set(engine._issued)
        for index, item in enumerate(items, start=1):
            try:
                self.dispatch(single_tool, item, actor=actor)
            except EditorError as exc:
                engine.project = snapshot
                engine._issued = issued
                return BatchResult(
                    applied=0,
                    rolled_back=True,
                    first_error={"index": index, "error": exc.to_api_error()},
                )
        return BatchResult(applied=len(items), rolled_back=False)

    # -- execution ------------------------------------------------------

    def _execute(self, descriptor: ToolDescriptor, args: dict[str, Any]) -> Any:
        verb = descriptor.name.split("_", 1)[0]
        cls_name = descriptor.target_class
        engine = self.engine
        category = engine.registry.get(cls_name).category

        if category == "animation_effect":
            if verb == "create":
                params = {k: v for k, v in args.items() if k not in ("clip_id", "phase")}
                anim = engine.attach_animation(
                    args["clip_id"], cls_name, params, args.get("phase")
                )
                return animation_to_doc(anim)
            if verb == "update":
                params = {k: v for k, v in args.items() if k not in ("id", "phase")}
                anim = engine.animation(args["id"])
                if anim.preset != cls_name:
                    raise UnknownAnimation(
                        f"{args['id']} is a {anim.preset}, not a {cls_name}", id=args["id"]
                    )
                anim = engine.update_animation(args["id"], params, args.get("phase"))
                return animation_to_doc(anim)
            if verb == "delete":
                engine.detach_animation(args["id"])
                return {"removed": args["id"]}

        if cls_name == "asset":
            if verb == "create":
                asset = engine.add_asset(
                    kind=args.get("kind", "image"),
                    name=args.get("name", ""),
                    uri=args.get("uri", ""),
                    media_duration=args.get("media_duration") or None,
                )
                return asset_to_doc(asset)
            if verb == "update":
                fields = {k: v for k, v in args.items() if k != "id"}
                return asset_to_doc(engine.update_asset(args["id"], fields))
            if verb == "delete":
                engine.remove_asset(args["id"])
                return {"removed": args["id"]}

        if cls_name == "track":
            if verb == "create":
                track = engine.add_track(
                    kind=args.get("kind", "text"),
                    name=args.get("name", ""),
                    order_index=args.get("order_index"),
                    script_visible=args.get("script_visible", True),
                )
                return track_to_doc(track)
            if verb == "update":
                fields = {k: v for k, v in args.items() if k != "id"}
                return track_to_doc(engine.update_track(args["id"], fields))
            if verb == "delete":
                engine.remove_track(args["id"])
                return {"removed": args["id"]}

        if cls_name in _CLIP_CLASSES:
            if verb == "create":
                filled = engine.registry.validate_fields(
                    cls_name, {k: v for k, v in args.items() if k != "track_id"}
                )
                payload = _build_payload(cls_name, filled)
                clip = engine.add_clip(
                    args["track_id"], filled["start"], filled["duration"], payload
                )
                return clip_to_doc(clip)
            if verb == "update":
                clip = engine.clip(args["id"])
                if clip_class_name(clip) != cls_name:
                    raise UnknownClip(
                        f"{args['id']} is a {clip_class_name(clip)}, not a {cls_name}",
                        id=args["id"],
                    )
                fields = {k: v for k, v in args.items() if k != "id"}
                return clip_to_doc(engine.update_clip(args["id"], fields))
            if verb == "delete":
                engine.remove_clip(args["id"])
                return {"removed": args["id"]}

        raise UnknownTool(
            f"{descriptor.name} has no execution binding", tool=descriptor.name
        )

    def _execute_query(self, descriptor: ToolDescriptor, args: dict[str, Any]) -> Any:
        cls_name = descriptor.target_class
        engine = self.engine
        project = engine.project
        category = engine.registry.get(cls_name).category

        if category == "animation_effect":
            anims = [a for a in project.animations.values() if a.preset == cls_name]
            if "id" in args:
                anims = [a for a in anims if a.id == args["id"]]
            if "clip_id" in args:
                anims = [a for a in anims if a.clip_id == args["clip_id"]]
            return [animation_to_doc(a) for a in sorted(anims, key=lambda a: a.id)]
        if cls_name == "asset":
            assets = list(project.assets.values())
            if "id" in args:
                assets = [a for a in assets if a.id == args["id"]]
            return [asset_to_doc(a) for a in sorted(assets, key=lambda a: a.id)]
        if cls_name == "track":
            tracks = list(project.tracks.values())
            if "id" in args:
                tracks = [t for t in tracks if t.id == args["id"]]
            return [track_to_doc(t) for t in sorted(tracks, key=lambda t: t.order_index)]
        if cls_name in _CLIP_CLASSES:
            clips = [c for c in project.clips.values() if clip_class_name(c) == cls_name]
            if "id" in args:
                clips = [c for c in clips if c.id == args["id"]]
            if "track_id" in args:
                clips = [c for c in clips if c.track_id == args["track_id"]]
            clips.sort(key=lambda c: (c.start_ms, c.id))
            return [clip_to_doc(c) for c in clips]
        raise UnknownTool(
            f"{descriptor.name} has no execution binding", tool=descriptor.name
        )


def _build_payload(cls_name: str, filled: dict[str, Any]) -> Any:
    if cls_name == "text_clip":
        return TextClipPayload(
            content=filled["content"],
            style=TextStyle(
                font_family=filled["font_family"],
                font_size=filled["font_size"],
                color=filled["color"],
                position=filled["position"],
                alignment=filled["alignment"],
            ),
        )
    if cls_name == "media_clip":
        return MediaClipPayload(
            asset_ref=filled["asset_ref"], trim_in_ms=to_ms(filled["trim_in"])
        )
    return ElementClipPayload(element_kind=filled["element_kind"])


def _plain(args: Any) -> Any:
    if isinstance(args, dict):
        return {k: _plain(v) for k, v in args.items()}
    if isinstance(args, (list, tuple)):
        return [_plain(v) for v in args]
    return args
