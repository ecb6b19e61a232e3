"""Operator CLI: serve the HTTP API, export render states, validate files.

Exit codes: 0 ok, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from .engine import check_invariants, snapshot_frame
from .errors import EditorError
from .model import to_seconds
from .serialize import deserialize_project, render_state_to_doc
from .store import ProjectStore


def export_render_states(project, fps: float, out_path: Path) -> int:
    """One JSON line per frame at 1/fps steps over the project span;
    frame count = ceil(span * fps)."""
    span = to_seconds(project.span_ms())
    frames = math.ceil(span * fps)
    with out_path.open("w", encoding="utf-8") as handle:
        for k in range(frames):
            t = k / fps
            states = snapshot_frame(project, t)
            line = {"t": t, "states": [render_state_to_doc(s) for s in states]}
            handle.write(json.dumps(line, sort_keys=True) + "\n")
    return frames


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    if args.offline:
        os.environ["TAE_OFFLINE"] = "1"
    app = create_app(data_dir=args.data_dir, offline=args.offline)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    store = ProjectStore(args.data_dir)
    try:
        project = store.load(args.project)
    except EditorError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 1
    frames = export_render_states(project, args.fps, Path(args.out))
    print(f"wrote {frames} frame(s) to {args.out}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    path = Path(args.file)
    if not path.exists():
        print(f"error: {path} does not exist", file=sys.stderr)
        return 1
    try:
        project = deserialize_project(path.read_text(encoding="utf-8"))
    except EditorError as exc:
        print(f"invalid: {exc.code}: {exc.message}")
        return 1
    problems = check_invariants(project)
    if problems:
        for problem in problems:
            print(f"invalid: {problem}")
        return 1
    print(f"ok: {project.id} revision {project.revision}, "
          f"{len(project.clips)} clip(s) on {len(project.tracks)} track(s)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tae", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--port", type=int, default=8787)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--data-dir", default="./data")
    serve.add_argument("--offline", action="store_true",
                       help="rule-mode agents and a mock LLM gateway")
    serve.set_defaults(func=_cmd_serve)

    export = sub.add_parser("export", help="export render states as JSON lines")
    export.add_argument("--project", required=True)
    export.add_argument("--fps", type=float, required=True)
    export.add_argument("--out", required=True)
    export.add_argument("--data-dir", default="./data")
    export.set_defaults(func=_cmd_export)

    validate = sub.add_parser("validate", help="parse a project file and check invariants")
    validate.add_argument("file")
    validate.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
