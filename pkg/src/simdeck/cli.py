"""Command-line host.

    simdeck host <demo> [dbfile] [--port N] [--headless --steps K] [--seed S]
    simdeck list-demos
    simdeck parse <file> [--db PATH] [--overwrite]

``host`` without ``--headless`` serves the web UI; with it the demo runs
parse + init + K steps and prints the final text outputs (for CI).
"""

from __future__ import annotations

import argparse
import sys

from . import demos
from .directives import DirectiveError, merge_into_collection, parse_source
from .engine import Engine
from .model import DEFAULT_CONTEXT, empty_collection
from .server import DEFAULT_PORT, serve
from .store import StoreError, default_db_path, open_store


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="simdeck",
                                 description="interactive simulation workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    host = sub.add_parser("host", help="host a registered demo simulation")
    host.add_argument("demo", help="demo name (see list-demos)")
    host.add_argument("dbfile", nargs="?", default=None,
                      help="store file (default: <demo>.db)")
    host.add_argument("--port", type=int, default=DEFAULT_PORT)
    host.add_argument("--headless", action="store_true",
                      help="no server: parse, init, run --steps steps, print outputs")
    host.add_argument("--steps", type=int, default=10)
    host.add_argument("--seed", type=int, default=0)

    sub.add_parser("list-demos", help="print registered demo names")

    parse = sub.add_parser("parse", help="parse directives from a source file into a store")
    parse.add_argument("file")
    parse.add_argument("--db", default=None, help="store file (default: <file base>.db)")
    parse.add_argument("--overwrite", action="store_true",
                       help="reset saved geometry and values to the declared initials")
    return ap


def _load_or_new_collection(store, sim):
    """Start from the stored rows of the demo's declared context, so saved
    layout and values survive a restart."""
    context = DEFAULT_CONTEXT
    try:
        parsed = parse_source(sim.directives or "")
        if parsed.context:
            context = parsed.context
    except DirectiveError:
        pass
    if context in store.list_contexts():
        return store.load_collection(context)
    return empty_collection(context)


def _cmd_host(args) -> int:
    try:
        sim = demos.create(args.demo, seed=args.seed)
    except KeyError:
        print(f"unknown demo '{args.demo}'; try: {', '.join(demos.demo_names())}",
              file=sys.stderr)
        return 2
    db_path = default_db_path(args.demo, args.dbfile)
    try:
        store = open_store(db_path)
    except StoreError as e:
        print(str(e), file=sys.stderr)
        return 1
    with store:
        coll = _load_or_new_collection(store, sim)
        engine = Engine(sim, coll, store)
        with engine:
            for cmd in ("parse", "init"):
                ack = engine.control(cmd)
                if not ack.get("ok"):
                    print(f"{cmd} failed: {ack.get('error')}", file=sys.stderr)
                    return 1
            if args.headless:
                return _run_headless(engine, args.steps)
            print(f"hosting '{args.demo}' on http://127.0.0.1:{args.port} "
                  f"(store: {db_path})")
            serve(engine, port=args.port)
    return 0


def _run_headless(engine: Engine, steps: int) -> int:
    for _ in range(max(0, steps)):
        ack = engine.control("step")
        if not ack.get("ok"):
            print(f"step failed: {ack.get('error')}", file=sys.stderr)
            return 1
    frame = engine.snapshot()
    names = {wid: wdef.name for wid, (table, wdef) in engine.widgets_by_id.items()
             if table == "data"}
    for wid, text in frame.texts:
        print(f"{names.get(wid, wid)}: {text}")
    print(f"step={engine.step_count}")
    return 0


def _cmd_parse(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(str(e), file=sys.stderr)
        return 1
    try:
        result = parse_source(text)
    except DirectiveError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    db_path = default_db_path(args.file, args.db)
    try:
        with open_store(db_path) as store:
            context = result.context or DEFAULT_CONTEXT
            if context in store.list_contexts():
                coll = store.load_collection(context)
            else:
                coll = empty_collection(context)
            report = merge_into_collection(result.specs, coll,
                                           preserve_state=not args.overwrite,
                                           context=result.context)
            store.save_collection(coll)
    except StoreError as e:
        print(str(e), file=sys.stderr)
        return 1
    print(f"parsed {args.file} into {db_path} (context '{context}'): "
          f"{report.created} created, {report.updated} updated, "
          f"{report.unchanged} unchanged")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "host":
        return _cmd_host(args)
    if args.command == "list-demos":
        for name in demos.demo_names():
            print(name)
        return 0
    return _cmd_parse(args)


if __name__ == "__main__":
    sys.exit(main())
