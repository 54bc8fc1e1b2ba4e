"""Websocket server: serves the widget layout, streams frames, and forwards
parameter writes, pointer events, geometry edits and lifecycle commands from
UI clients to the engine queues.

Every client gets the layout on connect and after any change.  Frames go out
as one frame_meta JSON message followed by the step's binary image frames;
under backpressure whole image sets of stale frames are skipped (latest
wins), but metas are always delivered in order, so a client never sees an
image whose step differs from its last meta.
"""

from __future__ import annotations

import asyncio
import json
import os
import socket

from starlette.applications import Starlette
from starlette.concurrency import run_in_threadpool
from starlette.responses import PlainTextResponse
from starlette.routing import Mount, Route, WebSocketRoute
from starlette.staticfiles import StaticFiles
from starlette.websockets import WebSocket, WebSocketDisconnect

from .automaton import PointerEvent
from .engine import Engine
from .protocol import encode_image_frame

DEFAULT_PORT = 8008

# frames queued per client before stale image payloads get skipped
_FRAME_BACKLOG = 8


def _default_static_dir() -> str | None:
    here = os.path.dirname(os.path.abspath(__file__))
    for candidate in (
        os.path.join(os.path.dirname(os.path.dirname(here)), "frontend"),
        os.path.join(here, "static"),
    ):
        if os.path.isfile(os.path.join(candidate, "index.html")):
            return candidate
    return None


async def _handle_client(ws: WebSocket, engine: Engine) -> None:
    await ws.accept()
    loop = asyncio.get_running_loop()
    outbox: asyncio.Queue = asyncio.Queue()

    def on_event(event):
        loop.call_soon_threadsafe(outbox.put_nowait, event)

    engine.subscribe(on_event)
    sender = asyncio.create_task(_sender(ws, outbox))
    try:
        await ws.send_json(engine.layout_message())
        while True:
            raw = await ws.receive_text()
            try:
                msg = json.loads(raw)
                if not isinstance(msg, dict) or "type" not in msg:
                    raise ValueError("missing type")
            except ValueError as e:
                await ws.send_json({"type": "error", "code": "bad_message", "detail": str(e)})
                continue
            await _dispatch(ws, engine, msg)
    except (WebSocketDisconnect, RuntimeError):
        pass
    finally:
        engine.unsubscribe(on_event)
        sender.cancel()


async def _dispatch(ws: WebSocket, engine: Engine, msg: dict) -> None:
    mtype = msg["type"]
    try:
        if mtype == "action":
            ack = await run_in_threadpool(engine.control, str(msg.get("cmd", "")))
            await _ack(ws, "action", ack)
        elif mtype == "set_param":
            value = msg.get("value")
            if "key" in msg:
                value = {"key": msg["key"], "value": value}
            ack = await run_in_threadpool(engine.set_param, int(msg.get("widget_id", 0)), value)
            await _ack(ws, "set_param", ack)
        elif mtype == "set_geometry":
            ack = await run_in_threadpool(engine.set_geometry, int(msg.get("widget_id", 0)),
                                          int(msg.get("x", 0)), int(msg.get("y", 0)))
            await _ack(ws, "set_geometry", ack)
        elif mtype == "select_context":
            ack = await run_in_threadpool(engine.select_context, str(msg.get("name", "")))
            await _ack(ws, "select_context", ack)
        elif mtype == "pointer":
            kind = msg.get("kind")
            if kind not in ("press", "move", "release"):
                raise ValueError(f"bad pointer kind {kind!r}")
            evt = PointerEvent(kind=kind, button=int(msg.get("button", 1)),
                               pos=(float(msg.get("x_px", 0)), float(msg.get("y_px", 0))))
            engine.queue_pointer_event(int(msg.get("widget_id", 0)), evt)
        else:
            await ws.send_json({"type": "error", "code": "bad_message",
                                "detail": f"unknown type '{mtype}'"})
    except (TypeError, ValueError) as e:
        await ws.send_json({"type": "error", "code": "bad_message", "detail": str(e)})


async def _ack(ws: WebSocket, op: str, ack: dict) -> None:
    if ack.get("ok"):
        await ws.send_json({"type": "report", "op": op, **ack})
    else:
        await ws.send_json({"type": "error", "code": ack.get("error", "failed"),
                            "detail": f"{op}: {ack.get('error', '')}"})


async def _sender(ws: WebSocket, outbox: asyncio.Queue) -> None:
    try:
        while True:
            pending = [await outbox.get()]
            # under backpressure drain the backlog: every frame_meta still
            # goes out in order, but only the newest frame keeps its images
            while outbox.qsize() > _FRAME_BACKLOG:
                pending.append(outbox.get_nowait())
            frame_idx = [i for i, e in enumerate(pending) if e[0] == "frame"]
            last_frame = frame_idx[-1] if frame_idx else -1
            for i, (kind, payload) in enumerate(pending):
                if kind == "frame":
                    await _send_frame(ws, payload, images=(i == last_frame))
                elif kind == "layout":
                    await ws.send_json(payload)
                elif kind == "report":
                    await ws.send_json({"type": "report", **payload})
                elif kind == "quit":
                    await ws.close()
                    return
    except (asyncio.CancelledError, RuntimeError, WebSocketDisconnect):
        pass


async def _send_frame(ws: WebSocket, frame, images: bool) -> None:
    await ws.send_json({"type": "frame_meta", "step": frame.step,
                        "texts": [[wid, text] for wid, text in frame.texts],
                        "images": [wid for wid, _ in frame.images] if images else []})
    if images:
        for wid, buf in frame.images:
            await ws.send_bytes(encode_image_frame(wid, buf))


def build_app(engine: Engine, static_dir: str | None = None) -> Starlette:
    async def ws_endpoint(ws: WebSocket):
        await _handle_client(ws, engine)

    routes = [WebSocketRoute("/ws", ws_endpoint)]
    static = static_dir if static_dir is not None else _default_static_dir()
    if static:
        routes.append(Mount("/", app=StaticFiles(directory=static, html=True)))
    else:
        async def index(_):
            return PlainTextResponse(
                "simdeck engine running; web UI bundle not found (build frontend/)")
        routes.append(Route("/", index))
    return Starlette(routes=routes)


def serve(engine: Engine, port: int = DEFAULT_PORT, host: str = "127.0.0.1",
          static_dir: str | None = None) -> None:
    """Run the websocket/HTTP server until the engine quits.  Raises
    SystemExit with a message if the port is already taken."""
    import uvicorn

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as e:
        raise SystemExit(f"cannot listen on {host}:{port}: {e}") from e
    finally:
        probe.close()

    app = build_app(engine, static_dir)
    config = uvicorn.Config(app, host=host, port=port, log_level="warning")
    server = uvicorn.Server(config)

    def watch_quit(event):
        if event[0] == "quit":
            server.should_exit = True

    engine.subscribe(watch_quit)
    server.run()
