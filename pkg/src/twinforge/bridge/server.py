"""WebSocket state streaming and teleop command ingestion.

Threading contract: the sim loop is the only writer of simulation state;
connections exchange data with it through a SimBus holding a latest-wins
command mailbox and a copy-on-publish snapshot of the world. A
per-connection heartbeat zeroes the applied command if the teleop client
goes silent, and exactly one connection may hold teleop authority at a
time.
"""

from __future__ import annotations

import asyncio
import json
import logging
import threading
import time
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from ..autonomy import ModeChangeError, OperationalMode
from ..vehicle import Commands
from .messages import (
    CommandMessage, MessageError, StateMessage, downsample_scan,
    parse_client_frame,
)

log = logging.getLogger(__name__)


class BridgeError(RuntimeError):
    pass


@dataclass
class DeliveryRecord:
    seq: int
    payload: str
    sim_delivered: bool
    sim_wall_time: float | None
    external_delivered: bool
    external_wall_time: float | None


class ListPeer:
    """In-memory external target (tests and loopback)."""

    def __init__(self, fail: bool = False):
        self.sent: list[str] = []
        self.fail = fail

    def send(self, payload: str) -> None:
        if self.fail:
            raise ConnectionError("peer unreachable")
        self.sent.append(payload)


class WebSocketPeer:
    """Outbound connection to an external adapter (testbed hardware side)."""

    def __init__(self, url: str):
        self.url = url
        self._conn = None

    def send(self, payload: str) -> None:
        from websockets.sync.client import connect
        if self._conn is None:
            self._conn = connect(self.url, open_timeout=2)
        self._conn.send(payload)

    def close(self) -> None:
        if self._conn is not None:
            self._conn.close()
            self._conn = None


class CommandMirror:
    """Delivers accepted commands to the sim and/or the external peer.

    In twin mode every command goes to both targets with an identical
    payload; if the external target fails the bridge degrades to
    sim-only and flags it on the state stream.
    """

    def __init__(self, to_sim: bool, peer=None, clock=time.time):
        self.to_sim = to_sim
        self.peer = peer
        self.clock = clock
        self.records: list[DeliveryRecord] = []
        self.degraded = False

    def deliver(self, message: CommandMessage, apply_sim) -> DeliveryRecord:
        payload = message.payload()
        sim_t = ext_t = None
        sim_ok = ext_ok = False
        if self.to_sim:
            apply_sim(message)
            sim_ok, sim_t = True, self.clock()
        if self.peer is not None:
            try:
                self.peer.send(payload)
                ext_ok, ext_t = True, self.clock()
                self.degraded = False
            except Exception as e:  # degrade to sim-only, keep serving
                log.warning("external peer delivery failed: %s", e)
                self.degraded = True
        rec = DeliveryRecord(message.seq, payload, sim_ok, sim_t, ext_ok, ext_t)
        self.records.append(rec)
        return rec


class SimBus:
    """Latest-wins command mailbox plus copy-on-publish state snapshots."""

    def __init__(self, clock=time.monotonic):
        self._lock = threading.Lock()
        self.clock = clock
        self._command = Commands()
        self._command_time: float | None = None
        self._command_conn: int | None = None
        self._engaged = False
        self._snapshot = None
        self._grid_classes: np.ndarray | None = None
        self._grid_dirty: dict[int, list] = {}
        self.safe_stopped = False

    def put_command(self, commands: Commands, conn_id: int) -> None:
        with self._lock:
            self._command = commands
            self._command_time = self.clock()
            self._command_conn = conn_id
            self._engaged = True

    def heartbeat(self, conn_id: int) -> None:
        with self._lock:
            if self._command_conn == conn_id:
                self._command_time = self.clock()

    def drop_connection(self, conn_id: int) -> None:
        """A closed connection's commands are never applied again."""
        with self._lock:
            if self._command_conn == conn_id:
                self._command = Commands()
                self._command_time = None
                self._command_conn = None
                self._engaged = False

    def take_command(self, timeout_s: float) -> Commands:
        with self._lock:
            if not self._engaged:
                return Commands()
            age = self.clock() - (self._command_time or 0.0)
            if age > timeout_s:
                self.safe_stopped = True
                return Commands()
            self.safe_stopped = False
            return self._command

    def register(self, conn_id: int) -> None:
        with self._lock:
            self._grid_dirty[conn_id] = [(0, 0, 0, 0)]  # cleared on snapshot req

    def unregister(self, conn_id: int) -> None:
        with self._lock:
            self._grid_dirty.pop(conn_id, None)

    def publish(self, snapshot, grid_classes: np.ndarray | None,
                dirty: tuple | None) -> None:
        with self._lock:
            self._snapshot = snapshot
            if grid_classes is not None:
                self._grid_classes = grid_classes
            if dirty is not None:
                for pending in self._grid_dirty.values():
                    pending.append(dirty)

    def request_full_grid(self, conn_id: int) -> None:
        with self._lock:
            if self._grid_classes is not None:
                h, w = self._grid_classes.shape
                self._grid_dirty[conn_id] = [(0, 0, w, h)]

    def poll(self, conn_id: int):
        """(snapshot, grid_patch dict | None) for one connection."""
        with self._lock:
            snap = self._snapshot
            patch = None
            pending = self._grid_dirty.get(conn_id)
            if pending and self._grid_classes is not None:
                boxes = [b for b in pending if b[2] > 0 and b[3] > 0]
                self._grid_dirty[conn_id] = []
                if boxes:
                    x0 = min(b[0] for b in boxes)
                    y0 = min(b[1] for b in boxes)
                    x1 = max(b[0] + b[2] for b in boxes)
                    y1 = max(b[1] + b[3] for b in boxes)
                    crop = self._grid_classes[y0:y1, x0:x1]
                    patch = {"x0": x0, "y0": y0, "w": x1 - x0, "h": y1 - y0,
                             "cells": crop.flatten().tolist()}
            return snap, patch


class BridgeServer:
    """Owns the bus, the FastAPI app, and the sim-thread step function."""

    def __init__(self, session, rate_hz: float = 20.0,
                 authority_timeout_ms: int = 500, peer=None,
                 clock=time.monotonic):
        self.session = session
        self.rate_hz = rate_hz
        self.timeout_s = authority_timeout_ms / 1000.0
        self.bus = SimBus(clock=clock)
        self.clock = clock
        routing = session.routing
        if routing.plant == "external" and peer is None:
            raise BridgeError("testbed mode requires a reachable peer "
                              "(heartbeat error: no testbed peer)")
        self.mirror = CommandMirror(to_sim=routing.command_to_sim,
                                    peer=peer if routing.command_to_bridge else None)
        self._authority: int | None = None
        self._auth_lock = threading.Lock()
        self._conn_counter = 0
        self._external_steps = 0
        self._stop = threading.Event()
        self._small_scale = session.params.variant == "small"

    # -- sim side -------------------------------------------------------------

    def step_sim(self) -> None:
        """One sim step: apply the mailbox command (safe-stop on expiry)."""
        if self.session.routing.plant == "external":
            # testbed: the physical adapter pushes state frames instead
            self.bus.take_command(self.timeout_s)
            return
        commands = self.bus.take_command(self.timeout_s)
        snap = self.session.step(commands)
        grid = None
        if snap.grid_dirty is not None:
            grid = self.session.grid.classify()  # copy-on-publish
        self.bus.publish(snap, grid, snap.grid_dirty)

    def run_sim_loop(self) -> None:
        dt = self.session.dt
        next_t = self.clock()
        while not self._stop.is_set():
            self.step_sim()
            next_t += dt
            delay = next_t - self.clock()
            if delay > 0:
                time.sleep(delay)
            else:
                next_t = self.clock()

    def stop(self) -> None:
        self._stop.set()

    # -- connection side --------------------------------------------------------

    def new_connection(self) -> int:
        with self._auth_lock:
            self._conn_counter += 1
            conn_id = self._conn_counter
        self.bus.register(conn_id)
        return conn_id

    def close_connection(self, conn_id: int) -> None:
        self.release_authority(conn_id)
        self.bus.drop_connection(conn_id)
        self.bus.unregister(conn_id)

    def request_authority(self, conn_id: int) -> bool:
        with self._auth_lock:
            if self._authority is None:
                self._authority = conn_id
            return self._authority == conn_id

    def release_authority(self, conn_id: int) -> None:
        with self._auth_lock:
            if self._authority == conn_id:
                self._authority = None
        self.bus.drop_connection(conn_id)

    def has_authority(self, conn_id: int) -> bool:
        with self._auth_lock:
            return self._authority == conn_id

    def handle_frame(self, conn_id: int, text: str) -> str | None:
        """Process one inbound frame; returns an immediate reply or None."""
        try:
            kind, payload = parse_client_frame(text, self._small_scale)
        except MessageError as e:
            return json.dumps({"type": "error", "reason": str(e)})

        if kind == "ping":
            self.bus.heartbeat(conn_id)
            return json.dumps({"type": "pong"})
        if kind == "authority":
            if payload == "request":
                granted = self.request_authority(conn_id)
            else:
                self.release_authority(conn_id)
                granted = False
            return json.dumps({"type": "authority", "granted": granted})
        if kind == "snapshot":
            self.bus.request_full_grid(conn_id)
            return None
        if kind == "external_state":
            # testbed adapter pushing the physical vehicle's state
            from ..simcli.session import Snapshot
            d: dict = payload
            self._external_steps += 1
            snap = Snapshot(
                step=self._external_steps,
                time=float(d.get("time", self._external_steps * self.session.dt)),
                x=float(d["x"]), y=float(d["y"]), z=float(d.get("z", 0.0)),
                yaw=float(d["yaw"]), speed=float(d.get("speed", 0.0)),
                vx=float(d.get("speed", 0.0)), vy=0.0, yaw_rate=0.0,
                gear=int(d.get("gear", 0)), rpm=float(d.get("rpm", 0.0)),
                commands=Commands())
            self.bus.publish(snap, None, None)
            return None
        if kind == "mode":
            try:
                self.session.set_mode(OperationalMode(payload))
            except ModeChangeError as e:
                return json.dumps({"type": "error", "reason": str(e)})
            return None
        # command frame
        if not self.has_authority(conn_id):
            return json.dumps({"type": "error", "reason": "no teleop authority"})
        message: CommandMessage = payload
        if message.mode is not None:
            try:
                self.session.set_mode(OperationalMode(message.mode))
            except (ModeChangeError, ValueError) as e:
                return json.dumps({"type": "error", "reason": str(e)})
        if message.record == "start":
            self.session.set_recording(True)
        elif message.record == "stop":
            self.session.set_recording(False)
        self.mirror.deliver(
            message,
            lambda m: self.bus.put_command(m.to_commands(), conn_id))
        if not self.mirror.to_sim:
            self.bus.heartbeat(conn_id)
        return None

    def state_json(self, conn_id: int, seq: int) -> str | None:
        snap, patch = self.bus.poll(conn_id)
        if snap is None:
            return None
        grid = self.session.grid
        msg = StateMessage(
            seq=seq,
            sim_time=snap.time,
            pose=(snap.x, snap.y, snap.yaw),
            speed=snap.speed,
            gear=snap.gear,
            scan=downsample_scan(self.session.last_scan.ranges
                                 if self.session.last_scan is not None else None),
            grid_patch=patch,
            tracker=snap.tracker_status,
            mode=self.session.mode.value,
            recording=self.session.recording,
            degraded=self.mirror.degraded,
            safe_stop=self.bus.safe_stopped,
            grid_info={"resolution": grid.resolution,
                       "origin": list(grid.origin),
                       "size": [grid.width, grid.height]},
        )
        return msg.to_json()

    # -- app ----------------------------------------------------------------

    def build_app(self) -> FastAPI:
        app = FastAPI(title="twinforge bridge")
        server = self

        @app.websocket("/sim")
        async def sim_socket(websocket: WebSocket):
            await websocket.accept()
            conn_id = server.new_connection()
            send_lock = asyncio.Lock()

            async def stream():
                seq = 0
                period = 1.0 / server.rate_hz
                while True:
                    text = server.state_json(conn_id, seq)
                    if text is not None:
                        async with send_lock:
                            await websocket.send_text(text)
                        seq += 1
                    await asyncio.sleep(period)

            task = asyncio.create_task(stream())
            try:
                while True:
                    text = await websocket.receive_text()
                    reply = server.handle_frame(conn_id, text)
                    if reply is not None:
                        async with send_lock:
                            await websocket.send_text(reply)
            except WebSocketDisconnect:
                pass
            finally:
                task.cancel()
                server.close_connection(conn_id)

        return app


def serve(scenario, host: str = "127.0.0.1", port: int = 8700,
          authority_timeout_ms: int = 500, peer: str | None = None,
          rate_hz: float = 20.0) -> None:
    """Run the simulation with the bridge attached (blocking)."""
    import uvicorn

    from ..simcli.io import save_grid, save_trajectory
    from ..simcli.session import SimSession

    session = SimSession(scenario, mapping_enabled=True)
    peer_obj = WebSocketPeer(peer) if peer else None
    server = BridgeServer(session, rate_hz=rate_hz,
                          authority_timeout_ms=authority_timeout_ms,
                          peer=peer_obj)
    sim_thread = threading.Thread(target=server.run_sim_loop, daemon=True)
    sim_thread.start()
    try:
        uvicorn.run(server.build_app(), host=host, port=port, log_level="warning")
    finally:
        server.stop()
        sim_thread.join(timeout=2.0)
        out = scenario.out_dir
        out.mkdir(parents=True, exist_ok=True)
        save_grid(session.grid, out / "map.pgm")
        if session.trajectory.waypoints:
            save_trajectory(session.trajectory, out / "trajectory.csv")
        log.info("session artifacts written to %s", out)
