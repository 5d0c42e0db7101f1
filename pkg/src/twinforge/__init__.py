"""twinforge: a headless, deterministic digital-twin vehicle simulator.

Subpackages:
    worldcore  -- SE(3) math, rigid-body integration, 2.5D ray-castable world
    vehicle    -- powertrain/brake/steering/suspension/tire/aero dynamics
    sensors    -- encoders, INS/IMU, planar and spatial LIDAR, camera projection
    autonomy   -- occupancy mapping, trajectory recording, pure-pursuit + PID tracking
    simcli     -- scenario runner, file formats (world/PGM/CSV/PCD), command replay
    bridge     -- WebSocket state streaming and teleop command ingestion
"""

__version__ = "0.1.0"
