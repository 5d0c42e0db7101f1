from .messages import (
    CommandMessage,
    MessageError,
    StateMessage,
    downsample_scan,
    parse_client_frame,
)
from .server import (
    BridgeError,
    BridgeServer,
    CommandMirror,
    DeliveryRecord,
    ListPeer,
    SimBus,
    serve,
)

__all__ = [
    "CommandMessage",
    "MessageError",
    "StateMessage",
    "downsample_scan",
    "parse_client_frame",
    "BridgeError",
    "BridgeServer",
    "CommandMirror",
    "DeliveryRecord",
    "ListPeer",
    "SimBus",
    "serve",
]
