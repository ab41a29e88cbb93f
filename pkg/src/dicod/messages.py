"""Messages exchanged between DICOD workers and the controller"""

from dataclasses import dataclass


@dataclass(frozen=True)
class UpdateMessage:
    """A border update (k0, t0, dZ) sent to one neighbor.

    ``seq`` numbers the sender's updates; ``ack`` is the highest seq the sender
    had consumed from the receiver when it made this update; ``gain`` is the
    sender's single-update cost decrease.
    """

    k0: int
    t0: int
    delta: float
    sender: int
    receiver: int
    seq: int
    ack: int = 0
    gain: float = 0.0


@dataclass(frozen=True)
class ProbeReply:
    """A worker's answer to a termination probe"""

    worker: int
    epoch: int
    local_converged: bool
    sent: int
    received: int
    generation: int  # bumped by every update and every consumed message
    exhausted: bool = False
