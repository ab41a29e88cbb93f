"""DICOD scheduler implementations."""

from .process import ProcessRuntime
from .stepped import SteppedRuntime

__all__ = ["ProcessRuntime", "SteppedRuntime"]
