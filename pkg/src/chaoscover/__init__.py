"""Online chaotic coverage path planning for a point robot in a bounded 2-D room."""

__version__ = "0.1.0"
