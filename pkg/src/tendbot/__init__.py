"""Desk-scale mobile manipulator simulator with supervised machine tending."""

__version__ = "0.1.0"

from .geometry import Pose2D, Transform3D  # noqa: F401
