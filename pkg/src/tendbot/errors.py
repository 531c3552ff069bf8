"""Exception types shared across the package."""


class TendbotError(Exception):
    """Base class for all package errors."""


class ScenarioError(TendbotError):
    """Scenario file failed to parse or violated an invariant."""


class NoPath(TendbotError):
    """No route exists between the requested endpoints."""


class StartOccupied(TendbotError):
    pass


class GoalOccupied(TendbotError):
    pass


class DivergedBand(TendbotError):
    """Band optimization cost increased for three consecutive iterations."""


class AllInfeasible(TendbotError):
    """Every candidate band intersects lethal space."""


class JointLimit(TendbotError):
    pass


class Singular(TendbotError):
    """Manipulability too low for differential motion."""


class NoConverge(TendbotError):
    pass


class Unreachable(TendbotError):
    """A required waypoint has no inverse kinematics solution."""

    def __init__(self, index, msg=None):
        super().__init__(msg or f"waypoint {index} unreachable")
        self.index = index


class BranchJump(TendbotError):
    """Tracked IK branch jumped discontinuously between samples."""


class CollisionOnPath(TendbotError):
    def __init__(self, segment, msg=None):
        super().__init__(msg or f"collision on segment {segment}")
        self.segment = segment


class DegenerateNeighborhood(TendbotError):
    pass


class EmptyRegion(TendbotError):
    """No fused points inside the queried region."""


class WrongMode(TendbotError):
    """Command not allowed in the session's current mode."""


class UnknownProfile(TendbotError):
    pass


class StaleProposal(TendbotError):
    """World model changed since the proposal was planned."""


class HintInfeasible(TendbotError):
    """Operator hint lies in collision."""


class NegativeDifference(TendbotError):
    """Trial time below the expert baseline."""
