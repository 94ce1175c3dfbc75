"""Exception hierarchy shared by the kinematic modules.

Leg and joint indices carried by the exceptions are 1-based, matching the
way the legs are numbered on the machine.
"""


class KinematicError(ValueError):
    """Base class for every failure of a kinematic model."""


class NonUnitAxis(KinematicError):
    pass


class NotARotation(KinematicError):
    pass


class _LegError(KinematicError):
    def __init__(self, leg: int, msg: str = ""):
        self.leg = leg
        super().__init__(msg or f"{type(self).__name__}({leg})")


class OutsideCylinder(_LegError):
    """The point lies outside the reachable cylinder of a leg."""


class RangeLimit(_LegError):
    """A prismatic value falls outside its stroke."""


class SerialSingularity(_LegError):
    """A leg is orthogonal to its prismatic axis."""

    def __init__(self, leg: int, legs: tuple = (), msg: str = ""):
        self.legs = tuple(legs) or (leg,)
        super().__init__(leg, msg)


class ParallelSingularity(KinematicError):
    pass


class NoAssembly(KinematicError):
    pass


class BranchAmbiguity(KinematicError):
    pass


class LimitViolation(_LegError):
    """A wrist joint exceeds its bound (``leg`` holds the joint index)."""


class OutOfRange(KinematicError):
    def __init__(self, joints: tuple, msg: str = ""):
        self.joints = tuple(joints)
        super().__init__(msg or f"OutOfRange(joints={self.joints})")


class GimbalDegeneracy(KinematicError):
    pass


class LegDegeneracy(_LegError):
    pass


class NoConvergence(KinematicError):
    pass


class JacobianSingular(KinematicError):
    pass


class WristSingular(KinematicError):
    pass


class BendTooLarge(KinematicError):
    pass


class EmptyWorkspace(KinematicError):
    pass


class Infeasible(KinematicError):
    pass


class MisalignedYokesWarning(UserWarning):
    """The shaft line is not in the homokinetic Z-configuration."""
