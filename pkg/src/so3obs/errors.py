"""Exception types shared across the package."""


class So3ObsError(Exception):
    """Base class for all so3obs errors."""


class NotSkewError(So3ObsError):
    """Matrix passed to vee() is not skew-symmetric within tolerance."""


class DegenerateError(So3ObsError):
    """Input matrix or basis is singular or near rank-deficient."""


class RankDeficientError(So3ObsError):
    """Reference directions do not span 3-space."""


class DegenerateSpectrumError(So3ObsError):
    """Eigenvalues are not separated enough for a well-defined ordering."""


class InvalidParamsError(So3ObsError):
    """Observer parameters violate their admissibility constraints."""


class NotInJumpSetError(So3ObsError):
    """A mode switch was requested while the state is in the flow set."""


class ScenarioError(So3ObsError):
    """Scenario file is missing keys, malformed, or inconsistent."""
