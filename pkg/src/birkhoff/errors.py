"""Exception hierarchy shared by every module of the package."""


class BirkhoffError(ValueError):
    """Base class for domain errors (CLI exit code 1)."""

    code = "domain_error"

    def record(self):
        return {"error": self.code, "message": str(self)}


class NonQuadrivalent(BirkhoffError):
    code = "non_quadrivalent"


class BadInvolution(BirkhoffError):
    code = "bad_involution"


class DanglingDart(BirkhoffError):
    code = "dangling_dart"


class NotEulerian(BirkhoffError):
    code = "not_eulerian"


class NotAClosedWalk(BirkhoffError):
    code = "not_a_closed_walk"


class NotAcyclic(BirkhoffError):
    code = "not_acyclic"


class NotASink(BirkhoffError):
    code = "not_a_sink"


class OrderInconsistent(BirkhoffError):
    code = "order_inconsistent"


class BadRepresentation(BirkhoffError):
    code = "bad_representation"


class ParityMismatch(BirkhoffError):
    code = "parity_mismatch"


class UnsupportedCorner(BirkhoffError):
    code = "unsupported_corner"


class NotCohomologous(BirkhoffError):
    code = "not_cohomologous"


class ClassEmpty(BirkhoffError):
    code = "class_empty"


class DuplicateCoordinate(BirkhoffError):
    code = "duplicate_coordinate"


class StartOnGamma(BirkhoffError):
    code = "start_on_gamma"


class DisconnectedMap(BirkhoffError):
    code = "disconnected_map"


class NotACocycle(BirkhoffError):
    code = "not_a_cocycle"
