import logging
from typing import Any, Dict

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_IO = 2
EXIT_INFEASIBLE = 3


class ConeDeformException(Exception):
    """Base exception for the cone-deformation toolkit with error tracking."""

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_FAILURE,
        error_code: str = None,
        details: Dict[str, Any] = None
    ):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code or self.__class__.__name__
        self.details = details or {}

        logger.error(
            f"{self.error_code}: {message}",
            extra={'exit_code': exit_code, 'details': self.details}
        )

        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for command reports."""
        return {
            'message': self.message,
            'error_code': self.error_code,
            'details': self.details
        }


class ValidationError(ConeDeformException):
    """Raised for input validation failures."""
    def __init__(self, message: str = "Validation failed", field: str = None):
        details = {'field': field} if field else {}
        super().__init__(message, exit_code=EXIT_IO, error_code="VALIDATION_ERROR", details=details)


# Triangulation input

class ParseError(ConeDeformException):
    """Raised when a face-pairing table cannot be read."""
    def __init__(self, message: str = "Malformed face-pairing table", line: int = None):
        details = {'line': line} if line is not None else {}
        super().__init__(message, exit_code=EXIT_IO, error_code="PARSE_ERROR", details=details)


class NotInvolutive(ConeDeformException):
    """Raised when a face pairing is not undone by its partner."""
    def __init__(self, message: str = "Face pairings are not an involution", face: tuple = None):
        details = {'face': list(face)} if face else {}
        super().__init__(message, exit_code=EXIT_IO, error_code="NOT_INVOLUTIVE", details=details)


class UnpairedFace(ConeDeformException):
    """Raised when a tetrahedron face has no partner."""
    def __init__(self, message: str = "Face is not paired", face: tuple = None):
        details = {'face': list(face)} if face else {}
        super().__init__(message, exit_code=EXIT_IO, error_code="UNPAIRED_FACE", details=details)


class NotOrientable(ConeDeformException):
    """Raised when a face pairing preserves orientation."""
    def __init__(self, message: str = "Face pairing is not orientation reversing", face: tuple = None):
        details = {'face': list(face)} if face else {}
        super().__init__(message, exit_code=EXIT_IO, error_code="NOT_ORIENTABLE", details=details)


class InvalidEdge(ConeDeformException):
    """Raised when an edge is identified with itself in reverse."""
    def __init__(self, message: str = "Edge is glued to itself in reverse", edge: tuple = None):
        details = {'edge': list(edge)} if edge else {}
        super().__init__(message, exit_code=EXIT_IO, error_code="INVALID_EDGE", details=details)


class NonOrientableLink(ConeDeformException):
    """Raised when a vertex link fails to inherit a consistent orientation."""
    def __init__(self, message: str = "Vertex link is not orientable", vertex_class: int = None):
        details = {'vertex_class': vertex_class} if vertex_class is not None else {}
        super().__init__(message, error_code="NON_ORIENTABLE_LINK", details=details)


# Shapes

class NotPositivelyOriented(ConeDeformException):
    """Raised when a shape parameter leaves the open upper half-plane."""
    def __init__(self, message: str = "Shape parameters are not positively oriented", quads: list = None):
        details = {'quads': quads} if quads else {}
        super().__init__(message, exit_code=EXIT_FAILURE, error_code="NOT_POSITIVELY_ORIENTED", details=details)


class DegenerateShape(ConeDeformException):
    """Raised when a shape parameter is 0, 1 or infinite."""
    def __init__(self, message: str = "Degenerate shape parameter", quads: list = None):
        details = {'quads': quads} if quads else {}
        super().__init__(message, exit_code=EXIT_FAILURE, error_code="DEGENERATE_SHAPE", details=details)


# Curves

class InvalidPath(ConeDeformException):
    """Raised when consecutive arcs of a path are not glued."""
    def __init__(self, message: str = "Arc path is not a closed normal curve", step: int = None):
        details = {'step': step} if step is not None else {}
        super().__init__(message, exit_code=EXIT_IO, error_code="INVALID_PATH", details=details)


class NotSameLink(ConeDeformException):
    """Raised when two curves live on different vertex links."""
    def __init__(self, message: str = "Curves lie on different vertex links", vertex_classes: tuple = None):
        details = {'vertex_classes': list(vertex_classes)} if vertex_classes else {}
        super().__init__(message, exit_code=EXIT_IO, error_code="NOT_SAME_LINK", details=details)


# Parametrization

class PoleError(ConeDeformException):
    """Raised when a rational parametrization is evaluated at a pole."""
    def __init__(self, message: str = "Evaluation at a pole", point: complex = None, component: int = None):
        details = {}
        if point is not None:
            details['point'] = [float(point.real), float(point.imag)]
        if component is not None:
            details['component'] = component
        super().__init__(message, exit_code=EXIT_FAILURE, error_code="POLE_ERROR", details=details)


# Solver

class ConvergenceError(ConeDeformException):
    """Base class for solver failures carrying the last accepted iterate."""
    def __init__(self, message: str, error_code: str, details: Dict[str, Any] = None, last_result=None):
        self.last_result = last_result
        super().__init__(message, exit_code=EXIT_FAILURE, error_code=error_code, details=details)


class MaxIterations(ConvergenceError):
    """Raised when Newton iteration does not reach the tolerance."""
    def __init__(self, message: str = "Maximum number of iterations reached", iterations: int = None,
                 residual: float = None, last_result=None):
        details = {}
        if iterations is not None:
            details['iterations'] = iterations
        if residual is not None:
            details['residual'] = residual
        super().__init__(message, "MAX_ITERATIONS", details, last_result)


class StalledIteration(ConvergenceError):
    """Raised when no damped step decreases the residual."""
    def __init__(self, message: str = "No descent step above the minimum step size", residual: float = None,
                 last_result=None):
        details = {'residual': residual} if residual is not None else {}
        super().__init__(message, "STALLED_ITERATION", details, last_result)


class LeftDomain(ConvergenceError):
    """Raised when every admissible step leaves the positively oriented region."""
    def __init__(self, message: str = "Iteration left the positively oriented region", residual: float = None,
                 last_result=None):
        details = {'residual': residual} if residual is not None else {}
        super().__init__(message, "LEFT_DOMAIN", details, last_result)


class RankDeficientJacobian(ConvergenceError):
    """Raised when the stacked Jacobian is numerically rank deficient."""
    def __init__(self, message: str = "Stacked Jacobian is rank deficient", rank: int = None,
                 expected: int = None, last_result=None):
        details = {}
        if rank is not None:
            details['rank'] = rank
        if expected is not None:
            details['expected'] = expected
        super().__init__(message, "RANK_DEFICIENT_JACOBIAN", details, last_result)


class StepTooLarge(ConvergenceError):
    """Raised when the continuation corrector fails; the path must be refined."""
    def __init__(self, message: str = "Continuation corrector diverged", index: int = None, last_result=None):
        details = {'index': index} if index is not None else {}
        super().__init__(message, "STEP_TOO_LARGE", details, last_result)


class InfeasibleTarget(ConeDeformException):
    """Raised when prescribed log-curvatures violate the angle-sum identity."""
    def __init__(self, message: str = "Target log-curvature is infeasible", defect: float = None):
        details = {'defect': defect} if defect is not None else {}
        super().__init__(message, exit_code=EXIT_INFEASIBLE, error_code="INFEASIBLE_TARGET", details=details)


class VerificationFailed(ConeDeformException):
    """Raised after a verification report when at least one check failed."""
    def __init__(self, message: str = "Verification failed", failures: list = None):
        details = {'failures': failures} if failures else {}
        super().__init__(message, exit_code=EXIT_FAILURE, error_code="VERIFICATION_FAILED", details=details)
