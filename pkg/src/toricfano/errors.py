"""Exception hierarchy.

Every domain error carries a module-qualified ``code`` (``"fan_model.NotAFan"``)
that the command-line front end prints verbatim.
"""


class ToricError(Exception):
    module = "toricfano"

    @property
    def code(self):
        return f"{self.module}.{type(self).__name__}"


# lattice_core

class LatticeError(ToricError):
    module = "lattice_core"


class ZeroVector(LatticeError, ValueError):
    pass


class LatticeOverflow(LatticeError, OverflowError):
    pass


class NotUnique(LatticeError):
    """The points do not pin down a single affine hyperplane."""


class NoSolution(LatticeError):
    """No linear form takes the value 1 on all of the points."""


class DegenerateDimension(LatticeError):
    def __init__(self, message, hull=None):
        super().__init__(message)
        self.hull = hull


# fan_model

class FanModelError(ToricError):
    module = "fan_model"


class NonPrimitive(FanModelError):
    pass


class NotPointed(FanModelError):
    pass


class RedundantGenerator(FanModelError):
    pass


class NotAFan(FanModelError):
    def __init__(self, message, cones=None):
        super().__init__(message)
        self.cones = cones


class MissingFace(FanModelError):
    def __init__(self, message, face=None):
        super().__init__(message)
        self.face = face


class WrongSupport(FanModelError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ApexNotVertex(FanModelError):
    pass


# constructions

class ConstructionError(ToricError):
    module = "constructions"


class NotGorenstein(ConstructionError):
    pass


class IndexOutOfRange(ConstructionError, IndexError):
    pass


class InvalidPolygon(ConstructionError):
    """Raised by polygon validation; ``violations`` lists every failed condition."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{kind}: {detail}" for kind, detail in self.violations))

    @property
    def kinds(self):
        return [kind for kind, _ in self.violations]


# classify_enum

class ClassifyError(ToricError):
    module = "classify_enum"


class NotPolytopeType(ClassifyError):
    pass


class RegionTooLarge(ClassifyError):
    pass


# cli / documents

class DocumentError(ToricError):
    module = "cli"


class DocumentSyntaxError(DocumentError):
    pass


class SchemaError(DocumentError):
    pass


class DocumentValidationError(DocumentError):
    def __init__(self, message, cause=None, location=None):
        super().__init__(message)
        self.cause = cause
        self.location = location
