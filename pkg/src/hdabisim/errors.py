"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input data is structurally invalid."""


class NotTotal(ValidationError):
    def __init__(self, x, y):
        super().__init__(f"events {x!r} and {y!r} are unrelated by both orders")
        self.pair = (x, y)


class NotInterval(ValidationError):
    """A 2+2 witness (x, z, y, w) with x<z, y<w, x not< w and y not< z."""

    def __init__(self, witness):
        super().__init__(f"not an interval order, 2+2 witness {witness}")
        self.witness = tuple(witness)


class BadInterface(ValidationError):
    pass


class NotStrictOrder(ValidationError):
    pass


class NotComposable(ValidationError):
    pass


class NotLinear(ValidationError):
    pass


class Incompatible(ValidationError):
    pass


class LiteralSyntaxError(ValidationError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class MissingFace(ValidationError):
    pass


class SignatureMismatch(ValidationError):
    pass


class FunctorialityViolation(ValidationError):
    pass


class UnknownCellRef(ValidationError):
    pass


class NoInitial(ValidationError):
    pass


class InitialMismatch(ValidationError):
    pass


class EndpointMismatch(ValidationError):
    pass


class BadStep(ValidationError):
    def __init__(self, index, message):
        super().__init__(f"step {index}: {message}")
        self.index = index


class NotNodeInitial(ValidationError):
    pass


class InterfaceMismatch(ValidationError):
    pass
