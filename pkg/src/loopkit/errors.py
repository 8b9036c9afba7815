"""Exception hierarchy shared by every loopkit module."""


class LoopkitError(ValueError):
    """Base class for all loopkit input and precondition errors."""


class OutOfRangeEntry(LoopkitError):
    def __init__(self, row, col, value):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"entry ({row},{col}) = {value} is out of range")


class LengthMismatch(LoopkitError):
    pass


class NotAQuasigroup(LoopkitError):
    def __init__(self, axis, index):
        self.axis, self.index = axis, index
        super().__init__(f"{axis} {index} repeats a symbol")


class NoIdentity(LoopkitError):
    pass


class NotClosed(LoopkitError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"product {pair[0]}*{pair[1]} leaves the subset")


class TrivialSubloop(LoopkitError):
    pass


class MissingIdentity(LoopkitError):
    pass


class UnsupportedProperty(LoopkitError):
    pass


class OrderMismatch(LoopkitError):
    pass


class OrderTooLarge(LoopkitError):
    def __init__(self, order, limit):
        self.order, self.limit = order, limit
        super().__init__(f"order {order} exceeds the limit {limit}")


class NotInSubloop(LoopkitError):
    pass


class NotSBijection(LoopkitError):
    pass


class PreconditionPropertyMissing(LoopkitError):
    pass


class TableSyntaxError(LoopkitError):
    def __init__(self, line, message):
        self.line, self.message = line, message
        super().__init__(f"line {line}: {message}")
