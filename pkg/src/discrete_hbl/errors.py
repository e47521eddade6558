"""Exception hierarchy shared by every module."""


class HblError(Exception):
    """Base class for all errors raised by this package."""


class AmbientMismatchError(HblError, ValueError):
    """Two objects that must live in the same group do not."""


class HomomorphismError(HblError, ValueError):
    """An integer matrix does not define a well-defined homomorphism."""

    def __init__(self, message: str, generator: int | None = None):
        super().__init__(message)
        self.generator = generator


class InfiniteIndexError(HblError, ValueError):
    pass


class InfiniteSubgroupError(HblError, ValueError):
    pass


class LatticeCapError(HblError):
    """The group is larger than the configured enumeration cap."""

    def __init__(self, order: int, cap: int):
        super().__init__(f"group of order {order} exceeds lattice cap {cap}; rerun with max_order >= {order}")
        self.order = order
        self.cap = cap
        self.needed = order


class BudgetExceededError(HblError):
    def __init__(self, needed: int, budget: int):
        super().__init__(f"search space of {needed} tuples exceeds budget {budget}")
        self.needed = needed
        self.budget = budget


class DimensionCapError(HblError):
    pass


class ModeError(HblError, ValueError):
    """Exact vertex arithmetic requested for data that is not single-prime."""


class PreconditionError(HblError, ValueError):
    pass


class MembershipInconclusiveError(HblError):
    pass


class DegenerateAscentError(HblError, ArithmeticError):
    pass


class ParseError(HblError, ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field
