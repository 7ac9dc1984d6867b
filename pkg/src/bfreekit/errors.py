"""Exception hierarchy. Every refusal is loud and carries the limit it hit."""


class BFreeError(Exception):
    """Base class for all package errors."""


class CapacityExceeded(BFreeError):
    """A sieve or enumeration was asked to go beyond its configured cap."""

    def __init__(self, msg, needed=None, cap=None):
        super().__init__(msg)
        self.needed = needed
        self.cap = cap


class BudgetExceeded(BFreeError):
    """The exact density recursion ran out of its node budget."""


class HorizonExceeded(BFreeError):
    """A window operation was asked about positions beyond the exactness horizon."""


class RangeExceeded(BFreeError):
    """A query left the range on which a partially materialized set is decidable."""


class LevelUnavailable(BFreeError):
    """An instance has fewer construction levels than requested."""


class WindowTooShort(BFreeError):
    """Block statistics need a longer window than was supplied."""


class PlanInvalid(BFreeError):
    """Block sampling plan violates its length constraints."""


class OverlapError(BFreeError):
    """Word edit where an inserted position still carries a surviving one-bit."""


class ExhaustedAttempts(BFreeError):
    """Word sampling did not reach the entropy target within the attempt budget."""

    def __init__(self, msg, attempts=None):
        super().__init__(msg)
        self.attempts = attempts


class InfeasibleConstants(BFreeError):
    """Construction constants need primes beyond any configured cap."""

    def __init__(self, msg, required_bound=None):
        super().__init__(msg)
        self.required_bound = required_bound


class InfeasibleSchedule(BFreeError):
    """No admissible interval start satisfies the density target under the caps."""

    def __init__(self, msg, needed_beyond=None):
        super().__init__(msg)
        self.needed_beyond = needed_beyond


class WrongMode(BFreeError):
    """Operation only defined for the other window schedule mode."""


class HypothesisViolated(BFreeError):
    """The checked statement's hypothesis does not hold for these arguments."""


class IdentityViolated(BFreeError):
    """An exact structural identity failed; the instance is corrupt."""


class ConfigError(BFreeError):
    """Unparseable or contradictory run configuration."""


class VerificationError(BFreeError):
    """Archive re-validation failed."""
