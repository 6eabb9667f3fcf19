"""Exception types shared across the package.

Everything derives from OligorepError so callers can catch broadly; the CLI
maps subclasses onto exit codes (usage/data errors -> 1, resource limits -> 2,
violated internal invariants -> 3).
"""


class OligorepError(Exception):
    pass


class MalformedStructure(OligorepError, ValueError):
    """Structure payload does not satisfy the class axioms."""


class SizeLimitExceeded(OligorepError, ValueError):
    """A requested computation exceeds the configured desk-scale limits."""


class InvalidPermutation(OligorepError, ValueError):
    """Not a permutation of the expected domain."""


class NotASubgroup(OligorepError, ValueError):
    """Given generators do not lie in the ambient group."""


class NotACharacter(OligorepError, ValueError):
    """Class function is not a nonnegative integer combination of irreducibles."""


class BaseNotAclClosed(OligorepError, ValueError):
    """Base structure is not algebraically closed in its class."""


class TruncationTooSmall(OligorepError, ValueError):
    """A map or action is undefined on points the computation needs."""


class SupportOutsideEnumeration(OligorepError, ValueError):
    """Distribution support is not contained in the enumerated prefix."""


class NoAlgebraicityRequired(OligorepError, ValueError):
    """Operation only applies to classes without algebraicity."""


class FreenessViolation(OligorepError, ValueError):
    """A group action certificate found a point with nontrivial stabilizer."""


class UndecidedComparison(OligorepError, ValueError):
    """Order comparison did not resolve within the configured degree."""


class InvariantViolation(OligorepError, RuntimeError):
    """An internal mathematical invariant failed; this is always a bug."""
