"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: InputError -> 2, CapError -> 3,
CertificationError -> 4.
"""


class RiplabError(Exception):
    pass


class InputError(RiplabError, ValueError):
    """Malformed parameters, indices out of range, dimension mismatches."""


class ModelUnsupportedError(InputError):
    """The requested operation's model precondition does not hold."""


class PlanInfeasibleError(InputError):
    """Parameter planning precondition failed; message names the condition."""


class CapError(RiplabError, RuntimeError):
    """An exhaustive oracle or enumeration would exceed its work cap."""


class CertificationError(RiplabError, RuntimeError):
    """A certified property failed to hold (or could not be established)."""


class LpError(RiplabError, RuntimeError):
    """The LP solver failed (infeasible/unbounded/iteration limit)."""
