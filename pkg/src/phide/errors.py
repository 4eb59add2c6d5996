"""Exception types shared across the library."""


class PhideError(Exception):
    """Base class for library errors."""


class WellPosednessViolation(PhideError):
    """The fixed-point relation (omega, mu(h)) = h fails: no history, several
    histories, or an information map that peeks at future components."""


class ZeroReachLabel(PhideError):
    """A conditional expectation was requested on a label with zero mass."""


class EnumerationTooLarge(PhideError):
    """A deterministic-policy enumeration exceeded the configured cap."""


class PerfectRecallRequired(PhideError):
    """Backward-induction mode needs the relaxed map to satisfy perfect recall."""


class IllegalSupport(PhideError):
    """A local policy puts mass on an action outside the legal action set."""


class ConfigError(PhideError):
    """Invalid experiment configuration."""
