"""Exception hierarchy shared across the simulator."""


class SpectrumAuctionError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(SpectrumAuctionError, ValueError):
    """A numeric argument or field violates its domain (non-finite, wrong sign, ...)."""


class DegenerateChannelError(ParameterError):
    """Transmission over zero channels or a zero-rate link; latency is undefined."""


class NoFeasibleDemandError(SpectrumAuctionError):
    """A device cannot meet its latency requirement with any channel count."""


class OracleSizeError(SpectrumAuctionError):
    """Exhaustive enumeration was requested for an instance too large to enumerate."""


class ConfigError(SpectrumAuctionError, ValueError):
    """A scenario or population configuration is malformed."""
