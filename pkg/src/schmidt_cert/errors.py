"""Exception types shared across the package.

Plain ``ValueError`` is used for malformed inputs (wrong lengths, invalid
spectra, non-unitary matrices).  The classes below exist so that callers --
in particular the command line front end -- can map failure modes to exit
codes.
"""


class ResourceError(RuntimeError):
    """An operation was asked to materialize something beyond its size guard."""


class UnsupportedConfigurationError(ValueError):
    """A configuration that the protocol does not cover (e.g. unequal bipartition)."""


class ConfigError(ValueError):
    """An experiment configuration file failed validation."""
