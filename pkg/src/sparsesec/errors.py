"""Exception and warning types shared across the package."""


class ConfigError(ValueError):
    """A configuration, pattern or sweep specification is invalid."""


class UnsupportedRegimeError(ValueError):
    """The requested quantity is undefined or divergent for these parameters."""


class AsymptoticRegimeWarning(UserWarning):
    """An asymptotic rate expression is used outside its intended SNR range."""
