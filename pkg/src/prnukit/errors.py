"""Exception types shared across the toolkit."""


class PrnuKitError(Exception):
    """Base class for all toolkit errors."""


class FormatError(PrnuKitError):
    """A file does not conform to the expected on-disk format."""


class DimensionError(PrnuKitError):
    """Raster shapes are incompatible with the requested operation."""


class ConfigError(PrnuKitError):
    """A parameter or configuration value is outside its legal range."""


class DegenerateInputError(PrnuKitError):
    """Input carries no usable signal for the requested statistic
    (e.g. a constant raster fed to a correlation)."""


class InputError(PrnuKitError):
    """User-supplied input set is unusable (empty directory, empty score list)."""
