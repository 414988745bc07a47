"""Exception types shared across the package."""


class HealthRoutesError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(HealthRoutesError):
    """Invalid demographic, prevalence, noise or model configuration."""


class ParseError(HealthRoutesError):
    """Malformed input text (coordinates, catalog rows, data files)."""


class ValidationError(HealthRoutesError):
    """Well-formed input that violates a domain constraint."""
