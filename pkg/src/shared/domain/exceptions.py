"""Domain exceptions shared by every bounded context."""


class DomainException(Exception):
    """Base domain exception."""
    pass


class ValidationError(DomainException):
    """Raised when domain validation fails."""
    pass


class ConfigurationError(ValidationError):
    """Raised when parameters, boxes or experiment settings are malformed."""
    pass


class OutOfDomainError(DomainException):
    """Raised when an argument lies outside the domain of a formula."""
    pass


class EstimationError(DomainException):
    """Raised when an estimate cannot be produced from the available data."""
    pass


class NotFoundError(DomainException):
    """Raised when a configuration file or result artifact is missing."""
    pass
