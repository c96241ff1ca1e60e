"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the region where a result is proven or defined."""


class ConfigError(ValueError):
    """Invalid simulation or command configuration."""
