"""Exception types shared across the package."""


class AnisoJumpError(Exception):
    """Base class for all package errors."""


class GeometryError(AnisoJumpError):
    """Degenerate tangent, failed projection, or other curve pathology."""


class GraphDomainError(GeometryError):
    """Requested local ordinate lies outside the single-valued graph range."""


class CoefficientError(AnisoJumpError):
    """Coefficient tensor is not symmetric positive definite (or a11 <= 0)."""


class CapabilityError(AnisoJumpError):
    """Operation needs data the object does not carry (e.g. derivatives)."""


class DegenerateFrameError(AnisoJumpError):
    """Primitive 6x6 system is numerically singular at this frame."""


class SolverError(AnisoJumpError):
    """Krylov solve broke down or stagnated."""


class GridError(AnisoJumpError):
    """Grid specification is invalid (too coarse, anisotropic spacing...)."""


class ConfigError(AnisoJumpError):
    """CLI configuration is malformed or contains unknown keys."""
