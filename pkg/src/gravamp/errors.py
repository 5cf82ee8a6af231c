"""Exception types shared across the package.

The CLI maps these onto process exit codes: configuration problems are 1,
singular post-selection is 2, numerical failures (grid escape, extinguished
norm) are 3.
"""


class ConfigError(ValueError):
    """Raised when a run configuration document cannot be parsed or validated."""


class PostSelectionSingular(RuntimeError):
    """Pre- and post-selected states are (numerically) orthogonal.

    Carries the offending overlap magnitude so callers can report conditioning.
    """

    def __init__(self, overlap_magnitude: float, threshold: float):
        self.overlap_magnitude = overlap_magnitude
        self.threshold = threshold
        super().__init__(
            "post-selection singular: |overlap| = %.3e <= threshold %.3e"
            % (overlap_magnitude, threshold)
        )


class PostSelectionExtinguished(RuntimeError):
    """The post-selected wave function has vanished (norm below cutoff)."""

    def __init__(self, norm: float, cutoff: float = 1e-30):
        self.norm = norm
        self.cutoff = cutoff
        super().__init__(
            "post-selection extinguished: norm = %.3e < %.3e" % (norm, cutoff)
        )


class GridEscapeError(RuntimeError):
    """Probability mass reached the edge of the spatial grid during evolution."""

    def __init__(self, boundary_mass: float, x_min: float, x_max: float,
                 required_extent: float):
        self.boundary_mass = boundary_mass
        self.required_extent = required_extent
        super().__init__(
            "wave packet escaped grid [%g, %g]: boundary mass %.3e > 1e-10; "
            "extent of at least +-%g is required" % (x_min, x_max, boundary_mass,
                                                     required_extent)
        )


class GridUnrepresentableError(ValueError):
    """Requested evolution needs momenta or extents beyond any feasible grid."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__("parameters not representable on a grid: " + reason)
