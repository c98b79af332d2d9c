"""Exact asymptotic directions of the zero sets of planar point-charge fields."""
from .charges import ChargeConfiguration, ConfigurationError, load_configuration, moment_order, validate
from .directions import spectrum, variant_comparison, zeroing_form
from .kernels import kernel_poly

__all__ = [
    "ChargeConfiguration",
    "ConfigurationError",
    "kernel_poly",
    "load_configuration",
    "moment_order",
    "spectrum",
    "validate",
    "variant_comparison",
    "zeroing_form",
]
