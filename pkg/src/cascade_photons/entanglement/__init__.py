from .invariants import (
    EntanglementInvariants,
    invariants_from_state,
    nested_weights,
    plane_extremes,
    plane_parameters,
    projector_resolution,
)
from .distributions import (
    CdfCurve,
    PdfCurve,
    assemble_pdf,
    cdf,
    cdf_function,
    pdf_rho2,
    pdf_rho3,
    rank2_bounds,
    rank2_cdf,
    rank2_density,
    rank3_cdf,
    rank3_density,
)
from .montecarlo import (
    complement_basis,
    haar_concurrences,
    histogram_pdf,
    ks_distance,
    mc_pdf_oracle,
    plane_basis,
)

__all__ = [
    "CdfCurve", "EntanglementInvariants", "PdfCurve", "assemble_pdf", "cdf",
    "cdf_function", "complement_basis", "haar_concurrences", "histogram_pdf",
    "invariants_from_state", "ks_distance", "mc_pdf_oracle", "nested_weights",
    "pdf_rho2", "pdf_rho3", "plane_basis", "plane_extremes", "plane_parameters",
    "projector_resolution", "rank2_bounds", "rank2_cdf", "rank2_density",
    "rank3_cdf", "rank3_density",
]
