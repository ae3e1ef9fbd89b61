"""Exact verification of almost contact geometry in dimension five and its twistor space."""

from .exact_algebra import ComplexScalar, FieldElement, PolynomialRing, parse_polynomial
from .frame_geometry import Frame, FrameGeometry, MetricComponents
from .contact_structures import AlmostContactData, TransformParameters
from .two_form_calculus import TwoFormBasis
from .ren_wang_twistor import ChartPoint, TangentVector5, TwistorLineParams

__all__ = [
    "AlmostContactData",
    "ChartPoint",
    "ComplexScalar",
    "FieldElement",
    "Frame",
    "FrameGeometry",
    "MetricComponents",
    "PolynomialRing",
    "TangentVector5",
    "TransformParameters",
    "TwistorLineParams",
    "TwoFormBasis",
    "parse_polynomial",
]
