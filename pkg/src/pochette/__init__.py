"""Computational tools for pochette surgery on 4-manifolds."""

from .diagram import HandleDiagram, HomologyProfile, PochetteDesignation, TwoHandle
from .gluing import Move, MoveWord, natural_lift, synthesize_word
from .intlin import AbelianGroup, IntMatrix, smith_normal_form
from .slope import SlopeFraction, normalize_slope, parse_slope
from .surgery import SurgeryHypotheses, surgery_homology

__version__ = "0.1.0"
