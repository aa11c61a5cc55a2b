"""Homology of pochette surgeries on simply-connected closed 4-manifolds.

Everything is computed from the homology profile of X together with three
homological hypotheses the caller vouches for:

* ``t2_zero``: H_2(X) -> H_2(X, E) vanishes, E the pochette exterior;
* ``l_nullhomologous``: the longitude [l] dies in H_1(E);
* ``h2_image_constrained``: H_2 of the boundary lands in Z[B_e] + Z[S].

Under these, H_1 of the surgery is the cokernel of the Mayer-Vietoris map
Z[m] + Z[l] -> Z[m_e] + Z[l] with columns (p, 0) and (0, 1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import jsonschema

from .diagram import S4_PROFILE, HomologyProfile, _load_json
from .gluing import compose_h2_magnitudes, synthesize_word, word_text
from .intlin import TRIVIAL, Z, AbelianGroup, IntMatrix, cokernel, smith_normal_form
from .slope import SlopeFraction, normalize_slope, slope_text


class HypothesesNotMet(ValueError):
    pass


class NotSimplyConnected(ValueError):
    pass


@dataclass(frozen=True)
class SurgeryHypotheses:
    t2_zero: bool = True
    l_nullhomologous: bool = True
    h2_image_constrained: bool = True
    # declared by the caller; pi_1 is never computed here
    simply_connected_result: bool | None = None

    def to_json(self) -> dict:
        return {
            "t2_zero": self.t2_zero,
            "l_nullhomologous": self.l_nullhomologous,
            "h2_image_constrained": self.h2_image_constrained,
            "simply_connected_result": self.simply_connected_result,
        }

    @property
    def homological(self) -> bool:
        return self.t2_zero and self.l_nullhomologous and self.h2_image_constrained


@dataclass(frozen=True)
class Classification:
    kind: str
    order: int | None = None

    HOMOLOGY_SPHERE = "HomologySphere"
    SAME_AS_X = "SameHomologyAsX"
    TORSION_H1 = "TorsionH1"
    HYPOTHESES_NOT_MET = "HypothesesNotMet"

    def __str__(self) -> str:
        return self.kind if self.order is None else f"{self.kind}({self.order})"


@dataclass(frozen=True)
class SurgeryResult:
    """Homology of X(e, p/q, eps); H_2 and H_3 are ``None`` unless |p| = 1."""

    profile: HomologyProfile
    classification: Classification
    mv_matrix: IntMatrix
    mv_divisors: tuple[int, ...]


def _check_closed_simply_connected(x_profile: HomologyProfile) -> None:
    if x_profile[1] is None or not x_profile[1].is_trivial:
        raise NotSimplyConnected(f"X must have H_1 = 0, got {x_profile[1]}")
    if x_profile[0] != Z or x_profile[4] != Z:
        raise NotSimplyConnected("X must be connected, closed and orientable")


def exterior_homology(x_profile: HomologyProfile, hyp: SurgeryHypotheses) -> HomologyProfile:
    """H_*(E) = (Z, Z[m_e], Z[B_e] + H_2(X), 0, 0) when t2 vanishes."""
    if not hyp.t2_zero:
        raise HypothesesNotMet("exterior homology needs H_2(X) -> H_2(X, E) to vanish")
    _check_closed_simply_connected(x_profile)
    h2x = x_profile[2]
    return HomologyProfile((Z, Z, AbelianGroup(h2x.free_rank + 1, h2x.torsion), TRIVIAL, TRIVIAL))


@dataclass(frozen=True)
class I21Values:
    """Image of H_2 of the boundary in H_2 of the exterior.

    [B] goes to a multiple of [B_e] whose sign is not pinned down; only the
    magnitude is reported.
    """

    b_magnitude: int
    s_image: int = 0
    b_sign_ambiguous: bool = True


def i21_values(slope: SlopeFraction, eps: int, hyp: SurgeryHypotheses) -> I21Values:
    if not hyp.homological:
        raise HypothesesNotMet("i_21 needs t2 = 0, [l] = 0 in H_1(E) and the H_2 image condition")
    # [B] maps to (+-p)[B_e] + (+-q)[S_e]; [S_e] dies in the exterior
    mags = compose_h2_magnitudes(synthesize_word(slope, eps))
    b = mags[0, 0]
    if b != abs(slope.p):
        raise AssertionError(f"H_2 action gives |B| coefficient {b}, expected {abs(slope.p)}")
    return I21Values(b, 0, b != 0)


def mv_matrix(slope: SlopeFraction) -> IntMatrix:
    """Z[m] + Z[l] -> Z[m_e] + Z[l]: m goes to p m_e, l goes to l."""
    return IntMatrix.from_rows([[slope.p, 0], [0, 1]])


def surgery_homology(
    x_profile: HomologyProfile,
    slope: SlopeFraction,
    eps: int,
    hyp: SurgeryHypotheses,
) -> SurgeryResult:
    if eps not in (0, 1):
        raise ValueError(f"mod 2 framing must be 0 or 1, got {eps!r}")
    if not hyp.homological:
        raise HypothesesNotMet("surgery homology needs all three homological hypotheses")
    _check_closed_simply_connected(x_profile)

    mv = mv_matrix(slope)
    h1 = cokernel(mv)
    divisors = tuple(smith_normal_form(mv).d.diagonal())
    p = abs(slope.p)
    if p == 1:
        profile = HomologyProfile((Z, h1, x_profile[2], x_profile[3], Z))
        kind = Classification.HOMOLOGY_SPHERE if profile == S4_PROFILE else Classification.SAME_AS_X
        classification = Classification(kind)
    else:
        profile = HomologyProfile((Z, h1, None, None, Z))
        classification = Classification(Classification.TORSION_H1, p)
    return SurgeryResult(profile, classification, mv, divisors)


class Verdict(enum.Enum):
    HOMEOMORPHIC = "Homeomorphic"
    NOT_HOMEOMORPHIC = "NotHomeomorphic"
    INDETERMINATE = "Indeterminate"

    def __str__(self) -> str:
        return self.value


def homeomorphism_criterion(result: SurgeryResult, slope: SlopeFraction, hyp: SurgeryHypotheses) -> Verdict:
    """Homeomorphic to X iff the result is simply connected and |p| = 1."""
    if abs(slope.p) != 1:
        return Verdict.NOT_HOMEOMORPHIC
    if hyp.simply_connected_result is None:
        return Verdict.INDETERMINATE
    return Verdict.HOMEOMORPHIC if hyp.simply_connected_result else Verdict.NOT_HOMEOMORPHIC


def is_gluck(slope: SlopeFraction, eps: int) -> bool:
    """Slope 1/0 with nontrivial mod 2 framing is the Gluck twist."""
    n = normalize_slope(slope.p, slope.q)
    return (n.p, n.q) == (1, 0) and eps == 1


def certificate_schema() -> dict:
    return _load_json("certificate.schema.json")


def certificate(
    result: SurgeryResult | None,
    slope: SlopeFraction,
    eps: int,
    hyp: SurgeryHypotheses,
    x_profile: HomologyProfile | None = None,
    **extra,
) -> dict:
    """JSON-ready record of a surgery computation, checked against the schema.

    ``result`` may be ``None`` when the hypotheses fail; the record then has
    classification ``HypothesesNotMet`` and no profile.
    """
    inputs = {
        "slope": slope_text(slope),
        "representative": [slope.p, slope.q],
        "eps": eps,
        "hypotheses": hyp.to_json(),
    }
    for key in ("diagram", "pochette", "mode"):
        if key in extra:
            inputs[key] = extra.pop(key)
    mv = mv_matrix(slope)
    cert = {
        "inputs": inputs,
        "profile": None if result is None else result.profile.to_json(),
        "classification": (
            Classification.HYPOTHESES_NOT_MET if result is None else str(result.classification)
        ),
        "mv_elementary_divisors": list(smith_normal_form(mv).d.diagonal()),
        "word": word_text(synthesize_word(slope, eps)),
        "gluck": is_gluck(slope, eps),
        "homeomorphism": (
            str(Verdict.INDETERMINATE) if result is None
            else str(homeomorphism_criterion(result, slope, hyp))
        ),
    }
    if x_profile is not None:
        cert["x_profile"] = x_profile.to_json()
    cert.update(extra)
    jsonschema.validate(cert, certificate_schema())
    return cert
