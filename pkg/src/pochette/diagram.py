"""Handle diagrams as algebraic data, and their homology.

A diagram records dotted circles (1-handles), framed 2-handles with their
algebraic linking numbers, and the number of 3- and 4-handles.  There is
always exactly one 0-handle.  No planar embedding is kept; everything below
works at the level of linking numbers.

For a closed orientable diagram the linking matrix is the boundary map from
2-chains to 1-chains.  Dotted-circle diagrams do not record how 3-handles
attach, so the remaining groups come from the Euler characteristic and
Poincare duality:

    H_1 = coker(linking matrix)          H_3 = Z^b1
    H_2 = Z^(chi - 2 + 2 b1) + tors H_1  H_0 = H_4 = Z
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping

import jsonschema

from .gluing import compose_h1, synthesize_word
from .intlin import TRIVIAL, Z, AbelianGroup, IntMatrix, cokernel, in_image
from .slope import SlopeFraction, normalize_slope, slope_text


class DiagramError(ValueError):
    pass


class DanglingReference(DiagramError):
    pass


class AsymmetricLinking(DiagramError):
    pass


class MultipleTopHandles(DiagramError):
    pass


class DuplicateId(DiagramError):
    pass


class NotClosed(DiagramError):
    pass


class InconsistentDiagram(DiagramError):
    pass


class PatternPreconditionFailed(DiagramError):
    pass


class MissingMeridians(DiagramError):
    pass


@dataclass(frozen=True)
class TwoHandle:
    id: str
    framing: int = 0
    linking: Mapping[str, int] = field(default_factory=dict)
    two_linking: Mapping[str, int] = field(default_factory=dict)
    # carries a 0-framed meridian; only consulted by transform_diagram
    meridian: bool = False

    def __post_init__(self):
        object.__setattr__(self, "linking", {k: int(v) for k, v in self.linking.items() if v})
        object.__setattr__(self, "two_linking", {k: int(v) for k, v in self.two_linking.items() if v})

    def to_json(self) -> dict:
        out = {"id": self.id, "framing": self.framing, "linking": dict(sorted(self.linking.items()))}
        if self.meridian:
            out["meridian"] = True
        if self.two_linking:
            out["two_linking"] = dict(sorted(self.two_linking.items()))
        return out


@dataclass(frozen=True)
class HandleDiagram:
    one_handles: tuple[str, ...] = ()
    two_handles: tuple[TwoHandle, ...] = ()
    n3: int = 0
    n4: int = 1
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "one_handles", tuple(self.one_handles))
        object.__setattr__(self, "two_handles", tuple(self.two_handles))

    def two_handle(self, hid: str) -> TwoHandle:
        for h in self.two_handles:
            if h.id == hid:
                return h
        raise KeyError(hid)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "one_handles": list(self.one_handles),
            "two_handles": [h.to_json() for h in self.two_handles],
            "n3": self.n3,
            "n4": self.n4,
        }

    @classmethod
    def from_json(cls, data: dict) -> HandleDiagram:
        jsonschema.validate(data, diagram_schema())
        return cls(
            one_handles=tuple(data["one_handles"]),
            two_handles=tuple(
                TwoHandle(
                    id=h["id"],
                    framing=h["framing"],
                    linking=h.get("linking", {}),
                    two_linking=h.get("two_linking", {}),
                    meridian=h.get("meridian", False),
                )
                for h in data["two_handles"]
            ),
            n3=data["n3"],
            n4=data["n4"],
            name=data.get("name", ""),
        )


STANDARD_S4 = HandleDiagram(name="S^4")


@lru_cache(maxsize=None)
def _load_json(name: str) -> dict:
    return json.loads(resources.files("pochette.data").joinpath(name).read_text(encoding="utf-8"))


def diagram_schema() -> dict:
    return _load_json("diagram.schema.json")


def load_diagram(path: str | Path) -> HandleDiagram:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return validate(HandleDiagram.from_json(data))


def dump_diagram(d: HandleDiagram, path: str | Path) -> None:
    Path(path).write_text(json.dumps(d.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def validate(d: HandleDiagram) -> HandleDiagram:
    """Check the structural invariants and return the diagram unchanged."""
    ids = list(d.one_handles) + [h.id for h in d.two_handles]
    seen = set()
    for i in ids:
        if i in seen:
            raise DuplicateId(f"handle id {i!r} used twice")
        seen.add(i)
    ones = set(d.one_handles)
    twos = {h.id: h for h in d.two_handles}
    for h in d.two_handles:
        for c in h.linking:
            if c not in ones:
                raise DanglingReference(f"2-handle {h.id!r} links unknown dotted circle {c!r}")
        for k, v in h.two_linking.items():
            if k not in twos:
                raise DanglingReference(f"2-handle {h.id!r} links unknown 2-handle {k!r}")
            if k == h.id:
                raise AsymmetricLinking(f"2-handle {h.id!r} lists itself; use the framing")
            if twos[k].two_linking.get(h.id, 0) != v:
                raise AsymmetricLinking(f"linking of {h.id!r} and {k!r} is not symmetric")
    if d.n3 < 0 or d.n4 < 0:
        raise DiagramError("handle counts must be nonnegative")
    if d.n4 > 1:
        raise MultipleTopHandles(f"{d.n4} 4-handles; a connected closed manifold has one")
    return d


def linking_matrix(d: HandleDiagram) -> IntMatrix:
    """Rows are dotted circles, columns are 2-handles."""
    return IntMatrix.from_rows(
        [[h.linking.get(c, 0) for h in d.two_handles] for c in d.one_handles],
        len(d.two_handles),
    )


def euler_characteristic(d: HandleDiagram) -> int:
    return 1 - len(d.one_handles) + len(d.two_handles) - d.n3 + d.n4


@dataclass(frozen=True)
class HomologyProfile:
    """H_0..H_4; an entry of ``None`` means the group was not determined."""

    groups: tuple[AbelianGroup | None, ...]

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        if len(self.groups) != 5:
            raise ValueError("a profile has exactly five groups H_0..H_4")

    def __getitem__(self, n: int) -> AbelianGroup | None:
        return self.groups[n]

    @property
    def complete(self) -> bool:
        return all(g is not None for g in self.groups)

    def betti(self) -> list[int]:
        if not self.complete:
            raise ValueError("profile is incomplete")
        return [g.free_rank for g in self.groups]

    def agrees_with(self, other: HomologyProfile) -> bool:
        """Equal wherever both profiles determine the group."""
        return all(a is None or b is None or a == b for a, b in zip(self.groups, other.groups))

    def __str__(self) -> str:
        return "(" + ", ".join("?" if g is None else str(g) for g in self.groups) + ")"

    def to_json(self) -> list:
        return [None if g is None else g.to_json() for g in self.groups]

    @classmethod
    def from_json(cls, data: list) -> HomologyProfile:
        return cls(tuple(None if g is None else AbelianGroup.from_json(g) for g in data))


S4_PROFILE = HomologyProfile((Z, TRIVIAL, TRIVIAL, TRIVIAL, Z))


def homology_closed(d: HandleDiagram) -> HomologyProfile:
    validate(d)
    if d.n4 != 1:
        raise NotClosed("closed-manifold homology needs exactly one 4-handle")
    h1 = cokernel(linking_matrix(d))
    b1 = h1.free_rank
    b2 = euler_characteristic(d) - 2 + 2 * b1
    if b2 < 0:
        raise InconsistentDiagram(f"handle counts force b2 = {b2} < 0")
    if d.n3 < b1:
        raise InconsistentDiagram(f"{d.n3} 3-handles cannot carry H_3 of rank {b1}")
    return HomologyProfile((Z, h1, AbelianGroup(b2, h1.torsion), AbelianGroup(b1), Z))


def is_homology_sphere(d: HandleDiagram) -> bool:
    return homology_closed(d) == S4_PROFILE


def slide_two_handle(d: HandleDiagram, moving: str, onto: str, times: int = 1) -> HandleDiagram:
    """Slide ``moving`` over ``onto`` (``times`` may be negative).

    Linking numbers add; the framing changes by
    ``times**2 * framing(onto) + 2 * times * lk(moving, onto)``.
    """
    if moving == onto:
        raise ValueError("cannot slide a handle over itself")
    a, b = d.two_handle(moving), d.two_handle(onto)
    c = times
    lk_ab = a.two_linking.get(onto, 0)
    linking = dict(a.linking)
    for k, v in b.linking.items():
        linking[k] = linking.get(k, 0) + c * v
    two = dict(a.two_linking)
    for k, v in b.two_linking.items():
        if k != moving:
            two[k] = two.get(k, 0) + c * v
    two[onto] = lk_ab + c * b.framing
    framing = a.framing + c * c * b.framing + 2 * c * lk_ab
    new_a = TwoHandle(a.id, framing, linking, two, a.meridian)

    handles = []
    for h in d.two_handles:
        if h.id == moving:
            handles.append(new_a)
            continue
        tl = {k: v for k, v in h.two_linking.items() if k != moving}
        val = new_a.two_linking.get(h.id, 0)
        if val:
            tl[moving] = val
        handles.append(TwoHandle(h.id, h.framing, h.linking, tl, h.meridian))
    return replace(d, two_handles=tuple(handles))


def _drop(d: HandleDiagram, one: str | None, two: str, n3_delta: int = 0) -> HandleDiagram:
    handles = []
    for h in d.two_handles:
        if h.id == two:
            continue
        handles.append(
            TwoHandle(
                h.id, h.framing,
                {k: v for k, v in h.linking.items() if k != one},
                {k: v for k, v in h.two_linking.items() if k != two},
                h.meridian,
            )
        )
    ones = tuple(c for c in d.one_handles if c != one)
    return replace(d, one_handles=ones, two_handles=tuple(handles), n3=d.n3 + n3_delta)


def cancel_chain_pairs(d: HandleDiagram) -> HandleDiagram:
    """Cancel 1/2- and 2/3-handle pairs as far as the linking data allows.

    A dotted circle and a 2-handle cancel when their linking number is +-1;
    the other 2-handles through that circle are first slid off it.  A
    2-handle with no linking against any dotted circle is cancelled against
    a 3-handle as long as there are more 3-handles than H_3 needs.
    """
    validate(d)
    while True:
        lm = linking_matrix(d)
        pivot = next(
            ((i, j) for i in range(lm.rows) for j in range(lm.cols) if abs(lm[i, j]) == 1),
            None,
        )
        if pivot is not None:
            i, j = pivot
            circle, knot = d.one_handles[i], d.two_handles[j].id
            unit = lm[i, j]
            for k, other in enumerate(d.two_handles):
                if k != j and lm[i, k]:
                    d = slide_two_handle(d, other.id, knot, -lm[i, k] * unit)
            d = _drop(d, circle, knot)
            continue
        b1 = cokernel(lm).free_rank
        if d.n3 > b1:
            free = next((h.id for h in d.two_handles if not h.linking), None)
            if free is not None:
                d = _drop(d, None, free, n3_delta=-1)
                continue
        return d


@dataclass(frozen=True)
class PochetteDesignation:
    """The dotted circle and the 0-framed 2-handle forming an embedded pochette."""

    one_handle_id: str
    two_handle_id: str


def check_pochette(d: HandleDiagram, poch: PochetteDesignation) -> None:
    """Raise ``PatternPreconditionFailed`` unless the designation is a pochette."""
    validate(d)
    if poch.one_handle_id not in d.one_handles:
        raise PatternPreconditionFailed(f"no dotted circle {poch.one_handle_id!r}")
    try:
        knot = d.two_handle(poch.two_handle_id)
    except KeyError:
        raise PatternPreconditionFailed(f"no 2-handle {poch.two_handle_id!r}") from None
    if knot.framing != 0:
        raise PatternPreconditionFailed(f"pochette 2-handle {knot.id!r} has framing {knot.framing}, not 0")
    if knot.linking:
        raise PatternPreconditionFailed(
            f"pochette 2-handle {knot.id!r} must not link any dotted circle, got {knot.linking}"
        )


@dataclass(frozen=True)
class ExteriorCheck:
    """Homology of the pochette exterior as seen from the linking data."""

    h1: AbelianGroup
    l_nullhomologous: bool

    @property
    def h1_is_z(self) -> bool:
        return self.h1 == Z


def exterior_check(d: HandleDiagram, poch: PochetteDesignation) -> ExteriorCheck:
    """H_1 of the exterior and whether the longitude [l] dies in it.

    The exterior deformation retracts onto the pochette boundary with the
    remaining handles attached, so H_1 is generated by [m], [l] and the other
    dotted circles, subject to one relation per remaining 2-handle.  This
    checks only what linking numbers can see.
    """
    check_pochette(d, poch)
    gens = [poch.one_handle_id] + [c for c in d.one_handles if c != poch.one_handle_id]
    cols = []
    for h in d.two_handles:
        if h.id == poch.two_handle_id:
            continue
        cols.append([h.two_linking.get(poch.two_handle_id, 0)] + [h.linking.get(c, 0) for c in gens])
    rel = IntMatrix.from_rows([[col[r] for col in cols] for r in range(len(gens) + 1)], len(cols))
    l_vec = [0, 1] + [0] * (len(gens) - 1)
    return ExteriorCheck(cokernel(rel), in_image(rel, l_vec))


def surgery_patterns() -> dict:
    return _load_json("surgery_patterns.json")


def _pattern_value(spec, slope: SlopeFraction, eps: int) -> int:
    if isinstance(spec, int):
        return spec
    return {"p": slope.p, "q": slope.q, "eps": eps}[spec]


def transform_diagram(
    d: HandleDiagram,
    poch: PochetteDesignation,
    slope: SlopeFraction,
    eps: int,
    patterns: dict | None = None,
) -> HandleDiagram:
    """Diagram of the pochette surgery X(e, p/q, eps) from a diagram of X.

    Every 2-handle outside the pochette attaches along a class
    ``kappa [m] + lambda [l]`` of the pochette boundary, where kappa is its
    linking with the pochette knot and lambda its linking with the pochette
    circle.  Regluing by the word for p/q replaces that class by its image
    under the inverse H_1 action.  When |p| != 1 every 2-handle through the
    pochette circle must carry a 0-framed meridian.
    """
    check_pochette(d, poch)
    if abs(slope.p) != 1:
        bare = [
            h.id for h in d.two_handles
            if h.linking.get(poch.one_handle_id, 0) and not h.meridian
        ]
        if bare:
            raise MissingMeridians(
                f"slope {slope} needs 0-framed meridians on {', '.join(bare)}"
            )
    patterns = patterns or surgery_patterns()
    key = "zero" if normalize_slope(slope.p, slope.q) == SlopeFraction(0, 1) else "generic"
    pattern = patterns["patterns"][key]
    if pattern["reglue"] != "inverse_h1_action":
        raise PatternPreconditionFailed(f"unknown reglue rule {pattern['reglue']!r}")

    action = compose_h1(synthesize_word(slope, eps))
    # inverse of a unimodular 2x2 matrix: adjugate times det
    (a, b), (c, e) = action.to_rows()
    det = a * e - b * c
    inv = IntMatrix(2, 2, (det * e, -det * b, -det * c, det * a))

    circle, knot_id = poch.one_handle_id, poch.two_handle_id
    new_class = {}
    for h in d.two_handles:
        if h.id == knot_id:
            continue
        kappa = h.two_linking.get(knot_id, 0)
        lam = h.linking.get(circle, 0)
        new_class[h.id] = inv.apply((kappa, lam))

    handles = []
    for h in d.two_handles:
        if h.id == knot_id:
            tl = {k: v for k, v in h.two_linking.items() if k not in new_class}
            tl.update({k: v[0] for k, v in new_class.items()})
            handles.append(TwoHandle(h.id, h.framing, h.linking, tl, h.meridian))
            continue
        kappa, lam = new_class[h.id]
        linking = dict(h.linking)
        linking[circle] = lam
        tl = dict(h.two_linking)
        tl[knot_id] = kappa
        handles.append(TwoHandle(h.id, h.framing, linking, tl, h.meridian))

    eps_spec = pattern["eps_knot"]
    eps_id = f"{knot_id}_{eps_spec['id_suffix']}"
    while any(eps_id == x for x in list(d.one_handles) + [h.id for h in handles]):
        eps_id += "'"
    tie = _pattern_value(eps_spec["two_linking_pochette_knot"], slope, eps)
    eps_knot = TwoHandle(eps_id, _pattern_value(eps_spec["framing"], slope, eps), {}, {knot_id: tie})
    handles = [
        TwoHandle(h.id, h.framing, h.linking, {**h.two_linking, eps_id: tie}, h.meridian)
        if h.id == knot_id else h
        for h in handles
    ]
    handles.append(eps_knot)

    out = HandleDiagram(
        one_handles=d.one_handles,
        two_handles=tuple(handles),
        n3=d.n3 + pattern["extra_three_handles"],
        n4=d.n4,
        name=f"{d.name}({slope_text(slope)}, eps={eps})" if d.name else f"surgery({slope_text(slope)}, eps={eps})",
    )
    return validate(out)
