"""Parametrised diagram families of the 4-sphere with a designated pochette.

Only linking numbers are encoded.  Both families are built so that the
linking matrix is unimodular (the diagram is a homology 4-sphere) and the
pochette ``c0``/``u0`` satisfies the exterior hypotheses: the longitude dies
in the exterior and the exterior has H_1 = Z.
"""

from __future__ import annotations

from typing import Sequence

from .diagram import HandleDiagram, PochetteDesignation, TwoHandle, _load_json, validate


class FamilyParameterError(ValueError):
    pass


POCHETTE = PochetteDesignation("c0", "u0")


def families_metadata() -> dict:
    return _load_json("families.json")


def _expected_counts(name: str, params: dict) -> dict:
    counts = families_metadata()["families"][name]["counts"]
    return {key: eval(expr, {"__builtins__": {}}, params) for key, expr in counts.items()}


def _check_counts(name: str, d: HandleDiagram, params: dict) -> None:
    want = _expected_counts(name, params)
    got = {
        "one_handles": len(d.one_handles),
        "two_handles": len(d.two_handles),
        "n3": d.n3,
        "n4": d.n4,
    }
    if got != want:
        raise AssertionError(f"{name} builder produced {got}, metadata says {want}")


def _knot(hid, framing, linking, meridian=False) -> TwoHandle:
    return TwoHandle(hid, framing, linking, {}, meridian)


def _chain(circles: Sequence[str], knots: Sequence[tuple[str, int]], meridians: bool) -> list[TwoHandle]:
    # knot i goes once through circle i and clasps circle i + 1
    out = []
    for i, (hid, framing) in enumerate(knots):
        link = {circles[i]: 1}
        if i + 1 < len(circles):
            link[circles[i + 1]] = -1
        out.append(_knot(hid, framing, link, meridians))
    return out


def fig1(k: int, n: Sequence[int] | None = None, signs: Sequence[int] | None = None,
         meridians: bool = False) -> HandleDiagram:
    """The family e_{k,n}.

    The leftmost knot (framing n_{k^2-1}) is the only one through the pochette
    circle; the knot framed n_1 is the one entwined with the pochette knot.
    """
    if k < 2:
        raise FamilyParameterError(f"k must be at least 2, got {k}")
    n = tuple(n) if n is not None else (0,) * (k * k - 1)
    if len(n) != k * k - 1:
        raise FamilyParameterError(f"n needs {k * k - 1} entries, got {len(n)}")
    signs = tuple(signs) if signs is not None else (1,) * (2 * k - 1)
    if len(signs) != 2 * k - 1 or any(s not in (1, -1) for s in signs):
        raise FamilyParameterError(f"signs needs {2 * k - 1} entries from {{+1, -1}}")

    circles = [f"d{i}" for i in range(1, k * k + 2 * k - 2)]
    lead = _knot(f"K{k * k - 1}", n[-1], {"c0": 1}, meridians)
    chain_knots = [("K1", n[0])] + [(f"K{i}", n[i - 1]) for i in range(2, k * k - 1)]
    chain_knots += [(f"J{i}", s) for i, s in enumerate(signs, 1)]
    chain = _chain(circles, chain_knots, meridians)
    # K1 clasps the pochette knot once
    chain[0] = TwoHandle("K1", n[0], chain[0].linking, {"u0": 1}, meridians)
    u0 = TwoHandle("u0", 0, {}, {"K1": 1})

    d = validate(HandleDiagram(
        one_handles=("c0", *circles),
        two_handles=(u0, lead, *chain),
        n3=1,
        n4=1,
        name=f"fig1(k={k})",
    ))
    _check_counts("fig1", d, {"k": k})
    return d


def fig2(s: int, t: int, m: Sequence[int] | None = None, n: Sequence[int] | None = None,
         meridians: bool = False) -> HandleDiagram:
    """The family e_{m,n}; requires sum(m) == 0.

    Knots n_1..n_{st} form s chains of length t through the circles
    d_1..d_{st}; the knot n_{st+1} passes once through the pochette circle and
    m_i times through the last circle of chain i.
    """
    if s < 1 or t < 1:
        raise FamilyParameterError(f"s and t must be positive, got s={s}, t={t}")
    m = tuple(m) if m is not None else (0,) * s
    if len(m) != s:
        raise FamilyParameterError(f"m needs {s} entries, got {len(m)}")
    if sum(m) != 0:
        raise FamilyParameterError(f"m must sum to 0, got sum {sum(m)}")
    n = tuple(n) if n is not None else (0,) * (s * t + 1)
    if len(n) != s * t + 1:
        raise FamilyParameterError(f"n needs {s * t + 1} entries, got {len(n)}")

    circles = [f"d{i}" for i in range(1, s * t + 1)]
    knots = []
    for block in range(s):
        names = circles[block * t:(block + 1) * t]
        knots += _chain(names, [(f"K{block * t + j + 1}", n[block * t + j]) for j in range(t)], meridians)
    last = {"c0": 1}
    for i, mi in enumerate(m, 1):
        last[circles[i * t - 1]] = mi
    knots.append(_knot(f"K{s * t + 1}", n[-1], last, meridians))

    d = validate(HandleDiagram(
        one_handles=("c0", *circles),
        two_handles=(TwoHandle("u0", 0), *knots),
        n3=1,
        n4=1,
        name=f"fig2(s={s}, t={t}, m={list(m)})",
    ))
    _check_counts("fig2", d, {"s": s, "t": t})
    return d


FAMILIES = {"fig1": fig1, "fig2": fig2}
