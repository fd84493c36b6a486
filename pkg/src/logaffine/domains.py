"""Tropical domains: affine space partially compactified along a fan.

A domain attaches one boundary stratum at infinity for each nonempty
cone of its fan; the stratum for a cone of k independent generators
has codimension k and sits at infinity in the direction opposite the
cone (a path escaping in direction d converges onto the stratum of
the cone containing -d).  The closure partial order on strata is
therefore reverse inclusion of cones.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GeometryError, InvalidFanError
from .fans import Fan, validate_fan
from .rational import Vector


@dataclass(frozen=True)
class Stratum:
    """A boundary stratum, keyed by the index set of its fan cone."""

    cone: frozenset[int]

    @property
    def codim(self) -> int:
        return len(self.cone)


@dataclass(frozen=True)
class CornerQuadrant:
    """One of the four local quadrants at a codimension-2 stratum.

    ``signs`` gives the side of each of the two local divisor branches;
    the (+, +) quadrant is the one owned by the domain itself, the
    other three belong to neighbors after welding.
    """

    signs: tuple[int, int]
    owned: bool
    residues: tuple[Vector, Vector]


@dataclass(frozen=True)
class TropicalDomain:
    """A validated fan together with its stratum poset."""

    fan: Fan
    strata: tuple[Stratum, ...]

    def stratum(self, cone: frozenset[int]) -> Stratum:
        for s in self.strata:
            if s.cone == cone:
                return s
        raise KeyError(f"no stratum for cone {sorted(cone)}")

    def in_closure(self, s: Stratum, t: Stratum) -> bool:
        """Whether ``t`` lies in the closure of ``s`` (cone reverse order)."""
        return s.cone <= t.cone

    def ray_labels(self, cone: frozenset[int]) -> tuple[str, ...]:
        return tuple(sorted(self.fan.labels[i] for i in cone))


def build_domain(fan: Fan) -> TropicalDomain:
    """Validate the fan and assemble its domain.

    Raises ``InvalidFanError`` carrying the violation list when the
    fan does not satisfy the axioms.
    """
    report = validate_fan(fan)
    if not report.ok:
        raise InvalidFanError(list(report.violations))
    strata = tuple(
        Stratum(cone)
        for cone in sorted(fan.cones, key=lambda c: (len(c), sorted(c)))
    )
    return TropicalDomain(fan=fan, strata=strata)


def residue(domain: TropicalDomain, stratum: Stratum) -> Vector:
    """The residue vector of a codimension-1 stratum (its fan ray)."""
    if stratum.codim != 1:
        raise GeometryError(
            f"residue needs a codimension-1 stratum, got codimension {stratum.codim}"
        )
    (index,) = stratum.cone
    return domain.fan.vectors[index]


def corner_quadrants(domain: TropicalDomain, stratum: Stratum) -> list[CornerQuadrant]:
    """The four sign quadrants around a codimension-2 stratum.

    Exactly one quadrant (signs (+, +)) is owned by this domain; the
    remaining three are slots that welding can fill with neighbors.
    """
    if stratum.codim != 2:
        raise GeometryError(
            f"corner quadrants need a codimension-2 stratum, got codimension {stratum.codim}"
        )
    i, j = sorted(stratum.cone)
    residues = (domain.fan.vectors[i], domain.fan.vectors[j])
    out: list[CornerQuadrant] = []
    for si in (1, -1):
        for sj in (1, -1):
            out.append(
                CornerQuadrant(
                    signs=(si, sj),
                    owned=(si == 1 and sj == 1),
                    residues=residues,
                )
            )
    return out
