"""Small named models used by the tests, the acceptance suite and the CLI.

Octahedron vertex ids: ``0 = +x, 1 = -x, 2 = +y, 3 = -y, 4 = +z, 5 = -z``.
"""

from __future__ import annotations

from .groups import FiniteGroup
from .orbifold import GlobalQuotientOrbifold
from .simplicial import SimplicialComplex

OCTAHEDRON_FACETS = [[a, b, c] for a in (0, 1) for b in (2, 3) for c in (4, 5)]


def octahedron() -> SimplicialComplex:
    return SimplicialComplex(6, OCTAHEDRON_FACETS)


def triangle() -> SimplicialComplex:
    return SimplicialComplex(3, [[0, 1, 2]])


def tetrahedron_boundary() -> SimplicialComplex:
    return SimplicialComplex(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])


def projective_plane() -> SimplicialComplex:
    """The 6-vertex triangulation of the real projective plane."""
    return SimplicialComplex(6, [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
                                 [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3]])


def sphere(subdiv: int = 0) -> GlobalQuotientOrbifold:
    """Octahedral S² with trivial group."""
    return GlobalQuotientOrbifold(octahedron(), None, subdiv, name="sphere")


def antipodal_sphere(subdiv: int = 0) -> GlobalQuotientOrbifold:
    """``[S²/ℤ_2]`` with the free antipodal action."""
    G = FiniteGroup.generated_by([(1, 0, 3, 2, 5, 4)])
    return GlobalQuotientOrbifold(octahedron(), G, subdiv, name="antipodal-sphere")


def football(subdiv: int = 0) -> GlobalQuotientOrbifold:
    """``[S²/ℤ_2]`` by the half-turn about the z-axis; cone points at the poles 4 and 5."""
    G = FiniteGroup.generated_by([(1, 0, 3, 2, 4, 5)])
    return GlobalQuotientOrbifold(octahedron(), G, subdiv, name="football")


def reflection_sphere(subdiv: int = 1) -> GlobalQuotientOrbifold:
    """``[S²/ℤ_2]`` by the reflection ``z -> -z``; mirror along the equator."""
    G = FiniteGroup.generated_by([(0, 1, 2, 3, 5, 4)])
    return GlobalQuotientOrbifold(octahedron(), G, subdiv, name="reflection-sphere")


def disk(subdiv: int = 1, stab: bool = True) -> GlobalQuotientOrbifold:
    """The 2-simplex as a disk, trivial group, stabilising at the corner 0."""
    return GlobalQuotientOrbifold(triangle(), None, subdiv, stab={"base_cell": 0} if stab else None, name="disk")


def cone(p: int = 3, subdiv: int = 2, stab: bool = False) -> GlobalQuotientOrbifold:
    """``[D²/ℤ_p]`` with ℤ_p rotating the boundary of a fan of ``p`` triangles.

    For ``p = 3`` the model is the 2-simplex with its vertices rotated.
    """
    if p == 3:
        M = triangle()
        G = FiniteGroup.generated_by([(1, 2, 0)])
    else:
        # centre p, rim 0..p-1
        M = SimplicialComplex(p + 1, [[i, (i + 1) % p, p] for i in range(p)])
        G = FiniteGroup.generated_by([tuple([(i + 1) % p for i in range(p)] + [p])])
    return GlobalQuotientOrbifold(M, G, subdiv, stab={"base_cell": 0} if stab else None, name=f"cone-{p}")


def points(count: int) -> SimplicialComplex:
    return SimplicialComplex(count)


FIXTURE_BUILDERS = {
    "sphere": sphere,
    "antipodal-sphere": antipodal_sphere,
    "football": football,
    "reflection-sphere": reflection_sphere,
    "disk": disk,
    "cone": cone,
}
