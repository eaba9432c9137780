import json

import pytest

from orbiconf.errors import InputError, NotRegularError, PreconditionError
from orbiconf.fixtures import antipodal_sphere, cone, disk, football, octahedron, reflection_sphere, sphere, triangle
from orbiconf.groups import FiniteGroup, compose
from orbiconf.orbifold import (GlobalQuotientOrbifold, block_factorisation_holds, ghost_orbit, orientation_character,
                               orientation_sign, singular_locus, singular_vertices)
from orbiconf.simplicial import homology


def test_trivial_group_default():
    X = sphere(0)
    assert X.G.order == 1 and X.subdiv == 0 and X.is_closed()
    assert not singular_vertices(X)


def test_football_singular_locus_is_the_poles():
    X = football(0)
    assert singular_vertices(X) == {4, 5}
    assert ghost_orbit(X, 0) == {1}
    assert ghost_orbit(X, 4) == set()


def test_reflection_mirror_is_a_circle():
    X = reflection_sphere(1)
    L = singular_locus(X)
    assert homology(L).betti == (1, 1)


def test_cone_point_forces_subdivision():
    # the rotation of the triangle is not regular until subdivided
    X = cone(3, 0)
    assert X.requested_subdiv == 0 and X.subdiv >= 1
    assert len(singular_vertices(X)) == 1
    with pytest.raises(NotRegularError):
        GlobalQuotientOrbifold(triangle(), FiniteGroup.generated_by([(1, 2, 0)]), 0, auto_subdivide=False)


def test_free_action_has_empty_locus():
    assert not singular_vertices(antipodal_sphere(0))


def test_orientation_signs():
    assert set(orientation_sign(football(0)).values()) == {1}
    anti = orientation_sign(antipodal_sphere(0))
    assert sorted(anti.values()) == [-1, 1]
    refl = orientation_sign(reflection_sphere(1))
    assert sorted(refl.values()) == [-1, 1]
    assert set(orientation_sign(cone(3, 2)).values()) == {1}


def test_orientation_sign_is_a_homomorphism():
    for X in (antipodal_sphere(0), reflection_sphere(1), football(0)):
        s = orientation_sign(X)
        for g in X.G.elements:
            for h in X.G.elements:
                assert s[compose(g, h)] == s[g] * s[h]


def test_orientation_character_values():
    X = antipodal_sphere(0)
    om = orientation_character(X, 2)
    # sign(σ)^2 = 1 in dimension 2; one antipodal factor gives -1
    W = om.group
    a = X.G.generators()[0]
    e = W.element((0, 1), (a, X.G.identity))
    assert om(e) == -1
    swap = W.element((1, 0), (X.G.identity, X.G.identity))
    assert om(swap) == 1
    assert om.check_multiplicative()


@pytest.mark.parametrize("fixture,n_max", [(football, 5), (antipodal_sphere, 5), (cone, 4), (sphere, 6)])
def test_block_factorisation(fixture, n_max):
    X = fixture() if fixture is not cone else cone(3, 2)
    for n in range(1, n_max + 1):
        for m in range(n + 1):
            assert block_factorisation_holds(X, n, m)


def test_block_factorisation_limit():
    with pytest.raises(PreconditionError):
        block_factorisation_holds(football(0), 6, 3)


def test_json_round_trip():
    X = disk(1)
    Y = GlobalQuotientOrbifold.from_json(json.dumps(X.to_json()))
    assert Y.K == X.K and Y.stab == X.stab


@pytest.mark.parametrize("text", [
    "{bad",
    json.dumps({"no_complex": 1}),
    json.dumps({"complex": {"vertices": 3, "facets": [[0, 1, 7]]}}),
    json.dumps({"complex": {"vertices": 3, "facets": [[0, 1, 2]]}, "group": {"generators": [[0, 0, 1]]}}),
    json.dumps({"complex": {"vertices": 3, "facets": [[0, 1, 2]]}, "subdiv": -1}),
    json.dumps({"complex": {"vertices": 3, "facets": [[0, 1, 2]]}, "stab": {"base_cell": 99}}),
    json.dumps({"complex": {"vertices": 3, "facets": [[0, 1, 2]]}, "stab": []}),
])
def test_malformed_input_raises_input_error(text):
    with pytest.raises(InputError):
        GlobalQuotientOrbifold.from_json(text)


def test_stabilisation_base_needs_trivial_isotropy():
    with pytest.raises(InputError):
        GlobalQuotientOrbifold(octahedron(), FiniteGroup.generated_by([(1, 0, 3, 2, 4, 5)]), 0,
                               stab={"base_cell": 4})


def test_default_nested_copy_avoids_base_orbit():
    X = disk(1)
    assert X.stab.base_cell == 0
    assert 0 not in X.stab.nested_vertices
    assert len(X.stab.nested_vertices) == X.K.vertex_count - 1


def test_group_degree_must_match():
    with pytest.raises(InputError):
        GlobalQuotientOrbifold(triangle(), FiniteGroup.generated_by([(1, 0)]))
