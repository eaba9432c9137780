import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbiconf.fixtures import octahedron, projective_plane, tetrahedron_boundary, triangle
from orbiconf.simplicial import (Poset, SimplicialComplex, SimplicialMap, barycentric_subdivide, carrier_dimensions,
                                 face_poset, full_subcomplex, homology, order_complex, permutation_sign,
                                 product_complex, staircase_product, subcomplex_on, subdivide)


@st.composite
def complexes(draw, max_vertices=6, max_facets=5):
    n = draw(st.integers(1, max_vertices))
    facets = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=4, unique=True),
                           max_size=max_facets))
    return SimplicialComplex(n, facets)


def test_f_vector_and_facets():
    K = SimplicialComplex(4, [[0, 1, 2], [2, 3]])
    assert K.f_vector == (4, 4, 1)
    assert sorted(K.facets) == [(0, 1, 2), (2, 3)]
    assert (0, 2) in K and (0, 3) not in K


def test_isolated_vertices_are_simplices():
    K = SimplicialComplex(3, [[0, 1]])
    assert K.simplices(0) == [(0,), (1,), (2,)]
    assert homology(K).betti == (2, 0)


def test_bad_facets_rejected():
    with pytest.raises(ValueError):
        SimplicialComplex(2, [[0, 5]])
    with pytest.raises(ValueError):
        SimplicialComplex(3, [[0, 0, 1]])


def test_json_round_trip_and_validation():
    K = octahedron()
    assert SimplicialComplex.from_json(json.dumps(K.to_json())) == K
    for bad in ({"facets": []}, {"vertices": "3", "facets": []}, {"vertices": 3, "facets": [[0, "a"]]},
                {"vertices": 3, "facets": 7}):
        with pytest.raises(ValueError):
            SimplicialComplex.from_json(bad)


def test_subdivided_tetrahedron_boundary():
    S = barycentric_subdivide(tetrahedron_boundary())
    assert S.f_vector == (14, 36, 24)
    assert homology(S).betti == (1, 0, 1)


def test_known_homology():
    assert homology(octahedron()).betti == (1, 0, 1)
    rp2 = homology(projective_plane(), "integral")
    assert rp2.betti == (1, 0, 0)
    assert rp2.torsion == ((), (2,), ())
    assert homology(triangle()).betti == (1, 0, 0)


def test_product_of_spheres():
    P = product_complex(tetrahedron_boundary(), 2)
    assert homology(P).betti == (1, 0, 2, 0, 1)


def test_relative_homology_of_disk_rel_boundary():
    D = triangle()
    bd = subcomplex_on(D, [(0, 1), (1, 2), (0, 2)])
    assert homology(D, sub=bd).betti == (0, 0, 1)


def test_order_complex_of_face_poset_is_subdivision():
    K = SimplicialComplex(4, [[0, 1, 2], [1, 3]])
    assert order_complex(face_poset(K)).f_vector == barycentric_subdivide(K).f_vector


def test_poset_linear_extension_respects_order():
    P = Poset(4, [(0, 1), (1, 2), (0, 3)])
    ext = P.linear_extension()
    pos = {v: i for i, v in enumerate(ext)}
    assert pos[0] < pos[1] < pos[2] and pos[0] < pos[3]


def test_subdivision_labels_and_carriers():
    K = triangle()
    S = subdivide(K, 1)
    assert S.vertex_count == 7
    assert sorted(carrier_dimensions(S)) == [0, 0, 0, 1, 1, 1, 2]
    assert subdivide(K, 0) == K


def test_staircase_with_carrier_rank_matches_cell_product():
    K = triangle()
    Sd = barycentric_subdivide(K)
    St = staircase_product(Sd, 2, carrier_dimensions(Sd))
    assert St.f_vector == product_complex(K, 2).f_vector
    assert homology(St).betti == (1, 0, 0, 0, 0)


def test_full_subcomplex_keeps_parent_ids():
    K = octahedron()
    F = full_subcomplex(K, [0, 2, 4, 5])
    assert F.parent_vertices == (0, 2, 4, 5)
    assert F.f_vector == (4, 5, 2)


def test_simplicial_map_chain_level():
    K = triangle()
    f = SimplicialMap(K, K, [1, 2, 0])
    g = f.compose(f).compose(f)
    assert g.vertex_map == (0, 1, 2)
    collapse = SimplicialMap(K, SimplicialComplex(3, [[0, 1]]), [0, 1, 1])
    assert collapse.image((0, 1, 2)) == (0, None)
    # edges (0,1), (0,2) land on (0,1); (1,2) collapses
    assert collapse.chain_matrix(1).to_dense() == [[1, 1, 0]]


def test_permutation_sign():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([2, 0, 1]) == 1


@given(complexes())
def test_boundary_squares_to_zero(K):
    assert K.chain_complex().check()


@given(complexes(max_vertices=5, max_facets=4))
def test_subdivision_preserves_homology(K):
    assert homology(barycentric_subdivide(K)).betti == homology(K).betti


@given(complexes(max_vertices=4, max_facets=3))
def test_euler_characteristic_of_products(K):
    assert product_complex(K, 2).euler_characteristic() == K.euler_characteristic() ** 2


@given(complexes())
def test_euler_characteristic_matches_betti(K):
    assert homology(K).euler == K.euler_characteristic()
