import pytest

from orbiconf.config import (Coefficients, DeletedProductComplex, chi_c_report, compact_support_pair,
                             complement_components, conf_homology, deleted_product, simplicial_deleted_product,
                             sort_blocks, stratum_model)
from orbiconf.errors import CapacityError, PreconditionError
from orbiconf.fixtures import antipodal_sphere, cone, disk, football, reflection_sphere, sphere
from orbiconf.groups import isotypic_chain_complex, wreath_character
from orbiconf.orbifold import orientation_character


@pytest.mark.parametrize("fixture,n,sign_power", [
    (football, 2, 0), (sphere, 2, 0), (antipodal_sphere, 2, 0), (antipodal_sphere, 2, 1), (football, 2, 1),
])
def test_cellular_model_matches_literal_simplicial_model(fixture, n, sign_power):
    X = fixture(0)
    D, action = simplicial_deleted_product(X, n)
    chi = wreath_character(action.group, lambda g: 1, sign_power)
    literal = isotypic_chain_complex(action, chi).homology().betti
    cellular = conf_homology(X, n, Coefficients("twist", sign_power)).betti
    assert cellular[:len(literal)] == literal
    assert not any(cellular[len(literal):])


def test_disk_betti_numbers():
    X = disk(1)
    assert conf_homology(X, 1).betti == (1, 0, 0)
    assert conf_homology(X, 2).betti[:2] == (1, 1)
    assert conf_homology(X, 3, max_degree=1).betti == (1, 1)


def test_ordered_disk_pair_is_a_circle():
    assert deleted_product(disk(1), 2, ordered=True).homology().betti == (1, 1, 0, 0, 0)


def test_sphere_two_points():
    assert conf_homology(sphere(0), 2).betti == (1, 0, 0, 0, 0)


def test_isotypic_parts_sum_to_ordered_homology():
    X = sphere(0)
    triv = conf_homology(X, 2).betti
    sign = conf_homology(X, 2, "character:sign").betti
    ordered = deleted_product(X, 2, ordered=True).homology().betti
    assert tuple(a + b for a, b in zip(triv, sign)) == ordered
    assert ordered == (1, 0, 1, 0, 0)


def test_football_single_point():
    assert conf_homology(football(0), 1).betti == (1, 0, 1)


def test_cone_low_degrees():
    X = cone(3, 2)
    assert [conf_homology(X, n, max_degree=1).betti for n in (1, 2, 3)] == [(1, 0), (1, 1), (1, 1)]


def test_integral_needs_free_action():
    with pytest.raises(PreconditionError):
        conf_homology(football(0), 1, "integral")


def test_integral_one_point_antipodal():
    rep = conf_homology(antipodal_sphere(1), 1, "integral")
    assert rep.betti == (1, 0, 0) and rep.torsion == ((), (2,), ())


def test_unknown_coefficients():
    with pytest.raises(PreconditionError):
        Coefficients.parse("character:nope", sphere(0))


def test_capacity_guard():
    with pytest.raises(CapacityError):
        DeletedProductComplex(sphere(1), 2, capacity=50)


def test_block_sizes_must_add_up():
    with pytest.raises(PreconditionError):
        DeletedProductComplex(disk(1), 3, blocks=(1, 1))


def test_sort_blocks_koszul_sign():
    dims = [0, 1, 1, 2]
    # swapping two 1-dimensional cells costs a sign
    assert sort_blocks((2, 1), dims, (2,), 0) == (-1, (1, 2))
    assert sort_blocks((1, 0), dims, (2,), 0) == (1, (0, 1))
    # the sign character adds sign(σ)
    assert sort_blocks((1, 0), dims, (2,), 1) == (-1, (0, 1))
    # separate blocks are sorted independently
    assert sort_blocks((1, 0, 3, 2), dims, (2, 2), 0)[1] == (0, 1, 2, 3)


def test_threads_give_identical_results(monkeypatch):
    base = conf_homology(disk(1), 2)
    monkeypatch.setenv("ORBICONF_THREADS", "2")
    assert conf_homology(disk(1), 2) == base


def test_football_strata():
    X = football(0)
    assert stratum_model(X, 1, 1).homology().betti == (2,)
    assert stratum_model(X, 2, 2).homology().betti == (1,)
    assert stratum_model(X, 1, 0).homology().betti[0] == 1


def test_strata_need_a_singular_locus():
    with pytest.raises(PreconditionError):
        stratum_model(sphere(0), 2, 1)


def test_reflection_components():
    X = reflection_sphere(1)
    comps = complement_components(X)
    assert len(comps) == 2
    free = stratum_model(X, 1, 0, component=0).homology().betti
    assert free[0] == 1 and not any(free[1:])
    with pytest.raises(PreconditionError):
        stratum_model(X, 1, 0, component=5)


def test_chi_c_football():
    r1 = chi_c_report(football(0), 1)
    assert r1["total"] == 2 and r1["additive"]
    r2 = chi_c_report(football(0), 2)
    assert r2["total"] == 1 and r2["sum"] == 1 and r2["additive"]


def test_compact_support_models_agree():
    X = sphere(0)
    om = orientation_character(X, 2)
    a = compact_support_pair(X, 2, "diagonal").relative_cohomology(om).betti
    b = compact_support_pair(X, 2, "bad").relative_cohomology(om).betti
    assert a == b == (0, 0, 0, 0, 1)


def test_compact_support_needs_closed_model():
    with pytest.raises(PreconditionError):
        compact_support_pair(disk(1), 1)
