from itertools import product

import pytest

from orbiconf.comma import (ActionGroupoid, CommaCategory, ConfGroupoid, ForgetfulFunctor, SmallCategory,
                            comma_category, comma_report, conf_groupoid, skeleton, verify_comma_invariance)
from orbiconf.errors import CapacityError
from orbiconf.groups import FiniteGroup

Z2_FOUR = [(1, 0, 3, 2)]


def test_trivial_base_three_points():
    C = conf_groupoid(ActionGroupoid.trivial(3), 2)
    assert len(C.objects) == 6
    assert C.arrow_count() == 12
    x = (0, 1)
    assert C.hom(x, (1, 0)) == [(x, (1, 0), (0, 0))]
    assert C.check_axioms()


def test_single_orbit_has_no_configurations():
    C = conf_groupoid(ActionGroupoid.generated_by([(1, 0)], 2), 2)
    assert C.objects == []


def test_two_orbits_of_four_points():
    base = ActionGroupoid.generated_by(Z2_FOUR, 4)
    C = conf_groupoid(base, 2)
    # ordered pairs from different orbits
    assert len(C.objects) == 4 * 2
    assert C.check_axioms()
    assert C.arrow_count() == 8 * 2 * 4


def test_partitioned_groupoid_restricts_permutations():
    base = ActionGroupoid.trivial(4)
    assert len(ConfGroupoid(base, 3, 1).perms) == 2
    assert len(ConfGroupoid(base, 3).perms) == 6
    assert ConfGroupoid(base, 3, 1).check_axioms()


def test_capacity_guard():
    with pytest.raises(CapacityError):
        conf_groupoid(ActionGroupoid.trivial(6), 5, capacity=1000)


def test_transitive_arrow_count_relation():
    # arrows = |G|^n n! · objects for the full configuration groupoid
    base = ActionGroupoid.generated_by(Z2_FOUR, 4)
    C = conf_groupoid(base, 2)
    assert C.arrow_count() == 2 ** 2 * 2 * len(C.objects)


def test_comma_m_equals_n_is_a_point():
    p = ForgetfulFunctor.build(ActionGroupoid.trivial(3), 3, 3)
    sk = skeleton(comma_category(p, (0, 1, 2)))
    assert sk.size == 1 and sk.discrete


@pytest.mark.parametrize("n,m,expected", [(2, 1, 2), (3, 1, 3), (3, 2, 3), (4, 2, 6)])
def test_skeleton_sizes_are_binomial(n, m, expected):
    p = ForgetfulFunctor.build(ActionGroupoid.trivial(5), n, m)
    sk = skeleton(comma_category(p, tuple(range(n))))
    assert sk.size == expected and sk.discrete


def test_comma_morphisms_satisfy_the_defining_condition():
    base = ActionGroupoid.generated_by(Z2_FOUR, 4)
    p = ForgetfulFunctor.build(base, 2, 1)
    A = comma_category(p, (0, 2))
    assert A.check(full=True)
    moves = list(A.morphisms())
    assert all(A.is_morphism(a, h, b) for a, h, b in moves)


def test_discrete_category_skeleton_is_itself():
    sk = skeleton(SmallCategory.discrete(["a", "b", "c"]))
    assert sk.size == 3 and sk.discrete


def test_group_as_category_is_not_discrete():
    C = SmallCategory.from_group(FiniteGroup.generated_by([(1, 2, 0)]))
    assert C.is_groupoid
    sk = skeleton(C)
    assert sk.size == 1 and not sk.discrete


def test_invariance_for_identity_arrow():
    base = ActionGroupoid.trivial(3)
    p = ForgetfulFunctor.build(base, 2, 1)
    assert verify_comma_invariance(p, p.target.identity((0, 1)), full=True)


def test_invariance_for_every_arrow_trivial_base():
    base = ActionGroupoid.trivial(3)
    p = ForgetfulFunctor.build(base, 3, 1)
    D = p.target
    for x in D.objects:
        for b in D.arrows_from(x):
            assert verify_comma_invariance(p, b, full=True)


def test_invariance_for_mixed_arrows():
    base = ActionGroupoid.generated_by(Z2_FOUR, 4)
    p = ForgetfulFunctor.build(base, 2, 1)
    D = p.target
    for x in D.objects:
        for b in D.arrows_from(x):
            assert verify_comma_invariance(p, b, full=True)


def test_wrong_inverse_is_detected():
    # a point with Z/3 isotropy: b is an automorphism of order 3, so b is not its own inverse
    from orbiconf.comma import _invariance
    base = ActionGroupoid.generated_by([(1, 2, 0, 3)], 4)
    p = ForgetfulFunctor.build(base, 1, 0)
    D = p.target
    x = (3,)
    b = next(a for a in D.arrows_from(x) if a != D.identity(x))
    A = comma_category(p, x)
    assert _invariance(A, A, b, D.inverse(b), False)
    assert not _invariance(A, A, b, b, False)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_comma_report_trivial_six_points(n):
    base = ActionGroupoid.trivial(6)
    for m in range(n):
        assert comma_report(base, n, m)["pass"]


def test_comma_report_z2_three_orbits():
    base = ActionGroupoid.generated_by([(1, 0, 3, 2, 5, 4)], 6)
    for n, m in product(range(1, 4), range(3)):
        if m < n:
            r = comma_report(base, n, m)
            assert r["pass"] and r["skeleton_sizes"] == [__import__("math").comb(n, m)]
    assert comma_report(base, 4, 1)["objects"] == 0
