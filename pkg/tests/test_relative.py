import pytest

from sl2tate.errors import RegularityViolated
from sl2tate.numberfield import cyclotomic_field, make_field, quadratic_field
from sl2tate.relative import (
    build_setup,
    galois_involution,
    inert_place_count,
    norm_maps,
    oriented_class_group,
    relative_ideal_norm,
    relative_unit_group,
)
from sl2tate.sinvariants import PlaceSet


def _setup(field, primes, ell):
    return build_setup(field, PlaceSet.make(field, primes), ell)


def test_rational_ell3_field_case():
    q = make_field([0, 1])
    s = _setup(q, [], 3)
    assert s.case == "Field" and s.regularity == "R1"
    assert s.t.is_rational_value() == -1
    assert s.rel_field.degree == 2
    # sigma really inverts zeta
    z = s.zeta
    assert (s.sigma.map(z) * z - s.rel_field.one()).is_zero()


def test_rational_ell5_no_torsion():
    q = make_field([0, 1])
    s = _setup(q, [], 5)
    assert s.case == "NoTorsion"


def test_real_quadratic_sqrt3_violates_regularity():
    k = quadratic_field(3)
    s = _setup(k, [], 3)
    assert s.case == "Field" and s.regularity == "Violated"
    assert s.violation_prime == 3
    with pytest.raises(RegularityViolated):
        norm_maps(s)


def test_cyclotomic5_split_case():
    k = cyclotomic_field(5)
    s = _setup(k, [5], 5)
    assert s.case == "Split" and s.regularity == "R2"
    z = s.psi_root
    assert (z**5 - k.one()).is_zero() and not (z - k.one()).is_zero()
    # without inverting 5 the split case is irregular
    s2 = _setup(k, [], 5)
    assert s2.regularity == "Violated"


def test_sqrt5_ell5_field_case_in_cyclotomic():
    # 2cos(2pi/5) lives in Q(sqrt5); 5 ramifies with e = 2 = (5-1)/2, so
    # the setup is regular, with L = Q(zeta_5)
    k = quadratic_field(5)
    s = _setup(k, [], 5)
    assert s.case == "Field" and s.regularity == "R1"
    assert s.rel_field.degree == 4
    assert s.rel_field.root_of_unity_order == 5


def test_imaginary_quadratic_ell3_setup():
    k = quadratic_field(-2)
    s = _setup(k, [], 3)
    assert s.case == "Field" and s.regularity == "R1"
    assert s.rel_field.degree == 4
    assert (s.sigma.map(s.zeta) + s.zeta - s.embed.map(s.t)).is_zero()
    # sigma fixes K
    w = s.embed.map(k.gen())
    assert (s.sigma.map(w) - w).is_zero()


def test_norm_maps_rational_ell3():
    q = make_field([0, 1])
    s = _setup(q, [], 3)
    nm = norm_maps(s)
    # R^x = mu_6, all norms are 1: kernel Z/6, cokernel {+-1} = Z/2
    assert nm.ker_nm1.free_rank == 0
    assert nm.ker_nm1.torsion.invariant_factors == (6,)
    assert nm.coker_nm1_group.invariant_factors == (2,)
    assert nm.ker_nm0.invariant_factors == ()
    assert inert_place_count(s) == 1  # the real place becomes complex


def test_relative_units_quartic_cm():
    k = quadratic_field(-2)
    s = _setup(k, [], 3)
    u = relative_unit_group(s)
    assert u.rank == 1 and u.torsion_order == 6
    eta = u.free_gens[0]
    assert abs(eta.norm()) == 1
    # eta is primitive: neither eta nor any torsion multiple is a square
    from sl2tate.ideals import sqrt_in_field

    t = s.rel_field.one()
    for _ in range(6):
        assert sqrt_in_field(t * eta) is None
        t = t * u.torsion_gen


def test_relative_units_gaussian_ell3():
    # Q(i, zeta_3) = Q(zeta_12) has torsion of order 12
    k = quadratic_field(-1)
    s = _setup(k, [], 3)
    u = relative_unit_group(s)
    assert u.torsion_order == 12 and u.rank == 1


def test_norm_maps_imaginary_quadratic_ell3():
    k = quadratic_field(-2)
    s = _setup(k, [], 3)
    nm = norm_maps(s)
    assert nm.coker_nm1_group.is_elementary_2()
    # every unit of Q(sqrt(-2), zeta_3) has relative norm 1
    assert nm.coker_nm1_group.invariant_factors == (2,)
    # kernel = full unit group Z/6 x Z
    assert nm.ker_nm1.free_rank == 1
    assert nm.ker_nm1.torsion.invariant_factors == (6,)
    assert nm.ker_nm0.invariant_factors == ()


def test_oriented_class_group_rational():
    q = make_field([0, 1])
    s = _setup(q, [], 3)
    nm = norm_maps(s)
    ocg = oriented_class_group(s, nm)
    assert ocg.order == 2
    inv = galois_involution(ocg)
    # the involution swaps the two orientation classes
    a, b = sorted(inv)
    assert inv[a] == b and inv[b] == a


def test_oriented_class_group_sqrt_minus_2():
    k = quadratic_field(-2)
    s = _setup(k, [], 3)
    nm = norm_maps(s)
    ocg = oriented_class_group(s, nm)
    assert ocg.order == nm.coker_nm1_group.order * nm.ker_nm0.order
    inv = galois_involution(ocg)
    assert all(inv[inv[c]] == c for c in inv)


def test_split_norm_maps_and_ocg():
    k = cyclotomic_field(5)
    s = _setup(k, [5], 5)
    nm = norm_maps(s)
    assert nm.coker_nm1_group.is_trivial
    # ker Nm1 = S-unit group of K: rank r1+r2-1+#S_f = 0+2-1+1 = 2
    assert nm.ker_nm1.free_rank == 2
    assert nm.ker_nm1.torsion.invariant_factors == (10,)
    ocg = oriented_class_group(s, nm)
    assert ocg.order == 1  # Pic of Q(zeta_5) with 5 inverted is trivial
    inv = galois_involution(ocg)
    assert list(inv.values()) == [next(iter(inv))]


def test_relative_ideal_norm_principal():
    # N(alpha R) = (N(alpha)): check on a principal ideal of Q(zeta_3)/Q
    from sl2tate.ideals import FractionalIdeal

    q = make_field([0, 1])
    s = _setup(q, [], 3)
    L = s.rel_field
    alpha = L.one() - L.gen()  # 1 - zeta_3, norm 3
    ideal = FractionalIdeal.principal(L, alpha)
    nm = relative_ideal_norm(s, ideal)
    assert nm == FractionalIdeal.principal(q, q.rational(3))


def test_s_unit_norm_maps_rational():
    # Q with S = {2, 3}: 2 is inert, 3 ramifies; cokernel gains the class
    # of 2 next to -1
    q = make_field([0, 1])
    s = _setup(q, [2, 3], 3)
    nm = norm_maps(s)
    assert nm.coker_nm1_group.invariant_factors == (2, 2)
    assert inert_place_count(s) == 2  # real place + the prime 2
    # norms of the S-unit generators (4 and 3) are independent, so the
    # norm-one subgroup is just the torsion
    assert nm.ker_nm1.free_rank == 0
    assert nm.ker_nm1.torsion.invariant_factors == (6,)
