"""End-to-end acceptance checks with runtime budgets."""
import json
import os
import time

import pytest

from sl2tate.applications import (
    detection_report,
    quillen_report,
    restriction_scenario,
    transfer_obstruction,
    vcd,
)
from sl2tate.classify import (
    element_class_count,
    representative_matrix,
    subgroup_classes,
)
from sl2tate.cohomology import (
    component_ring,
    oracle_dihedral_invariants,
    oracle_product,
    total_dimensions,
)
from sl2tate.numberfield import cyclotomic_field, make_field, quadratic_field
from sl2tate.relative import build_setup, norm_maps, oriented_class_group
from sl2tate.sinvariants import (
    BackendStore,
    PlaceSet,
    class_group,
    forms_class_group_oracle,
    ingest_backend,
)

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "src", "sl2tate",
                        "fixtures")


def _fixture_store(*names):
    store = BackendStore()
    docs = []
    for name in names:
        with open(os.path.join(FIXTURES, name)) as f:
            doc = json.load(f)
        ingest_backend(store, doc)
        docs.append(doc)
    return store, docs


def _pipeline(field, primes, ell, store=None):
    setup = build_setup(field, PlaceSet.make(field, primes), ell)
    nm = norm_maps(setup, store=store)
    ocg = oriented_class_group(setup, nm)
    return setup, nm, ocg, subgroup_classes(ocg)


def test_criterion_1_sl2z_ell3():
    t0 = time.monotonic()
    q = make_field([0, 1])
    setup, nm, ocg, classes = _pipeline(q, [], 3)
    assert element_class_count(classes) == 2
    assert len(classes) == 1
    cls = classes[0]
    assert not cls.galois_invariant
    assert cls.normalizer.base.free_rank == 0
    assert cls.normalizer.base.torsion.invariant_factors == (6,)
    dims = total_dimensions(classes, 3)
    assert all(dims.dim(d) == 1 for d in range(-8, 9))
    assert quillen_report(classes, nm, 3).rank_over_c2 == 4
    m = representative_matrix(ocg.element((0,)), setup)
    (a, b), (c, d) = m.rows
    assert [x.is_rational_value() for x in (a, b, c, d)] == [0, -1, 1, -1]
    assert time.monotonic() - t0 < 1.0


def test_criterion_2_sl2z_ell5_no_torsion():
    t0 = time.monotonic()
    q = make_field([0, 1])
    setup = build_setup(q, PlaceSet.make(q), 5)
    assert setup.case == "NoTorsion"
    dims = total_dimensions([], 5)
    assert all(dims.dim(d) == 0 for d in range(-8, 9))
    assert time.monotonic() - t0 < 1.0


def test_criterion_3_q23_fixture():
    t0 = time.monotonic()
    store, _ = _fixture_store("q23.json")
    k = cyclotomic_field(23)
    setup, nm, ocg, classes = _pipeline(k, [23], 23, store=store)
    assert len(classes) == 2
    inv = [c for c in classes if c.galois_invariant]
    pair = [c for c in classes if not c.galois_invariant]
    assert len(inv) == 1 and inv[0].normalizer.kind == "Dihedral"
    assert len(pair) == 1 and pair[0].normalizer.kind == "Abelian"
    rep = quillen_report(classes, nm, 23)
    assert rep.r == 11
    assert rep.rank_over_c2 == 12288
    det = detection_report(setup, classes)
    assert det.verdict == "NotInjective"
    assert det.source_period_sum > det.target_period_sum
    assert time.monotonic() - t0 < 5.0


def test_criterion_4_transfer_obstruction():
    t0 = time.monotonic()
    store, docs = _fixture_store("q23.json", "q23_hilbert.json")
    scenario = next(d for d in docs if d["kind"] == "restriction-scenario")
    rep = restriction_scenario(scenario, store=store)
    assert rep.degree == 3
    assert any(len(grp) > 1 for grp in rep.merges)
    wit = transfer_obstruction(rep, 23)
    assert wit is not None and wit["merge_size"] == 3
    assert time.monotonic() - t0 < 5.0


def test_criterion_5_oracle_equivalence():
    from sl2tate.classify import NormalizerDescriptor
    from sl2tate.intlinalg import FinGenAbGroup, FiniteAbelianGroup

    t0 = time.monotonic()
    for ell in (3, 5):
        for n in (3, 5, 6, 15):
            for r in range(5):
                desc = component_ring(NormalizerDescriptor(
                    "Abelian", FinGenAbGroup(r, FiniteAbelianGroup((n,)))),
                    ell)
                for d in range(-12, 13):
                    assert desc.dim(d) == oracle_product(n, r, ell, d)
    for ell in (3, 5):
        for r in range(5):
            desc = component_ring(NormalizerDescriptor(
                "Dihedral", FinGenAbGroup(r, FiniteAbelianGroup((2 * ell,)))),
                ell)
            for d in range(-12, 13):
                assert desc.dim(d) == oracle_dihedral_invariants(r, ell, d)
            assert sum(desc.dim(d) for d in range(4)) == 2 ** (r + 1)
            ab = component_ring(NormalizerDescriptor(
                "Abelian", FinGenAbGroup(r, FiniteAbelianGroup((2 * ell,)))),
                ell)
            assert sum(ab.dim(d) for d in range(4)) == 2 ** (r + 2)
    d0 = component_ring(NormalizerDescriptor(
        "Dihedral", FinGenAbGroup(0, FiniteAbelianGroup((6,)))), 3)
    assert d0.dims_over_period() == (1, 0, 0, 1)
    assert time.monotonic() - t0 < 30.0


def test_criterion_6_forms_oracle_sweep():
    import sympy

    t0 = time.monotonic()
    checked = 0
    for m in range(-1, -200, -1):
        if any(e > 1 for e in sympy.factorint(-m).values()):
            continue
        k = quadratic_field(m)
        if abs(k.discriminant) > 200:
            continue
        cl = class_group(k, PlaceSet.make(k))
        assert cl.group == forms_class_group_oracle(k.discriminant), m
        checked += 1
    assert checked >= 60
    assert time.monotonic() - t0 < 120.0


SWEEP_FIELDS = (-1, -2, -5, -7, -10, -11, -13, -14, -17, -19)


def test_criterion_7_imaginary_quadratic_sweep():
    t0 = time.monotonic()
    for d in SWEEP_FIELDS:
        k = quadratic_field(d)
        setup, nm, ocg, classes = _pipeline(k, [], 3)
        assert setup.regularity == "R1"
        # both factors computed independently of the orbit structure
        assert ocg.order == nm.coker_nm1_group.order * nm.ker_nm0.order
        n_inv = sum(1 for c in classes if c.galois_invariant)
        n_pair = sum(1 for c in classes if not c.galois_invariant)
        assert element_class_count(classes) == n_inv + 2 * n_pair == ocg.order
        assert nm.coker_nm1_group.is_elementary_2()
    assert time.monotonic() - t0 < 300.0


def test_criterion_8_vcd_spot_checks():
    t0 = time.monotonic()
    q = make_field([0, 1])
    assert vcd(q, PlaceSet.make(q)) == 1
    k = quadratic_field(-5)
    assert vcd(k, PlaceSet.make(k)) == 2
    assert vcd(q, PlaceSet.make(q, [2, 3])) == 3
    assert time.monotonic() - t0 < 1.0
