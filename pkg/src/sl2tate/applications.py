"""Consequences of the component decomposition: module-freeness rank over
the Chern subring, detection verdicts for restriction to diagonal matrices,
restriction maps along field extensions with transfer obstructions, and the
classification of the colimit over all S."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .cohomology import total_dimensions
from .errors import EmbeddingInvalid, NeedsBackendData
from .ideals import find_root
from .numberfield import NumberField
from .polytools import cos_minpoly
from .relative import RelativeSetup, build_setup, norm_maps, \
    oriented_class_group
from .classify import element_class_count, subgroup_classes
from .sinvariants import PlaceSet


# ---------------------------------------------------------------------------
# freeness over the Chern subring


@dataclass(frozen=True)
class QuillenReport:
    n1: int  # abelian (non-invariant) subgroup classes
    n2: int  # dihedral (invariant) subgroup classes
    r: int  # free rank of ker Nm1
    rank_over_c2: int
    c2_image: str
    cross_checked: bool

    def describe(self) -> dict:
        return {"n1": self.n1, "n2": self.n2, "r": self.r,
                "rank_over_c2": self.rank_over_c2,
                "c2_image": self.c2_image,
                "cross_checked": self.cross_checked}


def quillen_report(classes, norms, ell: int) -> QuillenReport:
    """Rank of the cohomology as a free module over the degree-4 Laurent
    subring generated by the summed a2^2 classes: 2^(r+1) * (2 n1 + n2),
    cross-checked against the period-4 dimension sum."""
    if not classes:
        return QuillenReport(0, 0, 0, 0, "sum of a_G^2 across components", True)
    n1 = sum(1 for c in classes if not c.galois_invariant)
    n2 = sum(1 for c in classes if c.galois_invariant)
    r = norms.ker_nm1.free_rank
    rank = 2 ** (r + 1) * (2 * n1 + n2)
    dims = total_dimensions(classes, ell)
    checked = sum(dims.dim(d) for d in range(4)) == rank
    assert checked, "period-4 dimension sum must equal the freeness rank"
    return QuillenReport(n1, n2, r, rank,
                         "sum of a_G^2 across components", checked)


# ---------------------------------------------------------------------------
# detection by diagonal matrices


@dataclass(frozen=True)
class DetectionReport:
    verdict: str  # "NotInjective" | "Inconclusive"
    pic_order: Optional[int]
    source_components: Optional[int]
    target_components: int
    source_period_sum: Optional[int]
    target_period_sum: Optional[int]
    note: str

    def describe(self) -> dict:
        return {"verdict": self.verdict, "pic_order": self.pic_order,
                "source_components": self.source_components,
                "target_components": self.target_components,
                "source_period_sum": self.source_period_sum,
                "target_period_sum": self.target_period_sum,
                "note": self.note}


def detection_report(setup: RelativeSetup, classes) -> DetectionReport:
    """Restriction to the diagonal subgroup (normalizer of the torus) fails
    to be injective when Pic(O_{K,S}) has more than two elements: the source
    then has strictly more components than the single target component.  The
    criterion is sufficient only, so the other answer is Inconclusive."""
    if setup.case != "Split":
        return DetectionReport(
            "Inconclusive", None, None, 1, None, None,
            "criterion applies when the torsion ring splits (zeta_ell in K)")
    pic = element_class_count(classes)
    r = classes[0].normalizer.base.free_rank if classes else 0
    ell = setup.ell
    dims = total_dimensions(classes, ell)
    source_sum = sum(dims.dim(d) for d in range(4))
    target_sum = 2 ** (r + 1)  # one dihedral torus-normalizer component
    if pic > 2:
        note = (f"{len(classes)} source components map onto a single "
                "torus-normalizer component; ranks cannot match")
        return DetectionReport("NotInjective", pic, len(classes), 1,
                               source_sum, target_sum, note)
    return DetectionReport("Inconclusive", pic, len(classes), 1,
                           source_sum, target_sum,
                           "class group has at most 2 elements")


# ---------------------------------------------------------------------------
# restriction along an extension L/K


@dataclass(frozen=True)
class RestrictionReport:
    degree: int
    assignment: dict  # source element-class coords -> target class label
    merges: tuple  # groups of >= 2 source classes with equal target (C1)
    invariance_gains: tuple  # non-invariant source orbits turning invariant (C2)
    new_target_classes: tuple  # target classes hit by no source class (C3)
    conditional: bool  # true when target data is asserted/fixture-only
    notes: tuple = ()

    def describe(self) -> dict:
        return {
            "degree": self.degree,
            "assignment": {str(list(k)): str(v)
                           for k, v in sorted(self.assignment.items())},
            "merges": [[str(list(c)) for c in grp] for grp in self.merges],
            "invariance_gains": [[str(list(c)) for c in grp]
                                 for grp in self.invariance_gains],
            "new_target_classes": [str(v) for v in self.new_target_classes],
            "conditional": self.conditional,
            "notes": list(self.notes),
        }


def _finish_restriction(assignment, src_classes, tgt_invariant_labels,
                        tgt_all_labels, degree, conditional, notes):
    by_target: dict = {}
    for coords, label in assignment.items():
        by_target.setdefault(label, []).append(coords)
    merges = tuple(tuple(sorted(v)) for v in by_target.values() if len(v) > 1)
    gains = []
    for cls in src_classes:
        if cls.galois_invariant:
            continue
        labels = {assignment[c] for c in cls.orbit}
        if labels and labels <= set(tgt_invariant_labels):
            gains.append(cls.orbit)
    new_targets = tuple(l for l in tgt_all_labels if l not in by_target)
    return RestrictionReport(degree, assignment, tuple(sorted(merges)),
                             tuple(gains), new_targets, conditional,
                             tuple(notes))


def restriction_map(setup_k: RelativeSetup, field_l: NumberField,
                    places_l, gen_image, store=None) -> RestrictionReport:
    """Push the source element classes into SL_2 over the S-integers of L
    along a verified embedding K -> L.  The target classes are re-resolved
    over L; currently the pushforward is computed when the target oriented
    class group is trivial (every class lands on the unique target class) or
    when the extension is the identity."""
    K = setup_k.field
    # exact embedding check: min poly of K vanishes on the image
    acc, pw = field_l.zero(), field_l.one()
    for c in K.min_poly:
        acc = acc + pw * c
        pw = pw * gen_image
    if not acc.is_zero():
        raise EmbeddingInvalid(f"{K.label} generator image fails its minimal "
                               "polynomial")
    setup_l = build_setup(field_l, places_l, setup_k.ell)
    setup_l.require_regular()
    nm_k = norm_maps(setup_k, store=store)
    ocg_k = oriented_class_group(setup_k, nm_k)
    src_classes = subgroup_classes(ocg_k)
    nm_l = norm_maps(setup_l, store=store)
    ocg_l = oriented_class_group(setup_l, nm_l)
    tgt_classes = subgroup_classes(ocg_l)
    degree = field_l.degree // K.degree
    identity = (field_l.min_poly == K.min_poly
                and (gen_image - field_l.gen()).is_zero()
                and places_l.rational_primes == setup_k.places.rational_primes)
    if identity:
        assignment = {el.coords: str(list(el.coords)) for el in ocg_k.elements}
    elif ocg_l.order == 1:
        target = str(list(ocg_l.elements[0].coords))
        assignment = {el.coords: target for el in ocg_k.elements}
    else:
        raise NeedsBackendData(
            "general pushforward needs a trivial target class group or a "
            "capitulation fixture")
    inv_labels = [str(list(c)) for cls in tgt_classes if cls.galois_invariant
                  for c in cls.orbit]
    all_labels = [str(list(el.coords)) for el in ocg_l.elements]
    return _finish_restriction(assignment, src_classes, inv_labels,
                               all_labels, degree, False, ())


def restriction_scenario(doc: dict, store=None) -> RestrictionReport:
    """Fixture-driven restriction when the target field is out of reach
    (e.g. a Hilbert class field): the fixture supplies the relative degree
    and the capitulation of the source classes."""
    from .numberfield import make_field

    src = doc["source"]
    field_k = make_field(src["min_poly"], label=src.get("label"))
    places = PlaceSet.make(field_k, src.get("places", []))
    setup_k = build_setup(field_k, places, src["ell"])
    setup_k.require_regular()
    nm_k = norm_maps(setup_k, store=store)
    ocg_k = oriented_class_group(setup_k, nm_k)
    src_classes = subgroup_classes(ocg_k)
    tgt = doc["target"]
    degree = tgt["relative_degree"]
    notes = [f"target {tgt.get('label', '?')} ingested; embedding "
             f"{tgt.get('embedding', 'asserted')}"]
    if doc.get("capitulation") != "all":
        raise NeedsBackendData("scenario must state the capitulation map")
    if tgt.get("class_group", {}).get("invariant_factors"):
        raise NeedsBackendData("capitulation 'all' needs a trivial target "
                               "class group")
    # trivial target class group: a single invariant target class
    assignment = {el.coords: "0" for el in ocg_k.elements}
    return _finish_restriction(assignment, src_classes, ["0"], ["0"],
                               degree, True, notes)


def transfer_obstruction(report: RestrictionReport, ell: int):
    """A stable transfer would force restriction to be injective on the
    image when the degree is invertible mod ell; a merge of distinct classes
    with gcd(degree, ell) = 1 therefore witnesses that no transfers exist."""
    if gcd(report.degree, ell) != 1:
        return None
    for grp in report.merges:
        if len(grp) > 1:
            return {
                "merged_classes": [list(c) for c in grp],
                "merge_size": len(grp),
                "degree": report.degree,
                "ell": ell,
                "reason": (f"{len(grp)} distinct classes restrict to one "
                           f"component while multiplication by the degree "
                           f"{report.degree} is invertible mod {ell}"),
            }
    return None


# ---------------------------------------------------------------------------
# colimit over all S, torsion presence, vcd


@dataclass(frozen=True)
class ColimitDescriptor:
    case: str  # "Zero" | "ProductOverRelativeBrauer" | "NormalizerOfTorus"
    note: str


def torsion_presence(field: NumberField, ell: int) -> bool:
    """Whether SL_2 of some O_{K,S} contains an element of order ell:
    equivalent to 2cos(2pi/ell) lying in K."""
    t = find_root([field.rational(c) for c in cos_minpoly(ell)], field)
    return t is not None


def colimit_case(field: NumberField, ell: int) -> ColimitDescriptor:
    t = find_root([field.rational(c) for c in cos_minpoly(ell)], field)
    if t is None:
        return ColimitDescriptor(
            "Zero", "no order-ell torsion for any S: colimit vanishes")
    one = field.one()
    if find_root([one, -t, one], field) is not None:
        return ColimitDescriptor(
            "NormalizerOfTorus",
            "zeta_ell in K: colimit is the cohomology of the normalizer of "
            "a maximal torus")
    return ColimitDescriptor(
        "ProductOverRelativeBrauer",
        "field case: colimit is a product indexed by the kernel of the "
        "relative Brauer map for K(zeta_ell)/K")


def vcd(field: NumberField, places: PlaceSet) -> int:
    """Virtual cohomological dimension of SL_2(O_{K,S})."""
    r1, r2 = field.signature
    return 2 * r1 + 3 * r2 + places.n_finite - 1
