"""Certificate pipeline deciding whether a surface of genus sigma can be
G-weakly exclusive for some finite group G.

If S_sigma were G-weakly exclusive, G would act faithfully on it and contain
a copy of every finite group acting on it: C_(sigma-1), C_sigma and the
Accola-Maclachlan group H_sigma at least. Each step below turns that into
arithmetic on |G| or into a refutation of every candidate G, and records its
numbers in a certificate that ``verify_verdict`` recomputes from scratch.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Annotated, Dict, List, Literal, Optional, Sequence, Set, Tuple, Union

from pydantic import BaseModel, Field

from catalog import (
    Catalog,
    GroupEntry,
    InvalidParameterError,
    accola_maclachlan,
    cyclic,
    resolve_group_spec,
    sl2,
    sl2_matrix_to_permutation,
    symmetric,
)
from config import RunConfig
from permcore import (
    EmbeddingResult,
    PermGroup,
    compose,
    element_of_order,
    find_monomorphism,
    has_klein_four,
    klein_four_witness,
    parse_permutation,
)
from riemann_hurwitz import (
    ActionRecord,
    GeneratingVector,
    Signature,
    acts_on,
    accola_maclachlan_record,
    canonical_actions,
    enumerate_signatures,
    parse_declared_signature,
    require_genus,
    rh_measure,
    verify_record,
    verify_vector,
)

logger = logging.getLogger(__name__)

Verdict = Literal["contradiction", "inconclusive"]

# Constants printed with arithmetic slips in the literature, keyed by genus:
# (expression, recomputed value, printed value).
PRINTED_CONSTANTS: Dict[int, List[Tuple[str, int, int]]] = {
    4: [("84*3", 84 * 3, 254), ("48*3", 48 * 3, 154)],
}

SYM5_ASSUMPTION = "a group of order 120 acting on genus 4 is Sym(5) (asserted in the literature, not verified here)"


def hurwitz_bound(sigma: int) -> int:
    require_genus(sigma)
    return 84 * (sigma - 1)


def fallback_bound(sigma: int) -> int:
    """Largest possible order when the Hurwitz bound is not attained."""
    require_genus(sigma)
    return 48 * (sigma - 1)


def accola_maclachlan_bound(sigma: int) -> int:
    require_genus(sigma)
    return 8 * (sigma + 1)


# Minimal measures ------------------------------------------------------------

_TRIANGLE_CEILING = Fraction(1, 6)


def _small_triangle_measures(max_period: int) -> List[Tuple[Fraction, Signature]]:
    """Positive measures below 1/6 of triangle signatures (0;a,b,c), c <= max_period."""
    out = []
    for a in range(2, 4):
        for b in range(a, max_period + 1):
            if Fraction(1, a) + Fraction(2, b) <= 1 - _TRIANGLE_CEILING:
                break
            for c in range(b, max_period + 1):
                s = Signature(orbit_genus=0, periods=(a, b, c))
                mu = rh_measure(s)
                if mu >= _TRIANGLE_CEILING:
                    break
                if mu > 0:
                    out.append((mu, s))
    return sorted(out, key=lambda t: (t[0], t[1].periods))


def minimal_positive_measures(k: int, max_period: int = 84) -> List[Tuple[Fraction, Signature]]:
    """The k smallest positive measures with their signatures, exhaustively.

    Completeness: a signature with rho >= 1 or r >= 4 has measure 0 or at
    least 1/6, so everything below 1/6 is a triangle (0;a,b,c) with a <= 3
    and b <= 5. The measures 1/6 - 1/c accumulate at 1/6, so the k-th smallest
    value t is below 1/6, and every triangle of measure <= t has
    1 - 1/a - 1/b >= 1/6 and therefore c <= 1/(1/6 - t). The scan bound is
    doubled until it reaches that value.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if max_period < 2:
        raise ValueError(f"max_period must be at least 2, got {max_period}")
    bound = max_period
    while True:
        found = _small_triangle_measures(bound)
        if len(found) >= k:
            t = found[k - 1][0]
            if bound >= 1 / (_TRIANGLE_CEILING - t):
                return found[:k]
        bound *= 2


def measure_bound(sigma: int, measure: Fraction) -> int:
    """|G| <= (2 sigma - 2) / measure."""
    bound = (2 * sigma - 2) / measure
    return bound.numerator // bound.denominator


# Certificates ----------------------------------------------------------------


class LcmCertificate(BaseModel):
    kind: Literal["lcm"] = "lcm"
    genus: int
    orders: List[int]
    lcm: int
    bound: int
    verdict: Verdict


class GenericCutoffCertificate(BaseModel):
    """lcm >= (sigma-1)sigma(sigma+1)/2 > 84(sigma-1) once sigma >= 13."""

    kind: Literal["generic_cutoff"] = "generic_cutoff"
    genus: int
    lcm: int
    product_lower_bound: int
    bound: int
    verdict: Verdict


class InventoryLcmCertificate(BaseModel):
    kind: Literal["inventory_lcm"] = "inventory_lcm"
    genus: int
    witnesses: List[ActionRecord]
    lcm: int
    bound: int
    verdict: Verdict


class SylowCertificate(BaseModel):
    """A cyclic witness fills the 2-part of the lcm while another witness holds a
    Klein four-group, so the Sylow 2-subgroup of G is at least twice as big."""

    kind: Literal["sylow"] = "sylow"
    genus: int
    lcm: int
    two_part: int
    cyclic_witness: str
    cyclic_element_order: int
    klein_witness: str
    klein_degree: int
    klein_generators: List[str]
    sylow_lower_bound: int
    minimum_order: int
    bound: int
    verdict: Verdict


class OrderCandidatesCertificate(BaseModel):
    kind: Literal["order_candidates"] = "order_candidates"
    genus: int
    lcm: int
    bound: int
    fallback_bound: int
    multiples: List[int]
    realizable: List[int]
    signatures: Dict[str, List[str]]
    verdict: Verdict


class CandidateCheck(BaseModel):
    group: str
    order: int
    failed_embedding: Optional[str] = None
    embedding_method: Optional[str] = None
    acts: Literal["found", "absent", "inconclusive", "skipped"] = "skipped"
    refuted: bool


class EmbeddingCertificate(BaseModel):
    kind: Literal["embedding"] = "embedding"
    genus: int
    order: int
    source: str
    candidates: List[CandidateCheck]
    verdict: Verdict


class PublishedWitnessCertificate(BaseModel):
    """Audit of a published generating vector; informational only."""

    kind: Literal["published_witness"] = "published_witness"
    genus: int
    group: str
    group_order: int
    declared_signature: str
    measured_orders: List[int]
    measured_signature: str
    implied_genus: Optional[int]
    vector_verdict: str


Certificate = Annotated[
    Union[
        LcmCertificate,
        GenericCutoffCertificate,
        InventoryLcmCertificate,
        SylowCertificate,
        OrderCandidatesCertificate,
        EmbeddingCertificate,
        PublishedWitnessCertificate,
    ],
    Field(discriminator="kind"),
]


class ExclusivityVerdict(BaseModel):
    genus: int
    result: Literal["impossible", "inconclusive"]
    certificates: List[Certificate]
    missing_inputs: List[str] = Field(default_factory=list)
    assumptions: List[str] = Field(default_factory=list)
    coverage: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @property
    def summary(self) -> str:
        chain = " -> ".join(c.kind for c in self.certificates)
        return f"genus {self.genus}: {self.result} ({chain})"


def _verdict(contradiction: bool) -> Verdict:
    return "contradiction" if contradiction else "inconclusive"


def lcm_certificate(sigma: int) -> LcmCertificate:
    orders = [sigma - 1, sigma, accola_maclachlan_bound(sigma)]
    value = lcm(*orders)
    bound = hurwitz_bound(sigma)
    return LcmCertificate(genus=sigma, orders=orders, lcm=value, bound=bound, verdict=_verdict(value > bound))


def generic_cutoff_certificate(sigma: int) -> GenericCutoffCertificate:
    value = lcm(sigma - 1, sigma, accola_maclachlan_bound(sigma))
    product_bound = (sigma - 1) * sigma * (sigma + 1) // 2
    if value < product_bound:
        raise AssertionError(f"lcm {value} below (s-1)s(s+1)/2 = {product_bound} at genus {sigma}")
    bound = hurwitz_bound(sigma)
    return GenericCutoffCertificate(
        genus=sigma,
        lcm=value,
        product_lower_bound=product_bound,
        bound=bound,
        verdict=_verdict(product_bound > bound),
    )


def inventory_lcm_certificate(sigma: int, witnesses: Sequence[ActionRecord]) -> InventoryLcmCertificate:
    value = reduce(lcm, (w.group_order for w in witnesses), 1)
    bound = hurwitz_bound(sigma)
    return InventoryLcmCertificate(
        genus=sigma, witnesses=list(witnesses), lcm=value, bound=bound, verdict=_verdict(value > bound)
    )


@dataclass(frozen=True)
class Witness:
    """A group known to act on S_sigma, with its certified action."""

    entry: GroupEntry
    record: ActionRecord


def _two_part(n: int) -> int:
    return n & -n


def _klein_generators(entry: GroupEntry) -> Optional[Tuple]:
    named = entry.named
    if "xy" in named and "x^-1y" in named:
        K = entry.group.subgroup([named["xy"], named["x^-1y"]])
        if K.order == 4 and has_klein_four(K):
            return named["xy"], named["x^-1y"]
    return klein_four_witness(entry.group)


def sylow_certificate(sigma: int, inventory: Sequence[Witness]) -> Optional[SylowCertificate]:
    """None when no witness pair makes the Sylow argument apply."""
    value = reduce(lcm, (w.entry.order for w in inventory), 1)
    two = _two_part(value)
    if two == 1:
        return None
    cyclic_witness = next((w for w in inventory if element_of_order(w.entry.group, two) is not None), None)
    klein = None
    for w in inventory:
        pair = _klein_generators(w.entry)
        if pair is not None:
            klein = (w, pair)
            break
    if cyclic_witness is None or klein is None:
        return None
    w, pair = klein
    minimum = value * 2
    bound = hurwitz_bound(sigma)
    return SylowCertificate(
        genus=sigma,
        lcm=value,
        two_part=two,
        cyclic_witness=cyclic_witness.entry.id,
        cyclic_element_order=two,
        klein_witness=w.entry.id,
        klein_degree=w.entry.group.degree,
        klein_generators=[str(p) for p in pair],
        sylow_lower_bound=2 * two,
        minimum_order=minimum,
        bound=bound,
        verdict=_verdict(minimum > bound),
    )


def base_inventory(sigma: int, coset_budget: Optional[int] = None) -> List[Witness]:
    """C_(sigma-1), C_sigma and H_sigma with their constructed actions."""
    records = canonical_actions(sigma)
    witnesses = [Witness(cyclic(sigma - 1), records[0]), Witness(cyclic(sigma), records[1])]
    h = accola_maclachlan(sigma, coset_budget)
    witnesses.append(Witness(h, accola_maclachlan_record(sigma, h.group, h.named["x"], h.named["y"])))
    return witnesses


def sylow_refutation_sigma8(inventory: Optional[Sequence[Witness]] = None) -> Optional[SylowCertificate]:
    if inventory is None:
        inventory = base_inventory(8)
    return sylow_certificate(8, inventory)


def order_candidates_certificate(sigma: int, value: int) -> OrderCandidatesCertificate:
    """Multiples of the inventory lcm up to the Hurwitz bound that admit a signature."""
    bound = hurwitz_bound(sigma)
    multiples = list(range(value, bound + 1, value))
    signatures = {}
    for n in multiples:
        found = enumerate_signatures(sigma, n)
        if found:
            signatures[str(n)] = [str(s) for s in found]
    realizable = [n for n in multiples if str(n) in signatures]
    return OrderCandidatesCertificate(
        genus=sigma,
        lcm=value,
        bound=bound,
        fallback_bound=fallback_bound(sigma),
        multiples=multiples,
        realizable=realizable,
        signatures=signatures,
        verdict=_verdict(not realizable),
    )


def _check_candidate(
    candidate: GroupEntry, sigma: int, inventory: Sequence[Witness], config: RunConfig
) -> CandidateCheck:
    for w in sorted(inventory, key=lambda w: (-w.entry.order, w.entry.id)):
        result: EmbeddingResult = find_monomorphism(
            w.entry.group,
            candidate.group,
            node_budget=config.search_node_budget,
            definitive_ceiling=config.definitive_embedding_ceiling,
        )
        if result.status == "absent":
            return CandidateCheck(
                group=candidate.id,
                order=candidate.order,
                failed_embedding=w.entry.id,
                embedding_method=result.method,
                refuted=True,
            )
    acts = acts_on(candidate.group, sigma, candidate.id, config.search_node_budget, config.parallelism)
    return CandidateCheck(group=candidate.id, order=candidate.order, acts=acts.status, refuted=acts.status == "absent")


def embedding_certificate(
    sigma: int, order: int, candidates: Sequence[GroupEntry], source: str, inventory: Sequence[Witness], config: RunConfig
) -> EmbeddingCertificate:
    checks = [_check_candidate(c, sigma, inventory, config) for c in candidates]
    return EmbeddingCertificate(
        genus=sigma,
        order=order,
        source=source,
        candidates=checks,
        verdict=_verdict(bool(checks) and all(c.refuted for c in checks)),
    )


# Published witnesses -----------------------------------------------------------


def published_witness(sigma: int) -> Optional[Tuple[GroupEntry, str, GeneratingVector]]:
    """The generating vectors printed for genus 4 (Sym(5)) and genus 5 (SL2(7))."""
    if sigma == 4:
        entry = symmetric(5)
        cs = [parse_permutation(t, 5) for t in ("(1,2,3,4,5)", "(1,2)")]
        c3 = compose(cs[0], cs[1]).inverse()
        return entry, "(0;5,2,4)", GeneratingVector(degree=5, elliptic=(cs[0], cs[1], c3), periods=(5, 2, 4))
    if sigma == 5:
        entry = sl2(7)
        c1 = sl2_matrix_to_permutation(7, [[1, 1], [0, 1]])
        c2 = sl2_matrix_to_permutation(7, [[0, 1], [-1, 0]])
        c3 = compose(c1, c2).inverse()
        degree = entry.group.degree
        return entry, "(0;7,2,3)", GeneratingVector(degree=degree, elliptic=(c1, c2, c3), periods=(7, 2, 3))
    return None


def published_witness_certificate(sigma: int) -> Optional[PublishedWitnessCertificate]:
    found = published_witness(sigma)
    if found is None:
        return None
    entry, declared, vector = found
    signature, _, notes = parse_declared_signature(declared)
    report = verify_vector(entry.group, signature, vector, notes)
    return PublishedWitnessCertificate(
        genus=sigma,
        group=entry.id,
        group_order=entry.order,
        declared_signature=declared,
        measured_orders=report.measured_orders,
        measured_signature=report.measured_signature,
        implied_genus=report.implied_genus,
        vector_verdict=report.verdict,
    )


def printed_constant_notes(sigma: int) -> List[str]:
    return [
        f"{expr} = {value} (printed as {printed})"
        for expr, value, printed in PRINTED_CONSTANTS.get(sigma, [])
        if value != printed
    ]


# Pipeline ----------------------------------------------------------------------


def _catalog_witnesses(sigma: int, catalog: Catalog, known: Sequence[str], config: RunConfig) -> List[Witness]:
    found = []
    for entry in catalog.entries:
        if entry.id in known:
            continue
        result = acts_on(entry.group, sigma, entry.id, config.search_node_budget, config.parallelism)
        if result.status == "found":
            logger.info("catalog group %s acts on genus %d with %s", entry.id, sigma, result.record.signature)
            found.append(Witness(entry, result.record))
    return found


def weakly_exclusive_verdict(
    sigma: int, catalog: Optional[Catalog] = None, config: Optional[RunConfig] = None
) -> ExclusivityVerdict:
    """Run the certificate chain for genus sigma; stop at the first contradiction."""
    require_genus(sigma)
    config = config or RunConfig()
    certificates: List = []
    notes: List[str] = []
    coverage = list(catalog.coverage) if catalog is not None else []

    def done(result: str, missing=(), assumptions=()) -> ExclusivityVerdict:
        verdict = ExclusivityVerdict(
            genus=sigma,
            result=result,
            certificates=certificates,
            missing_inputs=list(missing),
            assumptions=list(assumptions),
            coverage=coverage,
            notes=notes,
        )
        logger.info("%s", verdict.summary)
        return verdict

    if sigma >= 13:
        certificates.append(generic_cutoff_certificate(sigma))
        return done("impossible")

    first = lcm_certificate(sigma)
    certificates.append(first)
    if first.verdict == "contradiction":
        return done("impossible")

    inventory = base_inventory(sigma, config.coset_budget)
    if catalog is not None:
        extra = _catalog_witnesses(sigma, catalog, [w.entry.id for w in inventory], config)
        if extra:
            inventory += extra
            inv = inventory_lcm_certificate(sigma, [w.record for w in inventory])
            certificates.append(inv)
            if inv.verdict == "contradiction":
                return done("impossible")

    sylow = sylow_certificate(sigma, inventory)
    if sylow is not None:
        certificates.append(sylow)
        if sylow.verdict == "contradiction":
            return done("impossible")

    witness = published_witness_certificate(sigma)
    if witness is not None:
        certificates.append(witness)
        if witness.vector_verdict != "VALID":
            notes.append(
                f"published {witness.declared_signature} vector in {witness.group} is {witness.vector_verdict}: "
                f"measured orders {witness.measured_orders}, signature {witness.measured_signature}, "
                f"genus {witness.implied_genus}"
            )

    value = reduce(lcm, (w.entry.order for w in inventory), 1)
    candidates_cert = order_candidates_certificate(sigma, value)
    certificates.append(candidates_cert)
    notes.extend(printed_constant_notes(sigma))
    if candidates_cert.verdict == "contradiction":
        return done("impossible")

    missing, assumptions = [], []
    refuted_all = True
    for n in candidates_cert.realizable:
        if catalog is not None and catalog.covers_order(n):
            groups, source = catalog.of_order(n), f"catalog:all-of-order:{n}"
        elif sigma == 4 and n == 120:
            groups, source = [symmetric(5)], "assumption"
            assumptions.append(SYM5_ASSUMPTION)
        else:
            missing.append(f"catalog with coverage=all-of-order:{n}")
            refuted_all = False
            continue
        cert = embedding_certificate(sigma, n, groups, source, inventory, config)
        certificates.append(cert)
        if cert.verdict != "contradiction":
            refuted_all = False
            unresolved = [c.group for c in cert.candidates if not c.refuted]
            missing.append(f"refutation of order-{n} candidates {', '.join(unresolved) or '(none listed)'}")
    return done("impossible" if refuted_all else "inconclusive", missing, assumptions)


# Verification --------------------------------------------------------------------


def _resolve(group_id: str, catalog: Optional[Catalog]) -> Optional[GroupEntry]:
    try:
        return resolve_group_spec(group_id, catalog)
    except (InvalidParameterError, ValueError):
        return None


def _inventory(sigma: int, verdict: ExclusivityVerdict) -> Tuple[int, Set[str], List[str]]:
    """Expected inventory lcm and witness ids, rebuilt from the verdict's own chain."""
    base = lcm_certificate(sigma)
    value = base.lcm
    ids = {f"C{sigma - 1}", f"C{sigma}", f"H{sigma}"}
    problems = []
    for cert in verdict.certificates:
        if isinstance(cert, InventoryLcmCertificate):
            if cert.lcm % base.lcm != 0:
                problems.append(f"inventory_lcm: {cert.lcm} is not a multiple of the base lcm {base.lcm}")
            value = cert.lcm
            ids.update(record.group for record in cert.witnesses)
    return value, ids, problems


def _verify_sylow(
    cert: SylowCertificate, expected_lcm: int, inventory_ids: Set[str], catalog: Optional[Catalog]
) -> List[str]:
    problems = []
    if cert.lcm != expected_lcm:
        problems.append(f"sylow: lcm {cert.lcm} differs from the inventory lcm {expected_lcm}")
    two = _two_part(cert.lcm)
    if cert.two_part != two or cert.cyclic_element_order != two:
        problems.append(f"sylow: 2-part of {cert.lcm} is {two}")
    if cert.sylow_lower_bound != 2 * two or cert.minimum_order != 2 * cert.lcm:
        problems.append("sylow: lower bounds do not follow from the lcm")
    if cert.bound != hurwitz_bound(cert.genus) or cert.verdict != _verdict(cert.minimum_order > cert.bound):
        problems.append("sylow: bound or verdict recomputes differently")

    for name in (cert.cyclic_witness, cert.klein_witness):
        if name not in inventory_ids:
            problems.append(f"sylow: {name} is not in the inventory")
    cyclic_entry = _resolve(cert.cyclic_witness, catalog)
    if cyclic_entry is None:
        problems.append(f"sylow: cannot rebuild {cert.cyclic_witness}")
    elif element_of_order(cyclic_entry.group, cert.two_part) is None:
        problems.append(f"sylow: {cert.cyclic_witness} has no element of order {cert.two_part}")

    try:
        gens = [parse_permutation(g, cert.klein_degree) for g in cert.klein_generators]
        K = PermGroup(gens, degree=cert.klein_degree)
        if K.order != 4 or not has_klein_four(K):
            problems.append(f"sylow: {cert.klein_generators} do not generate a Klein four-group")
    except ValueError as exc:
        problems.append(f"sylow: {exc}")
        return problems
    klein_entry = _resolve(cert.klein_witness, catalog)
    if klein_entry is None:
        problems.append(f"sylow: cannot rebuild {cert.klein_witness}")
    elif not all(klein_entry.group.contains(g) for g in gens):
        problems.append(f"sylow: {cert.klein_generators} do not lie in {cert.klein_witness}")
    return problems


def _verify_candidate_source(
    cert: EmbeddingCertificate, verdict: ExclusivityVerdict, realizable: List[int], catalog: Optional[Catalog]
) -> List[str]:
    problems = []
    if cert.order not in realizable:
        problems.append(f"embedding: order {cert.order} is not a realizable candidate order")
    listed = sorted(c.group for c in cert.candidates)
    if cert.source == "assumption":
        if (cert.genus, cert.order) != (4, 120) or listed != ["S5"] or SYM5_ASSUMPTION not in verdict.assumptions:
            problems.append("embedding: an assumed candidate list is only allowed for Sym(5) at genus 4")
    elif cert.source == f"catalog:all-of-order:{cert.order}":
        if catalog is None or not catalog.covers_order(cert.order):
            problems.append(f"embedding: no supplied catalog covers order {cert.order}")
        elif listed != sorted(e.id for e in catalog.of_order(cert.order)):
            problems.append(f"embedding: candidates {listed} are not the catalog's order-{cert.order} groups")
    else:
        problems.append(f"embedding: unknown candidate source {cert.source!r}")
    return problems


def _verify_embedding(cert: EmbeddingCertificate, catalog: Optional[Catalog], config: RunConfig) -> List[str]:
    problems = []
    for check in cert.candidates:
        if not check.refuted:
            continue
        candidate = _resolve(check.group, catalog)
        if candidate is None or candidate.order != check.order:
            problems.append(f"embedding: cannot rebuild candidate {check.group}")
            continue
        if check.failed_embedding is not None:
            source = _resolve(check.failed_embedding, catalog)
            if source is None:
                problems.append(f"embedding: cannot rebuild {check.failed_embedding}")
                continue
            result = find_monomorphism(
                source.group,
                candidate.group,
                node_budget=config.search_node_budget,
                definitive_ceiling=config.definitive_embedding_ceiling,
            )
            if result.status != "absent":
                problems.append(f"embedding: {check.failed_embedding} -> {check.group} is {result.status}")
        else:
            acts = acts_on(candidate.group, cert.genus, check.group, config.search_node_budget, 1)
            if acts.status != "absent":
                problems.append(f"embedding: {check.group} acts on genus {cert.genus} ({acts.status})")
    expected = _verdict(bool(cert.candidates) and all(c.refuted for c in cert.candidates))
    if cert.verdict != expected:
        problems.append(f"embedding: verdict should be {expected}")
    return problems


def verify_verdict(
    verdict: ExclusivityVerdict, catalog: Optional[Catalog] = None, config: Optional[RunConfig] = None
) -> List[str]:
    """Recompute every certificate; returns the list of disagreements (empty when sound).

    Besides recomputing each certificate on its own, the lcm used by the Sylow and
    order-candidate steps must be the inventory lcm, and the embedding steps must
    cover every realizable order with the full candidate list.
    """
    config = config or RunConfig()
    sigma = verdict.genus
    problems: List[str] = []
    expected_lcm, inventory_ids, inventory_problems = _inventory(sigma, verdict)
    problems += inventory_problems
    order_certs = [c for c in verdict.certificates if isinstance(c, OrderCandidatesCertificate)]
    realizable = order_certs[-1].realizable if order_certs else []
    for cert in verdict.certificates:
        if cert.genus != sigma:
            problems.append(f"{cert.kind}: genus {cert.genus} in a genus-{sigma} verdict")
            continue
        if isinstance(cert, LcmCertificate):
            if cert != lcm_certificate(sigma):
                problems.append("lcm: recomputed certificate differs")
        elif isinstance(cert, GenericCutoffCertificate):
            if cert != generic_cutoff_certificate(sigma):
                problems.append("generic_cutoff: recomputed certificate differs")
        elif isinstance(cert, InventoryLcmCertificate):
            for record in cert.witnesses:
                if record.genus != sigma or verify_record(record).verdict != "VALID":
                    problems.append(f"inventory_lcm: witness {record.group} does not verify")
            if cert != inventory_lcm_certificate(sigma, cert.witnesses):
                problems.append("inventory_lcm: recomputed lcm or verdict differs")
        elif isinstance(cert, SylowCertificate):
            problems += _verify_sylow(cert, expected_lcm, inventory_ids, catalog)
        elif isinstance(cert, OrderCandidatesCertificate):
            if cert.lcm != expected_lcm:
                problems.append(f"order_candidates: lcm {cert.lcm} differs from the inventory lcm {expected_lcm}")
            if cert != order_candidates_certificate(sigma, cert.lcm):
                problems.append("order_candidates: recomputed certificate differs")
        elif isinstance(cert, EmbeddingCertificate):
            problems += _verify_candidate_source(cert, verdict, realizable, catalog)
            problems += _verify_embedding(cert, catalog, config)
        elif isinstance(cert, PublishedWitnessCertificate):
            if cert != published_witness_certificate(sigma):
                problems.append("published_witness: recomputed audit differs")

    decisive = [c for c in verdict.certificates if c.kind not in ("embedding", "published_witness")]
    embeddings = [c for c in verdict.certificates if c.kind == "embedding"]
    concluded = any(c.verdict == "contradiction" for c in decisive)
    if not concluded and order_certs and embeddings and not verdict.missing_inputs:
        covered = {c.order for c in embeddings}
        concluded = covered >= set(realizable) and all(c.verdict == "contradiction" for c in embeddings)
    if (verdict.result == "impossible") != concluded:
        problems.append(f"result {verdict.result!r} does not follow from the certificate chain")
    for problem in problems:
        logger.warning("genus %d verdict: %s", sigma, problem)
    return problems
