"""Riemann-Hurwitz accounting and generating-vector search.

A group G of order n acts on the closed surface of genus sigma >= 2 with
signature (rho; m_1..m_r) exactly when

    2*sigma - 2 = n * (2*rho - 2 + sum(1 - 1/m_i))

and G has a generating vector (a_1, b_1, ..., a_rho, b_rho, c_1, ..., c_r) with
prod [a_j, b_j] * prod c_i = 1 and c_i of order m_i. All arithmetic on the
bracketed measure is exact (``fractions.Fraction``).
"""
import logging
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Any, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from catalog import cyclic, is_two_generated
from fpgroups import accola_maclachlan_group
from permcore import (
    DEFAULT_NODE_BUDGET,
    Permutation,
    PermGroup,
    commutator,
    compose,
    parse_permutation,
    product,
)

logger = logging.getLogger(__name__)

RHMeasure = Fraction

# Above this order the search composes permutations directly instead of
# indexing a multiplication table.
TABLE_CEILING = 1024

_SIGNATURE_RE = re.compile(r"^\(\s*(\d+)\s*;\s*(.*?)\s*\)$")


class SignatureError(ValueError):
    pass


class GenusRangeError(ValueError):
    """Genus 0 and 1 have no maximal finite groups of automorphisms."""


class PreconditionError(ValueError):
    pass


class Signature(BaseModel):
    """Branching datum (rho; m_1 <= ... <= m_r); period-1 entries are dropped."""

    model_config = ConfigDict(frozen=True)

    orbit_genus: int
    periods: Tuple[int, ...] = ()

    @field_validator("orbit_genus")
    @classmethod
    def _orbit_genus(cls, rho: int) -> int:
        if rho < 0:
            raise ValueError(f"orbit genus must be >= 0, got {rho}")
        return rho

    @field_validator("periods", mode="before")
    @classmethod
    def _periods(cls, periods: Any) -> Tuple[int, ...]:
        periods = tuple(int(m) for m in periods)
        if any(m < 1 for m in periods):
            raise ValueError(f"periods must be positive, got {periods}")
        if 1 in periods:
            logger.warning("dropping period-1 entries from %s: they contribute nothing", periods)
        return tuple(sorted(m for m in periods if m > 1))

    @property
    def r(self) -> int:
        return len(self.periods)

    @property
    def vector_length(self) -> int:
        return 2 * self.orbit_genus + self.r

    def __str__(self) -> str:
        body = ",".join(str(m) for m in self.periods) or "-"
        return f"({self.orbit_genus};{body})"


def parse_declared_signature(text: str) -> Tuple[Signature, Tuple[int, ...], List[str]]:
    """Signature plus the periods in the order written, and normalization notes."""
    m = _SIGNATURE_RE.match(text.strip())
    if not m:
        raise SignatureError(f"signature must look like (rho;m1,...,mr): {text!r}")
    rho = int(m.group(1))
    body = m.group(2)
    if body in ("", "-", "—"):
        declared: Tuple[int, ...] = ()
    else:
        try:
            declared = tuple(int(x) for x in body.split(","))
        except ValueError as exc:
            raise SignatureError(f"bad period list in {text!r}") from exc
    notes = []
    if 1 in declared:
        notes.append(f"period-1 entries in {text.strip()} were dropped (they contribute 0 to the measure)")
    try:
        signature = Signature(orbit_genus=rho, periods=declared)
    except ValueError as exc:
        raise SignatureError(str(exc)) from exc
    return signature, tuple(m for m in declared if m != 1), notes


def parse_signature(text: str) -> Signature:
    return parse_declared_signature(text)[0]


def rh_measure(s: Signature) -> RHMeasure:
    return 2 * s.orbit_genus - 2 + sum((1 - Fraction(1, m) for m in s.periods), Fraction(0))


def format_measure(value: RHMeasure) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)


def rh_genus(order: int, s: Signature) -> Optional[int]:
    """Genus sigma >= 2 with 2*sigma - 2 = order * measure, else None."""
    if order < 1:
        raise ValueError(f"group order must be positive, got {order}")
    euler = order * rh_measure(s)
    if euler.denominator != 1 or euler.numerator % 2:
        return None
    sigma = euler.numerator // 2 + 1
    return sigma if sigma >= 2 else None


def require_genus(sigma: int) -> None:
    if sigma < 2:
        raise GenusRangeError(
            f"genus {sigma} is outside the hyperbolic range: surfaces of genus 0 and 1 have "
            "automorphisms of unbounded finite order and no maximal finite subgroups"
        )


def _divisors(n: int) -> List[int]:
    return [d for d in range(2, n + 1) if n % d == 0]


def enumerate_signatures(sigma: int, order: int) -> List[Signature]:
    """Every signature with periods dividing ``order`` that gives genus ``sigma``.

    Each period term 1 - 1/m is at least 1/2, which bounds r by
    2*(measure + 2 - 2*rho) and rho by (measure + 2)/2.
    """
    require_genus(sigma)
    target = Fraction(2 * sigma - 2, order)
    divisors = _divisors(order)
    found: List[Signature] = []

    def extend(start: int, periods: List[int], remaining: Fraction, rho: int) -> None:
        if remaining == 0:
            found.append(Signature(orbit_genus=rho, periods=tuple(periods)))
            return
        if remaining < Fraction(1, 2):
            return
        for i in range(start, len(divisors)):
            term = 1 - Fraction(1, divisors[i])
            if term > remaining:
                break
            periods.append(divisors[i])
            extend(i, periods, remaining - term, rho)
            periods.pop()

    for rho in range(0, floor((target + 2) / 2) + 1):
        remaining = target - (2 * rho - 2)
        if remaining < 0:
            continue
        extend(0, [], remaining, rho)

    for s in found:
        assert rh_genus(order, s) == sigma
    return sorted(found, key=lambda s: (s.orbit_genus, s.r, s.periods))


class GeneratingVector(BaseModel):
    """(a_1, b_1, ..., a_rho, b_rho; c_1, ..., c_r) with c_i declared of order periods[i]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    degree: int
    hyperbolic: Tuple[Permutation, ...] = ()
    elliptic: Tuple[Permutation, ...] = ()
    periods: Tuple[int, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def _parse_cycles(cls, data: Any) -> Any:
        if isinstance(data, dict) and "degree" in data:
            degree = int(data["degree"])
            data = dict(data)
            for key in ("hyperbolic", "elliptic"):
                data[key] = tuple(
                    parse_permutation(x, degree) if isinstance(x, str) else x for x in data.get(key, ())
                )
        return data

    @model_validator(mode="after")
    def _shape(self) -> "GeneratingVector":
        if len(self.hyperbolic) % 2:
            raise ValueError("hyperbolic elements come in pairs")
        if len(self.periods) != len(self.elliptic):
            raise ValueError("one declared period per elliptic element")
        for p in self.hyperbolic + self.elliptic:
            if p.degree != self.degree:
                raise ValueError(f"element {p} has degree {p.degree}, vector degree is {self.degree}")
        return self

    @field_serializer("hyperbolic", "elliptic")
    def _cycles(self, perms: Tuple[Permutation, ...]) -> List[str]:
        return [str(p) for p in perms]

    @property
    def orbit_genus(self) -> int:
        return len(self.hyperbolic) // 2

    def elements(self) -> Tuple[Permutation, ...]:
        return self.hyperbolic + self.elliptic

    def long_relation(self) -> Permutation:
        """prod [a_j, b_j] * prod c_i."""
        h = self.hyperbolic
        factors = [commutator(h[2 * j], h[2 * j + 1]) for j in range(self.orbit_genus)]
        return product(factors + list(self.elliptic), self.degree)


class VerificationReport(BaseModel):
    group_order: int
    declared_signature: str
    declared_periods: List[int]
    measured_orders: List[int]
    orders_match: bool
    members_in_group: bool
    product_is_identity: bool
    generates: bool
    declared_genus: Optional[int]
    measured_signature: str
    implied_genus: Optional[int]
    verdict: Literal["VALID", "INVALID-AS-DECLARED", "INVALID"]
    notes: List[str] = []

    @property
    def summary(self) -> str:
        genus = self.implied_genus if self.verdict != "INVALID" else None
        return f"{self.verdict}; genus={genus if genus is not None else '-'}"


def verify_vector(G: PermGroup, s: Signature, v: GeneratingVector, notes: Sequence[str] = ()) -> VerificationReport:
    """Measure every condition of the converse statement; failures are report content."""
    if v.orbit_genus != s.orbit_genus or len(v.elliptic) != s.r:
        raise PreconditionError(
            f"vector has {len(v.hyperbolic)}+{len(v.elliptic)} elements, signature {s} needs "
            f"{2 * s.orbit_genus}+{s.r}"
        )
    if tuple(sorted(v.periods)) != s.periods:
        raise PreconditionError(f"vector periods {v.periods} are not an ordering of {s}")
    notes = list(notes)
    measured = [c.order() for c in v.elliptic]
    orders_match = list(v.periods) == measured
    in_group = v.degree == G.degree and all(G.contains(g) for g in v.elements())
    product_ok = v.long_relation().is_identity()
    generates = in_group and G.generates(v.elements())
    measured_sig = Signature(orbit_genus=s.orbit_genus, periods=measured)
    declared_genus = rh_genus(G.order, s)
    implied_genus = rh_genus(G.order, measured_sig)
    for i, (want, got) in enumerate(zip(v.periods, measured), start=1):
        if want != got:
            notes.append(f"c_{i} declared of order {want}, measured order {got}")
    if declared_genus is None:
        notes.append(f"Riemann-Hurwitz gives no genus >= 2 for order {G.order} and {s}")

    if in_group and product_ok and generates and orders_match and declared_genus is not None:
        verdict = "VALID"
    elif in_group and product_ok and generates and not orders_match:
        verdict = "INVALID-AS-DECLARED"
    else:
        verdict = "INVALID"
    return VerificationReport(
        group_order=G.order,
        declared_signature=str(s),
        declared_periods=list(v.periods),
        measured_orders=measured,
        orders_match=orders_match,
        members_in_group=in_group,
        product_is_identity=product_ok,
        generates=generates,
        declared_genus=declared_genus,
        measured_signature=str(measured_sig),
        implied_genus=implied_genus,
        verdict=verdict,
        notes=notes,
    )


# Search ----------------------------------------------------------------------


class _Arithmetic:
    """Element arithmetic used by the search: table-indexed for small groups."""

    def __init__(self, G: PermGroup):
        self.G = G
        self.elements = G.elements
        self.indexed = G.order <= TABLE_CEILING
        if self.indexed:
            index = G.index
            self.table = [[index[compose(a, b)] for b in self.elements] for a in self.elements]
            self.inv = [index[g.inverse()] for g in self.elements]
            self.orders = [g.order() for g in self.elements]
            self.identity = index[G.identity]
            self.reps = {index[c.representative] for c in G.conjugacy_classes}

    def items(self) -> List[Any]:
        return list(range(len(self.elements))) if self.indexed else list(self.elements)

    def of_order(self, m: int) -> List[Any]:
        if self.indexed:
            return [i for i, o in enumerate(self.orders) if o == m]
        return list(self.G.elements_of_order(m))

    def is_rep(self, x) -> bool:
        return x in self.reps if self.indexed else x in self.G.class_representatives

    def mul(self, a, b):
        return self.table[a][b] if self.indexed else compose(a, b)

    def inverse(self, a):
        return self.inv[a] if self.indexed else a.inverse()

    def order(self, a) -> int:
        return self.orders[a] if self.indexed else a.order()

    def one(self):
        return self.identity if self.indexed else self.G.identity

    def generates(self, xs: Sequence[Any]) -> bool:
        if not self.indexed:
            return self.G.generates(list(xs))
        seen = {self.identity}
        frontier = [self.identity]
        gens = [x for x in set(xs) if x != self.identity]
        while frontier:
            nxt = []
            for y in frontier:
                for g in gens:
                    z = self.table[g][y]
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
            frontier = nxt
        return len(seen) == len(self.elements)

    def to_perm(self, x) -> Permutation:
        return self.elements[x] if self.indexed else x


class _BudgetExhausted(Exception):
    pass


class _Stopped(Exception):
    pass


@dataclass
class VectorSearchResult:
    status: str  # "found" | "absent" | "inconclusive" | "stopped"
    vector: Optional[GeneratingVector] = None
    nodes: int = 0


def find_generating_vector(
    G: PermGroup, s: Signature, node_budget: int = DEFAULT_NODE_BUDGET, stop: Optional[threading.Event] = None
) -> VectorSearchResult:
    """Depth-first search for a generating vector of G of signature s.

    c_1 (or a_1 when r <= 1) is fixed up to conjugacy; the remaining free
    entries are filled in order, the last c_r is forced by the long relation
    and then checked for order and generation. Setting ``stop`` abandons the
    search with status "stopped".
    """
    if rh_genus(G.order, s) is None:
        raise PreconditionError(f"Riemann-Hurwitz gives no genus >= 2 for |G| = {G.order} and {s}")
    return _search_vector(_Arithmetic(G), s, node_budget, stop)


def _search_vector(
    ar: _Arithmetic, s: Signature, node_budget: int, stop: Optional[threading.Event] = None
) -> VectorSearchResult:
    G = ar.G
    rho, r = s.orbit_genus, s.r
    slots: List[List[Any]] = [ar.items() for _ in range(2 * rho)]
    slots += [ar.of_order(m) for m in s.periods]
    if any(not cands for cands in slots[2 * rho:]):
        return VectorSearchResult("absent")

    forced = 2 * rho + r - 1 if r >= 1 else None
    free = [i for i in range(2 * rho, 2 * rho + r) if i != forced] + list(range(2 * rho))
    first = free[0]
    slots[first] = [x for x in slots[first] if ar.is_rep(x)]

    one = ar.one()
    values: List[Any] = [None] * (2 * rho + r)
    nodes = 0

    def relation_prefix():
        acc = one
        for j in range(rho):
            a, b = values[2 * j], values[2 * j + 1]
            acc = ar.mul(acc, ar.mul(ar.mul(a, b), ar.mul(ar.inverse(a), ar.inverse(b))))
        for i in range(2 * rho, 2 * rho + r):
            if i != forced:
                acc = ar.mul(acc, values[i])
        return acc

    def leaf() -> bool:
        prefix = relation_prefix()
        if forced is None:
            if prefix != one:
                return False
        else:
            last = ar.inverse(prefix)
            if ar.order(last) != s.periods[-1]:
                return False
            values[forced] = last
        return ar.generates(values)

    def search(depth: int) -> bool:
        nonlocal nodes
        if depth == len(free):
            return leaf()
        slot = free[depth]
        for x in slots[slot]:
            nodes += 1
            if nodes > node_budget:
                raise _BudgetExhausted
            if stop is not None and stop.is_set():
                raise _Stopped
            values[slot] = x
            if search(depth + 1):
                return True
        return False

    try:
        hit = search(0)
    except _BudgetExhausted:
        logger.warning("vector search for %s in group of order %d exhausted %d nodes", s, G.order, node_budget)
        return VectorSearchResult("inconclusive", nodes=nodes)
    except _Stopped:
        return VectorSearchResult("stopped", nodes=nodes)
    if not hit:
        return VectorSearchResult("absent", nodes=nodes)
    perms = [ar.to_perm(x) for x in values]
    vector = GeneratingVector(
        degree=G.degree,
        hyperbolic=tuple(perms[: 2 * rho]),
        elliptic=tuple(perms[2 * rho:]),
        periods=s.periods,
    )
    return VectorSearchResult("found", vector, nodes)


# Action records --------------------------------------------------------------


class ActionRecord(BaseModel):
    """A certified action; the Riemann-Hurwitz equation is checked exactly on construction."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    group: str
    group_order: int
    degree: int
    generators: Tuple[Permutation, ...]
    genus: int
    signature: Signature
    vector: GeneratingVector
    provenance: Literal["search", "constructed", "ingested"]

    @model_validator(mode="before")
    @classmethod
    def _parse_generators(cls, data: Any) -> Any:
        if isinstance(data, dict) and "degree" in data:
            data = dict(data)
            data["generators"] = tuple(
                parse_permutation(g, int(data["degree"])) if isinstance(g, str) else g
                for g in data.get("generators", ())
            )
        return data

    @model_validator(mode="after")
    def _riemann_hurwitz(self) -> "ActionRecord":
        if self.genus < 2:
            raise ValueError(f"genus must be >= 2, got {self.genus}")
        if 2 * self.genus - 2 != self.group_order * rh_measure(self.signature):
            raise ValueError(
                f"Riemann-Hurwitz fails: 2*{self.genus}-2 != {self.group_order} * {format_measure(rh_measure(self.signature))}"
            )
        return self

    @field_serializer("generators")
    def _cycles(self, perms: Tuple[Permutation, ...]) -> List[str]:
        return [str(p) for p in perms]

    def rebuild_group(self) -> PermGroup:
        return PermGroup(self.generators, degree=self.degree)


def make_record(group_id: str, G: PermGroup, s: Signature, v: GeneratingVector, provenance: str) -> ActionRecord:
    genus = rh_genus(G.order, s)
    if genus is None:
        raise PreconditionError(f"no genus for |G| = {G.order} and {s}")
    return ActionRecord(
        group=group_id,
        group_order=G.order,
        degree=G.degree,
        generators=G.generators,
        genus=genus,
        signature=s,
        vector=v,
        provenance=provenance,
    )


def verify_record(record: ActionRecord) -> VerificationReport:
    G = record.rebuild_group()
    if G.order != record.group_order:
        raise PreconditionError(f"stored generators give order {G.order}, record says {record.group_order}")
    return verify_vector(G, record.signature, record.vector)


def canonical_actions(sigma: int, groups: Sequence[Tuple[str, PermGroup]] = ()) -> List[ActionRecord]:
    """Records for C_(sigma-1) on (2;-), C_sigma on (1;sigma,sigma), and the free
    action (x, y, y, x) on genus |G|+1 for each supplied 2-generated group."""
    require_genus(sigma)
    records = []
    c = cyclic(sigma - 1)
    g, e = c.named["generator"], c.group.identity
    v = GeneratingVector(degree=c.group.degree, hyperbolic=(g, e, e, e))
    records.append(make_record(c.id, c.group, Signature(orbit_genus=2), v, "constructed"))

    c = cyclic(sigma)
    g, e = c.named["generator"], c.group.identity
    v = GeneratingVector(degree=c.group.degree, hyperbolic=(e, e), elliptic=(g, g.inverse()), periods=(sigma, sigma))
    records.append(make_record(c.id, c.group, Signature(orbit_genus=1, periods=(sigma, sigma)), v, "constructed"))

    for group_id, G in groups:
        pair = is_two_generated(G)
        if pair is None:
            logger.info("%s is not 2-generated; no free action record", group_id)
            continue
        records.append(free_action_record(group_id, G, pair))
    return records


def free_action_record(group_id: str, G: PermGroup, pair: Tuple[Permutation, Permutation]) -> ActionRecord:
    """Unramified action on genus |G|+1: [x,y][y,x] = 1."""
    x, y = pair
    v = GeneratingVector(degree=G.degree, hyperbolic=(x, y, y, x))
    return make_record(group_id, G, Signature(orbit_genus=2), v, "constructed")


def accola_maclachlan_action(sigma: int, coset_budget: Optional[int] = None) -> ActionRecord:
    """H_sigma on genus sigma via c_1 = x, c_2 = y, c_3 = (xy)^-1."""
    h = accola_maclachlan_group(sigma, coset_budget)
    return accola_maclachlan_record(sigma, h.group, h.x, h.y)


def accola_maclachlan_record(sigma: int, group: PermGroup, x: Permutation, y: Permutation) -> ActionRecord:
    periods = (4, 2 * (sigma + 1), 2)
    v = GeneratingVector(degree=group.degree, elliptic=(x, y, compose(x, y).inverse()), periods=periods)
    return make_record(f"H{sigma}", group, Signature(orbit_genus=0, periods=periods), v, "constructed")


@dataclass
class ActsOnResult:
    status: str  # "found" | "absent" | "inconclusive"
    record: Optional[ActionRecord] = None
    searched: List[Tuple[str, str]] = field(default_factory=list)


def acts_on(
    G: PermGroup,
    sigma: int,
    group_id: str = "G",
    node_budget: int = DEFAULT_NODE_BUDGET,
    workers: int = 1,
) -> ActsOnResult:
    """First signature, in enumeration order, whose vector search succeeds.

    With ``workers > 1`` signatures are searched on a thread pool. The
    searches are pure Python, so threads overlap them without a CPU speedup.
    Results are consumed in enumeration order and, once a signature is
    found, every later search is cancelled or stopped, so the outcome and
    the ``searched`` trail match the serial run.
    """
    require_genus(sigma)
    signatures = enumerate_signatures(sigma, G.order)
    if not signatures:
        return ActsOnResult("absent")

    arithmetic = _Arithmetic(G)
    results: List[Tuple[Signature, VectorSearchResult]] = []
    if workers > 1 and len(signatures) > 1:
        stops = [threading.Event() for _ in signatures]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_search_vector, arithmetic, s, node_budget, stop)
                for s, stop in zip(signatures, stops)
            ]
            for i, (s, future) in enumerate(zip(signatures, futures)):
                outcome = future.result()
                results.append((s, outcome))
                if outcome.status == "found":
                    for later, stop in zip(futures[i + 1 :], stops[i + 1 :]):
                        later.cancel()
                        stop.set()
                    break
    else:
        for s in signatures:
            outcome = _search_vector(arithmetic, s, node_budget)
            results.append((s, outcome))
            if outcome.status == "found":
                break

    searched = [(str(s), o.status) for s, o in results]
    s, outcome = results[-1]
    if outcome.status == "found":
        record = make_record(group_id, G, s, outcome.vector, "search")
        return ActsOnResult("found", record, searched)
    if any(o.status == "inconclusive" for _, o in results):
        return ActsOnResult("inconclusive", searched=searched)
    return ActsOnResult("absent", searched=searched)
