"""Candidate groups: builtin families and ingested group inventories.

Catalog files hold one group per stanza. A stanza is a run of non-blank lines
made of whitespace-separated ``key=value`` tokens; a blank line ends it and
``#`` starts a comment. Keys:

    id=<label>          unique within the catalog
    degree=<n>          points 1..n
    gens=<p1>;<p2>;...  cycle notation, e.g. gens=(1,2,3);(1,2)
    order=<declared>    checked against the stabilizer-chain order
    tags=<a>,<b>        optional
    coverage=all-of-order:<n>   optional; may also stand alone in a stanza

Coverage claims are carried as metadata and echoed into reports; nothing here
checks that a file really lists every group of an order.
"""
import logging
import re
from math import factorial, prod
from pathlib import Path
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from sympy import isprime

import permcore
from fpgroups import accola_maclachlan_group
from permcore import DEFAULT_NODE_BUDGET, Permutation, PermGroup, are_isomorphic, parse_permutation

logger = logging.getLogger(__name__)

MAX_SL2_PRIME = 31
_COVERAGE_RE = re.compile(r"all-of-order:(\d+)$")


class CatalogParseError(ValueError):
    pass


class DeclaredOrderMismatchError(ValueError):
    pass


class InvalidParameterError(ValueError):
    pass


class GroupEntry(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: str
    group: PermGroup
    tags: FrozenSet[str] = frozenset()
    source: str = "builtin"
    named: Dict[str, Permutation] = Field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.group.order


class Catalog(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    entries: List[GroupEntry] = Field(default_factory=list)
    coverage: List[str] = Field(default_factory=list)

    def get(self, entry_id: str) -> Optional[GroupEntry]:
        return next((e for e in self.entries if e.id == entry_id), None)

    def of_order(self, n: int) -> List[GroupEntry]:
        return [e for e in self.entries if e.order == n]

    def covered_orders(self) -> List[int]:
        orders = []
        for claim in self.coverage:
            m = _COVERAGE_RE.match(claim)
            if m:
                orders.append(int(m.group(1)))
        return sorted(set(orders))

    def covers_order(self, n: int) -> bool:
        return n in self.covered_orders()

    def merged(self, other: "Catalog") -> "Catalog":
        ids = {e.id for e in self.entries}
        clash = [e.id for e in other.entries if e.id in ids]
        if clash:
            raise CatalogParseError(f"duplicate catalog ids across files: {', '.join(clash)}")
        return Catalog(entries=self.entries + other.entries, coverage=self.coverage + other.coverage)


# Builtin families -----------------------------------------------------------


def _entry(entry_id: str, gens: Sequence[Permutation], degree: int, tags: Iterable[str], expected: int, **named) -> GroupEntry:
    group = PermGroup(gens, degree=degree)
    if group.order != expected:
        raise RuntimeError(f"{entry_id}: stabilizer chain order {group.order} != closed form {expected}")
    return GroupEntry(id=entry_id, group=group, tags=frozenset(tags), named=named)


def _cycle(points: Sequence[int], degree: int) -> Permutation:
    return Permutation.from_cycles([tuple(points)], degree)


def cyclic(n: int) -> GroupEntry:
    if n < 1:
        raise InvalidParameterError(f"cyclic group order must be positive, got {n}")
    degree = max(n, 1)
    g = _cycle(range(1, n + 1), degree) if n > 1 else Permutation.identity(1)
    return _entry(f"C{n}", [g], degree, {"cyclic", "abelian"}, n, generator=g)


def dihedral(n: int) -> GroupEntry:
    """Dihedral group of order 2n."""
    if n < 1:
        raise InvalidParameterError(f"dihedral parameter must be positive, got {n}")
    if n == 1:
        gens, degree = [_cycle((1, 2), 2)], 2
    elif n == 2:
        gens = [parse_permutation("(1,2)(3,4)", 4), parse_permutation("(1,3)(2,4)", 4)]
        degree = 4
    else:
        degree = n
        gens = [_cycle(range(1, n + 1), n), Permutation([n - i for i in range(n)])]
    return _entry(f"D{n}", gens, degree, {"dihedral"}, 2 * n)


def abelian(factors: Sequence[int]) -> GroupEntry:
    factors = tuple(int(f) for f in factors)
    if not factors or any(f < 1 for f in factors):
        raise InvalidParameterError(f"invariant factors must be positive, got {factors}")
    degree = max(sum(f for f in factors if f > 1), 1)
    gens, start = [], 1
    for f in factors:
        if f > 1:
            gens.append(_cycle(range(start, start + f), degree))
            start += f
    label = "Ab(" + ",".join(str(f) for f in factors) + ")"
    return _entry(label, gens, degree, {"abelian"}, prod(factors))


def symmetric(n: int) -> GroupEntry:
    if n < 1 or factorial(n) > permcore.ORDER_CEILING:
        raise InvalidParameterError(f"symmetric degree out of range: {n}")
    if n == 1:
        gens = [Permutation.identity(1)]
    elif n == 2:
        gens = [_cycle((1, 2), 2)]
    else:
        gens = [_cycle((1, 2), n), _cycle(range(1, n + 1), n)]
    return _entry(f"S{n}", gens, n, {"symmetric"}, factorial(n))


def alternating(n: int) -> GroupEntry:
    if n < 1 or factorial(n) // 2 > permcore.ORDER_CEILING:
        raise InvalidParameterError(f"alternating degree out of range: {n}")
    if n < 3:
        return _entry(f"A{n}", [Permutation.identity(n)], n, {"alternating"}, 1)
    gens = [_cycle((1, 2, k), n) for k in range(3, n + 1)]
    return _entry(f"A{n}", gens, n, {"alternating"}, factorial(n) // 2)


def _check_prime(p: int) -> None:
    if not isprime(p) or p > MAX_SL2_PRIME:
        raise InvalidParameterError(f"p must be a prime <= {MAX_SL2_PRIME}, got {p}")


def _plane_points(p: int, projective: bool) -> Tuple[np.ndarray, np.ndarray]:
    """Nonzero vectors of F_p^2 (up to sign when projective) and a code lookup table."""
    vecs = np.array([(a, b) for a in range(p) for b in range(p) if (a, b) != (0, 0)], dtype=np.int64)
    codes = vecs[:, 0] * p + vecs[:, 1]
    if projective:
        negated = ((-vecs[:, 0]) % p) * p + (-vecs[:, 1]) % p
        canonical = np.minimum(codes, negated)
        keep = codes == canonical
        vecs, codes = vecs[keep], codes[keep]
    lookup = np.full(p * p, -1, dtype=np.int64)
    lookup[codes] = np.arange(len(codes))
    return vecs, lookup


def _matrix_action(p: int, matrix, projective: bool = False) -> Permutation:
    m = np.asarray(matrix, dtype=np.int64) % p
    if m.shape != (2, 2):
        raise InvalidParameterError(f"expected a 2x2 matrix, got shape {m.shape}")
    if (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) % p != 1:
        raise InvalidParameterError(f"matrix {m.tolist()} is not in SL2({p})")
    vecs, lookup = _plane_points(p, projective)
    images = (vecs @ m.T) % p
    codes = images[:, 0] * p + images[:, 1]
    if projective:
        negated = ((-images[:, 0]) % p) * p + (-images[:, 1]) % p
        codes = np.minimum(codes, negated)
    return Permutation((lookup[codes] + 1).tolist())


def sl2_matrix_to_permutation(p: int, matrix) -> Permutation:
    """Action of a matrix of SL2(p) on the p^2-1 nonzero column vectors."""
    _check_prime(p)
    return _matrix_action(p, matrix)


def matrix_order_mod_p(p: int, matrix, limit: int = 10**4) -> int:
    """Least k with matrix^k = I over F_p, by direct powering."""
    m = np.asarray(matrix, dtype=np.int64) % p
    identity = np.eye(2, dtype=np.int64)
    power = m.copy()
    for k in range(1, limit + 1):
        if np.array_equal(power, identity):
            return k
        power = (power @ m) % p
    raise ValueError(f"matrix has no order below {limit} over F_{p}")


SL2_GENERATORS = ([[1, 1], [0, 1]], [[0, 1], [-1, 0]])


def sl2(p: int) -> GroupEntry:
    _check_prime(p)
    gens = [_matrix_action(p, m) for m in SL2_GENERATORS]
    return _entry(f"SL2({p})", gens, p * p - 1, {"sl2", "matrix"}, p * (p * p - 1))


def psl2(p: int) -> GroupEntry:
    _check_prime(p)
    if p == 2:
        raise InvalidParameterError("psl2 needs an odd prime")
    gens = [_matrix_action(p, m, projective=True) for m in SL2_GENERATORS]
    return _entry(f"PSL2({p})", gens, (p * p - 1) // 2, {"psl2", "matrix"}, p * (p * p - 1) // 2)


def accola_maclachlan(sigma: int, coset_budget: Optional[int] = None) -> GroupEntry:
    h = accola_maclachlan_group(sigma, coset_budget)
    return GroupEntry(
        id=f"H{sigma}",
        group=h.group,
        tags=frozenset({"accola_maclachlan", f"genus:{sigma}"}),
        named=h.named_elements(),
    )


def direct_product(a: GroupEntry, b: GroupEntry) -> GroupEntry:
    da, db = a.group.degree, b.group.degree
    degree = da + db
    gens = [Permutation(g.images + tuple(range(da + 1, degree + 1))) for g in a.group.generators]
    gens += [Permutation(tuple(range(1, da + 1)) + tuple(x + da for x in g.images)) for g in b.group.generators]
    return _entry(f"{a.id}x{b.id}", gens, degree, {"direct_product"}, a.order * b.order)


BUILTIN_FAMILIES: Dict[str, Callable[..., GroupEntry]] = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "abelian": lambda *factors: abelian(factors),
    "symmetric": symmetric,
    "alternating": alternating,
    "sl2": sl2,
    "psl2": psl2,
    "accola_maclachlan": accola_maclachlan,
    "direct_product": direct_product,
}


def builtin(family: str, *params) -> GroupEntry:
    try:
        constructor = BUILTIN_FAMILIES[family]
    except KeyError:
        raise InvalidParameterError(f"unknown builtin family {family!r}") from None
    return constructor(*params)


_SPEC_PATTERNS: List[Tuple[re.Pattern, Callable[..., GroupEntry]]] = [
    (re.compile(r"C(\d+)$"), lambda n: cyclic(int(n))),
    (re.compile(r"D(\d+)$"), lambda n: dihedral(int(n))),
    (re.compile(r"S(\d+)$"), lambda n: symmetric(int(n))),
    (re.compile(r"A(\d+)$"), lambda n: alternating(int(n))),
    (re.compile(r"H(\d+)$"), lambda n: accola_maclachlan(int(n))),
    (re.compile(r"SL2\((\d+)\)$"), lambda p: sl2(int(p))),
    (re.compile(r"PSL2\((\d+)\)$"), lambda p: psl2(int(p))),
    (re.compile(r"Ab\(([\d,\s]+)\)$"), lambda f: abelian([int(x) for x in f.split(",")])),
]


def resolve_group_spec(spec: str, catalog: Optional[Catalog] = None) -> GroupEntry:
    """Builtin name (S5, C7, D4, A5, H8, SL2(7), PSL2(7), Ab(2,2), C2xC3),
    catalog id, or inline generators such as ``(1,2,3);(1,2)``."""
    spec = spec.strip()
    if catalog is not None:
        found = catalog.get(spec)
        if found is not None:
            return found
    if spec.startswith("("):
        gens = [parse_permutation(t) for t in spec.split(";") if t.strip()]
        degree = max(g.degree for g in gens)
        gens = [parse_permutation(t, degree) for t in spec.split(";") if t.strip()]
        return GroupEntry(id="inline", group=PermGroup(gens, degree=degree), source="inline")
    for pattern, make in _SPEC_PATTERNS:
        m = pattern.match(spec)
        if m:
            return make(*m.groups())
    if "x" in spec:
        parts = spec.split("x")
        entry = resolve_group_spec(parts[0], catalog)
        for part in parts[1:]:
            entry = direct_product(entry, resolve_group_spec(part, catalog))
        return entry
    raise InvalidParameterError(f"unrecognized group spec {spec!r}")


# Catalog files ---------------------------------------------------------------


def _stanzas(text: str) -> Iterable[Tuple[int, Dict[str, str]]]:
    tokens: Dict[str, str] = {}
    first_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if tokens:
                yield first_line, tokens
            tokens = {}
            continue
        if not tokens:
            first_line = lineno
        for tok in line.split():
            if "=" not in tok:
                raise CatalogParseError(f"line {lineno}: expected key=value, got {tok!r}")
            key, value = tok.split("=", 1)
            if key in tokens:
                raise CatalogParseError(f"line {lineno}: key {key!r} repeated in stanza")
            tokens[key] = value
    if tokens:
        yield first_line, tokens


_KNOWN_KEYS = {"id", "degree", "gens", "order", "tags", "coverage"}


def parse_catalog(text: str, source: str = "<string>") -> Catalog:
    entries: List[GroupEntry] = []
    coverage: List[str] = []
    seen = set()
    for line, fields in _stanzas(text):
        where = f"{source}:{line}"
        unknown = set(fields) - _KNOWN_KEYS
        if unknown:
            raise CatalogParseError(f"{where}: unknown keys {sorted(unknown)}")
        if "coverage" in fields:
            if not _COVERAGE_RE.match(fields["coverage"]):
                raise CatalogParseError(f"{where}: bad coverage claim {fields['coverage']!r}")
            coverage.append(fields["coverage"])
        if set(fields) == {"coverage"}:
            continue
        missing = {"id", "degree", "gens", "order"} - set(fields)
        if missing:
            raise CatalogParseError(f"{where}: missing keys {sorted(missing)}")
        if fields["id"] in seen:
            raise CatalogParseError(f"{where}: duplicate id {fields['id']!r}")
        seen.add(fields["id"])
        try:
            degree = int(fields["degree"])
            declared = int(fields["order"])
            gens = [parse_permutation(t, degree) for t in fields["gens"].split(";") if t]
        except ValueError as exc:
            raise CatalogParseError(f"{where}: {exc}") from exc
        group = PermGroup(gens, degree=degree)
        if group.order != declared:
            raise DeclaredOrderMismatchError(
                f"{where}: {fields['id']} declares order {declared}, generators give {group.order}"
            )
        tags = frozenset(t for t in fields.get("tags", "").split(",") if t)
        entries.append(GroupEntry(id=fields["id"], group=group, tags=tags, source=f"file:{where}"))
    logger.info("parsed %d catalog entries from %s", len(entries), source)
    return Catalog(entries=entries, coverage=coverage)


def load_catalog(path) -> Catalog:
    path = Path(path)
    return parse_catalog(path.read_text(encoding="utf-8"), source=str(path))


def load_catalogs(paths: Sequence[str]) -> Optional[Catalog]:
    catalog = None
    for path in paths:
        loaded = load_catalog(path)
        catalog = loaded if catalog is None else catalog.merged(loaded)
    return catalog


def format_catalog(catalog: Catalog) -> str:
    stanzas = []
    for claim in catalog.coverage:
        stanzas.append(f"coverage={claim}")
    for e in catalog.entries:
        line = f"id={e.id} degree={e.group.degree} gens={';'.join(str(g) for g in e.group.generators)} order={e.order}"
        if e.tags:
            line += " tags=" + ",".join(sorted(e.tags))
        stanzas.append(line)
    return "\n\n".join(stanzas) + "\n"


def save_catalog(catalog: Catalog, path) -> None:
    Path(path).write_text(format_catalog(catalog), encoding="utf-8")


# Generation ------------------------------------------------------------------


def is_two_generated(G: PermGroup) -> Optional[Tuple[Permutation, Permutation]]:
    """A generating pair, first element up to conjugacy, or None."""
    if G.order == 1:
        return G.identity, G.identity
    for x in sorted(G.class_representatives, key=lambda p: (-p.order(), p._a)):
        if x.is_identity():
            continue
        for y in G.elements:
            if G.generates([x, y]):
                return x, y
    return None


class TwoGeneratedClasses(NamedTuple):
    groups: List[GroupEntry]
    unresolved: List[Tuple[str, str]]  # pairs whose isomorphism test ran out of budget


def two_generated_classes(catalog: Catalog, order: int, node_budget: int = DEFAULT_NODE_BUDGET) -> TwoGeneratedClasses:
    """Pairwise non-isomorphic 2-generated catalog groups of the given order.

    A group is merged into an earlier one only on a definite isomorphism; pairs
    left undecided are listed, so the count is then an upper bound.
    """
    reps: List[GroupEntry] = []
    unresolved: List[Tuple[str, str]] = []
    for entry in catalog.of_order(order):
        if is_two_generated(entry.group) is None:
            continue
        tests = [(r, are_isomorphic(entry.group, r.group, node_budget=node_budget)) for r in reps]
        if any(same is True for _, same in tests):
            continue
        undecided = [(r.id, entry.id) for r, same in tests if same is None]
        if undecided:
            logger.warning("isomorphism undecided for %s", ", ".join(f"{a}~{b}" for a, b in undecided))
        unresolved += undecided
        reps.append(entry)
    return TwoGeneratedClasses(reps, unresolved)
