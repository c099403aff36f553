"""Exact permutation-group arithmetic.

Permutations act on the points 1..degree and compose rightmost-first:
``compose(p, q)(x) == p(q(x))``. Under this convention
``compose((1,2,3,4,5), (1,2))`` is ``(1,3,4,5)`` and its inverse prints as
``(1,5,4,3)``, the cycle written ``(5,4,3,1)`` in cycle notation elsewhere.

Group orders and membership come from sympy's deterministic Schreier-Sims
stabilizer chain; everything that needs the element list (conjugacy classes,
embeddings, subgroup search) enumerates the group below a configurable ceiling.
"""
import logging
import re
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import combinations
from math import lcm
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation as SymPermutation
from sympy.combinatorics import PermutationGroup as SymPermutationGroup

logger = logging.getLogger(__name__)

MAX_ENUMERATION = 10**6
DEFINITIVE_EMBEDDING_CEILING = 2000
SUBGROUP_CEILING = 2000
ORDER_CEILING = 10**7
DEFAULT_NODE_BUDGET = 10**7

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class DegreeMismatchError(ValueError):
    pass


class PermutationParseError(ValueError):
    pass


class CeilingExceededError(RuntimeError):
    pass


class Permutation:
    """Immutable permutation of {1..degree}.

    Stored 0-based internally; ``images`` exposes the 1-based image tuple.
    """

    __slots__ = ("_a", "_hash", "_order")

    def __init__(self, images: Sequence[int]):
        a = tuple(int(x) - 1 for x in images)
        if not a:
            raise PermutationParseError("degree must be positive")
        if sorted(a) != list(range(len(a))):
            raise PermutationParseError(f"images {tuple(images)} are not a bijection on 1..{len(a)}")
        self._set(a)

    def _set(self, a: Tuple[int, ...]) -> None:
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_hash", hash(a))
        object.__setattr__(self, "_order", None)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def _trusted(cls, a: Tuple[int, ...]) -> "Permutation":
        p = cls.__new__(cls)
        p._set(a)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise PermutationParseError("degree must be positive")
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        a = list(range(degree))
        seen = set()
        for cycle in cycles:
            for point in cycle:
                if not 1 <= point <= degree:
                    raise PermutationParseError(f"point {point} outside 1..{degree}")
                if point in seen:
                    raise PermutationParseError(f"point {point} repeated in cycle notation")
                seen.add(point)
            for i, point in enumerate(cycle):
                a[point - 1] = cycle[(i + 1) % len(cycle)] - 1
        return cls._trusted(tuple(a))

    @property
    def degree(self) -> int:
        return len(self._a)

    @property
    def images(self) -> Tuple[int, ...]:
        return tuple(x + 1 for x in self._a)

    def __call__(self, point: int) -> int:
        return self._a[point - 1] + 1

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._a))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point, ordered by that point."""
        seen = [False] * len(self._a)
        out = []
        for start in range(len(self._a)):
            if seen[start]:
                continue
            cycle = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x + 1)
                x = self._a[x]
            if len(cycle) > 1:
                out.append(tuple(cycle))
        return out

    def cycle_type(self) -> Tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        if self._order is None:
            object.__setattr__(self, "_order", reduce(lcm, (len(c) for c in self.cycles()), 1))
        return self._order

    def inverse(self) -> "Permutation":
        inv = [0] * len(self._a)
        for i, x in enumerate(self._a):
            inv[x] = i
        return Permutation._trusted(tuple(inv))

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.order(), self._a)

    def to_sympy(self) -> SymPermutation:
        return SymPermutation(list(self._a))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Permutation.identity(self.degree)
        while k:
            if k & 1:
                result = compose(result, base)
            base = compose(base, base)
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._a == other._a

    def __lt__(self, other: "Permutation") -> bool:
        return self._a < other._a

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return format_permutation(self)

    def __repr__(self) -> str:
        return f"Permutation('{self}', degree={self.degree})"

    def __reduce__(self):
        return (Permutation, (self.images,))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(pq)(x) = p(q(x)): q is applied first."""
    if len(p._a) != len(q._a):
        raise DegreeMismatchError(f"cannot compose degree {p.degree} with degree {q.degree}")
    pa = p._a
    return Permutation._trusted(tuple(pa[x] for x in q._a))


def product(perms: Sequence[Permutation], degree: int) -> Permutation:
    """Left-to-right product p1 p2 ... pk under compose."""
    result = Permutation.identity(degree)
    for p in perms:
        result = compose(result, p)
    return result


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def commutator(a: Permutation, b: Permutation) -> Permutation:
    """[a, b] = a b a^-1 b^-1."""
    return compose(compose(a, b), compose(a.inverse(), b.inverse()))


def conjugate(g: Permutation, x: Permutation) -> Permutation:
    """g x g^-1."""
    return compose(compose(g, x), g.inverse())


def element_order(p: Permutation) -> int:
    return p.order()


def format_permutation(p: Permutation) -> str:
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(x) for x in c) + ")" for c in cycles)


def parse_permutation(text: str, degree: Optional[int] = None) -> Permutation:
    """Parse cycle notation such as ``(1,2,3)(4,5)``; ``()`` is the identity.

    Without an explicit degree the largest mentioned point is used.
    """
    s = "".join(text.split())
    if not s:
        raise PermutationParseError("empty permutation text")
    cycles = []
    pos = 0
    for m in _CYCLE_RE.finditer(s):
        if m.start() != pos:
            raise PermutationParseError(f"unexpected text {s[pos:m.start()]!r} in {text!r}")
        pos = m.end()
        body = m.group(1)
        if not body:
            continue
        try:
            cycles.append(tuple(int(tok) for tok in body.split(",")))
        except ValueError as exc:
            raise PermutationParseError(f"bad cycle {body!r} in {text!r}") from exc
    if pos != len(s):
        raise PermutationParseError(f"unexpected text {s[pos:]!r} in {text!r}")
    largest = max((max(c) for c in cycles), default=1)
    if degree is None:
        degree = largest
    elif largest > degree:
        raise PermutationParseError(f"point {largest} exceeds degree {degree}")
    return Permutation.from_cycles(cycles, degree)


class ConjugacyClass(NamedTuple):
    representative: Permutation
    size: int


class PermGroup:
    """A permutation group given by generators.

    Order and membership come from the stabilizer chain; the element list,
    conjugacy classes and multiplication table are computed on first use and
    cached. Instances are never mutated after construction.
    """

    def __init__(
        self,
        generators: Sequence[Permutation],
        degree: Optional[int] = None,
        order_ceiling: int = ORDER_CEILING,
        max_enumeration: int = MAX_ENUMERATION,
    ):
        gens = tuple(generators)
        if degree is None:
            if not gens:
                raise ValueError("a group needs generators or an explicit degree")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatchError(f"generator {g} has degree {g.degree}, expected {degree}")
        if not gens:
            gens = (Permutation.identity(degree),)
        self.degree = degree
        self.generators = gens
        self.max_enumeration = max_enumeration
        self._sympy = SymPermutationGroup([g.to_sympy() for g in gens])
        self.order = int(self._sympy.order())
        if self.order > order_ceiling:
            raise CeilingExceededError(f"group order {self.order} exceeds ceiling {order_ceiling}")

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"PermGroup(order={self.order}, degree={self.degree}, generators=[{gens}])"

    @cached_property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        return bool(self._sympy.contains(p.to_sympy()))

    def subgroup(self, generators: Sequence[Permutation]) -> "PermGroup":
        return PermGroup(generators, degree=self.degree, max_enumeration=self.max_enumeration)

    def generates(self, elements: Sequence[Permutation]) -> bool:
        """True when the given elements of this group generate all of it."""
        if self.order == 1:
            return True
        elems = [e for e in elements if not e.is_identity()]
        if not elems:
            return False
        return int(SymPermutationGroup([e.to_sympy() for e in elems]).order()) == self.order

    def is_abelian(self) -> bool:
        return all(compose(a, b) == compose(b, a) for a, b in combinations(self.generators, 2))

    def _require_enumerable(self) -> None:
        if self.order > self.max_enumeration:
            raise CeilingExceededError(
                f"group of order {self.order} exceeds the enumeration ceiling {self.max_enumeration}"
            )

    @cached_property
    def elements(self) -> Tuple[Permutation, ...]:
        """All elements, sorted by (element order, image sequence)."""
        self._require_enumerable()
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = compose(g, x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != self.order:
            raise RuntimeError(f"closure found {len(seen)} elements, stabilizer chain says {self.order}")
        return tuple(sorted(seen, key=Permutation.sort_key))

    @cached_property
    def index(self) -> Dict[Permutation, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @cached_property
    def elements_by_order(self) -> Dict[int, Tuple[Permutation, ...]]:
        buckets: Dict[int, List[Permutation]] = {}
        for g in self.elements:
            buckets.setdefault(g.order(), []).append(g)
        return {k: tuple(v) for k, v in buckets.items()}

    def elements_of_order(self, n: int) -> Tuple[Permutation, ...]:
        return self.elements_by_order.get(n, ())

    @cached_property
    def order_statistics(self) -> Counter:
        return Counter({k: len(v) for k, v in self.elements_by_order.items()})

    @cached_property
    def conjugacy_classes(self) -> Tuple[ConjugacyClass, ...]:
        """One class per representative; the representative is the least element
        of its class under (element order, image sequence)."""
        self._require_enumerable()
        inverses = [g.inverse() for g in self.generators]
        classified = set()
        classes = []
        for x in self.elements:
            if x in classified:
                continue
            orbit = {x}
            queue = deque([x])
            while queue:
                y = queue.popleft()
                for g, gi in zip(self.generators, inverses):
                    z = compose(compose(g, y), gi)
                    if z not in orbit:
                        orbit.add(z)
                        queue.append(z)
            classified |= orbit
            classes.append(ConjugacyClass(x, len(orbit)))
        return tuple(classes)

    @cached_property
    def class_representatives(self) -> frozenset:
        return frozenset(c.representative for c in self.conjugacy_classes)


def group_from_generators(
    gens: Sequence[Permutation],
    order_ceiling: int = ORDER_CEILING,
    max_enumeration: int = MAX_ENUMERATION,
) -> PermGroup:
    if not gens:
        raise ValueError("group_from_generators needs at least one generator")
    return PermGroup(gens, order_ceiling=order_ceiling, max_enumeration=max_enumeration)


def conjugacy_class_reps(G: PermGroup) -> List[ConjugacyClass]:
    return list(G.conjugacy_classes)


def closure(generators: Sequence[Permutation], degree: int, limit: Optional[int] = None) -> Optional[frozenset]:
    """Element set generated by ``generators``; None once it grows past ``limit``."""
    identity = Permutation.identity(degree)
    seen = {identity}
    queue = deque([identity])
    gens = [g for g in generators if not g.is_identity()]
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen.add(y)
                if limit is not None and len(seen) > limit:
                    return None
                queue.append(y)
    return frozenset(seen)


@dataclass(frozen=True)
class Monomorphism:
    source: PermGroup
    target: PermGroup
    images: Tuple[Permutation, ...]  # images of source.generators, in order

    def image_of(self, h: Permutation) -> Permutation:
        mapping = _extend_homomorphism(self.source.generators, self.images, self.source.degree, self.target.degree)
        if mapping is None:
            raise ValueError("stored images do not define a homomorphism")
        return mapping[h]

    def verify(self) -> bool:
        """Independent check: homomorphic, injective, image of order |source|."""
        if self.target.order % self.source.order:
            return False
        if not all(self.target.contains(t) for t in self.images):
            return False
        mapping = _extend_homomorphism(self.source.generators, self.images, self.source.degree, self.target.degree)
        if mapping is None or len(mapping) != self.source.order:
            return False
        if len(set(mapping.values())) != self.source.order:
            return False
        image = PermGroup(self.images, degree=self.target.degree)
        return image.order == self.source.order


@dataclass(frozen=True)
class EmbeddingResult:
    status: str  # "found" | "absent" | "inconclusive"
    monomorphism: Optional[Monomorphism] = None
    method: str = "brute force"
    nodes: int = 0

    @property
    def definitive(self) -> bool:
        return self.status != "inconclusive"


def _extend_homomorphism(
    sources: Sequence[Permutation],
    targets: Sequence[Permutation],
    source_degree: int,
    target_degree: int,
) -> Optional[Dict[Permutation, Permutation]]:
    """Walk the Cayley graph of <sources>; None if s*h and t*phi(h) ever disagree."""
    e_source = Permutation.identity(source_degree)
    mapping = {e_source: Permutation.identity(target_degree)}
    queue = deque([e_source])
    while queue:
        h = queue.popleft()
        gh = mapping[h]
        for s, t in zip(sources, targets):
            h2 = compose(s, h)
            g2 = compose(t, gh)
            prev = mapping.get(h2)
            if prev is None:
                mapping[h2] = g2
                queue.append(h2)
            elif prev != g2:
                return None
    return mapping


def _irredundant_generators(H: PermGroup) -> List[Permutation]:
    gens: List[Permutation] = []
    size = 1
    for g in sorted(H.generators, key=lambda p: -p.order()):
        if g.is_identity():
            continue
        trial = closure(gens + [g], H.degree)
        if len(trial) > size:
            gens.append(g)
            size = len(trial)
        if size == H.order:
            break
    return gens


def find_monomorphism(
    H: PermGroup,
    G: PermGroup,
    node_budget: int = DEFAULT_NODE_BUDGET,
    definitive_ceiling: int = DEFINITIVE_EMBEDDING_CEILING,
) -> EmbeddingResult:
    """Backtracking search for an injective homomorphism H -> G.

    Generator images range over elements of matching order; the first image is
    taken up to conjugacy in G. Below ``definitive_ceiling`` the search runs
    without a node budget, so "absent" is definitive there.
    """
    if H.order > G.order or G.order % H.order:
        return EmbeddingResult("absent", method="lagrange")
    if H.order == 1:
        mono = Monomorphism(H, G, tuple(G.identity for _ in H.generators))
        return EmbeddingResult("found", mono)

    budget = None if G.order <= definitive_ceiling else node_budget
    gens = _irredundant_generators(H)
    candidates = [list(G.elements_of_order(g.order())) for g in gens]
    reps = G.class_representatives
    candidates[0] = [c for c in candidates[0] if c in reps]

    nodes = 0
    chosen: List[Permutation] = []

    def search(depth: int) -> Optional[Dict[Permutation, Permutation]]:
        nonlocal nodes
        for candidate in candidates[depth]:
            nodes += 1
            if budget is not None and nodes > budget:
                raise _BudgetExhausted
            chosen.append(candidate)
            mapping = _extend_homomorphism(gens[: depth + 1], chosen, H.degree, G.degree)
            if mapping is not None and len(set(mapping.values())) == len(mapping):
                if depth + 1 == len(gens):
                    return mapping
                found = search(depth + 1)
                if found is not None:
                    return found
            chosen.pop()
        return None

    try:
        mapping = search(0)
    except _BudgetExhausted:
        logger.warning("embedding search of order %d into order %d exhausted %d nodes", H.order, G.order, budget)
        return EmbeddingResult("inconclusive", nodes=nodes)
    if mapping is None:
        return EmbeddingResult("absent", nodes=nodes)
    mono = Monomorphism(H, G, tuple(mapping[g] for g in H.generators))
    if not mono.verify():
        raise RuntimeError("embedding search produced a map that fails verification")
    assert G.order % H.order == 0
    return EmbeddingResult("found", mono, nodes=nodes)


class _BudgetExhausted(Exception):
    pass


def are_isomorphic(H: PermGroup, G: PermGroup, node_budget: int = DEFAULT_NODE_BUDGET) -> Optional[bool]:
    """Order and element-order screen, then embeddings both ways. None when inconclusive."""
    if H.order != G.order:
        return False
    if H.order_statistics != G.order_statistics:
        return False
    forward = find_monomorphism(H, G, node_budget=node_budget)
    if forward.status == "inconclusive":
        return None
    if forward.status == "absent":
        return False
    backward = find_monomorphism(G, H, node_budget=node_budget)
    if backward.status == "inconclusive":
        return None
    return backward.status == "found"


def element_of_order(G: PermGroup, n: int) -> Optional[Permutation]:
    found = G.elements_of_order(n)
    return found[0] if found else None


def klein_four_witness(G: PermGroup) -> Optional[Tuple[Permutation, Permutation]]:
    involutions = G.elements_of_order(2)
    for a, b in combinations(involutions, 2):
        if compose(a, b) == compose(b, a):
            return a, b
    return None


def has_klein_four(G: PermGroup) -> bool:
    return klein_four_witness(G) is not None


def subgroups_of_order(G: PermGroup, k: int, ceiling: int = SUBGROUP_CEILING) -> List[PermGroup]:
    """All order-k subgroups up to conjugacy.

    Every subgroup of order k is reached by adding one element at a time along
    a chain of subgroups whose orders divide k, starting from cyclic subgroups.
    """
    if k < 1 or G.order % k:
        return []
    if G.order > ceiling:
        raise CeilingExceededError(f"subgroup enumeration needs |G| <= {ceiling}, got {G.order}")

    known: Dict[frozenset, Tuple[Permutation, ...]] = {}
    queue: deque = deque()
    for g in G.elements:
        if k % g.order():
            continue
        members = closure([g], G.degree)
        if members not in known:
            known[members] = (g,)
            queue.append(members)
    while queue:
        members = queue.popleft()
        if len(members) == k:
            continue
        gens = known[members]
        for g in G.elements:
            if g in members:
                continue
            bigger = closure(gens + (g,), G.degree, limit=k)
            if bigger is None or k % len(bigger) or bigger in known:
                continue
            known[bigger] = gens + (g,)
            queue.append(bigger)

    wanted = sorted((m for m in known if len(m) == k), key=lambda m: sorted(p._a for p in m))
    covered = set()
    reps = []
    for members in wanted:
        if members in covered:
            continue
        for g in G.elements:
            gi = g.inverse()
            covered.add(frozenset(compose(compose(g, x), gi) for x in members))
        reps.append(G.subgroup(known[members]))
    return reps
