"""Finitely presented groups realized as permutation groups by coset enumeration.

Presentation text grammar::

    presentation := '<' generators '|' [ relator { ',' relator } ] '>'
    generators   := name { ',' name }
    relator      := word
    word         := factor { '*' factor }
    factor       := atom [ '^' integer ]
    atom         := name | '(' word ')'
    name         := letter { letter | digit | '_' }

Whitespace is ignored. ``<x,y | x^4, y^18, (x*y)^2, (x^-1*y)^2>`` is the
Accola-Maclachlan presentation for genus 8.

Enumeration is over the trivial subgroup, so a complete coset table is the
regular representation. Right cosets are permuted on the right; generator
``x`` is realized as the permutation ``i -> i.x^-1`` so that evaluating a word
letter by letter with ``permcore.compose`` is a homomorphism.
"""
import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from sympy.combinatorics.coset_table import coset_enumeration_r
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from permcore import Permutation, PermGroup, compose

logger = logging.getLogger(__name__)

Letter = Tuple[str, int]
Word = Tuple[Letter, ...]

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")
_TOKEN_RE = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)|(-?\d+)|(\S))")


class PresentationError(ValueError):
    pass


class CosetOverflowError(RuntimeError):
    pass


def free_reduce(word: Sequence[Letter]) -> Word:
    out: List[Letter] = []
    for name, exp in word:
        if out and out[-1] == (name, -exp):
            out.pop()
        else:
            out.append((name, exp))
    return tuple(out)


def invert_word(word: Sequence[Letter]) -> Word:
    return tuple((name, -exp) for name, exp in reversed(word))


class Presentation(BaseModel):
    model_config = ConfigDict(frozen=True)

    generator_names: Tuple[str, ...]
    relators: Tuple[Word, ...]

    @field_validator("generator_names")
    @classmethod
    def _names(cls, names: Tuple[str, ...]) -> Tuple[str, ...]:
        if not names:
            raise ValueError("a presentation needs at least one generator")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"bad generator name {name!r}")
        return names

    @model_validator(mode="after")
    def _relators_use_declared_generators(self) -> "Presentation":
        declared = set(self.generator_names)
        for word in self.relators:
            if not word:
                raise ValueError("empty relator")
            for name, exp in word:
                if name not in declared:
                    raise ValueError(f"relator mentions undeclared generator {name!r}")
                if exp not in (1, -1):
                    raise ValueError(f"letters carry exponent +1 or -1, got {exp}")
        return self

    def __str__(self) -> str:
        return format_presentation(self)


class _WordParser:
    def __init__(self, text: str):
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                break
            name, number, sym = m.groups()
            if name is not None:
                self.tokens.append(("name", name))
            elif number is not None:
                self.tokens.append(("int", int(number)))
            elif sym is not None:
                self.tokens.append(("sym", sym))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise PresentationError(f"expected {value or kind} at token {self.i}, found {tok[1]!r}")
        self.i += 1
        return tok[1]

    def word(self) -> List[Letter]:
        letters = self.factor()
        while self.peek() == ("sym", "*"):
            self.i += 1
            letters += self.factor()
        return letters

    def factor(self) -> List[Letter]:
        kind, value = self.peek()
        if kind == "name":
            self.i += 1
            base = [(value, 1)]
        elif (kind, value) == ("sym", "("):
            self.i += 1
            base = self.word()
            self.take("sym", ")")
        else:
            raise PresentationError(f"expected a generator or '(' at token {self.i}, found {value!r}")
        if self.peek() == ("sym", "^"):
            self.i += 1
            k = self.take("int")
            base = list(base if k >= 0 else invert_word(base)) * abs(k)
        return base


def parse_presentation(text: str) -> Presentation:
    s = text.strip()
    if not (s.startswith("<") and s.endswith(">")) or "|" not in s:
        raise PresentationError(f"presentation must look like <gens | relators>: {text!r}")
    gens_part, rels_part = s[1:-1].split("|", 1)
    names = tuple(n.strip() for n in gens_part.split(",") if n.strip())
    relators = []
    for chunk in _split_top_level(rels_part):
        parser = _WordParser(chunk)
        letters = parser.word()
        if parser.i != len(parser.tokens):
            raise PresentationError(f"trailing text in relator {chunk!r}")
        relators.append(free_reduce(letters))
    try:
        return Presentation(generator_names=names, relators=tuple(relators))
    except ValueError as exc:
        raise PresentationError(str(exc)) from exc


def _split_top_level(text: str) -> List[str]:
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [p for p in (p.strip() for p in parts) if p]


def format_word(word: Sequence[Letter]) -> str:
    runs: List[List] = []
    for name, exp in word:
        if runs and runs[-1][0] == name and (runs[-1][1] > 0) == (exp > 0):
            runs[-1][1] += exp
        else:
            runs.append([name, exp])
    return "*".join(name if exp == 1 else f"{name}^{exp}" for name, exp in runs)


def format_presentation(p: Presentation) -> str:
    return f"<{','.join(p.generator_names)} | {', '.join(format_word(w) for w in p.relators)}>"


class CosetTable(BaseModel):
    """Coset table over the trivial subgroup; points are numbered from 1."""

    cosets: int
    status: Literal["complete", "overflow"]
    max_cosets: int
    action: Dict[str, List[int]] = {}

    def generator_permutation(self, name: str) -> Permutation:
        # x acts as i -> i.x^-1, see module docstring
        return Permutation(self.action[f"{name}^-1"])

    def to_perm_group(self, p: Presentation) -> PermGroup:
        if self.status != "complete":
            raise CosetOverflowError(f"coset enumeration overflowed {self.max_cosets} cosets")
        return PermGroup([self.generator_permutation(n) for n in p.generator_names], degree=self.cosets)


def _verify_table(p: Presentation, action: Dict[str, List[int]], n: int) -> None:
    for name, images in action.items():
        if sorted(images) != list(range(1, n + 1)):
            raise RuntimeError(f"coset action of {name} is not a bijection")
    for word in p.relators:
        for start in range(1, n + 1):
            c = start
            for name, exp in word:
                c = action[name if exp == 1 else f"{name}^-1"][c - 1]
            if c != start:
                raise RuntimeError(f"relator {format_word(word)} moves coset {start}")


def todd_coxeter(p: Presentation, max_cosets: int) -> CosetTable:
    """HLT enumeration over the trivial subgroup.

    Overflow is returned as a status, never as a wrong order.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    F, *gens = free_group(",".join(p.generator_names))
    by_name = dict(zip(p.generator_names, gens))
    relators = []
    for word in p.relators:
        w = F.identity
        for name, exp in word:
            w = w * by_name[name] ** exp
        relators.append(w)
    try:
        table = coset_enumeration_r(FpGroup(F, relators), [], max_cosets=max_cosets)
    except ValueError as exc:
        logger.warning("coset enumeration of %s overflowed: %s", format_presentation(p), exc)
        return CosetTable(cosets=0, status="overflow", max_cosets=max_cosets)
    if not table.is_complete():
        return CosetTable(cosets=0, status="overflow", max_cosets=max_cosets)
    table.compress()
    table.standardize()
    rows = table.table
    action = {}
    for name, gen in by_name.items():
        action[name] = [row[table.A_dict[gen]] + 1 for row in rows]
        action[f"{name}^-1"] = [row[table.A_dict[gen**-1]] + 1 for row in rows]
    _verify_table(p, action, len(rows))
    logger.info("enumerated %d cosets for %s", len(rows), format_presentation(p))
    return CosetTable(cosets=len(rows), status="complete", max_cosets=max_cosets, action=action)


def evaluate_word(word: Sequence[Letter], images: Dict[str, Permutation]) -> Permutation:
    degree = next(iter(images.values())).degree
    result = Permutation.identity(degree)
    for name, exp in word:
        g = images[name]
        result = compose(result, g if exp == 1 else g.inverse())
    return result


def accola_maclachlan_presentation(sigma: int) -> Presentation:
    if sigma < 2:
        raise ValueError(f"genus must be at least 2, got {sigma}")
    return parse_presentation(f"<x,y | x^4, y^{2 * (sigma + 1)}, (x*y)^2, (x^-1*y)^2>")


@dataclass(frozen=True)
class AccolaMaclachlanGroup:
    """H_sigma of order 8(sigma+1) with its named elements."""

    sigma: int
    group: PermGroup
    x: Permutation
    y: Permutation

    @property
    def xy(self) -> Permutation:
        return compose(self.x, self.y)

    @property
    def x_inv_y(self) -> Permutation:
        return compose(self.x.inverse(), self.y)

    def named_elements(self) -> Dict[str, Permutation]:
        return {"x": self.x, "y": self.y, "xy": self.xy, "x^-1y": self.x_inv_y}


def accola_maclachlan_group(sigma: int, coset_budget: Optional[int] = None) -> AccolaMaclachlanGroup:
    p = accola_maclachlan_presentation(sigma)
    budget = coset_budget or 1000 * (sigma + 1)
    table = todd_coxeter(p, budget)
    if table.status != "complete":
        raise CosetOverflowError(f"H_{sigma} did not close within {budget} cosets")
    group = table.to_perm_group(p)
    expected = 8 * (sigma + 1)
    if group.order != expected or table.cosets != expected:
        raise RuntimeError(f"H_{sigma} realized with order {group.order}, expected {expected}")
    x = table.generator_permutation("x")
    y = table.generator_permutation("y")
    images = {"x": x, "y": y}
    for word in p.relators:
        if not evaluate_word(word, images).is_identity():
            raise RuntimeError(f"relator {format_word(word)} fails on the realized generators")
    return AccolaMaclachlanGroup(sigma, group, x, y)
