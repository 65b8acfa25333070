"""The braid layer: extensions of the base presentations by an outer letter t.

Two normal forms live side by side here.  semidirect_nf pushes every t
through the word with the conjugation word maps and reduces the remainder
with the base rewriting system; a trivial result proves the braid trivial,
but for n >= 3 a nonzero remainder proves nothing, because the conjugation
maps do not respect the base presentation's relations (verify_extension
exhibits the failing relator images).  split_nf is the exact two-part
normal form of the braid layer as a semidirect product of two free groups,
pushing every base letter left through the stable-letter action; it is
sound and complete, and acts as the authority whenever the push leaves a
remainder.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .pingpong import (
    CERTIFIED,
    REFUTED,
    Bounds,
    Certificate,
    Condition,
    OracleReport,
    SubgroupSpec,
    _abstract_factors,
    _factor_desc,
    _factor_word,
    descends_to_identity,
)
from .presentation import HnnPresentation, SemidirectExtension, p2, relators
from .rewrite import RuleSystem, nf
from .words import (
    EPSILON,
    OUTER,
    Gen,
    GenKind,
    Letter,
    Word,
    base_gen,
    commutator,
    concat,
    conjugate,
    exp_sum,
    format_word,
    free_reduce,
    invert,
    stable_gen,
    word,
)

T_WORD = word(OUTER)


@dataclass(frozen=True)
class SemidirectElement:
    """A pushed word: base-presentation normal form g and outer exponent k."""

    g: Word
    k: int

    @property
    def is_identity(self) -> bool:
        return not self.g and self.k == 0

    def render(self, alphabet=None) -> str:
        return f"({format_word(self.g, alphabet)}, t^{self.k})"


@lru_cache(maxsize=None)
def _system(p: HnnPresentation) -> RuleSystem:
    return RuleSystem(p)


def phi_power(ext: SemidirectExtension, w: Word, k: int) -> Word:
    """Apply the outer conjugation map (k > 0) or its inverse (k < 0) |k| times."""
    if any(l.gen.kind is GenKind.OUTER for l in w):
        raise ValueError("phi_power expects a word without outer letters")
    m = ext.phi if k > 0 else ext.phi_inv
    out = free_reduce(w)
    for _ in range(abs(k)):
        out = m.apply(out)
    return out


@lru_cache(maxsize=None)
def _pushed_letter(ext: SemidirectExtension, g: Gen, sign: int, k: int) -> Word:
    return phi_power(ext, Word((Letter(g, sign),)), k)


def semidirect_nf(ext: SemidirectExtension, w: Word) -> SemidirectElement:
    """Push every t rightward, then reduce the remainder over the base rules.

    Sound: an identity result means the word is trivial in the extension.
    For n >= 3 the converse fails on some trivial words, so a nonzero
    remainder should be settled with split_nf.
    """
    k = 0
    parts: list[Letter] = []
    for l in w:
        if l.gen.kind is GenKind.OUTER:
            k += l.sign
        else:
            parts.extend(_pushed_letter(ext, l.gen, l.sign, -k).letters)
    g = nf(free_reduce(Word(tuple(parts))), _system(ext.base))
    return SemidirectElement(g, k)


def semidirect_equal(ext: SemidirectExtension, u: Word, v: Word) -> bool:
    """Equality of pushed forms; agreement implies equality in the extension."""
    return semidirect_nf(ext, u) == semidirect_nf(ext, v)


# ---------------------------------------------------------------------------
# The exact splitting: every word over {y_*} u {x_*, t} decomposes uniquely
# as (pure y-word) . (pure x/t-word).  Base letters act on the x/t free
# group by conjugation; pushing them left is a relation-by-relation
# rewriting whose endpoint is unique, so triviality of both parts decides
# the word problem completely.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitNormalForm:
    y_part: Word
    x_part: Word

    @property
    def is_identity(self) -> bool:
        return not self.y_part and not self.x_part

    def render(self, alphabet=None) -> str:
        return f"({format_word(self.y_part, alphabet)} | {format_word(self.x_part, alphabet)})"


def _append_reduced(out: list[Letter], l: Letter) -> None:
    if out and out[-1] == l.inverse():
        out.pop()
    else:
        out.append(l)


class BraidSplitting:
    """Letter-level action tables for the splitting of the rank-n braid layer.

    For each base index j the table gives the conjugate y_j^-1 g y_j (and its
    inverse y_j g y_j^-1) of every x/t letter as an x/t word.  Mutual
    inverseness of the two tables is re-verified at construction.
    """

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("splitting requires n >= 2")
        self.n = n
        t = Letter(OUTER, 1)
        ti = Letter(OUTER, -1)
        pos: dict[int, dict[Gen, tuple[Letter, ...]]] = {}
        neg: dict[int, dict[Gen, tuple[Letter, ...]]] = {}
        for j in range(1, n):
            xj = Letter(stable_gen(j), 1)
            xji = Letter(stable_gen(j), -1)
            fwd: dict[Gen, tuple[Letter, ...]] = {}
            bwd: dict[Gen, tuple[Letter, ...]] = {}
            for i in range(1, n):
                xi = Letter(stable_gen(i), 1)
                if i < j:
                    fwd[xi.gen] = (xi,)
                    bwd[xi.gen] = (xi,)
                elif i == j:
                    fwd[xi.gen] = (xj, t, xj, ti, xji)
                    bwd[xi.gen] = (ti, xj, t)
                else:
                    fwd[xi.gen] = (xj, t, xji, ti, xi, t, xj, ti, xji)
                    bwd[xi.gen] = (ti, xji, t, xj, xi, xji, ti, xj, t)
            fwd[OUTER] = (xj, t, xji)
            bwd[OUTER] = (ti, xji, t, xj, t)
            pos[j] = fwd
            neg[j] = bwd
        self._tables = {1: pos, -1: neg}
        for j in range(1, n):
            for g in list(pos[j]):
                one = [Letter(g, 1)]
                if self.act(j, 1, self.act(j, -1, one)) != one:
                    raise AssertionError(f"action tables not mutually inverse at y{j}, {g.name}")
                if self.act(j, -1, self.act(j, 1, one)) != one:
                    raise AssertionError(f"action tables not mutually inverse at y{j}, {g.name}")

    def act(self, j: int, eps: int, u: list[Letter]) -> list[Letter]:
        table = self._tables[eps][j]
        out: list[Letter] = []
        for l in u:
            img = table[l.gen]
            if l.sign == -1:
                img = tuple(m.inverse() for m in reversed(img))
            for m in img:
                _append_reduced(out, m)
        return out

    def nf(self, w: Word) -> SplitNormalForm:
        q: list[Letter] = []
        u: list[Letter] = []
        for l in w:
            if l.gen.kind is GenKind.BASE:
                _append_reduced(q, l)
                u = self.act(l.gen.index, l.sign, u)
            else:
                _append_reduced(u, l)
        return SplitNormalForm(Word(tuple(q)), Word(tuple(u)))

    def is_trivial(self, w: Word) -> bool:
        return self.nf(w).is_identity

    def equal(self, u: Word, v: Word) -> bool:
        return self.nf(concat(invert(v), u)).is_identity


@lru_cache(maxsize=None)
def _splitting(n: int) -> BraidSplitting:
    return BraidSplitting(n)


def _rank(ext: SemidirectExtension) -> int:
    return len(ext.base.alphabet.base_names) + 1


def split_nf(ext: SemidirectExtension, w: Word) -> SplitNormalForm:
    """The exact two-part normal form; identity iff the braid word is trivial."""
    return _splitting(_rank(ext)).nf(w)


def braid_trivial(ext: SemidirectExtension, w: Word) -> bool:
    return split_nf(ext, w).is_identity


def braid_equal(ext: SemidirectExtension, u: Word, v: Word) -> bool:
    """Complete equality test for the braid layer via the splitting."""
    return _splitting(_rank(ext)).equal(u, v)


# ---------------------------------------------------------------------------
# Verification reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionReport:
    checks: tuple[Condition, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def render(self) -> str:
        lines = [f"extension checks: {'all pass' if self.ok else 'FAILURES'}"]
        for c in self.checks:
            mark = "ok" if c.ok else "FAIL"
            suffix = f"  [{c.witness}]" if c.witness else ""
            lines.append(f"  {mark:4} {c.name}{suffix}")
        return "\n".join(lines)


def verify_extension(ext: SemidirectExtension) -> ExtensionReport:
    """Check that the outer conjugation maps define an automorphism of the base.

    (a) every base relator's image normalizes to the identity, (b) the two
    maps are mutually inverse on generators, (c) both project to the identity
    on the stable-by-base direct product.  For the braid presets (a) fails
    from n = 3 on; the report carries the witnessing relator images.
    """
    system = _system(ext.base)
    alphabet = ext.base.alphabet
    checks: list[Condition] = []
    for idx, r in enumerate(relators(ext.base)):
        img = ext.phi.apply(r)
        v = nf(img, system)
        checks.append(
            Condition(
                f"relator_image_trivial[{idx}]",
                not v,
                None
                if not v
                else f"image of {format_word(r, alphabet)} has normal form {format_word(v, alphabet)}",
            )
        )
    gens = ext.base.base_gens + ext.base.stable_gens
    mutual = all(
        ext.phi.apply(ext.phi_inv.apply(word(g))) == word(g)
        and ext.phi_inv.apply(ext.phi.apply(word(g))) == word(g)
        for g in gens
    )
    checks.append(Condition("maps_mutually_inverse", mutual))
    checks.append(
        Condition("projects_to_identity", descends_to_identity(ext.phi, ext.base))
    )
    return ExtensionReport(tuple(checks))


@dataclass(frozen=True)
class RelationCheck:
    family: str
    i: int | None
    j: int | None
    relator: Word
    pushed: SemidirectElement
    settled_by: str  # "push" or "split"
    trivial: bool

    def label(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in (("i", self.i), ("j", self.j)) if v)
        return f"{self.family}({params})" if params else self.family


@dataclass(frozen=True)
class BraidRelationReport:
    n: int
    entries: tuple[RelationCheck, ...]

    @property
    def ok(self) -> bool:
        return all(e.trivial for e in self.entries)

    @property
    def all_push(self) -> bool:
        """Whether every relator already pushed to the identity pair."""
        return all(e.settled_by == "push" for e in self.entries)

    def render(self, alphabet=None) -> str:
        lines = [f"relation check at n={self.n}: {'all trivial' if self.ok else 'FAILURES'}"]
        for e in self.entries:
            mark = "ok" if e.trivial else "FAIL"
            extra = "" if e.settled_by == "push" else f"  (push remainder {e.pushed.render(alphabet)})"
            lines.append(f"  {mark:4} {e.label():10} via {e.settled_by}{extra}")
        return "\n".join(lines)


def verify_braid_relations(n: int) -> BraidRelationReport:
    """Machine-check the two families of defining relations against each other.

    Every relator of both the conjugation-action form and the rearranged
    form is pushed through semidirect_nf; relators the push cannot finish
    are settled by the exact splitting.  All of them are trivial in the
    braid layer; which route settles each one is recorded, since the push
    provably misses the mixed-index conjugation family for n >= 3.
    """
    ext = p2(n)
    split = _splitting(n)
    x = lambda i: word(stable_gen(i))
    y = lambda j: word(base_gen(j))
    entries: list[RelationCheck] = []

    def check(family: str, i: int | None, j: int | None, rel: Word) -> None:
        pushed = semidirect_nf(ext, rel)
        if pushed.is_identity:
            entries.append(RelationCheck(family, i, j, rel, pushed, "push", True))
        else:
            entries.append(
                RelationCheck(family, i, j, rel, pushed, "split", split.is_trivial(rel))
            )

    for i in range(1, n):
        for j in range(i + 1, n):
            rel = free_reduce(concat(conjugate(x(i), y(j)), invert(x(i))))
            check("R1", i, j, rel)
            check("R1'", i, j, commutator(x(i), y(j)))
    for i in range(1, n):
        rhs = conjugate(x(i), invert(concat(x(i), T_WORD)))
        check("R2", i, None, free_reduce(concat(conjugate(x(i), y(i)), invert(rhs))))
        rhs = conjugate(x(i), invert(y(i)))
        check("R2'", i, None, free_reduce(concat(conjugate(x(i), T_WORD), invert(rhs))))
    for j in range(1, n):
        for i in range(j + 1, n):
            c = commutator(T_WORD, x(j))
            rel = free_reduce(concat(conjugate(x(i), y(j)), invert(conjugate(x(i), c))))
            check("R3", i, j, rel)
            check("R3'", i, j, commutator(x(i), conjugate(y(j), y(i))))
    for j in range(1, n):
        rhs = conjugate(T_WORD, invert(x(j)))
        check("R4", None, j, free_reduce(concat(conjugate(T_WORD, y(j)), invert(rhs))))
        rhs = free_reduce(concat(y(j), commutator(x(j), y(j))))
        check("R4'", None, j, free_reduce(concat(conjugate(y(j), T_WORD), invert(rhs))))
    return BraidRelationReport(n, tuple(entries))


def braid_freeness_check(
    n: int, words: Sequence[Word], strict: bool = False
) -> Certificate:
    """Freeness certificate for <w_1, ..., w_{n-1}, t> in the rank-n braid layer.

    Condition (1): w_i must carry nonzero exponent sum exactly in x_i, with
    zero t-exponent.  Condition (2): [w_i, t] must be nontrivial, decided by
    the exact splitting.  Strict mode additionally pins each w_i inside the
    letters {y_*} u {x_i}.
    """
    if len(words) != n - 1:
        raise ValueError(f"expected {n - 1} words, got {len(words)}")
    ext = p2(n)
    split = _splitting(n)
    alphabet = ext.alphabet
    conds: list[Condition] = []
    for i, w in enumerate(words, start=1):
        exps = {f"x{j}": exp_sum(w, stable_gen(j)) for j in range(1, n)}
        exps["t"] = exp_sum(w, OUTER)
        ok1 = all((e != 0) == (name == f"x{i}") for name, e in exps.items())
        table = ", ".join(f"{name}:{e}" for name, e in exps.items() if e or name == f"x{i}")
        conds.append(Condition(f"exponent_pattern[w{i}]", ok1, table))
        comm = commutator(w, T_WORD)
        nontrivial = not split.is_trivial(comm)
        pushed = semidirect_nf(ext, comm)
        witness = f"[{format_word(w, alphabet)}, t] "
        witness += "is nontrivial" if nontrivial else "= 1"
        witness += f"; push remainder {pushed.render(alphabet)}"
        conds.append(Condition(f"commutator_with_t_nontrivial[w{i}]", nontrivial, witness))
        if strict:
            allowed = {stable_gen(i)}
            bad = sorted(
                l.gen.name
                for l in w
                if l.gen.kind is not GenKind.BASE and l.gen not in allowed
            )
            conds.append(
                Condition(
                    f"letters_within_support[w{i}]",
                    not bad,
                    ", ".join(bad) or None,
                )
            )
    verdict = CERTIFIED if all(c.ok for c in conds) else REFUTED
    return Certificate(verdict, "braid-free-rank", tuple(conds))


def free_factor_probe(
    ext: SemidirectExtension, h_generators: Sequence[Word], bounds: Bounds
) -> OracleReport:
    """Bounded check that H and <t> meet only trivially in alternating products.

    Enumerates alternating products of nontrivial H-words and nonzero
    t-powers up to the bounds and requires each to be nontrivial: the push
    must leave a remainder and the splitting must confirm it.  H-generators
    may not contain t.
    """
    for h in h_generators:
        if any(l.gen.kind is GenKind.OUTER for l in h):
            raise ValueError("H generators must not contain the outer letter")
    split = _splitting(_rank(ext))
    gens = ext.base.alphabet.all_gens() + [OUTER]
    hspec = SubgroupSpec("H", tuple(h_generators), frozenset({OUTER}))
    h_factors = _abstract_factors(len(h_generators), bounds.uses, bounds.exp_range)
    t_exps = [e for mag in range(1, bounds.exp_range + 1) for e in (mag, -mag)]
    checked = 0

    def expand(r: int, start_with_h: bool):
        slots = [h_factors if (start_with_h == (i % 2 == 0)) else t_exps for i in range(r)]

        def rec(pos: int, desc: tuple, prefix: Word):
            if pos == r:
                yield desc, prefix
                return
            if slots[pos] is t_exps:
                for e in t_exps:
                    piece = Word(tuple([Letter(OUTER, 1 if e > 0 else -1)] * abs(e)))
                    yield from rec(pos + 1, desc + (f"t^{e}",), concat(prefix, piece))
            else:
                for runs in h_factors:
                    fw = _factor_word(hspec, runs)
                    yield from rec(pos + 1, desc + (_factor_desc(hspec, runs),), concat(prefix, fw))

        yield from rec(0, (), EPSILON)

    for r in range(1, bounds.syllables + 1):
        starts = [True, False] if h_generators else [False]
        if not h_generators and r > 1:
            break
        for start_with_h in starts:
            if not h_generators and start_with_h:
                continue
            for desc, raw in expand(r, start_with_h):
                checked += 1
                if bounds.max_products is not None and checked > bounds.max_products:
                    return OracleReport(
                        "inconclusive",
                        checked - 1,
                        note=f"budget of {bounds.max_products} products exceeded",
                    )
                w = free_reduce(raw)
                if w and any(exp_sum(w, g) for g in gens):
                    continue
                if w and not split.is_trivial(w):
                    continue
                return OracleReport("fail", checked, witness=w, witness_factors=desc)
    return OracleReport("pass", checked)


# ---------------------------------------------------------------------------
# Braid generator names: A{i}_{j} with 1 <= i < j <= n+1 resolves to the
# x/y/t alphabet of the rank-n layer.
# ---------------------------------------------------------------------------

_AIJ_RE = re.compile(r"^A(\d+)_(\d+)$")


def resolve_braid_names(text: str, n: int) -> str:
    """Rewrite A{i}_{j} tokens into x/y/t names; other tokens pass through."""
    out: list[str] = []
    for token in text.replace("*", " ").split():
        name, sep, exp = token.partition("^")
        m = _AIJ_RE.match(name)
        if m:
            i, j = int(m.group(1)), int(m.group(2))
            if j == n + 1 and 1 <= i < n:
                name = f"x{i}"
            elif j == n + 1 and i == n:
                name = "t"
            elif j == n and 1 <= i < n:
                name = f"y{i}"
            else:
                raise ValueError(
                    f"braid generator {token} lies outside the rank-{n} layer"
                )
        out.append(name + sep + exp)
    return " ".join(out)
