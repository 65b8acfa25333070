"""Freeness certificates for collections of subgroups.

A collection of subgroups with pairwise disjoint stable-letter supports
generates its free product as soon as each subgroup meets the pure-base
subgroup trivially.  Certificates record which conditions were machine
checked and what evidence backs the base-intersection hypothesis; the
brute-force oracles independently confirm the conclusion up to bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .presentation import HnnPresentation
from .rewrite import RuleSystem, nf, nf_ints
from .words import (
    EPSILON,
    OUTER,
    Gen,
    GeneratorMap,
    GenKind,
    Word,
    concat,
    exp_sum,
    format_word,
    free_reduce,
    invert,
    project_base,
    project_stable,
    word,
)

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


class _Budget(Exception):
    """Raised internally when an oracle exhausts its product budget."""


@dataclass(frozen=True)
class SubgroupSpec:
    """A labelled subgroup: generator words plus a declared support.

    The support is the set of stable (or outer) letters the subgroup is
    allowed to use on top of the base letters.
    """

    label: str
    generators: tuple[Word, ...]
    support: frozenset[Gen]

    def __post_init__(self) -> None:
        for g in self.support:
            if g.kind is GenKind.BASE:
                raise ValueError(f"support must consist of stable letters, got {g.name}")


@dataclass(frozen=True)
class Condition:
    name: str
    ok: bool
    witness: str | None = None


@dataclass(frozen=True)
class Bounds:
    """Enumeration limits for the oracles.

    max_gen_word_uses caps how many generator occurrences one alternating
    factor may use; None means exp_range.  max_products is the overall
    budget; exceeding it yields an inconclusive verdict, never a pass.
    """

    syllables: int = 6
    exp_range: int = 2
    max_gen_word_uses: int | None = None
    max_products: int | None = None

    @property
    def uses(self) -> int:
        return self.exp_range if self.max_gen_word_uses is None else self.max_gen_word_uses


@dataclass(frozen=True)
class Certificate:
    """Outcome of a freeness check: verdict, cited criterion, conditions."""

    verdict: str
    theorem: str
    conditions: tuple[Condition, ...]
    oracle_bounds: Bounds | None = None

    def __post_init__(self) -> None:
        if self.verdict == CERTIFIED and not all(c.ok for c in self.conditions):
            raise ValueError("certified verdict requires every condition to pass")

    def render(self) -> str:
        lines = [f"verdict: {self.verdict}  ({self.theorem})"]
        for c in self.conditions:
            mark = "ok" if c.ok else "FAIL"
            suffix = f"  [{c.witness}]" if c.witness else ""
            lines.append(f"  {mark:4} {c.name}{suffix}")
        if self.oracle_bounds is not None:
            lines.append(f"  bounds: {self.oracle_bounds}")
        return "\n".join(lines)


@dataclass(frozen=True)
class OracleReport:
    """Result of a bounded enumeration: pass, fail with witness, or budget out."""

    verdict: str
    checked: int
    witness: Word | None = None
    witness_factors: tuple[str, ...] | None = None
    note: str | None = None

    def render(self, alphabet=None) -> str:
        line = f"{self.verdict}  (products checked: {self.checked})"
        if self.witness is not None:
            line += f"\n  witness: {format_word(self.witness, alphabet)}"
        if self.witness_factors:
            line += f"\n  factors: {' | '.join(self.witness_factors)}"
        if self.note:
            line += f"\n  note: {self.note}"
        return line


def in_base_subgroup(w: Word, system: RuleSystem) -> bool:
    """Membership in the pure-base subgroup: the normal form uses base letters only."""
    return all(l.gen.kind is GenKind.BASE for l in nf(w, system))


def support_check(
    spec: SubgroupSpec,
    disjoint_with: Sequence[SubgroupSpec] = (),
    strict: bool = True,
) -> list[Condition]:
    """Support conditions for one spec against the others.

    Checks non-emptiness, pairwise disjointness, and in strict mode that
    every generator word stays inside base letters plus the support.
    """
    conds = [Condition(f"support_nonempty[{spec.label}]", bool(spec.support))]
    for other in disjoint_with:
        overlap = spec.support & other.support
        conds.append(
            Condition(
                f"support_disjoint[{spec.label},{other.label}]",
                not overlap,
                ", ".join(sorted(g.name for g in overlap)) or None,
            )
        )
    if strict:
        bad: list[str] = []
        for w in spec.generators:
            for l in w:
                if l.gen.kind is not GenKind.BASE and l.gen not in spec.support:
                    bad.append(f"{l.gen.name} in {format_word(w)}")
                    break
        conds.append(
            Condition(
                f"support_contains_generators[{spec.label}]",
                not bad,
                "; ".join(bad) or None,
            )
        )
    else:
        conds.append(
            Condition(
                f"support_containment_declared[{spec.label}]",
                True,
                "lax mode: containment accepted as declared",
            )
        )
    return conds


def descends_to_identity(m: GeneratorMap, p: HnnPresentation) -> bool:
    """Whether m projects to the identity on both coordinates of F(X) x F(Y).

    Defined only when every association has w = v, so that adding the
    relations [x_i, y_j] = 1 gives the direct-product quotient.
    """
    for x in p.stable_gens:
        for a in p.associations(x):
            if a.w != a.v:
                raise ValueError(
                    "direct-product projection undefined: association "
                    f"({a.y.name}) of {x.name} has two distinct conjugators"
                )
    for g in p.base_gens + p.stable_gens:
        one = word(g)
        img = m.apply(one)
        if project_stable(img) != project_stable(one):
            return False
        if project_base(img) != project_base(one):
            return False
    return True


def orbit_intersection_certificate(m: GeneratorMap, w: Word, p: HnnPresentation) -> Certificate:
    """Certify that the subgroup generated by the m-orbit of w avoids the base.

    Requires m to descend to the identity on the direct-product quotient;
    then a non-vanishing stable projection of w forces A = <m^k(w)> to meet
    the pure-base subgroup trivially.
    """
    if not descends_to_identity(m, p):
        raise ValueError("map does not descend to the identity on the direct product")
    px = project_stable(w)
    conds = (
        Condition("map_descends_to_identity", True),
        Condition(
            "stable_projection_nontrivial",
            px != EPSILON,
            format_word(px, p.alphabet) if px else "stable projection is empty",
        ),
    )
    verdict = CERTIFIED if px != EPSILON else REFUTED
    return Certificate(verdict, "orbit-intersection", conds)


Evidence = Certificate | OracleReport | str


def free_product_certificate(
    specs: Sequence[SubgroupSpec],
    evidence: Mapping[str, Evidence],
    system: RuleSystem,
    strict: bool = True,
) -> Certificate:
    """Certify that the given subgroups generate their free product.

    Supports must be pairwise disjoint and non-empty; each spec needs
    base-intersection evidence.  An orbit certificate or a declared external
    proof is proof-grade; a bounded probe pass is recorded but leaves the
    verdict inconclusive, and any refuting evidence refutes the whole claim.
    """
    conds: list[Condition] = []
    hard_fail = False
    for i, spec in enumerate(specs):
        for c in support_check(spec, specs[i + 1 :], strict=strict):
            conds.append(c)
            hard_fail |= not c.ok
    for spec in specs:
        name = f"base_intersection_trivial[{spec.label}]"
        ev = evidence.get(spec.label)
        if ev is None:
            conds.append(Condition(name, False, "no evidence supplied"))
        elif isinstance(ev, Certificate):
            ok = ev.verdict == CERTIFIED
            conds.append(Condition(name, ok, f"orbit certificate: {ev.verdict}"))
            hard_fail |= ev.verdict == REFUTED
        elif isinstance(ev, OracleReport):
            # Bounded evidence never certifies, but a failed probe refutes.
            if ev.verdict == "fail":
                witness = format_word(ev.witness) if ev.witness is not None else None
                conds.append(Condition(name, False, f"probe found witness {witness}"))
                hard_fail = True
            else:
                conds.append(Condition(name, False, f"bounded probe only: {ev.verdict}"))
        else:
            conds.append(Condition(name, True, f"declared: {ev}"))
    if hard_fail:
        verdict = REFUTED
    elif all(c.ok for c in conds):
        verdict = CERTIFIED
    else:
        verdict = INCONCLUSIVE
    return Certificate(verdict, "free-product-pingpong", tuple(conds))


def _abstract_factors(n_gens: int, uses: int, exp_range: int) -> list[tuple[tuple[int, int], ...]]:
    """Reduced run sequences ((gen index, signed exponent), ...) ordered by
    total generator uses, then lexicographically."""
    out: list[tuple[tuple[int, int], ...]] = []
    exps = [e for mag in range(1, exp_range + 1) for e in (mag, -mag)]

    def extend(runs: tuple[tuple[int, int], ...], budget: int) -> None:
        for idx in range(n_gens):
            if runs and runs[-1][0] == idx:
                continue
            for e in exps:
                if abs(e) > budget:
                    continue
                out.append(runs + ((idx, e),))
                extend(runs + ((idx, e),), budget - abs(e))

    def key(f: tuple[tuple[int, int], ...]):
        # generator index, then magnitude, then positive before negative
        return tuple((idx, abs(e), 0 if e > 0 else 1) for idx, e in f)

    for total in range(1, uses + 1):
        start = len(out)
        extend((), total)
        # keep only factors using exactly `total`, so order is by total uses
        out[start:] = sorted(
            (f for f in out[start:] if sum(abs(e) for _, e in f) == total), key=key
        )
    return out


def _factor_word(spec: SubgroupSpec, runs: tuple[tuple[int, int], ...]) -> Word:
    parts: list[Word] = []
    for idx, e in runs:
        g = spec.generators[idx] if e > 0 else invert(spec.generators[idx])
        parts.extend([g] * abs(e))
    w = EPSILON
    for p in parts:
        w = concat(w, p)
    return free_reduce(w)


def _factor_desc(spec: SubgroupSpec, runs: tuple[tuple[int, int], ...]) -> str:
    chunks = []
    for idx, e in runs:
        base = format_word(spec.generators[idx])
        chunks.append(f"({base})^{e}" if e != 1 else f"({base})")
    return f"{spec.label}: {' '.join(chunks)}"


def _spec_sequences(k: int, length: int) -> Iterable[tuple[int, ...]]:
    def extend(seq: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
        if len(seq) == length:
            yield seq
            return
        for i in range(k):
            if seq and seq[-1] == i:
                continue
            yield from extend(seq + (i,))

    yield from extend(())


def free_product_oracle(
    specs: Sequence[SubgroupSpec],
    system: RuleSystem,
    bounds: Bounds,
    is_trivial: Callable[[Word], bool] | None = None,
) -> OracleReport:
    """Exhaustively check that alternating products are nontrivial.

    Enumerates products a_1 ... a_r with r <= bounds.syllables, adjacent
    factors from different specs, each factor a nonempty reduced word in one
    spec's generators within bounds; order is syllable count, then spec
    sequence, then factor choice, so the first witness is minimal.  Exponent
    sums prescreen most products; the rest go to is_trivial, which defaults
    to the rewriting normal form and must decide triviality in the group the
    products live in.
    """
    if is_trivial is None:
        is_trivial = lambda w: not nf(w, system)
    factor_lists = [
        _abstract_factors(len(s.generators), bounds.uses, bounds.exp_range) for s in specs
    ]
    word_cache = [
        [_factor_word(s, runs) for runs in factor_lists[i]] for i, s in enumerate(specs)
    ]
    # t is a valid exponent-sum coordinate in the extension layer too
    gens = system.presentation.alphabet.all_gens() + [OUTER]
    checked = 0

    def products(seq: tuple[int, ...], pos: int, desc: tuple, prefix: Word):
        if pos == len(seq):
            yield desc, prefix
            return
        i = seq[pos]
        for runs, fw in zip(factor_lists[i], word_cache[i]):
            yield from products(seq, pos + 1, desc + ((i, runs),), concat(prefix, fw))

    for r in range(1, bounds.syllables + 1):
        for seq in _spec_sequences(len(specs), r):
            if any(not factor_lists[i] for i in seq):
                continue
            for runs_desc, raw in products(seq, 0, (), EPSILON):
                checked += 1
                if bounds.max_products is not None and checked > bounds.max_products:
                    return OracleReport(
                        INCONCLUSIVE,
                        checked - 1,
                        note=f"budget of {bounds.max_products} products exceeded",
                    )
                w = free_reduce(raw)
                if w and any(exp_sum(w, g) for g in gens):
                    continue
                if w and not is_trivial(w):
                    continue
                factors = tuple(_factor_desc(specs[i], runs) for i, runs in runs_desc)
                return OracleReport("fail", checked, witness=w, witness_factors=factors)
    return OracleReport("pass", checked)


def bounded_intersection_probe(
    spec: SubgroupSpec,
    system: RuleSystem,
    max_len: int,
    max_products: int | None = None,
) -> OracleReport:
    """Check that no short nontrivial element of the subgroup is a pure base word.

    Enumerates reduced words in the declared generators up to max_len uses;
    products that are trivial in the group are skipped, nontrivial ones must
    keep a stable letter in their normal form.
    """
    n = len(spec.generators)
    screen_gens = sorted(
        {g for v in spec.generators for l in v if (g := l.gen).kind is not GenKind.BASE},
        key=lambda g: (g.kind.value, g.index),
    )
    # exponent-sum step of one use of each generator, per screened coordinate;
    # a subtree whose running sums cannot return to zero is screened wholesale
    steps = [tuple(exp_sum(v, g) for g in screen_gens) for v in spec.generators]
    max_step = [max((abs(s[c]) for s in steps), default=0) for c in range(len(screen_gens))]
    exps = [e for mag in range(1, max_len + 1) for e in (mag, -mag)]
    checked = 0

    @lru_cache(maxsize=None)
    def leaves(budget: int, last: int) -> int:
        if budget == 0:
            return 1
        total = 0
        for idx in range(n):
            if idx == last:
                continue
            for mag in range(1, budget + 1):
                total += 2 * leaves(budget - mag, idx)
        return total

    def bump(amount: int) -> None:
        nonlocal checked
        if max_products is not None and checked + amount > max_products:
            raise _Budget
        checked += amount

    enc = [system.encode(v) for v in spec.generators]
    enc_inv = [[-c for c in reversed(e)] for e in enc]
    nb = system.n_base
    move_starts = system.move_starts

    def walk(runs, sums, budget):
        if budget == 0:
            bump(1)
            out: list[int] = []
            for idx, e in runs:
                chunk = enc[idx] if e > 0 else enc_inv[idx]
                for _ in range(abs(e)):
                    for c in chunk:
                        if out and out[-1] == -c:
                            out.pop()
                        else:
                            out.append(c)
            if not out:
                return None
            if move_starts and any(c in move_starts for c in out):
                v = nf_ints(list(out), system)
            else:
                v = out
            if v and all(abs(c) <= nb for c in v):
                return runs, system.decode(out)
            return None
        for idx in range(n):
            if runs and runs[-1][0] == idx:
                continue
            for e in exps:
                if abs(e) > budget:
                    continue
                nxt = tuple(s + e * d for s, d in zip(sums, steps[idx]))
                left = budget - abs(e)
                if any(abs(s) > m * left for s, m in zip(nxt, max_step)):
                    bump(leaves(left, idx))
                    continue
                hit = walk(runs + ((idx, e),), nxt, left)
                if hit:
                    return hit
        return None

    zeros = (0,) * len(screen_gens)
    try:
        for total in range(1, max_len + 1):
            hit = walk((), zeros, total)
            if hit:
                runs, w = hit
                return OracleReport(
                    "fail", checked, witness=w, witness_factors=(_factor_desc(spec, runs),)
                )
    except _Budget:
        return OracleReport(
            INCONCLUSIVE,
            checked,
            note=f"budget of {max_products} products exceeded",
        )
    return OracleReport("pass", checked)
