"""Data model for multiple HNN extensions of a free group by basis-conjugating
embeddings, the compiler to rewrite rules, and the g/p2 family builders.

A presentation consists of base generators Y, stable generators X, and for
each stable letter x a list of associations (y, w, v) encoding the relation
(y^w)^x = y^v with w, v reduced words over Y.  The footnote conditions (first
letter of w and of v differs from y^{+-1}) make every compiled pattern reduced
as written.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .words import (
    EPSILON,
    Alphabet,
    Gen,
    GenKind,
    GeneratorMap,
    Letter,
    Word,
    base_gen,
    commutator,
    concat,
    default_alphabet,
    free_reduce,
    invert,
    parse_word,
    stable_gen,
    word,
)


@dataclass(frozen=True)
class Association:
    """One triple (y, w, v) attached to a stable letter: (y^w)^x = y^v."""

    y: Gen
    w: Word = EPSILON
    v: Word = EPSILON


@dataclass(frozen=True, eq=False)
class HnnPresentation:
    alphabet: Alphabet
    assoc: dict[Gen, tuple[Association, ...]] = field(default_factory=dict)

    @property
    def base_gens(self) -> list[Gen]:
        return [base_gen(i) for i in range(1, len(self.alphabet.base_names) + 1)]

    @property
    def stable_gens(self) -> list[Gen]:
        return [stable_gen(i) for i in range(1, len(self.alphabet.stable_names) + 1)]

    def associations(self, x: Gen) -> tuple[Association, ...]:
        return self.assoc.get(x, ())

    def parse(self, text: str) -> Word:
        return parse_word(text, self.alphabet)


def _word_ok(w: Word) -> bool:
    return all(l.gen.kind is GenKind.BASE for l in w.letters)


def validate(p: HnnPresentation) -> list[str]:
    """All violations of the presentation constraints; empty list means ok."""
    out: list[str] = []
    n_base = len(p.alphabet.base_names)
    n_stable = len(p.alphabet.stable_names)
    for x, assocs in p.assoc.items():
        if x.kind is not GenKind.STABLE or x.index > n_stable:
            out.append(f"unknown stable generator {x}")
            continue
        seen: set[Gen] = set()
        for a in assocs:
            label = f"{x}:{a.y}"
            if a.y.kind is not GenKind.BASE or a.y.index > n_base:
                out.append(f"{label}: unknown base generator {a.y}")
                continue
            if a.y in seen:
                out.append(f"{label}: duplicate base generator for {x}")
            seen.add(a.y)
            for side, cw in (("w", a.w), ("v", a.v)):
                if not _word_ok(cw):
                    out.append(f"{label}: conjugator not in F(Y) ({side})")
                elif not cw.is_reduced():
                    out.append(f"{label}: unreduced conjugator ({side})")
                elif cw and cw[0].gen == a.y:
                    out.append(f"{label}: {side} begins with y^{{+-1}}")
    return out


@dataclass(frozen=True)
class RewriteRule:
    """A literal pattern -> replacement pair of one of the four kinds.

    kind 1: y^e y^-e -> 1          kind 3: x v^-1 y^e -> w^-1 y^e w x v^-1
    kind 2: x^e x^-e -> 1          kind 4: x^-1 w^-1 y^e -> v^-1 y^e v x^-1 w^-1
    """

    kind: int
    rule_id: int
    lhs: Word
    rhs: Word
    stable: Gen | None = None
    assoc_index: int | None = None

    def __repr__(self) -> str:
        return f"<rule {self.kind}/{self.rule_id}: {self.lhs} -> {self.rhs}>"


def compile_rules(p: HnnPresentation) -> list[RewriteRule]:
    """Compile to the four rule families; count = 2|Y| + 2|X| + 4*sum(m_i).

    Deterministic order: kind-1 per base generator and sign, kind-2 per
    stable generator and sign, then kind-3 and kind-4 per (stable,
    association, sign), association lists in presentation order.
    """
    bad = validate(p)
    if bad:
        raise ValueError("invalid presentation: " + "; ".join(bad))
    rules: list[RewriteRule] = []

    def add(kind, lhs, rhs, stable=None, assoc_index=None):
        rules.append(RewriteRule(kind, len(rules), lhs, rhs, stable, assoc_index))

    for g in p.base_gens:
        for s in (1, -1):
            add(1, word((g, s), (g, -s)), EPSILON)
    for g in p.stable_gens:
        for s in (1, -1):
            add(2, word((g, s), (g, -s)), EPSILON)
    for x in p.stable_gens:
        for ai, a in enumerate(p.associations(x)):
            for s in (1, -1):
                lhs = concat(concat(word(x), invert(a.v)), word((a.y, s)))
                rhs = concat(
                    concat(invert(a.w), word((a.y, s))),
                    concat(concat(a.w, word(x)), invert(a.v)),
                )
                add(3, lhs, rhs, x, ai)
    for x in p.stable_gens:
        for ai, a in enumerate(p.associations(x)):
            for s in (1, -1):
                lhs = concat(concat(word((x, -1)), invert(a.w)), word((a.y, s)))
                rhs = concat(
                    concat(invert(a.v), word((a.y, s))),
                    concat(concat(a.v, word((x, -1))), invert(a.w)),
                )
                add(4, lhs, rhs, x, ai)
    return rules


def gn(n: int) -> HnnPresentation:
    """The group with [x_i, y_j] = 1 for i < j and [x_i, y_j^{y_i}] = 1 for i > j.

    Base y_1..y_{n-1}, stable x_1..x_{n-1}; for x_i the associations are
    (y_j, 1, 1) for j > i and (y_j, y_i, y_i) for j < i, ordered by j.
    All conjugators satisfy w = v, so the projection to F(X) x F(Y) exists.
    """
    if n < 2:
        raise ValueError("gn requires n >= 2")
    alphabet = default_alphabet(n - 1, n - 1)
    assoc: dict[Gen, tuple[Association, ...]] = {}
    for i in range(1, n):
        x = stable_gen(i)
        items = []
        for j in range(1, n):
            if j == i:
                continue
            conj = word(base_gen(i)) if j < i else EPSILON
            items.append(Association(base_gen(j), conj, conj))
        assoc[x] = tuple(items)
    return HnnPresentation(alphabet, assoc)


@dataclass(frozen=True, eq=False)
class SemidirectExtension:
    """A base presentation plus an outer letter t acting by generator maps.

    phi describes t^-1 g t and phi_inv describes t g t^-1 on base-presentation
    generators; both are free-group word maps, mutually inverse under free
    reduction alone.  Operations on extensions live in the braid module.
    """

    base: HnnPresentation
    phi: GeneratorMap
    phi_inv: GeneratorMap

    @property
    def alphabet(self) -> Alphabet:
        a = self.base.alphabet
        return Alphabet(a.base_names, a.stable_names, "t")

    def parse(self, text: str) -> Word:
        return parse_word(text, self.alphabet)


def p2(n: int) -> SemidirectExtension:
    """The pure-braid kernel layer: gn(n) extended by t with
    phi(x_i) = x_i^{y_i^-1}, phi(y_i) = y_i [x_i, y_i].

    phi_inv is fixed to the closed forms phi_inv(y_i) = x_i^-1 y_i x_i and
    phi_inv(x_i) = x_i^-1 y_i^-1 x_i y_i x_i, and the mutual-inverse identity
    (a free-group fact) is re-verified here at load time.
    """
    if n < 2:
        raise ValueError("p2 requires n >= 2")
    base = gn(n)
    phi_images: dict[Gen, Word] = {}
    inv_images: dict[Gen, Word] = {}
    for i in range(1, n):
        xi, yi = stable_gen(i), base_gen(i)
        phi_images[xi] = word(yi, xi, (yi, -1))
        phi_images[yi] = free_reduce(concat(word(yi), commutator(word(xi), word(yi))))
        inv_images[yi] = word((xi, -1), yi, xi)
        inv_images[xi] = word((xi, -1), (yi, -1), xi, yi, xi)
    phi = GeneratorMap(phi_images)
    phi_inv = GeneratorMap(inv_images)
    for g in list(phi_images) :
        one = word(g)
        if phi.apply(phi_inv.apply(one)) != one or phi_inv.apply(phi.apply(one)) != one:
            raise AssertionError(f"phi and phi_inv are not mutually inverse at {g}")
    return SemidirectExtension(base, phi, phi_inv)


# ---------------------------------------------------------------------------
# Presentation file format (line-oriented, # comments):
#   base y1 y2 ...
#   stable x1 x2 ...
#   rel <stable> : <y> ^ <w-word> = <y> ^ <v-word>
#   preset gn <n> | preset p2 <n>
# ---------------------------------------------------------------------------


class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _parse_rel_side(text: str, alphabet: Alphabet, lineno: int) -> tuple[Gen, Word]:
    toks = text.split()
    if len(toks) < 3 or toks[1] != "^":
        raise PresentationSyntaxError(
            "relation side must read <y> ^ <word>", lineno
        )
    if toks[0] not in alphabet:
        raise PresentationSyntaxError(f"unknown generator {toks[0]!r}", lineno)
    return alphabet.gen(toks[0]), parse_word(" ".join(toks[2:]), alphabet)


def parse_presentation(text: str) -> HnnPresentation | SemidirectExtension:
    """Parse the presentation file format; presets return ready-made objects."""
    base_names: list[str] = []
    stable_names: list[str] = []
    rel_lines: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        ws = line.split()
        if ws[0] == "preset":
            if len(ws) != 3 or ws[1] not in ("gn", "p2") or not ws[2].isdigit():
                raise PresentationSyntaxError("preset gn <n> | preset p2 <n>", lineno)
            if base_names or stable_names or rel_lines:
                raise PresentationSyntaxError("preset must stand alone", lineno)
            n = int(ws[2])
            if n < 2:
                raise PresentationSyntaxError("preset requires n >= 2", lineno)
            return gn(n) if ws[1] == "gn" else p2(n)
        elif ws[0] == "base":
            base_names.extend(ws[1:])
        elif ws[0] == "stable":
            stable_names.extend(ws[1:])
        elif ws[0] == "rel":
            rel_lines.append((lineno, line[3:].strip()))
        else:
            raise PresentationSyntaxError(f"unknown directive {ws[0]!r}", lineno)
    if not base_names or not stable_names:
        raise PresentationSyntaxError("missing base or stable declaration", 1)
    alphabet = Alphabet(tuple(base_names), tuple(stable_names))
    assoc: dict[Gen, list[Association]] = {}
    for lineno, body in rel_lines:
        head, _, rhs = body.partition("=")
        name, _, lhs = head.partition(":")
        name = name.strip()
        if not rhs or not lhs:
            raise PresentationSyntaxError(
                "relation must read rel <stable> : <y> ^ <w> = <y> ^ <v>", lineno
            )
        if name not in alphabet:
            raise PresentationSyntaxError(f"unknown stable generator {name!r}", lineno)
        x = alphabet.gen(name)
        y1, w = _parse_rel_side(lhs.strip(), alphabet, lineno)
        y2, v = _parse_rel_side(rhs.strip(), alphabet, lineno)
        if y1 != y2:
            raise PresentationSyntaxError(
                "both sides of a relation must conjugate the same base generator",
                lineno,
            )
        assoc.setdefault(x, []).append(Association(y1, w, v))
    p = HnnPresentation(alphabet, {x: tuple(v) for x, v in assoc.items()})
    bad = validate(p)
    if bad:
        raise PresentationSyntaxError("; ".join(bad), 1)
    return p


def relators(p: HnnPresentation) -> list[Word]:
    """The defining relators (x^-1 w^-1 y w x) (v^-1 y^-1 v), one per
    association and generator, freely reduced."""
    out: list[Word] = []
    for x in p.stable_gens:
        for a in p.associations(x):
            lhs = concat(
                concat(word((x, -1)), conj_word(a.w, a.y, 1)),
                concat(word(x), conj_word(a.v, a.y, -1)),
            )
            out.append(free_reduce(lhs))
    return out


def conj_word(b: Word, y: Gen, sign: int) -> Word:
    """b^-1 y^sign b as a literal word."""
    return concat(concat(invert(b), word((y, sign))), b)
