#!/usr/bin/env python3
"""Confluence survey over preset and hand-written rule systems.

Tabulates rule counts, critical pairs, joinability, and timing for gn(n),
then shows what breaks when two left-hand sides for the same stable letter
nest: a presentation whose conjugators make one lhs a strict prefix of
another produces genuinely non-joinable critical pairs.  The gn presets
avoid this because distinct associations of a stable letter involve
distinct base letters, so no lhs extends another.
"""

import argparse
import time

from hnnfree.presentation import parse_presentation, gn
from hnnfree.rewrite import RuleSystem, check_local_confluence, nf, random_confluence_probe
from hnnfree.words import format_word

HANDWRITTEN = """\
base y1 y2 y3
stable x1 x2
rel x1 : y1 ^ y2 y3 = y1 ^ y3 y2
rel x1 : y2 ^ y3^-1 y1 = y2 ^ y1 y3
rel x2 : y3 ^ y1 y1 = y3 ^ y2^-1 y1
"""

# conjugators chosen so the second association's lhs extends the first's
NESTED = """\
base y1 x1
stable s
rel s : y1 ^ x1^-1 y1^-1 = y1 ^ x1
rel s : x1 ^ y1^-1 = x1 ^ y1 x1
"""


def survey_row(label: str, system: RuleSystem) -> None:
    t0 = time.monotonic()
    rep = check_local_confluence(system)
    dt = time.monotonic() - t0
    verdict = "confluent" if rep.ok else f"{len(rep.failures)} NON-JOINABLE"
    print(f"  {label:14} {len(system.rules):5} rules  {rep.pairs_checked:5} pairs  "
          f"{verdict:16} {dt*1000:7.1f} ms")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6, help="largest gn preset")
    ap.add_argument("--trials", type=int, default=300,
                    help="random-strategy probe trials per system")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("critical-pair survey")
    for n in range(2, args.max_n + 1):
        survey_row(f"gn({n})", RuleSystem(gn(n)))
    hw = parse_presentation(HANDWRITTEN)
    survey_row("hand-written", RuleSystem(hw))

    print(f"\nrandom-strategy probe ({args.trials} trials x 5 strategies, seed {args.seed})")
    for label, p in [("gn(4)", gn(4)), ("hand-written", hw)]:
        rep = random_confluence_probe(RuleSystem(p), seed=args.seed,
                                      trials=args.trials, max_len=25)
        print(f"  {label:14} {'agree, nu decreasing' if rep.ok else 'DISAGREE'}")

    print("\nnested left-hand sides break joinability")
    p = parse_presentation(NESTED)
    system = RuleSystem(p)
    for r in system.rules:
        if r.kind in (3, 4):
            print(f"  kind {r.kind} #{r.rule_id}: "
                  f"{format_word(r.lhs, p.alphabet)} -> {format_word(r.rhs, p.alphabet)}")
    rep = check_local_confluence(system)
    print(f"  {rep.pairs_checked} critical pairs, {len(rep.failures)} non-joinable; "
          f"first example:")
    cp = rep.failures[0]
    left, right = nf(cp.left_reduct, system), nf(cp.right_reduct, system)
    print(f"    peak {format_word(cp.peak, p.alphabet)}")
    print(f"    -> {format_word(left, p.alphabet)}")
    print(f"    -> {format_word(right, p.alphabet)}")


if __name__ == "__main__":
    main()
