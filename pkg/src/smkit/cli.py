"""Command-line front end.

Exit codes: 0 = success / positive answer, 1 = negative answer (rule not
applicable, no pairing, not conjugate, search exhausted), 2 = input or
usage error.  Word/history arguments accept either inline tokens or a path
to a file holding them.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import hardware
from .bands import theta_band, trapezium, band_text, trapezium_text, verify
from .derive import (
    DeriveError, accept_bfs, bar_conjugated_insertion, derivation_history,
    insertion_history,
)
from .h2 import x_words_conjugate
from .presentation import emit, write_presentation
from .smachine import (
    Machine, NotApplicable, brief_history, is_historical_form, parse_history,
    history_text,
)
from .words import CyclicWord, TokenError, parse_rule, parse_word, word_to_text


def _slurp(value):
    if value is not None and os.path.exists(value):
        with open(value, encoding="utf-8") as f:
            return f.read()
    return value


def _load_hw(args):
    ee = hardware.load_ee_file(args.ee)
    return hardware.Hardware(ee, args.n)


def _gen_word(text):
    """Parse a word over the presentation generators: a<i> tokens."""
    out = []
    for tok in text.split():
        sign = 1
        if tok.endswith("^-1"):
            sign, tok = -1, tok[:-3]
        if not tok.startswith("a") or not tok[1:].isdigit():
            raise TokenError(f"bad generator token {tok!r}")
        out.append((int(tok[1:]), sign))
    return tuple(out)


def _relator_index(tok):
    if tok == "e":
        return None
    if tok.startswith("r") and tok[1:].isdigit():
        return int(tok[1:])
    raise TokenError(f"bad relator token {tok!r} (want e or r<k>)")


def _machine_word(hw, args, flavor):
    text = _slurp(args.word)
    return hw.parse_admissible(parse_word(text), flavor)


def cmd_present(args):
    hw = _load_hw(args)
    pres = emit(hw)
    pres = type(pres)(pres.n, os.path.basename(args.ee), pres.relations)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            write_presentation(pres, f)
    else:
        write_presentation(pres, sys.stdout)
    if args.stats:
        for kind, count in pres.stats().items():
            print(f"{kind}: {count}", file=sys.stderr)
    return 0


def cmd_run(args):
    hw = _load_hw(args)
    machine = Machine(hw, args.flavor)
    W = _machine_word(hw, args, args.flavor)
    h = parse_history(_slurp(args.history))
    trace = machine.run(W, h)
    for k, word in enumerate(trace.words):
        print(f"{k}: {word.text()}")
    if not trace.ok:
        k, diag = trace.failure
        print(f"step {k} failed: {diag}", file=sys.stderr)
        return 1
    return 0


def cmd_derive_insert(args):
    hw = _load_hw(args)
    w = _gen_word(_slurp(args.word) or "")
    r = _relator_index(args.relator)
    if args.bar:
        u = _gen_word(_slurp(args.conjugator) or "")
        h = bar_conjugated_insertion(hw, w, u, r)
        machine = Machine(hw, "bar")
        W0 = hw.sigma_w(w, flavor="bar")
    else:
        h = insertion_history(hw, w, args.pos, r, delete=args.delete)
        machine = Machine(hw, "strict")
        W0 = hw.sigma_w(w)
    print(history_text(h))
    if args.verify:
        trace = machine.run(W0, h)
        for k, word in enumerate(trace.words):
            print(f"{k}: {word.text()}", file=sys.stderr)
        if not trace.ok:
            print(f"verification failed: {trace.failure}", file=sys.stderr)
            return 1
    return 0


def cmd_derive_chain(args):
    hw = _load_hw(args)
    w = _gen_word(_slurp(args.word) or "")
    steps = []
    for line in _slurp(args.steps).splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        op, pos, r = line.split()
        steps.append((op, int(pos), _relator_index(r)))
    h, final = derivation_history(hw, w, steps)
    print(history_text(h))
    if args.verify:
        machine = Machine(hw, "strict")
        trace = machine.run(hw.sigma_w(w), h)
        ok = trace.ok and trace.final == hw.sigma_w(final)
        print(f"final word: {' '.join(f'a{i}' for i, _ in final)}", file=sys.stderr)
        if not ok:
            print("verification failed", file=sys.stderr)
            return 1
    return 0


def cmd_accept(args):
    hw = _load_hw(args)
    machine = Machine(hw, args.flavor)
    W = _machine_word(hw, args, args.flavor)
    trace = accept_bfs(machine, W, args.max_steps)
    if trace is None:
        print("no accepting computation found", file=sys.stderr)
        return 1
    print(history_text(trace.history))
    print(f"accepted: {trace.final.text()}", file=sys.stderr)
    return 0


def cmd_band(args):
    hw = _load_hw(args)
    machine = Machine(hw, "mixed")
    pres = emit(hw)
    W = _machine_word(hw, args, "mixed")
    band = theta_band(pres, machine, W, parse_rule(args.rule))
    print(band_text(band))
    if args.verify:
        report = verify(band, pres, machine)
        for line in report:
            print(f"violation: {line}", file=sys.stderr)
        return 1 if report else 0
    return 0


def cmd_trapezium(args):
    hw = _load_hw(args)
    machine = Machine(hw, "mixed")
    pres = emit(hw)
    W = _machine_word(hw, args, "mixed")
    h = parse_history(_slurp(args.history))
    trap = trapezium(pres, machine, W, h)
    print(trapezium_text(trap))
    if args.verify:
        report = verify(trap, pres, machine)
        for line in report:
            print(f"violation: {line}", file=sys.stderr)
        return 1 if report else 0
    return 0


def cmd_dyck(args):
    from .words import enumerate_pairings, find_minus_pairing, is_dyck
    w = CyclicWord(parse_word(_slurp(args.word), reduce=False).letters)
    if not is_dyck(w):
        print("not a Dyck word", file=sys.stderr)
        return 1
    print(f"canonical: {word_to_text(w)}")
    if args.minus:
        pairing = find_minus_pairing(w)
        if pairing is None:
            print("no minus pairing", file=sys.stderr)
            return 1
        print(f"minus pairing: {sorted(pairing.pairs)}")
        return 0
    pairings = enumerate_pairings(w, args.limit)
    for k, pairing in enumerate(pairings):
        print(f"{k}: {sorted(pairing.pairs)}")
    return 0 if pairings else 1


def cmd_brief(args):
    h = parse_history(_slurp(args.history))
    b = brief_history(h)
    print("".join(b))
    print(f"historical form: {is_historical_form(b)}", file=sys.stderr)
    return 0


def cmd_xconj(args):
    hw = _load_hw(args)
    from .words import cyclic_reduce
    w1 = cyclic_reduce(parse_word(_slurp(args.w1)))[1]
    w2 = cyclic_reduce(parse_word(_slurp(args.w2)))[1]
    flag, witness = x_words_conjugate(hw, w1, w2)
    if flag:
        print(f"conjugate: {witness}")
        return 0
    print("not conjugate")
    return 1


def cmd_stats(args):
    hw = _load_hw(args)
    ee = hw.ee
    from .smachine import enumerate_rule_ids
    rids = enumerate_rule_ids(ee)
    per = {}
    for rid in rids:
        per[rid.family] = per.get(rid.family, 0) + 1
    print(f"generators: {ee.mbar} (m = {ee.m})")
    print(f"relators: {len(ee.relators)} (max length {ee.c})")
    print(f"N: {hw.N}, base letters: {len(hw.sigma)}, zones: {len(hw.sigma)}")
    print(f"positive rules: {len(rids)}")
    for fam in ("1", "12", "2", "23", "3", "34", "4", "45", "5", "51"):
        print(f"  t{fam}: {per.get(fam, 0)}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="smkit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n=True):
        sp.add_argument("--ee", required=True, help="presentation file")
        if n:
            sp.add_argument("--n", type=int, default=8, help="block count (even, >= 8)")

    sp = sub.add_parser("present", help="compile the machine into relators")
    common(sp)
    sp.add_argument("--out")
    sp.add_argument("--stats", action="store_true")
    sp.set_defaults(fn=cmd_present)

    sp = sub.add_parser("run", help="run a history on an admissible word")
    common(sp)
    sp.add_argument("--word", required=True)
    sp.add_argument("--history", required=True)
    sp.add_argument("--flavor", choices=("strict", "bar", "mixed"), default="strict")
    sp.set_defaults(fn=cmd_run)

    dp = sub.add_parser("derive", help="generate simulation histories")
    dsub = dp.add_subparsers(dest="derive_command", required=True)
    sp = dsub.add_parser("insert", help="relator insertion/deletion history")
    common(sp)
    sp.add_argument("--word", default="")
    sp.add_argument("--pos", type=int, default=0)
    sp.add_argument("--relator", required=True)
    sp.add_argument("--delete", action="store_true")
    sp.add_argument("--bar", action="store_true")
    sp.add_argument("--conjugator", default="")
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(fn=cmd_derive_insert)
    sp = dsub.add_parser("chain", help="history for a sequence of steps")
    common(sp)
    sp.add_argument("--word", default="")
    sp.add_argument("--steps", required=True,
                    help="lines: insert|delete <pos> <relator>")
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(fn=cmd_derive_chain)

    sp = sub.add_parser("accept", help="bounded search for an accepting run")
    common(sp)
    sp.add_argument("--word", required=True)
    sp.add_argument("--max-steps", type=int, required=True)
    sp.add_argument("--flavor", choices=("strict", "bar", "mixed"), default="strict")
    sp.set_defaults(fn=cmd_accept)

    sp = sub.add_parser("band", help="build and check one theta band")
    common(sp)
    sp.add_argument("--word", required=True)
    sp.add_argument("--rule", required=True)
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(fn=cmd_band)

    sp = sub.add_parser("trapezium", help="build and check a trapezium")
    common(sp)
    sp.add_argument("--word", required=True)
    sp.add_argument("--history", required=True)
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(fn=cmd_trapezium)

    sp = sub.add_parser("dyck", help="pairings of a cyclic Dyck word")
    sp.add_argument("--word", required=True)
    sp.add_argument("--minus", action="store_true")
    sp.add_argument("--limit", type=int)
    sp.set_defaults(fn=cmd_dyck)

    sp = sub.add_parser("brief", help="brief history of a rule sequence")
    sp.add_argument("--history", required=True)
    sp.set_defaults(fn=cmd_brief)

    sp = sub.add_parser("xconj", help="conjugacy of cyclic x-words")
    common(sp)
    sp.add_argument("--w1", required=True)
    sp.add_argument("--w2", required=True)
    sp.set_defaults(fn=cmd_xconj)

    sp = sub.add_parser("stats", help="machine summary for a presentation")
    common(sp)
    sp.set_defaults(fn=cmd_stats)
    return p


def main(argv=None):
    p = build_parser()
    args = p.parse_args(argv)
    try:
        return args.fn(args)
    except NotApplicable as e:
        print(f"not applicable: {e}", file=sys.stderr)
        return 1
    except (TokenError, DeriveError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
