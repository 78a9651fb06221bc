"""Independent brute-force oracles used by the tests.

Nothing here shares code paths with the library algorithms it checks:
matchings are enumerated over all position pairings and filtered, and the
x-word conjugacy oracle is a plain breadth-first closure over the
elementary conjugation moves.
"""

import itertools

from smkit.h2 import is_uniform, run_of
from smkit.words import CyclicWord, Tape, X


def all_perfect_matchings(positions):
    positions = list(positions)
    if not positions:
        yield []
        return
    first = positions[0]
    for k in range(1, len(positions)):
        rest = positions[1:k] + positions[k + 1:]
        for sub in all_perfect_matchings(rest):
            yield [(first, positions[k])] + sub


def _crossing(n, p, q):
    (a, b), (c, d) = sorted(p), sorted(q)
    return (a < c < b) != (a < d < b)


def noncrossing_inverse_matchings(word):
    """All non-crossing perfect matchings pairing mutually inverse letters."""
    n = len(word)
    out = set()
    if n == 0 or n % 2:
        return out
    for matching in all_perfect_matchings(range(n)):
        if any(word[p][0] != word[q][0] or word[p][1] != -word[q][1]
               for p, q in matching):
            continue
        if any(_crossing(n, p, q) for p, q in itertools.combinations(matching, 2)):
            continue
        out.add(frozenset(frozenset(p) for p in matching))
    return out


def _cyclically_balanced(brackets, matching_by_open):
    """Check that the forced bracket word matches each open with its pair."""
    n = len(brackets)
    depth = 0
    best, start = None, 0
    for k, (kind, _) in enumerate(brackets):
        depth += 1 if kind == "(" else -1
        if best is None or depth < best:
            best, start = depth, k + 1
    stack = []
    for k in range(n):
        kind, pos = brackets[(start + k) % n]
        if kind == "(":
            stack.append(pos)
        else:
            if not stack or matching_by_open.get(stack.pop()) != pos:
                return False
    return not stack


def has_minus_pairing(word):
    """Brute force: some non-crossing inverse matching admits the all-minus
    orientation (open parenthesis at the negative letter of every pair)."""
    n = len(word)
    for matching in noncrossing_inverse_matchings(word):
        opens = {}
        closes = {}
        for pair in matching:
            p, q = tuple(pair)
            neg = p if word[p][1] < 0 else q
            pos = q if neg == p else p
            opens[neg] = pos
            closes[pos] = neg
        # the open bracket sits just before its (negative) letter and the
        # close just after its (positive) letter, so walking the positions
        # in cyclic order and emitting each position's single bracket gives
        # the bracket word in its cyclic order
        seq = [("(", p) if p in opens else (")", p) for p in range(n)]
        if _cyclically_balanced(seq, opens):
            return True
    return False


# ---------------------------------------------------------------------------
# x-word conjugacy closure
# ---------------------------------------------------------------------------

def _zone_moves(hw):
    moves = []
    for bl, _ in hw.sigma:
        if bl.kind in "KL":
            zb, za = hw.zones_of(bl)
            moves.append((za, zb))
            moves.append((zb, za))
    return moves


def _canonical_runs(runs):
    """Least rotation of a cyclic run list, merging the wrap-around run."""
    runs = list(runs)
    if len(runs) >= 2 and runs[0][0] == runs[-1][0]:
        runs = [(runs[0][0], runs[0][1] + runs[-1][1])] + runs[1:-1]
    if not runs:
        return ()
    rots = [tuple(runs[k:] + runs[:k]) for k in range(len(runs))]
    from smkit.words import symbol_key
    return min(rots, key=lambda r: [(symbol_key(s), e) for s, e in r])


def canonical_runs_of_cyclic(w: CyclicWord):
    return _canonical_runs(run_of(w.letters))


def x_conjugacy_closure(hw, w: CyclicWord, depth):
    """Canonical run forms reachable from w by the elementary conjugation
    moves: letterwise fourth power (and its inverse where exponents allow)
    and zone shifts across K/L state letters.  Membership of a cyclic word
    is tested via canonical_runs_of_cyclic."""
    moves = _zone_moves(hw)
    start = canonical_runs_of_cyclic(w)
    seen = {start}
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for runs in frontier:
            zone = is_uniform(runs)
            if zone is None:
                continue
            cands = [tuple((sym, 4 * e) for sym, e in runs)]
            if all(e % 4 == 0 for _, e in runs):
                cands.append(tuple((sym, e // 4) for sym, e in runs))
            for src, dst in moves:
                if src == zone:
                    cands.append(tuple(
                        (X(Tape(sym.tape.i, dst), sym.rule), e) for sym, e in runs))
            for cand in cands:
                cc = _canonical_runs(cand)
                if cc not in seen:
                    seen.add(cc)
                    nxt.append(cc)
        frontier = nxt
    return seen
