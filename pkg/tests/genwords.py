"""Seeded generators for fuzzing: random admissible words and random
applicable rule walks."""

from smkit.hardware import BaseLetter


def random_positive(rng, mbar, maxlen, minlen=0):
    return tuple((rng.randrange(1, mbar + 1), 1)
                 for _ in range(rng.randrange(minlen, maxlen + 1)))


def random_reduced(rng, mbar, maxlen, minlen=0):
    out = []
    for _ in range(rng.randrange(minlen, maxlen + 1)):
        while True:
            cand = (rng.randrange(1, mbar + 1), rng.choice((1, -1)))
            if not out or out[-1] != (cand[0], -cand[1]):
                out.append(cand)
                break
    return tuple(out)


def random_sigma_word(hw, rng, flavor="strict", maxlen=3):
    if flavor == "strict":
        return hw.sigma_w(random_positive(rng, hw.ee.mbar, maxlen), flavor)
    return hw.sigma_w(random_reduced(rng, hw.ee.mbar, maxlen), flavor)


def random_bar_word(hw, rng, maxlen=2, coord=None, empty_kinds=""):
    """Bar-admissible word over the full base with random zone contents."""
    lens = {k: (0 if k in empty_kinds else maxlen) for k in "KLPR"}
    w1 = random_reduced(rng, hw.ee.mbar, lens["K"])
    w2 = random_reduced(rng, hw.ee.mbar, lens["L"])
    w3 = random_reduced(rng, hw.ee.mbar, lens["P"])
    w4 = random_reduced(rng, hw.ee.mbar, lens["R"])
    if coord is None:
        coords = hw.ee.coords()
        coord = coords[rng.randrange(len(coords))]
    body = hw.sigma_four(w1, w2, w3, w4, r=coord.r, i=coord.omega, bar=True)
    from smkit.words import Word
    flat = Word(body.letters + ((hw.state("K", 1, coord, True), 1),), reduce=False)
    return hw.parse_admissible(flat, "bar")


def block_word(hw, rng, j, coord, kinds="KLPR", flavor="strict", maxlen=3):
    """Admissible word over the standard block lL_j..rR_j with random
    contents (positive in the constrained zones for the strict flavor)."""
    lL = hw.left_letter_of_L(j)
    states = [lL, (BaseLetter("L", j), 1), (BaseLetter("P", j), 1),
              (BaseLetter("R", j), 1), hw.succ((BaseLetter("R", j), 1))]
    letters = []
    for k, y in enumerate(states):
        letters.append((hw.state(y[0].kind, y[0].j, coord), y[1]))
        if k == len(states) - 1:
            break
        zone = hw.zone_after(y)
        if zone.kind == "P":
            w = random_reduced(rng, hw.ee.mbar, maxlen)
        else:
            w = random_positive(rng, hw.ee.mbar, maxlen)
        for i, s in w:
            letters.append((hw.tape(i, zone), s))
    from smkit.words import Word
    return hw.parse_admissible(Word(letters, reduce=False), flavor)


def applicable_rules(machine, W, coords_first=True):
    out = []
    for rid in machine.rules:
        for signed in (rid, rid.inverse):
            src, _ = machine.coords_of(signed)
            if src != W.coord:
                continue
            if machine.applicable(signed, W) is None:
                out.append(signed)
    return out


def random_walk(machine, W, rng, steps, allow=None, reduced=True):
    """Random applicable history from W; returns (history, trace words)."""
    h = []
    words = [W]
    for _ in range(steps):
        cands = applicable_rules(machine, words[-1])
        if allow is not None:
            cands = [rid for rid in cands if allow(rid)]
        if reduced and h:
            cands = [rid for rid in cands if rid != h[-1].inverse]
        if not cands:
            break
        rid = cands[rng.randrange(len(cands))]
        h.append(rid)
        words.append(machine._apply(rid, words[-1]))
    return tuple(h), words
