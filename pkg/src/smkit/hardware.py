"""Static hardware: the input presentation, the cyclic base word, zones,
and admissible words.

The cyclic base word (for N even, N >= 8) is

    K1 L1 P1 R1 K2^-1 R2^-1 P2^-1 L2^-1 K3 L3 P3 R3 K4^-1 ...

Every unsigned basic letter z_j occurs exactly once up to sign.  The 4N gaps
between consecutive letters are the tape *zones*; zones are named by unsigned
basic letters so that for every j the four sectors of the j-th block carry

    (lL_j, L_j)-sector : zone K_j      (lL_j = pred of L_j, a K-type letter)
    (L_j,  P_j)-sector : zone L_j
    (P_j,  R_j)-sector : zone P_j
    (R_j, rR_j)-sector : zone R_j      (rR_j = succ of R_j, a K-type letter)

This is the unique naming under which rule insertions, W <-> W^-1 symmetry
and theta-band gluing all agree; note that next to the letter K_j for even j
sit the zones R_j (before) and R_{j-1} (after), not the zone K_j.

An admissible word is y_1 u_1 y_2 ... y_t u_t y_{t+1} where the y_i are
signed state letters with equal coordinates, y_{i+1} is succ(y_i) or
y_i^-1, each u_i is a word over the tape alphabet of the sector's zone, and
the whole word is freely reduced.  Flavors:

    strict -- letters unbarred; the inner part of a sector is positive when
              the sector ends at L_j/P_j or starts at R_j (and negative in
              the mirrored cases), leaving P-zones and fold-backs like
              L_j L_j^-1 unconstrained.
    bar    -- letters barred (states at coordinate (e,1) and P-zone tape
              letters with index <= m are shared with the plain alphabet);
              every sector of a j=1 zone is empty; no positivity.
    mixed  -- bar-admissible, or the strict shape without positivity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .words import (
    BaseLetter, Coord, State, Tape, Word, is_reduced, word_to_text,
)

COORD_E1 = Coord(None, 1)


class EEError(ValueError):
    pass


class AdmissibleError(ValueError):
    def __init__(self, clause, detail=""):
        self.clause = clause
        self.detail = detail
        super().__init__(f"{clause}: {detail}" if detail else clause)


class NotReduced(AdmissibleError):
    def __init__(self, detail=""):
        super().__init__("NotReduced", detail)


class BadBasePattern(AdmissibleError):
    def __init__(self, detail=""):
        super().__init__("BadBasePattern", detail)


class MixedCoordinates(AdmissibleError):
    def __init__(self, detail=""):
        super().__init__("MixedCoordinates", detail)


class PositivityViolation(AdmissibleError):
    def __init__(self, detail=""):
        super().__init__("PositivityViolation", detail)


class BarSectorNotEmpty(AdmissibleError):
    def __init__(self, detail=""):
        super().__init__("BarSectorNotEmpty", detail)


class BadInnerAlphabet(AdmissibleError):
    def __init__(self, detail=""):
        super().__init__("BadInnerAlphabet", detail)


@dataclass(frozen=True)
class EEPresentation:
    """Finite list of positive relators closed under the priming involution.

    Relators are tuples of generator indices (1..mbar).  The empty relator
    is a member; the non-empty relators are numbered 1.. in input order and
    referenced by that index everywhere (coordinate "e" is the empty one).
    """

    m: int
    mbar: int
    involution: tuple  # involution[i-1] = i', 1-based values
    relators: tuple  # tuple of tuples of ints, () included

    def __post_init__(self):
        if not (1 <= self.m <= self.mbar):
            raise EEError(f"need 1 <= m <= mbar, got m={self.m}, mbar={self.mbar}")
        if len(self.involution) != self.mbar:
            raise EEError("involution must cover all generators")
        for i, ip in enumerate(self.involution, 1):
            if not 1 <= ip <= self.mbar or self.involution[ip - 1] != i:
                raise EEError(f"involution is not an involution at a{i}")
        if () not in self.relators:
            raise EEError("the empty relator must be listed")
        if len(set(self.relators)) != len(self.relators):
            raise EEError("duplicate relators")
        rels = set(self.relators)
        for r in self.relators:
            for a in r:
                if not 1 <= a <= self.mbar:
                    raise EEError(f"relator letter a{a} out of range")
            if self.prime_word(r) not in rels:
                raise EEError(f"set not closed under priming at {r}")
        for i in range(1, self.mbar + 1):
            ip = self.involution[i - 1]
            if (i, ip) not in rels or (ip, i) not in rels:
                raise EEError(f"missing a{i}a{i}'-relators")

    def prime(self, i):
        return self.involution[i - 1]

    def prime_word(self, r):
        return tuple(self.prime(a) for a in reversed(r))

    @property
    def nonempty(self):
        return tuple(r for r in self.relators if r)

    @property
    def c(self):
        return max(len(r) for r in self.relators)

    def relator(self, r: Optional[int]):
        if r is None:
            return ()
        ne = self.nonempty
        if not 1 <= r <= len(ne):
            raise EEError(f"no relator r{r}")
        return ne[r - 1]

    def coords(self):
        """All (r, omega) coordinate pairs, empty relator first."""
        rs = [None] + list(range(1, len(self.nonempty) + 1))
        return [Coord(r, i) for r in rs for i in range(1, 6)]


def load_ee(text):
    """Parse the EE file format (see README); '#' starts a comment."""
    gens = None
    m = None
    pairs = {}
    relators = []
    saw_relator_line = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise EEError(f"line {lineno}: expected 'key: value'")
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key == "generators":
            gens = [_gen_index(tok, lineno) for tok in value.split()]
            if gens != list(range(1, len(gens) + 1)):
                raise EEError(f"line {lineno}: generators must be a1..a<mbar> in order")
        elif key == "involution":
            toks = value.split()
            if len(toks) != 2:
                raise EEError(f"line {lineno}: involution takes two generators")
            a, b = (_gen_index(t, lineno) for t in toks)
            pairs[a] = b
            pairs[b] = a
        elif key == "m":
            m = int(value)
        elif key == "relator":
            saw_relator_line = True
            relators.append(tuple(_gen_index(t, lineno) for t in value.split()))
        else:
            raise EEError(f"line {lineno}: unknown key {key!r}")
    if gens is None or m is None or not saw_relator_line:
        raise EEError("file needs generators:, m:, and relator: lines")
    mbar = len(gens)
    try:
        involution = tuple(pairs[i] for i in range(1, mbar + 1))
    except KeyError as e:
        raise EEError(f"generator a{e.args[0]} missing from involution") from None
    return EEPresentation(m=m, mbar=mbar, involution=involution, relators=tuple(relators))


def _gen_index(tok, lineno):
    if not tok.startswith("a") or not tok[1:].isdigit():
        raise EEError(f"line {lineno}: bad generator token {tok!r}")
    return int(tok[1:])


def load_ee_file(path):
    with open(path, encoding="utf-8") as f:
        return load_ee(f.read())


class Hardware:
    """Precomputed base-word geometry for a given presentation and N."""

    def __init__(self, ee: EEPresentation, N: int = 8):
        if N < 8 or N % 2:
            raise ValueError(f"N must be even and >= 8, got {N}")
        self.ee = ee
        self.N = N
        sigma = []
        zones = []
        for j in range(1, N + 1):
            if j % 2:
                sigma += [(BaseLetter(k, j), 1) for k in "KLPR"]
                zones += [BaseLetter(k, j) for k in "KLPR"]
            else:
                sigma += [(BaseLetter(k, j), -1) for k in "KRPL"]
                zones += [BaseLetter(k, j) for k in "RPLK"]
        self.sigma = tuple(sigma)  # the cyclic base word, 4N signed letters
        self._zone_after_pos = tuple(zones)  # zone of the gap after position p
        self._pos = {bl: p for p, (bl, _) in enumerate(sigma)}
        self._orient = {bl: s for bl, s in sigma}
        self._flanks = {}
        for j in range(1, N + 1):
            L, P, R = (BaseLetter(k, j) for k in "LPR")
            lL = self.pred((L, 1))
            rR = self.succ((R, 1))
            self._flanks[BaseLetter("K", j)] = (lL, (L, 1))
            self._flanks[L] = ((L, 1), (P, 1))
            self._flanks[P] = ((P, 1), (R, 1))
            self._flanks[R] = ((R, 1), rR)

    # -- signed-letter geometry ------------------------------------------

    def succ(self, y):
        bl, s = y
        p = self._pos[bl]
        if s == self._orient[bl]:
            nb, ns = self.sigma[(p + 1) % len(self.sigma)]
            return (nb, ns)
        nb, ns = self.sigma[(p - 1) % len(self.sigma)]
        return (nb, -ns)

    def pred(self, y):
        bl, s = y
        p = self._pos[bl]
        if s == self._orient[bl]:
            nb, ns = self.sigma[(p - 1) % len(self.sigma)]
            return (nb, ns)
        nb, ns = self.sigma[(p + 1) % len(self.sigma)]
        return (nb, -ns)

    def zone_after(self, y):
        """Zone of the sector that starts at the signed letter y."""
        bl, s = y
        p = self._pos[bl]
        if s == self._orient[bl]:
            return self._zone_after_pos[p]
        return self._zone_after_pos[(p - 1) % len(self.sigma)]

    def zone_before(self, y):
        return self.zone_after((y[0], -y[1]))

    def zones_of(self, z: BaseLetter):
        """(zone before z, zone after z) along z's positive direction."""
        return self.zone_before((z, 1)), self.zone_after((z, 1))

    def zone_flanks(self, zone: BaseLetter):
        """(left, right) signed letters of the zone in canonical direction."""
        return self._flanks[zone]

    def left_letter_of_L(self, j):
        return self._flanks[BaseLetter("K", j)][0]

    # -- letter constructors (identification-aware) -----------------------

    def tape(self, i, zone, bar=False):
        if not 1 <= i <= self.ee.mbar:
            raise BadInnerAlphabet(f"a{i} out of range 1..{self.ee.mbar}")
        if bar and zone.kind == "P" and i <= self.ee.m:
            bar = False  # shared with the plain alphabet
        return Tape(i, zone, bar)

    def state(self, kind, j, coord, bar=False):
        if bar and coord == COORD_E1:
            bar = False  # shared with the plain alphabet
        return State(kind, j, coord, bar)

    def tape_word(self, w, zone, bar=False, invert=False):
        """Copy of w (a sequence of (index, sign) pairs) in the zone alphabet."""
        seq = [(self.tape(i, zone, bar), s) for i, s in w]
        if invert:
            seq = [(t, -s) for t, s in reversed(seq)]
        return Word(seq)

    def plain_tape_ok(self, t: Tape):
        return not t.bar

    def bar_tape_ok(self, t: Tape):
        return t.bar or (t.zone.kind == "P" and t.i <= self.ee.m)

    def plain_state_ok(self, st: State):
        return not st.bar

    def bar_state_ok(self, st: State):
        return st.bar or st.coord == COORD_E1

    # -- standard words ---------------------------------------------------

    def sigma_tilde(self):
        return self.sigma

    def hub(self):
        """The hub: the base word decorated with coordinates (e,1)."""
        return Word(((State(bl.kind, bl.j, COORD_E1), s) for bl, s in self.sigma),
                    reduce=False)

    def sigma_four(self, w1, w2, w3, w4, r=None, i=1, bar=False):
        """The block word family of the four-slot standard words.

        Block j carries w1 in its K_j-zone, w2 in L_j, w3 in P_j, w4 in R_j;
        even blocks appear inverted.  The bar variant empties block 1 and
        bars the letters.  Returns a plain Word (no trailing state letter).
        """
        coord = Coord(r, i)
        letters = []
        for j in range(1, self.N + 1):
            wpart = []
            for kind, w in (("L", w1), ("P", w2), ("R", w3)):
                zone = self.zone_before((BaseLetter(kind, j), 1))
                if not (bar and zone.j == 1):
                    wpart += list(self.tape_word(w, zone, bar).letters)
                wpart.append((self.state(kind, j, coord, bar), 1))
            zone = self.zone_after((BaseLetter("R", j), 1))
            if not (bar and zone.j == 1):
                wpart += list(self.tape_word(w4, zone, bar).letters)
            ksign = 1 if j % 2 else -1
            if j % 2 == 0:
                wpart = [(sym, -s) for sym, s in reversed(wpart)]
            letters += [(self.state("K", j, coord, bar), ksign)] + wpart
        return Word(letters)

    def sigma_w(self, w, flavor="strict"):
        """Sigma(w) with the trailing K1(e,1): the standard admissible word
        whose P-zones carry copies of w (bar flavor empties block 1)."""
        if flavor == "strict" and not all(s > 0 for _, s in w):
            raise PositivityViolation("sigma_w needs a positive word for the strict flavor")
        bar = flavor == "bar"
        body = self.sigma_four((), (), w, (), r=None, i=1, bar=bar)
        flat = Word(body.letters + ((self.state("K", 1, COORD_E1, bar), 1),), reduce=False)
        return self.parse_admissible(flat, flavor)

    # -- admissible words -------------------------------------------------

    def parse_admissible(self, w, flavor="strict"):
        """Validate and sector an admissible word; raises AdmissibleError.

        Letters are canonicalized on ingest: barred states at (e,1) and
        barred P-zone letters with index <= m name the same generators as
        their plain brothers and are stored unbarred."""
        letters = tuple(w.letters) if isinstance(w, Word) else tuple(w)
        canon = []
        for sym, s in letters:
            if isinstance(sym, State):
                sym = self.state(sym.kind, sym.j, sym.coord, sym.bar)
            elif isinstance(sym, Tape):
                sym = self.tape(sym.i, sym.zone, sym.bar)
            canon.append((sym, s))
        letters = tuple(canon)
        if not letters:
            raise BadBasePattern("empty word")
        if not is_reduced(letters):
            raise NotReduced(word_to_text(Word(letters, reduce=False)))
        states = []
        inners = []
        current = []
        for sym, s in letters:
            if isinstance(sym, State):
                if states:
                    inners.append(Word(current, reduce=False))
                current = []
                states.append((sym, s))
            elif isinstance(sym, Tape):
                if not states:
                    raise BadBasePattern("word must start with a state letter")
                current.append((sym, s))
            else:
                raise BadInnerAlphabet(f"{sym!r} is not a state or tape letter")
        if current:
            raise BadBasePattern("word must end with a state letter")
        if not states:
            raise BadBasePattern("need at least one state letter")
        aw = AdmissibleWord(flavor, tuple(states), tuple(inners))
        self.validate(aw)
        return aw

    def validate(self, aw):
        states, inners = aw.states, aw.inners
        coord = states[0][0].coord
        for st, _ in states:
            if st.coord != coord:
                raise MixedCoordinates(f"{st!r} vs coordinate {coord!r}")
        for (st, s), (st2, s2) in zip(states, states[1:]):
            y, y2 = (st.base, s), (st2.base, s2)
            if y2 != self.succ(y) and y2 != (y[0], -y[1]):
                raise BadBasePattern(f"{st!r}^{s} followed by {st2!r}^{s2}")
        for k, inner in enumerate(inners):
            zone = self.zone_after((states[k][0].base, states[k][1]))
            for sym, _ in inner:
                if sym.zone != zone:
                    raise BadInnerAlphabet(
                        f"sector {k}: {sym!r} is not in the {zone!r}-zone alphabet")
                if not 1 <= sym.i <= self.ee.mbar:
                    raise BadInnerAlphabet(f"sector {k}: index of {sym!r} out of range")
        if aw.flavor == "strict":
            self._validate_strict(aw)
        elif aw.flavor == "bar":
            self.validate_bar_shape(aw)
        elif aw.flavor == "mixed":
            try:
                self.validate_plain_shape(aw)
            except AdmissibleError:
                self.validate_bar_shape(aw)
        else:
            raise ValueError(f"unknown flavor {aw.flavor!r}")

    def validate_plain_shape(self, aw):
        for st, _ in aw.states:
            if not self.plain_state_ok(st):
                raise BadInnerAlphabet(f"{st!r} is not a plain state letter")
        for inner in aw.inners:
            for sym, _ in inner:
                if not self.plain_tape_ok(sym):
                    raise BadInnerAlphabet(f"{sym!r} is not a plain tape letter")

    def _validate_strict(self, aw):
        self.validate_plain_shape(aw)
        for k, inner in enumerate(aw.inners):
            need = self.positivity_sign(aw.states[k], aw.states[k + 1])
            if need and any(s != need for _, s in inner):
                raise PositivityViolation(
                    f"sector {k} between {aw.states[k][0]!r} and {aw.states[k + 1][0]!r}")

    def validate_bar_shape(self, aw):
        for st, _ in aw.states:
            if not self.bar_state_ok(st):
                raise BadInnerAlphabet(f"{st!r} is not a bar state letter")
        for k, inner in enumerate(aw.inners):
            zone = self.zone_after((aw.states[k][0].base, aw.states[k][1]))
            if zone.j == 1 and len(inner):
                raise BarSectorNotEmpty(f"sector {k} in zone {zone!r}")
            for sym, _ in inner:
                if not self.bar_tape_ok(sym):
                    raise BadInnerAlphabet(f"{sym!r} is not a bar tape letter")

    @staticmethod
    def positivity_sign(y1, y2):
        """Required inner sign (+1, -1 or None) for a strict sector y1..y2.

        Sectors ending at L_j/P_j or starting at R_j are positive; the
        mirrored ones are negative; everything else is unconstrained.
        """
        (st1, s1), (st2, s2) = y1, y2
        if (st2.kind in "LP" and s2 > 0) or (st1.kind == "R" and s1 > 0):
            return 1
        if (st1.kind in "LP" and s1 < 0) or (st2.kind == "R" and s2 < 0):
            return -1
        return None


@dataclass(frozen=True)
class AdmissibleWord:
    flavor: str
    states: tuple  # (State, sign) pairs
    inners: tuple  # Word per sector, len == len(states) - 1

    @property
    def coord(self):
        return self.states[0][0].coord

    def base(self):
        return tuple(st.base for st, _ in self.states)

    def signed_base(self):
        return tuple((st.base, s) for st, s in self.states)

    def flat(self):
        letters = []
        for k, (st, s) in enumerate(self.states):
            letters.append((st, s))
            if k < len(self.inners):
                letters += list(self.inners[k].letters)
        return Word(letters, reduce=False)

    def __len__(self):
        return len(self.states) + sum(len(i) for i in self.inners)

    def text(self):
        return word_to_text(self.flat())

    def sector(self, k):
        return (self.states[k], self.inners[k], self.states[k + 1])

    def with_coord(self, hw, coord, bar=None):
        states = []
        for st, s in self.states:
            b = st.bar if bar is None else bar
            states.append((hw.state(st.kind, st.j, coord, b), s))
        return AdmissibleWord(self.flavor, tuple(states), self.inners)

    def inverse(self):
        states = tuple((st, -s) for st, s in reversed(self.states))
        inners = tuple(w.inverse() for w in reversed(self.inners))
        return AdmissibleWord(self.flavor, states, inners)
