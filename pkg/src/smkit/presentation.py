"""Compiling machines into a group presentation.

Every positive plain rule tau contributes, per unsigned basic letter z,

    main:     th(tau, zone-before-z)^-1 z(r,l) th(tau, zone-after-z)
              = alpha_{tau^-1}(v_z) z(r',l') alpha_{tau^-1}(u_z)

plus, per zone not locked by tau and tape letter a, the commutation-style

    theta_a:  th(tau, zone)^-1 alpha_tau(a) th(tau, zone) = alpha_{tau^-1}(a)

plus, per non-P zone and tape letters a, b over it,

    a_x:      a x(b,tau) a^-1 = x(b,tau)^4      (K- and L-zones)
              a^-1 x(b,tau) a = x(b,tau)^4      (R-zones)

plus, per K/L basic letter z, coordinate pair and tape letter b after z,

    k_x:      z(r,i) x(b,tau) z(r,i)^-1 = x(b',tau)^(1 or 4)

with b' the brother of b in the zone before z (exponent 4 at L-letters).
Bar rules contribute the same main/theta_a families with barred letters,
all x-letters erased and the j=1 zone letters dropped; finally there is the
single hub relator.  Relators for negative rules are consequences and are
not emitted; every relator is normalized to the lexicographically least of
the cyclic rotations of itself and its inverse before deduplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .hardware import Hardware
from .smachine import Machine, enumerate_rule_ids
from .words import (
    BaseLetter, CyclicWord, RuleId, State, Tape, Theta, Word, X, EMPTY,
    letter_key, parse_word, word_to_text, wletter,
)

KINDS = ("main", "theta_a", "a_x", "k_x", "bar_main", "bar_theta_a", "hub")


class PresentationError(ValueError):
    pass


class NonUniformIndex(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    kind: str
    relator: CyclicWord  # normalized: least of relator/inverse rotations
    rule: Optional[RuleId] = None
    at: Optional[BaseLetter] = None  # base letter or zone, where applicable

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PresentationError(f"unknown relation kind {self.kind!r}")


def normalize_relator(w: Word):
    from .words import cyclic_reduce
    a = cyclic_reduce(w)[1]
    b = cyclic_reduce(w.inverse())[1]
    if not len(a):
        raise PresentationError("trivial relator")
    ka = tuple(letter_key(l) for l in a.letters)
    kb = tuple(letter_key(l) for l in b.letters)
    return a if ka <= kb else b


@dataclass(frozen=True)
class Presentation:
    n: int
    ee_label: str
    relations: tuple

    def __post_init__(self):
        seen = set()
        for rel in self.relations:
            if rel.relator in seen:
                raise PresentationError(f"duplicate relator {rel.relator!r}")
            seen.add(rel.relator)

    def stats(self):
        out = {k: 0 for k in KINDS}
        for rel in self.relations:
            out[rel.kind] += 1
        return out

    def inventory(self):
        from .words import symbol_key
        syms = set()
        for rel in self.relations:
            syms.update(sym for sym, _ in rel.relator)
        return sorted(syms, key=symbol_key)

    def index(self):
        return {rel.relator: rel for rel in self.relations}

    def __eq__(self, other):
        return (isinstance(other, Presentation) and self.n == other.n
                and [(r.kind, r.relator) for r in self.relations]
                == [(r.kind, r.relator) for r in other.relations])


# ---------------------------------------------------------------------------
# letter maps
# ---------------------------------------------------------------------------

def alpha(rid: RuleId, w):
    """Decoration map of a rule: interleaves x(a,tau) with the tape letters.

    K/L-zone letters map to x(a,tau) a, P-zone letters stay, R-zone letters
    map to a x(a,tau); state letters are fixed.  For negative rules the
    x-letters are inverted.  Bar rules and bar letters are out of domain.
    """
    if rid.bar:
        raise PresentationError("alpha is only defined for plain rules")
    xsign = rid.sign
    tau = rid.positive
    out = []
    for sym, s in w:
        if isinstance(sym, State):
            if sym.bar:
                raise PresentationError(f"{sym!r} is out of alpha's domain")
            out.append((sym, s))
            continue
        if not isinstance(sym, Tape) or sym.bar:
            raise PresentationError(f"{sym!r} is out of alpha's domain")
        if sym.zone.kind == "P":
            out.append((sym, s))
            continue
        x = X(sym, tau)
        if sym.zone.kind == "R":
            pair = ((sym, 1), (x, xsign))
        else:
            pair = ((x, xsign), (sym, 1))
        out += [(y, e * s) for y, e in (pair if s > 0 else reversed(pair))]
    return Word(out)


def _tape_projection(w, include_bar=True, include_plain=True):
    out = []
    for sym, s in w:
        if isinstance(sym, Tape) and (include_bar if sym.bar else include_plain):
            out.append((f"a{sym.i}", s))
    return Word(out)


def delta(w):
    """Letterwise a_i(z), bar a_i(z) -> a_i; every other generator -> 1."""
    return _tape_projection(w)


def beta(w):
    """The tape-alphabet map of the combined machine; same images as delta."""
    return _tape_projection(w)


def gamma(w):
    """The map used for positivity bookkeeping; same letter images as delta."""
    return _tape_projection(w)


def letter_index(sym):
    if isinstance(sym, Tape):
        return sym.zone.j
    if isinstance(sym, State):
        return sym.j
    if isinstance(sym, Theta):
        return sym.zone.j
    if isinstance(sym, X):
        return sym.tape.zone.j
    raise NonUniformIndex(f"{sym!r} carries no block index")


def shift_index(w, j2, bar_mode=False):
    """Replace the uniform block index of every letter of w by j2.

    With bar_mode and j2 == 1 all tape letters are removed (the bar copy of
    the index-1 block carries none)."""
    idx = {letter_index(sym) for sym, _ in w}
    if len(idx) > 1:
        raise NonUniformIndex(f"indices {sorted(idx)} mixed")
    out = []
    for sym, s in w:
        if isinstance(sym, Tape):
            if bar_mode and j2 == 1:
                continue
            sym = Tape(sym.i, BaseLetter(sym.zone.kind, j2), sym.bar)
        elif isinstance(sym, State):
            sym = State(sym.kind, j2, sym.coord, sym.bar)
        elif isinstance(sym, Theta):
            sym = Theta(sym.rule, BaseLetter(sym.zone.kind, j2))
        elif isinstance(sym, X):
            sym = X(Tape(sym.tape.i, BaseLetter(sym.tape.zone.kind, j2)), sym.rule)
        out.append((sym, s))
    return Word(out)


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def emit(hw: Hardware):
    """The full presentation of the simulating group for (ee, N)."""
    machine = Machine(hw, "mixed")
    rels = []

    def add(kind, w, rule=None, at=None):
        rels.append(Relation(kind, normalize_relator(w), rule, at))

    zones = [hw.zone_after((bl, s)) for bl, s in hw.sigma]
    for bar in (False, True):
        for rid in enumerate_rule_ids(hw.ee, bar):
            rule = machine.rules[rid]
            theta = {z: Theta(rid, z) for z in zones}
            # main relations, one per unsigned basic letter
            for bl, _ in hw.sigma:
                zb, za = hw.zones_of(bl)
                src = wletter(hw.state(bl.kind, bl.j, rule.src, bar))
                dst = wletter(hw.state(bl.kind, bl.j, rule.dst, bar))
                v = _mat(hw, rule, rule.v_spec(bl.kind), zb, bar)
                u = _mat(hw, rule, rule.u_spec(bl.kind), za, bar)
                if not bar:
                    v, u = alpha(rid.inverse, v), alpha(rid.inverse, u)
                lhs = wletter(theta[zb], -1) * src * wletter(theta[za])
                add("bar_main" if bar else "main",
                    lhs * (v * dst * u).inverse(), rid, bl)
            # theta-tape commutations at unlocked zones
            for zone in zones:
                if zone.kind in rule.locks or (bar and zone.j == 1):
                    continue
                for i in range(1, hw.ee.mbar + 1):
                    a = wletter(hw.tape(i, zone, bar))
                    top, bot = (a, a) if bar else (alpha(rid, a), alpha(rid.inverse, a))
                    add("bar_theta_a" if bar else "theta_a",
                        wletter(theta[zone], -1) * top * wletter(theta[zone]) * bot.inverse(),
                        rid, zone)
            if bar:
                continue
            # tape-x conjugation relations over K/L/R zones
            for zone in zones:
                if zone.kind == "P":
                    continue
                for i in range(1, hw.ee.mbar + 1):
                    a = wletter(hw.tape(i, zone))
                    for i2 in range(1, hw.ee.mbar + 1):
                        x = X(hw.tape(i2, zone), rid)
                        conj = a * wletter(x) * a.inverse() if zone.kind in "KL" \
                            else a.inverse() * wletter(x) * a
                        add("a_x", conj * Word(((x, -1),) * 4, reduce=False), rid, zone)
            # state-x crossing relations at K and L letters
            for bl, _ in hw.sigma:
                if bl.kind not in "KL":
                    continue
                zb, za = hw.zones_of(bl)
                exp = 1 if bl.kind == "K" else 4
                for coord in hw.ee.coords():
                    z = wletter(State(bl.kind, bl.j, coord))
                    for i in range(1, hw.ee.mbar + 1):
                        x = X(hw.tape(i, za), rid)
                        x2 = X(hw.tape(i, zb), rid)
                        add("k_x",
                            z * wletter(x) * z.inverse() * Word(((x2, -1),) * exp, reduce=False),
                            rid, bl)
    add("hub", hw.hub())
    return Presentation(hw.N, "", tuple(rels))


def _mat(hw, rule, spec, zone, bar):
    if bar and zone.j == 1:
        return EMPTY
    return hw.tape_word(spec, zone, bar)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def write_presentation(p: Presentation, fh):
    fh.write(f"n: {p.n}\n")
    fh.write(f"ee-file: {p.ee_label or '-'}\n")
    for rel in p.relations:
        fh.write(f"relator {rel.kind}: {word_to_text(rel.relator)}\n")


def read_presentation(fh):
    n = None
    label = ""
    rels = []
    for lineno, raw in enumerate(fh, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("n:"):
            n = int(line[2:].strip())
        elif line.startswith("ee-file:"):
            label = line[len("ee-file:"):].strip()
            label = "" if label == "-" else label
        elif line.startswith("relator "):
            head, _, body = line.partition(":")
            kind = head.split()[1]
            try:
                w = parse_word(body)
            except Exception as e:
                raise PresentationError(f"line {lineno}: {e}") from None
            rels.append(Relation(kind, normalize_relator(w)))
        else:
            raise PresentationError(f"line {lineno}: unrecognized line {line!r}")
    if n is None:
        raise PresentationError("missing n: header")
    return Presentation(n, label, tuple(rels))
