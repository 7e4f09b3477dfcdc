"""Free-group word algebra for the fundamental group of a fiber of
F(x, y) = (x^2 - 1)(y^2 - 1).

The group is free of rank 5 on the loop ``g`` (the real oval, written
``gamma`` in prose) and the four saddle loops ``d0..d3`` vanishing at
(-1,-1), (1,-1), (1,1), (-1,1).  Words are immutable, stored reduced, and
compared structurally, so every group identity is an equality test.

Distinguished composite elements::

    D = d0 d1 d2 d3        (written ``delta``)
    x = d1 d2
    z = d2 d3

and the monodromy machinery built on them: the automorphisms ``mon0``,
``mon1`` around the atypical values 0 and 1, the conjugated operator
``m_endo`` (M = (d0 d1)^-1 Mon0(.) (d0 d1)), the variation ``var`` with
var(g) = D by convention, the nested commutators ``d_k`` and the orbit
elements ``v_k = [x, d_{k-1}(z)]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Sequence, Tuple


class Gen(IntEnum):
    """The five free generators, in the fixed printing order."""

    G = 0
    D0 = 1
    D1 = 2
    D2 = 3
    D3 = 4


GEN_NAMES = {Gen.G: "g", Gen.D0: "d0", Gen.D1: "d1", Gen.D2: "d2", Gen.D3: "d3"}

Letter = Tuple[int, int]  # (generator, exponent +1/-1)


def _reduce(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    out: list[Letter] = []
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError(f"letter exponent must be +-1, got {e}")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


class Word:
    """A reduced word in the free group; immutable and hashable."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters = _reduce(letters)
        self._hash = hash(self.letters)

    @staticmethod
    def identity() -> "Word":
        return _IDENTITY

    @staticmethod
    def gen(g: int, e: int = 1) -> "Word":
        return Word(((g, e),))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return _IDENTITY
        base = self if n > 0 else self.inverse()
        out = _IDENTITY
        for _ in range(abs(n)):
            out = out * base
        return out

    def conjugate_by(self, c: "Word") -> "Word":
        """c * self * c^-1."""
        return c * self * c.inverse()

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def generators_used(self) -> set:
        return {g for g, _ in self.letters}

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


_IDENTITY = Word()

# Named elements.
G = Word.gen(Gen.G)
D0 = Word.gen(Gen.D0)
D1 = Word.gen(Gen.D1)
D2 = Word.gen(Gen.D2)
D3 = Word.gen(Gen.D3)
DELTA = D0 * D1 * D2 * D3
X_ELT = D1 * D2
Z_ELT = D2 * D3


def multiply(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return u.inverse()


def commutator(u: Word, v: Word) -> Word:
    """[u, v] = u v u^-1 v^-1 (so [d2, d3] d3 reduces to d2 d3 d2^-1)."""
    return u * v * u.inverse() * v.inverse()


def reduce_letters(letters: Iterable[Letter]) -> Word:
    return Word(letters)


@dataclass(frozen=True)
class Endo:
    """Endomorphism of the free group given by generator images."""

    images: Tuple[Word, Word, Word, Word, Word]

    def __call__(self, w: Word) -> Word:
        parts: list[Letter] = []
        for g, e in w.letters:
            img = self.images[g]
            if e == 1:
                parts.extend(img.letters)
            else:
                parts.extend(img.inverse().letters)
        return Word(parts)

    def compose(self, other: "Endo") -> "Endo":
        """self after other: (self.compose(other))(w) = self(other(w))."""
        return Endo(tuple(self(img) for img in other.images))

    def of_gen(self, g: int) -> Word:
        return self.images[g]


def endo_from_map(images: dict) -> Endo:
    return Endo(tuple(images[g] for g in Gen))


def mon1() -> Endo:
    """Monodromy around the center value 1: g -> g, d_i -> g d_i."""
    return endo_from_map(
        {
            Gen.G: G,
            Gen.D0: G * D0,
            Gen.D1: G * D1,
            Gen.D2: G * D2,
            Gen.D3: G * D3,
        }
    )


def mon0() -> Endo:
    """Monodromy around the saddle value 0.

    g -> D g, d0 -> d0, d1 -> d0 d1 d0^-1, d2 -> d0 d1 d2 d1^-1 d0^-1,
    d3 -> d0 d1 d2 d3 d2^-1 d1^-1 d0^-1.
    """
    c1 = D0
    c2 = D0 * D1
    c3 = D0 * D1 * D2
    return endo_from_map(
        {
            Gen.G: DELTA * G,
            Gen.D0: D0,
            Gen.D1: D1.conjugate_by(c1),
            Gen.D2: D2.conjugate_by(c2),
            Gen.D3: D3.conjugate_by(c3),
        }
    )


def mon1_inverse() -> Endo:
    return endo_from_map(
        {
            Gen.G: G,
            Gen.D0: G.inverse() * D0,
            Gen.D1: G.inverse() * D1,
            Gen.D2: G.inverse() * D2,
            Gen.D3: G.inverse() * D3,
        }
    )


def mon0_inverse() -> Endo:
    """Explicit inverse of mon0 (checked against it in the tests)."""
    return endo_from_map(
        {
            Gen.G: (D3 * D2 * D1 * D0).inverse() * G,
            Gen.D0: D0,
            Gen.D1: D1.conjugate_by(D0.inverse()),
            Gen.D2: D2.conjugate_by(D0.inverse() * D1.inverse()),
            Gen.D3: D3.conjugate_by(D0.inverse() * D1.inverse() * D2.inverse()),
        }
    )


def m_endo() -> Endo:
    """M = (d0 d1)^-1 Mon0(.) (d0 d1).

    Generator images reduce to d0 -> d1^-1 d0 d1, d1 -> d1, d2 -> d2,
    d3 -> [d2, d3] d3 = d2 d3 d2^-1, and g -> z g d0 d1.
    """
    c = D0 * D1
    m0 = mon0()
    return Endo(tuple(m0(img).conjugate_by(c.inverse()) for img in Endo(
        (G, D0, D1, D2, D3)).images))


def var(w: Word) -> Word:
    """Variation: var(g) = D by convention, otherwise M(w) w^-1."""
    if w == G:
        return DELTA
    return m_endo()(w) * w.inverse()


def var_iterate(i: int) -> Word:
    """var^i(g): i-fold iterate starting from the oval generator."""
    if i < 0:
        raise ValueError("iterate count must be >= 0")
    w = G
    for _ in range(i):
        w = var(w)
    return w


def d_k(k: int, w: Word) -> Word:
    """Nested commutator d_1 = id, d_{k+1}(w) = [d2, d_k(w)]."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = w
    for _ in range(k - 1):
        out = commutator(D2, out)
    return out


def v_k(k: int) -> Word:
    """Orbit elements: v_1 = D, v_k = [x, d_{k-1}(z)] for k >= 2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return DELTA
    return commutator(X_ELT, d_k(k - 1, Z_ELT))


def abelianize(w: Word) -> Tuple[int, int, int, int, int]:
    """Signed letter counts per generator (image in H_1 of the fiber)."""
    counts = [0] * 5
    for g, e in w.letters:
        counts[g] += e
    return tuple(counts)


# ---------------------------------------------------------------------------
# The rho alphabet {g, D, x, d2, z}: the alternative free basis on which the
# Laurent matrix representations are defined.

class RhoGen(IntEnum):
    G = 0
    DELTA = 1
    X = 2
    B2 = 3  # d2 in the new basis
    Z = 4


RHO_NAMES = {
    RhoGen.G: "g",
    RhoGen.DELTA: "D",
    RhoGen.X: "x",
    RhoGen.B2: "d2",
    RhoGen.Z: "z",
}

# d1 = x d2^-1, d3 = d2^-1 z, d0 = D z^-1 d2 x^-1 (from D = d0 d1 d2 d3).
_RHO_OF_GEN = {
    Gen.G: ((RhoGen.G, 1),),
    Gen.D0: ((RhoGen.DELTA, 1), (RhoGen.Z, -1), (RhoGen.B2, 1), (RhoGen.X, -1)),
    Gen.D1: ((RhoGen.X, 1), (RhoGen.B2, -1)),
    Gen.D2: ((RhoGen.B2, 1),),
    Gen.D3: ((RhoGen.B2, -1), (RhoGen.Z, 1)),
}

_GEN_OF_RHO = {
    RhoGen.G: G,
    RhoGen.DELTA: DELTA,
    RhoGen.X: X_ELT,
    RhoGen.B2: D2,
    RhoGen.Z: Z_ELT,
}


class RhoWord(Word):
    """Reduced word over the rho alphabet (free basis g, D, x, d2, z)."""

    def __repr__(self):
        return f"RhoWord({format_rho_word(self)!r})"


def rewrite_to_rho_alphabet(w: Word) -> RhoWord:
    """Rewrite a word in the basis (g, D, x, d2, z) and reduce there."""
    parts: list[Letter] = []
    for g, e in w.letters:
        sub = _RHO_OF_GEN[Gen(g)]
        if e == 1:
            parts.extend(sub)
        else:
            parts.extend((rg, -re) for rg, re in reversed(sub))
    return RhoWord(parts)


def rho_to_delta_alphabet(w: Word) -> Word:
    """Back-substitution from the rho alphabet; inverse of the rewrite."""
    out = Word.identity()
    for rg, e in w.letters:
        img = _GEN_OF_RHO[RhoGen(rg)]
        out = out * (img if e == 1 else img.inverse())
    return out


def exponent_sums_rho(w: Word):
    """Exponent sums (m, n) of x and z in the rho-alphabet form of w."""
    rw = rewrite_to_rho_alphabet(w)
    m = sum(e for g, e in rw.letters if g == RhoGen.X)
    n = sum(e for g, e in rw.letters if g == RhoGen.Z)
    return m, n


# The quotient by the normal closure of {g, D} is free on d1, d2, d3;
# d0 maps to the image of D d3^-1 d2^-1 d1^-1.
_PROJ_OF_GEN = {
    Gen.G: (),
    Gen.D0: ((Gen.D3, -1), (Gen.D2, -1), (Gen.D1, -1)),
    Gen.D1: ((Gen.D1, 1),),
    Gen.D2: ((Gen.D2, 1),),
    Gen.D3: ((Gen.D3, 1),),
}


def project_mod_gamma_subgroup(w: Word) -> Word:
    """Image of w in the quotient by the normal closure of g and D.

    The quotient is free on d1, d2, d3; the induced map sends g and D to
    the identity and d0 to d3^-1 d2^-1 d1^-1.
    """
    parts: list[Letter] = []
    for g, e in w.letters:
        sub = _PROJ_OF_GEN[Gen(g)]
        if e == 1:
            parts.extend(sub)
        else:
            parts.extend((pg, -pe) for pg, pe in reversed(sub))
    return Word(parts)


# ---------------------------------------------------------------------------
# Parsing and printing.

_ALIASES = {
    "g": (G,),
    "d0": (D0,),
    "d1": (D1,),
    "d2": (D2,),
    "d3": (D3,),
    "x": (X_ELT,),
    "z": (Z_ELT,),
    "D": (DELTA,),
}


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise WordSyntaxError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse_word(self, stop_chars: str = "") -> Word:
        out = Word.identity()
        first = True
        while True:
            ch = self.peek()
            if not ch or ch in stop_chars:
                break
            out = out * self.parse_term()
            first = False
        if first:
            self.error("empty word")
        return out

    def parse_term(self) -> Word:
        atom = self.parse_atom()
        ch = self.text[self.pos] if self.pos < len(self.text) else ""
        if ch == "'":
            self.pos += 1
            return atom.inverse()
        if ch == "^":
            self.pos += 1
            return atom ** self.parse_int()
        return atom

    def parse_int(self) -> int:
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or not self.text[start:self.pos].lstrip("+-"):
            self.error("expected integer exponent")
        return int(self.text[start:self.pos])

    def parse_atom(self) -> Word:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            w = self.parse_word(stop_chars=")")
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return w
        if ch == "[":
            self.pos += 1
            u = self.parse_word(stop_chars=",")
            if self.peek() != ",":
                self.error("expected ',' in commutator")
            self.pos += 1
            v = self.parse_word(stop_chars="]")
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            return commutator(u, v)
        return self.parse_letter()

    def parse_letter(self) -> Word:
        self.skip_ws()
        for name in ("d0", "d1", "d2", "d3", "g", "x", "z", "D"):
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                return _ALIASES[name][0]
        if self.text.startswith("1", self.pos):  # identity literal
            self.pos += 1
            return Word.identity()
        self.error("unknown letter")


def parse_word(text: str) -> Word:
    """Parse the word grammar; aliases x, z, D expand to their definitions."""
    p = _Parser(text)
    w = p.parse_word()
    p.skip_ws()
    if p.pos != len(text):
        p.error("trailing input")
    return w


def _format(w: Word, names: dict) -> str:
    if w.is_identity():
        return "1"
    parts = []
    i = 0
    letters = w.letters
    while i < len(letters):
        g, e = letters[i]
        j = i
        while j + 1 < len(letters) and letters[j + 1] == (g, e):
            j += 1
        count = (j - i + 1) * e
        name = names[g]
        parts.append(name if count == 1 else f"{name}^{count}")
        i = j + 1
    return " ".join(parts)


def format_word(w: Word) -> str:
    return _format(w, GEN_NAMES)


def format_rho_word(w: Word) -> str:
    return _format(w, RHO_NAMES)


def random_word(rng: random.Random, max_len: int = 40, gens: Sequence[int] | None = None) -> Word:
    """Uniform random letters, reduced; used by the seeded property checks."""
    n = rng.randint(0, max_len)
    gens = list(gens) if gens is not None else list(Gen)
    letters = [(rng.choice(gens), rng.choice((1, -1))) for _ in range(n)]
    return Word(letters)


# ---------------------------------------------------------------------------
# Exact identities behind "var^i(g) equals v_i modulo K".
#
# K is the normal subgroup generated by commutators of the monodromy orbit
# with the whole group, so any commutator with one argument among
# {D = v_1, v_2, ...} (or a conjugate or M-image of such) lies in K.  The
# identities below are exact word equalities whose correction factors are
# all of that shape; chaining them gives the mod-K statement.

@dataclass(frozen=True)
class ExactIdentity:
    name: str
    lhs: Word
    rhs: Word
    k_factors: Tuple[str, ...]  # human-readable description of each K-factor

    def holds(self) -> bool:
        return self.lhs == self.rhs


def variation_mod_k_identities(i_max: int = 5) -> list[ExactIdentity]:
    """Exact word identities reducing var^i(g) to v_i times K-factors.

    * D = (d1 d2 d3 d0) [d0^-1, D^-1]
    * M(d1 d2 d3 d0) D^-1 = [x,z] [z,D] = v_2 [z, v_1]
    * var^2(g) = (M(d1 d2 d3 d0) D^-1) (D M([d0^-1, D^-1]) D^-1)
    * d_k([d2,z] z) = d_{k+1}(z) d_k(z)
    * M(v_k) v_k^-1 = v_{k+1} [d_k(z), v_k]   (k >= 2)
    """
    M = m_endo()
    rep = D1 * D2 * D3 * D0
    c1 = commutator(D0.inverse(), DELTA.inverse())
    out = [
        ExactIdentity(
            "delta_representative",
            DELTA,
            rep * c1,
            ("[d0^-1, v1^-1]",),
        ),
        ExactIdentity(
            "second_variation_of_representative",
            M(rep) * DELTA.inverse(),
            v_k(2) * commutator(Z_ELT, DELTA),
            ("[z, v1]",),
        ),
        ExactIdentity(
            "second_variation_exact",
            var_iterate(2),
            (M(rep) * DELTA.inverse()) * (M(c1).conjugate_by(DELTA)),
            ("[z, v1]", "conj_D(M([d0^-1, v1^-1]))"),
        ),
    ]
    for k in range(1, i_max + 1):
        out.append(
            ExactIdentity(
                f"d_{k}_of_twisted_z",
                d_k(k, commutator(D2, Z_ELT) * Z_ELT),
                d_k(k + 1, Z_ELT) * d_k(k, Z_ELT),
                (),
            )
        )
    for k in range(2, i_max + 1):
        out.append(
            ExactIdentity(
                f"variation_step_{k}",
                var(v_k(k)),
                v_k(k + 1) * commutator(d_k(k, Z_ELT), v_k(k)),
                (f"[d_{k}(z), v{k}]",),
            )
        )
    return out
