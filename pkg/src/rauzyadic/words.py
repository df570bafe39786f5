"""Finite words, factor languages, complexity and special-factor analysis.

Words are plain ``str`` over the digit letters ``'0'..'9'`` (dense integer
letters, lexicographic order of the string equals lexicographic order of
the letter sequence).  A :class:`FactorOracle` provides the exact factor
sets of an infinite word or subshift language up to a certified horizon;
everything downstream is a pure function of factor sets.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HorizonExceeded, IdentityViolation

Word = str

LETTERS = "0123456789"


@dataclass(frozen=True)
class Alphabet:
    """Dense integer letters 0..size-1, written as digit characters."""

    size: int

    def __post_init__(self):
        if not 1 <= self.size <= 10:
            raise ValueError(f"alphabet size {self.size} out of range 1..10")

    @property
    def letters(self) -> str:
        return LETTERS[: self.size]

    def check(self, w: Word) -> Word:
        for c in w:
            if c not in self.letters:
                raise ValueError(f"letter {c!r} not in alphabet of size {self.size}")
        return w


def factors_of(w: Word, n: int) -> frozenset[Word]:
    """All length-n factors of the finite word w."""
    if n == 0:
        return frozenset({""})
    return frozenset(w[i : i + n] for i in range(len(w) - n + 1))


class FactorOracle:
    """Exact-up-to-horizon factor sets of an infinite word or subshift.

    ``factors(n)`` is guaranteed exact for ``n <= horizon``; queries past
    the horizon raise :class:`HorizonExceeded` instead of silently
    truncating.  The certificate backing the guarantee depends on the
    constructor (see ``source``).
    """

    def __init__(self, alphabet: Alphabet, factor_sets: dict[int, frozenset[Word]],
                 horizon: int, source: str, witness: Word | None = None):
        self.alphabet = alphabet
        self._factors = factor_sets
        self.horizon = horizon
        self.source = source
        self.witness = witness

    def __repr__(self):
        return f"FactorOracle({self.source!r}, horizon={self.horizon})"

    # -- core queries ------------------------------------------------

    def factors(self, n: int) -> frozenset[Word]:
        if n < 0:
            raise ValueError("negative factor length")
        if n > self.horizon:
            raise HorizonExceeded(f"factors({n}) beyond horizon {self.horizon} ({self.source})")
        return self._factors[n]

    def contains(self, w: Word) -> bool:
        return w in self.factors(len(w))

    __contains__ = contains

    def right_extensions(self, u: Word) -> frozenset[str]:
        return frozenset(a for a in self.alphabet.letters if u + a in self.factors(len(u) + 1))

    def left_extensions(self, u: Word) -> frozenset[str]:
        return frozenset(a for a in self.alphabet.letters if a + u in self.factors(len(u) + 1))

    def is_right_special(self, u: Word) -> bool:
        return len(self.right_extensions(u)) >= 2

    def is_left_special(self, u: Word) -> bool:
        return len(self.left_extensions(u)) >= 2

    def is_bispecial(self, u: Word) -> bool:
        return self.is_right_special(u) and self.is_left_special(u)

    def right_specials(self, n: int) -> list[Word]:
        return sorted(u for u in self.factors(n) if self.is_right_special(u))

    def left_specials(self, n: int) -> list[Word]:
        return sorted(u for u in self.factors(n) if self.is_left_special(u))

    def bispecials(self, n: int) -> list[Word]:
        return sorted(u for u in self.factors(n) if self.is_bispecial(u))

    def is_aperiodic(self, upto: int) -> bool:
        """p(n) >= n+1 for n <= upto, equivalently a right special of each length."""
        return all(len(self.factors(n)) >= n + 1 for n in range(upto + 1))

    # -- constructors ------------------------------------------------

    @classmethod
    def from_prefix(cls, prefix: Word, horizon: int, source: str = "explicit prefix",
                    alphabet: Alphabet | None = None) -> "FactorOracle":
        """Oracle backed by an explicit prefix; exactness is the caller's claim."""
        if alphabet is None:
            size = max((int(c) for c in prefix), default=0) + 1
            alphabet = Alphabet(size)
        alphabet.check(prefix)
        if len(prefix) < horizon:
            raise HorizonExceeded(f"prefix of length {len(prefix)} shorter than horizon {horizon}")
        sets = {n: factors_of(prefix, n) for n in range(horizon + 1)}
        return cls(alphabet, sets, horizon, source, witness=prefix)

    @classmethod
    def from_substitution(cls, images: dict[str, Word], horizon: int,
                          seed: str = "0", source: str | None = None,
                          max_len: int = 4_000_000) -> "FactorOracle":
        """Oracle for the one-sided fixed point of a prolongable substitution.

        The prefix is grown by iterating the substitution and doubling the
        kept length until the factor sets at every order up to the horizon
        agree across two consecutive doublings.  Failure to stabilize within
        ``max_len`` raises HorizonExceeded: the certificate could not be
        produced, so no exactness is claimed.
        """
        if not images[seed].startswith(seed):
            raise ValueError(f"substitution not prolongable at seed {seed!r}")
        size = max(int(c) for w in images.values() for c in w) + 1
        alphabet = Alphabet(size)

        def grow(target: int) -> Word:
            w = seed
            while len(w) < target:
                nxt = "".join(images[c] for c in w)
                if len(nxt) <= len(w):
                    raise HorizonExceeded("substitution does not grow from seed")
                w = nxt
            return w[:target]

        length = max(64, 8 * horizon)
        prev_sets = None
        stable_runs = 0
        while length <= max_len:
            w = grow(length)
            sets = {n: factors_of(w, n) for n in range(horizon + 1)}
            if sets == prev_sets:
                stable_runs += 1
                if stable_runs >= 2:
                    name = source or f"substitution fixed point {images}"
                    return cls(alphabet, sets, horizon, name, witness=w)
            else:
                stable_runs = 0
            prev_sets = sets
            length *= 2
        raise HorizonExceeded(f"factor sets did not stabilize below {max_len} letters")


# Built-in named substitutions.
FIBONACCI = {"0": "01", "1": "0"}
THUE_MORSE = {"0": "01", "1": "10"}
TRIBONACCI = {"0": "01", "1": "02", "2": "0"}

NAMED_SOURCES = {
    "fibonacci": FIBONACCI,
    "thue-morse": THUE_MORSE,
    "tribonacci": TRIBONACCI,
}


def named_oracle(name: str, horizon: int) -> FactorOracle:
    return FactorOracle.from_substitution(NAMED_SOURCES[name], horizon, source=name)


# -- analysis operations --------------------------------------------


@dataclass(frozen=True)
class ExtensionProfile:
    """Right/left/bilateral extension data of one factor."""

    word: Word
    right: frozenset[str]
    left: frozenset[str]
    biext: frozenset[tuple[str, str]]
    m: int

    @property
    def right_special(self) -> bool:
        return len(self.right) >= 2

    @property
    def left_special(self) -> bool:
        return len(self.left) >= 2

    @property
    def bispecial(self) -> bool:
        return self.right_special and self.left_special

    @property
    def kind(self) -> str:
        """weak / neutral / strong by the sign of the bilateral order."""
        return "weak" if self.m < 0 else ("strong" if self.m > 0 else "neutral")


def extension_profile(oracle: FactorOracle, u: Word) -> ExtensionProfile:
    """Extensions and bilateral order m(u) = #biext - d+ - d- + 1."""
    if len(u) + 2 > oracle.horizon:
        raise HorizonExceeded(f"extension profile of {u!r} needs horizon {len(u) + 2}")
    right = oracle.right_extensions(u)
    left = oracle.left_extensions(u)
    two = oracle.factors(len(u) + 2)
    biext = frozenset((a, b) for a in left for b in right if a + u + b in two)
    m = len(biext) - len(right) - len(left) + 1
    return ExtensionProfile(u, right, left, biext, m)


@dataclass(frozen=True)
class ComplexityProfile:
    p: tuple[int, ...]
    s: tuple[int, ...]

    def to_csv(self) -> str:
        lines = ["n,p,s"]
        for n, pn in enumerate(self.p):
            sn = self.s[n] if n < len(self.s) else ""
            lines.append(f"{n},{pn},{sn}")
        return "\n".join(lines) + "\n"


def complexity_profile(oracle: FactorOracle, N: int) -> ComplexityProfile:
    """p(0..N) and s(n)=p(n+1)-p(n), with the special-factor identities asserted.

    Raises IdentityViolation if either first-difference identity or the
    second-difference bilateral-order identity fails: that means the oracle's
    factor sets are inconsistent (insufficient horizon).
    """
    if N > oracle.horizon:
        raise HorizonExceeded(f"complexity to {N} beyond horizon {oracle.horizon}")
    p = tuple(len(oracle.factors(n)) for n in range(N + 1))
    s = tuple(p[n + 1] - p[n] for n in range(N))
    for n in range(N):
        rs = sum(len(oracle.right_extensions(u)) - 1 for u in oracle.right_specials(n))
        ls = sum(len(oracle.left_extensions(u)) - 1 for u in oracle.left_specials(n))
        if not rs == ls == s[n]:
            raise IdentityViolation(f"first-difference identity fails at n={n}: s={s[n]} right={rs} left={ls}")
    for n in range(N - 1):
        if n + 2 > oracle.horizon:
            break
        total_m = sum(extension_profile(oracle, u).m for u in oracle.factors(n))
        if s[n + 1] - s[n] != total_m:
            raise IdentityViolation(f"second-difference identity fails at n={n}: "
                                    f"ds={s[n + 1] - s[n]} sum m={total_m}")
    return ComplexityProfile(p, s)


def return_words(oracle: FactorOracle, u: Word, max_length: int | None = None) -> frozenset[Word]:
    """Return words to u: words r with ur in the language containing exactly
    two occurrences of u, one as a prefix and one as a suffix.

    Enumerated as first-return extensions pruned by language membership, so
    the result is exact whenever every return word fits inside the horizon;
    otherwise HorizonExceeded is raised with the words found so far attached
    as ``partial``.
    """
    if not oracle.contains(u):
        raise ValueError(f"{u!r} not in the language")
    room = oracle.horizon - len(u)
    capped = max_length is not None and max_length <= room
    limit = min(room, max_length) if max_length is not None else room
    found: set[Word] = set()
    overflow = False
    stack = [u]
    while stack:
        v = stack.pop()
        for a in sorted(oracle.right_extensions(v)):
            w = v + a
            if not oracle.contains(w):
                continue
            if w[len(w) - len(u):] == u:
                found.add(w[len(u):])
                continue
            if len(w) - len(u) >= limit:
                overflow = True
                continue
            stack.append(w)
    if overflow and not capped:
        raise HorizonExceeded(f"return words to {u!r} exceed horizon {oracle.horizon}",
                              partial=frozenset(found))
    # under a caller-supplied cap the result is exactly the return words of
    # length <= max_length
    return frozenset(r for r in found if max_length is None or len(r) <= max_length)


def factors_text(oracle: FactorOracle, n: int) -> str:
    """Length-n factor set as sorted, newline-separated digit strings."""
    return "\n".join(sorted(oracle.factors(n))) + "\n"


def return_words_by_scan(witness: Word, u: Word) -> frozenset[Word]:
    """Return words to u read off consecutive occurrences in a finite word.

    A return word r is the piece between the ends of consecutive
    occurrences, so that u.r has u as a prefix and as a suffix and no
    occurrence in between.  Independent of the oracle machinery; used as
    a cross-check.
    """
    occ = []
    start = 0
    while True:
        i = witness.find(u, start)
        if i < 0:
            break
        occ.append(i)
        start = i + 1
    k = len(u)
    return frozenset(witness[i + k : j + k] for i, j in zip(occ, occ[1:]))
