"""Constant-length substitutions: validation, primitivity, aperiodicity,
height and pure base, coincidences, fixed points, finite languages.

Letters are single characters so that words are plain strings; the pure
base of a height-h substitution relabels its h-blocks to fresh letters and
records the block table.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import (NotPrimitive, ParseError, PureBaseError,
                     StabilizationError, ValidationError)

LETTER_POOL = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class Substitution:
    """A map theta: A -> A^l, stored as the ordered alphabet plus one image
    word per letter (aligned with the alphabet)."""

    alphabet: tuple[str, ...]
    words: tuple[str, ...]

    def __post_init__(self):
        if not self.alphabet:
            raise ValidationError("empty alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValidationError("duplicate letters in alphabet")
        if any(len(a) != 1 for a in self.alphabet):
            raise ValidationError("letters must be single characters")
        if len(self.words) != len(self.alphabet):
            raise ValidationError("one image word per letter required")
        l = len(self.words[0])
        if l < 2:
            raise ValidationError("substitution length must be >= 2")
        letters = set(self.alphabet)
        for a, w in zip(self.alphabet, self.words):
            if len(w) != l:
                raise ValidationError(
                    f"rule for {a!r} has length {len(w)}, expected {l}")
            bad = set(w) - letters
            if bad:
                raise ValidationError(
                    f"rule for {a!r} uses letters outside the alphabet: {sorted(bad)}")
        object.__setattr__(self, "_rule", dict(zip(self.alphabet, self.words)))

    @property
    def length(self) -> int:
        return len(self.words[0])

    def rule(self, a: str) -> str:
        return self._rule[a]

    def rules(self) -> dict:
        return dict(zip(self.alphabet, self.words))

    def to_json(self):
        return {"alphabet": list(self.alphabet), "rules": self.rules()}


@dataclass(frozen=True)
class ColumnMap:
    """The i-th column theta_i: the letter map sending a to theta(a)[i]."""

    index: int
    table: tuple[tuple[str, str], ...]

    def __call__(self, a: str) -> str:
        return dict(self.table)[a]

    def as_dict(self) -> dict:
        return dict(self.table)

    def image(self, letters) -> frozenset:
        t = dict(self.table)
        return frozenset(t[a] for a in letters)


def column(theta: Substitution, i: int) -> ColumnMap:
    if not 0 <= i < theta.length:
        raise ValidationError(f"column index {i} out of range")
    return ColumnMap(i, tuple((a, theta.rule(a)[i]) for a in theta.alphabet))


def columns(theta: Substitution) -> tuple[ColumnMap, ...]:
    return tuple(column(theta, i) for i in range(theta.length))


def column_image(theta: Substitution, i: int, letters) -> frozenset:
    return frozenset(theta.rule(a)[i] for a in letters)


# ---------------------------------------------------------------------------
# parsing


def validate(raw) -> Substitution:
    """Build a Substitution from a rules mapping, a JSON-style dict, or
    rule-per-line text.  The alphabet is the ordered set of rule keys."""
    if isinstance(raw, Substitution):
        return raw
    if isinstance(raw, str):
        return parse_text(raw)
    if isinstance(raw, dict):
        rules = raw.get("rules", raw)
        if not isinstance(rules, dict) or not rules:
            raise ParseError("expected a non-empty rules mapping")
        alphabet = tuple(rules.keys())
        return Substitution(alphabet, tuple(str(rules[a]) for a in alphabet))
    raise ParseError(f"cannot interpret {type(raw).__name__} as a substitution")


def parse_text(text: str) -> Substitution:
    """One rule per line: ``a -> aaca`` (whitespace optional)."""
    rules = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "->" not in line:
            raise ParseError(f"line {lineno}: expected 'letter -> word'")
        lhs, rhs = line.split("->", 1)
        a, w = lhs.strip(), rhs.strip()
        if a in rules:
            raise ParseError(f"line {lineno}: duplicate rule for {a!r}")
        rules[a] = w
    if not rules:
        raise ParseError("no rules found")
    alphabet = tuple(rules.keys())
    return Substitution(alphabet, tuple(rules[a] for a in alphabet))


# ---------------------------------------------------------------------------
# primitivity and language


def is_primitive(theta: Substitution) -> bool:
    """True iff the incidence matrix satisfies M^k > 0 entrywise for some
    k up to the Wielandt bound (|A| - 1)^2 + 1."""
    n = len(theta.alphabet)
    full = frozenset(theta.alphabet)
    base = {a: frozenset(theta.rule(a)) for a in theta.alphabet}
    cur = base
    for _ in range((n - 1) ** 2 + 1):
        if all(cur[a] == full for a in theta.alphabet):
            return True
        cur = {a: frozenset().union(*(base[b] for b in cur[a]))
               for a in theta.alphabet}
    return False


def first_letter_seed(theta: Substitution) -> tuple[int, str]:
    """Smallest power q and first letter (alphabet order) with theta^q(seed)
    starting with seed; exists for every substitution since the first-letter
    map eventually cycles."""
    def f(a):
        return theta.rule(a)[0]

    for q in range(1, len(theta.alphabet) + 1):
        for a in theta.alphabet:
            x = a
            for _ in range(q):
                x = f(x)
            if x == a:
                return q, a
    raise ValidationError("no first-letter cycle found")  # unreachable


def expand(theta: Substitution, word: str, k: int) -> str:
    for _ in range(k):
        word = "".join(theta.rule(a) for a in word)
    return word


def fixed_point_prefix(theta: Substitution, min_len: int) -> tuple[str, int, str]:
    """(prefix, q, seed): a prefix of the one-sided fixed point of theta^q."""
    q, seed = first_letter_seed(theta)
    prefix = seed
    while len(prefix) < min_len:
        prefix = expand(theta, prefix, q)
    return prefix, q, seed


@lru_cache(maxsize=None)
def language(theta: Substitution, n: int) -> frozenset:
    """All allowed words of length n for a primitive substitution.

    Short lengths are collected from fixed-point prefixes until unchanged
    by one further application; longer ones satisfy the exact recursion
    that every allowed n-word sits inside the image of an allowed word of
    length ceil(n / l) + 1.
    """
    if n == 0:
        return frozenset({""})
    if n == 1:
        return frozenset(theta.alphabet)  # primitivity
    if n <= 3:
        return _short_language(theta, n)
    m = -(-n // theta.length) + 1
    out = set()
    for w in language(theta, m):
        img = expand(theta, w, 1)
        out.update(img[i:i + n] for i in range(len(img) - n + 1))
    return frozenset(out)


def _short_language(theta: Substitution, n: int) -> frozenset:
    q, seed = first_letter_seed(theta)
    prefix = seed
    prev = None
    for _ in range(64):
        prefix = expand(theta, prefix, q)
        if len(prefix) < n:
            continue
        cur = frozenset(prefix[i:i + n] for i in range(len(prefix) - n + 1))
        if cur == prev:
            return cur
        prev = cur
    raise StabilizationError(f"language of length {n} did not stabilize")


def complexity(theta: Substitution, n: int) -> int:
    return len(language(theta, n))


def is_aperiodic(theta: Substitution) -> tuple[bool, int]:
    """(flag, bound): Morse-Hedlund scan of the factor complexity up to
    n* = 2 * l * |A|^2.  Returns False as soon as p(n) <= n (an exact
    periodicity certificate); returns True when p(n) >= n + 1 holds up to
    the bound, which is recorded in the analysis report.
    """
    if not is_primitive(theta):
        raise NotPrimitive("aperiodicity test requires a primitive substitution")
    bound = 2 * theta.length * len(theta.alphabet) ** 2
    for n in range(1, bound + 1):
        p = complexity(theta, n)
        if p <= n:
            return False, bound
        if p >= bound + 1:
            # p is non-decreasing, so p(m) >= m + 1 for every m <= bound.
            return True, bound
    return True, bound


# ---------------------------------------------------------------------------
# height and pure base


def height_and_pure_base(theta: Substitution):
    """(h, theta', blocks): the height and the pure base.

    h is the largest divisor, coprime to l, of the gcd of the return times
    of u_0 in a fixed-point prefix u; the gcd must be unchanged by one more
    application of theta (stabilization check).  For h > 1 the pure base
    acts on the distinct h-blocks of u, relabelled to fresh letters; the
    construction is validated by postconditions (length l, primitive,
    height 1) and never silently trusted.
    """
    l = theta.length
    prefix, q, seed = fixed_point_prefix(theta, l ** 4)
    g = _returns_gcd(prefix)
    longer = expand(theta, prefix, q)
    if _returns_gcd(longer) != g:
        raise StabilizationError("height gcd did not stabilize on the prefix")
    h = _coprime_part(g, l)
    if h == 1:
        return 1, theta, None

    u = longer
    blocks = []
    seen = {}
    for j in range(len(u) // h):
        b = u[j * h:(j + 1) * h]
        if b not in seen:
            seen[b] = True
            blocks.append(b)
    allowed = language(theta, h)
    # Close under chopping: theta of a block is l consecutive h-blocks.
    rules = {}
    queue = deque(blocks)
    while queue:
        b = queue.popleft()
        if b in rules:
            continue
        image = expand(theta, b, 1)
        chunks = [image[t * h:(t + 1) * h] for t in range(l)]
        for c in chunks:
            if c not in allowed:
                raise PureBaseError(
                    f"pure-base block {c!r} is not an allowed word")
            if c not in rules and c not in queue and c not in seen:
                seen[c] = True
                blocks.append(c)
                queue.append(c)
        rules[b] = chunks
    if len(blocks) > len(LETTER_POOL):
        raise PureBaseError("pure-base alphabet exceeds the letter pool")
    name = {b: LETTER_POOL[i] for i, b in enumerate(blocks)}
    theta_prime = Substitution(
        tuple(name[b] for b in blocks),
        tuple("".join(name[c] for c in rules[b]) for b in blocks))
    if not is_primitive(theta_prime):
        raise PureBaseError("constructed pure base is not primitive")
    hp, _, _ = height_and_pure_base(theta_prime)
    if hp != 1:
        raise PureBaseError(f"constructed pure base has height {hp}, not 1")
    return h, theta_prime, tuple(blocks)


def _returns_gcd(u: str) -> int:
    g = 0
    for n in range(1, len(u)):
        if u[n] == u[0]:
            g = gcd(g, n)
    if g == 0:
        raise StabilizationError("no return of the fixed-point seed in the prefix")
    return g


def _coprime_part(g: int, l: int) -> int:
    d = gcd(g, l)
    while d > 1:
        g //= d
        d = gcd(g, l)
    return g


# ---------------------------------------------------------------------------
# coincidence


def shortest_collapsing_word(theta: Substitution):
    """Shortest column-index word collapsing the alphabet to one letter,
    or None.  Breadth-first closure of {A} under single columns; the state
    space has at most 2^|A| sets, so the search always terminates."""
    start = frozenset(theta.alphabet)
    if len(start) == 1:
        return ()
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for i in range(theta.length):
            img = frozenset(theta.rule(a)[i] for a in s)
            if len(img) == 1:
                word = [i]
                cur = s
                while parent[cur] is not None:
                    cur, j = parent[cur]
                    word.append(j)
                return tuple(reversed(word))
            if img not in parent:
                parent[img] = (s, i)
                queue.append(img)
    return None


def has_coincidence(theta: Substitution):
    """Coincidence witness on the pure base: the shortest index word
    i_1..i_k with |theta'_{i_k}(...theta'_{i_1}(A')...)| = 1, or None."""
    _, theta_prime, _ = height_and_pure_base(theta)
    return shortest_collapsing_word(theta_prime)


# ---------------------------------------------------------------------------
# fixed points


@dataclass(frozen=True)
class Window:
    """A two-sided word: ``text`` with the origin at index ``origin``;
    positions run over [-origin, len(text) - origin)."""

    text: str
    origin: int

    def letter(self, i: int) -> str:
        j = self.origin + i
        if not 0 <= j < len(self.text):
            raise ValidationError(f"position {i} outside window")
        return self.text[j]

    @property
    def lo(self) -> int:
        return -self.origin

    @property
    def hi(self) -> int:
        return len(self.text) - self.origin


def two_sided_seed(theta: Substitution) -> tuple[str, str, int]:
    """(p, s, q): an admissible seed pair p.s for a two-sided fixed point
    of theta^q, preferring the smallest power q and then alphabet order."""
    for q in range(1, len(theta.alphabet) + 1):
        lang2 = language(theta, 2)
        for p in theta.alphabet:
            if expand(theta, p, q)[-1] != p:
                continue
            for s in theta.alphabet:
                if expand(theta, s, q)[0] != s:
                    continue
                if p + s in lang2:
                    return p, s, q
    raise ValidationError("no admissible two-sided fixed-point seed found")


def fixed_point_window(theta: Substitution, radius: int) -> Window:
    """Two-sided fixed-point word on [-radius, radius)."""
    if radius == 0:
        return Window("", 0)
    p, s, q = two_sided_seed(theta)
    left, right = p, s
    while len(right) < radius or len(left) < radius:
        left = expand(theta, left, q)
        right = expand(theta, right, q)
    return Window(left[-radius:] + right[:radius], radius)


def substitution_power(theta: Substitution, m: int) -> Substitution:
    if m < 1:
        raise ValidationError("power must be >= 1")
    return Substitution(theta.alphabet,
                        tuple(expand(theta, a, m) for a in theta.alphabet))


def letter_in_power(theta: Substitution, v: str, k: int, index: int) -> str:
    """theta^k(v)[index] by base-l digit descent, without materializing the
    word: the most significant digit picks the outer block."""
    l = theta.length
    if not 0 <= index < l ** k:
        raise ValidationError("index outside theta^k(v)")
    digits = []
    for _ in range(k):
        index, d = divmod(index, l)
        digits.append(d)
    u = v
    for d in reversed(digits):
        u = theta.rule(u)[d]
    return u
