"""Exact digit arithmetic in odometer groups Z_((l_n)).

Digits are stored least-significant first: ``digits[k]`` is the coordinate
at level ``k + 1``, an integer in ``[0, l_{k+1})``.  Carries and borrows
propagate leftward only, so every operation on a depth-m head is exact: it
agrees with the same operation applied to any infinite extension of the
head.  All values are immutable and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ScaleMismatch, ValidationError


@dataclass(frozen=True)
class Scale:
    """The level moduli (l_n) of an odometer group.

    kind "constant": l_n = l for every n.
    kind "powers":   l_n = b ** n.
    kind "explicit": a finite prefix of moduli, then a constant or powers
    tail rule for every later level.
    """

    kind: str
    l: int | None = None
    b: int | None = None
    prefix: tuple[int, ...] = ()
    tail: "Scale | None" = None

    def __post_init__(self):
        if self.kind == "constant":
            if self.l is None or self.l < 2:
                raise ValidationError("constant scale needs a modulus >= 2")
        elif self.kind == "powers":
            if self.b is None or self.b < 2:
                raise ValidationError("powers scale needs a base >= 2")
        elif self.kind == "explicit":
            if not self.prefix or any(m < 2 for m in self.prefix):
                raise ValidationError("explicit prefix moduli must be >= 2")
            if self.tail is None or self.tail.kind == "explicit":
                raise ValidationError("explicit tail must be constant or powers")
        else:
            raise ValidationError(f"unknown scale kind {self.kind!r}")

    @staticmethod
    def constant(l: int) -> "Scale":
        return Scale("constant", l=l)

    @staticmethod
    def powers(b: int) -> "Scale":
        return Scale("powers", b=b)

    @staticmethod
    def explicit(prefix, tail: "Scale") -> "Scale":
        return Scale("explicit", prefix=tuple(prefix), tail=tail)

    def modulus(self, n: int) -> int:
        """Modulus l_n at level n >= 1; total for every n."""
        if n < 1:
            raise ValidationError("levels are numbered from 1")
        if self.kind == "constant":
            return self.l
        if self.kind == "powers":
            return self.b ** n
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.tail.modulus(n)

    def min_modulus_beyond(self, depth: int) -> int:
        """Smallest modulus at any level n > depth (closed form)."""
        if self.kind == "constant":
            return self.l
        if self.kind == "powers":
            return self.b ** (depth + 1)
        cands = list(self.prefix[depth:])
        cands.append(self.tail.min_modulus_beyond(max(depth, len(self.prefix))))
        return min(cands)

    def to_json(self):
        if self.kind == "constant":
            return {"kind": "constant", "l": self.l}
        if self.kind == "powers":
            return {"kind": "powers", "b": self.b}
        return {"kind": "explicit", "prefix": list(self.prefix),
                "tail": self.tail.to_json()}

    @staticmethod
    def from_json(obj) -> "Scale":
        kind = obj.get("kind")
        if kind == "constant":
            return Scale.constant(obj["l"])
        if kind == "powers":
            return Scale.powers(obj["b"])
        if kind == "explicit":
            return Scale.explicit(obj["prefix"], Scale.from_json(obj["tail"]))
        raise ValidationError(f"unknown scale kind {kind!r}")


@dataclass(frozen=True)
class OdometerHead:
    """The first ``depth`` digits of a point of Z_((l_n))."""

    scale: Scale
    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(self.digits))
        for k, d in enumerate(self.digits):
            m = self.scale.modulus(k + 1)
            if not 0 <= d < m:
                raise ValidationError(
                    f"digit {d} at level {k + 1} out of range [0, {m})")

    @property
    def depth(self) -> int:
        return len(self.digits)


@dataclass(frozen=True)
class OdometerPoint:
    """A head followed by one digit repeated at every deeper level."""

    head: OdometerHead
    tail_digit: int

    def __post_init__(self):
        bound = self.head.scale.min_modulus_beyond(self.head.depth)
        if not 0 <= self.tail_digit < bound:
            raise ValidationError(
                f"tail digit {self.tail_digit} invalid beyond depth {self.head.depth}")

    @property
    def scale(self) -> Scale:
        return self.head.scale

    def digit(self, n: int) -> int:
        if n <= self.head.depth:
            return self.head.digits[n - 1]
        return self.tail_digit

    def head_at(self, depth: int) -> OdometerHead:
        """Expand to an explicit head of the requested depth."""
        digits = list(self.head.digits[:depth])
        digits.extend(self.tail_digit for _ in range(depth - len(digits)))
        return OdometerHead(self.scale, tuple(digits))


def integer_head(t: int, scale: Scale, depth: int) -> OdometerHead:
    """Head of the canonical odometer representation of the integer t."""
    if depth < 0:
        raise ValidationError("depth must be >= 0")
    digits = []
    c = t
    for n in range(1, depth + 1):
        c, d = divmod(c, scale.modulus(n))
        digits.append(d)
    return OdometerHead(scale, tuple(digits))


def add_integer(h: OdometerHead, t: int) -> OdometerHead:
    """Depth-m head of z + t for any point z extending h.

    Exact for positive and negative t alike: digit n of a sum depends only
    on digits <= n, and floor division makes borrows propagate leftward.
    """
    digits = []
    c = t
    for k, d in enumerate(h.digits):
        c, r = divmod(d + c, h.scale.modulus(k + 1))
        digits.append(r)
    return OdometerHead(h.scale, tuple(digits))


def add_heads(a: OdometerHead, b: OdometerHead) -> OdometerHead:
    """Digit-wise sum a + b, exact down to the shallower depth."""
    if a.scale != b.scale:
        raise ScaleMismatch("cannot add heads over different scales")
    digits = []
    c = 0
    for k in range(min(a.depth, b.depth)):
        c, r = divmod(a.digits[k] + b.digits[k] + c, a.scale.modulus(k + 1))
        digits.append(r)
    return OdometerHead(a.scale, tuple(digits))


def common_head_length(a: OdometerHead, b: OdometerHead) -> tuple[int, bool]:
    """(L, saturated): L leading digits agree; saturated means agreement
    reached the shallower depth, so the true L may exceed the reported one."""
    if a.scale != b.scale:
        raise ScaleMismatch("cannot compare heads over different scales")
    limit = min(a.depth, b.depth)
    L = 0
    while L < limit and a.digits[L] == b.digits[L]:
        L += 1
    return L, L == limit


def head_index(h: OdometerHead) -> int:
    """Sum of z_k * l^(k-1) with l^(k) the product of the first k moduli."""
    total = 0
    weight = 1
    for k, d in enumerate(h.digits):
        total += d * weight
        weight *= h.scale.modulus(k + 1)
    return total


def level_product(scale: Scale, m: int) -> int:
    """l^(m) = l_1 * ... * l_m."""
    w = 1
    for n in range(1, m + 1):
        w *= scale.modulus(n)
    return w


def truncate(h: OdometerHead, depth: int) -> OdometerHead:
    if depth > h.depth:
        raise ValidationError("cannot truncate to a larger depth")
    return OdometerHead(h.scale, h.digits[:depth])
