"""Weights: tropical, string (left semiring) and Gallic (string x tropical).

Each weight class exposes ``zero()``/``one()`` constructors, ``plus``/``times``
and a text form used by the FST text format.  Class-level flags describe
the algebraic properties other modules rely on::

    commutative          -- times is commutative
    idempotent           -- w + w == w (composition needs this)
    right_distributive   -- (a + b) * c == a*c + b*c

The string semiring is only left-distributive, which matters for any code
that sums over paths (see ``fst.weighted_language``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, ClassVar, Hashable, Iterable, Union


@dataclass(frozen=True)
class TropicalWeight:
    """min-plus weight over the non-negative reals extended with +inf."""

    value: float

    commutative: ClassVar[bool] = True
    idempotent: ClassVar[bool] = True
    right_distributive: ClassVar[bool] = True
    name: ClassVar[str] = "tropical"

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", float(self.value))
        if math.isnan(self.value):
            raise ValueError("tropical weight cannot be NaN")

    @classmethod
    def zero(cls) -> TropicalWeight:
        return cls(math.inf)

    @classmethod
    def one(cls) -> TropicalWeight:
        return cls(0.0)

    def is_zero(self) -> bool:
        return self.value == math.inf

    def plus(self, other: TropicalWeight) -> TropicalWeight:
        return self if self.value <= other.value else other

    def times(self, other: TropicalWeight) -> TropicalWeight:
        return TropicalWeight(self.value + other.value)

    def to_text(self) -> str:
        if self.is_zero():
            return "Infinity"
        if self.value.is_integer():
            return str(int(self.value))
        return repr(self.value)

    @classmethod
    def from_text(cls, text: str) -> TropicalWeight:
        if text in ("Infinity", "inf", "+inf"):
            return cls.zero()
        return cls(float(text))

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class StringWeight:
    """A finite label sequence, or the distinguished infinite string (zero).

    ``plus`` is the longest common prefix and ``times`` is concatenation.
    """

    labels: tuple = ()
    infinite: bool = False

    commutative: ClassVar[bool] = False
    idempotent: ClassVar[bool] = True
    right_distributive: ClassVar[bool] = False
    name: ClassVar[str] = "string"

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        if self.infinite and labels:
            raise ValueError("the infinite string carries no labels")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def zero(cls) -> StringWeight:
        return cls((), infinite=True)

    @classmethod
    def one(cls) -> StringWeight:
        return cls(())

    @classmethod
    def of(cls, *labels: Hashable) -> StringWeight:
        return cls(labels)

    def is_zero(self) -> bool:
        return self.infinite

    def __len__(self) -> int:
        if self.infinite:
            raise ValueError("the infinite string has no length")
        return len(self.labels)

    def plus(self, other: StringWeight) -> StringWeight:
        if self.infinite:
            return other
        if other.infinite:
            return self
        n = 0
        for x, y in zip(self.labels, other.labels):
            if x != y:
                break
            n += 1
        return StringWeight(self.labels[:n])

    def times(self, other: StringWeight) -> StringWeight:
        if self.infinite or other.infinite:
            return StringWeight.zero()
        return StringWeight(self.labels + other.labels)

    def to_text(self) -> str:
        if self.infinite:
            return "<inf>"
        if not self.labels:
            return "<eps>"
        return "_".join(str(x) for x in self.labels)

    @classmethod
    def from_text(cls, text: str) -> StringWeight:
        if text == "<inf>":
            return cls.zero()
        if text == "<eps>":
            return cls.one()
        return cls(tuple(int(x) for x in text.split("_")))

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class GallicWeight:
    """Product of a string weight (output labels) and a tropical weight."""

    string: StringWeight
    weight: TropicalWeight

    commutative: ClassVar[bool] = False
    idempotent: ClassVar[bool] = True
    right_distributive: ClassVar[bool] = False
    name: ClassVar[str] = "gallic"

    @classmethod
    def zero(cls) -> GallicWeight:
        return cls(StringWeight.zero(), TropicalWeight.zero())

    @classmethod
    def one(cls) -> GallicWeight:
        return cls(StringWeight.one(), TropicalWeight.one())

    @classmethod
    def of(cls, labels: Iterable[Hashable] = (), value: float = 0.0) -> GallicWeight:
        return cls(StringWeight(tuple(labels)), TropicalWeight(value))

    def is_zero(self) -> bool:
        return self.string.is_zero() and self.weight.is_zero()

    def plus(self, other: GallicWeight) -> GallicWeight:
        return GallicWeight(self.string.plus(other.string), self.weight.plus(other.weight))

    def times(self, other: GallicWeight) -> GallicWeight:
        return GallicWeight(self.string.times(other.string), self.weight.times(other.weight))

    def to_text(self) -> str:
        return f"{self.string.to_text()},{self.weight.to_text()}"

    @classmethod
    def from_text(cls, text: str) -> GallicWeight:
        s, sep, w = text.rpartition(",")
        if not sep:
            raise ValueError(f"malformed Gallic weight {text!r}")
        return cls(StringWeight.from_text(s), TropicalWeight.from_text(w))

    def __str__(self) -> str:
        return self.to_text()


Weight = Union[TropicalWeight, StringWeight, GallicWeight]
WEIGHT_TYPES: dict[str, Any] = {
    cls.name: cls for cls in (TropicalWeight, StringWeight, GallicWeight)
}


def _check_same(a: Weight, b: Weight) -> None:
    if type(a) is not type(b):
        raise TypeError(f"cannot combine {type(a).__name__} with {type(b).__name__}")


def plus(a: Weight, b: Weight) -> Weight:
    _check_same(a, b)
    return a.plus(b)  # type: ignore[arg-type]


def times(a: Weight, b: Weight) -> Weight:
    _check_same(a, b)
    return a.times(b)  # type: ignore[arg-type]


def product(weights: Iterable[Weight], weight_type: Any) -> Weight:
    """Left-to-right product of ``weights``; ``one`` if empty."""
    acc = weight_type.one()
    for w in weights:
        acc = acc.times(w)
    return acc


def commutes_with_all(w: GallicWeight) -> bool:
    """True when ``w`` commutes under times with every Gallic weight.

    That holds for the empty-string weights (the tropical half is
    commutative) and for zero.
    """
    if w.is_zero():
        return True
    return not w.string.infinite and len(w.string) == 0
