"""Finite sets ``{0, ..., n-1}`` and the maps between them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from finlim.errors import DiagramError


@dataclass(frozen=True, order=True)
class SetObj:
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise DiagramError(f"set size must be >= 0, got {self.size}")

    def elements(self) -> range:
        return range(self.size)

    def __repr__(self):
        return f"SetObj({self.size})"


@dataclass(frozen=True)
class SetMap:
    """A function dom -> cod stored as its table of images."""

    dom: SetObj
    cod: SetObj
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if len(self.table) != self.dom.size:
            raise DiagramError(
                f"table has {len(self.table)} entries, domain has {self.dom.size}"
            )
        for v in self.table:
            if not 0 <= v < self.cod.size:
                raise DiagramError(f"image {v} outside codomain of size {self.cod.size}")

    @classmethod
    def identity(cls, obj: SetObj) -> SetMap:
        return cls(obj, obj, tuple(range(obj.size)))

    @classmethod
    def constant(cls, dom: SetObj, cod: SetObj, value: int) -> SetMap:
        return cls(dom, cod, (value,) * dom.size)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __matmul__(self, other: SetMap) -> SetMap:
        """``g @ f`` is the composite g∘f (apply f first)."""
        if other.cod != self.dom:
            raise DiagramError(f"cannot compose {self} after {other}")
        return SetMap(other.dom, self.cod, tuple(self.table[v] for v in other.table))

    def image(self) -> set:
        return set(self.table)

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_iso(self) -> bool:
        return self.dom.size == self.cod.size and self.is_injective()

    def is_constant(self) -> bool:
        # a map out of the empty set has empty image and is not constant
        return len(set(self.table)) == 1

    def inverse(self) -> SetMap:
        if not self.is_iso():
            raise DiagramError(f"{self} is not a bijection")
        table = [0] * self.dom.size
        for i, v in enumerate(self.table):
            table[v] = i
        return SetMap(self.cod, self.dom, tuple(table))

    def __repr__(self):
        return f"SetMap({self.dom.size}->{self.cod.size}, {list(self.table)})"


def all_maps(dom: SetObj, cod: SetObj):
    """Every map dom -> cod, tables in lexicographic order."""
    for table in itertools.product(range(cod.size), repeat=dom.size):
        yield SetMap(dom, cod, table)


def hom_count(dom: SetObj, cod: SetObj) -> int:
    return cod.size ** dom.size
