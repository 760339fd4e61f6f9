"""Coordinate spaces F_q^n and linear maps given by matrices."""
from __future__ import annotations

from dataclasses import dataclass

from finlim import gf
from finlim.errors import DiagramError


@dataclass(frozen=True, order=True)
class Field:
    q: int

    def __post_init__(self):
        if self.q not in gf.SUPPORTED_PRIMES:
            raise DiagramError(
                f"unsupported field size {self.q}; expected one of {gf.SUPPORTED_PRIMES}"
            )

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self):
        return f"F{self.q}"


@dataclass(frozen=True, order=True)
class VecObj:
    field: Field
    dim: int

    def __post_init__(self):
        if self.dim < 0:
            raise DiagramError(f"dimension must be >= 0, got {self.dim}")

    @property
    def q(self) -> int:
        return self.field.q

    def vectors(self):
        return gf.all_vectors(self.dim, self.q)

    def zero(self) -> tuple:
        return (0,) * self.dim

    def basis(self) -> list[tuple]:
        return list(gf.identity(self.dim))

    def __repr__(self):
        return f"{self.field!r}^{self.dim}"


@dataclass(frozen=True)
class LinMap:
    """A linear map dom -> cod acting on column vectors, v ↦ M·v.

    ``matrix`` has cod.dim rows of dom.dim entries.
    """

    dom: VecObj
    cod: VecObj
    matrix: tuple

    def __post_init__(self):
        if self.dom.field != self.cod.field:
            raise DiagramError("domain and codomain live over different fields")
        m = gf.reduce(self.matrix, self.dom.q)
        object.__setattr__(self, "matrix", m)
        if len(m) != self.cod.dim or any(len(row) != self.dom.dim for row in m):
            raise DiagramError(
                f"matrix shape does not match {self.dom.dim} -> {self.cod.dim}"
            )

    @property
    def q(self) -> int:
        return self.dom.q

    @classmethod
    def identity(cls, obj: VecObj) -> LinMap:
        return cls(obj, obj, gf.identity(obj.dim))

    @classmethod
    def zero(cls, dom: VecObj, cod: VecObj) -> LinMap:
        return cls(dom, cod, gf.zeros(cod.dim, dom.dim))

    @classmethod
    def from_columns(cls, dom: VecObj, cod: VecObj, columns) -> LinMap:
        return cls(dom, cod, gf.transpose(tuple(columns), cod.dim))

    def __call__(self, v) -> tuple:
        return gf.matvec(self.matrix, v, self.q)

    def __matmul__(self, other: LinMap) -> LinMap:
        """``g @ f`` is the composite g∘f."""
        if other.cod != self.dom:
            raise DiagramError(f"cannot compose {self} after {other}")
        return LinMap(
            other.dom,
            self.cod,
            gf.matmul(self.matrix, other.matrix, self.q, cols=other.dom.dim),
        )

    def __add__(self, other: LinMap) -> LinMap:
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise DiagramError("cannot add maps with different endpoints")
        return LinMap(
            self.dom,
            self.cod,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)),
        )

    def scaled(self, k: int) -> LinMap:
        return LinMap(self.dom, self.cod, gf.scale(self.matrix, k, self.q))

    def columns(self) -> list[tuple]:
        return list(gf.transpose(self.matrix, self.dom.dim))

    def rank(self) -> int:
        return gf.rank(self.matrix, self.q) if self.matrix else 0

    def is_iso(self) -> bool:
        return self.dom.dim == self.cod.dim and self.rank() == self.dom.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.cod.dim

    def inverse(self) -> LinMap:
        m = gf.inverse(self.matrix, self.q) if self.dom.dim == self.cod.dim else None
        if m is None:
            raise DiagramError(f"{self} is not invertible")
        return LinMap(self.cod, self.dom, m)

    def __repr__(self):
        return f"LinMap({self.dom!r}->{self.cod!r}, {[list(r) for r in self.matrix]})"


def all_linmaps(dom: VecObj, cod: VecObj):
    for m in gf.all_matrices(cod.dim, dom.dim, dom.q):
        yield LinMap(dom, cod, m)


def hom_count(dom: VecObj, cod: VecObj) -> int:
    return dom.q ** (dom.dim * cod.dim)
