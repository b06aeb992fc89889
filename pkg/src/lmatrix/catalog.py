from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .matrix_core import Matrix, SkewMatrix


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    b: Matrix
    ordering: str
    seq: tuple[int, ...] = ()
    note: str = ""

    def matrix(self) -> SkewMatrix:
        return SkewMatrix(b=self.b, name=self.name)


CATALOG: dict[str, CatalogEntry] = {
    e.name: e
    for e in (
        CatalogEntry(
            name="rank3-exchange",
            b=((0, 3, -3), (-2, 0, 2), (2, -2, 0)),
            ordering="1>2>3",
            seq=(2, 3, 2, 1, 2),
            note="D=(3,2,2); c-vectors are Lösungen and equal the l-vectors",
        ),
        CatalogEntry(
            name="running",
            b=((0, 1, -3), (-2, 0, -2), (3, 1, 0)),
            ordering="1<2<3",
            seq=(2, 3),
            note="D=(1,2,1); step-by-step lambda recursion",
        ),
        CatalogEntry(
            name="dreaded-torus",
            b=((0, -1, -1, 2), (1, 0, 1, -1), (1, -1, 0, -1), (-2, 1, 1, 0)),
            ordering="1<2<3<4",
            seq=(2, 3, 4, 2, 1, 3),
            note="two oriented chordless cycles; [3,4,1,3,4,3] and [4,1,3,4,1,3] share a C-matrix",
        ),
        CatalogEntry(
            name="pi-kernel",
            b=((0, -2, -2, 3), (2, 0, 4, 2), (2, -4, 0, -1), (-3, -2, 1, 0)),
            ordering="1<2<3<4",
            seq=(4, 3, 1, 4, 2),
            note="(s3 s4)^3 lies in the kernel of every ordering GIM",
        ),
        CatalogEntry(
            name="spanning-tree",
            b=(
                (0, -1, 1, -1, 0),
                (1, 0, 0, -1, 1),
                (-1, 0, 0, 1, 0),
                (1, 1, -1, 0, -1),
                (0, -1, 0, 1, 0),
            ),
            ordering="4<3<1<5<2",
            note="oriented chordless cycles (1,3,4) and (2,4,5)",
        ),
        CatalogEntry(
            name="not-a-loesung",
            b=((0, -1, -1, -1), (1, 0, 1, -1), (1, -1, 0, 1), (1, 1, -1, 0)),
            ordering="1<2<3<4",
            seq=(1, 2, 3, 4, 2),
            note="c-vector (5,2,2,2) is not a Lösung for any ordering GIM",
        ),
        CatalogEntry(
            name="a4",
            b=((0, 1, 0, 0), (-1, 0, -1, 0), (0, 1, 0, 1), (0, 0, -1, 0)),
            ordering="4<2<3<1",
            seq=(2, 4, 2),
            note="lambda_3 = (0,0,1,1) arises from a four-term expression",
        ),
    )
}


def get_example(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise InputError(f"unknown example {name!r}; choose from {', '.join(sorted(CATALOG))}") from None
