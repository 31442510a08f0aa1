"""Nerves of posets as simplicial schemes, f-vectors and Euler characteristics."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import FaceLimitExceeded
from .poset import FinitePoset

DEFAULT_FACE_LIMIT = 10**6


@dataclass(frozen=True)
class SimplicialScheme:
    """Vertex list plus a family of nonempty faces (sorted vertex tuples)."""

    vertices: tuple[int, ...]
    faces: frozenset[tuple[int, ...]]

    def is_downward_closed(self) -> bool:
        for face in self.faces:
            if len(face) > 1 and any(sub not in self.faces for sub in combinations(face, len(face) - 1)):
                return False
        return True

    @property
    def dimension(self) -> int:
        return max((len(face) for face in self.faces), default=0) - 1


def nerve(P: FinitePoset, face_limit: int = DEFAULT_FACE_LIMIT) -> SimplicialScheme:
    """All chains of ``P`` as faces, found by depth-first chain extension."""
    strict_up = [tuple(int(y) for y in row.nonzero()[0]) for row in P.strict]
    faces: list[tuple[int, ...]] = []
    stack = [(x,) for x in range(P.size)]
    while stack:
        face = stack.pop()
        faces.append(tuple(sorted(face)))
        if len(faces) > face_limit:
            raise FaceLimitExceeded(f"nerve has more than {face_limit} faces")
        stack.extend(face + (y,) for y in strict_up[face[-1]])
    return SimplicialScheme(tuple(range(P.size)), frozenset(faces))


def f_vector(K: SimplicialScheme) -> list[int]:
    """``f[i]`` is the number of faces with ``i + 1`` vertices."""
    counts = [0] * (K.dimension + 1)
    for face in K.faces:
        counts[len(face) - 1] += 1
    return counts


def euler_characteristic(K: SimplicialScheme) -> int:
    """Alternating sum of the f-vector; the empty scheme has 0."""
    return sum((-1) ** i * f for i, f in enumerate(f_vector(K)))


def chain_f_vector(P: FinitePoset) -> list[int]:
    """f-vector of the nerve by counting chains, without listing them."""
    ending = [[1] for _ in range(P.size)]  # ending[y][k]: chains of k+1 elements topped by y
    for y in P.linear_extension:
        for x in P.strict[:, y].nonzero()[0]:
            row = ending[x]
            acc = ending[y]
            for k, c in enumerate(row):
                if k + 1 < len(acc):
                    acc[k + 1] += c
                else:
                    acc.append(c)
    total: list[int] = []
    for row in ending:
        for k, c in enumerate(row):
            if k < len(total):
                total[k] += c
            else:
                total.append(c)
    return total
