"""The finite-index subgroup of F_2 attached to an origami.

F_2 = <x, y> acts on the squares through the monodromy (x by p1, y by p2,
words applied left to right); H is the stabilizer of the base square.
This module provides membership, a Schreier generating system with
Reidemeister-Schreier rewriting, puncture relations, and the
automorphism-stabilization test behind Veech-group membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .freegroup import (
    F2Endo,
    IntMatrix2,
    NotUnimodular,
    Word,
    gen,
    lift_matrix,
    mat_det,
)
from .origami import Origami, Permutation, act_word, vertex_orbits

__all__ = [
    "NotInSubgroup",
    "NotAutomorphism",
    "CosetAction",
    "SchreierSystem",
    "PunctureData",
    "contains",
    "schreier_system",
    "rewrite",
    "substitute",
    "puncture_relations",
    "aut_stabilizes",
    "veech_contains",
    "COMMUTATOR",
]


class NotInSubgroup(ValueError):
    pass


class NotAutomorphism(ValueError):
    pass


# x^-1 y^-1 x y, the loop around a vertex
COMMUTATOR = Word(2, [(1, -1), (2, -1), (1, 1), (2, 1)])


@dataclass(frozen=True)
class CosetAction:
    """The monodromy action of F_2 on squares, with a base square whose
    stabilizer is the subgroup H (index d)."""

    origami: Origami
    base: int = 1

    def __post_init__(self):
        assert 1 <= self.base <= self.origami.d, "base square out of range"

    def act(self, s: int, w: Word) -> int:
        return act_word(self.origami, s, w)


def contains(cs: CosetAction, w: Word) -> bool:
    """True iff w lies in H, i.e. its monodromy fixes the base square."""
    return cs.act(cs.base, w) == cs.base


@dataclass(frozen=True)
class SchreierSystem:
    """A Schreier transversal and free generating set for H.

    reps[s] is the coset representative word carrying the base to square s;
    generators are the d+1 free generators of H in discovery order;
    edge_gen maps each forward edge (square, generator letter) to its
    generator index, or None for spanning-tree edges.
    """

    action: CosetAction
    reps: dict[int, Word]
    generators: tuple[Word, ...]
    edge_gen: dict[tuple[int, int], Optional[int]]

    @property
    def rank(self) -> int:
        return len(self.generators)

    def gen_index(self, w: Word) -> int:
        """Index (1-based) of a word among the generators."""
        for i, h in enumerate(self.generators, start=1):
            if h == w:
                return i
        raise NotInSubgroup(f"{w} is not a Schreier generator")


def schreier_system(cs: CosetAction) -> SchreierSystem:
    """Breadth-first transversal from the base, x-edges before y-edges,
    squares processed in discovery order (FIFO)."""
    o = cs.origami
    reps: dict[int, Word] = {cs.base: Word(2)}
    tree_edges: set[tuple[int, int]] = set()
    queue = [cs.base]
    head = 0
    order = [cs.base]
    while head < len(queue):
        s = queue[head]
        head += 1
        for g, p in ((1, o.p1), (2, o.p2)):
            t = p(s)
            if t not in reps:
                reps[t] = reps[s] * gen(2, g)
                tree_edges.add((s, g))
                queue.append(t)
                order.append(t)
    assert len(reps) == o.d, "action not transitive"
    generators: list[Word] = []
    edge_gen: dict[tuple[int, int], Optional[int]] = {}
    for s in order:
        for g, p in ((1, o.p1), (2, o.p2)):
            t = p(s)
            if (s, g) in tree_edges:
                edge_gen[(s, g)] = None
            else:
                h = reps[s] * gen(2, g) * reps[t].inv()
                assert contains(cs, h), "Schreier generator escaped H"
                generators.append(h)
                edge_gen[(s, g)] = len(generators)
    assert len(generators) == o.d + 1, "Nielsen-Schreier count violated"
    return SchreierSystem(cs, reps, tuple(generators), edge_gen)


def rewrite(ss: SchreierSystem, w: Word) -> Word:
    """Express w in H as a word over the Schreier generators h_1..h_{d+1}
    (returned as a Word of rank d+1)."""
    cs = ss.action
    if not contains(cs, w):
        raise NotInSubgroup(f"{w} does not fix the base square")
    o = cs.origami
    out = []
    s = cs.base
    for g, e in w.letters:
        if e == 1:
            idx = ss.edge_gen[(s, g)]
            if idx is not None:
                out.append((idx, 1))
            s = o.p1(s) if g == 1 else o.p2(s)
        else:
            s = o.p1.inverse_of(s) if g == 1 else o.p2.inverse_of(s)
            idx = ss.edge_gen[(s, g)]
            if idx is not None:
                out.append((idx, -1))
    assert s == cs.base
    result = Word(ss.rank, out)
    assert substitute(ss, result) == w, "rewrite roundtrip failed"
    return result


def substitute(ss: SchreierSystem, w: Word) -> Word:
    """Replace each generator letter of a rank-(d+1) word by its F_2 word."""
    assert w.rank == ss.rank, "word rank must equal the generator count"
    out = Word(2)
    for g, e in w.letters:
        h = ss.generators[g - 1]
        out = out * (h if e == 1 else h.inv())
    return out


@dataclass(frozen=True)
class PunctureData:
    """One relation per vertex orbit: conjugates of powers of the
    commutator x^-1 y^-1 x y, exponent = orbit size."""

    conjugators: tuple[Word, ...]
    exponents: tuple[int, ...]
    relations: tuple[Word, ...]


def puncture_relations(cs: CosetAction) -> PunctureData:
    ss = schreier_system(cs)
    conjugators = []
    exponents = []
    relations = []
    for orbit in vertex_orbits(cs.origami):
        s = min(orbit)
        n = len(orbit)
        r = (COMMUTATOR ** n).conj(ss.reps[s])
        assert contains(cs, r), "puncture relation escaped H"
        conjugators.append(ss.reps[s])
        exponents.append(n)
        relations.append(r)
    return PunctureData(tuple(conjugators), tuple(exponents), tuple(relations))


def aut_stabilizes(cs: CosetAction, phi: F2Endo) -> Optional[int]:
    """A square s with phi(H) = Stab(s), or None.

    phi(H) is generated by the phi-images of the Schreier generators, so it
    stabilizes s iff every image's monodromy fixes s.  The images are
    evaluated through the permutations induced by phi(x) and phi(y), which
    keeps each check linear in the generator length.
    """
    if not phi.is_automorphism:
        raise NotAutomorphism("endomorphism is not marked as an automorphism")
    o = cs.origami
    px = Permutation([act_word(o, s, phi.image_x) for s in range(1, o.d + 1)])
    py = Permutation([act_word(o, s, phi.image_y) for s in range(1, o.d + 1)])

    def act(s: int, w: Word) -> int:
        for g, e in w.letters:
            p = px if g == 1 else py
            s = p(s) if e == 1 else p.inverse_of(s)
        return s

    ss = schreier_system(cs)
    for s in range(1, o.d + 1):
        if all(act(s, h) == s for h in ss.generators):
            return s
    return None


def veech_contains(cs: CosetAction, A: IntMatrix2) -> bool:
    """True iff A lies in the origami's Veech group (inside SL_2(Z))."""
    if mat_det(A) != 1:
        raise NotUnimodular(f"det {mat_det(A)} != 1")
    return aut_stabilizes(cs, lift_matrix(A)) is not None
