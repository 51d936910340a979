"""Cellular homology of the origami surface and everything built on it:
intersection form, induced action matrices, block-form and characteristic
polynomial tests, symplectic-homomorphism evaluation and membership checks.

The CW structure has one vertex per singularity orbit, edges h_s (bottom
side of square s) and v_s (left side), and one face per square.  All
arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from . import linalg
from .freegroup import (
    F2Endo,
    Word,
    default_names,
    exponent_sums,
    gen,
    identity as word_identity,
    parse_word,
    simultaneous_conjugacy,
)
from .hss import find_hss
from .origami import Origami, act_word, genus, vertex_orbits, vertex_permutation
from .subgroup import CosetAction, aut_stabilizes, contains, schreier_system

__all__ = [
    "ConventionViolation",
    "NotInSubgroup",
    "NotLagrangian",
    "NotPrimitive",
    "DoesNotStabilize",
    "UnknownGenerator",
    "CellComplex",
    "H1Model",
    "AlphaSpec",
    "WordFixture",
    "cell_complex",
    "edge_cycle",
    "h1_model",
    "class_of",
    "f2_independent",
    "intersection_form",
    "symplectic_completion",
    "induced_matrix",
    "block_form_check",
    "charpoly",
    "charpoly_divides",
    "symplectic_names",
    "parse_symplectic",
    "alpha_eval",
    "modg_alpha_conjugator",
    "modg_alpha_check",
    "action_matrix_from_images",
    "twist_membership_certificate",
    "parse_word_fixture",
]


class ConventionViolation(AssertionError):
    pass


class NotInSubgroup(ValueError):
    pass


class NotLagrangian(ValueError):
    pass


class NotPrimitive(ValueError):
    pass


class DoesNotStabilize(ValueError):
    pass


class UnknownGenerator(ValueError):
    pass


# ---------------------------------------------------------------------------
# CW structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CellComplex:
    """Edges are indexed h_s -> s-1 and v_s -> d+s-1 for s in 1..d."""

    o: Origami
    vertices: tuple            # vertex orbits, each a tuple of squares
    vertex_of: tuple           # square -> vertex index (1-based squares)
    d1: linalg.Matrix          # V x 2d
    d2: linalg.Matrix          # 2d x d

    @property
    def edge_count(self) -> int:
        return 2 * self.o.d

    def h(self, s: int) -> int:
        return s - 1

    def v(self, s: int) -> int:
        return self.o.d + s - 1

    def edge_ends(self, e: int) -> Tuple[int, int]:
        """(tail vertex, head vertex) of edge index e."""
        d = self.o.d
        if e < d:
            s = e + 1
            return self.vertex_of[s], self.vertex_of[self.o.p1(s)]
        s = e - d + 1
        return self.vertex_of[s], self.vertex_of[self.o.p2(s)]


def cell_complex(o: Origami) -> CellComplex:
    d = o.d
    orbits = vertex_orbits(o)
    vertex_of = [None] * (d + 1)
    for vi, orbit in enumerate(orbits):
        for s in orbit:
            vertex_of[s] = vi
    d2 = linalg.zeros(2 * d, d)
    for s in range(1, d + 1):
        col = s - 1
        d2[s - 1][col] += 1                      # h_s
        d2[d + o.p1(s) - 1][col] += 1            # v_{p1(s)}
        d2[o.p2(s) - 1][col] -= 1                # h_{p2(s)}
        d2[d + s - 1][col] -= 1                  # v_s
    d1 = linalg.zeros(len(orbits), 2 * d)
    for s in range(1, d + 1):
        d1[vertex_of[o.p1(s)]][s - 1] += 1
        d1[vertex_of[s]][s - 1] -= 1
        d1[vertex_of[o.p2(s)]][d + s - 1] += 1
        d1[vertex_of[s]][d + s - 1] -= 1
    prod = linalg.mat_mul(d1, d2)
    if any(any(row) for row in prod):
        raise ConventionViolation("d1 * d2 != 0")
    chi = len(orbits) - 2 * d + d
    if chi != 2 - 2 * genus(o):
        raise ConventionViolation("Euler characteristic mismatch")
    return CellComplex(o, tuple(tuple(x) for x in orbits), tuple(vertex_of), d1, d2)


def edge_cycle(o: Origami, start: int, w: Word) -> List[int]:
    """The 1-chain traced by the word from the start square; a cycle iff
    the word's monodromy fixes the start."""
    d = o.d
    vec = [0] * (2 * d)
    s = start
    for g, e in w.letters:
        if g == 1:
            if e == 1:
                vec[s - 1] += 1
                s = o.p1(s)
            else:
                s = o.p1.inverse_of(s)
                vec[s - 1] -= 1
        else:
            if e == 1:
                vec[d + s - 1] += 1
                s = o.p2(s)
            else:
                s = o.p2.inverse_of(s)
                vec[d + s - 1] -= 1
    return vec


# ---------------------------------------------------------------------------
# H1 and the intersection form
# ---------------------------------------------------------------------------


@dataclass
class H1Model:
    o: Origami
    complex: CellComplex
    g: int
    kernel: List[List[int]]          # columns spanning ker d1, as 2d-vectors
    proj: linalg.Matrix              # (k - rho) x k: kernel coords -> H1 coords
    basis: List[List[int]]           # 2g edge vectors representing the basis
    gram: linalg.Matrix              # intersection form on the basis

    @property
    def rank(self) -> int:
        return len(self.basis)

    def kernel_coords(self, z: Sequence[int]) -> List[int]:
        K = [[col[i] for col in self.kernel] for i in range(len(z))]
        c = linalg.solve_int(K, list(z))
        assert c is not None, "chain is not a cycle"
        return c

    def coords(self, z: Sequence[int]) -> List[int]:
        """H1 coordinates of a cycle given as an edge vector."""
        return linalg.mat_vec(self.proj, self.kernel_coords(z))

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        """Intersection number of two classes given in H1 coordinates."""
        return sum(
            u[i] * self.gram[i][j] * v[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )


def h1_model(o: Origami) -> H1Model:
    cx = cell_complex(o)
    g = genus(o)
    kernel = linalg.kernel_basis(cx.d1)
    k = len(kernel)
    K = [[col[i] for col in kernel] for i in range(2 * o.d)]
    # boundary image in kernel coordinates
    B = linalg.zeros(k, o.d)
    for j in range(o.d):
        col = [cx.d2[i][j] for i in range(2 * o.d)]
        c = linalg.solve_int(K, col)
        assert c is not None
        for i in range(k):
            B[i][j] = c[i]
    snf = linalg.smith_normal_form(B)
    rho = snf.rank
    assert all(f in (1, -1) for f in snf.invariant_factors()), "torsion in H1"
    assert k - rho == 2 * g, "rank of H1 differs from 2g"
    proj = [snf.U[i] for i in range(rho, k)]
    basis = []
    for j in range(rho, k):
        c = [snf.Uinv[i][j] for i in range(k)]
        basis.append(linalg.mat_vec(K, c))
    model = H1Model(o, cx, g, kernel, proj, basis, [])
    model.gram = intersection_form(o, model)
    assert all(
        model.gram[i][j] == -model.gram[j][i]
        for i in range(2 * g)
        for j in range(2 * g)
    ), "intersection form not skew"
    assert abs(linalg.det_int(model.gram)) == 1, "intersection form not unimodular"
    return model


def class_of(o: Origami, model: H1Model, w: Word, base: int = 1) -> List[int]:
    if act_word(o, base, w) != base:
        raise NotInSubgroup("word does not fix the base square")
    return model.coords(edge_cycle(o, base, w))


def f2_independent(classes: Sequence[Sequence[int]]) -> bool:
    return linalg.gf2_rank([list(c) for c in classes]) == len(classes)


# -- ribbon graph rotation system -------------------------------------------


def _rotation_circles(cx: CellComplex) -> List[List[Tuple[int, int]]]:
    """Cyclic dart order around each vertex.  A dart is (edge index, end)
    with end 0 = tail, 1 = head.  Around a singularity the corner walk
    visits, for each square s of the orbit in commutator order:
    v_s out, h_{p1^-1(s)} in, v_{p1 p2^-1 p1^-1(s)} in, h_{c(s)} out."""
    o = cx.o
    circles = []
    for orbit in cx.vertices:
        circle = []
        for s in orbit:
            circle.append((cx.v(s), 0))
            circle.append((cx.h(o.p1.inverse_of(s)), 1))
            circle.append((cx.v(o.p1(o.p2.inverse_of(o.p1.inverse_of(s)))), 1))
            circle.append((cx.h(vertex_permutation(o, s)), 0))
        circles.append(circle)
    return circles


def intersection_form(o: Origami, model: H1Model) -> linalg.Matrix:
    """Gram matrix of the algebraic intersection pairing on the basis,
    computed on the one-vertex ribbon graph obtained by contracting a
    spanning tree of the 1-skeleton."""
    cx = model.complex
    circles = _rotation_circles(cx)
    nv = len(cx.vertices)
    # BFS spanning tree over vertices
    tree: List[int] = []
    seen = [False] * nv
    seen[0] = True
    frontier = [0]
    adj: Dict[int, List[Tuple[int, int]]] = {v: [] for v in range(nv)}
    for e in range(cx.edge_count):
        t, h = cx.edge_ends(e)
        adj[t].append((h, e))
        adj[h].append((t, e))
    while frontier:
        v = frontier.pop(0)
        for w, e in adj[v]:
            if not seen[w]:
                seen[w] = True
                tree.append(e)
                frontier.append(w)
    assert all(seen), "1-skeleton not connected"
    # contract tree edges: splice the two circles at the edge's darts
    rep = list(range(nv))

    def find(v):
        while rep[v] != v:
            rep[v] = rep[rep[v]]
            v = rep[v]
        return v

    circ = {v: circles[v] for v in range(nv)}
    for e in tree:
        t, h = cx.edge_ends(e)
        rt, rh = find(t), find(h)
        assert rt != rh
        ca, cb = circ.pop(rt), circ.pop(rh)
        if (e, 0) not in ca:
            ca, cb = cb, ca
            rt, rh = rh, rt
        i = ca.index((e, 0))
        j = cb.index((e, 1))
        merged = ca[:i] + cb[j + 1:] + cb[:j] + ca[i + 1:]
        rep[rh] = rt
        circ[rt] = merged
    (final,) = circ.values()
    pos = {dart: i for i, dart in enumerate(final)}
    n = len(final)
    tree_set = set(tree)
    chords = {
        e: (pos[(e, 0)], pos[(e, 1)])
        for e in range(cx.edge_count)
        if e not in tree_set
    }

    def chi(e: int, f: int) -> int:
        et, eh = chords[e]
        ft, fh = chords[f]

        def in_arc(x, lo, hi):  # x strictly inside the cyclic arc lo -> hi
            if lo < hi:
                return lo < x < hi
            return x > lo or x < hi

        a = in_arc(ft, et, eh)
        b = in_arc(fh, et, eh)
        if a == b:
            return 0
        # sign calibrated so that the printed genus-2 symplectic word
        # system pairs as i(a_i, b_j) = delta_ij
        return -1 if a else 1

    def pairing(z: Sequence[int], w: Sequence[int]) -> int:
        total = 0
        for e in chords:
            if not z[e]:
                continue
            for f in chords:
                if e != f and w[f]:
                    total += z[e] * w[f] * chi(e, f)
        return total

    r = len(model.basis)
    return [
        [pairing(model.basis[i], model.basis[j]) for j in range(r)]
        for i in range(r)
    ]


# ---------------------------------------------------------------------------
# symplectic completion
# ---------------------------------------------------------------------------


def standard_j(g: int) -> linalg.Matrix:
    J = linalg.zeros(2 * g, 2 * g)
    for i in range(g):
        J[i][g + i] = 1
        J[g + i][i] = -1
    return J


def symplectic_completion(
    model: H1Model, lagrangian: Sequence[Sequence[int]]
) -> linalg.Matrix:
    """Extend g pairwise-non-intersecting primitive classes (H1 coords) to
    a basis (A_1..A_g, B_1..B_g) in which the form is the standard J.
    Returns the 2g x 2g column matrix of the new basis."""
    g = model.g
    A = [list(c) for c in lagrangian]
    assert len(A) == g, "need exactly g classes"
    for i in range(g):
        for j in range(g):
            if model.pair(A[i], A[j]) != 0:
                raise NotLagrangian(f"classes {i} and {j} intersect")
    Amat = [[A[j][i] for j in range(g)] for i in range(2 * g)]
    snf = linalg.smith_normal_form(Amat)
    if snf.rank != g or any(f not in (1, -1) for f in snf.invariant_factors()):
        raise NotPrimitive("classes do not span a direct summand")
    # B_j solves <A_i, B_j> = delta_ij; row i is A_i^T * Gram
    C = [linalg.mat_vec(linalg.transpose(model.gram), a) for a in A]
    B = []
    for j in range(g):
        rhs = [1 if i == j else 0 for i in range(g)]
        b = linalg.solve_int(C, rhs)
        assert b is not None, "no integral dual class (form not unimodular?)"
        B.append(b)
    # clear <B_i, B_j> using the A's
    for i in range(g):
        for j in range(i):
            c = model.pair(B[i], B[j])
            if c:
                B[i] = [x - c * y for x, y in zip(B[i], A[j])]
    S = [[(A + B)[j][i] for j in range(2 * g)] for i in range(2 * g)]
    gram_s = linalg.mat_mul(
        linalg.mat_mul(linalg.transpose(S), model.gram), S
    )
    assert gram_s == standard_j(g), "completion failed to reach standard form"
    return S


# ---------------------------------------------------------------------------
# induced action matrices
# ---------------------------------------------------------------------------


def induced_matrix(
    o: Origami,
    phi: F2Endo,
    model: Optional[H1Model] = None,
    basis: Optional[linalg.Matrix] = None,
) -> linalg.Matrix:
    """The 2g x 2g matrix of the automorphism on H1, in the given basis
    (columns, H1 coordinates; identity basis when omitted)."""
    cs = CosetAction(o)
    if aut_stabilizes(cs, phi) != cs.base:
        raise DoesNotStabilize("phi(H) is not the stabilizer of the base")
    if model is None:
        model = h1_model(o)
    n = 2 * model.g
    ss = schreier_system(cs)
    zs = [class_of(o, model, h) for h in ss.generators]
    ws = [class_of(o, model, phi(h)) for h in ss.generators]
    # pick n independent columns over Q
    sel: List[int] = []
    rowspace: List[List[Fraction]] = []
    for idx, z in enumerate(zs):
        vec = [Fraction(x) for x in z]
        red = vec[:]
        for piv, r in rowspace:
            if red[piv]:
                f = red[piv] / r[piv]
                red = [x - f * y for x, y in zip(red, r)]
        p = next((i for i, x in enumerate(red) if x), None)
        if p is not None:
            rowspace.append((p, red))
            sel.append(idx)
        if len(sel) == n:
            break
    assert len(sel) == n, "generator classes do not span H1 over Q"
    Zsel = [[Fraction(zs[j][i]) for j in sel] for i in range(n)]
    M0: linalg.Matrix = []
    ZT = [list(r) for r in zip(*Zsel)]
    for r in range(n):
        rhs = [Fraction(ws[j][r]) for j in sel]
        row = linalg.solve_rational(ZT, rhs)
        assert row is not None
        M0.append(row)
    for z, w in zip(zs, ws):
        got = [sum(M0[i][j] * z[j] for j in range(n)) for i in range(n)]
        assert got == [Fraction(x) for x in w], "action is not linear on H1"
    if basis is not None:
        Sf = [[Fraction(x) for x in row] for row in basis]
        n_ = len(Sf)
        Sinv_cols = []
        for j in range(n_):
            e = [Fraction(1) if i == j else Fraction(0) for i in range(n_)]
            col = linalg.solve_rational(Sf, e)
            assert col is not None
            Sinv_cols.append(col)
        Sinv = [[Sinv_cols[j][i] for j in range(n_)] for i in range(n_)]
        M0 = _frac_mat_mul(_frac_mat_mul(Sinv, M0), Sf)
    M = []
    for row in M0:
        out = []
        for x in row:
            assert Fraction(x).denominator == 1, "induced matrix not integral"
            out.append(int(x))
        M.append(out)
    assert abs(linalg.det_int(M)) == 1
    return M


def _frac_mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [
        [sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
        for i in range(n)
    ]


def block_form_check(M: linalg.Matrix) -> Optional[linalg.Matrix]:
    """If M = [[I, A], [0, I]] in g x g blocks, return A, else None."""
    n = len(M)
    if n % 2:
        return None
    g = n // 2
    for i in range(g):
        for j in range(g):
            if M[i][j] != (1 if i == j else 0):
                return None
            if M[g + i][g + j] != (1 if i == j else 0):
                return None
            if M[g + i][j] != 0:
                return None
    return [[M[i][g + j] for j in range(g)] for i in range(g)]


def charpoly(M: linalg.Matrix) -> sympy.Poly:
    x = sympy.Symbol("x")
    return sympy.Matrix(M).charpoly(x)


def charpoly_divides(A2, M: linalg.Matrix) -> bool:
    """Exact test: does char(A2) divide char(M)?"""
    a, b, c, d = A2
    pa = charpoly([[a, b], [c, d]])
    pm = charpoly(M)
    _, rem = sympy.div(pm.as_expr(), pa.as_expr(), sympy.Symbol("x"))
    return sympy.simplify(rem) == 0


# ---------------------------------------------------------------------------
# symplectic homomorphisms alpha and Mod_g(alpha) membership
# ---------------------------------------------------------------------------


def symplectic_names(g: int) -> List[str]:
    return [f"a{i}" for i in range(1, g + 1)] + [f"b{i}" for i in range(1, g + 1)]


def parse_symplectic(text: str, g: int) -> Word:
    return parse_word(text, rank=2 * g, names=symplectic_names(g))


@dataclass(frozen=True)
class AlphaSpec:
    """A homomorphism from the genus-g surface group (in a symplectic
    generating system a_1..a_g, b_1..b_g) onto the free group F_g, given
    by the image of each of the 2g generators."""

    g: int
    images: tuple  # 2g Words of rank g

    def __post_init__(self):
        assert len(self.images) == 2 * self.g
        for w in self.images:
            assert w.rank == self.g

    @staticmethod
    def standard(g: int) -> "AlphaSpec":
        ims = [word_identity(g)] * g + [gen(g, i) for i in range(1, g + 1)]
        return AlphaSpec(g, tuple(ims))

    @staticmethod
    def from_pattern(g: int, pattern: Sequence[int]) -> "AlphaSpec":
        """pattern[i] = 0 for the trivial image, k for the generator γ_k."""
        ims = [word_identity(g) if k == 0 else gen(g, k) for k in pattern]
        return AlphaSpec(g, tuple(ims))


def alpha_eval(alpha: AlphaSpec, w: Word) -> Word:
    """Apply alpha to a word over the symplectic alphabet."""
    if w.rank != 2 * alpha.g:
        raise UnknownGenerator(
            f"word rank {w.rank} does not match the 2g = {2 * alpha.g} alphabet"
        )
    out = word_identity(alpha.g)
    for i, e in w.letters:
        img = alpha.images[i - 1]
        out = out * (img if e == 1 else img.inv())
    return out


def modg_alpha_conjugator(
    alpha: AlphaSpec, images: Sequence[Word]
) -> Optional[Word]:
    """A single c in F_g with alpha(image(x)) = c alpha(x) c^-1 for all 2g
    symplectic generators, or None."""
    assert len(images) == 2 * alpha.g
    pairs = []
    for i, img in enumerate(images):
        pairs.append((alpha.images[i], alpha_eval(alpha, img)))
    return simultaneous_conjugacy(pairs)


def modg_alpha_check(alpha: AlphaSpec, images: Sequence[Word]) -> bool:
    return modg_alpha_conjugator(alpha, images) is not None


def action_matrix_from_images(g: int, images: Sequence[Word]) -> linalg.Matrix:
    """Exponent-sum matrix of a surface-group endomorphism given over the
    symplectic alphabet: column j holds the sums of image(gen j)."""
    assert len(images) == 2 * g
    M = linalg.zeros(2 * g, 2 * g)
    for j, w in enumerate(images):
        sums = exponent_sums(w)
        for i in range(2 * g):
            M[i][j] = sums[i]
    return M


# ---------------------------------------------------------------------------
# the twist certificate
# ---------------------------------------------------------------------------


def twist_membership_certificate(o: Origami) -> dict:
    """Machine-checkable evidence that the horizontal multitwist along the
    cylinder directions is affine with derivative (1, m; 0, 1) and acts on
    homology by a unipotent block matrix fixing the cut-system classes."""
    from .freegroup import horizontal_twist_lift
    from .origami import horizontal_multiplier

    m, mat = horizontal_multiplier(o)
    phi = horizontal_twist_lift(m)
    cs = CosetAction(o)
    witness = aut_stabilizes(cs, phi)
    assert witness is not None, "twist lift does not stabilize the subgroup"
    model = h1_model(o)
    curves = find_hss(o)
    classes = [model.coords(edge_cycle(o, c.start, c.word)) for c in curves]
    assert f2_independent(classes), "cut system classes dependent mod 2"
    S = symplectic_completion(model, classes)
    M = induced_matrix(o, phi, model, S)
    A = block_form_check(M)
    assert A is not None, "twist action is not in block form"
    # der(f) = (1, m; 0, 1) fixes the projection (sx, sy) of each curve
    # word iff the y-exponent sum vanishes
    proj_fixed = all(exponent_sums(c.word)[1] == 0 for c in curves)
    assert proj_fixed, "cut-system word has a vertical drift"
    return {
        "multiplier": m,
        "matrix": list(mat),
        "witness_square": witness,
        "curves": [
            {"start": c.start, "word": str(c.word)} for c in curves
        ],
        "block": A,
        "action_matrix": M,
        "charpoly_divides": charpoly_divides(mat, M),
        "projection_fixed": proj_fixed,
    }


# ---------------------------------------------------------------------------
# word fixture files
# ---------------------------------------------------------------------------


@dataclass
class WordFixture:
    """Parsed `gen name = <rank-2 word>` and `image <endo> <name> = <word
    over the gen alphabet>` lines."""

    names: List[str]
    gens: Dict[str, Word]
    images: Dict[str, Dict[str, Word]]

    @property
    def g(self) -> int:
        assert len(self.names) % 2 == 0
        return len(self.names) // 2

    def image_list(self, endo: str) -> List[Word]:
        return [self.images[endo][n] for n in self.names]


def parse_word_fixture(text: str) -> WordFixture:
    """Lines: `alphabet a1 a2 b1 b2` (optional when `gen` lines declare
    the names), `gen a1 = x^-2`, `image f a1 = a1`, `#` comments."""
    names: List[str] = []
    gens: Dict[str, Word] = {}
    raw_images: List[Tuple[str, str, str]] = []
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("alphabet"):
            assert not names, f"line {lineno}: alphabet declared twice"
            names = line.split()[1:]
            continue
        parts = line.split("=", 1)
        assert len(parts) == 2, f"line {lineno}: expected '='"
        head, body = parts[0].split(), parts[1].strip()
        if head[0] == "gen" and len(head) == 2:
            name = head[1]
            assert name not in gens, f"line {lineno}: duplicate gen {name}"
            if name not in names:
                names.append(name)
            gens[name] = parse_word(body, rank=2, names=default_names(2))
        elif head[0] == "image" and len(head) == 3:
            raw_images.append((head[1], head[2], body))
        else:
            raise AssertionError(f"line {lineno}: unknown directive")
    images: Dict[str, Dict[str, Word]] = {}
    for endo, name, body in raw_images:
        assert name in names, f"image of unknown generator {name}"
        images.setdefault(endo, {})[name] = parse_word(
            body, rank=len(names), names=names
        )
    return WordFixture(names, gens, images)
