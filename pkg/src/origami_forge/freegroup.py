"""Reduced words in free groups, F_2 endomorphisms and the exponent-sum
homomorphism to GL_2(Z).

Words are immutable sequences of (generator, +-1) letters, kept freely
reduced at all times.  Generators are numbered 1..rank; in rank 2 the
generators are written x and y.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple


class RankMismatch(ValueError):
    pass


class IndexOutOfRange(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


class AllTrivial(ValueError):
    pass


class Word:
    """A freely reduced word.  Value-immutable."""

    __slots__ = ("rank", "letters")

    def __init__(self, rank: int, letters: Iterable[Tuple[int, int]] = ()):
        assert rank >= 1
        self.rank = rank
        self.letters = _reduce(rank, letters)

    def __mul__(self, other: "Word") -> "Word":
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")
        return Word(self.rank, self.letters + other.letters)

    def inv(self) -> "Word":
        return Word(self.rank, tuple((g, -e) for g, e in reversed(self.letters)))

    def __invert__(self) -> "Word":
        return self.inv()

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inv()
        out = Word(self.rank)
        for _ in range(abs(n)):
            out = out * base
        return out

    def conj(self, g: "Word") -> "Word":
        """g * self * g^-1."""
        return g * self * g.inv()

    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.rank == other.rank
            and self.letters == other.letters
        )

    def __hash__(self):
        return hash((self.rank, self.letters))

    def __repr__(self):
        return f"Word({self.rank}, {format_word(self)!r})"

    def __str__(self):
        return format_word(self)


def _reduce(rank: int, letters: Iterable[Tuple[int, int]]) -> Tuple[Tuple[int, int], ...]:
    out: List[Tuple[int, int]] = []
    for g, e in letters:
        if not (1 <= g <= rank):
            raise IndexOutOfRange(f"generator {g} out of range 1..{rank}")
        if e not in (1, -1):
            # allow exponents, expand
            if e == 0:
                continue
            for _ in range(abs(e)):
                _push(out, g, 1 if e > 0 else -1)
            continue
        _push(out, g, e)
    return tuple(out)


def _push(out: List[Tuple[int, int]], g: int, e: int) -> None:
    if out and out[-1][0] == g and out[-1][1] == -e:
        out.pop()
    else:
        out.append((g, e))


def reduce_word(rank: int, letters: Iterable[Tuple[int, int]]) -> Word:
    return Word(rank, letters)


def word(rank: int, *letters: Tuple[int, int]) -> Word:
    return Word(rank, letters)


def identity(rank: int) -> Word:
    return Word(rank)


def gen(rank: int, i: int, e: int = 1) -> Word:
    return Word(rank, [(i, e)])


# ---------------------------------------------------------------------------
# text format: space separated tokens `x`, `y^-3`, `g3^2`


def default_names(rank: int) -> List[str]:
    if rank == 2:
        return ["x", "y"]
    return [f"g{i}" for i in range(1, rank + 1)]


def format_word(w: Word, names: Optional[Sequence[str]] = None) -> str:
    if names is None:
        names = default_names(w.rank)
    if not w.letters:
        return "1"
    parts = []
    run_g, run_e = w.letters[0]
    count = run_e
    for g, e in w.letters[1:]:
        if g == run_g and (e > 0) == (count > 0):
            count += e
        else:
            parts.append(_token(names[run_g - 1], count))
            run_g, count = g, e
    parts.append(_token(names[run_g - 1], count))
    return " ".join(parts)


def _token(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def parse_word(text: str, rank: int = 2, names: Optional[Sequence[str]] = None) -> Word:
    """Parse the space separated token format, e.g. `x^-3 y^-1 x y`."""
    if names is None:
        names = default_names(rank)
    index = {n: i + 1 for i, n in enumerate(names)}
    letters: List[Tuple[int, int]] = []
    text = text.strip()
    if text in ("", "1"):
        return Word(rank)
    for tok in text.split():
        if "^" in tok:
            name, _, exp = tok.partition("^")
            e = int(exp)
        else:
            name, e = tok, 1
        if name not in index:
            raise ValueError(f"unknown generator token {name!r}")
        letters.append((index[name], e))
    return Word(rank, letters)


# ---------------------------------------------------------------------------
# exponent sums, conjugacy


def exponent_sums(w: Word) -> Tuple[int, ...]:
    out = [0] * w.rank
    for g, e in w.letters:
        out[g - 1] += e
    return tuple(out)


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    """Return (core, conjugator) with w = conjugator * core * conjugator^-1
    and core cyclically reduced."""
    letters = list(w.letters)
    pre: List[Tuple[int, int]] = []
    while len(letters) >= 2 and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
        pre.append(letters[0])
        letters = letters[1:-1]
    return Word(w.rank, letters), Word(w.rank, pre)


def is_cyclically_reduced(w: Word) -> bool:
    core, _ = cyclic_reduce(w)
    return core == w


def _rotations(core: Word):
    n = len(core.letters)
    for k in range(max(n, 1)):
        prefix = Word(core.rank, core.letters[:k])
        yield k, Word(core.rank, core.letters[k:] + core.letters[:k]), prefix


def is_conjugate(u: Word, v: Word) -> Optional[Word]:
    """Return g with v = g * u * g^-1, or None."""
    if u.rank != v.rank:
        raise RankMismatch("ranks differ")
    cu, pu = cyclic_reduce(u)
    cv, pv = cyclic_reduce(v)
    if len(cu.letters) != len(cv.letters):
        return None
    for _, rot, prefix in _rotations(cu):
        if rot == cv:
            # rot = prefix^-1 * cu * prefix
            g = pv * prefix.inv() * pu.inv()
            assert u.conj(g) == v
            return g
    return None


def primitive_root(u: Word) -> Word:
    """The generator of the centralizer of a non-trivial u."""
    core, p = cyclic_reduce(u)
    n = len(core.letters)
    assert n > 0
    for d in range(1, n + 1):
        if n % d:
            continue
        r = Word(core.rank, core.letters[:d])
        if r ** (n // d) == core:
            return r.conj(p)
    raise AssertionError("unreachable")


def simultaneous_conjugacy(pairs: Sequence[Tuple[Word, Word]]) -> Optional[Word]:
    """A single g with v_i = g * u_i * g^-1 for all pairs, or None.

    The solution set, if non-empty, is g0 * <root(u1)> for the first
    non-trivial u1; candidates are scanned with a length bound after which
    conjugates only grow.
    """
    pairs = list(pairs)
    if not pairs:
        return Word(1)
    rank = pairs[0][0].rank
    nontrivial = [(u, v) for u, v in pairs if not u.is_identity()]
    if not nontrivial:
        if any(not v.is_identity() for _, v in pairs):
            raise AllTrivial("every u is trivial but some v is not")
        return Word(rank)
    # trivial u forces trivial v
    for u, v in pairs:
        if u.is_identity() and not v.is_identity():
            return None
    u1, v1 = nontrivial[0]
    g0 = is_conjugate(u1, v1)
    if g0 is None:
        return None
    root = primitive_root(u1)

    def ok(g: Word) -> bool:
        return all(u.conj(g) == v for u, v in pairs)

    max_len = max(len(v) for _, v in pairs) + max(len(u) for u, _ in pairs)
    bound = 2 + (max_len + 2 * len(g0)) // max(len(root), 1)
    for k in range(0, bound + 1):
        for sk in ((k,) if k == 0 else (k, -k)):
            g = g0 * root ** sk
            if ok(g):
                return g
    return None


# ---------------------------------------------------------------------------
# horizontal words


def is_horizontal(w: Word) -> bool:
    """True iff w is a product of blocks x^{c_i} y x^{d_i} y^-1 (or the
    mirror with y and y^-1 swapped).  Pure powers of x count as the empty
    product."""
    if w.rank != 2:
        raise RankMismatch("horizontality is defined for rank 2")
    ysigns = [e for g, e in w.letters if g == 2]
    if not ysigns:
        return True
    if sum(ysigns) != 0:
        return False
    for a, b in zip(ysigns, ysigns[1:]):
        if a == b:
            return False
    return True


def is_conjugate_horizontal(w: Word) -> bool:
    core, _ = cyclic_reduce(w)
    for _, rot, _ in _rotations(core):
        if is_horizontal(rot):
            return True
    return False


# ---------------------------------------------------------------------------
# F_2 endomorphisms and beta_hat


@dataclass(frozen=True)
class F2Endo:
    image_x: Word
    image_y: Word
    is_automorphism: bool = False

    def __post_init__(self):
        if self.image_x.rank != 2 or self.image_y.rank != 2:
            raise RankMismatch("images must be rank-2 words")

    def __call__(self, w: Word) -> Word:
        return apply_endo(self, w)

    def __repr__(self):
        return f"F2Endo(x -> {self.image_x}, y -> {self.image_y})"


def apply_endo(phi: F2Endo, w: Word) -> Word:
    if w.rank != 2:
        raise RankMismatch("apply expects a rank-2 word")
    out = Word(2)
    for g, e in w.letters:
        img = phi.image_x if g == 1 else phi.image_y
        out = out * (img if e == 1 else img.inv())
    return out


def compose(phi: F2Endo, psi: F2Endo) -> F2Endo:
    """phi after psi."""
    return F2Endo(
        apply_endo(phi, psi.image_x),
        apply_endo(phi, psi.image_y),
        phi.is_automorphism and psi.is_automorphism,
    )


def identity_endo() -> F2Endo:
    return F2Endo(gen(2, 1), gen(2, 2), True)


def inner(wrd: Word) -> F2Endo:
    """Conjugation by wrd."""
    return F2Endo(gen(2, 1).conj(wrd), gen(2, 2).conj(wrd), True)


IntMatrix2 = Tuple[int, int, int, int]  # (a, b, c, d) for ((a, b), (c, d))


def mat_mul(A: IntMatrix2, B: IntMatrix2) -> IntMatrix2:
    a, b, c, d = A
    e, f, g, h = B
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_det(A: IntMatrix2) -> int:
    a, b, c, d = A
    return a * d - b * c


MAT_ID: IntMatrix2 = (1, 0, 0, 1)


def beta_hat(phi: F2Endo) -> IntMatrix2:
    sx = exponent_sums(phi.image_x)
    sy = exponent_sums(phi.image_y)
    return (sx[0], sy[0], sx[1], sy[1])


def horizontal_twist_lift(m: int) -> F2Endo:
    """x -> x, y -> x^m y; beta_hat is ((1, m), (0, 1))."""
    assert m >= 1
    return F2Endo(gen(2, 1), Word(2, [(1, m), (2, 1)]), True)


def _twist_T(m: int) -> F2Endo:
    # beta_hat = ((1, m), (0, 1))
    return F2Endo(gen(2, 1), Word(2, [(1, m), (2, 1)]), True)


def _twist_U(m: int) -> F2Endo:
    # beta_hat = ((1, 0), (m, 1))
    return F2Endo(Word(2, [(1, 1), (2, m)]), gen(2, 2), True)


_SWAP = F2Endo(gen(2, 2), gen(2, 1), True)            # ((0,1),(1,0))
_NEG_X = F2Endo(gen(2, 1, -1), gen(2, 2), True)       # ((-1,0),(0,1))
_NEG_Y = F2Endo(gen(2, 1), gen(2, 2, -1), True)       # ((1,0),(0,-1))


def lift_matrix(A: IntMatrix2) -> F2Endo:
    """A preimage of A under beta_hat, built from elementary Nielsen
    automorphisms by a Euclidean column reduction.  Deterministic."""
    if mat_det(A) not in (1, -1):
        raise NotUnimodular(f"det {mat_det(A)} is not +-1")
    factors: List[F2Endo] = []
    a, b, c, d = A
    while c != 0:
        if a == 0 or abs(a) < abs(c):
            # A = SWAP * (SWAP*A)
            factors.append(_SWAP)
            a, b, c, d = c, d, a, b
            continue
        # (a, b; c, d) = T^q * (a - q*c, b - q*d; c, d)
        q = a // c
        factors.append(_twist_T(q))
        a, b = a - q * c, b - q * d
    # c == 0, so a, d in {1, -1}
    assert a in (1, -1) and d in (1, -1)
    if a == -1:
        factors.append(_NEG_X)
        a, b = -a, -b
    if d == -1:
        factors.append(_NEG_Y)
        d = 1
    if b != 0:
        factors.append(_twist_T(b))
        b = 0
    phi = identity_endo()
    for f in factors:
        phi = compose(phi, f)
    assert beta_hat(phi) == A
    return phi
