"""Linear spaces on Fermat hypersurfaces, constructed exactly.

Roots of unity are integer exponents in a cyclic group, so every plane
count and containment check here is exact.  Only
:func:`singular_candidates` uses floating point.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .arith import ExponentPair, as_exponent_pair, double_factorial

#: sign vector of x0^k + x1^k + x2^k - x3^k - x4^k - x5^k
SIGNED_FORM = (1, 1, 1, -1, -1, -1)
DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """``exp(i*pi*numerator/order)``, an element of the cyclic group of
    ``2*order``-th roots of unity."""

    numerator: int
    order: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("order must be positive")
        if not 0 <= self.numerator < 2 * self.order:
            raise ValueError(f"numerator {self.numerator} outside [0, {2 * self.order})")

    @classmethod
    def of(cls, numerator: int, order: int) -> RootOfUnity:
        return cls(numerator % (2 * order), order)

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        if other.order != self.order:
            raise ValueError("roots live in different groups")
        return RootOfUnity.of(self.numerator + other.numerator, self.order)

    def __pow__(self, k: int) -> RootOfUnity:
        return RootOfUnity.of(self.numerator * k, self.order)

    def inverse(self) -> RootOfUnity:
        return RootOfUnity.of(-self.numerator, self.order)

    def is_one(self) -> bool:
        return self.numerator == 0

    def is_minus_one(self) -> bool:
        return self.numerator == self.order

    def is_root_of_minus_one(self, k: int) -> bool:
        return (k * self.numerator) % (2 * self.order) == self.order

    def is_root_of_one(self, k: int) -> bool:
        return (k * self.numerator) % (2 * self.order) == 0

    def to_complex(self) -> complex:
        return complex(np.exp(1j * np.pi * self.numerator / self.order))


def perfect_matchings(indices: Sequence[int]) -> Iterator[tuple[tuple[int, int], ...]]:
    """Perfect matchings of ``indices`` with each pair and the pair list
    sorted."""
    indices = sorted(indices)
    if not indices:
        yield ()
        return
    if len(indices) % 2:
        return
    first, rest = indices[0], indices[1:]
    for j, partner in enumerate(rest):
        remaining = rest[:j] + rest[j + 1 :]
        for tail in perfect_matchings(remaining):
            yield ((first, partner),) + tail


def _check_matching(pairing, n: int) -> None:
    flat = [i for pair in pairing for i in pair]
    if any(len(pair) != 2 for pair in pairing) or sorted(flat) != list(range(n)):
        raise ValueError(f"pairing {pairing} is not a perfect matching of range({n})")


@dataclass(frozen=True, order=True)
class StandardPlane:
    """Linear space spanned by one vector per pair ``(i, j)`` of a perfect
    matching, with ``x_i = 1``, ``x_j = root`` and zeros elsewhere.

    With three pairs this is a plane in P^5; with ``m + 1`` pairs an
    ``m``-dimensional space in P^(2m+1).  Instances built through
    :meth:`build` are in canonical form (``i < j`` in each pair, pairs sorted
    by smallest index), so equal spaces compare equal.
    """

    pairing: tuple[tuple[int, int], ...]
    roots: tuple[RootOfUnity, ...]
    k: int = field(compare=True)

    @classmethod
    def build(cls, pairs, roots, k: int) -> StandardPlane:
        if len(pairs) != len(roots):
            raise ValueError("need exactly one root per pair")
        items = []
        for (i, j), r in zip(pairs, roots):
            if i == j:
                raise ValueError(f"degenerate pair {(i, j)}")
            items.append(((i, j), r) if i < j else ((j, i), r.inverse()))
        items.sort()
        return cls(tuple(p for p, _ in items), tuple(r for _, r in items), k)

    @property
    def dimension(self) -> int:
        return len(self.pairing) - 1

    @property
    def ambient(self) -> int:
        """Number of homogeneous coordinates."""
        return 2 * len(self.pairing)

    def basis(self) -> np.ndarray:
        """Complex spanning vectors, one row per pair."""
        rows = np.zeros((len(self.pairing), self.ambient), dtype=complex)
        for a, ((i, j), r) in enumerate(zip(self.pairing, self.roots)):
            rows[a, i] = 1.0
            rows[a, j] = r.to_complex()
        return rows

    def admits_positive_rational_point(self) -> bool:
        # x_j = root * x_i with both positive rationals forces root == 1
        return all(r.is_one() for r in self.roots)


def verify_plane_containment(p: StandardPlane, signs: Optional[Sequence[int]] = None) -> bool:
    """Whether ``p`` lies on ``sum_i signs[i] * x_i^k = 0``.

    Substituting the parametrisation, pair ``(i, j)`` contributes
    ``lambda^k (s_i + s_j * root^k)``, so the space is contained iff each
    root satisfies ``root^k = -s_i/s_j`` exactly.
    """
    _check_matching(p.pairing, p.ambient)
    signs = (1,) * p.ambient if signs is None else tuple(signs)
    if len(signs) != p.ambient or any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be a +-1 vector matching the ambient space")
    for (i, j), r in zip(p.pairing, p.roots):
        if signs[i] == signs[j]:
            ok = r.is_root_of_minus_one(p.k)
        else:
            ok = r.is_root_of_one(p.k)
        if not ok:
            return False
    return True


def _pair_roots(k: int, same_sign: bool) -> list[RootOfUnity]:
    """``k``-th roots of -1 (same sign) or of +1 (mixed signs)."""
    target = k if same_sign else 0
    return [RootOfUnity(n, k) for n in range(2 * k) if (k * n) % (2 * k) == target]


def linear_spaces(m: int, k: int, signs: Optional[Sequence[int]] = None) -> list[StandardPlane]:
    """Every standard ``m``-dimensional space on the degree-``k`` diagonal
    form in ``2m + 2`` variables, in canonical order and without duplicates."""
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    n = 2 * m + 2
    signs = (1,) * n if signs is None else tuple(signs)
    seen: set[StandardPlane] = set()
    out: list[StandardPlane] = []
    for pairing in perfect_matchings(range(n)):
        choices = [_pair_roots(k, signs[i] == signs[j]) for i, j in pairing]
        for roots in itertools.product(*choices):
            plane = StandardPlane.build(pairing, roots, k)
            if plane not in seen:
                seen.add(plane)
                out.append(plane)
    out.sort()
    return out


def standard_planes(k: int, signs: Optional[Sequence[int]] = None) -> list[StandardPlane]:
    """All ``15 k^3`` standard planes of ``x0^k + ... + x5^k = 0`` (or of the
    form with the given sign vector)."""
    return linear_spaces(2, k, signs)


@dataclass(frozen=True)
class LinearSpaceFamily:
    m: int
    k: int
    count: int

    @property
    def expected(self) -> int:
        return double_factorial(2 * self.m + 1) * self.k ** (self.m + 1)


def linear_space_count(m: int, k: int) -> LinearSpaceFamily:
    """Count the standard ``m``-spaces on the degree-``k`` Fermat form by
    explicit generation; every generated space is checked for containment."""
    spaces = linear_spaces(m, k)
    if not all(verify_plane_containment(s) for s in spaces):
        raise RuntimeError("generated a space not contained in the hypersurface")
    return LinearSpaceFamily(m, k, len(spaces))


# ---------------------------------------------------------------------------
# planes on X_{c,d}


@dataclass(frozen=True)
class PlaneCensus:
    exponents: ExponentPair
    standard_on_Gd: int
    on_X: tuple[StandardPlane, ...]
    planes: tuple[StandardPlane, ...]

    @property
    def total_rational_positive(self) -> int:
        return len(self.planes)


def planes_on_X(e) -> PlaneCensus:
    """Census of the planes on ``X_{c,d} = G_c ∩ G_d``.

    Every plane on ``X`` lies on the degree-d signed form, where (for d >= 4)
    all planes are standard.  Those standard planes are filtered to the ones
    also on ``G_c``, then to those carrying a rational point with positive
    coordinates.  The survivors are the six trivial planes.
    """
    e = as_exponent_pair(e)
    if e.d < 4:
        raise ValueError(f"plane classification needs d >= 4, got d={e.d}")
    on_gd = standard_planes(e.d, SIGNED_FORM)
    on_x = []
    for plane in on_gd:
        if not verify_plane_containment(plane, SIGNED_FORM):
            raise RuntimeError("generator produced a plane off G_d")
        if _contained_in_degree(plane, e.c, SIGNED_FORM):
            on_x.append(plane)
    positive = tuple(p for p in on_x if p.admits_positive_rational_point())
    return PlaneCensus(e, len(on_gd), tuple(on_x), positive)


def _contained_in_degree(plane: StandardPlane, c: int, signs) -> bool:
    for (i, j), r in zip(plane.pairing, plane.roots):
        if signs[i] == signs[j]:
            if not r.is_root_of_minus_one(c):
                return False
        elif not r.is_root_of_one(c):
            return False
    return True


def trivial_planes(k: int = 1) -> list[StandardPlane]:
    """The six planes ``x0 = x_i, x1 = x_j, x2 = x_k`` with ``{i, j, k} =
    {3, 4, 5}``, with roots in the group used for degree ``k``."""
    one = RootOfUnity(0, k)
    return sorted(
        StandardPlane.build(list(zip((0, 1, 2), perm)), (one,) * 3, k)
        for perm in itertools.permutations((3, 4, 5))
    )


# ---------------------------------------------------------------------------
# finite-field probe for non-standard planes


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, int(n**0.5) + 1))


@dataclass(frozen=True)
class ProbeReport:
    k: int
    p: int
    seed: Optional[int]
    planes_found: int
    standard: int
    expected_standard: int
    nonstandard_examples: tuple

    @property
    def all_standard(self) -> bool:
        return self.planes_found == self.standard


def nonstandard_plane_probe(k: int, p: int, seed: Optional[int] = None) -> ProbeReport:
    """Exhaustively find the planes of ``x0^k + ... + x5^k = 0`` over F_p of
    the form ``[u0, u1, u2, L3(u), L4(u), L5(u)]`` and check which are
    standard.

    The plane with ``L_{3+j} = a_j u0 + b_j u1 + c_j u2`` lies on the form iff
    the polynomial ``u0^k + u1^k + u2^k + sum_j L_{3+j}^k`` vanishes; since
    ``k < p`` all multinomial coefficients are units, so that means
    ``sum_j a_j^al b_j^be c_j^ga = -[pure power]`` for every
    ``al + be + ga = k``.  A plane of this shape is standard iff the matrix
    of ``(a, b, c)`` is monomial with entries ``mu^k = -1``.
    """
    if k not in (4, 5):
        raise ValueError(f"probe supports k in {{4, 5}}, got {k}")
    if not _is_prime(p) or p > 31:
        raise ValueError(f"p must be a prime <= 31, got {p}")
    if p % (2 * k) != 1:
        raise ValueError(f"p must satisfy p = 1 (mod {2 * k}); {p} = {p % (2 * k)} (mod {2 * k})")

    grid = np.array(list(itertools.product(range(p), repeat=3)), dtype=np.int64)
    pw = [np.ones_like(grid)]
    for _ in range(k):
        pw.append((pw[-1] * grid) % p)
    # coefficient vectors v with 1 + sum v_j^k = 0
    rows = grid[(1 + pw[k].sum(axis=1)) % p == 0]
    rpw = [(q[(1 + pw[k].sum(axis=1)) % p == 0]) for q in pw]
    n = len(rows)

    compat = np.ones((n, n), dtype=bool)
    for al in range(1, k):
        compat &= (rpw[al] @ rpw[k - al].T) % p == 0

    order = list(range(n))
    if seed is not None:
        random.Random(seed).shuffle(order)

    mixed = [(al, be, k - al - be) for al in range(1, k) for be in range(1, k - al)]
    found = []
    for ia in order:
        for ib in np.flatnonzero(compat[ia]).tolist():
            cands = np.flatnonzero(compat[ia] & compat[ib] & compat[:, ia] & compat[:, ib])
            if len(cands) == 0:
                continue
            ok = np.ones(len(cands), dtype=bool)
            for al, be, ga in mixed:
                ab = rpw[al][ia] * rpw[be][ib] % p
                ok &= (rpw[ga][cands] @ ab) % p == 0
            for ic in cands[ok].tolist():
                found.append((ia, ib, ic))
    found.sort()

    minus_one_roots = {x for x in range(1, p) if pow(x, k, p) == p - 1}
    standard = 0
    examples = []
    for ia, ib, ic in found:
        mat = np.stack([rows[ia], rows[ib], rows[ic]])
        if _is_standard_block(mat, minus_one_roots):
            standard += 1
        elif len(examples) < 5:
            examples.append(tuple(map(tuple, mat.tolist())))
    expected = 6 * len(minus_one_roots) ** 3
    return ProbeReport(k, p, seed, len(found), standard, expected, tuple(examples))


def _is_standard_block(mat: np.ndarray, roots: set[int]) -> bool:
    nz = mat != 0
    if not (np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)):
        return False
    return all(int(v) in roots for v in mat[nz])


# ---------------------------------------------------------------------------
# singular locus


@dataclass(frozen=True)
class SingularReport:
    """Heuristic (floating point) singular-point candidates of ``X_{c,d}``.

    Each candidate is a tuple of 6 codes: ``None`` for a zero coordinate,
    otherwise ``t`` meaning ``exp(2*pi*i*t/r)`` with ``r = 2(d - c)``.
    """

    exponents: ExponentPair
    tolerance: float
    root_order: int
    patterns_tested: int
    pattern_bound: int
    candidates: tuple
    max_residual: float
    heuristic: bool = True

    @property
    def count(self) -> int:
        return len(self.candidates)


def singular_candidates(e, tolerance: float = DEFAULT_TOLERANCE) -> SingularReport:
    """Points of ``X_{c,d}`` whose nonzero coordinates are ``2(d-c)``-th roots
    of unity (up to scaling) at which the 2x6 Jacobian has rank < 2."""
    e = as_exponent_pair(e)
    if not 0 < tolerance <= 1e-6:
        raise ValueError(f"tolerance must lie in (0, 1e-6], got {tolerance}")
    c, d = e.c, e.d
    r = 2 * (d - c)
    s = np.array(SIGNED_FORM, dtype=float)
    roots = np.exp(2j * np.pi * np.arange(r) / r)
    values = np.concatenate(([0.0], roots))  # code -1 -> index 0
    iu = np.triu_indices(6, 1)

    cands = []
    tested = 0
    worst = 0.0
    head_codes = list(itertools.product(range(-1, r), repeat=2))
    tail = np.array(list(itertools.product(range(-1, r), repeat=4)), dtype=np.int64)
    for h in head_codes:
        codes = np.concatenate([np.tile(np.array(h), (len(tail), 1)), tail], axis=1)
        # projective normalisation: first nonzero coordinate is exp(0) = 1
        nz = codes >= 0
        has = nz.any(axis=1)
        first = np.argmax(nz, axis=1)
        keep = has & (codes[np.arange(len(codes)), first] == 0)
        codes = codes[keep]
        if len(codes) == 0:
            continue
        tested += len(codes)
        z = values[codes + 1]
        f_c = (s * z**c).sum(axis=1)
        f_d = (s * z**d).sum(axis=1)
        j1 = s * c * z ** (c - 1)
        j2 = s * d * z ** (d - 1)
        minors = j1[:, iu[0]] * j2[:, iu[1]] - j1[:, iu[1]] * j2[:, iu[0]]
        resid = np.maximum(np.maximum(abs(f_c), abs(f_d)), abs(minors).max(axis=1))
        hit = resid <= tolerance
        for row, res in zip(codes[hit].tolist(), resid[hit].tolist()):
            cands.append(tuple(None if v < 0 else v for v in row))
            worst = max(worst, res)
    cands.sort(key=lambda t: tuple(-1 if v is None else v for v in t))
    return SingularReport(e, tolerance, r, tested, (1 + r) ** 6, tuple(cands), worst)
