"""Finite-lattice duality data for cocycles at a root of unity.

From the antisymmetrized exponent matrix of a
:class:`~nctorus.cocycle.BilinearCocycle` this module computes, in exact
integer/rational arithmetic:

* the sublattice of exponents whose phases commute with everything
  (:func:`compute_H_hat`, by Smith reduction),
* the finite quotient it cuts out, presented as a direct sum of cyclic
  groups with an explicit section (:func:`compute_K_hat`),
* a representative of the cocycle on that quotient whose ``sharp`` map
  into the character group is a bijection (:func:`descend_cocycle`,
  :func:`lambda_sharp`).

Smith normal form is implemented here because the unimodular transform
matrices are part of the contract, not just the diagonal.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .cocycle import BilinearCocycle, Phase

Vec = tuple[int, ...]


# ---------------------------------------------------------------------------
# integer linear algebra helpers (pure Python ints; matrices as row tuples)

def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matvec(rows: Sequence[Sequence[int]], t: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, t)) for row in rows]


def _fraction_solve(rows: Sequence[Sequence[int]], rhs: Sequence) -> list[Fraction]:
    """Solve the square nonsingular system ``rows . x = rhs`` exactly."""
    g = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(r)]
           for row, r in zip(rows, rhs)]
    for c in range(g):
        piv = next((r for r in range(c, g) if aug[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        scale = aug[c][c]
        aug[c] = [x / scale for x in aug[c]]
        for r in range(g):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [aug[r][g] for r in range(g)]


def _int_inverse(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact inverse of an integer matrix with determinant +-1."""
    g = len(rows)
    cols = []
    for j in range(g):
        e = [int(i == j) for i in range(g)]
        sol = _fraction_solve(rows, e)
        if any(x.denominator != 1 for x in sol):
            raise ValueError("matrix is not unimodular")
        cols.append([int(x) for x in sol])
    return [[cols[j][i] for j in range(g)] for i in range(g)]


def smith_normal_form(A: Sequence[Sequence[int]]):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns ``(D, U, V)`` as int64 arrays with ``U @ A @ V == D``, ``U`` and
    ``V`` unimodular, and ``D`` diagonal with nonnegative entries each
    dividing the next.
    """
    M = [[int(x) for x in row] for row in A]
    m = len(M)
    n = len(M[0]) if m else 0
    if any(len(row) != n for row in M):
        raise ValueError("ragged matrix")
    U = _identity(m)
    V = _identity(n)

    def swap_rows(a, b):
        M[a], M[b] = M[b], M[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in M:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def add_row(dst, src, q):  # row_dst += q * row_src
        M[dst] = [x + q * y for x, y in zip(M[dst], M[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in M:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    size = min(m, n)
    while t < size:
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                v = M[i][j]
                if v and (pivot is None or abs(v) < abs(M[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        dirty = False
        for i in range(t + 1, m):
            if M[i][t]:
                add_row(i, t, -(M[i][t] // M[t][t]))
                if M[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if M[t][j]:
                add_col(j, t, -(M[t][j] // M[t][t]))
                if M[t][j]:
                    dirty = True
        if dirty:
            continue
        p = M[t][t]
        stain = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                      if M[i][j] % p), None)
        if stain is not None:
            add_row(t, stain[0], 1)
            continue
        t += 1
    for i in range(size):
        if M[i][i] < 0:
            M[i] = [-x for x in M[i]]
            U[i] = [-x for x in U[i]]
    return (np.array(M, dtype=np.int64),
            np.array(U, dtype=np.int64),
            np.array(V, dtype=np.int64))


def _hermite_columns(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Column-style Hermite form of an integer matrix whose columns span a
    full-rank lattice: returns the square lower-triangular basis with
    positive diagonal and reduced entries left of it."""
    r = len(rows)
    M = [list(map(int, row)) for row in rows]
    k = len(M[0])

    def add_col(dst, src, q):
        for row in M:
            row[dst] += q * row[src]

    for i in range(r):
        while True:
            cols = [j for j in range(i, k) if M[i][j]]
            if not cols:
                raise ValueError("columns do not span a full-rank lattice")
            j0 = min(cols, key=lambda j: abs(M[i][j]))
            if j0 != i:
                for row in M:
                    row[i], row[j0] = row[j0], row[i]
            done = True
            for j in range(i + 1, k):
                if M[i][j]:
                    add_col(j, i, -(M[i][j] // M[i][i]))
                    if M[i][j]:
                        done = False
            if done:
                break
        if M[i][i] < 0:
            for row in M:
                row[i] = -row[i]
        for j in range(i):
            q = M[i][j] // M[i][i]
            if q:
                add_col(j, i, -q)
    return [[M[i][j] for j in range(r)] for i in range(r)]


# ---------------------------------------------------------------------------
# finite abelian groups

class FiniteAbelianGroup:
    """Direct sum ``Z/d_1 + ... + Z/d_r`` with exact character pairing.

    Elements are coordinate tuples reduced modulo the factors.  The
    character group is identified with the group itself through ``pairing``,
    which sends ``(x, chi)`` to the phase ``sum_i x_i chi_i / d_i``.
    """

    __slots__ = ("factors",)

    def __init__(self, factors: Sequence[int]):
        fs = tuple(int(d) for d in factors)
        if any(d < 1 for d in fs):
            raise ValueError("cyclic factors must be positive")
        self.factors = fs

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def size(self) -> int:
        return math.prod(self.factors)

    def zero(self) -> Vec:
        return (0,) * len(self.factors)

    def reduce(self, x: Sequence[int]) -> Vec:
        if len(x) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} coordinates")
        return tuple(int(a) % d for a, d in zip(x, self.factors))

    def add(self, x: Sequence[int], y: Sequence[int]) -> Vec:
        return tuple((a + b) % d for a, b, d
                     in zip(self.reduce(x), self.reduce(y), self.factors))

    def neg(self, x: Sequence[int]) -> Vec:
        return tuple((-a) % d for a, d in zip(self.reduce(x), self.factors))

    def scale(self, n: int, x: Sequence[int]) -> Vec:
        return tuple((n * a) % d for a, d in zip(self.reduce(x), self.factors))

    def elements(self) -> Iterator[Vec]:
        return itertools.product(*(range(d) for d in self.factors))

    def generators(self) -> list[Vec]:
        """One standard generator per cyclic factor."""
        return [tuple(int(i == j) for i in range(self.rank))
                for j in range(self.rank)]

    def pairing(self, x: Sequence[int], chi: Sequence[int]) -> Phase:
        x = self.reduce(x)
        chi = self.reduce(chi)
        return Phase(sum(Fraction(a * c, d)
                         for a, c, d in zip(x, chi, self.factors)))

    def random_element(self, rng: np.random.Generator) -> Vec:
        return tuple(int(rng.integers(0, d)) for d in self.factors)

    def __iter__(self) -> Iterator[Vec]:
        return self.elements()

    def __len__(self) -> int:
        return self.size

    def __contains__(self, x) -> bool:
        try:
            seq = tuple(x)
        except TypeError:
            return False
        return len(seq) == len(self.factors) and all(
            0 <= int(a) < d for a, d in zip(seq, self.factors))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteAbelianGroup):
            return NotImplemented
        return self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({list(self.factors)})"


class GroupBilinearTable:
    """Bimultiplicative phase pairing on a finite abelian group.

    Stored as the matrix of values on the standard generators and extended
    by bilinearity; construction validates that each ``omega[i][j]`` has
    order dividing both generator orders so the extension is well defined.
    """

    __slots__ = ("group", "omega")

    def __init__(self, group: FiniteAbelianGroup, omega):
        r = group.rank
        rows = []
        for row in omega:
            rows.append(tuple(w if isinstance(w, Phase) else Phase(w)
                              for w in row))
        if len(rows) != r or any(len(row) != r for row in rows):
            raise ValueError(f"omega must be {r}x{r}")
        for i in range(r):
            for j in range(r):
                w = rows[i][j]
                if group.factors[i] * w != Phase.zero() \
                        or group.factors[j] * w != Phase.zero():
                    raise ValueError(
                        f"omega[{i}][{j}] = {w} has order incompatible with "
                        f"the generator orders")
        self.group = group
        self.omega = tuple(rows)

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup) -> "GroupBilinearTable":
        z = Phase.zero()
        return cls(group, [[z] * group.rank for _ in range(group.rank)])

    def __call__(self, x: Sequence[int], y: Sequence[int]) -> Phase:
        x = self.group.reduce(x)
        y = self.group.reduce(y)
        total = Phase.zero()
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    total = total + (xi * yj) * self.omega[i][j]
        return total

    def antisymmetrized(self) -> "GroupBilinearTable":
        r = self.group.rank
        return GroupBilinearTable(
            self.group,
            [[self.omega[i][j] - self.omega[j][i] for j in range(r)]
             for i in range(r)])

    def is_alternating(self) -> bool:
        """True when every value pairs an element against itself trivially."""
        r = self.group.rank
        if any(self.omega[i][i] != Phase.zero() for i in range(r)):
            return False
        return all(self.omega[i][j] + self.omega[j][i] == Phase.zero()
                   for i in range(r) for j in range(i + 1, r))

    def as_dict(self) -> dict:
        return {"factors": list(self.group.factors),
                "omega": [[str(w) for w in row] for row in self.omega]}

    @classmethod
    def from_dict(cls, data) -> "GroupBilinearTable":
        group = FiniteAbelianGroup(data["factors"])
        omega = [[Phase.parse(w) for w in row] for row in data["omega"]]
        return cls(group, omega)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupBilinearTable):
            return NotImplemented
        return self.group == other.group and self.omega == other.omega

    def __repr__(self) -> str:
        return (f"GroupBilinearTable({self.group!r}, "
                f"{[[str(w) for w in row] for row in self.omega]})")


# ---------------------------------------------------------------------------
# the commutant sublattice and its quotient

class SublatticeBasis:
    """Finite-index sublattice of Z^g given by the columns of a basis matrix.

    The basis is put into column Hermite form on construction, so two equal
    sublattices compare equal no matter which generating basis was passed.
    """

    __slots__ = ("g", "N", "rows", "index")

    def __init__(self, rows: Sequence[Sequence[int]], N: int):
        g = len(rows)
        if any(len(row) != g for row in rows):
            raise ValueError("basis matrix must be square")
        canon = _hermite_columns(rows)
        self.rows = tuple(tuple(row) for row in canon)
        self.g = g
        self.N = int(N)
        self.index = math.prod(canon[i][i] for i in range(g))

    def columns(self) -> list[Vec]:
        return [tuple(self.rows[i][j] for i in range(self.g))
                for j in range(self.g)]

    def contains(self, t: Sequence[int]) -> bool:
        if len(t) != self.g:
            raise ValueError(f"expected a length-{self.g} vector")
        sol = _fraction_solve(self.rows, t)
        return all(x.denominator == 1 for x in sol)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SublatticeBasis):
            return NotImplemented
        return self.N == other.N and self.rows == other.rows

    def __repr__(self) -> str:
        return f"SublatticeBasis({[list(r) for r in self.rows]}, N={self.N})"


def compute_H_hat(Lam: Sequence[Sequence[int]], N: int) -> SublatticeBasis:
    """Sublattice of exponent vectors commuting with everything.

    Solves ``Lam . t == 0 (mod N)`` for an integer matrix ``Lam`` that is
    antisymmetric modulo ``N`` (typically an
    :meth:`~nctorus.cocycle.BilinearCocycle.antisymmetrized` table).  The
    result always contains ``N Z^g``, and its index in ``Z^g`` is the size
    of the finite quotient computed by :func:`compute_K_hat`.
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be positive")
    L = [[int(x) % N for x in row] for row in Lam]
    g = len(L)
    if any(len(row) != g for row in L):
        raise ValueError("Lam must be square")
    for i in range(g):
        for j in range(g):
            if (L[i][j] + L[j][i]) % N:
                raise ValueError("Lam must be antisymmetric modulo N")
    D, _, V = smith_normal_form(L)
    mult = [N // math.gcd(int(D[i, i]), N) for i in range(g)]
    B = [[int(V[i, j]) * mult[j] for j in range(g)] for i in range(g)]
    return SublatticeBasis(B, N)


class QuotientPresentation:
    """``Z^g`` modulo a finite-index sublattice, as a sum of cyclic groups.

    ``project`` maps exponent vectors onto quotient coordinates and
    ``lift`` is an explicit section of it; the lifts of the quotient
    generators are stored in ``lifts``.
    """

    __slots__ = ("sublattice", "group", "U", "factors_full", "kept", "lifts")

    def __init__(self, sublattice, group, U, factors_full, kept, lifts):
        self.sublattice = sublattice
        self.group = group
        self.U = U
        self.factors_full = factors_full
        self.kept = kept
        self.lifts = lifts

    def project(self, t: Sequence[int]) -> Vec:
        if len(t) != self.sublattice.g:
            raise ValueError(f"expected a length-{self.sublattice.g} vector")
        y = _matvec(self.U, [int(x) for x in t])
        return tuple(y[i] % self.factors_full[i] for i in self.kept)

    def lift(self, k: Sequence[int]) -> Vec:
        k = self.group.reduce(k)
        g = self.sublattice.g
        out = [0] * g
        for coeff, col in zip(k, self.lifts):
            if coeff:
                out = [o + coeff * c for o, c in zip(out, col)]
        return tuple(out)

    def __repr__(self) -> str:
        return (f"QuotientPresentation(factors={list(self.group.factors)}, "
                f"of {self.sublattice!r})")


def compute_K_hat(sub: SublatticeBasis) -> QuotientPresentation:
    """Present ``Z^g`` modulo the given sublattice as cyclic factors."""
    D, U, _ = smith_normal_form(sub.rows)
    g = sub.g
    factors_full = [int(D[i, i]) for i in range(g)]
    kept = [i for i, d in enumerate(factors_full) if d > 1]
    group = FiniteAbelianGroup([factors_full[i] for i in kept])
    Urows = [[int(U[i, j]) for j in range(g)] for i in range(g)]
    Uinv = _int_inverse(Urows)
    lifts = [tuple(Uinv[row][i] for row in range(g)) for i in kept]
    return QuotientPresentation(sub, group, Urows, factors_full, kept, lifts)


def descend_cocycle(lam: BilinearCocycle,
                    quo: QuotientPresentation) -> GroupBilinearTable:
    """Represent a bilinear cocycle on the finite quotient of its lattice.

    First checks the descent obstruction: the antisymmetrization must pair
    the sublattice trivially against everything (automatic when ``quo`` was
    built from this cocycle's own commutant).  The representative returned
    is triangular on the quotient generators -- generator pairs ``i < j``
    carry the pairing of their lifts, each diagonal entry is a primitive
    root of that generator's order, and entries below the diagonal are
    trivial.  Its antisymmetrization is the descended pairing of
    ``lam.antisymmetrized()``, and the primitive diagonal guarantees that
    :func:`lambda_sharp` is a bijection.
    """
    A = lam.antisymmetrized()
    N = lam.N
    if quo.sublattice.g != lam.g:
        raise ValueError("quotient and cocycle rank differ")
    if quo.sublattice.N != N:
        raise ValueError("quotient and cocycle root order differ")
    for col in quo.sublattice.columns():
        img = _matvec(A, col)
        if any(x % N for x in img):
            raise ValueError(
                f"cocycle does not descend: basis vector {col} pairs "
                f"nontrivially")
    factors = quo.group.factors
    r = len(factors)
    omega = [[Phase.zero()] * r for _ in range(r)]
    for i in range(r):
        omega[i][i] = Phase(1, factors[i])
        for j in range(i + 1, r):
            pair = sum(a * x for a, x in zip(_matvec(A, quo.lifts[j]),
                                             quo.lifts[i]))
            omega[i][j] = Phase(pair, N)
    return GroupBilinearTable(quo.group, omega)


class DualPairData:
    """A pairing on a finite abelian group together with its inverted form.

    ``sharp`` sends each element to the character it pairs with (encoded in
    the same coordinate tuples through the standard pairing), ``flat`` is
    the inverse bijection, and :meth:`dual_pairing` transports the pairing
    to the character side.
    """

    __slots__ = ("group", "lam", "sharp", "flat")

    def __init__(self, group, lam, sharp, flat):
        self.group = group
        self.lam = lam
        self.sharp = sharp
        self.flat = flat

    def dual_pairing(self, k1: Sequence[int], k2: Sequence[int]) -> Phase:
        """The pairing seen from the character side."""
        k1 = self.group.reduce(k1)
        k2 = self.group.reduce(k2)
        return self.lam(self.flat[k1], self.flat[k2])

    def __repr__(self) -> str:
        return f"DualPairData(group={self.group!r})"


def lambda_sharp(table: GroupBilinearTable) -> DualPairData:
    """Invert a pairing: each element's row becomes a character.

    ``sharp(x)`` is the character ``y -> table(x, y)``.  Raises
    ``ValueError`` when the pairing is degenerate, i.e. when two elements
    induce the same character.  Tables built by :func:`descend_cocycle`
    never are, thanks to their primitive diagonal.
    """
    group = table.group
    basis = [tuple(int(i == j) for i in range(group.rank))
             for j in range(group.rank)]
    sharp = {}
    for x in group.elements():
        coords = []
        for j, d in enumerate(group.factors):
            c = table(x, basis[j]).q * d
            if c.denominator != 1:
                raise ValueError("pairing value order exceeds generator order")
            coords.append(int(c) % d)
        sharp[x] = tuple(coords)
    if len(set(sharp.values())) != group.size:
        raise ValueError("pairing is degenerate: sharp is not a bijection")
    flat = {v: k for k, v in sharp.items()}
    return DualPairData(group, table, sharp, flat)


# ---------------------------------------------------------------------------
# subgroups of finite abelian groups

class SubgroupPresentation:
    """A subgroup of a finite abelian group, presented abstractly.

    ``group`` carries the subgroup's own cyclic factors; :meth:`embed` maps
    abstract coordinates into the ambient group and :meth:`restrict` maps
    ambient members of the subgroup back.  ``elements`` lists the subgroup
    inside the ambient group in sorted order.
    """

    __slots__ = ("ambient", "group", "elements", "_gens_ambient",
                 "_basis", "_U2", "_factors_full", "_kept")

    def __init__(self, ambient, group, elements, gens_ambient,
                 basis, U2, factors_full, kept):
        self.ambient = ambient
        self.group = group
        self.elements = elements
        self._gens_ambient = gens_ambient
        self._basis = basis
        self._U2 = U2
        self._factors_full = factors_full
        self._kept = kept

    def embed(self, k: Sequence[int]) -> Vec:
        k = self.group.reduce(k)
        out = self.ambient.zero()
        for coeff, gen in zip(k, self._gens_ambient):
            out = self.ambient.add(out, self.ambient.scale(coeff, gen))
        return out

    def restrict(self, x: Sequence[int]) -> Vec:
        x = self.ambient.reduce(x)
        sol = _fraction_solve(self._basis, x)
        if any(v.denominator != 1 for v in sol):
            raise ValueError(f"{x} is not in the subgroup")
        y = _matvec(self._U2, [int(v) for v in sol])
        return tuple(y[i] % self._factors_full[i] for i in self._kept)

    def __repr__(self) -> str:
        return (f"SubgroupPresentation(factors={list(self.group.factors)} "
                f"inside {self.ambient!r})")


def subgroup_presentation(G: FiniteAbelianGroup,
                          gens: Sequence[Sequence[int]]) -> SubgroupPresentation:
    """Close a generating set inside ``G`` and present the subgroup.

    The presentation is computed from the lattice of integer lifts: the
    subgroup is the span of the generator lifts plus the relation lattice of
    ``G``, modulo those relations, which Smith reduction turns into cyclic
    factors with explicit coordinate maps in both directions.
    """
    gens = [G.reduce(g) for g in gens]
    elems = {G.zero()}
    frontier = [G.zero()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.add(x, g)
            if y not in elems:
                elems.add(y)
                frontier.append(y)
    r = G.rank
    if r == 0:
        trivial = FiniteAbelianGroup(())
        return SubgroupPresentation(G, trivial, ((),), (), (), (), (), ())
    cols: list[Vec] = [h for h in sorted(elems)]
    cols += [tuple(d * int(i == j) for i in range(r))
             for j, d in enumerate(G.factors)]
    stacked = [[col[i] for col in cols] for i in range(r)]
    basis = _hermite_columns(stacked)
    rel_cols = []
    for j, d in enumerate(G.factors):
        sol = _fraction_solve(basis, [d * int(i == j) for i in range(r)])
        assert all(v.denominator == 1 for v in sol)
        rel_cols.append([int(v) for v in sol])
    relations = [[rel_cols[j][i] for j in range(r)] for i in range(r)]
    D2, U2, _ = smith_normal_form(relations)
    factors_full = [int(D2[i, i]) for i in range(r)]
    kept = [i for i, d in enumerate(factors_full) if d > 1]
    group = FiniteAbelianGroup([factors_full[i] for i in kept])
    U2rows = [[int(U2[i, j]) for j in range(r)] for i in range(r)]
    U2inv = _int_inverse(U2rows)
    gens_ambient = []
    for i in kept:
        w = _matvec(basis, [U2inv[row][i] for row in range(r)])
        gens_ambient.append(G.reduce(w))
    return SubgroupPresentation(G, group, tuple(sorted(elems)),
                                tuple(gens_ambient), basis, U2rows,
                                factors_full, kept)
