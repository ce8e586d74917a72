"""Twisted-equivariant linear algebra over finite group actions.

An :class:`EquivariantObject` is a family of vector spaces over the points
of a finite G-set together with maps ``rho_g[s]: fiber(s) -> fiber(s.g)``.
Composing two of them is only required to close up to a scalar,

    rho_{g2}[s.g1] . rho_{g1}[s] == phi(g1, g2) * rho_{g1+g2}[s],

and :func:`check_linearization` verifies exactly this law against a given
scalar table ``phi``.  The law is consistent precisely when ``phi``
satisfies the 2-cocycle identity: :func:`free` objects obey it for a
cocycle and visibly break it otherwise.

:func:`hom_space` computes the maps commuting with the twisted action (the
scalar twists cancel between source and target), :func:`retwist` moves an
object between cohomologous twists, and :func:`twisted_algebra` builds the
finite-dimensional algebra of ``phi``-twisted group-algebra-valued
functions whose modules these objects are.
"""

from __future__ import annotations

import itertools
from typing import Callable, Mapping, Sequence

import numpy as np

from .lattice import FiniteAbelianGroup, GroupBilinearTable

Elt = tuple[int, ...]


class GSet:
    """Finite set with a right action of a finite abelian group.

    The action axioms are checked exhaustively on construction (the sets
    here are small), so downstream code can rely on them.
    """

    __slots__ = ("group", "points", "_act")

    def __init__(self, group: FiniteAbelianGroup, points: Sequence,
                 act: Callable):
        points = tuple(points)
        if len(set(points)) != len(points):
            raise ValueError("points must be distinct")
        if not points:
            raise ValueError("a G-set needs at least one point")
        self.group = group
        self.points = points
        self._act = act
        pts = set(points)
        for s in points:
            if act(s, group.zero()) != s:
                raise ValueError(f"identity does not fix {s}")
        for s in points:
            for g1 in group.elements():
                mid = act(s, g1)
                if mid not in pts:
                    raise ValueError(f"action leaves the point set at {s}.{g1}")
                for g2 in group.elements():
                    if act(mid, g2) != act(s, group.add(g1, g2)):
                        raise ValueError(
                            f"action is not associative at ({s}, {g1}, {g2})")

    def act(self, s, g):
        return self._act(s, g)

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup, points: Sequence = ("*",)) -> "GSet":
        return cls(group, points, lambda s, g: s)

    @classmethod
    def regular(cls, group: FiniteAbelianGroup) -> "GSet":
        return cls(group, tuple(group.elements()),
                   lambda s, g: group.add(s, g))

    def __repr__(self) -> str:
        return f"GSet({self.group!r}, {len(self.points)} points)"


class GroupCocycleTable:
    """Scalar-valued 2-cochain on a finite abelian group, as a full table."""

    __slots__ = ("group", "table")

    def __init__(self, group: FiniteAbelianGroup, table: Mapping):
        self.group = group
        full = {}
        for g1 in group.elements():
            for g2 in group.elements():
                try:
                    v = complex(table[(g1, g2)])
                except KeyError:
                    raise ValueError(f"table is missing the pair ({g1}, {g2})") \
                        from None
                if v == 0:
                    raise ValueError(f"table vanishes at ({g1}, {g2})")
                full[(g1, g2)] = v
        self.table = full

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup) -> "GroupCocycleTable":
        return cls(group, {(g1, g2): 1.0 for g1 in group.elements()
                           for g2 in group.elements()})

    @classmethod
    def from_bilinear(cls, bil: GroupBilinearTable) -> "GroupCocycleTable":
        group = bil.group
        return cls(group, {(g1, g2): bil(g1, g2).embed()
                           for g1 in group.elements()
                           for g2 in group.elements()})

    def __call__(self, g1, g2) -> complex:
        return self.table[(self.group.reduce(g1), self.group.reduce(g2))]

    def check(self, tol: float = 1e-9):
        """Test the 2-cocycle identity on every triple.

        Returns ``(True, None)`` or ``(False, (g1, g2, g3))`` for the first
        violating triple.
        """
        G = self.group
        for g1, g2, g3 in itertools.product(G.elements(), repeat=3):
            lhs = self(g1, g2) * self(G.add(g1, g2), g3)
            rhs = self(g1, G.add(g2, g3)) * self(g2, g3)
            if abs(lhs - rhs) > tol:
                return False, (g1, g2, g3)
        return True, None

    def twisted_by(self, alpha: Mapping) -> "GroupCocycleTable":
        """Multiply by the coboundary of the scalar 1-cochain ``alpha``:
        ``phi'(g1, g2) = phi(g1, g2) alpha(g1) alpha(g2) / alpha(g1+g2)``."""
        G = self.group
        return GroupCocycleTable(
            G, {(g1, g2): self(g1, g2) * alpha[g1] * alpha[g2]
                / alpha[G.add(g1, g2)]
                for g1 in G.elements() for g2 in G.elements()})

    def inverse(self) -> "GroupCocycleTable":
        return GroupCocycleTable(self.group,
                                 {k: 1.0 / v for k, v in self.table.items()})

    def opposite(self) -> "GroupCocycleTable":
        return GroupCocycleTable(self.group,
                                 {(g2, g1): v
                                  for (g1, g2), v in self.table.items()})

    def is_symmetric(self, tol: float = 1e-9) -> bool:
        return all(abs(self(g1, g2) - self(g2, g1)) <= tol
                   for g1 in self.group.elements()
                   for g2 in self.group.elements())


class EquivariantObject:
    """Graded vector spaces over a G-set with twisted transport maps.

    ``dims[s]`` is the fiber dimension at the point ``s`` and
    ``rho[g][s]`` the transport matrix from the fiber at ``s`` to the fiber
    at ``s.g``.  Which scalar law the transports satisfy is *not* fixed
    here; pass the object to :func:`check_linearization` with a candidate
    table.
    """

    __slots__ = ("gset", "dims", "rho")

    def __init__(self, gset: GSet, dims: Mapping, rho: Mapping):
        self.gset = gset
        self.dims = {s: int(dims[s]) for s in gset.points}
        if any(d < 0 for d in self.dims.values()):
            raise ValueError("fiber dimensions must be nonnegative")
        store = {}
        for g in gset.group.elements():
            try:
                per_point = rho[g]
            except KeyError:
                raise ValueError(f"transport missing for group element {g}") \
                    from None
            mats = {}
            for s in gset.points:
                m = np.asarray(per_point[s], dtype=complex)
                target = gset.act(s, g)
                want = (self.dims[target], self.dims[s])
                if m.shape != want:
                    raise ValueError(
                        f"transport for ({g}, {s}) has shape {m.shape}, "
                        f"expected {want}")
                mats[s] = m
            store[g] = mats
        self.rho = store

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.gset.group

    def matrix(self, g, s) -> np.ndarray:
        return self.rho[self.group.reduce(g)][s]

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def conjugate(self, T: Mapping) -> "EquivariantObject":
        """Change basis in every fiber: ``rho'_g[s] = T[s.g] rho_g[s] T[s]^-1``.

        Produces an isomorphic object satisfying the same scalar law.
        """
        inv = {s: np.linalg.inv(np.asarray(T[s], dtype=complex))
               for s in self.gset.points}
        rho = {g: {s: np.asarray(T[self.gset.act(s, g)], dtype=complex)
                   @ self.rho[g][s] @ inv[s]
                   for s in self.gset.points}
               for g in self.group.elements()}
        return EquivariantObject(self.gset, self.dims, rho)

    def __repr__(self) -> str:
        return (f"EquivariantObject(dims={self.dims}, "
                f"|G|={self.group.size})")


class LinearizationReport:
    """Outcome of a transport-law check: overall verdict, worst deviation,
    and the first violating ``(g1, g2, s)`` triple if any."""

    __slots__ = ("ok", "max_dev", "witness")

    def __init__(self, ok: bool, max_dev: float, witness):
        self.ok = ok
        self.max_dev = max_dev
        self.witness = witness

    def __iter__(self):
        return iter((self.ok, self.max_dev, self.witness))

    def __repr__(self) -> str:
        return (f"LinearizationReport(ok={self.ok}, max_dev={self.max_dev:.3g},"
                f" witness={self.witness})")


def check_linearization(obj: EquivariantObject, phi,
                        tol: float = 1e-9) -> LinearizationReport:
    """Verify ``rho_{g2}[s.g1] rho_{g1}[s] == phi(g1,g2) rho_{g1+g2}[s]``
    entrywise within ``tol`` for all group pairs and points."""
    G = obj.group
    gset = obj.gset
    worst = 0.0
    witness = None
    for g1 in G.elements():
        for g2 in G.elements():
            g12 = G.add(g1, g2)
            scale = phi(g1, g2) if callable(phi) else phi[(g1, g2)]
            for s in gset.points:
                lhs = obj.matrix(g2, gset.act(s, g1)) @ obj.matrix(g1, s)
                rhs = scale * obj.matrix(g12, s)
                dev = float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0
                if dev > worst:
                    worst = dev
                    if dev > tol and witness is None:
                        witness = (g1, g2, s)
    return LinearizationReport(witness is None and worst <= tol, worst, witness)


def forget(obj: EquivariantObject) -> dict:
    """Underlying graded dimensions, transport data dropped."""
    return dict(obj.dims)


def free(dims: Mapping, phi, gset: GSet) -> EquivariantObject:
    """Induce a twisted-equivariant object from a bare graded space.

    The fiber at ``s`` is the direct sum over group elements ``g'`` of the
    input space at ``s.g'``; the transport for ``g`` sends the summand
    ``g + g'`` of the source identically onto the summand ``g'`` of the
    target, scaled by ``phi(g, g')``.  The transport law for the result
    holds for a given table exactly when that table is a 2-cocycle, which
    makes this both the basic supply of examples and a detector of
    non-cocycles.
    """
    G = gset.group
    order = list(G.elements())
    pos = {g: i for i, g in enumerate(order)}
    base = {s: int(dims.get(s, 0)) for s in gset.points}
    offsets = {}
    total = {}
    for s in gset.points:
        offs = []
        run = 0
        for gp in order:
            offs.append(run)
            run += base[gset.act(s, gp)]
        offsets[s] = offs
        total[s] = run
    rho = {}
    for g in G.elements():
        mats = {}
        for s in gset.points:
            t = gset.act(s, g)
            m = np.zeros((total[t], total[s]), dtype=complex)
            for gp in order:
                d = base[gset.act(t, gp)]
                if not d:
                    continue
                src = G.add(g, gp)
                scale = phi(g, gp) if callable(phi) else phi[(g, gp)]
                r0 = offsets[t][pos[gp]]
                c0 = offsets[s][pos[src]]
                m[r0:r0 + d, c0:c0 + d] = scale * np.eye(d)
            mats[s] = m
        rho[g] = mats
    return EquivariantObject(gset, total, rho)


def _null_space_rows(blocks: list, nvars: int, tol: float) -> list:
    """Orthonormal null-space vectors of a stacked linear system; an empty
    system means every vector qualifies."""
    if not blocks:
        return [row for row in np.eye(nvars, dtype=complex)]
    system = np.vstack(blocks)
    wide = system.shape[0] < system.shape[1]
    try:
        _, svals, vh = np.linalg.svd(system, full_matrices=wide)
    except np.linalg.LinAlgError:
        # gesdd occasionally fails to converge on tall stacked systems;
        # fall back to the Hermitian spectrum of the Gram matrix.  Squaring
        # costs half the precision, so zero eigenvalues only come out at
        # the eigh noise floor and the cut must sit above it.
        gram = system.conj().T @ system
        evals, evecs = np.linalg.eigh(gram)
        lmax = max(float(evals[-1]), 1.0)
        floor = np.finfo(float).eps * max(gram.shape) * lmax
        cut = max((tol ** 2) * lmax, floor)
        return [evecs[:, i] for i in range(evecs.shape[1])
                if evals[i] <= cut]
    scale = max(1.0, float(svals[0]) if len(svals) else 1.0)
    return [vh[i].conj() for i in range(vh.shape[0])
            if i >= len(svals) or svals[i] <= tol * scale]


def hom_space(a: EquivariantObject, b: EquivariantObject,
              tol: float = 1e-9) -> list[dict]:
    """Basis of the maps commuting with the twisted transports.

    Solves ``chi[s.g] rho^a_g[s] == rho^b_g[s] chi[s]`` for families of
    matrices ``chi[s]: fiber_a(s) -> fiber_b(s)``; any common scalar twist
    cancels between the two sides, so this is meaningful whenever ``a`` and
    ``b`` satisfy the same law.  Returns Frobenius-orthonormal basis
    families computed from an SVD null space.
    """
    if a.gset is not b.gset:
        same = (a.gset.points == b.gset.points and a.group == b.group
                and all(a.gset.act(s, g) == b.gset.act(s, g)
                        for s in a.gset.points
                        for g in a.group.elements()))
        if not same:
            raise ValueError("objects live on different G-sets")
    gset = a.gset
    G = a.group
    points = gset.points
    sizes = {s: b.dims[s] * a.dims[s] for s in points}
    offsets = {}
    run = 0
    for s in points:
        offsets[s] = run
        run += sizes[s]
    nvars = run
    if nvars == 0:
        return []
    blocks = []
    # constraints for the generators imply them for every element: compose
    # the law along a generator decomposition and the common twist cancels
    for g in G.generators():
        for s in points:
            t = gset.act(s, g)
            ra = a.matrix(g, s)
            rb = b.matrix(g, s)
            rows = b.dims[t] * a.dims[s]
            if rows == 0:
                continue
            eq = np.zeros((rows, nvars), dtype=complex)
            # chi[t] @ ra  ->  (I kron ra^T) vec(chi[t])   (row-major vec)
            left = np.kron(np.eye(b.dims[t]), ra.T)
            eq[:, offsets[t]:offsets[t] + sizes[t]] += left
            # rb @ chi[s]  ->  (rb kron I) vec(chi[s])
            right = np.kron(rb, np.eye(a.dims[s]))
            eq[:, offsets[s]:offsets[s] + sizes[s]] -= right
            blocks.append(eq)
    null = _null_space_rows(blocks, nvars, tol)
    out = []
    for vec in null:
        fam = {}
        for s in points:
            chunk = vec[offsets[s]:offsets[s] + sizes[s]]
            fam[s] = chunk.reshape(b.dims[s], a.dims[s])
        out.append(fam)
    return out


def hom_dim(a: EquivariantObject, b: EquivariantObject,
            tol: float = 1e-9) -> int:
    return len(hom_space(a, b, tol))


def retwist(obj: EquivariantObject, alpha: Mapping) -> EquivariantObject:
    """Rescale each transport by a scalar of its group element:
    ``rho'_g = alpha(g) rho_g``.

    If ``obj`` satisfies the law for ``phi`` then the result satisfies it
    for ``phi.twisted_by(alpha)``; objects of cohomologous twists are
    exactly the retwists of each other.
    """
    rho = {g: {s: alpha[g] * obj.rho[g][s] for s in obj.gset.points}
           for g in obj.group.elements()}
    return EquivariantObject(obj.gset, obj.dims, rho)


# ---------------------------------------------------------------------------
# the twisted function algebra and its modules

class TwistedAlgebra:
    """Functions on a finite set valued in a twisted group algebra.

    Basis vectors are pairs ``(s, g)``; the product is pointwise in ``s``
    and ``phi``-twisted in ``g``:

        e_(s,g1) e_(s',g2) = 0 if s != s' else phi(g1,g2) e_(s, g1+g2).

    With the trivial twist this is the commutative algebra of functions on
    ``S x G``; a nondegenerate twist at a point gives a matrix algebra.
    """

    __slots__ = ("points", "group", "phi", "basis", "_index")

    def __init__(self, points: Sequence, group: FiniteAbelianGroup,
                 phi: GroupCocycleTable):
        if phi.group != group:
            raise ValueError("twist lives on a different group")
        self.points = tuple(points)
        self.group = group
        self.phi = phi
        self.basis = [(s, g) for s in self.points for g in group.elements()]
        self._index = {k: i for i, k in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def product_on_basis(self, k1, k2):
        """``(coefficient, basis key)`` of the product, or ``None`` when the
        points differ."""
        (s1, g1), (s2, g2) = k1, k2
        if s1 != s2:
            return None
        return self.phi(g1, g2), (s1, self.group.add(g1, g2))

    def multiply(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for k1, c1 in x.items():
            for k2, c2 in y.items():
                hit = self.product_on_basis(k1, k2)
                if hit is None:
                    continue
                coeff, key = hit
                out[key] = out.get(key, 0j) + coeff * c1 * c2
        return {k: v for k, v in out.items() if v != 0}

    def left_regular_matrix(self, key) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for k2 in self.basis:
            hit = self.product_on_basis(key, k2)
            if hit is None:
                continue
            coeff, target = hit
            m[self._index[target], self._index[k2]] = coeff
        return m

    def is_commutative(self, tol: float = 1e-9) -> bool:
        return self.phi.is_symmetric(tol)

    def center_dim(self, tol: float = 1e-9) -> int:
        """Dimension of the center.

        An element written in coordinates over the basis is central exactly
        when its left regular matrix commutes with every basis one (the
        representation is faithful, the algebra being unital), so the count
        is the null-space dimension of the stacked commutator system.
        """
        mats = [self.left_regular_matrix(k) for k in self.basis]
        stacked = np.stack([m.reshape(-1) for m in mats], axis=1)
        comm = []
        for m in mats:
            comm.append((np.kron(np.eye(self.dim), m.T)
                         - np.kron(m, np.eye(self.dim))) @ stacked)
        total = np.vstack(comm)
        svals = np.linalg.svd(total, compute_uv=False)
        scale = max(1.0, float(svals[0]) if len(svals) else 1.0)
        return sum(1 for i in range(total.shape[1])
                   if i >= len(svals) or svals[i] <= tol * scale)

    def trace_form_rank(self, tol: float = 1e-9) -> int:
        """Rank of the trace form of the left regular representation; the
        algebra is semisimple exactly when this is the full dimension."""
        mats = [self.left_regular_matrix(k) for k in self.basis]
        gram = np.array([[np.trace(m1 @ m2) for m2 in mats] for m1 in mats])
        svals = np.linalg.svd(gram, compute_uv=False)
        scale = max(1.0, float(svals[0]) if len(svals) else 1.0)
        return int(sum(sv > tol * scale for sv in svals))

    def __repr__(self) -> str:
        return (f"TwistedAlgebra({len(self.points)} points, "
                f"G={list(self.group.factors)}, dim={self.dim})")


def twisted_algebra(points: Sequence, phi: GroupCocycleTable) -> TwistedAlgebra:
    return TwistedAlgebra(points, phi.group, phi)


def to_module(obj: EquivariantObject) -> dict:
    """Collect a trivial-action object into per-point matrix families.

    The family at each point is a (right) module over the twisted algebra
    on that point set; requires the underlying action to be trivial.
    """
    for s in obj.gset.points:
        for g in obj.group.elements():
            if obj.gset.act(s, g) != s:
                raise ValueError("to_module needs a trivial underlying action")
    return {s: {g: obj.matrix(g, s).copy() for g in obj.group.elements()}
            for s in obj.gset.points}


def from_module(group: FiniteAbelianGroup, data: Mapping) -> EquivariantObject:
    """Rebuild a trivial-action object from per-point matrix families."""
    points = tuple(sorted(data))
    gset = GSet.trivial(group, points)
    dims = {}
    for s in points:
        mats = data[s]
        dim = None
        for g in group.elements():
            m = np.asarray(mats[g])
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError("module matrices must be square")
            if dim is None:
                dim = m.shape[0]
            elif m.shape[0] != dim:
                raise ValueError("inconsistent module dimensions")
        dims[s] = dim if dim is not None else 0
    rho = {g: {s: np.asarray(data[s][g], dtype=complex) for s in points}
           for g in group.elements()}
    return EquivariantObject(gset, dims, rho)
