"""Finite Fourier transforms between graded spaces and group representations.

The coordinate side is a finite abelian group ``B``; its dual is presented
on the same tuples through :meth:`FiniteAbelianGroup.pairing`.  The plain
transform :func:`fm_ab` turns a vector space graded by dual points into a
representation of ``B`` acting by characters, and :func:`fm_ab_inverse`
recovers the grading from character eigenspaces.  Translating the grading
corresponds to twisting the representation by a character; the comparison
isomorphism is an exact block permutation (:func:`fm_ab_equivariance_iso`).

The deformed version adds a subgroup of the dual acting by translation and
a bilinear twist ``lam`` on it.  Twisted-equivariant objects on the dual
(:class:`~nctorus.equivariant.EquivariantObject` over the translation
G-set, transport law ``lam``) correspond to representations of ``B``
equipped with twisted translation operators (:class:`ModuleOnXLambda`).
:func:`fm_lambda` realizes the correspondence by tensoring with a
:class:`DeformedKernel` and passing to invariants of the resulting honest
action; :func:`fm_lambda_inverse` goes back through character eigenblocks,
and :func:`verify_factorization` checks the transform against the
composite of the plain transform with the comparison isomorphisms.

:func:`star_on_points` is the function-algebra shadow of the same twist: a
double sum over translates weighted by the inverse of a nondegenerate
bilinear form, which diagonalizes into a dual-side twisted product on
Fourier components (:func:`dual_side_product`).
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .cocycle import Phase
from .equivariant import (
    EquivariantObject,
    GroupCocycleTable,
    GSet,
    LinearizationReport,
    _null_space_rows,
    check_linearization,
    free,
)
from .lattice import DualPairData, FiniteAbelianGroup, GroupBilinearTable


# ---------------------------------------------------------------------------
# the untwisted transform

class BRepresentation:
    """Finite-dimensional representation of a finite abelian group ``B``.

    Stores one matrix per group element; :meth:`check` verifies that they
    actually multiply like the group.
    """

    __slots__ = ("group", "dim", "pi")

    def __init__(self, group: FiniteAbelianGroup, pi: Mapping):
        self.group = group
        mats = {}
        dim = None
        for a in group.elements():
            try:
                m = np.asarray(pi[a], dtype=complex)
            except KeyError:
                raise ValueError(f"matrix missing for {a}") from None
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError("representation matrices must be square")
            if dim is None:
                dim = m.shape[0]
            elif m.shape[0] != dim:
                raise ValueError("representation matrices differ in size")
            mats[a] = m
        self.dim = dim if dim is not None else 0
        self.pi = mats

    def matrix(self, a) -> np.ndarray:
        return self.pi[self.group.reduce(a)]

    def check(self, tol: float = 1e-9):
        """``(ok, max_dev, witness)`` for the homomorphism property and the
        identity at zero."""
        worst = float(np.max(np.abs(self.matrix(self.group.zero())
                                    - np.eye(self.dim)))) if self.dim else 0.0
        witness = None if worst <= tol else ("zero",)
        for a in self.group.elements():
            for b in self.group.elements():
                dev = float(np.max(np.abs(
                    self.matrix(a) @ self.matrix(b)
                    - self.matrix(self.group.add(a, b))))) if self.dim else 0.0
                if dev > worst:
                    worst = dev
                    if dev > tol and witness is None:
                        witness = (a, b)
        return witness is None and worst <= tol, worst, witness

    def conjugate(self, T) -> "BRepresentation":
        T = np.asarray(T, dtype=complex)
        Tinv = np.linalg.inv(T)
        return BRepresentation(
            self.group, {a: T @ m @ Tinv for a, m in self.pi.items()})

    def __repr__(self) -> str:
        return f"BRepresentation(B={list(self.group.factors)}, dim={self.dim})"


def _graded_layout(dims: Mapping, B: FiniteAbelianGroup):
    """Canonical block order for a dual-graded space: group element order,
    returning ``[(beta, offset, dim), ...]`` and the total dimension."""
    layout = []
    run = 0
    for beta in B.elements():
        d = int(dims.get(beta, 0))
        if d < 0:
            raise ValueError("graded dimensions must be nonnegative")
        layout.append((beta, run, d))
        run += d
    return layout, run


def fm_ab_phase_table(dims: Mapping, B: FiniteAbelianGroup):
    """Exact diagonal of the transform: for each group element the list of
    pairing phases down the canonical block basis."""
    layout, total = _graded_layout(dims, B)
    table = {}
    for a in B.elements():
        diag = []
        for beta, _, d in layout:
            diag.extend([B.pairing(beta, a)] * d)
        table[a] = diag
    return layout, table


def fm_ab(dims: Mapping, B: FiniteAbelianGroup) -> BRepresentation:
    """Send a space graded by dual points to the representation of ``B``
    where ``a`` acts on the block of ``beta`` by the character value
    ``<beta, a>``."""
    _, table = fm_ab_phase_table(dims, B)
    pi = {a: np.diag([p.embed() for p in diag]).astype(complex)
          if diag else np.zeros((0, 0), dtype=complex)
          for a, diag in table.items()}
    return BRepresentation(B, pi)


def character_projector(rep: BRepresentation, beta) -> np.ndarray:
    """Averaged projector onto the ``<beta, .>``-eigenspace."""
    B = rep.group
    acc = np.zeros((rep.dim, rep.dim), dtype=complex)
    for a in B.elements():
        acc += (-B.pairing(beta, a)).embed() * rep.matrix(a)
    return acc / B.size


def fm_ab_inverse(rep: BRepresentation, tol: float = 1e-9) -> dict:
    """Recover the graded dimensions from character eigenspaces.

    Raises ``ValueError`` when the eigenspace ranks do not exhaust the
    representation (it was not a true character decomposition).
    """
    B = rep.group
    dims = {}
    total = 0
    for beta in B.elements():
        proj = character_projector(rep, beta)
        if rep.dim and float(np.max(np.abs(proj @ proj - proj))) > tol * 10:
            raise ValueError(f"averaging at {beta} is not a projector; "
                             "input is not a representation")
        r = int(round(float(np.trace(proj).real)))
        if abs(np.trace(proj).real - r) > 1e-6 or abs(np.trace(proj).imag) > 1e-6:
            raise ValueError(f"non-integral eigenspace rank at {beta}")
        dims[beta] = r
        total += r
    if total != rep.dim:
        raise ValueError("character eigenspaces do not span; "
                         "input is not a representation by characters")
    return {b: d for b, d in dims.items() if d}


def dft_matrix(B: FiniteAbelianGroup) -> np.ndarray:
    """Unitary character table of ``B`` in element order."""
    elts = list(B.elements())
    n = len(elts)
    F = np.array([[B.pairing(b, a).embed() for a in elts] for b in elts])
    return F / np.sqrt(n)


def translate_graded(dims: Mapping, yhat, B: FiniteAbelianGroup) -> dict:
    """Shift a dual-graded dimension profile: the new block at ``beta``
    is the old one at ``beta - yhat``."""
    yhat = B.reduce(yhat)
    return {beta: int(dims.get(B.add(beta, B.neg(yhat)), 0))
            for beta in B.elements()}


def character_twist(rep: BRepresentation, yhat) -> BRepresentation:
    """Multiply the action of each ``a`` by the character value ``<yhat, a>``."""
    B = rep.group
    return BRepresentation(
        B, {a: B.pairing(yhat, a).embed() * rep.matrix(a)
            for a in B.elements()})


def fm_ab_equivariance_iso(dims: Mapping, yhat, B: FiniteAbelianGroup) -> np.ndarray:
    """Permutation matrix comparing the transform of a translated grading
    with the character-twisted transform of the original.

    Maps the canonical basis of ``fm_ab(translate_graded(dims, yhat))`` to
    that of ``fm_ab(dims)``: the block sitting at ``beta`` on the
    translated side is the original block of ``beta - yhat`` and goes
    there identically.
    """
    yhat = B.reduce(yhat)
    shifted = translate_graded(dims, yhat, B)
    src_layout, total_src = _graded_layout(shifted, B)
    dst_layout, total_dst = _graded_layout(dims, B)
    dst_offset = {beta: off for beta, off, _ in dst_layout}
    dst_dim = {beta: d for beta, _, d in dst_layout}
    if total_src != total_dst:
        raise ValueError("translated layout changed total dimension")
    E = np.zeros((total_dst, total_src))
    for beta, off, d in src_layout:
        if not d:
            continue
        target = B.add(beta, B.neg(yhat))
        if dst_dim[target] != d:
            raise ValueError("translated layout is inconsistent")
        t0 = dst_offset[target]
        E[t0:t0 + d, off:off + d] = np.eye(d)
    return E


def check_fm_ab_equivariance(dims: Mapping, yhat, B: FiniteAbelianGroup) -> bool:
    """Exact phase-level intertwining law for the comparison permutation.

    Moving basis vectors along the permutation, the diagonal phase of the
    translated transform must equal the twist phase plus the original
    diagonal phase -- compared as exact rationals, not floats.
    """
    yhat = B.reduce(yhat)
    src_layout, table_src = fm_ab_phase_table(translate_graded(dims, yhat, B), B)
    dst_layout, table_dst = fm_ab_phase_table(dims, B)
    dst_offset = {beta: off for beta, off, _ in dst_layout}
    for a in B.elements():
        twist = B.pairing(yhat, a)
        src_diag = table_src[a]
        dst_diag = table_dst[a]
        for beta, off, d in src_layout:
            target = B.add(beta, B.neg(yhat))
            t0 = dst_offset[target]
            for p in range(d):
                if src_diag[off + p] != twist + dst_diag[t0 + p]:
                    return False
    return True


# ---------------------------------------------------------------------------
# the twisted model

class TorusModel:
    """Finite fiber data: coordinate group ``B``, a subgroup of the dual
    acting by translation, and a bilinear twist on it.

    ``embed`` is an integer matrix taking coordinates on ``Khat`` to dual
    tuples; it must be injective.  ``lam`` defaults to the trivial form.
    """

    __slots__ = ("B", "Khat", "embed", "lam", "phi", "gset")

    def __init__(self, B: FiniteAbelianGroup, Khat: FiniteAbelianGroup,
                 embed, lam: GroupBilinearTable = None):
        embed = [[int(x) for x in row] for row in embed]
        if len(embed) != B.rank or any(len(row) != Khat.rank for row in embed):
            raise ValueError("embedding matrix has the wrong shape")
        self.B = B
        self.Khat = Khat
        self.embed = embed
        if lam is None:
            lam = GroupBilinearTable.trivial(Khat)
        if lam.group != Khat:
            raise ValueError("twist lives on a different group")
        self.lam = lam
        self.phi = GroupCocycleTable.from_bilinear(lam)
        for j, dj in enumerate(Khat.factors):
            rel = B.reduce(tuple(dj * self.embed[i][j] for i in range(B.rank)))
            if rel != B.zero():
                raise ValueError(
                    f"embedding does not respect the order of generator {j}")
        for k in Khat.elements():
            if self.iota(k) == B.zero() and k != Khat.zero():
                raise ValueError(f"embedding is not injective: {k} maps to 0")
        self.gset = GSet(Khat, tuple(B.elements()),
                         lambda beta, k: B.add(beta, self.iota(k)))

    def iota(self, k):
        """Image of a ``Khat`` element among the dual tuples."""
        k = self.Khat.reduce(k)
        return self.B.reduce(tuple(
            sum(self.embed[i][j] * k[j] for j in range(self.Khat.rank))
            for i in range(self.B.rank)))

    def character(self, k, a) -> Phase:
        """Pairing phase ``<iota(k), a>`` of the embedded element with ``a``."""
        return self.B.pairing(self.iota(k), a)

    def __repr__(self) -> str:
        return (f"TorusModel(B={list(self.B.factors)}, "
                f"Khat={list(self.Khat.factors)})")


def free_sheaf(model: TorusModel, base_dims: Mapping) -> EquivariantObject:
    """Induced twisted-equivariant object over the dual points."""
    return free(base_dims, model.phi, model.gset)


def random_sheaf(model: TorusModel, rng, max_dim: int = 2) -> EquivariantObject:
    """Free object on a random grading, conjugated by random invertible
    fiberwise maps: a generic object satisfying the transport law."""
    dims = {s: int(rng.integers(0, max_dim + 1)) for s in model.gset.points}
    if not any(dims.values()):
        dims[model.gset.points[0]] = 1
    obj = free_sheaf(model, dims)
    T = {}
    for s in model.gset.points:
        n = obj.dims[s]
        q, _ = np.linalg.qr(rng.normal(size=(n, n))
                            + 1j * rng.normal(size=(n, n)))
        T[s] = q @ np.diag(0.5 + rng.random(n))
    return obj.conjugate(T)


class DeformedKernel:
    """The ``|Khat|``-dimensional space mediating the twisted transform.

    Basis vectors ``e_j`` are indexed by the translation subgroup.  The
    kernel action ``left_matrix`` sends ``e_j`` to ``lam(j, k) e_{j-k}``
    and composes up to the inverse twist, which is exactly what cancels
    the twist of an equivariant object when the two are tensored.  The
    commuting ``right_matrix`` sends ``e_j`` to
    ``lam(k, k)^-1 lam(k, j)^-1 e_{j+k}``; its normalization is chosen so
    that the operators it induces on invariants satisfy the module
    relations and match the plain transform without any residual scalar.
    """

    __slots__ = ("model", "order", "index")

    def __init__(self, model: TorusModel):
        self.model = model
        self.order = list(model.Khat.elements())
        self.index = {j: i for i, j in enumerate(self.order)}

    @property
    def size(self) -> int:
        return len(self.order)

    def left_matrix(self, k) -> np.ndarray:
        K = self.model.Khat
        lam = self.model.lam
        k = K.reduce(k)
        m = np.zeros((self.size, self.size), dtype=complex)
        for j in self.order:
            m[self.index[K.add(j, K.neg(k))], self.index[j]] = lam(j, k).embed()
        return m

    def right_matrix(self, k) -> np.ndarray:
        K = self.model.Khat
        lam = self.model.lam
        k = K.reduce(k)
        m = np.zeros((self.size, self.size), dtype=complex)
        for j in self.order:
            scale = (-(lam(k, k) + lam(k, j))).embed()
            m[self.index[K.add(j, k)], self.index[j]] = scale
        return m

    def check(self, tol: float = 1e-12) -> bool:
        """Left action composes up to the inverse twist, right action up to
        the twist itself, and the two commute."""
        K = self.model.Khat
        lam = self.model.lam
        for k1 in K.elements():
            L1, R1 = self.left_matrix(k1), self.right_matrix(k1)
            for k2 in K.elements():
                L2, R2 = self.left_matrix(k2), self.right_matrix(k2)
                ksum = K.add(k1, k2)
                lhs = L2 @ L1
                rhs = (-lam(k1, k2)).embed() * self.left_matrix(ksum)
                if np.max(np.abs(lhs - rhs)) > tol:
                    return False
                lhs = R2 @ R1
                rhs = lam(k1, k2).embed() * self.right_matrix(ksum)
                if np.max(np.abs(lhs - rhs)) > tol:
                    return False
                if np.max(np.abs(L1 @ R2 - R2 @ L1)) > tol:
                    return False
        return True


class ModuleOnXLambda:
    """Representation of ``B`` together with twisted translation operators.

    The operators ``n[k]`` satisfy ``n[k2] n[k1] = lam(k1, k2) n[k1+k2]``
    and exchange with the ``B``-action against the character of the
    embedded element: ``n[k] pi(a) = <iota(k), a>^-1 pi(a) n[k]``.
    """

    __slots__ = ("model", "dim", "pi", "n")

    def __init__(self, model: TorusModel, pi: Mapping, n: Mapping):
        self.model = model
        rep = BRepresentation(model.B, pi)
        self.pi = rep.pi
        self.dim = rep.dim
        mats = {}
        for k in model.Khat.elements():
            try:
                m = np.asarray(n[k], dtype=complex)
            except KeyError:
                raise ValueError(f"translation operator missing for {k}") \
                    from None
            if m.shape != (self.dim, self.dim):
                raise ValueError("translation operators must match the "
                                 "representation dimension")
            mats[k] = m
        self.n = mats

    def rep(self) -> BRepresentation:
        return BRepresentation(self.model.B, self.pi)

    def pi_matrix(self, a) -> np.ndarray:
        return self.pi[self.model.B.reduce(a)]

    def n_matrix(self, k) -> np.ndarray:
        return self.n[self.model.Khat.reduce(k)]

    def check(self, tol: float = 1e-9) -> LinearizationReport:
        """Verify all three families of relations; the witness labels which
        one broke first."""
        model = self.model
        worst = 0.0
        witness = None

        def note(dev, tag):
            nonlocal worst, witness
            if dev > worst:
                worst = dev
                if dev > tol and witness is None:
                    witness = tag

        ok_rep, dev_rep, wit_rep = self.rep().check(tol)
        note(dev_rep, ("representation", wit_rep))
        for k1 in model.Khat.elements():
            for k2 in model.Khat.elements():
                lhs = self.n_matrix(k2) @ self.n_matrix(k1)
                rhs = model.lam(k1, k2).embed() \
                    * self.n_matrix(model.Khat.add(k1, k2))
                note(float(np.max(np.abs(lhs - rhs))) if self.dim else 0.0,
                     ("twisted composition", k1, k2))
        for k in model.Khat.elements():
            for a in model.B.elements():
                lhs = self.n_matrix(k) @ self.pi_matrix(a)
                rhs = (-model.character(k, a)).embed() \
                    * self.pi_matrix(a) @ self.n_matrix(k)
                note(float(np.max(np.abs(lhs - rhs))) if self.dim else 0.0,
                     ("exchange", k, a))
        return LinearizationReport(witness is None and worst <= tol,
                                   worst, witness)

    def conjugate(self, T) -> "ModuleOnXLambda":
        T = np.asarray(T, dtype=complex)
        Tinv = np.linalg.inv(T)
        return ModuleOnXLambda(
            self.model,
            {a: T @ m @ Tinv for a, m in self.pi.items()},
            {k: T @ m @ Tinv for k, m in self.n.items()})

    def __repr__(self) -> str:
        return f"ModuleOnXLambda({self.model!r}, dim={self.dim})"


# ---------------------------------------------------------------------------
# the deformed transform

def _sheaf_layout(model: TorusModel, sheaf: EquivariantObject):
    if sheaf.gset.points != model.gset.points or sheaf.group != model.Khat:
        raise ValueError("object does not live on this model's dual points")
    layout = []
    run = 0
    for beta in model.gset.points:
        d = sheaf.dims[beta]
        layout.append((beta, run, d))
        run += d
    return layout, run


def _big_operators(model: TorusModel, sheaf: EquivariantObject):
    """Tensor the object with the deformed kernel.

    Returns the honest action ``T(k)``, the commuting right operators,
    and the diagonal ``B``-action graded by the sum of the two gradings.
    """
    kernel = DeformedKernel(model)
    layout, total = _sheaf_layout(model, sheaf)
    nK = kernel.size
    big = total * nK
    offset = {beta: off for beta, off, _ in layout}
    T = {}
    R = {}
    for k in model.Khat.elements():
        tau = kernel.left_matrix(k)
        mat = np.zeros((big, big), dtype=complex)
        for beta, off, d in layout:
            if not d:
                continue
            u = sheaf.matrix(k, beta)
            t0 = offset[model.gset.act(beta, k)]
            mat[t0 * nK:(t0 + u.shape[0]) * nK, off * nK:(off + d) * nK] = \
                np.kron(u, tau)
        T[k] = mat
        R[k] = np.kron(np.eye(total), kernel.right_matrix(k))
    Pi = {}
    for a in model.B.elements():
        diag = np.zeros(big, dtype=complex)
        for beta, off, d in layout:
            for j_pos, j in enumerate(kernel.order):
                grade = model.B.add(beta, model.iota(j))
                val = model.B.pairing(grade, a).embed()
                for p in range(d):
                    diag[(off + p) * nK + j_pos] = val
        Pi[a] = np.diag(diag)
    return kernel, layout, total, T, R, Pi


def _invariants_basis(T: Mapping, tol: float = 1e-9):
    mats = list(T.values())
    P = sum(mats) / len(mats)
    r = int(round(float(np.trace(P).real)))
    if r == 0:
        return P, np.zeros((P.shape[0], 0), dtype=complex)
    U, svals, _ = np.linalg.svd(P)
    if r < len(svals) and svals[r] > tol * max(1.0, svals[0]):
        raise ValueError("invariants projector has ambiguous rank")
    return P, U[:, :r]


def fm_lambda(model: TorusModel, sheaf: EquivariantObject,
              tol: float = 1e-9, validate: bool = True) -> ModuleOnXLambda:
    """Transform a twisted-equivariant object on the dual points into a
    module with twisted translations.

    The object is tensored with the deformed kernel; the combined
    translation action is honest, its invariants carry the diagonal
    ``B``-action and the right kernel operators, and compressing to an
    orthonormal basis of the invariants yields the module.  The total
    dimension is preserved.
    """
    if validate:
        report = check_linearization(sheaf, model.phi, tol)
        if not report.ok:
            raise ValueError(
                f"object violates the transport law at {report.witness} "
                f"(deviation {report.max_dev:.3g})")
    _, _, total, T, R, Pi = _big_operators(model, sheaf)
    _, C = _invariants_basis(T, tol)
    if C.shape[1] != total:
        raise ValueError("invariants have unexpected dimension "
                         f"{C.shape[1]} != {total}")
    Ct = C.conj().T
    pi = {a: Ct @ Pi[a] @ C for a in model.B.elements()}
    n = {k: Ct @ R[k] @ C for k in model.Khat.elements()}
    return ModuleOnXLambda(model, pi, n)


def fm_lambda_inverse(model: TorusModel, module: ModuleOnXLambda,
                      tol: float = 1e-9) -> EquivariantObject:
    """Recover a twisted-equivariant object from a module: fibers are the
    character eigenspaces of the ``B``-action and the transports are the
    translation operators compressed between them."""
    rep = module.rep()
    bases = {}
    dims = {}
    total = 0
    for beta in model.gset.points:
        proj = character_projector(rep, beta)
        r = int(round(float(np.trace(proj).real)))
        U, svals, _ = np.linalg.svd(proj)
        if r < len(svals) and svals[r] > tol * max(1.0, svals[0] if len(svals) else 1.0):
            raise ValueError(f"ambiguous eigenspace at {beta}")
        bases[beta] = U[:, :r]
        dims[beta] = r
        total += r
    if total != module.dim:
        raise ValueError("character eigenspaces do not exhaust the module")
    rho = {}
    for k in model.Khat.elements():
        mats = {}
        nk = module.n_matrix(k)
        for beta in model.gset.points:
            target = model.gset.act(beta, k)
            mats[beta] = bases[target].conj().T @ nk @ bases[beta]
        rho[k] = mats
    return EquivariantObject(model.gset, dims, rho)


def _eigenspace_bases(module: ModuleOnXLambda, tol: float) -> dict:
    """Character projector and an orthonormal basis of its image, per
    character of the ``B``-action."""
    rep = module.rep()
    out = {}
    total = 0
    for beta in module.model.B.elements():
        proj = character_projector(rep, beta)
        r = int(round(float(np.trace(proj).real)))
        U, svals, _ = np.linalg.svd(proj)
        if r < len(svals) and svals[r] > tol * max(1.0, svals[0] if len(svals) else 1.0):
            raise ValueError(f"ambiguous eigenspace at {beta}")
        out[beta] = (proj, U[:, :r])
        total += r
    if total != module.dim:
        raise ValueError("character eigenspaces do not exhaust the module")
    return out


def module_hom_space(m1: ModuleOnXLambda, m2: ModuleOnXLambda,
                     tol: float = 1e-9) -> list:
    """Orthonormal basis of maps intertwining both the ``B``-action and
    the twisted translations.

    The ``B``-action splits either module into character eigenspaces and
    each translation shifts the character by the embedded element, so an
    intertwiner is block diagonal over characters; solving for the blocks
    keeps the null-space problem small.  Generator constraints suffice:
    every operator of either family is a nonzero multiple of a product of
    generator ones.
    """
    if m1.model is not m2.model and (
            m1.model.B != m2.model.B or m1.model.Khat != m2.model.Khat
            or m1.model.embed != m2.model.embed
            or m1.model.lam.omega != m2.model.lam.omega):
        raise ValueError("modules live over different models")
    d1, d2 = m1.dim, m2.dim
    if d1 == 0 or d2 == 0:
        return []
    model = m1.model
    B = model.B
    betas = list(B.elements())
    blocks1 = _eigenspace_bases(m1, tol)
    blocks2 = _eigenspace_bases(m2, tol)
    rk1 = {beta: blocks1[beta][1].shape[1] for beta in betas}
    rk2 = {beta: blocks2[beta][1].shape[1] for beta in betas}
    offs = {}
    nvars = 0
    for beta in betas:
        if rk1[beta] and rk2[beta]:
            offs[beta] = nvars
            nvars += rk1[beta] * rk2[beta]
    if nvars == 0:
        return []
    rows = []
    for k in model.Khat.generators():
        n1 = m1.n_matrix(k)
        n2 = m2.n_matrix(k)
        for beta in betas:
            shifted = B.add(beta, model.iota(k))
            neq = rk2[shifted] * rk1[beta]
            if neq == 0 or (beta not in offs and shifted not in offs):
                continue
            block = np.zeros((neq, nvars), dtype=complex)
            if beta in offs:
                N2 = blocks2[shifted][1].conj().T @ n2 @ blocks2[beta][1]
                o = offs[beta]
                block[:, o:o + rk2[beta] * rk1[beta]] += \
                    np.kron(N2, np.eye(rk1[beta]))
            if shifted in offs:
                N1 = blocks1[shifted][1].conj().T @ n1 @ blocks1[beta][1]
                o = offs[shifted]
                block[:, o:o + rk2[shifted] * rk1[shifted]] -= \
                    np.kron(np.eye(rk2[shifted]), N1.T)
            rows.append(block)
    maps = []
    for y in _null_space_rows(rows, nvars, tol):
        X = np.zeros((d2, d1), dtype=complex)
        for beta, o in offs.items():
            Y = y[o:o + rk2[beta] * rk1[beta]].reshape(rk2[beta], rk1[beta])
            proj1, W1 = blocks1[beta]
            X += blocks2[beta][1] @ Y @ (W1.conj().T @ proj1)
        maps.append(X)
    if not maps:
        return []
    # re-orthonormalize: the block coordinates are only isometric to the
    # Frobenius geometry when the eigenspace decompositions are orthogonal
    stacked = np.array([X.ravel() for X in maps])
    q, _ = np.linalg.qr(stacked.T)
    return [q[:, i].reshape(d2, d1) for i in range(q.shape[1])]


def module_hom_dim(m1: ModuleOnXLambda, m2: ModuleOnXLambda,
                   tol: float = 1e-9) -> int:
    return len(module_hom_space(m1, m2, tol))


def verify_factorization(model: TorusModel, sheaf: EquivariantObject,
                         tol: float = 1e-9) -> LinearizationReport:
    """Compare the deformed transform against the plain one.

    Path A embeds the graded space into the kernel-tensored space as
    invariants and applies the right kernel operators there.  Path B stays
    on the plain transform: apply the object's own transport blockwise,
    then the comparison permutation for the corresponding translation.
    With the kernel's normalization the two agree on the nose, as does the
    ``B``-action against the plain diagonal one.
    """
    layout, total = _sheaf_layout(model, sheaf)
    kernel, _, _, T, R, Pi = _big_operators(model, sheaf)
    nK = kernel.size
    big = total * nK
    P = sum(T.values()) / len(T)
    ins = np.zeros((big, total), dtype=complex)
    zero_pos = kernel.index[model.Khat.zero()]
    for i in range(total):
        ins[i * nK + zero_pos, i] = 1.0
    emb = P @ ins
    dims = {beta: d for beta, _, d in layout}
    worst = 0.0
    witness = None
    for k in model.Khat.elements():
        yhat = model.iota(k)
        # the blockwise transport is a degree-zero map into the grading
        # translated by -yhat; lay its target out accordingly
        shifted = translate_graded(dims, model.B.neg(yhat), model.B)
        mid_layout, mid_total = _graded_layout(shifted, model.B)
        mid_offset = {beta: off for beta, off, _ in mid_layout}
        blockwise = np.zeros((mid_total, total), dtype=complex)
        for beta, off, d in layout:
            if not d:
                continue
            u = sheaf.matrix(k, beta)
            r0 = mid_offset[beta]
            blockwise[r0:r0 + u.shape[0], off:off + d] = u
        E = fm_ab_equivariance_iso(dims, model.B.neg(yhat), model.B)
        tilde = E @ blockwise
        dev = float(np.max(np.abs(R[k] @ emb - emb @ tilde))) if big else 0.0
        if dev > worst:
            worst = dev
            if dev > tol and witness is None:
                witness = ("translation", k)
    plain = fm_ab(dims, model.B)
    for a in model.B.elements():
        dev = float(np.max(np.abs(Pi[a] @ emb - emb @ plain.matrix(a)))) \
            if big else 0.0
        if dev > worst:
            worst = dev
            if dev > tol and witness is None:
                witness = ("character", a)
    return LinearizationReport(witness is None and worst <= tol, worst, witness)


# ---------------------------------------------------------------------------
# the function-algebra shadow

def star_on_points(phi_vals: Mapping, psi_vals: Mapping,
                   omega: GroupBilinearTable) -> dict:
    """Twisted product of functions on the group: average over translate
    pairs weighted by the inverse of the bilinear form."""
    K = omega.group
    out = {}
    for x in K.elements():
        acc = 0j
        for k1 in K.elements():
            y1 = phi_vals[K.add(x, k1)]
            for k2 in K.elements():
                acc += (-omega(k1, k2)).embed() * y1 * psi_vals[K.add(x, k2)]
        out[x] = acc / K.size
    return out


def fourier_component(vals: Mapping, khat,
                      K: FiniteAbelianGroup) -> dict:
    """Isotypic piece of a function: averaging against the character of
    ``khat`` leaves the component transforming by it under translation."""
    khat = K.reduce(khat)
    return {x: sum((-K.pairing(k, khat)).embed() * vals[K.add(x, k)]
                   for k in K.elements()) / K.size
            for x in K.elements()}


def dual_side_product(phi_vals: Mapping, psi_vals: Mapping,
                      pair: DualPairData) -> dict:
    """Reassemble the twisted product from Fourier components: pairs of
    components multiply pointwise, weighted by the dual pairing."""
    K = pair.group
    comps_phi = {kh: fourier_component(phi_vals, kh, K)
                 for kh in K.elements()}
    comps_psi = {kh: fourier_component(psi_vals, kh, K)
                 for kh in K.elements()}
    out = {x: 0j for x in K.elements()}
    for kh1 in K.elements():
        c1 = comps_phi[kh1]
        for kh2 in K.elements():
            w = pair.dual_pairing(kh1, kh2).embed()
            c2 = comps_psi[kh2]
            for x in K.elements():
                out[x] += w * c1[x] * c2[x]
    return out
