"""Seeded property batteries over the whole library.

Each battery runs a handful of independent checks on randomized but
seed-determined inputs and returns :class:`PropertyResult` records; the
command-line ``verify`` subcommand renders them and fails when any check
does.  Scopes mirror the module layout: ``cocycle``, ``weyl``,
``lattice``, ``star``, ``equivariant``, ``fm``, or ``all``.
"""

from __future__ import annotations

import itertools
from typing import Mapping

import numpy as np

from .cocycle import (
    BilinearCocycle,
    ExponentWindow,
    Phase,
    bounding_cochain,
    check_cocycle,
    coboundary,
    normal_order_representative,
)
from .equivariant import (
    GroupCocycleTable,
    GSet,
    check_linearization,
    free,
    hom_dim,
    hom_space,
    retwist,
    twisted_algebra,
)
from .finitefm import (
    DeformedKernel,
    TorusModel,
    check_fm_ab_equivariance,
    dual_side_product,
    fm_ab,
    fm_ab_equivariance_iso,
    fm_ab_inverse,
    fm_lambda,
    fm_lambda_inverse,
    module_hom_dim,
    random_sheaf,
    star_on_points,
    translate_graded,
    verify_factorization,
)
from .lattice import (
    FiniteAbelianGroup,
    GroupBilinearTable,
    compute_H_hat,
    compute_K_hat,
    descend_cocycle,
    lambda_sharp,
    subgroup_presentation,
)
from .laurent import (
    LaurentPoly,
    coboundary_transform,
    majorant_norm,
    max_coeff_diff,
    star_mul,
    translate,
)
from .qweyl import (
    PeriodMatrix,
    PModuleElement,
    QPolynomial,
    gamma_action,
    max_value_diff,
    mul_crossed,
    mul_W,
    pmodule_act_gamma,
    pmodule_act_gammahat,
    pmodule_max_diff,
)

TOL = 1e-9


class PropertyResult:
    """Outcome of one named check: verdict, worst deviation observed, and
    a short witness when it failed."""

    __slots__ = ("name", "ok", "max_dev", "witness")

    def __init__(self, name: str, ok: bool, max_dev: float = 0.0,
                 witness=None):
        self.name = name
        self.ok = bool(ok)
        self.max_dev = float(max_dev)
        self.witness = witness

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok,
                "max_dev": self.max_dev,
                "witness": None if self.witness is None else str(self.witness)}

    def __repr__(self) -> str:
        flag = "ok" if self.ok else "FAIL"
        return f"PropertyResult({self.name}: {flag}, dev={self.max_dev:.3g})"


def default_params() -> dict:
    return {"M": [[0, 1], [0, 0]], "N": 4}


def params_from_dict(data: Mapping) -> BilinearCocycle:
    """Validate a ``{"M": ..., "N": ..., "g": ...}`` mapping and build the
    bilinear phase table it describes."""
    if "M" not in data or "N" not in data:
        raise ValueError('parameters need at least "M" and "N"')
    lam = BilinearCocycle(data["M"], int(data["N"]))
    if "g" in data and int(data["g"]) != lam.g:
        raise ValueError(f'declared g={data["g"]} does not match the '
                         f"{lam.g}x{lam.g} matrix")
    return lam


def _random_symmetric(g: int, N: int, rng) -> list:
    S = rng.integers(0, N, size=(g, g))
    S = (S + S.T) % N
    return [[int(x) for x in row] for row in S]


def _random_laurent(g: int, rng, terms: int = 4,
                    radius: int = 2) -> LaurentPoly:
    data = {}
    for _ in range(terms):
        t = tuple(int(rng.integers(-radius, radius + 1)) for _ in range(g))
        data[t] = complex(rng.normal(), rng.normal())
    return LaurentPoly(g, data)


def _random_qpoly(g: int, rng, terms: int = 3, radius: int = 2) -> QPolynomial:
    poly = QPolynomial.zero(g)
    for _ in range(terms):
        a = tuple(int(rng.integers(-radius, radius + 1)) for _ in range(g))
        poly = poly + QPolynomial.monomial(g, a, None,
                                           complex(rng.normal(), rng.normal()))
    return poly


def battery_cocycle(seed: int = 0, grid: str = "small",
                    params: Mapping = None) -> list:
    rng = np.random.default_rng(seed)
    lam = params_from_dict(params or default_params())
    out = []

    if grid == "full":
        samples = None if lam.g <= 2 else 2000
    else:
        samples = 300
    ok, witness = check_cocycle(lam, samples=samples, rng=rng)
    out.append(PropertyResult("cocycle-identity", ok, 0.0 if ok else 1.0,
                              witness))

    S = _random_symmetric(lam.g, lam.N, rng)
    alpha = bounding_cochain(S, lam.N)
    shifted = coboundary(alpha, lam)
    target = BilinearCocycle(
        [[lam.M[i][j] - S[i][j] for j in range(lam.g)] for i in range(lam.g)],
        lam.N)
    window = ExponentWindow.centered(lam.g, 2)
    bad = None
    for s in window:
        for t in window:
            if shifted(s, t) != target(s, t):
                bad = (s, t)
                break
        if bad:
            break
    out.append(PropertyResult("coboundary-shifts-matrix", bad is None,
                              0.0 if bad is None else 1.0, bad))

    same = target.antisymmetrized() == lam.antisymmetrized()
    out.append(PropertyResult("antisymmetrization-class-invariant", same,
                              0.0 if same else 1.0))

    rep = normal_order_representative(lam)
    ok = (rep.antisymmetrized() == lam.antisymmetrized()
          and all(rep.M[i][j] == 0 for i in range(lam.g)
                  for j in range(i, lam.g)))
    out.append(PropertyResult("normal-order-representative", ok,
                              0.0 if ok else 1.0))
    return out


def battery_weyl(seed: int = 0, grid: str = "small",
                 params: Mapping = None) -> list:
    rng = np.random.default_rng(seed + 1)
    lam = params_from_dict(params or default_params())
    g = lam.g
    Q = PeriodMatrix([[np.exp(2j * np.pi * rng.random())
                       * (0.5 + rng.random()) for _ in range(g)]
                      for _ in range(g)])
    rounds = 6 if grid == "full" else 3
    out = []

    rep = normal_order_representative(lam)
    dev = 0.0
    for _ in range(rounds):
        f = _random_qpoly(g, rng)
        h = _random_qpoly(g, rng)
        k = _random_qpoly(g, rng)
        lhs = mul_W(mul_W(f, h, rep), k, rep)
        rhs = mul_W(f, mul_W(h, k, rep), rep)
        dev = max(dev, max_value_diff(lhs, rhs))
    out.append(PropertyResult("weyl-associative", dev <= TOL, dev))

    dev = 0.0
    for _ in range(rounds):
        f = _random_qpoly(g, rng)
        h = _random_qpoly(g, rng)
        prod = mul_W(f, h, rep)
        fl = LaurentPoly(g, {a: c for (a, _), c in f.value_dict().items()})
        hl = LaurentPoly(g, {a: c for (a, _), c in h.value_dict().items()})
        sl = star_mul(fl, hl, rep)
        got = {a: c for (a, _), c in prod.value_dict().items()}
        want = {t: sl.coeff(t) for t in sl.support()}
        keys = set(got) | set(want)
        dev = max([dev] + [abs(got.get(t, 0) - want.get(t, 0)) for t in keys])
    out.append(PropertyResult("weyl-matches-star-product", dev <= TOL, dev))

    dev = 0.0
    worst = None
    for i in range(g):
        for j in range(g):
            ti = QPolynomial.monomial(g, tuple(int(i == x) for x in range(g)))
            gj = QPolynomial.monomial(
                g, (0,) * g, tuple(int(j == x) for x in range(g)))
            d = max_value_diff(mul_crossed(gj, ti, lam, Q),
                               Q.entry(i, j) * mul_crossed(ti, gj, lam, Q))
            d = max(d, max_value_diff(
                mul_crossed(gj, ti, lam, Q, side="gerby"),
                Q.entry(j, i) * mul_crossed(ti, gj, lam, Q, side="gerby")))
            if d > dev:
                dev, worst = d, (i, j)
    out.append(PropertyResult("crossed-exchange-relation", dev <= TOL, dev,
                              worst))

    dev = 0.0
    for _ in range(rounds):
        f = _random_qpoly(g, rng, radius=1)
        for j in range(g):
            gj = QPolynomial.monomial(
                g, (0,) * g, tuple(int(j == x) for x in range(g)))
            gj_inv = QPolynomial.monomial(
                g, (0,) * g, tuple(-int(j == x) for x in range(g)))
            sandwich = mul_crossed(mul_crossed(gj_inv, f, lam, Q), gj, lam, Q)
            dev = max(dev, max_value_diff(sandwich, gamma_action(f, j, Q)))
    out.append(PropertyResult("gamma-sandwich-action", dev <= TOL, dev))

    dev = 0.0
    A = lam.antisymmetrized()
    for _ in range(rounds):
        key = (tuple(int(rng.integers(-1, 2)) for _ in range(g)),
               tuple(int(rng.integers(-1, 2)) for _ in range(g)))
        v = PModuleElement(g, {key: complex(rng.normal(), rng.normal())})
        for i in range(g):
            for j in range(i + 1, g):
                lhs = pmodule_act_gammahat(
                    pmodule_act_gammahat(v, j, lam, Q), i, lam, Q)
                rhs = pmodule_act_gammahat(
                    pmodule_act_gammahat(v, i, lam, Q), j, lam, Q)
                dev = max(dev, pmodule_max_diff(
                    lhs, Phase(A[i][j], lam.N) * rhs))
        for i in range(g):
            for j in range(g):
                left = pmodule_act_gamma(
                    pmodule_act_gammahat(v, j, lam, Q), i, Q)
                right = pmodule_act_gammahat(
                    pmodule_act_gamma(v, i, Q), j, lam, Q)
                dev = max(dev, pmodule_max_diff(left, right))
    out.append(PropertyResult("pmodule-exchange-relations", dev <= TOL, dev))
    return out


def battery_lattice(seed: int = 0, grid: str = "small") -> list:
    rng = np.random.default_rng(seed + 2)
    out = []
    cases = [(1, 4), (2, 3), (2, 4)] if grid == "small" \
        else [(1, 4), (2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 4)]

    bad = None
    for g, N in cases:
        raw = rng.integers(0, N, size=(g, g))
        Lam = [[int(x) for x in row] for row in (raw - raw.T) % N]
        sub = compute_H_hat(Lam, N)
        residues = {t for t in itertools.product(range(N), repeat=g)
                    if all(sum(Lam[i][j] * t[j] for j in range(g)) % N == 0
                           for i in range(g))}
        found = {t for t in itertools.product(range(N), repeat=g)
                 if sub.contains(t)}
        if residues != found:
            bad = (g, N)
            break
        quo = compute_K_hat(sub)
        if quo.group.size * len(residues) != N ** g:
            bad = (g, N, "index")
            break
        for _ in range(5):
            k = quo.group.random_element(rng)
            if quo.project(quo.lift(k)) != k:
                bad = (g, N, "roundtrip", k)
                break
    out.append(PropertyResult("dual-kernel-matches-enumeration", bad is None,
                              0.0 if bad is None else 1.0, bad))

    lam = BilinearCocycle([[0, 1, 1], [0, 0, 2], [0, 0, 0]], 4)
    quo = compute_K_hat(compute_H_hat(lam.antisymmetrized(), lam.N))
    table = descend_cocycle(lam, quo)
    K = quo.group
    bad = None
    for x in K.elements():
        for y in K.elements():
            lifted = lam(quo.lift(x), quo.lift(y)) \
                - lam(quo.lift(y), quo.lift(x))
            if table(x, y) - table(y, x) != lifted:
                bad = (x, y)
                break
        if bad:
            break
    out.append(PropertyResult("descended-antisymmetrization", bad is None,
                              0.0 if bad is None else 1.0, bad))

    pair = lambda_sharp(table)
    bad = None
    for x in K.elements():
        for y in K.elements():
            if table(x, y) != K.pairing(y, pair.sharp[x]):
                bad = (x, y)
                break
        if bad:
            break
    out.append(PropertyResult("sharp-identity", bad is None,
                              0.0 if bad is None else 1.0, bad))

    G = FiniteAbelianGroup((4, 2, 2))
    gens = [G.random_element(rng) for _ in range(2)]
    pres = subgroup_presentation(G, gens)
    bad = None
    for h in pres.group.elements():
        if pres.restrict(pres.embed(h)) != h:
            bad = h
            break
    out.append(PropertyResult("subgroup-roundtrip", bad is None,
                              0.0 if bad is None else 1.0, bad))
    return out


def battery_star(seed: int = 0, grid: str = "small",
                 params: Mapping = None) -> list:
    rng = np.random.default_rng(seed + 3)
    lam = params_from_dict(params or default_params())
    g = lam.g
    rounds = 8 if grid == "full" else 4
    out = []

    dev = 0.0
    for _ in range(rounds):
        f = _random_laurent(g, rng)
        h = _random_laurent(g, rng)
        k = _random_laurent(g, rng)
        lhs = star_mul(star_mul(f, h, lam), k, lam)
        rhs = star_mul(f, star_mul(h, k, lam), lam)
        dev = max(dev, max_coeff_diff(lhs, rhs))
    out.append(PropertyResult("star-associative", dev <= TOL, dev))

    worst = 0.0
    for _ in range(rounds):
        f = _random_laurent(g, rng)
        h = _random_laurent(g, rng)
        w = [float(0.5 + rng.random()) for _ in range(g)]
        slack = majorant_norm(star_mul(f, h, lam), w) \
            - majorant_norm(f, w) * majorant_norm(h, w)
        worst = max(worst, slack)
    out.append(PropertyResult("majorant-submultiplicative", worst <= TOL,
                              max(worst, 0.0)))

    dev = 0.0
    for _ in range(rounds):
        f = _random_laurent(g, rng)
        h = _random_laurent(g, rng)
        z = tuple(np.exp(2j * np.pi * rng.random()) for _ in range(g))
        lhs = translate(star_mul(f, h, lam), z)
        rhs = star_mul(translate(f, z), translate(h, z), lam)
        dev = max(dev, max_coeff_diff(lhs, rhs))
    out.append(PropertyResult("translate-intertwines-star", dev <= TOL, dev))

    S = _random_symmetric(g, lam.N, rng)
    alpha = bounding_cochain(S, lam.N)
    lam2 = BilinearCocycle(
        [[lam.M[i][j] + S[i][j] for j in range(g)] for i in range(g)], lam.N)
    dev = 0.0
    for _ in range(rounds):
        f = _random_laurent(g, rng, radius=1)
        h = _random_laurent(g, rng, radius=1)
        lhs = coboundary_transform(star_mul(f, h, lam), alpha)
        rhs = star_mul(coboundary_transform(f, alpha),
                       coboundary_transform(h, alpha), lam2)
        dev = max(dev, max_coeff_diff(lhs, rhs))
    out.append(PropertyResult("coboundary-transform-intertwines",
                              dev <= TOL, dev))
    return out


def _klein_phi(corrupt: bool = False) -> GroupCocycleTable:
    G = FiniteAbelianGroup((2, 2))
    omega = [[Phase.zero(), Phase(1, 2)], [Phase.zero(), Phase.zero()]]
    phi = GroupCocycleTable.from_bilinear(GroupBilinearTable(G, omega))
    if corrupt:
        table = dict(phi.table)
        table[((1, 0), (0, 1))] = -table[((1, 0), (0, 1))]
        phi = GroupCocycleTable(G, table)
    return phi


def battery_equivariant(seed: int = 0, grid: str = "small",
                        corrupt_phi: bool = False) -> list:
    rng = np.random.default_rng(seed + 4)
    out = []
    phi = _klein_phi(corrupt_phi)
    G = phi.group

    ok, witness = phi.check()
    out.append(PropertyResult("group-cocycle-identity", ok,
                              0.0 if ok else 1.0, witness))

    gset = GSet.regular(G)
    dims = {s: int(rng.integers(1, 3)) for s in gset.points}
    obj = free(dims, phi, gset)
    report = check_linearization(obj, phi)
    out.append(PropertyResult("free-object-transport-law", report.ok,
                              report.max_dev, report.witness))

    alpha = {h: complex(np.exp(2j * np.pi * rng.random()))
             for h in G.elements()}
    twisted = retwist(obj, alpha)
    report = check_linearization(twisted, phi.twisted_by(alpha))
    out.append(PropertyResult("retwist-follows-coboundary", report.ok,
                              report.max_dev, report.witness))

    def unitary(n):
        q, _ = np.linalg.qr(rng.normal(size=(n, n))
                            + 1j * rng.normal(size=(n, n)))
        return q

    a = obj.conjugate({s: unitary(obj.dims[s]) for s in gset.points})
    b = free({s: int(rng.integers(1, 3)) for s in gset.points}, phi, gset)
    b = b.conjugate({s: unitary(b.dims[s]) for s in gset.points})
    dev = 0.0
    for fam in hom_space(a, b):
        for h in G.elements():
            for s in gset.points:
                t = gset.act(s, h)
                resid = fam[t] @ a.matrix(h, s) - b.matrix(h, s) @ fam[s]
                dev = max(dev, float(np.max(np.abs(resid))))
    out.append(PropertyResult("hom-space-intertwines", dev <= TOL, dev))

    alg = twisted_algebra(("*",), _klein_phi(False))
    ok = (alg.center_dim() == 1 and alg.trace_form_rank() == alg.dim
          and not alg.is_commutative())
    out.append(PropertyResult("point-algebra-is-simple", ok,
                              0.0 if ok else 1.0))
    return out


def _fm_models() -> list:
    B4 = FiniteAbelianGroup((4,))
    K2 = FiniteAbelianGroup((2,))
    K4 = FiniteAbelianGroup((4,))
    B22 = FiniteAbelianGroup((2, 2))
    K22 = FiniteAbelianGroup((2, 2))
    return [
        TorusModel(B4, K2, [[2]]),
        TorusModel(B4, K2, [[2]], GroupBilinearTable(K2, [[Phase(1, 2)]])),
        TorusModel(B4, K4, [[1]], GroupBilinearTable(K4, [[Phase(1, 4)]])),
        TorusModel(B22, K22, [[1, 0], [0, 1]],
                   GroupBilinearTable(K22, [[Phase.zero(), Phase(1, 2)],
                                            [Phase.zero(), Phase.zero()]])),
    ]


def battery_fm(seed: int = 0, grid: str = "small") -> list:
    rng = np.random.default_rng(seed + 5)
    out = []

    B = FiniteAbelianGroup((2, 4))
    dims = {b: int(rng.integers(0, 3)) for b in B.elements()}
    dims[B.zero()] = max(dims[B.zero()], 1)
    back = fm_ab_inverse(fm_ab(dims, B))
    ok = back == {b: d for b, d in dims.items() if d}
    out.append(PropertyResult("fmab-roundtrip", ok, 0.0 if ok else 1.0))

    bad = None
    for yhat in B.elements():
        if not check_fm_ab_equivariance(dims, yhat, B):
            bad = yhat
            break
    if bad is None:
        some = list(B.elements())[:4]
        for y1 in some:
            for y2 in some:
                lhs = fm_ab_equivariance_iso(dims, B.add(y1, y2), B)
                rhs = fm_ab_equivariance_iso(dims, y1, B) \
                    @ fm_ab_equivariance_iso(translate_graded(dims, y1, B),
                                             y2, B)
                if not np.array_equal(lhs, rhs):
                    bad = (y1, y2)
                    break
            if bad:
                break
    out.append(PropertyResult("fmab-equivariance-exact", bad is None,
                              0.0 if bad is None else 1.0, bad))

    models = _fm_models()
    if grid == "small":
        models = models[:2] + models[3:]

    bad = None
    for idx, model in enumerate(models):
        if not DeformedKernel(model).check():
            bad = idx
            break
    out.append(PropertyResult("kernel-relations", bad is None,
                              0.0 if bad is None else 1.0, bad))

    dev = 0.0
    witness = None
    for idx, model in enumerate(models):
        sheaf = random_sheaf(model, rng)
        mod = fm_lambda(model, sheaf)
        report = mod.check()
        dev = max(dev, report.max_dev)
        back = fm_lambda_inverse(model, mod)
        if back.dims != sheaf.dims or not check_linearization(
                back, model.phi).ok:
            witness = (idx, "roundtrip")
        fact = verify_factorization(model, sheaf)
        dev = max(dev, fact.max_dev)
        if not fact.ok and witness is None:
            witness = (idx, "factorization")
        other = random_sheaf(model, rng)
        if hom_dim(sheaf, other) != module_hom_dim(mod,
                                                   fm_lambda(model, other)):
            witness = (idx, "hom-dims")
    out.append(PropertyResult("fm-roundtrip-and-factorization",
                              witness is None and dev <= TOL, dev, witness))

    forms = [
        GroupBilinearTable(FiniteAbelianGroup((2,)), [[Phase(1, 2)]]),
        GroupBilinearTable(FiniteAbelianGroup((3,)), [[Phase(1, 3)]]),
    ]
    if grid == "full":
        forms.append(GroupBilinearTable(
            FiniteAbelianGroup((3, 3)),
            [[Phase(1, 3), Phase(1, 3)], [Phase.zero(), Phase(1, 3)]]))
    dev = 0.0
    for omega in forms:
        K = omega.group
        pair = lambda_sharp(omega)
        for _ in range(4):
            f = {x: complex(rng.normal(), rng.normal()) for x in K.elements()}
            h = {x: complex(rng.normal(), rng.normal()) for x in K.elements()}
            lhs = star_on_points(f, h, omega)
            rhs = dual_side_product(f, h, pair)
            dev = max([dev] + [abs(lhs[x] - rhs[x]) for x in K.elements()])
    out.append(PropertyResult("points-product-diagonalizes", dev <= TOL, dev))
    return out


SCOPES = ("cocycle", "weyl", "lattice", "star", "equivariant", "fm")


def run_battery(scope: str = "all", seed: int = 0, grid: str = "small",
                params: Mapping = None, corrupt_phi: bool = False) -> list:
    """Run one scope (or every scope) and return the collected results."""
    if grid not in ("small", "full"):
        raise ValueError(f"unknown grid {grid!r}")
    if scope == "all":
        results = []
        for name in SCOPES:
            results.extend(run_battery(name, seed, grid, params, corrupt_phi))
        return results
    if scope == "cocycle":
        return battery_cocycle(seed, grid, params)
    if scope == "weyl":
        return battery_weyl(seed, grid, params)
    if scope == "lattice":
        return battery_lattice(seed, grid)
    if scope == "star":
        return battery_star(seed, grid, params)
    if scope == "equivariant":
        return battery_equivariant(seed, grid, corrupt_phi)
    if scope == "fm":
        return battery_fm(seed, grid)
    raise ValueError(f"unknown scope {scope!r}")
