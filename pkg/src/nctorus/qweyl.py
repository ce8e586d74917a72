"""q-Weyl algebras: noncommutative Laurent monomials in torus generators
``t_i`` and shift generators ``gamma_j``.

Products are given on monomials and extended bilinearly.  The ``t``'s
q-commute through root-of-unity phases drawn from a
:class:`~nctorus.cocycle.BilinearCocycle` (only its antisymmetrization
enters), while ``t``'s and ``gamma``'s exchange through arbitrary nonzero
complex scalars collected in a :class:`PeriodMatrix`.  The same data also
yields the mirror-image crossed product in which the roles of the phases
and the scalars swap sides (``side="gerby"``), and a bimodule carrying a
left action of the dual shifts and a right action of the plain shifts.

Coefficients are :class:`Coeff` pairs (exact phase, complex scalar) so the
root-of-unity bookkeeping stays exact for as long as possible.
"""

from __future__ import annotations

from numbers import Number
from typing import Mapping, Sequence

from .cocycle import BilinearCocycle, Phase

Vec = tuple[int, ...]
Key = tuple[Vec, Vec]


class Coeff:
    """A scalar split as (exact root-of-unity phase) * (complex number).

    Multiplying keeps the phase exact.  Adding merges the scalars when the
    phases agree; otherwise both terms are embedded and the result carries
    phase zero.
    """

    __slots__ = ("scalar", "phase")

    def __init__(self, scalar: complex = 1.0, phase: Phase | None = None):
        scalar = complex(scalar)
        if phase is None or scalar == 0:
            phase = Phase.zero()
        self.scalar = scalar
        self.phase = phase

    @classmethod
    def from_phase(cls, phase: Phase) -> "Coeff":
        return cls(1.0, phase)

    def value(self) -> complex:
        return self.phase.embed() * self.scalar

    @property
    def is_zero(self) -> bool:
        return self.scalar == 0

    def __mul__(self, other):
        if isinstance(other, Coeff):
            return Coeff(self.scalar * other.scalar, self.phase + other.phase)
        if isinstance(other, Phase):
            return Coeff(self.scalar, self.phase + other)
        if isinstance(other, Number):
            return Coeff(self.scalar * other, self.phase)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other: "Coeff") -> "Coeff":
        if not isinstance(other, Coeff):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.phase == other.phase:
            return Coeff(self.scalar + other.scalar, self.phase)
        return Coeff(self.value() + other.value())

    def __neg__(self) -> "Coeff":
        return Coeff(-self.scalar, self.phase)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Coeff):
            return NotImplemented
        return self.scalar == other.scalar and self.phase == other.phase

    def __repr__(self) -> str:
        if self.phase == Phase.zero():
            return f"Coeff({self.scalar})"
        return f"Coeff({self.scalar}, phase={self.phase})"


class PeriodMatrix:
    """Nonzero complex scalars ``q[i][j]`` through which ``gamma_j`` moves
    past ``t_i`` in the crossed product."""

    __slots__ = ("g", "q")

    def __init__(self, rows: Sequence[Sequence[complex]]):
        q = tuple(tuple(complex(x) for x in row) for row in rows)
        g = len(q)
        if any(len(row) != g for row in q):
            raise ValueError("period matrix must be square")
        if any(x == 0 for row in q for x in row):
            raise ValueError("period entries must be nonzero")
        self.g = g
        self.q = q

    @classmethod
    def ones(cls, g: int) -> "PeriodMatrix":
        return cls([[1.0] * g for _ in range(g)])

    def entry(self, i: int, j: int) -> complex:
        return self.q[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PeriodMatrix):
            return NotImplemented
        return self.q == other.q

    def __repr__(self) -> str:
        return f"PeriodMatrix({[list(r) for r in self.q]})"


def _as_coeff(c) -> Coeff:
    if isinstance(c, Coeff):
        return c
    if isinstance(c, Phase):
        return Coeff.from_phase(c)
    return Coeff(c)


class QPolynomial:
    """Finite sum of monomials ``t^a gamma^b`` with :class:`Coeff`
    coefficients; keys are ``(a, b)`` pairs of integer exponent tuples."""

    __slots__ = ("g", "terms")

    def __init__(self, g: int, terms: Mapping[Key, Coeff] | None = None):
        g = int(g)
        if g < 1:
            raise ValueError("g must be at least 1")
        cleaned: dict[Key, Coeff] = {}
        for key, c in (terms or {}).items():
            a, b = key
            a = tuple(int(x) for x in a)
            b = tuple(int(x) for x in b)
            if len(a) != g or len(b) != g:
                raise ValueError(f"exponents {key} do not have length {g}")
            c = _as_coeff(c)
            prev = cleaned.get((a, b))
            c = c if prev is None else prev + c
            if c.is_zero:
                cleaned.pop((a, b), None)
            else:
                cleaned[(a, b)] = c
        self.g = g
        self.terms = cleaned

    @classmethod
    def monomial(cls, g: int, a: Sequence[int], b: Sequence[int] | None = None,
                 coeff=1.0) -> "QPolynomial":
        if b is None:
            b = (0,) * g
        return cls(g, {(tuple(a), tuple(b)): _as_coeff(coeff)})

    @classmethod
    def zero(cls, g: int) -> "QPolynomial":
        return cls(g, {})

    @classmethod
    def one(cls, g: int) -> "QPolynomial":
        z = (0,) * g
        return cls(g, {(z, z): Coeff()})

    def coeff(self, a: Sequence[int], b: Sequence[int] | None = None) -> Coeff:
        if b is None:
            b = (0,) * self.g
        return self.terms.get((tuple(a), tuple(b)), Coeff(0.0))

    def support(self) -> list[Key]:
        return sorted(self.terms)

    def value_dict(self) -> dict[Key, complex]:
        return {k: c.value() for k, c in self.terms.items()}

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        if not isinstance(other, QPolynomial):
            return NotImplemented
        if other.g != self.g:
            raise ValueError("rank mismatch")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return QPolynomial(self.g, out)

    def __sub__(self, other: "QPolynomial") -> "QPolynomial":
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "QPolynomial":
        return QPolynomial(self.g, {k: -c for k, c in self.terms.items()})

    def __mul__(self, scalar) -> "QPolynomial":
        if isinstance(scalar, QPolynomial):
            raise TypeError("use mul_W or mul_crossed to multiply polynomials")
        s = _as_coeff(scalar)
        return QPolynomial(self.g, {k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self.g == other.g and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return f"QPolynomial({self.g}, 0)"
        bits = [f"{self.terms[k]!r}*t^{list(k[0])}*gamma^{list(k[1])}"
                for k in self.support()]
        return f"QPolynomial({self.g}, {' + '.join(bits)})"


def max_value_diff(f: QPolynomial, h: QPolynomial) -> float:
    """Largest embedded-coefficient difference between two polynomials."""
    if f.g != h.g:
        raise ValueError("rank mismatch")
    fv, hv = f.value_dict(), h.value_dict()
    keys = set(fv) | set(hv)
    return max((abs(fv.get(k, 0j) - hv.get(k, 0j)) for k in keys), default=0.0)


def _reorder_exponent(A, x: Vec, y: Vec) -> int:
    """Normal-ordering phase exponent ``sum_{i > j} A[i][j] x_i y_j``."""
    total = 0
    for i in range(len(x)):
        if x[i]:
            for j in range(i):
                if y[j]:
                    total += A[i][j] * x[i] * y[j]
    return total


def mul_W(f: QPolynomial, h: QPolynomial, lam: BilinearCocycle) -> QPolynomial:
    """Product in the subalgebra generated by the ``t``'s alone:
    ``t^a t^c = zeta_N^(sum_{i>j} A_ij a_i c_j) t^{a+c}``.

    The phase reorders the product into increasing generator order, so
    already-ordered products of distinct generators pick up nothing and
    ``t_j t_i = zeta_N^{A_ji} t_i t_j`` for ``i < j``.  Raises if either
    factor involves the shift generators.
    """
    if f.g != h.g or lam.g != f.g:
        raise ValueError("rank mismatch")
    A = lam.antisymmetrized()
    N = lam.N
    zero = (0,) * f.g
    out: dict[Key, Coeff] = {}
    for (a, b), ca in f.terms.items():
        if b != zero:
            raise ValueError("mul_W is for pure t-polynomials; use mul_crossed")
        for (a2, b2), cb in h.terms.items():
            if b2 != zero:
                raise ValueError("mul_W is for pure t-polynomials; use mul_crossed")
            key = (tuple(x + y for x, y in zip(a, a2)), zero)
            c = ca * cb * Phase(_reorder_exponent(A, a, a2), N)
            out[key] = out[key] + c if key in out else c
    return QPolynomial(f.g, out)


def mul_crossed(f: QPolynomial, h: QPolynomial, lam: BilinearCocycle,
                Q: PeriodMatrix, side: str = "nc") -> QPolynomial:
    """Crossed-product multiplication, in either of two mirror flavors.

    ``side="nc"``: the ``t``'s q-commute through the cocycle phases, the
    ``gamma``'s commute among themselves, and ``gamma_j t_i = q[i][j] t_i
    gamma_j``:

        (t^a gamma^b)(t^a' gamma^b') =
            prod_{i,j} q[i][j]^(a'_i b_j)
            * zeta_N^(sum_{i>j} A_ij a_i a'_j) * t^{a+a'} gamma^{b+b'}.

    ``side="gerby"``: the mirror image -- the ``t``'s commute, the
    ``gamma``'s q-commute through the phases, and the exchange scalar is
    transposed to ``q[j][i]``.
    """
    if side not in ("nc", "gerby"):
        raise ValueError("side must be 'nc' or 'gerby'")
    if f.g != h.g or lam.g != f.g or Q.g != f.g:
        raise ValueError("rank mismatch")
    A = lam.antisymmetrized()
    N = lam.N
    g = f.g
    q = Q.q
    out: dict[Key, Coeff] = {}
    for (a, b), ca in f.terms.items():
        for (a2, b2), cb in h.terms.items():
            scalar = 1.0 + 0j
            for i in range(g):
                if not a2[i]:
                    continue
                for j in range(g):
                    if b[j]:
                        base = q[i][j] if side == "nc" else q[j][i]
                        scalar *= base ** (a2[i] * b[j])
            if side == "nc":
                e = _reorder_exponent(A, a, a2)
            else:
                e = _reorder_exponent(A, b, b2)
            key = (tuple(x + y for x, y in zip(a, a2)),
                   tuple(x + y for x, y in zip(b, b2)))
            c = ca * cb * Coeff(scalar, Phase(e, N))
            out[key] = out[key] + c if key in out else c
    return QPolynomial(g, out)


def gamma_action(f: QPolynomial, j: int, Q: PeriodMatrix) -> QPolynomial:
    """Conjugation by the ``j``-th shift on pure t-polynomials:
    ``t^a -> prod_i q[i][j]^{-a_i} t^a``.

    Matches sandwiching with ``gamma_j`` powers in the crossed product:
    ``gamma_j^{-1} (t^a) gamma_j`` computed by :func:`mul_crossed` gives the
    same answer.
    """
    if not 0 <= j < f.g:
        raise ValueError(f"shift index {j} out of range")
    zero = (0,) * f.g
    out = {}
    for (a, b), c in f.terms.items():
        if b != zero:
            raise ValueError("gamma_action acts on pure t-polynomials")
        scalar = 1.0 + 0j
        for i, ai in enumerate(a):
            if ai:
                scalar *= Q.q[i][j] ** (-ai)
        out[(a, b)] = c * Coeff(scalar)
    return QPolynomial(f.g, out)


class PModuleElement:
    """Element of the standard bimodule: basis indexed by pairs
    ``(ahat, a)`` of dual-shift and torus exponents, :class:`Coeff` values.

    The module carries commuting one-sided actions: dual shifts act on the
    left (:func:`pmodule_act_gammahat`), plain shifts on the right
    (:func:`pmodule_act_gamma`).
    """

    __slots__ = ("g", "terms")

    def __init__(self, g: int, terms: Mapping[Key, Coeff] | None = None):
        g = int(g)
        if g < 1:
            raise ValueError("g must be at least 1")
        cleaned: dict[Key, Coeff] = {}
        for key, c in (terms or {}).items():
            ahat, a = key
            ahat = tuple(int(x) for x in ahat)
            a = tuple(int(x) for x in a)
            if len(ahat) != g or len(a) != g:
                raise ValueError(f"indices {key} do not have length {g}")
            c = _as_coeff(c)
            prev = cleaned.get((ahat, a))
            c = c if prev is None else prev + c
            if c.is_zero:
                cleaned.pop((ahat, a), None)
            else:
                cleaned[(ahat, a)] = c
        self.g = g
        self.terms = cleaned

    @classmethod
    def basis(cls, g: int, ahat: Sequence[int], a: Sequence[int],
              coeff=1.0) -> "PModuleElement":
        return cls(g, {(tuple(ahat), tuple(a)): _as_coeff(coeff)})

    def value_dict(self) -> dict[Key, complex]:
        return {k: c.value() for k, c in self.terms.items()}

    def __add__(self, other: "PModuleElement") -> "PModuleElement":
        if not isinstance(other, PModuleElement):
            return NotImplemented
        if other.g != self.g:
            raise ValueError("rank mismatch")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return PModuleElement(self.g, out)

    def __mul__(self, scalar) -> "PModuleElement":
        s = _as_coeff(scalar)
        return PModuleElement(self.g, {k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PModuleElement):
            return NotImplemented
        return self.g == other.g and self.terms == other.terms

    def __repr__(self) -> str:
        bits = [f"{self.terms[k]!r}*e{list(k[0])},{list(k[1])}"
                for k in sorted(self.terms)]
        return f"PModuleElement({self.g}, {' + '.join(bits) or '0'})"


def pmodule_max_diff(v: PModuleElement, w: PModuleElement) -> float:
    vv, wv = v.value_dict(), w.value_dict()
    keys = set(vv) | set(wv)
    return max((abs(vv.get(k, 0j) - wv.get(k, 0j)) for k in keys), default=0.0)


def pmodule_act_gamma(v: PModuleElement, i: int, Q: PeriodMatrix) -> PModuleElement:
    """Right action of the ``i``-th shift: lowers ``ahat_i`` by one and
    scales by ``prod_k q[k][i]^{-a_k}``."""
    if not 0 <= i < v.g:
        raise ValueError(f"shift index {i} out of range")
    out: dict[Key, Coeff] = {}
    for (ahat, a), c in v.terms.items():
        scalar = 1.0 + 0j
        for k, ak in enumerate(a):
            if ak:
                scalar *= Q.q[k][i] ** (-ak)
        key = (tuple(x - int(k == i) for k, x in enumerate(ahat)), a)
        add = c * Coeff(scalar)
        out[key] = out[key] + add if key in out else add
    return PModuleElement(v.g, out)


def pmodule_act_gammahat(v: PModuleElement, i: int, lam: BilinearCocycle,
                         Q: PeriodMatrix) -> PModuleElement:
    """Left action of the ``i``-th dual shift: raises ``a_i`` by one, scales
    by ``prod_k q[i][k]^{ahat_k}`` and by the exact reordering phase
    ``zeta_N^(sum_{v<i} A_iv a_v)``.

    These operators satisfy the same q-commutation as the cocycle phases
    (``gammahat_i gammahat_j = zeta_N^{A_ij} gammahat_j gammahat_i``) and
    commute with the right shift action exactly.
    """
    if not 0 <= i < v.g:
        raise ValueError(f"dual shift index {i} out of range")
    if lam.g != v.g or Q.g != v.g:
        raise ValueError("rank mismatch")
    A = lam.antisymmetrized()
    N = lam.N
    out: dict[Key, Coeff] = {}
    for (ahat, a), c in v.terms.items():
        scalar = 1.0 + 0j
        for k, hk in enumerate(ahat):
            if hk:
                scalar *= Q.q[i][k] ** hk
        e = sum(A[i][w] * a[w] for w in range(i))
        key = (ahat, tuple(x + int(k == i) for k, x in enumerate(a)))
        add = c * Coeff(scalar, Phase(e, N))
        out[key] = out[key] + add if key in out else add
    return PModuleElement(v.g, out)
