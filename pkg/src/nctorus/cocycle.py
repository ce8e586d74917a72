"""Exact root-of-unity phases and 2-cocycles on integer lattices.

A :class:`Phase` stores the exponent ``q`` of ``e^{2*pi*i*q}`` as an exact
rational modulo 1, so root-of-unity identities can be tested with ``==``
instead of floating-point tolerances; complex numbers enter only through
:meth:`Phase.embed`.

The cocycles of interest are the commutation data of quantum tori at a root
of unity: ``lambda(s, t) = zeta_N ** (s . M t)`` for an integer matrix ``M``
(:class:`BilinearCocycle`).  Only the antisymmetrization ``M - M^T`` survives
modulo coboundaries; :func:`bounding_cochain` produces the explicit quadratic
cochain realizing that, and :func:`normal_order_representative` picks the
canonical lower-triangular representative of a class.
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

Vec = tuple[int, ...]


def _vadd(s: Sequence[int], t: Sequence[int]) -> Vec:
    return tuple(a + b for a, b in zip(s, t))


class Phase:
    """A root of unity stored as its exact exponent modulo 1.

    Phases form an additive group mirroring multiplication of the underlying
    complex numbers: ``Phase(1, 4) + Phase(1, 4) == Phase(1, 2)`` just as
    ``i * i == -1``.
    """

    __slots__ = ("q",)

    def __init__(self, numerator: int | Fraction = 0, denominator: int = 1):
        self.q = Fraction(numerator, denominator) % 1

    @classmethod
    def zero(cls) -> "Phase":
        return cls(0)

    @classmethod
    def parse(cls, text: str) -> "Phase":
        """Inverse of ``str``: accepts ``"p/q"`` or a bare integer string."""
        return cls(Fraction(text.strip()))

    def embed(self) -> complex:
        """The complex number ``e^{2*pi*i*q}`` this phase stands for."""
        return cmath.exp(2j * math.pi * float(self.q))

    def order(self) -> int:
        """Multiplicative order of the embedded root of unity."""
        return self.q.denominator

    def __add__(self, other: "Phase") -> "Phase":
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.q + other.q)

    def __sub__(self, other: "Phase") -> "Phase":
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.q - other.q)

    def __neg__(self) -> "Phase":
        return Phase(-self.q)

    def __mul__(self, n: int) -> "Phase":
        if not isinstance(n, int):
            return NotImplemented
        return Phase(n * self.q)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return self.q != 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Phase):
            return NotImplemented
        return self.q == other.q

    def __hash__(self) -> int:
        return hash(self.q)

    def __str__(self) -> str:
        return str(self.q)

    def __repr__(self) -> str:
        return f"Phase({self.q})"


class WindowError(ValueError):
    """An exponent vector fell outside the window a cochain is stored on."""


class ExponentWindow:
    """Axis-aligned box of integer exponent vectors; bounds are inclusive."""

    __slots__ = ("bounds",)

    def __init__(self, bounds: Sequence[tuple[int, int]]):
        cleaned = []
        for lo, hi in bounds:
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise ValueError(f"empty axis range ({lo}, {hi})")
            cleaned.append((lo, hi))
        if not cleaned:
            raise ValueError("window needs at least one axis")
        self.bounds = tuple(cleaned)

    @classmethod
    def centered(cls, g: int, radius: int) -> "ExponentWindow":
        return cls([(-radius, radius)] * g)

    @property
    def g(self) -> int:
        return len(self.bounds)

    def __contains__(self, t: Sequence[int]) -> bool:
        if len(t) != len(self.bounds):
            return False
        return all(lo <= x <= hi for x, (lo, hi) in zip(t, self.bounds))

    def __iter__(self) -> Iterator[Vec]:
        return itertools.product(*(range(lo, hi + 1) for lo, hi in self.bounds))

    def __len__(self) -> int:
        return math.prod(hi - lo + 1 for lo, hi in self.bounds)

    def sample(self, rng: np.random.Generator) -> Vec:
        return tuple(int(rng.integers(lo, hi + 1)) for lo, hi in self.bounds)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExponentWindow):
            return NotImplemented
        return self.bounds == other.bounds

    def __repr__(self) -> str:
        return f"ExponentWindow({list(self.bounds)})"


class CochainTable:
    """Explicit Phase-valued cochain over a finite window.

    Arity-1 tables map every exponent vector in the window to a phase.
    Arity-2 tables are stored on the pairs ``(s, t)`` with ``s``, ``t`` and
    ``s + t`` all inside the window, which is exactly the domain on which the
    2-cocycle identity can be formed.  Lookups outside the stored domain
    raise :class:`WindowError`.
    """

    __slots__ = ("window", "arity", "table")

    def __init__(self, window: ExponentWindow, table: Mapping, arity: int):
        if arity not in (1, 2):
            raise ValueError("arity must be 1 or 2")
        self.window = window
        self.arity = arity
        self.table = dict(table)

    @classmethod
    def from_function(cls, window: ExponentWindow, fn: Callable[..., Phase],
                      arity: int = 1) -> "CochainTable":
        if arity == 1:
            table = {t: fn(t) for t in window}
        elif arity == 2:
            table = {}
            for s in window:
                for t in window:
                    if _vadd(s, t) in window:
                        table[(s, t)] = fn(s, t)
        else:
            raise ValueError("arity must be 1 or 2")
        return cls(window, table, arity)

    def __call__(self, *args: Sequence[int]) -> Phase:
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} argument(s), got {len(args)}")
        key = tuple(tuple(a) for a in args)
        if self.arity == 1:
            key = key[0]
        try:
            return self.table[key]
        except KeyError:
            raise WindowError(f"{key} outside stored window {self.window!r}") from None


class BoundedCochain:
    """A cochain evaluated on demand, restricted to a window.

    Same calling convention and domain rule as :class:`CochainTable`, but
    backed by a function instead of a dict -- used for coboundaries, whose
    full pair table would be needlessly large.
    """

    __slots__ = ("window", "arity", "fn")

    def __init__(self, window: ExponentWindow, fn: Callable[..., Phase],
                 arity: int = 2):
        self.window = window
        self.arity = arity
        self.fn = fn

    def __call__(self, *args: Sequence[int]) -> Phase:
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} argument(s), got {len(args)}")
        vecs = [tuple(a) for a in args]
        for v in vecs:
            if v not in self.window:
                raise WindowError(f"{v} outside window {self.window!r}")
        if self.arity == 2 and _vadd(*vecs) not in self.window:
            raise WindowError(
                f"{_vadd(*vecs)} (argument sum) outside window {self.window!r}")
        return self.fn(*vecs)

    def materialize(self) -> CochainTable:
        return CochainTable.from_function(self.window, self.fn, self.arity)


class BilinearCocycle:
    """Bilinear 2-cocycle ``lambda(s, t) = zeta_N ** (s . M t)`` on Z^g.

    Any bilinear exponent satisfies the 2-cocycle identity.  Two bilinear
    cocycles are cohomologous exactly when their antisymmetrizations
    ``M - M^T`` agree modulo ``N``, so :meth:`antisymmetrized` is the
    complete class invariant.
    """

    __slots__ = ("g", "N", "M", "_roots")

    def __init__(self, M: Sequence[Sequence[int]], N: int):
        N = int(N)
        if N < 1:
            raise ValueError("N must be a positive integer")
        rows = [tuple(int(x) % N for x in row) for row in M]
        g = len(rows)
        if any(len(row) != g for row in rows):
            raise ValueError("M must be square")
        if g == 0:
            raise ValueError("M must be nonempty")
        self.g = g
        self.N = N
        self.M = tuple(rows)
        self._roots: list[complex] | None = None

    @classmethod
    def trivial(cls, g: int, N: int) -> "BilinearCocycle":
        return cls([[0] * g for _ in range(g)], N)

    def exponent(self, s: Sequence[int], t: Sequence[int]) -> int:
        """``s . M t`` reduced modulo ``N``."""
        if len(s) != self.g or len(t) != self.g:
            raise ValueError(f"expected vectors of length {self.g}")
        total = 0
        for si, row in zip(s, self.M):
            if si:
                total += si * sum(m * tj for m, tj in zip(row, t))
        return total % self.N

    def __call__(self, s: Sequence[int], t: Sequence[int]) -> Phase:
        return Phase(self.exponent(s, t), self.N)

    def roots(self) -> list[complex]:
        """Cached table ``[zeta_N^k for k in range(N)]``."""
        if self._roots is None:
            self._roots = [cmath.exp(2j * math.pi * k / self.N)
                           for k in range(self.N)]
        return self._roots

    def antisymmetrized(self) -> tuple[tuple[int, ...], ...]:
        """``(M - M^T) mod N``, the cohomology-class invariant."""
        g, N = self.g, self.N
        return tuple(tuple((self.M[i][j] - self.M[j][i]) % N for j in range(g))
                     for i in range(g))

    def to_json(self) -> str:
        return json.dumps({"M": [list(r) for r in self.M],
                           "N": self.N, "g": self.g}, sort_keys=True)

    @classmethod
    def from_json(cls, data: str | Mapping) -> "BilinearCocycle":
        if isinstance(data, str):
            data = json.loads(data)
        lam = cls(data["M"], data["N"])
        if "g" in data and int(data["g"]) != lam.g:
            raise ValueError("declared g does not match the shape of M")
        return lam

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BilinearCocycle):
            return NotImplemented
        return self.N == other.N and self.M == other.M

    def __repr__(self) -> str:
        return f"BilinearCocycle(M={[list(r) for r in self.M]}, N={self.N})"


def eval_cocycle(M: Sequence[Sequence[int]], N: int,
                 s: Sequence[int], t: Sequence[int]) -> Phase:
    """One-shot ``zeta_N ** (s . M t)`` without building a cocycle object."""
    total = sum(int(si) * int(m) * int(tj)
                for si, row in zip(s, M) for m, tj in zip(row, t))
    return Phase(total, N)


def check_cocycle(lam, window: ExponentWindow | None = None,
                  samples: int | None = 200,
                  rng: np.random.Generator | None = None):
    """Check the multiplicative 2-cocycle identity on a window.

    The identity, written additively in phase exponents, is

        lam(t1, t2) + lam(t1 + t2, t3) == lam(t1, t2 + t3) + lam(t2, t3).

    ``samples`` random triples are drawn from the window (``samples=None``
    iterates every triple; only sensible for small windows).  Triples whose
    evaluation leaves a bounded cochain's domain are skipped.  Returns
    ``(True, None)`` if no violation was seen, else ``(False, (t1, t2, t3))``
    with the first violating triple.
    """
    if window is None:
        window = getattr(lam, "window", None)
    if window is None:
        g = getattr(lam, "g", None)
        if g is None:
            raise ValueError("pass a window for cochains that do not carry one")
        window = ExponentWindow.centered(g, 2)

    def violates(t1: Vec, t2: Vec, t3: Vec) -> bool:
        try:
            lhs = lam(t1, t2) + lam(_vadd(t1, t2), t3)
            rhs = lam(t1, _vadd(t2, t3)) + lam(t2, t3)
        except WindowError:
            return False
        return lhs != rhs

    if samples is None:
        for t1 in window:
            for t2 in window:
                for t3 in window:
                    if violates(t1, t2, t3):
                        return False, (t1, t2, t3)
        return True, None

    if rng is None:
        rng = np.random.default_rng(0)
    for _ in range(samples):
        t1, t2, t3 = (window.sample(rng) for _ in range(3))
        if violates(t1, t2, t3):
            return False, (t1, t2, t3)
    return True, None


def coboundary(alpha, lam=None) -> BoundedCochain:
    """Twist a 2-cocycle by the coboundary of a 1-cochain.

    Returns the window-bounded 2-cochain

        lam'(t1, t2) = lam(t1, t2) * alpha(t1) * alpha(t2) / alpha(t1 + t2)

    (with ``lam=None`` this is the bare coboundary ``d alpha``).  The result
    lives on the pairs with ``t1``, ``t2``, ``t1 + t2`` inside
    ``alpha.window`` and raises :class:`WindowError` elsewhere.  Twisting by
    a coboundary never changes whether :func:`check_cocycle` passes.
    """
    if alpha.arity != 1:
        raise ValueError("alpha must be a 1-cochain")

    def fn(t1: Vec, t2: Vec) -> Phase:
        val = alpha(t1) + alpha(t2) - alpha(_vadd(t1, t2))
        if lam is not None:
            val = val + lam(t1, t2)
        return val

    return BoundedCochain(alpha.window, fn, arity=2)


def bounding_cochain(S: Sequence[Sequence[int]], N: int,
                     window: ExponentWindow | None = None) -> CochainTable:
    """Quadratic 1-cochain whose coboundary cancels a symmetric exponent.

    For ``S`` symmetric modulo ``N`` this returns ``alpha`` with

        alpha(t) = zeta_N ** (sum_{i<j} S_ij t_i t_j
                              + sum_i S_ii t_i (t_i - 1) / 2),

    which satisfies ``d alpha(s, t) = zeta_N ** (-s . S t)``.  Hence
    ``coboundary(alpha, lam_M)`` agrees with ``lam_{M-S}`` wherever defined:
    subtracting a symmetric matrix from ``M`` is always a coboundary twist.
    """
    N = int(N)
    S = [[int(x) % N for x in row] for row in S]
    g = len(S)
    if any(len(row) != g for row in S):
        raise ValueError("S must be square")
    for i in range(g):
        for j in range(i + 1, g):
            if S[i][j] != S[j][i]:
                raise ValueError("S must be symmetric modulo N")
    if window is None:
        window = ExponentWindow.centered(g, 8)
    if window.g != g:
        raise ValueError("window rank does not match S")

    def val(t: Vec) -> Phase:
        e = sum(S[i][j] * t[i] * t[j] for i in range(g) for j in range(i + 1, g))
        e += sum(S[i][i] * t[i] * (t[i] - 1) // 2 for i in range(g))
        return Phase(e, N)

    return CochainTable.from_function(window, val, arity=1)


def normal_order_representative(lam: BilinearCocycle) -> BilinearCocycle:
    """Lower-triangular cocycle in the same cohomology class as ``lam``.

    The result ``L`` has ``L[i][j] = (M - M^T)[i][j]`` for ``i > j`` and
    zeros on and above the diagonal.  Its antisymmetrization equals that of
    ``lam``, and it is the exponent table under which the star product
    reorders generators into increasing index order with no spurious phase
    on already-ordered monomials.
    """
    A = lam.antisymmetrized()
    g = lam.g
    L = [[A[i][j] if i > j else 0 for j in range(g)] for i in range(g)]
    return BilinearCocycle(L, lam.N)
