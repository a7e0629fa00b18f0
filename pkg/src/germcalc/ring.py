"""Exact sparse polynomial arithmetic and local-algebra dimensions.

A polynomial is stored sparsely as a mapping from exponent tuples to nonzero
rational coefficients:

    x^2*y + 3   (2 variables)  ->  {(2, 1): Fraction(1), (0, 0): Fraction(3)}

All arithmetic is exact; no floating point enters anywhere.  Monomials are
plain exponent tuples, one entry per variable of the ambient ring.  The
canonical monomial order used throughout is graded lexicographic: compare
total degree first, then the exponent tuple itself.

The module also provides the truncated local-ring dimension engine: the
dimension of K[[x]]/I is computed as the dimension of (monomials of degree
<= d) modulo (generator multiples of degree <= d) for increasing d, until
the value repeats a configurable number of times.  Milnor and Tjurina
numbers of function germs are thin wrappers around that engine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import NotStabilizedError
from ._echelon import RowSpan

Monomial = tuple[int, ...]

Coefficient = int | Fraction


def monomial_degree(mono: Monomial) -> int:
    return sum(mono)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def grlex_key(mono: Monomial) -> tuple[int, Monomial]:
    """Sort key for graded lexicographic order (ascending)."""
    return (sum(mono), mono)


@lru_cache(maxsize=None)
def monomials_up_to(nvars: int, degree: int) -> tuple[Monomial, ...]:
    """All exponent tuples of total degree <= degree, in graded-lex order."""
    if nvars == 0:
        return ((),) if degree >= 0 else ()
    out: list[Monomial] = []
    for d in range(degree + 1):
        # weak compositions of d into nvars parts
        for bars in itertools.combinations(range(d + nvars - 1), nvars - 1):
            prev = -1
            mono = []
            for b in bars:
                mono.append(b - prev - 1)
                prev = b
            mono.append(d + nvars - 2 - prev)
            out.append(tuple(mono))
    out.sort(key=grlex_key)
    return tuple(out)


class Poly:
    """An immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "_terms", "_key", "_hash")

    def __init__(self, nvars: int, terms: dict[Monomial, Coefficient] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean: dict[Monomial, Fraction] = {}
        for mono, coef in (terms or {}).items():
            if len(mono) != nvars:
                raise ValueError(
                    f"monomial {mono} has {len(mono)} exponents, expected {nvars}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in monomial {mono}")
            frac = Fraction(coef)
            if frac != 0:
                clean[mono] = frac
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_hash", None)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> Poly:
        return Poly(nvars, {})

    @staticmethod
    def const(nvars: int, value: Coefficient) -> Poly:
        return Poly(nvars, {(0,) * nvars: Fraction(value)})

    @staticmethod
    def variable(nvars: int, index: int) -> Poly:
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return Poly(nvars, {tuple(exps): Fraction(1)})

    @staticmethod
    def monomial(nvars: int, mono: Monomial, coef: Coefficient = 1) -> Poly:
        return Poly(nvars, {tuple(mono): Fraction(coef)})

    # -- basic queries -----------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1 by convention."""
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def order(self) -> int:
        """Minimal total degree of a term; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return min(sum(m) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self, reverse: bool = True) -> list[tuple[Monomial, Fraction]]:
        """Terms in graded-lex order, descending by default."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]),
                      reverse=reverse)

    def linear_part(self) -> list[Fraction]:
        """Coefficients of the degree-1 terms, one per variable."""
        out = [Fraction(0)] * self.nvars
        for mono, coef in self._terms.items():
            if sum(mono) == 1:
                out[mono.index(1)] = coef
        return out

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> Poly | None:
        if isinstance(other, Poly):
            return other if other.nvars == self.nvars else None
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return None

    def __add__(self, other) -> Poly:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for mono, coef in rhs._terms.items():
            out[mono] = out.get(mono, Fraction(0)) + coef
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other) -> Poly:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for mono, coef in rhs._terms.items():
            out[mono] = out.get(mono, Fraction(0)) - coef
        return Poly(self.nvars, out)

    def __rsub__(self, other) -> Poly:
        return (-self).__add__(other)

    def __neg__(self) -> Poly:
        return Poly(self.nvars, {m: -c for m, c in self._terms.items()})

    def __mul__(self, other) -> Poly:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in rhs._terms.items():
                mono = monomial_mul(ma, mb)
                out[mono] = out.get(mono, Fraction(0)) + ca * cb
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Poly:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(self.nvars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def diff(self, index: int) -> Poly:
        """Partial derivative with respect to variable `index`."""
        if not 0 <= index < self.nvars:
            raise ValueError(f"variable index {index} out of range")
        out: dict[Monomial, Fraction] = {}
        for mono, coef in self._terms.items():
            e = mono[index]
            if e == 0:
                continue
            new = list(mono)
            new[index] = e - 1
            key = tuple(new)
            out[key] = out.get(key, Fraction(0)) + coef * e
        return Poly(self.nvars, out)

    def truncate(self, degree: int) -> Poly:
        """Drop every term of total degree greater than `degree`."""
        return Poly(self.nvars,
                    {m: c for m, c in self._terms.items() if sum(m) <= degree})

    def remap_variables(self, new_nvars: int, mapping: Sequence[int]) -> Poly:
        """Reindex variables: old variable i becomes new variable mapping[i]."""
        if len(mapping) != self.nvars:
            raise ValueError("mapping length must equal nvars")
        out: dict[Monomial, Fraction] = {}
        for mono, coef in self._terms.items():
            new = [0] * new_nvars
            for i, e in enumerate(mono):
                if e:
                    new[mapping[i]] += e
            key = tuple(new)
            out[key] = out.get(key, Fraction(0)) + coef
        return Poly(new_nvars, out)

    # -- canonical identity --------------------------------------------------

    def _canonical_key(self):
        key = self._key
        if key is None:
            key = (self.nvars, tuple(sorted(self._terms.items())))
            object.__setattr__(self, "_key", key)
        return key

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self._canonical_key() == other._canonical_key()

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self._canonical_key())
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        if not self._terms:
            return f"Poly({self.nvars}, 0)"
        bits = []
        for mono, coef in self.sorted_terms():
            factors = "*".join(
                f"v{i}^{e}" if e > 1 else f"v{i}"
                for i, e in enumerate(mono) if e)
            if not factors:
                bits.append(str(coef))
            elif coef == 1:
                bits.append(factors)
            else:
                bits.append(f"{coef}*{factors}")
        return f"Poly({self.nvars}, {' + '.join(bits)})"


def substitute(f: Poly, assignment: Sequence[Poly]) -> Poly:
    """Compose f with the given assignment, one polynomial per variable.

    All polynomials in the assignment must live in one common ambient ring;
    the result lives there too.  Raises ValueError on an arity mismatch.
    """
    if len(assignment) != f.nvars:
        raise ValueError(
            f"arity mismatch: f has {f.nvars} variables, assignment has "
            f"{len(assignment)}")
    if not assignment:
        return Poly.const(0, f.constant_term())
    ambient = assignment[0].nvars
    for g in assignment:
        if g.nvars != ambient:
            raise ValueError("assignment polynomials must share one ambient ring")
    # cache powers of each substituted polynomial
    powers: list[dict[int, Poly]] = [dict() for _ in range(f.nvars)]

    def power(i: int, e: int) -> Poly:
        got = powers[i].get(e)
        if got is None:
            got = assignment[i] ** e
            powers[i][e] = got
        return got

    result = Poly.zero(ambient)
    for mono, coef in f.items():
        term = Poly.const(ambient, coef)
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


@dataclass(frozen=True)
class StabilizationPolicy:
    """Controls the truncation-degree loop of the dimension engines.

    d0 is the starting degree; None lets each engine pick its own default
    (2 for ideal quotients, multiplicity + 4 for tangent-space quotients).
    The loop stops once `window` consecutive degrees give the same value,
    and raises NotStabilizedError if d_max is reached first.
    """

    d0: int | None = None
    window: int = 2
    d_max: int = 16

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be at least 1")
        if self.d_max < 1:
            raise ValueError("d_max must be at least 1")
        if self.d0 is not None and not 1 <= self.d0 <= self.d_max:
            raise ValueError("d0 must satisfy 1 <= d0 <= d_max")


DEFAULT_POLICY = StabilizationPolicy()


def _ideal_dim_at(generators: Sequence[Poly], nvars: int, degree: int) -> int:
    """dim of (monomials <= degree) / (generator multiples <= degree)."""
    monos = monomials_up_to(nvars, degree)
    col = {m: i for i, m in enumerate(monos)}
    span = RowSpan()
    rows = []
    for g in generators:
        shift_cap = degree - g.order()
        for alpha in monomials_up_to(nvars, max(shift_cap, 0)):
            row = {}
            for mono, coef in g.items():
                prod = monomial_mul(alpha, mono)
                if sum(prod) <= degree:
                    row[col[prod]] = row.get(col[prod], Fraction(0)) + coef
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)
    rows.sort(key=lambda r: (len(r), max(r)))
    for row in rows:
        span.insert(row)
    return len(monos) - span.rank


def quotient_dim(generators: Iterable[Poly], nvars: int,
                 policy: StabilizationPolicy = DEFAULT_POLICY) -> int:
    """Dimension of the local algebra K[[x_1..x_n]] / (generators).

    Zero generators are skipped.  A generator with a nonzero constant term
    makes the ideal the whole ring, so the dimension is 0.  An empty
    effective generator list cannot have a finite quotient and raises
    NotStabilizedError immediately, as does failure to stabilize by d_max.
    """
    gens = []
    for g in generators:
        if g.nvars != nvars:
            raise ValueError("generator lives in the wrong ambient ring")
        if g.is_zero():
            continue
        if g.constant_term() != 0:
            return 0
        gens.append(g)
    if not gens:
        raise NotStabilizedError(
            "empty generator list: quotient is the full local ring",
            d_max=policy.d_max)
    d0 = policy.d0 if policy.d0 is not None else 2
    history: list[int] = []
    for d in range(d0, policy.d_max + 1):
        history.append(_ideal_dim_at(gens, nvars, d))
        if len(history) >= policy.window and \
                len(set(history[-policy.window:])) == 1:
            return history[-1]
    raise NotStabilizedError(
        f"quotient dimension did not stabilize by degree {policy.d_max} "
        f"(values {history})", d_max=policy.d_max, history=tuple(history))


def milnor(p: Poly, policy: StabilizationPolicy = DEFAULT_POLICY) -> int:
    """Milnor number: dimension of the Jacobian algebra of a function germ."""
    if p.constant_term() != 0:
        raise ValueError("function germ must vanish at the origin")
    return quotient_dim([p.diff(i) for i in range(p.nvars)], p.nvars, policy)


def tjurina(p: Poly, policy: StabilizationPolicy = DEFAULT_POLICY) -> int:
    """Tjurina number: dimension of K[[x]]/(p, all first partials of p)."""
    if p.constant_term() != 0:
        raise ValueError("function germ must vanish at the origin")
    gens = [p] + [p.diff(i) for i in range(p.nvars)]
    return quotient_dim(gens, p.nvars, policy)


# -- quasi-homogeneity ------------------------------------------------------

def _rref(matrix: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(r) for r in matrix]
    pivots: list[int] = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][c]
        rows[r] = [v / inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _strict_positive_feasible(constraints: list[tuple[list[Fraction], Fraction]]) -> bool:
    """Fourier-Motzkin feasibility of strict inequalities coef . t > rhs."""
    work = [(list(c), r) for c, r in constraints]
    nvar = len(work[0][0]) if work else 0
    for j in range(nvar):
        pos = [cr for cr in work if cr[0][j] > 0]
        neg = [cr for cr in work if cr[0][j] < 0]
        rest = [cr for cr in work if cr[0][j] == 0]
        new = list(rest)
        for cp, rp in pos:
            for cn, rn in neg:
                # eliminate t_j between cp.t > rp and cn.t > rn
                scale_p, scale_n = -cn[j], cp[j]
                coef = [scale_p * a + scale_n * b for a, b in zip(cp, cn)]
                rhs = scale_p * rp + scale_n * rn
                new.append((coef, rhs))
        work = new
    return all(rhs < 0 for coef, rhs in work)


def is_quasi_homogeneous(p: Poly) -> bool:
    """Exact weight fit: positive rational weights giving all terms weight 1.

    A function germ is quasi-homogeneous here when there are weights
    w_i > 0 with sum_i w_i * e_i = 1 for the exponent tuple e of every term.
    The zero polynomial and germs with a constant term are not.
    """
    if p.is_zero() or p.constant_term() != 0:
        return False
    exponents = list(p._terms.keys())
    appearing = [i for i in range(p.nvars) if any(m[i] for m in exponents)]
    if not appearing:
        return False
    # solve A w = 1 over the appearing variables
    matrix = [[Fraction(m[i]) for i in appearing] + [Fraction(1)]
              for m in exponents]
    rows, pivots = _rref(matrix)
    k = len(appearing)
    for row in rows:
        if all(v == 0 for v in row[:k]) and row[k] != 0:
            return False  # inconsistent
    # particular solution with free variables set to 0
    particular = [Fraction(0)] * k
    for row, c in zip(rows, pivots):
        particular[c] = row[k]
    free = [c for c in range(k) if c not in pivots]
    if not free:
        return all(v > 0 for v in particular)
    # nullspace basis, one vector per free variable
    basis = []
    for fc in free:
        vec = [Fraction(0)] * k
        vec[fc] = Fraction(1)
        for row, c in zip(rows, pivots):
            vec[c] = -row[fc]
        basis.append(vec)
    # feasibility of particular + N t > 0 componentwise
    constraints = []
    for i in range(k):
        coef = [vec[i] for vec in basis]
        constraints.append((coef, -particular[i]))
    return _strict_positive_feasible(constraints)
