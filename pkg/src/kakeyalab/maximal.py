"""Grid functions, the Kakeya maximal operators, norms, and bound checking.

Operator evaluation is table-driven: for each field we build, once, the
point-index incidence arrays of every line family and evaluate operators as
vectorized gather/sum/max passes.  Line sums on integer-valued inputs stay
exact integers; only norms and q^alpha move to floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field import DomainError, Field
from . import heisenberg as hz

INF = math.inf
REL_TOL = 1e-9


# ---------------------------------------------------------------------------
# exponents


class ExtendedExponent:
    """An exponent in [1, infinity]: an exact rational or math.inf."""

    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, ExtendedExponent):
            value = value.value
        elif isinstance(value, str):
            value = INF if value in ("inf", "infty", "oo") else Fraction(value)
        elif isinstance(value, float):
            if value != INF:
                value = Fraction(value).limit_denominator(10**6)
        elif isinstance(value, int):
            value = Fraction(value)
        elif not isinstance(value, Fraction):
            raise DomainError(f"cannot read exponent from {value!r}")
        if value != INF and value < 1:
            raise DomainError(f"exponent must be >= 1, got {value}")
        self.value = value

    @property
    def is_inf(self):
        return self.value == INF

    @property
    def recip(self):
        """1/u as an exact Fraction, with 1/inf = 0."""
        return Fraction(0) if self.is_inf else 1 / self.value

    def __float__(self):
        return INF if self.is_inf else float(self.value)

    def __eq__(self, other):
        if not isinstance(other, ExtendedExponent):
            try:
                other = ExtendedExponent(other)
            except (DomainError, ValueError, TypeError):
                return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return "inf" if self.is_inf else str(self.value)


def as_exponent(u):
    return u if isinstance(u, ExtendedExponent) else ExtendedExponent(u)


def lp_norm(values, u):
    """(sum |g|^u)^(1/u) on a flat table; max for u = infinity."""
    u = as_exponent(u)
    a = np.abs(np.asarray(values, dtype=np.complex128))
    if a.size == 0:
        return 0.0
    if u.is_inf:
        return float(a.max())
    uu = float(u.value)
    if uu == 1:
        return float(a.sum())
    if uu == 2:
        return float(math.sqrt((a * a).sum()))
    return float((a**uu).sum() ** (1.0 / uu))


def q_pow(q, alpha):
    """q^alpha in double precision, alpha rational."""
    return math.exp(float(alpha) * math.log(q))


def exponent_A(n, u, v):
    """Growth exponent of the horizontal operator: the three-term max."""
    ru, rv = as_exponent(u).recip, as_exponent(v).recip
    return max((2 * n - 1) * rv, 1 - ru, 1 + (2 * n - 1) * rv - 2 * n * ru)


def exponent_Ard(u, v):
    """Growth exponent of the refined-direction operator (n=1)."""
    ru, rv = as_exponent(u).recip, as_exponent(v).recip
    return max(rv, 1 - ru, 2 * rv - ru, 1 + 2 * rv - 3 * ru)


def diag_exponent(u, d=2):
    """tau_d(u): (d-1)/u for u <= d, else 1 - 1/u."""
    ru = as_exponent(u).recip
    return (d - 1) * ru if ru >= Fraction(1, d) else 1 - ru


def rd_diag_constant(u):
    """C_u of the refined diagonal bound: interpolation of 2q and 5 sqrt(q)."""
    ru = as_exponent(u).recip
    if ru >= Fraction(1, 2):
        theta = float(2 * (1 - ru))
        return 2.0 ** (1 - theta) * 5.0**theta
    return 5.0 ** float(2 * ru)


def rd_upper_constant(u, v):
    """Constant C_{u,v} of the refined mixed-norm upper bound at (u, v)."""
    u, v = as_exponent(u), as_exponent(v)
    ru, rv = u.recip, v.recip
    if ru >= Fraction(1, 2):  # 1 <= u <= 2
        if rv >= ru:          # v <= u
            return rd_diag_constant(u) * 2.0 ** float(rv - ru)
        if rv >= 1 - ru:      # u <= v <= u/(u-1)
            return 2.0 ** float(rv - 1 + ru) * 5.0 ** float(2 * (1 - ru))
        return 5.0 ** float(2 * (1 - ru))
    if rv <= ru:              # u <= v
        return 5.0 ** float(2 * ru)
    return 2.0 ** float(rv - ru) * 5.0 ** float(2 * ru)


# ---------------------------------------------------------------------------
# domains and grid functions


@dataclass(frozen=True)
class Domain:
    """Where a grid function lives: H_n(F_q) or F_q^d."""

    kind: str  # 'heisenberg' | 'affine'
    field: Field
    n: int = 1  # group rank for heisenberg, ambient dimension for affine

    @classmethod
    def heisenberg(cls, field, n=1):
        return cls("heisenberg", field, n)

    @classmethod
    def affine(cls, field, d):
        if d < 1:
            raise DomainError("affine dimension must be >= 1")
        return cls("affine", field, d)

    @property
    def size(self):
        if self.kind == "heisenberg":
            return self.field.q ** (2 * self.n + 1)
        return self.field.q**self.n

    def point_index(self, pt):
        if self.kind == "heisenberg":
            if not isinstance(pt, hz.HPoint):
                pt = hz.HPoint(self.field, *pt)
            return pt.index
        return hz.affine_point_index(self.field, pt)


class GridFunction:
    """A dense complex (or integer) table over a Domain's point enumeration."""

    __slots__ = ("domain", "values")

    def __init__(self, domain, values):
        values = np.asarray(values)
        if values.shape != (domain.size,):
            raise DomainError(
                f"value table has {values.shape}, expected ({domain.size},)")
        if not np.all(np.isfinite(values)):
            raise DomainError("grid values must be finite")
        values = values.copy()
        values.flags.writeable = False
        self.domain = domain
        self.values = values

    @classmethod
    def zeros(cls, domain, dtype=np.complex128):
        return cls(domain, np.zeros(domain.size, dtype=dtype))

    @classmethod
    def constant(cls, domain, value=1):
        exact = isinstance(value, int) or (isinstance(value, float)
                                           and value == int(value))
        dtype = np.int64 if exact else np.complex128
        return cls(domain, np.full(domain.size, value, dtype=dtype))

    @classmethod
    def delta(cls, domain, point=None):
        vals = np.zeros(domain.size, dtype=np.int64)
        if point is None:
            idx = 0
        else:
            idx = point if isinstance(point, int) else domain.point_index(point)
        vals[idx] = 1
        return cls(domain, vals)

    @classmethod
    def indicator(cls, domain, indices):
        vals = np.zeros(domain.size, dtype=np.int64)
        for i in indices:
            vals[i] = 1
        return cls(domain, vals)

    def norm(self, u):
        return lp_norm(self.values, u)

    @property
    def field(self):
        return self.domain.field

    def __repr__(self):
        return f"GridFunction({self.domain.kind}, q={self.field.q}, n={self.domain.n})"


def random_complex_grid(domain, rng):
    """Independent standard complex Gaussian entries via Box-Muller."""
    n = domain.size
    u1 = rng.random(n)
    u2 = rng.random(n)
    radii = np.sqrt(-2.0 * np.log1p(-u1))
    vals = radii * np.exp(2j * np.pi * u2)
    return GridFunction(domain, vals)


def seeded_rng(*key):
    """A PCG64 generator keyed deterministically by a tuple of ints."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(list(key))))


# ---------------------------------------------------------------------------
# incidence tables


_AFFINE_TABLES = {}
_HEIS1_TABLES = {}
_REFINED_TABLES = {}


def affine_incidence(field, d):
    """(directions, int32 array (#dirs, q^{d-1}, q) of point indices).

    Lines of a fixed direction are built from the transversal hyperplane
    where the leading coordinate vanishes, all in index arithmetic.
    """
    key = (field, d)
    if key not in _AFFINE_TABLES:
        q = field.q
        dirs = hz.enumerate_directions(field, d)
        add = field.np_add.astype(np.int64)
        pts = np.indices((q,) * d).reshape(d, -1).astype(np.int64)
        weights = q ** np.arange(d - 1, -1, -1, dtype=np.int64)
        table = np.empty((len(dirs), q ** (d - 1), q), dtype=np.int32)
        for i, v in enumerate(dirs):
            lead = next(j for j, c in enumerate(v.rep) if c)
            bases = pts[:, pts[lead] == 0]
            for s in range(q):
                idx = np.zeros(bases.shape[1], dtype=np.int64)
                for j in range(d):
                    idx += weights[j] * add[:, field.mul(s, v.rep[j])][bases[j]]
                table[i, :, s] = idx
        table.flags.writeable = False
        _AFFINE_TABLES[key] = (dirs, table)
    return _AFFINE_TABLES[key]


def heis1_incidence(field):
    """(directions, (q+1, q^2, q) point-index table) for H_1.

    The q^2 lines of direction [a:b] are exactly the refined lines of
    [a:b:c] over all c, so this is a reshape of the refined table.
    """
    if field not in _HEIS1_TABLES:
        dirs = hz.enumerate_projective_directions(field, 1)
        _, rtable = refined_incidence(field)
        q = field.q
        table = rtable.reshape(q + 1, q * q, q)
        _HEIS1_TABLES[field] = (dirs, table)
    return _HEIS1_TABLES[field]


def refined_incidence(field):
    """(refined directions, (q^2+q, q, q) point-index table) for H_1.

    Row (omega, tau) holds the normal-form line L_{omega,tau}; indices are
    assembled arithmetically, matching HorizontalLine.point_indices.
    """
    if field not in _REFINED_TABLES:
        q = field.q
        dirs = hz.enumerate_refined_directions(field, 1)
        add = field.np_add.astype(np.int64)
        mul = field.np_mul.astype(np.int64)
        sub = field.np_sub.astype(np.int64)
        taus = np.arange(q, dtype=np.int64)[:, None]
        xs = np.arange(q, dtype=np.int64)[None, :]
        table = np.empty((len(dirs), q, q), dtype=np.int32)
        for i, om in enumerate(dirs):
            chart = om.chart()
            if chart[0] == "slope":
                _, m, g = chart
                y = sub[mul[m], g]            # y(x) = m x - g
                xy = (np.arange(q) * q + y) * q
                t = add[taus, mul[g][xs]]     # t = tau + g x
            else:
                g = chart[1]
                xy = (g * q + np.arange(q)) * q
                t = add[taus, mul[g][xs]]     # t = tau + g y
            table[i] = xy[None, :] + t
        table.flags.writeable = False
        _REFINED_TABLES[field] = (dirs, table)
    return _REFINED_TABLES[field]


def _max_over_table(absvals, table):
    sums = absvals[table].sum(axis=2)
    return sums.max(axis=1)


# ---------------------------------------------------------------------------
# operators


def affine_max_op(f):
    """Per direction of P^{d-1}, the max over parallel lines of sum |f|."""
    if f.domain.kind != "affine" or f.domain.n < 2:
        raise DomainError("affine maximal operator needs F_q^d with d >= 2")
    _, table = affine_incidence(f.field, f.domain.n)
    return _max_over_table(np.abs(f.values), table)


def heis_max_op(F):
    """The horizontal maximal operator on P^{2n-1}: max over cosets."""
    if F.domain.kind != "heisenberg":
        raise DomainError("heisenberg maximal operator needs an H_n function")
    absvals = np.abs(F.values)
    if F.domain.n == 1:
        _, table = heis1_incidence(F.field)
        return _max_over_table(absvals, table)
    return heis_max_op_many(F.field, F.domain.n, absvals[None, :])[0]


def heis_max_op_many(field, n, absrows):
    """Batched horizontal maximal operator for rank n >= 2.

    absrows has shape (k, q^{2n+1}); returns (k, #directions).
    """
    dirs = hz.enumerate_projective_directions(field, n)
    out = np.empty((absrows.shape[0], len(dirs)))
    for di, v in enumerate(dirs):
        table = hz.line_table_for_direction(field, n, v)
        out[:, di] = absrows[:, table].sum(axis=2).max(axis=1)
    return out


def refined_max_op(F):
    """The refined-direction maximal operator on D_1."""
    if F.domain.kind != "heisenberg" or F.domain.n != 1:
        raise DomainError("refined operator is defined on H_1")
    _, table = refined_incidence(F.field)
    return _max_over_table(np.abs(F.values), table)


def project_aggregate(F, u):
    """G(x, y) = the l^u norm of the t-fiber of |F|; same u-norm, dominating."""
    if F.domain.kind != "heisenberg":
        raise DomainError("project_aggregate needs an H_n function")
    u = as_exponent(u)
    q = F.field.q
    fibers = np.abs(F.values.reshape(-1, q))
    if u.is_inf:
        g = fibers.max(axis=1)
    else:
        uu = float(u.value)
        if uu == 1:
            g = fibers.sum(axis=1)
        elif uu == 2:
            g = np.sqrt((fibers**2).sum(axis=1))
        else:
            g = (fibers**uu).sum(axis=1) ** (1.0 / uu)
    return GridFunction(Domain.affine(F.field, 2 * F.domain.n), g)


# ---------------------------------------------------------------------------
# linearizations


class LineFamily:
    """One chosen line per (refined) direction: the linear operator T.

    The point-index table drives all computation; line objects are
    materialized on first access only.
    """

    __slots__ = ("kind", "field", "n", "directions", "point_idx", "domain",
                 "_lines")

    def __init__(self, kind, field, directions, point_idx, domain, n=1,
                 lines=None):
        self.kind = kind
        self.field = field
        self.n = n
        self.directions = list(directions)
        self.point_idx = np.asarray(point_idx, dtype=np.int64)
        if self.point_idx.shape != (len(self.directions), field.q):
            raise DomainError("one q-point line per index is required")
        self.domain = domain
        self._lines = list(lines) if lines is not None else None

    @property
    def lines(self):
        if self._lines is None:
            self._lines = [self._make_line(i)
                           for i in range(len(self.directions))]
        return self._lines

    def _make_line(self, i):
        base_idx = int(self.point_idx[i, 0])
        if self.kind == "planar":
            base = hz.affine_point_from_index(self.field, 2, base_idx)
            return hz.AffineLine(self.field, base, self.directions[i])
        base = hz.point_from_index(self.field, self.n, base_idx)
        v = (self.directions[i].projective() if self.kind == "refined"
             else self.directions[i])
        return hz.HorizontalLine(base, v)

    def __len__(self):
        return len(self.directions)


def _candidate_tables(kind, field, n):
    """(directions, (m, lines, q) index table, domain) per family kind."""
    if kind == "planar":
        dirs, table = affine_incidence(field, 2)
        return dirs, table, Domain.affine(field, 2)
    if kind == "heis":
        if n == 1:
            dirs, table = heis1_incidence(field)
            return dirs, table, Domain.heisenberg(field, 1)
        dirs = hz.enumerate_projective_directions(field, n)
        table = np.stack([hz.line_table_for_direction(field, n, v)
                          for v in dirs])
        return dirs, table, Domain.heisenberg(field, n)
    if kind == "refined":
        if n != 1:
            raise DomainError("refined families exist for n=1 only")
        dirs, table = refined_incidence(field)
        return dirs, table, Domain.heisenberg(field, 1)
    raise DomainError(f"unknown linearization kind {kind!r}")


def linearize(kind, field, *, n=1, for_function=None, selection=None,
              seed=None):
    """Fix one line per index.

    Exactly one chooser applies: for_function picks the maximizing line per
    index (ties broken by enumeration order), selection passes explicit
    lines, seed draws a reproducible random family.  With no chooser the
    first line in enumeration order is taken (it passes through the origin).
    """
    if sum(x is not None for x in (for_function, selection, seed)) > 1:
        raise DomainError("pick at most one chooser")
    dirs, table, domain = _candidate_tables(kind, field, n)
    if selection is not None:
        selection = list(selection)
        if len(selection) != len(dirs):
            raise DomainError("selection must supply one line per index")
        for want, line in zip(dirs, selection):
            got = (line.refined_direction() if kind == "refined"
                   else line.direction)
            if got != want:
                raise DomainError(f"selected line has index {got}, not {want}")
        point_idx = np.array([ln.point_indices for ln in selection],
                             dtype=np.int64)
        return LineFamily(kind, field, dirs, point_idx, domain, n=n,
                          lines=selection)
    if for_function is not None:
        if for_function.domain != domain:
            raise DomainError("function domain does not match the family")
        sums = np.abs(for_function.values)[table].sum(axis=2)
        choice = sums.argmax(axis=1)  # first maximum: enumeration-order ties
    elif seed is not None:
        rng = seeded_rng(seed)
        choice = rng.integers(table.shape[1], size=table.shape[0])
    else:
        choice = np.zeros(table.shape[0], dtype=np.int64)
    point_idx = table[np.arange(table.shape[0]), choice]
    return LineFamily(kind, field, dirs, point_idx, domain, n=n)


def apply_linearized(family, f):
    """(Tf)(index) = the exact line sum; linear, complex allowed."""
    if f.domain != family.domain:
        raise DomainError("function domain does not match the family")
    return f.values[family.point_idx].sum(axis=1)


def family_gram(family):
    """Exact integer Gram matrix TT*: pairwise line intersection counts."""
    m = len(family)
    gram = np.zeros((m, m), dtype=np.int64)
    membership = {}
    for i in range(m):
        for p in family.point_idx[i]:
            membership.setdefault(int(p), []).append(i)
    for members in membership.values():
        for i in members:
            for j in members:
                gram[i, j] += 1
    return gram


def ttstar_matrix(family):
    """The (q+1) x (q+1) matrix of |l_v ∩ l_v'| for a planar family."""
    if family.kind != "planar":
        raise DomainError("TT* spectrum is defined for planar families")
    return family_gram(family)

def ttstar_spectrum(family):
    """Eigenvalues of TT*, descending; always {2q} + {q-1} x q."""
    return np.sort(np.linalg.eigvalsh(ttstar_matrix(family).astype(np.float64)))[::-1]


def l2_operator_norm(family):
    """Largest singular value of T via the exact integer Gram matrix."""
    gram = family_gram(family).astype(np.float64)
    top = float(np.linalg.eigvalsh(gram)[-1])
    return math.sqrt(max(top, 0.0))


# ---------------------------------------------------------------------------
# bound specs and verification


_OPERATORS = {
    "affine": affine_max_op,
    "heis": heis_max_op,
    "refined": refined_max_op,
}


@dataclass(frozen=True)
class BoundSpec:
    """A named inequality |op F|_v <= constant * q^alpha * |F|_u."""

    name: str
    operator: str  # 'affine' | 'heis' | 'refined'
    u: ExtendedExponent
    v: ExtendedExponent
    constant: float
    alpha: Fraction


@dataclass
class VerifyReport:
    """Outcome of checking one inequality on one input."""

    name: str
    q: int
    n: int
    u: ExtendedExponent
    v: ExtendedExponent
    lhs: float
    rhs: float
    holds: bool
    sense: str = "le"  # 'le': lhs <= rhs must hold; 'ge': lhs >= rhs
    constant_used: float = float("nan")

    @property
    def ratio(self):
        return self.lhs / self.rhs if self.rhs else INF

    def __str__(self):
        op = "<=" if self.sense == "le" else ">="
        flag = "ok" if self.holds else "VIOLATED"
        return (f"{self.name}[q={self.q}] {self.lhs:.6g} {op} {self.rhs:.6g}"
                f" ({flag})")


def verify_bound(spec, F, tol=REL_TOL):
    """Evaluate the operator, compare norms, and report."""
    opvals = _OPERATORS[spec.operator](F)
    lhs = lp_norm(opvals, spec.v)
    rhs = spec.constant * q_pow(F.field.q, spec.alpha) * F.norm(spec.u)
    holds = lhs <= rhs * (1 + tol) if rhs else lhs == 0
    return VerifyReport(spec.name, F.field.q, F.domain.n, spec.u, spec.v,
                        lhs, rhs, holds, constant_used=spec.constant)


def bound_catalog(q, n=1, us=(1, Fraction(3, 2), 2, 3, 4, INF)):
    """The named upper bounds checked by the verification suites.

    Endpoint and diagonal bounds always apply; the off-diagonal region
    bounds are instantiated at sample (u, v) pairs inside their regions.
    """
    sqrt2 = math.sqrt(2.0)
    specs = [
        BoundSpec("planar-l1", "affine", ExtendedExponent(1),
                  ExtendedExponent(1), q + 1, Fraction(0)),
        BoundSpec("planar-l2", "affine", ExtendedExponent(2),
                  ExtendedExponent(2), sqrt2, Fraction(1, 2)),
        BoundSpec("planar-linf", "affine", ExtendedExponent(INF),
                  ExtendedExponent(INF), 1.0, Fraction(1)),
        BoundSpec("rd-1-to-inf", "refined", ExtendedExponent(1),
                  ExtendedExponent(INF), 1.0, Fraction(0)),
        BoundSpec("rd-inf-to-inf", "refined", ExtendedExponent(INF),
                  ExtendedExponent(INF), 1.0, Fraction(1)),
        BoundSpec("rd-1-to-1", "refined", ExtendedExponent(1),
                  ExtendedExponent(1), q + 1, Fraction(0)),
        BoundSpec("rd-l2-sharp", "refined", ExtendedExponent(2),
                  ExtendedExponent(2), 5.0, Fraction(1, 2)),
    ]
    for u in us:
        ue = ExtendedExponent(u)
        tau = diag_exponent(ue, d=2)
        specs.append(BoundSpec(f"planar-diag-u={ue}", "affine", ue, ue,
                               sqrt2, tau))
        specs.append(BoundSpec(f"heis-diag-u={ue}", "heis", ue, ue,
                               sqrt2, tau))
        specs.append(BoundSpec(f"rd-diag-u={ue}", "refined", ue, ue,
                               rd_diag_constant(ue), tau))
    return specs


def offdiag_catalog():
    """Sample (u, v) instances of the four off-diagonal region bounds."""
    sqrt2 = math.sqrt(2.0)
    specs = []
    # upper-left region: 2 <= u <= inf, 1 <= v <= u, constant 2 sqrt 2
    for u, v in ((2, 1), (4, 2), (INF, 1), (INF, 2), (3, 3)):
        ue, ve = ExtendedExponent(u), ExtendedExponent(v)
        specs.append(BoundSpec(f"heis-upperleft-({ue},{ve})", "heis", ue, ve,
                               2 * sqrt2, 1 + ve.recip - 2 * ue.recip))
    # flat region 2 <= u <= v: constant sqrt 2, exponent 1 - 1/u
    for u, v in ((2, 3), (2, INF), (3, 4), (4, INF)):
        ue, ve = ExtendedExponent(u), ExtendedExponent(v)
        specs.append(BoundSpec(f"heis-flat-({ue},{ve})", "heis", ue, ve,
                               sqrt2, 1 - ue.recip))
    # dual flat region u <= 2, v >= u/(u-1): constant sqrt 2
    for u, v in ((2, 2), (Fraction(3, 2), 3), (Fraction(3, 2), INF),
                 (Fraction(4, 3), 4)):
        ue, ve = ExtendedExponent(u), ExtendedExponent(v)
        specs.append(BoundSpec(f"heis-dualflat-({ue},{ve})", "heis", ue, ve,
                               sqrt2, 1 - ue.recip))
    # steep region 1 <= v <= u <= 2: constant 2, exponent 1/v
    for u, v in ((2, 1), (Fraction(3, 2), 1), (2, Fraction(3, 2)), (1, 1)):
        ue, ve = ExtendedExponent(u), ExtendedExponent(v)
        specs.append(BoundSpec(f"heis-steep-({ue},{ve})", "heis", ue, ve,
                               2.0, ve.recip))
    # middle region u <= 2, u <= v <= u/(u-1): constant 2 sqrt 2
    for u, v in ((Fraction(3, 2), 2), (Fraction(4, 3), 3), (1, 2), (1, INF)):
        ue, ve = ExtendedExponent(u), ExtendedExponent(v)
        specs.append(BoundSpec(f"heis-middle-({ue},{ve})", "heis", ue, ve,
                               2 * sqrt2, ve.recip))
    return specs


# ---------------------------------------------------------------------------
# JSON serialization


def grid_to_json(F):
    """Schema: domain tag, q, modulus, and [re, im] pairs in point order."""
    f = F.field
    doc = {
        "domain": F.domain.kind,
        "q": f.q,
        "modulus": list(f.modulus) if f.modulus else None,
        "values": [[float(z.real), float(z.imag)]
                   for z in np.asarray(F.values, dtype=np.complex128)],
    }
    if F.domain.kind == "heisenberg":
        doc["n"] = F.domain.n
    else:
        doc["d"] = F.domain.n
    return doc


def grid_from_json(doc):
    try:
        kind = doc["domain"]
        fld = Field(int(doc["q"]), modulus=doc.get("modulus"))
        if kind == "heisenberg":
            domain = Domain.heisenberg(fld, int(doc.get("n", 1)))
        elif kind == "affine":
            domain = Domain.affine(fld, int(doc["d"]))
        else:
            raise DomainError(f"unknown domain kind {kind!r}")
        values = np.array([complex(re, im) for re, im in doc["values"]],
                          dtype=np.complex128)
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed grid-function document: {exc}") from exc
    return GridFunction(domain, values)
