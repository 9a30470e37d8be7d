"""The group H_n(F_q), horizontal lines, refined directions, and counting.

Points, directions and lines are immutable; coordinates are stored as field
indices (plain ints).  The point enumeration is row-major with t fastest,
then the y block, then the x block, and every line is materialized as its
q-point sequence so set-level oracles stay cheap.  Bulk enumeration (all
lines of a direction at once) runs through index tables instead of objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .field import DomainError, FieldElement


# ---------------------------------------------------------------------------
# points


class HPoint:
    """A point (x, y, t) of H_n(F_q), coordinates as field indices."""

    __slots__ = ("field", "n", "x", "y", "t")

    def __init__(self, field, x, y, t):
        x = tuple(field.coerce_index(c) for c in _as_seq(x))
        y = tuple(field.coerce_index(c) for c in _as_seq(y))
        if len(x) != len(y):
            raise DomainError("x and y blocks differ in length")
        self.field = field
        self.n = len(x)
        self.x = x
        self.y = y
        self.t = field.coerce_index(t)

    @classmethod
    def origin(cls, field, n=1):
        return cls(field, (0,) * n, (0,) * n, 0)

    def _check_compatible(self, other):
        if not isinstance(other, HPoint):
            raise DomainError("expected an HPoint")
        if other.field != self.field or other.n != self.n:
            raise DomainError("points live in different ambient groups")

    def __mul__(self, other):
        """Group law (x,y,t)(x',y',t') = (x+x', y+y', t+t'+(x.y'-y.x'))."""
        self._check_compatible(other)
        f = self.field
        x = tuple(f.add(a, b) for a, b in zip(self.x, other.x))
        y = tuple(f.add(a, b) for a, b in zip(self.y, other.y))
        twist = 0
        for xi, yi, xpi, ypi in zip(self.x, self.y, other.x, other.y):
            twist = f.add(twist, f.sub(f.mul(xi, ypi), f.mul(yi, xpi)))
        t = f.add(f.add(self.t, other.t), twist)
        return HPoint(self.field, x, y, t)

    def inverse(self):
        f = self.field
        return HPoint(f, tuple(f.neg(c) for c in self.x),
                      tuple(f.neg(c) for c in self.y), f.neg(self.t))

    def project(self):
        """Drop t: the point (x, y) of F_q^{2n}."""
        return self.x + self.y

    @property
    def index(self):
        q = self.field.q
        idx = 0
        for c in self.x + self.y:
            idx = idx * q + c
        return idx * q + self.t

    def __eq__(self, other):
        return (isinstance(other, HPoint) and self.field == other.field
                and self.x == other.x and self.y == other.y and self.t == other.t)

    def __hash__(self):
        return hash((self.field.q, self.x, self.y, self.t))

    def __repr__(self):
        if self.n == 1:
            return f"H({self.x[0]},{self.y[0]},{self.t})"
        return f"H({self.x},{self.y},{self.t})"


def _as_seq(c):
    if isinstance(c, (tuple, list)):
        return c
    return (c,)


def group_mul(p, p2):
    return p * p2


def enumerate_points(field, n=1):
    """All q^(2n+1) points in index order (t fastest, then y, then x)."""
    q = field.q
    pts = []
    for coords in product(range(q), repeat=2 * n + 1):
        pts.append(HPoint(field, coords[:n], coords[n:2 * n], coords[2 * n]))
    return pts


def point_from_index(field, n, idx):
    q = field.q
    t = idx % q
    idx //= q
    coords = []
    for _ in range(2 * n):
        coords.append(idx % q)
        idx //= q
    coords.reverse()
    return HPoint(field, coords[:n], coords[n:], t)


# ---------------------------------------------------------------------------
# directions


def canonical_direction(field, vec):
    """Scale so the first nonzero coordinate equals 1; DomainError on zero."""
    vec = tuple(field.coerce_index(c) for c in vec)
    for c in vec:
        if c:
            s = field.inv(c)
            return tuple(field.mul(s, v) for v in vec)
    raise DomainError("zero vector has no projective class")


class ProjectiveDirection:
    """A projective class [v], stored as its canonical representative."""

    __slots__ = ("field", "rep")

    def __init__(self, field, vec):
        self.field = field
        self.rep = canonical_direction(field, vec)

    @property
    def dim(self):
        return len(self.rep)

    def __eq__(self, other):
        return (isinstance(other, ProjectiveDirection)
                and self.field == other.field and self.rep == other.rep)

    def __hash__(self):
        return hash((self.field.q, self.rep))

    def __repr__(self):
        return "[" + ":".join(map(str, self.rep)) + "]"


def enumerate_directions(field, d):
    """All (q^d - 1)/(q - 1) canonical representatives of P^{d-1}(F_q).

    Order: by position of the leading 1, then lexicographically in the free
    coordinates.
    """
    dirs = []
    for lead in range(d):
        for tail in product(range(field.q), repeat=d - 1 - lead):
            dirs.append(ProjectiveDirection(field, (0,) * lead + (1,) + tail))
    return dirs


def enumerate_projective_directions(field, n=1):
    """Horizontal directions of H_n: P^{2n-1}(F_q)."""
    return enumerate_directions(field, 2 * n)


class RefinedDirection:
    """A class [a:b:c] in D_n: spatial direction plus central slope.

    The vertical class [0:...:0:1] is excluded, so the canonical
    representative always has its leading 1 inside the (a, b) block.
    """

    __slots__ = ("field", "rep")

    def __init__(self, field, vec):
        vec = tuple(field.coerce_index(c) for c in vec)
        if len(vec) < 3 or len(vec) % 2 == 0:
            raise DomainError("refined direction needs 2n+1 coordinates")
        if not any(vec[:-1]):
            raise DomainError("the vertical class [0:...:0:1] is not a "
                              "refined direction")
        self.field = field
        self.rep = canonical_direction(field, vec)

    @property
    def n(self):
        return (len(self.rep) - 1) // 2

    @property
    def c(self):
        return self.rep[-1]

    def projective(self):
        return ProjectiveDirection(self.field, self.rep[:-1])

    def chart(self):
        """Normal-form chart, n=1 only: ('slope', m, gamma) or ('vertical', gamma)."""
        if self.n != 1:
            raise DomainError("charts are defined for n=1 only")
        a, b, c = self.rep
        if a == 1:
            return ("slope", b, c)
        return ("vertical", c)

    def __eq__(self, other):
        return (isinstance(other, RefinedDirection)
                and self.field == other.field and self.rep == other.rep)

    def __hash__(self):
        return hash((self.field.q, self.rep, "rd"))

    def __repr__(self):
        return "[" + ":".join(map(str, self.rep)) + "]"


def enumerate_refined_directions(field, n=1):
    """All of D_n, fibered: for each projective direction, the q slopes c."""
    out = []
    for v in enumerate_projective_directions(field, n):
        for c in range(field.q):
            out.append(RefinedDirection(field, v.rep + (c,)))
    return out


# ---------------------------------------------------------------------------
# horizontal lines


class HorizontalLine:
    """A right coset {p.(sa, sb, 0)}: always exactly q points."""

    __slots__ = ("field", "n", "base", "direction", "points", "_indices")

    def __init__(self, base, direction):
        if direction.dim != 2 * base.n:
            raise DomainError("direction dimension does not match ambient n")
        if direction.field != base.field:
            raise DomainError("direction and base use different fields")
        f = base.field
        self.field = f
        self.n = base.n
        self.base = base
        self.direction = direction
        a = direction.rep[:base.n]
        b = direction.rep[base.n:]
        twist = 0
        for xi, yi, ai, bi in zip(base.x, base.y, a, b):
            twist = f.add(twist, f.sub(f.mul(xi, bi), f.mul(yi, ai)))
        pts = []
        for s in range(f.q):
            x = tuple(f.add(xi, f.mul(s, ai)) for xi, ai in zip(base.x, a))
            y = tuple(f.add(yi, f.mul(s, bi)) for yi, bi in zip(base.y, b))
            t = f.add(base.t, f.mul(twist, s))
            pts.append(HPoint(f, x, y, t))
        self.points = tuple(pts)
        self._indices = None

    @property
    def point_indices(self):
        if self._indices is None:
            self._indices = tuple(p.index for p in self.points)
        return self._indices

    def t_slope(self):
        """c(L) = x0.b - y0.a, independent of the chosen basepoint."""
        f = self.field
        a = self.direction.rep[:self.n]
        b = self.direction.rep[self.n:]
        c = 0
        for xi, yi, ai, bi in zip(self.base.x, self.base.y, a, b):
            c = f.add(c, f.sub(f.mul(xi, bi), f.mul(yi, ai)))
        return FieldElement(f, c)

    def refined_direction(self):
        return RefinedDirection(self.field,
                                self.direction.rep + (self.t_slope().index,))

    def tau(self):
        """Normal-form offset (n=1): t at x=0 (slope chart) or y=0 (vertical)."""
        if self.n != 1:
            raise DomainError("tau is defined for n=1 only")
        kind = self.refined_direction().chart()[0]
        for p in self.points:
            if (p.x[0] if kind == "slope" else p.y[0]) == 0:
                return FieldElement(self.field, p.t)
        raise AssertionError("normal form sweep missed 0")

    def __contains__(self, p):
        return p in self.points

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return (isinstance(other, HorizontalLine)
                and self.field == other.field
                and set(self.point_indices) == set(other.point_indices))

    def __hash__(self):
        return hash((self.field.q, frozenset(self.point_indices)))

    def __repr__(self):
        return f"Line(base={self.base}, dir={self.direction})"


def horizontal_line(p, v):
    return HorizontalLine(p, v)


def t_slope(line):
    return line.t_slope()


def refined_direction(line):
    return line.refined_direction()


def lines_with_refined_direction(omega):
    """The q pairwise-disjoint lines of refined direction omega (n=1).

    Indexed by tau: L_{[1:m:g],tau} = {(x, mx-g, tau+gx)} and
    L_{[0:1:g],tau} = {(g, y, tau+gy)}.
    """
    if omega.n != 1:
        raise DomainError("refined line families are built for n=1 only")
    f = omega.field
    chart = omega.chart()
    out = []
    for tau in range(f.q):
        if chart[0] == "slope":
            _, m, g = chart
            base = HPoint(f, 0, f.neg(g), tau)
        else:
            g = chart[1]
            base = HPoint(f, g, 0, tau)
        out.append(HorizontalLine(base, omega.projective()))
    return out


def lines_with_direction(field, n, v):
    """The q^{2n} disjoint lines of projective direction v, partitioning H_n."""
    q = field.q
    total = q ** (2 * n + 1)
    seen = bytearray(total)
    out = []
    for idx in range(total):
        if seen[idx]:
            continue
        line = HorizontalLine(point_from_index(field, n, idx), v)
        for j in line.point_indices:
            seen[j] = 1
        out.append(line)
    return out


def lines_through_point(p):
    """One line per projective direction: q+1 lines for n=1."""
    return [HorizontalLine(p, v)
            for v in enumerate_projective_directions(p.field, p.n)]


def all_horizontal_lines(field, n=1):
    out = []
    for v in enumerate_projective_directions(field, n):
        out.extend(lines_with_direction(field, n, v))
    return out


_TRANSVERSALS = {}


def _transversal(field, n, lead):
    """Coordinate arrays of the points whose (x,y)-coordinate lead is 0.

    Every line whose direction has its leading 1 at position lead crosses
    this hyperplane exactly once, so it indexes the coset family.
    """
    key = (field, n, lead)
    if key not in _TRANSVERSALS:
        q = field.q
        coords = np.indices((q,) * (2 * n + 1)).reshape(2 * n + 1, -1)
        _TRANSVERSALS[key] = coords[:, coords[lead] == 0].astype(np.int64)
    return _TRANSVERSALS[key]


def _direction_twist(field, n, v, base):
    """x.b - y.a over an array of base coordinates: the t-slope per base."""
    add = field.np_add.astype(np.int64)
    mul = field.np_mul.astype(np.int64)
    sub = field.np_sub.astype(np.int64)
    a, b = v.rep[:n], v.rep[n:]
    twist = None
    for i in range(n):
        term = sub[mul[:, b[i]][base[i]], mul[:, a[i]][base[n + i]]]
        twist = term if twist is None else add[twist, term]
    return twist


def line_table_for_direction(field, n, v):
    """(q^{2n}, q) int32 table: point indices of every line of direction v.

    Row r holds the r-th coset in transversal order; column s is the point
    at parameter s, matching HorizontalLine's own parametrization.
    """
    q = field.q
    add = field.np_add.astype(np.int64)
    mul = field.np_mul.astype(np.int64)
    rep = v.rep
    lead = next(j for j, c in enumerate(rep) if c)
    base = _transversal(field, n, lead)
    a, b = rep[:n], rep[n:]
    twist = _direction_twist(field, n, v, base)
    table = np.empty((base.shape[1], q), dtype=np.int32)
    for s in range(q):
        idx = np.zeros(base.shape[1], dtype=np.int64)
        for i in range(n):
            idx = idx * q + add[:, field.mul(s, a[i])][base[i]]
        for i in range(n):
            idx = idx * q + add[:, field.mul(s, b[i])][base[n + i]]
        idx = idx * q + add[base[2 * n], mul[:, s][twist]]
        table[:, s] = idx
    return table


def line_slope_table(field, n, v):
    """t-slope c(L) of each row of line_table_for_direction(field, n, v)."""
    lead = next(j for j, c in enumerate(v.rep) if c)
    return _direction_twist(field, n, v, _transversal(field, n, lead))


def project(p):
    return p.project()


# ---------------------------------------------------------------------------
# census


@dataclass(frozen=True)
class Census:
    q: int
    n: int
    points: int
    proj_directions: int
    refined_directions: int
    lines: int
    lines_per_direction: int
    lines_per_refined_direction: int
    lines_per_point: int


def census(field, n=1):
    """Counts by enumeration, cross-checked against the closed forms.

    Lines are enumerated direction by direction through the index tables;
    each direction's lines must partition H_n, every (direction, slope)
    class must be realized, and all counts must match the formulas.
    """
    q = field.q
    proj = enumerate_projective_directions(field, n)
    refined = enumerate_refined_directions(field, n)
    num_proj = (q ** (2 * n) - 1) // (q - 1)
    by_formula = Census(
        q=q, n=n,
        points=q ** (2 * n + 1),
        proj_directions=num_proj,
        refined_directions=q * num_proj,
        lines=q ** (2 * n) * num_proj,
        lines_per_direction=q ** (2 * n),
        lines_per_refined_direction=q ** (2 * n - 1),
        lines_per_point=num_proj,
    )

    total = q ** (2 * n + 1)
    whole = np.arange(total)
    total_lines = 0
    per_dir_counts = set()
    per_refined_counts = set()
    realized_refined = 0
    for v in proj:
        table = line_table_for_direction(field, n, v)
        if not np.array_equal(np.sort(table, axis=None), whole):
            raise AssertionError(f"lines of direction {v} do not partition")
        total_lines += table.shape[0]
        per_dir_counts.add(table.shape[0])
        slope_hist = np.bincount(line_slope_table(field, n, v), minlength=q)
        realized_refined += int((slope_hist > 0).sum())
        per_refined_counts.update(int(c) for c in slope_hist)
    origin = HPoint.origin(field, n)
    by_enum = Census(
        q=q, n=n,
        points=len(enumerate_points(field, n)),
        proj_directions=len(set(proj)),
        refined_directions=len(set(refined)),
        lines=total_lines,
        lines_per_direction=(per_dir_counts.pop()
                             if len(per_dir_counts) == 1 else -1),
        lines_per_refined_direction=(per_refined_counts.pop()
                                     if len(per_refined_counts) == 1 else -1),
        lines_per_point=len(lines_through_point(origin)),
    )
    if realized_refined != len(refined):
        raise AssertionError("some refined direction is not realized")
    if by_enum != by_formula:
        raise AssertionError(f"census mismatch: {by_enum} != {by_formula}")
    return by_formula


# ---------------------------------------------------------------------------
# affine lines in F_q^d


def enumerate_affine_points(field, d):
    """All q^d points of F_q^d, row-major with the last coordinate fastest."""
    return list(product(range(field.q), repeat=d))


def affine_point_index(field, pt):
    idx = 0
    for c in pt:
        idx = idx * field.q + c
    return idx


def affine_point_from_index(field, d, idx):
    q = field.q
    coords = []
    for _ in range(d):
        coords.append(idx % q)
        idx //= q
    return tuple(reversed(coords))


class AffineLine:
    """An affine line {base + s v} of F_q^d as an explicit q-point set."""

    __slots__ = ("field", "d", "base", "direction", "points", "_indices")

    def __init__(self, field, base, direction):
        base = tuple(field.coerce_index(c) for c in base)
        if not isinstance(direction, ProjectiveDirection):
            direction = ProjectiveDirection(field, direction)
        if direction.dim != len(base):
            raise DomainError("direction dimension does not match the point")
        self.field = field
        self.d = len(base)
        self.base = base
        self.direction = direction
        pts = []
        for s in range(field.q):
            pts.append(tuple(field.add(c, field.mul(s, v))
                             for c, v in zip(base, direction.rep)))
        self.points = tuple(pts)
        self._indices = None

    @property
    def point_indices(self):
        if self._indices is None:
            self._indices = tuple(affine_point_index(self.field, p)
                                  for p in self.points)
        return self._indices

    def __contains__(self, pt):
        return tuple(pt) in self.points

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return (isinstance(other, AffineLine) and self.field == other.field
                and self.d == other.d
                and set(self.points) == set(other.points))

    def __hash__(self):
        return hash((self.field.q, self.d, frozenset(self.points)))

    def __repr__(self):
        return f"AffineLine(base={self.base}, dir={self.direction})"


def affine_lines_with_direction(field, d, v):
    """The q^{d-1} parallel lines of direction v, partitioning F_q^d."""
    q = field.q
    total = q**d
    seen = bytearray(total)
    out = []
    for idx in range(total):
        if seen[idx]:
            continue
        line = AffineLine(field, affine_point_from_index(field, d, idx), v)
        for j in line.point_indices:
            seen[j] = 1
        out.append(line)
    return out


def all_affine_lines(field, d):
    out = []
    for v in enumerate_directions(field, d):
        out.extend(affine_lines_with_direction(field, d, v))
    return out


def planar_line_of(omega):
    """The affine line l_omega = {bx - ay = c} in F_q^2 (n=1).

    The map omega -> l_omega is a bijection from D_1 onto all affine lines.
    """
    if omega.n != 1:
        raise DomainError("l_omega is defined for n=1")
    f = omega.field
    chart = omega.chart()
    if chart[0] == "slope":
        _, m, g = chart
        base = (0, f.neg(g))
    else:
        g = chart[1]
        base = (g, 0)
    return AffineLine(f, base, omega.projective())


def as_affine_line(line):
    """View a horizontal line of H_1 as an affine line of F_q^3."""
    if line.n != 1:
        raise DomainError("ambient affine view implemented for n=1")
    rd = line.refined_direction()
    base = (line.base.x[0], line.base.y[0], line.base.t)
    return AffineLine(line.field, base, ProjectiveDirection(line.field, rd.rep))


def project_line(line):
    """pi(L): the affine line of F_q^{2n} below a horizontal line."""
    f = line.field
    return AffineLine(f, line.base.project(), line.direction)
