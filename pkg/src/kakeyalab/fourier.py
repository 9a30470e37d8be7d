"""Central-variable Fourier apparatus on H_1(F_q).

Transforms only the t variable: f^(x, y; xi) = sum_t f(x,y,t) chi(-xi t).
A linearization T then splits exactly as T = sum_xi T_xi, the nonzero
frequencies factor through the U tables, and the whole l2 theory reduces
to quadratic fiber counting.
"""

from __future__ import annotations

import math

import numpy as np

from .field import DomainError
from .maximal import Domain, GridFunction, VerifyReport, lp_norm, REL_TOL

_CHI_MATRICES = {}


def chi_matrix(field):
    """The q x q table chi(i*j); symmetric, cached per field."""
    if field not in _CHI_MATRICES:
        m = field.np_chi[field.np_mul]
        m.flags.writeable = False
        _CHI_MATRICES[field] = m
    return _CHI_MATRICES[field]


class CentralFourierTable:
    """f^(x, y; xi) as a dense (q, q, q) complex table indexed [x, y, xi]."""

    __slots__ = ("field", "table")

    def __init__(self, field, table):
        self.field = field
        self.table = table

    def slice(self, xi):
        """f^(., .; xi) as a (q, q) array."""
        return self.table[:, :, xi]

    def plancherel_defect(self, F):
        """Relative gap in sum |f^|^2 = q |f|_2^2."""
        lhs = float((np.abs(self.table) ** 2).sum())
        rhs = self.field.q * F.norm(2) ** 2
        scale = max(lhs, rhs, 1e-300)
        return abs(lhs - rhs) / scale


def _require_h1(F):
    if F.domain.kind != "heisenberg" or F.domain.n != 1:
        raise DomainError("central Fourier transform is defined on H_1")


def central_fourier(F):
    """Transform the central variable of an H_1 grid function."""
    _require_h1(F)
    q = F.field.q
    vals = np.asarray(F.values, dtype=np.complex128).reshape(q, q, q)
    # contract t against chi(-xi t): vals[x,y,t] @ conj(chi)[t,xi]
    table = vals @ np.conj(chi_matrix(F.field))
    return CentralFourierTable(F.field, table)


def inverse_central_fourier(tab):
    """f(x,y,t) = (1/q) sum_xi f^(x,y;xi) chi(xi t)."""
    q = tab.field.q
    vals = (tab.table @ chi_matrix(tab.field)) / q
    return GridFunction(Domain.heisenberg(tab.field, 1), vals.reshape(-1))


def _as_table(f_or_table):
    if isinstance(f_or_table, CentralFourierTable):
        return f_or_table
    return central_fourier(f_or_table)


def _family_plane_and_t(family):
    if family.kind != "refined":
        raise DomainError("frequency components need a refined line family")
    q = family.field.q
    xy_idx = family.point_idx // q
    t_idx = family.point_idx % q
    return xy_idx.astype(np.int64), t_idx.astype(np.int64)


def t_xi_component(f, xi, family):
    """(T_xi f)(omega) = (1/q) sum over L_omega of f^(x,y;xi) chi(xi t)."""
    tab = _as_table(f)
    field = tab.field
    q = field.q
    xi = field.coerce_index(xi)
    xy_idx, t_idx = _family_plane_and_t(family)
    plane = tab.table[:, :, xi].reshape(-1)
    phases = field.np_chi[field.np_mul[xi][t_idx]]
    return (plane[xy_idx] * phases).sum(axis=1) / q


def t_components(f, family):
    """All frequency components at once: array of shape (q, #D_1)."""
    tab = _as_table(f)
    q = tab.field.q
    return np.stack([t_xi_component(tab, xi, family) for xi in range(q)])


class UTable:
    """The normal-form character sums U_xi(m, gamma) and U_xi^inf(gamma)."""

    __slots__ = ("field", "xi", "u", "u_inf")

    def __init__(self, field, xi, u, u_inf):
        self.field = field
        self.xi = xi
        self.u = u          # (q, q) indexed [m, gamma]
        self.u_inf = u_inf  # (q,) indexed [gamma]

    def total_square_sum(self):
        return float((np.abs(self.u) ** 2).sum() + (np.abs(self.u_inf) ** 2).sum())


def u_tables(f, xi):
    """U_xi(m,g) = sum_x f^(x, mx-g; xi) chi(xi g x); xi must be nonzero."""
    tab = _as_table(f)
    field = tab.field
    xi = field.coerce_index(xi)
    if xi == 0:
        raise DomainError("U tables are defined for nonzero xi")
    q = field.q
    mul = field.np_mul.astype(np.int64)
    sub = field.np_sub.astype(np.int64)
    xs = np.arange(q, dtype=np.int64)
    y_idx = sub[mul[:, None, :], xs[None, :, None]]   # [m, g, x] = mx - g
    phase = field.np_chi[mul[mul[xi][xs][:, None], xs[None, :]]]  # [g, x]
    plane = tab.table[:, :, xi]                       # [x, y]
    u = (plane[xs[None, None, :], y_idx] * phase[None, :, :]).sum(axis=2)
    # U_inf(g) = sum_y f^(g, y; xi) chi(xi g y); same phase table with y for x
    u_inf = (plane * phase).sum(axis=1)
    return UTable(field, xi, u, u_inf)


def key_counting_check(f, xi, tol=REL_TOL):
    """The two counting inequalities behind the sharp l2 bound."""
    tab = _as_table(f)
    field = tab.field
    xi = field.coerce_index(xi)
    ut = u_tables(tab, xi)
    plane_sq = float((np.abs(tab.table[:, :, xi]) ** 2).sum())
    q = field.q
    lhs_u = float((np.abs(ut.u) ** 2).sum())
    lhs_inf = float((np.abs(ut.u_inf) ** 2).sum())
    rep_u = VerifyReport("fourier-key-nonvertical", q, 1, 2, 2,
                         lhs_u, 2 * q * plane_sq,
                         lhs_u <= 2 * q * plane_sq * (1 + tol) + 1e-12)
    rep_inf = VerifyReport("fourier-key-vertical", q, 1, 2, 2,
                           lhs_inf, q * plane_sq,
                           lhs_inf <= q * plane_sq * (1 + tol) + 1e-12)
    return rep_u, rep_inf


def quadratic_fiber_count(field, xi, rho):
    """Fiber sizes of Q_rho(x) = (xi x - rho) x: a list over t, each <= 2."""
    xi = field.coerce_index(xi)
    rho = field.coerce_index(rho)
    if xi == 0:
        raise DomainError("Q_rho needs nonzero xi")
    counts = [0] * field.q
    for x in range(field.q):
        t = field.mul(field.sub(field.mul(xi, x), rho), x)
        counts[t] += 1
    return counts


def g_rho(tab, xi, rho):
    """G_rho(x) = sum_y f^(x,y;xi) chi(-(xi x - rho) y)."""
    field = tab.field
    xi = field.coerce_index(xi)
    rho = field.coerce_index(rho)
    q = field.q
    xs = np.arange(q, dtype=np.int64)
    coeff = field.np_sub.astype(np.int64)[field.np_mul[xi][xs], rho]
    phases = np.conj(field.np_chi[field.np_mul.astype(np.int64)[coeff[:, None], xs[None, :]]])
    return (tab.table[:, :, xi] * phases).sum(axis=1)


def split_bound_check(f, family, tol=REL_TOL):
    """|T_0 f|_2 <= sqrt(2q) |f|_2 and |T_{/=0} f|_2 <= sqrt(5q) |f|_2."""
    tab = _as_table(f)
    fnorm = lp_norm(f.values if isinstance(f, GridFunction) else
                    inverse_central_fourier(tab).values, 2)
    q = tab.field.q
    comps = t_components(tab, family)
    lhs0 = lp_norm(comps[0], 2)
    lhs_rest = lp_norm(comps[1:].sum(axis=0), 2)
    rhs0 = math.sqrt(2 * q) * fnorm
    rhs_rest = math.sqrt(5 * q) * fnorm
    rep0 = VerifyReport("fourier-split-zero", q, 1, 2, 2, lhs0, rhs0,
                        lhs0 <= rhs0 * (1 + tol) + 1e-12)
    rep_rest = VerifyReport("fourier-split-nonzero", q, 1, 2, 2,
                            lhs_rest, rhs_rest,
                            lhs_rest <= rhs_rest * (1 + tol) + 1e-12)
    return rep0, rep_rest


def decomposition_defect(f, family):
    """Relative gap between T f and sum_xi T_xi f on the family."""
    from .maximal import apply_linearized
    direct = apply_linearized(family, f)
    summed = t_components(f, family).sum(axis=0)
    scale = max(float(np.abs(direct).max()), float(np.abs(summed).max()), 1e-300)
    return float(np.abs(direct - summed).max()) / scale
