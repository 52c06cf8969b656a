"""Definitional evaluators for the discriminantal and the four generator
functions (star, wave, 2-waves, base), plus independently-coded referees
for the ones that lack a second definitional path elsewhere.

The wave-function here is written so that it is exactly the w = empty
degeneration of the 2-waves function (the ebb weights ride with the
standalone wave factor); the 2-waves function itself is evaluated purely
through E-sums and therefore referees the wave expansion.
"""

from __future__ import annotations

import itertools
import math

from .errors import ShapeMismatch, TooLarge


def _certainly_zero(e) -> bool:
    """True only when the element is exactly zero (not merely zero up to a
    finite series truncation) — safe to use for term skipping."""
    if hasattr(e, "trunc"):
        return e.is_zero() and e.trunc == math.inf
    return e.is_zero()
from .esum import (
    VectorVariety,
    bare_plane,
    biwave_plane,
    c_tilde,
    c_tilde_diag,
    degree,
    esum_evaluate,
    plane,
    wave_plane,
)
from .linalg import (
    Matrix,
    Vector,
    cauchy_matrix,
    det,
    permanent_naive,
    vandermonde,
    vector,
)
from .binet import base_permanent
from .partitions import nested_pairs, subsets_k

_ENUM_BUDGET = 100_000


def col_scale(a: Matrix, rho: Vector) -> Matrix:
    if a.cols != rho.dim:
        raise ShapeMismatch("column scaling dimension mismatch")
    ent = tuple(a.entry(i, j) * rho[j] for i in range(a.rows) for j in range(a.cols))
    return Matrix(a.ring, a.rows, a.cols, ent)


# ---------------------------------------------------------------------------
# discriminantal


def dis(u: Vector, alpha: Vector, beta: Vector, p: int, q: int):
    """sum over J subset I, |I| = p, |J| = q, of
    det^2(Van(u_I)) det^2(Van(u_J)) prod_I alpha prod_J beta."""
    r = u.dim
    if not (0 <= q <= p <= r):
        raise ValueError("need 0 <= q <= p <= dim(u)")
    if math.comb(r, p) * math.comb(p, q) > _ENUM_BUDGET:
        raise TooLarge("discriminantal enumeration budget exceeded")
    ring = u.ring
    total = ring.zero
    for big, small in nested_pairs(range(r), p, q):
        d1 = det(vandermonde(u.sub(list(big))))
        d2 = det(vandermonde(u.sub(list(small))))
        term = d1 * d1 * d2 * d2
        for i in big:
            term = term * alpha[i]
        for j in small:
            term = term * beta[j]
        total = total + term
    return total


def dis_ref(u: Vector, alpha: Vector, beta: Vector, p: int, q: int):
    """Referee: iterates J outermost and uses the product-of-differences
    closed form for the squared Vandermonde determinants."""
    r = u.ring
    total = r.zero

    def vdm_sq(idx):
        acc = r.one
        for a, b in itertools.combinations(idx, 2):
            d = u[b] - u[a]
            acc = acc * d * d
        return acc

    for small in subsets_k(range(u.dim), q):
        rest = [i for i in range(u.dim) if i not in small]
        for extra in subsets_k(rest, p - q):
            big = tuple(sorted(small + extra))
            term = vdm_sq(big) * vdm_sq(small)
            for i in big:
                term = term * alpha[i]
            for j in small:
                term = term * beta[j]
            total = total + term
    return total


# ---------------------------------------------------------------------------
# star-function


def gen_star(z: Vector, u: Vector, rho: Vector, w1: Vector, w2: Vector):
    """sum over disjoint I, J with |I u J| = dim(z)/2 of
    prod_I w1 prod_J w2 per(C(z_complement, z_{IuJ})) per(C(z_{I,J}, u) Diag(rho))."""
    n2 = z.dim
    if n2 % 2 != 0:
        raise ShapeMismatch("gen_star needs even dim(z)")
    half = n2 // 2
    if math.comb(n2, half) * 2**half > _ENUM_BUDGET:
        raise TooLarge("gen_star enumeration budget exceeded")
    ring = z.ring
    total = ring.zero
    for union in subsets_k(range(n2), half):
        comp = [i for i in range(n2) if i not in union]
        p1 = permanent_naive(cauchy_matrix(z.sub(comp), z.sub(list(union))))
        if _certainly_zero(p1):
            continue
        rows = cauchy_matrix(z.sub(list(union)), u)
        p2 = permanent_naive(col_scale(rows, rho))
        for i_part in _sub_bitmasks(union):
            wprod = ring.one
            for i in union:
                wprod = wprod * (w1[i] if i in i_part else w2[i])
            total = total + wprod * p1 * p2
    return total


def _sub_bitmasks(union):
    for r in range(len(union) + 1):
        for sub in itertools.combinations(union, r):
            yield set(sub)


def gen_star_ref(z: Vector, u: Vector, rho: Vector, w1: Vector, w2: Vector):
    """Referee: assigns each z index a label in {out, I, J} directly."""
    n2 = z.dim
    half = n2 // 2
    ring = z.ring
    total = ring.zero
    for labels in itertools.product((0, 1, 2), repeat=n2):
        inside = [i for i in range(n2) if labels[i] != 0]
        if len(inside) != half:
            continue
        comp = [i for i in range(n2) if labels[i] == 0]
        wprod = ring.one
        for i in inside:
            wprod = wprod * (w1[i] if labels[i] == 1 else w2[i])
        p1 = permanent_naive(cauchy_matrix(z.sub(comp), z.sub(inside)))
        p2 = permanent_naive(col_scale(cauchy_matrix(z.sub(inside), u), rho))
        total = total + wprod * p1 * p2
    return total


# ---------------------------------------------------------------------------
# wave and 2-waves functions


def gen_wave(z: Vector, alpha: Vector, h: Vector, t: Vector, rho: Vector):
    """sum over I (the ebb-weighted wave set) and J of t-indices with
    |J| = dim(h) of per(C~(h, t_J, z_complement)) prod_I alpha
    per(C~(z_I)) prod_J rho."""
    if t.dim < h.dim:
        raise ShapeMismatch("gen_wave needs dim(t) >= dim(h)")
    ring = z.ring
    if 2**z.dim * math.comb(t.dim, h.dim) > _ENUM_BUDGET:
        raise TooLarge("gen_wave enumeration budget exceeded")
    total = ring.zero
    for r in range(z.dim + 1):
        for i_set in itertools.combinations(range(z.dim), r):
            comp = [i for i in range(z.dim) if i not in i_set]
            aprod = ring.one
            for i in i_set:
                aprod = aprod * alpha[i]
            if _certainly_zero(aprod):
                continue
            standalone = permanent_naive(c_tilde_diag(z.sub(list(i_set))))
            if _certainly_zero(standalone):
                continue
            for j_set in itertools.combinations(range(t.dim), h.dim):
                rprod = ring.one
                for j in j_set:
                    rprod = rprod * rho[j]
                big = permanent_naive(c_tilde(h, t.sub(list(j_set)), z.sub(comp)))
                total = total + big * aprod * standalone * rprod
    return total


def gen_2waves(z: Vector, alpha: Vector, w: Vector, h: Vector, t: Vector,
               rho: Vector):
    """Double sum over I (z-indices) and J (w-indices) of the product of
    two E-sums: the included part carries waves on z_I, biwaves on w_J, rho-
    prolonged planes on t, single left degrees on h; the excluded part
    carries ebb-weighted waves on the rest of z and negated biwaves on the
    rest of w."""
    ring = z.ring
    total = ring.zero
    h_planes = tuple(plane((degree(0, None), ring.one)) for _ in range(h.dim))
    t_planes = tuple(bare_plane(ring) + plane((degree(None, 0), rho[j]))
                     if not rho[j].is_zero() else bare_plane(ring)
                     for j in range(t.dim))
    for zi in _all_subsets(z.dim):
        z_in = z.sub(zi)
        z_out_idx = [i for i in range(z.dim) if i not in zi]
        z_out = z.sub(z_out_idx)
        out_z_planes = tuple(wave_plane(ring, alpha[i]) for i in z_out_idx)
        if any(alpha[i].is_zero() for i in z_out_idx):
            continue
        for wj in _all_subsets(w.dim):
            w_in = w.sub(wj)
            w_out = w.sub([j for j in range(w.dim) if j not in wj])
            first = VectorVariety(
                h.concat(t).concat(z_in).concat(w_in),
                h_planes + t_planes
                + tuple(wave_plane(ring) for _ in zi)
                + tuple(biwave_plane(ring) for _ in wj))
            second = VectorVariety(
                z_out.concat(w_out),
                out_z_planes
                + tuple(biwave_plane(ring).scale(-ring.one) for _ in range(w_out.dim)))
            total = total + esum_evaluate(first) * esum_evaluate(second)
    return total


def _all_subsets(n):
    for r in range(n + 1):
        yield from (list(c) for c in itertools.combinations(range(n), r))


# ---------------------------------------------------------------------------
# base-function

FORM_BASE_PERMANENT = "base_permanent_form"
FORM_EXPANSION = "expansion_form"
FORM_MATCHING = "matching_form"


def gen_base(u: Vector, h: Vector, t: Vector, rho: Vector,
             form: str = FORM_BASE_PERMANENT):
    ring = u.ring
    dh, dt = h.dim, t.dim
    if t.dim < h.dim:
        raise ShapeMismatch("gen_base needs dim(t) >= dim(h)")
    if form == FORM_MATCHING:
        # sum over J of per(C(h, t_J)) prod_J rho prod_k (row sums over
        # -C(u_k, h) and C(u_k, t_J)); algebraically equal to the expansion
        # form with the subset sums interchanged, but only O(comb(dt, dh))
        # permanents of size dh — the pipeline's workhorse.
        if math.comb(dt, dh) > 10**6:
            raise TooLarge("gen_base matching-form subset budget exceeded")
        cuh = cauchy_matrix(u, h) if u.dim else None
        cut = cauchy_matrix(u, t) if u.dim else None
        neg_row = []
        for k in range(u.dim):
            s = ring.zero
            for j in range(dh):
                s = s + cuh.entry(k, j)
            neg_row.append(-s)
        cht = cauchy_matrix(h, t)
        total = ring.zero
        for j_set in itertools.combinations(range(dt), dh):
            p = permanent_naive(cht.submatrix(list(range(dh)), list(j_set)))
            if _certainly_zero(p):
                continue
            for j in j_set:
                p = p * rho[j]
            for k in range(u.dim):
                s = neg_row[k]
                for j in j_set:
                    s = s + cut.entry(k, j)
                p = p * s
            total = total + p
        return total
    if form == FORM_BASE_PERMANENT:
        # A = [[I_h, 0], [0, C(h,t)Diag(rho)]], base B = (-C(u,h) | C(u,t))
        from .linalg import hconcat, identity, vconcat, zeros

        top = hconcat(identity(ring, dh), zeros(ring, dh, dt))
        bottom = hconcat(zeros(ring, dh, dh), col_scale(cauchy_matrix(h, t), rho))
        arg = vconcat(top, bottom)
        base = hconcat(cauchy_matrix(u, h).scale(-ring.one), cauchy_matrix(u, t))
        return base_permanent(arg, base)
    if form != FORM_EXPANSION:
        raise ValueError(f"unknown form {form!r}")
    total = ring.zero
    inner_arg = col_scale(cauchy_matrix(h, t), rho)
    for i_set in _all_subsets(u.dim):
        prod = ring.one
        for i in i_set:
            row = cauchy_matrix(u.sub([i]), h)
            s = ring.zero
            for k in range(dh):
                s = s + row.entry(0, k)
            prod = prod * (-s)
        if prod.is_zero() and i_set:
            continue
        rest = [i for i in range(u.dim) if i not in i_set]
        total = total + prod * base_permanent(inner_arg, cauchy_matrix(u.sub(rest), t))
    return total
