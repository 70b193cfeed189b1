"""Truncated equivariant Cartan model on the basic complex.

The Cartan complex of an equivariant model is the invariant part of
S(g*) (x) Omega, with S(g*) truncated at polynomial degree D.  A
bidegree (i, p) holds invariant elements of S^i(g*) (x) Omega^p, of
total degree 2i + p.  The differentials are d (bidegree (0, 1)),
del = -sum_a u^a (x) iota_a (bidegree (1, -1) in (i, p), total +1),
d_G = d + del, and the codifferential deltaE = 1 (x) delta.

Truncation drops the S-degrees above D; every element of total degree
<= 2D + 1 has S-degree <= D automatically, so total degrees up to the
safe window W = 2D are computed exactly.  Results outside the window
are refused rather than reported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .foliation import EquivariantModel
from .gca import Derivation, Element, Report, render
from .hodge import SL2Package, build_sl2
from .linalg import (Fraction, GradedSpace, LinearOp, Mat, Subspace, Vec, fr,
                     image, kernel, mat, nullspace, quotient, reduce_against,
                     rref, solve, transpose, vec, zeros)


class CartanError(Exception):
    pass


def _u_monomials(rank: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of the degree-`degree` monomials in u^1..u^rank."""
    if rank == 0:
        return [()] if degree == 0 else []
    out = []
    for combo in itertools.combinations_with_replacement(range(rank), degree):
        e = [0] * rank
        for c in combo:
            e[c] += 1
        out.append(tuple(e))
    out.sort()
    return out


def _mono_mul(m: tuple, a: int) -> tuple:
    e = list(m)
    e[a] += 1
    return tuple(e)


def coadjoint_matrix(structure, rank: int, degree: int) -> list[Mat]:
    """Matrix of the coadjoint action of each basis vector on S^degree."""
    monos = _u_monomials(rank, degree)
    idx = {m: i for i, m in enumerate(monos)}
    mats = []
    for a in range(rank):
        rows = [[Fraction(0)] * len(monos) for _ in range(len(monos))]
        for j, m in enumerate(monos):
            for b in range(rank):
                if m[b] == 0:
                    continue
                # replace one factor u^b by ad*_a u^b = -sum_c c_{ac}^b u^c
                for c in range(rank):
                    coeff = -structure[a][c][b] * m[b]
                    if coeff != 0:
                        m2 = list(m)
                        m2[b] -= 1
                        m2[c] += 1
                        rows[idx[tuple(m2)]][j] += coeff
        mats.append(mat(rows))
    return mats


def invariant_s_dims(structure, rank: int, up_to: int) -> dict[int, int]:
    """dim S^i(g*)^G for 0 <= i <= up_to (Lie-algebra invariants)."""
    out = {}
    for i in range(up_to + 1):
        monos = _u_monomials(rank, i)
        mats = coadjoint_matrix(structure, rank, i)
        stacked = []
        for m in mats:
            stacked.extend(m)
        if not stacked or all(all(x == 0 for x in r) for r in stacked):
            out[i] = len(monos)
        else:
            out[i] = len(nullspace(tuple(stacked), len(monos)))
    return out


@dataclass
class _Block:
    """One bidegree (i, p): the flattened product basis and the invariant
    subspace rows over it."""

    i: int
    p: int
    monos: list
    nf: int
    rows: Mat  # invariant basis in product coordinates, RREF
    pivots: tuple

    @property
    def dim(self) -> int:
        return len(self.rows)


@dataclass
class CartanComplex:
    model: EquivariantModel
    D: int
    pkg: SL2Package
    blocks: dict  # (i, p) -> _Block
    space: GradedSpace  # total degree
    layout: dict  # total degree -> list of (i, p)
    offsets: dict  # (i, p) -> (total degree, offset)
    d: LinearOp
    del_op: LinearOp
    dG: LinearOp
    deltaE: LinearOp
    safe_window: int

    def bidegree_vector(self, i: int, p: int, v: Vec) -> tuple[int, Vec]:
        """Embed invariant coordinates of one bidegree into its total
        degree block."""
        k, off = self.offsets[(i, p)]
        out = [Fraction(0)] * self.space.dim(k)
        for j, x in enumerate(v):
            out[off + j] = x
        return k, tuple(out)

    def component(self, k: int, v: Vec, i: int, p: int) -> Vec:
        _, off = self.offsets[(i, p)]
        n = self.blocks[(i, p)].dim
        return tuple(v[off:off + n])

    def describe(self, k: int, v: Vec) -> str:
        """Human-readable form of a total-degree-k vector."""
        basic = self.model.base.basic
        parts = []
        for (i, p) in self.layout.get(k, ()):
            blk = self.blocks[(i, p)]
            comp = self.component(k, v, i, p)
            for j, c in enumerate(comp):
                if c == 0:
                    continue
                # expand invariant row j in product coordinates
                for flat, x in enumerate(blk.rows[j]):
                    if x == 0:
                        continue
                    mi, fi = divmod(flat, blk.nf)
                    u = "*".join(
                        f"u{a + 1}" * e
                        for a, e in enumerate(blk.monos[mi]) if e)
                    lab = basic.space.labels(p)[fi]
                    piece = "*".join(t for t in (u, lab) if t and lab != "1")
                    piece = piece or "1"
                    parts.append(f"{c * x}*{piece}")
        return " + ".join(parts) if parts else "0"


def build_cartan(model: EquivariantModel, D: int,
                 pkg: Optional[SL2Package] = None,
                 verify: bool = True) -> CartanComplex:
    if D < 0:
        raise CartanError("cutoff D must be nonnegative")
    rank = model.rank
    basic = model.base.basic
    if pkg is None:
        pkg = build_sl2(model.base)

    # Jacobi and invariance of omega are part of validate_model; re-check
    # Jacobi cheaply here since the complex depends on it.
    c = model.structure
    for a in range(rank):
        for b in range(rank):
            for dd in range(rank):
                for e in range(rank):
                    jac = sum(c[a][b][f] * c[f][dd][e]
                              + c[b][dd][f] * c[f][a][e]
                              + c[dd][a][f] * c[f][b][e]
                              for f in range(rank))
                    if jac != 0:
                        raise CartanError(
                            f"Jacobi identity fails at {(a, b, dd, e)}")
    for a in range(rank):
        lw = model.lie[a](model.base.omega_basic)
        if not lw.is_zero():
            raise CartanError(
                f"omega is not invariant under L_{a}: {render(lw)}")

    # invariant bases per bidegree
    blocks = {}
    for i in range(D + 1):
        monos = _u_monomials(rank, i)
        coad = coadjoint_matrix(model.structure, rank, i)
        for p in basic.space.degrees:
            nf = basic.space.dim(p)
            ns = len(monos)
            n = ns * nf
            if n == 0:
                blocks[(i, p)] = _Block(i, p, monos, nf, (), ())
                continue
            stacked = []
            for a in range(rank):
                lie = model.lie[a].op.block(p)
                rows = [[Fraction(0)] * n for _ in range(n)]
                for mi in range(ns):
                    for fi in range(nf):
                        col = mi * nf + fi
                        for mj in range(ns):
                            x = coad[a][mj][mi]
                            if x != 0:
                                rows[mj * nf + fi][col] += x
                        for fj in range(nf):
                            x = lie[fj][fi]
                            if x != 0:
                                rows[mi * nf + fj][col] += x
                if any(any(x != 0 for x in r) for r in rows):
                    stacked.extend(rows)
            if stacked:
                inv = nullspace(mat(stacked), n)
            else:
                from .linalg import identity
                inv = identity(n)
            r, piv = rref(inv)
            blocks[(i, p)] = _Block(i, p, monos, nf, r[:len(piv)], piv)

    # total-degree layout
    layout: dict[int, list] = {}
    for (i, p), blk in sorted(blocks.items()):
        layout.setdefault(2 * i + p, []).append((i, p))
    labels = {}
    offsets = {}
    for k in sorted(layout):
        labs = []
        for (i, p) in layout[k]:
            offsets[(i, p)] = (k, len(labs))
            for j in range(blocks[(i, p)].dim):
                labs.append(f"({i},{p})#{j}")
        labels[k] = labs
    # make the degree range contiguous so shifts never miss a block
    lo, hi = min(labels), max(labels)
    for k in range(lo - 1, hi + 2):
        labels.setdefault(k, [])
    space = GradedSpace(labels)

    cx = CartanComplex(model, D, pkg, blocks, space, layout, offsets,
                       None, None, None, None, 2 * D)

    d_op = _assemble(cx, _d_product_action, 0, 1)
    del_ops = _assemble(cx, _del_product_action, 1, -1)
    # delta raises polynomial degree, so on form-truncated carriers its
    # image can leave the invariant subspace at the cutoff boundary; in
    # that case the Cartan complex carries no codifferential.
    try:
        delta_op = _assemble(cx, _delta_product_action, 0, -1)
    except CartanError:
        if basic.poly_cutoff is None:
            raise
        delta_op = None
    cx.d = d_op
    cx.del_op = del_ops
    cx.dG = d_op.add(del_ops)
    cx.deltaE = delta_op

    if verify:
        rep = verify_cartan(cx)
        if not rep.passed:
            bad = rep.failures()[0]
            raise CartanError(f"Cartan complex verification failed: "
                              f"{bad.name}")
    return cx


def _d_product_action(cx, blk, w):
    """1 (x) d on product coordinates of bidegree (i, p)."""
    basic = cx.model.base.basic
    dblk = basic.differential.block(blk.p)
    nf2 = basic.space.dim(blk.p + 1)
    out = {}
    for flat, x in enumerate(w):
        if x == 0:
            continue
        mi, fi = divmod(flat, blk.nf)
        for fj in range(nf2):
            y = dblk[fj][fi]
            if y != 0:
                key = (blk.i, blk.p + 1, mi, fj)
                out[key] = out.get(key, Fraction(0)) + x * y
    return out


def _delta_product_action(cx, blk, w):
    basic = cx.model.base.basic
    dblk = cx.pkg.delta.block(blk.p)
    nf2 = basic.space.dim(blk.p - 1)
    out = {}
    for flat, x in enumerate(w):
        if x == 0:
            continue
        mi, fi = divmod(flat, blk.nf)
        for fj in range(nf2):
            y = dblk[fj][fi]
            if y != 0:
                key = (blk.i, blk.p - 1, mi, fj)
                out[key] = out.get(key, Fraction(0)) + x * y
    return out


def _del_product_action(cx, blk, w):
    """del = -sum_a u^a (x) iota_a; S-degrees above D are truncated."""
    model = cx.model
    if blk.i + 1 > cx.D:
        return {}
    monos2 = _u_monomials(model.rank, blk.i + 1)
    idx2 = {m: i for i, m in enumerate(monos2)}
    out = {}
    for flat, x in enumerate(w):
        if x == 0:
            continue
        mi, fi = divmod(flat, blk.nf)
        for a in range(model.rank):
            iblk = model.iota[a].op.block(blk.p)
            m2 = idx2[_mono_mul(blk.monos[mi], a)]
            for fj in range(len(iblk)):
                y = iblk[fj][fi]
                if y != 0:
                    key = (blk.i + 1, blk.p - 1, m2, fj)
                    out[key] = out.get(key, Fraction(0)) - x * y
    return out


def _assemble(cx: CartanComplex, action, di: int, dp: int) -> LinearOp:
    """Assemble a bidegree-homogeneous operator on the total space."""
    shift = 2 * di + dp
    blocks_by_degree = {}
    for k in cx.space.degrees:
        nk = cx.space.dim(k)
        tgt = cx.space.dim(k + shift)
        cols = [[Fraction(0)] * nk for _ in range(tgt)]
        blocks_by_degree[k] = cols
    for (i, p), blk in cx.blocks.items():
        if blk.dim == 0:
            continue
        k, off = cx.offsets[(i, p)]
        for j in range(blk.dim):
            imgs = action(cx, blk, blk.rows[j])
            # sort results into target bidegrees and express in invariant
            # coordinates there
            per_target: dict = {}
            for (i2, p2, mi, fi), val in imgs.items():
                per_target.setdefault((i2, p2), {})[(mi, fi)] = val
            for (i2, p2), coords in per_target.items():
                if (i2, p2) not in cx.blocks:
                    raise CartanError(
                        f"operator image leaves the complex: "
                        f"bidegree {(i2, p2)}")
                tblk = cx.blocks[(i2, p2)]
                wv = [Fraction(0)] * (len(tblk.monos) * tblk.nf)
                for (mi, fi), val in coords.items():
                    wv[mi * tblk.nf + fi] = val
                # invariant RREF rows: coefficients read off the pivots
                coeffs = [wv[pv] for pv in tblk.pivots]
                resid = list(wv)
                for cval, rowv in zip(coeffs, tblk.rows):
                    if cval != 0:
                        resid = [r - cval * y for r, y in zip(resid, rowv)]
                if any(x != 0 for x in resid):
                    raise CartanError(
                        f"operator image is not invariant at bidegree "
                        f"{(i2, p2)}")
                k2, off2 = cx.offsets[(i2, p2)]
                for jj, cval in enumerate(coeffs):
                    if cval != 0:
                        blocks_by_degree[k][off2 + jj][off + j] += cval
    return LinearOp(cx.space, cx.space, shift,
                    {k: mat(b) for k, b in blocks_by_degree.items()})


# ---------------------------------------------------------------------------
# verification


def verify_cartan(cx: CartanComplex) -> Report:
    rep = Report(f"cartan {cx.model.name} D={cx.D}")
    W = cx.safe_window

    def within(op, bound):
        """Restriction of an operator identity to safe-window degrees."""
        return all(
            not any(any(x != 0 for x in row) for row in op.block(k))
            for k in cx.space.degrees if k <= bound)

    d2 = cx.d.compose(cx.d)
    rep.check("d^2=0", d2.is_zero())
    del2 = cx.del_op.compose(cx.del_op)
    rep.check("del^2=0 (window)", within(del2, W))
    anti = cx.d.compose(cx.del_op).add(cx.del_op.compose(cx.d))
    rep.check("d.del+del.d=0 (window)", within(anti, W))
    dg2 = cx.dG.compose(cx.dG)
    rep.check("dG^2=0 (window)", within(dg2, W))
    if cx.deltaE is None:
        rep.note("codifferential unavailable on this truncated carrier; "
                 "delta identities skipped")
        return rep
    rep.check("delta^2=0", cx.deltaE.compose(cx.deltaE).is_zero())
    a1 = cx.del_op.compose(cx.deltaE).add(cx.deltaE.compose(cx.del_op))
    rep.check("del.delta+delta.del=0 (window)", within(a1, W))
    a2 = cx.dG.compose(cx.deltaE).add(cx.deltaE.compose(cx.dG))
    rep.check("dG.delta+delta.dG=0 (window)", within(a2, W))
    return rep


# ---------------------------------------------------------------------------
# cohomology / formality


def equivariant_cohomology(cx: CartanComplex, k: int):
    """(dimension, canonical representatives) of H_G in total degree k."""
    if k > cx.safe_window:
        raise CartanError(
            f"total degree {k} exceeds the safe window {cx.safe_window} "
            f"for cutoff D={cx.D}; increase D")
    if not cx.space.has_degree(k):
        return 0, ()
    ker = kernel(cx.dG, k)
    im = image(cx.dG, k - 1) if cx.space.has_degree(k - 1) \
        else Subspace.zero(cx.space, k)
    return quotient(ker, im)


def formality_check(cx: CartanComplex) -> Report:
    """Compare dim H_G^k against sum_i dim S^i(g*)^G * dim H^{k-2i}."""
    from .hodge import Cohomology
    rep = Report(f"formality {cx.model.name} D={cx.D}")
    basic_coh = Cohomology(cx.model.base.basic.differential)
    sdims = invariant_s_dims(cx.model.structure, cx.model.rank, cx.D)
    for k in range(cx.safe_window + 1):
        dim_g, _ = equivariant_cohomology(cx, k)
        expected = sum(sdims[i] * basic_coh.dim(k - 2 * i)
                       for i in range(cx.D + 1)
                       if basic_coh.space.has_degree(k - 2 * i))
        rep.check(f"degree_{k}", dim_g == expected,
                  witness=f"dim H_G^{k} = {dim_g}, "
                          f"free-module prediction {expected}")
    return rep


# ---------------------------------------------------------------------------
# iota-exactness and the moment identity


def verify_iota_exactness(cx: CartanComplex, a: int) -> Report:
    """(i) the moment identity iota_a(alpha) = delta(Phi^a alpha) -
    Phi^a delta(alpha) on invariant basic forms; (ii) iota_a of d-closed
    invariant forms is d-exact; (iii) iota_a of delta-closed invariant
    forms is delta-exact.

    The sign in (i) matches the delta-Leibniz convention pinned by the
    commutator table (see hodge.verify_delta_leibniz).
    """
    model = cx.model
    basic = model.base.basic
    pkg = cx.pkg
    rep = Report(f"iota-exactness {model.name} a={a}")
    phi = model.moment[a]
    io = model.iota[a]
    delta = Derivation("odd", -1, pkg.delta)
    cut = basic.poly_cutoff
    pphi = basic.element_poly_degree(phi)
    skipped = 0

    for p in basic.space.degrees:
        lie = model.lie[a].op.block(p)
        inv_rows = nullspace(lie, basic.space.dim(p)) if \
            any(any(x != 0 for x in r) for r in lie) else None
        if inv_rows is None:
            inv_rows = tuple(Subspace.full(basic.space, p).rows)
        for v in inv_rows:
            alpha = basic.element_from_vector(p, v)
            pa = basic.element_poly_degree(alpha)
            if cut is not None and pa + pphi > cut:
                skipped += 1
                continue
            lhs = io(alpha)
            rhs = delta(basic.wedge(phi, alpha)) \
                - basic.wedge(phi, delta(alpha))
            rep.check(f"identity[{p}]", lhs == rhs,
                      witness=None if lhs == rhs else render(lhs - rhs))
        # (ii) and (iii): exactness certificates
        dker = kernel(basic.differential, p).intersect(
            Subspace.from_vectors(basic.space, p, inv_rows))
        for v in dker.rows:
            img = io(basic.element_from_vector(p, v))
            w = img.vector(p - 1)
            if basic.space.dim(p - 1) == 0:
                ok = img.is_zero()
            else:
                sol = solve(basic.differential.block(p - 2)
                            if basic.space.has_degree(p - 2) else (),
                            w) if basic.space.has_degree(p - 2) \
                    else (None if any(x != 0 for x in w) else ())
                ok = sol is not None
            rep.check(f"d_exact[{p}]", ok,
                      witness=None if ok else render(img))
        delker = kernel(pkg.delta, p).intersect(
            Subspace.from_vectors(basic.space, p, inv_rows))
        for v in delker.rows:
            img = io(basic.element_from_vector(p, v))
            w = img.vector(p - 1)
            if basic.space.dim(p - 1) == 0:
                ok = img.is_zero()
            else:
                if basic.space.has_degree(p):
                    sol = solve(pkg.delta.block(p), w)
                    ok = sol is not None
                else:
                    ok = not any(x != 0 for x in w)
            rep.check(f"delta_exact[{p}]", ok,
                      witness=None if ok else render(img))
    if skipped:
        rep.note(f"skipped {skipped} moment-identity checks outside the "
                 f"truncation window (poly_cutoff={cut})")
    return rep


# ---------------------------------------------------------------------------
# the d_G-delta lemma


def dG_delta_lemma_check(cx: CartanComplex) -> Report:
    """Within the safe window: every d_G-exact, delta-closed element is
    d_G delta of something (and symmetrically, every delta-exact,
    d_G-closed element is delta d_G of something).  Each certificate beta
    is emitted and re-substituted."""
    if cx.deltaE is None:
        raise CartanError("no codifferential on this truncated carrier")
    rep = Report(f"dG-delta lemma {cx.model.name} D={cx.D}")
    dG, delta = cx.dG, cx.deltaE
    comp = dG.compose(delta)  # total shift 0
    comp2 = delta.compose(dG)
    for k in range(cx.safe_window + 1):
        if not cx.space.has_degree(k) or cx.space.dim(k) == 0:
            continue
        exact = image(dG, k - 1) if cx.space.has_degree(k - 1) \
            else Subspace.zero(cx.space, k)
        dclosed = kernel(delta, k)
        span = exact.intersect(dclosed)
        for v in span.rows:
            beta = solve(comp.block(k), v)
            ok = beta is not None
            if ok:
                back = comp.apply_block(k, beta)
                ok = tuple(back) == tuple(v)
            rep.check(f"dG_delta[{k}]", ok,
                      witness=None if ok else cx.describe(k, v))
        # symmetric: delta-exact, dG-closed
        dexact = image(delta, k + 1) if cx.space.has_degree(k + 1) \
            else Subspace.zero(cx.space, k)
        span2 = dexact.intersect(kernel(dG, k))
        for v in span2.rows:
            beta = solve(comp2.block(k), v)
            ok = beta is not None
            if ok:
                back = comp2.apply_block(k, beta)
                ok = tuple(back) == tuple(v)
            rep.check(f"delta_dG[{k}]", ok,
                      witness=None if ok else cx.describe(k, v))
    return rep


def delta_homology_triviality(cx: CartanComplex) -> Report:
    """The differentials induced by d and del on the delta-homology vanish:
    d and del of every delta-homology representative are delta-exact."""
    if cx.deltaE is None:
        raise CartanError("no codifferential on this truncated carrier")
    rep = Report(f"delta-homology triviality {cx.model.name}")
    delta = cx.deltaE
    for k in range(cx.safe_window + 1):
        if not cx.space.has_degree(k) or cx.space.dim(k) == 0:
            continue
        ker = kernel(delta, k)
        im = image(delta, k + 1) if cx.space.has_degree(k + 1) \
            else Subspace.zero(cx.space, k)
        _, reps = quotient(ker, im)
        for v in reps:
            for name, op in (("d", cx.d), ("del", cx.del_op)):
                w = op.apply_block(k, v)
                if k + 1 > cx.safe_window:
                    continue
                sol = solve(delta.block(k + 2), w) \
                    if cx.space.has_degree(k + 2) else (
                        () if not any(x != 0 for x in w) else None)
                rep.check(f"{name}_delta_exact[{k}]", sol is not None,
                          witness=None if sol is not None
                          else cx.describe(k + 1, w))
    return rep


# ---------------------------------------------------------------------------
# canonical section


def canonical_section(cx: CartanComplex, cls: Element):
    """Equivariant extension of a harmonic basic class.

    Input: a d- and delta-closed basic representative alpha_0.  Output:
    a total-degree vector alpha = alpha_0 + alpha_1 + ... with alpha_i
    in bidegree (i, p - 2i), each delta-closed, d_G alpha = 0 within the
    safe window, built by solving d alpha_{i+1} = -del alpha_i inside
    ker delta.  The projection p(alpha) = alpha_0 is returned alongside
    for the section identity check.
    """
    basic = cx.model.base.basic
    p0 = cls.degree()
    if p0 is None:
        k0 = 0
        return {}, cls
    if not basic.d(cls).is_zero():
        raise CartanError("input class is not d-closed")
    delta = Derivation("odd", -1, cx.pkg.delta)
    if not delta(cls).is_zero():
        raise CartanError("input class is not delta-closed (harmonize first)")
    if p0 > cx.safe_window:
        raise CartanError("class degree exceeds the safe window; increase D")
    if cx.deltaE is None:
        raise CartanError("no codifferential on this truncated carrier")

    # express alpha_0 in invariant coordinates of bidegree (0, p0)
    blk0 = cx.blocks.get((0, p0))
    if blk0 is None:
        raise CartanError(f"no bidegree (0,{p0}) in the complex")
    w = cls.vector(p0)
    coeffs = [w[pv] for pv in blk0.pivots]
    resid = list(w)
    for cval, rowv in zip(coeffs, blk0.rows):
        resid = [r - cval * y for r, y in zip(resid, rowv)]
    if any(x != 0 for x in resid):
        raise CartanError("class representative is not invariant")

    parts = {0: tuple(coeffs)}
    i = 0
    while True:
        blk = cx.blocks.get((i, p0 - 2 * i))
        if blk is None or p0 - 2 * (i + 1) < 0:
            break
        # obstruction: del alpha_i, in invariant coords of (i+1, p0-2i-2+1)
        k, full = cx.bidegree_vector(i, p0 - 2 * i, parts[i])
        ob = cx.del_op.apply_block(k, full)
        if not any(x != 0 for x in ob):
            break
        if i + 1 > cx.D:
            raise CartanError("cutoff too small, increase D")
        tgt_bi = (i + 1, p0 - 2 * i - 1)
        ob_local = cx.component(k + 1, ob, *tgt_bi)
        # solve d x = -ob, delta x = 0 for x in bidegree (i+1, p0-2i-2)
        src_bi = (i + 1, p0 - 2 * i - 2)
        if src_bi not in cx.blocks:
            raise CartanError("cutoff too small, increase D")
        ks, off = cx.offsets[src_bi]
        nsrc = cx.blocks[src_bi].dim
        dmat = _bidegree_block(cx, cx.d, src_bi, tgt_bi)
        deltam = _bidegree_block(cx, cx.deltaE,
                                 src_bi, (i + 1, p0 - 2 * i - 3)) \
            if (i + 1, p0 - 2 * i - 3) in cx.blocks else ()
        stacked = tuple(dmat) + tuple(deltam)
        rhs = tuple(-x for x in ob_local) + tuple(
            Fraction(0) for _ in range(len(deltam)))
        sol = solve(stacked, rhs)
        if sol is None:
            raise CartanError(
                "section obstruction is not solvable in ker delta "
                "(d_G-delta lemma violated)")
        parts[i + 1] = tuple(sol)
        i += 1

    return parts, cls


def _bidegree_block(cx: CartanComplex, op: LinearOp, src, tgt) -> Mat:
    """Sub-block of a total-space operator between two bidegrees."""
    ks, offs = cx.offsets[src]
    kt, offt = cx.offsets[tgt]
    ns = cx.blocks[src].dim
    nt = cx.blocks[tgt].dim
    full = op.block(ks)
    return tuple(tuple(full[offt + r][offs + c] for c in range(ns))
                 for r in range(nt))


def section_projects_to_identity(cx: CartanComplex, parts: dict,
                                 cls: Element) -> bool:
    """p(s([alpha])) = [alpha]: the S-degree-0 part of the section equals
    the input representative."""
    p0 = cls.degree()
    if p0 is None:
        return True
    blk = cx.blocks[(0, p0)]
    w = [Fraction(0)] * (blk.nf)
    for cval, rowv in zip(parts.get(0, ()), blk.rows):
        w = [x + cval * y for x, y in zip(w, rowv)]
    return tuple(w) == cls.vector(p0)


def section_is_dG_closed(cx: CartanComplex, parts: dict, p0: int) -> bool:
    """d_G of the assembled section vanishes in total degree p0 + 1
    (within the safe window)."""
    if p0 + 1 > cx.safe_window:
        return True
    total = [Fraction(0)] * cx.space.dim(p0)
    for i, comp in parts.items():
        k, full = cx.bidegree_vector(i, p0 - 2 * i, comp)
        total = [x + y for x, y in zip(total, full)]
    out = cx.dG.apply_block(p0, tuple(total))
    return not any(x != 0 for x in out)
