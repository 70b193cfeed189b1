"""Foliated and equivariant algebraic models.

A ``FoliatedModel`` packages a finite CDGA model of a manifold together
with the contractions along a leafwise frame, a closed degree-2 element
``omega`` whose degree-1 kernel is exactly the leafwise span, and a
characteristic element ``chi`` used for transverse integration.  The
basic subcomplex (joint kernel of all leafwise contractions and Lie
derivatives) is extracted on construction with its restricted product
and differential.

An ``EquivariantModel`` adds a Lie algebra action: structure constants,
contraction derivations, and moment elements satisfying dPhi^a =
iota_a(omega).

Builders for the example zoo (tori, the 5-dimensional Heisenberg
nilmanifold, a co-symplectic 5-manifold, the Kodaira-Thurston negative
control, and a truncated polynomial model with a rotation action) live
here, as do the JSON model-file reader and writer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .gca import (Derivation, Element, GcaError, ModelAlgebra, Report,
                  derivation_from_generators, free_gca, install_differential,
                  parse_expression, render, verify_cdga)
from .linalg import (Fraction, LinearOp, Subspace, anticommutator, fr, mat,
                     nullspace, rref)


class FoliationError(Exception):
    pass


# ---------------------------------------------------------------------------
# contractions dual to the degree-1 coframe


def contraction_dual_to(algebra: ModelAlgebra, name: str) -> Derivation:
    """Odd derivation iota(X) for X the frame vector dual to a degree-1
    generator: sends that generator to 1 and every other generator to 0."""
    g = algebra.generator(name)
    if g.degree() != 1:
        raise FoliationError(f"generator {name!r} is not of degree 1")
    return derivation_from_generators(
        algebra, "odd", -1, {name: algebra.unit()}, name=f"iota({name})")


def lie_derivative(algebra: ModelAlgebra, iota: Derivation) -> Derivation:
    """L(X) = d iota(X) + iota(X) d."""
    op = anticommutator(algebra.differential, iota.op)
    return Derivation("even", 0, op, name=f"L[{iota.name}]")


# ---------------------------------------------------------------------------
# basic subcomplex extraction


def extract_basic(ambient: ModelAlgebra,
                  leafwise: Sequence[Derivation]) -> tuple[ModelAlgebra, dict]:
    """Joint kernel of all iota(X_i) and L(X_i), with restricted structure.

    Returns the basic algebra and the key map basic->ambient.  The basic
    subspace of every shipped model is spanned by basis monomials of the
    ambient algebra; a non-monomial kernel is rejected.
    """
    if not leafwise:
        ident = {(k, i): (k, i) for k in ambient.space.degrees
                 for i in range(ambient.space.dim(k))}
        return ambient, ident

    ops = []
    for io in leafwise:
        ops.append(io.op)
        ops.append(lie_derivative(ambient, io).op)

    selected: dict[int, list[int]] = {}
    for k in ambient.space.degrees:
        nk = ambient.space.dim(k)
        stacked = []
        for op in ops:
            stacked.extend(op.block(k))
        rows = nullspace(tuple(stacked), nk) if stacked else None
        if rows is None:
            rows = tuple(Subspace.full(ambient.space, k).rows)
        idx = []
        for r in rows:
            nz = [j for j, x in enumerate(r) if x != 0]
            if len(nz) != 1 or r[nz[0]] != 1:
                raise FoliationError(
                    "basic subcomplex is not spanned by basis monomials "
                    f"in degree {k}: {r}")
            idx.append(nz[0])
        selected[k] = sorted(idx)

    key_map = {}
    labels = {}
    for k, idxs in selected.items():
        amb_labels = ambient.space.labels(k)
        labels[k] = [amb_labels[j] for j in idxs]
        for i, j in enumerate(idxs):
            key_map[(k, i)] = (k, j)
    from .linalg import GradedSpace
    space = GradedSpace(labels)
    inv = {v: k for k, v in key_map.items()}

    if ambient.unit_key not in inv:
        raise FoliationError("the unit is not a basic element")

    def restrict(elem: Element, what: str) -> dict:
        out = {}
        for key, c in elem.coords.items():
            if key not in inv:
                raise FoliationError(
                    f"not a foliated model: {what} leaves the basic "
                    f"subcomplex, witness {render(elem)}")
            out[inv[key]] = c
        return out

    product = {}
    for (k1, i1), a1 in key_map.items():
        for (k2, i2), a2 in key_map.items():
            terms = ambient.product.get((a1, a2), ())
            entries = []
            for key, c in terms:
                if key not in inv:
                    raise FoliationError(
                        "not a foliated model: product leaves the basic "
                        f"subcomplex at {a1} * {a2}")
                entries.append((inv[key], c))
            if entries:
                product[((k1, i1), (k2, i2))] = tuple(entries)

    blocks = {}
    for k in space.degrees:
        cols = []
        tgt = space.dim(k + 1)
        for i in range(space.dim(k)):
            img = ambient.d(ambient.basis_element(*key_map[(k, i)]))
            coords = restrict(img, "d")
            col = [Fraction(0)] * tgt
            for (kk, ii), c in coords.items():
                col[ii] = c
            cols.append(col)
        blocks[k] = mat([[cols[i][r] for i in range(space.dim(k))]
                         for r in range(tgt)])
    diff = LinearOp(space, space, 1, blocks)

    gen_elts = {}
    for name, coords in ambient.generator_elements.items():
        if all(key in inv for key in coords):
            gen_elts[name] = {inv[key]: c for key, c in coords.items()}

    monomials = None
    if ambient.monomials is not None:
        monomials = {bk: ambient.monomials[ak] for bk, ak in key_map.items()}
    even_names = tuple(n for n in ambient.even_names if n in gen_elts)
    odd_names = tuple(n for n in ambient.odd_names if n in gen_elts)

    basic = ModelAlgebra(space, inv[ambient.unit_key], product, diff,
                         generator_elements=gen_elts,
                         even_names=even_names, odd_names=odd_names,
                         monomials=monomials, poly_cutoff=ambient.poly_cutoff)
    return basic, key_map


# ---------------------------------------------------------------------------
# models


@dataclass
class FoliatedModel:
    """Transversely symplectic model with its computed basic subcomplex."""

    name: str
    ambient: ModelAlgebra
    leafwise_names: tuple[str, ...]
    leafwise: tuple[Derivation, ...]
    omega: Element
    chi: Element
    basic: ModelAlgebra
    basic_to_ambient: dict
    n: int
    top_key: tuple[int, int]

    @property
    def ambient_to_basic(self) -> dict:
        return {v: k for k, v in self.basic_to_ambient.items()}

    def include(self, b: Element) -> Element:
        """Basic element viewed inside the ambient algebra."""
        return Element(self.ambient,
                       {self.basic_to_ambient[k]: c
                        for k, c in b.coords.items()})

    def restrict(self, a: Element) -> Element:
        """Ambient element re-coordinatized on the basic basis."""
        inv = self.ambient_to_basic
        out = {}
        for k, c in a.coords.items():
            if k not in inv:
                raise FoliationError(
                    f"element is not basic: {render(a)}")
            out[inv[k]] = c
        return Element(self.basic, out)

    @property
    def omega_basic(self) -> Element:
        return self.restrict(self.omega)

    def integral_top(self, a: Element) -> Fraction:
        """Coefficient of the distinguished ambient top basis monomial."""
        return a.coords.get(self.top_key, Fraction(0))

    def integral(self, b: Element) -> Fraction:
        """Transverse integral of a basic element: top coefficient of
        the ambient product with chi."""
        return self.integral_top(self.ambient.wedge(self.include(b),
                                                    self.chi))


def make_foliated(name: str, ambient: ModelAlgebra, omega: Element,
                  leafwise_names: Sequence[str], chi: Element) -> FoliatedModel:
    leafwise_names = tuple(leafwise_names)
    leafwise = tuple(contraction_dual_to(ambient, g) for g in leafwise_names)
    basic, key_map = extract_basic(ambient, leafwise)
    top_basic = basic.top_degree()
    if top_basic % 2 != 0:
        raise FoliationError(
            f"basic top degree {top_basic} is odd; no transverse "
            "symplectic structure")
    top_amb = ambient.top_degree()
    top_key = (top_amb, ambient.space.dim(top_amb) - 1)
    return FoliatedModel(name, ambient, leafwise_names, leafwise,
                         omega, chi, basic, key_map,
                         n=top_basic // 2, top_key=top_key)


@dataclass
class EquivariantModel:
    """Lie algebra action on a foliated model.

    ``iota_ambient`` are the contraction derivations on the ambient
    algebra; ``iota`` their restrictions to the basic complex (the
    operators the Cartan model actually uses); ``moment`` the degree-0
    basic moment elements with dPhi^a = iota_a(omega).
    """

    name: str
    base: FoliatedModel
    rank: int
    structure: tuple  # structure[a][b][c] = coefficient of xi_c in [xi_a,xi_b]
    iota_ambient: tuple[Derivation, ...]
    iota: tuple[Derivation, ...]
    lie: tuple[Derivation, ...]
    moment: tuple[Element, ...]


def restrict_derivation(model: FoliatedModel, der: Derivation) -> Derivation:
    """Restriction of an ambient derivation to the basic subcomplex.

    Fails when the derivation does not preserve basic forms."""
    basic = model.basic
    blocks = {}
    for k in basic.space.degrees:
        tgt = basic.space.dim(k + der.shift)
        cols = []
        for i in range(basic.space.dim(k)):
            img = der(model.include(basic.basis_element(k, i)))
            col = [Fraction(0)] * tgt
            for key, c in model.restrict(img).coords.items():
                col[key[1]] = c
            cols.append(col)
        blocks[k] = mat([[cols[i][r] for i in range(basic.space.dim(k))]
                         for r in range(tgt)])
    return Derivation(der.parity, der.shift,
                      LinearOp(basic.space, basic.space, der.shift, blocks),
                      name=der.name)


def make_equivariant(name: str, base: FoliatedModel, rank: int,
                     structure, iota_ambient: Sequence[Derivation],
                     moment: Sequence[Element]) -> EquivariantModel:
    structure = tuple(
        tuple(tuple(fr(structure[a][b][c]) for c in range(rank))
              for b in range(rank))
        for a in range(rank))
    iota_ambient = tuple(iota_ambient)
    iota = tuple(restrict_derivation(base, io) for io in iota_ambient)
    lie = tuple(
        Derivation("even", 0,
                   anticommutator(base.basic.differential, io.op),
                   name=f"L[{io.name}]")
        for io in iota)
    return EquivariantModel(name, base, rank, structure, iota_ambient,
                            iota, lie, tuple(moment))


def trivial_action(base: FoliatedModel, rank: int = 1) -> EquivariantModel:
    """Abelian action with zero contractions and zero moments."""
    zero_der = Derivation("odd", -1,
                          LinearOp.zero(base.ambient.space,
                                        base.ambient.space, -1))
    structure = [[[0] * rank for _ in range(rank)] for _ in range(rank)]
    return make_equivariant(f"{base.name}+trivial({rank})", base, rank,
                            structure,
                            [zero_der] * rank,
                            [base.basic.zero()] * rank)


def reeb_action(base: FoliatedModel) -> EquivariantModel:
    """Rank-1 transversely trivial action along the first leafwise
    direction: the contraction kills every basic form, the moment is 0."""
    if not base.leafwise:
        raise FoliationError("model has no leafwise direction")
    return make_equivariant(f"{base.name}+reeb", base, 1, [[[0]]],
                            [base.leafwise[0]], [base.basic.zero()])


def rotation_action(base: FoliatedModel) -> EquivariantModel:
    """The linear rotation circle action on a truncated polynomial model,
    with moment -(sum(x_i^2 + y_i^2))/2."""
    alg = base.ambient
    names = set(alg.even_names)
    pairs = []
    i = 1
    while f"x{i}" in names:
        pairs.append(i)
        i += 1
    if not pairs:
        raise FoliationError("model has no coordinate generators x_i, y_i")
    images = {}
    for i in pairs:
        images[f"dx{i}"] = alg.generator(f"y{i}").scale(-1)
        images[f"dy{i}"] = alg.generator(f"x{i}")
    io = derivation_from_generators(alg, "odd", -1, images, name="iota(rot)")
    phi = alg.zero()
    for i in pairs:
        x, y = alg.generator(f"x{i}"), alg.generator(f"y{i}")
        phi = phi - (alg.wedge(x, x) + alg.wedge(y, y)).scale(Fraction(1, 2))
    return make_equivariant(f"{base.name}+rotation", base, 1, [[[0]]],
                            [io], [base.restrict(phi)])


# ---------------------------------------------------------------------------
# builders


def torus(n: int) -> FoliatedModel:
    """Exterior algebra on e1..e2n with d = 0 and the standard omega."""
    if n < 1:
        raise FoliationError("torus(n) needs n >= 1")
    gens = [(f"e{i}", 1) for i in range(1, 2 * n + 1)]
    alg = free_gca(gens)
    omega = alg.zero()
    for i in range(1, 2 * n + 1, 2):
        omega = omega + alg.wedge(alg.generator(f"e{i}"),
                                  alg.generator(f"e{i + 1}"))
    return make_foliated(f"torus{n}", alg, omega, (), alg.unit())


def heisenberg5() -> FoliatedModel:
    """5-dimensional Heisenberg nilmanifold model: de5 = e1^e2 + e3^e4,
    the Reeb-type direction dual to e5 is leafwise."""
    alg = free_gca([(f"e{i}", 1) for i in range(1, 6)])
    omega = parse_expression("e1^e2 + e3^e4", alg)
    install_differential(alg, {"e5": omega})
    return make_foliated("heisenberg5", alg, omega, ("e5",),
                         alg.generator("e5"))


def kodaira_thurston() -> FoliatedModel:
    """Kodaira-Thurston model: de4 = e1^e2, omega = e1^e4 + e2^e3.

    Symplectic but not hard Lefschetz (b1 = 3); the standard negative
    control."""
    alg = free_gca([(f"e{i}", 1) for i in range(1, 5)])
    install_differential(alg, {"e4": parse_expression("e1^e2", alg)})
    omega = parse_expression("e1^e4 + e2^e3", alg)
    return make_foliated("kodaira_thurston", alg, omega, (), alg.unit())


def cosym5() -> FoliatedModel:
    """Co-symplectic 5-manifold model: d = 0, eta = e5, omega = e1^e2+e3^e4,
    with eta ^ omega^2 a volume form."""
    alg = free_gca([(f"e{i}", 1) for i in range(1, 6)])
    omega = parse_expression("e1^e2 + e3^e4", alg)
    return make_foliated("cosym5", alg, omega, ("e5",), alg.generator("e5"))


def trunc_linear(n: int, D: int) -> FoliatedModel:
    """Polynomial-coefficient forms on a 2n-dimensional symplectic vector
    space, truncated at polynomial degree D, omega = sum dx_i ^ dy_i."""
    if n < 1 or D < 2:
        raise FoliationError("trunc_linear needs n >= 1 and D >= 2")
    gens = []
    for i in range(1, n + 1):
        gens += [(f"x{i}", 0), (f"y{i}", 0)]
    for i in range(1, n + 1):
        gens += [(f"dx{i}", 1), (f"dy{i}", 1)]
    alg = free_gca(gens, poly_cutoff=D)
    images = {}
    for i in range(1, n + 1):
        images[f"x{i}"] = alg.generator(f"dx{i}")
        images[f"y{i}"] = alg.generator(f"dy{i}")
    install_differential(alg, images)
    omega = alg.zero()
    for i in range(1, n + 1):
        omega = omega + alg.wedge(alg.generator(f"dx{i}"),
                                  alg.generator(f"dy{i}"))
    return make_foliated(f"trunc_linear({n},{D})", alg, omega, (),
                         alg.unit())


BUILDERS = {
    "torus1": lambda: torus(1),
    "torus2": lambda: torus(2),
    "torus3": lambda: torus(3),
    "heisenberg5": heisenberg5,
    "kodaira_thurston": kodaira_thurston,
    "cosym5": cosym5,
}


def build(name: str) -> FoliatedModel:
    """Builder lookup by CLI name (trunc_linear_<n>_<D> is parametric)."""
    if name in BUILDERS:
        return BUILDERS[name]()
    if name.startswith("trunc_linear_"):
        parts = name.split("_")
        if len(parts) == 4:
            try:
                return trunc_linear(int(parts[2]), int(parts[3]))
            except ValueError:
                pass
    raise FoliationError(f"unknown builder {name!r}")


# ---------------------------------------------------------------------------
# validation


def validate_model(model) -> Report:
    if isinstance(model, EquivariantModel):
        rep = validate_model(model.base)
        rep.merge(_validate_action(model))
        rep.title = f"validate {model.name}"
        return rep

    rep = Report(f"validate {model.name}")
    alg = model.ambient
    rep.merge(verify_cdga(alg))

    omega = model.omega
    rep.check("omega_degree_2", not omega.is_zero() and omega.degree() == 2)
    rep.check("omega_closed", alg.d(omega).is_zero(),
              witness=render(alg.d(omega)))

    # kernel of the omega-contraction on the degree-1 frame = leafwise span
    frame = [n for n in alg.odd_names
             if alg.generator(n).degree() == 1]
    cols = [contraction_dual_to(alg, g)(omega).vector(1) for g in frame]
    m = tuple(tuple(cols[j][r] for j in range(len(frame)))
              for r in range(alg.space.dim(1)))
    ker = nullspace(m, len(frame))
    expected = [[fr(1 if g == lf else 0) for g in frame]
                for lf in model.leafwise_names]
    exp_rref, piv = rref(mat(expected)) if expected else ((), ())
    rep.check("omega_kernel_is_leafwise",
              tuple(ker) == exp_rref[:len(piv)],
              witness=f"kernel {ker} != leafwise span")

    # basic elements die under every leafwise contraction and Lie derivative
    for io in model.leafwise:
        lx = lie_derivative(alg, io)
        for k in model.basic.space.degrees:
            for i in range(model.basic.space.dim(k)):
                b = model.include(model.basic.basis_element(k, i))
                rep.check(f"basic_killed[{io.name},{k},{i}]",
                          io(b).is_zero() and lx(b).is_zero())
    for i, io1 in enumerate(model.leafwise):
        for io2 in model.leafwise[i:]:
            ac = anticommutator(io1.op, io2.op)
            rep.check(f"iota_anticommute[{io1.name},{io2.name}]",
                      ac.is_zero())

    # transverse nondegeneracy
    wb = model.omega_basic
    wn = model.basic.power(wb, model.n)
    rep.check("omega_n_nonzero", not wn.is_zero())
    rep.check("omega_n_plus_1_zero",
              model.basic.wedge(wn, wb).is_zero())

    # characteristic element chi
    l = len(model.leafwise)
    chi = model.chi
    rep.check("chi_degree", (chi.degree() or 0) == l)
    co = chi
    dco = alg.d(chi)
    for io in model.leafwise:
        co = io(co)
        dco = io(dco)
    rep.check("chi_normalized", co == alg.unit(),
              witness=render(co))
    rep.check("chi_taut", dco.is_zero(), witness=render(dco))
    if l:
        vol = alg.wedge(model.include(wn), chi)
        rep.check("chi_wedge_omega_n_volume",
                  model.integral_top(vol) != 0,
                  witness=render(vol))
    return rep


def _validate_action(eq: EquivariantModel) -> Report:
    rep = Report(f"action {eq.name}")
    r = eq.rank
    c = eq.structure

    for a in range(r):
        for b in range(r):
            for cc in range(r):
                rep.check(f"antisym[{a},{b},{cc}]",
                          c[a][b][cc] == -c[b][a][cc])
    for a in range(r):
        for b in range(r):
            for d in range(r):
                for e in range(r):
                    jac = sum(c[a][b][f] * c[f][d][e]
                              + c[b][d][f] * c[f][a][e]
                              + c[d][a][f] * c[f][b][e]
                              for f in range(r))
                    rep.check(f"jacobi[{a},{b},{d},{e}]", jac == 0)

    basic = eq.base.basic
    wb = eq.base.omega_basic
    for a in range(r):
        for b in range(r):
            ac = anticommutator(eq.iota[a].op, eq.iota[b].op)
            rep.check(f"iota_iota[{a},{b}]", ac.is_zero())
            br = eq.lie[a].op.compose(eq.iota[b].op).sub(
                eq.iota[b].op.compose(eq.lie[a].op))
            want = LinearOp.zero(basic.space, basic.space, -1)
            for cc in range(r):
                if c[a][b][cc] != 0:
                    want = want.add(eq.iota[cc].op.scale(c[a][b][cc]))
            rep.check(f"cartan_L_iota[{a},{b}]", br.equals(want))
            brl = eq.lie[a].op.compose(eq.lie[b].op).sub(
                eq.lie[b].op.compose(eq.lie[a].op))
            wantl = LinearOp.zero(basic.space, basic.space, 0)
            for cc in range(r):
                if c[a][b][cc] != 0:
                    wantl = wantl.add(eq.lie[cc].op.scale(c[a][b][cc]))
            rep.check(f"cartan_L_L[{a},{b}]", brl.equals(wantl))

    for a in range(r):
        phi = eq.moment[a]
        rep.check(f"moment_degree[{a}]",
                  phi.is_zero() or phi.degree() == 0)
        resid = basic.d(phi) - eq.iota[a](wb)
        rep.check(f"moment_condition[{a}]", resid.is_zero(),
                  witness=render(resid))
        for b in range(r):
            want = basic.zero()
            for cc in range(r):
                if c[a][cc][b] != 0:
                    want = want - eq.moment[cc].scale(c[a][cc][b])
            got = eq.lie[a](eq.moment[b])
            rep.check(f"moment_equivariance[{a},{b}]", got == want,
                      witness=render(got - want))

    # omega invariance
    for a in range(r):
        lw = eq.lie[a](wb)
        rep.check(f"omega_invariant[{a}]", lw.is_zero(), witness=render(lw))
    return rep


# ---------------------------------------------------------------------------
# JSON model files


SCHEMA_TAG = "transym-model/1"


def model_to_dict(model) -> dict:
    eq = model if isinstance(model, EquivariantModel) else None
    base = eq.base if eq else model
    alg = base.ambient
    gens = []
    for n in alg.even_names:
        gens.append([n, 0])
    for n in alg.odd_names:
        gens.append([n, alg.generator(n).degree()])
    diff = {}
    for n, _ in gens:
        img = alg.d(alg.generator(n))
        if not img.is_zero():
            diff[n] = render(img)
    doc = {
        "schema": SCHEMA_TAG,
        "name": base.name,
        "generators": gens,
        "truncation": alg.poly_cutoff,
        "differential": diff,
        "omega": render(base.omega),
        "foliation": list(base.leafwise_names),
        "chi": render(base.chi),
        "action": None,
    }
    if eq:
        iotas = []
        for io in eq.iota_ambient:
            entry = {}
            for n, _ in gens:
                img = io(alg.generator(n))
                if not img.is_zero():
                    entry[n] = render(img)
            iotas.append(entry)
        doc["action"] = {
            "rank": eq.rank,
            "structure_constants": [
                [[str(eq.structure[a][b][c]) for c in range(eq.rank)]
                 for b in range(eq.rank)]
                for a in range(eq.rank)
            ],
            "iota": iotas,
            "moment": [render(base.include(phi)) for phi in eq.moment],
        }
    return doc


def model_from_dict(doc: dict):
    if doc.get("schema") != SCHEMA_TAG:
        raise FoliationError(
            f"unknown schema tag {doc.get('schema')!r}")
    gens = [(str(n), int(d)) for n, d in doc["generators"]]
    alg = free_gca(gens, poly_cutoff=doc.get("truncation"))
    diff = {n: parse_expression(expr, alg)
            for n, expr in doc.get("differential", {}).items()}
    install_differential(alg, diff)
    omega = parse_expression(doc["omega"], alg, homogeneous=True)
    chi = parse_expression(doc["chi"], alg, homogeneous=True)
    base = make_foliated(doc.get("name", "model"), alg, omega,
                         tuple(doc.get("foliation", ())), chi)
    act = doc.get("action")
    if not act:
        return base
    rank = int(act["rank"])
    structure = [
        [[Fraction(act["structure_constants"][a][b][c])
          for c in range(rank)] for b in range(rank)]
        for a in range(rank)
    ]
    iotas = []
    for entry in act["iota"]:
        images = {n: parse_expression(expr, alg)
                  for n, expr in entry.items()}
        iotas.append(derivation_from_generators(alg, "odd", -1, images))
    moments = [base.restrict(parse_expression(expr, alg, homogeneous=False))
               for expr in act["moment"]]
    return make_equivariant(doc.get("name", "model"), base, rank, structure,
                            iotas, moments)


def save_model(model, path: str) -> None:
    with open(path, "w") as f:
        json.dump(model_to_dict(model), f, indent=2, sort_keys=True)
        f.write("\n")


def load_model(path: str):
    with open(path) as f:
        return model_from_dict(json.load(f))
