"""Affine algebraic groupoids presented by their structure comorphisms.

A groupoid G over X is stored contravariantly: source and target as
morphisms k[X] -> k[G], the unit bisection as k[G] -> k[X], inversion as
k[G] -> k[G], and multiplication as k[G] -> k[G] (x)_{k[X]} k[G] where the
coproduct is taken along (source, target).  All axioms are verified as
comorphism identities, generator by generator, with normal-form-zero
certificates.

A symplectic groupoid additionally carries Poisson structures on total and
base spaces; the defining condition is coisotropy of the multiplication
graph in G x G x G^-, plus the source being anti-Poisson and the target
Poisson.  Nondegeneracy is certified by a unit-determinant check on a
principal block of the bracket matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .arith import Polynomial, VarList
from .groebner import Ideal, rename_polynomial
from .algebra import (
    AlgebraMorphism,
    FiberedCoproduct,
    PresentedAlgebra,
    TensorAlgebra,
    check_morphism,
    fibered_coproduct,
    morphism_defect,
    product_algebra,
    quotient,
    tensor_many,
)
from .poisson import PoissonStructure, coisotropy_defect, poisson_morphism_defect, product_structure, tensor_structure, check_jacobi
from .checks import CheckReport


@dataclass
class AffineGroupoid:
    """Groupoid data in comorphism form.  Axioms are verified by
    :func:`check_groupoid_axioms`, not at construction, so deliberately
    broken inputs can be built and reported on."""

    base: PresentedAlgebra
    total: PresentedAlgebra
    src: AlgebraMorphism
    tgt: AlgebraMorphism
    unit: AlgebraMorphism
    inv: AlgebraMorphism
    mult: AlgebraMorphism
    mult_coproduct: FiberedCoproduct
    label: str = ""

    def __post_init__(self):
        if self.src.source.variables != self.base.variables or self.src.target.variables != self.total.variables:
            raise ValueError("source comorphism must map base to total")
        if self.tgt.source.variables != self.base.variables or self.tgt.target.variables != self.total.variables:
            raise ValueError("target comorphism must map base to total")
        if self.unit.source.variables != self.total.variables or self.unit.target.variables != self.base.variables:
            raise ValueError("unit comorphism must map total to base")
        if self.inv.source.variables != self.total.variables or self.inv.target.variables != self.total.variables:
            raise ValueError("inversion comorphism must map total to total")
        if self.mult.source.variables != self.total.variables:
            raise ValueError("multiplication comorphism must start at the total algebra")
        if self.mult.target.variables != self.mult_coproduct.result.variables:
            raise ValueError("multiplication comorphism must land in the recorded coproduct")

    def same_presentation(self, other: "AffineGroupoid") -> bool:
        if not (self.base.same_presentation(other.base) and self.total.same_presentation(other.total)):
            return False
        return all(
            a.equals(b)
            for a, b in (
                (self.src, other.src),
                (self.tgt, other.tgt),
                (self.unit, other.unit),
                (self.inv, other.inv),
                (self.mult, other.mult),
            )
        )


@dataclass
class SymplecticGroupoid:
    groupoid: AffineGroupoid
    total_poisson: PoissonStructure
    base_poisson: PoissonStructure
    factors: tuple["SymplecticGroupoid", ...] | None = None

    def __post_init__(self):
        if self.total_poisson.algebra.variables != self.groupoid.total.variables:
            raise ValueError("total Poisson structure over the wrong variables")
        if self.base_poisson.algebra.variables != self.groupoid.base.variables:
            raise ValueError("base Poisson structure over the wrong variables")

    @property
    def base(self) -> PresentedAlgebra:
        return self.groupoid.base

    @property
    def total(self) -> PresentedAlgebra:
        return self.groupoid.total

    def same_presentation(self, other: "SymplecticGroupoid") -> bool:
        return (
            self.groupoid.same_presentation(other.groupoid)
            and self.total_poisson.matrix == other.total_poisson.matrix
            and self.base_poisson.matrix == other.base_poisson.matrix
        )


def as_affine(g: "AffineGroupoid | SymplecticGroupoid") -> AffineGroupoid:
    return g.groupoid if isinstance(g, SymplecticGroupoid) else g


def as_symplectic(g: "AffineGroupoid | SymplecticGroupoid") -> SymplecticGroupoid | None:
    return g if isinstance(g, SymplecticGroupoid) else None


# ---------------------------------------------------------------------------
# Axiom verification
# ---------------------------------------------------------------------------


def _subst_into(f: Polynomial, images: dict[str, Polynomial], target: VarList) -> Polynomial:
    return f.substitute(images, target)


def check_groupoid_axioms(g: AffineGroupoid | SymplecticGroupoid) -> CheckReport:
    """Verify the groupoid axioms as comorphism identities on generators.

    Checks, in order: well-definedness of the five structure maps; the unit
    bisection being a section of source and target; source/target
    compatibility of multiplication; left and right unit laws;
    coassociativity of multiplication; inversion exchanging source and
    target; both inverse laws.
    """
    g = as_affine(g)
    report = CheckReport(f"groupoid axioms for {g.label or 'groupoid'}")
    fc = g.mult_coproduct
    total_alg = g.total
    base_alg = g.base

    for name, phi in (
        ("src well-defined", g.src),
        ("tgt well-defined", g.tgt),
        ("unit well-defined", g.unit),
        ("inv well-defined", g.inv),
        ("mult well-defined", g.mult),
    ):
        defect = morphism_defect(phi)
        if defect is None:
            report.add(name, True)
        else:
            r, nf = defect
            report.add(name, False, witness=str(r), detail=str(nf))

    # 1* . s* = id and 1* . t* = id on the base
    for f in base_alg.variables:
        nf = base_alg.normal_form(g.unit.apply(g.src.images[f]) - base_alg.var(f))
        report.add(f"unit section of src on {f}", nf.is_zero(), witness=None if nf.is_zero() else f, detail=None if nf.is_zero() else str(nf))
        nf = base_alg.normal_form(g.unit.apply(g.tgt.images[f]) - base_alg.var(f))
        report.add(f"unit section of tgt on {f}", nf.is_zero(), witness=None if nf.is_zero() else f, detail=None if nf.is_zero() else str(nf))

    # source of a product is the source of the right factor; target of a
    # product is the target of the left factor
    fc_alg = fc.result
    for f in base_alg.variables:
        lhs = g.mult.apply(g.src.images[f])
        rhs = fc.include_right(g.src.images[f])
        nf = fc_alg.normal_form(lhs - rhs)
        report.add(f"mult src-compat on {f}", nf.is_zero(), witness=None if nf.is_zero() else f, detail=None if nf.is_zero() else str(nf))
        lhs = g.mult.apply(g.tgt.images[f])
        rhs = fc.include_left(g.tgt.images[f])
        nf = fc_alg.normal_form(lhs - rhs)
        report.add(f"mult tgt-compat on {f}", nf.is_zero(), witness=None if nf.is_zero() else f, detail=None if nf.is_zero() else str(nf))

    # unit laws
    pl, pr = fc.prefixes
    left_unit = {}
    right_unit = {}
    for x in total_alg.variables:
        left_unit[pl + x] = g.tgt.apply(g.unit.images[x])
        left_unit[pr + x] = total_alg.var(x)
        right_unit[pl + x] = total_alg.var(x)
        right_unit[pr + x] = g.src.apply(g.unit.images[x])
    for h in total_alg.variables:
        val = _subst_into(g.mult.images[h], left_unit, total_alg.variables)
        nf = total_alg.normal_form(val - total_alg.var(h))
        report.add(f"left unit law on {h}", nf.is_zero(), witness=None if nf.is_zero() else h, detail=None if nf.is_zero() else str(nf))
        val = _subst_into(g.mult.images[h], right_unit, total_alg.variables)
        nf = total_alg.normal_form(val - total_alg.var(h))
        report.add(f"right unit law on {h}", nf.is_zero(), witness=None if nf.is_zero() else h, detail=None if nf.is_zero() else str(nf))

    # coassociativity inside k[G] (x)_{k[X]} k[G] (x)_{k[X]} k[G]
    t3 = _composable_triples(g)
    t3_alg = t3.result
    p1, p2, p3 = t3.prefixes
    expand_left = {}
    expand_right = {}
    for x in total_alg.variables:
        m = g.mult.images[x]
        expand_left[x] = rename_polynomial(m, t3_alg.variables, _shift_map(fc, p1, p2))
        expand_right[x] = rename_polynomial(m, t3_alg.variables, _shift_map(fc, p2, p3))
    sub_l = {}
    sub_r = {}
    for x in total_alg.variables:
        sub_l[pl + x] = expand_left[x]
        sub_l[pr + x] = t3_alg.var(p3 + x)
        sub_r[pl + x] = t3_alg.var(p1 + x)
        sub_r[pr + x] = expand_right[x]
    for h in total_alg.variables:
        lhs = _subst_into(g.mult.images[h], sub_l, t3_alg.variables)
        rhs = _subst_into(g.mult.images[h], sub_r, t3_alg.variables)
        nf = t3_alg.normal_form(lhs - rhs)
        report.add(f"coassociativity on {h}", nf.is_zero(), witness=None if nf.is_zero() else h, detail=None if nf.is_zero() else str(nf))

    # inversion exchanges source and target
    for f in base_alg.variables:
        nf = total_alg.normal_form(g.inv.apply(g.src.images[f]) - g.tgt.images[f])
        report.add(f"inv swaps src/tgt on {f}", nf.is_zero(), witness=None if nf.is_zero() else f, detail=None if nf.is_zero() else str(nf))
        nf = total_alg.normal_form(g.inv.apply(g.tgt.images[f]) - g.src.images[f])
        report.add(f"inv swaps tgt/src on {f}", nf.is_zero(), witness=None if nf.is_zero() else f, detail=None if nf.is_zero() else str(nf))

    # inverse laws: g * inv(g) = 1(t(g)) and inv(g) * g = 1(s(g))
    right_inv = {}
    left_inv = {}
    for x in total_alg.variables:
        right_inv[pl + x] = total_alg.var(x)
        right_inv[pr + x] = g.inv.images[x]
        left_inv[pl + x] = g.inv.images[x]
        left_inv[pr + x] = total_alg.var(x)
    for h in total_alg.variables:
        val = _subst_into(g.mult.images[h], right_inv, total_alg.variables)
        nf = total_alg.normal_form(val - g.tgt.apply(g.unit.images[h]))
        report.add(f"right inverse law on {h}", nf.is_zero(), witness=None if nf.is_zero() else h, detail=None if nf.is_zero() else str(nf))
        val = _subst_into(g.mult.images[h], left_inv, total_alg.variables)
        nf = total_alg.normal_form(val - g.src.apply(g.unit.images[h]))
        report.add(f"left inverse law on {h}", nf.is_zero(), witness=None if nf.is_zero() else h, detail=None if nf.is_zero() else str(nf))

    return report


def _shift_map(fc: FiberedCoproduct, first: str, second: str) -> dict[str, str]:
    """Rename map sending the coproduct's L_/R_ blocks to two tensor blocks."""
    pl, pr = fc.prefixes
    mapping = {}
    for x in fc.leg_left.target.variables:
        mapping[pl + x] = first + x
    for x in fc.leg_right.target.variables:
        mapping[pr + x] = second + x
    return mapping


def _composable_triples(g: AffineGroupoid) -> TensorAlgebra:
    """k[G] (x)_{k[X]} k[G] (x)_{k[X]} k[G] with consecutive matching."""
    total, base = g.total, g.base
    prefixes = ("T1_", "T2_", "T3_")
    names = [p + n for p in prefixes for n in total.variables]
    vl = VarList(names)
    extra = []
    for f in base.variables:
        s = g.src.images[f]
        t = g.tgt.images[f]
        extra.append(
            rename_polynomial(s, vl, {n: "T1_" + n for n in total.variables})
            - rename_polynomial(t, vl, {n: "T2_" + n for n in total.variables})
        )
        extra.append(
            rename_polynomial(s, vl, {n: "T2_" + n for n in total.variables})
            - rename_polynomial(t, vl, {n: "T3_" + n for n in total.variables})
        )
    return tensor_many([total, total, total], prefixes, label="triples", extra_relations=extra)


# ---------------------------------------------------------------------------
# Nondegeneracy certificate
# ---------------------------------------------------------------------------


def matrix_determinant(rows: Sequence[Sequence[Polynomial]], ambient: VarList) -> Polynomial:
    """Exact determinant by column-subset dynamic programming."""
    n = len(rows)
    if n == 0:
        return Polynomial.one(ambient)
    # dp over subsets: value of the minor on rows 0..k-1 and the columns in
    # the subset, where k = popcount(subset)
    dp: dict[int, Polynomial] = {0: Polynomial.one(ambient)}
    for mask in range(1, 1 << n):
        k = bin(mask).count("1") - 1
        acc = Polynomial.zero(ambient)
        # cofactor expansion along row k: leading sign is (-1)^k
        sign = 1 if k % 2 == 0 else -1
        for c in range(n):
            if not (mask >> c) & 1:
                continue
            entry = rows[k][c]
            if not entry.is_zero():
                term = dp[mask ^ (1 << c)] * entry
                acc = acc + (term if sign > 0 else -term)
            sign = -sign
        dp[mask] = acc
    return dp[(1 << n) - 1]


def nondegeneracy_certificate(p: PoissonStructure) -> tuple[tuple[str, ...], Polynomial] | None:
    """Search for a principal block of the bracket matrix whose determinant
    is a unit modulo the relations.

    Unit-ness of det is certified by 1 lying in relations + <det>, which
    exhibits an explicit inverse for det in the quotient algebra.  Blocks
    are searched largest-even-size first, in deterministic index order; the
    first certificate wins.  For presentations carrying unit-group
    coordinates (for example t, u with t*u = 1) the full matrix is odd-sized
    or degenerate, which is why the search descends to principal blocks.
    """
    algebra = p.algebra
    n = len(algebra.variables)
    if n == 0:
        return (), algebra.one()
    names = algebra.variables.names
    size = n if n % 2 == 0 else n - 1
    while size >= 2:
        for subset in combinations(range(n), size):
            rows = [[p.matrix[i][j] for j in subset] for i in subset]
            det = algebra.normal_form(matrix_determinant(rows, algebra.variables))
            if det.is_zero():
                continue
            if _is_unit(det, algebra):
                return tuple(names[i] for i in subset), det
        size -= 2
    return None


def _is_unit(f: Polynomial, algebra: PresentedAlgebra) -> bool:
    # f is a unit in k[x]/rel iff 1 = a*f + sum(b_i * rel_i) for some a, b_i,
    # i.e. iff rel + <f> is the whole ring; the Groebner run produces the
    # certificate and the converse direction is trivial, so this is exact.
    return (algebra.relations + Ideal(algebra.variables, [f])).is_trivial()


# ---------------------------------------------------------------------------
# Symplectic verification
# ---------------------------------------------------------------------------


def multiplication_graph_ideal(sg: SymplecticGroupoid) -> tuple[TensorAlgebra, Ideal]:
    """The ideal of the multiplication graph inside k[G] (x) k[G] (x) k[G].

    Generated by source/target matching across the first two blocks and, for
    each total generator h, the difference of the third-block copy of h and
    a lift of its comultiplication image.  Lifts are normal-form
    representatives, so the generating set is deterministic.
    """
    g = sg.groupoid
    total, base = g.total, g.base
    t3 = tensor_many([total, total, total], ("T1_", "T2_", "T3_"), label="GxGxG")
    vl = t3.result.variables
    fc = g.mult_coproduct
    gens: list[Polynomial] = []
    for f in base.variables:
        gens.append(
            rename_polynomial(g.src.images[f], vl, {n: "T1_" + n for n in total.variables})
            - rename_polynomial(g.tgt.images[f], vl, {n: "T2_" + n for n in total.variables})
        )
    for h in total.variables:
        lift = rename_polynomial(
            fc.result.normal_form(g.mult.images[h]),
            vl,
            _shift_map(fc, "T1_", "T2_"),
        )
        gens.append(t3.result.var("T3_" + h) - lift)
    return t3, Ideal(vl, gens)


def check_symplectic(sg: SymplecticGroupoid) -> CheckReport:
    """Verify the symplectic-groupoid conditions.

    The multiplication graph must be coisotropic in G x G x G^-; the source
    must be anti-Poisson and the target Poisson for the base structure; the
    bracket matrix must admit a unit-determinant principal block; both
    structures must satisfy the Jacobi identity.  Groupoid axioms are
    re-verified first.
    """
    report = CheckReport(f"symplectic groupoid checks for {sg.groupoid.label or 'groupoid'}")
    axioms = check_groupoid_axioms(sg.groupoid)
    report.add("groupoid axioms", axioms.passed,
               witness=None if axioms.passed else axioms.first_failure().name,
               detail=None if axioms.passed else axioms.first_failure().detail)

    t3, graph = multiplication_graph_ideal(sg)
    p = sg.total_poisson
    triple = tensor_structure([p, p, p.negate()], t3)
    defect = coisotropy_defect(triple, graph)
    if defect is None:
        report.add("multiplication graph coisotropic in GxGxG^-", True)
    else:
        a, b, nf = defect
        report.add(
            "multiplication graph coisotropic in GxGxG^-",
            False,
            witness=f"{{{a}, {b}}}",
            detail=str(nf),
        )

    d = poisson_morphism_defect(sg.base_poisson, sg.total_poisson, sg.groupoid.src, -1)
    report.add("source anti-Poisson", d is None,
               witness=None if d is None else f"{{{d[0]}, {d[1]}}}",
               detail=None if d is None else str(d[2]))
    d = poisson_morphism_defect(sg.base_poisson, sg.total_poisson, sg.groupoid.tgt, 1)
    report.add("target Poisson", d is None,
               witness=None if d is None else f"{{{d[0]}, {d[1]}}}",
               detail=None if d is None else str(d[2]))

    cert = nondegeneracy_certificate(sg.total_poisson)
    if cert is None:
        report.add("bracket matrix unit-determinant block", False, detail="no principal block with unit determinant")
    else:
        block, det = cert
        report.add("bracket matrix unit-determinant block", True,
                   detail=f"block ({', '.join(block)}), det = {det}")

    report.add("total bracket Jacobi", check_jacobi(sg.total_poisson))
    report.add("base bracket Jacobi", check_jacobi(sg.base_poisson))
    return report


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def pair_groupoid(x: PresentedAlgebra, p: PoissonStructure, label: str = "pair") -> SymplecticGroupoid:
    """The pair groupoid X x X over X with the structure P (+) (-P).

    Source is the right projection, target the left; multiplication glues the
    middle coordinates.  Requires P to be nondegenerate.
    """
    if p.algebra.variables != x.variables:
        raise ValueError("structure not over the given algebra")
    if nondegeneracy_certificate(p) is None:
        raise ValueError("degenerate structure: pair groupoid needs a unit-determinant bracket block")
    fc = product_algebra(x, x, label=f"{label}.total")
    total = fc.result
    src = AlgebraMorphism(x, total, {n: total.var("R_" + n) for n in x.variables}, "src")
    tgt = AlgebraMorphism(x, total, {n: total.var("L_" + n) for n in x.variables}, "tgt")
    unit = AlgebraMorphism(total, x, {**{"L_" + n: x.var(n) for n in x.variables}, **{"R_" + n: x.var(n) for n in x.variables}}, "unit")
    inv = AlgebraMorphism(
        total,
        total,
        {**{"L_" + n: total.var("R_" + n) for n in x.variables}, **{"R_" + n: total.var("L_" + n) for n in x.variables}},
        "inv",
    )
    mult_fc = fibered_coproduct(total, total, x, src, tgt, label=f"{label}.pairs")
    mult_images = {}
    for n in x.variables:
        mult_images["L_" + n] = mult_fc.result.var("L_L_" + n)
        mult_images["R_" + n] = mult_fc.result.var("R_R_" + n)
    mult = AlgebraMorphism(total, mult_fc.result, mult_images, "mult")
    groupoid = AffineGroupoid(x, total, src, tgt, unit, inv, mult, mult_fc, label)
    total_poisson = product_structure(p, p.negate(), fc)
    return SymplecticGroupoid(groupoid, total_poisson, p)


def cotangent_groupoid_torus(n: int, label: str = "") -> SymplecticGroupoid:
    """The cotangent groupoid of an n-torus, in unit-pair coordinates.

    Total space k[t_i, u_i, z_i]/(t_i u_i - 1) with brackets {t_i, z_i} = t_i
    and {u_i, z_i} = -u_i; base k[z_i] with the zero bracket; source and
    target both project to the z coordinates; multiplication multiplies the
    group coordinates.
    """
    if n < 1:
        raise ValueError("torus rank must be at least 1")
    label = label or f"T*torus({n})"
    suffix = lambda i: "" if n == 1 else str(i + 1)
    tnames = [f"t{suffix(i)}" for i in range(n)]
    unames = [f"u{suffix(i)}" for i in range(n)]
    znames = [f"z{suffix(i)}" for i in range(n)]
    names: list[str] = []
    for i in range(n):
        names += [tnames[i], unames[i], znames[i]]
    total = PresentedAlgebra.quotient_ring(names, [f"{tnames[i]}*{unames[i]} - 1" for i in range(n)], f"{label}.total")
    base = PresentedAlgebra.free(znames, f"{label}.base")
    proj = {z: total.var(z) for z in znames}
    src = AlgebraMorphism(base, total, proj, "src")
    tgt = AlgebraMorphism(base, total, proj, "tgt")
    unit_images = {}
    for i in range(n):
        unit_images[tnames[i]] = base.one()
        unit_images[unames[i]] = base.one()
        unit_images[znames[i]] = base.var(znames[i])
    unit = AlgebraMorphism(total, base, unit_images, "unit")
    inv_images = {}
    for i in range(n):
        inv_images[tnames[i]] = total.var(unames[i])
        inv_images[unames[i]] = total.var(tnames[i])
        inv_images[znames[i]] = total.var(znames[i])
    inv = AlgebraMorphism(total, total, inv_images, "inv")
    mult_fc = fibered_coproduct(total, total, base, src, tgt, label=f"{label}.pairs")
    mult_images = {}
    for i in range(n):
        mult_images[tnames[i]] = mult_fc.result.var("L_" + tnames[i]) * mult_fc.result.var("R_" + tnames[i])
        mult_images[unames[i]] = mult_fc.result.var("L_" + unames[i]) * mult_fc.result.var("R_" + unames[i])
        mult_images[znames[i]] = mult_fc.result.var("L_" + znames[i])
    mult = AlgebraMorphism(total, mult_fc.result, mult_images, "mult")
    groupoid = AffineGroupoid(base, total, src, tgt, unit, inv, mult, mult_fc, label)
    entries = {}
    for i in range(n):
        entries[(tnames[i], znames[i])] = total.var(tnames[i])
        entries[(unames[i], znames[i])] = -total.var(unames[i])
    total_poisson = PoissonStructure.from_pairs(total, entries)
    base_poisson = PoissonStructure.zero(base)
    return SymplecticGroupoid(groupoid, total_poisson, base_poisson)


def trivial_groupoid(label: str = "trivial") -> SymplecticGroupoid:
    """The one-point groupoid over the one-point base."""
    pt = PresentedAlgebra.scalars(label + ".pt")
    ident = AlgebraMorphism(pt, pt, {}, "id")
    mult_fc = fibered_coproduct(pt, pt, pt, ident, ident, label=label + ".pairs")
    mult = AlgebraMorphism(pt, mult_fc.result, {}, "mult")
    groupoid = AffineGroupoid(pt, pt, ident, ident, ident, ident, mult, mult_fc, label)
    zero = PoissonStructure.zero(pt)
    return SymplecticGroupoid(groupoid, zero, zero)


def negate_groupoid(sg: SymplecticGroupoid) -> SymplecticGroupoid:
    """Same groupoid, negated Poisson structures (total and base)."""
    return SymplecticGroupoid(
        sg.groupoid,
        sg.total_poisson.negate(),
        sg.base_poisson.negate(),
        factors=tuple(negate_groupoid(f) for f in sg.factors) if sg.factors else None,
    )


def product_groupoid(a: SymplecticGroupoid, b: SymplecticGroupoid, label: str = "") -> SymplecticGroupoid:
    """The product groupoid A x B over baseA x baseB, componentwise."""
    label = label or f"{a.groupoid.label}x{b.groupoid.label}"
    ga, gb = a.groupoid, b.groupoid
    base_fc = product_algebra(ga.base, gb.base, label=f"{label}.base")
    total_fc = product_algebra(ga.total, gb.total, label=f"{label}.total")
    base, total = base_fc.result, total_fc.result

    def glue(phi_a: AlgebraMorphism, phi_b: AlgebraMorphism, src_alg: PresentedAlgebra, tgt_fc: FiberedCoproduct, name: str) -> AlgebraMorphism:
        images = {}
        for x in phi_a.source.variables:
            images["L_" + x] = tgt_fc.include_left(phi_a.images[x])
        for x in phi_b.source.variables:
            images["R_" + x] = tgt_fc.include_right(phi_b.images[x])
        return AlgebraMorphism(src_alg, tgt_fc.result, images, name)

    src = glue(ga.src, gb.src, base, total_fc, "src")
    tgt = glue(ga.tgt, gb.tgt, base, total_fc, "tgt")
    unit = glue(ga.unit, gb.unit, total, base_fc, "unit")
    inv = glue(ga.inv, gb.inv, total, total_fc, "inv")
    mult_fc = fibered_coproduct(total, total, base, src, tgt, label=f"{label}.pairs")
    mult_images = {}
    for x in ga.total.variables:
        mapping = {}
        for y in ga.total.variables:
            mapping[ga.mult_coproduct.prefixes[0] + y] = "L_L_" + y
            mapping[ga.mult_coproduct.prefixes[1] + y] = "R_L_" + y
        mult_images["L_" + x] = rename_polynomial(ga.mult.images[x], mult_fc.result.variables, mapping)
    for x in gb.total.variables:
        mapping = {}
        for y in gb.total.variables:
            mapping[gb.mult_coproduct.prefixes[0] + y] = "L_R_" + y
            mapping[gb.mult_coproduct.prefixes[1] + y] = "R_R_" + y
        mult_images["R_" + x] = rename_polynomial(gb.mult.images[x], mult_fc.result.variables, mapping)
    mult = AlgebraMorphism(total, mult_fc.result, mult_images, "mult")
    groupoid = AffineGroupoid(base, total, src, tgt, unit, inv, mult, mult_fc, label)
    total_poisson = product_structure(a.total_poisson, b.total_poisson, total_fc)
    base_poisson = product_structure(a.base_poisson, b.base_poisson, base_fc)
    return SymplecticGroupoid(groupoid, total_poisson, base_poisson, factors=(a, b))


# ---------------------------------------------------------------------------
# Subgroupoids
# ---------------------------------------------------------------------------


@dataclass
class Subgroupoid:
    """A closed subgroupoid H over S, cut out by ideals in total and base.

    ``stabilizer_assertion`` is user-supplied: the Lagrangian/Lie-algebroid
    conditions of a stabilizer subgroupoid are differential-geometric and
    outside this engine's scope, so only coisotropy-level necessary
    conditions are machine-checked (see :func:`check_subgroupoid`).
    """

    parent: AffineGroupoid | SymplecticGroupoid
    total_ideal: Ideal
    base_ideal: Ideal
    stabilizer_assertion: bool = False
    provenance: str = ""
    label: str = ""

    def __post_init__(self):
        g = as_affine(self.parent)
        if self.total_ideal.ambient != g.total.variables:
            raise ValueError("total ideal over the wrong variables")
        if self.base_ideal.ambient != g.base.variables:
            raise ValueError("base ideal over the wrong variables")


def check_subgroupoid(h: Subgroupoid) -> CheckReport:
    """Verify that all five structure maps descend to the quotients, and,
    for an asserted stabilizer candidate over a symplectic parent, that the
    base and total ideals are coisotropic (a necessary condition for the
    Lagrangian property; the assertion itself is recorded, not verified)."""
    g = as_affine(h.parent)
    report = CheckReport(f"subgroupoid checks for {h.label or 'subgroupoid'}")
    total_mod = g.total.relations + h.total_ideal
    base_mod = g.base.relations + h.base_ideal

    for f in h.base_ideal.generators:
        nf = total_mod.normal_form(g.src.apply(f))
        report.add(f"src descends on {f}", nf.is_zero(), witness=None if nf.is_zero() else str(f), detail=None if nf.is_zero() else str(nf))
        nf = total_mod.normal_form(g.tgt.apply(f))
        report.add(f"tgt descends on {f}", nf.is_zero(), witness=None if nf.is_zero() else str(f), detail=None if nf.is_zero() else str(nf))

    for f in h.total_ideal.generators:
        nf = base_mod.normal_form(g.unit.apply(f))
        report.add(f"unit descends on {f}", nf.is_zero(), witness=None if nf.is_zero() else str(f), detail=None if nf.is_zero() else str(nf))
        nf = total_mod.normal_form(g.inv.apply(f))
        report.add(f"inv descends on {f}", nf.is_zero(), witness=None if nf.is_zero() else str(f), detail=None if nf.is_zero() else str(nf))

    fc = g.mult_coproduct
    pl, pr = fc.prefixes
    pair_ideal = fc.result.relations
    lifted = [rename_polynomial(q, fc.result.variables, {n: pl + n for n in g.total.variables}) for q in h.total_ideal.generators]
    lifted += [rename_polynomial(q, fc.result.variables, {n: pr + n for n in g.total.variables}) for q in h.total_ideal.generators]
    pair_mod = pair_ideal + Ideal(fc.result.variables, lifted)
    for f in h.total_ideal.generators:
        nf = pair_mod.normal_form(g.mult.apply(f))
        report.add(f"mult descends on {f}", nf.is_zero(), witness=None if nf.is_zero() else str(f), detail=None if nf.is_zero() else str(nf))

    sg = as_symplectic(h.parent)
    if sg is not None and h.stabilizer_assertion:
        d = coisotropy_defect(sg.base_poisson, h.base_ideal)
        report.add("base ideal coisotropic", d is None,
                   witness=None if d is None else f"{{{d[0]}, {d[1]}}}",
                   detail=None if d is None else str(d[2]))
        d = coisotropy_defect(sg.total_poisson, h.total_ideal)
        report.add("total ideal coisotropic (necessary for Lagrangian)", d is None,
                   witness=None if d is None else f"{{{d[0]}, {d[1]}}}",
                   detail=None if d is None else str(d[2]))
        report.add(
            "stabilizer status asserted by user",
            True,
            detail=h.provenance or "Lie algebroid condition not machine-verified",
        )
    return report


def subgroupoid_quotient(h: Subgroupoid) -> AffineGroupoid:
    """Present H over S as an affine groupoid in its own right.

    Requires the descent checks to pass; structure maps keep their images,
    reinterpreted in the quotient presentations.
    """
    g = as_affine(h.parent)
    report = check_subgroupoid(h)
    if not report.passed:
        from .checks import CheckFailedError

        raise CheckFailedError(report)
    label = h.label or (g.label + ".sub" if g.label else "sub")
    base_q, _ = quotient(g.base, h.base_ideal, label=f"{label}.base")
    total_q, _ = quotient(g.total, h.total_ideal, label=f"{label}.total")
    src = AlgebraMorphism(base_q, total_q, {n: rename_polynomial(g.src.images[n], total_q.variables) for n in base_q.variables}, "src")
    tgt = AlgebraMorphism(base_q, total_q, {n: rename_polynomial(g.tgt.images[n], total_q.variables) for n in base_q.variables}, "tgt")
    unit = AlgebraMorphism(total_q, base_q, {n: rename_polynomial(g.unit.images[n], base_q.variables) for n in total_q.variables}, "unit")
    inv = AlgebraMorphism(total_q, total_q, {n: rename_polynomial(g.inv.images[n], total_q.variables) for n in total_q.variables}, "inv")
    mult_fc = fibered_coproduct(total_q, total_q, base_q, src, tgt, label=f"{label}.pairs")
    mult = AlgebraMorphism(
        total_q,
        mult_fc.result,
        {n: rename_polynomial(g.mult.images[n], mult_fc.result.variables) for n in total_q.variables},
        "mult",
    )
    return AffineGroupoid(base_q, total_q, src, tgt, unit, inv, mult, mult_fc, label)
