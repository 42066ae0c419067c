"""Finitely presented commutative algebras and their morphisms.

A presented algebra is k[x_1..x_n]/I for an explicit ideal I; element
equality is decided by normal form under the canonical grevlex order, so all
diagram checks in the engine reduce to ideal membership.  Morphisms are
generator-image maps; fibered coproducts realize tensor products over a base
algebra, with deterministic block renaming so that inclusions are honest
morphisms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .arith import Polynomial, VariableMismatchError, VarList, grevlex, parse_polynomial
from .groebner import Ideal, elimination_ideal, rename_polynomial


@dataclass(frozen=True)
class PresentedAlgebra:
    """k[variables]/relations with a display label."""

    variables: VarList
    relations: Ideal
    label: str = ""

    def __post_init__(self):
        if self.relations.ambient != self.variables:
            raise VariableMismatchError("relations live over a different variable list")

    @classmethod
    def free(cls, names: Sequence[str], label: str = "") -> "PresentedAlgebra":
        vl = VarList(names)
        return cls(vl, Ideal(vl, []), label)

    @classmethod
    def scalars(cls, label: str = "k") -> "PresentedAlgebra":
        return cls.free([], label)

    @classmethod
    def quotient_ring(cls, names: Sequence[str], relations: Sequence[str], label: str = "") -> "PresentedAlgebra":
        vl = VarList(names)
        rels = [parse_polynomial(r, vl) for r in relations]
        return cls(vl, Ideal(vl, rels), label)

    def poly(self, text: str) -> Polynomial:
        return parse_polynomial(text, self.variables)

    def var(self, name: str) -> Polynomial:
        return Polynomial.variable(self.variables, name)

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.variables)

    def one(self) -> Polynomial:
        return Polynomial.one(self.variables)

    def normal_form(self, f: Polynomial) -> Polynomial:
        return self.relations.normal_form(f)

    def elements_equal(self, f: Polynomial, g: Polynomial) -> bool:
        return self.relations.contains(f - g)

    def is_zero_element(self, f: Polynomial) -> bool:
        return self.relations.contains(f)

    def same_presentation(self, other: "PresentedAlgebra") -> bool:
        """Value equality of presentations: same variables, same reduced basis."""
        return self.variables == other.variables and self.relations.groebner_basis() == other.relations.groebner_basis()

    def __repr__(self) -> str:
        rels = ", ".join(str(g) for g in self.relations.generators)
        name = self.label or "k[...]"
        return f"{name}<{', '.join(self.variables.names)} | {rels}>"


class AlgebraMorphism:
    """A morphism of presented algebras, given on generators.

    Well-definedness (every source relation maps into the target's relation
    ideal) is checked on demand by :func:`check_morphism`, not at
    construction, so deliberately broken maps can be built and reported on.
    """

    __slots__ = ("source", "target", "images", "label")

    def __init__(
        self,
        source: PresentedAlgebra,
        target: PresentedAlgebra,
        images: Mapping[str, Polynomial],
        label: str = "",
    ):
        for name in source.variables:
            if name not in images:
                raise VariableMismatchError(f"no image for source variable {name!r}")
        for name, img in images.items():
            if name not in source.variables:
                raise VariableMismatchError(f"image given for unknown variable {name!r}")
            if img.ambient != target.variables:
                raise VariableMismatchError(f"image of {name!r} not over the target variables")
        self.source = source
        self.target = target
        self.images = dict(images)
        self.label = label

    @classmethod
    def identity(cls, algebra: PresentedAlgebra) -> "AlgebraMorphism":
        return cls(algebra, algebra, {n: algebra.var(n) for n in algebra.variables}, "id")

    @classmethod
    def from_strings(
        cls,
        source: PresentedAlgebra,
        target: PresentedAlgebra,
        images: Mapping[str, str],
        label: str = "",
    ) -> "AlgebraMorphism":
        return cls(source, target, {n: target.poly(s) for n, s in images.items()}, label)

    def apply(self, f: Polynomial) -> Polynomial:
        """Image of an arbitrary element (the unique algebra-map extension)."""
        if f.ambient != self.source.variables:
            raise VariableMismatchError("element not over the source variables")
        return f.substitute(self.images, self.target.variables)

    def __call__(self, f: Polynomial) -> Polynomial:
        return self.apply(f)

    def equals(self, other: "AlgebraMorphism") -> bool:
        """Equality as maps: images agree modulo the target relations."""
        if self.source.variables != other.source.variables or self.target.variables != other.target.variables:
            return False
        return all(
            self.target.elements_equal(self.images[n], other.images[n]) for n in self.source.variables
        )

    def __repr__(self) -> str:
        head = self.label or "morphism"
        maps = ", ".join(f"{n} -> {self.images[n]}" for n in self.source.variables.names)
        return f"{head}({maps})"


def check_morphism(phi: AlgebraMorphism) -> bool:
    """True iff phi is well-defined: each source relation maps into the
    target's relation ideal."""
    for r in phi.source.relations.generators:
        if not phi.target.relations.contains(phi.apply(r)):
            return False
    return True


def morphism_defect(phi: AlgebraMorphism) -> tuple[Polynomial, Polynomial] | None:
    """First source relation whose image does not vanish, with its normal
    form in the target; None when phi is well-defined."""
    for r in phi.source.relations.generators:
        nf = phi.target.normal_form(phi.apply(r))
        if not nf.is_zero():
            return r, nf
    return None


def compose(phi: AlgebraMorphism, psi: AlgebraMorphism) -> AlgebraMorphism:
    """Diagrammatic composite: first phi, then psi."""
    if phi.target.variables != psi.source.variables:
        raise VariableMismatchError("morphisms are not composable")
    images = {n: psi.apply(img) for n, img in phi.images.items()}
    return AlgebraMorphism(phi.source, psi.target, images, f"{psi.label}.{phi.label}" if phi.label or psi.label else "")


# ---------------------------------------------------------------------------
# Fibered coproducts (tensor products over a base)
# ---------------------------------------------------------------------------


@dataclass
class FiberedCoproduct:
    """A tensor product over a base: k[A] (x)_{k[base]} k[B].

    Variables of the two factors are renamed with the recorded prefixes; the
    relations are both factors' relations plus one matching generator
    ``legA(c) - legB(c)`` per base variable ``c``.
    """

    result: PresentedAlgebra
    left_inclusion: AlgebraMorphism
    right_inclusion: AlgebraMorphism
    base: PresentedAlgebra
    leg_left: AlgebraMorphism
    leg_right: AlgebraMorphism
    prefixes: tuple[str, str] = ("L_", "R_")

    def include_left(self, f: Polynomial) -> Polynomial:
        return self.left_inclusion.apply(f)

    def include_right(self, f: Polynomial) -> Polynomial:
        return self.right_inclusion.apply(f)

    def mediating(self, alpha: AlgebraMorphism, beta: AlgebraMorphism) -> AlgebraMorphism:
        """The universal morphism out of the coproduct induced by a pair of
        morphisms agreeing on the base.

        Raises if alpha.legL != beta.legR as maps into the common target.
        """
        if alpha.target.variables != beta.target.variables:
            raise VariableMismatchError("mediating morphisms must share a target")
        target = alpha.target
        for c in self.base.variables:
            left = alpha.apply(self.leg_left.images[c])
            right = beta.apply(self.leg_right.images[c])
            if not target.elements_equal(left, right):
                raise ValueError(f"morphisms disagree on base variable {c!r}")
        pl, pr = self.prefixes
        images: dict[str, Polynomial] = {}
        for n in alpha.source.variables:
            images[pl + n] = alpha.images[n]
        for n in beta.source.variables:
            images[pr + n] = beta.images[n]
        return AlgebraMorphism(self.result, target, images, "mediating")


def fibered_coproduct(
    a: PresentedAlgebra,
    b: PresentedAlgebra,
    base: PresentedAlgebra,
    leg_a: AlgebraMorphism,
    leg_b: AlgebraMorphism,
    prefixes: tuple[str, str] = ("L_", "R_"),
    label: str = "",
) -> FiberedCoproduct:
    """Build k[A] (x)_{k[base]} k[B] along the two legs.

    Legs must be well-defined morphisms base -> A and base -> B.
    """
    if leg_a.source is not base and leg_a.source.variables != base.variables:
        raise VariableMismatchError("left leg does not start at the base")
    if leg_b.source is not base and leg_b.source.variables != base.variables:
        raise VariableMismatchError("right leg does not start at the base")
    if leg_a.target.variables != a.variables or leg_b.target.variables != b.variables:
        raise VariableMismatchError("legs do not end at the factors")
    if not check_morphism(leg_a) or not check_morphism(leg_b):
        raise ValueError("ill-defined leg morphism")
    pl, pr = prefixes
    names = [pl + n for n in a.variables] + [pr + n for n in b.variables]
    vl = VarList(names)
    left_map = {n: pl + n for n in a.variables}
    right_map = {n: pr + n for n in b.variables}
    rels = [rename_polynomial(g, vl, left_map) for g in a.relations.generators]
    rels += [rename_polynomial(g, vl, right_map) for g in b.relations.generators]
    for c in base.variables:
        rels.append(
            rename_polynomial(leg_a.images[c], vl, left_map)
            - rename_polynomial(leg_b.images[c], vl, right_map)
        )
    result = PresentedAlgebra(vl, Ideal(vl, rels), label or f"{a.label}(x){b.label}")
    incl_l = AlgebraMorphism(a, result, {n: result.var(pl + n) for n in a.variables}, "incl_L")
    incl_r = AlgebraMorphism(b, result, {n: result.var(pr + n) for n in b.variables}, "incl_R")
    return FiberedCoproduct(result, incl_l, incl_r, base, leg_a, leg_b, prefixes)


def product_algebra(
    a: PresentedAlgebra,
    b: PresentedAlgebra,
    prefixes: tuple[str, str] = ("L_", "R_"),
    label: str = "",
) -> FiberedCoproduct:
    """Full tensor product: the fibered coproduct over the scalars."""
    base = PresentedAlgebra.scalars()
    empty = AlgebraMorphism(base, a, {}, "unit")
    empty2 = AlgebraMorphism(base, b, {}, "unit")
    return fibered_coproduct(a, b, base, empty, empty2, prefixes, label)


@dataclass
class TensorAlgebra:
    """An n-fold full tensor product with positional block prefixes."""

    result: PresentedAlgebra
    factors: tuple[PresentedAlgebra, ...]
    prefixes: tuple[str, ...]
    inclusions: tuple[AlgebraMorphism, ...] = field(default=())

    def include(self, block: int, f: Polynomial) -> Polynomial:
        return self.inclusions[block].apply(f)


def tensor_many(
    factors: Sequence[PresentedAlgebra],
    prefixes: Sequence[str] | None = None,
    label: str = "",
    extra_relations: Iterable[Polynomial] = (),
) -> TensorAlgebra:
    """n-fold tensor product; block i is renamed with prefix ``T{i+1}_`` by
    default.  ``extra_relations`` (over the result variables) are appended,
    which is how fibered matching conditions are imposed."""
    if prefixes is None:
        prefixes = [f"T{i + 1}_" for i in range(len(factors))]
    names: list[str] = []
    for pref, alg in zip(prefixes, factors):
        names.extend(pref + n for n in alg.variables)
    vl = VarList(names)
    rels: list[Polynomial] = []
    for pref, alg in zip(prefixes, factors):
        mapping = {n: pref + n for n in alg.variables}
        rels.extend(rename_polynomial(g, vl, mapping) for g in alg.relations.generators)
    rels.extend(extra_relations)
    result = PresentedAlgebra(vl, Ideal(vl, rels), label or "tensor")
    inclusions = tuple(
        AlgebraMorphism(alg, result, {n: result.var(pref + n) for n in alg.variables}, f"incl{i+1}")
        for i, (pref, alg) in enumerate(zip(prefixes, factors))
    )
    return TensorAlgebra(result, tuple(factors), tuple(prefixes), inclusions)


def quotient(a: PresentedAlgebra, extra: Ideal | Sequence[Polynomial], label: str = "") -> tuple[PresentedAlgebra, AlgebraMorphism]:
    """Quotient by an ideal over the same variables, with the projection."""
    gens = extra.generators if isinstance(extra, Ideal) else tuple(extra)
    for g in gens:
        if g.ambient != a.variables:
            raise VariableMismatchError("quotient ideal over a different variable list")
    quo = PresentedAlgebra(
        a.variables,
        Ideal(a.variables, a.relations.generators + tuple(gens)),
        label or (a.label + "/I" if a.label else ""),
    )
    proj = AlgebraMorphism(a, quo, {n: quo.var(n) for n in a.variables}, "proj")
    return quo, proj


def morphism_kernel(phi: AlgebraMorphism, budget: int | None = None) -> Ideal:
    """Kernel of phi as an ideal of the source presentation.

    Eliminate the target variables from ``target relations + (x_i - phi(x_i))``
    inside k[target vars, source vars]; the survivors, together with the
    source relations, present the kernel.
    """
    src = phi.source
    tgt = phi.target
    clash = set(src.variables.names) & set(tgt.variables.names)
    rename_src = {n: f"K_{n}" for n in src.variables.names} if clash else {n: n for n in src.variables.names}
    ext = VarList(list(tgt.variables.names) + [rename_src[n] for n in src.variables.names])
    gens = [rename_polynomial(g, ext) for g in tgt.relations.generators]
    for n in src.variables.names:
        gens.append(Polynomial.variable(ext, rename_src[n]) - rename_polynomial(phi.images[n], ext))
    big = Ideal(ext, gens)
    elim = elimination_ideal(big, [rename_src[n] for n in src.variables.names], budget)
    back = {rename_src[n]: n for n in src.variables.names}
    result = [rename_polynomial(g, src.variables, back) for g in elim.generators]
    result = [src.normal_form(g) for g in result]
    return Ideal(src.variables, [g for g in result if not g.is_zero()])
