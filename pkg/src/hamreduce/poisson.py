"""Poisson structures on presented algebras and the coisotropy checks.

A structure is an antisymmetric matrix of generator brackets {x_i, x_j};
brackets of arbitrary elements follow by the biderivation rule

    {f, g} = sum_{i,j} {x_i, x_j} (df/dx_i)(dg/dx_j).

The presenting relations are required to form a Poisson ideal ({x_i, r} in
relations for every generator r), so the bracket descends to the quotient;
this is enforced at construction.  Coisotropy of other ideals is an
on-demand check.
"""

from __future__ import annotations

from typing import Sequence

from .arith import Polynomial, VariableMismatchError
from .groebner import Ideal, rename_polynomial
from .algebra import (
    AlgebraMorphism,
    FiberedCoproduct,
    PresentedAlgebra,
    TensorAlgebra,
    product_algebra,
)


class PoissonStructure:
    """An exact Poisson bracket on a presented algebra.

    ``matrix[i][j]`` is {x_i, x_j}, stored in normal form.  Antisymmetry and
    the Poisson-ideal property of the relations are constructor-enforced;
    the Jacobi identity is checked on demand (:func:`check_jacobi`).
    """

    __slots__ = ("algebra", "matrix", "_nonzero")

    def __init__(self, algebra: PresentedAlgebra, matrix: Sequence[Sequence[Polynomial]], *, _trusted: bool = False):
        n = len(algebra.variables)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise VariableMismatchError("bracket matrix has the wrong shape")
        reduced = []
        for row in matrix:
            out_row = []
            for entry in row:
                if entry.ambient != algebra.variables:
                    raise VariableMismatchError("bracket entry over a different variable list")
                out_row.append(algebra.normal_form(entry))
            reduced.append(tuple(out_row))
        self.algebra = algebra
        self.matrix: tuple[tuple[Polynomial, ...], ...] = tuple(reduced)
        self._nonzero = tuple(
            (i, j, self.matrix[i][j])
            for i in range(n)
            for j in range(n)
            if not self.matrix[i][j].is_zero()
        )
        if not _trusted:
            self._validate()

    def _validate(self) -> None:
        n = len(self.algebra.variables)
        for i in range(n):
            if not self.matrix[i][i].is_zero():
                raise ValueError(f"nonzero diagonal bracket at {self.algebra.variables.names[i]}")
            for j in range(i + 1, n):
                if not self.algebra.is_zero_element(self.matrix[i][j] + self.matrix[j][i]):
                    raise ValueError(
                        f"bracket matrix not antisymmetric at ({self.algebra.variables.names[i]}, "
                        f"{self.algebra.variables.names[j]})"
                    )
        # relations must be a Poisson ideal, else the bracket does not descend
        for r in self.algebra.relations.generators:
            for i in range(n):
                if not self.algebra.relations.contains(self.bracket(self.algebra.var(self.algebra.variables.names[i]), r)):
                    raise ValueError(
                        f"relations are not a Poisson ideal: {{{self.algebra.variables.names[i]}, {r}}} "
                        "does not lie in the relation ideal"
                    )

    # -- construction helpers ----------------------------------------------

    @classmethod
    def zero(cls, algebra: PresentedAlgebra) -> "PoissonStructure":
        n = len(algebra.variables)
        z = algebra.zero()
        return cls(algebra, [[z] * n for _ in range(n)], _trusted=True)

    @classmethod
    def from_pairs(
        cls,
        algebra: PresentedAlgebra,
        entries: dict[tuple[str, str], Polynomial],
    ) -> "PoissonStructure":
        """Build from {x,y} entries; the transposes are filled by antisymmetry."""
        n = len(algebra.variables)
        z = algebra.zero()
        matrix = [[z for _ in range(n)] for _ in range(n)]
        for (a, b), val in entries.items():
            i, j = algebra.variables.index[a], algebra.variables.index[b]
            if i == j:
                raise ValueError(f"diagonal bracket {{{a},{b}}} must be zero")
            matrix[i][j] = val
            matrix[j][i] = -val
        return cls(algebra, matrix)

    @classmethod
    def canonical(cls, algebra: PresentedAlgebra, pairs: Sequence[tuple[str, str]]) -> "PoissonStructure":
        """Darboux-type structure: {q, p} = 1 on each listed pair."""
        return cls.from_pairs(algebra, {(q, p): algebra.one() for q, p in pairs})

    # -- the bracket ---------------------------------------------------------

    def bracket(self, f: Polynomial, g: Polynomial) -> Polynomial:
        """{f, g} by the biderivation rule, in normal form mod relations."""
        if f.ambient != self.algebra.variables or g.ambient != self.algebra.variables:
            raise VariableMismatchError("bracket arguments over a different variable list")
        acc = Polynomial.zero(self.algebra.variables)
        df: dict[int, Polynomial] = {}
        dg: dict[int, Polynomial] = {}
        for i, j, entry in self._nonzero:
            if i not in df:
                df[i] = f.diff(i)
            if j not in dg:
                dg[j] = g.diff(j)
            if df[i].is_zero() or dg[j].is_zero():
                continue
            acc = acc + entry * df[i] * dg[j]
        return self.algebra.normal_form(acc)

    def bracket_raw(self, f: Polynomial, g: Polynomial) -> Polynomial:
        """{f, g} without reduction modulo the relations."""
        acc = Polynomial.zero(self.algebra.variables)
        for i, j, entry in self._nonzero:
            dfi = f.diff(i)
            if dfi.is_zero():
                continue
            dgj = g.diff(j)
            if dgj.is_zero():
                continue
            acc = acc + entry * dfi * dgj
        return acc

    def negate(self) -> "PoissonStructure":
        return PoissonStructure(
            self.algebra,
            [[-e for e in row] for row in self.matrix],
            _trusted=True,
        )

    def entry(self, a: str, b: str) -> Polynomial:
        return self.matrix[self.algebra.variables.index[a]][self.algebra.variables.index[b]]

    def __repr__(self) -> str:
        names = self.algebra.variables.names
        entries = ", ".join(
            f"{{{names[i]},{names[j]}}}={e}" for i, j, e in self._nonzero if i < j
        )
        return f"PoissonStructure({entries or '0'})"


def bracket(structure: PoissonStructure, f: Polynomial, g: Polynomial) -> Polynomial:
    return structure.bracket(f, g)


def negate(structure: PoissonStructure) -> PoissonStructure:
    return structure.negate()


def check_jacobi(structure: PoissonStructure) -> bool:
    """Jacobi identity on all generator triples, modulo the relations.

    Since the bracket is a biderivation in each slot, vanishing of the
    Jacobiator on generators forces it on all elements (it is a derivation
    in each argument), so the triple check suffices.
    """
    algebra = structure.algebra
    names = algebra.variables.names
    n = len(names)
    for i in range(n):
        xi = algebra.var(names[i])
        for j in range(i + 1, n):
            xj = algebra.var(names[j])
            for k in range(j + 1, n):
                xk = algebra.var(names[k])
                jac = (
                    structure.bracket_raw(xi, structure.matrix[j][k])
                    + structure.bracket_raw(xj, structure.matrix[k][i])
                    + structure.bracket_raw(xk, structure.matrix[i][j])
                )
                if not algebra.is_zero_element(jac):
                    return False
    return True


def check_coisotropic(structure: PoissonStructure, ideal: Ideal) -> bool:
    """True iff {I, I} subset I + relations.

    Checking generator pairs suffices: by the Leibniz rule the bracket of
    products stays in I once generator brackets do, since I absorbs
    multiplication.
    """
    witness = coisotropy_defect(structure, ideal)
    return witness is None


def coisotropy_defect(
    structure: PoissonStructure, ideal: Ideal
) -> tuple[Polynomial, Polynomial, Polynomial] | None:
    """First generator pair whose bracket leaves the ideal, with the nonzero
    normal form; None when coisotropic."""
    if ideal.ambient != structure.algebra.variables:
        raise VariableMismatchError("ideal over a different variable list")
    total = structure.algebra.relations + ideal
    gens = ideal.generators
    for a in range(len(gens)):
        for b in range(a, len(gens)):
            br = structure.bracket_raw(gens[a], gens[b])
            nf = total.normal_form(br)
            if not nf.is_zero():
                return gens[a], gens[b], nf
    return None


def check_poisson_morphism(
    src: PoissonStructure,
    tgt: PoissonStructure,
    phi: AlgebraMorphism,
    sign: int = 1,
) -> bool:
    """True iff phi({x,y}) = sign * {phi(x), phi(y)} modulo target relations
    for all generator pairs; biderivation extends this to all elements."""
    return poisson_morphism_defect(src, tgt, phi, sign) is None


def poisson_morphism_defect(
    src: PoissonStructure,
    tgt: PoissonStructure,
    phi: AlgebraMorphism,
    sign: int = 1,
) -> tuple[str, str, Polynomial] | None:
    if phi.source.variables != src.algebra.variables or phi.target.variables != tgt.algebra.variables:
        raise VariableMismatchError("morphism endpoints do not match the structures")
    names = src.algebra.variables.names
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            lhs = phi.apply(src.matrix[i][j])
            rhs = tgt.bracket_raw(phi.images[names[i]], phi.images[names[j]]).scale(sign)
            nf = tgt.algebra.normal_form(lhs - rhs)
            if not nf.is_zero():
                return names[i], names[j], nf
    return None


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------


def product_structure(
    a: PoissonStructure,
    b: PoissonStructure,
    product: FiberedCoproduct | None = None,
) -> PoissonStructure:
    """Block-diagonal structure on the tensor product (mixed brackets zero)."""
    if product is None:
        product = product_algebra(a.algebra, b.algebra)
    return tensor_structure([a, b], _product_blocks(product))


def _product_blocks(product: FiberedCoproduct) -> TensorAlgebra:
    return TensorAlgebra(
        product.result,
        (product.leg_left.target, product.leg_right.target),
        product.prefixes,
        (product.left_inclusion, product.right_inclusion),
    )


def tensor_structure(structures: Sequence[PoissonStructure], tensor: TensorAlgebra) -> PoissonStructure:
    """Block-diagonal Poisson structure on an n-fold tensor algebra."""
    result = tensor.result
    n = len(result.variables)
    z = result.zero()
    matrix = [[z for _ in range(n)] for _ in range(n)]
    for block, (structure, prefix) in enumerate(zip(structures, tensor.prefixes)):
        if structure.algebra.variables != tensor.factors[block].variables:
            raise VariableMismatchError(f"structure {block} does not match tensor factor")
        names = structure.algebra.variables.names
        mapping = {nm: prefix + nm for nm in names}
        for i in range(len(names)):
            for j in range(len(names)):
                e = structure.matrix[i][j]
                if e.is_zero():
                    continue
                gi = result.variables.index[prefix + names[i]]
                gj = result.variables.index[prefix + names[j]]
                matrix[gi][gj] = rename_polynomial(e, result.variables, mapping)
    return PoissonStructure(result, matrix, _trusted=True)
