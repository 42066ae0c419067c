"""Degree-bounded invariants, reduced presentations, induced Poisson
brackets, residual actions, diagonal stabilizers, and composition.

The reduction pipeline: restrict a Hamiltonian action to a moment fiber,
compute the subgroupoid invariants degree by degree as exact rational
nullspaces, present the invariant subalgebra by elimination, then induce the
Poisson bracket by lifting generators, bracketing upstairs, projecting back,
and re-expressing in the generators.  When a projected bracket escapes the
current generator set it is itself an invariant, so it is appended and the
presentation rebuilt (the closure loop); the loop is capped and logged.

Output is always "the subalgebra generated by invariants of degree <= d":
degree truncation is explicit, and the closure loop certifies that the
bracket closes on the (possibly enlarged) generator set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import Exponents, Polynomial, VarList, grevlex
from .groebner import (
    Ideal,
    elimination_ideal,
    rename_polynomial,
    standard_monomials,
    subalgebra_express,
)
from .algebra import (
    AlgebraMorphism,
    PresentedAlgebra,
    check_morphism,
    fibered_coproduct,
    product_algebra,
)
from .poisson import PoissonStructure, check_jacobi, product_structure
from .groupoid import (
    Subgroupoid,
    SymplecticGroupoid,
    check_subgroupoid,
    negate_groupoid,
    product_groupoid,
)
from .action import (
    GroupoidAction,
    check_action,
    check_hamiltonian,
    commuting_defect,
    extend_action_to_product,
    factor_actions,
    invariant_defect,
    product_action,
    restrict_action,
    restrict_action_to_fiber,
)
from .checks import CheckFailedError, CheckReport

DEFAULT_CLOSURE_CAP = 8


class ClosureCapError(RuntimeError):
    """The bracket-closure loop failed to stabilize within the cap."""

    def __init__(self, cap: int, stuck: Polynomial):
        super().__init__(f"closure loop exceeded {cap} iterations; stuck element: {stuck}")
        self.stuck = stuck


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------


def rational_nullspace(rows: list[list[Fraction]], ncols: int) -> tuple[int, list[list[Fraction]]]:
    """(rank, nullspace basis) of a matrix over the rationals.

    Reduced row echelon form with leftmost pivots; the basis vector for each
    free column carries 1 there, so the basis is canonical for the matrix.
    """
    matrix = [list(row) for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(matrix)):
            if matrix[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        matrix[r], matrix[pivot_row] = matrix[pivot_row], matrix[r]
        inv = Fraction(1) / matrix[r][c]
        matrix[r] = [v * inv for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][c] != 0:
                factor = matrix[i][c]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == len(matrix):
            break
    rank = len(pivots)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis: list[list[Fraction]] = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -matrix[row_idx][fc]
        basis.append(vec)
    return rank, basis


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------


@dataclass
class InvariantBasis:
    """Invariants of an action up to a degree bound.

    ``per_degree`` lists, for each degree, a basis of the solution space of
    the invariance linear system on standard monomials of that degree;
    ``rank_certificates`` records (degree, rank, columns) with
    rank + dim = columns.  ``algebra_generators`` is the pruned generator
    list: no generator lies in the subalgebra spanned by the others.
    """

    action: GroupoidAction
    degree_bound: int
    per_degree: list[tuple[int, list[Polynomial]]]
    algebra_generators: list[tuple[str, Polynomial]]
    rank_certificates: list[tuple[int, int, int]] = field(default_factory=list)

    def dimensions(self) -> list[tuple[int, int]]:
        return [(d, len(basis)) for d, basis in self.per_degree]


def invariants_up_to_degree(a: GroupoidAction, degree: int) -> InvariantBasis:
    """Solve the invariance condition degree by degree.

    For each degree the unknown is a combination of standard monomials of
    the module; the condition A*(f) - 1 (x) f = 0 in the action coproduct is
    linear, so its coefficients against the coproduct's standard monomials
    form an exact rational system whose nullspace is the invariant space.
    """
    if degree < 0:
        raise ValueError("degree bound must be non-negative")
    fc = a.act_coproduct
    fc_alg = fc.result
    module = a.module
    per_degree: list[tuple[int, list[Polynomial]]] = []
    certificates: list[tuple[int, int, int]] = []
    for d in range(degree + 1):
        monos = standard_monomials(module.relations, d)
        if not monos:
            per_degree.append((d, []))
            certificates.append((d, 0, 0))
            continue
        images: list[Polynomial] = []
        for m in monos:
            f = Polynomial(module.variables, {m: Fraction(1)}, _clean=True)
            images.append(fc_alg.normal_form(a.act.apply(f) - fc.include_right(f)))
        row_monos: list[Exponents] = sorted(
            {mm for img in images for mm in img.terms}, key=grevlex.key, reverse=True
        )
        rows = [
            [images[j].terms.get(mm, Fraction(0)) for j in range(len(monos))]
            for mm in row_monos
        ]
        rank, null = rational_nullspace(rows, len(monos))
        basis = []
        for vec in null:
            poly = Polynomial(
                module.variables,
                {m: c for m, c in zip(monos, vec) if c != 0},
            )
            basis.append(poly.primitive(grevlex))
        per_degree.append((d, basis))
        certificates.append((d, rank, len(monos)))

    generators = _prune_generators(per_degree, module)
    return InvariantBasis(a, degree, per_degree, generators, certificates)


def _prune_generators(
    per_degree: list[tuple[int, list[Polynomial]]],
    module: PresentedAlgebra,
) -> list[tuple[str, Polynomial]]:
    """Keep only candidates outside the subalgebra of the earlier ones, then
    sweep out anything expressible in the rest.  Order: degree, then leading
    monomial (descending), then discovery index."""
    candidates: list[Polynomial] = []
    for d, basis in per_degree:
        if d == 0:
            continue
        ranked = sorted(
            enumerate(basis),
            key=lambda item: (tuple(-k for k in _lm_key(item[1])), item[0]),
        )
        candidates.extend(p for _, p in ranked)
    accepted: list[Polynomial] = []
    for f in candidates:
        tags = [(f"y{i + 1}", g) for i, g in enumerate(accepted)]
        if subalgebra_express(f, tags, module.relations) is None:
            accepted.append(f)
    # irredundancy sweep
    changed = True
    while changed:
        changed = False
        for i in range(len(accepted)):
            others = accepted[:i] + accepted[i + 1 :]
            tags = [(f"y{k + 1}", g) for k, g in enumerate(others)]
            if subalgebra_express(accepted[i], tags, module.relations) is not None:
                accepted.pop(i)
                changed = True
                break
    return [(f"y{i + 1}", g) for i, g in enumerate(accepted)]


def _lm_key(p: Polynomial):
    if p.is_zero():
        return (0,)
    deg, rev = grevlex.key(p.leading_monomial(grevlex))
    return (deg, *rev)


# ---------------------------------------------------------------------------
# Reduced presentation
# ---------------------------------------------------------------------------


def present_reduced(inv: InvariantBasis) -> tuple[PresentedAlgebra, AlgebraMorphism]:
    """Present the subalgebra generated by the invariants.

    The relation ideal is the kernel of the evaluation map, computed by
    eliminating the module variables from module relations + (y_i - g_i).
    Returns the presented algebra and the evaluation morphism into the
    module algebra.
    """
    if not inv.algebra_generators:
        raise ValueError("no invariant generators to present")
    return _present_generators(inv.algebra_generators, inv.action.module)


def _present_generators(
    generators: Sequence[tuple[str, Polynomial]],
    module: PresentedAlgebra,
) -> tuple[PresentedAlgebra, AlgebraMorphism]:
    tag_names = [t for t, _ in generators]
    ext = VarList(list(module.variables.names) + tag_names)
    gens = [rename_polynomial(g, ext) for g in module.relations.generators]
    for t, g in generators:
        gens.append(Polynomial.variable(ext, t) - rename_polynomial(g, ext))
    relations = elimination_ideal(Ideal(ext, gens), tag_names)
    reduced = PresentedAlgebra(relations.ambient, relations, "reduced")
    evaluation = AlgebraMorphism(
        reduced,
        module,
        {t: module.normal_form(g) for t, g in generators},
        "evaluate",
    )
    return reduced, evaluation


# ---------------------------------------------------------------------------
# The induced bracket
# ---------------------------------------------------------------------------


@dataclass
class ReductionResult:
    """A reduced presentation with its induced Poisson bracket.

    ``projection`` evaluates reduced generators in the fiber algebra
    (y_i -> g_i); ``lifts`` are the chosen representatives in the ambient
    module algebra; ``closure_log`` records any generator-set extensions
    performed by the closure loop.
    """

    reduced: PresentedAlgebra
    reduced_poisson: PoissonStructure
    projection: AlgebraMorphism
    lifts: list[Polynomial]
    closure_log: list[str]
    invariants: InvariantBasis
    ambient_poisson: PoissonStructure

    @property
    def fiber(self) -> PresentedAlgebra:
        return self.invariants.action.module


def reduced_bracket(
    inv: InvariantBasis,
    ambient_poisson: PoissonStructure,
    closure_cap: int = DEFAULT_CLOSURE_CAP,
) -> ReductionResult:
    """Induce the Poisson bracket on the invariant presentation.

    For each generator pair, lift to the ambient module algebra (the
    generator polynomials are already normal-form representatives), bracket
    there, project to the fiber, and express in the generators.  Projected
    brackets of invariants are again invariants, so inexpressible ones are
    appended to the generator set and the presentation rebuilt; each
    appended element is re-verified to be invariant.
    """
    action = inv.action
    fiber = action.module
    if ambient_poisson.algebra.variables != fiber.variables:
        raise ValueError("ambient structure over different variables than the module")
    generators = list(inv.algebra_generators)
    log: list[str] = []
    bracket_cache: dict[tuple[str, str], Polynomial] = {}

    for _ in range(closure_cap + 1):
        reduced, evaluation = _present_generators(generators, fiber)
        entries: dict[tuple[int, int], Polynomial] = {}
        pending: list[Polynomial] = []
        for i in range(len(generators)):
            for j in range(i + 1, len(generators)):
                ti, fi = generators[i]
                tj, fj = generators[j]
                key = (ti, tj)
                proj = bracket_cache.get(key)
                if proj is None:
                    proj = fiber.normal_form(ambient_poisson.bracket_raw(fi, fj))
                    bracket_cache[key] = proj
                expr = subalgebra_express(proj, generators, fiber.relations)
                if expr is None:
                    pending.append(proj)
                else:
                    entries[(i, j)] = expr
        if not pending:
            break
        appended = False
        for nf in pending:
            candidate = nf.primitive(grevlex)
            if any(fiber.elements_equal(candidate, g) for _, g in generators):
                continue
            defect = invariant_defect(action, candidate)
            if defect is not None:
                raise CheckFailedError(
                    CheckReport(
                        "bracket closure",
                        [
                            _failed_verdict(
                                f"projected bracket {candidate} is invariant",
                                str(candidate),
                                str(defect),
                            )
                        ],
                    )
                )
            tag = f"y{len(generators) + 1}"
            generators.append((tag, candidate))
            log.append(f"appended invariant {tag} = {candidate} (bracket closure)")
            appended = True
        if not appended:
            raise ClosureCapError(closure_cap, pending[0])
    else:
        raise ClosureCapError(closure_cap, pending[0])

    matrix = _assemble_matrix(reduced, entries, len(generators))
    reduced_poisson = PoissonStructure(reduced, matrix)
    if not check_jacobi(reduced_poisson):
        raise CheckFailedError(
            CheckReport("reduced bracket", [_failed_verdict("Jacobi identity on reduced structure", None, None)])
        )
    # exactness: the reduced bracket evaluates to the projected ambient bracket
    for i in range(len(generators)):
        for j in range(i + 1, len(generators)):
            ti, fi = generators[i]
            tj, fj = generators[j]
            lhs = evaluation.apply(matrix[i][j])
            rhs = fiber.normal_form(ambient_poisson.bracket_raw(fi, fj))
            if not fiber.elements_equal(lhs, rhs):
                raise CheckFailedError(
                    CheckReport(
                        "reduced bracket",
                        [_failed_verdict(f"bracket entry ({ti},{tj}) evaluates correctly", f"{{{ti},{tj}}}", str(lhs - rhs))],
                    )
                )
    final_inv = InvariantBasis(
        action,
        inv.degree_bound,
        inv.per_degree,
        generators,
        inv.rank_certificates,
    )
    return ReductionResult(
        reduced,
        reduced_poisson,
        evaluation,
        [g for _, g in generators],
        log,
        final_inv,
        ambient_poisson,
    )


def _assemble_matrix(
    reduced: PresentedAlgebra,
    entries: dict[tuple[int, int], Polynomial],
    n: int,
) -> list[list[Polynomial]]:
    z = reduced.zero()
    matrix = [[z for _ in range(n)] for _ in range(n)]
    for (i, j), expr in entries.items():
        e = rename_polynomial(expr, reduced.variables)
        e = reduced.normal_form(e)
        matrix[i][j] = e
        matrix[j][i] = -e
    return matrix


def _failed_verdict(name: str, witness: str | None, detail: str | None):
    from .checks import Verdict

    return Verdict(name, False, witness, detail)


# ---------------------------------------------------------------------------
# Randomized evidence for the reduction
# ---------------------------------------------------------------------------


def verify_reduction(result: ReductionResult, trials: int = 10, seed: int = 0) -> CheckReport:
    """Randomized evidence suite for a reduction.

    (a) lift independence: perturbing every lift by a random fiber-ideal
    element never changes the bracket matrix modulo the reduced relations;
    (b) each projected generator bracket is invariant; (c) generator lifts
    preserve the fiber ideal under the ambient bracket; (d) the reduced
    structure satisfies Jacobi.
    """
    report = CheckReport("reduction evidence")
    rng = random.Random(seed)
    fiber = result.fiber
    action = result.invariants.action
    ambient = result.ambient_poisson
    generators = result.invariants.algebra_generators
    fiber_basis = fiber.relations.groebner_basis()
    names = fiber.variables.names

    def random_ideal_element() -> Polynomial:
        acc = Polynomial.zero(fiber.variables)
        if not fiber_basis:
            return acc
        for g in fiber_basis:
            if rng.random() < 0.5:
                continue
            coeff = Polynomial.constant(fiber.variables, rng.randint(-2, 2))
            if names and rng.random() < 0.5:
                coeff = coeff * Polynomial.variable(fiber.variables, rng.choice(names))
            acc = acc + coeff * g
        return acc

    # (a)
    ok = True
    witness = None
    detail = None
    for trial in range(trials):
        perturbed = [(t, g + random_ideal_element()) for t, g in generators]
        for i in range(len(generators)):
            for j in range(i + 1, len(generators)):
                br = fiber.normal_form(ambient.bracket_raw(perturbed[i][1], perturbed[j][1]))
                expr = subalgebra_express(br, generators, fiber.relations)
                if expr is None:
                    ok = False
                    witness = f"trial {trial}: {{{generators[i][0]},{generators[j][0]}}}"
                    detail = "perturbed bracket left the generated subalgebra"
                    break
                diff = result.reduced.normal_form(
                    rename_polynomial(expr, result.reduced.variables) - result.reduced_poisson.matrix[i][j]
                )
                if not diff.is_zero():
                    ok = False
                    witness = f"trial {trial}: {{{generators[i][0]},{generators[j][0]}}}"
                    detail = str(diff)
                    break
            if not ok:
                break
        if not ok:
            break
    report.add("lift independence", ok, witness=witness, detail=detail)

    # (b)
    ok = True
    witness = None
    detail = None
    for i in range(len(generators)):
        for j in range(i + 1, len(generators)):
            proj = fiber.normal_form(ambient.bracket_raw(generators[i][1], generators[j][1]))
            d = invariant_defect(action, proj)
            if d is not None:
                ok = False
                witness = f"{{{generators[i][0]},{generators[j][0]}}}"
                detail = str(d)
                break
        if not ok:
            break
    report.add("projected brackets invariant", ok, witness=witness, detail=detail)

    # (c)
    ok = True
    witness = None
    detail = None
    for _, g in generators:
        for rel in fiber.relations.generators:
            nf = fiber.normal_form(ambient.bracket_raw(g, rel))
            if not nf.is_zero():
                ok = False
                witness = f"{{{g}, {rel}}}"
                detail = str(nf)
                break
        if not ok:
            break
    report.add("lifts preserve the fiber ideal", ok, witness=witness, detail=detail)

    # (d)
    report.add("reduced Jacobi identity", check_jacobi(result.reduced_poisson))
    return report


# ---------------------------------------------------------------------------
# The reduction pipeline
# ---------------------------------------------------------------------------


def reduce_hamiltonian(
    action: GroupoidAction,
    module_poisson: PoissonStructure,
    sub: Subgroupoid,
    degree: int,
    route: str = "restrict",
    closure_cap: int = DEFAULT_CLOSURE_CAP,
    check: bool = True,
) -> ReductionResult:
    """Full reduction: verify the Hamiltonian preconditions, restrict to the
    moment fiber, compute invariants, and induce the bracket.

    ``route`` selects the pipeline: ``restrict`` restricts the action to the
    subgroupoid over S first; ``quotient`` quotients the module by the
    moment-fiber ideal and keeps the full groupoid acting.  The two routes
    produce identical results on inputs where the subgroupoid acts through
    the full groupoid's weights.
    """
    if route not in ("restrict", "quotient"):
        raise ValueError("route must be 'restrict' or 'quotient'")
    if check:
        ham = check_hamiltonian(action, module_poisson)
        if not ham.passed:
            raise CheckFailedError(ham)
        sub_report = check_subgroupoid(sub)
        if not sub_report.passed:
            raise CheckFailedError(sub_report)
        if sub.stabilizer_assertion is not True:
            report = CheckReport("reduction preconditions")
            report.add("subgroupoid asserted as stabilizer", False, detail="stabilizer_assertion is required for reduction")
            raise CheckFailedError(report)
    if route == "restrict":
        restricted = restrict_action(action, sub)
    else:
        fiber_gens = [action.moment.apply(f) for f in sub.base_ideal.generators]
        restricted = restrict_action_to_fiber(action, fiber_gens)
    inv = invariants_up_to_degree(restricted, degree)
    return reduced_bracket(inv, module_poisson, closure_cap)


# ---------------------------------------------------------------------------
# Residual actions
# ---------------------------------------------------------------------------


def residual_action(
    g_act: GroupoidAction,
    i_act: GroupoidAction,
    sub: Subgroupoid,
    degree: int,
    module_poisson: PoissonStructure,
    closure_cap: int = DEFAULT_CLOSURE_CAP,
    check: bool = True,
) -> tuple[ReductionResult, GroupoidAction]:
    """Descend a commuting Hamiltonian action to the reduction by the other.

    Pipeline: restrict both actions to the moment fiber of the second one
    (descent verified mechanically); compute subgroupoid invariants; express
    the moment and action images of the first action over the groupoid block
    and the invariant generators (inexpressible pieces trigger the same
    closure loop as the bracket); assemble the residual comorphism on the
    reduced presentation; re-verify the action axioms and the Hamiltonian
    condition for the reduced structure.
    """
    defect = commuting_defect(g_act, i_act)
    if defect is not None:
        h, nf = defect
        raise ValueError(f"actions do not commute: generator {h}, normal form {nf}")
    if check:
        for name, act in (("first action", g_act), ("second action", i_act)):
            ham = check_hamiltonian(act, module_poisson)
            if not ham.passed:
                failed = ham.first_failure()
                report = CheckReport(f"residual preconditions: {name}")
                report.add(failed.name, False, failed.witness, failed.detail)
                raise CheckFailedError(report)

    restricted_i = restrict_action(i_act, sub)
    fiber_gens = [i_act.moment.apply(f) for f in sub.base_ideal.generators]
    restricted_g = restrict_action_to_fiber(g_act, fiber_gens)
    fiber = restricted_i.module

    inv = invariants_up_to_degree(restricted_i, degree)
    generators = list(inv.algebra_generators)
    log: list[str] = []
    g = restricted_g.affine
    fc = restricted_g.act_coproduct
    keep = [fc.prefixes[0] + x for x in g.total.variables]

    for _ in range(closure_cap + 1):
        working = InvariantBasis(restricted_i, degree, inv.per_degree, generators, inv.rank_certificates)
        rr = reduced_bracket(working, module_poisson, closure_cap)
        generators = list(rr.invariants.algebra_generators)
        log.extend(entry for entry in rr.closure_log if entry not in log)

        embedded = [(t, fc.include_right(p)) for t, p in generators]
        pending: list[Polynomial] = []

        moment_exprs: dict[str, Polynomial] = {}
        for f in g.base.variables:
            proj = fiber.normal_form(restricted_g.moment.images[f])
            expr = subalgebra_express(proj, generators, fiber.relations)
            if expr is None:
                pending.append(proj)
            else:
                moment_exprs[f] = expr

        act_exprs: dict[str, Polynomial] = {}
        for t, p in generators:
            image = fc.result.normal_form(restricted_g.act.apply(p))
            expr = subalgebra_express(image, embedded, fc.result.relations, keep=keep)
            if expr is None:
                pending.extend(_module_components(image, fc))
            else:
                act_exprs[t] = expr

        if not pending:
            break
        appended = False
        for candidate in pending:
            candidate = fiber.normal_form(candidate).primitive(grevlex)
            if candidate.is_zero() or any(fiber.elements_equal(candidate, p) for _, p in generators):
                continue
            d = invariant_defect(restricted_i, candidate)
            if d is not None:
                raise CheckFailedError(
                    CheckReport(
                        "residual closure",
                        [_failed_verdict(f"descended element {candidate} is invariant", str(candidate), str(d))],
                    )
                )
            tag = f"y{len(generators) + 1}"
            generators.append((tag, candidate))
            log.append(f"appended invariant {tag} = {candidate} (residual descent)")
            appended = True
        if not appended:
            raise ClosureCapError(closure_cap, pending[0])
    else:
        raise ClosureCapError(closure_cap, pending[0])

    rr = ReductionResult(
        rr.reduced,
        rr.reduced_poisson,
        rr.projection,
        rr.lifts,
        log,
        rr.invariants,
        rr.ambient_poisson,
    )

    reduced = rr.reduced
    moment_res = AlgebraMorphism(
        g.base,
        reduced,
        {f: reduced.normal_form(rename_polynomial(moment_exprs[f], reduced.variables)) for f in g.base.variables},
        "moment",
    )
    res_fc = fibered_coproduct(
        g.total, reduced, g.base, g.src, moment_res, label="residual.act"
    )
    tag_map = {fc.prefixes[0] + x: fc.prefixes[0] + x for x in g.total.variables}
    for t, _ in generators:
        tag_map[t] = res_fc.prefixes[1] + t
    act_images = {
        t: rename_polynomial(act_exprs[t], res_fc.result.variables, tag_map) for t, _ in generators
    }
    act_res = AlgebraMorphism(reduced, res_fc.result, act_images, "act")
    residual = GroupoidAction(g_act.groupoid, reduced, moment_res, act_res, res_fc, "residual action")

    axioms = check_action(residual)
    if not axioms.passed:
        raise CheckFailedError(axioms)
    if check:
        ham = check_hamiltonian(residual, rr.reduced_poisson)
        if not ham.passed:
            raise CheckFailedError(ham)
    return rr, residual


def _module_components(image: Polynomial, fc) -> list[Polynomial]:
    """Split a coproduct element into module-block coefficients, grouped by
    groupoid-block monomial (descending)."""
    module = fc.leg_right.target
    left_names = [fc.prefixes[0] + x for x in fc.leg_left.target.variables]
    left_idx = [fc.result.variables.index[n] for n in left_names]
    groups: dict[Exponents, dict[Exponents, Fraction]] = {}
    module_positions = [
        fc.result.variables.index[fc.prefixes[1] + m] for m in module.variables
    ]
    for mono, coeff in image.terms.items():
        left_part = tuple(mono[i] for i in left_idx)
        right_part = tuple(mono[i] for i in module_positions)
        groups.setdefault(left_part, {})[right_part] = coeff
    out = []
    for left_part in sorted(groups, key=grevlex.key, reverse=True):
        out.append(Polynomial(module.variables, groups[left_part]))
    return out


# ---------------------------------------------------------------------------
# Diagonals and composition
# ---------------------------------------------------------------------------


def diagonal_stabilizer(
    sg: SymplecticGroupoid,
    product: SymplecticGroupoid | None = None,
    check: bool = True,
) -> Subgroupoid:
    """The diagonal subgroupoid of G^- x G over the diagonal of the base.

    Verifies the descent of all structure maps and both coisotropy
    conditions; the stabilizer status itself is a standard fact about
    diagonals recorded as an assertion (the Lie algebroid computation is
    outside the engine's scope).
    """
    if product is None:
        product = product_groupoid(negate_groupoid(sg), sg)
    total = product.groupoid.total
    base = product.groupoid.base
    total_gens = [
        total.var("L_" + h) - total.var("R_" + h) for h in sg.groupoid.total.variables
    ]
    base_gens = [
        base.var("L_" + x) - base.var("R_" + x) for x in sg.groupoid.base.variables
    ]
    sub = Subgroupoid(
        product,
        Ideal(total.variables, total_gens),
        Ideal(base.variables, base_gens),
        stabilizer_assertion=True,
        provenance="diagonal of the doubled groupoid; stabilizer status asserted",
        label=f"diag({sg.groupoid.label})",
    )
    if check:
        report = check_subgroupoid(sub)
        if not report.passed:
            raise CheckFailedError(report)
    return sub


def compose_hamiltonian_schemes(
    m_act: GroupoidAction,
    n_act: GroupoidAction,
    degree: int,
    m_poisson: PoissonStructure,
    n_poisson: PoissonStructure,
    closure_cap: int = DEFAULT_CLOSURE_CAP,
    check: bool = True,
) -> tuple[ReductionResult, GroupoidAction]:
    """Compose two Hamiltonian schemes over a shared middle groupoid.

    ``m_act`` is an action of G x I^- on M, ``n_act`` an action of I x K^-
    on N (both product groupoids with recorded factors).  The product module
    M (x) N carries commuting actions of (G x K^-) and (I^- x I); reducing
    along the diagonal stabilizer of the middle factor yields the composed
    Hamiltonian (G x K^-)-scheme.
    """
    g_side, iminus_side = factor_actions(m_act)
    i_side, kminus_side = factor_actions(n_act)
    middle_left = iminus_side.symplectic
    middle_right = i_side.symplectic
    if middle_left is None or middle_right is None:
        raise ValueError("composition needs symplectic structure groupoids")
    if not middle_left.same_presentation(negate_groupoid(middle_right)):
        raise ValueError("middle moments do not target the same groupoid (up to negation)")

    mn = product_algebra(m_act.module, n_act.module, label="MxN")
    p_mn = product_structure(m_poisson, n_poisson, mn)

    g_ext = extend_action_to_product(g_side, mn, "left")
    iminus_ext = extend_action_to_product(iminus_side, mn, "left")
    i_ext = extend_action_to_product(i_side, mn, "right")
    kminus_ext = extend_action_to_product(kminus_side, mn, "right")

    middle = product_action(iminus_ext, i_ext, label="middle")
    outer = product_action(g_ext, kminus_ext, label="outer")

    sub = diagonal_stabilizer(middle_right, product=middle.symplectic, check=check)
    return residual_action(outer, middle, sub, degree, p_mn, closure_cap, check=check)


# ---------------------------------------------------------------------------
# Presentation-isomorphism certificates
# ---------------------------------------------------------------------------


@dataclass
class IsomorphismCertificate:
    forward: AlgebraMorphism
    backward: AlgebraMorphism

    def as_dict(self) -> dict:
        return {
            "forward": {n: str(p) for n, p in self.forward.images.items()},
            "backward": {n: str(p) for n, p in self.backward.images.items()},
        }


def find_isomorphism(
    reduced: PresentedAlgebra,
    reduced_poisson: PoissonStructure,
    target: PresentedAlgebra,
    target_poisson: PoissonStructure,
    candidate_images: dict[str, Polynomial],
) -> IsomorphismCertificate | None:
    """Certify that candidate generator images define a Poisson isomorphism.

    The inverse is searched with subalgebra membership: each target variable
    must re-express in the candidate images.  Both composites are verified
    to be the identity modulo relations, both maps to be well-defined, and
    the forward map to intertwine the brackets.  Returns None when any step
    fails; a returned certificate is self-contained and checkable.
    """
    from .poisson import check_poisson_morphism

    forward = AlgebraMorphism(reduced, target, candidate_images, "iso")
    if not check_morphism(forward):
        return None
    tags = [(f"iso_{n}", candidate_images[n]) for n in reduced.variables.names]
    backward_images: dict[str, Polynomial] = {}
    for x in target.variables.names:
        expr = subalgebra_express(target.var(x), tags, target.relations)
        if expr is None:
            return None
        mapping = {f"iso_{n}": n for n in reduced.variables.names}
        backward_images[x] = reduced.normal_form(rename_polynomial(expr, reduced.variables, mapping))
    backward = AlgebraMorphism(target, reduced, backward_images, "iso_inv")
    if not check_morphism(backward):
        return None
    for n in reduced.variables.names:
        if not reduced.elements_equal(backward.apply(candidate_images[n]), reduced.var(n)):
            return None
    for x in target.variables.names:
        if not target.elements_equal(forward.apply(backward_images[x]), target.var(x)):
            return None
    if not check_poisson_morphism(reduced_poisson, target_poisson, forward, 1):
        return None
    return IsomorphismCertificate(forward, backward)


def unit_bimodule_certificate(
    m_act: GroupoidAction,
    result: ReductionResult,
    m_poisson: PoissonStructure,
) -> IsomorphismCertificate | None:
    """For a composition against the unit bimodule, certify that the reduced
    presentation is isomorphic to the original module with its bracket.

    The candidate map evaluates each reduction lift at the unit bisection of
    the middle groupoid: module-block variables stay, the N-block collapses
    through unit and moment.
    """
    _, iminus_side = factor_actions(m_act)
    middle = iminus_side.symplectic
    nu = iminus_side.moment
    unit = middle.groupoid.unit
    fiber = result.fiber
    module = m_act.module
    evaluation: dict[str, Polynomial] = {}
    for name in fiber.variables.names:
        if name.startswith("L_") and name[2:] in module.variables.index:
            evaluation[name] = module.var(name[2:])
        elif name.startswith("R_") and name[2:] in unit.images:
            collapsed = unit.images[name[2:]].substitute(dict(nu.images), module.variables)
            evaluation[name] = collapsed
        else:
            return None
    candidate = {
        t: module.normal_form(lift.substitute(evaluation, module.variables))
        for (t, _), lift in zip(result.invariants.algebra_generators, result.lifts)
    }
    return find_isomorphism(result.reduced, result.reduced_poisson, module, m_poisson, candidate)
