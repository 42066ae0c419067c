"""Groebner bases and the decision procedures built on them.

Buchberger's algorithm with the two classical pair-discarding criteria
(coprime leading monomials; chain criterion), normal selection strategy.
Bases are fully reduced, hence unique for a given ideal and order; every
downstream check in the engine is an ideal-membership certificate obtained
from a normal form.

A configurable budget caps the number of S-polynomial reductions.  Exceeding
it raises :class:`BudgetExceededError` - an explicit failure, never a wrong
answer.
"""

from __future__ import annotations

import heapq
import os
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import (
    Block,
    Exponents,
    GrevLex,
    MonomialOrder,
    Polynomial,
    VariableMismatchError,
    VarList,
    grevlex,
    monomial_degree,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)

DEFAULT_BUDGET = 200_000
BUDGET_ENV_VAR = "HAMREDUCE_BUDGET"

_budget_override: int | None = None


class BudgetExceededError(RuntimeError):
    """The S-pair budget was exhausted before the basis stabilized."""

    def __init__(self, budget: int):
        super().__init__(f"Groebner budget of {budget} S-pair reductions exceeded")
        self.budget = budget


def set_default_budget(budget: int | None) -> None:
    """Process-wide budget override (the CLI --budget flag lands here)."""
    global _budget_override
    _budget_override = budget


def default_budget() -> int:
    if _budget_override is not None:
        return _budget_override
    value = os.environ.get(BUDGET_ENV_VAR)
    if value:
        try:
            return int(value)
        except ValueError:
            pass
    return DEFAULT_BUDGET


class Ideal:
    """An ideal of a polynomial ring, given by a finite generating set.

    Reduced Groebner bases are cached per monomial order.  The cache is
    write-once per order and the stored basis is immutable, so concurrent
    fills are idempotent.
    """

    __slots__ = ("ambient", "generators", "_cache")

    def __init__(self, ambient: VarList, generators: Iterable[Polynomial]):
        gens = []
        for g in generators:
            if g.ambient != ambient:
                raise VariableMismatchError("generator over a different variable list")
            if not g.is_zero():
                gens.append(g)
        self.ambient = ambient
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._cache: dict[object, tuple[Polynomial, ...]] = {}

    def groebner_basis(self, order: MonomialOrder = grevlex, budget: int | None = None) -> tuple[Polynomial, ...]:
        key = order
        basis = self._cache.get(key)
        if basis is None:
            basis = tuple(buchberger(self.generators, order, budget))
            self._cache[key] = basis
        return basis

    def normal_form(self, f: Polynomial, order: MonomialOrder = grevlex, budget: int | None = None) -> Polynomial:
        return reduce_polynomial(f, self.groebner_basis(order, budget), order)

    def contains(self, f: Polynomial, order: MonomialOrder = grevlex, budget: int | None = None) -> bool:
        return self.normal_form(f, order, budget).is_zero()

    def is_trivial(self, order: MonomialOrder = grevlex, budget: int | None = None) -> bool:
        """True iff the ideal is the whole ring (1 is a member)."""
        basis = self.groebner_basis(order, budget)
        return len(basis) == 1 and basis[0].is_constant() and not basis[0].is_zero()

    def __add__(self, other: "Ideal") -> "Ideal":
        if self.ambient != other.ambient:
            raise VariableMismatchError("ideal sum over different variable lists")
        return Ideal(self.ambient, self.generators + other.generators)

    def __repr__(self) -> str:
        inside = ", ".join(str(g) for g in self.generators) or "0"
        return f"Ideal<{inside}>"


# ---------------------------------------------------------------------------
# Division / normal form
# ---------------------------------------------------------------------------


def reduce_polynomial(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    """Remainder of ``f`` on division by ``basis`` under ``order``.

    Against a Groebner basis the remainder is unique: it is the normal form,
    supported on standard monomials only.
    """
    if not basis:
        return f
    ambient = f.ambient
    lead = [(g.leading_monomial(order), g.terms[g.leading_monomial(order)], g) for g in basis]
    p = dict(f.terms)
    remainder: dict[Exponents, Fraction] = {}
    key = order.key
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, lc, g in lead:
            if monomial_divides(lm, m):
                shift = monomial_div(m, lm)
                factor = c / lc
                for gm, gc in g.terms.items():
                    t = monomial_mul(gm, shift)
                    s = p.get(t, _ZERO) - factor * gc
                    if s == 0:
                        p.pop(t, None)
                    else:
                        p[t] = s
                break
        else:
            remainder[m] = c
            del p[m]
    return Polynomial(ambient, remainder, _clean=True)


_ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------


def _s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    lmf = f.leading_monomial(order)
    lmg = g.leading_monomial(order)
    l = monomial_lcm(lmf, lmg)
    return f.mul_term(Fraction(1) / f.terms[lmf], monomial_div(l, lmf)) - g.mul_term(
        Fraction(1) / g.terms[lmg], monomial_div(l, lmg)
    )


def _interreduce(polys: Sequence[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    """Fully reduce a list against itself; result is monic and minimal."""
    current = [p for p in polys if not p.is_zero()]
    changed = True
    while changed:
        changed = False
        reduced: list[Polynomial] = []
        for i, p in enumerate(current):
            others = reduced + current[i + 1 :]
            r = reduce_polynomial(p, others, order) if others else p
            if r.is_zero():
                changed = True
                continue
            if r != p:
                changed = True
            reduced.append(r.monic(order))
        current = reduced
    return sorted(current, key=lambda p: order.key(p.leading_monomial(order)))


def buchberger(
    generators: Sequence[Polynomial],
    order: MonomialOrder = grevlex,
    budget: int | None = None,
) -> list[Polynomial]:
    """Reduced Groebner basis of the ideal generated by ``generators``.

    Pairs are processed in normal-selection order (smallest lcm first).
    Pairs with coprime leading monomials are discarded outright; the chain
    criterion discards (i,j) when some k divides lcm(i,j) and both (i,k) and
    (j,k) are already settled.
    """
    if budget is None:
        budget = default_budget()
    basis = _interreduce(generators, order)
    if not basis:
        return []

    lms = [g.leading_monomial(order) for g in basis]
    key = order.key

    pairs: list[tuple[int, tuple, int, int]] = []
    done: set[tuple[int, int]] = set()

    def push_pair(i: int, j: int) -> None:
        l = monomial_lcm(lms[i], lms[j])
        heapq.heappush(pairs, (monomial_degree(l), key(l), i, j))

    for j in range(len(basis)):
        for i in range(j):
            push_pair(i, j)

    spent = 0
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        if (i, j) in done:
            continue
        done.add((i, j))
        lcm_ij = monomial_lcm(lms[i], lms[j])
        # product criterion: coprime leading monomials reduce to zero
        if lcm_ij == monomial_mul(lms[i], lms[j]):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k == i or k == j:
                continue
            if (
                monomial_divides(lms[k], lcm_ij)
                and (min(i, k), max(i, k)) in done
                and (min(j, k), max(j, k)) in done
            ):
                skip = True
                break
        if skip:
            continue
        spent += 1
        if spent > budget:
            raise BudgetExceededError(budget)
        r = reduce_polynomial(_s_polynomial(basis[i], basis[j], order), basis, order)
        if r.is_zero():
            continue
        r = r.monic(order)
        basis.append(r)
        lms.append(r.leading_monomial(order))
        new = len(basis) - 1
        for k in range(new):
            push_pair(k, new)

    # minimalize: drop elements whose lead is divisible by another lead
    minimal: list[Polynomial] = []
    for i, g in enumerate(basis):
        lm = lms[i]
        if any(
            monomial_divides(lms[j], lm) and (j < i or lms[j] != lm)
            for j in range(len(basis))
            if j != i
        ):
            continue
        minimal.append(g)
    # reduce tails
    reduced: list[Polynomial] = []
    for i, g in enumerate(minimal):
        others = [h for j, h in enumerate(minimal) if j != i]
        reduced.append(reduce_polynomial(g, others, order).monic(order))
    reduced.sort(key=lambda p: key(p.leading_monomial(order)))
    return reduced


def groebner_basis(ideal: Ideal, order: MonomialOrder = grevlex, budget: int | None = None) -> tuple[Polynomial, ...]:
    return ideal.groebner_basis(order, budget)


def normal_form(f: Polynomial, ideal: Ideal, order: MonomialOrder = grevlex, budget: int | None = None) -> Polynomial:
    return ideal.normal_form(f, order, budget)


def ideal_membership(f: Polynomial, ideal: Ideal, budget: int | None = None) -> bool:
    return ideal.contains(f, grevlex, budget)


# ---------------------------------------------------------------------------
# Variable-list surgery
# ---------------------------------------------------------------------------


def rename_polynomial(f: Polynomial, target: VarList, mapping: dict[str, str] | None = None) -> Polynomial:
    """Transport ``f`` to ``target`` by renaming variables.

    ``mapping`` sends source names to target names; identity by default.
    Variables actually used must map to existing target names.
    """
    src = f.ambient
    idx_map: dict[int, int] = {}
    for i in f.variables_used():
        name = src.names[i]
        tgt_name = mapping.get(name, name) if mapping else name
        if tgt_name not in target.index:
            raise VariableMismatchError(f"variable {tgt_name!r} missing from target list")
        idx_map[i] = target.index[tgt_name]
    out: dict[Exponents, Fraction] = {}
    width = len(target)
    for m, c in f.terms.items():
        exps = [0] * width
        for i, e in enumerate(m):
            if e:
                exps[idx_map[i]] += e
        t = tuple(exps)
        out[t] = out.get(t, _ZERO) + c
    return Polynomial(target, out)


def restrict_polynomial(f: Polynomial, target: VarList) -> Polynomial:
    """Rewrite ``f`` over a sublist containing all variables it uses."""
    return rename_polynomial(f, target)


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------


def elimination_ideal(
    ideal: Ideal,
    keep: Sequence[str],
    budget: int | None = None,
) -> Ideal:
    """Intersect the ideal with the subring on the ``keep`` variables.

    Computed with a block order whose first block holds the eliminated
    variables.  The result is an ideal over the kept variables (in their
    original declaration order).
    """
    ambient = ideal.ambient
    keep_set = set(keep)
    for name in keep:
        if name not in ambient.index:
            raise VariableMismatchError(f"unknown variable {name!r}")
    elim = [name for name in ambient.names if name not in keep_set]
    kept = [name for name in ambient.names if name in keep_set]
    permuted = VarList(elim + kept)
    order = Block(len(elim), GrevLex(), GrevLex())
    work = Ideal(permuted, [rename_polynomial(g, permuted) for g in ideal.generators])
    basis = work.groebner_basis(order, budget)
    kept_list = VarList(kept)
    elim_indices = set(range(len(elim)))
    result = []
    for g in basis:
        if g.variables_used() & elim_indices:
            continue
        result.append(rename_polynomial(g, kept_list))
    return Ideal(kept_list, result)


def subalgebra_express(
    f: Polynomial,
    tags: Sequence[tuple[str, Polynomial]],
    ideal: Ideal,
    keep: Sequence[str] = (),
    budget: int | None = None,
) -> Polynomial | None:
    """Express ``f`` in the subalgebra generated by the tagged elements
    (and the ``keep`` variables), modulo ``ideal``.

    Adjoin a fresh tag variable per generator, eliminate the remaining
    original variables with a block order, and take the normal form of
    ``f``.  If the normal form still involves an eliminated variable the
    element is not in the subalgebra and ``None`` is returned; otherwise the
    result ``p`` over ``keep + tag`` variables satisfies
    ``f - p(keep, generators)  in  ideal``, which is exact (tag-variable
    elimination decides subalgebra membership completely for presented
    inputs).
    """
    ambient = ideal.ambient
    if f.ambient != ambient:
        raise VariableMismatchError("element over a different variable list than the ideal")
    tag_names = [t for t, _ in tags]
    for t in tag_names:
        if t in ambient.index:
            raise VariableMismatchError(f"tag variable {t!r} collides with an ambient variable")
    if len(set(tag_names)) != len(tag_names):
        raise VariableMismatchError("duplicate tag variable")
    keep_set = set(keep)
    elim = [name for name in ambient.names if name not in keep_set]
    kept = [name for name in ambient.names if name in keep_set]
    extended = VarList(elim + kept + tag_names)
    order = Block(len(elim), GrevLex(), GrevLex())
    gens = [rename_polynomial(g, extended) for g in ideal.generators]
    for t, g in tags:
        gens.append(Polynomial.variable(extended, t) - rename_polynomial(g, extended))
    work = Ideal(extended, gens)
    nf = work.normal_form(rename_polynomial(f, extended), order, budget)
    elim_indices = set(range(len(elim)))
    if nf.variables_used() & elim_indices:
        return None
    return rename_polynomial(nf, VarList(kept + tag_names))


# ---------------------------------------------------------------------------
# Standard monomials
# ---------------------------------------------------------------------------


def standard_monomials(
    ideal: Ideal,
    degree: int,
    order: MonomialOrder = grevlex,
    budget: int | None = None,
) -> list[Exponents]:
    """All degree-``degree`` monomials irreducible against the reduced basis.

    These span the degree-``degree`` slice of the quotient by the leading
    term ideal; they are a canonical coordinate system for linear algebra in
    the quotient ring.
    """
    basis = ideal.groebner_basis(order, budget)
    leads = [g.leading_monomial(order) for g in basis]
    nvars = len(ideal.ambient)
    out: list[Exponents] = []

    def rec(prefix: list[int], i: int, remaining: int) -> None:
        if i == nvars - 1:
            prefix.append(remaining)
            m = tuple(prefix)
            if not any(monomial_divides(lm, m) for lm in leads):
                out.append(m)
            prefix.pop()
            return
        for e in range(remaining + 1):
            prefix.append(e)
            rec(prefix, i + 1, remaining - e)
            prefix.pop()

    if nvars == 0:
        return [()] if degree == 0 else []
    rec([], 0, degree)
    out.sort(key=order.key, reverse=True)
    return out
