"""Independent oracles and random generators shared by the test suite.

The oracles are deliberately naive and separate from the implementation paths
they check: normalization is compared against a leftmost-outermost rewriter
run to fixpoint, and the witness solver against a brute-force enumeration of
every projection spine filtered by the typechecker.
"""

from __future__ import annotations

import random

from presup import (
    contains_require,
    App,
    CheckConfig,
    Const,
    Context,
    Fst,
    Lam,
    Let,
    Pair,
    Pi,
    Require,
    Sigma,
    Signature,
    Snd,
    Term,
    TypeCheckError,
    Universe,
    Var,
    alpha_key,
    convertible,
    infer_all,
    normalize,
    solve,
    substitute,
)

# ---------------------------------------------------------------------------
# Leftmost-outermost rewriting (oracle for normalize)


def _step(term: Term):
    """One leftmost-outermost reduction, or None if term is normal."""
    match term:
        case App(Lam(binder, body), arg):
            return substitute(body, binder, arg)
        case Fst(Pair(first, _)):
            return first
        case Snd(Pair(_, second)):
            return second
        case Let(binder, _, value, body):
            return substitute(body, binder, value)
        case Var() | Const() | Universe():
            return None
        case App(fun, arg):
            reduced = _step(fun)
            if reduced is not None:
                return App(reduced, arg)
            reduced = _step(arg)
            return None if reduced is None else App(fun, reduced)
        case Pair(first, second):
            reduced = _step(first)
            if reduced is not None:
                return Pair(reduced, second)
            reduced = _step(second)
            return None if reduced is None else Pair(first, reduced)
        case Fst(pair):
            reduced = _step(pair)
            return None if reduced is None else Fst(reduced)
        case Snd(pair):
            reduced = _step(pair)
            return None if reduced is None else Snd(reduced)
        case Pi(binder, domain, codomain):
            reduced = _step(domain)
            if reduced is not None:
                return Pi(binder, reduced, codomain)
            reduced = _step(codomain)
            return None if reduced is None else Pi(binder, domain, reduced)
        case Sigma(binder, domain, codomain):
            reduced = _step(domain)
            if reduced is not None:
                return Sigma(binder, reduced, codomain)
            reduced = _step(codomain)
            return None if reduced is None else Sigma(binder, domain, reduced)
        case Lam(binder, body):
            reduced = _step(body)
            return None if reduced is None else Lam(binder, reduced)
        case Require(binder, goal, body):
            reduced = _step(goal)
            if reduced is not None:
                return Require(binder, reduced, body)
            reduced = _step(body)
            return None if reduced is None else Require(binder, goal, reduced)
    raise TypeError(f"not a term: {term!r}")


def leftmost_outermost(term: Term, max_steps: int = 20_000) -> Term:
    for _ in range(max_steps):
        reduced = _step(term)
        if reduced is None:
            return term
        term = reduced
    raise AssertionError("oracle rewriter did not reach a normal form")


# ---------------------------------------------------------------------------
# Brute-force witness enumeration (oracle for solve)


def typed_spine_universe(sig: Signature, ctx: Context, depth: int, cfg: CheckConfig):
    """Every term of the grammar {head, fst t, snd t} up to `depth` projections,
    paired with its normalized inferred type (well-typed ones only).

    Built once per context so several goals can be filtered against it."""
    heads = [Var(name) for name, _ in ctx.entries]
    heads += [Const(name) for name, _ in sig.entries]
    terms = list(heads)
    layer = heads
    for _ in range(depth):
        layer = [wrap(t) for t in layer for wrap in (Fst, Snd)]
        terms.extend(layer)
    typed = []
    for term in terms:
        try:
            derivations = infer_all(sig, ctx, term, cfg)
        except TypeCheckError:
            continue
        inferred = normalize(derivations[0].conclusion.classifier, cfg.step_budget)
        typed.append((term, inferred))
    return typed


def oracle_filter(typed_universe, goal: Term, step_budget: int = 100_000):
    """Alpha keys of the spine terms whose type is convertible with goal."""
    goal = normalize(goal, step_budget)
    return {
        alpha_key(normalize(term, step_budget))
        for term, inferred in typed_universe
        if alpha_key(inferred) == alpha_key(goal)
    }


def spine_oracle(sig: Signature, ctx: Context, goal: Term, depth: int, cfg: CheckConfig):
    """Brute-force witness set for a single goal (see typed_spine_universe)."""
    return oracle_filter(typed_spine_universe(sig, ctx, depth, cfg), goal, cfg.step_budget)


def solver_witness_keys(sig, ctx, goal, depth, max_solutions=10_000):
    cfg = CheckConfig(solver_depth=depth, max_solutions_per_require=max_solutions)
    return {alpha_key(normalize(s.witness)) for s in solve(sig, ctx, goal, cfg)}


# ---------------------------------------------------------------------------
# Random syntactic terms (for the purely syntactic laws)

_VAR_NAMES = ("x", "y", "z", "w")
_CONST_NAMES = ("A", "B")


def random_syntactic_term(rng: random.Random, depth: int) -> Term:
    """An arbitrary (not necessarily well-typed) term of bounded depth."""
    if depth <= 0:
        return rng.choice(
            [Var(rng.choice(_VAR_NAMES)), Const(rng.choice(_CONST_NAMES)), Universe(rng.randrange(3))]
        )
    shape = rng.randrange(11)
    sub = lambda: random_syntactic_term(rng, depth - 1)
    binder = rng.choice(_VAR_NAMES)
    if shape == 0:
        return Var(rng.choice(_VAR_NAMES))
    if shape == 1:
        return Const(rng.choice(_CONST_NAMES))
    if shape == 2:
        return Universe(rng.randrange(3))
    if shape == 3:
        return Pi(binder, sub(), sub())
    if shape == 4:
        return Sigma(binder, sub(), sub())
    if shape == 5:
        return Lam(binder, sub())
    if shape == 6:
        return App(sub(), sub())
    if shape == 7:
        return Pair(sub(), sub())
    if shape == 8:
        return rng.choice([Fst, Snd])(sub())
    if shape == 9:
        return Require(binder, sub(), sub())
    return Let(binder, sub(), sub(), sub())


# ---------------------------------------------------------------------------
# Random contexts and well-typed terms


def random_context(rng: random.Random, max_hyps: int = 4, max_nesting: int = 4) -> Context:
    """A telescope of 1..max_hyps hypotheses over the base signature, with
    pair-type nesting bounded by max_nesting."""
    ctx = Context()
    for index in range(rng.randint(1, max_hyps)):
        ctx = ctx.extend(f"h{index}", _random_type(rng, max_nesting, (), index * 10))
    return ctx


def _random_type(rng, nesting, entity_scope, salt) -> Term:
    if nesting <= 0 or rng.random() < 0.35:
        return _leaf_type(rng, entity_scope)
    binder = f"v{salt}_{nesting}"
    domain = _random_type(rng, nesting - 1, entity_scope, salt + 1)
    inner_scope = entity_scope + ((binder,) if domain == Const("E") else ())
    codomain = _random_type(rng, nesting - 1, inner_scope, salt + 2)
    shape = Sigma if rng.random() < 0.8 else Pi
    return shape(binder, domain, codomain)


def _leaf_type(rng, entity_scope) -> Term:
    entity = Const("E")
    if not entity_scope:
        return entity if rng.random() < 0.8 else Universe(0)
    roll = rng.random()
    if roll < 0.4:
        return entity
    if roll < 0.55:
        return Universe(0)
    subject = Var(rng.choice(entity_scope))
    if roll < 0.85:
        predicate = Const(rng.choice(("Man", "Farmer", "Donkey", "WalkedIn", "SatDown")))
        return App(predicate, subject)
    relation = Const(rng.choice(("Owns", "Beats")))
    return App(App(relation, subject), Var(rng.choice(entity_scope)))


class PoolEntry:
    """A generated term with the type it was built to have."""

    __slots__ = ("term", "type", "depth", "inferable")

    def __init__(self, term, type_, depth, inferable):
        self.term = term
        self.type = type_
        self.depth = depth
        self.inferable = inferable


def typed_pool(
    rng: random.Random,
    sig: Signature,
    ctx: Context,
    steps: int,
    cfg: CheckConfig,
    with_requires: bool = False,
    max_depth: int = 5,
) -> list:
    """Grow a pool of well-typed terms bottom-up from the hypotheses and
    constants: pairs, projections, applications, lambdas, formations, and
    (optionally) presupposition wrappers around solvable types."""
    pool = [PoolEntry(Var(n), normalize(t), 1, True) for n, t in ctx.entries]
    pool += [PoolEntry(Const(n), normalize(t), 1, True) for n, t in sig.entries]
    pool.append(PoolEntry(Universe(0), Universe(1), 1, True))
    fresh = 0

    def pick(predicate):
        candidates = [e for e in pool if predicate(e)]
        return rng.choice(candidates) if candidates else None

    for _ in range(steps):
        op = rng.randrange(8)
        if op == 0:  # non-dependent pair
            a, b = pick(lambda e: True), pick(lambda e: True)
            if a.depth >= max_depth or b.depth >= max_depth:
                continue
            pool.append(
                PoolEntry(
                    Pair(a.term, b.term),
                    Sigma("_", a.type, b.type),
                    max(a.depth, b.depth) + 1,
                    False,
                )
            )
        elif op == 1:  # first projection
            e = pick(lambda e: e.inferable and isinstance(e.type, Sigma) and e.depth < max_depth)
            if e is None:
                continue
            pool.append(PoolEntry(Fst(e.term), e.type.domain, e.depth + 1, True))
        elif op == 2:  # second projection
            e = pick(lambda e: e.inferable and isinstance(e.type, Sigma) and e.depth < max_depth)
            if e is None:
                continue
            second_type = normalize(substitute(e.type.codomain, e.type.binder, Fst(e.term)))
            # A presupposition in a dependent position would leak into the
            # type, where it has no computational interpretation; keep
            # classifiers presupposition-free, as the discourse corpus does.
            if contains_require(second_type):
                continue
            pool.append(PoolEntry(Snd(e.term), second_type, e.depth + 1, True))
        elif op == 3:  # application
            f = pick(lambda e: e.inferable and isinstance(e.type, Pi) and e.depth < max_depth)
            if f is None:
                continue
            domain = f.type.domain
            a = pick(
                lambda e: e.depth < max_depth
                and convertible(e.type, domain, cfg.step_budget)
            )
            if a is None:
                continue
            result = normalize(substitute(f.type.codomain, f.type.binder, a.term))
            if contains_require(result):
                continue
            pool.append(
                PoolEntry(App(f.term, a.term), result, max(f.depth, a.depth) + 1, True)
            )
        elif op == 4:  # constant or identity function
            fresh += 1
            binder = f"g{fresh}"
            domain = _pool_type(rng, pool)
            if domain is None:
                continue
            if rng.random() < 0.5:
                body, body_type, depth = Var(binder), domain, 1
            else:
                e = pick(lambda e: e.depth < max_depth - 1)
                body, body_type, depth = e.term, e.type, e.depth
            pool.append(
                PoolEntry(Lam(binder, body), Pi(binder, domain, body_type), depth + 1, False)
            )
        elif op == 5:  # formation as a term
            fresh += 1
            binder = f"t{fresh}"
            shape = Sigma if rng.random() < 0.6 else Pi
            predicate = Const(rng.choice(("Man", "Farmer", "Donkey")))
            term = shape(binder, Const("E"), App(predicate, Var(binder)))
            pool.append(PoolEntry(term, Universe(0), 2, True))
        elif op == 6:  # universe
            level = rng.randrange(3)
            pool.append(PoolEntry(Universe(level), Universe(level + 1), 1, True))
        elif op == 7 and with_requires:  # presupposition around a solvable type
            e = pick(
                lambda e: e.depth < max_depth
                and not isinstance(e.type, Universe)
                and solve(sig, ctx, e.type, cfg)
            )
            if e is None:
                continue
            fresh += 1
            binder = f"r{fresh}"
            pool.append(
                PoolEntry(Require(binder, e.type, Var(binder)), e.type, e.depth + 1, True)
            )
    return pool


def _pool_type(rng, pool):
    """A small well-formed type to use as a lambda domain."""
    candidates = [e.term for e in pool if isinstance(e.type, Universe)]
    candidates.append(Const("E"))
    return rng.choice(candidates)
