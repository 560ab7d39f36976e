"""Big-step evaluation of closed terms and full normalization of open ones.

Closed evaluation follows the substitution-based rules of the computation
system: canonical forms (universes, function and pair types, lambdas, pairs)
evaluate to themselves, projections force the pair, application and let
substitute and continue.  A presupposition has no value here; its witness is
supplied elsewhere.

Normalization additionally reduces under binders so that open types can be
compared; variables, constants and presupposition nodes are left in place as
neutral terms.
"""

from __future__ import annotations

from .syntax import (
    App,
    Const,
    Fst,
    Lam,
    Let,
    Pair,
    Pi,
    Require,
    Sigma,
    Snd,
    Term,
    Universe,
    Var,
    alpha_eq,
    substitute,
)

DEFAULT_STEP_BUDGET = 100_000


class EvalError(Exception):
    """Base class for evaluation failures."""


class StuckTerm(EvalError):
    """Projection of a non-pair, application of a non-function, or a name with
    no value in the bare computation system."""


class UnresolvedRequire(EvalError):
    """A presupposition reached evaluation position without a witness."""


class NonTermination(EvalError):
    """The reduction step budget was exhausted."""


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, limit: int):
        self.remaining = limit

    def spend(self) -> None:
        if self.remaining <= 0:
            raise NonTermination("evaluation step budget exceeded")
        self.remaining -= 1


def eval_closed(term: Term, step_budget: int = DEFAULT_STEP_BUDGET) -> Term:
    """Big-step evaluation of a closed term to its canonical form.

    The term must contain no free variables and no constants; projections and
    applications of non-canonical subjects are stuck, and a presupposition in
    evaluation position raises UnresolvedRequire.
    """
    return _eval(term, _Budget(step_budget))


def _eval(term: Term, budget: _Budget) -> Term:
    match term:
        case Universe() | Pi() | Sigma() | Lam() | Pair():
            return term
        case Fst(pair):
            value = _eval(pair, budget)
            if not isinstance(value, Pair):
                raise StuckTerm(f"fst of a non-pair: {value}")
            budget.spend()
            return _eval(value.first, budget)
        case Snd(pair):
            value = _eval(pair, budget)
            if not isinstance(value, Pair):
                raise StuckTerm(f"snd of a non-pair: {value}")
            budget.spend()
            return _eval(value.second, budget)
        case App(fun, arg):
            value = _eval(fun, budget)
            if not isinstance(value, Lam):
                raise StuckTerm(f"application of a non-function: {value}")
            budget.spend()
            return _eval(substitute(value.body, value.binder, arg), budget)
        case Let(binder, _, value, body):
            budget.spend()
            return _eval(substitute(body, binder, value), budget)
        case Require():
            raise UnresolvedRequire(f"no witness for {term}")
        case Var(name):
            raise StuckTerm(f"free variable in closed evaluation: {name}")
        case Const(name):
            raise StuckTerm(f"constant in the bare computation system: {name}")
    raise TypeError(f"not a term: {term!r}")


def normalize(term: Term, step_budget: int = DEFAULT_STEP_BUDGET) -> Term:
    """Full beta-normal form, reducing under binders.

    Variables and constants are neutral.  Presupposition nodes are preserved
    (their goal type and body are normalized in place); their resolution
    belongs to the solver and elaborator, not to computation.
    """
    return _norm(term, _Budget(step_budget))


def _norm(term: Term, budget: _Budget) -> Term:
    match term:
        case Var() | Const() | Universe():
            return term
        case Pi(binder, domain, codomain):
            return Pi(binder, _norm(domain, budget), _norm(codomain, budget))
        case Sigma(binder, domain, codomain):
            return Sigma(binder, _norm(domain, budget), _norm(codomain, budget))
        case Lam(binder, body):
            return Lam(binder, _norm(body, budget))
        case Pair(first, second):
            return Pair(_norm(first, budget), _norm(second, budget))
        case App(fun, arg):
            fun = _norm(fun, budget)
            arg = _norm(arg, budget)
            if isinstance(fun, Lam):
                budget.spend()
                return _norm(substitute(fun.body, fun.binder, arg), budget)
            return App(fun, arg)
        case Fst(pair):
            pair = _norm(pair, budget)
            if isinstance(pair, Pair):
                budget.spend()
                return pair.first
            return Fst(pair)
        case Snd(pair):
            pair = _norm(pair, budget)
            if isinstance(pair, Pair):
                budget.spend()
                return pair.second
            return Snd(pair)
        case Let(binder, _, value, body):
            budget.spend()
            return _norm(substitute(body, binder, value), budget)
        case Require(binder, goal_type, body):
            return Require(binder, _norm(goal_type, budget), _norm(body, budget))
    raise TypeError(f"not a term: {term!r}")


def convertible(a: Term, b: Term, step_budget: int = DEFAULT_STEP_BUDGET) -> bool:
    """Definitional equality: both sides normalize to alpha-equal terms."""
    return alpha_eq(normalize(a, step_budget), normalize(b, step_budget))
