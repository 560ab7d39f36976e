"""Witness search for presuppositions.

The search space is exactly the projection spines: a hypothesis or constant
under a chain of fst/snd, descending only while the type at hand is a pair
type.  This is the finite, deterministic stand-in for "any witness
experienced so far": everything the discourse context makes available by
projection, most recent hypothesis first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .derivations import (
    CONST,
    CONV,
    HYP,
    SIG_E1,
    SIG_E2,
    CheckConfig,
    Derivation,
    Judgment,
)
from .evaluator import convertible, normalize
from .syntax import (
    Const,
    Context,
    Fst,
    Sigma,
    Signature,
    Snd,
    Term,
    Var,
    alpha_eq,
    alpha_key,
    substitute,
)

DEFAULT_CONFIG = CheckConfig()


@dataclass(frozen=True)
class Solution:
    """A witness for a presupposition goal, with its typing derivation."""

    witness: Term
    derivation: Derivation


def enumerate_spines(sig: Signature, ctx: Context, depth: int) -> list:
    """All projection spines with their normalized types.

    Heads are taken from the context newest-first, then the signature
    oldest-first; for a fixed head, paths come in breadth-first order and
    descend only through pair types, to at most `depth` projections.
    """
    return [
        (term, spine_type)
        for term, spine_type, _ in _spines(sig, ctx, depth, DEFAULT_CONFIG.step_budget)
    ]


def _spines(sig: Signature, ctx: Context, depth: int, step_budget: int):
    heads = [(Var(name), entry_type, HYP) for name, entry_type in reversed(ctx.entries)]
    heads += [(Const(name), entry_type, CONST) for name, entry_type in sig.entries]
    out = []
    for head, declared, rule in heads:
        conclusion = Judgment(sig, ctx, head, declared)
        derivation = Derivation(rule, conclusion)
        normal = normalize(declared, step_budget)
        if not alpha_eq(normal, declared):
            derivation = Derivation(CONV, Judgment(sig, ctx, head, normal), (derivation,))
        queue = deque([(head, normal, derivation, 0)])
        while queue:
            term, spine_type, term_derivation, length = queue.popleft()
            out.append((term, spine_type, term_derivation))
            if length >= depth or not isinstance(spine_type, Sigma):
                continue
            first = Fst(term)
            first_derivation = Derivation(
                SIG_E1, Judgment(sig, ctx, first, spine_type.domain), (term_derivation,)
            )
            queue.append((first, spine_type.domain, first_derivation, length + 1))
            second = Snd(term)
            second_type = substitute(spine_type.codomain, spine_type.binder, first)
            second_derivation = Derivation(
                SIG_E2, Judgment(sig, ctx, second, second_type), (term_derivation,)
            )
            second_normal = normalize(second_type, step_budget)
            if not alpha_eq(second_normal, second_type):
                second_derivation = Derivation(
                    CONV, Judgment(sig, ctx, second, second_normal), (second_derivation,)
                )
            queue.append((second, second_normal, second_derivation, length + 1))
    return out


def solve(sig: Signature, ctx: Context, goal: Term, cfg: CheckConfig | None = None) -> list:
    """All spine witnesses whose type is convertible with the goal.

    Order is inherited from the enumeration, duplicates (up to alpha on the
    normalized witness) are dropped, and the list is truncated at the
    configured bound.  An empty list means the presupposition is unresolved
    in this context; that is the caller's error to report.
    """
    cfg = cfg or DEFAULT_CONFIG
    solutions = []
    seen = set()
    for term, spine_type, derivation in _spines(sig, ctx, cfg.solver_depth, cfg.step_budget):
        if not convertible(spine_type, goal, cfg.step_budget):
            continue
        key = alpha_key(normalize(term, cfg.step_budget))
        if key in seen:
            continue
        seen.add(key)
        if not alpha_eq(spine_type, goal):
            derivation = Derivation(
                CONV, Judgment(sig, ctx, term, goal), (derivation,)
            )
        solutions.append(Solution(term, derivation))
        if len(solutions) >= cfg.max_solutions_per_require:
            break
    return solutions
