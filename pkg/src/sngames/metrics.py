"""Social optimum and the prices of anarchy / stability, by exhaustive
evaluation under a state-count guard."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .equilibria import DEFAULT_GUARD, enumerate_ne
from .errors import GuardExceededError
from .model import JointStrategy, SocialNetwork, profile_key, social_welfare

FINITE = "finite"
INFINITE = "infinite"
UNDEFINED_NEGATIVE = "undefined-negative-welfare"


@dataclass(frozen=True)
class Ratio:
    """optimum / equilibrium welfare, with the raw operands kept alongside.

    x/0 with x > 0 is infinite; 0/0 counts as 1; a negative denominator has
    no meaningful ratio and is tagged instead of folded into a number.
    """

    numerator: Fraction
    denominator: Fraction

    @property
    def verdict(self) -> str:
        if self.denominator < 0:
            return UNDEFINED_NEGATIVE
        if self.denominator == 0 and self.numerator > 0:
            return INFINITE
        return FINITE

    @property
    def value(self) -> Fraction | None:
        if self.verdict != FINITE:
            return None
        if self.denominator == 0:
            return Fraction(1)
        return self.numerator / self.denominator

    @property
    def is_infinite(self) -> bool:
        return self.verdict == INFINITE

    def __str__(self) -> str:
        if self.verdict == INFINITE:
            return "inf"
        if self.verdict == UNDEFINED_NEGATIVE:
            return UNDEFINED_NEGATIVE
        return str(self.value)


@dataclass(frozen=True)
class EfficiencyReport:
    optimum: Fraction
    optimum_profile: JointStrategy
    equilibria: tuple
    welfares: tuple = ()
    best_ne: tuple | None = None   # (profile, welfare)
    worst_ne: tuple | None = None
    poa: Ratio | None = None
    pos: Ratio | None = None

    @property
    def has_ne(self) -> bool:
        return bool(self.equilibria)


def social_optimum(net: SocialNetwork, guard: int = DEFAULT_GUARD) -> tuple[JointStrategy, Fraction]:
    """Least profile (canonical order) among those with maximal welfare."""
    count = net.state_count()
    if count > guard:
        raise GuardExceededError(count, guard)
    g = net._game
    best = None
    for s in itertools.product(*g.options):
        w = sum(g.value(k, s[k], s) for k in range(g.n))
        if best is None or w > best[0] or (w == best[0] and profile_key(s) < profile_key(best[1])):
            best = (w, s)
    return best[1], Fraction(best[0], g.scale)


def efficiency(net: SocialNetwork, guard: int = DEFAULT_GUARD) -> EfficiencyReport:
    """Optimum, best and worst equilibria, PoA and PoS.

    With no equilibrium the report carries only the optimum; ties between
    equilibria of equal welfare go to the canonically least profile.
    """
    opt_profile, opt = social_optimum(net, guard)
    nes = enumerate_ne(net, guard)
    if not nes:
        return EfficiencyReport(opt, opt_profile, (), ())
    scored = [(social_welfare(net, s), s) for s in nes]
    best = max(scored, key=lambda p: p[0])
    worst = min(scored, key=lambda p: p[0])
    return EfficiencyReport(
        opt, opt_profile, tuple(nes), tuple(w for w, _ in scored),
        best_ne=(best[1], best[0]), worst_ne=(worst[1], worst[0]),
        poa=Ratio(opt, worst[0]), pos=Ratio(opt, best[0]),
    )
