"""Nash implementation of choice-liberal social choice rules."""

from .mechanisms import (
    LiberalGameForm,
    LiberalStrategy,
    MatrixGameForm,
    attainable_set,
    eval_liberal,
    liberal_game_form,
    matrix_game_form,
)
from .nash import best_deviation, equilibrium_outcomes, nash_equilibria
from .prefs import (
    Profile,
    Relation,
    WeakOrder,
    compare,
    enumerate_orders,
    format_profile,
    parse_profile,
    sample_weak_order,
)
from .rules import PairAssignment, canonical_assignment, liberal_rule

__version__ = "0.1.0"
