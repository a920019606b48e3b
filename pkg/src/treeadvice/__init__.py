"""Active learning of bottom-up tree automata with rewrite-system advice."""
from .advice import AdviceConfig, AdviceSession, MembershipCache, advised_equivalence
from .consistency import (
    acceptance_order,
    check_full,
    check_negative,
    check_positive,
    heuristic_filter,
    state_count,
    violation_to_tree_pair,
)
from .dfta import Dfta, check_equivalence, evaluate, minimize, state_representatives
from .estimator import TreeAutomatonLearner
from .learner import learn
from .oracle import ApproximateTeacher, ExactTeacher, SamplerConfig, Teacher
from .synthesis import context_rule_exists, ground_characterization
from .terms import Context, Node, Rule, Signature, Trs, Var, normal_form, parse_term, parse_trs

__version__ = "0.1.0"
