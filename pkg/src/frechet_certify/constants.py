from typing import NamedTuple

######################
# Numeric tolerances #
######################

# Circle-segment intersection: a (normalized) discriminant in [-TANGENCY_TOL, 0]
# is a tangency, parameters within PARAM_TOL of [0, 1] are clamped.
TANGENCY_TOL = 1e-12
PARAM_TOL = 1e-12

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL_FACTOR = 1e-12

##########
# Stages #
##########


class _Stages(NamedTuple):
    # Order matters, it is the order in which the decider runs them.
    endpoints: str = "endpoints"
    bbox: str = "bbox"
    greedy: str = "greedy"
    equal_time: str = "equal-time"
    negative: str = "negative"
    complete: str = "complete"

    def names(self) -> list[str]:
        return list(self)

    def filters(self) -> list[str]:
        return [self.bbox, self.greedy, self.equal_time, self.negative]


STAGES = _Stages()

# Stage reported when the filters are inconclusive and the complete decider is off.
NO_STAGE = "none"


class _Verdicts(NamedTuple):
    close: str = "close"
    far: str = "far"
    unknown: str = "unknown"


VERDICTS = _Verdicts()

#################
# Pruning rules #
#################


class _Rules(NamedTuple):
    shrink: str = "2"
    simple_empty: str = "3a"
    simple_corner: str = "3b"
    simple_column: str = "3c"
    diagram_edge: str = "4"

    def names(self) -> list[str]:
        return list(self)


RULES = _Rules()


class _BoxOutcomes(NamedTuple):
    # Labels used in the box tree dump, one per visited box.
    cell: str = "cell"
    empty_inputs: str = "I"
    shrink: str = "II"
    simple: str = "III"
    diagram_edge: str = "IV"
    split: str = "split"


BOX_OUTCOMES = _BoxOutcomes()

################
# Certificates #
################


class _CertificateKinds(NamedTuple):
    yes: str = "YES"
    no: str = "NO"


CERTIFICATE_KINDS = _CertificateKinds()


class _RejectReasons(NamedTuple):
    wrong_kind: str = "wrong-kind"
    bad_start: str = "bad-start"
    bad_end: str = "bad-end"
    out_of_range: str = "out-of-range"
    non_monotone_step: str = "non-monotone-step"
    non_free_point: str = "non-free-point"
    cell_violation: str = "cell-violation"
    free_piece: str = "free-piece"
    bad_step: str = "bad-step"


REJECT_REASONS = _RejectReasons()

##############
# Benchmarks #
##############

KD_LEAF_SIZE = 16
KD_DIMENSIONS = 8

QUERY_KS = (0, 1, 10, 100, 1000)
DECIDER_FACTOR_EXPONENTS = tuple(range(-10, 1))


class _Sides(NamedTuple):
    below: str = "below"
    above: str = "above"


SIDES = _Sides()

REPORT_COLUMNS = [
    "case_id",
    "n",
    "m",
    "delta",
    "verdict",
    "stage",
    "boxes",
    "time_ns",
    "config",
]

DECIDER_CASE_COLUMNS = ["case_id", "pi_id", "sigma_id", "delta", "k", "l", "side"]
QUERY_CASE_COLUMNS = ["case_id", "pi_id", "delta", "k"]


class _BenchmarkKinds(NamedTuple):
    decider: str = "decider"
    query: str = "query"


BENCHMARK_KINDS = _BenchmarkKinds()

ABLATIONS = [
    "all",
    "no-filters",
    "filters-only",
    *[f"no-{rule}" for rule in RULES],
]

######################
# Free-space diagram #
######################


class _Axes(NamedTuple):
    # A vertical boundary has a fixed p (an index on pi) and runs along sigma.
    vertical: str = "vertical"
    horizontal: str = "horizontal"


AXES = _Axes()


class _Propagations(NamedTuple):
    # How the first point of a reachable interval was reached.
    origin: str = "origin"
    cell: str = "cell"
    corner: str = "rule-IIIb"
    column: str = "rule-IIIc"
    merge: str = "merge"


PROPAGATIONS = _Propagations()
