"""
Frechet Deciders
----------------

The free-space primitives, the filters, the complete decider and the high-level
decider that combines them.
"""

from frechet_certify.decide.decider import decide_pair, frechet_distance

RUNNERS = {
    "decide": decide_pair,
    "distance": frechet_distance,
}
