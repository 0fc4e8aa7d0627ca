"""
Frechet Certify
---------------

A certifying decider for the Frechet distance between polygonal curves, the exact
distance by bisection over the decider, a near-neighbor query structure over curve
datasets and the benchmark tooling used to exercise all three.
"""
