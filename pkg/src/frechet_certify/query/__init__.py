"""
Near Neighbor Queries
---------------------

The kd-tree over curve keys and range queries over datasets of curves.
"""

from frechet_certify.query.near_neighbors import query_dataset

RUNNERS = {
    "query": query_dataset,
}
