"""Combinatorics of coloured props: ordered acyclic graphs, graph
insertion, the operad of graphs, free props and push-outs.

Thin wrapper over the compiled core; graphs cross the boundary as JSON
objects matching the command-line formats.
"""

import json as _json

from _propcalc import (  # noqa: F401
    block_perm,
    canonical_decode,
    canonical_encode,
    compose_perms,
    encode_valence,
    free_com_count,
    insert_order,
    operad_act,
    operad_compose,
    operad_hom,
    operad_unit,
    twist,
    unshuffle,
)
import _propcalc as _core


def enumerate_arity(arity, colours=("*",)):
    """Isomorphism classes of completely ordered acyclic graphs at an
    arity such as "((1,1),(1,1);(1,1))", as JSON-style dicts."""
    return [_json.loads(g) for g in _core.enumerate_arity(arity, list(colours))]


def insert_graph(g, slot, h):
    """Insert graph h at the node in the given node-order slot of g."""
    return _json.loads(_core.insert_graph(_json.dumps(g), slot, _json.dumps(h)))


def check_operad(name="prop", colours=("*",), max_nodes=2, max_ports=2, samples=2000, seed=1):
    return _json.loads(_core.check_operad(name, list(colours), max_nodes, max_ports, samples, seed))


def sigma_free(name="prop", colours=("*",), max_nodes=2, max_ports=2):
    return _json.loads(_core.sigma_free(name, list(colours), max_nodes, max_ports))


def free_bicollection_counts(bicollection, valence, max_level=3):
    return _core.free_bicollection_counts(_json.dumps(bicollection), valence, max_level)


def pushout_report(problem, valence, max_nodes=2):
    return _json.loads(_core.pushout_report(_json.dumps(problem), valence, max_nodes))
