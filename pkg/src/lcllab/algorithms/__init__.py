"""Reference solvers, registered by name for the command line."""

from .adversary import (AdversaryPlan, GateError, adversary_inputs, adversary_online_inputs, adversary_order,
                        online_attack, slocal_independence)
from .bad_graph import BadGraphAlgorithm, solve_bad_graph
from .bad_tree import BadTreeAlgorithm, solve_bad_tree
from .common import default_locality
from .pi import PiPrivate, PiShared
from .sequential import OnlineRowCopy, SlocalRowGreedy

REGISTRY = {
    "pi-shared": PiShared,
    "pi-private-zero": lambda: PiPrivate("all-zero"),
    "pi-private-rowrand": lambda: PiPrivate("row-random-leftmost"),
    "bad-graph": BadGraphAlgorithm,
    "bad-tree": BadTreeAlgorithm,
    "slocal-row-greedy": SlocalRowGreedy,
    "online-row-copy": OnlineRowCopy,
}


def get(name: str, **kwargs):
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown algorithm {name!r}; known: {', '.join(sorted(REGISTRY))}") from None
    return factory(**kwargs)


__all__ = ["REGISTRY", "get", "AdversaryPlan", "GateError", "BadGraphAlgorithm", "BadTreeAlgorithm", "OnlineRowCopy",
           "PiPrivate", "PiShared", "SlocalRowGreedy", "adversary_inputs", "adversary_online_inputs",
           "adversary_order", "default_locality", "online_attack", "slocal_independence", "solve_bad_graph",
           "solve_bad_tree"]
