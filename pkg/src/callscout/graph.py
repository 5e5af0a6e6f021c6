"""Function boundary inference and call graph construction.

Function entries are the distinct targets of the valid edges, plus index 0
for the program entry.  Each function spans from its entry to the next entry
(the last one spans to the end of the stream), so the spans partition the
stream exactly.  A function that is never called has no entry of its own and
is absorbed into the preceding span; that is a documented limitation of the
epilogue heuristic, not a bug.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass

from .edges import Edge
from .stream import InstructionStream


@dataclass(frozen=True)
class FunctionNode:
    """One inferred function: entry/end instruction indices and a label."""

    label: str
    entry_address: int
    entry_index: int
    end_index: int
    instructions: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.entry_index >= self.end_index:
            raise ValueError(
                f"function span [{self.entry_index}, {self.end_index}) is empty"
            )


@dataclass(frozen=True)
class GraphEdge:
    """Call relation between two function nodes, by node index."""

    caller: int
    callee: int
    multiplicity: int


@dataclass(frozen=True)
class CallGraph:
    nodes: tuple[FunctionNode, ...]
    edges: tuple[GraphEdge, ...]


def build_call_graph(
    stream: InstructionStream,
    valid_edges: list[Edge],
    include_instructions: bool = False,
) -> CallGraph:
    """Build the function-level graph induced by the valid edges.

    The caller of an edge is the function whose span contains the call site.
    Parallel edges collapse into one graph edge with a multiplicity count.
    An empty edge list yields a single entry-function node and no edges.
    """
    entries = sorted({e.target_index for e in valid_edges} | {0})
    bounds = entries[1:] + [len(stream)]

    nodes = []
    for k, (entry, end) in enumerate(zip(entries, bounds)):
        listing = None
        if include_instructions:
            listing = tuple(
                (stream.address_of(i), stream.values[i]) for i in range(entry, end)
            )
        nodes.append(
            FunctionNode(
                label=f"function {k}",
                entry_address=stream.address_of(entry),
                entry_index=entry,
                end_index=end,
                instructions=listing,
            )
        )

    entry_to_node = {entry: k for k, entry in enumerate(entries)}
    multiplicities: dict[tuple[int, int], int] = {}
    for e in valid_edges:
        # Nearest entry at or below the call site owns the call.
        caller = bisect.bisect_right(entries, e.caller_index) - 1
        callee = entry_to_node[e.target_index]
        key = (caller, callee)
        multiplicities[key] = multiplicities.get(key, 0) + 1
    edges = tuple(
        GraphEdge(caller=c, callee=t, multiplicity=m)
        for (c, t), m in sorted(multiplicities.items())
    )
    return CallGraph(nodes=tuple(nodes), edges=edges)


def graph_to_dict(graph: CallGraph) -> dict:
    nodes = []
    for node in graph.nodes:
        entry: dict = {
            "label": node.label,
            "entryAddress": hex(node.entry_address),
            "entryIndex": node.entry_index,
            "endIndex": node.end_index,
        }
        if node.instructions is not None:
            entry["instructions"] = [
                [hex(addr), hex(value)] for addr, value in node.instructions
            ]
        nodes.append(entry)
    return {
        "nodes": nodes,
        "edges": [
            {"from": e.caller, "to": e.callee, "multiplicity": e.multiplicity}
            for e in graph.edges
        ],
    }


def graph_from_dict(data: dict) -> CallGraph:
    nodes = []
    for entry in data["nodes"]:
        listing = None
        if "instructions" in entry:
            listing = tuple(
                (int(addr, 16), int(value, 16)) for addr, value in entry["instructions"]
            )
        nodes.append(
            FunctionNode(
                label=entry["label"],
                entry_address=int(entry["entryAddress"], 16),
                entry_index=entry["entryIndex"],
                end_index=entry["endIndex"],
                instructions=listing,
            )
        )
    edges = tuple(
        GraphEdge(caller=e["from"], callee=e["to"], multiplicity=e["multiplicity"])
        for e in data["edges"]
    )
    return CallGraph(nodes=tuple(nodes), edges=edges)


def export_graph(graph: CallGraph, fmt: str) -> str:
    """Render the graph as Graphviz DOT or as JSON."""
    if fmt == "json":
        return json.dumps(graph_to_dict(graph), indent=2)
    if fmt == "dot":
        lines = ["digraph callgraph {"]
        for k, node in enumerate(graph.nodes):
            lines.append(f'    f{k} [label="{node.label}"];')
        for e in graph.edges:
            lines.append(f"    f{e.caller} -> f{e.callee} [weight={e.multiplicity}];")
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown graph format: {fmt!r}")
