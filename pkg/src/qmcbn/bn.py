"""Discrete Bayesian networks: model, text file format, and exact inference oracles.

Two independent exact-inference routes are kept on purpose: brute-force
enumeration of the joint (the definitional oracle, cost-guarded) and variable
elimination (the practical oracle, exponential only in induced treewidth).
Error measurement elsewhere treats their agreement as ground truth.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ImpossibleEvidenceError, ParseError, TooLargeError

ROW_SUM_PARSE_TOL = 1e-6
ROW_SUM_STRICT_TOL = 1e-9
# rows closer to 1 than this are left untouched so parse -> serialize -> parse
# is an identity; anything further (up to the parse tolerance) is renormalized
_RENORM_THRESHOLD = 1e-12
BRUTE_FORCE_GUARD = 1 << 24
_CHUNK = 1 << 18


@dataclass(frozen=True)
class Node:
    """One discrete variable: states, parent list, and Pr(node | parents).

    cpt rows enumerate parent configurations in mixed-radix order with the
    first listed parent as the most significant digit; columns follow states.
    """

    id: str
    states: tuple[str, ...]
    parents: tuple[str, ...]
    cpt: np.ndarray

    def __post_init__(self):
        if len(self.states) < 2:
            raise ValueError(f"node {self.id!r} needs at least 2 states")
        if len(set(self.states)) != len(self.states):
            raise ValueError(f"node {self.id!r} has duplicate state names")
        if len(set(self.parents)) != len(self.parents):
            raise ValueError(f"node {self.id!r} lists a parent twice")
        if self.id in self.parents:
            raise ValueError(f"node {self.id!r} is its own parent")


class BayesNet:
    """Validated, immutable-by-convention network. Safe to share across threads."""

    def __init__(self, name: str, nodes: list[Node]):
        if not nodes:
            raise ValueError("network needs at least one node")
        self.name = name
        self.nodes = list(nodes)
        seen: set[str] = set()
        for node in self.nodes:
            if node.id in seen:
                raise ValueError(f"duplicate node id {node.id!r}")
            seen.add(node.id)
        self.index = {node.id: i for i, node in enumerate(self.nodes)}
        self.cards = tuple(len(node.states) for node in self.nodes)

        for node in self.nodes:
            for parent in node.parents:
                if parent not in self.index:
                    raise ValueError(f"node {node.id!r} references unknown parent {parent!r}")
            expected_rows = 1
            for parent in node.parents:
                expected_rows *= self.cards[self.index[parent]]
            cpt = np.asarray(node.cpt, dtype=float)
            if cpt.shape != (expected_rows, len(node.states)):
                raise ValueError(
                    f"node {node.id!r}: CPT shape {cpt.shape} != "
                    f"({expected_rows}, {len(node.states)})"
                )
            if (cpt < 0).any():
                raise ValueError(f"node {node.id!r}: negative CPT entry")
            sums = cpt.sum(axis=1)
            bad = np.abs(sums - 1.0) > ROW_SUM_PARSE_TOL
            if bad.any():
                row = int(np.flatnonzero(bad)[0])
                raise ValueError(
                    f"node {node.id!r}: CPT row {row} sums to {sums[row]!r}, "
                    f"outside 1 +/- {ROW_SUM_PARSE_TOL}"
                )
            renorm = np.abs(sums - 1.0) > _RENORM_THRESHOLD
            if renorm.any():
                cpt = cpt.copy()
                cpt[renorm] /= sums[renorm, None]
            if np.abs(cpt.sum(axis=1) - 1.0).max() > ROW_SUM_STRICT_TOL:
                raise ValueError(f"node {node.id!r}: CPT rows not normalizable")
            self.nodes[self.index[node.id]] = Node(node.id, node.states, node.parents, cpt)

        self.topo_order = self._topological_order()

    def _topological_order(self) -> list[str]:
        placed: list[str] = []
        done = set()
        remaining = list(range(len(self.nodes)))
        while remaining:
            progress = False
            for i in list(remaining):
                node = self.nodes[i]
                if all(p in done for p in node.parents):
                    placed.append(node.id)
                    done.add(node.id)
                    remaining.remove(i)
                    progress = True
                    break
            if not progress:
                cycle = ", ".join(self.nodes[i].id for i in remaining)
                raise ValueError(f"cycle detected among nodes: {cycle}")
        return placed

    def node(self, node_id: str) -> Node:
        return self.nodes[self.index[node_id]]

    def parent_row(self, node: Node, states_by_id: dict[str, int]) -> int:
        """CPT row index for the given parent states (first parent most significant)."""
        row = 0
        for parent in node.parents:
            row = row * self.cards[self.index[parent]] + states_by_id[parent]
        return row

    def joint_size(self) -> int:
        size = 1
        for c in self.cards:
            size *= c
        return size


def topological_order(net: BayesNet) -> list[str]:
    """Parent-first node order, ties broken by declaration order."""
    return list(net.topo_order)


@dataclass(frozen=True)
class Evidence:
    """Observed states by node id (state indices)."""

    assignments: dict[str, int] = field(default_factory=dict)

    def validate(self, net: BayesNet) -> None:
        for node_id, state in self.assignments.items():
            if node_id not in net.index:
                raise ValueError(f"evidence references unknown node {node_id!r}")
            if not 0 <= state < net.cards[net.index[node_id]]:
                raise ValueError(f"evidence state {state} out of range for node {node_id!r}")

    def __bool__(self) -> bool:
        return bool(self.assignments)


@dataclass
class MarginalSet:
    """Per-node distributions plus (optionally) the probability of the evidence."""

    per_node: dict[str, np.ndarray]
    prob_evidence: float | None = None


def joint_probability(net: BayesNet, assignment: dict[str, int]) -> float:
    """Product of the CPT entries selected by a full instantiation."""
    if set(assignment) != set(net.index):
        missing = set(net.index) - set(assignment)
        extra = set(assignment) - set(net.index)
        raise ValueError(f"assignment must cover every node (missing {missing}, extra {extra})")
    prob = 1.0
    for node in net.nodes:
        row = net.parent_row(node, assignment)
        prob *= node.cpt[row, assignment[node.id]]
    return float(prob)


def _config_states(g: np.ndarray, net: BayesNet, node_index: int) -> np.ndarray:
    """State of one node for each enumerated configuration index.

    Configurations use mixed radix over nodes in declaration order, first node
    most significant.
    """
    stride = 1
    for c in net.cards[node_index + 1 :]:
        stride *= c
    return (g // stride) % net.cards[node_index]


def brute_force_marginals(net: BayesNet, evidence: Evidence | None = None) -> MarginalSet:
    """Exact marginals and Pr(evidence) by full enumeration of the joint."""
    evidence = evidence or Evidence()
    evidence.validate(net)
    total = net.joint_size()
    if total > BRUTE_FORCE_GUARD:
        raise TooLargeError(f"joint has {total} configurations, over the {BRUTE_FORCE_GUARD} guard")

    accum = [np.zeros(c) for c in net.cards]
    prob_e = 0.0
    parent_idx = [[net.index[p] for p in node.parents] for node in net.nodes]
    for start in range(0, total, _CHUNK):
        g = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        states = [_config_states(g, net, i) for i in range(len(net.nodes))]
        joint = np.ones(len(g))
        for i, node in enumerate(net.nodes):
            row = np.zeros(len(g), dtype=np.int64)
            for p in parent_idx[i]:
                row = row * net.cards[p] + states[p]
            joint *= node.cpt[row, states[i]]
        for node_id, obs in evidence.assignments.items():
            joint *= states[net.index[node_id]] == obs
        prob_e += joint.sum()
        for i in range(len(net.nodes)):
            accum[i] += np.bincount(states[i], weights=joint, minlength=net.cards[i])

    if prob_e == 0.0:
        raise ImpossibleEvidenceError("evidence has probability zero")
    per_node = {node.id: accum[i] / prob_e for i, node in enumerate(net.nodes)}
    return MarginalSet(per_node, float(prob_e) if evidence else 1.0)


# ---------------------------------------------------------------------------
# variable elimination
# ---------------------------------------------------------------------------


@dataclass
class _Factor:
    vars: tuple[int, ...]  # node indices, ascending
    table: np.ndarray  # one axis per var, same order


def _restrict(factor: _Factor, var: int, state: int) -> _Factor:
    axis = factor.vars.index(var)
    table = np.take(factor.table, state, axis=axis)
    rest = tuple(v for v in factor.vars if v != var)
    return _Factor(rest, table)


def _multiply(a: _Factor, b: _Factor) -> _Factor:
    union = tuple(sorted(set(a.vars) | set(b.vars)))

    def aligned(f: _Factor) -> np.ndarray:
        # vars are kept ascending, so broadcasting only needs singleton axes
        shape = [f.table.shape[f.vars.index(v)] if v in f.vars else 1 for v in union]
        return f.table.reshape(shape)

    return _Factor(union, aligned(a) * aligned(b))


def _sum_out(factor: _Factor, var: int) -> _Factor:
    axis = factor.vars.index(var)
    return _Factor(tuple(v for v in factor.vars if v != var), factor.table.sum(axis=axis))


def _base_factors(net: BayesNet, evidence: Evidence) -> list[_Factor]:
    factors = []
    for i, node in enumerate(net.nodes):
        scope = tuple(net.index[p] for p in node.parents) + (i,)
        shape = tuple(net.cards[v] for v in scope)
        table = node.cpt.reshape(shape)
        order = np.argsort(scope, kind="stable")
        factor = _Factor(tuple(scope[k] for k in order), np.transpose(table, order))
        for var, state in evidence.assignments.items():
            v = net.index[var]
            if v in factor.vars:
                factor = _restrict(factor, v, state)
        factors.append(factor)
    return factors


def _min_fill_order(net: BayesNet, factors: list[_Factor], keep: set[int]) -> list[int]:
    """Greedy min-fill elimination order over vars in factor scopes, excluding `keep`."""
    neighbors: dict[int, set[int]] = {}
    for f in factors:
        for v in f.vars:
            neighbors.setdefault(v, set()).update(u for u in f.vars if u != v)
    to_eliminate = set(neighbors) - keep
    order = []
    while to_eliminate:
        best = None
        for v in sorted(to_eliminate):
            nbrs = [u for u in neighbors[v] if u in neighbors]
            fill = sum(
                1
                for a_i, a in enumerate(nbrs)
                for b in nbrs[a_i + 1 :]
                if b not in neighbors[a]
            )
            if best is None or fill < best[0]:
                best = (fill, v)
        v = best[1]
        nbrs = [u for u in neighbors[v] if u in neighbors]
        for a_i, a in enumerate(nbrs):
            for b in nbrs[a_i + 1 :]:
                neighbors[a].add(b)
                neighbors[b].add(a)
        for u in nbrs:
            neighbors[u].discard(v)
        del neighbors[v]
        to_eliminate.discard(v)
        order.append(v)
    return order


def _eliminate(factors: list[_Factor], order: list[int]) -> list[_Factor]:
    live = list(factors)
    for var in order:
        touching = [f for f in live if var in f.vars]
        if not touching:
            continue
        live = [f for f in live if var not in f.vars]
        product = touching[0]
        for f in touching[1:]:
            product = _multiply(product, f)
        live.append(_sum_out(product, var))
    return live


def variable_elimination(net: BayesNet, evidence: Evidence | None = None) -> MarginalSet:
    """Exact marginals and Pr(evidence) by min-fill variable elimination."""
    evidence = evidence or Evidence()
    evidence.validate(net)
    base = _base_factors(net, evidence)

    remaining = _eliminate(base, _min_fill_order(net, base, keep=set()))
    prob_e = 1.0
    for f in remaining:
        prob_e *= float(f.table) if f.table.ndim == 0 else float(f.table.sum())
    if evidence and prob_e == 0.0:
        raise ImpossibleEvidenceError("evidence has probability zero")

    per_node: dict[str, np.ndarray] = {}
    for i, node in enumerate(net.nodes):
        if node.id in evidence.assignments:
            vec = np.zeros(net.cards[i])
            vec[evidence.assignments[node.id]] = 1.0
            per_node[node.id] = vec
            continue
        remaining = _eliminate(base, _min_fill_order(net, base, keep={i}))
        vec = np.ones(net.cards[i])
        scalar = 1.0
        for f in remaining:
            if f.vars == (i,):
                vec = vec * f.table
            elif f.vars == ():
                scalar *= float(f.table)
            else:  # pragma: no cover - elimination always reduces to the query var
                raise AssertionError(f"unexpected residual scope {f.vars}")
        vec = vec * scalar
        total = vec.sum()
        if total == 0.0:
            raise ImpossibleEvidenceError("evidence has probability zero")
        per_node[node.id] = vec / total
    return MarginalSet(per_node, float(prob_e) if evidence else 1.0)


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------


def _tokenize(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_network(text: str) -> BayesNet:
    """Parse the network text format; diagnostics carry line numbers.

    Format: `name <label>` once, then per node a `node <id>` line, a
    `states <s1> <s2> ...` line, a `parents [<id> ...]` line, a bare `cpt`
    line and one whitespace-separated row of reals per parent configuration.
    `#` starts a comment anywhere on a line.
    """
    name: str | None = None
    nodes: list[Node] = []
    node_lines: dict[str, int] = {}
    pending: dict | None = None
    rows_expected: int | None = None

    def finish_pending():
        nonlocal pending
        if pending is None:
            return
        if pending["states"] is None:
            raise ParseError(f"node {pending['id']!r} has no states line", pending["line"])
        if pending["parents"] is None:
            raise ParseError(f"node {pending['id']!r} has no parents line", pending["line"])
        if pending["rows"] is None:
            raise ParseError(f"node {pending['id']!r} has no cpt", pending["line"])
        width = len(pending["states"])
        for row in pending["rows"]:
            if len(row) != width:
                raise ParseError(
                    f"node {pending['id']!r}: CPT row has {len(row)} entries, expected {width}",
                    pending["line"],
                )
        try:
            node = Node(
                pending["id"],
                tuple(pending["states"]),
                tuple(pending["parents"]),
                np.array(pending["rows"], dtype=float),
            )
        except ValueError as exc:
            raise ParseError(str(exc), pending["line"]) from None
        nodes.append(node)
        node_lines[node.id] = pending["line"]
        pending = None

    for lineno, tokens in _tokenize(text):
        keyword = tokens[0]
        if pending is not None and pending["rows"] is not None and keyword not in ("node",):
            # inside a cpt block every line is a row
            try:
                row = [float(t) for t in tokens]
            except ValueError:
                raise ParseError(f"expected a CPT row of reals, got {' '.join(tokens)!r}", lineno) from None
            pending["rows"].append(row)
            continue
        if keyword == "name":
            if name is not None:
                raise ParseError("duplicate name line", lineno)
            if len(tokens) < 2:
                raise ParseError("name line needs a label", lineno)
            name = " ".join(tokens[1:])
        elif keyword == "node":
            finish_pending()
            if len(tokens) != 2:
                raise ParseError("node line needs exactly one id", lineno)
            if any(n.id == tokens[1] for n in nodes):
                raise ParseError(f"duplicate node id {tokens[1]!r}", lineno)
            pending = {"id": tokens[1], "line": lineno, "states": None, "parents": None, "rows": None}
        elif keyword == "states":
            if pending is None or pending["states"] is not None:
                raise ParseError("states line outside a node or repeated", lineno)
            if len(tokens) < 3:
                raise ParseError("a node needs at least 2 states", lineno)
            pending["states"] = tokens[1:]
        elif keyword == "parents":
            if pending is None or pending["parents"] is not None:
                raise ParseError("parents line outside a node or repeated", lineno)
            pending["parents"] = tokens[1:]
        elif keyword == "cpt":
            if pending is None or pending["rows"] is not None:
                raise ParseError("cpt line outside a node or repeated", lineno)
            if len(tokens) != 1:
                raise ParseError("cpt keyword takes no arguments; rows follow on their own lines", lineno)
            if pending["states"] is None or pending["parents"] is None:
                raise ParseError("cpt must come after states and parents", lineno)
            pending["rows"] = []
        else:
            raise ParseError(f"unknown directive {keyword!r}", lineno)

    finish_pending()
    if name is None:
        raise ParseError("missing name line")
    if not nodes:
        raise ParseError("network has no nodes")
    try:
        return BayesNet(name, nodes)
    except ValueError as exc:
        msg = str(exc)
        for node_id, lineno in node_lines.items():
            if f"{node_id!r}" in msg:
                raise ParseError(msg, lineno) from None
        raise ParseError(msg) from None


def serialize_network(net: BayesNet) -> str:
    """Canonical text form; parse(serialize(net)) reproduces the network exactly."""
    lines = [f"name {net.name}", ""]
    for node in net.nodes:
        lines.append(f"node {node.id}")
        lines.append("states " + " ".join(node.states))
        lines.append("parents" + ("" if not node.parents else " " + " ".join(node.parents)))
        lines.append("cpt")
        for row in node.cpt:
            lines.append(" ".join(repr(float(x)) for x in row))
        lines.append("")
    return "\n".join(lines)


def parse_evidence(text: str, net: BayesNet) -> Evidence:
    """Parse `node-id state-name` lines into an Evidence over state indices."""
    assignments: dict[str, int] = {}
    for lineno, tokens in _tokenize(text):
        if len(tokens) != 2:
            raise ParseError("expected `node-id state-name`", lineno)
        node_id, state_name = tokens
        if node_id not in net.index:
            raise ParseError(f"unknown node {node_id!r}", lineno)
        if node_id in assignments:
            raise ParseError(f"node {node_id!r} observed twice", lineno)
        node = net.node(node_id)
        if state_name not in node.states:
            raise ParseError(f"node {node_id!r} has no state {state_name!r}", lineno)
        assignments[node_id] = node.states.index(state_name)
    return Evidence(assignments)
