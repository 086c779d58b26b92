"""Stochastic estimation of marginals and Pr(evidence) from interchangeable number streams.

A number stream is anything with a `dimension` attribute, a `next_point()`
method and a block `take(count)` method emitting coordinates in [0, 1);
the low-discrepancy streams and the seeded pseudo-random stream below all
qualify. Dimension j of a stream drives the j-th non-evidence node in the
network's topological order.
"""

from dataclasses import dataclass

import numpy as np

from .bn import BayesNet, Evidence, MarginalSet, variable_elimination
from .errors import (
    DegenerateEstimateError,
    ImpossibleEvidenceError,
    ParseError,
    SupportViolationError,
)

ROW_SUM_PARSE_TOL = 1e-6
_RENORM_THRESHOLD = 1e-12


class RandomStream:
    """Seeded pseudo-random baseline (PCG64). Not thread-safe; one driver per instance."""

    def __init__(self, dim: int, seed: int = 0):
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        self.dimension = dim
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def next_point(self) -> np.ndarray:
        return self._gen.random(self.dimension)

    def take(self, count: int) -> np.ndarray:
        if count < 0:
            raise ValueError("count must be >= 0")
        return self._gen.random((count, self.dimension))


def draw_node_state(distribution: np.ndarray, u: float) -> int:
    """Invert the cumulative distribution: state k satisfies C_(k-1) <= u < C_k."""
    if not 0 <= u < 1:
        raise ValueError(f"u must lie in [0, 1), got {u}")
    cum = np.cumsum(np.asarray(distribution, dtype=float))
    if abs(cum[-1] - 1.0) > 1e-9:
        raise ValueError(f"distribution sums to {cum[-1]!r}, not 1")
    state = int((u >= cum).sum())
    return min(state, len(cum) - 1)


def _draw_block(cum_rows: np.ndarray, rows: np.ndarray, us: np.ndarray) -> np.ndarray:
    """Vectorized draw: same cumulative-inversion as draw_node_state, one u per sample."""
    cum = cum_rows[rows]
    states = (us[:, None] >= cum).sum(axis=1)
    return np.minimum(states, cum.shape[1] - 1)


def logic_sample(net: BayesNet, order: list[str], point: np.ndarray) -> dict[str, int]:
    """One forward sample: instantiate nodes in `order`, coordinate j driving node j."""
    if len(point) != len(order):
        raise ValueError(f"point has {len(point)} coordinates for {len(order)} nodes")
    assignment: dict[str, int] = {}
    for j, node_id in enumerate(order):
        node = net.node(node_id)
        row = net.parent_row(node, assignment)
        assignment[node_id] = draw_node_state(node.cpt[row], float(point[j]))
    return assignment


@dataclass
class EstimationResult:
    """Normalized per-node estimates plus the raw weight statistics behind them."""

    marginals: MarginalSet
    prob_evidence_estimate: float
    samples_used: int
    weight_sum: float
    weight_sumsq: float


class _NodePlan:
    """Precomputed per-node arrays for vectorized forward sampling."""

    def __init__(self, net: BayesNet, evidence: Evidence):
        self.net = net
        self.evidence = evidence
        self.order = [n for n in net.topo_order]
        self.sampled_order = [n for n in self.order if n not in evidence.assignments]
        self.cum = {node.id: np.cumsum(node.cpt, axis=1) for node in net.nodes}

    def rows_for(self, node_id: str, states: np.ndarray) -> np.ndarray:
        node = self.net.node(node_id)
        rows = np.zeros(states.shape[0], dtype=np.int64)
        for parent in node.parents:
            p = self.net.index[parent]
            rows = rows * self.net.cards[p] + states[:, p]
        return rows


class PlsAccumulator:
    """Running frequency counts for probabilistic logic sampling (no evidence)."""

    def __init__(self, net: BayesNet):
        self.net = net
        self.plan = _NodePlan(net, Evidence())
        self.counts = {node.id: np.zeros(len(node.states)) for node in net.nodes}
        self.samples = 0

    def add(self, coords: np.ndarray) -> None:
        coords = np.atleast_2d(coords)
        if coords.shape[1] != len(self.net.nodes):
            raise ValueError(
                f"stream dimension {coords.shape[1]} != node count {len(self.net.nodes)}"
            )
        states = np.zeros((coords.shape[0], len(self.net.nodes)), dtype=np.int64)
        for j, node_id in enumerate(self.plan.order):
            i = self.net.index[node_id]
            rows = self.plan.rows_for(node_id, states)
            states[:, i] = _draw_block(self.plan.cum[node_id], rows, coords[:, j])
        for i, node in enumerate(self.net.nodes):
            self.counts[node.id] += np.bincount(states[:, i], minlength=self.net.cards[i])
        self.samples += coords.shape[0]

    def result(self) -> EstimationResult:
        if self.samples < 1:
            raise ValueError("no samples accumulated")
        per_node = {nid: c / self.samples for nid, c in self.counts.items()}
        return EstimationResult(
            MarginalSet(per_node, None), 1.0, self.samples, float(self.samples), float(self.samples)
        )


def pls_estimate(net: BayesNet, stream, n: int) -> EstimationResult:
    """Marginals as state frequencies over n probabilistic logic samples."""
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    acc = PlsAccumulator(net)
    acc.add(stream.take(n))
    return acc.result()


class ImportanceFunction:
    """Sampling distribution per non-evidence node given the nodes instantiated so far.

    Table-backed functions also expose dense per-node tables, enabling the
    vectorized sampling path; `tables` may be None for bespoke functions.
    """

    tables: dict[str, np.ndarray] | None = None

    def distribution(self, node_id: str, assignment: dict[str, int]) -> np.ndarray:
        raise NotImplementedError


class TableIsf(ImportanceFunction):
    """Importance function defined by one replacement CPT per non-evidence node."""

    def __init__(self, net: BayesNet, evidence: Evidence, tables: dict[str, np.ndarray]):
        self.net = net
        self.evidence = evidence
        self.tables = {nid: np.asarray(t, dtype=float) for nid, t in tables.items()}
        for node in net.nodes:
            if node.id in evidence.assignments:
                continue
            table = self.tables.get(node.id)
            if table is None:
                raise ValueError(f"importance table missing for node {node.id!r}")
            if table.shape != node.cpt.shape:
                raise ValueError(
                    f"importance table for {node.id!r} has shape {table.shape}, "
                    f"expected {node.cpt.shape}"
                )
            if (table < 0).any() or np.abs(table.sum(axis=1) - 1.0).max() > 1e-9:
                raise ValueError(f"importance table rows for {node.id!r} are not distributions")

    def distribution(self, node_id: str, assignment: dict[str, int]) -> np.ndarray:
        node = self.net.node(node_id)
        return self.tables[node_id][self.net.parent_row(node, assignment)]


def likelihood_weighting_isf(net: BayesNet, evidence: Evidence) -> TableIsf:
    """Each non-evidence node samples from its own CPT; evidence enters the weight only."""
    tables = {n.id: n.cpt for n in net.nodes if n.id not in evidence.assignments}
    return TableIsf(net, evidence, tables)


class IsAccumulator:
    """Running weighted counts for importance sampling under evidence."""

    def __init__(self, net: BayesNet, evidence: Evidence, isf: ImportanceFunction):
        evidence.validate(net)
        self.net = net
        self.evidence = evidence
        self.isf = isf
        self.plan = _NodePlan(net, evidence)
        self.weighted = {
            node.id: np.zeros(len(node.states))
            for node in net.nodes
            if node.id not in evidence.assignments
        }
        self.weight_sum = 0.0
        self.weight_sumsq = 0.0
        self.samples = 0
        self._isf_cum = (
            {nid: np.cumsum(t, axis=1) for nid, t in isf.tables.items()}
            if isf.tables is not None
            else None
        )

    @property
    def dimension(self) -> int:
        return len(self.plan.sampled_order)

    def add(self, coords: np.ndarray) -> np.ndarray:
        """Sample one batch and fold it in; returns the batch's importance weights."""
        coords = np.atleast_2d(coords)
        if coords.shape[1] != self.dimension:
            raise ValueError(
                f"stream dimension {coords.shape[1]} != non-evidence node count {self.dimension}"
            )
        if self._isf_cum is not None:
            states, weights = self._sample_block(coords)
        else:
            states, weights = self._sample_scalar(coords)
        for node_id in self.weighted:
            i = self.net.index[node_id]
            self.weighted[node_id] += np.bincount(
                states[:, i], weights=weights, minlength=self.net.cards[i]
            )
        self.weight_sum += float(weights.sum())
        self.weight_sumsq += float((weights**2).sum())
        self.samples += coords.shape[0]
        return weights

    def _sample_block(self, coords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = coords.shape[0]
        states = np.zeros((n, len(self.net.nodes)), dtype=np.int64)
        for node_id, obs in self.evidence.assignments.items():
            states[:, self.net.index[node_id]] = obs
        j = 0
        for node_id in self.plan.order:
            if node_id in self.evidence.assignments:
                continue
            rows = self.plan.rows_for(node_id, states)
            states[:, self.net.index[node_id]] = _draw_block(
                self._isf_cum[node_id], rows, coords[:, j]
            )
            j += 1
        weights = np.ones(n)
        for node in self.net.nodes:
            rows = self.plan.rows_for(node.id, states)
            picked = node.cpt[rows, states[:, self.net.index[node.id]]]
            if node.id in self.evidence.assignments:
                weights *= picked
            else:
                weights *= picked / self.isf.tables[node.id][rows, states[:, self.net.index[node.id]]]
        return states, weights

    def _sample_scalar(self, coords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = coords.shape[0]
        states = np.zeros((n, len(self.net.nodes)), dtype=np.int64)
        weights = np.empty(n)
        for l in range(n):
            assignment = dict(self.evidence.assignments)
            isf_prob = 1.0
            j = 0
            for node_id in self.plan.order:
                if node_id in self.evidence.assignments:
                    continue
                dist = np.asarray(self.isf.distribution(node_id, assignment), dtype=float)
                state = draw_node_state(dist, float(coords[l, j]))
                assignment[node_id] = state
                isf_prob *= dist[state]
                j += 1
            joint = 1.0
            for node in self.net.nodes:
                row = self.net.parent_row(node, assignment)
                joint *= node.cpt[row, assignment[node.id]]
            weights[l] = joint / isf_prob
            for node_id, s in assignment.items():
                states[l, self.net.index[node_id]] = s
        return states, weights

    def result(self) -> EstimationResult:
        if self.samples < 1:
            raise ValueError("no samples accumulated")
        if self.weight_sum == 0.0:
            raise DegenerateEstimateError(
                f"all {self.samples} importance weights are zero; no estimate exists"
            )
        per_node: dict[str, np.ndarray] = {}
        for i, node in enumerate(self.net.nodes):
            if node.id in self.evidence.assignments:
                vec = np.zeros(self.net.cards[i])
                vec[self.evidence.assignments[node.id]] = 1.0
                per_node[node.id] = vec
            else:
                per_node[node.id] = self.weighted[node.id] / self.weight_sum
        prob_e = self.weight_sum / self.samples
        return EstimationResult(
            MarginalSet(per_node, None),
            prob_e,
            self.samples,
            self.weight_sum,
            self.weight_sumsq,
        )


def importance_estimate(
    net: BayesNet, evidence: Evidence, isf: ImportanceFunction, stream, n: int
) -> EstimationResult:
    """Self-normalized marginals and the unbiased Pr(evidence) mean over n weighted samples."""
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    acc = IsAccumulator(net, evidence, isf)
    acc.add(stream.take(n))
    return acc.result()


def load_isf_table(text: str, net: BayesNet, evidence: Evidence) -> TableIsf:
    """Parse replacement CPTs (`node <id>` / `cpt` / rows) and validate support coverage.

    Entries for evidence nodes are tolerated and ignored. A zero entry is a
    support violation iff the event (parents-config, state, evidence) has
    positive probability under the network, checked exactly by variable
    elimination per zero entry.
    """
    evidence.validate(net)
    tables = _parse_icpt(text, net)
    usable: dict[str, np.ndarray] = {}
    for node in net.nodes:
        if node.id in evidence.assignments:
            continue
        if node.id not in tables:
            raise ParseError(f"importance table missing for non-evidence node {node.id!r}")
        usable[node.id] = tables[node.id]
    isf = TableIsf(net, evidence, usable)
    _check_support(net, evidence, isf)
    return isf


def _parse_icpt(text: str, net: BayesNet) -> dict[str, np.ndarray]:
    from .bn import _tokenize  # same tokenizer as the network format

    tables: dict[str, list[list[float]]] = {}
    current: str | None = None
    in_cpt = False
    for lineno, tokens in _tokenize(text):
        if tokens[0] == "node":
            if len(tokens) != 2:
                raise ParseError("node line needs exactly one id", lineno)
            if tokens[1] not in net.index:
                raise ParseError(f"unknown node {tokens[1]!r}", lineno)
            if tokens[1] in tables:
                raise ParseError(f"duplicate table for node {tokens[1]!r}", lineno)
            current = tokens[1]
            in_cpt = False
            tables[current] = []
        elif tokens[0] == "cpt" and not in_cpt:
            if current is None:
                raise ParseError("cpt line outside a node block", lineno)
            if len(tokens) != 1:
                raise ParseError("cpt keyword takes no arguments", lineno)
            in_cpt = True
        elif in_cpt:
            try:
                tables[current].append([float(t) for t in tokens])
            except ValueError:
                raise ParseError(f"expected a row of reals, got {' '.join(tokens)!r}", lineno) from None
        else:
            raise ParseError(f"unexpected directive {tokens[0]!r}", lineno)

    out: dict[str, np.ndarray] = {}
    for node_id, rows in tables.items():
        node = net.node(node_id)
        width = len(node.states)
        for row in rows:
            if len(row) != width:
                raise ParseError(f"node {node_id!r}: row has {len(row)} entries, expected {width}")
        table = np.array(rows, dtype=float)
        if table.shape != node.cpt.shape:
            raise ParseError(
                f"node {node_id!r}: table shape {table.shape} != expected {node.cpt.shape}"
            )
        if (table < 0).any():
            raise ParseError(f"node {node_id!r}: negative entry")
        sums = table.sum(axis=1)
        if np.abs(sums - 1.0).max() > ROW_SUM_PARSE_TOL:
            raise ParseError(f"node {node_id!r}: a row sums outside 1 +/- {ROW_SUM_PARSE_TOL}")
        renorm = np.abs(sums - 1.0) > _RENORM_THRESHOLD
        if renorm.any():
            table[renorm] /= sums[renorm, None]
        out[node_id] = table
    return out


def _row_to_parent_states(net: BayesNet, node, row: int) -> dict[str, int]:
    states: dict[str, int] = {}
    for parent in reversed(node.parents):
        card = net.cards[net.index[parent]]
        states[parent] = row % card
        row //= card
    return states


def _check_support(net: BayesNet, evidence: Evidence, isf: TableIsf) -> None:
    for node_id, table in isf.tables.items():
        node = net.node(node_id)
        zero_rows, zero_states = np.nonzero(table == 0.0)
        for row, state in zip(zero_rows, zero_states):
            event = _row_to_parent_states(net, node, int(row))
            conflict = any(
                evidence.assignments.get(k, v) != v for k, v in {**event, node_id: int(state)}.items()
            )
            if conflict:
                continue
            event.update(evidence.assignments)
            event[node_id] = int(state)
            try:
                mass = variable_elimination(net, Evidence(event)).prob_evidence
            except ImpossibleEvidenceError:
                continue
            if mass and mass > 0.0:
                raise SupportViolationError(
                    f"importance table for {node_id!r} is zero at row {int(row)}, "
                    f"state {int(state)}, where the target has probability {mass}"
                )


def rmse_metric(estimated: MarginalSet, exact: MarginalSet, evidence_nodes: set[str]) -> float:
    """Root mean square error over all states of all non-evidence nodes."""
    compared = [nid for nid in exact.per_node if nid not in evidence_nodes]
    for nid in compared:
        if nid not in estimated.per_node:
            raise ValueError(f"estimated marginals missing node {nid!r}")
        if len(estimated.per_node[nid]) != len(exact.per_node[nid]):
            raise ValueError(f"state count mismatch for node {nid!r}")
    extra = set(estimated.per_node) - set(exact.per_node)
    if extra:
        raise ValueError(f"estimated marginals cover unknown nodes {sorted(extra)}")
    total_states = sum(len(exact.per_node[nid]) for nid in compared)
    if total_states == 0:
        raise ValueError("no non-evidence nodes to compare")
    sq = 0.0
    for nid in compared:
        diff = estimated.per_node[nid] - exact.per_node[nid]
        sq += float((diff**2).sum())
    return float(np.sqrt(sq / total_states))
