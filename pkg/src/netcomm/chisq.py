"""Community x attribute contingency tables and Pearson's chi-square with
Monte Carlo simulated p-values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import chisq_mc_count_kernel, chisq_stat_kernel
from .community import ALGORITHMS, Partition, detect, spinglass
from .errors import (EmptyTableError, InputError, NetcommError,
                     TableShapeError)
from .graph import Graph, connected_components, induced_subgraph
from .ingest import CHARACTERISTICS, AttributeTable

DEFAULT_REPLICATES = 2000
SIGNIFICANCE_THRESHOLD = 0.05  # reporting only; the Monte Carlo p decides


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    row_labels: tuple[str, ...]   # attribute values, ascending
    col_labels: tuple[int, ...]   # community ids, ascending
    counts: np.ndarray            # (rows, cols) int64
    nulls_excluded: int

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    df: int
    replicates: int
    p_value: float
    seed: int


def contingency_table(p: Partition, attrs: AttributeTable,
                      characteristic: str) -> ContingencyTable:
    """Cross-tabulate community membership against one attribute.  Vertices
    with a null value are excluded and counted; empty rows/columns are
    dropped."""
    if characteristic not in CHARACTERISTICS:
        raise InputError(f"unknown characteristic {characteristic!r}")
    values = []
    comms = []
    nulls = 0
    for label, comm in zip(p.labels, p.membership):
        val = attrs.get(label, characteristic)
        if val is None:
            nulls += 1
        else:
            values.append(val)
            comms.append(int(comm))
    if not values:
        raise EmptyTableError(
            f"every vertex has a null {characteristic!r} value")
    row_labels = tuple(sorted(set(values)))
    col_labels = tuple(sorted(set(comms)))
    rpos = {v: i for i, v in enumerate(row_labels)}
    cpos = {c: i for i, c in enumerate(col_labels)}
    counts = np.zeros((len(row_labels), len(col_labels)), np.int64)
    for val, comm in zip(values, comms):
        counts[rpos[val], cpos[comm]] += 1
    return ContingencyTable(row_labels=row_labels, col_labels=col_labels,
                            counts=counts, nulls_excluded=nulls)


def _expected(counts: np.ndarray) -> np.ndarray:
    total = counts.sum()
    return np.outer(counts.sum(axis=1), counts.sum(axis=0)) / total


def _check_shape(t: ContingencyTable) -> None:
    r, c = t.counts.shape
    if t.total <= 0 or r < 2 or c < 2:
        raise TableShapeError(
            f"chi-square needs a table with >= 2 rows and >= 2 columns "
            f"(got {r}x{c}, total {t.total})")


def chi_square_statistic(t: ContingencyTable) -> float:
    """Sum of (O-E)^2/E with E from the table margins."""
    _check_shape(t)
    counts = t.counts.astype(np.float64)
    return float(chisq_stat_kernel(counts, _expected(counts)))


def _expand(t: ContingencyTable):
    """Per-observation (row-index, col-index) vectors, row-major over cells.
    Permuting one side against the other is a uniform re-pairing of labels."""
    rows, cols = np.nonzero(t.counts)
    reps = t.counts[rows, cols]
    return (np.repeat(rows, reps).astype(np.int64),
            np.repeat(cols, reps).astype(np.int64))


def _permutation_block(seed: int, replicates: int, n_obs: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    perms = np.empty((replicates, n_obs), np.int64)
    for b in range(replicates):
        perms[b] = rng.permutation(n_obs)
    return perms


def replicate_tables(t: ContingencyTable, replicates: int,
                     seed: int) -> np.ndarray:
    """The explicit (B, rows, cols) replicate tables monte_carlo_p scores,
    for the same seed.  Intended for verification."""
    row_idx, col_idx = _expand(t)
    perms = _permutation_block(seed, replicates, len(row_idx))
    shape = t.counts.shape
    out = np.zeros((replicates,) + shape, np.int64)
    for b in range(replicates):
        np.add.at(out[b], (row_idx[perms[b]], col_idx), 1)
    return out


def monte_carlo_p(t: ContingencyTable, replicates: int = DEFAULT_REPLICATES,
                  seed: int | None = None) -> ChiSquareResult:
    """Simulated p-value from uniformly permuting attribute labels against
    membership labels (both margins preserved exactly):
    p = (1 + #{simulated >= observed}) / (1 + B)."""
    if replicates < 99:
        raise InputError("replicates must be >= 99")
    if seed is None:
        raise InputError("monte_carlo_p requires a seed")
    _check_shape(t)
    counts = t.counts.astype(np.float64)
    expected = _expected(counts)
    obs = float(chisq_stat_kernel(counts, expected))

    row_idx, col_idx = _expand(t)
    perms = _permutation_block(seed, replicates, len(row_idx))
    count = int(chisq_mc_count_kernel(row_idx, col_idx, perms, expected, obs))
    p = (1.0 + count) / (1.0 + replicates)
    return ChiSquareResult(statistic=obs,
                           df=(len(t.row_labels) - 1) * (len(t.col_labels) - 1),
                           replicates=replicates, p_value=p, seed=int(seed))


def _derive_seeds(seed: int, count: int) -> list[int]:
    state = np.random.SeedSequence(seed).generate_state(count, np.uint64)
    return [int(x) for x in state]


def chi_square_grid(partitions: dict[str, Partition], attrs: AttributeTable,
                    characteristics=CHARACTERISTICS,
                    replicates: int = DEFAULT_REPLICATES,
                    seed: int | None = None,
                    excluded: dict[str, int] | None = None,
                    errors: dict[str, str] | None = None) -> dict:
    """{characteristic: {name: result-dict}} for named partitions.

    Per-cell failures are recorded as {"error": ...} in the cell and never
    abort the rest of the grid.  Each cell gets its own replicate substream
    derived from the master seed.
    """
    if seed is None:
        raise InputError("chi_square_grid requires a seed")
    excluded = excluded or {}
    errors = errors or {}
    names = list(partitions)
    seeds = _derive_seeds(seed, 1 + len(characteristics) * len(names))
    report: dict = {}
    cell = 0
    for char in characteristics:
        row: dict = {}
        for name in names:
            cell += 1
            if name in errors:
                row[name] = {"error": errors[name]}
                continue
            try:
                table = contingency_table(partitions[name], attrs, char)
                res = monte_carlo_p(table, replicates, seeds[cell])
                row[name] = {
                    "statistic": res.statistic,
                    "df": res.df,
                    "B": res.replicates,
                    "p": res.p_value,
                    "seed": res.seed,
                    "nulls_excluded": table.nulls_excluded,
                    "excluded_vertices": int(excluded.get(name, 0)),
                }
            except NetcommError as exc:
                row[name] = {"error": str(exc)}
        report[char] = row
    return report


def independence_report(g: Graph, attrs: AttributeTable,
                        algorithms=ALGORITHMS,
                        replicates: int = DEFAULT_REPLICATES,
                        seed: int | None = None,
                        characteristics=CHARACTERISTICS) -> dict:
    """One chi-square Monte Carlo result per (characteristic x algorithm).

    Spinglass runs on the largest connected component when the graph is
    disconnected, recording how many vertices that excludes.
    """
    if seed is None:
        raise InputError("independence_report requires a seed")
    for a in algorithms:
        if a not in ALGORITHMS:
            raise InputError(f"unknown algorithm {a!r}")
    sg_seed = _derive_seeds(seed, 1)[0] ^ 0x5EED  # distinct from cell streams

    partitions: dict[str, Partition] = {}
    excluded: dict[str, int] = {}
    errors: dict[str, str] = {}
    for algo in algorithms:
        try:
            if algo == "spinglass":
                comps = connected_components(g)
                if len(comps) > 1:
                    sub, _ = induced_subgraph(g, comps[0])
                    excluded[algo] = g.n_vertices - sub.n_vertices
                    partitions[algo] = spinglass(sub, seed=sg_seed)
                else:
                    partitions[algo] = spinglass(g, seed=sg_seed)
            else:
                partitions[algo] = detect(g, algo)
        except NetcommError as exc:
            errors[algo] = str(exc)
            partitions[algo] = None  # placeholder; chi_square_grid sees `errors`
    return chi_square_grid(partitions, attrs, characteristics, replicates,
                           seed, excluded, errors)


def format_report_grid(report: dict, replicates: int | None = None,
                       seed: int | None = None) -> str:
    """Plain-text grid of p-values, one row per characteristic."""
    names: list[str] = []
    for row in report.values():
        names = list(row)
        break
    width = max(12, max((len(n) for n in names), default=0) + 2)
    head = "characteristic".ljust(22) + "nulls".rjust(6)
    for a in names:
        head += a.rjust(width)
    lines = [head, "-" * len(head)]
    for char, row in report.items():
        nulls = ""
        for a in names:
            if "nulls_excluded" in row[a]:
                nulls = str(row[a]["nulls_excluded"])
                break
        line = char.ljust(22) + nulls.rjust(6)
        for a in names:
            cell = row[a]
            if "error" in cell:
                val = "error"
            else:
                val = f"{cell['p']:.4f}"
                if cell["p"] <= SIGNIFICANCE_THRESHOLD:
                    val += "*"
            line += val.rjust(width)
        lines.append(line)
    tail = f"(* p <= {SIGNIFICANCE_THRESHOLD}"
    if replicates is not None:
        tail += f"; B = {replicates}"
    if seed is not None:
        tail += f"; seed = {seed}"
    lines.append(tail + ")")
    return "\n".join(lines) + "\n"
