"""Concrete linear distributed storage codes.

A LinearDss stores a file of file_len field symbols across n nodes; node i
holds G_i * message. Any k nodes reconstruct the message, and any d
survivors rebuild a lost node bit-for-bit (exact repair) while the transfer
of every helper is accounted in symbols.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dataclass_field

from .gf import GF2, GF256, FieldMatrix, FieldSpec, SingularMatrixError, mat_inv
from .tradeoff import SystemParams


class InputError(ValueError):
    """Malformed call input (wrong sizes, bad indices, unusable field)."""


class CodeInvariantError(RuntimeError):
    """A structural property the code promised does not hold."""


class ResourceError(RuntimeError):
    """Construction or sweep would exceed the configured budget."""


@dataclass(frozen=True)
class BandwidthReport:
    """Symbols transferred per helper during one repair."""

    per_helper: dict[int, int]
    total: int = dataclass_field(default=-1)

    def __post_init__(self):
        s = sum(self.per_helper.values())
        if self.total == -1:
            object.__setattr__(self, "total", s)
        elif self.total != s:
            raise InputError("total does not match per-helper sum")

    def max_deviation(self) -> int:
        counts = list(self.per_helper.values())
        return max(counts) - min(counts)


class RepairRule:
    """Total procedure rebuilding any failed node from any d-subset of survivors."""

    kind = "abstract"

    def execute(
        self,
        dss: "LinearDss",
        failed: int,
        helpers: tuple[int, ...],
        contents: list[list[int]],
    ) -> tuple[list[int], BandwidthReport]:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind}


class LinearDss:
    """Immutable linear storage code with an executable repair rule."""

    def __init__(
        self,
        params: SystemParams,
        field: FieldSpec,
        file_len: int,
        node_gens: list[FieldMatrix],
        repair_rule: RepairRule,
        label: str,
        gamma_symbols: int,
        meta: dict | None = None,
    ):
        if len(node_gens) != params.n:
            raise InputError("one generator per node required")
        alphas = {g.rows for g in node_gens}
        if len(alphas) != 1:
            raise CodeInvariantError("node sizes are not uniform")
        for g in node_gens:
            if g.cols != file_len or g.field != field:
                raise InputError("generator shape or field mismatch")
        self.params = params
        self.field = field
        self.file_len = file_len
        self.node_gens = node_gens
        self.repair_rule = repair_rule
        self.label = label
        self.alpha_symbols = alphas.pop()
        self.gamma_symbols = gamma_symbols
        self.meta = meta

    @property
    def total_symbols(self) -> int:
        return self.alpha_symbols * self.params.n

    def __repr__(self) -> str:
        p = self.params
        return (
            f"LinearDss({self.label}: n={p.n} k={p.k} d={p.d} "
            f"alpha={self.alpha_symbols} gamma={self.gamma_symbols} B={self.file_len})"
        )


def encode(dss: LinearDss, message: list[int]) -> list[list[int]]:
    """Node contents G_i * message for every node."""
    if len(message) != dss.file_len:
        raise InputError(
            f"message length {len(message)} != file_len {dss.file_len}"
        )
    for v in message:
        dss.field.check(v)
    return [g.mul_vec(message) for g in dss.node_gens]


def reconstruct(
    dss: LinearDss, subset: tuple[int, ...] | list[int], contents: list[list[int]]
) -> list[int]:
    """Recover the message from the stacked generators of a k-subset."""
    subset = tuple(subset)
    _check_indices(dss, subset)
    if len(subset) != dss.params.k:
        raise InputError(f"need exactly k={dss.params.k} nodes, got {len(subset)}")
    stack = dss.node_gens[subset[0]]
    rhs = list(contents[subset[0]])
    for i in subset[1:]:
        stack = stack.vstack(dss.node_gens[i])
        rhs.extend(contents[i])
    try:
        x = _solve(stack, rhs)
    except SingularMatrixError as exc:
        raise CodeInvariantError(
            f"subset {subset} does not determine the file: {exc}"
        ) from exc
    return x


def repair(
    dss: LinearDss,
    failed: int,
    helpers: tuple[int, ...] | list[int],
    contents: list[list[int]],
) -> tuple[list[int], BandwidthReport]:
    """Rebuild the failed node's exact content from d helpers."""
    helpers = tuple(sorted(helpers))
    _check_indices(dss, helpers + (failed,))
    if failed in helpers:
        raise InputError("failed node cannot help itself")
    if len(helpers) != dss.params.d:
        raise InputError(f"need exactly d={dss.params.d} helpers, got {len(helpers)}")
    return dss.repair_rule.execute(dss, failed, helpers, contents)


def _check_indices(dss: LinearDss, indices: tuple[int, ...]):
    if len(set(indices)) != len(indices):
        raise InputError(f"duplicate node indices in {indices}")
    for i in indices:
        if not 0 <= i < dss.params.n:
            raise InputError(f"node index {i} out of range")


def _solve(stack: FieldMatrix, rhs: list[int]) -> list[int]:
    from .gf import mat_solve

    b = FieldMatrix.column(stack.field, rhs)
    return mat_solve(stack, b).col_vector()


class MdsReencodeRule(RepairRule):
    """Repair for d = k codes: download the d helpers, decode, re-encode."""

    kind = "mds_reencode"

    def execute(self, dss, failed, helpers, contents):
        msg = reconstruct(dss, helpers, contents)
        content = dss.node_gens[failed].mul_vec(msg)
        per_helper = {h: dss.alpha_symbols for h in helpers}
        return content, BandwidthReport(per_helper)


def rs_base(n: int, k: int, field: FieldSpec = GF256) -> LinearDss:
    """Systematic MDS code from extended Vandermonde evaluation, with d = k.

    Evaluation points are distinct field elements, plus the point at
    infinity when n = 2^m + 1; hence n <= 2^m + 1 is required. Node size is
    one symbol, so the repair of any node downloads k symbols, meeting the
    minimum-storage bandwidth d*B/(k(d-k+1)) exactly at d = k.
    """
    if not 1 <= k < n:
        raise InputError(f"need 1 <= k < n, got (n,k)=({n},{k})")
    if n > field.order + 1:
        raise InputError(
            f"field GF(2^{field.m}) too small: supports at most {field.order + 1} nodes"
        )
    rows = []
    for x in range(min(n, field.order)):
        rows.append([field.pow(x, j) for j in range(k)])
    if n == field.order + 1:
        rows.append([0] * (k - 1) + [1])
    vander = FieldMatrix(field, rows)
    top_inv = mat_inv(FieldMatrix(field, rows[:k]))
    gsys = vander.mul(top_inv)
    gens = [FieldMatrix(field, [gsys.data[i]]) for i in range(n)]
    return LinearDss(
        params=SystemParams(n, k, k),
        field=field,
        file_len=k,
        node_gens=gens,
        repair_rule=MdsReencodeRule(),
        label=f"rs_base({n},{k})/GF(2^{field.m})",
        gamma_symbols=k,
    )


def xor_base_322(field: FieldSpec = GF2) -> LinearDss:
    """The three-node code storing (x), (y), (x+y)."""
    gens = [
        FieldMatrix(field, [[1, 0]]),
        FieldMatrix(field, [[0, 1]]),
        FieldMatrix(field, [[1, 1]]),
    ]
    return LinearDss(
        params=SystemParams(3, 2, 2),
        field=field,
        file_len=2,
        node_gens=gens,
        repair_rule=MdsReencodeRule(),
        label="xor_base_322",
        gamma_symbols=2,
    )


def to_json_dict(dss: LinearDss) -> dict:
    """JSON-ready description: field, dimensions, generators, repair rule."""
    return {
        "label": dss.label,
        "params": {"n": dss.params.n, "k": dss.params.k, "d": dss.params.d},
        "field": {"m": dss.field.m, "modulus": dss.field.modulus},
        "file_len": dss.file_len,
        "alpha_symbols": dss.alpha_symbols,
        "gamma_symbols": dss.gamma_symbols,
        "node_gens": [g.data for g in dss.node_gens],
        "repair_rule": dss.repair_rule.describe(),
        "composition": dss.meta,
    }


def to_json(dss: LinearDss) -> str:
    return json.dumps(to_json_dict(dss), sort_keys=True, indent=2) + "\n"
