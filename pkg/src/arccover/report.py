"""Job orchestration: run the full pipeline and emit a machine-checkable
certificate for every verified fact.

A certificate is a JSON document with a stable field order: job echo, check
records (id, claim, inputs, computed, passed), skip records (stage, reason),
a summary, stated verification gaps, an environment stamp, and a timings
section. Two runs of the same job with the same package version produce
byte-identical certificates once the timings section is removed.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional

from ._version import __version__
from .catalog import resolve_group
from .cosetgraph import (
    VERTEX_CAP_DEFAULT,
    build_coset_graph,
    centralizer_elements,
    export_graph,
    graph_invariants,
    quotient_graph,
    two_arc_transitive,
    verify_connected,
)
from .errors import ArccoverError, CapacityExceeded, ValidationError
from .groups import ENUM_CAP_DEFAULT, closure, group_order, schreier_kernel_generators
from .perm import Permutation, cycle_classes, format_cycles, n_cycles, parse_cycles
from .subdirect import (
    BlockReport,
    SubdirectStructure,
    cross_automorphism,
    inverting_automorphism,
    k4_block_count,
    structures_equal,
    subdirect_decompose,
)
from .wreath import (
    CoverGroupData,
    CoverJob,
    WreathElement,
    build_cover_group,
    k4_tuple_data,
    kernel_witness,
    to_positions,
)

# largest |Y| that the centralizer stage will enumerate element by element
CENTRALIZER_ENUM_LIMIT = 20_000


@dataclass(frozen=True)
class JobSpec:
    """One pipeline run: the construction inputs plus caps and output wiring."""

    n: int
    group: str
    x: str
    y: str
    vertex_cap: int = VERTEX_CAP_DEFAULT
    enum_cap: int = ENUM_CAP_DEFAULT
    seed: int = 0
    catalog: Optional[str] = None
    out_dir: Optional[str] = None
    formats: tuple[str, ...] = ()
    time_budget: Optional[float] = None
    label: Optional[str] = None

    def job_name(self) -> str:
        if self.label:
            return self.label
        return f"n{self.n}-{self.group}-x{self.x}-y{self.y}".replace(",", "_")

    def echo(self) -> dict:
        return {
            "n": self.n,
            "group": self.group,
            "x": self.x,
            "y": self.y,
            "vertex_cap": self.vertex_cap,
            "enum_cap": self.enum_cap,
            "seed": self.seed,
        }

    @classmethod
    def from_file(cls, path: str) -> "JobSpec":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read job file {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ValidationError("job file must hold a JSON object")
        allowed = {
            "n", "group", "x", "y", "vertex_cap", "enum_cap", "seed",
            "catalog", "out_dir", "formats", "time_budget", "label",
        }
        unknown = sorted(set(raw) - allowed)
        if unknown:
            raise ValidationError(f"unknown job file keys: {', '.join(unknown)}")
        missing = sorted({"n", "group", "x", "y"} - set(raw))
        if missing:
            raise ValidationError(f"job file lacks required keys: {', '.join(missing)}")
        if not isinstance(raw["n"], int):
            raise ValidationError("job file field 'n' must be an integer")
        for key in ("group", "x", "y"):
            if not isinstance(raw[key], str):
                raise ValidationError(f"job file field {key!r} must be a string")
        if "formats" in raw:
            raw["formats"] = tuple(raw["formats"])
        return cls(**raw)


GAP_STATEMENTS = (
    "The isomorphism type of the constructed group (for instance as a direct "
    "or semidirect product) is not independently identified; the certificate "
    "covers exact orders, the block decomposition, centralizer order, and "
    "quotient invariants only.",
)


@dataclass
class Certificate:
    """Stable-ordered certificate payload with byte-level accessors."""

    payload: dict

    @property
    def ok(self) -> bool:
        return self.payload["summary"]["all_passed"]

    def check(self, check_id: str) -> Optional[dict]:
        for rec in self.payload["checks"]:
            if rec["id"] == check_id:
                return rec
        return None

    def skipped(self, stage: str) -> Optional[dict]:
        for rec in self.payload["skips"]:
            if rec["stage"] == stage:
                return rec
        return None

    def capacity_blocked(self) -> bool:
        return any(rec["kind"] == "capacity" for rec in self.payload["skips"])

    def core_bytes(self) -> bytes:
        """The deterministic portion: everything except timings."""
        core = {k: v for k, v in self.payload.items() if k != "timings"}
        return (json.dumps(core, indent=2) + "\n").encode()

    def to_bytes(self) -> bytes:
        return (json.dumps(self.payload, indent=2) + "\n").encode()

    def write(self, path: Path) -> None:
        path.write_bytes(self.to_bytes())

    def summary_line(self) -> str:
        s = self.payload["summary"]
        job = self.payload["job"]
        name = f"n={job['n']} {job['group']} x={job['x']} y={job['y']}"
        state = "pass" if s["all_passed"] else "FAIL"
        return f"{state}  {s['passed']}/{s['checks']} checks  {name}"


class _Run:
    """Mutable state threaded through the pipeline stages."""

    def __init__(self, spec: JobSpec):
        self.spec = spec
        self.checks: list[dict] = []
        self.skips: list[dict] = []
        self.timings: dict[str, float] = {}
        self.artifacts: list[str] = []
        self.started = time.perf_counter()

    def out_of_budget(self) -> bool:
        budget = self.spec.time_budget
        return budget is not None and time.perf_counter() - self.started > budget

    def record(self, check_id: str, claim: str, inputs: dict, computed: dict, passed: bool):
        self.checks.append(
            {
                "id": check_id,
                "claim": claim,
                "inputs": inputs,
                "computed": computed,
                "passed": bool(passed),
            }
        )

    def skip(self, stage: str, reason: str, kind: str = "dependency"):
        self.skips.append({"stage": stage, "kind": kind, "reason": reason})

    def stage(self, check_id: str, claim: str, inputs: dict, fn) -> Optional[dict]:
        """Run one stage; convert failures to records. Returns computed dict
        on success, None when the stage failed or was skipped."""
        if self.out_of_budget():
            self.skip(check_id, "time budget exhausted", kind="budget")
            return None
        t0 = time.perf_counter()
        try:
            computed, passed = fn()
        except CapacityExceeded as exc:
            self.skip(check_id, str(exc), kind="capacity")
            self.timings[check_id] = round(time.perf_counter() - t0, 6)
            return None
        except (ArccoverError, AssertionError) as exc:
            self.record(check_id, claim, inputs, {"error": str(exc)}, False)
            self.timings[check_id] = round(time.perf_counter() - t0, 6)
            return None
        self.timings[check_id] = round(time.perf_counter() - t0, 6)
        self.record(check_id, claim, inputs, computed, passed)
        return computed if passed else None

    def certificate(self) -> Certificate:
        passed = sum(1 for c in self.checks if c["passed"])
        payload = {
            "format": "arccover-certificate/1",
            "version": __version__,
            "job": self.spec.echo(),
            "checks": self.checks,
            "skips": self.skips,
            "artifacts": self.artifacts,
            "summary": {
                "checks": len(self.checks),
                "passed": passed,
                "failed": len(self.checks) - passed,
                "all_passed": passed == len(self.checks),
            },
            "gaps": list(GAP_STATEMENTS),
            "environment": {
                "package_version": __version__,
                "seed": self.spec.seed,
                "vertex_cap": self.spec.vertex_cap,
                "enum_cap": self.spec.enum_cap,
            },
            "timings": self.timings,
        }
        return Certificate(payload)


PHASES = ("construct", "decompose", "graph", "full")


def run_job(spec: JobSpec, phase: str = "full") -> Certificate:
    """Execute the pipeline for one job and certify the results.

    Stage order: input validation, cycle-class partition, the defining
    identities of the twisted swap, the kernel witness element, Schreier
    kernel generators, block decomposition (d and exact orders), the n=4
    prediction and explicit-tuple cross-checks, coset graph construction
    (capped), 2-arc-transitivity, the quotient down to the complete graph,
    centralizer structure (capped), exports.

    `phase` truncates the pipeline: "construct" stops after the witness
    checks, "decompose" after the block structure, "graph" after the graph
    stages, "full" runs everything.

    Invalid inputs raise ValidationError before any certificate is produced;
    failures after that point are recorded in the certificate instead.
    """
    if phase not in PHASES:
        raise ValidationError(f"unknown phase {phase!r}; choose from {', '.join(PHASES)}")
    depth = PHASES.index(phase)
    run = _Run(spec)

    group = resolve_group(spec.group, spec.catalog)
    x = parse_cycles(spec.x, group.degree)
    y = parse_cycles(spec.y, group.degree)
    job = CoverJob(n=spec.n, group=group, x=x, y=y, group_name=spec.group)
    problems = job.problems()
    if problems:
        raise ValidationError("; ".join(problems))

    data = build_cover_group(job)
    n = spec.n
    t_order = group.order()
    run.record(
        "job-valid",
        "n >= 4; x and y lie in T with |x| = 2 and |y| an odd prime; "
        "<x, y> = T; and T is nonabelian simple",
        spec.echo(),
        {
            "group_order": t_order,
            "x_order": 2,
            "y_order": y.order(),
            "entry_mode": "table" if data.ctx.index_mode else "object",
        },
        True,
    )

    h_elems = data.h_elements()
    _stage_class_partition(run, data)
    _stage_twist_identities(run, data, h_elems)
    _stage_kernel_witness(run, data)
    if depth < 1:
        return run.certificate()

    kgens = _stage_kernel_generators(run, data)
    structure = None
    if kgens is not None:
        structure = _stage_block_structure(run, data, kgens)
    if n == 4 and structure is not None:
        _stage_block_prediction(run, data, structure)
        _stage_tuple_generators(run, data, structure)
    if depth < 2:
        return run.certificate()

    graph = None
    if structure is not None:
        graph = _stage_graph_build(run, data, structure, h_elems)
    _stage_two_arc_transitive(run, data, h_elems)
    if depth >= 3 and graph is not None and structure is not None:
        _stage_cover_quotient(run, data, structure, graph)
        _stage_centralizer(run, data, structure, graph)
    if graph is not None and spec.out_dir and spec.formats:
        _write_exports(run, graph)
    return run.certificate()


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------


def _stage_class_partition(run: _Run, data: CoverGroupData) -> Optional[dict]:
    n = data.ctx.n
    claim = (
        "the class sets O_1..O_(n-1) partition the (n-1)! full cycles with "
        "|O_k| = (n-2)!; the subgroup fixing 1 and 2 acts regularly on every "
        "class; conjugation by (1,2) maps O_k onto O_(n-k)"
    )

    def body():
        classes = cycle_classes(n)
        cycles = n_cycles(n)
        size = math.factorial(n - 2)
        sizes_ok = sorted(classes) == list(range(1, n)) and all(
            len(v) == size for v in classes.values()
        )
        total = sum(len(v) for v in classes.values())
        partition_ok = total == math.factorial(n - 1)

        # transitive on a class of |L| elements == regular
        l_tops = [p.sigma for p in data.l_gens]
        l_count = len(closure(l_tops, Permutation.identity(n)))
        regular = l_count == size
        for k, positions in classes.items():
            rep = cycles[positions[0]]
            orbit_keys = {rep.key()}
            frontier = [rep]
            while frontier:
                new_frontier = []
                for a in frontier:
                    for s in l_tops:
                        b = a.conjugate(s)
                        if b.key() not in orbit_keys:
                            orbit_keys.add(b.key())
                            new_frontier.append(b)
                frontier = new_frontier
            if orbit_keys != {cycles[p].key() for p in positions}:
                regular = False

        delta = data.delta
        reflected = all(
            sorted(
                data.ctx.cycle_index[cycles[p].conjugate(delta).key()]
                for p in classes[k]
            )
            == list(classes[n - k])
            for k in classes
        )
        ok = sizes_ok and partition_ok and regular and reflected
        return {
            "classes": n - 1,
            "class_size": size,
            "partition": partition_ok,
            "regular": regular,
            "reflected": reflected,
        }, ok

    return run.stage("class-partition", claim, {"n": n}, body)


def _stage_twist_identities(
    run: _Run, data: CoverGroupData, h_elems: list
) -> Optional[dict]:
    n = data.ctx.n
    claim = (
        "g^2 = 1; g commutes elementwise with the embedded copy of Sym{3..n}; "
        "and H ∩ H^g equals that copy, of order (n-2)!"
    )

    def body():
        g = data.g
        g2_trivial = (g * g).is_identity()
        l_elems = data.l_elements()
        commutes = all((g * z).key() == (z * g).key() for z in l_elems)
        from .groups import conj_intersection

        inter = conj_intersection(h_elems, g)
        inter_keys = {z.key() for z in inter}
        l_keys = {z.key() for z in l_elems}
        inter_ok = inter_keys == l_keys and len(inter) == math.factorial(n - 2)
        ok = g2_trivial and commutes and inter_ok
        return {
            "g_squared_trivial": g2_trivial,
            "commuting_pairs_checked": len(l_elems),
            "intersection_order": len(inter),
            "intersection_is_fixed_subgroup": inter_keys == l_keys,
        }, ok

    return run.stage("twist-identities", claim, {"n": n}, body)


def _stage_kernel_witness(run: _Run, data: CoverGroupData) -> Optional[dict]:
    n = data.ctx.n
    job = data.job
    claim = (
        "s = (g·(2,3))^3 has trivial top part; its entries at (1,2,...,n) and "
        "its inverse cycle are y^2·x and y^-2·x; those two entries generate T; "
        "and at n = 7 the entry at (1,4,2,5,3,6,7) is trivial"
    )

    def body():
        ctx = data.ctx
        s = kernel_witness(data)
        x, y = job.x, job.y
        long_cycle = "(" + ",".join(str(i) for i in range(1, n + 1)) + ")"
        alpha = parse_cycles(long_cycle, n)
        s_alpha = ctx.entry_perm(s.f[ctx.cycle_index[alpha.key()]])
        s_alpha_inv = ctx.entry_perm(s.f[ctx.cycle_index[alpha.inverse().key()]])
        front_ok = s_alpha == y * y * x
        back_ok = s_alpha_inv == y.inverse() * y.inverse() * x
        pair_order = group_order([s_alpha, s_alpha_inv], job.group.degree)
        generates = pair_order == job.group.order()
        computed = {
            "top_part_trivial": True,
            "entry_at_long_cycle": s_alpha.cycle_string(),
            "entry_at_inverse_cycle": s_alpha_inv.cycle_string(),
            "front_matches_yyx": front_ok,
            "back_matches_y_inv": back_ok,
            "entry_pair_generates_order": pair_order,
        }
        ok = front_ok and back_ok and generates
        if n == 7:
            beta = parse_cycles("(1,4,2,5,3,6,7)", 7)
            trivial = s.f[ctx.cycle_index[beta.key()]] == ctx.identity_entry
            computed["interleaved_cycle_entry_trivial"] = trivial
            ok = ok and trivial
        return computed, ok

    return run.stage("kernel-witness", claim, {"n": n}, body)


def _stage_kernel_generators(run: _Run, data: CoverGroupData) -> Optional[list]:
    n = data.ctx.n
    claim = (
        "the Schreier generators of the kernel of the projection onto the top "
        "symmetric group all have trivial top part"
    )
    holder: dict = {}

    def body():
        kgens = schreier_kernel_generators(
            data.y_gens,
            lambda w: w.sigma,
            data.ctx.identity_element(),
            image_cap=run.spec.enum_cap,
        )
        holder["kgens"] = kgens
        return {
            "generator_count": len(kgens),
            "component_count": data.ctx.k,
            "image_order": math.factorial(n),
        }, True

    out = run.stage("kernel-generators", claim, {"n": n}, body)
    return holder.get("kgens") if out is not None else None


def _stage_block_structure(
    run: _Run, data: CoverGroupData, kgens: list
) -> Optional[SubdirectStructure]:
    n = data.ctx.n
    t_order = data.job.group.order()
    claim = (
        "the kernel projects onto every component of T^(n-1)! and splits into "
        "d full diagonal blocks linked by verified automorphisms, so "
        "|M| = |T|^d and |Y| = |T|^d · n!"
    )
    holder: dict = {}

    def body():
        if data.ctx.index_mode:
            structure = subdirect_decompose(kgens, table=data.ctx.table)
        else:
            structure = subdirect_decompose(kgens, group=data.job.group)
        holder["structure"] = structure
        d = structure.block_count
        report = BlockReport.build(n, d)
        order_m = t_order**d
        order_y = order_m * math.factorial(n)
        rng = random.Random(run.spec.seed)
        sample_ok = all(
            link.is_multiplicative_sample(rng)
            for link in structure.links
            if link is not None
        )
        computed = {
            "d": d,
            "block_sizes": sorted(len(b) for b in structure.blocks),
            "order_m": str(order_m),
            "order_y": str(order_y),
            "order_y_digits": len(str(order_y)),
            "component_count": structure.k,
            "divides_component_count": report.divides,
            "link_sample_multiplicative": sample_ok,
        }
        if n == 4:
            computed["blocks_positional"] = _positional_blocks(structure)
        if report.lower_bound is not None:
            computed["lower_bound"] = report.lower_bound
            computed["bound_ok"] = report.bound_ok
        ok = report.divides and sample_ok and (report.bound_ok is not False)
        return computed, ok

    out = run.stage("block-structure", claim, {"n": n, "group_order": t_order}, body)
    return holder.get("structure") if out is not None else None


def _positional_blocks(structure: SubdirectStructure) -> list[list[int]]:
    """Blocks of canonical component indices, restated as 1-based positions."""
    pos_of = _position_of_canonical()
    return sorted(sorted(pos_of[j] + 1 for j in blk) for blk in structure.blocks)


def _position_of_canonical() -> tuple[int, ...]:
    from .wreath import _k4_maps

    pos_of, _ = _k4_maps()
    return pos_of


def _stage_block_prediction(
    run: _Run, data: CoverGroupData, structure: SubdirectStructure
) -> Optional[dict]:
    job = data.job
    claim = (
        "at n = 4 the block count predicted from automorphism existence "
        "(an automorphism fixing x and inverting y; one crossing the three "
        "distinguished words) equals the computed d"
    )

    def body():
        table = data.ctx.table
        phi_invert = inverting_automorphism(job.group, job.x, job.y, table)
        computed: dict = {"fix_x_invert_y_exists": phi_invert is not None}
        if phi_invert is None:
            predicted = 6
            computed["cross_words_exists"] = None
        else:
            phi_cross = cross_automorphism(job.group, job.x, job.y, table)
            computed["cross_words_exists"] = phi_cross is not None
            predicted = 1 if phi_cross is not None else 3
        check = k4_block_count(job.group, job.x, job.y, table)
        computed["predicted_d"] = predicted
        computed["computed_d"] = structure.block_count
        return computed, predicted == check == structure.block_count

    return run.stage(
        "block-count-prediction", claim, {"group": job.group_name}, body
    )


def _stage_tuple_generators(
    run: _Run, data: CoverGroupData, structure: SubdirectStructure
) -> Optional[dict]:
    claim = (
        "the three explicit base-only products t1, t2, t3 generate the same "
        "subgroup of T^6, with the same blocks, as the Schreier kernel"
    )

    def body():
        tuples = k4_tuple_data(data)
        if data.ctx.index_mode:
            alt = subdirect_decompose(
                [tuples.t1, tuples.t2, tuples.t3], table=data.ctx.table
            )
        else:
            alt = subdirect_decompose(
                [tuples.t1, tuples.t2, tuples.t3], group=data.job.group
            )
        same = structures_equal(alt, structure)
        positional = [
            [p.cycle_string() for p in row] for row in tuples.tuples_in_positions()
        ]
        return {
            "structures_equal": same,
            "tuple_d": alt.block_count,
            "tuples_positional": positional,
        }, same

    return run.stage("tuple-generators", claim, {"n": 4}, body)


def _stage_graph_build(
    run: _Run, data: CoverGroupData, structure: SubdirectStructure, h_elems: list
):
    n = data.ctx.n
    t_order = data.job.group.order()
    expected = t_order ** structure.block_count * math.factorial(n) // math.factorial(n - 1)
    claim = (
        "the coset graph on the cosets of H is simple, (n-1)-regular, and "
        "connected with exactly |Y|/|H| vertices"
    )
    if expected > run.spec.vertex_cap:
        run.skip(
            "graph-build",
            f"expected {expected} vertices exceeds the cap {run.spec.vertex_cap}",
            kind="capacity",
        )
        return None
    holder: dict = {}

    def body():
        graph = build_coset_graph(h_elems, data.g, vertex_cap=run.spec.vertex_cap)
        holder["graph"] = graph
        conn = verify_connected(graph, expected * math.factorial(n - 1), graph.subgroup_order)
        # coset graphs are vertex-transitive, so one BFS root gives the girth
        inv = graph_invariants(graph.adjacency, girth_roots=(0,))
        ok = conn["ok"] and inv["valency"] == n - 1 and inv["components"] == 1
        return {
            "vertices": graph.order,
            "expected_vertices": expected,
            "valency": inv["valency"],
            "connected": inv["components"] == 1,
            "coset_count_matches": conn["ok"],
            "girth": inv["girth"],
        }, ok

    out = run.stage("graph-build", claim, {"n": n, "expected_vertices": expected}, body)
    return holder.get("graph") if out is not None else None


def _stage_two_arc_transitive(
    run: _Run, data: CoverGroupData, h_elems: list
) -> Optional[dict]:
    n = data.ctx.n
    claim = (
        "the vertex stabilizer H acts 2-transitively on the n-1 neighboring "
        "cosets, so the constructed group acts 2-arc-transitively on the graph"
    )

    def body():
        result = two_arc_transitive(h_elems, data.g, data.h_gens)
        ok = result["two_transitive"] and result["index"] == n - 1
        return {"neighbor_count": result["index"], "two_transitive": result["two_transitive"]}, ok

    return run.stage("two-arc-transitive", claim, {"n": n}, body)


def _m_generators(data: CoverGroupData, structure: SubdirectStructure) -> list[WreathElement]:
    """The kernel subgroup's generating rows as base-only wreath elements."""
    ident = Permutation.identity(data.ctx.n)
    return [WreathElement(data.ctx, tuple(row), ident) for row in structure.generators]


def _stage_cover_quotient(
    run: _Run, data: CoverGroupData, structure: SubdirectStructure, graph
) -> Optional[dict]:
    n = data.ctx.n
    claim = (
        "the kernel subgroup M acts with all vertex orbits of size |M| and no "
        "intra-orbit edges; the quotient is the complete graph on n vertices "
        "and the quotient map is a bijection on every neighborhood"
    )

    def body():
        cert = quotient_graph(graph, _m_generators(data, structure))
        order_m = data.job.group.order() ** structure.block_count
        ok = (
            cert.quotient_is_complete
            and cert.quotient_order == n
            and cert.locally_bijective
            and cert.fibre_size == order_m
        )
        return {
            "quotient_order": cert.quotient_order,
            "quotient_valency": cert.quotient_valency,
            "fibre_size": cert.fibre_size,
            "locally_bijective": cert.locally_bijective,
            "complete": cert.quotient_is_complete,
        }, ok

    return run.stage("cover-quotient", claim, {"n": n}, body)


def _stage_centralizer(
    run: _Run, data: CoverGroupData, structure: SubdirectStructure, graph
) -> Optional[dict]:
    n = data.ctx.n
    order_y = data.job.group.order() ** structure.block_count * math.factorial(n)
    if order_y > CENTRALIZER_ENUM_LIMIT:
        run.skip(
            "centralizer-structure",
            f"group order {order_y} exceeds the element-enumeration limit "
            f"{CENTRALIZER_ENUM_LIMIT}",
            kind="capacity",
        )
        return None
    claim = (
        "the centralizer of the kernel subgroup M in the whole group is "
        "computed by elementwise commutation; when it acts freely with no "
        "intra-orbit edges, the graph quotient by it is recorded"
    )

    def body():
        elements = closure(data.y_gens, data.ctx.identity_element(), cap=order_y + 1)
        mg = _m_generators(data, structure)
        cz = centralizer_elements(elements, mg)
        computed: dict = {"group_order": order_y, "centralizer_order": len(cz)}
        try:
            cert = quotient_graph(graph, cz)
        except ValidationError as exc:
            computed["quotient"] = None
            computed["quotient_note"] = str(exc)
            return computed, True
        inv = graph_invariants(cert.quotient_adjacency)
        computed["quotient"] = {
            "order": cert.quotient_order,
            "valency": inv["valency"],
            "girth": inv["girth"],
            "fibre_size": cert.fibre_size,
            "locally_bijective": cert.locally_bijective,
        }
        return computed, True

    return run.stage("centralizer-structure", claim, {"n": n}, body)


def _write_exports(run: _Run, graph) -> None:
    out_dir = Path(run.spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = {"edge-list": "edges", "adjacency-text": "adj"}
    for fmt in run.spec.formats:
        data = export_graph(graph.adjacency, fmt)
        name = f"{run.spec.job_name()}.{suffix.get(fmt, fmt)}.txt"
        (out_dir / name).write_bytes(data)
        run.artifacts.append(name)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

SUITE_NAMES = ("examples", "small-n", "extended")

_EXAMPLE_JOBS = (
    JobSpec(n=4, group="A5", x="(1,2)(3,4)", y="(1,2,3,4,5)",
            vertex_cap=10_000, label="example-1"),
    JobSpec(n=4, group="A5", x="(1,2)(3,4)", y="(1,5,3)",
            vertex_cap=10_000, label="example-2"),
    JobSpec(n=4, group="A11", x="(1,2)(3,6)", y="(1,2,3,4,5,6,7,8,9,10,11)",
            vertex_cap=10_000, label="example-3"),
)

_SMALL_N_JOBS = tuple(
    JobSpec(n=n, group="A5", x="(1,2)(3,4)", y="(1,2,3,4,5)",
            vertex_cap=10_000, label=f"small-n{n}")
    for n in (4, 5, 6, 7)
)

_EXTENDED_JOBS = (
    JobSpec(n=4, group="A5", x="(1,2)(3,4)", y="(1,5,3)",
            vertex_cap=VERTEX_CAP_DEFAULT, label="extended-build"),
)

# regression keys -> (job label, certificate lookup) recorded by suites
_REGRESSION_SOURCES = {
    "d/n=7/A5/(1,2)(3,4)/(1,2,3,4,5)": ("small-n7", ("block-structure", "d")),
    "girth/n=4/A5/(1,2)(3,4)/(1,2,3,4,5)": ("small-n4", ("graph-build", "girth")),
    "girth/n=4/A5/(1,2)(3,4)/(1,5,3)": ("extended-build", ("graph-build", "girth")),
}


def _suite_specs(name: str) -> tuple[JobSpec, ...]:
    if name == "examples":
        return _EXAMPLE_JOBS
    if name == "small-n":
        return _SMALL_N_JOBS
    if name == "extended":
        return _EXAMPLE_JOBS + _SMALL_N_JOBS + _EXTENDED_JOBS
    raise ValidationError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")


def load_baselines(path: Optional[str] = None) -> dict:
    """Frozen regression values: the packaged defaults or a user file."""
    if path is None:
        text = resources.files("arccover").joinpath("baselines.json").read_text()
        return json.loads(text)
    p = Path(path)
    if not p.exists():
        return {}
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"cannot parse baselines file {path}: {exc}") from exc


@dataclass
class SuiteResult:
    suite: str
    certificates: list[Certificate]
    regressions: list[dict]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.certificates) and all(
            r["passed"] for r in self.regressions
        )

    def summary_table(self) -> str:
        lines = [f"suite: {self.suite}"]
        for cert in self.certificates:
            lines.append("  " + cert.summary_line())
        for reg in self.regressions:
            state = "pass" if reg["passed"] else "FAIL"
            note = "frozen" if reg.get("frozen") else f"baseline {reg['baseline']}"
            lines.append(f"  {state}  regression {reg['key']} = {reg['computed']} ({note})")
        lines.append(("all checks passed" if self.ok else "FAILURES PRESENT"))
        return "\n".join(lines) + "\n"


def _run_job_payload(spec_dict: dict) -> dict:
    """Top-level worker for process pools: JobSpec dict in, payload out."""
    if "formats" in spec_dict:
        spec_dict = dict(spec_dict, formats=tuple(spec_dict["formats"]))
    return run_job(JobSpec(**spec_dict)).payload


def run_suite(
    name: str,
    out_dir: Optional[str] = None,
    catalog: Optional[str] = None,
    seed: int = 0,
    parallel: bool = False,
    baselines_path: Optional[str] = None,
) -> SuiteResult:
    """Run a named job collection and compare frozen regression values.

    A regression key absent from the baselines is frozen at the computed
    value (and written back when a user baselines path is given); a present
    key must match exactly.
    """
    specs = [
        replace(s, out_dir=out_dir, catalog=catalog, seed=seed)
        for s in _suite_specs(name)
    ]
    if parallel and len(specs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(4, len(specs))) as pool:
            payloads = list(
                pool.map(_run_job_payload, [s.__dict__.copy() for s in specs])
            )
        certificates = [Certificate(p) for p in payloads]
    else:
        certificates = [run_job(s) for s in specs]

    by_label = {s.label: c for s, c in zip(specs, certificates)}
    baselines = load_baselines(baselines_path)
    regressions = []
    dirty = False
    for key, (label, (check_id, field_name)) in _REGRESSION_SOURCES.items():
        cert = by_label.get(label)
        if cert is None:
            continue
        rec = cert.check(check_id)
        if rec is None or field_name not in rec["computed"]:
            continue
        computed = rec["computed"][field_name]
        if key in baselines:
            regressions.append(
                {
                    "key": key,
                    "computed": computed,
                    "baseline": baselines[key],
                    "passed": computed == baselines[key],
                }
            )
        else:
            baselines[key] = computed
            dirty = True
            regressions.append(
                {"key": key, "computed": computed, "baseline": None,
                 "passed": True, "frozen": True}
            )
    if dirty and baselines_path is not None:
        Path(baselines_path).write_text(json.dumps(baselines, indent=2) + "\n")

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for spec, cert in zip(specs, certificates):
            cert.write(out / f"{spec.label}.json")
        (out / f"suite-{name}.txt").write_text(
            SuiteResult(name, certificates, regressions).summary_table()
        )
    return SuiteResult(name, certificates, regressions)
