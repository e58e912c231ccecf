"""The wreath-product construction over the domain of full cycles.

Elements are pairs (f, sigma): sigma permutes {1..n}, and f assigns an element
of the transformation group T to every n-cycle (1, i2, ..., in), indexed in
the canonical lex order. Multiplication twists by the conjugation action of
sigma on the cycle domain:

    (f1, s1) * (f2, s2) = (alpha -> f1(alpha) * f2(alpha^s1), s1*s2)
    (f, s)^-1           = (alpha -> f(alpha^(s^-1))^-1,        s^-1)

The cover group Y is generated by a copy of Sym{2..n} (trivial assignments)
together with one twisted swap g = (f, (1,2)) whose assignment depends only on
each cycle's class index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

from .errors import ValidationError
from .groups import (
    PermGroup,
    TableGroup,
    closure,
    group_order,
    is_natural_alternating,
    is_nonabelian_simple,
)
from .perm import Permutation, cycle_class, n_cycle_index, n_cycles, parse_cycles

MATERIALIZE_LIMIT = 8  # largest n for which wreath elements may be built


def _is_odd_prime(m: int) -> bool:
    if m < 3 or m % 2 == 0:
        return False
    return all(m % d for d in range(3, int(m**0.5) + 1, 2))


class WreathContext:
    """Shared data for wreath elements at a fixed n over a fixed group T.

    Two storage modes for assignment entries: index mode (T enumerated with a
    multiplication table; entries are ints) and object mode (entries are
    Permutations; used when T is too large to enumerate).
    """

    def __init__(self, n: int, group: PermGroup, table: Optional[TableGroup] = None):
        if not 3 <= n <= MATERIALIZE_LIMIT:
            raise ValidationError(
                f"wreath elements materialize only for 3 <= n <= {MATERIALIZE_LIMIT}, got {n}"
            )
        self.n = n
        self.cycles = n_cycles(n)
        self.k = len(self.cycles)
        self.cycle_index = n_cycle_index(n)
        self.group = group
        self.table = table
        self._comp_maps: dict[tuple[int, ...], tuple[int, ...]] = {}
        if table is not None:
            self.identity_entry: Union[int, Permutation] = 0
        else:
            self.identity_entry = group.identity

    @property
    def index_mode(self) -> bool:
        return self.table is not None

    def entry(self, t: Permutation) -> Union[int, Permutation]:
        return self.table.idx(t) if self.table is not None else t

    def entry_perm(self, e: Union[int, Permutation]) -> Permutation:
        return self.table.elem(e) if self.table is not None else e

    def comp_map(self, sigma: Permutation) -> tuple[int, ...]:
        """Positions under conjugation: comp_map(s)[i] = index of cycles[i]^s."""
        key = sigma.images
        cached = self._comp_maps.get(key)
        if cached is None:
            # comp maps compose/invert like permutations of the positions, so
            # reuse the inverse's map when it is already known
            inv_cached = self._comp_maps.get(sigma.inverse().images)
            if inv_cached is not None:
                out = [0] * self.k
                for i, m in enumerate(inv_cached):
                    out[m] = i
                cached = tuple(out)
            else:
                idx = self.cycle_index
                cached = tuple(idx[c.conjugate(sigma).key()] for c in self.cycles)
            self._comp_maps[key] = cached
        return cached

    def identity_element(self) -> "WreathElement":
        return WreathElement(
            self, (self.identity_entry,) * self.k, Permutation.identity(self.n)
        )

    def embed_top(self, sigma: Permutation) -> "WreathElement":
        """The element (trivial assignment, sigma)."""
        if sigma.degree != self.n:
            raise ValidationError("top permutation degree must equal n")
        return WreathElement(self, (self.identity_entry,) * self.k, sigma)

    def from_assignment(self, entries: Sequence, sigma: Optional[Permutation] = None) -> "WreathElement":
        if sigma is None:
            sigma = Permutation.identity(self.n)
        entries = tuple(entries)
        if len(entries) != self.k:
            raise ValidationError(f"assignment must have {self.k} entries")
        if self.index_mode and entries and isinstance(entries[0], Permutation):
            entries = tuple(self.table.idx(p) for p in entries)
        return WreathElement(self, entries, sigma)


class WreathElement:
    """An element (f, sigma) of the wreath product over the cycle domain."""

    __slots__ = ("ctx", "f", "sigma")

    def __init__(self, ctx: WreathContext, f: tuple, sigma: Permutation):
        self.ctx = ctx
        self.f = f
        self.sigma = sigma

    def __mul__(self, other: "WreathElement") -> "WreathElement":
        ctx = self.ctx
        amap = ctx.comp_map(self.sigma)
        f2 = other.f
        if ctx.index_mode:
            mf = ctx.table.mult_flat
            size = ctx.table.size
            f = tuple([mf[a * size + f2[m]] for a, m in zip(self.f, amap)])
        else:
            f = tuple([a * f2[m] for a, m in zip(self.f, amap)])
        sigma = self.sigma * other.sigma
        cache = ctx._comp_maps
        if sigma.images not in cache:
            # the product's comp map is the composition of the factors' maps;
            # prefill while both are at hand to avoid rebuilding from scratch
            amap2 = cache.get(other.sigma.images)
            if amap2 is not None:
                cache[sigma.images] = tuple([amap2[m] for m in amap])
        return WreathElement(ctx, f, sigma)

    def inverse(self) -> "WreathElement":
        ctx = self.ctx
        sigma_inv = self.sigma.inverse()
        amap = ctx.comp_map(sigma_inv)
        f1 = self.f
        if ctx.index_mode:
            inv = ctx.table.inv
            f = tuple([inv[f1[m]] for m in amap])
        else:
            f = tuple([f1[m].inverse() for m in amap])
        return WreathElement(ctx, f, sigma_inv)

    def is_identity(self) -> bool:
        return self.sigma.is_identity() and all(
            e == self.ctx.identity_entry for e in self.f
        )

    def key(self) -> bytes:
        """Serialization: top images first, then the entry keys in order."""
        ctx = self.ctx
        if ctx.index_mode:
            eb = ctx.table.elem_bytes
            return bytes(self.sigma.images) + b"".join([eb[e] for e in self.f])
        return bytes(self.sigma.images) + b"".join([e.key() for e in self.f])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WreathElement)
            and self.sigma == other.sigma
            and self.f == other.f
        )

    def __hash__(self) -> int:
        return hash((self.f, self.sigma.images))

    def __repr__(self) -> str:
        entries = ", ".join(self.ctx.entry_perm(e).cycle_string() for e in self.f)
        return f"WreathElement([{entries}], {self.sigma.cycle_string()})"

    def order(self) -> int:
        power = self
        identity = self.ctx.identity_element()
        for m in range(1, 10_000_000):
            if power == identity:
                return m
            power = power * self
        raise ValidationError("order search exceeded bound")


# ---------------------------------------------------------------------------
# construction jobs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverJob:
    """Input data: the arity n and a generating pair (x, y) of T.

    Validated facts: 4 <= n, x and y lie in T, |x| = 2, |y| is an odd prime,
    <x, y> = T, and T is nonabelian simple (verified exactly when T is
    enumerable, by classification of the natural alternating action otherwise).
    """

    n: int
    group: PermGroup
    x: Permutation
    y: Permutation
    group_name: str = "T"

    def problems(self, table: Optional[TableGroup] = None) -> list[str]:
        out = []
        if self.n < 4:
            out.append(f"n must be at least 4, got {self.n}")
        deg = self.group.degree
        if self.x.degree != deg or self.y.degree != deg:
            out.append("x and y must have the same degree as T")
            return out
        if self.x.order() != 2:
            out.append(f"|x| must be 2, got {self.x.order()}")
        if not _is_odd_prime(self.y.order()):
            out.append(f"|y| must be an odd prime, got {self.y.order()}")
        if not self.group.contains(self.x):
            out.append("x is not an element of T")
        if not self.group.contains(self.y):
            out.append("y is not an element of T")
        t_order = self.group.order()
        if group_order([self.x, self.y], deg) != t_order:
            out.append("<x, y> is a proper subgroup of T")
        if is_natural_alternating(self.group):
            pass  # alternating of degree >= 5 in natural action: simple
        elif t_order <= 4000:
            if not is_nonabelian_simple(table or TableGroup(self.group)):
                out.append("T is not nonabelian simple")
        else:
            out.append(
                "cannot certify that T is nonabelian simple "
                "(not natural alternating and too large to enumerate)"
            )
        return out

    def validate(self, table: Optional[TableGroup] = None) -> None:
        problems = self.problems(table)
        if problems:
            raise ValidationError("; ".join(problems))


def class_assignment(ctx: WreathContext, x: Permutation, y: Permutation) -> tuple:
    """Assignment entries by class index: y on 1, y^-1 on n-1, x on 2 and n-2.

    All other classes get the identity. For n = 4 the x-classes coincide
    (2 = n-2); for n = 5 class 2 and 3 both map to x; from n = 7 on most
    classes are unassigned.
    """
    n = ctx.n
    ex = ctx.entry(x)
    ey = ctx.entry(y)
    ey_inv = ctx.entry(y.inverse())
    eid = ctx.identity_entry
    out = []
    for alpha in ctx.cycles:
        k = cycle_class(alpha)
        if k == 1:
            out.append(ey)
        elif k == n - 1:
            out.append(ey_inv)
        elif k in (2, n - 2):
            out.append(ex)
        else:
            out.append(eid)
    return tuple(out)


@dataclass(frozen=True)
class CoverGroupData:
    """The constructed generators and distinguished subgroups for one job."""

    ctx: WreathContext
    job: CoverJob
    g: WreathElement  # the twisted swap (f, (1,2))
    h_gens: tuple[WreathElement, ...]  # Sym{2..n} embedded
    l_gens: tuple[WreathElement, ...]  # Sym{3..n} embedded
    y_gens: tuple[WreathElement, ...]  # h_gens + (g,)
    h_top_gens: tuple[Permutation, ...]
    delta: Permutation  # the swap (1,2)

    def h_order(self) -> int:
        import math

        return math.factorial(self.ctx.n - 1)

    def h_elements(self) -> list[WreathElement]:
        return closure(self.h_gens, self.ctx.identity_element())

    def l_elements(self) -> list[WreathElement]:
        return closure(self.l_gens, self.ctx.identity_element())


def build_cover_group(job: CoverJob, table: Optional[TableGroup] = None) -> CoverGroupData:
    """Materialize the construction for a validated job.

    If T is enumerable and no table is passed, one is built; otherwise the
    context falls back to object entries.
    """
    n = job.n
    if table is None and job.group.order() <= 4000:
        table = TableGroup(job.group)
    ctx = WreathContext(n, job.group, table)
    f = class_assignment(ctx, job.x, job.y)
    delta = parse_cycles("(1,2)", n)
    g = ctx.from_assignment(f, delta)
    h_top = _sym_tail_gens(n, start=2)
    l_top = _sym_tail_gens(n, start=3)
    h_gens = tuple(ctx.embed_top(s) for s in h_top)
    l_gens = tuple(ctx.embed_top(s) for s in l_top)
    return CoverGroupData(
        ctx=ctx,
        job=job,
        g=g,
        h_gens=h_gens,
        l_gens=l_gens,
        y_gens=h_gens + (g,),
        h_top_gens=h_top,
        delta=delta,
    )


def _sym_tail_gens(n: int, start: int) -> tuple[Permutation, ...]:
    """Generators of Sym{start..n} inside Sym{1..n}: the long cycle + last swap."""
    points = list(range(start, n + 1))
    if len(points) <= 1:
        return ()
    long_cycle = "(" + ",".join(map(str, points)) + ")"
    if len(points) == 2:
        return (parse_cycles(long_cycle, n),)
    swap = f"({n - 1},{n})"
    return (parse_cycles(long_cycle, n), parse_cycles(swap, n))


def kernel_witness(data: CoverGroupData) -> WreathElement:
    """The base-only element s = (g * (2,3))^3; its top part must vanish.

    Its entries at the cycles (1,2,...,n) and (1,n,...,2) are y*y*x and
    y^-1*y^-1*x respectively, and for n = 7 the entry at (1,4,2,5,3,6,7) is
    the identity.
    """
    ctx = data.ctx
    swap23 = ctx.embed_top(parse_cycles("(2,3)", ctx.n))
    gs = data.g * swap23
    s = gs * gs * gs
    if not s.sigma.is_identity():
        from .errors import InternalCheckError

        raise InternalCheckError("kernel witness has a nontrivial top part")
    return s


# ---------------------------------------------------------------------------
# the n = 4 positional conventions and tuple generators
# ---------------------------------------------------------------------------

# Positional report order for the six 4-cycles. All n=4 block/tuple values
# are stated in this order; canonical (lex) indexing is translated through it.
K4_POSITIONS: tuple[str, ...] = (
    "(1,2,3,4)",
    "(1,4,3,2)",
    "(1,2,4,3)",
    "(1,3,4,2)",
    "(1,3,2,4)",
    "(1,4,2,3)",
)


@lru_cache(maxsize=None)
def _k4_maps() -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(canonical index -> position, position -> canonical index), 0-based."""
    idx = n_cycle_index(4)
    pos_of = [0] * 6
    for pos, text in enumerate(K4_POSITIONS):
        pos_of[idx[parse_cycles(text, 4).key()]] = pos
    canon_of = [0] * 6
    for canon, pos in enumerate(pos_of):
        canon_of[pos] = canon
    return tuple(pos_of), tuple(canon_of)


def to_positions(values: Sequence) -> tuple:
    """Reorder a canonical 6-tuple into positional report order."""
    if len(values) != 6:
        raise ValidationError("positional order is defined for 6 components")
    _, canon_of = _k4_maps()
    return tuple(values[canon_of[p]] for p in range(6))


def from_positions(values: Sequence) -> tuple:
    if len(values) != 6:
        raise ValidationError("positional order is defined for 6 components")
    pos_of, _ = _k4_maps()
    return tuple(values[pos_of[c]] for c in range(6))


def position_action(sigma: Permutation) -> Permutation:
    """The permutation of the six positions induced by conjugation by sigma."""
    if sigma.degree != 4:
        raise ValidationError("position action is defined for degree 4")
    idx = n_cycle_index(4)
    pos_of, canon_of = _k4_maps()
    cycles = n_cycles(4)
    images = [0] * 6
    for pos in range(6):
        alpha = cycles[canon_of[pos]]
        images[pos] = pos_of[idx[alpha.conjugate(sigma).key()]] + 1
    return Permutation(images)


@dataclass(frozen=True)
class K4TupleData:
    """The three involutions and the three base 6-tuples they multiply into."""

    s1: WreathElement
    s2: WreathElement
    s3: WreathElement
    t1: WreathElement
    t2: WreathElement
    t3: WreathElement

    def tuples_in_positions(self) -> tuple[tuple, tuple, tuple]:
        out = []
        for t in (self.t1, self.t2, self.t3):
            ctx = t.ctx
            out.append(to_positions(tuple(ctx.entry_perm(e) for e in t.f)))
        return tuple(out)


def k4_tuple_data(data: CoverGroupData) -> K4TupleData:
    """Explicit base-only generators of the kernel block group at n = 4.

    s1 = g*h2, s2 = h2*h1*g*h1, s3 = h2*h1^-1*g*h1^-1 with h1 = (2,3,4),
    h2 = (3,4); the products t1 = s1*s2*s3, t2 = s1*s3*s2, t3 = s2*s1*s3
    all have trivial top part.
    """
    ctx = data.ctx
    if ctx.n != 4:
        raise ValidationError("tuple generators are specific to n = 4")
    g = data.g
    h1 = ctx.embed_top(parse_cycles("(2,3,4)", 4))
    h1_inv = h1.inverse()
    h2 = ctx.embed_top(parse_cycles("(3,4)", 4))
    s1 = g * h2
    s2 = h2 * h1 * g * h1
    s3 = h2 * h1_inv * g * h1_inv
    t1 = s1 * s2 * s3
    t2 = s1 * s3 * s2
    t3 = s2 * s1 * s3
    for t in (t1, t2, t3):
        if not t.sigma.is_identity():
            from .errors import InternalCheckError

            raise InternalCheckError("tuple generator has a nontrivial top part")
    return K4TupleData(s1=s1, s2=s2, s3=s3, t1=t1, t2=t2, t3=t3)
