"""Group engine: orders, closures, orbits, transversals, automorphism extension.

Everything here is deterministic: BFS in generator order with FIFO frontiers,
dict insertion order, no randomness. Groups are given by permutation
generators; large groups are handled through a stabilizer chain without
enumeration, small groups may additionally carry a full multiplication table.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import CapacityExceeded, InternalCheckError, ValidationError
from .perm import Permutation, parse_cycles

ENUM_CAP_DEFAULT = 10_000_000
TABLE_CAP = 4000


# ---------------------------------------------------------------------------
# generic BFS closure and orbits
# ---------------------------------------------------------------------------


def closure(generators: Sequence, identity, cap: int = ENUM_CAP_DEFAULT) -> list:
    """All products of `generators`, by BFS from the identity.

    Works for any elements with `*` and `.key()`. Deterministic: elements
    appear in BFS discovery order, identity first. Raises CapacityExceeded
    once more than `cap` elements are discovered.
    """
    elements = [identity]
    seen = {identity.key()}
    frontier = [identity]
    while frontier:
        new_frontier = []
        for u in frontier:
            for g in generators:
                w = u * g
                k = w.key()
                if k not in seen:
                    seen.add(k)
                    elements.append(w)
                    new_frontier.append(w)
                    if len(elements) > cap:
                        raise CapacityExceeded(
                            f"closure exceeded cap {cap}",
                            discovered=len(elements),
                            frontier=len(new_frontier),
                        )
        frontier = new_frontier
    return elements


def orbit(point, generators: Sequence, action: Callable) -> list:
    """Orbit of `point` under `generators` via `action(point, g)`, BFS order."""
    out = [point]
    seen = {point}
    frontier = [point]
    while frontier:
        new_frontier = []
        for p in frontier:
            for g in generators:
                q = action(p, g)
                if q not in seen:
                    seen.add(q)
                    out.append(q)
                    new_frontier.append(q)
        frontier = new_frontier
    return out


def orbit_with_transversal(point, generators: Sequence, action: Callable, identity):
    """Orbit plus coset representatives u_q with action(point, u_q) = q."""
    reps = {point: identity}
    out = [point]
    frontier = [point]
    while frontier:
        new_frontier = []
        for p in frontier:
            for g in generators:
                q = action(p, g)
                if q not in reps:
                    reps[q] = reps[p] * g
                    out.append(q)
                    new_frontier.append(q)
        frontier = new_frontier
    return out, reps


def _point_action(point: int, g: Permutation) -> int:
    return g.apply(point)


# ---------------------------------------------------------------------------
# stabilizer chain (deterministic Schreier-Sims with sifting)
# ---------------------------------------------------------------------------


class StabilizerChain:
    """Base-and-strong-generating-set structure for a permutation group.

    Deterministic Schreier-Sims: one master list of strong generators, level i
    uses the master generators fixing the first i base points, levels are
    verified bottom-up (every Schreier generator must sift to the identity
    through the levels below; failures join the master list and re-verify from
    their own level). Supports exact order and membership for groups far too
    large to enumerate.
    """

    def __init__(self, generators: Sequence[Permutation], degree: int):
        self.degree = degree
        self.base: list[int] = []
        self.master: list[Permutation] = []
        self.transversals: list[dict[int, Permutation]] = []
        self._seen: set[bytes] = set()
        for g in generators:
            if not g.is_identity():
                self._add_strong_gen(g)
        self._verify_all()

    def _add_strong_gen(self, h: Permutation) -> int:
        """Add h to the master list; returns the deepest level whose gens changed."""
        self.master.append(h)
        self._seen.add(h.key())
        prefix = 0
        for b in self.base:
            if h.apply(b) != b:
                break
            prefix += 1
        if prefix == len(self.base):
            new_point = min(i for i, j in enumerate(h.images, start=1) if i != j)
            self.base.append(new_point)
            self.transversals.append({})
        return prefix

    def _level_gens(self, i: int) -> list[Permutation]:
        prefix = self.base[:i]
        return [
            g for g in self.master if all(g.apply(b) == b for b in prefix)
        ]

    def _sift_below(self, level: int, g: Permutation) -> Permutation:
        for j in range(level, len(self.base)):
            if g.is_identity():
                return g
            rep = self.transversals[j].get(g.apply(self.base[j]))
            if rep is None:
                return g
            g = g * rep.inverse()
        return g

    def _verify_all(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            gens_i = self._level_gens(i)
            _, transversal = orbit_with_transversal(
                self.base[i], gens_i, _point_action, Permutation.identity(self.degree)
            )
            self.transversals[i] = transversal
            restart_at = None
            for p in list(transversal):
                u_p = transversal[p]
                for s in gens_i:
                    schreier = u_p * s * transversal[s.apply(p)].inverse()
                    residue = self._sift_below(i + 1, schreier)
                    if residue.is_identity() or residue.key() in self._seen:
                        continue
                    restart_at = self._add_strong_gen(residue)
                    break
                if restart_at is not None:
                    break
            if restart_at is not None:
                # the residue fixes base[0..i], so it lives strictly below i;
                # levels deeper than restart_at are untouched and stay verified
                if restart_at <= i:
                    raise InternalCheckError("sifted residue moved an upper base point")
                i = restart_at
            else:
                i -= 1

    def order(self) -> int:
        n = 1
        for t in self.transversals:
            n *= len(t)
        return n

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        return self._sift_below(0, g).is_identity()


# ---------------------------------------------------------------------------
# group handle
# ---------------------------------------------------------------------------


class PermGroup:
    """A permutation group given by generators, with cached derived data."""

    def __init__(self, generators: Iterable[Permutation], degree: Optional[int] = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValidationError("degree required for an empty generating set")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise ValidationError("generator degree mismatch")
        self.generators = tuple(g for g in gens if not g.is_identity())
        self.degree = degree
        self._chain: Optional[StabilizerChain] = None
        self._elements: Optional[tuple[Permutation, ...]] = None

    @classmethod
    def from_cycle_strings(cls, texts: Sequence[str], degree: int) -> "PermGroup":
        return cls([parse_cycles(t, degree) for t in texts], degree)

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(self.generators, self.degree)
        return self._chain

    def order(self) -> int:
        return self.chain().order()

    def contains(self, g: Permutation) -> bool:
        return self.chain().contains(g)

    def elements(self, cap: int = ENUM_CAP_DEFAULT) -> tuple[Permutation, ...]:
        if self._elements is None:
            self._elements = tuple(closure(self.generators, self.identity, cap))
        if len(self._elements) > cap:
            raise CapacityExceeded(
                f"group order {len(self._elements)} exceeds cap {cap}",
                discovered=len(self._elements),
            )
        return self._elements

    def orbit_of(self, point: int) -> list[int]:
        return orbit(point, self.generators, _point_action)

    def is_transitive(self) -> bool:
        return len(self.orbit_of(1)) == self.degree


def group_order(generators: Sequence[Permutation], degree: int) -> int:
    if not any(not g.is_identity() for g in generators):
        return 1
    return StabilizerChain(generators, degree).order()


# ---------------------------------------------------------------------------
# action predicates
# ---------------------------------------------------------------------------


def is_regular(elements: Sequence, domain: Sequence, action: Callable) -> bool:
    """True iff the (listed) group acts regularly on `domain`.

    `elements` must be the full element list; regular = transitive with
    trivial point stabilizers, checked as |orbit| == |domain| == |group| via
    the sharp count of (element, point) coincidences.
    """
    if not domain:
        return False
    base = domain[0]
    images = [action(base, g) for g in elements]
    return (
        len(set(images)) == len(elements)
        and set(images) == set(domain)
        and len(elements) == len(domain)
    )


def is_2_transitive(generators: Sequence[Permutation], degree: int) -> bool:
    """True iff the group is 2-transitive on 1..degree.

    BFS on ordered pairs under the generators; 2-transitive iff the pair
    (1, 2) reaches all degree*(degree-1) ordered pairs of distinct points.
    """
    if degree < 2:
        return False

    def act(pair, g: Permutation):
        return (g.apply(pair[0]), g.apply(pair[1]))

    reached = orbit((1, 2), generators, act)
    return len(reached) == degree * (degree - 1)


# ---------------------------------------------------------------------------
# subgroup utilities on explicit element lists
# ---------------------------------------------------------------------------


def conj_intersection(h_elements: Sequence, g) -> list:
    """H ∩ H^g for an explicitly listed subgroup H and a group element g.

    H^g = g^-1 H g; membership is decided by serialized keys, so this works
    for any element type with `*`, `.inverse()` and `.key()`.
    """
    h_keys = {h.key() for h in h_elements}
    g_inv = g.inverse()
    out = []
    for h in h_elements:
        # h in H^g = g^-1 H g iff g h g^-1 in H
        if (g * h * g_inv).key() in h_keys:
            out.append(h)
    return out


def right_transversal(subgroup_elements: Sequence, group_elements: Sequence) -> list:
    """Representatives of the right cosets K\\H, in H's listed order."""
    seen: set[bytes] = set()
    reps = []
    for h in group_elements:
        k = h.key()
        if k in seen:
            continue
        reps.append(h)
        for s in subgroup_elements:
            seen.add((s * h).key())
    return reps


def schreier_kernel_generators(
    generators: Sequence, project: Callable, identity, image_cap: int = 100_000
) -> list:
    """Generators of the kernel of a homomorphism, by the Schreier method.

    `project(w)` maps a group element to its image (a Permutation); the
    image group is enumerated by BFS (capacity-limited), one coset
    representative per image element, and the kernel is generated by the
    elements u_c * s * u_{project(u_c * s)}^-1 over all representatives u_c
    and generators s. Output is deduplicated by key, identity dropped, and
    every element is checked to project trivially.
    """
    id_image = project(identity)
    transversal = {id_image.key(): identity}
    rep_inverses: dict[bytes, object] = {}
    identity_key = identity.key()
    out = []
    seen: set[bytes] = set()
    frontier = [identity]
    while frontier:
        new_frontier = []
        for u in frontier:
            for s in generators:
                w = u * s
                c = project(w).key()
                rep = transversal.get(c)
                if rep is None:
                    # w is the representative of its coset: this pair's
                    # Schreier generator is w * w^-1, skipped as the identity
                    transversal[c] = w
                    new_frontier.append(w)
                    if len(transversal) > image_cap:
                        raise CapacityExceeded(
                            f"quotient enumeration exceeded cap {image_cap}",
                            discovered=len(transversal),
                        )
                    continue
                rep_inv = rep_inverses.get(c)
                if rep_inv is None:
                    rep_inv = rep.inverse()
                    rep_inverses[c] = rep_inv
                z = w * rep_inv
                k = z.key()
                if k in seen or k == identity_key:
                    continue
                seen.add(k)
                if not project(z).is_identity():
                    raise InternalCheckError("Schreier output does not project trivially")
                out.append(z)
        frontier = new_frontier
    return out


# ---------------------------------------------------------------------------
# enumerated groups with multiplication tables
# ---------------------------------------------------------------------------


class TableGroup:
    """A small group held as an explicit element list with index tables.

    Elements are indexed in BFS order from the identity (index 0). The flat
    `mult` array holds index products, `inv` the index inverses; these are the
    workhorse for wreath base arithmetic and automorphism propagation.
    """

    def __init__(self, group: PermGroup, cap: int = TABLE_CAP):
        elems = group.elements(cap)
        if len(elems) > cap:
            raise CapacityExceeded("group too large for a multiplication table")
        self.group = group
        self.elements = elems
        self.size = len(elems)
        self.index = {p.key(): i for i, p in enumerate(elems)}
        self.elem_bytes = tuple(p.key() for p in elems)
        deg = group.degree
        # images matrix: rows = elements, columns = points (0-based values)
        mat = np.array([p.images for p in elems], dtype=np.int32) - 1
        lookup = {p.key(): i for i, p in enumerate(elems)}
        mult = np.empty((self.size, self.size), dtype=np.int32)
        # row a of the table: (a*b)(i) = b(a(i)), vectorized over all b
        for a in range(self.size):
            products = (mat[:, mat[a]] + 1).astype(np.uint8)  # shape (size, degree)
            mult[a] = [lookup[p.tobytes()] for p in products]
        self.mult_flat = array("i", mult.reshape(-1).tolist())
        self.mult = mult
        self.inv = array("i", [0] * self.size)
        for a in range(self.size):
            self.inv[a] = int(np.where(mult[a] == 0)[0][0])
        self.order_of = tuple(p.order() for p in elems)
        self.gen_indices = tuple(self.index[g.key()] for g in group.generators)

    def idx(self, p: Permutation) -> int:
        try:
            return self.index[p.key()]
        except KeyError:
            raise ValidationError(f"element {p.cycle_string()} not in this group")

    def elem(self, i: int) -> Permutation:
        return self.elements[i]

    def multiply(self, a: int, b: int) -> int:
        return self.mult_flat[a * self.size + b]

    def invert(self, a: int) -> int:
        return self.inv[a]

    def generated_indices(self, sources: Sequence[int]) -> set[int]:
        """Index set of the subgroup generated by the given element indices."""
        seen = {0}
        frontier = [0]
        size = self.size
        mf = self.mult_flat
        while frontier:
            new_frontier = []
            for a in frontier:
                base = a * size
                for s in sources:
                    b = mf[base + s]
                    if b not in seen:
                        seen.add(b)
                        new_frontier.append(b)
            frontier = new_frontier
        return seen

    def generates(self, sources: Sequence[int]) -> bool:
        return len(self.generated_indices(sources)) == self.size

    def small_generating_subset(self, sources: Sequence[int]) -> list[int]:
        """A short prefix-greedy subset of `sources` generating the same group."""
        target = self.generated_indices(sources)
        chosen: list[int] = []
        for s in sources:
            if s in chosen:
                continue
            chosen.append(s)
            if len(self.generated_indices(chosen)) == len(target):
                return chosen
        return chosen


def conjugacy_class_reps(table: TableGroup) -> list[int]:
    """One index per conjugacy class, smallest index first."""
    seen: set[int] = set()
    reps = []
    for a in range(table.size):
        if a in seen:
            continue
        reps.append(a)
        for c in orbit(
            a,
            table.gen_indices,
            lambda p, s: table.multiply(table.multiply(table.invert(s), p), s),
        ):
            seen.add(c)
    return reps


def normal_closure_is_whole(table: TableGroup, a: int) -> bool:
    """True iff the normal closure of element index `a` is the whole group."""
    conj_class = orbit(
        a,
        table.gen_indices,
        lambda p, s: table.multiply(table.multiply(table.invert(s), p), s),
    )
    return len(table.generated_indices(conj_class)) == table.size


def is_nonabelian_simple(table: TableGroup) -> bool:
    """Exact simplicity check: every nontrivial class normally generates G."""
    gens = table.gen_indices
    nonabelian = any(
        table.multiply(a, b) != table.multiply(b, a) for a in gens for b in gens
    )
    if not nonabelian:
        return False
    for rep in conjugacy_class_reps(table):
        if rep == 0:
            continue
        if not normal_closure_is_whole(table, rep):
            return False
    return True


# ---------------------------------------------------------------------------
# automorphism maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AutomorphismMap:
    """An automorphism of a group T, in one of two exact representations.

    Table-backed: `lookup[i]` is the image index of element i over a
    TableGroup enumeration. Conjugation-backed: the map is t -> t^conjugator
    for a Permutation normalizing T (used for natural alternating groups,
    where every automorphism is induced this way).
    """

    table: Optional[TableGroup] = None
    lookup: Optional[tuple[int, ...]] = None
    conjugator: Optional[Permutation] = None

    def apply_index(self, i: int) -> int:
        if self.lookup is None:
            raise InternalCheckError("not a table-backed automorphism")
        return self.lookup[i]

    def apply(self, t: Permutation) -> Permutation:
        if self.conjugator is not None:
            return t.conjugate(self.conjugator)
        return self.table.elem(self.lookup[self.table.idx(t)])

    def lookup_array(self) -> np.ndarray:
        return np.asarray(self.lookup, dtype=np.int32)

    def is_multiplicative_sample(self, rng, samples: int = 200) -> bool:
        t = self.table
        if t is None:
            return True
        for _ in range(samples):
            a = rng.randrange(t.size)
            b = rng.randrange(t.size)
            if self.lookup[t.multiply(a, b)] != t.multiply(self.lookup[a], self.lookup[b]):
                return False
        return True


def extend_to_automorphism(
    table: TableGroup, sources: Sequence[int], targets: Sequence[int]
) -> Optional[AutomorphismMap]:
    """The unique automorphism of T with sources[j] -> targets[j], or None.

    Requires `sources` to generate T (ValidationError otherwise). The image
    of every element is forced by propagation along the Cayley graph from
    phi(identity) = identity; edge consistency on all |T| * len(sources)
    edges plus bijectivity is equivalent to full multiplicativity.
    """
    if len(sources) != len(targets):
        raise ValidationError("sources and targets must have equal length")
    if not table.generates(sources):
        raise ValidationError("sources do not generate the group")
    size = table.size
    mf = table.mult_flat
    lookup = [-1] * size
    lookup[0] = 0
    frontier = [0]
    while frontier:
        new_frontier = []
        for a in frontier:
            fa = lookup[a]
            base = a * size
            fbase = fa * size
            for s, t in zip(sources, targets):
                b = mf[base + s]
                fb = mf[fbase + t]
                if lookup[b] == -1:
                    lookup[b] = fb
                    new_frontier.append(b)
                elif lookup[b] != fb:
                    return None
        frontier = new_frontier
    if -1 in lookup or len(set(lookup)) != size:
        return None
    return AutomorphismMap(table=table, lookup=tuple(lookup))


def conjugating_permutations(
    sources: Sequence[Permutation], targets: Sequence[Permutation], degree: int
) -> list[Permutation]:
    """All b in Sym(degree) with sources[j]^b = targets[j] for every j.

    Exact search by constraint propagation: fixing b(1) forces b along the
    orbit of 1 under <sources> (which must be transitive). Every candidate is
    verified in full before being returned.
    """
    if len(sources) != len(targets):
        raise ValidationError("sources and targets must have equal length")
    if len(orbit(1, sources, _point_action)) != degree:
        raise ValidationError("sources must act transitively for the conjugator search")
    out = []
    for first in range(1, degree + 1):
        images = [0] * (degree + 1)
        images[1] = first
        frontier = [1]
        ok = True
        assigned = 1
        while frontier and ok:
            new_frontier = []
            for i in frontier:
                for s, t in zip(sources, targets):
                    j = s.apply(i)
                    forced = t.apply(images[i])
                    if images[j] == 0:
                        images[j] = forced
                        assigned += 1
                        new_frontier.append(j)
                    elif images[j] != forced:
                        ok = False
                        break
                if not ok:
                    break
            frontier = new_frontier
        if not ok or assigned != degree:
            continue
        body = images[1:]
        if sorted(body) != list(range(1, degree + 1)):
            continue
        b = Permutation(body)
        if all(s.conjugate(b) == t for s, t in zip(sources, targets)):
            out.append(b)
    return out


def is_natural_alternating(group: PermGroup) -> bool:
    """True iff the group is A_p in its natural degree-p action, p >= 5, p != 6.

    For these, every abstract automorphism is conjugation by an element of
    S_p, and distinct conjugators induce distinct automorphisms.
    """
    p = group.degree
    if p < 5 or p == 6:
        return False
    if not group.is_transitive():
        return False
    for g in group.generators:
        even = sum(len(c) - 1 for c in g.cycles()) % 2 == 0
        if not even:
            return False
    return group.order() == math.factorial(p) // 2
