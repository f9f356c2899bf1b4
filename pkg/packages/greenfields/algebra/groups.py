"""
Finite groups as permutation groups.

Elements are tuples of point images; ``mul(a, b)`` applies ``b`` first, then
``a``. Every group is fully enumerated on first demand and keeps its derived
data (conjugacy classes, the subgroup lattice and its conjugacy classes) in
per-instance caches that are filled once and then only read.

Direct products act on disjoint point sets, so an element of ``G x H`` is the
concatenation of a ``G``-tuple and a shifted ``H``-tuple. Subgroups realized
with ``subgroup_group`` share their elements with the parent group.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import re
import threading
from dataclasses import dataclass
from typing import Callable, Iterable

import structlog
from sympy.combinatorics import Permutation, PermutationGroup

from algebra.errors import BoundExceededError, CatalogError, GroupStructureError
from dependencies import get_settings

logger = structlog.get_logger()

Perm = tuple[int, ...]

_registry: dict[str, "Group"] = {}
_registry_lock = threading.Lock()
_CATALOG_LABEL = re.compile(r"(?:C\d+|D\d+|Q8|S\d|A4)(?:x(?:C\d+|D\d+|Q8|S\d|A4))*")


def perm_mul(a: Perm, b: Perm) -> Perm:
    return tuple(a[i] for i in b)


def perm_inv(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def _digest(elements: Iterable[Perm]) -> str:
    h = hashlib.sha1(repr(sorted(elements)).encode()).hexdigest()
    return h[:8]


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Perm
    elements: frozenset
    size: int
    element_order: int


@dataclass(frozen=True)
class SubgroupClass:
    """A conjugacy class of subgroups, with its canonical representative."""

    index: int
    representative: frozenset
    generators: tuple
    class_size: int
    order: int
    conjugates: frozenset
    name: str

    def __repr__(self):
        return f"SubgroupClass({self.name}, order={self.order}, size={self.class_size})"


class Group:
    """A finite permutation group."""

    def __init__(
        self,
        label: str,
        degree: int,
        generators: Iterable[Perm],
        *,
        order: int | None = None,
        factors: tuple["Group", "Group"] | None = None,
        parent: "Group | None" = None,
        elements: frozenset | None = None,
    ):
        self.label = label
        self.degree = degree
        self.identity: Perm = tuple(range(degree))
        self.generators: tuple[Perm, ...] = tuple(
            g for g in generators if g != self.identity
        )
        self.factors = factors
        self.parent = parent
        self._order_hint = order
        self._elements = elements
        self._lock = threading.RLock()
        self._cache: dict[str, object] = {}

    # -- enumeration -----------------------------------------------------------
    def _cached(self, key: str, build: Callable[[], object]):
        value = self._cache.get(key)
        if value is None:
            with self._lock:
                value = self._cache.get(key)
                if value is None:
                    value = build()
                    self._cache[key] = value
        return value

    @property
    def elements(self) -> frozenset:
        if self._elements is None:
            with self._lock:
                if self._elements is None:
                    bound = get_settings().intermediate_bound
                    if self._order_hint is not None and self._order_hint > bound:
                        raise BoundExceededError(self.label, self._order_hint, bound)
                    self._elements = self.closure(self.generators, limit=bound)
        return self._elements

    @property
    def sorted_elements(self) -> list[Perm]:
        return self._cached("sorted", lambda: sorted(self.elements))

    @property
    def order(self) -> int:
        if self._elements is None and self._order_hint is not None:
            return self._order_hint
        return len(self.elements)

    @property
    def permutation_group(self) -> PermutationGroup:
        return self._cached("sympy", lambda: _sympy_group(self.generators, self.degree))

    def closure(self, gens: Iterable[Perm], limit: int | None = None) -> frozenset:
        """Elements of the subgroup generated by ``gens`` (Schreier-Sims)."""
        group = _sympy_group(gens, self.degree)
        order = int(group.order())
        if limit is not None and order > limit:
            raise BoundExceededError(self.label, order, limit)
        return frozenset(tuple(p) for p in group.generate(af=True))

    def mul(self, a: Perm, b: Perm) -> Perm:
        return perm_mul(a, b)

    def inv(self, a: Perm) -> Perm:
        return perm_inv(a)

    def conjugate(self, g: Perm, x: Perm) -> Perm:
        """g x g^-1"""
        return perm_mul(perm_mul(g, x), perm_inv(g))

    def __contains__(self, el: Perm) -> bool:
        return el in self.elements

    def element_order(self, el: Perm) -> int:
        return int(Permutation(list(el)).order())

    def power(self, el: Perm, k: int) -> Perm:
        return tuple((Permutation(list(el)) ** k).array_form)

    @property
    def exponent(self) -> int:
        def build():
            e = 1
            for cls in self.conjugacy_classes():
                e = e * cls.element_order // math.gcd(e, cls.element_order)
            return e

        return self._cached("exponent", build)

    @property
    def is_abelian(self) -> bool:
        return all(
            perm_mul(a, b) == perm_mul(b, a) for a in self.generators for b in self.generators
        )

    @property
    def is_catalog(self) -> bool:
        """Catalog-shaped labels determine the realization, so they key the disk cache."""
        return _CATALOG_LABEL.fullmatch(self.label) is not None

    def is_trivial(self) -> bool:
        return self.order == 1

    def __repr__(self):
        return f"Group({self.label}, order={self.order})"

    # -- products ----------------------------------------------------------------
    def split(self, el: Perm) -> tuple[Perm, Perm]:
        if self.factors is None:
            raise GroupStructureError(f"{self.label} is not a direct product")
        d = self.factors[0].degree
        return el[:d], tuple(x - d for x in el[d:])

    def join(self, a: Perm, b: Perm) -> Perm:
        if self.factors is None:
            raise GroupStructureError(f"{self.label} is not a direct product")
        d = self.factors[0].degree
        return a + tuple(x + d for x in b)

    def product_subset(self, A: Iterable[Perm], B: Iterable[Perm]) -> frozenset:
        B = list(B)
        return frozenset(self.join(a, b) for a in A for b in B)

    # -- subgroups -----------------------------------------------------------------
    def subgroup_group(self, elements: Iterable[Perm], label: str | None = None) -> "Group":
        """Realize a subgroup (given by its elements) as a group on the same points."""
        elements = frozenset(elements)
        if not elements <= self.elements:
            raise GroupStructureError(f"elements are not contained in {self.label}")
        if elements == self.elements and label is None:
            return self
        label = label or f"{self.label}[{_digest(elements)}]"
        with _registry_lock:
            existing = _registry.get(label)
            if existing is not None:
                return existing
        gens = _small_generating_set(self, elements)
        if self.closure(gens) != elements:
            raise GroupStructureError(f"{sorted(elements)[:3]}... is not a subgroup of {self.label}")
        return register(
            Group(label, self.degree, gens, parent=self, elements=elements, order=len(elements))
        )

    def is_subgroup(self, elements: Iterable[Perm]) -> bool:
        elements = frozenset(elements)
        if self.identity not in elements or not elements <= self.elements:
            return False
        return all(perm_mul(a, b) in elements for a in elements for b in elements)

    def is_normal(self, N: Iterable[Perm]) -> bool:
        N = frozenset(N)
        return all(self.conjugate(g, n) in N for g in self.generators for n in N)

    def conjugacy_classes(self) -> list[ConjugacyClass]:
        """Element classes, identity first, then by (element order, least element)."""

        def build():
            classes = []
            for cls in self.permutation_group.conjugacy_classes():
                orbit = frozenset(tuple(p.array_form) for p in cls)
                rep = min(orbit)
                classes.append(ConjugacyClass(rep, orbit, len(orbit), self.element_order(rep)))
            classes.sort(key=lambda c: (c.element_order, c.representative))
            return classes

        return self._cached("classes", build)

    def class_index(self, el: Perm) -> int:
        def build():
            return {x: i for i, c in enumerate(self.conjugacy_classes()) for x in c.elements}

        return self._cached("class_index", build)[el]

    def all_subgroups(self) -> dict[frozenset, tuple]:
        """Every subgroup, mapped to a generating tuple (cyclic extension)."""
        self.require_lattice_bound()

        def build():
            cyclic: dict[frozenset, tuple] = {}
            for g in self.sorted_elements:
                Z = self.closure([g])
                cyclic.setdefault(Z, (g,))
            found = dict(cyclic)
            frontier = list(found)
            while frontier:
                nxt = []
                for A in frontier:
                    for Z, zgens in cyclic.items():
                        if Z <= A:
                            continue
                        J = self.closure(found[A] + zgens)
                        if J not in found:
                            found[J] = found[A] + zgens
                            nxt.append(J)
                frontier = nxt
            logger.debug("Enumerated subgroups", group=self.label, count=len(found))
            return found

        return self._cached("subgroups", build)

    def require_lattice_bound(self):
        bound = get_settings().enumeration_bound
        if self.order > bound:
            raise BoundExceededError(self.label, self.order, bound)

    def subgroup_classes(self) -> list[SubgroupClass]:
        """Conjugacy classes of subgroups, canonically ordered."""

        self.require_lattice_bound()

        def encode(classes):
            return [[sorted(map(list, c.representative)), list(map(list, c.generators))]
                    for c in classes]

        def decode(payload):
            return self.build_subgroup_classes_from(
                [(frozenset(map(tuple, rep)), tuple(map(tuple, gens))) for rep, gens in payload]
            )

        def build():
            from dependencies import get_cache_store

            return get_cache_store().get_or_build(
                self.label, "lattice", self._build_subgroup_classes, encode, decode,
                persist=self.is_catalog,
            )

        return self._cached("subgroup_classes", build)

    def _build_subgroup_classes(self) -> list[SubgroupClass]:
        subgroups = self.all_subgroups()
        assigned: set[frozenset] = set()
        raw = []
        for A in sorted(subgroups, key=lambda s: (len(s), sorted(s))):
            if A in assigned:
                continue
            conj = frozenset(
                frozenset(self.conjugate(g, a) for a in A) for g in self.elements
            )
            assigned |= conj
            rep = min(conj, key=lambda s: sorted(s))
            orders = tuple(sorted(self.element_order(a) for a in rep))
            raw.append(((len(rep), orders, sorted(rep)), rep, conj))
        raw.sort(key=lambda t: t[0])
        classes = []
        last = len(raw) - 1
        for i, (_, rep, conj) in enumerate(raw):
            if len(rep) == 1:
                name = "1"
            elif i == last:
                name = self.label
            else:
                name = f"H{i}_{len(rep)}"
            gens = subgroups.get(rep) or _small_generating_set(self, rep)
            classes.append(SubgroupClass(i, rep, tuple(gens), len(conj), len(rep), conj, name))
        return classes

    def build_subgroup_classes_from(self, reps: list[tuple[frozenset, tuple]]) -> list[SubgroupClass]:
        """Rebuild classes from stored canonical representatives (cache path)."""
        classes = []
        last = len(reps) - 1
        for i, (rep, gens) in enumerate(reps):
            conj = frozenset(
                frozenset(self.conjugate(g, a) for a in rep) for g in self.elements
            )
            name = "1" if len(rep) == 1 else (self.label if i == last else f"H{i}_{len(rep)}")
            classes.append(SubgroupClass(i, rep, tuple(gens), len(conj), len(rep), conj, name))
        return classes

    def subgroup_class_index(self, subgroup: Iterable[Perm]) -> int:
        def build():
            return {c: cls.index for cls in self.subgroup_classes() for c in cls.conjugates}

        lookup = self._cached("subgroup_lookup", build)
        key = frozenset(subgroup)
        try:
            return lookup[key]
        except KeyError:
            raise GroupStructureError(f"not a subgroup of {self.label}") from None


def _sympy_group(gens: Iterable[Perm], degree: int) -> PermutationGroup:
    perms = [Permutation(list(g)) for g in gens]
    return PermutationGroup(perms or [Permutation(size=degree)])


def _small_generating_set(G: Group, elements: frozenset) -> tuple:
    gens: list[Perm] = []
    current = frozenset([G.identity])
    for x in sorted(elements, key=lambda e: (-G.element_order(e), e)):
        if x not in current:
            gens.append(x)
            current = G.closure(gens)
            if current == elements:
                break
    return tuple(gens)


def register(group: Group) -> Group:
    with _registry_lock:
        existing = _registry.get(group.label)
        if existing is not None:
            return existing
        _registry[group.label] = group
        return group


def clear_registry():
    with _registry_lock:
        _registry.clear()


# -- homomorphisms ------------------------------------------------------------


class GroupHom:
    """A homomorphism given by a function on elements."""

    KINDS = ("inclusion", "projection", "isomorphism", "homomorphism")

    def __init__(self, source: Group, target: Group, mapping: Callable[[Perm], Perm],
                 kind: str = "homomorphism", name: str = ""):
        if kind not in self.KINDS:
            raise GroupStructureError(f"unknown homomorphism kind {kind!r}")
        self.source = source
        self.target = target
        self._mapping = mapping
        self.kind = kind
        self.name = name or f"{source.label}->{target.label}"
        self._table: dict[Perm, Perm] = {}

    def __call__(self, el: Perm) -> Perm:
        img = self._table.get(el)
        if img is None:
            img = self._mapping(el)
            self._table[el] = img
        return img

    @property
    def images(self) -> dict[Perm, Perm]:
        return {g: self(g) for g in self.source.generators}

    def image(self, subset: Iterable[Perm]) -> frozenset:
        return frozenset(self(x) for x in subset)

    def preimage(self, subset: Iterable[Perm]) -> frozenset:
        subset = frozenset(subset)
        return frozenset(x for x in self.source.elements if self(x) in subset)

    def kernel(self) -> frozenset:
        return self.preimage([self.target.identity])

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self after inner"""
        if inner.target is not self.source:
            raise GroupStructureError(
                f"cannot compose {self.name} after {inner.name}: endpoints differ"
            )
        kinds = {self.kind, inner.kind}
        kind = kinds.pop() if len(kinds) == 1 else "homomorphism"
        return GroupHom(inner.source, self.target, lambda x: self(inner(x)), kind)

    def inverse(self) -> "GroupHom":
        if self.kind != "isomorphism":
            raise GroupStructureError(f"{self.name} is not an isomorphism")
        table = {self(x): x for x in self.source.elements}
        return GroupHom(self.target, self.source, table.__getitem__, "isomorphism",
                        f"({self.name})^-1")

    def verify(self) -> None:
        """Check the homomorphism property and that ``kind`` matches."""
        S = self.source
        for x in S.generators:
            for y in S.elements:
                if self(perm_mul(x, y)) != perm_mul(self(x), self(y)):
                    raise GroupStructureError(f"{self.name} is not a homomorphism")
        for x in S.elements:
            if self(x) not in self.target.elements:
                raise GroupStructureError(f"{self.name} leaves its target group")
        injective = len(self.kernel()) == 1
        surjective = len(self.image(S.elements)) == self.target.order
        expected = {
            "inclusion": (True, None),
            "projection": (None, True),
            "isomorphism": (True, True),
            "homomorphism": (None, None),
        }[self.kind]
        if (expected[0] is not None and expected[0] != injective) or (
            expected[1] is not None and expected[1] != surjective
        ):
            raise GroupStructureError(
                f"{self.name} declared {self.kind} but injective={injective}, "
                f"surjective={surjective}"
            )

    def times(self, other: "GroupHom") -> "GroupHom":
        """phi x psi : G x H -> G' x H'"""
        src = product(self.source, other.source)
        tgt = product(self.target, other.target)
        kind = self.kind if self.kind == other.kind else "homomorphism"

        def mapping(el):
            a, b = src.split(el)
            return tgt.join(self(a), other(b))

        return GroupHom(src, tgt, mapping, kind, f"{self.name}x{other.name}")

    def __repr__(self):
        return f"GroupHom({self.name}, {self.kind})"


def identity_hom(G: Group) -> GroupHom:
    return GroupHom(G, G, lambda x: x, "isomorphism", f"id_{G.label}")


def inclusion(H: Group, G: Group) -> GroupHom:
    if not H.elements <= G.elements:
        raise GroupStructureError(f"{H.label} is not contained in {G.label}")
    return GroupHom(H, G, lambda x: x, "inclusion", f"{H.label}<{G.label}")


# -- catalog ------------------------------------------------------------------


def _cycle(n: int) -> Perm:
    return tuple((i + 1) % n for i in range(n))


def _cyclic(n: int) -> Group:
    if n == 1:
        return Group("C1", 1, [], order=1)
    return Group(f"C{n}", n, [_cycle(n)], order=n)


def _dihedral(m: int) -> Group:
    if m % 2 or m < 2:
        raise CatalogError(f"dihedral groups are written D<2n>, got D{m}")
    n = m // 2
    if n <= 2:
        # D2 = C2 and D4 = C2xC2 have no faithful action on n points
        return _regular(f"D{m}", _cyclic(2) if n == 1 else _product_plain(_cyclic(2), _cyclic(2)))
    rot = _cycle(n)
    refl = tuple((-i) % n for i in range(n))
    return Group(f"D{m}", n, [rot, refl], order=m)


def _quaternion() -> Group:
    # units 1, i, j, k with signs; element index = 4 * sign + unit
    table = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }

    def mult(x: int, y: int) -> int:
        sx, ux = divmod(x, 4)
        sy, uy = divmod(y, 4)
        s, u = table[(ux, uy)]
        return 4 * ((sx + sy + s) % 2) + u

    def left(x: int) -> Perm:
        return tuple(mult(x, y) for y in range(8))

    return Group("Q8", 8, [left(1), left(2)], order=8)


def _symmetric(n: int) -> Group:
    if n == 1:
        return Group("S1", 1, [], order=1)
    if n == 2:
        return Group("S2", 2, [(1, 0)], order=2)
    transposition = (1, 0) + tuple(range(2, n))
    return Group(f"S{n}", n, [transposition, _cycle(n)], order=math.factorial(n))


def _alternating4() -> Group:
    return Group("A4", 4, [(1, 2, 0, 3), (1, 0, 3, 2)], order=12)


def _regular(label: str, G: Group) -> Group:
    elems = G.sorted_elements
    index = {g: i for i, g in enumerate(elems)}
    gens = [tuple(index[perm_mul(g, x)] for x in elems) for g in G.generators]
    return Group(label, len(elems), gens, order=len(elems))


def _product_plain(G: Group, H: Group, label: str | None = None) -> Group:
    d = G.degree
    shift = lambda h: tuple(x + d for x in h)  # noqa: E731
    gens = [g + shift(H.identity) for g in G.generators] + [
        G.identity + shift(h) for h in H.generators
    ]
    order = G.order * H.order
    hlabel = f"({H.label})" if "x" in H.label else H.label
    return Group(label or f"{G.label}x{hlabel}", d + H.degree, gens, order=order,
                 factors=(G, H))


_ATOM = re.compile(r"C(\d+)|D(\d+)|Q8|S(\d+)|A4")


def _make_atom(token: str) -> Group:
    m = _ATOM.fullmatch(token)
    if not m:
        raise CatalogError(f"unknown catalog token {token!r}")
    if m.group(1):
        n = int(m.group(1))
        if n < 1:
            raise CatalogError("C0 is not a group")
        return _cyclic(n)
    if m.group(2):
        return _dihedral(int(m.group(2)))
    if token == "Q8":
        return _quaternion()
    if m.group(3):
        n = int(m.group(3))
        if n > 4 or n < 1:
            raise CatalogError(f"symmetric groups are limited to S1..S4, got S{n}")
        return _symmetric(n)
    return _alternating4()


def make_group(spec: str) -> Group:
    """Build a catalog group: ``C<n>``, ``D<2n>``, ``Q8``, ``S<n<=4>``, ``A4``, joined by ``x``."""
    if not spec or spec != spec.strip() or " " in spec:
        raise CatalogError(f"catalog specs are whitespace-free, got {spec!r}")
    with _registry_lock:
        existing = _registry.get(spec)
    if existing is not None:
        return existing
    tokens = spec.split("x")
    bound = get_settings().enumeration_bound
    group = register(_make_atom(tokens[0]))
    for token in tokens[1:]:
        group = direct_product(group, register(_make_atom(token)), bound=bound)[0]
    if group.order > bound:
        raise BoundExceededError(spec, group.order, bound)
    logger.debug("Built catalog group", spec=spec, order=group.order, degree=group.degree)
    return group


def trivial_group() -> Group:
    return make_group("C1")


def direct_product(G: Group, H: Group, bound: int | None = None):
    """``(G x H, (embed_G, embed_H), (proj_G, proj_H))`` on disjoint point sets."""
    bound = bound if bound is not None else get_settings().intermediate_bound
    order = G.order * H.order
    if order > bound:
        hlabel = f"({H.label})" if "x" in H.label else H.label
        raise BoundExceededError(f"{G.label}x{hlabel}", order, bound)
    P = register(_product_plain(G, H))
    embeddings = (
        GroupHom(G, P, lambda g: P.join(g, H.identity), "inclusion", f"{G.label}->{P.label}"),
        GroupHom(H, P, lambda h: P.join(G.identity, h), "inclusion", f"{H.label}->{P.label}"),
    )
    projections = (
        GroupHom(P, G, lambda x: P.split(x)[0], "projection", f"{P.label}->{G.label}"),
        GroupHom(P, H, lambda x: P.split(x)[1], "projection", f"{P.label}->{H.label}"),
    )
    return P, embeddings, projections


def product(G: Group, H: Group) -> Group:
    return direct_product(G, H)[0]


def diagonal_subgroup(G: Group) -> tuple[Group, GroupHom]:
    """Delta(G) inside G x G, with its isomorphism onto G."""
    P = product(G, G)
    D = P.subgroup_group((P.join(g, g) for g in G.elements), label=f"D({G.label})")
    return D, GroupHom(D, G, lambda x: P.split(x)[0], "isomorphism", f"D({G.label})->{G.label}")


def swap(G: Group, H: Group) -> GroupHom:
    """G x H -> H x G, (g, h) -> (h, g)"""
    src, tgt = product(G, H), product(H, G)

    def mapping(el):
        a, b = src.split(el)
        return tgt.join(b, a)

    return GroupHom(src, tgt, mapping, "isomorphism", f"swap({G.label},{H.label})")


def unit_left(G: Group) -> GroupHom:
    """1 x G -> G"""
    src = product(trivial_group(), G)
    return GroupHom(src, G, lambda el: src.split(el)[1], "isomorphism", f"1x{G.label}->{G.label}")


def unit_right(G: Group) -> GroupHom:
    """G x 1 -> G"""
    src = product(G, trivial_group())
    return GroupHom(src, G, lambda el: src.split(el)[0], "isomorphism", f"{G.label}x1->{G.label}")


def reassociate(G: Group, H: Group, K: Group) -> GroupHom:
    """(G x H) x K -> G x (H x K); the identity on point tuples."""
    src = product(product(G, H), K)
    tgt = product(G, product(H, K))
    return GroupHom(src, tgt, lambda el: el, "isomorphism", "reassociate")


def quotient_group(G: Group, N: Iterable[Perm]) -> tuple[Group, GroupHom]:
    """G/N acting on the cosets of N, with the projection G -> G/N."""
    N = frozenset(N)
    if not G.is_subgroup(N):
        raise GroupStructureError(f"not a subgroup of {G.label}")
    if not G.is_normal(N):
        raise GroupStructureError(f"subgroup is not normal in {G.label}")
    coset_of: dict[Perm, int] = {}
    reps: list[Perm] = []
    for g in G.sorted_elements:
        if g in coset_of:
            continue
        idx = len(reps)
        reps.append(g)
        for n in N:
            coset_of[perm_mul(g, n)] = idx

    def action(g: Perm) -> Perm:
        return tuple(coset_of[perm_mul(g, r)] for r in reps)

    label = f"{G.label}/{_digest(N)}" if len(N) < G.order else f"{G.label}/{G.label}"
    Q = Group(label, len(reps), [action(g) for g in G.generators], order=len(reps))
    Q = register(Q)
    return Q, GroupHom(G, Q, action, "projection", f"{G.label}->{Q.label}")


def trivial_hom(G: Group) -> GroupHom:
    """G -> 1"""
    one = trivial_group()
    return GroupHom(G, one, lambda el: one.identity, "projection", f"{G.label}->1")


def count_subgroups_by_generating_sets(G: Group) -> int:
    """Brute-force oracle: close every subset of at most log2|G| elements."""
    k = max(1, int(math.log2(G.order))) if G.order > 1 else 1
    found = set()
    elems = G.sorted_elements
    for size in range(0, k + 1):
        for subset in itertools.combinations(elems, size):
            found.add(G.closure(subset))
    return len(found)
