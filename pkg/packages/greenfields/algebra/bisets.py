"""
Elemental bisets, formal words over them, and their concrete realizations.

A word lists its factors in application order: ``factors[0]`` acts first.
Words are never rewritten; functor instances interpret them one factor at a
time and ``realize`` turns them into explicit finite bisets for cross-checks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

import structlog

from algebra.errors import GroupStructureError, SpecSyntaxError
from algebra.groups import (
    Group,
    GroupHom,
    make_group,
    perm_inv,
    perm_mul,
    quotient_group,
    swap,
    trivial_group,
)

logger = structlog.get_logger()

KINDS = ("Ind", "Res", "Inf", "Def", "Iso")


@dataclass(frozen=True, eq=False)
class Elemental:
    """One elemental biset from ``source`` to ``target``.

    ``hom`` is the surjection ``target -> source`` for Inf, the surjection
    ``source -> target`` for Def, and the isomorphism for Iso.
    """

    kind: str
    source: Group
    target: Group
    hom: GroupHom | None = None

    def __str__(self):
        if self.kind == "Ind":
            return f"Ind[{self.source.label}<{self.target.label}]"
        if self.kind == "Res":
            return f"Res[{self.target.label}<{self.source.label}]"
        if self.kind == "Inf":
            return f"Inf[{self.target.label}/{self.source.label}]"
        if self.kind == "Def":
            return f"Def[{self.source.label}/{self.target.label}]"
        return f"Iso[{self.hom.name}]"


def ind(H: Group, G: Group) -> Elemental:
    if not H.elements <= G.elements:
        raise GroupStructureError(f"{H.label} is not a subgroup of {G.label}")
    return Elemental("Ind", H, G)


def res(G: Group, H: Group) -> Elemental:
    if not H.elements <= G.elements:
        raise GroupStructureError(f"{H.label} is not a subgroup of {G.label}")
    return Elemental("Res", G, H)


def inf(pi: GroupHom) -> Elemental:
    """Inflation from ``pi.target`` up to ``pi.source``."""
    return Elemental("Inf", pi.target, pi.source, pi)


def deflate(pi: GroupHom) -> Elemental:
    """Deflation from ``pi.source`` down to ``pi.target``."""
    return Elemental("Def", pi.source, pi.target, pi)


def iso(phi: GroupHom) -> Elemental:
    return Elemental("Iso", phi.source, phi.target, phi)


def elemental(kind: str, *data) -> "BisetWord":
    """Validated single-factor word.

    ``Ind``/``Res`` take ``(H, G)`` and ``(G, H)``; ``Inf``/``Def`` take a
    surjective ``GroupHom``; ``Iso`` takes an isomorphism.
    """
    if kind in ("Ind", "Res"):
        first, second = data
        e = ind(first, second) if kind == "Ind" else res(first, second)
        return BisetWord(e.source, e.target, (e,))
    if kind not in KINDS:
        raise SpecSyntaxError(f"unknown elemental kind {kind!r}")
    (hom,) = data
    hom.verify()
    if kind in ("Inf", "Def"):
        if len(hom.image(hom.source.elements)) != hom.target.order:
            raise GroupStructureError(f"{hom.name} is not surjective")
        e = inf(hom) if kind == "Inf" else deflate(hom)
    else:
        if hom.kind != "isomorphism":
            raise GroupStructureError(f"{hom.name} is not an isomorphism")
        e = iso(hom)
    return BisetWord(e.source, e.target, (e,))


@dataclass(frozen=True)
class BisetWord:
    source: Group
    target: Group
    factors: tuple = ()

    def __post_init__(self):
        current = self.source
        for f in self.factors:
            if f.source is not current:
                raise GroupStructureError(
                    f"factor {f} starts at {f.source.label}, expected {current.label}"
                )
            current = f.target
        if current is not self.target:
            raise GroupStructureError(
                f"word ends at {current.label}, declared target {self.target.label}"
            )

    @classmethod
    def identity(cls, G: Group) -> "BisetWord":
        return cls(G, G, ())

    @classmethod
    def of(cls, *factors: Elemental) -> "BisetWord":
        return cls(factors[0].source, factors[-1].target, tuple(factors))

    def __len__(self):
        return len(self.factors)

    def __str__(self):
        return ";".join(str(f) for f in self.factors) or f"id[{self.source.label}]"


def concatenate(w1: BisetWord, w2: BisetWord) -> BisetWord:
    """The composite ``w1 o w2``: ``w2`` acts first."""
    if w2.target is not w1.source:
        raise GroupStructureError(
            f"cannot compose: {w2.target.label} is not {w1.source.label}"
        )
    return BisetWord(w2.source, w1.target, w2.factors + w1.factors)


# -- concrete bisets ---------------------------------------------------------------


class ConcreteBiset:
    """A finite (left, right)-biset given by its points and two actions."""

    def __init__(
        self,
        left: Group,
        right: Group,
        points: Sequence[Hashable],
        left_action: Callable,
        right_action: Callable,
    ):
        self.left = left
        self.right = right
        self.points = list(points)
        self.index = {p: i for i, p in enumerate(self.points)}
        self._left_action = left_action
        self._right_action = right_action

    def __len__(self):
        return len(self.points)

    def left_act(self, h, p):
        return self._left_action(h, p)

    def right_act(self, p, g):
        return self._right_action(p, g)

    def verify(self) -> None:
        """Closure, action axioms on generators, and commuting actions."""
        for p in self.points:
            if self.left_act(self.left.identity, p) != p or self.right_act(p, self.right.identity) != p:
                raise GroupStructureError("identity does not act trivially")
            for h in self.left.generators:
                hp = self.left_act(h, p)
                if hp not in self.index:
                    raise GroupStructureError("left action leaves the point set")
                for g in self.right.generators:
                    if self.right_act(hp, g) != self.left_act(h, self.right_act(p, g)):
                        raise GroupStructureError("left and right actions do not commute")
            for g in self.right.generators:
                if self.right_act(p, g) not in self.index:
                    raise GroupStructureError("right action leaves the point set")

    def left_orbits(self) -> list[list]:
        seen: set = set()
        orbits = []
        for p in self.points:
            if p in seen:
                continue
            orbit = [p]
            seen.add(p)
            for x in orbit:
                for h in self.left.generators:
                    y = self.left_act(h, x)
                    if y not in seen:
                        seen.add(y)
                        orbit.append(y)
            orbits.append(orbit)
        return orbits

    def left_stabilizer(self, p) -> frozenset:
        return frozenset(h for h in self.left.elements if self.left_act(h, p) == p)

    def orbit_data(self) -> tuple:
        """Isomorphism invariant: orbits of ``left x right`` with their stabilizer shapes."""
        data = []
        seen: set = set()
        for p in self.points:
            if p in seen:
                continue
            orbit = {self.right_act(self.left_act(h, p), perm_inv(g))
                     for h in self.left.elements for g in self.right.elements}
            seen |= orbit
            stab_orders = sorted(
                (self.left.element_order(h), self.right.element_order(g))
                for h in self.left.elements
                for g in self.right.elements
                if self.right_act(self.left_act(h, p), perm_inv(g)) == p
            )
            data.append((len(orbit), tuple(stab_orders)))
        return tuple(sorted(data))


def _coset_rep(G: Group, x, A: frozenset):
    return min(perm_mul(x, a) for a in A)


def gset_from_subgroup(G: Group, A: frozenset) -> ConcreteBiset:
    """The transitive G-set G/A as a (G, 1)-biset."""
    A = frozenset(A)
    points = sorted({_coset_rep(G, g, A) for g in G.elements})
    return ConcreteBiset(
        G,
        trivial_group(),
        points,
        lambda g, p: _coset_rep(G, perm_mul(g, p), A),
        lambda p, _: p,
    )


def realize_elemental(e: Elemental) -> ConcreteBiset:
    """The (target, source)-biset of one elemental factor."""
    if e.kind == "Ind":
        G = e.target
        return ConcreteBiset(G, e.source, G.sorted_elements, perm_mul, perm_mul)
    if e.kind == "Res":
        G = e.source
        return ConcreteBiset(e.target, G, G.sorted_elements, perm_mul, perm_mul)
    if e.kind == "Inf":
        pi = e.hom
        Q = e.source
        return ConcreteBiset(
            e.target, Q, Q.sorted_elements, lambda g, q: perm_mul(pi(g), q), perm_mul
        )
    if e.kind == "Def":
        pi = e.hom
        Q = e.target
        return ConcreteBiset(
            Q, e.source, Q.sorted_elements, perm_mul, lambda q, g: perm_mul(q, pi(g))
        )
    phi = e.hom
    T = e.target
    return ConcreteBiset(T, e.source, T.sorted_elements, perm_mul, lambda x, g: perm_mul(x, phi(g)))


def balanced_product(U: ConcreteBiset, V: ConcreteBiset) -> ConcreteBiset:
    """``U x_H V`` for a (K, H)-biset ``U`` and an (H, G)-biset ``V``."""
    H = U.right
    if V.left is not H:
        raise GroupStructureError(
            f"cannot balance over {H.label} and {V.left.label}"
        )
    H_elems = H.sorted_elements
    H_inv = {h: perm_inv(h) for h in H_elems}

    def canon(u, v):
        return min(
            ((U.right_act(u, h), V.left_act(H_inv[h], v)) for h in H_elems),
            key=lambda pair: (U.index[pair[0]], V.index[pair[1]]),
        )

    points = sorted(
        {canon(u, v) for u in U.points for v in V.points},
        key=lambda pair: (U.index[pair[0]], V.index[pair[1]]),
    )
    return ConcreteBiset(
        U.left,
        V.right,
        points,
        lambda k, p: canon(U.left_act(k, p[0]), p[1]),
        lambda p, g: canon(p[0], V.right_act(p[1], g)),
    )


def identity_biset(G: Group) -> ConcreteBiset:
    return ConcreteBiset(G, G, G.sorted_elements, perm_mul, perm_mul)


def realize(w: BisetWord) -> ConcreteBiset:
    """The concrete (target, source)-biset of a word."""
    if not w.factors:
        return identity_biset(w.source)
    result = realize_elemental(w.factors[0])
    for e in w.factors[1:]:
        result = balanced_product(realize_elemental(e), result)
    logger.debug("Realized biset word", word=str(w), points=len(result))
    return result


def orbit_count_through(w: BisetWord) -> int:
    """Number of left-group orbits on the realized biset."""
    return len(realize(w).left_orbits())


# -- word syntax ---------------------------------------------------------------

_FACTOR = re.compile(r"(Ind|Res|Inf|Def|Iso)\[([^\]]*)\]")


def resolve_subgroup(G: Group, token: str, normal: bool = False) -> Group:
    """A subgroup of ``G`` named by class index or by a catalog spec.

    A catalog spec picks the first subgroup class with the same order and
    element-order multiset.
    """
    classes = G.subgroup_classes()
    if token.isdigit():
        idx = int(token)
        if idx >= len(classes):
            raise SpecSyntaxError(f"{G.label} has {len(classes)} subgroup classes, got {idx}")
        chosen = classes[idx]
        if normal and chosen.class_size != 1:
            raise GroupStructureError(f"subgroup class {idx} of {G.label} is not normal")
    else:
        if token == "1":
            token = "C1"
        T = make_group(token)
        shape = sorted(T.element_order(t) for t in T.elements)
        matches = [
            c for c in classes
            if c.order == T.order
            and sorted(G.element_order(x) for x in c.representative) == shape
            and (not normal or c.class_size == 1)
        ]
        if not matches:
            kind = "normal subgroup" if normal else "subgroup"
            raise GroupStructureError(f"{G.label} has no {kind} shaped like {token}")
        chosen = matches[0]
    if chosen.order == G.order:
        return G
    return G.subgroup_group(chosen.representative)


def _parse_factor(kind: str, body: str, current: Group | None) -> Elemental:
    if kind in ("Ind", "Res"):
        if "<" not in body:
            raise SpecSyntaxError(f"{kind}[...] expects H<G, got {body!r}")
        h_token, g_token = body.split("<", 1)
        G = current if g_token == "_" and current is not None else make_group(g_token)
        H = resolve_subgroup(G, h_token)
        return ind(H, G) if kind == "Ind" else res(G, H)
    if kind in ("Inf", "Def"):
        if "/" not in body:
            raise SpecSyntaxError(f"{kind}[...] expects G/N, got {body!r}")
        g_token, n_token = body.split("/", 1)
        G = current if g_token == "_" and current is not None else make_group(g_token)
        N = resolve_subgroup(G, n_token, normal=True)
        _, pi = quotient_group(G, N.elements)
        return inf(pi) if kind == "Inf" else deflate(pi)
    if body != "swap":
        raise SpecSyntaxError(f"only Iso[swap] is supported, got Iso[{body}]")
    if current is None or current.factors is None:
        raise SpecSyntaxError("Iso[swap] needs a direct product as its source")
    a, b = current.factors
    return iso(swap(a, b))


def parse_word(text: str, source: Group | None = None) -> BisetWord:
    """Parse ``Ind[H<G];Res[H<G];Inf[G/N];Def[G/N];Iso[swap]`` (left to right).

    ``_`` in the group position stands for the current group of the word.
    """
    text = text.strip()
    if not text:
        if source is None:
            raise SpecSyntaxError("empty word without a source group")
        return BisetWord.identity(source)
    factors: list[Elemental] = []
    current = source
    for part in text.split(";"):
        m = _FACTOR.fullmatch(part.strip())
        if not m:
            raise SpecSyntaxError(f"cannot parse biset factor {part!r}")
        kind, body = m.groups()
        if kind == "Inf" and current is not None:
            # the word arrives at G/N; resolve G/N from the written G
            e = _parse_factor(kind, body, None)
        else:
            e = _parse_factor(kind, body, current)
        factors.append(e)
        current = e.target
    start = source if source is not None else factors[0].source
    if start is not factors[0].source:
        raise GroupStructureError(
            f"word starts at {factors[0].source.label}, expected {start.label}"
        )
    return BisetWord(start, factors[-1].target, tuple(factors))
