"""Structural comparisons: frame morphisms, bisimulations, distinguishers.

A frame morphism matches, per name, the image of each named agent's
successor set with some named agent on the other side (forth and back).  A
bisimulation relaxes the equation to a full back-and-forth matching of
successor sets through the relation.  Both notions preserve truth of the
E/S fragment.

Bisimilarity is strictly finer than E/S modal equivalence even on finite
models: one side may carry an extra named agent whose successor set is a
union of others', observable by no formula.  distinguishing_formula
therefore decides modal equivalence outright, by partition refinement: it
returns a separating formula exactly when one exists, so bisimilar points
always map to None, while rare non-bisimilar but equivalent pairs do too.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional

from .errors import UndeclaredSymbolError
from .formula import And, E, FALSE, Formula, Not, Or, Prop, S, TRUE
from .kripke import KripkeModel, check, disjoint_union

Pair = tuple[str, str]
_EMPTY: frozenset = frozenset()


@dataclass(frozen=True)
class Violation:
    state: Any  # a state, or a state pair for bisimulation checks
    name: Optional[str]
    condition: str  # "there" | "back" | "atoms" | "valuation"
    detail: str


@dataclass(frozen=True)
class MorphismCheckReport:
    ok: bool
    violations: tuple[Violation, ...]

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class BisimRelation:
    pairs: frozenset[Pair]

    @classmethod
    def make(cls, pairs: Iterable[Iterable[str]]) -> "BisimRelation":
        return cls(frozenset((x, y) for x, y in pairs))

    def to_list(self) -> list[list[str]]:
        return [list(p) for p in sorted(self.pairs)]

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)


def _report(violations: list[Violation]) -> MorphismCheckReport:
    return MorphismCheckReport(not violations, tuple(violations))


def _atom_profile(m: KripkeModel, w: str, props: Iterable[str]) -> frozenset[str]:
    return frozenset(p for p in props if m.holds(p, w))


# ---------------------------------------------------------------------------
# Frame morphisms

def check_frame_morphism(
    src: KripkeModel,
    dst: KripkeModel,
    f: Mapping[str, str],
    compare_valuations: bool = False,
) -> MorphismCheckReport:
    """Verify the forth and back successor-set equations at every state/name.

    forth: each agent named n at w has a counterpart named n at f(w) whose
    successor set is exactly the image of its own.  back: each counterpart
    arises this way.  With compare_valuations, w and f(w) must also agree on
    the propositions both models interpret.
    """
    if set(f) != set(src.states) or not set(f.values()) <= set(dst.states):
        raise UndeclaredSymbolError(
            "map is not a total function from source states to target states"
        )
    out: list[Violation] = []
    for w in sorted(src.states):
        for n in sorted(src.names | dst.names):
            image_sets = {
                a: frozenset(f[v] for v in src.successors(a, w))
                for a in src.named(w, n)
            }
            targets = {
                a2: dst.successors(a2, f[w]) for a2 in dst.named(f[w], n)
            }
            for a, img in sorted(image_sets.items()):
                if img not in targets.values():
                    out.append(
                        Violation(
                            w,
                            n,
                            "there",
                            f"no agent named {n!r} at {f[w]!r} has successor set"
                            f" {sorted(img)} (image of {a!r})",
                        )
                    )
            for a2, succ in sorted(targets.items()):
                if succ not in image_sets.values():
                    out.append(
                        Violation(
                            w,
                            n,
                            "back",
                            f"successor set {sorted(succ)} of {a2!r} at {f[w]!r} is"
                            f" no image of an agent named {n!r} at {w!r}",
                        )
                    )
    if compare_valuations:
        shared = sorted(set(src.valuation) & set(dst.valuation))
        for w in sorted(src.states):
            if _atom_profile(src, w, shared) != _atom_profile(dst, f[w], shared):
                out.append(
                    Violation(
                        w,
                        None,
                        "valuation",
                        f"{w!r} and {f[w]!r} disagree on shared propositions",
                    )
                )
    return _report(out)


# ---------------------------------------------------------------------------
# Bisimulations

def _matched(b: frozenset[Pair], left: frozenset[str], right: frozenset[str]) -> bool:
    # full back-and-forth matching of two successor sets through b
    return all(any((v, v2) in b for v2 in right) for v in left) and all(
        any((v, v2) in b for v in left) for v2 in right
    )


def _pair_ok(
    m1: KripkeModel, m2: KripkeModel, b: frozenset[Pair], w: str, w2: str
) -> Optional[Violation]:
    for n in sorted(m1.names | m2.names):
        left = {a: m1.successors(a, w) for a in m1.named(w, n)}
        right = {a2: m2.successors(a2, w2) for a2 in m2.named(w2, n)}
        for a, succ in sorted(left.items()):
            if not any(_matched(b, succ, succ2) for succ2 in right.values()):
                return Violation(
                    (w, w2),
                    n,
                    "there",
                    f"agent {a!r} named {n!r} at {w!r} has no matching agent at {w2!r}",
                )
        for a2, succ2 in sorted(right.items()):
            if not any(_matched(b, succ, succ2) for succ in left.values()):
                return Violation(
                    (w, w2),
                    n,
                    "back",
                    f"agent {a2!r} named {n!r} at {w2!r} has no matching agent at {w!r}",
                )
    return None


def check_bisimulation(
    m1: KripkeModel, m2: KripkeModel, b: BisimRelation
) -> MorphismCheckReport:
    """Certify that every pair of b satisfies atom agreement and the per-name
    back-and-forth matching clauses, read against b itself."""
    for w, w2 in b.pairs:
        if w not in m1.states or w2 not in m2.states:
            raise UndeclaredSymbolError(f"pair ({w!r}, {w2!r}) references undeclared states")
    out: list[Violation] = []
    props = sorted(set(m1.valuation) | set(m2.valuation))
    for w, w2 in sorted(b.pairs):
        if _atom_profile(m1, w, props) != _atom_profile(m2, w2, props):
            out.append(
                Violation((w, w2), None, "atoms", f"{w!r} and {w2!r} differ on atoms")
            )
            continue
        bad = _pair_ok(m1, m2, b.pairs, w, w2)
        if bad is not None:
            out.append(bad)
    return _report(out)


def greatest_bisimulation(m1: KripkeModel, m2: KripkeModel) -> BisimRelation:
    """Largest relation passing check_bisimulation: start from all
    atom-agreeing pairs, delete violators until nothing changes."""
    props = sorted(set(m1.valuation) | set(m2.valuation))
    pairs = frozenset(
        (w, w2)
        for w in m1.states
        for w2 in m2.states
        if _atom_profile(m1, w, props) == _atom_profile(m2, w2, props)
    )
    while True:
        kept = frozenset(
            (w, w2) for w, w2 in pairs if _pair_ok(m1, m2, pairs, w, w2) is None
        )
        if kept == pairs:
            return BisimRelation(pairs)
        pairs = kept


def bisimilar(m1: KripkeModel, w1: str, m2: KripkeModel, w2: str) -> bool:
    if w1 not in m1.states or w2 not in m2.states:
        raise UndeclaredSymbolError(f"undeclared state in ({w1!r}, {w2!r})")
    return (w1, w2) in greatest_bisimulation(m1, m2).pairs


# ---------------------------------------------------------------------------
# Distinguishing formulas via partition refinement

def _conj(parts: list[Formula]) -> Formula:
    if not parts:
        return TRUE
    out = parts[0]
    for g in parts[1:]:
        out = And(out, g)
    return out


def _disj(parts: list[Formula]) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for g in parts[1:]:
        out = Or(out, g)
    return out


def _minima(family: frozenset[frozenset[int]]) -> frozenset[frozenset[int]]:
    return frozenset(
        P for P in family if not any(Q < P for Q in family)
    )


def _separator(
    u: KripkeModel,
    x: str,
    y: str,
    classes: Mapping[str, int],
    chi,
) -> Formula:
    """Formula true at x and false at y, given that their one-step behavior
    over the current classes differs at some name."""
    for n in sorted(u.names):
        fam_x = frozenset(
            frozenset(classes[v] for v in u.successors(a, x)) for a in u.named(x, n)
        )
        fam_y = frozenset(
            frozenset(classes[v] for v in u.successors(a, y)) for a in u.named(y, n)
        )
        min_x, min_y = _minima(fam_x), _minima(fam_y)
        if min_x != min_y:
            for P in sorted(min_x, key=sorted):
                if not any(Q <= P for Q in min_y):
                    return S(n, _disj([chi(c) for c in sorted(P)]))
            for P in sorted(min_y, key=sorted):
                if not any(Q <= P for Q in min_x):
                    return Not(S(n, _disj([chi(c) for c in sorted(P)])))
        union_x = frozenset().union(*fam_x) if fam_x else _EMPTY
        union_y = frozenset().union(*fam_y) if fam_y else _EMPTY
        if union_x != union_y:
            extra = union_x - union_y
            if extra:
                return Not(E(n, Not(chi(min(extra)))))
            return E(n, Not(chi(min(union_y - union_x))))
    raise AssertionError("states were split without a signature difference")


def _refine_with_formulas(u: KripkeModel):
    """Coarsest partition of u's states invariant under the one-step E/S
    signature, with a separating formula for every pair of distinct blocks."""
    props = sorted(u.valuation)
    profiles: dict[frozenset[str], list[str]] = {}
    for w in sorted(u.states):
        profiles.setdefault(_atom_profile(u, w, props), []).append(w)
    classes: dict[str, int] = {}
    members: dict[int, list[str]] = {}
    atom_of: dict[int, frozenset[str]] = {}
    for cid, (profile, ws) in enumerate(sorted(profiles.items(), key=lambda kv: kv[1])):
        atom_of[cid] = profile
        members[cid] = ws
        for w in ws:
            classes[w] = cid
    delta: dict[tuple[int, int], Formula] = {}
    for ci in members:
        for cj in members:
            if ci == cj:
                continue
            p = min(atom_of[ci] ^ atom_of[cj])
            delta[(ci, cj)] = Prop(p) if p in atom_of[ci] else Not(Prop(p))

    while True:
        chi_memo: dict[int, Formula] = {}

        def chi(c: int) -> Formula:
            f = chi_memo.get(c)
            if f is None:
                f = chi_memo[c] = _conj(
                    [delta[(c, d)] for d in sorted(members) if d != c]
                )
            return f

        def signature(w: str):
            sig = []
            for n in sorted(u.names):
                fam = frozenset(
                    frozenset(classes[v] for v in u.successors(a, w))
                    for a in u.named(w, n)
                )
                union = frozenset().union(*fam) if fam else _EMPTY
                sig.append((_minima(fam), union))
            return tuple(sig)

        new_members: dict[int, list[str]] = {}
        new_delta: dict[tuple[int, int], Formula] = {}
        parent: dict[int, int] = {}
        next_id = 0
        split = False
        for cid in sorted(members):
            groups: dict[Any, list[str]] = {}
            for w in members[cid]:
                groups.setdefault(signature(w), []).append(w)
            if len(groups) > 1:
                split = True
            for _, ws in sorted(groups.items(), key=lambda kv: kv[1]):
                new_members[next_id] = ws
                parent[next_id] = cid
                next_id += 1
        if not split:
            return classes, members, delta
        for ci in new_members:
            for cj in new_members:
                if ci == cj:
                    continue
                if parent[ci] != parent[cj]:
                    new_delta[(ci, cj)] = delta[(parent[ci], parent[cj])]
                elif (cj, ci) in new_delta:
                    new_delta[(ci, cj)] = Not(new_delta[(cj, ci)])
                else:
                    new_delta[(ci, cj)] = _separator(
                        u, new_members[ci][0], new_members[cj][0], classes, chi
                    )
        members = new_members
        delta = new_delta
        classes = {w: cid for cid, ws in members.items() for w in ws}


def distinguishing_formula(
    m1: KripkeModel, w1: str, m2: KripkeModel, w2: str
) -> Optional[Formula]:
    """A formula of the E/S fragment true at (m1, w1) and false at (m2, w2),
    or None when the two points satisfy exactly the same such formulas."""
    if w1 not in m1.states or w2 not in m2.states:
        raise UndeclaredSymbolError(f"undeclared state in ({w1!r}, {w2!r})")
    u = disjoint_union([m1, m2])
    classes, _, delta = _refine_with_formulas(u)
    x, y = f"0:{w1}", f"1:{w2}"
    if classes[x] == classes[y]:
        return None
    return delta[(classes[x], classes[y])]


def modal_equiv_corpus(
    m1: KripkeModel, w1: str, m2: KripkeModel, w2: str, corpus: Iterable[Formula]
) -> bool:
    """Do the two points agree on every formula of the corpus?"""
    return all(
        check(m1, w1, f).value == check(m2, w2, f).value for f in corpus
    )
