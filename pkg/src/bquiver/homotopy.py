"""Homotopy of walks in a bound quiver and fundamental-group machinery.

The homotopy relation attached to an admissible ideal is generated by free
cancellation of inverse arrows, context closure, and the support pairs of
the reduced-basis elements (these are minimal relations, so it is enough to
pair up the paths appearing in one basis element).

With a spanning tree fixed, closed walks map onto words over the non-tree
arrows and the fundamental group gets the usual presentation: one generator
per non-tree arrow, one relator per homotopy pair.  On top of that sit:

* abelian invariants via the Smith normal form of the relator matrix,
* the space of additive characters (weight vectors on arrows, zero on the
  tree, equalized along each homotopy pair), computed as a nullspace,
* a sound three-valued decision procedure for homotopy of parallel walks:
  "no" is certified by the abelianization, "yes" by a replayable rewriting
  trace, and anything the bounded search cannot settle stays "unknown".
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque

from .budgets import Budgets, DEFAULT_BUDGETS
from .fields import Field
from .linalg import Matrix, nullspace, smith_normal_form
from .pathalg import IdealData
from .quiver import Path, Quiver, SpanningTree, Walk

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


def homotopy_pairs(ideal: IdealData) -> tuple[tuple[Path, Path], ...]:
    """All unordered support pairs of the ideal's reduced-basis elements."""
    q = ideal.quiver
    seen = set()
    out = []
    for elem in ideal.basis:
        support = elem.support()
        for i in range(len(support)):
            for j in range(i + 1, len(support)):
                u, v = support[i], support[j]
                key = (q.path_key(u), q.path_key(v))
                if key not in seen:
                    seen.add(key)
                    out.append((u, v))
    return tuple(out)


Word = tuple[int, ...]  # signed 1-based generator indices, freely reduced


def _free_reduce(letters) -> Word:
    stack = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def _invert_word(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


class GroupPresentation:
    """Spanning-tree presentation of the fundamental group at the base vertex."""

    def __init__(self, quiver: Quiver, tree: SpanningTree, pairs):
        self.quiver = quiver
        self.tree = tree
        self.base = tree.base
        self.generators = tuple(n for n in quiver.arrow_names if not tree.contains(n))
        self._gen_index = {n: i + 1 for i, n in enumerate(self.generators)}
        relators = []
        for u, v in pairs:
            if u.source != v.source or u.target != v.target:
                raise ValueError("homotopy pair is not parallel")
            w = _free_reduce(self.word_of_path(u) + _invert_word(self.word_of_path(v)))
            if w:
                relators.append(w)
        self.relators = tuple(relators)

    def word_of_walk(self, walk: Walk) -> Word:
        letters = []
        for name, eps in walk.steps:
            if self.tree.contains(name):
                continue
            letters.append(eps * self._gen_index[name])
        return _free_reduce(letters)

    def word_of_path(self, path: Path) -> Word:
        return self.word_of_walk(self.quiver.path_walk(path))

    def exponent_vector(self, word: Word) -> tuple[int, ...]:
        vec = [0] * len(self.generators)
        for x in word:
            vec[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(vec)

    def relator_matrix(self) -> list[list[int]]:
        return [list(self.exponent_vector(r)) for r in self.relators]

    def __repr__(self):
        rels = ", ".join(self.show_word(r) for r in self.relators) or "-"
        return f"<{', '.join(self.generators) or '1'} | {rels}>"

    def show_word(self, word: Word) -> str:
        if not word:
            return "1"
        parts = []
        for x in word:
            name = self.generators[abs(x) - 1]
            parts.append(name if x > 0 else f"{name}^-1")
        return "*".join(parts)


def pi1_presentation(quiver: Quiver, tree: SpanningTree, pairs) -> GroupPresentation:
    return GroupPresentation(quiver, tree, pairs)


@dataclass(frozen=True)
class AbelianInvariants:
    """Torsion factors (each >= 2, chained by divisibility) plus free rank."""

    torsion: tuple[int, ...]
    free_rank: int

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def abelian_invariants(presentation: GroupPresentation) -> AbelianInvariants:
    g = len(presentation.generators)
    rows = presentation.relator_matrix()
    if not rows:
        return AbelianInvariants((), g)
    d, _, _ = smith_normal_form(rows)
    torsion = tuple(x for x in d if x > 1)
    return AbelianInvariants(torsion, g - len(d))


class HomSpace:
    """Characters of the fundamental group as tree-normalized arrow weights."""

    def __init__(self, quiver: Quiver, tree: SpanningTree, pairs, field: Field):
        self.quiver = quiver
        self.tree = tree
        self.field = field
        self.pairs = tuple(pairs)
        self.arrow_order = quiver.arrow_names
        idx = {n: i for i, n in enumerate(self.arrow_order)}
        rows = []
        for n in sorted(tree.arrow_names):
            row = [field.zero] * len(self.arrow_order)
            row[idx[n]] = field.one
            rows.append(row)
        for u, v in pairs:
            row = [field.zero] * len(self.arrow_order)
            for name in u.arrows:
                row[idx[name]] = field.add(row[idx[name]], field.one)
            for name in v.arrows:
                row[idx[name]] = field.sub(row[idx[name]], field.one)
            rows.append(row)
        m = Matrix(field, rows, ncols=len(self.arrow_order)) if rows else Matrix.zeros(field, 0, len(self.arrow_order))
        self.basis_vectors = nullspace(m)
        self.basis = [
            {self.arrow_order[i]: vec[i] for i in range(len(vec)) if not field.is_zero(vec[i])}
            for vec in self.basis_vectors
        ]

    @property
    def dim(self) -> int:
        return len(self.basis_vectors)

    def weights_from_vector(self, vec) -> dict[str, object]:
        return {self.arrow_order[i]: vec[i] for i in range(len(vec))}

    def check_weights(self, weights: dict) -> bool:
        """Do these arrow weights satisfy tree-normalization and all pairs?"""
        f = self.field
        w = {n: f.coerce(weights.get(n, f.zero)) for n in self.arrow_order}
        for n in self.tree.arrow_names:
            if not f.is_zero(w[n]):
                return False
        for u, v in self.pairs:
            su = f.sum(w[a] for a in u.arrows)
            sv = f.sum(w[a] for a in v.arrows)
            if su != sv:
                return False
        return True


def hom_space(quiver: Quiver, tree: SpanningTree, pairs, field: Field) -> HomSpace:
    return HomSpace(quiver, tree, pairs, field)


def weight_of_walk(field: Field, weights: dict, walk: Walk):
    """Signed sum of arrow weights along a walk."""
    acc = field.zero
    for name, eps in walk.steps:
        w = field.coerce(weights.get(name, field.zero))
        acc = field.add(acc, w if eps == 1 else field.neg(w))
    return acc


def weight_of_path(field: Field, weights: dict, path: Path):
    acc = field.zero
    for name in path.arrows:
        acc = field.add(acc, field.coerce(weights.get(name, field.zero)))
    return acc


# ---------- the three-valued decision procedure ----------

@dataclass(frozen=True)
class RewriteTrace:
    """Replayable certificate for "yes": relator insertions down to the unit."""

    start: Word
    steps: tuple[tuple[int, Word], ...]  # (position, inserted relator word)

    def replay(self) -> bool:
        w = self.start
        for pos, rel in self.steps:
            if pos < 0 or pos > len(w):
                return False
            w = _free_reduce(w[:pos] + rel + w[pos:])
        return w == ()


@dataclass(frozen=True)
class AbelianCertificate:
    """Certificate for "no": the image misses the relator row span."""

    exponents: tuple[int, ...]
    transformed: tuple[int, ...]
    position: int
    modulus: int  # 0 means the coordinate had to vanish

    def verify(self, presentation: GroupPresentation, word: Word) -> bool:
        if presentation.exponent_vector(word) != self.exponents:
            return False
        rows = presentation.relator_matrix()
        if not rows:
            y = self.exponents
        else:
            _, _, v = smith_normal_form(rows)
            g = len(self.exponents)
            y = tuple(
                sum(self.exponents[i] * v[i][j] for i in range(g)) for j in range(g)
            )
        if y != self.transformed:
            return False
        val = y[self.position]
        return val != 0 if self.modulus == 0 else val % self.modulus != 0


@dataclass(frozen=True)
class Decision:
    verdict: str  # yes / no / unknown
    certificate: object = None


class HomotopyOracle:
    """Decides homotopy of parallel walks under one admissible ideal."""

    def __init__(self, ideal: IdealData, tree: SpanningTree | None = None, budgets: Budgets = DEFAULT_BUDGETS):
        self.ideal = ideal
        self.quiver = ideal.quiver
        self.tree = tree or self.quiver.spanning_tree(self.quiver.vertices[0])
        self.pairs = homotopy_pairs(ideal)
        self.presentation = GroupPresentation(self.quiver, self.tree, self.pairs)
        self.budgets = budgets
        rows = self.presentation.relator_matrix()
        if rows:
            self._snf = smith_normal_form(rows)
        else:
            self._snf = ((), (), ())

    # -- the abelian "no" side --

    def _abelian_reject(self, word: Word) -> AbelianCertificate | None:
        g = len(self.presentation.generators)
        x = self.presentation.exponent_vector(word)
        d, _, v = self._snf
        if not self.presentation.relators:
            y = x
        else:
            y = tuple(sum(x[i] * v[i][j] for i in range(g)) for j in range(g))
        for j in range(g):
            if j < len(d):
                if y[j] % d[j] != 0:
                    return AbelianCertificate(x, y, j, d[j])
            else:
                if y[j] != 0:
                    return AbelianCertificate(x, y, j, 0)
        return None

    # -- the rewriting "yes" side --

    def _search_trivial(self, word: Word) -> RewriteTrace | None:
        if word == ():
            return RewriteTrace((), ())
        rels = []
        for r in self.presentation.relators:
            rels.append(r)
            inv = _invert_word(r)
            if inv != r:
                rels.append(inv)
        if not rels:
            return None
        max_len = self.budgets.word_max_len
        max_nodes = self.budgets.search_max_nodes
        parents: dict[Word, tuple[Word, int, Word]] = {word: None}
        queue = deque([word])
        while queue and len(parents) < max_nodes:
            w = queue.popleft()
            for rel in rels:
                for pos in range(len(w) + 1):
                    nw = _free_reduce(w[:pos] + rel + w[pos:])
                    if len(nw) > max_len or nw in parents:
                        continue
                    parents[nw] = (w, pos, rel)
                    if nw == ():
                        steps = []
                        cur = nw
                        while parents[cur] is not None:
                            prev, p, r = parents[cur]
                            steps.append((p, r))
                            cur = prev
                        return RewriteTrace(word, tuple(reversed(steps)))
                    queue.append(nw)
        return None

    # -- public decisions --

    def decide_closed_word(self, word: Word) -> Decision:
        cert = self._abelian_reject(word)
        if cert is not None:
            return Decision(NO, cert)
        trace = self._search_trivial(word)
        if trace is not None:
            assert trace.replay()
            return Decision(YES, trace)
        return Decision(UNKNOWN)

    def decide_walks(self, u: Walk, v: Walk) -> Decision:
        if u.source != v.source or u.target != v.target:
            raise ValueError("walks are not parallel")
        closed = self.quiver.concat_walks(v.inverse(), u).reduced()
        return self.decide_closed_word(self.presentation.word_of_walk(closed))

    def decide_paths(self, u: Path, v: Path) -> Decision:
        return self.decide_walks(self.quiver.path_walk(u), self.quiver.path_walk(v))

    def decide_arrow_path(self, arrow_name: str, path: Path) -> Decision:
        return self.decide_paths(self.quiver.arrow_path(arrow_name), path)


def decide_homotopic(u: Walk, v: Walk, ideal: IdealData, budgets: Budgets = DEFAULT_BUDGETS) -> Decision:
    return HomotopyOracle(ideal, budgets=budgets).decide_walks(u, v)


def relations_equal(first: IdealData, second: IdealData, budgets: Budgets = DEFAULT_BUDGETS) -> Decision:
    """Do two admissible ideals generate the same homotopy relation?

    Yes iff every generating pair of each relation is homotopic under the
    other; a single certified "no" settles inequality; otherwise unknown.
    """
    if first.quiver is not second.quiver:
        raise ValueError("ideals over different quivers")
    oracle_first = HomotopyOracle(first, budgets=budgets)
    oracle_second = HomotopyOracle(second, budgets=budgets)
    sawunknown = False
    for u, v in oracle_first.pairs:
        d = oracle_second.decide_paths(u, v)
        if d.verdict == NO:
            return Decision(NO, ((u, v), "second"))
        if d.verdict == UNKNOWN:
            sawunknown = True
    for u, v in oracle_second.pairs:
        d = oracle_first.decide_paths(u, v)
        if d.verdict == NO:
            return Decision(NO, ((u, v), "first"))
        if d.verdict == UNKNOWN:
            sawunknown = True
    return Decision(UNKNOWN if sawunknown else YES)
