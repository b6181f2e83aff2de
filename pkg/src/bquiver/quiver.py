"""Finite acyclic quivers, oriented paths, and walks with formal inverses.

Conventions used throughout the package:

* Paths compose right to left: the product ``v * u`` means "first traverse
  ``u``, then ``v``".  Internally a path stores its arrows in traversal
  order, so the displayed name ``c*a`` corresponds to the stored tuple
  ``("a", "c")``.
* A walk is a sequence of signed arrows (sign -1 walks an arrow backwards);
  walks also compose right to left.
* All enumeration orders are deterministic: vertices by declaration order,
  arrows by name, paths by (length, source index, target index, arrow-name
  sequence).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """An oriented path; ``arrows`` lists traversed arrow names in order."""

    source: str
    target: str
    arrows: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def __str__(self):
        if not self.arrows:
            return f"e_{self.source}"
        return "*".join(reversed(self.arrows))


@dataclass(frozen=True)
class Walk:
    """A path in the double quiver; steps are (arrow name, +1 or -1)."""

    source: str
    target: str
    steps: tuple[tuple[str, int], ...]

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def is_trivial(self) -> bool:
        return not self.steps

    def inverse(self) -> "Walk":
        return Walk(self.target, self.source, tuple((a, -e) for a, e in reversed(self.steps)))

    def reduced(self) -> "Walk":
        """Freely reduced walk: no a a^-1 or a^-1 a factor remains."""
        stack: list[tuple[str, int]] = []
        for step in self.steps:
            if stack and stack[-1][0] == step[0] and stack[-1][1] == -step[1]:
                stack.pop()
            else:
                stack.append(step)
        return Walk(self.source, self.target, tuple(stack))

    def __str__(self):
        if not self.steps:
            return f"e_{self.source}"
        parts = []
        for name, eps in reversed(self.steps):
            parts.append(name if eps == 1 else f"{name}^-1")
        return "*".join(parts)


class QuiverError(ValueError):
    pass


class Quiver:
    """A finite quiver given by named vertices and named arrows."""

    def __init__(self, vertices: Sequence[str], arrows: Iterable[tuple[str, str, str]]):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex names")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        arrow_list = []
        seen = set()
        for name, src, tgt in arrows:
            if name in seen:
                raise QuiverError(f"duplicate arrow name {name!r}")
            seen.add(name)
            if src not in self.vertex_index or tgt not in self.vertex_index:
                raise QuiverError(f"arrow {name!r} has an unknown endpoint")
            arrow_list.append(Arrow(str(name), str(src), str(tgt)))
        self.arrows = tuple(arrow_list)
        self.arrow_by_name = {a.name: a for a in self.arrows}
        self.arrow_names = tuple(sorted(self.arrow_by_name))
        self._all_paths: tuple[Path, ...] | None = None

    # ---------- basic structure ----------

    def arrow(self, name: str) -> Arrow:
        try:
            return self.arrow_by_name[name]
        except KeyError:
            raise QuiverError(f"unknown arrow {name!r}") from None

    def outgoing(self, vertex: str) -> list[Arrow]:
        return [self.arrow_by_name[n] for n in self.arrow_names if self.arrow_by_name[n].source == vertex]

    def incoming(self, vertex: str) -> list[Arrow]:
        return [self.arrow_by_name[n] for n in self.arrow_names if self.arrow_by_name[n].target == vertex]

    def validate(self) -> dict:
        """Check finiteness, acyclicity and connectedness.

        Returns a diagnostics dict with ``ok`` plus a cycle witness or the
        connected components when the corresponding property fails.
        """
        diag: dict = {"ok": True, "cycle": None, "components": None}
        # acyclicity by DFS with colors, witness reconstructed from the stack
        color = {v: 0 for v in self.vertices}
        parent_edge: dict[str, tuple[str, str]] = {}

        def dfs(v: str):
            color[v] = 1
            for a in self.outgoing(v):
                w = a.target
                if color[w] == 0:
                    parent_edge[w] = (v, a.name)
                    cyc = dfs(w)
                    if cyc:
                        return cyc
                elif color[w] == 1:
                    # unwind the stack from v back to w
                    names = [a.name]
                    cur = v
                    while cur != w:
                        prev, an = parent_edge[cur]
                        names.append(an)
                        cur = prev
                    return list(reversed(names))
            color[v] = 2
            return None

        for v in self.vertices:
            if color[v] == 0:
                cyc = dfs(v)
                if cyc:
                    diag["ok"] = False
                    diag["cycle"] = cyc
                    break
        # connectedness of the underlying graph
        if self.vertices:
            comp = {}
            for v in self.vertices:
                if v in comp:
                    continue
                stack = [v]
                comp[v] = v
                while stack:
                    cur = stack.pop()
                    for a in self.arrows:
                        for nxt in ((a.target,) if a.source == cur else ()) + (
                            (a.source,) if a.target == cur else ()
                        ):
                            if nxt not in comp:
                                comp[nxt] = v
                                stack.append(nxt)
            roots = sorted(set(comp.values()), key=self.vertex_index.get)
            if len(roots) > 1:
                diag["ok"] = False
                diag["components"] = [
                    sorted((v for v in comp if comp[v] == r), key=self.vertex_index.get) for r in roots
                ]
        return diag

    def require_valid(self):
        diag = self.validate()
        if not diag["ok"]:
            raise QuiverError(f"invalid quiver: {diag}")

    # ---------- paths ----------

    def trivial_path(self, vertex: str) -> Path:
        if vertex not in self.vertex_index:
            raise QuiverError(f"unknown vertex {vertex!r}")
        return Path(vertex, vertex, ())

    def path(self, arrow_names: Sequence[str]) -> Path:
        """Path from arrow names in traversal order (first traversed first)."""
        if not arrow_names:
            raise QuiverError("a nontrivial path needs at least one arrow")
        arrows = [self.arrow(n) for n in arrow_names]
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise QuiverError(f"arrows {a.name!r} and {b.name!r} do not compose")
        return Path(arrows[0].source, arrows[-1].target, tuple(a.name for a in arrows))

    def arrow_path(self, name: str) -> Path:
        a = self.arrow(name)
        return Path(a.source, a.target, (a.name,))

    def path_key(self, p: Path):
        """The global deterministic path order key: length, endpoints, names."""
        return (p.length, self.vertex_index[p.source], self.vertex_index[p.target], p.arrows)

    def sort_paths(self, paths: Iterable[Path]) -> list[Path]:
        return sorted(paths, key=self.path_key)

    def all_paths(self) -> tuple[Path, ...]:
        """Every path of the quiver, trivial ones included, in path order."""
        if self._all_paths is None:
            self.require_valid()
            found = [self.trivial_path(v) for v in self.vertices]
            frontier = [self.arrow_path(n) for n in self.arrow_names]
            while frontier:
                found.extend(frontier)
                nxt = []
                for p in frontier:
                    for a in self.outgoing(p.target):
                        nxt.append(Path(p.source, a.target, p.arrows + (a.name,)))
                frontier = nxt
            self._all_paths = tuple(self.sort_paths(found))
        return self._all_paths

    def paths_between(self, source: str, target: str) -> list[Path]:
        if source not in self.vertex_index or target not in self.vertex_index:
            raise QuiverError("unknown vertex")
        return [p for p in self.all_paths() if p.source == source and p.target == target]

    # ---------- walks ----------

    def walk(self, steps: Sequence[tuple[str, int]], at: str | None = None) -> Walk:
        if not steps:
            if at is None:
                raise QuiverError("a trivial walk needs its vertex")
            if at not in self.vertex_index:
                raise QuiverError(f"unknown vertex {at!r}")
            return Walk(at, at, ())
        pts = []
        for name, eps in steps:
            a = self.arrow(name)
            if eps == 1:
                pts.append((a.source, a.target))
            elif eps == -1:
                pts.append((a.target, a.source))
            else:
                raise QuiverError("walk signs must be +1 or -1")
        for (s1, t1), (s2, t2) in zip(pts, pts[1:]):
            if t1 != s2:
                raise QuiverError("walk steps do not chain")
        return Walk(pts[0][0], pts[-1][1], tuple((str(n), int(e)) for n, e in steps))

    def path_walk(self, p: Path) -> Walk:
        return Walk(p.source, p.target, tuple((a, 1) for a in p.arrows))

    def concat_walks(self, second: Walk, first: Walk) -> Walk:
        """The walk "first, then second" (right-to-left composition)."""
        if first.target != second.source:
            raise QuiverError("walks do not compose")
        return Walk(first.source, second.target, first.steps + second.steps)

    # ---------- spanning trees ----------

    def spanning_tree(self, base: str, preferred: Iterable[str] | None = None) -> "SpanningTree":
        self.require_valid()
        if base not in self.vertex_index:
            raise QuiverError(f"unknown base vertex {base!r}")
        if preferred is not None:
            chosen = tuple(sorted(set(preferred)))
            for n in chosen:
                self.arrow(n)
            if len(chosen) != len(self.vertices) - 1:
                raise QuiverError("preferred arrow set has the wrong size for a spanning tree")
            tree = SpanningTree(self, base, chosen)
            if len(tree.walk_to) != len(self.vertices):
                raise QuiverError("preferred arrow set does not span the quiver")
            return tree
        # deterministic BFS: visit vertices in discovery order, arrows by name
        chosen_list = []
        visited = {base}
        queue = [base]
        while queue:
            v = queue.pop(0)
            for name in self.arrow_names:
                a = self.arrow_by_name[name]
                other = None
                if a.source == v and a.target not in visited:
                    other = a.target
                elif a.target == v and a.source not in visited:
                    other = a.source
                if other is not None:
                    chosen_list.append(name)
                    visited.add(other)
                    queue.append(other)
        return SpanningTree(self, base, tuple(sorted(chosen_list)))


class SpanningTree:
    """A maximal tree with the reduced tree walk from the base to each vertex."""

    def __init__(self, quiver: Quiver, base: str, arrow_names: tuple[str, ...]):
        self.quiver = quiver
        self.base = base
        self.arrow_names = frozenset(arrow_names)
        self.walk_to = self._tree_walks()

    def _tree_walks(self) -> dict[str, Walk]:
        q = self.quiver
        walks = {self.base: q.walk((), at=self.base)}
        queue = [self.base]
        while queue:
            v = queue.pop(0)
            for name in sorted(self.arrow_names):
                a = q.arrow(name)
                step = None
                if a.source == v and a.target not in walks:
                    step, other = (name, 1), a.target
                elif a.target == v and a.source not in walks:
                    step, other = (name, -1), a.source
                if step is not None:
                    walks[other] = Walk(self.base, other, walks[v].steps + (step,))
                    queue.append(other)
        return walks

    def contains(self, arrow_name: str) -> bool:
        return arrow_name in self.arrow_names

    def __repr__(self):
        return f"SpanningTree(base={self.base}, arrows={sorted(self.arrow_names)})"


@dataclass(frozen=True)
class Bypass:
    """An arrow together with a distinct parallel oriented path."""

    arrow: str
    path: Path


def enumerate_bypasses(quiver: Quiver) -> list[Bypass]:
    """All pairs (arrow, parallel path distinct from the arrow), in order."""
    quiver.require_valid()
    out = []
    for name in quiver.arrow_names:
        a = quiver.arrow_by_name[name]
        for p in quiver.paths_between(a.source, a.target):
            if p.arrows == (name,):
                continue
            if p.is_trivial:
                continue
            out.append(Bypass(name, p))
    return out


def has_double_bypass(quiver: Quiver) -> tuple[bool, tuple | None]:
    """Whether some bypass (a, u) chains into a bypass (b, v) with b inside u."""
    bypasses = enumerate_bypasses(quiver)
    by_arrow: dict[str, list[Bypass]] = {}
    for bp in bypasses:
        by_arrow.setdefault(bp.arrow, []).append(bp)
    for bp in bypasses:
        for inner in bp.path.arrows:
            for other in by_arrow.get(inner, ()):
                return True, (bp.arrow, bp.path, other.arrow, other.path)
    return False, None


def reduce_walk(walk: Walk) -> Walk:
    return walk.reduced()
