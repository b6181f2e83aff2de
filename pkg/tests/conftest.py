"""Shared instance builders: the golden corpus and random desk-scale inputs."""

from __future__ import annotations

from fractions import Fraction

from bquiver import (
    AlgebraElement,
    GF,
    IdealData,
    QQ,
    Quiver,
    dilatation,
    enumerate_bypasses,
    transvection_of,
    zero_ideal,
)


def elem(quiver, field, *terms):
    """Build sum of (coeff, arrow-names-in-right-to-left-notation) terms."""
    out = AlgebraElement.zero(quiver, field)
    for coeff, notation in terms:
        path = quiver.path(tuple(reversed(notation.split("*"))))
        out = out + AlgebraElement.from_path(quiver, field, path, coeff)
    return out


def path_of(quiver, notation):
    return quiver.path(tuple(reversed(notation.split("*"))))


# ---------- golden corpus ----------

def parallel_pair_quiver():
    """Two parallel arrows followed by a third arrow: 1 => 2 -> 3."""
    return Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "1", "2"), ("c", "2", "3")])


def parallel_pair(field):
    q = parallel_pair_quiver()
    ideal_mono = IdealData(q, field, [elem(q, field, (1, "c*a"))])
    ideal_diff = IdealData(q, field, [elem(q, field, (1, "c*a"), (-1, "c*b"))])
    tree = q.spanning_tree("1", preferred=["a", "c"])
    return q, ideal_mono, ideal_diff, tree


def kronecker_quiver():
    return Quiver(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])


def kronecker(field):
    q = kronecker_quiver()
    return q, zero_ideal(q, field), q.spanning_tree("1")


def two_triangles_quiver():
    """Five vertices, two chained triangles with long-route shortcuts."""
    return Quiver(
        ["1", "2", "3", "4", "5"],
        [
            ("b", "1", "2"),
            ("a", "1", "3"),
            ("c", "2", "3"),
            ("e", "3", "4"),
            ("d", "3", "5"),
            ("f", "4", "5"),
        ],
    )


def two_triangles_full(field):
    """The three-relation ideal: shortcut products vanish, routes agree."""
    q = two_triangles_quiver()
    gens = [
        elem(q, field, (1, "d*a")),
        elem(q, field, (1, "f*e*c*b")),
        elem(q, field, (1, "f*e*a"), (1, "d*c*b")),
    ]
    tree = q.spanning_tree("1", preferred=["b", "c", "e", "f"])
    return q, IdealData(q, field, gens), tree


def two_triangles_pair(field):
    """The two-relation variant with its twisted partner ideal."""
    q = two_triangles_quiver()
    gens = [
        elem(q, field, (1, "d*a")),
        elem(q, field, (1, "f*e*a"), (1, "d*c*b")),
    ]
    twisted = [
        elem(q, field, (1, "d*a"), (1, "f*e*c*b")),
        elem(q, field, (1, "f*e*a"), (1, "d*c*b")),
    ]
    tree = q.spanning_tree("1", preferred=["b", "c", "e", "f"])
    return q, IdealData(q, field, gens), IdealData(q, field, twisted), tree


def two_triangles_twist(q, field):
    """a -> a + c*b composed with d -> d + f*e."""
    phi_a = transvection_of(q, field, [b for b in enumerate_bypasses(q) if b.arrow == "a"][0], 1)
    phi_d = transvection_of(q, field, [b for b in enumerate_bypasses(q) if b.arrow == "d"][0], 1)
    return phi_a.compose(phi_d)


def commutative_square(field, bound=True):
    q = Quiver(
        ["1", "2", "3", "4"],
        [("a", "1", "2"), ("b", "1", "3"), ("c", "2", "4"), ("d", "3", "4")],
    )
    if bound:
        ideal = IdealData(q, field, [elem(q, field, (1, "c*a"), (-1, "d*b"))])
    else:
        ideal = zero_ideal(q, field)
    return q, ideal, q.spanning_tree("1")


def chain_quiver(n):
    vertices = [str(i + 1) for i in range(n)]
    arrows = [(chr(ord("a") + i), str(i + 1), str(i + 2)) for i in range(n - 1)]
    return Quiver(vertices, arrows)


def chain_with_monomials(n, field, cuts=()):
    """Oriented line with length-two monomial relations at the given offsets."""
    q = chain_quiver(n)
    gens = []
    for i in cuts:
        first = chr(ord("a") + i)
        second = chr(ord("a") + i + 1)
        gens.append(elem(q, field, (1, f"{second}*{first}")))
    return q, IdealData(q, field, gens), q.spanning_tree("1")


# ---------- random desk-scale instances ----------

NONZERO_RATIONALS = (
    Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(3), Fraction(1, 2),
)


def random_field(rng):
    return rng.choice([QQ, GF(2), GF(3), GF(5)])


def random_nonzero(rng, field):
    if field is QQ:
        return rng.choice(NONZERO_RATIONALS)
    return rng.randrange(1, field.p)


def random_quiver(rng, max_vertices=6, max_paths=40):
    while True:
        n = rng.randint(2, max_vertices)
        vertices = [str(i + 1) for i in range(n)]
        arrows = []
        for i in range(1, n):
            j = rng.randrange(i)
            arrows.append((chr(ord("a") + len(arrows)), vertices[j], vertices[i]))
        for _ in range(rng.randint(0, 3)):
            i = rng.randrange(n - 1)
            j = rng.randrange(i + 1, n)
            arrows.append((chr(ord("a") + len(arrows)), vertices[i], vertices[j]))
        q = Quiver(vertices, arrows)
        if len(q.all_paths()) <= max_paths:
            return q


def random_admissible_ideal(rng, quiver, field):
    corridors = {}
    for p in quiver.all_paths():
        if p.length >= 2:
            corridors.setdefault((p.source, p.target), []).append(p)
    gens = []
    keys = sorted(corridors, key=lambda st: (quiver.vertex_index[st[0]], quiver.vertex_index[st[1]]))
    for _ in range(rng.randint(0, 2)):
        if not keys:
            break
        key = rng.choice(keys)
        paths = corridors[key]
        p1 = rng.choice(paths)
        g = AlgebraElement.from_path(quiver, field, p1, random_nonzero(rng, field))
        if len(paths) > 1 and rng.random() < 0.6:
            p2 = rng.choice([p for p in paths if p != p1])
            g = g + AlgebraElement.from_path(quiver, field, p2, random_nonzero(rng, field))
        gens.append(g)
    ideal = IdealData(quiver, field, gens)
    assert ideal.is_admissible()[0]
    return ideal


def random_dilatation(rng, quiver, field):
    return dilatation(
        quiver, field, {n: random_nonzero(rng, field) for n in quiver.arrow_names}
    )


def random_fixing_automorphism(rng, ideal):
    """An automorphism with the same ideal, composed from fixing transvections."""
    quiver, field = ideal.quiver, ideal.field
    fixers = []
    taus = [1, -1] if field is QQ else list(range(1, field.p))
    for bp in enumerate_bypasses(quiver):
        for tau in taus:
            phi = transvection_of(quiver, field, bp, tau)
            if phi.apply_to_ideal(ideal) == ideal:
                fixers.append(phi)
    rng.shuffle(fixers)
    out = None
    for phi in fixers[: rng.randint(0, 2)]:
        out = phi if out is None else out.compose(phi)
    if out is None:
        from bquiver import identity_automorphism

        out = identity_automorphism(quiver, field)
    assert out.apply_to_ideal(ideal) == ideal
    return out
