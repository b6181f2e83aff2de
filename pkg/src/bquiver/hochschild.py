"""The quotient algebra on its normal-path basis and its degree-one cohomology.

The algebra attached to an admissible ideal carries the normal paths as a
basis (trivial paths first), with the product computed through normal forms.
A unitary derivation kills the idempotents and preserves every corridor
``e_y A e_x``, so it is determined by one vector per arrow: the image inside
the span of the normal paths parallel to that arrow.  The space of unitary
derivations is the nullspace of the Leibniz system obtained by expanding the
reduced-basis elements of the ideal; inner derivations come from idempotent
combinations and act as integer multiples on each corridor.

Degree-one cohomology is presented as derivations modulo inner derivations
with the commutator bracket.  Each class is stored through a canonical coset
representative: coordinates in the derivation basis with the echelon-pivot
coordinates of the inner subspace zeroed out, so class equality is plain
vector equality.
"""

from __future__ import annotations

from .linalg import Matrix, Subspace, inverse, nullspace, rref
from .pathalg import AlgebraElement, IdealData
from .quiver import Path


class FDAlgebra:
    """A basic finite-dimensional algebra presented by a bound quiver."""

    def __init__(self, ideal: IdealData):
        ok, bad = ideal.is_admissible()
        if not ok:
            raise ValueError(f"ideal is not admissible: short support paths {bad}")
        ideal.quiver.require_valid()
        self.ideal = ideal
        self.quiver = ideal.quiver
        self.field = ideal.field
        self.basis: tuple[Path, ...] = tuple(ideal.normal_paths)
        self.dim = len(self.basis)
        self.index = {p: i for i, p in enumerate(self.basis)}
        self.idempotent_index = {v: self.index[self.quiver.trivial_path(v)] for v in self.quiver.vertices}
        # corridor blocks of the radical: nontrivial normal paths per (src, tgt)
        blocks: dict[tuple[str, str], list[int]] = {}
        for i, p in enumerate(self.basis):
            if not p.is_trivial:
                blocks.setdefault((p.source, p.target), []).append(i)
        self.blocks = {k: tuple(v) for k, v in blocks.items()}
        self._table: dict[tuple[int, int], tuple] = {}
        # unknown coordinates for derivations: per arrow, parallel normal paths
        unknowns = []
        for name in self.quiver.arrow_names:
            a = self.quiver.arrow(name)
            for i in self.blocks.get((a.source, a.target), ()):
                unknowns.append((name, self.basis[i]))
        self.derivation_unknowns: tuple[tuple[str, Path], ...] = tuple(unknowns)
        self._unknown_index = {u: i for i, u in enumerate(self.derivation_unknowns)}

    # ---------- vectors and products ----------

    def vector_of(self, elem: AlgebraElement) -> tuple:
        nf = self.ideal.normal_form(elem)
        vec = [self.field.zero] * self.dim
        for p, c in nf.coeffs.items():
            vec[self.index[p]] = c
        return tuple(vec)

    def element_of(self, vec) -> AlgebraElement:
        return AlgebraElement(
            self.quiver, self.field, {self.basis[i]: vec[i] for i in range(self.dim)}
        )

    def path_vector(self, p: Path) -> tuple:
        return self.vector_of(AlgebraElement.from_path(self.quiver, self.field, p))

    def basis_product(self, i: int, j: int) -> tuple:
        """Vector of basis[i] * basis[j] (right-to-left, j traversed first)."""
        key = (i, j)
        if key not in self._table:
            prod = AlgebraElement.from_path(self.quiver, self.field, self.basis[i]) * AlgebraElement.from_path(self.quiver, self.field, self.basis[j])
            self._table[key] = self.vector_of(prod)
        return self._table[key]

    def multiply_vectors(self, u, v) -> tuple:
        f = self.field
        out = [f.zero] * self.dim
        for i, ci in enumerate(u):
            if f.is_zero(ci):
                continue
            for j, cj in enumerate(v):
                if f.is_zero(cj):
                    continue
                prod = self.basis_product(i, j)
                c = f.mul(ci, cj)
                for k, pk in enumerate(prod):
                    if not f.is_zero(pk):
                        out[k] = f.add(out[k], f.mul(c, pk))
        return tuple(out)

    def unit_vector(self) -> tuple:
        f = self.field
        vec = [f.zero] * self.dim
        for v in self.quiver.vertices:
            vec[self.idempotent_index[v]] = f.one
        return tuple(vec)

    def is_constricted(self) -> bool:
        """Every arrow corridor one-dimensional (the arrow itself spans it)."""
        for name in self.quiver.arrow_names:
            a = self.quiver.arrow(name)
            if len(self.blocks.get((a.source, a.target), ())) != 1:
                return False
        return True

    def __repr__(self):
        return f"FDAlgebra(dim {self.dim} over {self.field}, ideal {self.ideal!r})"


class Derivation:
    """A unitary derivation stored by its arrow images (corridor vectors)."""

    def __init__(self, algebra: FDAlgebra, arrow_images: dict[str, tuple]):
        self.algebra = algebra
        f = algebra.field
        imgs = {}
        for name in algebra.quiver.arrow_names:
            vec = arrow_images.get(name)
            if vec is None:
                vec = tuple([f.zero] * algebra.dim)
            vec = tuple(f.coerce(x) for x in vec)
            a = algebra.quiver.arrow(name)
            allowed = set(algebra.blocks.get((a.source, a.target), ()))
            for i, x in enumerate(vec):
                if not f.is_zero(x) and i not in allowed:
                    raise ValueError(f"image of {name!r} leaves its corridor")
            imgs[name] = vec
        self.arrow_images = imgs
        self._matrix: Matrix | None = None

    @classmethod
    def from_coordinates(cls, algebra: FDAlgebra, coords) -> "Derivation":
        f = algebra.field
        imgs: dict[str, list] = {}
        for (name, path), c in zip(algebra.derivation_unknowns, coords):
            vec = imgs.setdefault(name, [f.zero] * algebra.dim)
            vec[algebra.index[path]] = f.coerce(c)
        return cls(algebra, {n: tuple(v) for n, v in imgs.items()})

    def coordinates(self) -> tuple:
        alg = self.algebra
        return tuple(
            self.arrow_images[name][alg.index[path]] for name, path in alg.derivation_unknowns
        )

    def matrix(self) -> Matrix:
        """Matrix on the algebra basis; columns are images of basis paths."""
        if self._matrix is not None:
            return self._matrix
        alg = self.algebra
        f = alg.field
        q = alg.quiver
        cols = []
        for p in alg.basis:
            if p.is_trivial:
                cols.append([f.zero] * alg.dim)
                continue
            total = [f.zero] * alg.dim
            names = p.arrows
            for i, name in enumerate(names):
                img_vec = self.arrow_images[name]
                if all(f.is_zero(x) for x in img_vec):
                    continue
                img_elem = alg.element_of(img_vec)
                left = (
                    AlgebraElement.from_path(q, f, q.path(names[i + 1:]))
                    if i + 1 < len(names)
                    else AlgebraElement.unit(q, f)
                )
                right = (
                    AlgebraElement.from_path(q, f, q.path(names[:i]))
                    if i > 0
                    else AlgebraElement.unit(q, f)
                )
                term = alg.vector_of(left * img_elem * right)
                total = [f.add(x, y) for x, y in zip(total, term)]
            cols.append(total)
        self._matrix = Matrix.from_columns(f, cols)
        return self._matrix

    def apply_vector(self, vec) -> tuple:
        return self.matrix().mul_vec(vec)

    def leibniz_defect(self, i: int, j: int) -> tuple:
        """d(b_i b_j) - b_i d(b_j) - d(b_i) b_j on basis paths, as a vector."""
        alg = self.algebra
        f = alg.field
        ei = [f.zero] * alg.dim
        ei[i] = f.one
        ej = [f.zero] * alg.dim
        ej[j] = f.one
        lhs = self.apply_vector(alg.multiply_vectors(ei, ej))
        rhs1 = alg.multiply_vectors(ei, self.apply_vector(ej))
        rhs2 = alg.multiply_vectors(self.apply_vector(ei), ej)
        return tuple(f.sub(lhs[k], f.add(rhs1[k], rhs2[k])) for k in range(alg.dim))

    def __eq__(self, other):
        return (
            isinstance(other, Derivation)
            and self.algebra is other.algebra
            and self.arrow_images == other.arrow_images
        )

    def __repr__(self):
        alg = self.algebra
        parts = []
        for name in alg.quiver.arrow_names:
            vec = self.arrow_images[name]
            if any(not alg.field.is_zero(x) for x in vec):
                parts.append(f"{name} -> {alg.element_of(vec)}")
        return "Derivation(" + ("; ".join(parts) or "0") + ")"


def derivation_space(algebra: FDAlgebra) -> list[Derivation]:
    """Canonical basis of the unitary derivations (Leibniz nullspace)."""
    f = algebra.field
    q = algebra.quiver
    unknowns = algebra.derivation_unknowns
    n_unknowns = len(unknowns)
    rows = []
    for rel in algebra.ideal.basis:
        # expand the relation with symbolic arrow images and read off each
        # normal-path coordinate as one linear equation
        contrib: dict[int, dict[int, object]] = {}  # basis idx -> unknown idx -> coeff
        for u_path, u_coeff in rel.coeffs.items():
            names = u_path.arrows
            for i, name in enumerate(names):
                a = q.arrow(name)
                for bi in algebra.blocks.get((a.source, a.target), ()):
                    w = algebra.basis[bi]
                    left = (
                        AlgebraElement.from_path(q, f, q.path(names[i + 1:]))
                        if i + 1 < len(names)
                        else AlgebraElement.unit(q, f)
                    )
                    right = (
                        AlgebraElement.from_path(q, f, q.path(names[:i]))
                        if i > 0
                        else AlgebraElement.unit(q, f)
                    )
                    alg_vec = algebra.vector_of(
                        left * AlgebraElement.from_path(q, f, w) * right
                    )
                    uidx = algebra._unknown_index[(name, w)]
                    for k, c in enumerate(alg_vec):
                        if not f.is_zero(c):
                            cell = contrib.setdefault(k, {})
                            cell[uidx] = f.add(cell.get(uidx, f.zero), f.mul(u_coeff, c))
        for k in sorted(contrib):
            row = [f.zero] * n_unknowns
            nonzero = False
            for uidx, c in contrib[k].items():
                row[uidx] = c
                if not f.is_zero(c):
                    nonzero = True
            if nonzero:
                rows.append(row)
    system = (
        Matrix(f, rows, ncols=n_unknowns) if rows else Matrix.zeros(f, 0, n_unknowns)
    )
    return [Derivation.from_coordinates(algebra, vec) for vec in nullspace(system)]


def inner_derivation(algebra: FDAlgebra, coefficients: dict[str, object]) -> Derivation:
    """The derivation a -> ea - ae for an idempotent combination e."""
    f = algebra.field
    imgs = {}
    for name in algebra.quiver.arrow_names:
        a = algebra.quiver.arrow(name)
        ct = f.coerce(coefficients.get(a.target, f.zero))
        cs = f.coerce(coefficients.get(a.source, f.zero))
        c = f.sub(ct, cs)
        vec = [f.zero] * algebra.dim
        vec[algebra.index[algebra.quiver.arrow_path(name)]] = c
        imgs[name] = tuple(vec)
    return Derivation(algebra, imgs)


def inner_derivation_space(algebra: FDAlgebra) -> list[Derivation]:
    """The span of the per-vertex inner derivations (dimension |Q0| - 1)."""
    f = algebra.field
    vecs = []
    for v in algebra.quiver.vertices:
        vecs.append(inner_derivation(algebra, {v: f.one}).coordinates())
    reduced, _ = rref(Matrix(f, vecs, ncols=len(algebra.derivation_unknowns)))
    return [Derivation.from_coordinates(algebra, row) for row in reduced.rows]


class CohomologyClass:
    """A cohomology class held by its canonical coset-representative vector."""

    __slots__ = ("space", "vector")

    def __init__(self, space: "CohomologySpace", vector):
        self.space = space
        self.vector = tuple(space.field.coerce(x) for x in vector)

    def is_zero(self) -> bool:
        z = self.space.field.zero
        return all(x == z for x in self.vector)

    def representative(self) -> Derivation:
        return self.space.representative(self.vector)

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        f = self.space.field
        return CohomologyClass(self.space, tuple(f.add(x, y) for x, y in zip(self.vector, other.vector)))

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        f = self.space.field
        return CohomologyClass(self.space, tuple(f.sub(x, y) for x, y in zip(self.vector, other.vector)))

    def scale(self, s) -> "CohomologyClass":
        f = self.space.field
        s = f.coerce(s)
        return CohomologyClass(self.space, tuple(f.mul(s, x) for x in self.vector))

    def __eq__(self, other):
        return (
            isinstance(other, CohomologyClass)
            and self.space is other.space
            and self.vector == other.vector
        )

    def __hash__(self):
        return hash(self.vector)

    def __repr__(self):
        return f"CohomologyClass{self.vector}"


class CohomologySpace:
    """Derivations modulo inner derivations, with canonical representatives."""

    def __init__(self, algebra: FDAlgebra):
        self.algebra = algebra
        self.field = algebra.field
        self.der_basis = derivation_space(algebra)
        self.inner_basis = inner_derivation_space(algebra)
        f = self.field
        n_unknowns = len(algebra.derivation_unknowns)
        self._der_matrix = (
            Matrix(f, [d.coordinates() for d in self.der_basis], ncols=n_unknowns)
            if self.der_basis
            else Matrix.zeros(f, 0, n_unknowns)
        )
        # canonical nullspace rows are unit on their free columns, so the
        # coefficient of a derivation on basis row j is its free-column entry
        self._free_columns = self._locate_free_columns()
        inner_coords = [self._der_coefficients(d.coordinates()) for d in self.inner_basis]
        if inner_coords:
            reduced, pivots = rref(Matrix(f, inner_coords, ncols=len(self.der_basis)))
            self._inner_rows = reduced.rows
            self._inner_pivots = pivots
        else:
            self._inner_rows = ()
            self._inner_pivots = ()
        self.dim = len(self.der_basis) - len(self._inner_rows)

    def _locate_free_columns(self) -> tuple[int, ...]:
        f = self.field
        cols = []
        for j, d in enumerate(self.der_basis):
            coords = d.coordinates()
            unit_col = None
            for c_idx, value in enumerate(coords):
                if value == f.one and all(
                    f.is_zero(self.der_basis[k].coordinates()[c_idx]) for k in range(len(self.der_basis)) if k != j
                ):
                    unit_col = c_idx
                    break
            if unit_col is None:
                raise AssertionError("derivation basis is not in canonical form")
            cols.append(unit_col)
        return tuple(cols)

    def _der_coefficients(self, coords) -> tuple:
        f = self.field
        coeffs = tuple(coords[c] for c in self._free_columns)
        # confirm the vector lies in the derivation span
        recon = [f.zero] * len(coords)
        for c, d in zip(coeffs, self.der_basis):
            dc = d.coordinates()
            recon = [f.add(x, f.mul(c, y)) for x, y in zip(recon, dc)]
        if tuple(recon) != tuple(coords):
            raise ValueError("derivation does not satisfy the Leibniz system")
        return coeffs

    def _canonicalize(self, coeffs) -> tuple:
        f = self.field
        v = list(coeffs)
        for row in self._inner_rows:
            lead = next(j for j, x in enumerate(row) if not f.is_zero(x))
            if not f.is_zero(v[lead]):
                factor = v[lead]
                v = [f.sub(x, f.mul(factor, y)) for x, y in zip(v, row)]
        return tuple(v)

    # ---------- classes ----------

    def class_of(self, derivation: Derivation) -> CohomologyClass:
        coeffs = self._der_coefficients(derivation.coordinates())
        return CohomologyClass(self, self._canonicalize(coeffs))

    def zero_class(self) -> CohomologyClass:
        return CohomologyClass(self, [self.field.zero] * len(self.der_basis))

    def basis_classes(self) -> list[CohomologyClass]:
        f = self.field
        pivots = set(self._inner_pivots)
        out = []
        for j in range(len(self.der_basis)):
            if j in pivots:
                continue
            vec = [f.zero] * len(self.der_basis)
            vec[j] = f.one
            out.append(CohomologyClass(self, vec))
        return out

    def representative(self, class_vector) -> Derivation:
        f = self.field
        coords = [f.zero] * len(self.algebra.derivation_unknowns)
        for c, d in zip(class_vector, self.der_basis):
            if f.is_zero(c):
                continue
            dc = d.coordinates()
            coords = [f.add(x, f.mul(c, y)) for x, y in zip(coords, dc)]
        return Derivation.from_coordinates(self.algebra, coords)

    def derivation_from_matrix(self, m: Matrix) -> Derivation:
        """Extract arrow images from a matrix that preserves corridors."""
        alg = self.algebra
        f = self.field
        imgs = {}
        for name in alg.quiver.arrow_names:
            col = m.column(alg.index[alg.quiver.arrow_path(name)])
            a = alg.quiver.arrow(name)
            allowed = set(alg.blocks.get((a.source, a.target), ()))
            for i, x in enumerate(col):
                if not f.is_zero(x) and i not in allowed:
                    raise ValueError("matrix does not preserve corridors on arrows")
            imgs[name] = col
        return Derivation(alg, imgs)

    def bracket(self, f1: CohomologyClass, g1: CohomologyClass) -> CohomologyClass:
        """Commutator bracket computed on canonical representatives."""
        if f1.space is not self or g1.space is not self:
            raise ValueError("classes from a different space")
        mf = f1.representative().matrix()
        mg = g1.representative().matrix()
        fg = mf.mul(mg)
        gf = mg.mul(mf)
        f = self.field
        comm = Matrix(
            f,
            [
                [f.sub(fg.rows[i][j], gf.rows[i][j]) for j in range(fg.ncols)]
                for i in range(fg.nrows)
            ],
        )
        return self.class_of(self.derivation_from_matrix(comm))

    def is_inner(self, derivation: Derivation) -> bool:
        return self.class_of(derivation).is_zero()

    def span(self, classes) -> "ClassSpan":
        return ClassSpan(self, classes)

    def __repr__(self):
        return f"CohomologySpace(dim {self.dim})"


class ClassSpan:
    """A subspace of the cohomology, canonical under echelon reduction."""

    def __init__(self, space: CohomologySpace, classes):
        self.space = space
        vectors = [c.vector for c in classes]
        ambient = len(space.der_basis)
        self.subspace = Subspace(space.field, ambient, vectors)

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def basis_classes(self) -> list[CohomologyClass]:
        return [CohomologyClass(self.space, row) for row in self.subspace.basis]

    def contains(self, cls: CohomologyClass) -> bool:
        return self.subspace.contains(cls.vector)

    def contains_span(self, other: "ClassSpan") -> bool:
        return self.subspace.contains_subspace(other.subspace)

    def __eq__(self, other):
        return isinstance(other, ClassSpan) and self.space is other.space and self.subspace == other.subspace

    def __hash__(self):
        return hash(self.subspace)

    def __repr__(self):
        return f"ClassSpan(dim {self.dim})"


def build_algebra(ideal: IdealData) -> FDAlgebra:
    return FDAlgebra(ideal)


def cohomology_space(algebra: FDAlgebra) -> CohomologySpace:
    return CohomologySpace(algebra)


def induced_algebra_automorphism(algebra: FDAlgebra, rho) -> Matrix:
    """Matrix of the algebra automorphism induced by an ideal-fixing one."""
    if rho.apply_to_ideal(algebra.ideal) != algebra.ideal:
        raise ValueError("automorphism does not fix the defining ideal")
    cols = [algebra.vector_of(rho.apply_path(p)) for p in algebra.basis]
    m = Matrix.from_columns(algebra.field, cols)
    inverse(m)  # raises if the induced map were singular (it never is)
    return m


def conjugate_class(space: CohomologySpace, psi_matrix: Matrix, cls: CohomologyClass) -> CohomologyClass:
    """Push a class forward along an induced algebra automorphism."""
    m = cls.representative().matrix()
    conj = psi_matrix.mul(m).mul(inverse(psi_matrix))
    return space.class_of(space.derivation_from_matrix(conj))
