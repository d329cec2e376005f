"""Linear systems of cubics through plane points, planes and base loci.

A point configuration of n points (1 <= n <= 7) in P^2 determines the
linear system of cubic forms vanishing on it: the kernel of the n x 10
evaluation matrix over the working field, kept in reduced row-echelon form
over the frozen monomial order so the basis is canonical.

Two reference configurations are built in.  "five_point" is
[1:0:0], [0:1:0], [0:0:1], [1:1:1], [2:3:1]; "six_point" adds [3:2:1].
For each there is a verbatim reference basis (the one the dataset
coordinates refer to) and a set of integer generators that reduce into any
GF(p); over GF(2) both routes span the same space.

A plane is a 3-dimensional subsystem spanned by three combinations of the
basis whose coefficient vectors have rank 3 and whose forms share no
common factor; a pencil is a 2-dimensional subsystem of a plane.  The base
locus of a set of forms is computed by scanning P^2(GF(p^d)) for
d = 1..scan_bound and keeping the common zeros of minimal degree exactly d.
"""

import itertools
from fractions import Fraction

from . import _scan
from .finitefield import Field, ProjPoint, build_field, minimal_degree
from .forms import MONOMIALS, RATIONALS, TernaryForm, combine, common_factor_all

FIVE_POINT = "five_point"
SIX_POINT = "six_point"

DEFAULT_SCAN_BOUND = 9

_REFERENCE_POINTS = {
    FIVE_POINT: ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (2, 3, 1)),
    SIX_POINT: ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (2, 3, 1), (3, 2, 1)),
}

# coefficient vectors in the frozen monomial order
# [x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3]
_REFERENCE_BASIS = {
    FIVE_POINT: (
        (0, 1, 0, 0, 0, 0, 0, 1, 0, 0),   # x^2*y + y^2*z
        (0, 0, 0, 1, 0, 0, 0, 1, 0, 0),   # x*y^2 + y^2*z
        (0, 0, 1, 0, 0, 0, 0, 1, 0, 0),   # x^2*z + y^2*z
        (0, 0, 0, 0, 1, 0, 0, 0, 0, 0),   # x*y*z
        (0, 0, 0, 0, 0, 1, 0, 0, 1, 0),   # x*z^2 + y*z^2
    ),
    SIX_POINT: (
        (0, 1, 0, 0, 0, 1, 0, 1, 1, 0),   # x^2*y + y^2*z + x*z^2 + y*z^2
        (0, 0, 0, 1, 0, 0, 0, -1, 0, 0),  # x*y^2 - y^2*z
        (0, 0, 1, 0, 0, 0, 0, 1, 0, 0),   # x^2*z + y^2*z
        (0, 0, 0, 0, 1, 1, 0, 0, 1, 0),   # x*y*z + x*z^2 + y*z^2
    ),
}

# integer generators; the last one, z*(x-y)*(y-x-z), is dropped for six_point
_INTEGER_GENERATORS = (
    (0, 1, 0, 0, 0, -1, 0, 3, -3, 0),   # x^2*y + 3y^2*z - x*z^2 - 3y*z^2
    (0, 0, 0, 1, 0, -2, 0, 3, -2, 0),   # x*y^2 + 3y^2*z - 2x*z^2 - 2y*z^2
    (0, 0, 1, 0, 0, 2, 0, -1, -2, 0),   # x^2*z - y^2*z + 2x*z^2 - 2y*z^2
    (0, 0, 0, 0, 1, 3, 0, 0, 3, 0),     # x*y*z + 3x*z^2 + 3y*z^2
    (0, 0, -1, 0, 2, -1, 0, -1, 1, 0),  # z*(x-y)*(y-x-z)
)


def iter_vectors(p, length):
    """All coefficient vectors in (GF(p))^length, lexicographic, leftmost major."""
    return itertools.product(range(p), repeat=length)


class PointConfig:
    """1..7 pairwise distinct plane points with integer coordinates."""

    __slots__ = ("points",)

    def __init__(self, points):
        pts = tuple(tuple(int(c) for c in pt) for pt in points)
        if not 1 <= len(pts) <= 7:
            raise ValueError(f"a configuration needs 1..7 points, got {len(pts)}")
        for pt in pts:
            if len(pt) != 3 or all(c == 0 for c in pt):
                raise ValueError(f"bad projective point {pt}")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        self.points = pts

    @property
    def delta(self):
        return 9 - len(self.points)

    def __repr__(self):
        return f"PointConfig({list(self.points)})"


def reference_points(case):
    """The built-in point configuration for a reference case."""
    if case not in _REFERENCE_POINTS:
        raise ValueError(f"unknown case {case!r}; expected {FIVE_POINT!r} or {SIX_POINT!r}")
    return PointConfig(_REFERENCE_POINTS[case])


class CubicSystem:
    """A linear system of cubics: an ordered basis of forms over one field."""

    __slots__ = ("field", "basis", "provenance")

    def __init__(self, field, basis, provenance):
        basis = tuple(basis)
        if not basis:
            raise ValueError("a cubic system needs at least one basis form")
        for f in basis:
            if f.field != field and not (f.field is RATIONALS and field is RATIONALS):
                raise ValueError("basis forms must live over the system field")
        self.field = field
        self.basis = basis
        self.provenance = provenance

    @property
    def dim(self):
        return len(self.basis)

    def __repr__(self):
        return f"CubicSystem(dim={self.dim}, field={self.field}, {self.provenance})"


# -- generic dense linear algebra over a field (Scalars or Fractions) --


def _is_zero(x):
    return x == 0 if isinstance(x, Fraction) else x.is_zero()


def _inv(x):
    return 1 / x if isinstance(x, Fraction) else x.inverse()


def _rref(rows):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if not _is_zero(rows[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = _inv(rows[r][c])
        rows[r] = [inv * v for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not _is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _kernel_basis(rows, ncols, zero, one):
    """Canonical (RREF) basis of the right kernel of a matrix."""
    rref, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for j in free:
        vec = [zero] * ncols
        vec[j] = one
        for i, c in enumerate(pivots):
            vec[c] = zero - rref[i][j]
        basis.append(vec)
    canon, _ = _rref(basis)
    return canon


def vanishing_cubics(cfg, field):
    """The system of cubics vanishing on a configuration, canonical basis.

    field is a Field (points are reduced mod p; reductions must stay
    pairwise distinct) or RATIONALS.
    """
    if field is RATIONALS:
        pts = [tuple(Fraction(c) for c in pt) for pt in cfg.points]
        if len({_normalize_rational(pt) for pt in pts}) != len(pts):
            raise ValueError("points collide over the rationals")
        zero, one = Fraction(0), Fraction(1)
        rows = []
        for x, y, z in pts:
            rows.append([x**i * y**j * z**k for (i, j, k) in MONOMIALS])
    else:
        pts = [ProjPoint(field, pt) for pt in cfg.points]
        if len(set(pts)) != len(pts):
            raise ValueError(f"points collide after reduction into {field}")
        zero, one = field.zero(), field.one()
        rows = []
        for pt in pts:
            x, y, z = pt.coords
            rows.append([x**i * y**j * z**k for (i, j, k) in MONOMIALS])
    kernel = _kernel_basis(rows, 10, zero, one)
    if not kernel:
        raise ValueError("no cubics vanish on the configuration")
    basis = [TernaryForm(field, row) for row in kernel]
    return CubicSystem(field, basis, "computed-from-points")


def _normalize_rational(pt):
    for c in reversed(pt):
        if c != 0:
            return tuple(v / c for v in pt)
    raise ValueError("(0:0:0) is not a projective point")


def reference_system(case, field=RATIONALS):
    """The verbatim reference basis for a case, over Q or reduced into GF(p)."""
    if case not in _REFERENCE_BASIS:
        raise ValueError(f"unknown case {case!r}; expected {FIVE_POINT!r} or {SIX_POINT!r}")
    rows = _REFERENCE_BASIS[case]
    basis = [TernaryForm(field, row) for row in rows]
    return CubicSystem(field, basis, "fixture")


def reduced_generator_system(case, p):
    """Integer generators reduced mod p, RREF-canonicalized row space."""
    if case not in _REFERENCE_BASIS:
        raise ValueError(f"unknown case {case!r}; expected {FIVE_POINT!r} or {SIX_POINT!r}")
    field = build_field(p)
    gens = _INTEGER_GENERATORS if case == FIVE_POINT else _INTEGER_GENERATORS[:-1]
    rows = [[field.scalar(c) for c in g] for g in gens]
    rref, _ = _rref(rows)
    if not rref:
        raise ValueError(f"integer generators vanish identically mod {p}")
    basis = [TernaryForm(field, row) for row in rref]
    return CubicSystem(field, basis, "reduced-generators")


def same_span(sys1, sys2):
    """Whether two systems over the same field span the same space of cubics."""
    if sys1.field != sys2.field:
        return False

    def rref_of(sys):
        rows = [list(f.coeffs) for f in sys.basis]
        rref, _ = _rref(rows)
        return [tuple(r) for r in rref]

    return rref_of(sys1) == rref_of(sys2)


class Plane:
    """A rank-3 subsystem of a cubic system with coprime spanning forms."""

    __slots__ = ("system", "vectors", "forms")

    def __init__(self, system, vectors, forms):
        self.system = system
        self.vectors = vectors
        self.forms = forms

    @property
    def field(self):
        return self.system.field

    def __repr__(self):
        return f"Plane{self.vectors}"


class PencilSpec:
    """A pencil inside a plane, spanned by two coefficient vectors."""

    __slots__ = ("plane", "a", "b", "forms")

    def __init__(self, plane, a, b, forms):
        self.plane = plane
        self.a = a
        self.b = b
        self.forms = forms

    def __repr__(self):
        return f"PencilSpec(a={self.a}, b={self.b})"


def make_plane(system, v, u, t):
    """Build a plane from three coefficient vectors, or None if rejected.

    Rejection reasons: the stacked vectors have rank < 3 over the system
    field, or the three combined forms share a nonconstant factor.
    """
    field = system.field
    if field is RATIONALS:
        raise ValueError("planes are built over finite fields")
    vecs = []
    for w in (v, u, t):
        w = tuple(int(c) % field.p for c in w)
        if len(w) != system.dim:
            raise ValueError(f"coefficient vector length {len(w)} != system dim {system.dim}")
        vecs.append(w)
    rows = [[field.scalar(c) for c in w] for w in vecs]
    rref, _ = _rref(rows)
    if len(rref) < 3:
        return None
    forms = [combine(w, system.basis) for w in vecs]
    if any(f.is_zero() for f in forms):
        return None
    if common_factor_all(forms):
        return None
    return Plane(system, tuple(vecs), tuple(forms))


def pencil(plane, a, b):
    """The pencil of a plane spanned by coefficient vectors a and b."""
    field = plane.field
    a = tuple(int(c) % field.p for c in a)
    b = tuple(int(c) % field.p for c in b)
    if len(a) != 3 or len(b) != 3:
        raise ValueError("pencil coefficient vectors have length 3")
    forms = (combine(a, plane.forms), combine(b, plane.forms))
    return PencilSpec(plane, a, b, forms)


class BaseLocus:
    """Base locus of a set of forms: positive-dimensional flag or points by degree."""

    __slots__ = ("positive_dimensional", "points_by_degree", "scan_bound")

    def __init__(self, positive_dimensional, points_by_degree, scan_bound):
        self.positive_dimensional = positive_dimensional
        self.points_by_degree = points_by_degree
        self.scan_bound = scan_bound

    def total_points(self):
        return sum(len(v) for v in self.points_by_degree.values())

    def __repr__(self):
        if self.positive_dimensional:
            return "BaseLocus(positive-dimensional)"
        counts = {d: len(v) for d, v in self.points_by_degree.items() if v}
        return f"BaseLocus({counts})"


def _require_prime_base(forms):
    field = forms[0].field
    if field is RATIONALS or not isinstance(field, Field):
        raise ValueError("base-locus scans run over finite fields")
    if field.k != 1:
        raise ValueError("base-locus scans are implemented over prime base fields")
    for f in forms:
        if f.field != field:
            raise ValueError("mixed fields in base-locus scan")
    return field


def base_locus(forms, scan_bound=DEFAULT_SCAN_BOUND):
    """Common zeros of 1..3 nonzero forms over GF(p^d), d = 1..scan_bound.

    Positive-dimensionality (a shared factor, or a single form) is detected
    exactly first; in that case the point scan is skipped.  Otherwise
    points_by_degree[d] lists the common zeros of minimal degree exactly d,
    sorted by coordinate encoding.
    """
    forms = list(forms)
    if not 1 <= len(forms) <= 3:
        raise ValueError("base_locus expects 1..3 forms")
    for f in forms:
        if f.is_zero():
            raise ValueError("base_locus needs nonzero forms")
    field = _require_prime_base(forms)
    if scan_bound < 1:
        raise ValueError("scan_bound must be at least 1")
    positive = common_factor_all(forms)
    points = {}
    if not positive:
        for d in range(1, scan_bound + 1):
            ext = _scan.level_field(field.p, d)
            found = []
            for enc in sorted(_scan.common_zero_encodings(forms, ext)):
                pt = _scan.decode_point(ext, enc)
                if minimal_degree(pt) == d:
                    found.append(pt)
            points[d] = found
    return BaseLocus(positive, points, scan_bound)
