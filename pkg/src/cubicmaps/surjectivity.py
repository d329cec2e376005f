"""Unruly-pencil surjectivity criterion and an independent forward oracle.

A plane of cubics defines the rational map f = [f0:f1:f2].  A pencil
inside the plane is *unruly* when its base locus is 0-dimensional and
adds no geometric point to the base locus of the plane: scanning levels
GF(q^d) for d = 1..scan_bound finds no common zero of the pencil at which
some plane form is nonzero.  The plane's label is 0 exactly when some
rational pencil is unruly, and 1 otherwise.

The forward oracle checks the same property from the image side: a target
point of P^2(GF(q)) is covered iff its annihilator pencil (combinations
c0*f0 + c1*f1 + c2*f2 with c orthogonal to the target) is
positive-dimensional, or some source point over GF(q^d), d <= source_bound,
outside the plane's base locus maps onto it.  For coprime cubics the
geometric base points of a pencil have degree at most 9 (Bezout), so
scan_bound = 9 is exhaustive and label 1 must coincide with an empty
uncovered set.

Only pencils rational over the base field are scanned, so label 1
certifies surjectivity onto GF(q)-rational targets.
"""

from . import _scan
from .finitefield import enumerate_p2
from .forms import combine, evaluate, has_common_factor
from .linsys import DEFAULT_SCAN_BOUND, Plane, iter_vectors, make_plane, pencil, vanishing_cubics

UNRULY = "unruly"
NOT_UNRULY = "not_unruly"
POSITIVE_DIMENSIONAL = "positive_dimensional"


class UnrulyVerdict:
    """Outcome of testing one pencil; witness present iff status is not_unruly."""

    __slots__ = ("status", "witness")

    def __init__(self, status, witness=None):
        self.status = status
        self.witness = witness

    def __repr__(self):
        if self.witness is not None:
            return f"UnrulyVerdict({self.status}, witness={self.witness})"
        return f"UnrulyVerdict({self.status})"


class SurjectivityLabel:
    """Label of a plane: 0 iff unruly_pencils is nonempty."""

    __slots__ = ("value", "unruly_pencils")

    def __init__(self, value, unruly_pencils):
        self.value = value
        self.unruly_pencils = tuple(unruly_pencils)

    def __repr__(self):
        return f"SurjectivityLabel({self.value}, unruly={list(self.unruly_pencils)})"


def _mod_inverse(a, p):
    return pow(a, p - 2, p)


def _subspace_key(p, a, b):
    """RREF key of the 2-space spanned by a, b over GF(p); None if dependent."""
    rows = [[c % p for c in a], [c % p for c in b]]
    r = 0
    for c in range(3):
        piv = None
        for i in range(r, 2):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = _mod_inverse(rows[r][c], p)
        rows[r] = [(inv * v) % p for v in rows[r]]
        for i in range(2):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == 2:
            break
    if r < 2:
        return None
    return (tuple(rows[0]), tuple(rows[1]))


def test_pencil(plane, a, b, scan_bound=DEFAULT_SCAN_BOUND):
    """Verdict for the pencil of a plane spanned by coefficient vectors a, b.

    Dependent vectors or a shared factor of the two combined forms give
    positive_dimensional.  Otherwise GF(q^d) is scanned for d ascending;
    the first common zero of the pencil at which some plane form is
    nonzero is returned as a not_unruly witness, and exhausting all levels
    gives unruly.
    """
    field = plane.field
    p = field.p
    if len(a) != 3 or len(b) != 3:
        raise ValueError("pencil coefficient vectors have length 3")
    if _subspace_key(p, a, b) is None:
        return UnrulyVerdict(POSITIVE_DIMENSIONAL)
    spec = pencil(plane, a, b)
    f, g = spec.forms
    if f.is_zero() or g.is_zero() or has_common_factor(f, g):
        return UnrulyVerdict(POSITIVE_DIMENSIONAL)
    for d in range(1, scan_bound + 1):
        ext = _scan.level_field(p, d)
        enc = _scan.find_witness_encoding(spec.forms, plane.forms, ext)
        if enc is not None:
            pt = _scan.decode_point(ext, enc)
            if not all(evaluate(h, pt).is_zero() for h in spec.forms):
                raise AssertionError("witness fails pencil-vanishing recheck")
            if all(evaluate(h, pt).is_zero() for h in plane.forms):
                raise AssertionError("witness fails plane-nonvanishing recheck")
            return UnrulyVerdict(NOT_UNRULY, pt)
    return UnrulyVerdict(UNRULY)


def label_plane(plane, scan_bound=DEFAULT_SCAN_BOUND, find_all=False):
    """Label a plane by scanning all rational pencils in deterministic order.

    Pencil coefficient pairs (a, b) run lexicographically over (GF(p)^3)^2;
    verdicts are memoized per 2-subspace since they are basis-invariant.
    With find_all the scan continues past the first unruly pencil and
    collects every unruly (a, b) pair.
    """
    p = plane.field.p
    vectors = list(iter_vectors(p, 3))
    verdicts = {}
    unruly = []
    admissible = 0
    for a in vectors:
        for b in vectors:
            key = _subspace_key(p, a, b)
            if key is None:
                continue
            verdict = verdicts.get(key)
            if verdict is None:
                verdict = test_pencil(plane, a, b, scan_bound)
                verdicts[key] = verdict
            if verdict.status != POSITIVE_DIMENSIONAL:
                admissible += 1
            if verdict.status == UNRULY:
                unruly.append((a, b))
                if not find_all:
                    return SurjectivityLabel(0, unruly)
    if admissible == 0:
        raise ValueError("plane admits no 0-dimensional pencil")
    return SurjectivityLabel(0 if unruly else 1, unruly)


def _annihilator_positive_dimensional(plane, target):
    """Whether the pencil annihilating a target has a shared factor."""
    coords = target.coords
    field = plane.field
    idx = max(i for i, c in enumerate(coords) if not c.is_zero())
    basis = []
    for j in range(3):
        if j == idx:
            continue
        vec = [field.zero()] * 3
        vec[j] = field.one()
        vec[idx] = field.zero() - coords[j] / coords[idx]
        basis.append(combine(vec, plane.forms))
    f, g = basis
    if f.is_zero() or g.is_zero():
        return True
    return has_common_factor(f, g)


def forward_oracle(plane, source_bound=DEFAULT_SCAN_BOUND):
    """Targets of P^2(GF(q)) not reached by the map, as a sorted list.

    A target is covered when its annihilator pencil is
    positive-dimensional, or when a source point over GF(q^d) for some
    d <= source_bound, outside the plane's base locus, maps onto it.
    A plane labeled 1 must give an empty list at source_bound 9.
    """
    field = plane.field
    if field.k != 1:
        raise ValueError("the forward oracle runs over prime base fields")
    p = field.p
    remaining = {t.encode(): t for t in enumerate_p2(field)}
    ext = _scan.level_field(p, 1)
    for enc in _scan.covered_target_encodings(plane.forms, ext, p):
        remaining.pop(enc, None)
    for enc, target in list(remaining.items()):
        if _annihilator_positive_dimensional(plane, target):
            del remaining[enc]
    for d in range(2, source_bound + 1):
        if not remaining:
            break
        ext = _scan.level_field(p, d)
        for enc in _scan.covered_target_encodings(plane.forms, ext, p):
            remaining.pop(enc, None)
    return [remaining[enc] for enc in sorted(remaining)]


def find_unruly_seven_points(cfg, field, scan_bound=2):
    """First unruly pencil of the net of cubics through 7 points, or None.

    The system of cubics vanishing on the configuration must be
    3-dimensional (general position); it is then itself treated as the
    plane and all rational pencils are scanned.  scan_bound = 2 is
    exhaustive here: a 0-dimensional pencil of cubics has at most 9
    geometric base points, at least 7 of which are the rational
    configuration points, so any witness lies in an orbit of size at most
    2 and hence over GF(q^2).
    """
    if len(cfg.points) != 7:
        raise ValueError("the search needs exactly 7 points")
    system = vanishing_cubics(cfg, field)
    if system.dim != 3:
        raise ValueError(
            f"configuration is too special: expected a 3-dimensional system, got {system.dim}"
        )
    plane = make_plane(system, (1, 0, 0), (0, 1, 0), (0, 0, 1))
    if plane is None:
        raise ValueError("configuration is too special: the system has a fixed component")
    p = field.p
    vectors = list(iter_vectors(p, 3))
    seen = set()
    for a in vectors:
        for b in vectors:
            key = _subspace_key(p, a, b)
            if key is None or key in seen:
                continue
            seen.add(key)
            verdict = test_pencil(plane, a, b, scan_bound)
            if verdict.status == UNRULY:
                return pencil(plane, a, b)
    return None
