"""Vectorized point scans over P^2(GF(p^d)).

Internal helpers.  Field elements are carried as their base-p integer
encodings in numpy arrays; multiplication uses discrete log/exp tables
built once per field from exact Scalar arithmetic, and addition is XOR for
p = 2 or digit-wise modular addition otherwise, so every array operation
agrees with Scalar arithmetic (tested exhaustively on small fields).

Points are scanned in a fixed documented order: the affine chart [x:y:1]
lexicographically by (x, y), then the line [x:1:0] by x, then [1:0:0].
Scans are chunked so that even very large levels stay within memory.
"""

import numpy as np

from .finitefield import build_field
from .forms import MONOMIALS, RATIONALS

MAX_SCAN_POINTS = 1_000_000_000
_CACHE_POINT_LIMIT = 2_000_000
_CHUNK = 1 << 19

_tables_cache = {}
_monomial_cache = {}


class FieldTables:
    """Discrete log/exp multiplication and vector addition for one GF(q)."""

    def __init__(self, field):
        q = field.order
        self.field = field
        self.q = q
        self.p = field.p
        self.k = field.k
        gen = self._find_generator(field)
        exp = np.zeros(q - 1, dtype=np.int64) if q > 2 else np.zeros(1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = field.one()
        n = max(q - 1, 1)
        for i in range(n):
            e = cur.encode()
            exp[i] = e
            log[e] = i
            cur = cur * gen
        big = 2 * n + 1
        log[0] = big
        # extended exp table: two periods of exp, zeros beyond, so that
        # EXPX[LOG[a] + LOG[b]] is a*b with no branching on zeros
        expx = np.zeros(4 * n + 4, dtype=np.int64)
        expx[:n] = exp
        expx[n : 2 * n] = exp
        self.exp = exp
        self.log = log
        self.expx = expx
        inv = np.zeros(q, dtype=np.int64)
        if q > 2:
            inv[exp] = exp[(-log[exp]) % n]
        inv[1] = 1
        self.inv_table = inv
        if self.p > 2:
            self.pow_p = np.array([self.p**i for i in range(self.k)], dtype=np.int64)

    @staticmethod
    def _find_generator(field):
        q = field.order
        if q == 2:
            return field.one()
        factors = []
        m = q - 1
        d = 2
        while d * d <= m:
            if m % d == 0:
                factors.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            factors.append(m)
        for enc in range(2, q):
            a = field.scalar(enc)
            if all(not (a ** ((q - 1) // r) == field.one()) for r in factors):
                return a
        raise RuntimeError(f"no generator found for {field}")

    def mul(self, a, b):
        return self.expx[self.log[a] + self.log[b]]

    def mul_const(self, a, c):
        if c == 1:
            return a
        return self.expx[self.log[a] + int(self.log[c])]

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pi in self.pow_p:
            out += (((a // pi) % self.p + (b // pi) % self.p) % self.p) * pi
        return out

    def inv(self, a):
        return self.inv_table[a]


def tables(field):
    key = (field.p, field.k)
    t = _tables_cache.get(key)
    if t is None:
        t = FieldTables(field)
        _tables_cache[key] = t
    return t


def level_field(p, d):
    """The scan field GF(p^d) over a prime base."""
    return build_field(p, d)


def point_count(field):
    q = field.order
    return q * q + q + 1


def iter_point_chunks(field, chunk=_CHUNK):
    """Yield (X, Y, Z, offset) encoding arrays covering P^2 in scan order."""
    q = field.order
    if point_count(field) > MAX_SCAN_POINTS:
        raise ValueError(
            f"scanning P^2({field}) needs {point_count(field)} points; "
            f"the limit is {MAX_SCAN_POINTS}"
        )
    rows = max(1, chunk // q)
    offset = 0
    for x0 in range(0, q, rows):
        xs = np.arange(x0, min(x0 + rows, q), dtype=np.int64)
        n = len(xs) * q
        x = np.repeat(xs, q)
        y = np.tile(np.arange(q, dtype=np.int64), len(xs))
        yield x, y, np.ones(n, dtype=np.int64), offset
        offset += n
    x = np.arange(q, dtype=np.int64)
    yield x, np.ones(q, dtype=np.int64), np.zeros(q, dtype=np.int64), offset
    offset += q
    yield (
        np.array([1], dtype=np.int64),
        np.array([0], dtype=np.int64),
        np.array([0], dtype=np.int64),
        offset,
    )


def monomial_values(t, x, y, z):
    """The ten cubic monomials of the frozen order, evaluated on arrays."""
    x2 = t.mul(x, x)
    y2 = t.mul(y, y)
    z2 = t.mul(z, z)
    return (
        t.mul(x2, x),
        t.mul(x2, y),
        t.mul(x2, z),
        t.mul(x, y2),
        t.mul(t.mul(x, y), z),
        t.mul(x, z2),
        t.mul(y2, y),
        t.mul(y2, z),
        t.mul(y, z2),
        t.mul(z2, z),
    )


def _cached_chunks(field):
    """Materialized point and monomial arrays for small levels."""
    key = (field.p, field.k)
    got = _monomial_cache.get(key)
    if got is None:
        t = tables(field)
        xs, ys, zs = [], [], []
        for x, y, z, _off in iter_point_chunks(field):
            xs.append(x)
            ys.append(y)
            zs.append(z)
        x = np.concatenate(xs)
        y = np.concatenate(ys)
        z = np.concatenate(zs)
        got = (x, y, z, monomial_values(t, x, y, z))
        _monomial_cache[key] = got
    return got


def _form_encodings(form, ext):
    """Coefficient encodings of a form, valid in the extension field.

    Prime-field coefficients embed as constants, whose encodings coincide.
    """
    if form.field is RATIONALS:
        raise ValueError("scan evaluation needs a form over a finite field")
    if form.field.p != ext.p or form.field.k not in (1, ext.k):
        raise ValueError(f"cannot evaluate a form over {form.field} at points of {ext}")
    return tuple(c.encode() for c in form.coeffs)


def _eval(t, coeffs, monos):
    acc = None
    for c, m in zip(coeffs, monos):
        if c == 0:
            continue
        term = m if c == 1 else t.mul_const(m, c)
        acc = term if acc is None else t.add(acc, term)
    if acc is None:
        return np.zeros_like(monos[0])
    return acc


def _scan_chunks(field):
    """Yield (x, y, z, monomials) chunks, cached when the level is small."""
    t = tables(field)
    if point_count(field) <= _CACHE_POINT_LIMIT:
        x, y, z, monos = _cached_chunks(field)
        yield x, y, z, monos
        return
    for x, y, z, _off in iter_point_chunks(field):
        yield x, y, z, monomial_values(t, x, y, z)


def common_zero_encodings(forms, ext):
    """Encoded coordinates of all points of P^2(ext) where every form vanishes."""
    t = tables(ext)
    encs = [_form_encodings(f, ext) for f in forms]
    out = []
    for x, y, z, monos in _scan_chunks(ext):
        mask = None
        for coeffs in encs:
            zero = _eval(t, coeffs, monos) == 0
            mask = zero if mask is None else (mask & zero)
        if mask.any():
            idx = np.nonzero(mask)[0]
            out.extend(zip(x[idx].tolist(), y[idx].tolist(), z[idx].tolist()))
    return out


def count_common_zeros(forms, ext):
    """Number of points of P^2(ext) where every form vanishes."""
    t = tables(ext)
    encs = [_form_encodings(f, ext) for f in forms]
    total = 0
    for x, y, z, monos in _scan_chunks(ext):
        mask = None
        for coeffs in encs:
            zero = _eval(t, coeffs, monos) == 0
            mask = zero if mask is None else (mask & zero)
        total += int(mask.sum())
    return total


def find_witness_encoding(pencil_forms, plane_forms, ext):
    """First point (scan order) where the pencil vanishes but the plane does not."""
    t = tables(ext)
    pencil = [_form_encodings(f, ext) for f in pencil_forms]
    plane = [_form_encodings(f, ext) for f in plane_forms]
    for x, y, z, monos in _scan_chunks(ext):
        mask = None
        for coeffs in pencil:
            zero = _eval(t, coeffs, monos) == 0
            mask = zero if mask is None else (mask & zero)
        if not mask.any():
            continue
        idx = np.nonzero(mask)[0]
        sub = tuple(m[idx] for m in monos)
        outside = None
        for coeffs in plane:
            nz = _eval(t, coeffs, sub) != 0
            outside = nz if outside is None else (outside | nz)
        if outside.any():
            j = idx[np.nonzero(outside)[0][0]]
            return int(x[j]), int(y[j]), int(z[j])
    return None


def covered_target_encodings(forms3, ext, base_p):
    """Normalized images in P^2(GF(base_p)) of all non-base points of P^2(ext).

    Returns a set of (a, b, c) integer triples with entries < base_p: the
    prime-subfield targets hit by the map [f0:f1:f2] on points of the
    extension level, excluding common zeros of all three forms.
    """
    t = tables(ext)
    encs = [_form_encodings(f, ext) for f in forms3]
    covered = set()
    for x, y, z, monos in _scan_chunks(ext):
        f0 = _eval(t, encs[0], monos)
        f1 = _eval(t, encs[1], monos)
        f2 = _eval(t, encs[2], monos)
        a = np.zeros_like(f0)
        b = np.zeros_like(f0)
        c = np.zeros_like(f0)
        m2 = f2 != 0
        if m2.any():
            s = t.inv(f2[m2])
            a[m2] = t.mul(f0[m2], s)
            b[m2] = t.mul(f1[m2], s)
            c[m2] = 1
        m1 = (f2 == 0) & (f1 != 0)
        if m1.any():
            s = t.inv(f1[m1])
            a[m1] = t.mul(f0[m1], s)
            b[m1] = 1
        m0 = (f2 == 0) & (f1 == 0) & (f0 != 0)
        if m0.any():
            a[m0] = 1
        nonbase = m2 | m1 | m0
        rational = nonbase & (a < base_p) & (b < base_p) & (c < base_p)
        if rational.any():
            trip = np.stack([a[rational], b[rational], c[rational]], axis=1)
            for row in np.unique(trip, axis=0):
                covered.add((int(row[0]), int(row[1]), int(row[2])))
    return covered


def decode_point(field, enc_triple):
    """An encoded (x, y, z) triple as a normalized ProjPoint."""
    from .finitefield import ProjPoint

    return ProjPoint(field, [field.scalar(int(v)) for v in enc_triple])
