"""Exact rational matrices and the category MatQ_N (objects 0..N, arrows m -> n are n x m matrices)."""
from fractions import Fraction
from functools import lru_cache

from .errors import MalformedTable


class Matrix:
    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows, cols, entries):
        self.rows, self.cols = rows, cols
        self.entries = tuple(Fraction(x) for x in entries)
        if len(self.entries) != rows * cols:
            raise MalformedTable(f"matrix of shape {rows}x{cols} needs {rows * cols} entries")
        self._hash = hash((rows, cols, self.entries))

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = [list(r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n):
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def scalar(cls, n, c):
        return cls(n, n, [c if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise MalformedTable(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return _product(self, other)

    def _multiply(self, other):
        n, k, m = self.rows, self.cols, other.cols
        out = []
        for i in range(n):
            r = self.entries[i * k:(i + 1) * k]
            for j in range(m):
                out.append(sum((r[t] * other.entries[t * m + j] for t in range(k)), Fraction(0)))
        return Matrix(n, m, out)

    def __add__(self, other):
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def scale(self, c):
        return Matrix(self.rows, self.cols, [c * a for a in self.entries])

    def trace(self):
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def inverse(self):
        """Gauss-Jordan over Q; None when singular or non-square."""
        return _inverse(self)

    def _invert(self):
        if self.rows != self.cols:
            return None
        n = self.rows
        a = [list(self.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                return None
            a[col], a[piv] = a[piv], a[col]
            p = a[col][col]
            a[col] = [x / p for x in a[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return Matrix(n, n, [x for r in a for x in r[n:]])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (self.rows, self.cols, self.entries) < (other.rows, other.cols, other.entries)

    def to_json(self):
        return [[_q(x) for x in self.row(i)] for i in range(self.rows)] if self.cols else [[] for _ in range(self.rows)]

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {[str(x) for x in self.entries]})"


# the same few matrices are multiplied over and over by the cone checks
@lru_cache(maxsize=1 << 16)
def _product(a, b):
    return a._multiply(b)


@lru_cache(maxsize=1 << 14)
def _inverse(a):
    return a._invert()


def _q(x):
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s):
    return Fraction(s)


def direct_sum(a, b):
    rows, cols = a.rows + b.rows, a.cols + b.cols
    out = [Fraction(0)] * (rows * cols)
    for i in range(a.rows):
        for j in range(a.cols):
            out[i * cols + j] = a[i, j]
    for i in range(b.rows):
        for j in range(b.cols):
            out[(a.rows + i) * cols + a.cols + j] = b[i, j]
    return Matrix(rows, cols, out)


class MatQ:
    """Objects are dimensions 0..N; hom-sets are infinite, so only composition is offered."""

    def __init__(self, n):
        self.n = n
        self.name = f"MatQ_{n}"
        self.objects = list(range(n + 1))

    def src(self, m):
        return m.cols

    def tgt(self, m):
        return m.rows

    def identity(self, d):
        return Matrix.identity(d)

    def compose(self, g, f):
        return g @ f

    def inverse(self, m):
        return m.inverse()

    def is_iso(self, m):
        return m.inverse() is not None

    def hom(self, a, b):
        raise NotImplementedError("MatQ hom-sets are infinite")

    def has_object(self, d):
        return isinstance(d, int) and 0 <= d <= self.n

    def center(self):
        """Scalars used as natural automorphisms of the identity functor (a finite sample of Q^x)."""
        return [Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2), Fraction(-3), Fraction(-1, 3)]
