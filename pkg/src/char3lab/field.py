"""Exact arithmetic in GF(3) and its extensions GF(3^q).

Elements are coordinate vectors in the power basis of GF(3)[x]/(modulus).
Everything is immutable and deterministic: the default modulus for degree q
is the lexicographically smallest monic irreducible polynomial over GF(3).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DivisionByZero, NoEmbedding, NotASquare, ReducibleModulus

# ---------------------------------------------------------------------------
# GF(3)[x] helpers on coefficient tuples (low-to-high degree)


def _trim(p: Sequence[int]) -> tuple[int, ...]:
    p = [c % 3 for c in p]
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _poly_add(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _trim(out)


def _poly_divmod(a, b):
    """Division in GF(3)[x]; b must be nonzero."""
    a = list(_trim(a))
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], 1, 3)
    inv_lead = {1: 1, 2: 2}[inv_lead]  # 1/1=1, 1/2=2 mod 3
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        factor = (a[-1] * inv_lead) % 3
        q[shift] = factor
        for i, cb in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * cb) % 3
        while a and a[-1] == 0:
            a.pop()
    return _trim(q), _trim(a)


def _monic_polys(degree: int) -> Iterator[tuple[int, ...]]:
    """All monic polynomials of exact `degree` over GF(3), lexicographic in
    (c0, c1, ..., c_{degree-1})."""
    for tail in itertools.product(range(3), repeat=degree):
        yield tuple(tail) + (1,)


def _is_irreducible(p: tuple[int, ...]) -> bool:
    deg = len(p) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(d):
            if not _poly_divmod(p, f)[1]:
                return False
    return True


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """A concrete construction of GF(3^q) as GF(3)[x]/(modulus)."""

    q: int
    modulus: tuple[int, ...]  # length q+1, monic, low-to-high

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("extension degree must be positive")
        if len(self.modulus) != self.q + 1 or self.modulus[-1] % 3 != 1:
            raise ReducibleModulus(f"modulus must be monic of degree {self.q}")
        if not _is_irreducible(self.modulus):
            raise ReducibleModulus(f"modulus {list(self.modulus)} factors over GF(3)")
        # x^k mod modulus for k = q .. 2q-2, used to fold products back down
        table = []
        cur = _trim(self.modulus[:-1])
        cur = tuple((-c) % 3 for c in cur) + (0,) * (self.q - len(cur))  # x^q
        table.append(cur)
        for _ in range(self.q - 2):
            shifted = (0,) + cur
            if len(shifted) > self.q:
                top = shifted[self.q]
                shifted = shifted[: self.q]
                if top:
                    shifted = tuple((shifted[i] + top * table[0][i]) % 3 for i in range(self.q))
            cur = tuple(c % 3 for c in shifted) + (0,) * (self.q - len(shifted))
            cur = cur[: self.q]
            table.append(cur)
        object.__setattr__(self, "_red_table", tuple(table))

    # -- element constructors ------------------------------------------------

    def element(self, coeffs: Sequence[int]) -> "FieldElement":
        c = [x % 3 for x in coeffs]
        if len(c) > self.q:
            raise ValueError("too many coordinates")
        c += [0] * (self.q - len(c))
        return FieldElement(self, tuple(c))

    def from_int(self, n: int) -> "FieldElement":
        return self.element([n % 3])

    @property
    def zero(self) -> "FieldElement":
        return self.element([])

    @property
    def one(self) -> "FieldElement":
        return self.element([1])

    @property
    def order(self) -> int:
        return 3**self.q

    @property
    def char(self) -> int:
        return 3

    def generator_poly(self) -> "FieldElement":
        """The class of x, i.e. the power-basis generator."""
        return self.element([0, 1])

    def elements(self) -> Iterator["FieldElement"]:
        for coeffs in itertools.product(range(3), repeat=self.q):
            yield FieldElement(self, coeffs)

    def random(self, rng) -> "FieldElement":
        return FieldElement(self, tuple(rng.randrange(3) for _ in range(self.q)))

    def random_nonzero(self, rng) -> "FieldElement":
        while True:
            a = self.random(rng)
            if not a.is_zero():
                return a

    # -- serialization -------------------------------------------------------

    def text(self) -> str:
        return f"3^{self.q}/[{','.join(str(c) for c in self.modulus)}]"

    @staticmethod
    def parse(s: str) -> "FieldSpec":
        head, _, mod = s.partition("/")
        q = int(head.split("^")[1])
        coeffs = tuple(int(c) for c in mod.strip("[]").split(","))
        return FieldSpec(q, coeffs)

    def __repr__(self):
        return f"GF(3^{self.q})"


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    coeffs: tuple[int, ...]

    def _check(self, other: "FieldElement"):
        if self.spec != other.spec:
            raise ValueError("elements from different fields")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.spec, tuple((a + b) % 3 for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.spec, tuple((a - b) % 3 for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return FieldElement(self.spec, tuple((-a) % 3 for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        q = self.spec.q
        a, b = self.coeffs, other.coeffs
        out = [0] * (2 * q - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        res = [c % 3 for c in out[:q]]
        table = self.spec._red_table
        for k in range(q, 2 * q - 1):
            c = out[k] % 3
            if c:
                row = table[k - q]
                for i in range(q):
                    res[i] = (res[i] + c * row[i]) % 3
        return FieldElement(self.spec, tuple(res))

    def inv(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        # extended Euclid in GF(3)[x]
        a, b = _trim(self.coeffs), self.spec.modulus
        s0, s1 = (1,), ()
        while b:
            qq, r = _poly_divmod(a, b)
            a, b = b, r
            s0, s1 = s1, _poly_add(s0, tuple((-c) % 3 for c in _poly_mul(qq, s1)))
        # a is now the gcd (a nonzero constant); normalize
        lead_inv = {1: 1, 2: 2}[a[0]]
        return self.spec.element([c * lead_inv for c in s0])

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = self.spec.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __hash__(self):
        return hash((self.spec.q, self.spec.modulus, self.coeffs))

    def text(self) -> str:
        return f"[{','.join(str(c) for c in self.coeffs)}]"

    def __repr__(self):
        return self.text()


# ---------------------------------------------------------------------------


def make_field(q: int, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build GF(3^q), choosing the lexicographically smallest monic
    irreducible modulus when none is given."""
    if modulus is not None:
        return FieldSpec(q, _trim(modulus) if len(_trim(modulus)) == q + 1 else tuple(modulus))
    if q == 1:
        return FieldSpec(1, (0, 1))
    for p in _monic_polys(q):
        if _is_irreducible(p):
            return FieldSpec(q, p)
    raise RuntimeError("unreachable: irreducibles exist in every degree")


def parse_element(spec: FieldSpec, s: str) -> FieldElement:
    return spec.element([int(c) for c in s.strip("[]").split(",")])


_EXHAUSTIVE_SQRT_BOUND = 729


def sqrt(a: FieldElement) -> FieldElement:
    """A square root of `a`, canonicalized to the lexicographically smaller of
    the two roots. Raises NotASquare when none exists."""
    spec = a.spec
    if a.is_zero():
        return a
    n = spec.order - 1
    if a ** (n // 2) != spec.one:
        raise NotASquare(f"{a} is not a square in {spec}")
    if spec.order <= _EXHAUSTIVE_SQRT_BOUND:
        for s in spec.elements():
            if s * s == a:
                return min(s, -s, key=lambda e: e.coeffs)
        raise NotASquare("unreachable")
    s = _tonelli_shanks(a)
    return min(s, -s, key=lambda e: e.coeffs)


def _tonelli_shanks(a: FieldElement) -> FieldElement:
    spec = a.spec
    n = spec.order - 1
    if spec.order % 4 == 3:
        return a ** ((spec.order + 1) // 4)
    # write n = t * 2^e with t odd
    e, t = 0, n
    while t % 2 == 0:
        e += 1
        t //= 2
    # deterministic non-residue: first element (enumeration order) failing Euler
    for g in spec.elements():
        if not g.is_zero() and g ** (n // 2) != spec.one:
            break
    z = g**t
    x = a ** ((t + 1) // 2)
    b = a**t
    m = e
    while b != spec.one:
        # find least i with b^(2^i) = 1
        i, bb = 0, b
        while bb != spec.one:
            bb = bb * bb
            i += 1
        w = z ** (2 ** (m - i - 1))
        z = w * w
        b = b * z
        x = x * w
        m = i
    return x


def cube_root(a: FieldElement) -> FieldElement:
    """Inverse Frobenius: the unique c with c^3 = a."""
    return a ** (3 ** (a.spec.q - 1))


_EMBEDDINGS: dict[tuple[FieldSpec, FieldSpec], FieldElement] = {}


def _embedding_root(src: FieldSpec, target: FieldSpec) -> FieldElement:
    """Lexicographically smallest root of src.modulus inside target."""
    key = (src, target)
    if key in _EMBEDDINGS:
        return _EMBEDDINGS[key]
    mod = src.modulus
    for cand in target.elements():
        acc = target.zero
        p = target.one
        for c in mod:
            if c:
                acc = acc + target.from_int(c) * p
            p = p * cand
        if acc.is_zero():
            _EMBEDDINGS[key] = cand
            return cand
    raise NoEmbedding(f"no root of the {src} modulus found in {target}")


def embed(a: FieldElement, target: FieldSpec) -> FieldElement:
    if a.spec == target:
        return a
    if target.q % a.spec.q != 0:
        raise NoEmbedding(f"degree {a.spec.q} does not divide {target.q}")
    root = _embedding_root(a.spec, target)
    acc = target.zero
    p = target.one
    for c in a.coeffs:
        if c:
            acc = acc + target.from_int(c) * p
        p = p * root
    return acc


def sqrt_minus_one(spec: FieldSpec) -> FieldElement:
    """The canonical square root of -1; requires an even-degree field."""
    if spec.q % 2 != 0:
        raise NotASquare("-1 is a square only in even-degree extensions of GF(3)")
    return sqrt(-spec.one)
