"""Exterior algebra of R^n over ParamScalar, with bitmask-indexed bases.

Index subsets I of {1..n} are stored as bitmasks (bit j-1 <-> index j), which
gives a canonical total order for free and makes sign bookkeeping a popcount.
"""

from __future__ import annotations

from itertools import combinations

from .scalars import ParamScalar, PS_ONE, QQ

__all__ = [
    "DimensionMismatchError",
    "DegreeError",
    "mask_of",
    "indices_of",
    "wedge_sign",
    "subsets_of_size",
    "Multivector",
    "wedge",
    "interior",
    "exterior_mul",
    "tensor",
    "Endo",
    "EndoPoly",
    "eps_j",
    "iota_j",
    "eps_v",
    "iota_v",
    "identity_endo",
    "endo_word",
    "iota_x_eps_x",
    "eps_x_iota_x",
    "iota_x_eps_j",
    "eps_x_iota_j",
    "q_poly",
]


class DimensionMismatchError(ValueError):
    pass


class DegreeError(ValueError):
    pass


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        b = 1 << (i - 1)
        if m & b:
            raise ValueError(f"repeated index {i}")
        m |= b
    return m


def indices_of(mask: int) -> tuple:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def wedge_sign(ma: int, mb: int) -> int:
    """Sign of e_A^* ^ e_B^* relative to e_{A u B}^*; 0 if A and B meet."""
    if ma & mb:
        return 0
    sign = 1
    b = mb
    while b:
        low = b & -b
        # count indices of A above this index of B
        if (ma >> low.bit_length()).bit_count() & 1:
            sign = -sign
        b ^= low
    return sign


def subsets_of_size(n: int, k: int):
    if k < 0 or k > n:
        return []
    return [mask_of(c) for c in combinations(range(1, n + 1), k)]


def _below_count(mask: int, j: int) -> int:
    """Number of set bits of mask strictly below index j (1-based)."""
    return (mask & ((1 << (j - 1)) - 1)).bit_count()


class Multivector:
    """Element of the full exterior algebra Lambda over ParamScalar."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = terms if terms is not None else {}

    @classmethod
    def basis(cls, n: int, indices) -> "Multivector":
        return cls(n, {mask_of(indices): PS_ONE})

    @classmethod
    def scalar(cls, n: int, value) -> "Multivector":
        value = value if isinstance(value, ParamScalar) else ParamScalar.const(value)
        return cls(n, {0: value} if value else {})

    def _check(self, other: "Multivector"):
        if self.n != other.n:
            raise DimensionMismatchError(f"n={self.n} vs n={other.n}")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, Multivector)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Multivector(self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q) -> "Multivector":
        q = q if isinstance(q, ParamScalar) else ParamScalar.const(q)
        if not q:
            return Multivector(self.n, {})
        return Multivector(self.n, {m: c * q for m, c in self.terms.items()})

    def wedge(self, other: "Multivector") -> "Multivector":
        self._check(other)
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                sgn = wedge_sign(ma, mb)
                if not sgn:
                    continue
                m = ma | mb
                c = ca * cb
                if sgn < 0:
                    c = -c
                v = out.get(m)
                v = c if v is None else v + c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Multivector(self.n, out)

    def degree_part(self, k: int) -> "Multivector":
        return Multivector(
            self.n, {m: c for m, c in self.terms.items() if m.bit_count() == k}
        )

    def degrees(self) -> set:
        return {m.bit_count() for m in self.terms}

    def __repr__(self):
        if not self.terms:
            return "Multivector(0)"
        bits = []
        for m in sorted(self.terms):
            label = "e" + "".join(str(i) for i in indices_of(m)) if m else "1"
            bits.append(f"({self.terms[m].to_string()})*{label}")
        return "Multivector(" + " + ".join(bits) + ")"


def wedge(a: Multivector, b: Multivector) -> Multivector:
    return a.wedge(b)


def interior(v, a: Multivector) -> Multivector:
    """Contraction with a constant vector v (sequence of n rationals)."""
    if len(v) != a.n:
        raise DimensionMismatchError(f"vector length {len(v)} vs n={a.n}")
    out: dict = {}
    for m, c in a.terms.items():
        for j in indices_of(m):
            vj = v[j - 1]
            if not vj:
                continue
            sgn = -1 if _below_count(m, j) & 1 else 1
            coeff = c * ParamScalar.const(vj * sgn)
            key = m ^ (1 << (j - 1))
            cur = out.get(key)
            cur = coeff if cur is None else cur + coeff
            if cur:
                out[key] = cur
            else:
                out.pop(key, None)
    return Multivector(a.n, out)


def exterior_mul(v, a: Multivector) -> Multivector:
    """Wedge with the covector dual to the constant vector v."""
    if len(v) != a.n:
        raise DimensionMismatchError(f"vector length {len(v)} vs n={a.n}")
    cov = Multivector(
        a.n,
        {
            1 << (j - 1): ParamScalar.const(QQ(v[j - 1]))
            for j in range(1, a.n + 1)
            if v[j - 1]
        },
    )
    return cov.wedge(a)


# ---------------------------------------------------------------------------
# Endomorphisms of Lambda (matrices in the e_I^* basis)
# ---------------------------------------------------------------------------

class Endo:
    """Linear map on the exterior algebra: {(out_mask, in_mask): ParamScalar}."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = terms if terms is not None else {}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, Endo)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            v = c if v is None else v + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Endo(self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q) -> "Endo":
        q = q if isinstance(q, ParamScalar) else ParamScalar.const(q)
        if not q:
            return Endo(self.n, {})
        return Endo(self.n, {k: c * q for k, c in self.terms.items()})

    def compose(self, other: "Endo") -> "Endo":
        """self after other."""
        if self.n != other.n:
            raise DimensionMismatchError(f"n={self.n} vs n={other.n}")
        by_out: dict = {}
        for (o, i), c in other.terms.items():
            by_out.setdefault(o, []).append((i, c))
        out: dict = {}
        for (o, i), c in self.terms.items():
            for i2, c2 in by_out.get(i, ()):
                key = (o, i2)
                v = c * c2
                cur = out.get(key)
                cur = v if cur is None else cur + v
                if cur:
                    out[key] = cur
                else:
                    out.pop(key, None)
        return Endo(self.n, out)

    def apply(self, a: Multivector) -> Multivector:
        if self.n != a.n:
            raise DimensionMismatchError(f"n={self.n} vs n={a.n}")
        out: dict = {}
        for (o, i), c in self.terms.items():
            ai = a.terms.get(i)
            if ai is None:
                continue
            v = c * ai
            cur = out.get(o)
            cur = v if cur is None else cur + v
            if cur:
                out[o] = cur
            else:
                out.pop(o, None)
        return Multivector(self.n, out)

    def __repr__(self):
        return f"Endo(n={self.n}, {len(self.terms)} entries)"


def identity_endo(n: int, k: int | None = None) -> Endo:
    """Identity on Lambda^k (or on all of Lambda if k is None)."""
    masks = subsets_of_size(n, k) if k is not None else range(1 << n)
    return Endo(n, {(m, m): PS_ONE for m in masks})


def eps_j(n: int, j: int) -> Endo:
    """Exterior multiplication by e_j^* on the whole of Lambda."""
    b = 1 << (j - 1)
    terms = {}
    for m in range(1 << n):
        if m & b:
            continue
        sgn = -1 if _below_count(m, j) & 1 else 1
        terms[(m | b, m)] = ParamScalar.const(sgn)
    return Endo(n, terms)


def iota_j(n: int, j: int) -> Endo:
    """Interior product with e_j on the whole of Lambda."""
    b = 1 << (j - 1)
    terms = {}
    for m in range(1 << n):
        if not m & b:
            continue
        sgn = -1 if _below_count(m, j) & 1 else 1
        terms[(m ^ b, m)] = ParamScalar.const(sgn)
    return Endo(n, terms)


def eps_v(n: int, v) -> Endo:
    out = Endo(n)
    for j in range(1, n + 1):
        if v[j - 1]:
            out = out + eps_j(n, j).scale(QQ(v[j - 1]))
    return out


def iota_v(n: int, v) -> Endo:
    out = Endo(n)
    for j in range(1, n + 1):
        if v[j - 1]:
            out = out + iota_j(n, j).scale(QQ(v[j - 1]))
    return out


def endo_word(n: int, word) -> Endo:
    """Compose a word of atoms, applied right to left.

    Atoms: ("eps", j), ("iota", j), ("eps_v", vector), ("iota_v", vector).
    """
    out = identity_endo(n)
    for atom in reversed(word):
        kind = atom[0]
        if kind == "eps":
            op = eps_j(n, atom[1])
        elif kind == "iota":
            op = iota_j(n, atom[1])
        elif kind == "eps_v":
            op = eps_v(n, atom[1])
        elif kind == "iota_v":
            op = iota_v(n, atom[1])
        else:
            raise ValueError(f"unknown atom {atom!r}")
        out = op.compose(out)
    return out


def tensor(a: Endo, b: Endo, n: int) -> Endo:
    """Tensor product acting on pair-masks packed as (mx | my << n)."""
    terms = {}
    for (oa, ia), ca in a.terms.items():
        for (ob, ib), cb in b.terms.items():
            terms[(oa | (ob << n), ia | (ib << n))] = ca * cb
    return Endo(n, terms)


# ---------------------------------------------------------------------------
# End(Lambda)-valued polynomials in x
# ---------------------------------------------------------------------------

def _mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


class EndoPoly:
    """Polynomial in x_1..x_n with Endo coefficients: {exponent tuple: Endo}."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = terms if terms is not None else {}

    @classmethod
    def const(cls, e: Endo) -> "EndoPoly":
        if e.is_zero:
            return cls(e.n, {})
        return cls(e.n, {(0,) * e.n: e})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _clean(self):
        self.terms = {m: e for m, e in self.terms.items() if not e.is_zero}
        return self

    def __eq__(self, other):
        return (
            isinstance(other, EndoPoly)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __add__(self, other):
        out = dict(self.terms)
        for m, e in other.terms.items():
            cur = out.get(m)
            cur = e if cur is None else cur + e
            if cur.is_zero:
                out.pop(m, None)
            else:
                out[m] = cur
        return EndoPoly(self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q) -> "EndoPoly":
        q = q if isinstance(q, ParamScalar) else ParamScalar.const(q)
        if not q:
            return EndoPoly(self.n, {})
        return EndoPoly(self.n, {m: e.scale(q) for m, e in self.terms.items()})

    def compose(self, other: "EndoPoly") -> "EndoPoly":
        """self after other; x-monomials commute, Endo parts compose."""
        out: dict = {}
        for ma, ea in self.terms.items():
            for mb, eb in other.terms.items():
                e = ea.compose(eb)
                if e.is_zero:
                    continue
                m = _mono_mul(ma, mb)
                cur = out.get(m)
                cur = e if cur is None else cur + e
                if cur.is_zero:
                    out.pop(m, None)
                else:
                    out[m] = cur
        return EndoPoly(self.n, out)

    def derive(self, j: int) -> "EndoPoly":
        out: dict = {}
        for m, e in self.terms.items():
            d = m[j - 1]
            if not d:
                continue
            m2 = m[: j - 1] + (d - 1,) + m[j:]
            scaled = e.scale(d)
            cur = out.get(m2)
            cur = scaled if cur is None else cur + scaled
            if cur.is_zero:
                out.pop(m2, None)
            else:
                out[m2] = cur
        return EndoPoly(self.n, out)

    def mul_coord(self, j: int) -> "EndoPoly":
        return EndoPoly(
            self.n,
            {m[: j - 1] + (m[j - 1] + 1,) + m[j:]: e for m, e in self.terms.items()},
        )

    def mul_scalar_poly(self, poly: "EndoPoly") -> "EndoPoly":
        return self.compose(poly)

    def apply_basis(self, in_mask: int) -> dict:
        """Apply to e_{in_mask}^*: {exponent tuple: {out_mask: ParamScalar}}."""
        out: dict = {}
        for m, e in self.terms.items():
            for (o, i), c in e.terms.items():
                if i != in_mask:
                    continue
                row = out.setdefault(m, {})
                cur = row.get(o)
                cur = c if cur is None else cur + c
                if cur:
                    row[o] = cur
                else:
                    row.pop(o, None)
        return {m: row for m, row in out.items() if row}

    def divexact_q(self) -> "EndoPoly":
        """Exact division by Q(x) = sum x_j^2; raises ArithmeticError otherwise."""
        n = self.n
        rem = {m: dict(e.terms) for m, e in self.terms.items()}
        quo: dict = {}

        def lead(d):
            return max(d) if d else None

        while rem:
            m = max(rem)
            entry = rem.pop(m)
            if not entry:
                continue
            if m[0] < 2:
                # leading term (lex) must be divisible by x_1^2
                raise ArithmeticError("EndoPoly not divisible by Q")
            qm = (m[0] - 2,) + m[1:]
            quo[qm] = Endo(n, entry)
            # subtract qm * Q from the remainder
            for j in range(1, n + 1):
                mj = list(qm)
                mj[j - 1] += 2
                mj = tuple(mj)
                tgt = rem.setdefault(mj, {}) if mj != m else None
                if mj == m:
                    continue
                for key, c in entry.items():
                    cur = tgt.get(key)
                    cur = -c if cur is None else cur - c
                    if cur:
                        tgt[key] = cur
                    else:
                        tgt.pop(key, None)
                if not tgt:
                    rem.pop(mj, None)
        return EndoPoly(n, quo)._clean()

    def is_divisible_q(self) -> bool:
        try:
            self.divexact_q()
            return True
        except ArithmeticError:
            return False

    def mul_q(self) -> "EndoPoly":
        out: dict = {}
        for m, e in self.terms.items():
            for j in range(self.n):
                m2 = m[:j] + (m[j] + 2,) + m[j + 1 :]
                cur = out.get(m2)
                cur = e if cur is None else cur + e
                if cur.is_zero:
                    out.pop(m2, None)
                else:
                    out[m2] = cur
        return EndoPoly(self.n, out)

    def __repr__(self):
        return f"EndoPoly(n={self.n}, {len(self.terms)} monomials)"


def iota_x_eps_x(n: int) -> EndoPoly:
    """iota_x eps_x as a quadratic End(Lambda)-valued polynomial."""
    terms: dict = {}
    for j in range(1, n + 1):
        for m in range(1, n + 1):
            e = iota_j(n, j).compose(eps_j(n, m))
            if e.is_zero:
                continue
            mono = tuple(
                (2 if (p == j and j == m) else (1 if p in (j, m) else 0))
                for p in range(1, n + 1)
            )
            cur = terms.get(mono)
            cur = e if cur is None else cur + e
            if cur.is_zero:
                terms.pop(mono, None)
            else:
                terms[mono] = cur
    return EndoPoly(n, terms)


def eps_x_iota_x(n: int) -> EndoPoly:
    terms: dict = {}
    for j in range(1, n + 1):
        for m in range(1, n + 1):
            e = eps_j(n, j).compose(iota_j(n, m))
            if e.is_zero:
                continue
            mono = tuple(
                (2 if (p == j and j == m) else (1 if p in (j, m) else 0))
                for p in range(1, n + 1)
            )
            cur = terms.get(mono)
            cur = e if cur is None else cur + e
            if cur.is_zero:
                terms.pop(mono, None)
            else:
                terms[mono] = cur
    return EndoPoly(n, terms)


def iota_x_eps_j(n: int, j: int) -> EndoPoly:
    """iota_x eps_j (linear in x)."""
    terms: dict = {}
    for m in range(1, n + 1):
        e = iota_j(n, m).compose(eps_j(n, j))
        if e.is_zero:
            continue
        mono = tuple(1 if p == m else 0 for p in range(1, n + 1))
        cur = terms.get(mono)
        terms[mono] = e if cur is None else cur + e
    return EndoPoly(n, terms)._clean()


def eps_x_iota_j(n: int, j: int) -> EndoPoly:
    terms: dict = {}
    for m in range(1, n + 1):
        e = eps_j(n, m).compose(iota_j(n, j))
        if e.is_zero:
            continue
        mono = tuple(1 if p == m else 0 for p in range(1, n + 1))
        cur = terms.get(mono)
        terms[mono] = e if cur is None else cur + e
    return EndoPoly(n, terms)._clean()


def q_poly(n: int) -> EndoPoly:
    """Q(x) * Id as an EndoPoly."""
    ident = identity_endo(n)
    terms = {}
    for j in range(n):
        mono = tuple(2 if p == j else 0 for p in range(n))
        terms[mono] = ident
    return EndoPoly(n, terms)
