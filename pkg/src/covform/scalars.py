"""Exact coefficient arithmetic for the operator engine.

Everything downstream computes over the field Q(i)(s,t): Gaussian rationals
extended by two formal parameters.  The parameters are called ``s`` and ``t``
internally; the representation-theoretic layers read the same two slots as
``(lambda, mu)`` after an affine substitution.

Representation notes
--------------------
``ParamPoly`` stores a sparse polynomial as ``{packed_key: mpq}``.  The packed
key holds (deg_t | deg_s << 8 | iota << 16) where ``iota`` is the exponent of
the imaginary unit modulo 2.  Multiplying two keys is integer addition; an
overflow into bit 17 signals i*i and is folded back with a sign flip.  This
keeps the hot loops free of any wrapper-object arithmetic.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz

__all__ = [
    "GRat",
    "ParamPoly",
    "ParamScalar",
    "InvalidScalarError",
    "PoleError",
    "QQ",
    "pp_add",
    "pp_sub",
    "pp_mul",
    "pp_scale",
    "pp_iadd_scaled",
    "pp_mul_ipow",
]


class InvalidScalarError(ValueError):
    """Raised when a ParamScalar would have a zero denominator."""


class PoleError(ZeroDivisionError):
    """Raised when a ParamScalar is evaluated at a zero of its denominator."""


def QQ(num, den=1):
    """Exact rational; thin alias for gmpy2.mpq."""
    return mpq(num, den)


_T_MASK = 0xFF
_S_SHIFT = 8
_S_MASK = 0xFF << _S_SHIFT
_IOTA = 1 << 16
_CARRY = 1 << 17

_ZERO = mpq(0)
_ONE = mpq(1)


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

class GRat:
    """Element of Q(i) with exact rational components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GRat):
            return self.re == other.re and self.im == other.im
        return self.re == other and not self.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = _as_grat(other)
        return GRat(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = _as_grat(other)
        return GRat(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GRat(-self.re, -self.im)

    def __mul__(self, other):
        other = _as_grat(other)
        return GRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other):
        other = _as_grat(other)
        n2 = other.re * other.re + other.im * other.im
        if not n2:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GRat(
            (self.re * other.re + self.im * other.im) / n2,
            (self.im * other.re - self.re * other.im) / n2,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return _as_grat(other) - self

    def inv(self):
        return GRat(1) / self

    @property
    def is_rational(self):
        return not self.im

    def __repr__(self):
        if not self.im:
            return f"GRat({self.re})"
        return f"GRat({self.re}, {self.im})"


def _as_grat(x):
    if isinstance(x, GRat):
        return x
    return GRat(x)


# ---------------------------------------------------------------------------
# raw-dict kernels (hot path; keys packed ints, values mpq)
# ---------------------------------------------------------------------------

def pp_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k)
        if v is None:
            out[k] = c
        else:
            v = v + c
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def pp_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k)
        if v is None:
            out[k] = -c
        else:
            v = v - c
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def pp_mul(a: dict, b: dict) -> dict:
    out = {}
    get = out.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            c = ca * cb
            if k & _CARRY:
                k ^= _CARRY
                c = -c
            v = get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
    return out


def pp_scale(a: dict, q) -> dict:
    if not q:
        return {}
    return {k: c * q for k, c in a.items()}


def pp_iadd_scaled(acc: dict, a: dict, q) -> None:
    """acc += q * a, in place; q is mpq or int."""
    if not q:
        return
    get = acc.get
    for k, c in a.items():
        v = get(k)
        if v is None:
            acc[k] = c * q
        else:
            v = v + c * q
            if v:
                acc[k] = v
            else:
                del acc[k]


def pp_mul_ipow(a: dict, m: int) -> dict:
    """Multiply by i**m."""
    m &= 3
    if m == 0:
        return dict(a)
    out = {}
    for k, c in a.items():
        if m == 2:
            out[k] = -c
            continue
        if k & _IOTA:
            k2 = k ^ _IOTA
            # i * i = -1
            out[k2] = -c if m == 1 else c
        else:
            out[k | _IOTA] = c if m == 1 else -c
    return out


# ---------------------------------------------------------------------------
# ParamPoly
# ---------------------------------------------------------------------------

class ParamPoly:
    """Element of Q(i)[s,t], stored sparsely with packed integer keys."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = terms if terms is not None else {}

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, q) -> "ParamPoly":
        q = mpq(q)
        return cls({0: q} if q else {})

    @classmethod
    def gauss(cls, re, im) -> "ParamPoly":
        terms = {}
        re, im = mpq(re), mpq(im)
        if re:
            terms[0] = re
        if im:
            terms[_IOTA] = im
        return cls(terms)

    @classmethod
    def i_unit(cls) -> "ParamPoly":
        return cls({_IOTA: _ONE})

    @classmethod
    def var(cls, index: int) -> "ParamPoly":
        # index 0 -> s, index 1 -> t
        key = (1 << _S_SHIFT) if index == 0 else 1
        return cls({key: _ONE})

    @classmethod
    def monomial(cls, coeff, ds: int, dt: int, iota: int = 0) -> "ParamPoly":
        coeff = mpq(coeff)
        if not coeff:
            return cls({})
        return cls({(ds << _S_SHIFT) | dt | (_IOTA if iota & 1 else 0): coeff})

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_real(self) -> bool:
        return all(not (k & _IOTA) for k in self.terms)

    @property
    def is_constant(self) -> bool:
        return all(k & ~_IOTA == 0 for k in self.terms)

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self.terms == other.terms
        if isinstance(other, int):
            return self.terms == ({0: mpq(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        return ParamPoly(pp_add(self.terms, _coerce(other).terms))

    def __sub__(self, other):
        return ParamPoly(pp_sub(self.terms, _coerce(other).terms))

    def __rsub__(self, other):
        return ParamPoly(pp_sub(_coerce(other).terms, self.terms))

    def __neg__(self):
        return ParamPoly({k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ParamScalar):
            return NotImplemented
        return ParamPoly(pp_mul(self.terms, _coerce(other).terms))

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, m: int):
        out = ParamPoly.const(1)
        base = self
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    def scale(self, q) -> "ParamPoly":
        return ParamPoly(pp_scale(self.terms, mpq(q)))

    def mul_i(self, m: int = 1) -> "ParamPoly":
        return ParamPoly(pp_mul_ipow(self.terms, m))

    # -- structure ----------------------------------------------------------

    def deg_s(self) -> int:
        return max(((k & _S_MASK) >> _S_SHIFT for k in self.terms), default=0)

    def deg_t(self) -> int:
        return max((k & _T_MASK for k in self.terms), default=0)

    def total_degree(self) -> int:
        return max(
            (((k & _S_MASK) >> _S_SHIFT) + (k & _T_MASK) for k in self.terms),
            default=0,
        )

    def leading_key(self) -> int:
        """Graded-lex maximal key (iota treated as a tiebreaker)."""
        return max(
            self.terms,
            key=lambda k: (
                ((k & _S_MASK) >> _S_SHIFT) + (k & _T_MASK),
                (k & _S_MASK) >> _S_SHIFT,
                k & _T_MASK,
                k & _IOTA,
            ),
        )

    def evaluate(self, s0, t0) -> GRat:
        s0, t0 = _as_grat(s0), _as_grat(t0)
        acc = GRat(0)
        spow = {0: GRat(1)}
        tpow = {0: GRat(1)}
        for k, c in self.terms.items():
            ds = (k & _S_MASK) >> _S_SHIFT
            dt = k & _T_MASK
            if ds not in spow:
                p = spow[max(spow)]
                for e in range(max(spow) + 1, ds + 1):
                    p = p * s0
                    spow[e] = p
            if dt not in tpow:
                p = tpow[max(tpow)]
                for e in range(max(tpow) + 1, dt + 1):
                    p = p * t0
                    tpow[e] = p
            v = spow[ds] * tpow[dt] * GRat(c)
            if k & _IOTA:
                v = v * GRat(0, 1)
            acc = acc + v
        return acc

    def subs_affine(self, s_off, s_lin, t_off, t_lin) -> "ParamPoly":
        """Substitute s -> s_off + s_lin*s and t -> t_off + t_lin*t."""
        s_poly = ParamPoly.const(s_off) + ParamPoly.var(0).scale(s_lin)
        t_poly = ParamPoly.const(t_off) + ParamPoly.var(1).scale(t_lin)
        spows = [ParamPoly.const(1)]
        for _ in range(self.deg_s()):
            spows.append(spows[-1] * s_poly)
        tpows = [ParamPoly.const(1)]
        for _ in range(self.deg_t()):
            tpows.append(tpows[-1] * t_poly)
        acc: dict = {}
        for k, c in self.terms.items():
            ds = (k & _S_MASK) >> _S_SHIFT
            dt = k & _T_MASK
            piece = pp_mul(spows[ds].terms, tpows[dt].terms)
            if k & _IOTA:
                piece = pp_mul_ipow(piece, 1)
            pp_iadd_scaled(acc, piece, c)
        return ParamPoly(acc)

    def swap_params(self) -> "ParamPoly":
        """Exchange the two parameter slots (s <-> t)."""
        out = {}
        for k, c in self.terms.items():
            ds = (k & _S_MASK) >> _S_SHIFT
            dt = k & _T_MASK
            out[(dt << _S_SHIFT) | ds | (k & _IOTA)] = c
        return ParamPoly(out)

    def content(self):
        """Positive rational content (gcd of numerators / lcm of denominators)."""
        if not self.terms:
            return mpq(0)
        num = mpz(0)
        den = mpz(1)
        for c in self.terms.values():
            num = num.gcd(mpz(c.numerator))
            d = mpz(c.denominator)
            den = den * d // den.gcd(d)
        return mpq(num, den)

    # -- display ------------------------------------------------------------

    def sorted_items(self):
        def keyfun(item):
            k = item[0]
            return (
                -(((k & _S_MASK) >> _S_SHIFT) + (k & _T_MASK)),
                -((k & _S_MASK) >> _S_SHIFT),
                -(k & _T_MASK),
                k & _IOTA,
            )

        return sorted(self.terms.items(), key=keyfun)

    def to_string(self, names=("s", "t")) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.sorted_items():
            ds = (k & _S_MASK) >> _S_SHIFT
            dt = k & _T_MASK
            atoms = []
            if k & _IOTA:
                atoms.append("i")
            if ds:
                atoms.append(names[0] if ds == 1 else f"{names[0]}^{ds}")
            if dt:
                atoms.append(names[1] if dt == 1 else f"{names[1]}^{dt}")
            mono = "*".join(atoms)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        sign0, body0 = parts[0]
        text = ("-" if sign0 == "-" else "") + body0
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    @classmethod
    def parse(cls, text: str, names=("s", "t")) -> "ParamPoly":
        """Inverse of :meth:`to_string`; exact round-trip."""
        text = text.strip()
        if text == "0":
            return cls({})
        terms: dict = {}
        # normalize leading sign and split on top-level +/- separated by spaces
        chunks = text.replace(" - ", " + -").split(" + ")
        for chunk in chunks:
            chunk = chunk.strip()
            neg = chunk.startswith("-")
            if neg:
                chunk = chunk[1:]
            coeff = mpq(1)
            ds = dt = iota = 0
            for atom in chunk.split("*"):
                atom = atom.strip()
                if atom == "i":
                    iota ^= 1
                elif atom.startswith(names[0]):
                    ds += 1 if atom == names[0] else int(atom.split("^")[1])
                elif atom.startswith(names[1]):
                    dt += 1 if atom == names[1] else int(atom.split("^")[1])
                else:
                    coeff *= mpq(atom)
            if neg:
                coeff = -coeff
            key = (ds << _S_SHIFT) | dt | (_IOTA if iota else 0)
            prev = terms.get(key)
            val = coeff if prev is None else prev + coeff
            if val:
                terms[key] = val
            elif prev is not None:
                del terms[key]
        return cls(terms)

    def __repr__(self):
        return f"ParamPoly({self.to_string()})"


def _coerce(x) -> ParamPoly:
    if isinstance(x, ParamPoly):
        return x
    if isinstance(x, GRat):
        return ParamPoly.gauss(x.re, x.im)
    return ParamPoly.const(x)


PP_ZERO = ParamPoly({})
PP_ONE = ParamPoly.const(1)


# ---------------------------------------------------------------------------
# gcd over Q(i)[s,t] (primitive PRS; degrees are modest throughout)
# ---------------------------------------------------------------------------

def _to_nested(p: ParamPoly):
    """{deg_t: {deg_s: GRat}} with iota folded into GRat coefficients."""
    out: dict = {}
    for k, c in p.terms.items():
        ds = (k & _S_MASK) >> _S_SHIFT
        dt = k & _T_MASK
        row = out.setdefault(dt, {})
        g = row.get(ds, GRat(0))
        row[ds] = g + (GRat(0, c) if k & _IOTA else GRat(c))
    for dt in list(out):
        row = {ds: g for ds, g in out[dt].items() if g}
        if row:
            out[dt] = row
        else:
            del out[dt]
    return out


def _from_nested(nested) -> ParamPoly:
    terms = {}
    for dt, row in nested.items():
        for ds, g in row.items():
            if g.re:
                terms[(ds << _S_SHIFT) | dt] = g.re
            if g.im:
                terms[(ds << _S_SHIFT) | dt | _IOTA] = g.im
    return ParamPoly(terms)


def _u_trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _u_from_row(row: dict) -> list:
    if not row:
        return []
    out = [GRat(0)] * (max(row) + 1)
    for ds, g in row.items():
        out[ds] = g
    return out


def _u_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [GRat(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return _u_trim(out)


def _u_sub(a: list, b: list) -> list:
    out = list(a) + [GRat(0)] * (len(b) - len(a))
    for i, y in enumerate(b):
        out[i] = out[i] - y
    return _u_trim(out)


def _u_scale(a: list, g: GRat) -> list:
    if not g:
        return []
    return [x * g for x in a]


def _u_divmod(a: list, b: list):
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    a = list(a)
    q = [GRat(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = b[-1].inv()
    while len(a) >= len(b) and _u_trim(a):
        shift = len(a) - len(b)
        factor = a[-1] * inv_lead
        q[shift] = factor
        for i, y in enumerate(b):
            a[i + shift] = a[i + shift] - factor * y
        _u_trim(a)
    return _u_trim(q), a


def _u_gcd(a: list, b: list) -> list:
    a, b = _u_trim(list(a)), _u_trim(list(b))
    while b:
        _, r = _u_divmod(a, b)
        a, b = b, r
    if a:
        a = _u_scale(a, a[-1].inv())
    return a


def _t_coeffs(nested) -> dict:
    """Bivariate as {deg_t: univariate-in-s list}."""
    return {dt: _u_from_row(row) for dt, row in nested.items()}


def _t_content(tc: dict) -> list:
    g: list = []
    for coeff in tc.values():
        g = _u_gcd(g, coeff)
        if len(g) == 1:
            break
    return g


def _t_divide_content(tc: dict, cont: list) -> dict:
    if len(cont) == 1 and cont[0] == GRat(1):
        return tc
    out = {}
    for dt, coeff in tc.items():
        q, r = _u_divmod(coeff, cont)
        if r:
            raise ArithmeticError("content division not exact")
        out[dt] = q
    return out


def _t_mul_uni(tc: dict, u: list) -> dict:
    return {dt: _u_mul(coeff, u) for dt, coeff in tc.items()}


def _t_deg(tc: dict) -> int:
    return max(tc, default=-1)


def _t_pseudo_rem(a: dict, b: dict) -> dict:
    """Pseudo-remainder of a by b in (Q(i)[s])[t]."""
    da, db = _t_deg(a), _t_deg(b)
    lead_b = b[db]
    r = {dt: list(c) for dt, c in a.items()}
    while _t_deg(r) >= db and r:
        dr = _t_deg(r)
        lead_r = r[dr]
        # r := lead_b * r - lead_r * t^(dr-db) * b
        r = _t_mul_uni(r, lead_b)
        shift = dr - db
        for dt, coeff in b.items():
            piece = _u_mul(coeff, lead_r)
            cur = r.get(dt + shift, [])
            new = _u_sub(cur, piece)
            if new:
                r[dt + shift] = new
            else:
                r.pop(dt + shift, None)
        r = {dt: c for dt, c in r.items() if c}
    return r


def pp_gcd(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    """Monic gcd in Q(i)[s,t] by a primitive PRS in t."""
    if p.is_zero:
        return _monicize(q)
    if q.is_zero:
        return _monicize(p)
    a = _t_coeffs(_to_nested(p))
    b = _t_coeffs(_to_nested(q))
    if _t_deg(a) == 0 and _t_deg(b) == 0:
        g = _u_gcd(a[0], b[0])
        return _monicize(_nested_from_t({0: g}))
    if _t_deg(a) == 0:
        return _monicize(_nested_from_t({0: _u_gcd(a[0], _t_content(b))}))
    if _t_deg(b) == 0:
        return _monicize(_nested_from_t({0: _u_gcd(b[0], _t_content(a))}))
    cont_a, cont_b = _t_content(a), _t_content(b)
    a = _t_divide_content(a, cont_a)
    b = _t_divide_content(b, cont_b)
    cont_g = _u_gcd(cont_a, cont_b)
    if _t_deg(a) < _t_deg(b):
        a, b = b, a
    while True:
        r = _t_pseudo_rem(a, b)
        if not r:
            break
        if _t_deg(r) == 0:
            b = {0: [GRat(1)]}
            break
        r = _t_divide_content(r, _t_content(r))
        a, b = b, r
    g = _t_mul_uni(b, cont_g)
    return _monicize(_nested_from_t(g))


def _nested_from_t(tc: dict) -> ParamPoly:
    nested = {}
    for dt, coeff in tc.items():
        row = {ds: g for ds, g in enumerate(coeff) if g}
        if row:
            nested[dt] = row
    return _from_nested(nested)


def _monicize(p: ParamPoly) -> ParamPoly:
    if p.is_zero:
        return p
    nested = _to_nested(p)
    lead_dt = max(nested)
    lead_ds = max(nested[lead_dt])
    lc = nested[lead_dt][lead_ds]
    if lc == GRat(1):
        return p
    inv = lc.inv()
    out = {}
    for dt, row in nested.items():
        out[dt] = {ds: g * inv for ds, g in row.items()}
    return _from_nested(out)


def pp_divexact(p: ParamPoly, d: ParamPoly) -> ParamPoly:
    """Exact division in Q(i)[s,t]; raises ArithmeticError if not exact."""
    if d.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    if p.is_zero:
        return PP_ZERO
    a = _t_coeffs(_to_nested(p))
    b = _t_coeffs(_to_nested(d))
    db = _t_deg(b)
    lead_b = b[db]
    quo: dict = {}
    r = a
    while r:
        dr = _t_deg(r)
        if dr < db:
            raise ArithmeticError("division not exact")
        qc, rem = _u_divmod(r[dr], lead_b)
        if rem:
            raise ArithmeticError("division not exact")
        shift = dr - db
        quo[shift] = qc
        for dt, coeff in b.items():
            piece = _u_mul(coeff, qc)
            cur = r.get(dt + shift, [])
            new = _u_sub(cur, piece)
            if new:
                r[dt + shift] = new
            else:
                r.pop(dt + shift, None)
    return _nested_from_t(quo)


# ---------------------------------------------------------------------------
# ParamScalar
# ---------------------------------------------------------------------------

class ParamScalar:
    """Element of Q(i)(s,t), kept in normalized num/den form.

    Fractions with denominator 1 take fast paths everywhere, so the bulk of
    the engine (which is polynomial after standard denominator clearing) pays
    almost nothing for the generality.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized=False):
        num = _coerce(num) if not isinstance(num, ParamPoly) else num
        if den is None:
            den = PP_ONE
        elif not isinstance(den, ParamPoly):
            den = _coerce(den)
        if den.is_zero:
            raise InvalidScalarError("zero denominator")
        if _normalized:
            self.num, self.den = num, den
            return
        self.num, self.den = _normalize_pair(num, den)

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, q) -> "ParamScalar":
        return cls(ParamPoly.const(q), PP_ONE, _normalized=True)

    @classmethod
    def from_poly(cls, p: ParamPoly) -> "ParamScalar":
        return cls(p, PP_ONE, _normalized=True)

    @classmethod
    def var(cls, index: int) -> "ParamScalar":
        return cls(ParamPoly.var(index), PP_ONE, _normalized=True)

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self):
        return not self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den == PP_ONE

    @property
    def is_real(self) -> bool:
        return self.num.is_real and self.den.is_real

    def __eq__(self, other):
        if isinstance(other, ParamScalar):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, ParamPoly)):
            return self == ParamScalar(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def eq_cross(self, other: "ParamScalar") -> bool:
        """Equality by cross-multiplication, independent of normalization."""
        return (self.num * other.den) == (other.num * self.den)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _as_scalar(other)
        if self.den == other.den:
            return ParamScalar(self.num + other.num, self.den)
        return ParamScalar(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other):
        other = _as_scalar(other)
        if self.den == other.den:
            return ParamScalar(self.num - other.num, self.den)
        return ParamScalar(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __rsub__(self, other):
        return _as_scalar(other) - self

    def __neg__(self):
        return ParamScalar(-self.num, self.den, _normalized=True)

    def __mul__(self, other):
        other = _as_scalar(other)
        if self.den == PP_ONE and other.den == PP_ONE:
            return ParamScalar(self.num * other.num, PP_ONE, _normalized=True)
        return ParamScalar(self.num * other.num, self.den * other.den)

    __radd__ = __add__
    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_scalar(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero ParamScalar")
        return ParamScalar(self.num * other.den, self.den * other.num)

    def inv(self) -> "ParamScalar":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero ParamScalar")
        return ParamScalar(self.den, self.num)

    # -- evaluation & substitution ------------------------------------------

    def evaluate(self, s0, t0) -> GRat:
        dval = self.den.evaluate(s0, t0)
        if not dval:
            raise PoleError(f"denominator vanishes at ({s0}, {t0})")
        return self.num.evaluate(s0, t0) / dval

    def subs_affine(self, s_off, s_lin, t_off, t_lin) -> "ParamScalar":
        return ParamScalar(
            self.num.subs_affine(s_off, s_lin, t_off, t_lin),
            self.den.subs_affine(s_off, s_lin, t_off, t_lin),
        )

    def swap_params(self) -> "ParamScalar":
        return ParamScalar(self.num.swap_params(), self.den.swap_params())

    def to_string(self, names=("s", "t")) -> str:
        if self.den == PP_ONE:
            return self.num.to_string(names)
        return f"({self.num.to_string(names)})/({self.den.to_string(names)})"

    def __repr__(self):
        return f"ParamScalar({self.to_string()})"


def normalize(p: ParamScalar) -> ParamScalar:
    """Return the canonical representative (identity on this implementation:
    every constructed ParamScalar is already normalized)."""
    return ParamScalar(p.num, p.den)


def _normalize_pair(num: ParamPoly, den: ParamPoly):
    if num.is_zero:
        return PP_ZERO, PP_ONE
    if den == PP_ONE:
        return num, den
    if not den.is_constant:
        g = pp_gcd(num, den)
        if g.total_degree() > 0 or not g.is_real or g.terms.get(0) != 1:
            num = pp_divexact(num, g)
            den = pp_divexact(den, g)
    if den.is_constant:
        c = GRat(den.terms.get(0, 0), den.terms.get(_IOTA, 0))
        return _mul_grat(num, c.inv()), PP_ONE
    # make the denominator's graded-lex leading coefficient exactly 1
    lk = den.leading_key()
    lc = den.terms[lk]
    if lk & _IOTA or lc != 1:
        lead = GRat(0, lc) if lk & _IOTA else GRat(lc)
        inv = lead.inv()
        num = _mul_grat(num, inv)
        den = _mul_grat(den, inv)
    return num, den


def _mul_grat(p: ParamPoly, g: GRat) -> ParamPoly:
    factor = ParamPoly.gauss(g.re, g.im)
    return p * factor


def _as_scalar(x) -> ParamScalar:
    if isinstance(x, ParamScalar):
        return x
    if isinstance(x, ParamPoly):
        return ParamScalar.from_poly(x)
    return ParamScalar.const(x)


PS_ZERO = ParamScalar.const(0)
PS_ONE = ParamScalar.const(1)
