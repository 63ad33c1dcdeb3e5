"""Normal-ordered operator algebra on polynomial differential forms.

A ``DiffOp`` is a finite sum of terms

    c(s,t) * x^alpha * y^beta * d_x^gamma * d_y^delta * (E_IJ (x) E_KL)

acting on Lambda^k (x) Lambda^l valued polynomial forms on R^n (x) R^n.
Terms are stored strictly normal ordered (multiplications left of
differentiations), so equality of operators is equality of term maps.

Term keys are packed into a single integer: 16 bits of endomorphism masks
(Ix_out | Ix_in<<4 | Ky_out<<8 | Ky_in<<12) followed by four groups of
n <= 4 exponent fields of 5 bits each (alpha, beta, gamma, delta).  Packed
keys make merging a dict update on small ints and replace a hash-consed
term table: the canonical key *is* the interned object.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from math import comb, factorial

from .exterior import (
    DegreeError,
    DimensionMismatchError,
    Endo,
    EndoPoly,
    eps_j,
    iota_j,
    subsets_of_size,
)
from .scalars import (
    ParamPoly,
    ParamScalar,
    PP_ONE,
    pp_add,
    pp_iadd_scaled,
    pp_mul,
    pp_mul_ipow,
    pp_scale,
)

__all__ = [
    "DiffOp",
    "PolyForm",
    "MAX_N",
    "compose",
    "apply_op",
    "id_op",
    "mult_monomial_op",
    "mult_poly_op",
    "deriv_op",
    "endo_pair_op",
    "op_from_endopoly",
    "d_op",
    "delta_op",
    "laplacian_op",
    "q_diff_op",
    "lie_derivative",
    "fourier_image",
    "fourier_preimage",
    "monomial_forms",
    "annihilates_all_monomials",
]

MAX_N = 4

_E_BITS = 16
_A_SH = 16
_B_SH = 36
_G_SH = 56
_D_SH = 76
_F = 5
_FMASK = 31
_AB_MASK = (1 << 40) - 1
_EO_MASK = 0x0F0F  # out masks (Ix_out, Ky_out)
_EI_MASK = 0xF0F0  # in masks


def _pack_vec(v, shift):
    key = 0
    for j, e in enumerate(v):
        key |= e << (shift + _F * j)
    return key


def pack_key(alpha, beta, gamma, delta, endo) -> int:
    ixo, ixi, kyo, kyi = endo
    key = ixo | (ixi << 4) | (kyo << 8) | (kyi << 12)
    key |= _pack_vec(alpha, _A_SH)
    key |= _pack_vec(beta, _B_SH)
    key |= _pack_vec(gamma, _G_SH)
    key |= _pack_vec(delta, _D_SH)
    return key


def _unpack_vec(key, shift, n):
    return tuple((key >> (shift + _F * j)) & _FMASK for j in range(n))


def unpack_key(key: int, n: int):
    endo = (key & 15, (key >> 4) & 15, (key >> 8) & 15, (key >> 12) & 15)
    return (
        _unpack_vec(key, _A_SH, n),
        _unpack_vec(key, _B_SH, n),
        _unpack_vec(key, _G_SH, n),
        _unpack_vec(key, _D_SH, n),
        endo,
    )


def _expansion(gd: int, ab: int, n: int):
    """Normal-ordering data for d^(gd) o x^(ab): [(int factor, key correction)].

    ``gd`` holds A's (gamma, delta) exponent fields, ``ab`` holds B's
    (alpha, beta); both already shifted down to bit 0.
    """
    pairs = []
    for j in range(2 * n):
        g = (gd >> (_F * j)) & _FMASK
        a = (ab >> (_F * j)) & _FMASK
        if g and a:
            pairs.append((j, g, a))
    out = [(1, 0)]
    for j, g, a in pairs:
        unit = (1 << (_A_SH + _F * j)) + (1 << (_G_SH + _F * j))
        new = []
        for f, corr in out:
            for u in range(min(g, a) + 1):
                fu = f * comb(g, u) * comb(a, u) * factorial(u)
                new.append((fu, corr + u * unit))
        out = new
    return out


class PolyForm:
    """Polynomial differential form of bidegree (k, l) on R^n x R^n.

    Terms map packed keys (alpha, beta exponents; masks in the endo "out"
    slots) to ParamPoly/ParamScalar coefficients.  Single-variable forms are
    the special case with no y content and l = 0.
    """

    __slots__ = ("n", "k", "l", "terms")

    def __init__(self, n: int, k: int, l: int, terms: dict | None = None):
        if n > MAX_N:
            raise DimensionMismatchError(f"n={n} exceeds packed-key limit {MAX_N}")
        self.n = n
        self.k = k
        self.l = l
        self.terms = terms if terms is not None else {}

    @classmethod
    def monomial(cls, n, k, l, alpha, beta, mask_x, mask_y, coeff=None) -> "PolyForm":
        coeff = coeff if coeff is not None else PP_ONE
        key = pack_key(alpha, beta, (0,) * n, (0,) * n, (mask_x, 0, mask_y, 0))
        return cls(n, k, l, {key: coeff})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, PolyForm)
            and (self.n, self.k, self.l) == (other.n, other.k, other.l)
            and self.terms == other.terms
        )

    def __add__(self, other):
        if (self.n, self.k, self.l) != (other.n, other.k, other.l):
            raise DegreeError("bidegree mismatch in PolyForm addition")
        out = dict(self.terms)
        for key, c in other.terms.items():
            cur = out.get(key)
            cur = c if cur is None else cur + c
            if cur:
                out[key] = cur
            else:
                out.pop(key, None)
        return PolyForm(self.n, self.k, self.l, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q) -> "PolyForm":
        if isinstance(q, int):
            q = ParamPoly.const(q)
        if not q:
            return PolyForm(self.n, self.k, self.l, {})
        return PolyForm(
            self.n, self.k, self.l, {key: c * q for key, c in self.terms.items()}
        )

    def substitute_diagonal(self) -> "PolyForm":
        """Set y := x (restriction to the diagonal); output has no y content."""
        out: dict = {}
        for key, c in self.terms.items():
            ab = (key >> _A_SH) & _AB_MASK
            alpha = ab & ((1 << (_F * self.n)) - 1)
            beta = ab >> (_F * self.n)
            key2 = (key & 0xFFFF) | ((alpha + beta) << _A_SH)
            cur = out.get(key2)
            cur = c if cur is None else cur + c
            if cur:
                out[key2] = cur
            else:
                out.pop(key2, None)
        return PolyForm(self.n, self.k, self.l, out)

    def __repr__(self):
        return f"PolyForm(n={self.n}, ({self.k},{self.l}), {len(self.terms)} terms)"


class DiffOp:
    """Normal-ordered polynomial-coefficient differential operator."""

    __slots__ = ("n", "kin", "lin", "kout", "lout", "terms")

    def __init__(self, n, kin, lin, kout, lout, terms: dict | None = None):
        if n > MAX_N:
            raise DimensionMismatchError(f"n={n} exceeds packed-key limit {MAX_N}")
        self.n = n
        self.kin = kin
        self.lin = lin
        self.kout = kout
        self.lout = lout
        self.terms = terms if terms is not None else {}

    # -- bookkeeping ---------------------------------------------------------

    @property
    def signature(self):
        return (self.n, self.kin, self.lin, self.kout, self.lout)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, DiffOp)
            and self.signature == other.signature
            and self.terms == other.terms
        )

    def __add__(self, other):
        if self.signature != other.signature:
            raise DegreeError(
                f"signature mismatch {self.signature} vs {other.signature}"
            )
        out = dict(self.terms)
        for key, c in other.terms.items():
            cur = out.get(key)
            cur = c if cur is None else cur + c
            if cur:
                out[key] = cur
            else:
                out.pop(key, None)
        return DiffOp(*self.signature, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, q) -> "DiffOp":
        if isinstance(q, int):
            if q == 0:
                return DiffOp(*self.signature, {})
            if all(isinstance(c, ParamPoly) for c in self.terms.values()):
                return DiffOp(
                    *self.signature,
                    {k: ParamPoly(pp_scale(c.terms, q)) for k, c in self.terms.items()},
                )
            q = ParamScalar.const(q)
        if not q:
            return DiffOp(*self.signature, {})
        return DiffOp(*self.signature, {k: c * q for k, c in self.terms.items()})

    def mul_i(self, m: int = 1) -> "DiffOp":
        return DiffOp(
            *self.signature,
            {
                k: (
                    ParamPoly(pp_mul_ipow(c.terms, m))
                    if isinstance(c, ParamPoly)
                    else c * _ipow_scalar(m)
                )
                for k, c in self.terms.items()
            },
        )

    def map_coeffs(self, fn) -> "DiffOp":
        out = {}
        for k, c in self.terms.items():
            v = fn(c)
            if v:
                out[k] = v
        return DiffOp(*self.signature, out)

    def to_polynomial(self) -> "DiffOp":
        """Convert ParamScalar coefficients with trivial denominator to ParamPoly."""

        def conv(c):
            if isinstance(c, ParamPoly):
                return c
            if not c.is_polynomial:
                raise ArithmeticError("coefficient has a nontrivial denominator")
            return c.num

        return self.map_coeffs(conv)

    def to_scalar_coeffs(self) -> "DiffOp":
        def conv(c):
            return c if isinstance(c, ParamScalar) else ParamScalar.from_poly(c)

        return self.map_coeffs(conv)

    def subs_affine(self, s_off, s_lin, t_off, t_lin) -> "DiffOp":
        return self.map_coeffs(lambda c: c.subs_affine(s_off, s_lin, t_off, t_lin))

    def is_real(self) -> bool:
        return all(c.is_real for c in self.terms.values())

    def swap_slots(self) -> "DiffOp":
        """Exchange the x and y variable sets, tensor slots, and parameters."""
        n = self.n
        width = _F * n
        mask = (1 << width) - 1
        out = {}
        for key, c in self.terms.items():
            endo = key & 0xFFFF
            e_sw = ((endo & 0x00FF) << 8) | ((endo & 0xFF00) >> 8)
            a = (key >> _A_SH) & mask
            b = (key >> _B_SH) & mask
            g = (key >> _G_SH) & mask
            d = (key >> _D_SH) & mask
            key2 = e_sw | (b << _A_SH) | (a << _B_SH) | (d << _G_SH) | (g << _D_SH)
            out[key2] = c.swap_params()
        return DiffOp(self.n, self.lin, self.kin, self.lout, self.kout, out)

    def max_order(self) -> int:
        best = 0
        for key in self.terms:
            gd = key >> _G_SH
            total = 0
            for j in range(2 * self.n):
                total += (gd >> (_F * j)) & _FMASK
            best = max(best, total)
        return best

    def sorted_keys(self):
        return sorted(self.terms)

    def __repr__(self):
        return (
            f"DiffOp(n={self.n}, ({self.kin},{self.lin})->({self.kout},{self.lout}),"
            f" {len(self.terms)} terms)"
        )


def _ipow_scalar(m: int) -> ParamScalar:
    return ParamScalar.from_poly(ParamPoly.const(1).mul_i(m))


# ---------------------------------------------------------------------------
# composition and application
# ---------------------------------------------------------------------------

def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """a after b, renormal-ordered via [d_j, x_j] = 1."""
    if a.n != b.n:
        raise DimensionMismatchError(f"n={a.n} vs n={b.n}")
    if (a.kin, a.lin) != (b.kout, b.lout):
        raise DegreeError(
            f"cannot compose: a expects ({a.kin},{a.lin}), b yields ({b.kout},{b.lout})"
        )
    n = a.n
    sig = (n, b.kin, b.lin, a.kout, a.lout)
    if a.is_zero or b.is_zero:
        return DiffOp(*sig, {})
    fast = all(isinstance(c, ParamPoly) for c in a.terms.values()) and all(
        isinstance(c, ParamPoly) for c in b.terms.values()
    )
    a_by_in: dict = {}
    for ka, ca in a.terms.items():
        a_by_in.setdefault((ka >> 4) & _EO_MASK, []).append(
            (ka, ca.terms if fast else ca)
        )
    cache: dict = {}
    out_raw: dict = {}
    for kb, cb in b.terms.items():
        group = a_by_in.get(kb & _EO_MASK)
        if group is None:
            continue
        cb_val = cb.terms if fast else cb
        ab = (kb >> _A_SH) & _AB_MASK
        endo_b_in = kb & _EI_MASK
        kb_hi = kb >> _E_BITS
        for ka, ca_val in group:
            gd = ka >> _G_SH
            exp_key = (gd, ab)
            expansion = cache.get(exp_key)
            if expansion is None:
                expansion = _expansion(gd, ab, n)
                cache[exp_key] = expansion
            base = (((ka >> _E_BITS) + kb_hi) << _E_BITS) | (ka & _EO_MASK) | endo_b_in
            if fast:
                prod = pp_mul(ca_val, cb_val)
                if not prod:
                    continue
                for f, corr in expansion:
                    key = base - corr
                    acc = out_raw.get(key)
                    if acc is None:
                        acc = {}
                        out_raw[key] = acc
                    pp_iadd_scaled(acc, prod, f)
            else:
                prod = ca_val * cb_val
                if not prod:
                    continue
                for f, corr in expansion:
                    key = base - corr
                    cur = out_raw.get(key)
                    inc = prod if f == 1 else prod * f
                    cur = inc if cur is None else cur + inc
                    out_raw[key] = cur
    if fast:
        terms = {k: ParamPoly(v) for k, v in out_raw.items() if v}
    else:
        terms = {k: v for k, v in out_raw.items() if v}
    return DiffOp(*sig, terms)


def apply_op(op: DiffOp, form: PolyForm) -> PolyForm:
    """Apply a DiffOp to a polynomial form (Leibniz-exact)."""
    if op.n != form.n:
        raise DimensionMismatchError(f"n={op.n} vs n={form.n}")
    if (op.kin, op.lin) != (form.k, form.l):
        raise DegreeError(
            f"operator expects bidegree ({op.kin},{op.lin}), form has"
            f" ({form.k},{form.l})"
        )
    n = op.n
    out: dict = {}
    nf = _F * n
    fmask = (1 << nf) - 1
    for ko, co in op.terms.items():
        ixi = (ko >> 4) & 15
        kyi = (ko >> 12) & 15
        gd = ko >> _G_SH
        for kf, cf in form.terms.items():
            if (kf & 15) != ixi or ((kf >> 8) & 15) != kyi:
                continue
            ab = (kf >> _A_SH) & _AB_MASK
            # differentiate: need ab >= gd componentwise
            factor = 1
            ok = True
            for j in range(2 * n):
                g = (gd >> (_F * j)) & _FMASK
                if not g:
                    continue
                e = (ab >> (_F * j)) & _FMASK
                if e < g:
                    ok = False
                    break
                for step in range(g):
                    factor *= e - step
            if not ok:
                continue
            new_ab = ab - gd + ((ko >> _A_SH) & _AB_MASK)
            key = (ko & 0x0F0F) | ((new_ab & fmask) << _A_SH) | (
                (new_ab >> nf) << _B_SH
            )
            c = co * cf
            if factor != 1:
                c = c * factor if not isinstance(c, ParamPoly) else ParamPoly(
                    pp_scale(c.terms, factor)
                )
            cur = out.get(key)
            cur = c if cur is None else cur + c
            if cur:
                out[key] = cur
            else:
                out.pop(key, None)
    return PolyForm(n, op.kout, op.lout, out)


# ---------------------------------------------------------------------------
# atomic builders
# ---------------------------------------------------------------------------

def _mask_pairs(n, kx_in, ky_in):
    return [(mx, my) for mx in subsets_of_size(n, kx_in) for my in subsets_of_size(n, ky_in)]


def id_op(n, k, l, coeff=None) -> DiffOp:
    coeff = coeff if coeff is not None else PP_ONE
    z = (0,) * n
    terms = {
        pack_key(z, z, z, z, (mx, mx, my, my)): coeff
        for mx, my in _mask_pairs(n, k, l)
    }
    return DiffOp(n, k, l, k, l, terms)


def mult_monomial_op(n, k, l, alpha, beta, coeff=None) -> DiffOp:
    coeff = coeff if coeff is not None else PP_ONE
    z = (0,) * n
    terms = {
        pack_key(alpha, beta, z, z, (mx, mx, my, my)): coeff
        for mx, my in _mask_pairs(n, k, l)
    }
    return DiffOp(n, k, l, k, l, terms)


def mult_poly_op(n, k, l, poly_terms) -> DiffOp:
    """Multiplication by a polynomial given as {(alpha, beta): coeff}."""
    out = DiffOp(n, k, l, k, l, {})
    for (alpha, beta), coeff in poly_terms.items():
        out = out + mult_monomial_op(n, k, l, alpha, beta, coeff)
    return out


def deriv_op(n, k, l, j, side="x", coeff=None) -> DiffOp:
    coeff = coeff if coeff is not None else PP_ONE
    z = (0,) * n
    e = tuple(1 if p == j - 1 else 0 for p in range(n))
    gamma, delta = (e, z) if side == "x" else (z, e)
    terms = {
        pack_key(z, z, gamma, delta, (mx, mx, my, my)): coeff
        for mx, my in _mask_pairs(n, k, l)
    }
    return DiffOp(n, k, l, k, l, terms)


def endo_pair_op(n, ex: Endo | None, ey: Endo | None, kin, lin) -> DiffOp:
    """Constant endomorphism ex (x) ey restricted to bidegree (kin, lin).

    ``None`` stands for the identity on the corresponding factor.
    """
    z = (0,) * n
    x_entries = (
        [((m, m), PS_ONE_PP) for m in subsets_of_size(n, kin)]
        if ex is None
        else [
            ((o, i), _as_pp(c))
            for (o, i), c in ex.terms.items()
            if i.bit_count() == kin
        ]
    )
    y_entries = (
        [((m, m), PS_ONE_PP) for m in subsets_of_size(n, lin)]
        if ey is None
        else [
            ((o, i), _as_pp(c))
            for (o, i), c in ey.terms.items()
            if i.bit_count() == lin
        ]
    )
    kout = x_entries[0][0][0].bit_count() if x_entries else kin
    lout = y_entries[0][0][0].bit_count() if y_entries else lin
    terms = {}
    for (xo, xi), cx in x_entries:
        for (yo, yi), cy in y_entries:
            c = cx * cy
            if c:
                terms[pack_key(z, z, z, z, (xo, xi, yo, yi))] = c
    return DiffOp(n, kin, lin, kout, lout, terms)


PS_ONE_PP = PP_ONE


def _as_pp(c):
    """ParamScalar with trivial denominator -> ParamPoly; else keep."""
    if isinstance(c, ParamPoly):
        return c
    if isinstance(c, ParamScalar) and c.is_polynomial:
        return c.num
    return c


def op_from_endopoly(n, ep: EndoPoly, kin, lin, side="x") -> DiffOp:
    """Multiplication operator by an End-valued polynomial in one variable set."""
    z = (0,) * n
    terms: dict = {}
    kout = None
    for mono, endo in ep.terms.items():
        for (o, i), c in endo.terms.items():
            deg_in = i.bit_count()
            if side == "x":
                if deg_in != kin:
                    continue
                kout = o.bit_count()
                for my in subsets_of_size(n, lin):
                    key = pack_key(mono, z, z, z, (o, i, my, my))
                    _acc_term(terms, key, _as_pp(c))
            else:
                if deg_in != lin:
                    continue
                kout = o.bit_count()
                for mx in subsets_of_size(n, kin):
                    key = pack_key(z, mono, z, z, (mx, mx, o, i))
                    _acc_term(terms, key, _as_pp(c))
    if side == "x":
        return DiffOp(n, kin, lin, kout if kout is not None else kin, lin, terms)
    return DiffOp(n, kin, lin, kin, kout if kout is not None else lin, terms)


def _acc_term(terms, key, c):
    cur = terms.get(key)
    cur = c if cur is None else cur + c
    if cur:
        terms[key] = cur
    else:
        terms.pop(key, None)


def _check_degree(n, k):
    if k < -1 or k > n + 1:
        raise DegreeError(f"form degree {k} out of range for n={n}")


def d_op(n, k, l=0, side="x") -> DiffOp:
    """Exterior differential sum_m eps_m d_m on bidegree (k, l)."""
    _check_degree(n, k if side == "x" else l)
    z = (0,) * n
    terms = {}
    deg = k if side == "x" else l
    for m in range(1, n + 1):
        em = eps_j(n, m)
        gm = tuple(1 if p == m - 1 else 0 for p in range(n))
        for (o, i), c in em.terms.items():
            if i.bit_count() != deg:
                continue
            cp = _as_pp(c)
            if side == "x":
                for my in subsets_of_size(n, l):
                    _acc_term(terms, pack_key(z, z, gm, z, (o, i, my, my)), cp)
            else:
                for mx in subsets_of_size(n, k):
                    _acc_term(terms, pack_key(z, z, z, gm, (mx, mx, o, i)), cp)
    if side == "x":
        return DiffOp(n, k, l, k + 1, l, terms)
    return DiffOp(n, k, l, k, l + 1, terms)


def delta_op(n, k, l=0, side="x") -> DiffOp:
    """Co-differential -sum_m iota_m d_m; the zero operator on degree 0."""
    _check_degree(n, k if side == "x" else l)
    z = (0,) * n
    terms = {}
    deg = k if side == "x" else l
    for m in range(1, n + 1):
        im = iota_j(n, m)
        gm = tuple(1 if p == m - 1 else 0 for p in range(n))
        for (o, i), c in im.terms.items():
            if i.bit_count() != deg:
                continue
            cp = _as_pp(c * ParamScalar.const(-1))
            if side == "x":
                for my in subsets_of_size(n, l):
                    _acc_term(terms, pack_key(z, z, gm, z, (o, i, my, my)), cp)
            else:
                for mx in subsets_of_size(n, k):
                    _acc_term(terms, pack_key(z, z, z, gm, (mx, mx, o, i)), cp)
    if side == "x":
        return DiffOp(n, k, l, k - 1, l, terms)
    return DiffOp(n, k, l, k, l - 1, terms)


def laplacian_op(n, k, l=0, side="x") -> DiffOp:
    """Hodge Laplacian -(d delta + delta d) on bidegree (k, l)."""
    if side == "x":
        dd = compose(d_op(n, k - 1, l), delta_op(n, k, l))
        sd = compose(delta_op(n, k + 1, l), d_op(n, k, l))
    else:
        dd = compose(d_op(n, k, l - 1, "y"), delta_op(n, k, l, "y"))
        sd = compose(delta_op(n, k, l + 1, "y"), d_op(n, k, l, "y"))
    return (dd + sd).scale(-1)


def q_diff_op(n, k, l=0, side="x", mixed=False) -> DiffOp:
    """sum_m d_m^2 (x side by default); with mixed=True, Q(d_x - d_y)."""
    out = DiffOp(n, k, l, k, l, {})
    for j in range(1, n + 1):
        if mixed:
            dj = deriv_op(n, k, l, j, "x") - deriv_op(n, k, l, j, "y")
        else:
            dj = deriv_op(n, k, l, j, side)
        out = out + compose(dj, dj)
    return out


def lie_derivative(n, k, field, l=0) -> DiffOp:
    """Cartan formula L_X = d iota_X + iota_X d for a polynomial field X.

    ``field`` is a length-n sequence of x-polynomials {exponent tuple: coeff}.
    """
    z = (0,) * n
    iota_terms: dict = {}
    for m in range(1, n + 1):
        comp = field[m - 1]
        if not comp:
            continue
        im = iota_j(n, m)
        for mono, q in comp.items():
            for (o, i), c in im.terms.items():
                cp = _as_pp(c)
                if isinstance(cp, ParamPoly):
                    cp = ParamPoly(pp_scale(cp.terms, q)) if not isinstance(
                        q, ParamPoly
                    ) else cp * q
                else:
                    cp = cp * q
                if not cp:
                    continue
                _acc_term(iota_terms, (mono, o, i), cp)
    # build iota_X at the two degrees where it is needed
    def iota_at(deg):
        terms = {}
        for (mono, o, i), c in iota_terms.items():
            if i.bit_count() != deg:
                continue
            for my in subsets_of_size(n, l):
                _acc_term(terms, pack_key(mono, z, z, z, (o, i, my, my)), c)
        return DiffOp(n, deg, l, deg - 1, l, terms)

    d_after = compose(d_op(n, k - 1, l), iota_at(k))
    d_before = compose(iota_at(k + 1), d_op(n, k, l))
    return d_after + d_before


# ---------------------------------------------------------------------------
# Fourier correspondence
# ---------------------------------------------------------------------------

def _fourier_map(op: DiffOp, ipow_sign: int) -> DiffOp:
    """Algebra map x_j -> c*d_j, d_j -> c*x_j with c = i**ipow_sign (+1/-1 i)."""
    n = op.n
    z = (0,) * n
    acc: dict = {}
    for key, c in op.terms.items():
        alpha, beta, gamma, delta, endo = unpack_key(key, n)
        total = sum(alpha) + sum(beta) + sum(gamma) + sum(delta)
        cc = (
            ParamPoly(pp_mul_ipow(c.terms, (ipow_sign * total) % 4))
            if isinstance(c, ParamPoly)
            else c * _ipow_scalar((ipow_sign * total) % 4)
        )
        # mapped word: d^alpha d^beta (x^gamma y^delta), anti-ordered
        diff_part = DiffOp(
            n, op.kin, op.lin, op.kout, op.lout,
            {pack_key(z, z, alpha, beta, endo): cc},
        )
        if sum(gamma) + sum(delta):
            mult_part = DiffOp(
                n, op.kin, op.lin, op.kin, op.lin,
                {
                    pack_key(
                        gamma, delta, z, z,
                        (endo[1], endo[1], endo[3], endo[3]),
                    ): PP_ONE
                    if isinstance(cc, ParamPoly)
                    else ParamScalar.const(1)
                },
            )
            piece = compose(diff_part, mult_part)
        else:
            piece = diff_part
        for k2, c2 in piece.terms.items():
            _acc_term(acc, k2, c2)
    return DiffOp(op.n, op.kin, op.lin, op.kout, op.lout, acc)


def fourier_image(op: DiffOp) -> DiffOp:
    """Transport along F: source-variable operators to target-variable ones.

    Determined by d_j -> -i x_j and (x_j .) -> -i d_j in each variable set;
    constant endomorphism factors are untouched.
    """
    return _fourier_map(op, 3)  # -i = i^3


def fourier_preimage(op: DiffOp) -> DiffOp:
    """Inverse of :func:`fourier_image`: x_j -> i d_j, d_j -> i x_j."""
    return _fourier_map(op, 1)


# ---------------------------------------------------------------------------
# monomial probing (independent equality oracle)
# ---------------------------------------------------------------------------

def monomial_forms(n, k, l, max_degree, two_vars=True):
    """All monomial test forms of total degree <= max_degree."""
    nvars = 2 * n if two_vars else n
    monos = []
    for deg in range(max_degree + 1):
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            monos.append(tuple(e))
    forms = []
    for mono in monos:
        if two_vars:
            alpha, beta = tuple(mono[:n]), tuple(mono[n:])
        else:
            alpha, beta = tuple(mono), (0,) * n
        for mx in subsets_of_size(n, k):
            for my in subsets_of_size(n, l):
                forms.append(PolyForm.monomial(n, k, l, alpha, beta, mx, my))
    return forms


def annihilates_all_monomials(op: DiffOp, max_degree: int | None = None) -> bool:
    """Order-r operators vanish iff they kill all monomials of degree <= r."""
    if op.is_zero:
        return True
    r = op.max_order() if max_degree is None else max_degree
    for form in monomial_forms(op.n, op.kin, op.lin, r):
        if not apply_op(op, form).is_zero:
            return False
    return True
