"""Buchberger's algorithm on submodules of graded free modules.

Free-module elements are sparse dicts mapping (position, monomial) to a
coefficient.  Syzygies and lifts both come from one mechanism: a Groebner
basis of the columns extended by unit-vector bookkeeping components under an
elimination order, so membership certificates double as lift coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ring import (AlgebraError, DegreeError, Polynomial, RingContext, POT,
                   mono_degree, mono_div, mono_divides, mono_lcm, mono_mul)

# Vec: dict[(position, exponent-tuple)] -> coefficient in 1..p-1


def vec_is_zero(v: dict) -> bool:
    return not v


def vec_add_scaled(v: dict, w: dict, coeff: int, mono: tuple, p: int) -> dict:
    """v + coeff * x^mono * w, reduced mod p."""
    out = dict(v)
    for (pos, m), c in w.items():
        key = (pos, mono_mul(m, mono))
        val = (out.get(key, 0) + coeff * c) % p
        if val:
            out[key] = val
        else:
            out.pop(key, None)
    return out


def vec_scale(v: dict, coeff: int, p: int) -> dict:
    coeff %= p
    if coeff == 0:
        return {}
    return {t: (c * coeff) % p for t, c in v.items()}


def vec_degree(v: dict, degrees) -> int:
    """Common degree of a homogeneous vector; degrees are the basis twists."""
    if not v:
        raise AlgebraError("zero vector has no degree")
    (pos, m), _ = next(iter(v.items()))
    return mono_degree(m) + degrees[pos]


def columns_to_vec(col, ctx: RingContext) -> dict:
    """Column of Polynomials -> sparse vector."""
    v = {}
    for pos, poly in enumerate(col):
        for m, c in poly.terms.items():
            v[(pos, m)] = c
    return v


def vec_to_column(v: dict, rank: int, ctx: RingContext):
    cols = [dict() for _ in range(rank)]
    for (pos, m), c in v.items():
        cols[pos][m] = c
    return [Polynomial(ctx, t) for t in cols]


# -- term orders on free modules --------------------------------------------

def make_order_key(ctx: RingContext, module_order: str | None = None):
    """Key function on (position, monomial); larger key = larger term."""
    mo = module_order or ctx.module_order
    mk = ctx.mono_key
    if mo == POT:
        def key(t):
            pos, m = t
            return (-pos, mk(m))
    else:  # TOP and the schreyer-induced default collapse to TOP here;
        # genuine Schreyer comparisons are built by make_schreyer_key.
        def key(t):
            pos, m = t
            return (mk(m), -pos)
    return key


def make_schreyer_key(ctx: RingContext, target_lts):
    """Order induced by leading terms of the target generators.

    A term x^a e_i compares by the image leading term x^a * lt(g_i) first,
    position index breaking ties.
    """
    mk = ctx.mono_key
    base = make_order_key(ctx)

    def key(t):
        pos, m = t
        lpos, lm = target_lts[pos]
        return (base((lpos, mono_mul(m, lm))), -pos)
    return key


def make_elim_key(ctx: RingContext, split: int):
    """Any term in positions < split beats any term in positions >= split."""
    base = make_order_key(ctx)

    def key(t):
        pos, m = t
        return (1 if pos < split else 0, base(t))
    return key


# -- reduction and Buchberger ------------------------------------------------

def leading_term(v: dict, key):
    t = max(v, key=key)
    return t, v[t]


def _find_reducer(term, lts):
    pos, m = term
    for i, (lpos, lm) in enumerate(lts):
        if lpos == pos and mono_divides(lm, m):
            return i
    return -1


def reduce_vec(v: dict, basis, lts, key, p: int) -> dict:
    """Full normal form of v against basis (monic elements assumed)."""
    result = {}
    work = dict(v)
    while work:
        t, c = leading_term(work, key)
        i = _find_reducer(t, lts)
        if i < 0:
            result[t] = c
            del work[t]
            continue
        g = basis[i]
        lpos, lm = lts[i]
        quot = mono_div(t[1], lm)
        work = vec_add_scaled(work, g, -c, quot, p)
    return result


def buchberger_vecs(vecs, key, ctx: RingContext):
    """Auto-reduced monic Groebner basis of the span of vecs.

    Normal selection strategy: pairs by ascending S-vector degree, then by
    index, so the output is deterministic.  The chain criterion prunes pairs
    whose lcm is divisible by a third leading term with both flanking pairs
    already handled.
    """
    p = ctx.characteristic
    basis = []
    lts = []
    degs = []

    def push(v):
        t, c = leading_term(v, key)
        v = vec_scale(v, ctx.inv(c), p)
        basis.append(v)
        lts.append(t)
        degs.append(mono_degree(t[1]))

    for v in vecs:
        if v:
            r = reduce_vec(v, basis, lts, key, p)
            if r:
                push(r)

    def pair_degree(i, j):
        return mono_degree(mono_lcm(lts[i][1], lts[j][1]))

    pairs = set()
    todo = []
    for i in range(len(basis)):
        for j in range(i):
            if lts[i][0] == lts[j][0]:
                pairs.add((j, i))
                todo.append((j, i))
    done = set()
    while todo:
        todo.sort(key=lambda ij: (pair_degree(*ij), ij))
        i, j = todo.pop(0)
        pairs.discard((i, j))
        done.add((i, j))
        # chain criterion
        li, lj = lts[i][1], lts[j][1]
        lcm = mono_lcm(li, lj)
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or lts[k][0] != lts[i][0]:
                continue
            if mono_divides(lts[k][1], lcm):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik in done and pjk in done:
                    skip = True
                    break
        if skip:
            continue
        s = vec_add_scaled(
            vec_add_scaled({}, basis[i], 1, mono_div(lcm, li), p),
            basis[j], -1, mono_div(lcm, lj), p)
        r = reduce_vec(s, basis, lts, key, p)
        if r:
            push(r)
            n = len(basis) - 1
            for k in range(n):
                if lts[k][0] == lts[n][0]:
                    pairs.add((k, n))
                    todo.append((k, n))
    # auto-reduce: drop redundant leading terms, then tail-reduce
    keep = []
    for i in range(len(basis)):
        lt = lts[i]
        redundant = any(
            j != i and lts[j][0] == lt[0]
            and mono_divides(lts[j][1], lt[1])
            and (lts[j][1] != lt[1] or j < i)
            for j in range(len(basis)))
        if not redundant:
            keep.append(i)
    basis = [basis[i] for i in keep]
    lts = [lts[i] for i in keep]
    out = []
    for i in range(len(basis)):
        others = basis[:i] + basis[i + 1:]
        olts = lts[:i] + lts[i + 1:]
        r = reduce_vec(basis[i], others, olts, key, p)
        t, c = leading_term(r, key)
        out.append(vec_scale(r, ctx.inv(c), p))
    order = sorted(range(len(out)), key=lambda i: key(lts[i]), reverse=True)
    return [out[i] for i in order]


@dataclass
class GroebnerBasis:
    """Auto-reduced Groebner basis of a submodule of a graded free module."""

    ctx: RingContext
    rank: int
    generators: list          # list of Vec, monic
    key: object               # term-order key function
    leading_terms: list = field(default=None)

    def __post_init__(self):
        if self.leading_terms is None:
            self.leading_terms = [leading_term(g, self.key)[0]
                                  for g in self.generators]

    def normal_form_vec(self, v: dict) -> dict:
        return reduce_vec(v, self.generators, self.leading_terms, self.key,
                          self.ctx.characteristic)

    def contains_vec(self, v: dict) -> bool:
        return not self.normal_form_vec(v)


def buchberger(gens, ctx: RingContext, rank: int | None = None,
               module_order: str | None = None) -> GroebnerBasis:
    """Groebner basis of the submodule generated by ``gens``.

    ``gens`` is a list of columns (lists of Polynomial) or sparse vectors.
    All elements must be homogeneous with respect to some common grading of
    the ambient free module; inhomogeneous input is rejected.
    """
    vecs = []
    r = rank
    for g in gens:
        if isinstance(g, dict):
            vecs.append(g)
            if g and r is None:
                r = max(pos for pos, _ in g) + 1
        else:
            if r is None:
                r = len(g)
            vecs.append(columns_to_vec(g, ctx))
    key = make_order_key(ctx, module_order)
    basis = buchberger_vecs(vecs, key, ctx)
    return GroebnerBasis(ctx, r or 1, basis, key)


def normal_form(v, gb: GroebnerBasis):
    """Normal form; returns the same shape (column or vector) as the input."""
    if isinstance(v, dict):
        return gb.normal_form_vec(v)
    vec = columns_to_vec(v, gb.ctx)
    return vec_to_column(gb.normal_form_vec(vec), len(v), gb.ctx)


# -- graded free-module maps -------------------------------------------------

class FreeModuleMap:
    """Graded matrix between free modules with degree twists.

    Stored column-major: ``cols[j][i]`` is the entry in target position i of
    source basis vector j.  Every nonzero entry must be homogeneous of degree
    source_degrees[j] - target_degrees[i].
    """

    def __init__(self, ctx: RingContext, source_degrees, target_degrees,
                 cols, check: bool = True):
        self.ctx = ctx
        self.source_degrees = tuple(source_degrees)
        self.target_degrees = tuple(target_degrees)
        self.cols = [list(col) for col in cols]
        self._ext_gb = None
        self._plain_gb = None
        if len(self.cols) != len(self.source_degrees):
            raise AlgebraError("column count does not match source rank")
        for col in self.cols:
            if len(col) != len(self.target_degrees):
                raise AlgebraError("column length does not match target rank")
        if check:
            self._check_homogeneous()

    def _check_homogeneous(self):
        for j, col in enumerate(self.cols):
            for i, f in enumerate(col):
                if f.is_zero():
                    continue
                want = self.source_degrees[j] - self.target_degrees[i]
                if not f.is_homogeneous() or f.degree != want:
                    raise DegreeError(
                        f"entry ({i},{j}) = {f} has degree {f.degree}, "
                        f"expected {want}")

    @property
    def source_rank(self) -> int:
        return len(self.source_degrees)

    @property
    def target_rank(self) -> int:
        return len(self.target_degrees)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.cols[j][i]

    def is_zero(self) -> bool:
        return all(f.is_zero() for col in self.cols for f in col)

    def column_vec(self, j: int) -> dict:
        return columns_to_vec(self.cols[j], self.ctx)

    def column_vecs(self):
        return [self.column_vec(j) for j in range(self.source_rank)]

    def compose(self, other: "FreeModuleMap") -> "FreeModuleMap":
        """self o other (other feeds into self)."""
        if other.target_degrees != self.source_degrees:
            raise AlgebraError("inner degree lists do not match in composition")
        zero = self.ctx.zero()
        cols = []
        for j in range(other.source_rank):
            col = [zero] * self.target_rank
            for k in range(self.source_rank):
                f = other.cols[j][k]
                if f.is_zero():
                    continue
                for i in range(self.target_rank):
                    g = self.cols[k][i]
                    if not g.is_zero():
                        col[i] = col[i] + g * f
            cols.append(col)
        return FreeModuleMap(self.ctx, other.source_degrees,
                             self.target_degrees, cols, check=False)

    def hstack(self, other: "FreeModuleMap") -> "FreeModuleMap":
        if other.target_degrees != self.target_degrees:
            raise AlgebraError("cannot stack maps with different targets")
        return FreeModuleMap(self.ctx,
                             self.source_degrees + other.source_degrees,
                             self.target_degrees,
                             self.cols + other.cols, check=False)

    def transpose(self) -> "FreeModuleMap":
        """Dual map between the dual free modules (degrees negated)."""
        cols = [[self.cols[j][i] for j in range(self.source_rank)]
                for i in range(self.target_rank)]
        return FreeModuleMap(self.ctx,
                             tuple(-d for d in self.target_degrees),
                             tuple(-d for d in self.source_degrees),
                             cols, check=False)

    @classmethod
    def identity(cls, ctx: RingContext, degrees) -> "FreeModuleMap":
        degrees = tuple(degrees)
        one, zero = ctx.one(), ctx.zero()
        cols = [[one if i == j else zero for i in range(len(degrees))]
                for j in range(len(degrees))]
        return cls(ctx, degrees, degrees, cols, check=False)

    @classmethod
    def zero_map(cls, ctx: RingContext, source_degrees,
                 target_degrees) -> "FreeModuleMap":
        zero = ctx.zero()
        cols = [[zero] * len(tuple(target_degrees))
                for _ in range(len(tuple(source_degrees)))]
        return cls(ctx, source_degrees, target_degrees, cols, check=False)

    @classmethod
    def from_vecs(cls, ctx: RingContext, vecs, target_degrees,
                  degrees=None) -> "FreeModuleMap":
        """Build a map whose columns are the given sparse vectors."""
        target_degrees = tuple(target_degrees)
        rank = len(target_degrees)
        cols = [vec_to_column(v, rank, ctx) for v in vecs]
        if degrees is None:
            degrees = [vec_degree(v, target_degrees) for v in vecs]
        return cls(ctx, degrees, target_degrees, cols, check=False)

    # -- membership machinery ------------------------------------------------

    def image_gb(self) -> GroebnerBasis:
        """GB of the column span, cached."""
        if self._plain_gb is None:
            self._plain_gb = buchberger(
                self.column_vecs(), self.ctx, rank=self.target_rank)
        return self._plain_gb

    def _extended_gb(self):
        """GB of {col_j + e_{t+j}} under an elimination order, cached.

        Elements supported purely on the bookkeeping block form a generating
        set of the syzygy module (Schreyer-style), and normal forms yield
        explicit lift coefficients.
        """
        if self._ext_gb is not None:
            return self._ext_gb
        t = self.target_rank
        vecs = []
        for j in range(self.source_rank):
            v = self.column_vec(j)
            v[(t + j, (0,) * self.ctx.nvars)] = 1
            vecs.append(v)
        key = make_elim_key(self.ctx, t)
        basis = buchberger_vecs(vecs, key, self.ctx)
        self._ext_gb = GroebnerBasis(self.ctx, t + self.source_rank,
                                     basis, key)
        return self._ext_gb

    def __repr__(self):
        rows = []
        for i in range(self.target_rank):
            rows.append("[" + ", ".join(str(self.cols[j][i])
                                        for j in range(self.source_rank)) + "]")
        return "FreeModuleMap(" + "; ".join(rows) + ")"


def syzygy_basis(m: FreeModuleMap) -> FreeModuleMap:
    """Map s with m o s = 0 and image(s) = kernel(m)."""
    gb = m._extended_gb()
    t = m.target_rank
    syz = []
    for g in gb.generators:
        if all(pos >= t for pos, _ in g):
            syz.append({(pos - t, mono): c for (pos, mono), c in g.items()})
    syz.sort(key=lambda v: (vec_degree(v, m.source_degrees),
                            sorted(v.items())))
    return FreeModuleMap.from_vecs(m.ctx, syz, m.source_degrees)


def lift_solve(a: FreeModuleMap, b: FreeModuleMap):
    """x with a o x = b when every column of b lies in image(a), else None."""
    if a.target_degrees != b.target_degrees:
        raise AlgebraError("targets of a and b do not agree")
    gb = a._extended_gb()
    t = a.target_rank
    p = a.ctx.characteristic
    xcols = []
    for j in range(b.source_rank):
        v = b.column_vec(j)
        r = gb.normal_form_vec(v)
        if any(pos < t for pos, _ in r):
            return None
        x = {(pos - t, mono): (-c) % p for (pos, mono), c in r.items()}
        xcols.append(x)
    return FreeModuleMap.from_vecs(a.ctx, xcols, a.source_degrees,
                                   degrees=b.source_degrees)
