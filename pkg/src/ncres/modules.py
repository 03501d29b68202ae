"""Finitely presented graded modules over F_p[x_1..x_r].

A module is a free cover with twist degrees plus a homogeneous relation
matrix.  Presentations are never minimalized behind the caller's back;
minimalization happens only inside ``minimal_presentation`` and the
resolution machinery, which cache their results on the module.
"""

from __future__ import annotations

import itertools
import math

from .ring import (AlgebraError, Polynomial, RingContext, mono_degree,
                   mono_divides, monomials_of_degree)
from .groebner import (FreeModuleMap, GroebnerBasis, buchberger,
                       columns_to_vec, syzygy_basis, lift_solve,
                       vec_to_column, vec_degree)

INFINITE = math.inf


def _shifted(m: FreeModuleMap, e: int) -> FreeModuleMap:
    if e == 0:
        return m
    return FreeModuleMap(m.ctx,
                         tuple(d + e for d in m.source_degrees),
                         tuple(d + e for d in m.target_degrees),
                         m.cols, check=False)


def column_relations(x: FreeModuleMap, y: FreeModuleMap | None) -> FreeModuleMap:
    """Generators of {c : x*c lies in the column span of y}.

    With y empty this is just the syzygy module of x.  The output is a map
    into the source of x.
    """
    if y is None or y.source_rank == 0:
        return syzygy_basis(x)
    block = x.hstack(y)
    syz = syzygy_basis(block)
    k = x.source_rank
    vecs = []
    for j in range(syz.source_rank):
        v = syz.column_vec(j)
        proj = {(p, m): c for (p, m), c in v.items() if p < k}
        if proj:
            vecs.append(proj)
    return FreeModuleMap.from_vecs(x.ctx, vecs, x.source_degrees)


class FPModule:
    """Finitely presented graded module: generator degrees + relations."""

    def __init__(self, ctx: RingContext, gen_degrees, relations=None,
                 check: bool = True):
        self.ctx = ctx
        self.gen_degrees = tuple(gen_degrees)
        if relations is None:
            relations = FreeModuleMap.zero_map(ctx, (), self.gen_degrees)
        if relations.target_degrees != self.gen_degrees:
            raise AlgebraError("relation target degrees do not match generators")
        if check:
            relations._check_homogeneous()
        self.relations = relations
        self._rel_gb = None
        self._min = None           # (min_module, to_min, from_min)
        self._res_maps = None      # list of minimal resolution differentials
        self._res_complete = False
        self._syz_cache = {}

    # -- basics --------------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.gen_degrees)

    def rel_gb(self) -> GroebnerBasis:
        if self._rel_gb is None:
            self._rel_gb = buchberger(self.relations.column_vecs(), self.ctx,
                                      rank=max(self.rank, 1))
        return self._rel_gb

    def element_nf(self, vec: dict) -> dict:
        return self.rel_gb().normal_form_vec(vec)

    def is_zero(self) -> bool:
        zero_mono = (0,) * self.ctx.nvars
        return all(not self.element_nf({(i, zero_mono): 1})
                   for i in range(self.rank))

    def __eq__(self, other) -> bool:
        return (isinstance(other, FPModule) and self.ctx == other.ctx
                and self.gen_degrees == other.gen_degrees
                and self.relations.source_degrees == other.relations.source_degrees
                and all(self.relations.cols[j][i] == other.relations.cols[j][i]
                        for j in range(self.relations.source_rank)
                        for i in range(self.rank)))

    __hash__ = None

    def __repr__(self):
        return (f"FPModule(gens={list(self.gen_degrees)}, "
                f"relations={self.relations.source_rank})")

    def twist(self, e: int) -> "FPModule":
        return FPModule(self.ctx, [d + e for d in self.gen_degrees],
                        _shifted(self.relations, e), check=False)

    # -- standard monomials --------------------------------------------------

    def _position_lts(self):
        lts = [[] for _ in range(self.rank)]
        for pos, m in self.rel_gb().leading_terms:
            lts[pos].append(m)
        return lts

    def hilbert_function(self, up_to: int):
        """Dimension of each graded piece 0..up_to."""
        lts = self._position_lts()
        out = []
        for t in range(up_to + 1):
            n = 0
            for i, d in enumerate(self.gen_degrees):
                e = t - d
                if e < 0:
                    continue
                for mono in monomials_of_degree(self.ctx.nvars, e):
                    if not any(mono_divides(l, mono) for l in lts[i]):
                        n += 1
            out.append(n)
        return out

    def standard_monomials(self):
        """All (position, monomial) standard pairs; requires finite length."""
        lts = self._position_lts()
        out = []
        for i in range(self.rank):
            bounds = []
            for v in range(self.ctx.nvars):
                pure = [m[v] for m in lts[i]
                        if all(e == 0 for w, e in enumerate(m) if w != v)]
                if not pure:
                    return None
                bounds.append(min(pure))
            for exps in itertools.product(*(range(b) for b in bounds)):
                if not any(mono_divides(l, exps) for l in lts[i]):
                    out.append((i, exps))
        out.sort(key=lambda t: (mono_degree(t[1]) + self.gen_degrees[t[0]],
                                t[0], t[1]))
        return out

    def k_dimension(self):
        """Number of standard monomials, or INFINITE."""
        std = self.standard_monomials()
        return INFINITE if std is None else len(std)


def make_module(gen_degrees, relations, ctx: RingContext) -> FPModule:
    """Validated FPModule; relation columns must be homogeneous."""
    return FPModule(ctx, gen_degrees, relations, check=True)


def free_module(ctx: RingContext, degrees=(0,)) -> FPModule:
    return FPModule(ctx, degrees, None)


# -- morphisms ---------------------------------------------------------------

class ModuleMorphism:
    """Matrix on generator covers, certified to descend to the quotients.

    ``degree`` is the homogeneous degree of the morphism; the matrix maps the
    source cover shifted by ``degree`` to the target cover.
    """

    def __init__(self, source: FPModule, target: FPModule,
                 matrix: FreeModuleMap, degree: int = 0, check: bool = True):
        self.source = source
        self.target = target
        self.degree = degree
        want_src = tuple(d + degree for d in source.gen_degrees)
        if matrix.target_degrees != target.gen_degrees:
            raise AlgebraError("matrix target does not match target module")
        if matrix.source_degrees != want_src:
            raise AlgebraError("matrix source does not match source module")
        self.matrix = matrix
        if check:
            matrix._check_homogeneous()
            self._check_well_defined()

    def _check_well_defined(self):
        if self.source.relations.source_rank == 0:
            return
        pushed = self.matrix.compose(_shifted(self.source.relations,
                                              self.degree))
        gb = self.target.rel_gb()
        for j in range(pushed.source_rank):
            if not gb.contains_vec(pushed.column_vec(j)):
                raise AlgebraError(
                    "matrix does not descend to a morphism of modules")

    def is_zero(self) -> bool:
        gb = self.target.rel_gb()
        return all(gb.contains_vec(self.matrix.column_vec(j))
                   for j in range(self.matrix.source_rank))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleMorphism):
            return NotImplemented
        if (self.source is not other.source and self.source != other.source):
            return False
        if (self.target is not other.target and self.target != other.target):
            return False
        if self.degree != other.degree:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def compose(self, other: "ModuleMorphism") -> "ModuleMorphism":
        """self o other."""
        mat = self.matrix.compose(_shifted(other.matrix, self.degree))
        return ModuleMorphism(other.source, self.target, mat,
                              self.degree + other.degree, check=False)

    def _entrywise(self, other, sign: int) -> "ModuleMorphism":
        if self.degree != other.degree:
            raise AlgebraError("cannot add morphisms of different degrees")
        cols = [[self.matrix.cols[j][i] + sign * other.matrix.cols[j][i]
                 for i in range(self.matrix.target_rank)]
                for j in range(self.matrix.source_rank)]
        mat = FreeModuleMap(self.ctx, self.matrix.source_degrees,
                            self.matrix.target_degrees, cols, check=False)
        return ModuleMorphism(self.source, self.target, mat, self.degree,
                              check=False)

    def __add__(self, other):
        return self._entrywise(other, 1)

    def __sub__(self, other):
        return self._entrywise(other, -1)

    @property
    def ctx(self):
        return self.source.ctx

    @classmethod
    def identity(cls, m: FPModule) -> "ModuleMorphism":
        return cls(m, m, FreeModuleMap.identity(m.ctx, m.gen_degrees),
                   check=False)

    @classmethod
    def zero(cls, source: FPModule, target: FPModule,
             degree: int = 0) -> "ModuleMorphism":
        mat = FreeModuleMap.zero_map(
            source.ctx, tuple(d + degree for d in source.gen_degrees),
            target.gen_degrees)
        return cls(source, target, mat, degree, check=False)

    def is_injective(self) -> bool:
        return kernel(self).is_zero()

    def is_surjective(self) -> bool:
        return cokernel(self).is_zero()

    def __repr__(self):
        return (f"ModuleMorphism(degree={self.degree}, "
                f"matrix={self.matrix!r})")


def morphism_factors_through(f: ModuleMorphism, g: ModuleMorphism):
    """h with g o h = f, or None.

    When g is injective the factorization is automatically well-defined;
    callers enforce injectivity where they rely on it.
    """
    if f.target is not g.target and f.target != g.target:
        raise AlgebraError("targets differ")
    block = g.matrix.hstack(f.target.relations)
    sol = lift_solve(block, f.matrix)
    if sol is None:
        return None
    k = g.matrix.source_rank
    deg = f.degree - g.degree
    cols = [sol.cols[j][:k] for j in range(sol.source_rank)]
    mat = FreeModuleMap(f.ctx,
                        tuple(d - g.degree for d in sol.source_degrees),
                        g.source.gen_degrees, cols, check=False)
    return ModuleMorphism(f.source, g.source, mat, deg, check=False)


# -- direct sums -------------------------------------------------------------

def direct_sum_with_maps(a: FPModule, b: FPModule):
    """(a + b, inject_a, inject_b, project_a, project_b)."""
    if a.ctx != b.ctx:
        raise AlgebraError("context mismatch in direct sum")
    ctx = a.ctx
    zero = ctx.zero()
    gens = a.gen_degrees + b.gen_degrees
    ra, rb = a.rank, b.rank
    cols = []
    for j in range(a.relations.source_rank):
        cols.append(a.relations.cols[j] + [zero] * rb)
    for j in range(b.relations.source_rank):
        cols.append([zero] * ra + b.relations.cols[j])
    rel = FreeModuleMap(ctx,
                        a.relations.source_degrees + b.relations.source_degrees,
                        gens, cols, check=False)
    s = FPModule(ctx, gens, rel, check=False)

    def block(src_deg, tgt_deg, row_off, col_off, n):
        c = [[zero] * len(tgt_deg) for _ in range(len(src_deg))]
        for i in range(n):
            c[col_off + i][row_off + i] = ctx.one()
        return FreeModuleMap(ctx, src_deg, tgt_deg, c, check=False)

    ia = ModuleMorphism(a, s, block(a.gen_degrees, gens, 0, 0, ra),
                        check=False)
    ib = ModuleMorphism(b, s, block(b.gen_degrees, gens, ra, 0, rb),
                        check=False)
    pa_mat = FreeModuleMap(ctx, gens, a.gen_degrees,
                           [[ctx.one() if i == j else zero
                             for i in range(ra)] for j in range(ra)]
                           + [[zero] * ra for _ in range(rb)], check=False)
    pb_mat = FreeModuleMap(ctx, gens, b.gen_degrees,
                           [[zero] * rb for _ in range(ra)]
                           + [[ctx.one() if i == j else zero
                               for i in range(rb)] for j in range(rb)],
                           check=False)
    pa = ModuleMorphism(s, a, pa_mat, check=False)
    pb = ModuleMorphism(s, b, pb_mat, check=False)
    return s, ia, ib, pa, pb


def direct_sum(a: FPModule, b: FPModule) -> FPModule:
    return direct_sum_with_maps(a, b)[0]


# -- kernels, images, cokernels ---------------------------------------------

def kernel_with_inclusion(f: ModuleMorphism):
    S, T = f.source, f.target
    ctx = f.ctx
    pre = column_relations(f.matrix, T.relations)
    # pre lives over the shifted cover of S; shift generator degrees back
    gen_degrees = tuple(d - f.degree for d in pre.source_degrees)
    srel = _shifted(S.relations, f.degree)
    rel = column_relations(pre, srel)
    rel = FreeModuleMap(ctx, tuple(d - f.degree for d in rel.source_degrees),
                        gen_degrees, rel.cols, check=False)
    K = FPModule(ctx, gen_degrees, rel, check=False)
    incl_mat = FreeModuleMap(ctx, gen_degrees, S.gen_degrees, pre.cols,
                             check=False)
    incl = ModuleMorphism(K, S, incl_mat, check=False)
    return K, incl


def kernel(f: ModuleMorphism) -> FPModule:
    return kernel_with_inclusion(f)[0]


def image_with_maps(f: ModuleMorphism):
    """(image, inclusion into target, surjection from source)."""
    S, T = f.source, f.target
    ctx = f.ctx
    gen_degrees = tuple(d + f.degree for d in S.gen_degrees)
    rel = column_relations(f.matrix, T.relations)
    rel = FreeModuleMap(ctx, rel.source_degrees, gen_degrees, rel.cols,
                        check=False)
    I = FPModule(ctx, gen_degrees, rel, check=False)
    incl = ModuleMorphism(
        I, T, FreeModuleMap(ctx, gen_degrees, T.gen_degrees, f.matrix.cols,
                            check=False), check=False)
    proj = ModuleMorphism(
        S, I, FreeModuleMap.identity(ctx, gen_degrees), degree=f.degree,
        check=False)
    return I, incl, proj


def image(f: ModuleMorphism) -> FPModule:
    return image_with_maps(f)[0]


def cokernel_with_projection(f: ModuleMorphism):
    T = f.target
    rel = f.matrix.hstack(T.relations)
    C = FPModule(f.ctx, T.gen_degrees, rel, check=False)
    proj = ModuleMorphism(T, C, FreeModuleMap.identity(f.ctx, T.gen_degrees),
                          check=False)
    return C, proj


def cokernel(f: ModuleMorphism) -> FPModule:
    return cokernel_with_projection(f)[0]


def homology(g: ModuleMorphism, f: ModuleMorphism) -> FPModule:
    """kernel(g)/image(f) for a composable pair with g o f = 0."""
    B = g.source
    if f.target is not B and f.target != B:
        raise AlgebraError("maps are not composable")
    ctx = g.ctx
    pre = column_relations(g.matrix, g.target.relations)
    gen_degrees = tuple(d - g.degree for d in pre.source_degrees)
    v = _shifted(f.matrix, g.degree).hstack(
        _shifted(B.relations, g.degree))
    rel = column_relations(pre, v)
    rel = FreeModuleMap(ctx, tuple(d - g.degree for d in rel.source_degrees),
                        gen_degrees, rel.cols, check=False)
    return FPModule(ctx, gen_degrees, rel, check=False)


# -- minimal presentations and resolutions ----------------------------------

def _trim_columns(m: FreeModuleMap) -> FreeModuleMap:
    """Minimal generating set of the column span (graded Nakayama greedy)."""
    ctx = m.ctx
    order = sorted(range(m.source_rank),
                   key=lambda j: (m.source_degrees[j], j))
    kept = []
    kept_vecs = []
    for j in order:
        v = m.column_vec(j)
        if not v:
            continue
        if kept_vecs:
            gb = buchberger(kept_vecs, ctx, rank=m.target_rank)
            if gb.contains_vec(v):
                continue
        kept.append(j)
        kept_vecs.append(v)
    return FreeModuleMap(ctx, [m.source_degrees[j] for j in kept],
                         m.target_degrees, [m.cols[j] for j in kept],
                         check=False)


def minimal_presentation(m: FPModule):
    """(m_min, to_min, from_min) with mutually inverse isomorphisms.

    Eliminates generators reachable through unit relation entries, then trims
    the relation columns to a minimal generating set.  Cached on the module.
    """
    if m._min is not None:
        return m._min
    ctx = m.ctx
    p = ctx.characteristic
    gens = list(m.gen_degrees)
    cols = [list(col) for col in m.relations.cols]
    col_degs = list(m.relations.source_degrees)
    rho = FreeModuleMap.identity(ctx, m.gen_degrees)
    iota = FreeModuleMap.identity(ctx, m.gen_degrees)
    zero = ctx.zero()
    while True:
        hit = None
        for j in range(len(cols)):
            for i in range(len(gens)):
                c = cols[j][i].constant_term()
                if c:
                    hit = (i, j, c)
                    break
            if hit:
                break
        if hit is None:
            break
        i, j, u = hit
        uinv = ctx.inv(u)
        # g_i = -u^{-1} * sum_{i' != i} cols[j][i'] g_{i'}
        expr = [(-uinv) * cols[j][i2] for i2 in range(len(gens))]
        keep = [i2 for i2 in range(len(gens)) if i2 != i]
        newgens = [gens[i2] for i2 in keep]
        # substitution old cover -> new cover
        sub_cols = []
        for i2 in range(len(gens)):
            if i2 == i:
                sub_cols.append([expr[i3] for i3 in keep])
            else:
                sub_cols.append([ctx.one() if i3 == i2 else zero
                                 for i3 in keep])
        sub = FreeModuleMap(ctx, gens, newgens, sub_cols, check=False)
        # inclusion new cover -> old cover
        inc_cols = [[ctx.one() if i3 == i2 else zero
                     for i3 in range(len(gens))] for i2 in keep]
        inc = FreeModuleMap(ctx, newgens, gens, inc_cols, check=False)
        newcols = []
        newdegs = []
        for j2 in range(len(cols)):
            if j2 == j:
                continue
            col = cols[j2]
            newcol = [col[i3] + col[i] * expr[i3] for i3 in keep]
            if any(not f.is_zero() for f in newcol):
                newcols.append(newcol)
                newdegs.append(col_degs[j2])
        gens, cols, col_degs = newgens, newcols, newdegs
        rho = sub.compose(rho)
        iota = iota.compose(inc)
    rel = FreeModuleMap(ctx, col_degs, gens, cols, check=False)
    rel = _trim_columns(rel)
    m_min = FPModule(ctx, gens, rel, check=False)
    to_min = ModuleMorphism(m, m_min, rho, check=False)
    from_min = ModuleMorphism(m_min, m, iota, check=False)
    m._min = (m_min, to_min, from_min)
    m_min._min = (m_min, ModuleMorphism.identity(m_min),
                  ModuleMorphism.identity(m_min))
    return m._min


class FreeResolution:
    """Minimal graded free resolution data.

    ``maps`` are the differentials d_1, d_2, ... over the minimalized
    presentation; ``complete`` records whether the last kernel vanished.
    """

    def __init__(self, module: FPModule, min_module: FPModule, maps,
                 complete: bool):
        self.module = module
        self.min_module = min_module
        self.maps = list(maps)
        self.complete = complete
        self.minimal = True
        self._validate()

    def _validate(self):
        for a, b in zip(self.maps, self.maps[1:]):
            if not a.compose(b).is_zero():
                raise AlgebraError("resolution differentials do not compose to 0")
        for d in self.maps:
            for col in d.cols:
                for f in col:
                    if f.constant_term():
                        raise AlgebraError("resolution is not minimal")

    @property
    def length(self) -> int:
        return len(self.maps)

    @property
    def betti(self):
        return (self.min_module.rank,) + tuple(d.source_rank
                                               for d in self.maps)


def minimal_resolution(m: FPModule, max_len: int) -> FreeResolution:
    """Minimal graded free resolution up to length max_len (cached)."""
    if max_len < 0:
        raise AlgebraError("max_len must be >= 0")
    m_min, _, _ = minimal_presentation(m)
    if m._res_maps is None:
        m._res_maps = []
        m._res_complete = m_min.relations.source_rank == 0
        if not m._res_complete:
            m._res_maps.append(m_min.relations)
    while not m._res_complete and len(m._res_maps) < max_len:
        nxt = _trim_columns(syzygy_basis(m._res_maps[-1]))
        if nxt.source_rank == 0:
            m._res_complete = True
        else:
            m._res_maps.append(nxt)
            if len(m._res_maps) > m.ctx.nvars:
                raise AlgebraError(
                    "resolution exceeded the Hilbert syzygy bound; "
                    "this is an engine bug")
    return FreeResolution(m, m_min, m._res_maps[:max_len],
                          m._res_complete and len(m._res_maps) <= max_len)


def syzygy(m: FPModule, c: int) -> FPModule:
    """c-th syzygy in the minimal graded resolution (cached)."""
    if c < 0:
        raise AlgebraError("negative syzygy index")
    if c in m._syz_cache:
        return m._syz_cache[c]
    res = minimal_resolution(m, c + 1)
    if c == 0:
        out = res.min_module
    elif c < len(res.maps):
        out = FPModule(m.ctx, res.maps[c - 1].source_degrees, res.maps[c],
                       check=False)
    elif c == len(res.maps) and res.complete and res.maps:
        out = FPModule(m.ctx, res.maps[c - 1].source_degrees, None)
    else:
        out = FPModule(m.ctx, (), None)
    m._syz_cache[c] = out
    return out


def minimal_generator_indices(m: FPModule):
    """Indices of a minimal generating subset of m's given generators."""
    ctx = m.ctx
    zero_mono = (0,) * ctx.nvars
    order = sorted(range(m.rank), key=lambda i: (m.gen_degrees[i], i))
    kept = []
    base = m.relations.column_vecs()
    for i in order:
        vecs = base + [{(k, zero_mono): 1} for k in kept]
        gb = buchberger(vecs, ctx, rank=m.rank)
        if not gb.contains_vec({(i, zero_mono): 1}):
            kept.append(i)
    kept.sort(key=lambda i: (m.gen_degrees[i], i))
    return kept
