"""Semilinear sets, their algebra, and Parikh images of context-free grammars.

The Parikh image of a grammar is computed by Newton iteration over the
semiring of semilinear sets (union as addition, Minkowski sum as product):
the iteration kappa_0 = F(0), kappa_{i+1} = DF*|kappa_i (F(kappa_i)) reaches
the Parikh image of the least fixpoint after at most |variables| steps, and
every intermediate component is a subset of the Parikh image, so component
constants always have witness words in the language.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import diophantine
from .diophantine import _support
from .errors import InputError, SoundnessError
from .grammar import Cfg, to_cnf, trim
from .symbols import Word

Vec = tuple[int, ...]


@lru_cache(maxsize=1 << 16)
def _reduce_periods(periods: tuple[Vec, ...]) -> tuple[Vec, ...]:
    """Drop periods that are natural combinations of the remaining ones;
    the generated set is unchanged.  Heaviest periods are tried first so
    composites are expressed through the small generators."""
    if len(periods) < 2:
        return periods
    kept = list(periods)
    for p in sorted(periods, key=sum, reverse=True):
        rest = [q for q in kept if q != p]
        if diophantine.solve_nonneg(rest, p) is not None:
            kept = rest
    return tuple(kept)


@dataclass(frozen=True)
class LinearSet:
    """constant + natural combinations of periods; periods are nonzero, sorted."""

    constant: Vec
    periods: tuple[Vec, ...]

    def __post_init__(self):
        cleaned = tuple(sorted({p for p in self.periods if any(p)}))
        if any(c < 0 for c in self.constant) or any(
                e < 0 for p in cleaned for e in p):
            raise InputError("linear sets live in the nonnegative orthant")
        object.__setattr__(self, "periods", _reduce_periods(cleaned))
        object.__setattr__(self, "_hash",
                           hash((self.constant, self.periods)))
        object.__setattr__(self, "_csum", sum(self.constant))
        pmask = 0
        for p in self.periods:
            for i, x in enumerate(p):
                if x:
                    pmask |= 1 << i
        object.__setattr__(self, "_pmask", pmask)

    def __hash__(self):
        return self._hash

    @property
    def dim(self) -> int:
        return len(self.constant)


@dataclass(frozen=True)
class SemilinearSet:
    dim: int
    components: tuple[LinearSet, ...]

    def __post_init__(self):
        for c in self.components:
            if c.dim != self.dim:
                raise InputError("mixed dimensions in semilinear set")
        object.__setattr__(self, "components",
                           tuple(sorted(set(self.components),
                                        key=lambda l: (l.constant, l.periods))))

    def is_empty(self) -> bool:
        return not self.components


@dataclass(frozen=True)
class WitnessedSemilinear:
    """A semilinear set plus, per component, a language word realizing its constant."""

    dim: int
    components: tuple[tuple[LinearSet, Word], ...]

    @property
    def semilinear(self) -> SemilinearSet:
        return SemilinearSet(self.dim, tuple(l for l, _ in self.components))


def linear_set(constant, periods=()) -> LinearSet:
    return LinearSet(tuple(constant), tuple(tuple(p) for p in periods))


def sl_empty(dim: int) -> SemilinearSet:
    return SemilinearSet(dim, ())


def sl_singleton(v: Vec) -> SemilinearSet:
    return SemilinearSet(len(v), (LinearSet(tuple(v), ()),))


def sl_union(*sets: SemilinearSet) -> SemilinearSet:
    dim = sets[0].dim
    comps: list[LinearSet] = []
    for s in sets:
        if s.dim != dim:
            raise InputError("dimension mismatch in union")
        comps.extend(s.components)
    return SemilinearSet(dim, tuple(comps))


def _lin_minkowski(a: LinearSet, b: LinearSet) -> LinearSet:
    return LinearSet(tuple(x + y for x, y in zip(a.constant, b.constant)),
                     a.periods + b.periods)


def sl_minkowski(a: SemilinearSet, b: SemilinearSet) -> SemilinearSet:
    if a.dim != b.dim:
        raise InputError("dimension mismatch in Minkowski sum")
    comps = tuple(_lin_minkowski(x, y) for x in a.components for y in b.components)
    return prune(SemilinearSet(a.dim, comps))


def _lin_star(a: LinearSet) -> SemilinearSet:
    """{0} together with c + span(periods + {c}): all sums of >= 1 elements."""
    zero = (0,) * a.dim
    plus = LinearSet(a.constant, a.periods + (a.constant,))
    return SemilinearSet(a.dim, (LinearSet(zero, ()), plus))


def sl_star(s: SemilinearSet) -> SemilinearSet:
    """Finite sums of elements; star distributes over union commutatively."""
    if s.dim == 0:
        return SemilinearSet(0, (LinearSet((), ()),))
    out = sl_singleton((0,) * s.dim)
    for comp in s.components:
        out = sl_minkowski(out, _lin_star(comp))
    return prune(out)


# ---------------------------------------------------------------------------
# Membership, pruning, intersection


def lin_membership(l: LinearSet, v: Vec) -> bool:
    rest = tuple(a - b for a, b in zip(v, l.constant))
    if any(r < 0 for r in rest):
        return False
    if not any(rest):
        return True
    return diophantine.solve_nonneg(l.periods, rest) is not None


def sl_membership(s: SemilinearSet, v) -> bool:
    v = tuple(v)
    if len(v) != s.dim:
        raise InputError("vector dimension mismatch")
    return any(lin_membership(c, v) for c in s.components)


_subsume_cache: dict[tuple[LinearSet, LinearSet], bool] = {}


def _lin_subsumed(a: LinearSet, b: LinearSet) -> bool:
    """True only if a is provably a subset of b (sound, not complete)."""
    if a == b:
        return True
    # necessary because periods are nonnegative
    if a._csum < b._csum or any(
            x < y for x, y in zip(a.constant, b.constant)):
        return False
    key = (a, b)
    hit = _subsume_cache.get(key)
    if hit is None:
        bset = set(b.periods)
        hit = lin_membership(b, a.constant) and all(
            p in bset or diophantine.solve_nonneg(b.periods, p) is not None
            for p in a.periods)
        _subsume_cache[key] = hit
    return hit


_merge_cache: dict[tuple[LinearSet, LinearSet], LinearSet | None] = {}


def _merge_pair(a: LinearSet, b: LinearSet) -> LinearSet | None:
    """Exact union of two linear sets as a single one, when possible.

    If b.constant = a.constant + d with d nonzero and span(b.periods) equals
    span(a.periods + {d}), then a | b = a.constant + span(a.periods + {d}):
    elements using d at least once land in b, the rest lie in a."""
    if a._csum >= b._csum or a._pmask & ~b._pmask:
        return None  # d must be nonzero; span(a.periods) must fit in b's
    d = tuple(x - y for x, y in zip(b.constant, a.constant))
    if any(x < 0 for x in d):
        return None
    if b._pmask & ~(a._pmask | _support(d)):
        return None  # b has a period direction that a plus d cannot span
    key = (a, b)
    if key in _merge_cache:
        return _merge_cache[key]
    merged_periods = set(a.periods)
    merged_periods.add(d)
    out = None
    if all(diophantine.solve_nonneg(b.periods, p) is not None
           for p in merged_periods) and \
       all(diophantine.solve_nonneg(tuple(merged_periods), q) is not None
           for q in b.periods):
        out = LinearSet(a.constant, tuple(merged_periods))
    _merge_cache[key] = out
    return out


def _prune_pairs(pairs: list) -> list:
    """Pruning core on (LinearSet, payload) pairs: drop components provably
    contained in a kept one and apply exact pairwise merges until stable; a
    merge keeps the payload of the component providing the constant.

    For subsumption, components are scanned by increasing constant weight; a
    subsumer has a pointwise-smaller constant, so it precedes its subsumees."""
    seen = set()
    comps = []
    for l, w in pairs:
        if l not in seen:
            seen.add(l)
            comps.append((l, w))
    while True:
        comps.sort(key=lambda cw: (cw[0]._csum, cw[0].constant, cw[0].periods))
        kept: list = []
        for c, w in comps:
            if not any(_lin_subsumed(c, d) for d, _ in kept):
                kept.append((c, w))
        merged = False
        for i in range(len(kept)):
            if merged:
                break
            for j in range(i + 1, len(kept)):  # sorted: a merge needs _csum
                m = _merge_pair(kept[i][0], kept[j][0])  # strictly below b's
                if m is not None:
                    del kept[j]
                    kept[i] = (m, kept[i][1])
                    merged = True
                    break
        if not merged:
            return kept
        comps = kept


def prune(s: SemilinearSet) -> SemilinearSet:
    """Normalize a union of linear sets; see _prune_pairs."""
    kept = _prune_pairs([(c, None) for c in s.components])
    return SemilinearSet(s.dim, tuple(c for c, _ in kept))


def wit_singleton(vec, word: Word) -> WitnessedSemilinear:
    """The witnessed Parikh image of the single word `word`."""
    return WitnessedSemilinear(
        len(vec), ((LinearSet(tuple(vec), ()), tuple(word)),))


def wit_minkowski(a: WitnessedSemilinear,
                  b: WitnessedSemilinear) -> WitnessedSemilinear:
    """Minkowski sum with witness words concatenated per component; this is
    the witnessed Parikh image of a language concatenation."""
    if a.dim != b.dim:
        raise InputError("dimension mismatch in Minkowski sum")
    pairs = [(_lin_minkowski(x, y), wx + wy)
             for x, wx in a.components for y, wy in b.components]
    return WitnessedSemilinear(a.dim, tuple(_prune_pairs(pairs)))


def sl_subset_sound(a: SemilinearSet, b: SemilinearSet) -> bool:
    """True only if a is provably a subset of b component-by-component."""
    return all(any(_lin_subsumed(c, d) for d in b.components)
               for c in a.components)


def _lin_intersect(a: LinearSet, b: LinearSet) -> list[LinearSet]:
    """Exact intersection of two linear sets via minimal Diophantine solutions."""
    columns = [tuple(p) for p in a.periods] + \
              [tuple(-x for x in q) for q in b.periods]
    target = tuple(x - y for x, y in zip(b.constant, a.constant))
    if not columns:
        return [a] if a.constant == b.constant else []
    particular, homogeneous = diophantine.solve_system(columns, target)
    na = len(a.periods)
    out = []
    for part in particular:
        const = tuple(c + sum(k * p[i] for k, p in zip(part[:na], a.periods))
                      for i, c in enumerate(a.constant))
        periods = []
        for h in homogeneous:
            vec = tuple(sum(k * p[i] for k, p in zip(h[:na], a.periods))
                        for i in range(a.dim))
            if any(vec):
                periods.append(vec)
        out.append(LinearSet(const, tuple(periods)))
    return out


def sl_intersect(a: SemilinearSet, b: SemilinearSet) -> SemilinearSet:
    if a.dim != b.dim:
        raise InputError("dimension mismatch in intersection")
    comps: list[LinearSet] = []
    for x in a.components:
        for y in b.components:
            comps.extend(_lin_intersect(x, y))
    return prune(SemilinearSet(a.dim, tuple(comps)))


def sl_intersection_witness(a: SemilinearSet, b: SemilinearSet) -> Vec | None:
    """Some vector in both sets, or None when the intersection is empty."""
    inter = sl_intersect(a, b)
    if inter.is_empty():
        return None
    return min(c.constant for c in inter.components)


# ---------------------------------------------------------------------------
# Serialization


def sl_to_text(s: SemilinearSet) -> str:
    if not s.components:
        return "# empty\n"
    lines = []
    for c in s.components:
        const = "(" + ",".join(map(str, c.constant)) + ")"
        if c.periods:
            ps = ",".join("(" + ",".join(map(str, p)) + ")" for p in c.periods)
            lines.append(f"c = {const}; periods = {ps}")
        else:
            lines.append(f"c = {const}; periods =")
    return "\n".join(lines) + "\n"


def sl_from_text(text: str, dim: int | None = None) -> SemilinearSet:
    import re
    comps = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "periods" not in line or not line.startswith("c"):
            raise InputError(f"cannot parse semilinear line: {line!r}")
        const_part, period_part = line.split(";", 1)
        vecs = re.findall(r"\(([0-9,\s]*)\)", const_part)
        if len(vecs) != 1:
            raise InputError(f"bad constant in: {line!r}")
        const = tuple(int(x) for x in vecs[0].split(",") if x.strip())
        periods = [tuple(int(x) for x in grp.split(",") if x.strip())
                   for grp in re.findall(r"\(([0-9,\s]*)\)", period_part)]
        comps.append(LinearSet(const, tuple(periods)))
    if not comps:
        return sl_empty(dim if dim is not None else 0)
    return SemilinearSet(len(comps[0].constant), tuple(comps))


# ---------------------------------------------------------------------------
# Parikh images of grammars


def _monomials(g: Cfg):
    """Per variable: list of (terminal Parikh vector, variable occurrence tuple)."""
    dim = len(g.terminals)
    mons: dict[str, list[tuple[Vec, tuple[str, ...]]]] = {x: [] for x in g.variables}
    for lhs, rhs in g.sorted_productions():
        counts = [0] * dim
        occs = []
        for s in rhs:
            if s in g.variables:
                occs.append(s)
            else:
                counts[g.terminals.index(s)] += 1
        mons[lhs].append((tuple(counts), tuple(occs)))
    return mons


def _eval_monomial(vec: Vec, occs, val: dict[str, SemilinearSet],
                   dim: int) -> SemilinearSet:
    out = sl_singleton(vec)
    for y in occs:
        if val[y].is_empty():
            return sl_empty(dim)
        out = sl_minkowski(out, val[y])
    return out


def _scc_blocks(deps: dict, order) -> list[list]:
    """Strongly connected components of the dependency graph, emitted with
    dependencies before dependents (Tarjan, iterative)."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    blocks: list[list] = []
    counter = 0
    for root in order:
        if root in index:
            continue
        work = [(root, iter(sorted(deps[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(deps[w]))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                block = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    block.append(w)
                    if w == v:
                        break
                blocks.append(block)
    return blocks


def _solve_block(block, matrix, rhs, dim):
    """Gaussian elimination with Kleene star on the diagonal, on one
    strongly connected block."""
    matrix = dict(matrix)
    rhs = dict(rhs)
    eliminated = []
    remaining = sorted(block)
    while remaining:
        k = remaining.pop(0)
        star_kk = sl_star(matrix.pop((k, k), sl_empty(dim)))
        row = {j: sl_minkowski(star_kk, matrix.pop((k, j)))
               for j in remaining if (k, j) in matrix}
        bk = sl_minkowski(star_kk, rhs[k])
        eliminated.append((k, row, bk))
        for i in remaining:
            if (i, k) not in matrix:
                continue
            mik = matrix.pop((i, k))
            for j, rv in row.items():
                cur = matrix.get((i, j))
                add = sl_minkowski(mik, rv)
                matrix[(i, j)] = prune(sl_union(cur, add)) if cur else add
            rhs[i] = prune(sl_union(rhs[i], sl_minkowski(mik, bk)))
    values: dict[str, SemilinearSet] = {}
    for k, row, bk in reversed(eliminated):
        acc = bk
        for j, rv in row.items():
            if not values[j].is_empty():
                acc = prune(sl_union(acc, sl_minkowski(rv, values[j])))
        values[k] = acc
    return values


def _solve_linear(order, matrix, rhs, dim):
    """Least solution of x = M x + b over the semilinear semiring.  The
    system is split along the strongly connected blocks of its dependency
    graph; each block is eliminated on its own after the already-solved
    blocks it reads from are substituted into its right-hand side."""
    deps = {x: set() for x in order}
    for (i, j) in matrix:
        deps[i].add(j)
    values: dict[str, SemilinearSet] = {}
    for block in _scc_blocks(deps, sorted(order)):
        in_block = set(block)
        sub = {}
        b = {}
        for i in block:
            acc = rhs[i]
            for j in sorted(deps[i]):
                if j in in_block:
                    sub[(i, j)] = matrix[(i, j)]
                elif not values[j].is_empty():
                    acc = prune(sl_union(
                        acc, sl_minkowski(matrix[(i, j)], values[j])))
            b[i] = acc
        values.update(_solve_block(block, sub, b, dim))
    return values


@lru_cache(maxsize=None)
def _newton(g: Cfg) -> tuple[tuple[tuple[str, SemilinearSet], ...], int]:
    """Newton iteration over semilinear sets, staged along the strongly
    connected blocks of the variable dependency graph; lower blocks converge
    first and enter higher blocks as constants.  Returns per-variable Parikh
    images of the trimmed grammar together with a stabilization depth for
    the start variable: the largest step sum along a dependency chain of
    blocks, which bounds the steps the unstaged iteration needs, and is in
    turn capped by the variable count."""
    g = trim(g)
    dim = len(g.terminals)
    all_vars = sorted(g.variables)
    if not g.productions:
        return (tuple((x, sl_empty(dim)) for x in all_vars), 0)
    mons = _monomials(g)
    deps = {x: set() for x in all_vars}
    for x in all_vars:
        for _, occs in mons[x]:
            deps[x].update(occs)
    values: dict[str, SemilinearSet] = {}
    depth_at: dict[str, int] = {}
    for block in _scc_blocks(deps, all_vars):
        order = sorted(block)
        in_block = set(block)
        inherited = max((depth_at[y] for x in order for y in deps[x]
                         if y not in in_block), default=0)
        kappa = dict(values)
        for x in order:
            base = [_eval_monomial(vec, occs, values, dim)
                    for vec, occs in mons[x]
                    if not any(o in in_block for o in occs)]
            base = [p for p in base if not p.is_empty()]
            kappa[x] = prune(sl_union(*base)) if base else sl_empty(dim)
        steps = 0
        for _ in range(len(order)):
            rhs = {}
            for x in order:
                parts = [_eval_monomial(vec, occs, kappa, dim)
                         for vec, occs in mons[x]]
                parts = [p for p in parts if not p.is_empty()]
                rhs[x] = prune(sl_union(*parts)) if parts else sl_empty(dim)
            matrix = {}
            for x in order:
                for vec, occs in mons[x]:
                    for i, y in enumerate(occs):
                        if y not in in_block:
                            continue
                        others = occs[:i] + occs[i + 1:]
                        term = _eval_monomial(vec, others, kappa, dim)
                        if term.is_empty():
                            continue
                        cur = matrix.get((x, y))
                        matrix[(x, y)] = (prune(sl_union(cur, term))
                                          if cur else term)
            new_kappa = _solve_linear(order, matrix, rhs, dim)
            for x in order:
                new_kappa[x] = prune(sl_union(new_kappa[x], kappa[x]))
            if all(sl_subset_sound(new_kappa[x], kappa[x]) for x in order):
                break
            for x in order:
                kappa[x] = new_kappa[x]
            steps += 1
        # a block whose monomials mention any variable needs at least one
        # unstaged step: the iterate must evaluate those monomials before
        # their (already solved) values become visible to it
        floor = 1 if any(occs for x in order for _, occs in mons[x]) else 0
        for x in order:
            values[x] = kappa[x]
            depth_at[x] = inherited + max(steps, floor)
    depth = min(depth_at.get(g.start, 0), len(all_vars))
    return (tuple((x, values[x]) for x in all_vars), depth)


def parikh_semilinear(g: Cfg) -> SemilinearSet:
    """The Parikh image of L(g) as a plain semilinear set."""
    g = trim(g)
    per_var, _ = _newton(g)
    return dict(per_var)[g.start]


def newton_depth(g: Cfg) -> int:
    """Number of Newton steps until the Parikh iteration stabilized (<= |vars|)."""
    return _newton(trim(g))[1]


def witness_for_vector(g: Cfg, v) -> Word | None:
    """A word of L(g) with Parikh vector v, by dynamic programming over all
    vectors dominated by v; None if no such word exists."""
    v = tuple(v)
    g = trim(g)
    if len(v) != len(g.terminals):
        raise InputError("vector dimension does not match the alphabet")
    cnf = to_cnf(g)
    if not any(v):
        return () if cnf.eps_in_language else None
    index = {a: i for i, a in enumerate(g.terminals.symbols)}
    table: dict[str, dict[Vec, Word]] = {}
    for x, a in cnf.unary:
        if a not in index:
            continue
        e = tuple(1 if i == index[a] else 0 for i in range(len(v)))
        if all(x1 <= x2 for x1, x2 in zip(e, v)):
            table.setdefault(x, {})[e] = (a,)
    changed = True
    while changed:
        changed = False
        for x, y, z in cnf.binary:
            ys = table.get(y)
            zs = table.get(z)
            if not ys or not zs:
                continue
            cell = table.setdefault(x, {})
            for u1, w1 in list(ys.items()):
                for u2, w2 in list(zs.items()):
                    s = tuple(a + b for a, b in zip(u1, u2))
                    if any(a > b for a, b in zip(s, v)) or s in cell:
                        continue
                    cell[s] = w1 + w2
                    changed = True
    return table.get(cnf.start, {}).get(v)


@lru_cache(maxsize=None)
def parikh_image(g: Cfg) -> WitnessedSemilinear:
    """Exact Parikh image with a witness word per component constant."""
    g = trim(g)
    sl = parikh_semilinear(g)
    out = []
    for comp in sl.components:
        w = witness_for_vector(g, comp.constant)
        if w is None:
            raise SoundnessError(
                f"no witness for component constant {comp.constant}")
        out.append((comp, w))
    return WitnessedSemilinear(sl.dim, tuple(out))
