"""Standard bases of submodules of free modules over local and global rings.

Local mode computes a standard basis at the origin with Mora's tangent cone
algorithm (weak normal forms, ecart-minimal reducers, reducer set extended
during a reduction when the ecart rises).  Global mode is plain Buchberger.
Both share the packed-key kernels and the staircase colength count.

Quotient rings O_X = O/(relations) are handled by adjoining rel * e_i for
every ambient relation and every position, so a colength here is a length
over the quotient ring.
"""

from __future__ import annotations

import heapq
import itertools
import math
from array import array
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

try:  # big-integer fast path; semantics identical to stdlib ints
    from gmpy2 import gcd as _gcd
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is an optional accelerant
    from math import gcd as _gcd

    _mpz = int

from .kernel import Packing, get_kernels
from .ring import Polynomial, RingSpec, global_key

INFINITE = math.inf

Vector = tuple[Polynomial, ...]


class ResourceLimitExceeded(RuntimeError):
    """Degree bound or step budget hit before the computation completed."""


@dataclass(frozen=True)
class BasisConfig:
    """Budgets and mode for one standard-basis computation.

    degree_bound caps input degrees and the lead degree of accepted basis
    elements (staircase corners).  Transient leads during a Mora reduction
    routinely overshoot the final staircase while the reducer pool is still
    incomplete, so they only trip at 2*degree_bound+1, the packing headroom.
    """

    order: str = "local"  # "local" or "global"
    degree_bound: int = 30
    step_budget: int = 2_000_000
    modulus: Union[int, None] = None

    def __post_init__(self):
        if self.order not in ("local", "global"):
            raise ValueError(f"unknown order {self.order!r}")
        if self.degree_bound < 1:
            raise ValueError("degree_bound must be positive")


@dataclass(frozen=True)
class SubmoduleOfFree:
    """Finitely generated submodule of O^rank over O = ring / (relations)."""

    ring: RingSpec
    rank: int
    columns: tuple[Vector, ...]
    ambient_relations: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        for col in self.columns:
            if len(col) != self.rank:
                raise ValueError("column length does not match rank")
            for p in col:
                if p.ring != self.ring:
                    raise ValueError("column entry in wrong ring")
        for rel in self.ambient_relations:
            if rel.ring != self.ring:
                raise ValueError("relation in wrong ring")

    @staticmethod
    def ideal(
        ring: RingSpec,
        generators: Iterable[Polynomial],
        relations: Iterable[Polynomial] = (),
    ) -> "SubmoduleOfFree":
        return SubmoduleOfFree(
            ring=ring,
            rank=1,
            columns=tuple((g,) for g in generators),
            ambient_relations=tuple(relations),
        )

    @staticmethod
    def from_matrix(
        ring: RingSpec,
        rows: Sequence[Sequence[Polynomial]],
        relations: Iterable[Polynomial] = (),
    ) -> "SubmoduleOfFree":
        """Submodule generated by the columns of the given row-major matrix."""
        rank = len(rows)
        ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        cols = tuple(tuple(rows[i][j] for i in range(rank)) for j in range(ncols))
        return SubmoduleOfFree(
            ring=ring, rank=rank, columns=cols, ambient_relations=tuple(relations)
        )

    def matrix(self) -> list[list[Polynomial]]:
        return [
            [self.columns[j][i] for j in range(len(self.columns))]
            for i in range(self.rank)
        ]


def scale_module(
    scalars: Iterable[Polynomial], sub: SubmoduleOfFree
) -> SubmoduleOfFree:
    """Submodule generated by s * column for every scalar and column."""
    scalars = tuple(scalars)
    cols = tuple(
        tuple(s * entry for entry in col) for s in scalars for col in sub.columns
    )
    return SubmoduleOfFree(
        ring=sub.ring,
        rank=sub.rank,
        columns=cols,
        ambient_relations=sub.ambient_relations,
    )


# -- exact determinants and minors -------------------------------------------


def determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    ring = matrix[0][0].ring
    memo: dict = {}
    rows = tuple(range(n))
    cols = tuple(range(n))
    return _minor(matrix, rows, cols, ring, memo)


def matrix_minors(
    matrix: Sequence[Sequence[Polynomial]], size: int
) -> list[Polynomial]:
    """All size x size minors, in lexicographic (rows, cols) subset order.

    Returns [] when the matrix has fewer than `size` rows or columns, which
    makes the corresponding minors ideal the zero ideal.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    if size < 1 or size > nrows or size > ncols:
        return []
    ring = matrix[0][0].ring
    memo: dict = {}
    out = []
    for rows in itertools.combinations(range(nrows), size):
        for cols in itertools.combinations(range(ncols), size):
            out.append(_minor(matrix, rows, cols, ring, memo))
    return out


def _minor(matrix, rows, cols, ring, memo) -> Polynomial:
    if not rows:
        return Polynomial.constant(ring, 1)
    key = (rows, cols)
    got = memo.get(key)
    if got is not None:
        return got
    r0 = rows[0]
    rest = rows[1:]
    total = Polynomial.constant(ring, 0)
    for k, c in enumerate(cols):
        entry = matrix[r0][c]
        if entry.is_zero():
            continue
        sub = _minor(matrix, rest, cols[:k] + cols[k + 1 :], ring, memo)
        term = entry * sub
        total = total + term if k % 2 == 0 else total - term
    memo[key] = total
    return total


def fitting_ideal_0(sub: SubmoduleOfFree) -> SubmoduleOfFree:
    """Zeroth Fitting ideal of O^rank / sub, as a rank-1 submodule.

    With fewer columns than the rank there are no maximal minors and the
    Fitting ideal is zero.
    """
    gens = matrix_minors(sub.matrix(), sub.rank)
    return SubmoduleOfFree.ideal(sub.ring, gens, relations=sub.ambient_relations)


# -- packing of vectors -------------------------------------------------------


def _pack_vector(vec: Vector, packing: Packing, modulus):
    """Canonical packed form: (keys desc, int coeffs), content-normalized.

    Returns None for the zero vector.
    """
    items = []
    denominator_lcm = 1
    for pos, poly in enumerate(vec):
        for mono, coeff in poly.terms:
            key = packing.pack(pos, mono)
            items.append((key, coeff))
            denominator_lcm = (
                denominator_lcm
                * coeff.denominator
                // math.gcd(denominator_lcm, coeff.denominator)
            )
    if not items:
        return None
    items.sort(reverse=True)
    keys = [k for k, _ in items]
    coeffs = [_mpz(c * denominator_lcm) for _, c in items]
    return _normalize(keys, coeffs, modulus)


def _normalize(keys, coeffs, modulus):
    if modulus is None:
        g = 0
        for c in coeffs:
            g = _gcd(g, c)
            if g == 1:
                break
        if g > 1:
            coeffs = [c // g for c in coeffs]
        if coeffs[0] < 0:
            coeffs = [-c for c in coeffs]
        return keys, coeffs
    reduced_k = []
    reduced_c = []
    for k, c in zip(keys, coeffs):
        c %= modulus
        if c:
            reduced_k.append(k)
            reduced_c.append(c)
    if not reduced_k:
        return None
    inv = pow(reduced_c[0], -1, modulus)
    if inv != 1:
        reduced_c = [(c * inv) % modulus for c in reduced_c]
    return reduced_k, reduced_c


def _unpack_vector(keys, coeffs, packing: Packing, ring: RingSpec, rank: int) -> Vector:
    buckets: list[list] = [[] for _ in range(rank)]
    for k, c in zip(keys, coeffs):
        buckets[packing.key_position(k)].append((packing.key_monomial(k), Fraction(c)))
    return tuple(Polynomial(ring, terms) for terms in buckets)


# -- the engine ---------------------------------------------------------------


class _Pool:
    """Reducers sharing one lead position.

    Typed pools (64-bit keys) keep lead keys and ecarts in flat arrays so the
    compiled find_reducer scans a buffer instead of boxed ints; the fallback
    kernel indexes them the same way.
    """

    __slots__ = ("lead_keys", "ecarts", "vecs")

    def __init__(self, typed: bool):
        self.lead_keys = array("Q") if typed else []
        self.ecarts = array("q") if typed else []
        self.vecs = []

    def clone(self):
        c = _Pool.__new__(_Pool)
        c.lead_keys = self.lead_keys[:]
        c.ecarts = self.ecarts[:]
        c.vecs = list(self.vecs)
        return c

    def add(self, keys, coeffs, ecart):
        self.lead_keys.append(keys[0])
        self.ecarts.append(ecart)
        self.vecs.append((keys, coeffs))


class _Engine:
    def __init__(
        self,
        packing: Packing,
        config: BasisConfig,
        truncation: Union[int, None] = None,
        step_cap: Union[int, None] = None,
    ):
        self.packing = packing
        self.config = config
        self.truncation = truncation
        self.step_cap = step_cap if step_cap is not None else config.step_budget
        self.axpy, self.find_reducer = get_kernels(packing)
        self.elements: list[tuple[list, list]] = []
        self.pools = [_Pool(packing.fits_u64) for _ in range(packing.npos)]
        self.steps = 0
        self.zero_ecarts = config.order == "global"

    # helpers ---------------------------------------------------------------

    def _ecart(self, keys) -> int:
        if self.zero_ecarts:
            return 0
        kd = self.packing.key_degree
        return kd(keys[-1]) - kd(keys[0])

    def _budget(self):
        self.steps += 1
        if self.steps > self.step_cap:
            raise ResourceLimitExceeded(
                f"reduction step budget {self.step_cap} exhausted"
            )

    def _trim(self, vec):
        """Drop monomials beyond the truncation degree (work modulo m^(D+1))."""
        if self.truncation is None or vec is None:
            return vec
        kd = self.packing.key_degree
        limit = self.truncation
        keys, coeffs = vec
        if kd(keys[-1]) <= limit:
            return vec
        out_k = []
        out_c = []
        for k, c in zip(keys, coeffs):
            if kd(k) <= limit:
                out_k.append(k)
                out_c.append(c)
        if not out_k:
            return None
        return out_k, out_c

    def _check_degree(self, keys, limit=None):
        if limit is None:
            limit = 2 * self.config.degree_bound + 1
        if self.packing.key_degree(keys[0]) > limit:
            raise ResourceLimitExceeded(f"lead degree exceeded bound {limit}")

    def _reduce_step(self, f, g):
        """One elimination of lead(f) by a monomial multiple of g."""
        kf, cf = f
        kg, cg = g
        delta = kf[0] - kg[0]
        modulus = self.config.modulus
        if modulus is None:
            lcf = cf[0]
            lcg = cg[0]
            d = _gcd(lcf, lcg)
            keys, coeffs = self.axpy(
                kf, cf, lcg // d, 0, kg, cg, -(lcf // d), delta, None
            )
        else:
            keys, coeffs = self.axpy(
                kf, cf, 1, 0, kg, cg, (modulus - cf[0]) % modulus, delta, modulus
            )
        if not keys:
            return None
        return self._trim(_normalize(keys, coeffs, modulus))

    def weak_normal_form(self, vec):
        """Mora weak normal form (local) or lead reduction to irreducible (global)."""
        packing = self.packing
        mora = self.config.order == "local"
        local_pools: dict[int, _Pool] = {}
        f = vec
        while f is not None:
            keys = f[0]
            if len(keys) > _TERM_LIMIT:
                raise ResourceLimitExceeded(
                    f"vector grew past {_TERM_LIMIT} terms during reduction"
                )
            self._check_degree(keys)
            pos = packing.key_position(keys[0])
            pool = local_pools.get(pos, self.pools[pos])
            idx = self.find_reducer(
                keys[0], pool.lead_keys, pool.ecarts, packing.div_mask
            )
            if idx < 0:
                return f
            self._budget()
            if mora:
                ecart_f = self._ecart(keys)
                if pool.ecarts[idx] > ecart_f:
                    if pos not in local_pools:
                        pool = pool.clone()
                        local_pools[pos] = pool
                    pool.add(keys, f[1], ecart_f)
            f = self._reduce_step(f, pool.vecs[idx])
        return None

    def add_element(self, vec) -> int:
        keys, coeffs = vec
        self._check_degree(keys, self.config.degree_bound)
        index = len(self.elements)
        self.elements.append((keys, coeffs))
        pos = self.packing.key_position(keys[0])
        self.pools[pos].add(keys, coeffs, self._ecart(keys))
        return index

    def s_vector(self, a, b):
        ka, ca = self.elements[a]
        kb, cb = self.elements[b]
        packing = self.packing
        pos = packing.key_position(ka[0])
        ma = packing.key_monomial(ka[0])
        mb = packing.key_monomial(kb[0])
        lcm = tuple(max(x, y) for x, y in zip(ma, mb))
        key_lcm = packing.pack(pos, lcm)
        delta_a = key_lcm - ka[0]
        delta_b = key_lcm - kb[0]
        modulus = self.config.modulus
        if modulus is None:
            lca = ca[0]
            lcb = cb[0]
            d = _gcd(lca, lcb)
            keys, coeffs = self.axpy(
                ka, ca, lcb // d, delta_a, kb, cb, -(lca // d), delta_b, None
            )
        else:
            keys, coeffs = self.axpy(
                ka, ca, 1, delta_a, kb, cb, modulus - 1, delta_b, modulus
            )
        if not keys:
            return None
        return self._trim(_normalize(keys, coeffs, modulus))

    def run(self, gens):
        packing = self.packing
        queue: list[tuple[int, int, int, int]] = []
        seq = itertools.count()
        use_product_criterion = (
            self.config.order == "global" and self.packing.npos == 1
        )

        def enqueue_pairs(new_index):
            knew = self.elements[new_index][0][0]
            pos_new = packing.key_position(knew)
            mono_new = packing.key_monomial(knew)
            for other in range(new_index):
                kother = self.elements[other][0][0]
                if packing.key_position(kother) != pos_new:
                    continue
                mono_other = packing.key_monomial(kother)
                lcm = tuple(max(x, y) for x, y in zip(mono_new, mono_other))
                if use_product_criterion and all(
                    min(x, y) == 0 for x, y in zip(mono_new, mono_other)
                ):
                    continue
                heapq.heappush(queue, (sum(lcm), next(seq), other, new_index))

        for raw in gens:
            raw = self._trim(raw)
            if raw is None:
                continue
            reduced = self.weak_normal_form(raw)
            if reduced is not None:
                enqueue = self.add_element(reduced)
                enqueue_pairs(enqueue)
        while queue:
            _, _, a, b = heapq.heappop(queue)
            s = self.s_vector(a, b)
            if s is None:
                continue
            h = self.weak_normal_form(s)
            if h is not None:
                enqueue_pairs(self.add_element(h))


# -- public basis object ------------------------------------------------------


class StandardBasis:
    """Completed standard basis with its staircase queries."""

    __slots__ = ("ring", "rank", "config", "packing", "elements", "_leads", "_engine")

    def __init__(self, ring, rank, config, packing, elements, engine):
        self.ring = ring
        self.rank = rank
        self.config = config
        self.packing = packing
        self.elements = elements
        self._engine = engine
        leads: list[list] = [[] for _ in range(rank)]
        for keys, _ in elements:
            pos = packing.key_position(keys[0])
            leads[pos].append(packing.key_monomial(keys[0]))
        self._leads = leads

    def lead_monomials(self) -> list[list[tuple[int, ...]]]:
        return [list(l) for l in self._leads]

    def colength(self):
        """Vector space dimension of O^rank / (module + relations), or INFINITE.

        INFINITE is decided from the completed staircase: some position lacks
        a pure power of some variable among the lead monomials.
        """
        total = 0
        for pos in range(self.rank):
            count = self._staircase_count(pos)
            if count is INFINITE:
                return INFINITE
            total += count
        return total

    def _position_bounds(self, pos):
        leads = self._leads[pos]
        nvars = self.packing.nvars
        bounds = [None] * nvars
        for mono in leads:
            support = [i for i, e in enumerate(mono) if e]
            if not support:
                return [0] * nvars  # unit at this position
            if len(support) == 1:
                i = support[0]
                e = mono[i]
                if bounds[i] is None or e < bounds[i]:
                    bounds[i] = e
        if any(b is None for b in bounds):
            return None
        return bounds

    def _staircase_count(self, pos):
        bounds = self._position_bounds(pos)
        if bounds is None:
            return INFINITE
        volume = 1
        for b in bounds:
            volume *= max(b, 1)
        if volume > 5_000_000:
            raise ResourceLimitExceeded("staircase enumeration too large")
        leads = self._leads[pos]
        count = 0
        for mono in itertools.product(*(range(b) for b in bounds)):
            if not any(all(m >= l for m, l in zip(mono, lead)) for lead in leads):
                count += 1
        return count

    def quotient_basis(self) -> list[tuple[int, tuple[int, ...]]]:
        """Monomial basis of the quotient, ordered by (position, global order).

        Only valid when the colength is finite.
        """
        out = []
        for pos in range(self.rank):
            bounds = self._position_bounds(pos)
            if bounds is None:
                raise ValueError("quotient is not finite dimensional")
            leads = self._leads[pos]
            monos = [
                m
                for m in itertools.product(*(range(b) for b in bounds))
                if not any(all(x >= l for x, l in zip(m, lead)) for lead in leads)
            ]
            monos.sort(key=global_key)
            out.extend((pos, m) for m in monos)
        return out

    def reduce_vector(self, vec: Vector) -> Vector:
        """Weak normal form of a vector, as polynomials.

        The result is determined up to a positive rational scalar (the engine
        works fraction-free); the zero result is exact and certifies lead
        membership in the usual weak sense.
        """
        packed = _pack_vector(vec, self.packing, self.config.modulus)
        if packed is None:
            return tuple(Polynomial.constant(self.ring, 0) for _ in range(self.rank))
        reduced = self._engine.weak_normal_form(packed)
        if reduced is None:
            return tuple(Polynomial.constant(self.ring, 0) for _ in range(self.rank))
        return _unpack_vector(
            reduced[0], reduced[1], self.packing, self.ring, self.rank
        )

    def normal_form_coordinates(self, poly: Polynomial):
        """Exact coordinates of poly's canonical normal form (global, rank 1).

        Returns {monomial: Fraction} supported on the quotient staircase.
        """
        if self.config.order != "global" or self.rank != 1:
            raise ValueError("canonical normal forms need a global rank-1 basis")
        packing = self.packing
        scale = math.lcm(*(c.denominator for _, c in poly.terms)) if (
            poly.terms
        ) else 1
        keys = []
        coeffs = []
        for mono, coeff in sorted(
            poly.terms, key=lambda t: packing.pack(0, t[0]), reverse=True
        ):
            keys.append(packing.pack(0, mono))
            coeffs.append(_mpz(coeff.numerator * (scale // coeff.denominator)))
        axpy, find_reducer = self._engine.axpy, self._engine.find_reducer
        pool = self._engine.pools[0]
        # integer working vector over a running denominator: each reduction
        # cross-multiplies by the reducer's lead, content division keeps the
        # numbers small, emitted coordinates divide back out
        denom = _mpz(scale)
        out: dict[tuple[int, ...], Fraction] = {}
        guard = 0
        while keys:
            guard += 1
            if guard > self.config.step_budget:
                raise ResourceLimitExceeded("normal form budget exhausted")
            idx = find_reducer(keys[0], pool.lead_keys, pool.ecarts, packing.div_mask)
            if idx < 0:
                out[packing.key_monomial(keys[0])] = Fraction(
                    int(coeffs[0]), int(denom)
                )
                keys = keys[1:]
                coeffs = coeffs[1:]
                continue
            gk, gc = pool.vecs[idx]
            lca = coeffs[0]
            lcb = gc[0]
            d = _gcd(lca, lcb)
            a = lcb // d
            keys, coeffs = axpy(
                keys, coeffs, a, 0, gk, gc, -(lca // d), keys[0] - gk[0], None
            )
            denom *= a
            if not keys:
                break
            g = denom
            for c in coeffs:
                g = _gcd(g, c)
                if g == 1:
                    break
            if g > 1:
                denom //= g
                coeffs = [c // g for c in coeffs]
        return out


_BASIS_CACHE: dict = {}
_BASIS_CACHE_LIMIT = 512


def standard_basis(sub: SubmoduleOfFree, config: BasisConfig = BasisConfig()) -> StandardBasis:
    """Compute (or fetch from cache) the standard basis of a submodule."""
    cache_key = (
        sub.ring.variables,
        sub.rank,
        sub.columns,
        sub.ambient_relations,
        config,
    )
    cached = _BASIS_CACHE.get(cache_key)
    if cached is not None:
        return cached
    for col in sub.columns:
        for p in col:
            if p.total_degree() > config.degree_bound:
                raise ResourceLimitExceeded(
                    f"generator degree {p.total_degree()} exceeds bound "
                    f"{config.degree_bound}"
                )
    for rel in sub.ambient_relations:
        if rel.total_degree() > config.degree_bound:
            raise ResourceLimitExceeded("relation degree exceeds bound")
    packing = Packing(
        nvars=sub.ring.nvars,
        npos=sub.rank,
        degree_cap=2 * config.degree_bound + 1,
        is_global=(config.order == "global"),
    )
    gens = [_pack_vector(col, packing, config.modulus) for col in sub.columns]
    unit_vectors = []
    for rel in sub.ambient_relations:
        if rel.is_zero():
            continue
        for pos in range(sub.rank):
            vec = tuple(
                rel if i == pos else Polynomial.constant(sub.ring, 0)
                for i in range(sub.rank)
            )
            unit_vectors.append(_pack_vector(vec, packing, config.modulus))
    result = _run_schedule(sub, config, packing, gens + unit_vectors)
    if len(_BASIS_CACHE) >= _BASIS_CACHE_LIMIT:
        _BASIS_CACHE.pop(next(iter(_BASIS_CACHE)))
    _BASIS_CACHE[cache_key] = result
    return result


_TERM_LIMIT = 50_000


def _run_schedule(sub, config, packing, inputs) -> "StandardBasis":
    """Iterative-deepening truncated runs, then one untruncated run.

    Mora reduction chains occasionally explode on inputs whose staircase is
    tiny (small linear leads with large-ecart tails regenerating each other),
    so local computations start truncated.  The run at degree D computes the
    basis of the module plus m^(D+1) times the ambient; when the resulting
    staircase stays strictly below D it is the true staircase (Nakayama: the
    quotients by m^D and m^(D+1) then agree), so colength and quotient
    queries are exact, at bounded degree and memory.  When every level keeps
    a degree-D staircase monomial, the quotient is either deeper than the
    degree budget (the untruncated run then trips the accepted-lead guard:
    honest exhaustion) or infinite (the untruncated run completes and is the
    one place INFINITE is certified from).

    Global orders never truncate: dropping high-degree terms would drop lead
    terms, and Buchberger has no ecart pathology to work around.
    """
    if config.order == "local":
        level = 8
        schedule = []
        while level < config.degree_bound:
            schedule.append(level)
            level *= 2
        schedule.append(config.degree_bound)
        for level in schedule:
            engine = _Engine(packing, config, truncation=level)
            engine.run(inputs)
            basis = StandardBasis(
                sub.ring, sub.rank, config, packing, engine.elements, engine
            )
            if basis.colength() is INFINITE:
                continue
            deepest = max(
                (sum(mono) for _, mono in basis.quotient_basis()), default=0
            )
            if deepest < level:
                return basis
    engine = _Engine(packing, config)
    engine.run(inputs)
    return StandardBasis(
        sub.ring, sub.rank, config, packing, engine.elements, engine
    )


def colength(sub: SubmoduleOfFree, config: BasisConfig = BasisConfig()):
    """Colength of sub inside O^rank over ring/(relations); may be INFINITE."""
    return standard_basis(sub, config).colength()
