"""
The narrow-sense BCH code C(q, q+1, 4, 1) and its dual.

Coordinates are indexed by exponents: position i carries the point gamma^i
of U_{q+1}, so a support is a block in the sense of ``symmetric_blocks``.
The parity checks are the rows u^r, r in ROWS, of H; the dual code is the
trace code {(Tr(a u^3 + b u^2 + c u))_u}.
"""

import csv
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

import galois
import numpy as np

from .errors import InternalConsistencyError
from .finite_field import FieldSpec, as_ints, build_field, field_record
from .parallel import run_chunks
from .symmetric_blocks import (
    Block, BlockFamily, enumerate_b63, enumerate_blocks_bruteforce,
    enumerate_steiner_blocks, esp_coefficients, make_block, subset_esps,
)
from .utils import check_budget, combinations_array

logger = logging.getLogger(__name__)

ROWS = (-3, -2, -1, 1, 2, 3)
LIFT_CHUNK = 2048
TRACE_BATCH_ITEMS = 2_000_000


class CodeClass(str, Enum):
    MDS = 'MDS'
    AMDS = 'AMDS'
    NMDS = 'NMDS'
    NEITHER = 'neither'


# cosets and polynomials

@dataclass(frozen=True)
class CyclotomicCoset:
    leader: int
    members: Tuple[int, ...]


def cyclotomic_cosets(n: int, q: int) -> List[CyclotomicCoset]:
    """Partition of Z_n into orbits of s -> s q mod n, leaders ascending."""
    if n < 1 or gcd(n, q) != 1:
        raise ValueError(f"cyclotomic cosets need gcd(n, q) = 1, got n={n}, q={q}")
    seen = set()
    cosets = []
    for s in range(n):
        if s in seen:
            continue
        members = []
        x = s
        while x not in members:
            members.append(x)
            x = (x * q) % n
        seen.update(members)
        cosets.append(CyclotomicCoset(s, tuple(sorted(members))))
    return cosets


def _subfield_poly(spec: FieldSpec, poly: galois.Poly) -> galois.Poly:
    coeffs = poly.coeffs
    if np.any(coeffs ** spec.q != coeffs):
        raise InternalConsistencyError(f"{poly} has coefficients outside GF({spec.q})")
    return poly


def minimal_poly(spec: FieldSpec, i: int) -> galois.Poly:
    """x^2 + (beta^i + beta^-i) x + 1, the minimal polynomial of beta^i over GF(q)."""
    if not 1 <= i <= 3:
        raise ValueError(f"only beta^1 .. beta^3 enter the generator, got i={i}")
    middle = spec.pow(spec.beta, i) ^ spec.pow(spec.beta, -i)
    return _subfield_poly(spec, galois.Poly([1, middle, 1], field=spec.GF))


def bch_generator(spec: FieldSpec) -> galois.Poly:
    n = spec.q + 1
    g = minimal_poly(spec, 1) * minimal_poly(spec, 2) * minimal_poly(spec, 3)
    if g.degree != 6:
        raise InternalConsistencyError(f"generator has degree {g.degree}")
    remainder = galois.Poly.Degrees([n, 0], field=spec.GF) % g
    if np.any(remainder.coeffs != 0):
        raise InternalConsistencyError(f"generator does not divide x^{n} + 1")
    return g


def coefficients_low_first(poly: galois.Poly) -> List[int]:
    return [int(c) for c in poly.coeffs[::-1]]


# the code

@dataclass(frozen=True)
class LinearCodeSpec:
    spec: FieldSpec
    generator_poly: galois.Poly
    H: galois.FieldArray
    G: galois.FieldArray

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def n(self) -> int:
        return self.spec.q + 1

    @property
    def dimension(self) -> int:
        return self.n - self.generator_poly.degree


@dataclass
class Codeword:
    values: np.ndarray
    weight: int = field(init=False)

    def __post_init__(self):
        self.values = as_ints(self.values)
        self.weight = int(np.count_nonzero(self.values))

    @property
    def support(self) -> Block:
        return tuple(int(i) for i in np.flatnonzero(self.values))

    def hex_values(self) -> List[str]:
        return [f"{int(v):#x}" for v in self.values]


def parity_check_matrix(spec: FieldSpec) -> galois.FieldArray:
    n = spec.q + 1
    exps = np.outer(np.asarray(ROWS), np.arange(n)) % n
    return spec.units(exps)


def generator_matrix(spec: FieldSpec, g: galois.Poly) -> galois.FieldArray:
    """Rows x^i g(x), i < n - deg g, as coefficient vectors."""
    n = spec.q + 1
    k = n - g.degree
    low = g.coeffs[::-1]
    G = spec.GF.Zeros((k, n))
    for i in range(k):
        G[i, i:i + g.degree + 1] = low
    return G


def syndrome(code: LinearCodeSpec, values) -> galois.FieldArray:
    return code.H @ code.spec.array(values)


def is_codeword(code: LinearCodeSpec, values) -> bool:
    return bool(np.all(syndrome(code, values) == 0))


def in_dual(code: LinearCodeSpec, values) -> bool:
    """Orthogonal to every generator row, i.e. a word of the dual code."""
    return bool(np.all(code.G @ code.spec.array(values) == 0))


@lru_cache(maxsize=None)
def build_code(m: int) -> LinearCodeSpec:
    spec = build_field(m)
    g = bch_generator(spec)
    H = parity_check_matrix(spec)
    G = generator_matrix(spec, g)
    code = LinearCodeSpec(spec, g, H, G)

    padded = np.zeros(code.n, dtype=np.int64)
    padded[:g.degree + 1] = coefficients_low_first(g)
    if not is_codeword(code, padded):
        raise InternalConsistencyError("the generator word has a nonzero syndrome")
    if np.any(G @ H.T != 0):
        raise InternalConsistencyError("G H^T is not zero")
    logger.info(f"Built [{code.n}, {code.dimension}] BCH code over GF({code.q})")
    return code


# M matrices

@dataclass
class MMatrix:
    block: Block
    matrix: galois.FieldArray

    def delete_rows(self, *rows: int) -> galois.FieldArray:
        for r in rows:
            if r not in ROWS:
                raise ValueError(f"M has no row u^{r}")
        keep = [i for i, r in enumerate(ROWS) if r not in rows]
        return self.matrix[keep]


def m_matrix(spec: FieldSpec, block: Sequence[int]) -> MMatrix:
    block = make_block(block, spec.q)
    exps = np.outer(np.asarray(ROWS), np.asarray(block, dtype=np.int64)) % (spec.q + 1)
    return MMatrix(block, spec.units(exps))


def m_rank(M) -> int:
    return int(np.linalg.matrix_rank(M.matrix if isinstance(M, MMatrix) else M))


def _pair_product(spec: FieldSpec, values: Sequence[int]) -> int:
    result = 1
    for i, u in enumerate(values):
        for v in values[i + 1:]:
            result = spec.mul(result, u ^ v)
    return result


def det_m6(spec: FieldSpec, block: Sequence[int]) -> int:
    return int(np.linalg.det(m_matrix(spec, block).matrix))


def det_m6_closed_form(spec: FieldSpec, block: Sequence[int]) -> int:
    """prod(u_i + u_j) sigma_63 / sigma_66^3."""
    if len(block) != 6:
        raise ValueError("det(M_6) needs six points")
    values = [spec.unit(e) for e in block]
    s = esp_coefficients(spec, values, 6)
    return spec.div(spec.mul(_pair_product(spec, values), s[3]), spec.pow(s[6], 3))


def det_m5(spec: FieldSpec, block: Sequence[int], deleted: int) -> int:
    return int(np.linalg.det(m_matrix(spec, block).delete_rows(deleted)))


def det_m5_closed_forms(spec: FieldSpec, block: Sequence[int]) -> Dict[int, int]:
    """det(M_5 without row u^r) for every r, as Schur polynomials in the sigma_5,i.

    Multiplying column j by u_j^3 (u_j^2 when row u^-3 is gone) turns each
    minor into a Vandermonde determinant times a Schur polynomial.
    """
    if len(block) != 5:
        raise ValueError("det(M_5[r]) needs five points")
    values = [spec.unit(e) for e in block]
    _, s1, s2, s3, s4, s5 = esp_coefficients(spec, values, 5)
    mul = spec.mul
    p = _pair_product(spec, values)
    cube = spec.pow(s5, 3)
    schur = {
        3: s2,
        2: mul(s1, s2) ^ s3,
        1: mul(s2, s2) ^ mul(s1, s3),
        -2: mul(s3, s4) ^ mul(s2, s5),
        -1: mul(s3, s3) ^ mul(s2, s4),
    }
    forms = {r: spec.div(mul(p, value), cube) for r, value in schur.items()}
    forms[-3] = spec.div(mul(p, s3), spec.square(s5))
    return forms


def kernel_to_subfield_solution(spec: FieldSpec, M, basis=None) -> np.ndarray:
    """A nonzero x over GF(q) with M x = 0, from a kernel vector over GF(q^2).

    The kernel is closed under coordinatewise Frobenius (it swaps rows u^r and
    u^-r), so x'' + x''^q is a kernel vector with entries in GF(q).  x'' is
    normalized to alpha at a nonzero coordinate; the next coordinate is tried
    if the symmetrization vanishes.
    """
    matrix = M.matrix if isinstance(M, MMatrix) else M
    if basis is None:
        basis = matrix.null_space()
    if len(basis) == 0:
        raise ValueError("M has full column rank, its kernel is zero")
    vector = basis[0]
    alpha = spec.GF(spec.alpha)
    for i0 in np.flatnonzero(vector != 0):
        scaled = vector * (alpha / vector[i0])
        x = spec.trace_array(scaled)
        if np.any(x != 0):
            if np.any(matrix @ x != 0):
                raise InternalConsistencyError("symmetrized kernel vector is not a solution")
            return as_ints(x)
    raise InternalConsistencyError("every normalization symmetrized to zero")


def codeword_on_block(code: LinearCodeSpec, block: Sequence[int], solution) -> Codeword:
    values = np.zeros(code.n, dtype=np.int64)
    values[list(block)] = as_ints(solution)
    return Codeword(values)


# low weights

@dataclass
class LowWeightResult:
    """Supports of weight-w codewords, one solution per support (up to scalars)."""
    q: int
    w: int
    candidates: int
    supports: List[Block]
    solutions: np.ndarray
    degenerate: int = 0

    @property
    def count(self) -> int:
        return (self.q - 1) * len(self.supports)

    def codeword(self, code: LinearCodeSpec, index: int) -> Codeword:
        return codeword_on_block(code, self.supports[index], self.solutions[index])


def write_codewords(code: LinearCodeSpec, result: LowWeightResult, stream: TextIO) -> None:
    """Header `m,reduction_poly,w,count`, then one full-length codeword of hex values per support."""
    writer = csv.writer(stream, lineterminator='\n')
    record = field_record(code.spec)
    writer.writerow([record['m'], record['reduction_poly'], result.w, len(result.supports)])
    for index in range(len(result.supports)):
        writer.writerow(result.codeword(code, index).hex_values())


def _lift_job(job: Tuple[int, List[Block]]) -> List[Tuple[int, Optional[Tuple[int, ...]]]]:
    """(kernel dimension, GF(q) solution or None) for every block of the chunk."""
    m, blocks = job
    spec = build_field(m)
    out = []
    for block in blocks:
        M = m_matrix(spec, block)
        basis = M.matrix.null_space()
        if len(basis) == 0:
            out.append((0, None))
            continue
        solution = kernel_to_subfield_solution(spec, M, basis)
        out.append((len(basis), tuple(int(x) for x in solution)))
    return out


def _candidate_blocks(code: LinearCodeSpec, w: int, budget: int, threads: int,
                      oracle: bool) -> Tuple[List[Block], bool]:
    """Blocks to rank-test, and whether the selection criterion is exact."""
    spec = code.spec
    n = code.n
    if oracle or w <= 3:
        check_budget(f"{w}-subsets of U_{n}", comb(n, w), budget)
        return [tuple(int(x) for x in row) for row in combinations_array(n, w)], False
    if w == 4:
        check_budget(f"4-subsets of U_{n}", comb(n, 4), budget)
        subsets = combinations_array(n, 4)
        hit = np.asarray(subset_esps(spec, subsets, 1)[:, 1] == 0, dtype=bool)
        return [tuple(int(x) for x in row) for row in subsets[hit]], False
    if w == 5:
        if spec.m % 2 == 0:
            return enumerate_steiner_blocks(spec).blocks, True
        return enumerate_blocks_bruteforce(spec, 5, 2, budget, threads).blocks, True
    if w == 6:
        return enumerate_b63(spec, budget, threads).blocks, True
    raise ValueError(f"low-weight scans cover w <= 6, got {w}")


def enumerate_low_weight(code: LinearCodeSpec, w: int, budget: int = 10**9,
                         threads: int = 1, oracle: bool = False,
                         candidates: Optional[List[Block]] = None,
                         exact: bool = False) -> LowWeightResult:
    """Supports of the weight-w codewords, w <= 6.

    Candidates come from the vanishing ESP that governs rank(M_w) < w (or
    every w-subset when ``oracle`` is set); each is confirmed by Gaussian
    elimination and its kernel lifted to GF(q).  Callers passing their own
    candidates set ``exact`` when every candidate must have a kernel.
    """
    if candidates is None:
        candidates, exact = _candidate_blocks(code, w, budget, threads, oracle)
    chunks = [candidates[i:i + LIFT_CHUNK] for i in range(0, len(candidates), LIFT_CHUNK)]
    parts = run_chunks(_lift_job, [(code.spec.m, c) for c in chunks], threads,
                       desc=f'weight-{w} kernels')

    supports: List[Block] = []
    solutions = []
    degenerate = 0
    for chunk, results in zip(chunks, parts):
        for block, (dim, solution) in zip(chunk, results):
            if dim == 0:
                if exact:
                    raise InternalConsistencyError(f"{block} passed the ESP test but M has full rank")
                continue
            if dim > 1:
                raise InternalConsistencyError(f"M on {block} has a {dim}-dimensional kernel")
            if all(solution):
                supports.append(block)
                solutions.append(solution)
            else:
                degenerate += 1

    array = np.asarray(solutions, dtype=np.int64).reshape(len(solutions), w)
    result = LowWeightResult(code.q, w, len(candidates), supports, array, degenerate)
    logger.info(f"Weight {w} at q={code.q}: {len(candidates)} candidates, "
                f"{len(supports)} supports, A_{w} = {result.count}")
    return result


def minimum_distance(code: LinearCodeSpec, budget: int = 10**9,
                     threads: int = 1) -> LowWeightResult:
    """The first nonempty low-weight scan from w = 4 on; its w is d."""
    for w in (4, 5, 6):
        result = enumerate_low_weight(code, w, budget, threads)
        if result.supports:
            return result
    raise InternalConsistencyError(f"no codeword of weight <= 6 at q={code.q}")


# the dual code

def _unit_powers(spec: FieldSpec, power: int):
    n = spec.q + 1
    return spec.units((power * np.arange(n)) % n)


def dual_codeword(code: LinearCodeSpec, a: int, b: int, c: int) -> Codeword:
    """(Tr(a u^3 + b u^2 + c u)) over the points u = gamma^i."""
    spec = code.spec
    GF = spec.GF
    x = GF(a) * _unit_powers(spec, 3) + GF(b) * _unit_powers(spec, 2) + GF(c) * _unit_powers(spec, 1)
    return Codeword(spec.trace_array(x))


def dual_min_weight_from_block(spec: FieldSpec, block: Sequence[int], tau: int = 1) -> Tuple[int, int, int]:
    """(a, b, c) whose trace polynomial vanishes exactly on the block."""
    if len(block) != 6:
        raise ValueError("a dual minimum-weight word is built from a 6-block")
    if tau == 0 or not spec.is_subfield(tau):
        raise ValueError(f"tau must be a nonzero element of GF({spec.q})")
    s = esp_coefficients(spec, [spec.unit(e) for e in block], 6)
    if s[3] != 0:
        raise ValueError(f"{tuple(block)} is not a block of B(6,3)")
    scale = spec.div(tau, spec.sqrt(s[6]))
    return scale, spec.mul(scale, s[1]), spec.mul(scale, s[2])


def _dual_support_job(job: Tuple[int, np.ndarray]) -> List[Block]:
    m, blocks = job
    spec = build_field(m)
    n = spec.q + 1
    sig = subset_esps(spec, blocks, 6)
    if np.any(sig[:, 3] != 0):
        raise ValueError("a block with sigma_6,3 != 0 was passed as B(6,3)")
    scale = spec.GF(1) / spec.sqrt_array(sig[:, 6])
    x = (scale[:, None] * _unit_powers(spec, 3)[None, :]
         + (scale * sig[:, 1])[:, None] * _unit_powers(spec, 2)[None, :]
         + (scale * sig[:, 2])[:, None] * _unit_powers(spec, 1)[None, :])
    zero = np.asarray(spec.trace_array(x) == 0, dtype=bool)
    rows = np.arange(len(blocks))[:, None]
    if np.any(zero.sum(axis=1) != 6) or not zero[rows, blocks].all():
        raise InternalConsistencyError("a trace polynomial does not vanish exactly on its block")
    support = np.nonzero(~zero)[1].reshape(len(blocks), n - 6)
    return [tuple(int(x) for x in row) for row in support]


def dual_min_weight_codewords(code: LinearCodeSpec, family: Optional[BlockFamily] = None,
                              budget: int = 10**9, threads: int = 1) -> List[Block]:
    """Supports of the weight-(q-5) dual words, one per block of B(6,3), sorted."""
    if family is None:
        family = enumerate_b63(code.spec, budget, threads)
    blocks = family.as_array()
    step = max(1, TRACE_BATCH_ITEMS // (code.n * 8))
    jobs = [(code.spec.m, blocks[i:i + step]) for i in range(0, len(blocks), step)]
    parts = run_chunks(_dual_support_job, jobs, threads, desc='dual minimum words')
    supports = sorted(s for part in parts for s in part)
    logger.info(f"{len(supports)} dual supports of weight {code.n - 6} at q={code.q}")
    return supports


@dataclass
class WeightDistribution:
    counts: Tuple[int, ...]
    q: int
    dimension: int
    partial: bool = False

    def __post_init__(self):
        self.counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in self.counts):
            raise ValueError("weight counts must be non-negative")
        if not self.partial:
            if not self.counts or self.counts[0] != 1:
                raise ValueError("A_0 must be 1")
            if sum(self.counts) != self.q ** self.dimension:
                raise ValueError(
                    f"counts sum to {sum(self.counts)}, expected {self.q}^{self.dimension}"
                )

    @property
    def n(self) -> int:
        return len(self.counts) - 1

    @property
    def min_weight(self) -> Optional[int]:
        for i, c in enumerate(self.counts[1:], start=1):
            if c:
                return i
        return None

    def nonzero(self) -> Dict[int, int]:
        return {i: c for i, c in enumerate(self.counts) if c}

    def to_list(self) -> List[int]:
        return list(self.counts)


@lru_cache(maxsize=4)
def _trace_tables(m: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """T_p[x, i] = Tr(x gamma^{p i}) for every x in GF(q^2), p = 1, 2, 3."""
    spec = build_field(m)
    everything = spec.GF(np.arange(spec.order))
    tables = []
    for p in (1, 2, 3):
        products = everything[:, None] * _unit_powers(spec, p)[None, :]
        tables.append(as_ints(spec.trace_array(products)).astype(np.uint32))
    return tables[0], tables[1], tables[2]


def _weight_histogram(bases: np.ndarray, T1: np.ndarray, n: int) -> np.ndarray:
    words = bases[:, None, :] ^ T1[None, :, :]
    return np.bincount(np.count_nonzero(words, axis=2).ravel(), minlength=n + 1)


def _trace_enum_job(job: Tuple[int, int]) -> np.ndarray:
    """Weight histogram over one class of representatives.

    a_exp >= 0: a = gamma^a_exp, every b and c.  a_exp = -1: a = 0 with b on
    U_{q+1} and every c, then a = b = 0 with c on U_{q+1}.
    """
    m, a_exp = job
    spec = build_field(m)
    n = spec.q + 1
    T1, T2, T3 = _trace_tables(m)
    batch = max(1, TRACE_BATCH_ITEMS // (spec.order * n))
    hist = np.zeros(n + 1, dtype=np.int64)
    if a_exp >= 0:
        row = T3[spec.unit(a_exp)]
        for start in range(0, spec.order, batch):
            hist += _weight_histogram(row ^ T2[start:start + batch], T1, n)
    else:
        rows = T2[spec.unit_values]
        for start in range(0, n, batch):
            hist += _weight_histogram(rows[start:start + batch], T1, n)
        hist += np.bincount(np.count_nonzero(T1[spec.unit_values], axis=1), minlength=n + 1)
    return hist


def trace_enum_work(q: int) -> int:
    """Representatives visited by the trace enumeration."""
    return (q + 1) * q ** 4 + (q + 1) * q ** 2 + (q + 1)


def dual_weight_distribution(code: LinearCodeSpec, method: str = 'trace_enum',
                             budget: int = 10**9, threads: int = 1,
                             family: Optional[BlockFamily] = None) -> WeightDistribution:
    """Weight distribution of the dual [q+1, 6, q-5] code.

    trace_enum scans one (a, b, c) per GF(q)*-orbit (a on U_{q+1}, or a = 0
    and b on U_{q+1}, or a = b = 0 and c on U_{q+1}); each orbit has q - 1
    words of equal weight.  support_formula only knows A_0 and A_{q-5}.
    """
    q, n = code.q, code.n
    if method == 'support_formula':
        if family is None:
            family = enumerate_b63(code.spec, budget, threads)
        counts = [0] * (n + 1)
        counts[0] = 1
        counts[q - 5] = (q - 1) * family.count
        return WeightDistribution(counts, q, n - code.dimension, partial=True)
    if method != 'trace_enum':
        raise ValueError(f"unknown method {method!r}, use trace_enum or support_formula")

    check_budget(f"trace representatives at q={q}", trace_enum_work(q), budget)
    jobs = [(code.spec.m, e) for e in range(n)] + [(code.spec.m, -1)]
    hists = run_chunks(_trace_enum_job, jobs, threads, desc='trace enumeration')
    total = np.sum(hists, axis=0, dtype=np.int64) * (q - 1)
    counts = [int(c) for c in total]
    counts[0] += 1
    dist = WeightDistribution(counts, q, n - code.dimension)
    logger.info(f"Dual distribution at q={q}: {dist.nonzero()}")
    return dist


# distributions and classification

def krawtchouk(j: int, i: int, n: int, q: int) -> int:
    return sum((-1) ** s * (q - 1) ** (j - s) * comb(i, s) * comb(n - i, j - s)
               for s in range(j + 1))


def macwilliams_transform(dist: WeightDistribution, n: int, k: int, q: int) -> WeightDistribution:
    """Distribution of the dual of an [n, k] code from its own, exactly."""
    if dist.partial:
        raise ValueError("a partial distribution cannot be transformed")
    if dist.n != n or dist.q != q or dist.dimension != k:
        raise ValueError(f"distribution is for [{dist.n}, {dist.dimension}] over GF({dist.q}), "
                         f"asked for [{n}, {k}] over GF({q})")
    size = q ** k
    counts = []
    for j in range(n + 1):
        value = Fraction(sum(a * krawtchouk(j, i, n, q) for i, a in enumerate(dist.counts)), size)
        if value.denominator != 1:
            raise InternalConsistencyError(f"MacWilliams B_{j} = {value} is not an integer")
        counts.append(int(value))
    return WeightDistribution(counts, q, n - k)


def classify_mds(n: int, k: int, d: int, d_dual: int) -> CodeClass:
    if d == n - k + 1:
        return CodeClass.MDS
    if d == n - k:
        return CodeClass.NMDS if d_dual == k else CodeClass.AMDS
    return CodeClass.NEITHER


@dataclass
class AMReport:
    t: int
    d: int
    d_dual: int
    w: int
    w_dual: int
    s: int
    hypothesis_holds: bool
    design_weights: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            't': self.t,
            'd': self.d,
            'd_dual': self.d_dual,
            'w': self.w,
            'w_dual': self.w_dual,
            's': self.s,
            'hypothesis_holds': self.hypothesis_holds,
            'design_weights': self.design_weights,
        }


def am_weight_bound(v: int, d: int, q: int) -> int:
    """Largest w <= v with w - floor((w + q - 2) / (q - 1)) < d."""
    for w in range(v, -1, -1):
        if w - (w + q - 2) // (q - 1) < d:
            return w
    return 0


def assmus_mattson_check(dist: WeightDistribution, dual: WeightDistribution, t: int,
                         q: Optional[int] = None) -> AMReport:
    q = dist.q if q is None else q
    v = dist.n
    if dual.n != v:
        raise ValueError("code and dual distributions have different lengths")
    d, d_dual = dist.min_weight, dual.min_weight
    if d is None or d_dual is None:
        raise ValueError("both codes need a nonzero word")
    w = am_weight_bound(v, d, q)
    w_dual = am_weight_bound(v, d_dual, q)
    s = sum(1 for i in range(1, v - t + 1) if dual.counts[i])
    holds = 1 <= t < d and s <= d - t
    weights = [i for i in range(d, w + 1) if dist.counts[i]] if holds else []
    return AMReport(t, d, d_dual, w, w_dual, s, holds, weights)


# NMDS pairing

@dataclass
class NMDSReport:
    code_class: CodeClass
    d: int
    d_dual: int
    primal_count: int
    dual_count: int
    sampled: List[Block]
    disjoint_counts: List[int]
    complements_match: bool

    @property
    def counts_equal(self) -> bool:
        return self.primal_count == self.dual_count

    @property
    def pairing_unique(self) -> bool:
        return all(c == 1 for c in self.disjoint_counts)

    @property
    def passed(self) -> bool:
        return self.counts_equal and self.pairing_unique and self.complements_match

    def to_dict(self) -> Dict[str, object]:
        return {
            'class': self.code_class.value,
            'd': self.d,
            'd_dual': self.d_dual,
            'primal_count': self.primal_count,
            'dual_count': self.dual_count,
            'sampled': len(self.sampled),
            'disjoint_counts': sorted(set(self.disjoint_counts)),
            'complements_match': self.complements_match,
            'passed': self.passed,
        }


def nmds_pairing_check(code: LinearCodeSpec, sample_size: int = 100, seed: int = 2020,
                       budget: int = 10**9, threads: int = 1,
                       low_weight: Optional[LowWeightResult] = None,
                       family: Optional[BlockFamily] = None,
                       dual: Optional[WeightDistribution] = None) -> NMDSReport:
    """Minimum words of an NMDS code pair up with disjoint dual minimum supports."""
    if low_weight is None:
        low_weight = minimum_distance(code, budget, threads)
    if family is None:
        family = enumerate_b63(code.spec, budget, threads)
    dual_supports = dual_min_weight_codewords(code, family, budget, threads)

    d = low_weight.w
    d_dual = dual.min_weight if dual is not None else (code.n - 6 if dual_supports else None)
    code_class = classify_mds(code.n, code.dimension, d, d_dual)
    if code_class != CodeClass.NMDS:
        raise ValueError(f"the [{code.n}, {code.dimension}, {d}] code is {code_class.value}, not NMDS")

    dual_count = (code.q - 1) * len(dual_supports)
    if dual is not None and dual.counts[d_dual] != dual_count:
        raise InternalConsistencyError(
            f"dual A_{d_dual} is {dual.counts[d_dual]}, supports give {dual_count}"
        )

    incidence = np.zeros((len(dual_supports), code.n), dtype=bool)
    if dual_supports:
        rows = np.arange(len(dual_supports))[:, None]
        incidence[rows, np.asarray(dual_supports)] = True

    rng = np.random.default_rng(seed)
    size = min(sample_size, len(low_weight.supports))
    picks = np.sort(rng.choice(len(low_weight.supports), size=size, replace=False))
    sampled = [low_weight.supports[i] for i in picks]
    disjoint = [int(np.count_nonzero(~incidence[:, list(block)].any(axis=1))) for block in sampled]

    points = set(range(code.n))
    complements = {tuple(sorted(points.difference(b))) for b in family.blocks}
    report = NMDSReport(code_class, d, d_dual, low_weight.count, dual_count, sampled,
                        disjoint, complements == set(dual_supports))
    logger.info(f"NMDS pairing at q={code.q}: {report.to_dict()}")
    return report
