"""
Exact t-design verification.

Coverage of every t-subset is counted in a dense table indexed by the
colexicographic rank of the subset.  When blocks are more than half the point
set the table is assembled from the complementary blocks instead, by
inclusion-exclusion over the subsets of each t-subset; both routes give the
same integers.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, FrozenSet, List, Optional

import numpy as np

from .errors import InternalConsistencyError
from .parallel import run_chunks
from .symmetric_blocks import Block, BlockFamily
from .utils import binomial_table, check_budget, colex_ranks, combinations_array

logger = logging.getLogger(__name__)

CHUNK_ITEMS = 2_000_000


@dataclass
class IncidenceStructure:
    v: int
    blocks: List[Block]
    k: Optional[int] = None

    def __post_init__(self):
        sizes = {len(b) for b in self.blocks}
        if len(sizes) > 1:
            raise ValueError(f"blocks have sizes {sorted(sizes)}, expected one size")
        if sizes:
            size = sizes.pop()
            if self.k is not None and self.k != size:
                raise ValueError(f"blocks have size {size}, structure declares k={self.k}")
            self.k = size
        elif self.k is None:
            raise ValueError("an empty structure needs an explicit block size")
        if len(set(self.blocks)) != len(self.blocks):
            raise ValueError("repeated blocks: only simple structures are handled")
        for block in self.blocks:
            if list(block) != sorted(block) or (block and (block[0] < 0 or block[-1] >= self.v)):
                raise ValueError(f"block {block} is not a sorted subset of [0, {self.v - 1}]")

    @classmethod
    def from_family(cls, family: BlockFamily) -> 'IncidenceStructure':
        return cls(family.q + 1, list(family.blocks), family.k)

    @property
    def b(self) -> int:
        return len(self.blocks)

    def as_array(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros((0, self.k), dtype=np.int64)
        return np.asarray(self.blocks, dtype=np.int64)

    def as_set(self) -> FrozenSet[Block]:
        return frozenset(self.blocks)


@dataclass
class DesignReport:
    t: int
    v: int
    k: int
    b: int
    coverage_min: int
    coverage_max: int
    lambda_: Optional[int]
    is_design: bool
    is_steiner: bool

    def to_dict(self) -> Dict[str, object]:
        return {
            't': self.t,
            'v': self.v,
            'k': self.k,
            'b': self.b,
            'coverage_min': self.coverage_min,
            'coverage_max': self.coverage_max,
            'lambda': self.lambda_,
            'is_design': self.is_design,
            'is_steiner': self.is_steiner,
        }


def _direct_coverage(blocks: np.ndarray, v: int, t: int, threads: int) -> np.ndarray:
    size = comb(v, t)
    if len(blocks) == 0:
        return np.zeros(size, dtype=np.int64)
    positions = combinations_array(blocks.shape[1], t)
    table = binomial_table(v, t)
    step = max(1, CHUNK_ITEMS // max(1, len(positions)))
    chunks = [blocks[i:i + step] for i in range(0, len(blocks), step)]

    def count(chunk: np.ndarray) -> np.ndarray:
        subsets = chunk[:, positions].reshape(-1, t)
        return np.bincount(colex_ranks(subsets, table), minlength=size).astype(np.int64)

    partial = run_chunks(count, chunks, threads, desc=f'{t}-coverage', use_processes=False)
    return np.sum(partial, axis=0, dtype=np.int64)


def _coverage_from_complements(blocks: np.ndarray, v: int, t: int, threads: int) -> np.ndarray:
    outside = np.ones((len(blocks), v), dtype=bool)
    outside[np.arange(len(blocks))[:, None], blocks] = False
    complements = np.nonzero(outside)[1].reshape(len(blocks), v - blocks.shape[1])

    subsets = combinations_array(v, t)
    table = binomial_table(v, t)
    result = np.zeros(comb(v, t), dtype=np.int64)
    totals = np.zeros(len(subsets), dtype=np.int64)
    for j in range(t + 1):
        level = _direct_coverage(complements, v, j, threads) if j else np.array([len(blocks)])
        sign = -1 if j % 2 else 1
        for positions in combinations_array(t, j):
            ranks = colex_ranks(subsets[:, positions], table)
            totals += sign * level[ranks]
    result[colex_ranks(subsets, table)] = totals
    return result


def coverage_table(s: IncidenceStructure, t: int, budget: int = 10**9,
                   threads: int = 1) -> np.ndarray:
    """Number of blocks through each t-subset, indexed by colex rank."""
    check_budget(f"{t}-subsets of {s.v} points", comb(s.v, t), budget)
    blocks = s.as_array()
    if 2 * s.k > s.v and t <= s.v - s.k:
        return _coverage_from_complements(blocks, s.v, t, threads)
    return _direct_coverage(blocks, s.v, t, threads)


def verify_design(s: IncidenceStructure, t: int, budget: int = 10**9,
                  threads: int = 1) -> DesignReport:
    if not 1 <= t < s.k <= s.v:
        raise ValueError(f"need 1 <= t < k <= v, got t={t}, k={s.k}, v={s.v}")
    coverage = coverage_table(s, t, budget, threads)
    low, high = int(coverage.min()), int(coverage.max())
    is_design = low == high
    lam = low if is_design else None
    if is_design and s.b * comb(s.k, t) != low * comb(s.v, t):
        raise InternalConsistencyError("coverage is constant but b C(k,t) != lambda C(v,t)")
    logger.info(f"{t}-coverage of {s.b} blocks on {s.v} points: min {low}, max {high}")
    return DesignReport(t, s.v, s.k, s.b, low, high, lam, is_design, is_design and lam == 1)


def lambda_s(t: int, v: int, k: int, lam: int, s: int) -> Fraction:
    """lambda_s = lambda C(v-s, t-s) / C(k-s, t-s)."""
    if not 0 <= s <= t:
        raise ValueError(f"s must lie in [0, {t}], got {s}")
    return Fraction(lam * comb(v - s, t - s), comb(k - s, t - s))


def design_parameters_check(report: DesignReport) -> Dict[int, Fraction]:
    """lambda_s for s = 0..t; all integral for a genuine design."""
    if not report.is_design:
        raise ValueError("parameters of a non-design are undefined")
    return {s: lambda_s(report.t, report.v, report.k, report.lambda_, s)
            for s in range(report.t + 1)}


def complement_design(s: IncidenceStructure) -> IncidenceStructure:
    points = set(range(s.v))
    blocks = sorted(tuple(sorted(points.difference(b))) for b in s.blocks)
    return IncidenceStructure(s.v, blocks, s.v - s.k)
