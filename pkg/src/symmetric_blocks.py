"""
Block families cut out by elementary symmetric polynomials on U_{q+1}.

A block is a sorted tuple of exponents e, standing for the points gamma^e.
B(k, l) is the family of k-subsets whose l-th elementary symmetric
polynomial vanishes.  Besides the generic brute-force scan this module has
the constructive enumerators: the Steiner system B(5, 2) for even m, built
from a quadratic through every triple, and B(6, 3), built by completing
5-subsets with u6 = sigma_{5,3} / sigma_{5,2}.
"""

import csv
import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Sequence, TextIO, Tuple

import numpy as np

from .errors import InternalConsistencyError
from .finite_field import FieldSpec, build_field
from .parallel import merge_sorted, run_chunks
from .utils import check_budget, combinations_array, subsets_above

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]

SUFFIX_WIDTH = 4


class FamilyTag(str, Enum):
    FULL = 'FULL'
    B0 = 'B0'
    B1 = 'B1'


@dataclass
class BlockFamily:
    q: int
    k: int
    ell: int
    tag: FamilyTag
    blocks: List[Block] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.blocks)

    def as_array(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros((0, self.k), dtype=np.int64)
        return np.asarray(self.blocks, dtype=np.int64)

    def as_set(self) -> FrozenSet[Block]:
        return frozenset(self.blocks)


def make_block(exps: Iterable[int], q: int) -> Block:
    block = tuple(sorted(int(e) for e in exps))
    if len(set(block)) != len(block):
        raise ValueError(f"block {block} repeats a point")
    if block and (block[0] < 0 or block[-1] > q):
        raise ValueError(f"block {block} leaves [0, {q}]")
    return block


# elementary symmetric polynomials

def esp_coefficients(spec: FieldSpec, values: Sequence[int], top: int) -> List[int]:
    """[sigma_0, ..., sigma_top] of the values, from the product of (1 + u T)."""
    coeffs = [1] + [0] * top
    for u in values:
        for i in range(top, 0, -1):
            coeffs[i] ^= spec.mul(u, coeffs[i - 1])
    return coeffs


def esp(spec: FieldSpec, values: Sequence[int], ell: int) -> int:
    if not 0 <= ell <= len(values):
        raise ValueError(f"degree {ell} outside [0, {len(values)}]")
    return esp_coefficients(spec, values, ell)[ell]


def esp_array(spec: FieldSpec, values, top: int = None):
    """Row-wise [sigma_0, ..., sigma_top] for a (rows, k) field array."""
    rows, k = values.shape
    top = k if top is None else top
    coeffs = spec.GF.Zeros((rows, top + 1))
    coeffs[:, 0] = 1
    for j in range(k):
        coeffs[:, 1:] = coeffs[:, 1:] + values[:, j:j + 1] * coeffs[:, :-1]
    return coeffs


def subset_esps(spec: FieldSpec, subsets: np.ndarray, top: int):
    return esp_array(spec, spec.units(subsets), top)


# brute force

@lru_cache(maxsize=8)
def _suffix_table(n: int, r: int) -> np.ndarray:
    return combinations_array(n, r)


def _bruteforce_job(job: Tuple[int, int, int, int]) -> List[Block]:
    m, k, ell, first = job
    spec = build_field(m)
    n = spec.q + 1
    p = max(1, k - SUFFIX_WIDTH)
    r = k - p
    table = _suffix_table(n, r)

    found: List[Block] = []
    for rest in itertools.combinations(range(first + 1, n), p - 1):
        prefix = (first,) + rest
        if n - prefix[-1] - 1 < r:
            continue
        start = esp_coefficients(spec, [spec.unit(e) for e in prefix], ell)
        if r == 0:
            if start[ell] == 0:
                found.append(prefix)
            continue
        suffix = subsets_above(table, n, prefix[-1] + 1)
        coeffs = spec.GF(np.tile(np.asarray(start, dtype=np.int64), (len(suffix), 1)))
        values = spec.units(suffix)
        for j in range(r):
            coeffs[:, 1:] = coeffs[:, 1:] + values[:, j:j + 1] * coeffs[:, :-1]
        for hit in np.flatnonzero(coeffs[:, ell] == 0):
            found.append(prefix + tuple(int(x) for x in suffix[hit]))
    return found


def enumerate_blocks_bruteforce(spec: FieldSpec, k: int, ell: int,
                                budget: int = 10**9, threads: int = 1) -> BlockFamily:
    """Every k-subset of U_{q+1} with sigma_{k,ell} = 0, lexicographic."""
    n = spec.q + 1
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if not 0 <= ell <= k:
        raise ValueError(f"ell must lie in [0, {k}], got {ell}")
    check_budget(f"{k}-subsets of U_{n}", comb(n, k), budget)

    jobs = [(spec.m, k, ell, first) for first in range(n - k + 1)]
    parts = run_chunks(_bruteforce_job, jobs, threads, desc=f'B({k},{ell}) scan')
    blocks = merge_sorted(parts)
    logger.info(f"Brute force found {len(blocks)} blocks with sigma_{k},{ell} = 0 at q={spec.q}")
    return BlockFamily(spec.q, k, ell, FamilyTag.FULL, blocks)


# Steiner system

def quad_coefficients(spec: FieldSpec, triple: Sequence[int]) -> Tuple[int, int]:
    """(a, b) with u4 + u5 = a and u4 u5 = b for the completion of a triple."""
    s1, s2, s3 = esp_coefficients(spec, [spec.unit(e) for e in triple], 3)[1:]
    denom = spec.square(s1) ^ s2
    if denom == 0:
        raise InternalConsistencyError(f"sigma31^2 + sigma32 vanishes on {tuple(triple)}")
    a = spec.div(spec.mul(s1, s2) ^ s3, denom)
    b = spec.div(spec.square(s2) ^ spec.mul(s1, s3), denom)
    return a, b


def quad_pair(spec: FieldSpec, u1: int, u2: int, u3: int) -> Tuple[int, int, FrozenSet[int]]:
    if spec.m % 2:
        raise ValueError("the quadratic pair lies on U_{q+1} only for even m")
    if len({u1, u2, u3}) != 3:
        raise ValueError("the triple must consist of distinct points")
    a, b = quad_coefficients(spec, (u1, u2, u3))
    roots = spec.solve_quadratic_unit(a, b)
    if len(roots) != 2 or roots & {u1, u2, u3}:
        raise InternalConsistencyError(f"triple {(u1, u2, u3)} has roots {sorted(roots)}")
    return a, b, roots


def _steiner_candidates(spec: FieldSpec) -> np.ndarray:
    """One 5-set per triple, sorted rows; every Steiner block appears 10 times."""
    if spec.m % 2:
        raise ValueError(f"B(5,2) is empty for odd m (m={spec.m})")
    n = spec.q + 1
    triples = combinations_array(n, 3)
    sig = subset_esps(spec, triples, 3)
    s1, s2, s3 = sig[:, 1], sig[:, 2], sig[:, 3]
    denom = s1 * s1 + s2
    if np.any(denom == 0):
        raise InternalConsistencyError("sigma31^2 + sigma32 vanished for even m")
    a = (s1 * s2 + s3) / denom
    b = (s2 * s2 + s1 * s3) / denom
    r1, r2, ok = spec.solve_quadratic_array(a, b)
    e1 = spec.unit_index(r1)
    e2 = spec.unit_index(r2)
    if not ok.all() or (e1 < 0).any() or (e2 < 0).any():
        raise InternalConsistencyError("a triple's quadratic has a root off U_{q+1}")

    blocks = np.sort(np.column_stack([triples, e1, e2]), axis=1)
    if np.any(blocks[:, 1:] == blocks[:, :-1]):
        raise InternalConsistencyError("a quadratic pair meets its own triple")
    return blocks


def enumerate_steiner_blocks(spec: FieldSpec) -> BlockFamily:
    unique = np.unique(_steiner_candidates(spec), axis=0)
    blocks = [tuple(int(x) for x in row) for row in unique]
    logger.info(f"Steiner family at q={spec.q}: {len(blocks)} blocks")
    return BlockFamily(spec.q, 5, 2, FamilyTag.FULL, blocks)


def steiner_generation_counts(spec: FieldSpec) -> Dict[Block, int]:
    unique, counts = np.unique(_steiner_candidates(spec), axis=0, return_counts=True)
    return {tuple(int(x) for x in row): int(c) for row, c in zip(unique, counts)}


# completion to six points

def completion(spec: FieldSpec, five: Sequence[int]) -> int:
    """u6 = sigma_{5,3} / sigma_{5,2}, which makes sigma_{6,3} vanish."""
    coeffs = esp_coefficients(spec, [spec.unit(e) for e in five], 3)
    if coeffs[2] == 0:
        raise ValueError(f"sigma_5,2 vanishes on {tuple(five)}")
    u6 = spec.div(coeffs[3], coeffs[2])
    if not spec.is_unit(u6):
        raise InternalConsistencyError(f"completion of {tuple(five)} left U_{spec.q + 1}")
    return spec.unit_exp(u6)


def forbidden_set(spec: FieldSpec, four: Sequence[int]) -> FrozenSet[int]:
    """Points u5 that cannot extend a 4-subset to a block of B(6,3) through completion."""
    values = [spec.unit(e) for e in four]
    _, s1, s2, s3, _ = esp_coefficients(spec, values, 4)
    if s1 == 0 or s3 == 0:
        raise InternalConsistencyError(f"sigma41 * sigma43 vanishes on {tuple(four)}")

    points = set(int(e) for e in four)
    for u in values:
        denom = s2 ^ spec.mul(u, s1)
        if denom == 0:
            raise InternalConsistencyError(f"sigma42 + u sigma41 vanishes on {tuple(four)}")
        candidate = spec.div(s3 ^ spec.mul(u, s2), denom)
        points.add(_unit_or_fail(spec, candidate))
    points.add(_unit_or_fail(spec, spec.sqrt(spec.div(s3, s1))))
    return frozenset(points)


def _unit_or_fail(spec: FieldSpec, value: int) -> int:
    if not spec.is_unit(value):
        raise InternalConsistencyError(f"{value:#x} is not on U_{spec.q + 1}")
    return spec.unit_exp(value)


def classify_blocks(spec: FieldSpec, blocks: np.ndarray) -> np.ndarray:
    """True where a 6-block contains a 5-subset with sigma_{5,2} = 0."""
    hits = np.zeros(len(blocks), dtype=np.int64)
    if len(blocks) == 0:
        return hits.astype(bool)
    for drop in range(blocks.shape[1]):
        five = np.delete(blocks, drop, axis=1)
        hits += np.asarray(subset_esps(spec, five, 2)[:, 2] == 0, dtype=np.int64)
    if (hits > 1).any():
        raise InternalConsistencyError("a block contains two Steiner 5-subsets")
    return hits > 0


def classify_block(spec: FieldSpec, block: Sequence[int]) -> FamilyTag:
    if len(block) != 6:
        raise ValueError("only 6-blocks are split into B0 and B1")
    if esp(spec, [spec.unit(e) for e in block], 3) != 0:
        raise ValueError(f"{tuple(block)} is not a block of B(6,3)")
    row = np.asarray([sorted(block)], dtype=np.int64)
    return FamilyTag.B0 if classify_blocks(spec, row)[0] else FamilyTag.B1


def _completion_job(job: Tuple[int, int]) -> List[Block]:
    """Blocks of B(6,3) whose first five points start with `first` and miss every Steiner block."""
    m, first = job
    spec = build_field(m)
    n = spec.q + 1
    suffix = subsets_above(_suffix_table(n, 4), n, first + 1)
    rows = np.column_stack([np.full(len(suffix), first, dtype=np.int64), suffix])

    sig = subset_esps(spec, rows, 3)
    s2, s3 = sig[:, 2], sig[:, 3]
    live = np.asarray(s2 != 0, dtype=bool)
    if spec.m % 2 and not live.all():
        raise InternalConsistencyError("sigma_5,2 vanished for odd m")

    e6 = spec.unit_index(s3[live] / s2[live])
    if (e6 < 0).any():
        raise InternalConsistencyError("a completion left U_{q+1}")
    rows = rows[live]
    # emit each block once, from the five points below its maximum
    above = e6 > rows[:, -1]
    blocks = np.column_stack([rows[above], e6[above]])
    if spec.m % 2 == 0:
        blocks = blocks[~classify_blocks(spec, blocks)]
    return [tuple(int(x) for x in row) for row in blocks]


def b0_blocks(spec: FieldSpec, steiner: BlockFamily) -> List[Block]:
    """S u {u} for every Steiner block S and point u outside it, sorted."""
    n = spec.q + 1
    out = set()
    for s in steiner.blocks:
        members = set(s)
        for u in range(n):
            if u not in members:
                out.add(tuple(sorted(s + (u,))))
    return sorted(out)


def enumerate_b63(spec: FieldSpec, budget: int = 10**9, threads: int = 1) -> BlockFamily:
    """B(6,3) by completion (plus the Steiner extensions when m is even)."""
    n = spec.q + 1
    check_budget(f"5-subsets of U_{n}", comb(n, 5), budget)

    jobs = [(spec.m, first) for first in range(n - 5)]
    parts = run_chunks(_completion_job, jobs, threads, desc='B(6,3) completion')
    completed = merge_sorted(parts)

    if spec.m % 2:
        blocks = completed
    else:
        extended = b0_blocks(spec, enumerate_steiner_blocks(spec))
        blocks = merge_sorted([extended, completed])
        if len(set(blocks)) != len(blocks):
            raise InternalConsistencyError("B0 and completion outputs overlap")
    logger.info(f"B(6,3) at q={spec.q}: {len(blocks)} blocks")
    return BlockFamily(spec.q, 6, 3, FamilyTag.FULL, blocks)


def split_b63(spec: FieldSpec, family: BlockFamily) -> Tuple[BlockFamily, BlockFamily]:
    is_b0 = classify_blocks(spec, family.as_array())
    b0 = [b for b, flag in zip(family.blocks, is_b0) if flag]
    b1 = [b for b, flag in zip(family.blocks, is_b0) if not flag]
    return (BlockFamily(family.q, 6, 3, FamilyTag.B0, b0),
            BlockFamily(family.q, 6, 3, FamilyTag.B1, b1))


# blocks through a fixed triple (even m)

@dataclass
class TripleNeighbourhood:
    triple: Block
    s0: FrozenSet[int]
    steiner_extensions: List[Block]
    pair_families: Dict[Tuple[int, int], List[Block]]
    completions: List[Block]
    excluded_sizes: List[int]

    def all_blocks(self) -> List[Block]:
        return sorted(set(self.steiner_extensions) | set(self.completions))

    def b0_blocks(self) -> List[Block]:
        pairs = set().union(*self.pair_families.values())
        return sorted(set(self.steiner_extensions) | pairs)


def triple_neighbourhood(spec: FieldSpec, triple: Sequence[int]) -> TripleNeighbourhood:
    """All blocks of B(6,3) through a triple, sorted by how they arise.

    steiner_extensions: S0 plus one more point, S0 the Steiner block of the triple.
    pair_families[(i, j)]: the triple, a point u4 off S0 and the quadratic pair
    of (u_i, u_j, u4).
    completions: u4 off S0, u5 off S0, u4 and forbidden_set(triple + u4), then
    u6 by completion.
    """
    triple = make_block(triple, spec.q)
    if len(triple) != 3:
        raise ValueError("a triple has three points")
    n = spec.q + 1
    _, _, pair = quad_pair(spec, *triple)
    s0 = frozenset(triple) | pair

    extensions = [tuple(sorted(s0 | {u})) for u in range(n) if u not in s0]

    pair_families: Dict[Tuple[int, int], List[Block]] = {}
    for i, j in itertools.combinations(range(3), 2):
        found = set()
        for u4 in range(n):
            if u4 in s0:
                continue
            _, _, roots = quad_pair(spec, triple[i], triple[j], u4)
            block = frozenset(triple) | {u4} | roots
            if len(block) != 6:
                raise InternalConsistencyError(f"pair family block {sorted(block)} is short")
            found.add(tuple(sorted(block)))
        pair_families[(i, j)] = sorted(found)

    completions = set()
    excluded_sizes = []
    for u4 in range(n):
        if u4 in s0:
            continue
        excluded = s0 | forbidden_set(spec, triple + (u4,))
        excluded_sizes.append(len(excluded))
        for u5 in range(n):
            if u5 in excluded:
                continue
            u6 = completion(spec, triple + (u4, u5))
            block = frozenset(triple) | {u4, u5, u6}
            if len(block) != 6:
                raise InternalConsistencyError(f"completion {sorted(block)} repeats a point")
            completions.add(tuple(sorted(block)))

    return TripleNeighbourhood(triple, s0, extensions, pair_families,
                               sorted(completions), excluded_sizes)


# family files

def write_family(family: BlockFamily, stream: TextIO) -> None:
    """Header `q,k,ell,tag,count`, then one line of exponents per block."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow([family.q, family.k, family.ell, family.tag.value, family.count])
    for block in sorted(family.blocks):
        writer.writerow(block)


def read_family(stream: TextIO) -> BlockFamily:
    reader = csv.reader(stream)
    q, k, ell, tag, count = next(reader)
    blocks = [tuple(int(x) for x in row) for row in reader if row]
    if len(blocks) != int(count):
        raise ValueError(f"family file announces {count} blocks, holds {len(blocks)}")
    return BlockFamily(int(q), int(k), int(ell), FamilyTag(tag), blocks)
