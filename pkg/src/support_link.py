"""
Support designs of the BCH code and its dual, matched against the ESP families.

Point i is gamma^i throughout, so a codeword support and a block of
``symmetric_blocks`` are compared as plain sorted tuples.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .code_engine import LinearCodeSpec, dual_min_weight_codewords, enumerate_low_weight
from .design_engine import IncidenceStructure
from .symmetric_blocks import (
    Block, BlockFamily, enumerate_b63, enumerate_blocks_bruteforce,
    enumerate_steiner_blocks, split_b63,
)

logger = logging.getLogger(__name__)


@dataclass
class StructureMatch:
    equal: bool
    only_first: List[Block] = field(default_factory=list)
    only_second: List[Block] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            'equal': self.equal,
            'only_first': len(self.only_first),
            'only_second': len(self.only_second),
        }


@dataclass
class SupportDesignMap:
    q: int
    w: int
    structure: IncidenceStructure
    family: BlockFamily
    match: StructureMatch
    codewords: int

    @property
    def codewords_per_support(self) -> Optional[int]:
        if not self.structure.blocks:
            return None
        return self.codewords // self.structure.b

    def to_family(self) -> BlockFamily:
        """The supports in block-family form, headed like the family they match."""
        return BlockFamily(self.q, self.w, self.family.ell, self.family.tag,
                           list(self.structure.blocks))


def match_structures(s1: IncidenceStructure, s2: IncidenceStructure) -> StructureMatch:
    """Equality of two point-labelled structures, with the blocks that differ."""
    if s1.v != s2.v:
        raise ValueError(f"structures live on {s1.v} and {s2.v} points")
    first, second = s1.as_set(), s2.as_set()
    return StructureMatch(first == second, sorted(first - second), sorted(second - first))


def complement_family(family: BlockFamily) -> BlockFamily:
    points = set(range(family.q + 1))
    blocks = sorted(tuple(sorted(points.difference(b))) for b in family.blocks)
    return BlockFamily(family.q, family.q + 1 - family.k, family.ell, family.tag, blocks)


def _supports(code: LinearCodeSpec, w: int, budget: int, threads: int,
              b63: Optional[BlockFamily]) -> Tuple[List[Block], int]:
    """(supports, number of codewords on them) for weight w of the code or its dual."""
    if w in (5, 6):
        if w == 6 and b63 is not None:
            low = enumerate_low_weight(code, 6, budget, threads,
                                       candidates=b63.blocks, exact=True)
        else:
            low = enumerate_low_weight(code, w, budget, threads)
        return sorted(low.supports), low.count
    if w == code.q - 5:
        supports = dual_min_weight_codewords(code, b63, budget, threads)
        return supports, (code.q - 1) * len(supports)
    raise ValueError(f"support designs are extracted for w in 5, 6, {code.q - 5}; got {w}")


def support_design(code: LinearCodeSpec, w: int, budget: int = 10**9, threads: int = 1,
                   b63: Optional[BlockFamily] = None) -> IncidenceStructure:
    """Distinct supports of the weight-w codewords (w = q-5 means the dual code)."""
    supports, _ = _supports(code, w, budget, threads, b63)
    return IncidenceStructure(code.n, supports, w)


def expected_family(code: LinearCodeSpec, w: int, budget: int = 10**9, threads: int = 1,
                    b63: Optional[BlockFamily] = None) -> BlockFamily:
    """The ESP family the weight-w supports should coincide with."""
    spec = code.spec
    if w == 5:
        if spec.m % 2:
            return enumerate_blocks_bruteforce(spec, 5, 2, budget, threads)
        return enumerate_steiner_blocks(spec)
    if b63 is None:
        b63 = enumerate_b63(spec, budget, threads)
    if w == 6:
        return b63 if spec.m % 2 else split_b63(spec, b63)[1]
    if w == code.q - 5:
        return complement_family(b63)
    raise ValueError(f"no family is paired with weight {w}")


def build_support_map(code: LinearCodeSpec, w: int, budget: int = 10**9, threads: int = 1,
                      b63: Optional[BlockFamily] = None) -> SupportDesignMap:
    """Extract the weight-w supports and compare them with their ESP family."""
    if w != 5 and b63 is None:
        b63 = enumerate_b63(code.spec, budget, threads)
    family = expected_family(code, w, budget, threads, b63)
    supports, codewords = _supports(code, w, budget, threads, b63)
    structure = IncidenceStructure(code.n, supports, w)
    match = match_structures(structure, IncidenceStructure(code.n, list(family.blocks), w))
    logger.info(f"Weight-{w} supports at q={code.q}: {structure.b}, "
                f"{'equal to' if match.equal else 'different from'} the {family.tag.value} family")
    return SupportDesignMap(code.q, w, structure, family, match, codewords)
