"""
Versioned table of expected values, each tagged with where it comes from.

STATED values are asserted outright; DERIVED values
follow from stated formulas or counts by arithmetic.  Entries are looked up
by claim id and q; ``applies`` says for which q a claim is made at all.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Callable, Dict, List, Optional

EXPECTATIONS_VERSION = '2'


class Provenance(str, Enum):
    STATED = 'STATED'
    DERIVED = 'DERIVED'


@dataclass(frozen=True)
class Expectation:
    claim_id: str
    provenance: Provenance
    formula: str
    value: Callable[[int], object]
    applies: Callable[[int], bool]


def _exact(value: Fraction) -> int:
    if value.denominator != 1:
        raise ValueError(f"{value} is not an integer")
    return int(value)


def _even(q: int) -> bool:
    return q.bit_length() % 2 == 1


def _odd(q: int) -> bool:
    return not _even(q)


def _any(q: int) -> bool:
    return True


def _only(*qs: int) -> Callable[[int], bool]:
    return lambda q: q in qs


def steiner_count(q: int) -> int:
    return _exact(Fraction(comb(q + 1, 3), 10))


def b63_count(q: int) -> int:
    if _even(q):
        return _exact(Fraction((q - 4) ** 2, 120) * comb(q + 1, 3))
    return _exact(Fraction(q - 8, 30) * comb(q + 1, 4))


def b0_count(q: int) -> int:
    return (q - 4) * steiner_count(q)


DUAL_DISTRIBUTIONS = {
    16: {0: 1, 11: 12240, 12: 35700, 13: 244800, 14: 1203600, 15: 3292560,
         16: 6398715, 17: 5589600},
    32: {0: 1, 27: 1014816, 28: 1268520, 29: 20296320, 30: 64609952, 31: 210132384,
         32: 399584823, 33: 376835008},
}

PRIMAL_DISTRIBUTIONS = {
    16: {0: 1, 5: 1020, 7: 224400, 8: 3730650, 9: 55370700, 10: 669519840,
         11: 6378704640, 12: 47857084200, 13: 276083558100, 14: 1183224112800,
         15: 3549668972400, 16: 6655630071165, 17: 5872614694500},
}


def _as_list(table: Dict[int, int], q: int) -> List[int]:
    return [table.get(i, 0) for i in range(q + 2)]


EXPECTATIONS: List[Expectation] = [
    Expectation('steiner.count', Provenance.DERIVED, 'C(q+1,3)/10', steiner_count, _even),
    Expectation('steiner.lambda', Provenance.STATED, '3-(q+1,5,1)', lambda q: 1, _even),
    Expectation('steiner.generations', Provenance.DERIVED, 'C(5,3) triples per block',
                lambda q: 10, _even),
    Expectation('b63.count', Provenance.DERIVED,
                'even m: (q-4)^2/120 C(q+1,3); odd m: (q-8)/30 C(q+1,4)', b63_count, _any),
    Expectation('b63.lambda', Provenance.DERIVED,
                'even m, t=3: (q-4)^2/6; odd m, t=4: (q-8)/2',
                lambda q: _exact(Fraction((q - 4) ** 2, 6)) if _even(q) else (q - 8) // 2, _any),
    Expectation('b63.lambda.stated', Provenance.STATED, 'odd m, t=4: (q-8)/4',
                lambda q: (q - 8) // 4, _odd),
    Expectation('b63.example', Provenance.STATED, '4-(33,6,12)', lambda q: 12, _only(32)),
    Expectation('b0.count', Provenance.DERIVED, '(q-4) C(q+1,3)/10', b0_count, _even),
    Expectation('b0.lambda', Provenance.DERIVED, 't=3: 2(q-4)', lambda q: 2 * (q - 4), _even),
    Expectation('b1.count', Provenance.DERIVED, '|B(6,3)| - |B0|',
                lambda q: b63_count(q) - b0_count(q), _even),
    Expectation('b1.lambda', Provenance.DERIVED, 't=3: (q-4)(q-16)/6',
                lambda q: _exact(Fraction((q - 4) * (q - 16), 6)), _even),
    Expectation('triple.blocks', Provenance.DERIVED, '(q-4)^2/6 blocks through a triple',
                lambda q: _exact(Fraction((q - 4) ** 2, 6)), _even),
    Expectation('triple.excluded', Provenance.DERIVED, '|S0 u S1| = 11', lambda q: 11, _even),
    Expectation('code.dimension', Provenance.STATED, 'q-5', lambda q: q - 5, _any),
    Expectation('code.d', Provenance.STATED, '6 for odd m, 5 for even m',
                lambda q: 5 if _even(q) else 6, _any),
    Expectation('code.A3', Provenance.STATED, 'BCH bound: d >= 4', lambda q: 0, _any),
    Expectation('code.A4', Provenance.STATED, 'rank(M_4) = 4', lambda q: 0, _any),
    Expectation('code.A5', Provenance.DERIVED, 'even m: (q-1) C(q+1,3)/10; odd m: 0',
                lambda q: (q - 1) * steiner_count(q) if _even(q) else 0, _any),
    Expectation('code.A6', Provenance.DERIVED, 'odd m: (q-1)|B(6,3)|; even m: (q-1)|B1|',
                lambda q: (q - 1) * (b63_count(q) - b0_count(q) if _even(q) else b63_count(q)),
                _any),
    Expectation('code.class', Provenance.STATED, 'NMDS for odd m, neither for even m',
                lambda q: 'neither' if _even(q) else 'NMDS', _any),
    Expectation('dual.d', Provenance.STATED, 'q-5', lambda q: q - 5, _any),
    Expectation('dual.min_count', Provenance.DERIVED, '(q-1) |B(6,3)|',
                lambda q: (q - 1) * b63_count(q), _any),
    Expectation('dual.lambda', Provenance.DERIVED,
                'complement of the B(6,3) design: lambda C(q-5,t)/C(6,t)',
                lambda q: (_exact(Fraction((q - 4) ** 2, 120) * comb(q - 5, 3)) if _even(q)
                           else _exact(Fraction(q - 8, 2) * comb(q - 5, 4) / 15)), _any),
    Expectation('dual.lambda.stated', Provenance.STATED, 'odd m, t=4: (q-8)/30 C(q-5,4)',
                lambda q: _exact(Fraction(q - 8, 30) * comb(q - 5, 4)), _odd),
    Expectation('dual.example', Provenance.STATED, '4-(33,27,14040)', lambda q: 14040, _only(32)),
    Expectation('dual.distribution', Provenance.STATED, 'dual weight enumerator',
                lambda q: _as_list(DUAL_DISTRIBUTIONS[q], q), _only(*DUAL_DISTRIBUTIONS)),
    Expectation('primal.distribution', Provenance.STATED, 'weight enumerator of the code',
                lambda q: _as_list(PRIMAL_DISTRIBUTIONS[q], q), _only(*PRIMAL_DISTRIBUTIONS)),
    Expectation('am.hypothesis', Provenance.DERIVED,
                'even m, t=3 and odd m, t=4: s > d - t', lambda q: False, _only(16, 32)),
]

_BY_ID: Dict[str, Expectation] = {e.claim_id: e for e in EXPECTATIONS}


def lookup(claim_id: str) -> Expectation:
    return _BY_ID[claim_id]


def expected_value(claim_id: str, q: int) -> Optional[object]:
    """The expected value of a claim at q, or None if no claim is made there."""
    entry = _BY_ID.get(claim_id)
    if entry is None or not entry.applies(q):
        return None
    return entry.value(q)
