"""
Arithmetic in GF(2^{2m}) with GF(q), q = 2^m, as its Frobenius-fixed subfield.

Elements are plain integers in the polynomial basis of the reduction
polynomial (bit i is the coefficient of x^i).  Scalar operations run on
log/antilog tables when 2m <= 16 and on carry-less multiplication otherwise;
bulk work goes through the ``galois`` field class built on the same
polynomial, so both paths agree element for element.

The unit circle U_{q+1} = {u : u^{q+1} = 1} is addressed by exponents of
gamma = beta^{-1}, beta = alpha^{q-1}, alpha being the class of x.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import galois
import numpy as np

from .errors import InternalConsistencyError

logger = logging.getLogger(__name__)

M_MIN = 4
M_MAX = 16
TABLE_MAX_DEGREE = 16


def as_ints(values) -> np.ndarray:
    """Raw polynomial-basis integers of a field array (or anything array-like)."""
    if isinstance(values, galois.FieldArray):
        return values.view(np.ndarray).astype(np.int64)
    return np.asarray(values, dtype=np.int64)


@dataclass(frozen=True)
class RootInfo:
    value: int
    multiplicity: int
    in_subfield: bool
    on_unit_circle: bool

    @property
    def location(self) -> str:
        return 'GF(q)' if self.in_subfield else 'GF(q^2)\\GF(q)'


class FieldSpec:
    """GF(2^{2m}) together with its subfield GF(2^m) and unit circle U_{q+1}.

    Built once per m by :func:`build_field` and read-only afterwards.
    """

    def __init__(self, m: int, reduction_poly: int, GF):
        self.m = m
        self.q = 1 << m
        self.degree = 2 * m
        self.order = 1 << self.degree
        self.group_order = self.order - 1
        self.reduction_poly = reduction_poly
        self.GF = GF
        self.alpha = 2

        self._exp: Optional[List[int]] = None
        self._log: Optional[List[int]] = None
        if self.degree <= TABLE_MAX_DEGREE:
            self._build_tables()

        self.beta = self.pow(self.alpha, self.q - 1)
        self.gamma = self.inv(self.beta)

        self.unit_values = as_ints(self.GF(self.gamma) ** np.arange(self.q + 1))
        order = np.argsort(self.unit_values, kind='stable')
        self._unit_sorted = self.unit_values[order]
        self._unit_sorted_exps = order.astype(np.int64)
        self._unit_log: Dict[int, int] = {int(v): e for e, v in enumerate(self.unit_values)}

        self._half_trace_cols = self._artin_schreier_columns()

    def _build_tables(self):
        powers = as_ints(self.GF(self.alpha) ** np.arange(self.group_order))
        exp = powers.tolist()
        self._exp = exp + exp
        log = [0] * self.order
        for i, v in enumerate(exp):
            log[v] = i
        self._log = log

    def _clmul(self, a: int, b: int) -> int:
        result = 0
        top = 1 << self.degree
        while b:
            if b & 1:
                result ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= self.reduction_poly
        return result

    # scalar arithmetic

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._clmul(a, b)

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF(2^{self.degree})")
        if self._exp is not None:
            return self._exp[(self.group_order - self._log[a]) % self.group_order]
        return self.pow(a, self.group_order - 1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError(f"0 has no inverse in GF(2^{self.degree})")
            return 0
        e %= self.group_order
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % self.group_order]
        result = 1
        while e:
            if e & 1:
                result = self._clmul(result, a)
            a = self._clmul(a, a)
            e >>= 1
        return result

    def frobenius_q(self, a: int) -> int:
        return self.pow(a, self.q)

    def sqrt(self, a: int) -> int:
        # squaring is a bijection; its inverse is x -> x^(2^(2m-1))
        return self.pow(a, 1 << (self.degree - 1))

    def is_subfield(self, a: int) -> bool:
        return self.frobenius_q(a) == a

    def trace_q2_to_q(self, a: int) -> int:
        return a ^ self.frobenius_q(a)

    def abs_trace_q_to_2(self, a: int) -> int:
        """Tr_{q/2}(a) for a in GF(q), returned as 0 or 1."""
        if not self.is_subfield(a):
            raise ValueError(f"{a:#x} is not in GF({self.q})")
        total = 0
        power = a
        for _ in range(self.m):
            total ^= power
            power = self.square(power)
        if total not in (0, 1):
            raise InternalConsistencyError(f"absolute trace of {a:#x} left GF(2)")
        return total

    # unit circle

    def is_unit(self, a: int) -> bool:
        return a != 0 and self.pow(a, self.q + 1) == 1

    def unit(self, e: int) -> int:
        return int(self.unit_values[e % (self.q + 1)])

    def unit_exp(self, a: int) -> int:
        try:
            return self._unit_log[a]
        except KeyError:
            raise ValueError(f"{a:#x} is not in U_{self.q + 1}") from None

    # bulk operations on galois arrays

    def array(self, values):
        return self.GF(as_ints(values))

    def units(self, exps):
        return self.GF(self.unit_values[np.asarray(exps, dtype=np.int64)])

    def unit_index(self, values) -> np.ndarray:
        """Exponent e with gamma^e == value for each entry, -1 off the unit circle."""
        raw = as_ints(values)
        pos = np.searchsorted(self._unit_sorted, raw)
        pos = np.minimum(pos, len(self._unit_sorted) - 1)
        hit = self._unit_sorted[pos] == raw
        return np.where(hit, self._unit_sorted_exps[pos], -1)

    def sqrt_array(self, x):
        return x ** (1 << (self.degree - 1))

    def trace_array(self, x):
        """Tr_{q^2/q} applied entrywise."""
        return x + x ** self.q

    # quadratics

    def _artin_schreier_columns(self) -> List[int]:
        """Linear right-inverse of z -> z^2 + z, one image per input bit.

        z^2 + z is GF(2)-linear with kernel {0, 1}; reducing [L | I] gives a
        particular solution z for every c in its image.  Callers check
        z^2 + z == c to detect c outside the image.
        """
        deg = self.degree
        L = np.zeros((deg, deg), dtype=np.uint8)
        for j in range(deg):
            image = self.square(1 << j) ^ (1 << j)
            for i in range(deg):
                L[i, j] = (image >> i) & 1
        augmented = galois.GF(2)(np.concatenate([L, np.eye(deg, dtype=np.uint8)], axis=1))
        R = augmented.row_reduce(ncols=deg).view(np.ndarray)
        P = np.zeros((deg, deg), dtype=np.uint8)
        for row in R:
            pivot = np.flatnonzero(row[:deg])
            if pivot.size:
                P[pivot[0], :] = row[deg:]
        return [sum(int(P[row, i]) << row for row in range(deg)) for i in range(deg)]

    def _artin_schreier(self, c: int) -> Optional[int]:
        z = 0
        bit = 0
        while c >> bit:
            if (c >> bit) & 1:
                z ^= self._half_trace_cols[bit]
            bit += 1
        return z if self.square(z) ^ z == c else None

    def _artin_schreier_array(self, c) -> Tuple[object, np.ndarray]:
        raw = as_ints(c)
        z = np.zeros_like(raw)
        for bit, column in enumerate(self._half_trace_cols):
            z ^= np.where((raw >> bit) & 1, column, 0)
        z_field = self.GF(z)
        ok = (z_field * z_field + z_field) == c
        return z_field, np.asarray(ok, dtype=bool)

    def _describe(self, value: int, multiplicity: int) -> RootInfo:
        return RootInfo(value, multiplicity, self.is_subfield(value), self.is_unit(value))

    def solve_quadratic(self, a: int, b: int) -> Tuple[RootInfo, ...]:
        """Roots of T^2 + aT + b lying in GF(q^2), each classified.

        a = 0 gives the double root sqrt(b).  Otherwise T = aZ turns the
        equation into Z^2 + Z = b/a^2, which has two roots Z, Z+1 or none.
        """
        if a == 0:
            return (self._describe(self.sqrt(b), 2),)
        c = self.div(b, self.square(a))
        z = self._artin_schreier(c)
        if z is None:
            return ()
        roots = sorted((self.mul(a, z), self.mul(a, z ^ 1)))
        return tuple(self._describe(r, 1) for r in roots)

    def solve_quadratic_array(self, A, B):
        """Vectorized solve_quadratic: (first root, second root, solvable mask)."""
        A = self.array(A)
        B = self.array(B)
        r1 = self.GF.Zeros(A.shape)
        r2 = self.GF.Zeros(A.shape)
        ok = np.ones(A.shape, dtype=bool)

        zero_a = np.asarray(A == 0, dtype=bool)
        if zero_a.any():
            s = self.sqrt_array(B[zero_a])
            r1[zero_a] = s
            r2[zero_a] = s

        nz = ~zero_a
        if nz.any():
            a = A[nz]
            z, solvable = self._artin_schreier_array(B[nz] / (a * a))
            r1[nz] = a * z
            r2[nz] = a * (z + self.GF(1))
            ok[nz] = solvable
        return r1, r2, ok

    def solve_quadratic_unit(self, a: int, b: int) -> frozenset:
        """Exponents of the roots of T^2 + aT + b on U_{q+1}.

        With u' a root of T^2 + (a/sqrt(b))T + 1 the roots are sqrt(b)u' and
        sqrt(b)u'^q; they sit on the unit circle for m even and never for m odd.
        """
        if a == 0 or b == 0:
            raise ValueError("T^2 + aT + b needs a != 0 and b != 0 here")
        root_b = self.sqrt(b)
        found = set()
        for root in self.solve_quadratic(self.div(a, root_b), 1):
            candidate = self.mul(root_b, root.value)
            if self.is_unit(candidate):
                found.add(self.unit_exp(candidate))
        return frozenset(found)

    def self_check(self):
        for p in galois.factors(self.group_order)[0]:
            if self.pow(self.alpha, self.group_order // p) == 1:
                raise InternalConsistencyError(
                    f"reduction polynomial {self.reduction_poly:#x} is not primitive"
                )
        if self.pow(self.gamma, self.q + 1) != 1:
            raise InternalConsistencyError("gamma is not on the unit circle")
        for p in galois.factors(self.q + 1)[0]:
            if self.pow(self.gamma, (self.q + 1) // p) == 1:
                raise InternalConsistencyError(f"gamma does not generate U_{self.q + 1}")
        if len(self._unit_log) != self.q + 1:
            raise InternalConsistencyError("unit circle table has repeated values")


@lru_cache(maxsize=None)
def build_field(m: int) -> FieldSpec:
    """The field for q = 2^m on the least primitive polynomial of degree 2m."""
    if not M_MIN <= m <= M_MAX:
        raise ValueError(f"m must lie in [{M_MIN}, {M_MAX}], got {m}")
    poly = galois.primitive_poly(2, 2 * m, method='min')
    GF = galois.GF(2 ** (2 * m), irreducible_poly=poly)
    spec = FieldSpec(m, int(poly), GF)
    spec.self_check()
    logger.debug(f"Built GF(2^{2 * m}) on {int(poly):#x}")
    return spec


def field_record(spec: FieldSpec) -> Dict[str, object]:
    return {
        'm': spec.m,
        'q': spec.q,
        'reduction_poly': f"{spec.reduction_poly:#x}",
        'alpha': f"{spec.alpha:#x}",
        'gamma': f"{spec.gamma:#x}",
    }


def parse_field_record(record: Dict[str, object]) -> FieldSpec:
    spec = build_field(int(record['m']))
    if int(str(record['reduction_poly']), 16) != spec.reduction_poly:
        raise ValueError(
            f"record pins polynomial {record['reduction_poly']}, "
            f"this build uses {spec.reduction_poly:#x}"
        )
    return spec
