"""Balancedness analysis of weight matrices and exact phase sets.

For the Cartan subgroup diagonal in a given product basis, the achievable
global phases of a state are controlled by the integer left-kernel lattice of
its weight matrix: the coordinate sums of the kernel vectors form an ideal
d*Z, and the phase set is either all of R (d = 0, no affine dependence) or
exactly the multiples of 2*pi/d.

Certificates, stabilizer-angle solves, representative-state construction,
telescoping and the SLOCC-inequivalence test all live here.  Angles and
phases are exact rationals in units of pi.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .exactlinalg import (
    convex_feasible,
    determinant,
    kernel_lattice,
    solve_rational,
    vector_gcd,
)
from .states import (
    SparseState,
    WeightMatrix,
    bipartition_product_check,
    support_state,
    weight_matrix,
)

# Subset scans for minimal dependent sets are exponential in the row count.
IRREDUCIBILITY_ROW_LIMIT = 16


@dataclass(frozen=True)
class PhaseSet:
    """Exact phase set of one Cartan subgroup: d = 0 means continuous,
    otherwise the phases are exactly the integer multiples of 2*pi/d."""

    d: int

    def __post_init__(self):
        if self.d < 0 or self.d % 2:
            raise ValueError("d must be 0 or a positive even integer")

    @property
    def continuous(self) -> bool:
        return self.d == 0

    @property
    def chi_min(self) -> Optional[Fraction]:
        """Smallest positive phase in units of pi, or None when continuous."""
        return None if self.d == 0 else Fraction(2, self.d)

    def contains(self, chi: Fraction) -> bool:
        """Membership of a phase (rational, units of pi) in the set."""
        if self.d == 0:
            return True
        return (chi / self.chi_min).denominator == 1


@dataclass(frozen=True)
class KernelCertificate:
    """Primitive integer dependence of the weight-matrix rows.

    kind 'affine': nonzero coefficient sum.  kind 'convex': all nonzero
    coefficients positive (zero entries mark rows outside the support S).
    """

    coefficients: tuple[int, ...]
    kind: str

    def __post_init__(self):
        if self.kind not in ("affine", "convex"):
            raise ValueError(f"unknown certificate kind {self.kind!r}")
        nonzero = [c for c in self.coefficients if c]
        if not nonzero or vector_gcd(nonzero) != 1:
            raise ValueError("certificate must be primitive and nonzero")
        if self.kind == "affine" and self.total == 0:
            raise ValueError("affine certificate needs a nonzero sum")
        if self.kind == "convex" and (any(c < 0 for c in nonzero) or self.total <= 0):
            raise ValueError("convex certificate needs positive coefficients")

    @property
    def total(self) -> int:
        return sum(self.coefficients)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coefficients) if c)


@dataclass(frozen=True)
class StabilizerSolution:
    """Exact diagonal-stabilizer angles for chosen winding numbers.

    Every row j satisfies sum_k l_jk * phis[k] = chi + 2 * winding[j],
    all in units of pi.
    """

    winding: tuple[int, ...]
    phis: tuple[Fraction, ...]
    chi: Fraction
    free_parameters: int


@dataclass(frozen=True)
class IrreducibilityResult:
    irreducible: bool
    support: tuple[int, ...]


@dataclass(frozen=True)
class ClassificationFlags:
    """Basis-relative classification; only `n_partite_entangled` is
    basis-independent.  `semistable_certified` means the state is an
    irreducible maximal-length c-state in the given basis, which certifies
    semistability (and hence topological phases including pi)."""

    n_partite_entangled: bool
    a_state: bool
    c_state: bool
    semistable_certified: bool
    single_term: bool


def _kernel_sum_gcd(rows: Sequence[Sequence[int]]) -> int:
    g = 0
    for vec in kernel_lattice(rows):
        g = gcd(g, sum(vec))
    return g


def phase_set(w: WeightMatrix) -> PhaseSet:
    """Phase set of the Cartan subgroup diagonal in the state's basis.

    d is the generator of the ideal of coordinate sums over the integer
    left-kernel lattice of the weight matrix; d is even whenever nonzero
    because each row has odd entries (+-1 each), so c.W = 0 forces
    sum(c) = 0 mod 2.
    """
    return PhaseSet(_kernel_sum_gcd(w.rows))


def affine_certificate(w: WeightMatrix) -> Optional[KernelCertificate]:
    """A primitive kernel vector with nonzero (positive) sum, if one exists."""
    basis = kernel_lattice(w.rows)
    for vec in basis:
        s = sum(vec)
        if s:
            if s < 0:
                vec = tuple(-x for x in vec)
            return KernelCertificate(vec, "affine")
    return None


def convex_certificate(w: WeightMatrix) -> Optional[KernelCertificate]:
    """Positive integer dependence witnessing 0 in the convex hull of rows."""
    lam = convex_feasible(w.rows)
    if lam is None:
        return None
    scale = lcm(*[f.denominator for f in lam]) if lam else 1
    ints = [int(f * scale) for f in lam]
    g = vector_gcd(ints)
    return KernelCertificate(tuple(x // g for x in ints), "convex")


def irreducibility(w: WeightMatrix) -> IrreducibilityResult:
    """Minimal-cardinality dependent row subset with nonzero coefficient sum.

    The state is irreducible in this basis iff that subset is all rows.
    Raises ValueError when the input is not an a-state, or when the search
    would need a subset scan over more than IRREDUCIBILITY_ROW_LIMIT rows.
    """
    basis = kernel_lattice(w.rows)
    if not any(sum(v) for v in basis):
        raise ValueError("not an a-state in this basis: no dependence with nonzero sum")
    if len(basis) == 1:
        supp = tuple(i for i, x in enumerate(basis[0]) if x)
        return IrreducibilityResult(len(supp) == w.m, supp)
    if w.m > IRREDUCIBILITY_ROW_LIMIT:
        raise ValueError(f"subset scan over {w.m} rows refused (limit {IRREDUCIBILITY_ROW_LIMIT})")
    for size in range(2, w.m + 1):
        for subset in combinations(range(w.m), size):
            if _kernel_sum_gcd([w.rows[i] for i in subset]):
                return IrreducibilityResult(size == w.m, subset)
    raise AssertionError("unreachable: a-state must contain a dependent subset")


def augmented_rows(w: WeightMatrix) -> list[list[int]]:
    """Rows of the stabilizer system matrix: weight rows with a -1 column."""
    return [list(row) + [-1] for row in w.rows]


def is_irreducible_maximal_length(w: WeightMatrix) -> bool:
    """Maximal-length test: m = n+1 rows and nonsingular augmented matrix."""
    if w.m != w.n + 1:
        return False
    return determinant(augmented_rows(w)) != 0


def positive_maximal_kernel(rows: Sequence[Sequence[int]]) -> Optional[tuple[int, ...]]:
    """Primitive all-positive kernel vector of an (n+1) x n weight matrix.

    Returns the coefficients exactly when the rows form an irreducible
    c-state of maximal length (rank n, one-dimensional kernel, all
    coefficients nonzero with a common sign); None otherwise.  The kernel is
    read off the alternating maximal minors.
    """
    m = len(rows)
    if m == 0 or m != len(rows[0]) + 1:
        return None
    rows = [list(r) for r in rows]
    minors = []
    sign = 1
    for j in range(m):
        minors.append(sign * determinant(rows[:j] + rows[j + 1:]))
        sign = -sign
    if any(x == 0 for x in minors):
        return None  # rank deficit or a reducible dependence
    if all(x > 0 for x in minors):
        vec = minors
    elif all(x < 0 for x in minors):
        vec = [-x for x in minors]
    else:
        return None
    g = vector_gcd(vec)
    return tuple(x // g for x in vec)


def solve_stabilizer(
    w: WeightMatrix, winding: Sequence[int]
) -> Optional[StabilizerSolution]:
    """Solve the eigenphase system for given winding numbers, in pi units.

    Row j demands sum_k l_jk * phi_k = chi + 2*pi*winding[j].  Returns a
    particular exact solution with chi normalized into (-pi, pi] (the winding
    numbers are shifted along to keep every row exact), plus the dimension of
    the solution space; None when the system is inconsistent.
    """
    if len(winding) != w.m:
        raise ValueError(f"winding length {len(winding)} does not match {w.m} rows")
    sol = solve_rational(augmented_rows(w), [2 * a for a in winding])
    if sol is None:
        return None
    x, free = sol
    phis, chi = x[: w.n], x[w.n]
    folded = chi % 2
    if folded > 1:
        folded -= 2
    shift = int(chi - folded) // 2
    return StabilizerSolution(
        winding=tuple(a + shift for a in winding),
        phis=tuple(phis),
        chi=folded,
        free_parameters=free,
    )


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def winding_for_phase(w: WeightMatrix, multiple: int = 1) -> Optional[tuple[int, ...]]:
    """Winding numbers whose stabilizer solution has chi = multiple * chi_min.

    None for continuous-phase inputs.  Works for any kernel dimension: the
    winding vector is an integer extension of the functional
    c -> -multiple * sum(c) / d on the kernel lattice.
    """
    basis = kernel_lattice(w.rows)
    d = 0
    for vec in basis:
        d = gcd(d, sum(vec))
    if d == 0:
        return None
    m = w.m
    r = len(basis)
    targets = [-multiple * sum(vec) // d for vec in basis]
    # Integer solutions a of K a = t are read from the right kernel of
    # [K | -t], taking a combination whose last coordinate is 1.
    stacked = [[basis[i][j] for i in range(r)] for j in range(m)]
    stacked.append([-t for t in targets])
    combo = [0] * (m + 1)
    g = 0
    for vec in kernel_lattice(stacked):
        if vec[m] == 0:
            continue
        g2, x, y = _ext_gcd(g, vec[m])
        combo = [x * c + y * v for c, v in zip(combo, vec)]
        g = g2
        if g == 1:
            break
    if g != 1:
        return None
    if combo[m] == -1:
        combo = [-c for c in combo]
    return tuple(combo[:m])


def construct_state(structure) -> SparseState:
    """Representative state of a combinatorial structure.

    Term 0 is the all-ones bitstring (carrying the derived coefficient c0);
    term j has bit k set iff position j-1 belongs to pattern k.  All
    amplitudes are 1.
    """
    multiset = tuple(structure.multiset)
    z = structure.z
    patterns = tuple(tuple(p) for p in structure.patterns)
    n = len(multiset)
    if len(patterns) != n:
        raise ValueError(f"need exactly {n} patterns, got {len(patterns)}")
    for k, pat in enumerate(patterns):
        if len(set(pat)) != len(pat) or any(not 0 <= p < n for p in pat):
            raise ValueError(f"pattern {k} is not a set of positions in 0..{n - 1}")
        if sum(multiset[p] for p in pat) != z:
            raise ValueError(f"pattern {k} does not sum to Z={z}")
    membership = [set(pat) for pat in patterns]
    bits = ["1" * n]
    for j in range(n):
        bits.append("".join("1" if j in membership[k] else "0" for k in range(n)))
    try:
        return support_state(n, bits)
    except ValueError as exc:
        raise ValueError(f"malformed structure: {exc}") from exc


def telescope(state: SparseState, new_column: Sequence[int]) -> SparseState:
    """Extend a state by one qubit whose +-1 column lies in the column span.

    The appended column leaves the kernel lattice of the weight matrix
    unchanged, so the phase set is preserved exactly.  Columns outside the
    rational column span are rejected.
    """
    w = weight_matrix(state)
    col = [int(x) for x in new_column]
    if len(col) != w.m or any(x not in (-1, 1) for x in col):
        raise ValueError(f"new column must be +-1 of length {w.m}")
    if solve_rational(w.rows, col) is None:
        raise ValueError(
            "column not in the rational column span of the weight matrix; "
            "appending it would change the phase set"
        )
    terms = tuple(
        (bits + ("1" if col[j] == 1 else "0"), amp)
        for j, (bits, amp) in enumerate(state.terms)
    )
    return SparseState(state.n + 1, terms)


def bezout_inequivalence(d1: int, d2: int, allowed: Iterable[int]) -> bool:
    """Certify that states with phases pi/d1 and pi/d2 sit in distinct
    SLOCC orbits.

    Were they equivalent, combined cyclic evolutions would realize the phase
    pi * gcd(d1, d2) / (d1 * d2) = pi / lcm(d1, d2), which must then be an
    integer multiple of some admissible minimal phase pi/d.  The certificate
    holds iff no allowed denominator is a multiple of lcm(d1, d2).
    """
    if d1 < 1 or d2 < 1:
        raise ValueError("denominators must be positive")
    combined = lcm(d1, d2)
    return all(d % combined for d in allowed)


def classify(state: SparseState) -> ClassificationFlags:
    """Classification flags; the balancedness flags refer to the
    computational basis of the input."""
    single = state.m == 1
    entangled = False
    if state.n >= 2 and not single:
        entangled = True
        for size in range(1, state.n):
            for subset in combinations(range(1, state.n), size - 1):
                part = (0,) + subset  # fix qubit 0 to visit each split once
                if bipartition_product_check(state, part):
                    entangled = False
                    break
            if not entangled:
                break
    w = weight_matrix(state)
    a_cert = affine_certificate(w)
    c_cert = convex_certificate(w) if a_cert is not None else None
    semistable = positive_maximal_kernel(w.rows) is not None
    return ClassificationFlags(
        n_partite_entangled=entangled,
        a_state=a_cert is not None,
        c_state=c_cert is not None,
        semistable_certified=semistable,
        single_term=single,
    )


def analysis_report(state: SparseState) -> dict:
    """JSON-ready analysis of one state in its computational basis."""
    w = weight_matrix(state)
    ps = phase_set(w)
    cert = convex_certificate(w) or affine_certificate(w)
    flags = classify(state)
    if ps.continuous:
        chi_min = "continuous"
    else:
        chi_min = {"num": ps.chi_min.numerator, "den": ps.chi_min.denominator}
    irreducible = False
    if flags.a_state:
        try:
            irreducible = irreducibility(w).irreducible
        except ValueError:
            irreducible = None  # row count beyond the subset-scan limit
    return {
        "n": state.n,
        "m": state.m,
        "d": ps.d,
        "chi_min": chi_min,
        "certificate": list(cert.coefficients) if cert else None,
        "certificate_kind": cert.kind if cert else None,
        "irreducible": irreducible,
        "maximal_length": is_irreducible_maximal_length(w),
        "flags": {
            "n_partite_entangled": flags.n_partite_entangled,
            "a_state": flags.a_state,
            "c_state": flags.c_state,
            "semistable_certified": flags.semistable_certified,
            "single_term": flags.single_term,
        },
        "basis": "computational",
    }
