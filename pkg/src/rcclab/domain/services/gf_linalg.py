"""Exact linear algebra and polynomial arithmetic over prime fields GF(p)."""

import random
from collections.abc import Iterator, Sequence
from functools import lru_cache
from itertools import product
from math import lcm

import numpy as np
from loguru import logger
from sympy import Matrix, factorint
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_degree,
    gf_div,
    gf_irreducible_p,
    gf_lcm,
    gf_lshift,
    gf_monic,
    gf_mul,
    gf_pow_mod,
    gf_rem,
)

from rcclab.domain.errors import (
    BoundExceededError,
    DegreeBoundError,
    InvariantViolationError,
    ModulusMismatchError,
    NotMonicError,
    PreconditionError,
    SingularMatrixError,
    ZeroConstantTermError,
    ZeroPolynomialError,
)
from rcclab.domain.models.config import DEFAULT_CONFIG, AnalysisConfig
from rcclab.domain.models.gf import FrobeniusDecomposition, GFMatrix, GFPoly, IntMatrix
from rcclab.domain.models.permutation import point_cycle_lengths

type IntVector = np.ndarray[tuple[int], np.dtype[np.int64]]
type Vector = tuple[int, ...]

_X = [1, 0]
_ONE = [1]


# --- polynomials -----------------------------------------------------------


def _same_field(*polys: GFPoly) -> int:
    moduli = {f.p for f in polys}
    if len(moduli) != 1:
        raise ModulusMismatchError(f"polynomials over different fields: {sorted(moduli)}")
    return polys[0].p


def poly_mul(a: GFPoly, b: GFPoly) -> GFPoly:
    p = _same_field(a, b)
    return GFPoly.from_gf(p, gf_mul(a.to_gf(), b.to_gf(), p, ZZ))


def poly_divmod(a: GFPoly, b: GFPoly) -> tuple[GFPoly, GFPoly]:
    p = _same_field(a, b)
    if b.is_zero:
        raise ZeroPolynomialError("division by the zero polynomial")
    quotient, remainder = gf_div(a.to_gf(), b.to_gf(), p, ZZ)
    return GFPoly.from_gf(p, quotient), GFPoly.from_gf(p, remainder)


def poly_mul_mod(a: GFPoly, b: GFPoly, m: GFPoly) -> GFPoly:
    """a*b reduced modulo m."""
    p = _same_field(a, b, m)
    if m.is_zero:
        raise ZeroPolynomialError("modulus must be a nonzero polynomial")
    return GFPoly.from_gf(p, gf_rem(gf_mul(a.to_gf(), b.to_gf(), p, ZZ), m.to_gf(), p, ZZ))


def poly_parity(f: GFPoly) -> int:
    """Coefficient sum mod 2, i.e. f(1) over GF(2)."""
    if f.p != 2:
        raise PreconditionError("parity is only defined over GF(2)")
    return sum(f.coeffs) % 2


@lru_cache(maxsize=64)
def irreducible_polynomials(p: int, degree: int) -> tuple[GFPoly, ...]:
    """All monic irreducibles of the given degree, in lexicographic coefficient order."""
    found = []
    for lower in product(range(p), repeat=degree):
        candidate = [1, *reversed(lower)]
        if degree == 1 or (lower[0] != 0 and gf_irreducible_p(candidate, p, ZZ)):
            found.append(GFPoly.from_gf(p, candidate))
    return tuple(found)


def poly_factor(f: GFPoly, config: AnalysisConfig = DEFAULT_CONFIG) -> list[tuple[GFPoly, int]]:
    """Factor into monic irreducibles by trial division.

    Factors are sorted by degree, then by coefficients.
    """
    if f.is_zero:
        raise ZeroPolynomialError("cannot factor the zero polynomial")
    p = f.p
    _, remaining = gf_monic(f.to_gf(), p, ZZ)
    trial_divisors = sum(p**d for d in range(1, f.degree // 2 + 1))
    if trial_divisors > config.max_trial_divisors:
        raise DegreeBoundError(
            f"degree bound exceeded: factoring degree {f.degree} over GF({p}) needs "
            f"{trial_divisors} trial divisors (limit {config.max_trial_divisors})"
        )

    factors: list[tuple[GFPoly, int]] = []
    degree = 1
    while 2 * degree <= gf_degree(remaining):
        for q in irreducible_polynomials(p, degree):
            exponent = 0
            while True:
                quotient, rest = gf_div(remaining, q.to_gf(), p, ZZ)
                if rest:
                    break
                remaining = quotient
                exponent += 1
            if exponent:
                factors.append((q, exponent))
        degree += 1
    if gf_degree(remaining) >= 1:
        factors.append((GFPoly.from_gf(p, remaining), 1))
    return sorted(factors, key=lambda item: (item[0].degree, item[0].coeffs))


def _require_unit_x(f: GFPoly) -> None:
    if f.is_zero:
        raise ZeroPolynomialError("the order of the zero polynomial is undefined")
    if not f.is_monic:
        raise NotMonicError(f"polynomial {f} is not monic")
    if f.constant_term == 0:
        raise ZeroConstantTermError(f"X is not a unit modulo {f}")


def irreducible_order(q: GFPoly) -> int:
    """Order of X modulo a monic irreducible with nonzero constant term."""
    p = q.p
    modulus = q.to_gf()
    order = p**q.degree - 1
    for prime in factorint(order):
        while order % prime == 0 and gf_pow_mod(_X, order // prime, modulus, p, ZZ) == _ONE:
            order //= prime
    return order


def poly_order_by_factorization(f: GFPoly, config: AnalysisConfig = DEFAULT_CONFIG) -> int:
    """lcm over factors q^e of ord(q) * p^ceil(log_p e)."""
    _require_unit_x(f)
    result = 1
    for q, exponent in poly_factor(f, config):
        shift = 0
        while f.p**shift < exponent:
            shift += 1
        result = lcm(result, irreducible_order(q) * f.p**shift)
    return result


def poly_order_by_iteration(f: GFPoly) -> int:
    """Multiply by X until reaching 1."""
    _require_unit_x(f)
    if f.degree == 0:
        return 1
    p, modulus = f.p, f.to_gf()
    limit = p**f.degree
    current = gf_rem(_X, modulus, p, ZZ)
    steps = 1
    while current != _ONE:
        current = gf_rem(gf_lshift(current, 1, ZZ), modulus, p, ZZ)
        steps += 1
        if steps > limit:
            raise InvariantViolationError(f"X has no finite order modulo {f}")
    return steps


def poly_order(f: GFPoly, config: AnalysisConfig = DEFAULT_CONFIG) -> int:
    """Multiplicative order of X in GF(p)[X]/(f).

    Small degrees are cross-checked by direct iteration.
    """
    order = poly_order_by_factorization(f, config)
    if f.degree <= config.iteration_degree_bound:
        direct = poly_order_by_iteration(f)
        if direct != order:
            raise InvariantViolationError(
                f"order of {f}: factorization gives {order}, iteration gives {direct}"
            )
    return order


# --- matrices --------------------------------------------------------------


def _matmul(a: IntMatrix, b: IntMatrix, p: int) -> IntMatrix:
    inner = a.shape[-1]
    if inner * (p - 1) ** 2 < 2**62:
        return np.asarray((a @ b) % p, dtype=np.int64)
    wide = np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)
    return np.asarray(wide % p, dtype=np.int64)


def _matvec(a: IntMatrix, v: IntVector, p: int) -> IntVector:
    return _matmul(a, v.reshape(-1, 1), p).reshape(-1)


def row_reduce(matrix: IntMatrix, p: int) -> tuple[IntMatrix, list[int]]:
    """Reduced row echelon form mod p and its pivot columns."""
    m = np.array(matrix, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(m[r:, c])[0]
        if nonzero.size == 0:
            continue
        k = r + int(nonzero[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        for i in np.nonzero(m[:, c])[0]:
            if i != r:
                m[i] = (m[i] - int(m[i, c]) * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(matrix: IntMatrix, p: int) -> int:
    if matrix.size == 0:
        return 0
    return len(row_reduce(matrix, p)[1])


def is_invertible(a: GFMatrix) -> bool:
    return rank(a.array, a.p) == a.n


def matrix_inverse(a: GFMatrix) -> GFMatrix:
    augmented = np.hstack([a.array, np.eye(a.n, dtype=np.int64)])
    reduced, pivots = row_reduce(augmented, a.p)
    if pivots[: a.n] != list(range(a.n)):
        raise SingularMatrixError("matrix is singular")
    return GFMatrix.from_array(a.p, reduced[:, a.n :])


def matrix_mul(a: GFMatrix, b: GFMatrix) -> GFMatrix:
    if a.p != b.p:
        raise ModulusMismatchError(f"matrices over GF({a.p}) and GF({b.p})")
    return GFMatrix.from_array(a.p, _matmul(a.array, b.array, a.p))


def _solve(columns: list[IntVector], target: IntVector, p: int) -> list[int] | None:
    """Coefficients expressing target in independent columns, or None."""
    if not columns:
        return [] if not np.any(target % p) else None
    k = len(columns)
    reduced, pivots = row_reduce(np.column_stack([*columns, target]), p)
    if k in pivots:
        return None
    coefficients = [0] * k
    for row, col in enumerate(pivots):
        coefficients[col] = int(reduced[row, k])
    return coefficients


def companion_matrix(f: GFPoly) -> GFMatrix:
    """Ones on the subdiagonal, -a_0..-a_{d-1} in the last column."""
    if not f.is_monic or f.degree < 1:
        raise NotMonicError(f"companion matrices need a monic polynomial of positive degree, got {f}")
    d = f.degree
    block = np.zeros((d, d), dtype=np.int64)
    for i in range(1, d):
        block[i, i - 1] = 1
    for i in range(d):
        block[i, d - 1] = -f.coeffs[i] % f.p
    return GFMatrix.from_array(f.p, block)


def block_diagonal(blocks: Sequence[GFMatrix]) -> GFMatrix:
    p = blocks[0].p
    n = sum(b.n for b in blocks)
    result = np.zeros((n, n), dtype=np.int64)
    offset = 0
    for b in blocks:
        result[offset : offset + b.n, offset : offset + b.n] = b.array
        offset += b.n
    return GFMatrix.from_array(p, result)


def charpoly(a: GFMatrix) -> GFPoly:
    """det(X*I - A) reduced mod p."""
    coefficients = Matrix(a.entries).charpoly().all_coeffs()
    return GFPoly.from_gf(a.p, [int(c) for c in coefficients])


def _apply_poly(f: GFPoly, a: IntMatrix, v: IntVector, p: int) -> IntVector:
    result = np.zeros_like(v)
    current = v
    for c in f.coeffs:
        result = (result + c * current) % p
        current = _matvec(a, current, p)
    return result


def _krylov(a: IntMatrix, v: IntVector, length: int, p: int) -> list[IntVector]:
    vectors = [v]
    for _ in range(length - 1):
        vectors.append(_matvec(a, vectors[-1], p))
    return vectors


def _conductor(a: IntMatrix, p: int, basis: list[IntVector], u: IntVector) -> GFPoly:
    """Monic f of least degree with f(A)u in span(basis)."""
    krylov: list[IntVector] = []
    current = u % p
    while True:
        coefficients = _solve(basis + krylov, current, p)
        if coefficients is not None:
            tail = coefficients[len(basis) :]
            return GFPoly.from_coeffs(p, [-c for c in tail] + [1])
        krylov.append(current)
        current = _matvec(a, current, p)


def _quotient_minimal_polynomial(a: IntMatrix, p: int, basis: list[IntVector]) -> GFPoly:
    result = [1]
    for e in np.eye(a.shape[0], dtype=np.int64):
        result = gf_lcm(result, _conductor(a, p, basis, e).to_gf(), p, ZZ)
    return GFPoly.from_gf(p, result)


def _candidate_vectors(n: int, p: int, rng: random.Random, bound: int) -> Iterator[IntVector]:
    yield from np.eye(n, dtype=np.int64)
    for _ in range(64 * n):
        yield np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
    if p**n <= bound:
        for coords in product(range(p), repeat=n):
            yield np.array(coords, dtype=np.int64)


def _split_off(
    a: IntMatrix,
    p: int,
    blocks: list[tuple[IntVector, GFPoly]],
    basis: list[IntVector],
    u: IntVector,
    conductor: GFPoly,
) -> IntVector:
    """Shift u by an element of span(basis) so that conductor(A)u = 0."""
    if not blocks:
        return u
    coordinates = _solve(basis, _apply_poly(conductor, a, u, p), p)
    if coordinates is None:
        raise InvariantViolationError("conductor image left the invariant subspace")
    correction = np.zeros_like(u)
    offset = 0
    for v, f in blocks:
        h = GFPoly.from_coeffs(p, coordinates[offset : offset + f.degree])
        offset += f.degree
        quotient, remainder = poly_divmod(h, conductor)
        if not remainder.is_zero:
            raise InvariantViolationError("conductor does not divide a block coordinate")
        correction = (correction + _apply_poly(quotient, a, v, p)) % p
    return np.asarray((u - correction) % p, dtype=np.int64)


def frobenius_form(
    a: GFMatrix, config: AnalysisConfig = DEFAULT_CONFIG
) -> FrobeniusDecomposition:
    """Invariant-factor (rational canonical) form with its change of basis.

    Cyclic blocks are split off largest first: a vector whose conductor into the
    blocks found so far is the minimal polynomial of the quotient is shifted into a
    complement, and its Krylov basis becomes the next block.
    """
    p, n = a.p, a.n
    matrix = a.array
    rng = random.Random(config.seed)
    blocks: list[tuple[IntVector, GFPoly]] = []
    basis: list[IntVector] = []
    while len(basis) < n:
        target = _quotient_minimal_polynomial(matrix, p, basis)
        for candidate in _candidate_vectors(n, p, rng, config.enumeration_bound):
            if _conductor(matrix, p, basis, candidate).degree == target.degree:
                break
        else:
            raise InvariantViolationError(f"no vector attains conductor {target}")
        u = _split_off(matrix, p, blocks, basis, candidate, target)
        blocks.append((u, target))
        basis.extend(_krylov(matrix, u, target.degree, p))

    blocks.reverse()
    columns = [v for u, f in blocks for v in _krylov(matrix, u, f.degree, p)]
    change = GFMatrix.from_array(p, np.column_stack(columns))
    factors = tuple(f for _, f in blocks)
    conjugated = matrix_mul(matrix_mul(matrix_inverse(change), a), change)
    if conjugated != block_diagonal([companion_matrix(f) for f in factors]):
        raise InvariantViolationError("conjugated matrix is not in Frobenius normal form")
    logger.debug(f"Frobenius form over GF({p}), n={n}: {[str(f) for f in factors]}")
    return FrobeniusDecomposition(basis_change=change, invariant_factors=factors)


def matrix_order(a: GFMatrix, config: AnalysisConfig = DEFAULT_CONFIG) -> int:
    """lcm of the orders of the invariant factors."""
    if not is_invertible(a):
        raise SingularMatrixError("only invertible matrices have a multiplicative order")
    decomposition = frobenius_form(a, config)
    return lcm(*(poly_order(f, config) for f in decomposition.invariant_factors))


def matrix_order_by_powering(a: GFMatrix) -> int:
    if not is_invertible(a):
        raise SingularMatrixError("only invertible matrices have a multiplicative order")
    identity = np.eye(a.n, dtype=np.int64)
    current = a.array
    steps = 1
    while not np.array_equal(current, identity):
        current = _matmul(current, a.array, a.p)
        steps += 1
        if steps > a.p**a.n:
            raise InvariantViolationError("matrix powers never returned to the identity")
    return steps


# --- vectors ---------------------------------------------------------------


def all_vectors(p: int, n: int) -> IntMatrix:
    """Every vector of GF(p)^n, in lexicographic order of coordinates."""
    return np.array(list(product(range(p), repeat=n)), dtype=np.int64).reshape(p**n, n)


def vector_cycle_lengths(
    a: GFMatrix, config: AnalysisConfig = DEFAULT_CONFIG
) -> tuple[IntMatrix, list[int]]:
    """All vectors and the length of their cycle under v -> Av."""
    size = a.p**a.n
    if size > config.enumeration_bound:
        raise BoundExceededError("enumeration_bound", config.enumeration_bound, size)
    vectors = all_vectors(a.p, a.n)
    images = _matmul(vectors, a.array.T, a.p)
    weights = a.p ** np.arange(a.n - 1, -1, -1, dtype=np.int64)
    return vectors, point_cycle_lengths(images @ weights)


def regular_basis(a: GFMatrix, config: AnalysisConfig = DEFAULT_CONFIG) -> list[Vector]:
    """A basis of GF(p)^n made of vectors whose cycle length is ord(A).

    Regular vectors span the whole space, so greedy extraction in enumeration
    order always completes.
    """
    if not is_invertible(a):
        raise SingularMatrixError("regular bases exist only for invertible matrices")
    vectors, lengths = vector_cycle_lengths(a, config)
    order = matrix_order(a, config)
    if lcm(*lengths) != order:
        raise InvariantViolationError(f"orbit lcm {lcm(*lengths)} differs from order {order}")

    chosen: list[IntVector] = []
    for vector, length in zip(vectors, lengths, strict=True):
        if length != order:
            continue
        if rank(np.vstack([*chosen, vector]), a.p) > len(chosen):
            chosen.append(vector)
            if len(chosen) == a.n:
                break
    if len(chosen) < a.n:
        raise InvariantViolationError("regular vectors do not span the space")
    return [tuple(int(x) for x in v) for v in chosen]


def random_invertible_matrix(p: int, n: int, rng: random.Random) -> GFMatrix:
    while True:
        candidate = GFMatrix.from_rows(p, [[rng.randrange(p) for _ in range(n)] for _ in range(n)])
        if is_invertible(candidate):
            return candidate


def random_matrix(p: int, n: int, rng: random.Random) -> GFMatrix:
    return GFMatrix.from_rows(p, [[rng.randrange(p) for _ in range(n)] for _ in range(n)])


def general_linear_group(p: int, n: int) -> Iterator[GFMatrix]:
    """Every invertible n x n matrix, in lexicographic order of entries."""
    for flat in product(range(p), repeat=n * n):
        square = np.array(flat, dtype=np.int64).reshape(n, n)
        if rank(square, p) == n:
            yield GFMatrix.from_array(p, square)
