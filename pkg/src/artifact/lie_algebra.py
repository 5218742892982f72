"""Compact matrix Lie algebras with invariant inner products.

An algebra is held as a :class:`LieAlgebraSpec`: a basis of anti-Hermitian
matrices, real structure constants, and a positive definite ad-invariant
Gram matrix.  Coefficient vectors may be complex (sections of the
complexified algebra appear throughout the curvature computations); the
inner product extends sesquilinearly through coefficient conjugation,
never through entrywise matrix conjugation.

Two bracket routes are kept deliberately separate: the structure-constant
contraction and the matrix commutator pulled back through the basis.
Agreement of the two is part of the package self-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LieAlgebraSpec",
    "LieElement",
    "algebra_from_basis",
    "make_so",
    "make_su",
    "make_abelian",
    "killing_matrix",
    "bracket_vec",
    "bracket_via_matrices",
    "subalgebra_spec",
    "matrix_of",
    "coeffs_of",
    "inner_vec",
    "norm_vec",
    "ad_matrix",
    "bracket_norm_check",
    "BRACKET_NORM_BOUND",
]

# norm bound for commutators: ||[a, b]|| <= sqrt(2) ||a|| ||b||
BRACKET_NORM_BOUND = float(np.sqrt(2.0))

_CLOSURE_TOLERANCE = 1e-10
_INVARIANCE_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class LieAlgebraSpec:
    """A compact matrix Lie algebra with a fixed basis.

    ``basis`` has shape (d, n, n); ``structure[i, j, k]`` is the
    coefficient of the k-th basis element in [b_i, b_j]; ``gram`` is the
    Gram matrix of the invariant inner product in this basis.
    """

    name: str
    basis: np.ndarray
    structure: np.ndarray
    gram: np.ndarray
    inner_mode: str
    coeff_pinv: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def matrix_dim(self) -> int:
        return self.basis.shape[1]

    def element(self, vector) -> "LieElement":
        vec = np.asarray(vector, dtype=complex)
        if vec.shape != (self.dim,):
            raise ValueError(
                f"expected a coefficient vector of length {self.dim}"
            )
        return LieElement(self, vec)

    def basis_element(self, index: int) -> "LieElement":
        vec = np.zeros(self.dim, dtype=complex)
        vec[index] = 1.0
        return LieElement(self, vec)


def killing_matrix(structure: np.ndarray) -> np.ndarray:
    """Gram matrix of the Killing form, traced through ad matrices."""
    return np.einsum("ilk,jkl->ij", structure, structure)


def _trace_gram(basis: np.ndarray) -> np.ndarray:
    gram = -np.einsum("iab,jba->ij", basis, basis)
    residual = float(np.max(np.abs(gram.imag)))
    if residual > 1e-12:
        raise ValueError("trace Gram matrix has a complex part")
    return gram.real


def algebra_from_basis(
    name: str, basis, inner: str = "killing"
) -> LieAlgebraSpec:
    """Build a :class:`LieAlgebraSpec` from a basis of matrices.

    The basis must be linearly independent and closed under commutators.
    ``inner`` selects the invariant inner product: ``"killing"`` uses the
    negative Killing form and falls back to the negative trace form when
    the Killing form is degenerate (abelian algebras), ``"trace"`` forces
    the negative trace form.
    """
    mats = np.asarray(basis, dtype=complex)
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise ValueError("basis must be a (d, n, n) array of matrices")
    d = mats.shape[0]
    flat = mats.reshape(d, -1)
    overlap = flat @ flat.conj().T
    diag = np.real(np.diag(overlap)).copy()
    if np.array_equal(overlap, np.diag(np.diag(overlap))) and np.all(
        diag > 0.0
    ):
        # orthogonal basis: the coefficient extraction has an exact
        # closed form, which keeps integer structure constants exact
        pinv = flat.conj() / diag[:, None]
    else:
        pinv = np.linalg.pinv(flat.T)
    if np.linalg.matrix_rank(flat) < d:
        raise ValueError("basis matrices are linearly dependent")

    structure = np.zeros((d, d, d))
    for i in range(d):
        for j in range(i + 1, d):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            coeff = pinv @ comm.reshape(-1)
            resid = float(
                np.linalg.norm(
                    np.einsum("k,kab->ab", coeff, mats) - comm
                )
            )
            scale = max(float(np.linalg.norm(comm)), 1.0)
            if resid > _CLOSURE_TOLERANCE * scale:
                raise ValueError(
                    f"basis is not closed under commutators "
                    f"(pair {i},{j}, residual {resid})"
                )
            if float(np.max(np.abs(coeff.imag))) > _CLOSURE_TOLERANCE:
                raise ValueError(
                    f"structure constants are not real (pair {i},{j})"
                )
            structure[i, j] = coeff.real
            structure[j, i] = -coeff.real

    mode = inner
    if inner == "killing":
        gram = -killing_matrix(structure)
        eigs = np.linalg.eigvalsh(gram)
        if eigs.min() <= 1e-10 * max(float(eigs.max()), 1.0):
            gram = _trace_gram(mats)
            mode = "trace"
    elif inner == "trace":
        gram = _trace_gram(mats)
    else:
        raise ValueError(f"unknown inner mode {inner!r}")

    eigs = np.linalg.eigvalsh(gram)
    if eigs.min() <= 0:
        raise ValueError("inner product Gram matrix is not positive definite")

    # ad-invariance of the inner product: <[a,b],c> + <b,[a,c]> = 0
    invariance = np.einsum("ijl,lk->ijk", structure, gram)
    residual = float(np.max(np.abs(invariance + invariance.transpose(0, 2, 1))))
    if residual > _INVARIANCE_TOLERANCE:
        raise ValueError(
            f"inner product is not ad-invariant (residual {residual})"
        )

    spec = LieAlgebraSpec(
        name=name,
        basis=mats,
        structure=structure,
        gram=gram,
        inner_mode=mode,
        coeff_pinv=pinv,
    )
    for arr in (spec.basis, spec.structure, spec.gram, spec.coeff_pinv):
        arr.setflags(write=False)
    return spec


def make_so(n: int, inner: str = "killing") -> LieAlgebraSpec:
    """Real antisymmetric n x n matrices, basis E_ij - E_ji for i < j.

    For n = 5 the sign of the final generator is flipped, so that the
    triple of generators acting in the last three coordinates closes
    cyclically with positive structure constants.
    """
    if n < 2:
        raise ValueError("so(n) needs n >= 2")
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n))
            m[i, j] = 1.0
            m[j, i] = -1.0
            mats.append(m)
    if n == 5:
        mats[-1] = -mats[-1]
    return algebra_from_basis(f"so({n})", np.array(mats), inner=inner)


def make_su(n: int, inner: str = "killing") -> LieAlgebraSpec:
    """Traceless anti-Hermitian n x n matrices.

    Basis: real antisymmetric pairs E_ij - E_ji (i < j), imaginary
    symmetric pairs i (E_ij + E_ji) (i < j), then the imaginary diagonal
    differences i (E_ll - E_{l+1, l+1}).
    """
    if n < 2:
        raise ValueError("su(n) needs n >= 2")
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = 1.0
            m[j, i] = -1.0
            mats.append(m)
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = 1j
            m[j, i] = 1j
            mats.append(m)
    for l in range(n - 1):
        m = np.zeros((n, n), dtype=complex)
        m[l, l] = 1j
        m[l + 1, l + 1] = -1j
        mats.append(m)
    return algebra_from_basis(f"su({n})", np.array(mats), inner=inner)


def make_abelian(d: int) -> LieAlgebraSpec:
    """Abelian algebra of d imaginary diagonal matrices."""
    if d < 1:
        raise ValueError("need at least one generator")
    mats = np.zeros((d, d, d), dtype=complex)
    for k in range(d):
        mats[k, k, k] = 1j
    return algebra_from_basis(f"abelian({d})", mats)


def subalgebra_spec(
    parent: LieAlgebraSpec, indices, name: str | None = None
) -> LieAlgebraSpec:
    """Slice of a parent algebra that keeps the ambient inner product.

    ``indices`` lists the 1-based positions of the retained basis
    elements, which must close under brackets inside the parent.  The
    restricted Gram matrix is the parent's invariant inner product on
    the selected span, which generally differs from the intrinsic one
    of the abstract subalgebra.
    """
    picks = [int(i) - 1 for i in indices]
    if len(set(picks)) != len(picks):
        raise ValueError("basis indices must be distinct")
    if any(i < 0 or i >= parent.dim for i in picks):
        raise ValueError(f"basis indices must lie in 1..{parent.dim}")
    complement = [k for k in range(parent.dim) if k not in picks]
    leak = parent.structure[np.ix_(picks, picks, complement)]
    worst = float(np.max(np.abs(leak))) if leak.size else 0.0
    if worst > _CLOSURE_TOLERANCE:
        raise ValueError(
            f"selected elements do not close under brackets "
            f"(outside-span coefficient {worst:.3e})"
        )
    basis = np.asarray(parent.basis[picks])
    structure = np.asarray(parent.structure[np.ix_(picks, picks, picks)])
    gram = np.asarray(parent.gram[np.ix_(picks, picks)])
    eigs = np.linalg.eigvalsh(gram)
    if eigs.min() <= 0:
        raise ValueError("restricted inner product is not positive definite")
    invariance = np.einsum("ijl,lk->ijk", structure, gram)
    residual = float(np.max(np.abs(invariance + invariance.transpose(0, 2, 1))))
    if residual > _INVARIANCE_TOLERANCE:
        raise ValueError(
            f"restricted inner product is not ad-invariant ({residual})"
        )
    label = name or f"{parent.name}|{tuple(int(i) for i in indices)}"
    spec = LieAlgebraSpec(
        name=label,
        basis=basis,
        structure=structure,
        gram=gram,
        inner_mode=parent.inner_mode,
        coeff_pinv=np.linalg.pinv(basis.reshape(len(picks), -1).T),
    )
    for arr in (spec.basis, spec.structure, spec.gram, spec.coeff_pinv):
        arr.setflags(write=False)
    return spec


def bracket_vec(spec: LieAlgebraSpec, u, v) -> np.ndarray:
    """[u, v] through the structure constants."""
    return np.einsum(
        "i,j,ijk->k",
        np.asarray(u, dtype=complex),
        np.asarray(v, dtype=complex),
        spec.structure,
    )


def matrix_of(spec: LieAlgebraSpec, u) -> np.ndarray:
    """The matrix represented by a coefficient vector."""
    return np.einsum("i,iab->ab", np.asarray(u, dtype=complex), spec.basis)


def coeffs_of(spec: LieAlgebraSpec, mat, tol: float = 1e-9) -> np.ndarray:
    """Coefficient vector of a matrix; rejects matrices outside the span."""
    m = np.asarray(mat, dtype=complex)
    coeff = spec.coeff_pinv @ m.reshape(-1)
    resid = float(np.linalg.norm(matrix_of(spec, coeff) - m))
    scale = max(float(np.linalg.norm(m)), 1.0)
    if resid > tol * scale:
        raise ValueError(
            f"matrix is not in the span of the basis (residual {resid})"
        )
    return coeff


def bracket_via_matrices(spec: LieAlgebraSpec, u, v) -> np.ndarray:
    """[u, v] through matrix commutators; dual route to bracket_vec."""
    a = matrix_of(spec, u)
    b = matrix_of(spec, v)
    return coeffs_of(spec, a @ b - b @ a)


def inner_vec(spec: LieAlgebraSpec, u, v) -> complex:
    """Invariant inner product, sesquilinear in the second slot."""
    return complex(
        np.asarray(u, dtype=complex)
        @ spec.gram
        @ np.conj(np.asarray(v, dtype=complex))
    )


def norm_vec(spec: LieAlgebraSpec, u) -> float:
    value = inner_vec(spec, u, u)
    return float(np.sqrt(max(value.real, 0.0)))


def ad_matrix(spec: LieAlgebraSpec, u) -> np.ndarray:
    """Matrix of ad_u = [u, .] on coefficient vectors."""
    return np.einsum("i,ijk->kj", np.asarray(u, dtype=complex), spec.structure)


@dataclass(frozen=True, eq=False)
class LieElement:
    """Convenience wrapper pairing an algebra with a coefficient vector."""

    algebra: LieAlgebraSpec
    vector: np.ndarray

    def bracket(self, other: "LieElement") -> "LieElement":
        self._check(other)
        return LieElement(
            self.algebra, bracket_vec(self.algebra, self.vector, other.vector)
        )

    def inner(self, other: "LieElement") -> complex:
        self._check(other)
        return inner_vec(self.algebra, self.vector, other.vector)

    def norm(self) -> float:
        return norm_vec(self.algebra, self.vector)

    def matrix(self) -> np.ndarray:
        return matrix_of(self.algebra, self.vector)

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        return LieElement(self.algebra, self.vector + other.vector)

    def __sub__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        return LieElement(self.algebra, self.vector - other.vector)

    def __mul__(self, scalar) -> "LieElement":
        return LieElement(self.algebra, self.vector * scalar)

    __rmul__ = __mul__

    def _check(self, other: "LieElement") -> None:
        if other.algebra is not self.algebra:
            raise ValueError("elements belong to different algebras")


def bracket_norm_check(
    spec: LieAlgebraSpec,
    samples: int = 1000,
    seed: int = 0,
    tol: float = 1e-9,
) -> dict:
    """Sample the commutator norm ratio ||[a,b]|| / (||a|| ||b||).

    Draws real and complex coefficient pairs plus every basis pair,
    records the maximum ratio, and compares it with the sqrt(2) bound.
    """
    rng = np.random.default_rng(seed)
    d = spec.dim
    max_ratio = 0.0
    for _ in range(samples):
        u = rng.standard_normal(d)
        v = rng.standard_normal(d)
        if rng.random() < 0.5:
            u = u + 1j * rng.standard_normal(d)
            v = v + 1j * rng.standard_normal(d)
        nu = norm_vec(spec, u)
        nv = norm_vec(spec, v)
        if nu == 0.0 or nv == 0.0:
            continue
        ratio = norm_vec(spec, bracket_vec(spec, u, v)) / (nu * nv)
        max_ratio = max(max_ratio, ratio)
    for i in range(d):
        for j in range(d):
            u = np.zeros(d)
            v = np.zeros(d)
            u[i] = 1.0
            v[j] = 1.0
            nu = norm_vec(spec, u)
            nv = norm_vec(spec, v)
            ratio = norm_vec(spec, bracket_vec(spec, u, v)) / (nu * nv)
            max_ratio = max(max_ratio, ratio)
    return {
        "algebra": spec.name,
        "inner_mode": spec.inner_mode,
        "max_ratio": max_ratio,
        "bound": BRACKET_NORM_BOUND,
        "passed": max_ratio <= BRACKET_NORM_BOUND + tol,
        "attained": abs(max_ratio - BRACKET_NORM_BOUND) <= 1e-6,
        "samples": samples,
    }
