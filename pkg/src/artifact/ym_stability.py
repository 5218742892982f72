"""Algebraic second variation of the gauge energy on 1-form deformations.

A deformation of a connection is an algebra-valued 1-form
``B = sum_j e^j (x) B_j``.  The zero-order part of the second variation
of the energy along ``B`` is

    S(B) = B o Ric + 2 R_F(B),
    (R_F B)_i = sum_j [F_{ji}, B_j],

where ``F`` is the curvature 2-form of the connection and ``Ric`` acts
on the 1-form index.  Both pieces are assembled here as matrices on the
stacked coefficient space of dimension ``7 * dim(algebra)``.

Two sufficient conditions for stability are evaluated.  The coarse one
bounds the curvature coupling through the sharp commutator inequality
``||[x, y]|| <= sqrt(2) ||x|| ||y||``: whenever the smallest Ricci
eigenvalue ``c`` is positive and ``||F|| < c / (2 sqrt(2))`` the
quadratic form ``<S(B), B>`` is positive.  The sharp one simply checks
the smallest eigenvalue of ``S`` itself, which can certify stability
even when the norm test is inconclusive.

A connection whose curvature is of the self-dual type is automatically
a critical point of the energy: the only torsion term in the first
variation pairs the curvature with the square of the contact
differential, and that pairing kills the self-dual block.  The report
therefore carries the residual norms of ``F ^ deta ^ deta`` (a 6-form)
and of its wedge with the contact form (a 7-form) as diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .flat_model import ContactModel, calibrate_model
from .lie_algebra import (
    BRACKET_NORM_BOUND,
    LieAlgebraSpec,
    LieElement,
    ad_matrix,
    bracket_vec,
    inner_vec,
    norm_vec,
)
from .gauge_fields import (
    GValuedForm,
    g_norm,
    g_wedge_scalar,
    instanton_classify,
)
from .weitzenbock_engine import POSITIVITY_RELATIVE_FLOOR, weighted_spectrum

__all__ = [
    "FORM_INDEX_COUNT",
    "OneFormSection",
    "RicciTensor7",
    "one_form_from_gform",
    "gform_from_one_form",
    "curvature_components_grid",
    "curvature_grid_norms",
    "curvature_action_oneforms",
    "apply_curvature_action",
    "curvature_quad_paths",
    "curvature_quad_bound_check",
    "algebraic_second_variation",
    "torsion_residuals",
    "stability_report",
    "STABLE_SUFFICIENT",
    "INCONCLUSIVE",
]

FORM_INDEX_COUNT = 7

STABLE_SUFFICIENT = "STABLE_SUFFICIENT"
INCONCLUSIVE = "INCONCLUSIVE"

# imaginary parts up to this fraction of the real scale are treated as
# numerical noise when a real quantity is expected
_REALITY_TOLERANCE = 1e-10


def _require_real(array: np.ndarray, what: str) -> np.ndarray:
    arr = np.asarray(array)
    if np.iscomplexobj(arr):
        scale = float(np.max(np.abs(arr))) if arr.size else 0.0
        worst = float(np.max(np.abs(arr.imag))) if arr.size else 0.0
        if worst > _REALITY_TOLERANCE * max(scale, 1.0):
            raise ValueError(
                f"{what} must be real; imaginary residual {worst:.3e}"
            )
        arr = arr.real
    return np.asarray(arr, dtype=float)


@dataclass(frozen=True)
class OneFormSection:
    """Algebra-valued 1-form ``sum_j e^j (x) B_j`` with real coefficients.

    ``vectors`` stacks the seven coefficient vectors as rows; row ``j``
    holds the component on ``e^{j+1}``.
    """

    algebra: LieAlgebraSpec
    vectors: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = _require_real(self.vectors, "1-form coefficients")
        if arr.shape != (FORM_INDEX_COUNT, self.algebra.dim):
            raise ValueError(
                "coefficients must form a "
                f"({FORM_INDEX_COUNT}, {self.algebra.dim}) array"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)

    @classmethod
    def zero(cls, algebra: LieAlgebraSpec) -> "OneFormSection":
        return cls(algebra, np.zeros((FORM_INDEX_COUNT, algebra.dim)))

    @classmethod
    def from_stack(cls, algebra: LieAlgebraSpec, stacked) -> "OneFormSection":
        arr = _require_real(stacked, "stacked coefficients").reshape(
            FORM_INDEX_COUNT, algebra.dim
        )
        return cls(algebra, arr)

    def component(self, index: int) -> np.ndarray:
        """Coefficient vector on ``e^index`` for ``index`` in 1..7."""
        if not 1 <= index <= FORM_INDEX_COUNT:
            raise ValueError("index must lie in 1..7")
        return self.vectors[index - 1].copy()

    def element(self, index: int) -> LieElement:
        return LieElement(self.algebra, self.component(index))

    def stacked(self) -> np.ndarray:
        return self.vectors.reshape(-1).copy()

    def norm(self) -> float:
        total = 0.0
        for row in self.vectors:
            total += inner_vec(self.algebra, row, row).real
        return float(np.sqrt(max(total, 0.0)))

    def component_norms(self) -> np.ndarray:
        return np.array(
            [norm_vec(self.algebra, row) for row in self.vectors]
        )


def one_form_from_gform(form: GValuedForm) -> OneFormSection:
    """Read a degree-1 algebra-valued form into a section."""
    if form.degree != 1:
        raise ValueError("expected a 1-form")
    rows = np.zeros((FORM_INDEX_COUNT, form.algebra.dim), dtype=complex)
    for j in range(1, FORM_INDEX_COUNT + 1):
        rows[j - 1] = form.vector_at(j)
    return OneFormSection(form.algebra, _require_real(rows, "1-form"))


def gform_from_one_form(section: OneFormSection) -> GValuedForm:
    out = GValuedForm(section.algebra, 1)
    for j in range(1, FORM_INDEX_COUNT + 1):
        vec = section.vectors[j - 1]
        if np.any(vec != 0.0):
            out.accumulate((j,), vec.astype(complex))
    return out


@dataclass(frozen=True)
class RicciTensor7:
    """Symmetric bilinear curvature data on the seven real directions."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        mat = _require_real(self.matrix, "Ricci matrix")
        if mat.shape != (FORM_INDEX_COUNT, FORM_INDEX_COUNT):
            raise ValueError("Ricci matrix must be 7x7")
        residual = float(np.max(np.abs(mat - mat.T)))
        scale = float(np.max(np.abs(mat)))
        if residual > 1e-10 * max(scale, 1.0):
            raise ValueError(
                f"Ricci matrix must be symmetric; residual {residual:.3e}"
            )
        mat = (mat + mat.T) / 2.0
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def einstein(cls, scale: float = 6.0) -> "RicciTensor7":
        """Constant-multiple tensor ``scale * identity``.

        The default 6.0 is the constant of the Einstein normalization in
        seven dimensions with three horizontal planes (2 * 3 = 6).
        """
        return cls(np.eye(FORM_INDEX_COUNT) * float(scale))

    @classmethod
    def from_diagonal(cls, values) -> "RicciTensor7":
        vals = _require_real(values, "diagonal")
        if vals.shape != (FORM_INDEX_COUNT,):
            raise ValueError("diagonal needs exactly 7 entries")
        return cls(np.diag(vals))

    def entry(self, i: int, j: int) -> float:
        return float(self.matrix[i - 1, j - 1])

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix).min())


# ---------------------------------------------------------------------------
# Curvature coupling on 1-forms
# ---------------------------------------------------------------------------


def curvature_components_grid(F: GValuedForm) -> np.ndarray:
    """7x7 grid of coefficient vectors ``F_{ji}`` with both orderings.

    Entry ``(j, i)`` (0-based ``j-1, i-1``) is the signed coefficient
    vector of the curvature on the ordered pair ``(j, i)``; the grid is
    antisymmetric and has zero diagonal.
    """
    if F.degree != 2:
        raise ValueError("expected a curvature 2-form")
    grid = np.zeros(
        (FORM_INDEX_COUNT, FORM_INDEX_COUNT, F.algebra.dim), dtype=complex
    )
    for j in range(1, FORM_INDEX_COUNT + 1):
        for i in range(1, FORM_INDEX_COUNT + 1):
            if i != j:
                grid[j - 1, i - 1] = F.vector_at(j, i)
    return grid


def curvature_grid_norms(F: GValuedForm) -> np.ndarray:
    """Symmetric 7x7 matrix of component norms ``||F_{ji}||``."""
    grid = curvature_components_grid(F)
    out = np.zeros((FORM_INDEX_COUNT, FORM_INDEX_COUNT))
    for j in range(FORM_INDEX_COUNT):
        for i in range(FORM_INDEX_COUNT):
            out[j, i] = norm_vec(F.algebra, grid[j, i])
    return out


def curvature_action_oneforms(F: GValuedForm) -> np.ndarray:
    """Matrix of ``B -> (sum_j [F_{ji}, B_j])_i`` on stacked sections.

    The output acts on the ``7 d`` coefficient stack of a section; the
    block in row ``i``, column ``j`` is the adjoint action of the
    component ``F_{ji}``.  The map is linear in ``F``, vanishes for
    commutative algebras and is self-adjoint in the invariant inner
    product because the components are antisymmetric in ``(j, i)``.
    """
    grid = curvature_components_grid(F)
    d = F.algebra.dim
    out = np.zeros((FORM_INDEX_COUNT * d, FORM_INDEX_COUNT * d), dtype=complex)
    for i in range(FORM_INDEX_COUNT):
        for j in range(FORM_INDEX_COUNT):
            if i == j:
                continue
            vec = grid[j, i]
            if np.any(vec != 0.0):
                block = ad_matrix(F.algebra, vec)
                out[i * d : (i + 1) * d, j * d : (j + 1) * d] = block
    return _require_real(out, "curvature action matrix")


def apply_curvature_action(
    F: GValuedForm, section: OneFormSection
) -> OneFormSection:
    """Section route for the same map: ``(R_F B)_i = sum_j [F_{ji}, B_j]``."""
    if section.algebra is not F.algebra:
        raise ValueError("section and curvature use different algebras")
    rows = np.zeros(
        (FORM_INDEX_COUNT, F.algebra.dim), dtype=complex
    )
    for i in range(1, FORM_INDEX_COUNT + 1):
        acc = np.zeros(F.algebra.dim, dtype=complex)
        for j in range(1, FORM_INDEX_COUNT + 1):
            if j != i:
                acc += bracket_vec(
                    F.algebra, F.vector_at(j, i), section.vectors[j - 1]
                )
        rows[i - 1] = acc
    return OneFormSection(F.algebra, _require_real(rows, "curvature action"))


def curvature_quad_paths(F: GValuedForm, section: OneFormSection) -> dict:
    """Quadratic form of the curvature coupling, two ways.

    The direct path pairs the image with the section,
    ``sum_i <(R_F B)_i, B_i>``; the flipped path moves the bracket onto
    the section, ``sum_{j,i} <F_{ji}, [B_j, B_i]>``.  Invariance of the
    inner product makes them equal, which is checked term by term in
    the tests.
    """
    algebra = F.algebra
    image = apply_curvature_action(F, section)
    direct = 0.0
    for i in range(FORM_INDEX_COUNT):
        direct += inner_vec(
            algebra, image.vectors[i], section.vectors[i]
        ).real
    flipped = 0.0
    for j in range(1, FORM_INDEX_COUNT + 1):
        for i in range(1, FORM_INDEX_COUNT + 1):
            if j == i:
                continue
            br = bracket_vec(
                algebra, section.vectors[j - 1], section.vectors[i - 1]
            )
            flipped += inner_vec(algebra, F.vector_at(j, i), br).real
    return {
        "pair_with_section": float(direct),
        "pair_with_curvature": float(flipped),
        "agreement": float(abs(direct - flipped)),
    }


def curvature_quad_bound_check(
    F: GValuedForm, section: OneFormSection
) -> dict:
    """Check ``|<R_F B, B>| <= sqrt(2) ||F|| ||B||^2`` on one sample.

    ``||F||`` is the form norm (orthonormal in the 2-form keys) and the
    constant is the sharp commutator bound; the realized ratio is
    returned so sampling can record how much slack the bound has.
    """
    quad = curvature_quad_paths(F, section)["pair_with_section"]
    f_norm = g_norm(F)
    b_norm = section.norm()
    bound = BRACKET_NORM_BOUND * f_norm * b_norm**2
    scale = f_norm * b_norm**2
    ratio = abs(quad) / scale if scale > 0.0 else 0.0
    return {
        "quad": float(quad),
        "bound": float(bound),
        "ratio": float(ratio),
        "holds": bool(abs(quad) <= bound * (1.0 + 1e-12) + 1e-12),
        "curvature_norm": float(f_norm),
        "section_norm": float(b_norm),
    }


# ---------------------------------------------------------------------------
# Second variation and the stability criteria
# ---------------------------------------------------------------------------


def algebraic_second_variation(
    F: GValuedForm, ricci: RicciTensor7
) -> dict:
    """Zero-order second variation ``B -> B o Ric + 2 R_F(B)``.

    Returns the matrix on the stacked coefficient space together with
    its spectrum in the invariant inner product.  The full second
    variation adds a nonnegative rough Laplacian, so a positive minimum
    eigenvalue here certifies stability of the connection.
    """
    algebra = F.algebra
    d = algebra.dim
    ricci_block = np.kron(ricci.matrix, np.eye(d))
    coupling = curvature_action_oneforms(F)
    matrix = ricci_block + 2.0 * coupling
    weight = np.kron(np.eye(FORM_INDEX_COUNT), algebra.gram)
    spectrum = weighted_spectrum(matrix, weight)
    return {
        "matrix": matrix,
        "coupling": coupling,
        "weight": weight,
        "spectrum": spectrum,
        "min_eigenvalue": spectrum["min"],
        "certified_stable": spectrum["positive"],
    }


def torsion_residuals(F: GValuedForm, model: ContactModel) -> dict:
    """Norms of the curvature paired with the square of ``deta``.

    ``F ^ deta ^ deta`` is the 6-form torsion density of the energy's
    first variation; its wedge with the contact form is the full
    7-form.  Both vanish exactly when the curvature has no component
    on the line of the contact 2-form and no vertical part, which is
    the reason self-dual connections are automatically critical.
    """
    six_form = g_wedge_scalar(g_wedge_scalar(F, model.deta), model.deta)
    seven_form = g_wedge_scalar(six_form, model.eta)
    return {
        "six_form_residual": g_norm(six_form),
        "seven_form_residual": g_norm(seven_form),
    }


def stability_report(
    F: GValuedForm,
    ricci: RicciTensor7,
    model: ContactModel | None = None,
    classification_tol: float = 1e-9,
) -> dict:
    """Stability verdict for a connection with curvature ``F``.

    The verdict is ``STABLE_SUFFICIENT`` when the smallest Ricci
    eigenvalue ``c`` is positive and the curvature norm stays under the
    threshold ``c / (2 sqrt(2))``; otherwise ``INCONCLUSIVE`` with a
    reason.  The spectrum of the algebraic second variation is reported
    as a sharper certificate: its minimum can be positive even when the
    norm test fails.  Torsion residuals and the curvature type label
    are included as criticality diagnostics.
    """
    if model is None:
        model = calibrate_model()
    c = ricci.min_eigenvalue()
    f_norm = g_norm(F)
    threshold = c / (2.0 * BRACKET_NORM_BOUND)
    analytic_lower_bound = c - 2.0 * BRACKET_NORM_BOUND * f_norm

    if c <= 0.0:
        verdict = INCONCLUSIVE
        reason = "smallest Ricci eigenvalue is not positive"
    elif f_norm < threshold:
        verdict = STABLE_SUFFICIENT
        reason = "curvature norm below the Ricci threshold"
    else:
        verdict = INCONCLUSIVE
        reason = "curvature norm reaches the Ricci threshold"

    variation = algebraic_second_variation(F, ricci)
    try:
        label = instanton_classify(F, model, tol=classification_tol)["label"]
    except ValueError:
        label = "NONE"

    return {
        "verdict": verdict,
        "reason": reason,
        "ricci_min": float(c),
        "curvature_norm": float(f_norm),
        "threshold": float(threshold),
        "analytic_lower_bound": float(analytic_lower_bound),
        "grid_norm": float(np.linalg.norm(curvature_grid_norms(F))),
        "min_eigenvalue": float(variation["min_eigenvalue"]),
        "certified_stable": bool(variation["certified_stable"]),
        "hermiticity_residual": float(
            variation["spectrum"]["hermiticity_residual"]
        ),
        "classification": label,
        "torsion": torsion_residuals(F, model),
        "positivity_floor": POSITIVITY_RELATIVE_FLOOR,
    }
