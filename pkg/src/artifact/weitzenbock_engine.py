"""Curvature endomorphisms on holomorphic 2-form sections.

Sections live in the stacked coordinate space (phi_12, phi_13, phi_23)
with values in a fixed Lie algebra.  Two endomorphisms act there:

* the gauge curvature term, built from the component table F_{mu nubar}
  through ``(F phi)_{mu nu} = sum_alpha ([phi_{alpha nu}, F_{mu alphabar}]
  - [phi_{alpha mu}, F_{nu alphabar}])``;
* the transverse Ricci term, built from a Hermitian 3x3 tensor through
  ``(R phi)_{mu nu} = sum_alpha (R_{alphabar mu} phi_{alpha nu}
  - R_{alphabar nu} phi_{alpha mu})`` (indices raised with the transverse
  metric, a positive multiple of the identity here).

Each operator comes with at least one independent evaluation route
(componentwise formulas, quadratic forms on coefficient families, Ricci
trace contraction), and the routes are cross-checked in the test suite.
The module also evaluates the norm estimate chain that controls the
curvature quadratic form and assembles positivity verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .flat_model import ContactModel
from .gauge_fields import (
    FComponents,
    GValuedForm,
    TwoZeroSection,
    f_component_norm_matrix,
    f_components_from_gform,
    g_norm,
    instanton_classify,
    phi_component_norm_matrix,
)
from .lie_algebra import (
    LieAlgebraSpec,
    ad_matrix,
    bracket_vec,
    inner_vec,
)

__all__ = [
    "PAIRS",
    "TransverseRicci",
    "TwoZeroEndo",
    "stack_section",
    "section_from_stack",
    "build_F_operator",
    "build_F_operator_from_components",
    "apply_F_xi_path",
    "quad_form_F",
    "quad_form_F_complex",
    "v_basis_quad_form",
    "V_QUAD_TO_OPERATOR_FACTOR",
    "build_R_operator",
    "ricci_quad_trace",
    "operator_spectrum",
    "weighted_spectrum",
    "estimate_bound_check",
    "vanishing_report",
    "POSITIVITY_RELATIVE_FLOOR",
]

PAIRS = ((1, 2), (1, 3), (2, 3))

# an eigenvalue counts as positive when it exceeds this fraction of the
# largest eigenvalue magnitude
POSITIVITY_RELATIVE_FLOOR = 1e-10

# the quadratic form written on coefficient families equals this factor
# times the operator quadratic form in the pair-sum convention
V_QUAD_TO_OPERATOR_FACTOR = 4.0


@dataclass(frozen=True, eq=False)
class TransverseRicci:
    """Hermitian transverse Ricci tensor in the complex frame.

    ``matrix[alpha - 1, mu - 1]`` holds the entry carrying one barred
    index alpha and one unbarred index mu; Hermitian symmetry ties the
    two triangles.  ``metric_scale`` is the positive factor c of the
    transverse metric c * I used to raise indices.
    """

    matrix: np.ndarray
    metric_scale: float = 1.0

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (3, 3):
            raise ValueError("transverse Ricci tensor must be 3x3")
        residual = float(np.max(np.abs(mat - mat.conj().T)))
        if residual > 1e-10 * max(float(np.max(np.abs(mat))), 1.0):
            raise ValueError(
                f"transverse Ricci tensor is not Hermitian "
                f"(residual {residual})"
            )
        if self.metric_scale <= 0:
            raise ValueError("metric scale must be positive")
        mat = (mat + mat.conj().T) / 2.0
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def einstein(cls, scale: float = 8.0, metric_scale: float = 1.0):
        """Ricci tensor proportional to the transverse metric."""
        return cls(
            matrix=scale * metric_scale * np.eye(3), metric_scale=metric_scale
        )

    @classmethod
    def from_diagonal(cls, values, metric_scale: float = 1.0):
        vals = np.asarray(values, dtype=float)
        if vals.shape != (3,):
            raise ValueError("expected three diagonal values")
        return cls(matrix=np.diag(vals), metric_scale=metric_scale)

    def entry(self, alpha: int, mu: int) -> complex:
        """Entry with barred index alpha, unbarred index mu (1..3)."""
        return complex(self.matrix[alpha - 1, mu - 1])

    def raised(self) -> np.ndarray:
        """Matrix with the barred index raised by the metric."""
        return np.asarray(self.matrix) / self.metric_scale


def stack_section(section: TwoZeroSection) -> np.ndarray:
    """Concatenate the components into one vector of length 3 dim."""
    return np.concatenate([section.phi12, section.phi13, section.phi23])


def section_from_stack(algebra: LieAlgebraSpec, vec) -> TwoZeroSection:
    arr = np.asarray(vec, dtype=complex)
    d = algebra.dim
    if arr.shape != (3 * d,):
        raise ValueError(f"expected a vector of length {3 * d}")
    return TwoZeroSection(
        algebra=algebra,
        phi12=arr[0:d],
        phi13=arr[d : 2 * d],
        phi23=arr[2 * d : 3 * d],
    )


@dataclass(frozen=True, eq=False)
class TwoZeroEndo:
    """Endomorphism of the stacked section space."""

    algebra: LieAlgebraSpec
    matrix: np.ndarray
    label: str = ""
    _weight: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        d = self.algebra.dim
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (3 * d, 3 * d):
            raise ValueError(f"operator matrix must be {3 * d}x{3 * d}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        weight = np.kron(np.eye(3), self.algebra.gram)
        weight.setflags(write=False)
        object.__setattr__(self, "_weight", weight)

    def weight(self) -> np.ndarray:
        """Gram matrix of the section inner product on stacked vectors."""
        return self._weight.copy()

    def apply(self, section: TwoZeroSection) -> TwoZeroSection:
        if section.algebra is not self.algebra:
            raise ValueError("section belongs to a different algebra")
        return section_from_stack(
            self.algebra, self.matrix @ stack_section(section)
        )

    def quad(self, section: TwoZeroSection) -> complex:
        """<M s, s> in the pair-sum inner product."""
        vec = stack_section(section)
        return complex((self.matrix @ vec) @ self._weight @ np.conj(vec))

    def quad_bilinear(self, section: TwoZeroSection) -> complex:
        """Pair-sum pairing of M s against s without conjugation.

        The componentwise derivations of the curvature quadratic form
        use the complex-bilinear extension of the invariant form; this
        route matches them, and coincides with :meth:`quad` exactly on
        sections with real coefficient vectors.
        """
        vec = stack_section(section)
        return complex((self.matrix @ vec) @ self._weight @ vec)

    def adjoint_residual(
        self, first: TwoZeroSection, second: TwoZeroSection
    ) -> float:
        """|<M s1, s2> - <s1, M s2>| on a pair of sections."""
        lhs = self.apply(first).inner_20(second)
        rhs = first.inner_20(self.apply(second))
        return abs(lhs - rhs)


def _ordered_pair(a: int, b: int):
    """(sign, pair index) such that phi_{a b} = sign * phi_{pair}."""
    if a < b:
        return 1.0, PAIRS.index((a, b))
    return -1.0, PAIRS.index((b, a))


def build_F_operator_from_components(fc: FComponents) -> TwoZeroEndo:
    """Curvature endomorphism from a component table.

    Implements ``(F phi)_{mu nu} = sum_alpha ([phi_{alpha nu},
    F_{mu alphabar}] - [phi_{alpha mu}, F_{nu alphabar}])`` as a block
    matrix on stacked sections.
    """
    algebra = fc.algebra
    d = algebra.dim
    blocks = np.zeros((3, 3, d, d), dtype=complex)
    for row, (mu, nu) in enumerate(PAIRS):
        for alpha in range(1, 4):
            # [phi_{alpha nu}, F_{mu alphabar}] = -ad(F_{mu alphabar}) phi_{alpha nu}
            if alpha != nu:
                sign, col = _ordered_pair(alpha, nu)
                blocks[row, col] -= sign * ad_matrix(
                    algebra, fc.at(mu, alpha)
                )
            if alpha != mu:
                sign, col = _ordered_pair(alpha, mu)
                blocks[row, col] += sign * ad_matrix(
                    algebra, fc.at(nu, alpha)
                )
    matrix = np.block(
        [[blocks[r, c] for c in range(3)] for r in range(3)]
    )
    return TwoZeroEndo(algebra=algebra, matrix=matrix, label="curvature")


def build_F_operator(
    F: GValuedForm,
    model: ContactModel,
    allow_non_instanton: bool = False,
    tol: float = 1e-9,
) -> TwoZeroEndo:
    """Curvature endomorphism of a 2-form curvature.

    The input must classify as type ``SD`` unless ``allow_non_instanton``
    is set, in which case only the (1,1) table of the form enters.
    """
    verdict = instanton_classify(F, model, tol=tol)
    if verdict["label"] != "SD" and not allow_non_instanton:
        raise ValueError(
            f"curvature classifies as {verdict['label']}, not SD; "
            f"pass allow_non_instanton to proceed"
        )
    fc = f_components_from_gform(
        F, model, tol=tol, strict=not allow_non_instanton
    )
    return build_F_operator_from_components(fc)


def apply_F_xi_path(
    fc: FComponents, section: TwoZeroSection
) -> TwoZeroSection:
    """Componentwise evaluation of the curvature endomorphism.

    Independent route to :func:`build_F_operator_from_components`,
    written out entry by entry:

    * out_12 = [phi_32, F_13bar] + [phi_13, F_23bar] + [phi_21, F_33bar]
    * out_13 = [phi_23, F_12bar] + [phi_31, F_22bar] + [phi_12, F_32bar]
    * out_23 = [phi_32, F_11bar] + [phi_13, F_21bar] + [phi_21, F_31bar]
    """
    algebra = fc.algebra
    if section.algebra is not algebra:
        raise ValueError("section belongs to a different algebra")
    br = lambda x, y: bracket_vec(algebra, x, y)
    phi12, phi13, phi23 = section.phi12, section.phi13, section.phi23
    out12 = (
        br(-phi23, fc.at(1, 3)) + br(phi13, fc.at(2, 3)) + br(-phi12, fc.at(3, 3))
    )
    out13 = (
        br(phi23, fc.at(1, 2)) + br(-phi13, fc.at(2, 2)) + br(phi12, fc.at(3, 2))
    )
    out23 = (
        br(-phi23, fc.at(1, 1)) + br(phi13, fc.at(2, 1)) + br(-phi12, fc.at(3, 1))
    )
    return TwoZeroSection(
        algebra=algebra, phi12=out12, phi13=out13, phi23=out23
    )


def quad_form_F_complex(fc: FComponents, section: TwoZeroSection) -> complex:
    """Curvature quadratic form on a section, bracket route.

    Evaluates ``2 { <[phi_13, phi_23], Re F_12bar> + <[phi_12, phi_23],
    Re F_31bar> + <[phi_12, phi_13], Re F_23bar> }`` with the
    complex-bilinear pairing, matching the bilinear operator route
    :meth:`TwoZeroEndo.quad_bilinear`.
    """
    algebra = fc.algebra
    if section.algebra is not algebra:
        raise ValueError("section belongs to a different algebra")
    re_part = lambda mu, nu: (fc.at(mu, nu) + np.conj(fc.at(mu, nu))) / 2.0
    # the second slots are real vectors, so the sesquilinear inner
    # evaluates the bilinear pairing verbatim
    return 2.0 * (
        inner_vec(
            algebra,
            bracket_vec(algebra, section.phi13, section.phi23),
            re_part(1, 2),
        )
        + inner_vec(
            algebra,
            bracket_vec(algebra, section.phi12, section.phi23),
            re_part(3, 1),
        )
        + inner_vec(
            algebra,
            bracket_vec(algebra, section.phi12, section.phi13),
            re_part(2, 3),
        )
    )


def quad_form_F(fc: FComponents, section: TwoZeroSection) -> float:
    """Real part of :func:`quad_form_F_complex`."""
    return float(quad_form_F_complex(fc, section).real)


def v_basis_quad_form(algebra: LieAlgebraSpec, b_rows, a_rows) -> float:
    """Curvature quadratic form written on the coefficient families.

    For a section with coefficients ``b_i`` on the v family and a
    curvature with coefficients ``a_i`` on the w family this evaluates

        <[b3, b5] - [b4, b6], a1> - <[b1, b5] - [b2, b6], a3>
        + <[b1, b3] - [b2, b4], a5>

    which equals ``V_QUAD_TO_OPERATOR_FACTOR`` times the operator
    quadratic form in the pair-sum convention.
    """
    b = np.asarray(b_rows, dtype=complex)
    a = np.asarray(a_rows, dtype=complex)
    if b.shape != (6, algebra.dim) or a.shape != (8, algebra.dim):
        raise ValueError("expected (6, dim) and (8, dim) coefficient arrays")
    br = lambda x, y: bracket_vec(algebra, x, y)
    total = (
        inner_vec(algebra, br(b[2], b[4]) - br(b[3], b[5]), a[0])
        - inner_vec(algebra, br(b[0], b[4]) - br(b[1], b[5]), a[2])
        + inner_vec(algebra, br(b[0], b[2]) - br(b[1], b[3]), a[4])
    )
    return float(total.real)


def build_R_operator(ricci: TransverseRicci, algebra: LieAlgebraSpec) -> TwoZeroEndo:
    """Ricci endomorphism on stacked sections.

    Implements ``(R phi)_{mu nu} = sum_alpha (R~_{alpha mu} phi_{alpha nu}
    - R~_{alpha nu} phi_{alpha mu})`` with the barred index raised by the
    transverse metric.  The resulting pair-space matrix is Hermitian
    whenever the tensor is.
    """
    raised = ricci.raised()
    pair_matrix = np.zeros((3, 3), dtype=complex)
    for row, (mu, nu) in enumerate(PAIRS):
        for alpha in range(1, 4):
            if alpha != nu:
                sign, col = _ordered_pair(alpha, nu)
                pair_matrix[row, col] += sign * raised[alpha - 1, mu - 1]
            if alpha != mu:
                sign, col = _ordered_pair(alpha, mu)
                pair_matrix[row, col] -= sign * raised[alpha - 1, nu - 1]
    matrix = np.kron(pair_matrix, np.eye(algebra.dim))
    return TwoZeroEndo(algebra=algebra, matrix=matrix, label="ricci")


def ricci_quad_trace(
    ricci: TransverseRicci, section: TwoZeroSection
) -> float:
    """Ricci quadratic form by trace contraction, independent route.

    Evaluates ``sum_{alpha, mu} R~_{alpha mu} b_{alpha mu}`` with
    ``b_{alpha mu} = sum_nu <phi_{alpha nu}, phi_{mu nu}>`` and agrees
    with the operator quadratic form in the pair-sum convention.
    """
    algebra = section.algebra
    raised = ricci.raised()
    total = 0j
    for alpha in range(1, 4):
        for mu in range(1, 4):
            b_entry = 0j
            for nu in range(1, 4):
                b_entry += inner_vec(
                    algebra,
                    section.component(alpha, nu),
                    section.component(mu, nu),
                )
            total += raised[alpha - 1, mu - 1] * b_entry
    return float(total.real)


def weighted_spectrum(matrix, weight) -> dict:
    """Spectrum of an operator in a weighted inner product.

    The operator is conjugated by the square root of the Gram matrix of
    the inner product; the conjugate must be Hermitian for a self-adjoint
    operator, and its deviation is reported alongside the eigenvalues.
    """
    evals, evecs = np.linalg.eigh(np.asarray(weight))
    root = evecs @ np.diag(np.sqrt(evals)) @ evecs.T
    inv_root = evecs @ np.diag(1.0 / np.sqrt(evals)) @ evecs.T
    conjugated = root @ np.asarray(matrix) @ inv_root
    herm_residual = float(np.max(np.abs(conjugated - conjugated.conj().T)))
    spectrum = np.linalg.eigvalsh((conjugated + conjugated.conj().T) / 2.0)
    largest = float(np.max(np.abs(spectrum))) if spectrum.size else 0.0
    return {
        "eigenvalues": spectrum,
        "min": float(spectrum.min()),
        "max": float(spectrum.max()),
        "hermiticity_residual": herm_residual,
        "positive": bool(
            spectrum.min() > POSITIVITY_RELATIVE_FLOOR * largest
        ),
        "nonnegative": bool(
            spectrum.min() >= -POSITIVITY_RELATIVE_FLOOR * largest
        ),
    }


def operator_spectrum(endo: TwoZeroEndo) -> dict:
    """Spectrum of an endomorphism in the weighted inner product."""
    return weighted_spectrum(endo.matrix, endo.weight())


def estimate_bound_check(
    fc: FComponents, section: TwoZeroSection, tol: float = 1e-9
) -> dict:
    """Evaluate the norm estimate chain on concrete data.

    Checks ``|S| <= (sqrt(2)/2) Tr(A^2 B) <= sqrt(2) ||B||_F ||phi||^2``
    where S is the curvature quadratic form, A the symmetric matrix of
    section component norms, and B the matrix of curvature component
    norms; ``||phi||^2`` sums over ordered pairs.
    """
    lhs = abs(quad_form_F(fc, section))
    a_matrix = phi_component_norm_matrix(section)
    b_matrix = f_component_norm_matrix(fc)
    bound_bracket = float(
        np.sqrt(2.0) / 2.0 * np.trace(a_matrix @ a_matrix @ b_matrix).real
    )
    b_frobenius = float(np.linalg.norm(b_matrix))
    phi_sq = section.norm_20() ** 2
    bound_product = float(np.sqrt(2.0) * b_frobenius * phi_sq)
    scale = max(bound_product, 1.0)
    return {
        "quad_form": lhs,
        "bound_bracket": bound_bracket,
        "bound_product": bound_product,
        "bracket_bound_holds": lhs <= bound_bracket + tol * scale,
        "product_bound_holds": bound_bracket <= bound_product + tol * scale,
        "norms": {
            "component_frobenius": b_frobenius,
            "section_sq": phi_sq,
            "a_frobenius": float(np.linalg.norm(a_matrix)),
        },
    }


def vanishing_report(
    F: GValuedForm,
    ricci: TransverseRicci,
    model: ContactModel,
    tol: float = 1e-9,
) -> dict:
    """Positivity verdict for the combined curvature endomorphism.

    Builds both operators, reports their spectra, and decides whether
    the quadratic form of (Ricci + curvature) is strictly positive on
    every section, which forces the relevant cohomology obstruction
    space to vanish.  Two equivalent smallness thresholds are reported:
    one against the form norm of the curvature, one against the
    Frobenius norm of its component table; the verdict uses the
    component version.
    """
    fc = f_components_from_gform(F, model, tol=tol)
    f_endo = build_F_operator_from_components(fc)
    r_endo = build_R_operator(ricci, F.algebra)
    f_spec = operator_spectrum(f_endo)
    r_spec = operator_spectrum(r_endo)
    combined = TwoZeroEndo(
        algebra=F.algebra,
        matrix=f_endo.matrix + r_endo.matrix,
        label="combined",
    )
    combined_spec = operator_spectrum(combined)

    lam = r_spec["min"]
    b_matrix = f_component_norm_matrix(fc)
    component_norm = float(np.linalg.norm(b_matrix))
    form_norm = g_norm(F)
    threshold_component = lam / np.sqrt(2.0)
    threshold_form = np.sqrt(2.0) * lam
    energy_bound_holds = (
        r_spec["positive"] and component_norm < threshold_component
    )

    vanishes = (
        (r_spec["positive"] and f_spec["positive"])
        or (r_spec["positive"] and f_spec["nonnegative"])
        or energy_bound_holds
        or combined_spec["positive"]
    )
    return {
        "verdict": "VANISHES" if vanishes else "INCONCLUSIVE",
        "lambda_min": lam,
        "curvature_spectrum": {
            "min": f_spec["min"],
            "max": f_spec["max"],
            "positive": f_spec["positive"],
            "nonnegative": f_spec["nonnegative"],
        },
        "ricci_spectrum": {
            "min": r_spec["min"],
            "max": r_spec["max"],
            "positive": r_spec["positive"],
        },
        "combined_spectrum": {
            "min": combined_spec["min"],
            "max": combined_spec["max"],
            "positive": combined_spec["positive"],
        },
        "norms": {
            "component_frobenius": component_norm,
            "form": form_norm,
        },
        "thresholds": {
            "component_frobenius": float(threshold_component),
            "form": float(threshold_form),
        },
        "energy_bound_holds": bool(energy_bound_holds),
    }
