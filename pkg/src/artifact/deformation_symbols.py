"""Symbol complexes of the deformation operators at a covector.

Deformations of a self-dual connection are governed by two finite
complexes of first-order operators.  The full complex runs through the
quotient spaces

    L0 = functions, L1 = 1-forms, L2 = 2-forms mod the +1 block,
    L3 = contact ^ (remaining horizontal 2-forms),

with scalar dimensions (1, 7, 13, 7); tensoring with a coefficient
algebra of dimension d multiplies every dimension by d and the
alternating sum stays zero.  The basic complex keeps only horizontal
data: functions, horizontal 1-forms, and the 7-dimensional block of
horizontal 2-forms of eigenvalues -1 and -2, with scalar dimensions
(1, 6, 7).

A first-order operator differentiates once, so its leading part at a
covector ``xi`` is wedging with ``xi`` followed by the projection onto
the target quotient.  The connection term is order zero and drops out.
Compositions of consecutive symbols vanish identically because wedging
twice with the same covector gives zero and the discarded +1 block
generates an ideal: its wedge with any 1-form lands in the space the
next projection kills.

The full complex has exact symbol sequences at every covector with a
nonzero vertical component (rank pattern ``(d, 6d, 7d)``), which is
the ellipticity evidence gathered over random covectors.  On the thin
set of purely horizontal covectors the last map loses rank because the
horizontal wedges of retained 2-forms fall into the discarded ideal;
that probe is reported separately.  The basic complex sees only
horizontal derivatives, so its symbols collapse at vertical covectors;
for horizontal covectors the ranks are ``(d, 5d)`` and the final stage
has a cokernel of dimension ``2d``, which is reported without further
interpretation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .flat_model import (
    ContactModel,
    KForm,
    REEB_INDEX,
    basis_keys,
    calibrate_model,
    standard_two_form_families,
    wedge,
)

__all__ = [
    "FULL_C",
    "BASIC_B",
    "RANK_RELATIVE_THRESHOLD",
    "QuotientSpaces",
    "build_quotient_spaces",
    "wedge_matrix",
    "numerical_rank",
    "covector_form",
    "symbol_maps",
    "basic_symbol_maps",
    "exactness_report",
    "batch_exactness",
    "horizontal_triple_span_rank",
]

FULL_C = "FULL_C"
BASIC_B = "BASIC_B"

# singular values below this fraction of the largest one count as zero
RANK_RELATIVE_THRESHOLD = 1e-9

_HORIZONTAL_COUNT = 6


def _columns_from_forms(forms, degree: int) -> np.ndarray:
    keys = basis_keys(degree)
    out = np.zeros((len(keys), len(forms)))
    for col, form in enumerate(forms):
        vec = form.to_vector()
        if np.max(np.abs(vec.imag)) > 1e-14:
            raise ValueError("quotient basis forms must be real")
        out[:, col] = vec.real
    return out


def wedge_matrix(xi_form: KForm, from_degree: int) -> np.ndarray:
    """Coordinate matrix of ``alpha -> xi ^ alpha`` on ``from_degree`` forms."""
    if xi_form.degree != 1:
        raise ValueError("the covector must be a 1-form")
    source = basis_keys(from_degree)
    target_keys = basis_keys(from_degree + 1)
    position = {key: row for row, key in enumerate(target_keys)}
    out = np.zeros((len(target_keys), len(source)))
    for col, key in enumerate(source):
        image = wedge(xi_form, KForm.basis(*key))
        for tkey, value in image.coeffs.items():
            if value != 0:
                out[position[tkey], col] += value.real
    return out


def covector_form(xi) -> KForm:
    """Real 7-vector of coefficients as a 1-form."""
    vec = np.asarray(xi, dtype=float)
    if vec.shape != (7,):
        raise ValueError("a covector needs exactly 7 real coefficients")
    return KForm.from_vector(1, vec)


@dataclass(frozen=True)
class QuotientSpaces:
    """Coordinate bases for the quotient targets and the discarded ideal.

    All basis matrices carry orthonormal columns in the 21- and
    35-dimensional coordinate spaces of 2- and 3-forms, except the
    ideal bases, which are stored unnormalized for span checks.
    ``l2_basis`` spans the orthogonal complement of the +1 block in the
    2-forms; ``l3_basis`` spans the contact wedge of the -1 and -2
    blocks inside the 3-forms.
    """

    model: ContactModel
    l2_basis: np.ndarray = field(repr=False)
    l3_basis: np.ndarray = field(repr=False)
    basic2_basis: np.ndarray = field(repr=False)
    ideal2_basis: np.ndarray = field(repr=False)
    ideal3_basis: np.ndarray = field(repr=False)

    @property
    def scalar_dims(self) -> tuple:
        return (1, 7, self.l2_basis.shape[1], self.l3_basis.shape[1])

    def dims(self, d: int = 1) -> tuple:
        return tuple(d * n for n in self.scalar_dims)

    @property
    def basic_scalar_dims(self) -> tuple:
        return (1, _HORIZONTAL_COUNT, self.basic2_basis.shape[1])

    def basic_dims(self, d: int = 1) -> tuple:
        return tuple(d * n for n in self.basic_scalar_dims)

    def project_two_form(self, form: KForm) -> np.ndarray:
        """Coordinates of the class of a 2-form in the quotient."""
        if form.degree != 2:
            raise ValueError("expected a 2-form")
        vec = form.to_vector()
        return self.l2_basis.T @ vec

    def two_form_from_class(self, coords) -> KForm:
        """Orthogonal representative of a quotient class."""
        coords = np.asarray(coords)
        if coords.shape != (self.l2_basis.shape[1],):
            raise ValueError("wrong number of quotient coordinates")
        return KForm.from_vector(2, self.l2_basis @ coords)


def build_quotient_spaces(model: ContactModel | None = None) -> QuotientSpaces:
    """Orthonormal quotient bases for the calibrated model.

    The 2-form quotient keeps the -1 family (normalized), the line of
    the contact 2-form, and the six vertical directions; the discarded
    ideal is the +1 family.  In degree 3 the ideal fills the whole
    horizontal part plus the contact wedge of the +1 family, so the
    quotient is spanned by the contact wedge of the retained blocks.
    """
    if model is None:
        model = calibrate_model()
    families = standard_two_form_families()
    w_forms = families["w"]
    v_forms = families["v"]
    omega = model.omega
    eta = model.eta

    v_unit = [form * (1.0 / form.norm()) for form in v_forms]
    omega_unit = omega * (1.0 / omega.norm())

    basic2 = v_unit + [omega_unit]
    vertical = [wedge(eta, KForm.basis(a)) for a in range(1, REEB_INDEX)]
    l2 = basic2 + vertical

    l3_forms = [wedge(eta, form) for form in basic2]

    ideal2 = list(w_forms)
    horizontal_triples = [
        KForm.basis(*key)
        for key in basis_keys(3)
        if REEB_INDEX not in key
    ]
    ideal3 = horizontal_triples + [wedge(eta, form) for form in w_forms]

    spaces = QuotientSpaces(
        model=model,
        l2_basis=_columns_from_forms(l2, 2),
        l3_basis=_columns_from_forms(l3_forms, 3),
        basic2_basis=_columns_from_forms(basic2, 2),
        ideal2_basis=_columns_from_forms(ideal2, 2),
        ideal3_basis=_columns_from_forms(ideal3, 3),
    )
    for matrix, label in (
        (spaces.l2_basis, "2-form quotient"),
        (spaces.l3_basis, "3-form quotient"),
        (spaces.basic2_basis, "basic 2-form block"),
    ):
        gram = matrix.T @ matrix
        residual = np.max(np.abs(gram - np.eye(matrix.shape[1])))
        if residual > 1e-12:
            raise ValueError(
                f"{label} basis is not orthonormal; residual {residual:.3e}"
            )
    cross = np.max(np.abs(spaces.l2_basis.T @ spaces.ideal2_basis))
    if cross > 1e-12:
        raise ValueError("quotient basis does not annihilate the ideal")
    cross3 = np.max(np.abs(spaces.l3_basis.T @ spaces.ideal3_basis))
    if cross3 > 1e-12:
        raise ValueError("3-form quotient does not annihilate the ideal")
    return spaces


def numerical_rank(
    matrix: np.ndarray, threshold: float = RANK_RELATIVE_THRESHOLD
) -> int:
    """Rank by singular values relative to the largest one."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.size == 0:
        return 0
    values = np.linalg.svd(matrix, compute_uv=False)
    top = values.max(initial=0.0)
    if top == 0.0:
        return 0
    return int(np.sum(values > threshold * top))


def _expand(matrix: np.ndarray, d: int) -> np.ndarray:
    if d == 1:
        return matrix
    return np.kron(matrix, np.eye(d))


def symbol_maps(xi, q: QuotientSpaces, d: int = 1) -> tuple:
    """Leading-order maps of the full complex at a nonzero covector.

    Returns three matrices of shapes ``(7d, d)``, ``(13d, 7d)`` and
    ``(7d, 13d)``.  Consecutive compositions vanish identically.
    """
    vec = np.asarray(xi, dtype=float)
    if vec.shape != (7,):
        raise ValueError("a covector needs exactly 7 real coefficients")
    if not np.any(vec != 0.0):
        raise ValueError("the covector must be nonzero")
    if d < 1:
        raise ValueError("coefficient dimension must be at least 1")
    xi_form = covector_form(vec)
    sigma0 = vec.reshape(7, 1)
    w1 = wedge_matrix(xi_form, 1)
    sigma1 = q.l2_basis.T @ w1
    w2 = wedge_matrix(xi_form, 2)
    sigma2 = q.l3_basis.T @ w2 @ q.l2_basis
    return (_expand(sigma0, d), _expand(sigma1, d), _expand(sigma2, d))


def basic_symbol_maps(xi, q: QuotientSpaces, d: int = 1) -> tuple:
    """Leading-order maps of the basic complex at a nonzero covector.

    Returns matrices of shapes ``(6d, d)`` and ``(7d, 6d)``.  Only the
    horizontal part of the covector acts, so both maps vanish when the
    covector is vertical.
    """
    vec = np.asarray(xi, dtype=float)
    if vec.shape != (7,):
        raise ValueError("a covector needs exactly 7 real coefficients")
    if not np.any(vec != 0.0):
        raise ValueError("the covector must be nonzero")
    if d < 1:
        raise ValueError("coefficient dimension must be at least 1")
    xi_form = covector_form(vec)
    b0 = vec[: _HORIZONTAL_COUNT].reshape(_HORIZONTAL_COUNT, 1)
    w1 = wedge_matrix(xi_form, 1)
    embed_h = np.zeros((7, _HORIZONTAL_COUNT))
    embed_h[: _HORIZONTAL_COUNT, :] = np.eye(_HORIZONTAL_COUNT)
    b1 = q.basic2_basis.T @ w1 @ embed_h
    return (_expand(b0, d), _expand(b1, d))


def _stage_rows(dims, ranks, maps) -> list:
    """Per-stage rank, kernel, cokernel and exactness bookkeeping.

    Stage ``k`` sits at the ``k``-th space of the sequence; exactness
    there means the kernel of the outgoing map equals the image of the
    incoming one (injectivity at the start, surjectivity at the end).
    """
    rows = []
    count = len(dims)
    for k in range(count):
        incoming = ranks[k - 1] if k >= 1 else 0
        outgoing_rank = ranks[k] if k < len(maps) else 0
        kernel = dims[k] - outgoing_rank if k < len(maps) else dims[k]
        exact = kernel == incoming
        rows.append(
            {
                "stage": k,
                "dim": int(dims[k]),
                "outgoing_rank": int(outgoing_rank) if k < len(maps) else None,
                "kernel_dim": int(kernel),
                "image_in": int(incoming),
                "cokernel_dim": int(dims[k] - incoming),
                "exact": bool(exact),
            }
        )
    return rows


def exactness_report(
    xi,
    q: QuotientSpaces,
    which: str = FULL_C,
    d: int = 1,
    threshold: float = RANK_RELATIVE_THRESHOLD,
) -> dict:
    """Rank and exactness data of a symbol sequence at one covector."""
    vec = np.asarray(xi, dtype=float)
    if which == FULL_C:
        maps = symbol_maps(vec, q, d)
        dims = q.dims(d)
    elif which == BASIC_B:
        maps = basic_symbol_maps(vec, q, d)
        dims = q.basic_dims(d)
    else:
        raise ValueError(f"unknown complex tag {which!r}")
    ranks = [numerical_rank(m, threshold) for m in maps]
    compositions = [
        float(np.max(np.abs(maps[k + 1] @ maps[k])))
        for k in range(len(maps) - 1)
    ]
    stages = _stage_rows(dims, ranks, maps)
    exact_all = all(row["exact"] for row in stages)
    degenerate = any(rank == 0 for rank in ranks)
    report = {
        "which": which,
        "covector": [float(x) for x in vec],
        "coefficient_dim": int(d),
        "dims": [int(n) for n in dims],
        "alternating_sum": int(
            sum((-1) ** k * n for k, n in enumerate(dims))
        ),
        "ranks": [int(r) for r in ranks],
        "composition_residuals": compositions,
        "stages": stages,
        "exact_everywhere": bool(exact_all),
        "degenerate": bool(degenerate),
        "rank_threshold": float(threshold),
    }
    return report


def batch_exactness(
    q: QuotientSpaces,
    which: str = FULL_C,
    seed: int = 0,
    samples: int = 100,
    dims: tuple = (1, 3),
    threshold: float = RANK_RELATIVE_THRESHOLD,
) -> dict:
    """Exactness sweep over random covectors plus the axis directions.

    For the full complex, covectors carrying a vertical component must
    give an exact sequence; any failure there is collected.  Purely
    horizontal covectors are a known thin degenerate set: the last map
    only sees the vertical part of its domain once the horizontal
    wedges fall into the discarded ideal, so its rank drops and the
    two final stages lose exactness.  They are swept separately and
    reported under ``horizontal_probe`` instead of being counted as
    failures.  For the basic complex the roles flip: horizontal
    covectors must be exact at the first two stages while vertical
    covectors collapse both maps to zero.
    """
    rng = np.random.default_rng(seed)
    covectors = [np.eye(7)[k] for k in range(7)]
    while len(covectors) < samples + 7:
        vec = rng.normal(size=7)
        if np.linalg.norm(vec) > 1e-6:
            covectors.append(vec)
    failures = []
    rank_patterns = {}
    vertical_reports = []
    horizontal_reports = []
    for vec in covectors:
        is_horizontal = vec[_HORIZONTAL_COUNT] == 0.0
        is_vertical = bool(np.max(np.abs(vec[:_HORIZONTAL_COUNT])) == 0.0)
        for d in dims:
            report = exactness_report(vec, q, which, d, threshold)
            pattern = tuple(r // d for r in report["ranks"])
            rank_patterns[pattern] = rank_patterns.get(pattern, 0) + 1
            if which == FULL_C:
                if is_horizontal:
                    horizontal_reports.append(report)
                elif not report["exact_everywhere"]:
                    failures.append(report)
            else:
                if is_vertical:
                    vertical_reports.append(report)
                elif not all(
                    row["exact"] for row in report["stages"][:2]
                ):
                    failures.append(report)
    out = {
        "which": which,
        "seed": int(seed),
        "samples": int(len(covectors)),
        "coefficient_dims": [int(d) for d in dims],
        "failures": len(failures),
        "failure_reports": failures[:3],
        "rank_patterns": {
            "x".join(str(r) for r in key): count
            for key, count in sorted(rank_patterns.items())
        },
        "all_exact": not failures,
    }
    if which == FULL_C:
        out["horizontal_probe"] = {
            "count": len(horizontal_reports),
            "rank_patterns": sorted(
                {
                    "x".join(
                        str(r // rep["coefficient_dim"])
                        for r in rep["ranks"]
                    )
                    for rep in horizontal_reports
                }
            ),
            "exact_everywhere": bool(
                horizontal_reports
                and all(r["exact_everywhere"] for r in horizontal_reports)
            ),
        }
    if which == BASIC_B:
        out["vertical_degenerate"] = bool(
            vertical_reports
            and all(r["degenerate"] for r in vertical_reports)
        )
        out["vertical_count"] = len(vertical_reports)
    return out


def horizontal_triple_span_rank(q: QuotientSpaces) -> int:
    """Rank of the horizontal wedges of 1-forms with the +1 family.

    Equals 18, two short of the 20-dimensional space of horizontal
    3-forms: the +1 family has pure mixed complex type, so its wedges
    with 1-forms never reach the two real directions of fully
    holomorphic or fully antiholomorphic type.  The degree-3 ideal used
    by the quotient construction absorbs all horizontal 3-forms anyway,
    matching the stated shape of the top quotient space; this helper
    records the realized span so that the two-dimensional gap stays
    visible.
    """
    columns = []
    families = standard_two_form_families()
    for a in range(1, REEB_INDEX):
        one = KForm.basis(a)
        for form in families["w"]:
            columns.append(wedge(one, form).to_vector().real)
    matrix = np.column_stack(columns)
    return numerical_rank(matrix)
