"""Flat pointwise model of a 7-dimensional contact metric fiber.

Everything in this package happens on a single tangent space equipped with an
orthonormal coframe ``e1, ..., e7``.  The last coframe vector plays the role
of the contact form: ``eta = e7``, and its dual vector is the Reeb direction.
The remaining six directions form the horizontal subspace ``H``, organized in
three oriented planes ``(e1, e2), (e3, e4), (e5, e6)``.

The sign conventions (orientation of the volume form, scale and sign of
``d eta``, sign of the almost complex structure ``Phi`` on ``H``) are not
chosen by hand.  :func:`calibrate_model` runs a small exhaustive search over
the candidate conventions and keeps the unique tuple that satisfies the
anchor constraints listed in its docstring.  The winning model is the default
used across the package.

Forms are represented sparsely by :class:`KForm`: a map from strictly
increasing index tuples to complex coefficients.  The metric is the identity
in this coframe, so the inner product of two forms is the coefficientwise
Hermitian dot product and the Hodge star is a signed complement map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "REEB_INDEX",
    "HORIZONTAL_INDICES",
    "PLANES",
    "CalibrationError",
    "KForm",
    "ContactModel",
    "wedge",
    "hodge_star",
    "transverse_star",
    "contract_reeb",
    "form_inner",
    "form_norm",
    "basis_keys",
    "sort_key_sign",
    "calibrate_model",
    "calibration_constants",
    "standard_two_form_families",
]

REEB_INDEX = 7
HORIZONTAL_INDICES = (1, 2, 3, 4, 5, 6)
PLANES = ((1, 2), (3, 4), (5, 6))

_ALL_INDICES = tuple(range(1, 8))

# Lexicographic multi-index bases for each degree, shared by every module
# that needs a flat vector picture of Lambda^k.
_BASIS_KEYS = {
    k: tuple(itertools.combinations(_ALL_INDICES, k)) for k in range(8)
}
_KEY_POSITION = {
    k: {key: pos for pos, key in enumerate(keys)}
    for k, keys in _BASIS_KEYS.items()
}


def basis_keys(degree: int) -> tuple:
    """Increasing multi-indices spanning the degree-``degree`` forms."""
    if degree not in _BASIS_KEYS:
        raise ValueError(f"degree must be in 0..7, got {degree}")
    return _BASIS_KEYS[degree]


class CalibrationError(RuntimeError):
    """Raised when the convention search does not isolate a unique model."""


def sort_key_sign(indices):
    """Sort ``indices`` ascending; return (tuple, permutation sign).

    Returns sign 0 for repeated indices, which kills the wedge term.
    """
    idx = list(indices)
    sign = 1
    # insertion sort with parity tracking; inputs are tiny
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return tuple(idx), 0
    return tuple(idx), sign


class KForm:
    """Sparse alternating form on the model fiber.

    Coefficients are complex; keys are strictly increasing tuples drawn from
    ``1..7``.  A degree-0 form stores its single value under the empty tuple.
    """

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs=None):
        if not 0 <= degree <= 7:
            raise ValueError(f"degree must be in 0..7, got {degree}")
        self.degree = degree
        self.coeffs: dict = {}
        if coeffs:
            for key, value in coeffs.items():
                self._accumulate(tuple(key), complex(value))

    def _accumulate(self, key: tuple, value: complex) -> None:
        if len(key) != self.degree:
            raise ValueError(
                f"key {key} has length {len(key)}, expected {self.degree}"
            )
        skey, sign = sort_key_sign(key)
        if sign == 0:
            return
        for idx in skey:
            if idx not in _ALL_INDICES:
                raise ValueError(f"index {idx} outside 1..7 in key {key}")
        new = self.coeffs.get(skey, 0j) + sign * value
        if new == 0:
            self.coeffs.pop(skey, None)
        else:
            self.coeffs[skey] = new

    # -- constructors ---------------------------------------------------

    @classmethod
    def basis(cls, *indices) -> "KForm":
        """The coframe monomial ``e^{i1} ^ ... ^ e^{ik}``."""
        out = cls(len(indices))
        out._accumulate(tuple(indices), 1.0)
        return out

    @classmethod
    def zero(cls, degree: int) -> "KForm":
        return cls(degree)

    @classmethod
    def constant(cls, value) -> "KForm":
        out = cls(0)
        out._accumulate((), complex(value))
        return out

    @classmethod
    def from_vector(cls, degree: int, vector) -> "KForm":
        vec = np.asarray(vector)
        keys = basis_keys(degree)
        if vec.shape != (len(keys),):
            raise ValueError(
                f"expected vector of length {len(keys)}, got {vec.shape}"
            )
        out = cls(degree)
        for key, value in zip(keys, vec):
            if value != 0:
                out.coeffs[key] = complex(value)
        return out

    # -- linear structure -----------------------------------------------

    def copy(self) -> "KForm":
        out = KForm(self.degree)
        out.coeffs = dict(self.coeffs)
        return out

    def __add__(self, other: "KForm") -> "KForm":
        if not isinstance(other, KForm):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = self.copy()
        for key, value in other.coeffs.items():
            new = out.coeffs.get(key, 0j) + value
            if new == 0:
                out.coeffs.pop(key, None)
            else:
                out.coeffs[key] = new
        return out

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-1.0) * other

    def __neg__(self) -> "KForm":
        return (-1.0) * self

    def __mul__(self, scalar) -> "KForm":
        out = KForm(self.degree)
        s = complex(scalar)
        if s != 0:
            out.coeffs = {k: s * v for k, v in self.coeffs.items()}
        return out

    __rmul__ = __mul__

    def conjugate(self) -> "KForm":
        out = KForm(self.degree)
        out.coeffs = {k: v.conjugate() for k, v in self.coeffs.items()}
        return out

    # -- inspection -----------------------------------------------------

    def coefficient(self, *indices) -> complex:
        """Signed coefficient of the monomial with the given indices."""
        skey, sign = sort_key_sign(indices)
        if sign == 0:
            return 0j
        return sign * self.coeffs.get(skey, 0j)

    def terms(self):
        """Sorted (key, coefficient) pairs."""
        return sorted(self.coeffs.items())

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(v) <= tol for v in self.coeffs.values())

    def is_horizontal(self) -> bool:
        return all(REEB_INDEX not in key for key in self.coeffs)

    def to_vector(self) -> np.ndarray:
        keys = _KEY_POSITION[self.degree]
        vec = np.zeros(len(keys), dtype=complex)
        for key, value in self.coeffs.items():
            vec[keys[key]] = value
        return vec

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(v) ** 2 for v in self.coeffs.values())))

    def evaluate(self, *vectors) -> complex:
        """Evaluate on ``degree`` tangent vectors (length-7 arrays)."""
        if len(vectors) != self.degree:
            raise ValueError(
                f"need {self.degree} vectors, got {len(vectors)}"
            )
        mats = [np.asarray(v, dtype=complex) for v in vectors]
        total = 0j
        for key, value in self.coeffs.items():
            minor = np.array(
                [[vec[idx - 1] for vec in mats] for idx in key], dtype=complex
            )
            total += value * np.linalg.det(minor)
        return total

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"KForm({self.degree}, 0)"
        bits = []
        for key, value in self.terms():
            label = "e" + "".join(str(i) for i in key) if key else "1"
            bits.append(f"{value:+.4g}*{label}")
        return f"KForm({self.degree}, {' '.join(bits)})"


def wedge(*forms: KForm) -> KForm:
    """Exterior product of any number of forms."""
    if not forms:
        raise ValueError("wedge needs at least one form")
    acc = forms[0]
    for nxt in forms[1:]:
        degree = acc.degree + nxt.degree
        if degree > 7:
            raise ValueError("wedge degree exceeds the fiber dimension")
        out = KForm(degree)
        for ka, va in acc.coeffs.items():
            for kb, vb in nxt.coeffs.items():
                if set(ka) & set(kb):
                    continue
                out._accumulate(ka + kb, va * vb)
        acc = out
    return acc


def form_inner(a: KForm, b: KForm, model=None) -> complex:
    """Hermitian inner product, coefficientwise in the orthonormal coframe.

    Linear in the first argument, conjugated in the second.  The ``model``
    argument is accepted for interface uniformity; the metric is the
    identity in this coframe.
    """
    if a.degree != b.degree:
        raise ValueError("inner product needs forms of equal degree")
    total = 0j
    for key, value in a.coeffs.items():
        other = b.coeffs.get(key)
        if other is not None:
            total += value * other.conjugate()
    return total


def form_norm(a: KForm, model=None) -> float:
    return a.norm()


@dataclass(frozen=True, eq=False)
class ContactModel:
    """Calibrated convention set for the model fiber.

    ``orientation_sign`` fixes the volume form ``sign * e1^...^e7``;
    ``deta`` is the differential of the contact form (a horizontal 2-form);
    ``phi`` is the 7x7 matrix of the endomorphism that rotates each
    horizontal plane and kills the Reeb direction.
    """

    orientation_sign: int
    deta: KForm
    phi: np.ndarray
    label: str = "calibrated"

    # -- basic fields ----------------------------------------------------

    @property
    def eta(self) -> KForm:
        return KForm.basis(REEB_INDEX)

    @property
    def vol(self) -> KForm:
        return float(self.orientation_sign) * KForm.basis(*_ALL_INDICES)

    @property
    def omega(self) -> KForm:
        """The fundamental horizontal 2-form, identified with ``deta``."""
        return self.deta.copy()

    @property
    def deta_coefficient(self) -> float:
        """Common coefficient of ``deta`` on the three plane monomials."""
        return float(self.deta.coefficient(1, 2).real)

    @property
    def phi_sign(self) -> int:
        """Sign ``s`` in ``Phi(e_{2j-1} dual) = s * (e_{2j} dual)``."""
        return int(round(self.phi[1, 0]))

    def signature(self) -> tuple:
        """Hashable tag identifying the convention tuple (used for caches)."""
        return (
            int(self.orientation_sign),
            self.deta_coefficient,
            self.phi_sign,
        )

    # -- derived structures ----------------------------------------------

    def phi_pullback(self, oneform: KForm) -> KForm:
        """Pullback of a 1-form through ``phi``: ``(a o Phi)``."""
        if oneform.degree != 1:
            raise ValueError("phi_pullback acts on 1-forms")
        out = KForm(1)
        for (a,), value in oneform.coeffs.items():
            for b in _ALL_INDICES:
                entry = self.phi[a - 1, b - 1]
                if entry != 0:
                    out._accumulate((b,), value * entry)
        return out

    def complex_coframe(self) -> list:
        """The three (1, 0)-forms ``dz^j = e^{2j-1} - i * e^{2j-1} o Phi``."""
        out = []
        for j in (1, 2, 3):
            base = KForm.basis(2 * j - 1)
            out.append(base + (-1j) * self.phi_pullback(base))
        return out

    def transverse_gram(self) -> np.ndarray:
        """Gram matrix of ``(X, Y) -> (1/2) deta(X, Phi Y)`` on ``H``."""
        gram = np.zeros((6, 6))
        basis_vectors = np.eye(7)
        for a in range(6):
            for b in range(6):
                phib = self.phi @ basis_vectors[b]
                gram[a, b] = 0.5 * self.deta.evaluate(
                    basis_vectors[a], phib
                ).real
        return gram


def hodge_star(a: KForm, model: ContactModel) -> KForm:
    """Hodge star for the identity metric and the model's orientation.

    Complex-linear; characterized by ``x ^ star(conj y) = <x, y> vol``.
    """
    out = KForm(7 - a.degree)
    sigma = model.orientation_sign
    for key, value in a.coeffs.items():
        complement = tuple(i for i in _ALL_INDICES if i not in key)
        _, sign = sort_key_sign(key + complement)
        out._accumulate(complement, sigma * sign * value)
    return out


def transverse_star(a: KForm, model: ContactModel) -> KForm:
    """Six-dimensional Hodge star on horizontal forms.

    The horizontal volume form is the Reeb contraction of the full volume
    form, ``sign * e1^...^e6``.  Vertical input is rejected.
    """
    if not a.is_horizontal():
        raise ValueError("transverse_star expects a horizontal form")
    if a.degree > 6:
        raise ValueError("horizontal forms have degree at most 6")
    out = KForm(6 - a.degree)
    sigma = model.orientation_sign
    for key, value in a.coeffs.items():
        complement = tuple(i for i in HORIZONTAL_INDICES if i not in key)
        _, sign = sort_key_sign(key + complement)
        out._accumulate(complement, sigma * sign * value)
    return out


def contract_reeb(a: KForm, model: ContactModel = None) -> KForm:
    """Interior product with the Reeb vector (the ``e7`` direction)."""
    if a.degree == 0:
        return KForm.zero(0)
    out = KForm(a.degree - 1)
    for key, value in a.coeffs.items():
        if REEB_INDEX not in key:
            continue
        # the Reeb index is maximal, hence always last in an increasing key
        sign = (-1) ** (len(key) - 1)
        out._accumulate(key[:-1], sign * value)
    return out


# ---------------------------------------------------------------------------
# Standard two-form families
# ---------------------------------------------------------------------------

def _fixed_dz(j: int) -> KForm:
    """The fixed symbol combination ``e^{2j-1} - i e^{2j}``."""
    return KForm.basis(2 * j - 1) + (-1j) * KForm.basis(2 * j)


def standard_two_form_families() -> dict:
    """The two standard families of horizontal 2-forms.

    ``w`` spans the 8-dimensional eigenspace the package calls the
    self-dual block, ``v`` the 6-dimensional one.  Both are built from the
    fixed complex combinations ``dz^j = e^{2j-1} - i e^{2j}`` so that their
    real expansions are convention independent:

        w1 = (dz1 ^ cbar dz2 - dz2 ^ cbar dz1) / 2          etc.
        v1 = (dz1 ^ dz2 + cbar dz1 ^ cbar dz2) / 2          etc.

    Every member has squared norm 2.
    """
    dz = {j: _fixed_dz(j) for j in (1, 2, 3)}
    dzb = {j: dz[j].conjugate() for j in (1, 2, 3)}
    pairs = ((1, 2), (1, 3), (2, 3))

    w = []
    for mu, nu in pairs:
        w.append(0.5 * (wedge(dz[mu], dzb[nu]) - wedge(dz[nu], dzb[mu])))
        w.append(0.5j * (wedge(dz[mu], dzb[nu]) + wedge(dz[nu], dzb[mu])))
    w.append(0.5j * (wedge(dz[1], dzb[1]) - wedge(dz[3], dzb[3])))
    w.append(0.5j * (wedge(dz[2], dzb[2]) - wedge(dz[3], dzb[3])))

    v = []
    for mu, nu in pairs:
        v.append(0.5 * (wedge(dz[mu], dz[nu]) + wedge(dzb[mu], dzb[nu])))
        v.append(0.5j * (wedge(dzb[mu], dzb[nu]) - wedge(dz[mu], dz[nu])))

    return {"w": w, "v": v}


# ---------------------------------------------------------------------------
# Calibration
# ---------------------------------------------------------------------------

def _candidate_model(sigma: int, kappa: float, s: int) -> ContactModel:
    deta = kappa * (
        KForm.basis(1, 2) + KForm.basis(3, 4) + KForm.basis(5, 6)
    )
    phi = np.zeros((7, 7))
    for odd, even in PLANES:
        phi[even - 1, odd - 1] = s
        phi[odd - 1, even - 1] = -s
    return ContactModel(
        orientation_sign=sigma,
        deta=deta,
        phi=phi,
        label=f"sigma={sigma},kappa={kappa},s={s}",
    )


def _mixing_operator_matrix(model: ContactModel) -> np.ndarray:
    """Matrix of ``a -> star(eta ^ deta ^ a)`` on 2-forms, lex basis."""
    keys = basis_keys(2)
    mat = np.zeros((len(keys), len(keys)))
    for col, key in enumerate(keys):
        image = hodge_star(
            wedge(model.eta, model.deta, KForm.basis(*key)), model
        )
        for row_key, value in image.coeffs.items():
            mat[_KEY_POSITION[2][row_key], col] = value.real
    return mat


_EXPECTED_MULTIPLICITIES = {1.0: 8, -1.0: 6, -2.0: 1, 0.0: 6}


def _spectrum_multiplicities(mat: np.ndarray, tol: float):
    evals = np.linalg.eigvalsh(0.5 * (mat + mat.T))
    counts = {key: 0 for key in _EXPECTED_MULTIPLICITIES}
    stray = []
    for ev in evals:
        for target in counts:
            if abs(ev - target) <= tol:
                counts[target] += 1
                break
        else:
            stray.append(float(ev))
    return counts, stray


def _check_candidate(model: ContactModel) -> dict:
    tol = 1e-10
    mat = _mixing_operator_matrix(model)
    symmetric = bool(np.max(np.abs(mat - mat.T)) <= 1e-12)
    counts, stray = _spectrum_multiplicities(mat, tol)
    spectrum_ok = symmetric and not stray and counts == _EXPECTED_MULTIPLICITIES

    families = standard_two_form_families()

    def _eigen_resid(form: KForm, expected: float) -> float:
        image = hodge_star(wedge(model.eta, model.deta, form), model)
        return (image - expected * form).norm()

    w_ok = all(_eigen_resid(f, 1.0) <= tol for f in families["w"])
    v_ok = all(_eigen_resid(f, -1.0) <= tol for f in families["v"])
    omega_ok = _eigen_resid(model.deta, -2.0) <= tol * max(
        model.deta.norm(), 1.0
    )

    gram = model.transverse_gram()
    gram_sym = np.max(np.abs(gram - gram.T)) <= 1e-12
    metric_pd = gram_sym and bool(np.min(np.linalg.eigvalsh(gram)) > 1e-12)

    coframe_ok = True
    for j in (1, 2, 3):
        dz = _fixed_dz(j)
        resid = (model.phi_pullback(dz) - 1j * dz).norm()
        if resid > 1e-12:
            coframe_ok = False
            break

    return {
        "label": model.label,
        "spectrum_ok": spectrum_ok,
        "w_plus_one": w_ok,
        "v_minus_one": v_ok,
        "omega_minus_two": omega_ok,
        "transverse_metric_pd": metric_pd,
        "coframe_type_ok": coframe_ok,
        "accepted": all(
            (spectrum_ok, w_ok, v_ok, omega_ok, metric_pd, coframe_ok)
        ),
    }


def calibrate_model(with_report: bool = False):
    """Search the convention space and return the unique calibrated model.

    Candidates range over orientation sign (+1/-1), the scale of ``deta``
    on each plane (+-2, +-1, +-1/2) and the rotation sign of ``phi``.  A
    candidate is accepted when:

    * the mixing operator ``a -> star(eta ^ deta ^ a)`` on 2-forms is
      symmetric with eigenvalue multiplicities ``{+1: 8, -1: 6, -2: 1, 0: 6}``;
    * the ``w`` family sits in the +1 eigenspace, the ``v`` family in the
      -1 eigenspace and ``deta`` itself in the -2 eigenspace;
    * ``(X, Y) -> (1/2) deta(X, Phi Y)`` is positive definite on ``H``;
    * the fixed combinations ``e^{2j-1} - i e^{2j}`` are +i eigenvectors of
      the ``phi`` pullback (so they deserve the name ``dz^j``).

    Raises :class:`CalibrationError` unless exactly one candidate survives.
    """
    rows = []
    winners = []
    for sigma in (1, -1):
        for kappa in (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0):
            for s in (1, -1):
                candidate = _candidate_model(sigma, kappa, s)
                row = _check_candidate(candidate)
                rows.append(row)
                if row["accepted"]:
                    winners.append(candidate)
    if len(winners) != 1:
        raise CalibrationError(
            f"expected exactly one surviving convention, got {len(winners)}"
        )
    model = winners[0]
    if not with_report:
        return model
    report = {
        "candidates": rows,
        "accepted": [r["label"] for r in rows if r["accepted"]],
        "constants": calibration_constants(model),
    }
    return model, report


def calibration_constants(model: ContactModel) -> dict:
    """Realized numerical constants of a calibrated model."""
    gram = model.transverse_gram()
    ratio = float(gram[0, 0])

    half_deta_cubed = wedge(
        model.eta,
        0.5 * model.deta,
        0.5 * model.deta,
        0.5 * model.deta,
    )
    vol = model.vol
    vol_coeff = vol.coefficient(*_ALL_INDICES)
    volume_ratio = float(
        (half_deta_cubed.coefficient(*_ALL_INDICES) / vol_coeff).real
    )

    omega = model.omega
    half_omega_sq = 0.5 * wedge(omega, omega)
    star_t_omega = transverse_star(omega, model)
    denom = form_inner(half_omega_sq, half_omega_sq).real
    scale = form_inner(star_t_omega, half_omega_sq).real / denom

    double_star_signs = {}
    for k in range(7):
        key = HORIZONTAL_INDICES[:k]
        probe = KForm.basis(*key) if k else KForm.constant(1.0)
        twice = transverse_star(transverse_star(probe, model), model)
        double_star_signs[k] = int(
            round(form_inner(twice, probe).real / form_inner(probe, probe).real)
        )

    return {
        "orientation_sign": int(model.orientation_sign),
        "deta_coefficient": model.deta_coefficient,
        "phi_sign": model.phi_sign,
        "transverse_metric_ratio": ratio,
        "volume_ratio": volume_ratio,
        "transverse_star_omega_scale": float(scale),
        "transverse_double_star_signs": double_star_signs,
    }
