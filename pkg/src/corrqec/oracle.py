"""Exact small-n simulation: encode, dephase, recover, and score fidelity.

This module is the ground-truth side of every cross-check.  Everything is
dense linear algebra on 2^n amplitude vectors; the design envelope is n <= 10
for full pipelines, so clarity wins over cleverness throughout.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .bitops import index_weights
from .codes import CssCodePair, codewords
from .dephasing import AlphaMatrix, BitString, DecoherencePair, apply_channel, walsh_transform
from .errors import DomainError, SizeLimitError

__all__ = [
    "PureState", "DensityMatrix", "PauliLabel", "encode", "apply_recovery",
    "fidelity_formula", "residual_exact", "x_polarized_state", "random_state",
    "correction_labels",
]

_PIPELINE_CAP = 10


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over n qubits (basis index bit j = qubit j)."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != 1 << self.n:
            raise DomainError(f"expected 2^{self.n} amplitudes, got {amps.shape[0]}")
        if abs(np.linalg.norm(amps) - 1.0) > 1e-12:
            raise DomainError("state is not normalized")
        object.__setattr__(self, "amplitudes", amps)

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(self.n, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian 2^n x 2^n state, possibly subnormalized.

    No upper trace bound is enforced: recovery discards the amplitude that
    leaves the correctable syndrome set (trace < 1), and on degenerate codes
    the term-by-term recovery sum can overshoot 1 -- callers that need a
    proper state assert it themselves.  Positivity is likewise checked on
    demand (assert_physical); an eigendecomposition per intermediate would
    dominate the cost of every pipeline.
    """

    n: int
    entries: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        dim = 1 << self.n
        if mat.shape != (dim, dim):
            raise DomainError(f"expected shape ({dim}, {dim}), got {mat.shape}")
        if np.abs(mat - mat.conj().T).max() > 1e-10:
            raise DomainError("matrix is not Hermitian")
        tr = mat.trace()
        if abs(tr.imag) > 1e-12 or tr.real < -1e-12:
            raise DomainError(f"invalid trace {tr}")
        object.__setattr__(self, "entries", mat)

    @property
    def trace(self) -> float:
        return float(self.entries.trace().real)

    def assert_physical(self, tol: float = 1e-10) -> None:
        low = float(np.linalg.eigvalsh(self.entries).min())
        if low < -tol:
            raise DomainError(f"negative eigenvalue {low}")


@dataclass(frozen=True)
class PauliLabel:
    """One recovery term: X on the support of x_part, Z on the support of z_part."""

    x_part: BitString
    z_part: BitString

    def __post_init__(self):
        if self.x_part.n != self.z_part.n:
            raise DomainError("X and Z parts must have equal length")


def correction_labels(pair: CssCodePair) -> list[PauliLabel]:
    """All X_mu Z_nu with |mu| <= t and |nu| <= t, in (mu, nu) index order.

    This is the exact term set of the recovery map; tests use it for the
    brute-force route, apply_recovery batches the nu sum internally.
    """
    low = [int(v) for v in np.nonzero(index_weights(pair.n) <= pair.t)[0]]
    return [PauliLabel(BitString(pair.n, m), BitString(pair.n, v))
            for m in low for v in low]


@functools.lru_cache(maxsize=128)
def _isometry(pair: CssCodePair) -> np.ndarray:
    # columns = logical basis states, ordered by the coset-representative sort
    return np.column_stack([st.amplitudes for st in codewords(pair)])


def encode(logical, pair: CssCodePair) -> PureState:
    """Map 2^k logical amplitudes onto the code space (linear isometry)."""
    if pair.n > 12:
        raise SizeLimitError(f"encode is capped at n = 12, got {pair.n}")
    vec = np.asarray(logical, dtype=complex).reshape(-1)
    if vec.shape[0] != 1 << pair.k:
        raise DomainError(f"expected 2^{pair.k} logical amplitudes, got {vec.shape[0]}")
    if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
        raise DomainError("logical input must be normalized")
    return PureState(pair.n, _isometry(pair) @ vec)


def apply_recovery(rho: DensityMatrix, pair: CssCodePair) -> DensityMatrix:
    """Syndrome recovery: sum of P X_mu Z_nu rho Z_nu X_mu P over weights <= t.

    The nu sum is applied first: sum_nu Z_nu rho Z_nu multiplies entry (y, y')
    by g[y xor y'] where g is the Walsh transform of the weight-<=t indicator.
    Each mu term is then an index permutation followed by the code-space
    sandwich through the isometry V, so the cost is |{mu}| dense products
    instead of |{mu}| x |{nu}|.
    """
    if rho.n != pair.n:
        raise DomainError("state and code length differ")
    if pair.n > _PIPELINE_CAP:
        raise SizeLimitError(f"recovery is capped at n = {_PIPELINE_CAP}")
    dim = 1 << pair.n
    idx = np.arange(dim)
    mask = (index_weights(pair.n) <= pair.t).astype(float)
    g = walsh_transform(mask)
    masked = rho.entries * g[idx[:, None] ^ idx[None, :]]
    v = _isometry(pair)
    acc = np.zeros((v.shape[1], v.shape[1]), dtype=complex)
    for mu in np.nonzero(mask)[0]:
        perm = idx ^ mu
        block = masked[np.ix_(perm, perm)]
        acc += v.T @ (block @ v)
    return DensityMatrix(pair.n, v @ acc @ v.T)


def fidelity_formula(psi: PureState, alpha: AlphaMatrix, pair: CssCodePair) -> float:
    """Recovered fidelity from the channel coefficient matrix alone.

    F = sum over |mu| <= t of z^T_mu alpha z_mu, where (z_mu)_nu is the
    Z-expectation <psi|Z_(mu xor nu)|psi> and z itself is the Walsh transform
    of the measurement distribution |amplitudes|^2.  The full double sum over
    (nu, nu') is kept at every n <= 10; it is a single dense quadratic form
    per mu, so truncating it would save nothing.
    """
    if psi.n != pair.n or alpha.n != pair.n:
        raise DomainError("state, coefficient matrix and code must share n")
    if pair.n > _PIPELINE_CAP:
        raise SizeLimitError(f"fidelity formula is capped at n = {_PIPELINE_CAP}")
    z = walsh_transform(np.abs(psi.amplitudes) ** 2)
    idx = np.arange(1 << pair.n)
    mus = np.nonzero(index_weights(pair.n) <= pair.t)[0]
    shifted = z[idx[None, :] ^ mus[:, None]]
    return float(np.sum((shifted @ alpha.entries) * shifted))


def residual_exact(psi: PureState, pair_dec: DecoherencePair,
                   pair_code: CssCodePair) -> float:
    """1 - fidelity through the full encode -> dephase -> recover pipeline.

    psi holds the logical amplitudes (a k-qubit state).
    """
    if psi.n != pair_code.k:
        raise DomainError(f"logical state has {psi.n} qubits, code expects {pair_code.k}")
    if pair_code.n > _PIPELINE_CAP:
        raise SizeLimitError(f"exact pipeline is capped at n = {_PIPELINE_CAP}")
    encoded = encode(psi.amplitudes, pair_code)
    noisy = apply_channel(encoded.to_density(), pair_dec)
    recovered = apply_recovery(noisy, pair_code)
    fid = np.vdot(encoded.amplitudes, recovered.entries @ encoded.amplitudes)
    return 1.0 - float(fid.real)


def x_polarized_state(n: int) -> PureState:
    """Product state with every qubit along +x: uniform amplitudes 2^(-n/2)."""
    if n < 1:
        raise DomainError("need n >= 1")
    if n > 14:
        raise SizeLimitError("x-polarized state capped at n = 14")
    return PureState(n, np.full(1 << n, 2.0 ** (-0.5 * n)))


def random_state(n: int, rng: np.random.Generator) -> PureState:
    """Haar-like random state: normalized complex Gaussian amplitudes."""
    if n > 14:
        raise SizeLimitError("random state capped at n = 14")
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return PureState(n, amps / np.linalg.norm(amps))
