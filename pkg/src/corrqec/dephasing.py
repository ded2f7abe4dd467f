"""Exact correlated-dephasing channel and its weight-space coefficients.

The channel multiplies each density-matrix element by exp(-C[eta, mu]) in
the sigma_z product basis, with

    C[eta, mu] = |eta xor mu| (Gamma_0 - Gamma_r) + (|eta| - |mu|)^2 Gamma_r.

Its Pauli-Z representation has coefficient matrix alpha = 4^-n H e^-C H
(H the +-1 Walsh kernel), whose diagonal depends on the label weight only
and is also available through a Gaussian-average quadrature as beta(n, w).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .bitops import index_weights, popcount
from .errors import ConvergenceError, DomainError, SizeLimitError

__all__ = [
    "DecoherencePair", "BitString", "AlphaMatrix", "coefficient_c",
    "apply_channel", "alpha_matrix", "p_of_x", "beta", "log_beta",
    "walsh_transform", "hermite_nodes_logweights",
]


@dataclass(frozen=True)
class DecoherencePair:
    """(Gamma_0, Gamma_r) of the equal-distance channel.

    Construction enforces Gamma_0 >= Gamma_r >= 0, the monotone regime this
    simplified two-parameter model is valid in.
    """

    gamma0: float
    gammaR: float

    def __post_init__(self):
        if not (self.gamma0 >= 0.0 and self.gammaR >= 0.0):
            raise DomainError(
                f"decoherence parameters must be >= 0, got ({self.gamma0}, {self.gammaR})")
        if self.gamma0 < self.gammaR:
            raise DomainError(
                f"gamma0 ({self.gamma0}) < gammaR ({self.gammaR}) lies outside "
                "the monotone regime of this channel")


@dataclass(frozen=True)
class BitString:
    """Length-n GF(2) vector packed into an int (bit j = coordinate j)."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("register length must be >= 1")
        if not 0 <= self.bits < (1 << self.n):
            raise DomainError(f"bit pattern {self.bits} out of range for n={self.n}")

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __xor__(self, other: "BitString") -> "BitString":
        if self.n != other.n:
            raise DomainError("length mismatch")
        return BitString(self.n, self.bits ^ other.bits)

    def dot(self, other: "BitString") -> int:
        """GF(2) inner product."""
        if self.n != other.n:
            raise DomainError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    @classmethod
    def from_string(cls, text: str) -> "BitString":
        # character position j is coordinate j
        bits = 0
        for j, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << j
            elif ch != "0":
                raise DomainError(f"invalid bit character {ch!r}")
        return cls(len(text), bits)

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> j) & 1 else "0" for j in range(self.n))


def coefficient_c(eta: BitString, mu: BitString, pair: DecoherencePair) -> float:
    if eta.n != mu.n:
        raise DomainError("length mismatch")
    flips = (eta.bits ^ mu.bits).bit_count()
    dw = eta.weight - mu.weight
    return flips * (pair.gamma0 - pair.gammaR) + dw * dw * pair.gammaR


def _as_matrix(rho):
    if hasattr(rho, "entries"):
        return np.asarray(rho.entries), True
    return np.asarray(rho), False


def apply_channel(rho, pair: DecoherencePair | None = None, *,
                  gamma_matrix=None):
    """Elementwise decay exp(-C[eta, mu]) of a density matrix.

    Either a DecoherencePair (the all-distances-equal case) or a full
    symmetric per-qubit-pair matrix gamma_matrix[l, m] may be supplied;
    the latter builds C = sum_lm (eta_l - mu_l)(eta_m - mu_m) Gamma_lm.
    Accepts a bare ndarray or any object with .n/.entries and returns the
    same kind.  Coefficients are generated in row blocks, never as a full
    4^n table.
    """
    ent, wrapped = _as_matrix(rho)
    dim = ent.shape[0]
    if ent.ndim != 2 or ent.shape[1] != dim or dim & (dim - 1) or dim == 0:
        raise DomainError("density matrix must be square with power-of-two size")
    n = dim.bit_length() - 1
    if n > 14:
        raise SizeLimitError(f"{n} qubits exceeds the 14-qubit dense limit")
    if (pair is None) == (gamma_matrix is None):
        raise DomainError("supply exactly one of pair and gamma_matrix")

    idx = np.arange(dim, dtype=np.uint64)
    out = np.empty_like(ent, dtype=complex)
    block = max(1, (1 << 22) // dim)
    if pair is not None:
        dg = pair.gamma0 - pair.gammaR
        w = index_weights(n)
        for i0 in range(0, dim, block):
            rows = idx[i0:i0 + block]
            flips = popcount(rows[:, None] ^ idx[None, :])
            dw = w[i0:i0 + block, None] - w[None, :]
            out[i0:i0 + block] = ent[i0:i0 + block] * np.exp(
                -(dg * flips + pair.gammaR * dw * dw))
    else:
        G = np.asarray(gamma_matrix, dtype=float)
        if G.shape != (n, n):
            raise DomainError(f"gamma_matrix must be {n}x{n}")
        G = 0.5 * (G + G.T)
        bits = ((np.arange(dim)[:, None] >> np.arange(n)) & 1).astype(float)
        BG = bits @ G
        quad = np.einsum("ij,ij->i", BG, bits)
        for i0 in range(0, dim, block):
            cross = BG[i0:i0 + block] @ bits.T
            C = quad[i0:i0 + block, None] + quad[None, :] - 2.0 * cross
            out[i0:i0 + block] = ent[i0:i0 + block] * np.exp(-C)

    if wrapped:
        return type(rho)(n=rho.n, entries=out)
    return out


def walsh_transform(vec: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh transform y[k] = sum_j (-1)^(k.j) x[j] over the last axis."""
    a = np.array(vec, dtype=float, copy=True)
    m = a.shape[-1]
    if m & (m - 1) or m == 0:
        raise DomainError("length must be a power of two")
    h = 1
    lead = a.shape[:-1]
    while h < m:
        b = a.reshape(*lead, m // (2 * h), 2, h)
        x = b[..., 0, :].copy()
        y = b[..., 1, :]
        b[..., 0, :] = x + y
        b[..., 1, :] = x - y
        h *= 2
    return a


@dataclass(frozen=True)
class AlphaMatrix:
    """Real 2^n x 2^n coefficient matrix of the Pauli-Z representation."""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        dim = 1 << self.n
        if self.entries.shape != (dim, dim):
            raise DomainError(f"expected shape {(dim, dim)}, got {self.entries.shape}")


def alpha_matrix(n: int, pair: DecoherencePair) -> AlphaMatrix:
    """Two-sided Walsh transform of exp(-C), scaled by 4^-n."""
    if n < 1:
        raise DomainError("need n >= 1")
    if n > 12:
        raise SizeLimitError(f"alpha matrix for n={n} exceeds the 4^12 memory cap")
    dim = 1 << n
    w = index_weights(n)
    idx = np.arange(dim, dtype=np.uint64)
    M = np.empty((dim, dim))
    dg = pair.gamma0 - pair.gammaR
    block = max(1, (1 << 22) // dim)
    for i0 in range(0, dim, block):
        flips = popcount(idx[i0:i0 + block, None] ^ idx[None, :])
        dw = w[i0:i0 + block, None] - w[None, :]
        M[i0:i0 + block] = np.exp(-(dg * flips + pair.gammaR * dw * dw))
    M = walsh_transform(M)
    M = walsh_transform(M.T).T
    M *= 0.25 ** n
    return AlphaMatrix(n, M)


def p_of_x(pair: DecoherencePair, x):
    """Flip weight p_x = (1 - exp(-(G0-Gr)) cos 2x)/2, evaluated without cancellation."""
    g = pair.gamma0 - pair.gammaR
    xa = np.asarray(x, dtype=float)
    val = 0.5 * (-math.expm1(-g) + 2.0 * math.exp(-g) * np.sin(xa) ** 2)
    return float(val) if np.isscalar(x) or xa.ndim == 0 else val


def _log_p_both(pair: DecoherencePair, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # log p_x and log(1 - p_x) from all-nonnegative decompositions:
    # p = ((1 - e^-g) + 2 e^-g sin^2 x)/2, 1-p the same with cos^2 x
    g = pair.gamma0 - pair.gammaR
    one_minus = -math.expm1(-g)
    damp = 2.0 * math.exp(-g)
    with np.errstate(divide="ignore"):
        lp = math.log(0.5) + np.log(one_minus + damp * np.sin(x) ** 2)
        l1p = math.log(0.5) + np.log(one_minus + damp * np.cos(x) ** 2)
    return lp, l1p


_HERMITE_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def hermite_nodes_logweights(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Hermite nodes and log-weights.

    Weights come from the Christoffel sum 1/sum_k p_k(x_i)^2 over the
    orthonormal polynomials, run with periodic rescaling so the result
    stays finite far beyond the underflow point of the plain weights.
    """
    cached = _HERMITE_CACHE.get(m)
    if cached is not None:
        return cached
    x, _ = special.roots_hermite(m)
    a = np.full(m, math.pi ** -0.25)
    b = np.zeros(m)
    acc = a * a
    scale_log = np.zeros(m)
    for k in range(m - 1):
        c = x * math.sqrt(2.0 / (k + 1)) * a - math.sqrt(k / (k + 1)) * b
        b, a = a, c
        acc = acc + a * a
        big = np.abs(a) > 1e150
        if big.any():
            s = np.where(big, np.abs(a), 1.0)
            a = a / s
            b = b / s
            acc = acc / (s * s)
            scale_log = scale_log + 2.0 * np.log(s)
    logw = -(np.log(acc) + scale_log)
    _HERMITE_CACHE[m] = (x, logw)
    return x, logw


def _log_beta_gh(n, w, pair, nodes):
    u, logw = hermite_nodes_logweights(nodes)
    lp, l1p = _log_p_both(pair, math.sqrt(pair.gammaR) * u)
    terms = logw.copy()
    if w > 0:
        terms = terms + w * lp
    if w < n:
        terms = terms + (n - w) * l1p
    return float(special.logsumexp(terms)) - 0.5 * math.log(math.pi)


def _log_beta_wide(n, w, pair, log_tol):
    # Gaussian too wide for the Hermite substitution: composite panels in log space
    L = 8.0 * math.sqrt(pair.gammaR)
    gx, gw = np.polynomial.legendre.leggauss(15)
    log_gw = np.log(gw)
    panels = max(16, int(math.ceil(2.0 * L / (math.pi / 8.0))))
    prev = None
    for _ in range(8):
        edges = np.linspace(-L, L, panels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        xs = mid[:, None] + half[:, None] * gx
        lp, l1p = _log_p_both(pair, xs)
        terms = -xs * xs / pair.gammaR - 0.5 * math.log(math.pi * pair.gammaR) \
            + np.log(half)[:, None] + log_gw
        if w > 0:
            terms = terms + w * lp
        if w < n:
            terms = terms + (n - w) * l1p
        cur = float(special.logsumexp(terms.ravel()))
        if prev is not None and abs(cur - prev) < log_tol:
            return cur
        prev = cur
        panels *= 2
    raise ConvergenceError("wide-Gaussian beta quadrature failed to settle",
                           estimate=prev, error_estimate=abs(cur - prev))


def log_beta(n: int, w: int, pair: DecoherencePair, *,
             log_tol: float = 1e-10, start_nodes: int = 64,
             max_nodes: int = 8192) -> float:
    """log beta_w; absolute log-space accuracy tracks log_tol."""
    if n < 1 or not 0 <= w <= n:
        raise DomainError(f"invalid (n, w) = ({n}, {w})")
    if pair.gammaR == 0.0:
        po = 0.5 * (-math.expm1(-pair.gamma0))
        val = 0.0
        if w > 0:
            val += w * math.log(po) if po > 0.0 else -math.inf
        if w < n:
            val += (n - w) * math.log1p(-po)
        return val
    if math.sqrt(pair.gammaR) > math.pi / 4.0:
        return _log_beta_wide(n, w, pair, log_tol)
    m = start_nodes
    prev = cur = _log_beta_gh(n, w, pair, m)
    while m < max_nodes:
        m *= 2
        cur = _log_beta_gh(n, w, pair, m)
        if abs(cur - prev) < log_tol or (cur == -math.inf and prev == -math.inf):
            return cur
        prev = cur
    raise ConvergenceError(f"beta quadrature not converged at {max_nodes} nodes",
                           estimate=prev, error_estimate=abs(cur - prev))


def beta(n: int, w: int, pair: DecoherencePair, *,
         log_tol: float = 1e-13) -> float:
    """Diagonal weight-w coefficient as a plain float (may underflow for huge n).

    Uses a tighter default convergence target than log_beta so that sums
    of C(n, w) * beta over w stay good to ~1e-12.
    """
    return math.exp(log_beta(n, w, pair, log_tol=log_tol))
