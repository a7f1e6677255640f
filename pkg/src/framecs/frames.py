"""Redundant dictionaries (tight and general frames) as linear operators.

A dictionary D maps coefficient vectors in C^d to signals in C^n
(synthesis); its adjoint D* computes analysis coefficients.  Structured
constructors (oversampled DFT, Gabor) get FFT fast paths; everything can
fall back to a dense matrix below the materialization cap.

All arithmetic is complex double precision.  Real signals ride along with
zero imaginary part.
"""

from __future__ import annotations

import math

import numpy as np

from .linops import MATERIALIZATION_CAP, LinearOperator

__all__ = [
    "Dictionary",
    "build_oversampled_dft",
    "build_gabor",
    "build_concat",
    "build_identity",
    "from_matrix",
    "tighten",
    "frame_bounds",
    "coherence",
    "gram_pnorm_factor",
]


class Dictionary(LinearOperator):
    """An n x d synthesis operator with analysis adjoint.

    ``apply`` maps coefficients (length d) to a signal (length n);
    ``adjoint`` maps a signal to coefficients.  ``tight`` marks frames
    known to satisfy D D* = I.
    """

    def __init__(self, n, d, apply, adjoint, kind, tight=False):
        super().__init__(in_dim=d, out_dim=n, apply=apply, adjoint=adjoint)
        self.n = int(n)
        self.d = int(d)
        self.kind = kind
        self.tight = bool(tight)
        self._bounds_cache: tuple[float, float] | None = None

    def __repr__(self):
        return (
            f"Dictionary(kind={self.kind!r}, n={self.n}, d={self.d}, "
            f"tight={self.tight})"
        )


def build_oversampled_dft(n: int, c: int = 1) -> Dictionary:
    """Oversampled DFT frame: d = c*n atoms on a c-times finer frequency grid.

    Atom k has entries exp(-2*pi*i*k*t/(c*n)) / sqrt(c*n) for t = 0..n-1,
    so D D* = I and every atom has norm 1/sqrt(c).  c = 1 gives the
    unitary n-point DFT.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if c < 1:
        raise ValueError("oversampling factor c must be >= 1")
    n = int(n)
    c = int(c)
    d = c * n
    root = math.sqrt(d)

    def apply(x: np.ndarray) -> np.ndarray:
        # Dx is the leading n outputs of the length-d forward DFT of x.
        return np.fft.fft(x)[:n] / root

    def adjoint(f: np.ndarray) -> np.ndarray:
        z = np.zeros(d, dtype=complex)
        z[:n] = f
        return np.fft.ifft(z) * root

    return Dictionary(n, d, apply, adjoint, kind="oversampled_dft", tight=True)


def _gabor_grid(n: int, a: int, b: float) -> tuple[int, int]:
    """Number of time shifts (k2*a in [0,n)) and frequencies (k1*b in [0,1))."""
    n_time = int(math.ceil(n / a))
    n_freq = int(math.ceil(1.0 / b - 1e-12))
    return n_time, n_freq


def build_gabor(n: int, window_sigma: float, a: int, b: float) -> Dictionary:
    """Gabor frame with a circularly wrapped Gaussian window.

    Atoms are g((t - k2*a) mod n) * exp(2*pi*i*k1*b*t), ell2-normalized,
    indexed on the grid k2*a in [0,n), k1*b in [0,1).  The window is
    g(t) = exp(-t^2 / (2*sigma^2)) evaluated at the signed circular
    distance; sigma = inf gives a flat window.

    Grids with a*b > 1 are undersampled and cannot form a frame; they are
    rejected.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if a < 1:
        raise ValueError("time step a must be >= 1 sample")
    if not (0.0 < b <= 1.0):
        raise ValueError("frequency step b must lie in (0, 1]")
    if a * b > 1.0 + 1e-12:
        raise ValueError(
            f"undersampled Gabor grid: a*b = {a * b:.6g} > 1 cannot be a frame"
        )
    n = int(n)
    a = int(a)
    n_time, n_freq = _gabor_grid(n, a, b)
    d = n_time * n_freq

    # Window table: col k2 holds g((t - k2*a) mod n), wrapped to (-n/2, n/2].
    t = np.arange(n)
    offsets = (t[:, None] - a * np.arange(n_time)[None, :]) % n
    offsets = np.where(offsets > n / 2, offsets - n, offsets).astype(float)
    if math.isinf(window_sigma):
        windows = np.ones_like(offsets)
    else:
        windows = np.exp(-(offsets**2) / (2.0 * window_sigma**2))
    gnorm = math.sqrt(float(np.sum(windows[:, 0] ** 2)))
    if gnorm == 0.0:
        raise ValueError("window vanished; sigma too small for this n")

    # Phase ramps exp(2*pi*i*k1*b*t) for all k1 at once (n_freq x n).  When
    # b = 1/Q with integer Q the ramp is t-periodic mod Q, which is what the
    # FFT fast path below exploits; for general b we keep the dense ramps.
    q = 1.0 / b
    q_int = int(round(q))
    fast = abs(q - q_int) < 1e-12 and q_int == n_freq
    if fast:
        # Phases repeat with period Q = 1/b, so time splits as t = alpha*Q + tau
        # and both directions become one small FFT plus a batched window
        # contraction.  Complex vectors ride through the real GEMMs as
        # interleaved (re, im) float pairs.
        pad = (-n) % q_int
        w3 = np.vstack([windows, np.zeros((pad, n_time))]) if pad else windows
        w3 = w3.reshape(-1, q_int, n_time)
        n_alpha = w3.shape[0]
        w_qap = np.ascontiguousarray(w3.transpose(1, 0, 2))  # [tau, alpha, k2]
        w_qpa = np.ascontiguousarray(w3.transpose(1, 2, 0))  # [tau, k2, alpha]

        def apply(x: np.ndarray) -> np.ndarray:
            coef = np.ascontiguousarray(x.reshape(n_time, n_freq).T)  # [k1, k2]
            # ctab[tau, k2] = sum_k1 coef[k1, k2] e^{2 pi i k1 tau / Q}
            ctab = np.fft.ifft(coef, axis=0) * q_int
            cv = ctab.view(np.float64).reshape(q_int, n_time, 2)
            out = np.matmul(w_qap, cv)  # [tau, alpha, 2]
            out = np.ascontiguousarray(out.transpose(1, 0, 2)).view(np.complex128)
            return out.reshape(n_alpha * q_int)[:n] / gnorm

        def adjoint(f: np.ndarray) -> np.ndarray:
            if pad:
                f = np.concatenate([f, np.zeros(pad, dtype=complex)])
            fv = np.ascontiguousarray(f.reshape(n_alpha, q_int).T)
            fv = fv.view(np.float64).reshape(q_int, n_alpha, 2)
            folded = np.matmul(w_qpa, fv).view(np.complex128)[:, :, 0]  # [tau, k2]
            coef = np.fft.fft(folded, axis=0)  # [k1, k2]
            return (coef.T / gnorm).reshape(d)

    else:
        ramps = np.exp(2j * np.pi * b * np.outer(np.arange(n_freq), t))

        def apply(x: np.ndarray) -> np.ndarray:
            coef = x.reshape(n_time, n_freq)  # [k2, k1]
            mod = coef @ ramps  # [k2, t]
            return np.einsum("tp,pt->t", windows, mod) / gnorm

        def adjoint(f: np.ndarray) -> np.ndarray:
            u = windows * f[:, None]  # [t, k2]
            coef = ramps.conj() @ u  # [k1, k2]
            return (coef.T / gnorm).reshape(d)

    return Dictionary(n, d, apply, adjoint, kind="gabor", tight=False)


def build_concat(D1: Dictionary, D2: Dictionary, scale: float = 1.0) -> Dictionary:
    """Concatenate two dictionaries on the same signal space.

    apply stacks coefficient blocks: D [x1; x2] = scale*(D1 x1 + D2 x2);
    adjoint concatenates scale*D1*f and scale*D2*f.  The result is tight
    exactly when both inputs are tight and 2*scale^2 = 1.
    """
    if D1.n != D2.n:
        raise ValueError(f"signal dimensions differ: {D1.n} vs {D2.n}")
    if scale <= 0:
        raise ValueError("scale must be positive")
    n = D1.n
    d1, d2 = D1.d, D2.d

    def apply(x: np.ndarray) -> np.ndarray:
        return scale * (D1.apply(x[:d1]) + D2.apply(x[d1:]))

    def adjoint(f: np.ndarray) -> np.ndarray:
        return scale * np.concatenate([D1.adjoint(f), D2.adjoint(f)])

    tight = D1.tight and D2.tight and abs(2.0 * scale * scale - 1.0) <= 1e-12
    return Dictionary(n, d1 + d2, apply, adjoint, kind="concat", tight=tight)


def build_identity(n: int) -> Dictionary:
    """The standard basis as a (trivially tight) dictionary."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Dictionary(
        n, n, lambda x: x.copy(), lambda f: f.copy(), kind="dense", tight=True
    )


def from_matrix(M: np.ndarray, tight: bool | None = None) -> Dictionary:
    """Wrap a dense n x d matrix.  tight=None probes D D* = I numerically."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    n, d = M.shape
    Mh = M.conj().T
    if tight is None:
        tight = bool(
            np.linalg.norm(M @ Mh - np.eye(n), "fro") <= 1e-10 * math.sqrt(n)
        )
    out = Dictionary(
        n, d, lambda x: M @ x, lambda f: Mh @ f, kind="dense", tight=tight
    )
    out._dense_cache = M
    return out


def _frame_operator(D: Dictionary) -> np.ndarray:
    """Dense n x n frame operator S = D D*."""
    n = D.n
    if n * D.d <= MATERIALIZATION_CAP:
        M = D.dense()
        return M @ M.conj().T
    S = np.empty((n, n), dtype=complex)
    e = np.zeros(n, dtype=complex)
    for j in range(n):
        e[j] = 1.0
        S[:, j] = D.apply(D.adjoint(e))
        e[j] = 0.0
    return S


def frame_bounds(D: Dictionary, dense_limit: int = 4096) -> tuple[float, float]:
    """Frame bounds (A, B) = extreme eigenvalues of D D*.

    Dense Hermitian eigensolve up to ``dense_limit``; power iteration on
    the frame operator beyond that (1e-6 relative).
    """
    if D._bounds_cache is not None:
        return D._bounds_cache
    if D.n <= dense_limit:
        S = _frame_operator(D)
        eig = np.linalg.eigvalsh(S)
        A, B = float(eig[0]), float(eig[-1])
    else:
        B = _power_extreme(D, shift=None)
        A = B - _power_extreme(D, shift=B)
    A = max(A, 0.0)
    D._bounds_cache = (A, B)
    return A, B


def _power_extreme(D: Dictionary, shift: float | None, iters: int = 500) -> float:
    """Largest eigenvalue of S (shift None) or of shift*I - S."""
    rng = np.random.Generator(np.random.Philox(key=[0x5EED, D.n]))
    v = rng.standard_normal(D.n) + 1j * rng.standard_normal(D.n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = D.apply(D.adjoint(v))
        if shift is not None:
            w = shift * v - w
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        new = float(np.real(np.vdot(v, w)))
        v = w / nw
        if abs(new - lam) <= 1e-9 * max(abs(new), 1e-30):
            lam = new
            break
        lam = new
    return lam


def tighten(D: Dictionary) -> Dictionary:
    """Whiten a frame: returns (D D*)^{-1/2} D, which is tight.

    Raises when the frame lower bound is (numerically) zero.
    """
    S = _frame_operator(D)
    eig, V = np.linalg.eigh(S)
    if eig[0] <= 1e-12 * max(eig[-1], 1e-300):
        raise ValueError("not a frame: frame operator is rank deficient")
    W = (V * (eig**-0.5)) @ V.conj().T  # Hermitian inverse square root

    def apply(x: np.ndarray) -> np.ndarray:
        return W @ D.apply(x)

    def adjoint(f: np.ndarray) -> np.ndarray:
        return D.adjoint(W @ f)

    out = Dictionary(D.n, D.d, apply, adjoint, kind=D.kind, tight=True)
    if D._dense_cache is not None:
        out._dense_cache = W @ D._dense_cache
    return out


def coherence(M: Dictionary | np.ndarray) -> float:
    """Largest normalized inner product between distinct columns, in [0, 1]."""
    dense = M.dense() if isinstance(M, LinearOperator) else np.asarray(M, dtype=complex)
    norms = np.linalg.norm(dense, axis=0)
    if np.any(norms == 0.0):
        raise ValueError("coherence undefined: zero column present")
    G = np.abs(dense.conj().T @ dense) / np.outer(norms, norms)
    np.fill_diagonal(G, 0.0)
    if G.size == 0 or dense.shape[1] < 2:
        return 0.0
    return float(min(G.max(), 1.0))


def gram_pnorm_factor(D: Dictionary, p: float) -> float:
    """Column quasi-p-norm factor of the Gram matrix D*D.

    Returns [max_j sum_i |(D*D)_{ij}|^p]^(1/p) for p in (0, 1], which
    bounds ||D*D x||_p <= factor * ||x||_p for every x.
    """
    if not (0.0 < p <= 1.0):
        raise ValueError("p must lie in (0, 1]")
    M = D.dense()
    G = np.abs(M.conj().T @ M)
    col_sums = np.sum(G**p, axis=0)
    return float(np.max(col_sums) ** (1.0 / p))
