"""Self-consistent evolution engine for chronology-violating quantum systems.

A closed-timelike-curve (CTC) system interacts with an ordinary
(chronology-respecting) system through a joint unitary V acting on
system (x) CTC. The CTC state must equal its own post-interaction reduction,

    rho_ctc = Tr_sys[ V (rho_in (x) rho_ctc) V^dag ],

which makes rho_ctc a fixed point of the completely positive trace-preserving
map induced on the CTC factor by the chosen input. This module builds such
interactions, represents the induced map as a superoperator matrix acting on
row-major vectorized operators, solves the fixed-point condition exactly via
an SVD nullspace, certifies uniqueness, and evaluates the output state

    rho_out = Tr_ctc[ V (rho_in (x) rho_ctc) V^dag ].

The composite map rho_in -> rho_out is nonlinear in rho_in because rho_ctc
itself depends on rho_in.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .qlinalg import (
    DensityMatrix,
    dagger,
    is_unitary,
    partial_trace,
    swap_gate,
    tensor,
    trace_distance,
)

DEFAULT_FP_TOL = 1e-9
SELF_CONSISTENCY_TOL = 1e-8
_UNITARY_TOL = 1e-10
_EIG_CLIP = 1e-9


class FixedPointSolverError(RuntimeError):
    """No density-matrix fixed point could be extracted.

    A trace-preserving completely positive map always has at least one
    density-matrix fixed point, so this signals numerical failure or an
    interaction that is not actually a channel.
    """


class NonUniqueFixedPointError(RuntimeError):
    """Raised when a caller demands a single output but the fixed-point
    space has dimension greater than one. Carries the full diagnostics."""

    def __init__(self, result: "FixedPointResult"):
        super().__init__(
            f"fixed-point space has dimension {result.fixed_space_dim}; "
            "the output state is ambiguous"
        )
        self.result = result


@dataclass(frozen=True)
class DeutschInteraction:
    """Unitary interaction between a system and a CTC factor.

    The joint space is ordered system first, CTC second, so V acts on
    C^(d_sys) (x) C^(d_ctc).
    """

    d_sys: int
    d_ctc: int
    V: np.ndarray

    def __post_init__(self) -> None:
        if self.d_sys < 1 or self.d_ctc < 1:
            raise ValueError("subsystem dimensions must be positive")
        v = np.asarray(self.V, dtype=complex)
        n = self.d_sys * self.d_ctc
        if v.shape != (n, n):
            raise ValueError(f"V has shape {v.shape}, expected ({n}, {n})")
        if not is_unitary(v, _UNITARY_TOL):
            raise ValueError("V is not unitary within 1e-10")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "V", v)


@dataclass(frozen=True)
class FixedPointResult:
    """Diagnostics for the fixed-point set of an induced CTC map.

    fixed_space_dim counts the operator-space solutions of M(rho) = rho,
    ``basis`` spans that space, and ``representative`` is a genuine density
    matrix inside it (always found for a well-formed channel). ``residual``
    is the max-entry self-consistency defect of the representative, and
    ``spectrum_gap`` = 1 - |second largest superoperator eigenvalue| is a
    convergence diagnostic for iterative cross-checks.
    """

    fixed_space_dim: int
    unique: bool
    residual: float
    spectrum_gap: float
    representative: DensityMatrix | None
    basis: list[np.ndarray] = field(default_factory=list)


def controlled_family(dim: int, family: list[np.ndarray]) -> np.ndarray:
    """Block-diagonal controlled unitary sum_k |k><k| (x) U_k.

    The control is the first (most significant) factor, so the result is
    literally block diagonal with blocks U_0 .. U_{dim-1}.
    """
    if len(family) != dim:
        raise ValueError(f"need exactly {dim} unitaries, got {len(family)}")
    v = np.zeros((dim * dim, dim * dim), dtype=complex)
    for k, u in enumerate(family):
        u = np.asarray(u, dtype=complex)
        if u.shape != (dim, dim):
            raise ValueError(f"family member {k} has shape {u.shape}, expected ({dim}, {dim})")
        if not is_unitary(u, _UNITARY_TOL):
            raise ValueError(f"family member {k} is not unitary")
        v[k * dim : (k + 1) * dim, k * dim : (k + 1) * dim] = u
    return v


def swap_then_control(dim: int, family: list[np.ndarray]) -> DeutschInteraction:
    """Interaction that swaps system and CTC, then applies the controlled family.

    This is the canonical distinguisher circuit shape: V = C(U_0..U_{d-1}) * SWAP
    with equal system and CTC dimensions.
    """
    v = controlled_family(dim, family) @ swap_gate(dim)
    return DeutschInteraction(d_sys=dim, d_ctc=dim, V=v)


def induced_map(ix: DeutschInteraction, rho_in: DensityMatrix) -> np.ndarray:
    """Superoperator matrix of rho -> Tr_sys[V (rho_in (x) rho) V^dag].

    Returns S of shape (d_ctc^2, d_ctc^2) with vec(M(rho)) = S @ vec(rho)
    for row-major vec. Built by applying the map to every matrix unit.
    """
    if rho_in.dim != ix.d_sys:
        raise ValueError(f"input dim {rho_in.dim} does not match system dim {ix.d_sys}")
    d = ix.d_ctc
    dims = (ix.d_sys, d)
    s = np.empty((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            joint = ix.V @ tensor(rho_in.matrix, unit) @ dagger(ix.V)
            s[:, i * d + j] = partial_trace(joint, dims, keep=1).reshape(-1)
    return s


def apply_superoperator(s: np.ndarray, rho: np.ndarray) -> np.ndarray:
    d = rho.shape[0]
    return (s @ rho.reshape(-1)).reshape(d, d)


def _nullspace_of_shifted(s: np.ndarray, fp_tol: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Right and left nullspace bases of (S - I), singular values <= fp_tol * sigma_max
    counted as zero. Returns (right basis columns, left basis columns, sigma_max)."""
    n = s.shape[0]
    u, sing, vh = np.linalg.svd(s - np.eye(n))
    sigma_max = float(sing[0]) if sing.size else 0.0
    zero = sing <= fp_tol * sigma_max
    right = vh[zero].conj().T
    left = u[:, zero]
    return right, left, sigma_max


def _clip_to_density(h: np.ndarray) -> DensityMatrix | None:
    """Normalize a Hermitian matrix to trace one and clip eigenvalue noise.

    Eigenvalues in [-1e-9, 0) are treated as rounding and set to zero; any
    larger negative part means the matrix is not a state and None is returned.
    """
    tr = np.trace(h).real
    if abs(tr) < 1e-12:
        return None
    rho = h / tr
    rho = (rho + rho.conj().T) / 2.0
    values, vectors = np.linalg.eigh(rho)
    if values.min() < -_EIG_CLIP:
        return None
    clipped = np.clip(values, 0.0, None)
    rho = (vectors * clipped) @ vectors.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(rho)


def _density_representative(
    right: np.ndarray, left: np.ndarray, d: int
) -> DensityMatrix | None:
    """Extract a density-matrix fixed point from the nullspace.

    One-dimensional spaces are handled by Hermitian-symmetrizing the single
    basis element. Larger spaces use the spectral projection onto the
    eigenvalue-one subspace applied to the maximally mixed state, which for a
    channel is itself a fixed state (the eigenvalue is semisimple, so the
    projection is K (L^dag K)^{-1} L^dag with K, L the right/left bases).
    """
    if right.shape[1] == 1:
        b = right[:, 0].reshape(d, d)
        h = (b + b.conj().T) / 2.0
        if np.abs(h).max() < 1e-12:
            h = 1j * (b - b.conj().T) / 2.0
        return _clip_to_density(h)
    try:
        cross = left.conj().T @ right
        coeffs = np.linalg.solve(cross, left.conj().T @ (np.eye(d, dtype=complex) / d).reshape(-1))
        projected = (right @ coeffs).reshape(d, d)
    except np.linalg.LinAlgError:
        projected = None
    if projected is not None:
        rho = _clip_to_density((projected + projected.conj().T) / 2.0)
        if rho is not None:
            return rho
    # fall back to scanning symmetrized basis elements
    for col in range(right.shape[1]):
        b = right[:, col].reshape(d, d)
        for h in ((b + b.conj().T) / 2.0, 1j * (b - b.conj().T) / 2.0):
            rho = _clip_to_density(h)
            if rho is not None:
                return rho
    return None


def _spectrum_gap(s: np.ndarray) -> float:
    # Diagnostic only; the nullspace itself always comes from the SVD.
    moduli = np.sort(np.abs(np.linalg.eigvals(s)))[::-1]
    if moduli.size < 2:
        return 1.0
    return float(1.0 - moduli[1])


def fixed_points(
    ix: DeutschInteraction,
    rho_in: DensityMatrix,
    fp_tol: float = DEFAULT_FP_TOL,
    select_max_entropy: bool = False,
) -> FixedPointResult:
    """Solve the self-consistency condition for the CTC state.

    Computes the nullspace of (S - I) by singular value decomposition, where
    S is the induced superoperator; singular values at or below
    ``fp_tol * sigma_max`` count as zero. The fixed-point space dimension,
    a spanning operator basis, and a density-matrix representative are
    reported. ``unique`` is true iff the space is one-dimensional.

    ``select_max_entropy`` additionally replaces the representative of a
    non-unique space with the maximum-entropy fixed state (an optional
    selection rule layered on top of the bare self-consistency condition;
    the ambiguity itself is still reported via ``unique``/``basis``).
    """
    if fp_tol <= 0:
        raise ValueError("fp_tol must be positive")
    d = ix.d_ctc
    s = induced_map(ix, rho_in)
    right, left, _sigma_max = _nullspace_of_shifted(s, fp_tol)
    dim = right.shape[1]
    if dim == 0:
        raise FixedPointSolverError(
            "no fixed point found: the nullspace of (S - I) is empty, which "
            "cannot happen for a trace-preserving map; check fp_tol"
        )
    basis = [right[:, k].reshape(d, d).copy() for k in range(dim)]
    representative = _density_representative(right, left, d)
    if representative is None:
        raise FixedPointSolverError(
            "nullspace contains no density-matrix element within the "
            "eigenvalue-clip tolerance; numerical failure"
        )
    if select_max_entropy and dim > 1:
        representative = _max_entropy_fixed_state(right, representative)
    residual = float(
        np.abs(apply_superoperator(s, representative.matrix) - representative.matrix).max()
    )
    return FixedPointResult(
        fixed_space_dim=dim,
        unique=(dim == 1),
        residual=residual,
        spectrum_gap=_spectrum_gap(s),
        representative=representative,
        basis=basis,
    )


def _hermitian_traceless_directions(right: np.ndarray, d: int) -> list[np.ndarray]:
    """Orthonormal Hermitian traceless operators spanning the movable part
    of the fixed space."""
    candidates = []
    for col in range(right.shape[1]):
        b = right[:, col].reshape(d, d)
        candidates.append((b + b.conj().T) / 2.0)
        candidates.append(1j * (b - b.conj().T) / 2.0)
    directions: list[np.ndarray] = []
    for c in candidates:
        g = c - (np.trace(c).real / d) * np.eye(d)
        for prev in directions:
            g = g - prev * np.real(np.trace(prev.conj().T @ g))
        norm = np.linalg.norm(g)
        if norm > 1e-10:
            directions.append(g / norm)
    return directions


def _max_entropy_fixed_state(right: np.ndarray, start: DensityMatrix) -> DensityMatrix:
    """Maximum-entropy density matrix in the fixed-point space.

    Entropy is strictly concave, so the maximizer over the (convex, compact)
    set of fixed states is unique. The space is parametrized by Hermitian
    traceless directions around an interior starting point and optimized with
    BFGS; leaving the positive semidefinite region is fenced off by a large
    objective value.
    """
    d = start.dim
    directions = _hermitian_traceless_directions(right, d)
    if not directions:
        return start
    base = start.matrix

    def negentropy(x: np.ndarray) -> float:
        rho = base + sum(xi * g for xi, g in zip(x, directions))
        values = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
        if values.min() < 1e-12:
            return 1e6 - 1e3 * float(values.min())
        return float(np.sum(values * np.log2(values)))

    res = scipy.optimize.minimize(
        negentropy, np.zeros(len(directions)), method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 20000},
    )
    rho = base + sum(xi * g for xi, g in zip(res.x, directions))
    out = _clip_to_density((rho + rho.conj().T) / 2.0)
    return out if out is not None else start


def output_state(
    ix: DeutschInteraction, rho_in: DensityMatrix, rho_ctc: DensityMatrix
) -> DensityMatrix:
    """Output of the chronology-respecting system, Tr_ctc[V (rho_in (x) rho_ctc) V^dag].

    ``rho_ctc`` must already satisfy the self-consistency condition for this
    interaction and input (max-entry residual at most 1e-8).
    """
    if rho_in.dim != ix.d_sys or rho_ctc.dim != ix.d_ctc:
        raise ValueError("state dimensions do not match the interaction")
    s = induced_map(ix, rho_in)
    residual = np.abs(apply_superoperator(s, rho_ctc.matrix) - rho_ctc.matrix).max()
    if residual > SELF_CONSISTENCY_TOL:
        raise ValueError(
            f"rho_ctc violates self-consistency: residual {residual:.3e} > {SELF_CONSISTENCY_TOL}"
        )
    joint = ix.V @ tensor(rho_in.matrix, rho_ctc.matrix) @ dagger(ix.V)
    out = partial_trace(joint, (ix.d_sys, ix.d_ctc), keep=0)
    return DensityMatrix((out + out.conj().T) / 2.0)


def evolve(
    ix: DeutschInteraction, rho_in: DensityMatrix, fp_tol: float = DEFAULT_FP_TOL
) -> tuple[DensityMatrix, FixedPointResult]:
    """Solve the fixed point, then evaluate the output state.

    Refuses to produce an output when the fixed point is not unique: the
    raised ``NonUniqueFixedPointError`` carries the ``FixedPointResult`` so
    callers can inspect the ambiguity.
    """
    fp = fixed_points(ix, rho_in, fp_tol)
    if not fp.unique:
        raise NonUniqueFixedPointError(fp)
    assert fp.representative is not None
    return output_state(ix, rho_in, fp.representative), fp


def cesaro_iterate(
    ix: DeutschInteraction, rho_in: DensityMatrix, iters: int
) -> DensityMatrix:
    """Running average (1/T) sum_{t=1..T} M^t(I/d) of repeated map applications.

    Serves as an iteration-based oracle independent of the SVD nullspace
    route; for interactions with a unique fixed point the average converges
    to it (at rate governed by the spectrum gap).
    """
    if iters < 1:
        raise ValueError("iters must be at least 1")
    d = ix.d_ctc
    s = induced_map(ix, rho_in)
    v = (np.eye(d, dtype=complex) / d).reshape(-1)
    acc = np.zeros_like(v)
    for _ in range(iters):
        v = s @ v
        acc += v
    avg = (acc / iters).reshape(d, d)
    avg = (avg + avg.conj().T) / 2.0
    rho = _clip_to_density(avg)
    if rho is None:
        raise FixedPointSolverError("iteration average left the state space")
    return rho


def nonlinearity_gap(
    ix: DeutschInteraction,
    rho_a: DensityMatrix,
    rho_b: DensityMatrix,
    weight: float,
    fp_tol: float = DEFAULT_FP_TOL,
) -> float:
    """Trace distance between evolving a mixture and mixing the evolutions.

    Computes D( evolve(w a + (1-w) b), w evolve(a) + (1-w) evolve(b) ).
    A nonzero value witnesses the nonlinearity of the composite input-output
    map. Mixed inputs enter the self-consistency condition in place of the
    pure-state projector. All three evolutions must have unique fixed points.
    """
    if not 0.0 <= weight <= 1.0:
        raise ValueError("weight must lie in [0, 1]")
    mixed = DensityMatrix(weight * rho_a.matrix + (1.0 - weight) * rho_b.matrix)
    out_mixed, _ = evolve(ix, mixed, fp_tol)
    out_a, _ = evolve(ix, rho_a, fp_tol)
    out_b, _ = evolve(ix, rho_b, fp_tol)
    blend = weight * out_a.matrix + (1.0 - weight) * out_b.matrix
    return trace_distance(out_mixed.matrix, blend)
