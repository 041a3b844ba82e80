"""Fixed-phase transmit-beam SOCP: assembly over a real embedding and solve.

The complex stacked beamformer f (all n_rf beams concatenated) is embedded
as x = [Re f; Im f].  A complex matrix embeds as [[Re, -Im], [Im, Re]], so
matrix-vector products and l2 norms carry over unchanged.  The program is

    minimize    u
    subject to  || D (Phi S f - A p) ||_2 <= u            (epigraph)
                || f ||_2 <= sqrt(p_t)                    (total power)
                || t_n ||_2 <= c_n Re(h_n S_n f)          (per user)
                Im(h_n S_n f) = 0                         (per user)

with t_n stacking h_n S_i f for every chain i plus the noise level sigma,
and c_n = sqrt(1 + 1/gamma_n).  The realness restriction on h_n S_n f makes
the user constraint a valid second-order cone; the phase of beam n is
otherwise free, and the outer phase-vector update restores that freedom at
the objective level.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import clarabel

from .model import Scenario, ChannelSet
from .pattern import PatternSpec


# -- complex <-> real embedding ------------------------------------------------

def embed_vector(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag])


def unembed_vector(x: np.ndarray) -> np.ndarray:
    n = x.size // 2
    return x[:n] + 1j * x[n:]


def embed_matrix(a: np.ndarray) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    return np.block([[a.real, -a.imag], [a.imag, a.real]])


@dataclass(frozen=True)
class SelectorMap:
    """Index ranges realizing the block selectors over the stacked vector."""

    n_bs: int
    n_rf: int

    @property
    def stacked_len(self) -> int:
        return self.n_bs * self.n_rf

    def block(self, i: int) -> slice:
        if not 0 <= i < self.n_rf:
            raise ValueError("block index out of range")
        return slice(i * self.n_bs, (i + 1) * self.n_bs)

    def extract(self, f: np.ndarray, i: int) -> np.ndarray:
        return f[self.block(i)]

    def combine(self, f: np.ndarray) -> np.ndarray:
        """S f: the transmit beam, i.e. the sum of all blocks."""
        return f.reshape(self.n_rf, self.n_bs).sum(axis=0)

    def split(self, f: np.ndarray) -> np.ndarray:
        return f.reshape(self.n_rf, self.n_bs).copy()

    def stack(self, f_list) -> np.ndarray:
        return np.concatenate([np.asarray(fi) for fi in f_list])


@dataclass
class UserSinrRows:
    """Real-embedded SINR data for one user.

    rows holds [Re(h S_i); Im(h S_i)] pairs for i = 1..n_rf, each a length
    2K real row; own_real / own_imag are the rows of the user's own chain.
    """

    rows: np.ndarray        # (2*n_rf, 2K)
    own_real: np.ndarray    # (2K,)
    own_imag: np.ndarray    # (2K,)
    coeff: float            # sqrt(1 + 1/gamma_n)


@dataclass
class StackedProblem:
    s_map: SelectorMap
    objective_matrix: np.ndarray     # embed(D Phi S), (2M, 2K)
    objective_target: np.ndarray     # embed(D A p), (2M,)
    power_budget: float
    sinr_rows: list
    sigma: float


@dataclass
class ConicSolution:
    f_stacked: np.ndarray | None
    objective_value: float
    solver_status: str               # optimal | near-optimal | infeasible | failed
    iterations: int


def assemble(pattern: PatternSpec, channels: ChannelSet, scenario: Scenario,
             p: np.ndarray) -> StackedProblem:
    """Build the real-embedded SOCP data for a fixed phase vector."""
    p = np.asarray(p, dtype=complex)
    if p.shape != (pattern.m,):
        raise ValueError("phase vector length must match the grid size")
    if not np.allclose(np.abs(p), 1.0, atol=1e-9):
        raise ValueError("phase vector entries must have unit modulus")

    s_map = SelectorMap(n_bs=scenario.n_bs, n_rf=scenario.n_rf)
    k = s_map.stacked_len
    dphi = pattern.d_diag[:, None] * pattern.phi
    objective_matrix = embed_matrix(np.tile(dphi, (1, scenario.n_rf)))
    objective_target = embed_vector(pattern.d_diag * (pattern.a_diag * p))

    sinr_rows = []
    for n in range(scenario.n_c):
        h_n = channels.h[n]
        rows = np.zeros((2 * scenario.n_rf, 2 * k))
        for i in range(scenario.n_rf):
            row = np.zeros(k, dtype=complex)
            row[s_map.block(i)] = h_n
            rows[2 * i:2 * i + 2] = embed_matrix(row[None, :])
        gamma = scenario.sinr_thresholds[n]
        sinr_rows.append(UserSinrRows(
            rows=rows,
            own_real=rows[2 * n].copy(),
            own_imag=rows[2 * n + 1].copy(),
            coeff=math.sqrt(1.0 + 1.0 / gamma),
        ))

    return StackedProblem(
        s_map=s_map,
        objective_matrix=objective_matrix,
        objective_target=objective_target,
        power_budget=scenario.p_t,
        sinr_rows=sinr_rows,
        sigma=math.sqrt(scenario.noise_power),
    )


_STATUS_MAP = {
    "Solved": "optimal",
    "AlmostSolved": "near-optimal",
    "PrimalInfeasible": "infeasible",
    "AlmostPrimalInfeasible": "infeasible",
}


def solve(problem: StackedProblem, tol: float = 1e-8) -> ConicSolution:
    """Solve the assembled SOCP with a primal-dual interior-point method.

    Returns a point satisfying all cones within tol and objective within tol
    of optimal, as certified by the solver's duality gap and residual
    criteria.  Internally the solver works on variables z = [x; u; w] with
    x the embedded stacked beamformer, u the epigraph variable, and w the
    embedded transmit (sum) beam coupled to x through zero-cone rows; the
    substitution keeps the dense epigraph block at 2M x 2*n_bs instead of
    2M x 2*n_rf*n_bs and leaves the optimum unchanged.
    """
    two_k = problem.objective_matrix.shape[1]
    k = two_k // 2
    s_map = problem.s_map
    n, n_rf = s_map.n_bs, s_map.n_rf
    two_n = 2 * n
    two_m = problem.objective_matrix.shape[0]
    n_users = len(problem.sinr_rows)
    nvar = two_k + 1 + two_n

    # embed(D Phi): the real/imag column blocks of embed(D Phi S) for block 0
    dphi = np.hstack([problem.objective_matrix[:, :n],
                      problem.objective_matrix[:, k:k + n]])

    n_rows = (n_users + two_n) + (two_m + 1) + (two_k + 1) \
        + sum(r.rows.shape[0] + 2 for r in problem.sinr_rows)
    a = np.zeros((n_rows, nvar))
    b = np.zeros(n_rows)
    cones = []
    r = 0

    # zero cone: Im(h_n S_n f) = 0 per user, then the coupling w = S x
    for user in problem.sinr_rows:
        a[r, :two_k] = user.own_imag
        r += 1
    eye_n = np.eye(n)
    for part in range(2):                      # real block, then imaginary block
        a[r:r + n, two_k + 1 + part * n: two_k + 1 + (part + 1) * n] = eye_n
        for i in range(n_rf):
            off = part * k + i * n
            a[r:r + n, off:off + n] = -eye_n
        r += n
    cones.append(clarabel.ZeroConeT(n_users + two_n))

    # epigraph cone: [u; embed(D Phi) w - embed(D A p)]
    a[r, two_k] = -1.0
    r += 1
    a[r:r + two_m, two_k + 1:] = -dphi
    b[r:r + two_m] = -problem.objective_target
    r += two_m
    cones.append(clarabel.SecondOrderConeT(two_m + 1))

    # power cone: [sqrt(p_t); x]
    b[r] = math.sqrt(problem.power_budget)
    r += 1
    a[r:r + two_k, :two_k] = -np.eye(two_k)
    r += two_k
    cones.append(clarabel.SecondOrderConeT(two_k + 1))

    # per-user SINR cones: [c_n Re(h_n S_n f); all (Re, Im) pairs; sigma]
    for user in problem.sinr_rows:
        a[r, :two_k] = -user.coeff * user.own_real
        r += 1
        nr = user.rows.shape[0]
        a[r:r + nr, :two_k] = -user.rows
        r += nr
        b[r] = problem.sigma
        r += 1
        cones.append(clarabel.SecondOrderConeT(nr + 2))

    q = np.zeros(nvar)
    q[two_k] = 1.0
    p_mat = sp.csc_matrix((nvar, nvar))
    a_mat = sp.csc_matrix(a)

    # solver tolerances act on the equilibrated problem; prefer two decades
    # tighter than the contract so unscaled residuals stay within tol even
    # when cones bind hard, backing off when the solver stalls short of that
    status = "failed"
    sol = None
    for factor in (100.0, 10.0, 1.0):
        settings = clarabel.DefaultSettings()
        settings.verbose = False
        settings.tol_gap_abs = tol / factor
        settings.tol_gap_rel = tol / factor
        settings.tol_feas = tol / factor
        solver = clarabel.DefaultSolver(p_mat, q, a_mat, b, cones, settings)
        sol = solver.solve()
        status = _STATUS_MAP.get(str(sol.status), "failed")
        if status != "failed":
            break
    if status in ("optimal", "near-optimal"):
        x = np.asarray(sol.x)
        return ConicSolution(
            f_stacked=unembed_vector(x[:two_k]),
            objective_value=max(float(sol.obj_val), 0.0),
            solver_status=status,
            iterations=int(sol.iterations),
        )
    return ConicSolution(f_stacked=None, objective_value=math.inf,
                         solver_status=status, iterations=int(sol.iterations))
