"""Energy minimization over the tied-parameter ansatz from a symmetry-adapted reference.

The energy functional and its analytic gradient are evaluated on the dense
statevector; the gradient uses the adjoint-sweep trick (one forward pass,
one backward pass undoing each group exponential), which is exact because
every group carries a single parameter.  Optimization is scipy L-BFGS-B,
a limited-memory quasi-Newton method with a strong-Wolfe line search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .ansatz import (
    Ansatz,
    _compiled_groups,
    build_ansatz,
    enumerate_pool,
    tie_parameters,
)
from .fermion import build_hamiltonian, build_s_squared
from .jw import jordan_wigner
from .refcircuit import prepare_reference
from .statevector import CompiledPauliSum, Statevector
from .symmetry import StateSpec, determinant_irrep
from .system import MolecularSystem

__all__ = ["TracePoint", "VqeResult", "VqeContext", "energy", "gradient", "minimize",
           "trace_csv"]


@dataclass
class TracePoint:
    iteration: int
    energy: float
    grad_norm: float
    s2: float
    sector_weight: float
    overlap2: float | None = None


@dataclass
class VqeResult:
    energy: float
    parameters: np.ndarray
    iterations: int
    trace: list[TracePoint]
    final_state: Statevector
    converged: bool
    spec: StateSpec
    ansatz: Ansatz


class VqeContext:
    """Compiled observables, reference state, and ansatz for one sector run."""

    def __init__(self, spec: StateSpec, sys: MolecularSystem, reps: int = 2,
                 oracle_amplitudes: np.ndarray | None = None):
        self.spec = spec
        self.sys = sys
        n_qubits = sys.n_qubits
        self.reference = prepare_reference(spec)
        pool = enumerate_pool(spec, sys)
        groups = tie_parameters(pool, spec)
        if groups:
            self.ansatz = build_ansatz(groups, reps=reps, n_qubits=n_qubits)
        else:
            # minimal sectors can have no spin-scalar excitations at all;
            # the reference is then the exact sector state already
            self.ansatz = Ansatz((), reps, n_qubits)
        self.hamiltonian = CompiledPauliSum(
            jordan_wigner(build_hamiltonian(sys), n_qubits)
        )
        self.s_squared = CompiledPauliSum(
            jordan_wigner(build_s_squared(sys.n_spatial), n_qubits)
        )
        self.sector_mask = self._sector_mask()
        self.oracle_amplitudes = oracle_amplitudes

    def _sector_mask(self) -> np.ndarray:
        """Basis states with the right N, S_z = 0, and the target irrep."""
        sys, spec = self.sys, self.spec
        n = sys.n_spatial
        dim = 1 << sys.n_qubits
        mask = np.zeros(dim, dtype=bool)
        for det in range(dim):
            if det.bit_count() != sys.n_electrons:
                continue
            ups = (det & ((1 << n) - 1)).bit_count()
            if 2 * ups != sys.n_electrons:
                continue
            if determinant_irrep(det, sys.irreps).bits == spec.sigma.bits:
                mask[det] = True
        return mask

    # -- raw evaluations ----------------------------------------------------

    def state(self, theta: np.ndarray) -> Statevector:
        amps = self.reference.amps.copy()
        compiled = _compiled_groups(self.ansatz)
        k = len(self.ansatz.groups)
        for rep in range(self.ansatz.reps):
            for gi, cg in enumerate(compiled):
                amps = cg.apply(float(theta[rep * k + gi]), amps)
        return Statevector(amps, self.ansatz.n_qubits)

    def energy(self, theta: np.ndarray) -> float:
        value = self.hamiltonian.expectation(self.state(theta).amps)
        return float(value.real)

    def energy_and_gradient(self, theta: np.ndarray) -> tuple[float, np.ndarray]:
        theta = np.asarray(theta, dtype=float)
        compiled = _compiled_groups(self.ansatz)
        k = len(self.ansatz.groups)
        amps = self.reference.amps.copy()
        for rep in range(self.ansatz.reps):
            for gi, cg in enumerate(compiled):
                amps = cg.apply(float(theta[rep * k + gi]), amps)
        lam = self.hamiltonian.apply(amps)
        value = float(np.vdot(amps, lam).real)
        grad = np.zeros_like(theta)
        for layer in range(self.ansatz.parameter_count - 1, -1, -1):
            cg = compiled[layer % k]
            t = float(theta[layer])
            grad[layer] = 2.0 * np.vdot(lam, cg.kappa_apply(amps)).real
            amps = cg.apply(-t, amps)
            lam = cg.apply(-t, lam)
        if np.any(np.isnan(grad)) or np.isnan(value):
            raise FloatingPointError("NaN encountered in energy/gradient evaluation")
        return value, grad

    def diagnostics(self, theta: np.ndarray, iteration: int,
                    grad_norm: float | None = None) -> TracePoint:
        psi = self.state(theta)
        if grad_norm is None:
            _, grad = self.energy_and_gradient(theta)
            grad_norm = float(np.max(np.abs(grad)))
        s2 = float(self.s_squared.expectation(psi.amps).real)
        weight = psi.probability_weight(self.sector_mask)
        overlap2 = None
        if self.oracle_amplitudes is not None:
            overlap2 = float(abs(np.vdot(self.oracle_amplitudes, psi.amps)) ** 2)
        e = float(self.hamiltonian.expectation(psi.amps).real)
        return TracePoint(iteration, e, grad_norm, s2, weight, overlap2)


def energy(theta: np.ndarray, ctx: VqeContext) -> float:
    """E(theta) = <phi_0| U+(theta) H U(theta) |phi_0>."""
    return ctx.energy(np.asarray(theta, dtype=float))


def gradient(theta: np.ndarray, ctx: VqeContext) -> np.ndarray:
    """Analytic dE/dtheta via the adjoint sweep."""
    return ctx.energy_and_gradient(np.asarray(theta, dtype=float))[1]


def minimize(spec: StateSpec, sys: MolecularSystem, *, reps: int = 2,
             tol_e: float = 1e-9, tol_g: float = 1e-7, max_iters: int = 2000,
             oracle_amplitudes: np.ndarray | None = None,
             theta0: np.ndarray | None = None) -> VqeResult:
    """Quasi-Newton descent from theta = 0; returns data even if unconverged.

    Termination: |dE| below tol_e (absolute, assuming |E| <= 100 Ha),
    gradient max-norm below tol_g, or max_iters.
    """
    ctx = VqeContext(spec, sys, reps=reps, oracle_amplitudes=oracle_amplitudes)
    n_params = ctx.ansatz.parameter_count
    if theta0 is None:
        theta0 = np.zeros(n_params)

    if n_params == 0:
        point = ctx.diagnostics(theta0, 0, grad_norm=0.0)
        state = ctx.state(theta0)
        return VqeResult(
            energy=point.energy,
            parameters=theta0,
            iterations=0,
            trace=[point],
            final_state=state,
            converged=True,
            spec=spec,
            ansatz=ctx.ansatz,
        )

    trace: list[TracePoint] = [ctx.diagnostics(theta0, 0)]
    evaluations = {"grad_norm": trace[0].grad_norm}

    def objective(theta: np.ndarray) -> tuple[float, np.ndarray]:
        value, grad = ctx.energy_and_gradient(theta)
        evaluations["grad_norm"] = float(np.max(np.abs(grad)))
        return value, grad

    def callback(theta: np.ndarray) -> None:
        trace.append(ctx.diagnostics(theta, len(trace),
                                     grad_norm=evaluations["grad_norm"]))

    result = scipy.optimize.minimize(
        objective,
        theta0,
        jac=True,
        method="L-BFGS-B",
        callback=callback,
        options={
            "maxiter": max_iters,
            "ftol": tol_e / 100.0,
            "gtol": tol_g,
            "maxcor": 20,
        },
    )

    final_state = ctx.state(result.x)
    final_energy = float(ctx.hamiltonian.expectation(final_state.amps).real)
    return VqeResult(
        energy=final_energy,
        parameters=np.asarray(result.x),
        iterations=int(result.nit),
        trace=trace,
        final_state=final_state,
        converged=bool(result.success),
        spec=spec,
        ansatz=ctx.ansatz,
    )


def trace_csv(result: VqeResult) -> str:
    """Per-iteration trace: iter, energy, grad_norm, s2, sector_weight, overlap2."""
    lines = ["iter,energy,grad_norm,s2,sector_weight,overlap2"]
    for t in result.trace:
        overlap = f"{t.overlap2:.12g}" if t.overlap2 is not None else ""
        lines.append(
            f"{t.iteration},{t.energy:.12g},{t.grad_norm:.12g},"
            f"{t.s2:.12g},{t.sector_weight:.12g},{overlap}"
        )
    return "\n".join(lines) + "\n"
