//! Quantum Gram-Schmidt: each new vector is passed through the
//! phase-estimation circuit for `H = Σ |u_n><u_n|`; a flag outcome of 0
//! leaves the component orthogonal to the current basis.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamsim::{
    evolve_exact, evolve_with_error, lcu_query_cost, qubit_count, ProjectorHamiltonian,
};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::qsim::{
    measure_flag, padded_dim, qpe_circuit, readout, readout_padded, MeasureMode,
    MIN_BRANCH_PROBABILITY,
};
use crate::rng::{domain, substream};
use crate::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub eps: f64,
    /// Evolution precision; defaults to `eps^4`.
    pub eps0: f64,
    /// Evolution time; defaults to `π`.
    pub t: f64,
    pub mode: Mode,
    pub seed: u64,
    /// Analytic mode: a step is dependent when `p(0)` falls below this.
    /// Defaults to `eps^2`.
    pub dep_threshold: f64,
    pub inject_error: bool,
    /// Overlap above which the basis is flagged as non-orthogonal; defaults
    /// to `10 eps`.
    pub tol_ortho: f64,
}

impl RunConfig {
    pub fn new(eps: f64) -> Self {
        RunConfig {
            eps,
            eps0: eps.powi(4),
            t: std::f64::consts::PI,
            mode: Mode::Sampled,
            seed: 0,
            dep_threshold: eps * eps,
            inject_error: false,
            tol_ortho: 10.0 * eps,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_inject_error(mut self, inject: bool) -> Self {
        self.inject_error = inject;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::param(
                "eps",
                format!("must lie in (0, 1), got {}", self.eps),
            ));
        }
        if !(self.eps0 > 0.0 && self.eps0 < 1.0) {
            return Err(Error::param(
                "eps0",
                format!("must lie in (0, 1), got {}", self.eps0),
            ));
        }
        if !(self.t.is_finite() && self.t > 0.0) {
            return Err(Error::param("t", "must be finite and positive"));
        }
        if !(self.dep_threshold >= 0.0 && self.dep_threshold < 1.0) {
            return Err(Error::param("dep_threshold", "must lie in [0, 1)"));
        }
        if !(self.tol_ortho > 0.0) {
            return Err(Error::param("tol_ortho", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCost {
    /// Number of basis vectors in `H` during the step.
    pub k: usize,
    pub runs: u64,
    pub queries: u64,
    pub gates: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CostLedger {
    pub oracle_queries: u64,
    pub two_qubit_gates: u64,
    pub circuit_runs: u64,
    pub qubits: u32,
    pub steps: Vec<StepCost>,
    /// Inner-product estimates requested.
    pub ipe_estimates: u64,
    /// Hadamard-test shots across both circuits of every estimate.
    pub ipe_shots: u64,
    /// State-preparation oracle calls made by those shots.
    pub ipe_oracle_calls: u64,
}

impl CostLedger {
    pub fn record_step(&mut self, k: usize, runs: u64, queries_per_run: u64, gates_per_run: u64) {
        let step = StepCost {
            k,
            runs,
            queries: runs * queries_per_run,
            gates: runs * gates_per_run,
        };
        self.oracle_queries += step.queries;
        self.two_qubit_gates += step.gates;
        self.circuit_runs += runs;
        self.steps.push(step);
    }

    /// Every shot prepares both states once.
    pub fn record_ipe(&mut self, shots: u64) {
        self.ipe_estimates += 1;
        self.ipe_shots += shots;
        self.ipe_oracle_calls += 2 * shots;
    }

    /// Hamiltonian-simulation queries plus inner-product oracle calls.
    pub fn total_queries(&self) -> u64 {
        self.oracle_queries + self.ipe_oracle_calls
    }

    /// Totals agree with the per-step entries.
    pub fn is_consistent(&self) -> bool {
        let q: u64 = self.steps.iter().map(|s| s.queries).sum();
        let g: u64 = self.steps.iter().map(|s| s.gates).sum();
        let r: u64 = self.steps.iter().map(|s| s.runs).sum();
        q == self.oracle_queries && g == self.two_qubit_gates && r == self.circuit_runs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    NewBasis,
    Dependent,
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub kind: StepKind,
    /// Read-out state (unpadded); present for `NewBasis`.
    pub vector: Option<ComplexVector>,
    /// Padded post-measurement state, used to extend `H`.
    pub padded: Option<ComplexVector>,
    /// Branch-0 probability of the circuit that was run.
    pub p_zero: f64,
    /// Branch-0 probability under exact evolution.
    pub p_zero_ideal: f64,
    pub runs_used: u64,
    /// `||ψ - ψ_ideal||` between the post-selected state and the one exact
    /// evolution would give. Only set when error injection is on.
    pub deviation_from_exact: Option<f64>,
    pub orthogonality_violation: bool,
}

/// `ceil(ln(1/eps) / eps)` circuit runs per step.
pub fn repetition_bound(eps: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(
            "eps",
            format!("must lie in (0, 1), got {eps}"),
        ));
    }
    Ok(((1.0 / eps) * (1.0 / eps).ln()).ceil() as u64)
}

/// Posterior probability that `p(0) < eps` after `w` consecutive flag-1
/// outcomes under a uniform prior: `1 - (1 - eps)^(w + 1)`.
pub fn dependence_posterior_tail(eps: f64, w: u64) -> f64 {
    -(((w + 1) as f64) * (-eps).ln_1p()).exp_m1()
}

/// Bound `2 eps0 / p^(3/2)` on the distance between the post-selected state
/// of an errant circuit and the ideal one.
pub fn orthogonality_error_bound(eps0: f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param("p", format!("must lie in (0, 1], got {p}")));
    }
    if !(eps0 > 0.0) {
        return Err(Error::param("eps0", "must be positive"));
    }
    Ok(2.0 * eps0 / p.powf(1.5))
}

/// One orthogonalization step of `a` against the basis held in `h`.
pub fn qgs_step<R: Rng + ?Sized>(
    h: &ProjectorHamiltonian,
    a: &ComplexVector,
    cfg: &RunConfig,
    rng: &mut R,
    ledger: &mut CostLedger,
) -> Result<StepOutcome> {
    if a.len() > h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: a.len(),
        });
    }
    if a.norm() == 0.0 {
        return Err(Error::ZeroVector { index: 0 });
    }
    let w = repetition_bound(cfg.eps)?;
    let k = h.len();
    let cost = lcu_query_cost(k.max(1), cfg.t, cfg.eps)?;

    let (unitary, exact) = if cfg.inject_error {
        let ev = evolve_with_error(h, cfg.t, cfg.eps0, rng)?;
        (ev.unitary, Some(ev.exact))
    } else {
        (evolve_exact(h, cfg.t)?.unitary, None)
    };
    let violation = h.max_overlap() > h.tol_ortho();
    let state = qpe_circuit(a, &unitary)?;
    let p_zero = state.branch_probability(0);
    let ideal_state = match &exact {
        Some(ev) => Some(qpe_circuit(a, &ev.unitary)?),
        None => None,
    };
    let p_zero_ideal = ideal_state
        .as_ref()
        .map_or(p_zero, |s| s.branch_probability(0));

    let (collapsed, runs) = match cfg.mode {
        Mode::Sampled => {
            let mut found = None;
            for run in 1..=w {
                let out = measure_flag(&state, MeasureMode::Sampled, rng)?;
                if out.bit == 0 {
                    found = Some((out.collapsed, run));
                    break;
                }
            }
            match found {
                Some((c, run)) => (Some(c), run),
                None => (None, w),
            }
        }
        Mode::Analytic => {
            if p_zero < cfg.dep_threshold.max(MIN_BRANCH_PROBABILITY) {
                (None, w)
            } else {
                let out = measure_flag(&state, MeasureMode::Branch(0), rng)?;
                (Some(out.collapsed), 1)
            }
        }
    };
    ledger.record_step(k, runs, cost.queries, cost.gates);

    let Some(collapsed) = collapsed else {
        return Ok(StepOutcome {
            kind: StepKind::Dependent,
            vector: None,
            padded: None,
            p_zero,
            p_zero_ideal,
            runs_used: runs,
            deviation_from_exact: None,
            orthogonality_violation: violation,
        });
    };
    let deviation_from_exact = match &ideal_state {
        Some(s) if p_zero_ideal >= MIN_BRANCH_PROBABILITY => {
            let ideal = s.branch(0).unscale(p_zero_ideal.sqrt());
            Some((collapsed.amplitudes() - ideal).norm())
        }
        _ => None,
    };
    Ok(StepOutcome {
        kind: StepKind::NewBasis,
        vector: Some(readout(&collapsed)),
        padded: Some(readout_padded(&collapsed)),
        p_zero,
        p_zero_ideal,
        runs_used: runs,
        deviation_from_exact,
        orthogonality_violation: violation,
    })
}

#[derive(Debug, Clone)]
pub struct GramSchmidtResult {
    /// Orthonormal vectors in the input dimension.
    pub basis: Vec<ComplexVector>,
    pub ledger: CostLedger,
    /// Inputs judged linearly dependent on their predecessors.
    pub dependent_indices: Vec<usize>,
    /// Input index that produced each basis vector.
    pub sources: Vec<usize>,
    /// One entry per input after the first.
    pub steps: Vec<StepOutcome>,
    /// Final Hamiltonian, built from the measured states.
    pub hamiltonian: ProjectorHamiltonian,
}

impl GramSchmidtResult {
    /// Basis vectors as the columns of an `N x k` matrix.
    pub fn basis_matrix(&self) -> ComplexMatrix {
        let rows = self.basis.first().map_or(0, |b| b.len());
        crate::linalg::from_columns(rows, &self.basis)
    }
}

fn validate_vectors(vectors: &[ComplexVector]) -> Result<usize> {
    let dim = vectors.first().ok_or(Error::EmptyInput)?.len();
    if dim == 0 {
        return Err(Error::EmptyInput);
    }
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        if v.norm() == 0.0 {
            return Err(Error::ZeroVector { index });
        }
    }
    Ok(dim)
}

/// Orthonormalize `vectors` in order.
pub fn quantum_gram_schmidt(
    vectors: &[ComplexVector],
    cfg: &RunConfig,
) -> Result<GramSchmidtResult> {
    cfg.validate()?;
    let dim = validate_vectors(vectors)?;
    let n = padded_dim(dim);
    let mut ledger = CostLedger {
        qubits: qubit_count(vectors.len(), n),
        ..CostLedger::default()
    };
    let mut h = ProjectorHamiltonian::new(n, cfg.tol_ortho);

    let first = vectors[0].unscale(vectors[0].norm());
    h.push(first.clone())?;
    let mut basis = vec![first];
    let mut sources = vec![0];
    let mut dependent_indices = Vec::new();
    let mut steps = Vec::with_capacity(vectors.len() - 1);

    for (index, a) in vectors.iter().enumerate().skip(1) {
        let mut rng = substream(cfg.seed, domain::QGS_STEP, index as u64);
        let step = qgs_step(&h, a, cfg, &mut rng, &mut ledger)?;
        match step.kind {
            StepKind::NewBasis => {
                let padded = step.padded.clone().expect("new basis carries a state");
                h.push(padded)?;
                basis.push(step.vector.clone().expect("new basis carries a state"));
                sources.push(index);
            }
            StepKind::Dependent => dependent_indices.push(index),
        }
        steps.push(step);
    }
    Ok(GramSchmidtResult {
        basis,
        ledger,
        dependent_indices,
        sources,
        steps,
        hamiltonian: h,
    })
}
