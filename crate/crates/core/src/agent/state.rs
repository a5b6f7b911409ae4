use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;

use super::{AgentConfig, PairCase, PairTable};
use crate::hamiltonians::HamiltonianModel;
use crate::quantum::{
    eig_hermitian, sample_outcome, unitarity_residual, Complex64, ComplexMatrix, RotationBlock,
};
use crate::rng::{self, Stream};
use crate::{tolerance, Error, Result};

/// Result of the convergence check that follows every iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    Running,
    Converged,
    /// Converged, and the exploration parameters were re-inflated.
    ResetApplied,
}

/// Everything observable about one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Iteration index, starting at 1.
    pub k: usize,
    /// Measurement outcome of every qudit.
    pub outcomes: Vec<usize>,
    /// Largest exploration parameter at the start of the iteration.
    pub w_max: f64,
    pub tau: f64,
    /// Pair classes in lexicographic pair order.
    pub cases: Vec<PairCase>,
    /// `max_α |⟨Φ_α|D_k|j⟩|` for every `j`, with `D_k` the unitary the
    /// iteration started from.
    pub fidelities: Vec<f64>,
    pub status: Convergence,
    pub reset_triggered: bool,
    /// Set on the final record of a run that used up its iteration budget.
    pub budget_exhausted: bool,
}

/// The learner: current unitary `D_k`, exploration table `w_k` and its stream.
#[derive(Debug, Clone)]
pub struct AgentState {
    config: AgentConfig,
    unitary: ComplexMatrix,
    w: PairTable,
    k: usize,
    rng: Stream,
    converged_once: bool,
    reorthonormalizations: usize,
}

impl AgentState {
    /// `D_1 = I`, all `w = 1`, `k = 1`.
    pub fn new(dim: usize, config: AgentConfig) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Parameter(format!("agent needs dimension >= 2, got {dim}")));
        }
        config.validate()?;
        let rng = rng::stream(config.seed, config.stream);
        Ok(Self {
            config,
            unitary: ComplexMatrix::identity(dim, dim),
            w: PairTable::filled(dim, 1.0),
            k: 1,
            rng,
            converged_once: false,
            reorthonormalizations: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    /// The current transformation `D_k`.
    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn exploration(&self) -> &PairTable {
        &self.w
    }

    /// `w_k^{(M)}`, the largest exploration parameter.
    pub fn w_max(&self) -> f64 {
        self.w.max()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn converged_once(&self) -> bool {
        self.converged_once
    }

    pub fn reorthonormalizations(&self) -> usize {
        self.reorthonormalizations
    }

    /// Replaces `D_k`; the matrix must be unitary.
    pub fn set_unitary(&mut self, d: ComplexMatrix) -> Result<()> {
        if d.shape() != self.unitary.shape() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: d.nrows() });
        }
        let res = unitarity_residual(&d);
        if !(res < tolerance::UNITARY) {
            return Err(Error::Precondition(format!("matrix is not unitary: residual {res:e}")));
        }
        self.unitary = d;
        Ok(())
    }

    pub fn set_exploration(&mut self, w: PairTable) -> Result<()> {
        if w.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: w.dim() });
        }
        if w.values().iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
            return Err(Error::Precondition("exploration parameters must lie in (0, 1]".into()));
        }
        self.w = w;
        Ok(())
    }

    pub fn set_iteration(&mut self, k: usize) {
        self.k = k;
    }

    /// Column `j` holds `D† U(τ) D |j⟩` expressed through the model's eigenbasis,
    /// together with `W = D† V`.
    fn propagate(&self, model: &HamiltonianModel, tau: f64) -> (ComplexMatrix, ComplexMatrix) {
        let spec = model.spectrum();
        let w = self.unitary.ad_mul(spec.vectors());
        let d = self.dim();
        let phases: Vec<Complex64> = spec.energies().iter().map(|&e| Complex64::cis(-tau * e)).collect();
        let g = DMatrix::from_fn(d, d, |m, a| w[(m, a)] * phases[a]);
        (&g * w.adjoint(), w)
    }

    /// `D_k† U(τ) D_k`, whose column `j` is the pre-measurement state of qudit `j`.
    pub fn qudit_states(&self, model: &HamiltonianModel, tau: f64) -> Result<ComplexMatrix> {
        self.check_model(model)?;
        Ok(self.propagate(model, tau).0)
    }

    fn check_model(&self, model: &HamiltonianModel) -> Result<()> {
        if model.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: model.dim() });
        }
        Ok(())
    }

    /// Runs one learning iteration. Returns `Ok(None)` once the iteration
    /// budget is used up.
    pub fn iterate(&mut self, model: &HamiltonianModel) -> Result<Option<IterationRecord>> {
        self.check_model(model)?;
        if self.k > self.config.k_max {
            return Ok(None);
        }
        let d = self.dim();
        let cfg = &self.config;
        let w_max = self.w.max();

        let tau = cfg.tau_min + (cfg.tau_max - cfg.tau_min) * self.rng.random::<f64>();
        let (states, overlaps) = self.propagate(model, tau);

        let fidelities: Vec<f64> = (0..d)
            .map(|j| (0..d).map(|a| overlaps[(j, a)].norm()).fold(0.0, f64::max))
            .collect();

        let mut probs = vec![0.0; d];
        let outcomes: Vec<usize> = (0..d)
            .map(|j| {
                for (m, p) in probs.iter_mut().enumerate() {
                    *p = states[(m, j)].norm_sqr();
                }
                sample_outcome(&probs, self.rng.random::<f64>())
            })
            .collect();

        let r = cfg.reward_rate;
        let p = cfg.punishment_rate;
        let (reward, mixed, punish) = (r * r, r * p, p * p);
        let mut cases = Vec::with_capacity(self.w.len());
        for (j, l) in PairTable::pairs(d) {
            let case = PairCase::classify(outcomes[j], outcomes[l], j, l);
            let w_old = self.w.get(j, l);
            let w_new = match case {
                PairCase::DoubleReward => reward * w_old,
                PairCase::Mixed => (mixed * w_old).min(1.0),
                PairCase::DoublePunishment => (punish * w_old).min(1.0),
            };
            self.w.set(j, l, w_new);
            if case != PairCase::DoubleReward {
                let span = PI * w_old;
                let alpha = span * (2.0 * self.rng.random::<f64>() - 1.0);
                let beta = span * (2.0 * self.rng.random::<f64>() - 1.0);
                let gamma = span * (2.0 * self.rng.random::<f64>() - 1.0);
                RotationBlock::new(alpha, beta, gamma).apply_right(&mut self.unitary, j, l);
            }
            cases.push(case);
        }

        let record = IterationRecord {
            k: self.k,
            outcomes,
            w_max,
            tau,
            cases,
            fidelities,
            status: Convergence::Running,
            reset_triggered: false,
            budget_exhausted: false,
        };
        self.k += 1;
        if self.k % tolerance::ORTHO_CHECK_INTERVAL == 0 {
            self.maintain_unitarity()?;
        }
        Ok(Some(record))
    }

    fn maintain_unitarity(&mut self) -> Result<()> {
        if unitarity_residual(&self.unitary) <= tolerance::REORTHONORMALIZE {
            return Ok(());
        }
        // Polar factor D (D†D)^{-1/2}.
        let gram = self.unitary.ad_mul(&self.unitary);
        let gram = (&gram + gram.adjoint()).unscale(2.0);
        let spec = eig_hermitian(&gram)?;
        let d = self.dim();
        let v = spec.vectors();
        let scaled = DMatrix::from_fn(d, d, |i, a| v[(i, a)] / spec.energies()[a].sqrt());
        let inv_sqrt = scaled * v.adjoint();
        self.unitary = &self.unitary * inv_sqrt;
        self.reorthonormalizations += 1;
        Ok(())
    }

    /// Convergence test on `w_k^{(M)}` with the optional reset schedule.
    pub fn check_convergence(&mut self) -> Convergence {
        if self.w.max() >= self.config.w_threshold {
            return Convergence::Running;
        }
        self.converged_once = true;
        if !self.config.reset_enabled {
            return Convergence::Converged;
        }
        let value = self.config.scheduled_reset(self.k);
        if value <= self.config.w_threshold {
            return Convergence::Converged;
        }
        self.w.fill(value);
        Convergence::ResetApplied
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{build_random_seeded, HamiltonianModel, ModelParams};
    use nalgebra::DVector;

    fn diagonal_model(values: &[f64]) -> HamiltonianModel {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let raw = ComplexMatrix::from_diagonal(&DVector::from_vec(v));
        HamiltonianModel::from_raw(ModelParams::Random { dim: values.len(), seed: None, stream: None }, raw)
            .unwrap()
    }

    #[test]
    fn init_table_sizes() {
        for (d, pairs) in [(4, 6), (8, 28)] {
            let s = AgentState::new(d, AgentConfig::default()).unwrap();
            assert_eq!(s.exploration().len(), pairs);
            assert!(s.exploration().values().iter().all(|&w| w == 1.0));
            assert_eq!(s.unitary(), &ComplexMatrix::identity(d, d));
            assert_eq!(s.k(), 1);
        }
    }

    #[test]
    fn init_rejects_bad_inputs() {
        assert!(matches!(AgentState::new(1, AgentConfig::default()), Err(Error::Parameter(_))));
        let cfg = AgentConfig { reward_rate: 1.5, ..AgentConfig::default() };
        assert!(matches!(AgentState::new(4, cfg), Err(Error::Config(_))));
    }

    #[test]
    fn equal_seeds_give_identical_iterations() {
        let model = build_random_seeded(4, 3, 1).unwrap();
        let mut a = AgentState::new(4, AgentConfig::default()).unwrap();
        let mut b = AgentState::new(4, AgentConfig::default()).unwrap();
        for _ in 0..50 {
            assert_eq!(a.iterate(&model).unwrap(), b.iterate(&model).unwrap());
        }
        assert_eq!(a.unitary(), b.unitary());
    }

    #[test]
    fn dimension_mismatch() {
        let model = build_random_seeded(4, 3, 1).unwrap();
        let mut s = AgentState::new(8, AgentConfig::default()).unwrap();
        assert!(matches!(s.iterate(&model), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn diagonal_hamiltonian_only_rewards() {
        let model = diagonal_model(&[0.0, 1.0]);
        let cfg = AgentConfig::default();
        let mut s = AgentState::new(2, cfg.clone()).unwrap();
        let mut expected = 1.0;
        for _ in 0..20 {
            let rec = s.iterate(&model).unwrap().unwrap();
            assert_eq!(rec.outcomes, vec![0, 1]);
            assert_eq!(rec.cases, vec![PairCase::DoubleReward]);
            expected *= cfg.reward_rate * cfg.reward_rate;
            assert_eq!(s.exploration().get(0, 1), expected);
            assert_eq!(s.unitary(), &ComplexMatrix::identity(2, 2));
        }
    }

    #[test]
    fn exact_eigenbasis_is_always_rewarded() {
        let model = build_random_seeded(4, 11, 1).unwrap();
        let mut s = AgentState::new(4, AgentConfig::default()).unwrap();
        s.set_unitary(model.spectrum().vectors().clone()).unwrap();
        for _ in 0..50 {
            let before = s.exploration().clone();
            let rec = s.iterate(&model).unwrap().unwrap();
            assert_eq!(rec.outcomes, vec![0, 1, 2, 3]);
            assert!(rec.cases.iter().all(|&c| c == PairCase::DoubleReward));
            for (a, b) in before.values().iter().zip(s.exploration().values()) {
                assert_eq!(*b, 0.81 * a);
            }
        }
    }

    #[test]
    fn convergence_without_reset() {
        let cfg = AgentConfig { reset_enabled: false, ..AgentConfig::default() };
        let mut s = AgentState::new(4, cfg).unwrap();
        s.set_exploration(PairTable::filled(4, 0.004)).unwrap();
        assert_eq!(s.check_convergence(), Convergence::Converged);
        assert!(s.converged_once());
    }

    #[test]
    fn reset_before_k0_restores_w_r() {
        let cfg = AgentConfig { w_reset: 0.01, k0: 1200, k_max: 2000, ..AgentConfig::default() };
        let mut s = AgentState::new(4, cfg).unwrap();
        s.set_exploration(PairTable::filled(4, 0.004)).unwrap();
        s.set_iteration(100);
        assert_eq!(s.check_convergence(), Convergence::ResetApplied);
        assert!(s.exploration().values().iter().all(|&w| w == 0.01));
    }

    #[test]
    fn reset_at_end_of_budget_converges() {
        let cfg = AgentConfig::default();
        let k_max = cfg.k_max;
        let mut s = AgentState::new(4, cfg.clone()).unwrap();
        s.set_exploration(PairTable::filled(4, 0.004)).unwrap();
        s.set_iteration(k_max - 1);
        // w_r / (k_max - k0) = 0.01 / 800 <= w_th
        assert!(cfg.scheduled_reset(k_max - 1) <= cfg.w_threshold);
        assert_eq!(s.check_convergence(), Convergence::Converged);
        assert!(s.exploration().values().iter().all(|&w| w == 0.004));
    }

    #[test]
    fn running_above_threshold() {
        let mut s = AgentState::new(3, AgentConfig::default()).unwrap();
        assert_eq!(s.check_convergence(), Convergence::Running);
        assert!(!s.converged_once());
    }

    #[test]
    fn budget_exhaustion_is_not_an_error() {
        let model = build_random_seeded(4, 3, 1).unwrap();
        let cfg = AgentConfig { k0: 1, k_max: 3, ..AgentConfig::default() };
        let mut s = AgentState::new(4, cfg).unwrap();
        for _ in 0..3 {
            assert!(s.iterate(&model).unwrap().is_some());
        }
        assert!(s.iterate(&model).unwrap().is_none());
    }

    #[test]
    fn reorthonormalization_restores_unitarity() {
        let model = build_random_seeded(4, 3, 1).unwrap();
        let mut s = AgentState::new(4, AgentConfig::default()).unwrap();
        let mut skewed = ComplexMatrix::identity(4, 4);
        skewed[(0, 1)] = Complex64::new(1e-9, 0.0);
        s.unitary = skewed;
        s.maintain_unitarity().unwrap();
        assert_eq!(s.reorthonormalizations(), 1);
        assert!(unitarity_residual(s.unitary()) < 1e-14);
        s.iterate(&model).unwrap();
    }
}
