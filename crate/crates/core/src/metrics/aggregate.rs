use super::{energy_fluctuation, energy_moments, fidelities};
use crate::agent::{run_realization_with, AgentConfig, Convergence};
use crate::hamiltonians::HamiltonianModel;
use crate::{Error, Result};

/// Fraction of the trajectory, counted from its end, over which plateau
/// fidelities are averaged.
pub const PLATEAU_FRACTION: f64 = 0.05;

/// Per-iteration diagnostics and final outputs of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationResult {
    pub realization_index: usize,
    /// `f_k^{(j)}` for every iteration `k` (outer) and basis state `j` (inner).
    pub fidelity_trajectory: Vec<Vec<f64>>,
    /// `w_k^{(M)}` for every iteration.
    pub w_max_trajectory: Vec<f64>,
    /// Fidelities and `w^{(M)}` of the final state, used to pad the
    /// trajectory past its end.
    pub final_fidelities: Vec<f64>,
    pub final_w_max: f64,
    pub final_energies: Vec<f64>,
    pub final_sigmas: Vec<f64>,
    pub iterations_to_converge: usize,
    pub converged: bool,
}

impl RealizationResult {
    /// Runs one realization on `model` and evaluates its diagnostics against
    /// the model's exact spectrum and rescaled Hamiltonian.
    pub fn simulate(realization_index: usize, model: &HamiltonianModel, config: &AgentConfig) -> Result<Self> {
        let mut fidelity_trajectory = Vec::new();
        let mut w_max_trajectory = Vec::new();
        let mut converged = false;
        let agent = run_realization_with(model, config, |rec, _| {
            converged = rec.status == Convergence::Converged;
            fidelity_trajectory.push(rec.fidelities);
            w_max_trajectory.push(rec.w_max);
        })?;
        let d = agent.unitary();
        let h = model.rescaled();
        let mut final_energies = Vec::with_capacity(model.dim());
        let mut final_sigmas = Vec::with_capacity(model.dim());
        for j in 0..model.dim() {
            final_energies.push(energy_moments(d, h, j)?.0);
            final_sigmas.push(energy_fluctuation(d, h, j)?);
        }
        Ok(Self {
            realization_index,
            iterations_to_converge: fidelity_trajectory.len(),
            fidelity_trajectory,
            w_max_trajectory,
            final_fidelities: fidelities(d, model.spectrum())?,
            final_w_max: agent.w_max(),
            final_energies,
            final_sigmas,
            converged,
        })
    }

    pub fn dim(&self) -> usize {
        self.final_fidelities.len()
    }

    pub fn len(&self) -> usize {
        self.w_max_trajectory.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w_max_trajectory.is_empty()
    }
}

/// Means across realizations, per iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub realizations: usize,
    /// `F_k^{(j)}`, outer index iteration, inner index state.
    pub mean_fidelity: Vec<Vec<f64>>,
    /// `W_k^{(M)}`.
    pub mean_w_max: Vec<f64>,
    /// Plateau (final-window mean) fidelity of every state.
    pub plateau: Vec<f64>,
    pub f_max: f64,
    pub f_min: f64,
    /// Number of trailing iterations averaged for the plateau.
    pub plateau_window: usize,
}

/// Streaming mean over realizations.
///
/// Realizations shorter than the longest are padded with their final values.
/// Sums run in push order, so pushing in realization-index order makes the
/// result independent of how the realizations were scheduled.
#[derive(Debug, Clone)]
pub struct Aggregator {
    dim: usize,
    count: usize,
    fid_sums: Vec<Vec<f64>>,
    w_sums: Vec<f64>,
    /// `(length, final fidelities, final w_max)` in push order.
    ends: Vec<(usize, Vec<f64>, f64)>,
}

impl Aggregator {
    pub fn new(dim: usize) -> Self {
        Self { dim, count: 0, fid_sums: Vec::new(), w_sums: Vec::new(), ends: Vec::new() }
    }

    pub fn push(&mut self, r: &RealizationResult) -> Result<()> {
        if r.dim() != self.dim || r.fidelity_trajectory.iter().any(|f| f.len() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: r.dim() });
        }
        if r.fidelity_trajectory.len() != r.w_max_trajectory.len() {
            return Err(Error::Precondition("fidelity and w trajectories differ in length".into()));
        }
        let n = r.len();
        if n > self.w_sums.len() {
            self.fid_sums.resize(n, vec![0.0; self.dim]);
            self.w_sums.resize(n, 0.0);
        }
        for (k, (f, w)) in r.fidelity_trajectory.iter().zip(&r.w_max_trajectory).enumerate() {
            for (s, x) in self.fid_sums[k].iter_mut().zip(f) {
                *s += x;
            }
            self.w_sums[k] += w;
        }
        self.ends.push((n, r.final_fidelities.clone(), r.final_w_max));
        self.count += 1;
        Ok(())
    }

    pub fn finish(self) -> Result<AggregateResult> {
        if self.count == 0 {
            return Err(Error::Empty("no realizations to aggregate"));
        }
        let len = self.w_sums.len();
        let n = self.count as f64;
        let mut tail_f = vec![0.0; self.dim];
        let mut tail_w = 0.0;
        let mut mean_fidelity = Vec::with_capacity(len);
        let mut mean_w_max = Vec::with_capacity(len);
        for k in 0..len {
            for (end, f, w) in &self.ends {
                if *end == k {
                    for (t, x) in tail_f.iter_mut().zip(f) {
                        *t += x;
                    }
                    tail_w += w;
                }
            }
            mean_fidelity.push(self.fid_sums[k].iter().zip(&tail_f).map(|(s, t)| (s + t) / n).collect::<Vec<_>>());
            mean_w_max.push((self.w_sums[k] + tail_w) / n);
        }

        let (plateau, window) = if len == 0 { (vec![f64::NAN; self.dim], 0) } else { plateau_means(&mean_fidelity) };
        let f_max = plateau.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let f_min = plateau.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(AggregateResult {
            realizations: self.count,
            mean_fidelity,
            mean_w_max,
            plateau,
            f_max,
            f_min,
            plateau_window: window,
        })
    }
}

/// Per-state mean of the last `ceil(PLATEAU_FRACTION * len)` rows of a
/// `[iteration][state]` table, and that window length.
pub fn plateau_means(mean_fidelity: &[Vec<f64>]) -> (Vec<f64>, usize) {
    let len = mean_fidelity.len();
    let Some(last) = mean_fidelity.last() else {
        return (Vec::new(), 0);
    };
    let window = ((len as f64 * PLATEAU_FRACTION).ceil() as usize).clamp(1, len);
    let plateau = (0..last.len())
        .map(|j| mean_fidelity[len - window..].iter().map(|f| f[j]).sum::<f64>() / window as f64)
        .collect();
    (plateau, window)
}

/// Aggregates `results` in realization-index order.
pub fn aggregate(results: &[RealizationResult]) -> Result<AggregateResult> {
    let first = results.first().ok_or(Error::Empty("no realizations to aggregate"))?;
    let mut ordered: Vec<&RealizationResult> = results.iter().collect();
    ordered.sort_by_key(|r| r.realization_index);
    let mut agg = Aggregator::new(first.dim());
    for r in ordered {
        agg.push(r)?;
    }
    agg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(index: usize, value: f64, len: usize) -> RealizationResult {
        RealizationResult {
            realization_index: index,
            fidelity_trajectory: vec![vec![value; 2]; len],
            w_max_trajectory: vec![0.5; len],
            final_fidelities: vec![value; 2],
            final_w_max: 0.001,
            final_energies: vec![0.0, 1.0],
            final_sigmas: vec![0.0, 0.0],
            iterations_to_converge: len,
            converged: true,
        }
    }

    #[test]
    fn single_realization_is_its_own_mean() {
        let r = constant(0, 0.9, 40);
        let a = aggregate(std::slice::from_ref(&r)).unwrap();
        assert_eq!(a.mean_fidelity, r.fidelity_trajectory);
        assert_eq!(a.mean_w_max, r.w_max_trajectory);
        assert_eq!(a.plateau_window, 2);
    }

    #[test]
    fn two_constant_realizations_average() {
        let a = aggregate(&[constant(0, 0.9, 10), constant(1, 1.0, 10)]).unwrap();
        assert!(a.mean_fidelity.iter().flatten().all(|&f| (f - 0.95).abs() < 1e-15));
        assert!((a.f_max - 0.95).abs() < 1e-15 && (a.f_min - 0.95).abs() < 1e-15);
    }

    #[test]
    fn short_runs_are_padded_with_final_values() {
        let a = aggregate(&[constant(0, 0.8, 4), constant(1, 1.0, 10)]).unwrap();
        assert_eq!(a.mean_w_max.len(), 10);
        assert_eq!(a.mean_w_max[3], 0.5);
        assert_eq!(a.mean_w_max[4], (0.5 + 0.001) / 2.0);
        assert!((a.mean_fidelity[9][0] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(aggregate(&[]), Err(Error::Empty(_))));
    }

    #[test]
    fn order_of_input_does_not_matter() {
        let rs = vec![constant(2, 0.7, 5), constant(0, 0.9, 8), constant(1, 0.3, 3)];
        let mut rev = rs.clone();
        rev.reverse();
        assert_eq!(aggregate(&rs).unwrap(), aggregate(&rev).unwrap());
    }
}
