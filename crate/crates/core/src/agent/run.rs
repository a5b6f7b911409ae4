use super::{AgentConfig, AgentState, Convergence, IterationRecord};
use crate::hamiltonians::HamiltonianModel;
use crate::Result;

/// One complete realization of the learning loop.
#[derive(Debug, Clone)]
pub struct Realization {
    pub trajectory: Vec<IterationRecord>,
    pub final_state: AgentState,
}

impl Realization {
    pub fn converged(&self) -> bool {
        self.trajectory.last().is_some_and(|r| r.status == Convergence::Converged)
    }
}

/// Iterates until convergence or until the budget `k_max` is used up,
/// keeping every record.
pub fn run_realization(model: &HamiltonianModel, config: &AgentConfig) -> Result<Realization> {
    let mut trajectory = Vec::new();
    let final_state = run_realization_with(model, config, |rec, _| trajectory.push(rec))?;
    Ok(Realization { trajectory, final_state })
}

/// Like [`run_realization`], but hands each record to `observe` together with
/// the agent state after the iteration's update and convergence check.
pub fn run_realization_with<F>(model: &HamiltonianModel, config: &AgentConfig, mut observe: F) -> Result<AgentState>
where
    F: FnMut(IterationRecord, &AgentState),
{
    let mut agent = AgentState::new(model.dim(), config.clone())?;
    while let Some(mut rec) = agent.iterate(model)? {
        rec.status = agent.check_convergence();
        rec.reset_triggered = rec.status == Convergence::ResetApplied;
        rec.budget_exhausted = rec.status != Convergence::Converged && agent.k() > config.k_max;
        let done = rec.status == Convergence::Converged;
        observe(rec, &agent);
        if done {
            break;
        }
    }
    Ok(agent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{build_pairing, ModelParams};
    use crate::quantum::{Complex64, ComplexMatrix};
    use nalgebra::DVector;

    #[test]
    fn diagonal_model_converges_in_closed_form() {
        let raw = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]));
        let model = HamiltonianModel::from_raw(ModelParams::Random { dim: 2, seed: None, stream: None }, raw).unwrap();
        let cfg = AgentConfig { reset_enabled: false, ..AgentConfig::default() };
        let run = run_realization(&model, &cfg).unwrap();
        let r2: f64 = cfg.reward_rate * cfg.reward_rate;
        let expected = (cfg.w_threshold.ln() / r2.ln()).ceil() as usize;
        assert_eq!(expected, 26);
        assert_eq!(run.trajectory.len(), expected);
        assert!(run.converged());
    }

    #[test]
    fn deterministic_given_seed() {
        let model = build_pairing(3, 1.0).unwrap();
        let cfg = AgentConfig { k_max: 300, k0: 180, tau_max: 600.0, seed: 5, ..AgentConfig::default() };
        let a = run_realization(&model, &cfg).unwrap();
        let b = run_realization(&model, &cfg).unwrap();
        assert_eq!(a.trajectory, b.trajectory);
        assert_eq!(a.final_state.unitary(), b.final_state.unitary());
    }

    #[test]
    fn pairing_exact_states_are_never_mismeasured() {
        let model = build_pairing(3, 1.0).unwrap();
        let cfg = AgentConfig { k_max: 400, k0: 240, tau_max: 600.0, seed: 1, ..AgentConfig::default() };
        let run = run_realization(&model, &cfg).unwrap();
        for rec in &run.trajectory {
            assert_eq!(rec.outcomes[0], 0);
            assert_eq!(rec.outcomes[7], 7);
            assert_eq!(rec.fidelities[0], 1.0);
            assert_eq!(rec.fidelities[7], 1.0);
        }
    }

    #[test]
    fn exhausted_budget_is_flagged_on_last_record() {
        let model = build_pairing(3, 1.0).unwrap();
        let cfg = AgentConfig { k_max: 20, k0: 10, tau_max: 600.0, ..AgentConfig::default() };
        let run = run_realization(&model, &cfg).unwrap();
        assert_eq!(run.trajectory.len(), 20);
        let last = run.trajectory.last().unwrap();
        assert!(last.budget_exhausted);
        assert!(!run.converged());
        assert!(run.trajectory[..19].iter().all(|r| !r.budget_exhausted));
    }
}
