use crate::{Error, Result};

/// Learning-rate, convergence and schedule parameters of one agent.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentConfig {
    /// Reward rate `r ∈ (0, 1)`.
    pub reward_rate: f64,
    /// Punishment rate `p > 1`.
    pub punishment_rate: f64,
    /// Convergence threshold on the largest exploration parameter.
    pub w_threshold: f64,
    pub reset_enabled: bool,
    /// Value the exploration parameters are reset to after convergence.
    pub w_reset: f64,
    /// Iteration after which the reset value decays linearly to zero at `k_max`.
    pub k0: usize,
    /// Iteration budget.
    pub k_max: usize,
    /// Bounds of the uniform distribution of the dimensionless evolution time.
    pub tau_min: f64,
    pub tau_max: f64,
    pub seed: u64,
    /// Stream number within `seed`; see [`crate::rng`].
    pub stream: u64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        let r = 0.9;
        Self {
            reward_rate: r,
            punishment_rate: 2.0 / r,
            w_threshold: 0.005,
            reset_enabled: true,
            w_reset: 0.01,
            k0: 1200,
            k_max: 2000,
            tau_min: 0.0,
            tau_max: 100.0,
            seed: 0,
            stream: 0,
        }
    }
}

impl AgentConfig {
    /// Checks every bound and reports all violations together.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        let r = self.reward_rate;
        if !(r > 0.0 && r < 1.0) {
            bad.push(format!("reward rate r = {r} must lie in (0, 1)"));
        }
        if !(self.punishment_rate > 1.0 && self.punishment_rate.is_finite()) {
            bad.push(format!("punishment rate p = {} must be > 1", self.punishment_rate));
        }
        if !(self.w_threshold > 0.0 && self.w_threshold < self.w_reset && self.w_reset < 1.0) {
            bad.push(format!(
                "need 0 < w_th < w_r < 1, got w_th = {}, w_r = {}",
                self.w_threshold, self.w_reset
            ));
        }
        if !(self.tau_min >= 0.0 && self.tau_min < self.tau_max && self.tau_max.is_finite()) {
            bad.push(format!(
                "need 0 <= tau_min < tau_max, got [{}, {}]",
                self.tau_min, self.tau_max
            ));
        }
        if self.k0 >= self.k_max {
            bad.push(format!("need k0 < k_max, got k0 = {}, k_max = {}", self.k0, self.k_max));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(bad))
        }
    }

    /// Reset value scheduled at iteration `k`: `w_r` up to `k0`, then
    /// `w_r (k_max - k) / (k_max - k0)`.
    pub fn scheduled_reset(&self, k: usize) -> f64 {
        if k <= self.k0 {
            self.w_reset
        } else {
            let remaining = self.k_max.saturating_sub(k) as f64;
            self.w_reset * remaining / (self.k_max - self.k0) as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        AgentConfig::default().validate().unwrap();
    }

    #[test]
    fn reports_every_violation() {
        let cfg = AgentConfig {
            reward_rate: 1.2,
            punishment_rate: 0.5,
            w_threshold: 0.02,
            w_reset: 0.01,
            k0: 10,
            k_max: 10,
            ..AgentConfig::default()
        };
        match cfg.validate() {
            Err(Error::Config(v)) => assert_eq!(v.len(), 4, "{v:?}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn schedule_decays_linearly_after_k0() {
        let cfg = AgentConfig { k0: 600, k_max: 1000, w_reset: 0.05, ..AgentConfig::default() };
        assert_eq!(cfg.scheduled_reset(100), 0.05);
        assert_eq!(cfg.scheduled_reset(600), 0.05);
        assert!((cfg.scheduled_reset(800) - 0.025).abs() < 1e-15);
        assert_eq!(cfg.scheduled_reset(1000), 0.0);
    }
}
