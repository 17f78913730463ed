use super::EngineError;

/// Rates of the coupled awareness (layer A) / epidemic (layer B) dynamics
/// plus the run controls of the iteration to steady state.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    /// Awareness transmissibility on layer A.
    pub beta_a: f64,
    /// Epidemic transmissibility on layer B.
    pub beta_b: f64,
    /// Awareness recovery (loss of willingness to spread).
    pub delta_a: f64,
    /// Epidemic recovery.
    pub delta_b: f64,
    /// Multiplier on `beta_b` for aware individuals. 0 is full protection.
    pub gamma: f64,
    /// Probability that an infected, unaware individual becomes aware on
    /// its own.
    pub kappa: f64,
    /// Stop once total infectious mass drops below this.
    pub convergence_tol: f64,
    pub max_steps: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            beta_a: 0.5,
            beta_b: 0.5,
            delta_a: 1.0,
            delta_b: 1.0,
            gamma: 0.5,
            kappa: 0.5,
            convergence_tol: 1e-9,
            max_steps: 100_000,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), EngineError> {
        let rates = [
            ("beta_a", self.beta_a),
            ("beta_b", self.beta_b),
            ("delta_a", self.delta_a),
            ("delta_b", self.delta_b),
            ("gamma", self.gamma),
            ("kappa", self.kappa),
        ];
        for (field, value) in rates {
            if !(0.0..=1.0).contains(&value) {
                return Err(EngineError::InvalidParameter {
                    field,
                    reason: format!("{value} is outside [0, 1]"),
                });
            }
        }
        if !(self.convergence_tol > 0.0) {
            return Err(EngineError::InvalidParameter {
                field: "convergence_tol",
                reason: format!("{} must be positive", self.convergence_tol),
            });
        }
        if self.max_steps == 0 {
            return Err(EngineError::InvalidParameter {
                field: "max_steps",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}
