//! Numerical tolerances shared across modules.

use serde::{Deserialize, Serialize};

/// Residual tolerance used when checking printed five-decimal angle values.
pub const PRINTED_VALUE_EQ5: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Compatibility equation residual accepted for solver output.
    pub eq5: f64,
    /// Vertex angle-sum remainder, radians.
    pub vertex: f64,
    /// Total spherical area against 4π.
    pub area: f64,
    /// Closure residual for embeddings.
    pub embed: f64,
    /// Residual target for 1-D root refinement.
    pub root: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eq5: 1e-9,
            vertex: 1e-6,
            area: 1e-6,
            embed: 1e-8,
            root: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [
            ("eq5", self.eq5),
            ("vertex", self.vertex),
            ("area", self.area),
            ("embed", self.embed),
            ("root", self.root),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(crate::Error::domain(format!(
                    "tolerance {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}
