//! Orbit tables and verdicts shared by the dynamics checks and the CLI.

use serde::Serialize;

use crate::error::Result;
use crate::poly::{Degree, Disk, Poly};
use crate::real::Real;
use crate::scalar::Coeff;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    /// Process exit code: 0 pass, 1 verified failure, 3 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 3,
        }
    }

    /// Pass only if every verdict passes; any failure beats inconclusive.
    pub fn all(items: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Pass;
        for v in items {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Inconclusive => out = Verdict::Inconclusive,
                Verdict::Pass => {}
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitStep {
    pub n: usize,
    pub norm_upper: Real,
    pub norm_boundary: Real,
    pub degree: Degree,
}

impl OrbitStep {
    pub fn measure<S: Coeff>(n: usize, p: &Poly<S>, disk: &Disk, samples: usize) -> Result<Self> {
        Ok(OrbitStep {
            n,
            norm_upper: p.norm_upper(disk),
            norm_boundary: p.norm_boundary(disk, samples)?,
            degree: p.degree(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopePoint {
    pub n: usize,
    pub bound: Real,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub radius: f64,
    pub steps: Vec<OrbitStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope: Option<Vec<EnvelopePoint>>,
}

impl OrbitReport {
    pub fn new(disk: Disk, steps: Vec<OrbitStep>) -> Self {
        OrbitReport {
            radius: disk.radius(),
            steps,
            envelope: None,
        }
    }

    pub fn steps(&self) -> &[OrbitStep] {
        &self.steps
    }

    pub fn disk(&self) -> Disk {
        Disk::new(self.radius).expect("radius validated on construction")
    }

    /// Envelope value at step `n`, if attached.
    pub fn envelope_at(&self, n: usize) -> Option<&Real> {
        self.envelope.as_ref()?.iter().find(|e| e.n == n).map(|e| &e.bound)
    }

    pub fn boundary_within_upper(&self) -> bool {
        self.steps.iter().all(|s| s.norm_boundary <= s.norm_upper)
    }
}
