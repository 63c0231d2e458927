//! JSON documents printed under `--json`. Big integers and rationals are
//! strings so no precision is lost.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::density::DensityReport;
use crate::localfield::ExponentReport;
use crate::ratio;
use crate::weights::WeightMultiset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Unramified degree.
    pub f: u64,
    /// `ζ_{ℓ^a}` adjoined.
    pub a: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundOutput {
    pub n: u64,
    pub ell: u64,
    pub degree: u64,
    pub degree_bound: u64,
    pub m0: String,
    pub witness: Witness,
    pub sharp: String,
    /// Decimal expansion of `m0!`, absent when `m0` is too large.
    pub factorial_value: Option<String>,
}

impl BoundOutput {
    pub fn from_report(n: u64, ell: u64, degree: u64, r: &ExponentReport) -> Self {
        BoundOutput {
            n,
            ell,
            degree,
            degree_bound: r.degree_bound,
            m0: r.m0.to_string(),
            witness: Witness { f: r.witness.0, a: r.witness.1 },
            sharp: r.sharp_exponent.to_string(),
            factorial_value: r.factorial_exponent.as_ref().map(|v| v.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DensityOutput {
    Threshold {
        c1: u64,
        c2: u64,
        #[serde(with = "ratio")]
        value: BigRational,
    },
    Lift {
        #[serde(with = "ratio")]
        delta: BigRational,
        d: u64,
        #[serde(with = "ratio")]
        value: BigRational,
    },
    Residue {
        residue: u64,
        modulus: u64,
        report: DensityReport,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChebOutput {
    pub order: usize,
    pub subgroup_order: usize,
    pub components: usize,
    pub set_size: usize,
    #[serde(with = "ratio")]
    pub density: BigRational,
    /// First component contained in the set, by coset index.
    pub component: Option<usize>,
    pub seed: Option<u64>,
    pub sample: Option<DensityReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightsOutput {
    pub rank: usize,
    pub weights: Vec<Vec<i64>>,
}

impl From<&WeightMultiset> for WeightsOutput {
    fn from(w: &WeightMultiset) -> Self {
        WeightsOutput { rank: w.rank(), weights: w.weights().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerCheckOutput {
    pub m: u32,
    pub equal_powers: bool,
    pub equal_weights: bool,
}
