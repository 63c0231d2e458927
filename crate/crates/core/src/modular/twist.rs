use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::character::{primitive_characters, DirichletCharacter};
use super::table::EigenvalueTable;
use super::ModularError;
use crate::density::{checkpoint_grid, threshold, DensityReport};
use crate::exactnum::{cyclo_eq, CyclotomicNumber, RootOfUnity};
use crate::ratio;

/// Primes where some power of `a_p(f)` equals the same power of `a_p(g)`,
/// with the least such exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerLocus {
    pub primes: BTreeMap<u64, u32>,
    pub density_report: DensityReport,
}

/// Least `n >= 1` with `a^n = b^n`, if any.
fn min_power(a: &BigInt, b: &BigInt) -> Option<u32> {
    if a == b {
        Some(1)
    } else if a == &-b {
        Some(2)
    } else {
        None
    }
}

pub fn power_locus(f: &EigenvalueTable, g: &EigenvalueTable) -> PowerLocus {
    let common = f.common_primes(g);
    let primes: BTreeMap<u64, u32> = common
        .iter()
        .filter_map(|&p| min_power(&f.entries()[&p], &g.entries()[&p]).map(|n| (p, n)))
        .collect();
    let members: Vec<u64> = primes.keys().copied().collect();
    let cutoff = common.last().copied().unwrap_or(0);
    let density_report = DensityReport::over_universe(&members, &common, &checkpoint_grid(cutoff));
    PowerLocus { primes, density_report }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistMatch {
    pub character: DirichletCharacter,
    pub conductor: u64,
    /// Common primes coprime to the conductor on which `a_p(g) = χ(p)a_p(f)`
    /// was checked.
    pub primes_verified: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistReport {
    pub matches: Vec<TwistMatch>,
    /// Common primes of the two tables.
    pub primes_checked: u64,
    /// Largest conductor searched.
    pub search_bound: u64,
}

/// `χ(p)·a == b` in the cyclotomic field of `χ`'s values.
fn twisted_equal(z: &RootOfUnity, a: &BigInt, b: &BigInt) -> bool {
    if let Some(s) = z.as_sign() {
        return if s == 1 { a == b } else { a == &-b };
    }
    // ζ·a is rational only when a = 0
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let lhs = CyclotomicNumber::from_root_of_unity(z).mul(&CyclotomicNumber::from_integer(a.clone()));
    cyclo_eq(&lhs, &CyclotomicNumber::from_integer(b.clone()))
}

/// Primitive characters of conductor `<= max_conductor` with
/// `a_p(g) = χ(p)·a_p(f)` at every common prime coprime to the conductor.
/// A character is reported only if it was checked on at least one prime.
pub fn find_twist(
    f: &EigenvalueTable,
    g: &EigenvalueTable,
    max_conductor: u64,
) -> Result<TwistReport, ModularError> {
    if max_conductor == 0 {
        return Err(ModularError::BadModulus(0));
    }
    let common = f.common_primes(g);
    let mut matches = Vec::new();
    for c in 1..=max_conductor {
        for chi in primitive_characters(c)? {
            let mut verified = 0u64;
            let ok = common.iter().filter(|&&p| c % p != 0).all(|&p| {
                verified += 1;
                let z = chi.eval(p as i64).expect("p is a unit mod c");
                twisted_equal(&z, &f.entries()[&p], &g.entries()[&p])
            });
            if ok && verified > 0 {
                matches.push(TwistMatch { character: chi, conductor: c, primes_verified: verified });
            }
        }
    }
    Ok(TwistReport {
        matches,
        primes_checked: common.len() as u64,
        search_bound: max_conductor,
    })
}

/// Locus density at or above which an empty twist search is flagged.
pub fn dense_locus_level() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// A twisting character was found.
    Twist,
    /// The locus has density zero at this cutoff; the search did not run.
    EmptyLocus,
    /// The search ran on a sparse locus and found nothing.
    NoTwist,
    /// The locus is dense but no character of bounded conductor matches.
    /// With the non-CM hypothesis declared this contradicts the expected
    /// conclusion at this scale.
    Anomaly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub locus: PowerLocus,
    /// `threshold(1, 1)`: with one form non-CM the component count is 1.
    #[serde(with = "ratio")]
    pub threshold: BigRational,
    /// Whether the caller declared that at least one form is non-CM.
    pub non_cm_declared: bool,
    pub twist: Option<TwistReport>,
    pub verdict: Verdict,
}

/// Locus, then the twist search when the locus density beats the threshold.
/// `non_cm_declared` records an assumption that finite data cannot check;
/// without it a dense locus with no twist is reported as `NoTwist`.
pub fn twist_pipeline(
    f: &EigenvalueTable,
    g: &EigenvalueTable,
    max_conductor: u64,
    non_cm_declared: bool,
) -> Result<PipelineReport, ModularError> {
    if f.common_primes(g).is_empty() {
        return Err(ModularError::EmptyIntersection);
    }
    let locus = power_locus(f, g);
    let thr = threshold(1, 1).expect("positive component counts");
    let density = &locus.density_report.empirical;
    let (twist, verdict) = if density > &thr {
        let report = find_twist(f, g, max_conductor)?;
        let verdict = if !report.matches.is_empty() {
            Verdict::Twist
        } else if non_cm_declared && density >= &dense_locus_level() {
            Verdict::Anomaly
        } else {
            Verdict::NoTwist
        };
        (Some(report), verdict)
    } else {
        (None, Verdict::EmptyLocus)
    };
    debug_assert!(!density.is_negative());
    Ok(PipelineReport { locus, threshold: thr, non_cm_declared, twist, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{ap_table, quadratic_twist, EllipticCurve};
    use num_bigint::BigUint;

    fn table(label: &str, entries: &[(u64, i64)]) -> EigenvalueTable {
        let map = entries.iter().map(|&(p, a)| (p, BigInt::from(a))).collect();
        EigenvalueTable::new(label, BigUint::from(1u32), 2, map).unwrap()
    }

    #[test]
    fn min_powers() {
        let f = table("f", &[(2, 3), (3, 0), (5, 2), (7, 1), (11, 0)]);
        let g = table("g", &[(2, 3), (3, 0), (5, -2), (7, 2), (11, 1), (13, 4)]);
        let l = power_locus(&f, &g);
        assert_eq!(l.primes, BTreeMap::from([(2, 1), (3, 1), (5, 2)]));
        assert_eq!(l.density_report.empirical, BigRational::new(3.into(), 5.into()));
        assert_eq!(power_locus(&g, &f), l);
    }

    #[test]
    fn root_of_unity_twists() {
        let i = RootOfUnity::primitive(4);
        let three = BigInt::from(3);
        assert!(!twisted_equal(&i, &three, &three));
        assert!(twisted_equal(&i, &BigInt::zero(), &BigInt::zero()));
        assert!(twisted_equal(&RootOfUnity::minus_one(), &three, &-three.clone()));
        assert!(twisted_equal(&i.pow(2), &three, &-&three));
    }

    #[test]
    fn twist_pair_small() {
        let e = EllipticCurve::new(1, 1).unwrap();
        let f = ap_table(&e, 2000).unwrap();
        let g = ap_table(&quadratic_twist(&e, -1).unwrap(), 2000).unwrap();
        let r = twist_pipeline(&f, &g, 8, true).unwrap();
        assert_eq!(r.verdict, Verdict::Twist);
        assert_eq!(r.locus.density_report.empirical, BigRational::from_integer(1.into()));
        let t = r.twist.unwrap();
        assert_eq!(t.matches.len(), 1);
        assert_eq!(t.matches[0].conductor, 4);
        assert_eq!(t.matches[0].character, crate::modular::quadratic_character(-1).unwrap());
    }

    #[test]
    fn self_pair_matches_trivial() {
        let e = EllipticCurve::new(-1, 1).unwrap();
        let f = ap_table(&e, 500).unwrap();
        let r = twist_pipeline(&f, &f, 4, true).unwrap();
        assert_eq!(r.locus.density_report.empirical, BigRational::from_integer(1.into()));
        let t = r.twist.unwrap();
        assert!(t.matches.iter().any(|m| m.character.is_trivial()));
    }

    #[test]
    fn disjoint_tables() {
        let f = table("f", &[(5, 1)]);
        let g = table("g", &[(7, 1)]);
        assert_eq!(twist_pipeline(&f, &g, 4, true), Err(ModularError::EmptyIntersection));
    }

    #[test]
    fn dense_locus_without_twist_is_an_anomaly() {
        // agree up to sign at 5 and 7 only, with no consistent character
        let f = table("f", &[(5, 1), (7, 1), (11, 1), (13, 2)]);
        let g = table("g", &[(5, 1), (7, -1), (11, 1), (13, 3)]);
        let r = twist_pipeline(&f, &g, 3, true).unwrap();
        assert_eq!(r.verdict, Verdict::Anomaly);
        let r = twist_pipeline(&f, &g, 3, false).unwrap();
        assert_eq!(r.verdict, Verdict::NoTwist);
        let h = table("h", &[(5, 2), (7, 2), (11, 2), (13, 3)]);
        assert_eq!(twist_pipeline(&f, &h, 3, true).unwrap().verdict, Verdict::EmptyLocus);
    }

    #[test]
    fn report_json_round_trip() {
        let f = table("f", &[(5, 1), (7, -1), (11, 0)]);
        let g = table("g", &[(5, -1), (7, 1), (11, 0)]);
        let r = twist_pipeline(&f, &g, 4, true).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: PipelineReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
