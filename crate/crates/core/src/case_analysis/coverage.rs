//! Seeded sampling of the non-automorphic parameter region.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{classify_case, lin_constraint_polys, normalizing_automorphism, CaseLabel, Subcase};
use crate::algebra::{Poly, Rational, Var};
use crate::error::{Error, Result};
use crate::recursions::CircularParams;

pub const COVERAGE_SAMPLE_GUARD: usize = 100_000;

/// Give up after this many draws per requested sample.
const DRAW_FACTOR: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    pub seed: u64,
    pub den: u32,
    pub requested: usize,
    /// Samples kept (no normalizing automorphism).
    pub sampled: usize,
    /// Draws discarded because an automorphism exists.
    pub rejected_automorphic: usize,
    /// Samples satisfying every constraint polynomial for `n = 2, 3`.
    pub satisfying: usize,
    /// Classification of the satisfying samples.
    pub by_case: BTreeMap<CaseLabel, usize>,
    /// Satisfying samples that fit no case: discrepancies.
    pub no_case_points: Vec<CircularParams<Rational>>,
    /// Per scripted case: samples drawn inside the case, and how many satisfy the constraints.
    pub within_case: BTreeMap<CaseLabel, (usize, usize)>,
}

impl CoverageReport {
    pub fn no_case(&self) -> usize {
        self.by_case.get(&CaseLabel::NoCase).copied().unwrap_or(0)
    }
}

fn lattice(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: u32) -> Rational {
    Rational::new(rng.random_range(lo..=hi).into(), i64::from(den).into())
}

/// Draws `count` parameter tuples on the lattice `(1/den)ℤ` (`q ∈ (0,1)`, `r ∈ [0,3]`)
/// without a normalizing automorphism, tests them against the constraint
/// polynomials, and classifies the ones that satisfy all of them. A second pass draws
/// points inside each scripted case and checks they satisfy the constraints.
pub fn sample_case_coverage(count: usize, seed: u64, den: u32) -> Result<CoverageReport> {
    if count > COVERAGE_SAMPLE_GUARD {
        return Err(Error::GuardExceeded {
            guard: "coverage_samples",
            limit: COVERAGE_SAMPLE_GUARD,
            value: count,
        });
    }
    if den < 2 {
        return Err(Error::InvalidParams("lattice denominator must be at least 2".into()));
    }
    let mut polys: Vec<Poly> = lin_constraint_polys(2)?;
    polys.extend(lin_constraint_polys(3)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = i64::from(den);
    let mut report = CoverageReport {
        seed,
        den,
        requested: count,
        sampled: 0,
        rejected_automorphic: 0,
        satisfying: 0,
        by_case: BTreeMap::new(),
        no_case_points: Vec::new(),
        within_case: BTreeMap::new(),
    };
    let mut draws = 0usize;
    while report.sampled < count && draws < count.saturating_mul(DRAW_FACTOR).max(DRAW_FACTOR) {
        draws += 1;
        let q = lattice(&mut rng, 1, d - 1, den);
        let mut r: [[Rational; 2]; 2] = Default::default();
        for x in r.iter_mut().flatten() {
            *x = lattice(&mut rng, 0, 3 * d, den);
        }
        let params = CircularParams::new(q, r)?;
        if normalizing_automorphism(&params).is_some() {
            report.rejected_automorphic += 1;
            continue;
        }
        report.sampled += 1;
        if !satisfies(&polys, &params) {
            continue;
        }
        report.satisfying += 1;
        let label = classify_case(&params)?;
        *report.by_case.entry(label).or_insert(0) += 1;
        if label == CaseLabel::NoCase {
            report.no_case_points.push(params);
        }
    }
    for label in CaseLabel::SCRIPTED {
        let mut drawn = 0;
        let mut ok = 0;
        let mut tries = 0;
        while drawn < WITHIN_CASE_SAMPLES && tries < WITHIN_CASE_SAMPLES * DRAW_FACTOR {
            tries += 1;
            let Some(params) = draw_in_case(&mut rng, label, den) else {
                continue;
            };
            if classify_case(&params) != Ok(label) {
                continue;
            }
            drawn += 1;
            if satisfies(&polys, &params) {
                ok += 1;
            }
        }
        report.within_case.insert(label, (drawn, ok));
    }
    Ok(report)
}

/// Samples per scripted case in the within-case pass.
const WITHIN_CASE_SAMPLES: usize = 20;

fn satisfies(polys: &[Poly], params: &CircularParams<Rational>) -> bool {
    let point = [
        (Var::Q, params.q().clone()),
        (Var::R11, params.r()[0][0].clone()),
        (Var::R12, params.r()[0][1].clone()),
        (Var::R21, params.r()[1][0].clone()),
        (Var::R22, params.r()[1][1].clone()),
    ];
    polys
        .iter()
        .all(|p| p.eval(&point).is_some_and(|v| num_traits::Zero::is_zero(&v)))
}

/// A lattice point satisfying the defining equalities of `label`; `q` is forced by the
/// case relation in Cases I and II. Inequalities are left to the caller.
fn draw_in_case(rng: &mut ChaCha8Rng, label: CaseLabel, den: u32) -> Option<CircularParams<Rational>> {
    let d = i64::from(den);
    let mut r = || lattice(rng, 0, 3 * d, den);
    let (a, b, c) = (r(), r(), r());
    let zero = Rational::from_integer(0.into());
    let (r11, r12, r21, r22) = match label {
        CaseLabel::CaseI => (a.clone(), b, a, c),
        CaseLabel::CaseII => (a, b.clone(), c, b),
        CaseLabel::CaseIII(Subcase::One) => (a.clone(), a.clone(), a.clone(), a),
        CaseLabel::CaseIII(Subcase::Two) => (zero.clone(), a.clone(), zero, a),
        CaseLabel::CaseIII(Subcase::Three) => (a.clone(), zero.clone(), a, zero),
        CaseLabel::CaseIII(Subcase::Four) => (a.clone(), b.clone(), a, b),
        CaseLabel::NoCase => return None,
    };
    let q = match label {
        CaseLabel::CaseI | CaseLabel::CaseII => {
            let s = &r11 + &r22;
            if num_traits::Zero::is_zero(&s) {
                return None;
            }
            &r11 / &s
        }
        _ => lattice(rng, 1, d - 1, den),
    };
    CircularParams::new(q, [[r11, r12], [r21, r22]]).ok()
}
