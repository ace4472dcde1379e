//! Parameter-space side of the `ℂ²` no-go argument: which parameters admit a
//! normalizing automorphism, the constraint polynomials coming from `N₁(g₂(n)) = g₁(n)`,
//! the case split, scripted subcase reductions and sampling evidence.
//!
//! Nothing here proves anything. Linear implications are solved exactly, and terminal
//! contradictions are probed on finite rational grids.

mod coverage;
mod subcases;

pub use coverage::{sample_case_coverage, CoverageReport, COVERAGE_SAMPLE_GUARD};
pub use subcases::{
    numeric_residual, subcase_report, GridEvidence, GridSpec, SolvedIdentity, StepKind, StepRecord, SubcaseReport, GRID_POINT_GUARD,
};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{DiagElement, Poly, RatFun, Rational, Scalar, TraceWeights, Var};
use crate::cumulants::traciality_defects;
use crate::error::{Error, Result};
use crate::recursions::{CircularParams, Recursions};
use crate::LinearMapD;

/// An automorphism `θ` of `ℂ²` with `α_(2,1) = θ ∘ α_(1,2) ∘ θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Automorphism {
    Identity,
    Flip,
}

impl Automorphism {
    pub fn perm(self) -> [usize; 2] {
        match self {
            Automorphism::Identity => [0, 1],
            Automorphism::Flip => [1, 0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Automorphism::Identity => "identity",
            Automorphism::Flip => "flip",
        }
    }
}

/// `Identity` if `q·r₁₂ = (1−q)·r₂₁`, else `Flip` if `r₁₁ = r₂₂` and `q = 1/2`, else `None`.
pub fn normalizing_automorphism<S: Scalar>(p: &CircularParams<S>) -> Option<Automorphism> {
    let q = p.q().clone();
    let r = p.r();
    if q.clone() * r[0][1].clone() == (S::one() - q.clone()) * r[1][0].clone() {
        return Some(Automorphism::Identity);
    }
    if r[0][0] == r[1][1] && q == S::from_frac(1, 2) {
        return Some(Automorphism::Flip);
    }
    None
}

/// `R ↦ t²R`.
pub fn rescale<S: Scalar>(p: &CircularParams<S>, t: &S) -> Result<CircularParams<S>> {
    p.rescale(t)
}

/// `q, R` as independent symbols.
pub fn symbolic_params() -> CircularParams<RatFun> {
    let v = RatFun::var;
    CircularParams::new(v(Var::Q), [[v(Var::R11), v(Var::R12)], [v(Var::R21), v(Var::R22)]])
        .expect("symbolic q is invertible")
}

/// `g₁(n) − P₁(g₂(n))·g₁(0) − P₂(g₂(n))·g₁(1)`, componentwise.
pub fn lin_defect<S: Scalar>(rec: &mut Recursions<S>, n: usize) -> Result<DiagElement<S>> {
    let c = rec.coord_functionals()?;
    let g2n = rec.g2(n);
    let g1n = rec.g1(n);
    let g11 = rec.g1(1);
    let span = &DiagElement::splat(2, c.p1(&g2n)) + &g11.scale(&c.p2(&g2n));
    Ok(&g1n - &span)
}

/// Numerators of the two components of the `n`-th linear-combination defect, made
/// primitive with positive leading coefficient. `n` must be 2 or 3.
pub fn lin_constraint_polys(n: usize) -> Result<Vec<Poly>> {
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidParams("constraint polynomials are generated for n = 2 and n = 3".into()));
    }
    let mut rec = Recursions::new(&symbolic_params());
    let defect = lin_defect(&mut rec, n)?;
    Ok(defect.entries().iter().map(|c| c.numerator().primitive().1).collect())
}

/// The non-automorphic case split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CaseLabel {
    CaseI,
    CaseII,
    CaseIII(Subcase),
    NoCase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Subcase {
    /// all four `r` equal
    One,
    /// `0 = r₁₁ = r₂₁ ≠ r₁₂ = r₂₂`
    Two,
    /// `r₁₁ = r₂₁ ≠ r₁₂ = r₂₂ = 0`
    Three,
    /// `0 ≠ r₁₁ = r₂₁ ≠ r₁₂ = r₂₂ ≠ 0`
    Four,
}

impl CaseLabel {
    pub const SCRIPTED: [CaseLabel; 6] = [
        CaseLabel::CaseI,
        CaseLabel::CaseII,
        CaseLabel::CaseIII(Subcase::One),
        CaseLabel::CaseIII(Subcase::Two),
        CaseLabel::CaseIII(Subcase::Three),
        CaseLabel::CaseIII(Subcase::Four),
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseLabel::CaseI => "I",
            CaseLabel::CaseII => "II",
            CaseLabel::CaseIII(Subcase::One) => "III.1",
            CaseLabel::CaseIII(Subcase::Two) => "III.2",
            CaseLabel::CaseIII(Subcase::Three) => "III.3",
            CaseLabel::CaseIII(Subcase::Four) => "III.4",
            CaseLabel::NoCase => "none",
        }
    }

    pub fn from_name(s: &str) -> Option<CaseLabel> {
        [CaseLabel::NoCase]
            .into_iter()
            .chain(CaseLabel::SCRIPTED)
            .find(|c| c.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluates the case predicates. Fails with `AutomorphismExists` outside the
/// non-automorphic region.
pub fn classify_case(p: &CircularParams<Rational>) -> Result<CaseLabel> {
    if normalizing_automorphism(p).is_some() {
        return Err(Error::AutomorphismExists);
    }
    let r = p.r();
    let (r11, r12, r21, r22) = (&r[0][0], &r[0][1], &r[1][0], &r[1][1]);
    let q_rel = {
        let s = r11 + r22;
        !num_traits::Zero::is_zero(&s) && *p.q() == r11 / &s
    };
    let zero = Rational::from_integer(0.into());
    let label = match (r11 == r21, r12 == r22) {
        (true, false) if q_rel => CaseLabel::CaseI,
        (false, true) if q_rel => CaseLabel::CaseII,
        (true, true) => {
            let sub = if r11 == r12 {
                Subcase::One
            } else if *r11 == zero {
                Subcase::Two
            } else if *r12 == zero {
                Subcase::Three
            } else {
                Subcase::Four
            };
            CaseLabel::CaseIII(sub)
        }
        _ => CaseLabel::NoCase,
    };
    Ok(label)
}

/// `τ(α₁₂(eᵢ)eⱼ) − τ(eᵢα₂₁(eⱼ))` with `α₂₁` given by free symbols `sᵢⱼ`, row-major in `(i,j)`.
/// Each entry vanishing is one of the four elimination relations.
pub fn traciality_relations() -> Result<Vec<Poly>> {
    let v = RatFun::var;
    let a12 = LinearMapD::new(vec![vec![v(Var::R11), v(Var::R12)], vec![v(Var::R21), v(Var::R22)]])?;
    let a21 = LinearMapD::new(vec![vec![v(Var::S11), v(Var::S12)], vec![v(Var::S21), v(Var::S22)]])?;
    let w = TraceWeights::two_point(v(Var::Q))?;
    let defects = traciality_defects(&w, &a12, &a21)?;
    defects
        .into_iter()
        .map(|d| {
            if d.is_polynomial() {
                Ok(d.numerator().clone())
            } else {
                Err(Error::InvalidParams("traciality defect is not polynomial".into()))
            }
        })
        .collect()
}
