//! Scripted reductions for Cases I, II and Subcases III.1 to III.4.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{classify_case, CaseLabel, Subcase};
use crate::algebra::{DiagElement, Poly, RatFun, Rational, Scalar, Var};
use crate::error::{Error, Result};
use crate::recursions::{CircularParams, N2Choice, Recursions};

/// Largest grid a terminal step will enumerate.
pub const GRID_POINT_GUARD: usize = 1_000_000;

/// Sample sets for terminal grids.
///
/// `q`, `m₁₁`, `m₂₂` range over all fractions in `[0,1]` with denominator at most `den`;
/// `r` entries over `k/den` for `0 ≤ k ≤ r_max·den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub den: u32,
    pub r_max: u32,
}

impl GridSpec {
    pub fn new(den: u32) -> Self {
        GridSpec { den, r_max: 3 }
    }

    pub fn samples(&self, v: Var) -> Vec<Rational> {
        let den = i64::from(self.den.max(1));
        match v {
            Var::Q | Var::M11 | Var::M22 => {
                let mut out: Vec<Rational> = (1..=den)
                    .flat_map(|b| (0..=b).map(move |a| Rational::new(a.into(), b.into())))
                    .collect();
                out.sort();
                out.dedup();
                out
            }
            _ => (0..=i64::from(self.r_max) * den)
                .map(|k| Rational::new(k.into(), den.into()))
                .collect(),
        }
    }
}

/// `var = value`, solved from a residual that is linear in `var`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolvedIdentity {
    pub var: Var,
    pub value: RatFun,
    /// The coefficient of `var` in the residual numerator; the solve is valid where it is nonzero.
    pub side_condition: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepKind {
    Solve(SolvedIdentity),
    /// The step's residual already vanishes identically, so it constrains nothing.
    Vacuous,
    Terminal(GridEvidence),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub triple: (usize, usize, usize),
    /// The residual after all earlier identities were applied.
    pub residual: [RatFun; 2],
    pub kind: StepKind,
    /// For a solve: substituting the identity annihilates `residual`.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridEvidence {
    pub free_vars: Vec<Var>,
    pub den: u32,
    pub points: usize,
    pub admissible: usize,
    /// Admissible points where a residual denominator vanishes.
    pub singular: usize,
    /// Admissible points where both residual components vanish.
    pub solutions: usize,
    /// Up to eight solution points.
    pub examples: Vec<Vec<(Var, Rational)>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubcaseReport {
    pub label: CaseLabel,
    /// Normalization and case substitutions, as expressions in the free symbols.
    pub setup: Vec<(Var, RatFun)>,
    pub n2: &'static str,
    pub steps: Vec<StepRecord>,
    /// Caveats about what the evidence does not establish.
    pub notes: Vec<String>,
}

impl SubcaseReport {
    pub fn identities(&self) -> impl Iterator<Item = &SolvedIdentity> {
        self.steps.iter().filter_map(|s| match &s.kind {
            StepKind::Solve(id) => Some(id),
            _ => None,
        })
    }

    pub fn terminal(&self) -> Option<&GridEvidence> {
        self.steps.iter().find_map(|s| match &s.kind {
            StepKind::Terminal(g) => Some(g),
            _ => None,
        })
    }

    /// Every solve verified and the terminal grid free of admissible solutions.
    pub fn refuted(&self) -> bool {
        self.steps.iter().all(|s| s.verified) && self.terminal().is_some_and(|g| g.solutions == 0)
    }
}

enum Action {
    Solve(Var),
    Terminal,
}

struct Script {
    setup: Vec<(Var, RatFun)>,
    invertible: bool,
    steps: Vec<((usize, usize, usize), Action)>,
}

fn c(n: i64) -> RatFun {
    RatFun::from_int(n)
}

fn script(label: CaseLabel) -> Result<Script> {
    use Action::*;
    let v = RatFun::var;
    let s = match label {
        // r₁₁ = r₂₁ = 1, q = 1/(1 + r₂₂)
        CaseLabel::CaseI => Script {
            setup: vec![
                (Var::R11, c(1)),
                (Var::R21, c(1)),
                (Var::Q, c(1).try_div(&(c(1) + v(Var::R22))).expect("nonzero")),
            ],
            invertible: true,
            steps: vec![((3, 1, 3), Terminal)],
        },
        // r₁₂ = r₂₂ = 1, q = r₁₁/(r₁₁ + 1)
        CaseLabel::CaseII => Script {
            setup: vec![
                (Var::R12, c(1)),
                (Var::R22, c(1)),
                (Var::Q, v(Var::R11).try_div(&(v(Var::R11) + c(1))).expect("nonzero")),
            ],
            invertible: true,
            steps: vec![((3, 1, 3), Terminal)],
        },
        CaseLabel::CaseIII(Subcase::One) => Script {
            setup: vec![(Var::R11, c(1)), (Var::R12, c(1)), (Var::R21, c(1)), (Var::R22, c(1))],
            invertible: false,
            steps: vec![((2, 1, 1), Solve(Var::M22)), ((2, 1, 3), Solve(Var::M11)), ((3, 1, 3), Terminal)],
        },
        CaseLabel::CaseIII(Subcase::Two) => Script {
            setup: vec![(Var::R11, c(0)), (Var::R21, c(0)), (Var::R12, c(1)), (Var::R22, c(1))],
            invertible: false,
            steps: vec![((2, 1, 1), Solve(Var::M22)), ((3, 1, 1), Terminal)],
        },
        CaseLabel::CaseIII(Subcase::Three) => Script {
            setup: vec![(Var::R11, c(1)), (Var::R21, c(1)), (Var::R12, c(0)), (Var::R22, c(0))],
            invertible: false,
            steps: vec![((2, 1, 1), Solve(Var::M11)), ((3, 1, 1), Terminal)],
        },
        CaseLabel::CaseIII(Subcase::Four) => Script {
            setup: vec![(Var::R11, c(1)), (Var::R21, c(1)), (Var::R12, v(Var::R22))],
            invertible: false,
            steps: vec![((2, 1, 1), Solve(Var::M11)), ((1, 1, 3), Solve(Var::M22)), ((3, 1, 3), Terminal)],
        },
        CaseLabel::NoCase => return Err(Error::InvalidParams("no script for parameters outside every case".into())),
    };
    Ok(s)
}

/// The current expression of every symbol.
#[derive(Clone)]
struct Bindings {
    vals: Vec<(Var, RatFun)>,
}

const BOUND: [Var; 7] = [Var::Q, Var::R11, Var::R12, Var::R21, Var::R22, Var::M11, Var::M22];

impl Bindings {
    fn new(setup: &[(Var, RatFun)]) -> Self {
        let vals = BOUND
            .iter()
            .map(|&v| {
                let e = setup
                    .iter()
                    .find(|(w, _)| *w == v)
                    .map(|(_, e)| e.clone())
                    .unwrap_or_else(|| RatFun::var(v));
                (v, e)
            })
            .collect();
        Bindings { vals }
    }

    fn get(&self, v: Var) -> &RatFun {
        &self.vals.iter().find(|(w, _)| *w == v).expect("bound").1
    }

    fn apply(&mut self, v: Var, value: &RatFun) -> Result<()> {
        for (_, e) in self.vals.iter_mut() {
            *e = e.subst(v, value).ok_or(Error::DivisionByZero)?;
        }
        Ok(())
    }

    fn params(&self) -> Result<CircularParams<RatFun>> {
        let g = |v| self.get(v).clone();
        CircularParams::new(g(Var::Q), [[g(Var::R11), g(Var::R12)], [g(Var::R21), g(Var::R22)]])
    }

    fn free_vars(&self, with_m: bool) -> Vec<Var> {
        let mut out: Vec<Var> = self
            .vals
            .iter()
            .filter(|(v, _)| with_m || !matches!(v, Var::M11 | Var::M22))
            .flat_map(|(_, e)| e.variables())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn eval(&self, point: &[(Var, Rational)], with_m: bool) -> Option<Vec<(Var, Rational)>> {
        self.vals
            .iter()
            .filter(|(v, _)| with_m || !matches!(v, Var::M11 | Var::M22))
            .map(|(v, e)| e.eval(point).map(|x| (*v, x)))
            .collect()
    }
}

fn residual(b: &Bindings, invertible: bool, t: (usize, usize, usize)) -> Result<[RatFun; 2]> {
    let params = b.params()?;
    let choice = if invertible {
        N2Choice::Invertible
    } else {
        N2Choice::Parametric(b.get(Var::M11).clone(), b.get(Var::M22).clone())
    };
    let mut rec = Recursions::new(&params);
    let r = rec.m_expansion_residual(&choice, t.0, t.1, t.2)?;
    let e = r.into_entries();
    Ok([e[0].clone(), e[1].clone()])
}

/// Solve `residual = 0` for `var` from the first nonzero component.
fn solve_linear(res: &[RatFun; 2], var: Var) -> Result<Option<SolvedIdentity>> {
    let Some(comp) = res.iter().find(|x| !x.is_zero()) else {
        return Ok(None);
    };
    let num = comp.numerator();
    if num.degree_in(var) != 1 {
        return Err(Error::NotLinear { var: var.name() });
    }
    let a = num.coeff_in(var, 1);
    let b = num.coeff_in(var, 0);
    let value = RatFun::quotient(-b, &a).ok_or(Error::DivisionByZero)?;
    Ok(Some(SolvedIdentity {
        var,
        value,
        side_condition: a.primitive().1,
    }))
}

fn annihilates(res: &[RatFun; 2], id: &SolvedIdentity) -> bool {
    res.iter()
        .all(|x| x.subst(id.var, &id.value).is_some_and(|y| y.is_zero()))
}

fn grid_points(free: &[Var], grid: &GridSpec) -> Result<Vec<Vec<(Var, Rational)>>> {
    let sets: Vec<Vec<Rational>> = free.iter().map(|&v| grid.samples(v)).collect();
    let total = sets.iter().try_fold(1usize, |acc, s| acc.checked_mul(s.len()));
    match total {
        Some(t) if t <= GRID_POINT_GUARD => {}
        _ => {
            return Err(Error::GuardExceeded {
                guard: "grid_points",
                limit: GRID_POINT_GUARD,
                value: total.unwrap_or(usize::MAX),
            })
        }
    }
    let mut points: Vec<Vec<(Var, Rational)>> = vec![Vec::new()];
    for (&v, set) in free.iter().zip(&sets) {
        points = points
            .into_iter()
            .flat_map(|p| {
                set.iter().map(move |x| {
                    let mut np = p.clone();
                    np.push((v, x.clone()));
                    np
                })
            })
            .collect();
    }
    Ok(points)
}

fn unit_interval(x: &Rational, strict: bool) -> bool {
    let zero = Rational::zero();
    let one = Rational::one();
    if strict {
        *x > zero && *x < one
    } else {
        *x >= zero && *x <= one
    }
}

fn admissible(label: CaseLabel, vals: &[(Var, Rational)], side: &[Poly], point: &[(Var, Rational)]) -> bool {
    let get = |v: Var| &vals.iter().find(|(w, _)| *w == v).expect("bound").1;
    if !unit_interval(get(Var::Q), true) {
        return false;
    }
    if label != CaseLabel::CaseI && label != CaseLabel::CaseII
        && !(unit_interval(get(Var::M11), false) && unit_interval(get(Var::M22), false))
    {
        return false;
    }
    let r = [[get(Var::R11).clone(), get(Var::R12).clone()], [get(Var::R21).clone(), get(Var::R22).clone()]];
    let Ok(params) = CircularParams::new(get(Var::Q).clone(), r) else {
        return false;
    };
    // Includes the no-automorphism assumption: classify_case rejects automorphic points.
    if classify_case(&params) != Ok(label) {
        return false;
    }
    side.iter().all(|p| p.eval(point).is_some_and(|x| !x.is_zero()))
}

fn terminal_evidence(
    label: CaseLabel,
    b: &Bindings,
    res: &[RatFun; 2],
    side: &[Poly],
    grid: &GridSpec,
    with_m: bool,
) -> Result<GridEvidence> {
    let free = b.free_vars(with_m);
    let points = grid_points(&free, grid)?;
    let mut ev = GridEvidence {
        free_vars: free,
        den: grid.den,
        points: points.len(),
        admissible: 0,
        singular: 0,
        solutions: 0,
        examples: Vec::new(),
    };
    for pt in &points {
        let Some(vals) = b.eval(pt, with_m) else {
            continue;
        };
        if !admissible(label, &vals, side, pt) {
            continue;
        }
        ev.admissible += 1;
        let values: Option<Vec<Rational>> = res.iter().map(|x| x.eval(pt)).collect();
        match values {
            None => ev.singular += 1,
            Some(v) if v.iter().all(|x| x.is_zero()) => {
                ev.solutions += 1;
                if ev.examples.len() < 8 {
                    ev.examples.push(vals);
                }
            }
            Some(_) => {}
        }
    }
    Ok(ev)
}

/// Runs the scripted reduction for one case: exact linear solves with back-substitution,
/// then a grid probe of the terminal residual.
pub fn subcase_report(label: CaseLabel, grid: &GridSpec) -> Result<SubcaseReport> {
    let sc = script(label)?;
    let mut b = Bindings::new(&sc.setup);
    let mut steps = Vec::new();
    let mut side = Vec::new();
    let mut notes = Vec::new();
    for (triple, action) in &sc.steps {
        let res = residual(&b, sc.invertible, *triple)?;
        match action {
            Action::Solve(var) => match solve_linear(&res, *var)? {
                Some(id) => {
                    let verified = annihilates(&res, &id);
                    b.apply(id.var, &id.value)?;
                    if id.side_condition.as_constant().is_none() {
                        side.push(id.side_condition.clone());
                    }
                    steps.push(StepRecord {
                        triple: *triple,
                        residual: res,
                        kind: StepKind::Solve(id),
                        verified,
                    });
                }
                None => steps.push(StepRecord {
                    triple: *triple,
                    residual: res,
                    kind: StepKind::Vacuous,
                    verified: true,
                }),
            },
            Action::Terminal => {
                let ev = terminal_evidence(label, &b, &res, &side, grid, !sc.invertible)?;
                steps.push(StepRecord {
                    triple: *triple,
                    residual: res,
                    kind: StepKind::Terminal(ev),
                    verified: true,
                });
            }
        }
    }
    if label == CaseLabel::CaseIII(Subcase::One) {
        notes.push(
            "the (2,1,3) step is solved for m11 only; other real branches of that residual are not certified".into(),
        );
    }
    notes.push("grid evidence only; no quantifier elimination is performed".into());
    Ok(SubcaseReport {
        label,
        setup: sc.setup,
        n2: if sc.invertible { "invertible" } else { "parametric" },
        steps,
        notes,
    })
}

/// Residual of the expansion at `triple` for numeric parameters.
pub fn numeric_residual(
    params: &CircularParams<Rational>,
    choice: &N2Choice<Rational>,
    triple: (usize, usize, usize),
) -> Result<DiagElement<Rational>> {
    Recursions::new(params).m_expansion_residual(choice, triple.0, triple.1, triple.2)
}
