//! Case analysis: constraint polynomials, classification, scripted reductions, sampling.

mod common;

use bipolar_core::algebra::{rat, RatFun, Rational, Var};
use bipolar_core::case_analysis::*;
use bipolar_core::recursions::{CircularParams, N2Choice, Recursions};
use common::*;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point(p: &CircularParams<Rational>) -> Vec<(Var, Rational)> {
    vec![
        (Var::Q, p.q().clone()),
        (Var::R11, p.r()[0][0].clone()),
        (Var::R12, p.r()[0][1].clone()),
        (Var::R21, p.r()[1][0].clone()),
        (Var::R22, p.r()[1][1].clone()),
    ]
}

#[test]
fn residual_vanishes_symbolically_on_generators() {
    let p = symbolic_params();
    let mut rec = Recursions::new(&p);
    let par = N2Choice::Parametric(RatFun::var(Var::M11), RatFun::var(Var::M22));
    for choice in [N2Choice::Invertible, par] {
        for bits in 0..8usize {
            let r = rec.m_expansion_residual(&choice, bits >> 2, (bits >> 1) & 1, bits & 1).unwrap();
            assert!(r.is_zero(), "{bits:03b}: {r}");
        }
    }
}

#[test]
fn constraint_polys_vanish_on_normalizing_models() {
    let polys: Vec<_> = lin_constraint_polys(2).unwrap().into_iter().chain(lin_constraint_polys(3).unwrap()).collect();
    for (a, b) in [(1, 3), (2, 5), (3, 4), (1, 2)] {
        let q = rat(a, b);
        let row = [q.clone(), Rational::one() - q.clone()];
        let p = CircularParams::new(q, [row.clone(), row]).unwrap();
        assert_eq!(normalizing_automorphism(&p), Some(Automorphism::Identity));
        for poly in &polys {
            assert!(poly.eval(&point(&p)).unwrap().is_zero());
        }
    }
    // A flip model: q = 1/2, r₁₁ = r₂₂.
    let p = CircularParams::new(rat(1, 2), [[rat(1, 1), rat(2, 1)], [rat(1, 3), rat(1, 1)]]).unwrap();
    assert_eq!(normalizing_automorphism(&p), Some(Automorphism::Flip));
    for poly in &polys {
        assert!(poly.eval(&point(&p)).unwrap().is_zero());
    }
}

#[test]
fn constraint_polys_are_nontrivial_and_agree_with_numeric_defects() {
    let polys = lin_constraint_polys(2).unwrap();
    assert!(polys.iter().all(|p| !p.is_empty()));
    for p in seeded_params(10, 3) {
        let mut rec = Recursions::new(&p);
        let Ok(defect) = lin_defect(&mut rec, 2) else { continue };
        for (poly, d) in polys.iter().zip(defect.entries()) {
            assert_eq!(poly.eval(&point(&p)).unwrap().is_zero(), d.is_zero());
        }
    }
    assert!(lin_constraint_polys(4).is_err());
}

#[test]
fn constraint_polys_scale_homogeneously() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 3] {
        for poly in lin_constraint_polys(n).unwrap() {
            let degs: Vec<u32> = poly
                .terms()
                .map(|(m, _)| [Var::R11, Var::R12, Var::R21, Var::R22].iter().map(|&v| u32::from(m.exponent(v))).sum())
                .collect();
            assert!(degs.windows(2).all(|w| w[0] == w[1]), "not homogeneous in r");
            let p = random_params(&mut rng);
            let t = rat(rng.random_range(1..5), rng.random_range(1..5));
            let scaled = p.rescale(&t).unwrap();
            let t2 = &t * &t;
            let factor = (0..degs[0]).fold(Rational::one(), |acc, _| acc * t2.clone());
            assert_eq!(poly.eval(&point(&scaled)).unwrap(), poly.eval(&point(&p)).unwrap() * factor);
        }
    }
}

#[test]
fn automorphism_and_case_are_rescale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let p = random_params(&mut rng);
        let t = rat(rng.random_range(1..7), rng.random_range(1..7));
        let s = rescale(&p, &t).unwrap();
        assert_eq!(normalizing_automorphism(&p), normalizing_automorphism(&s));
        assert_eq!(classify_case(&p).ok(), classify_case(&s).ok());
    }
    assert!(rescale(&seeded_params(1, 1)[0], &Rational::zero()).is_err());
}

#[test]
fn scripted_first_solves_match_expected_identities() {
    let grid = GridSpec::new(4);
    let q = RatFun::var(Var::Q);
    let m11 = RatFun::var(Var::M11);
    let m22 = RatFun::var(Var::M22);
    let r22 = RatFun::var(Var::R22);
    let one = RatFun::one();
    let first = |label| {
        let rep = subcase_report(label, &grid).unwrap();
        let id = rep.identities().next().cloned().unwrap();
        id
    };
    let id = first(CaseLabel::CaseIII(Subcase::One));
    assert_eq!((id.var, id.value), (Var::M22, one.clone() - m11.clone()));
    let id = first(CaseLabel::CaseIII(Subcase::Two));
    assert_eq!((id.var, id.value), (Var::M22, one.clone() - q.clone()));
    let id = first(CaseLabel::CaseIII(Subcase::Three));
    assert_eq!((id.var, id.value), (Var::M11, q.clone()));
    let id = first(CaseLabel::CaseIII(Subcase::Four));
    let r2 = r22.clone() * r22;
    let expected = q.clone() + r2.clone() - m22 * r2.clone() - q.clone() * r2;
    assert_eq!((id.var, id.value), (Var::M11, expected));
}

#[test]
fn later_solves_and_back_substitution() {
    let grid = GridSpec::new(4);
    let q = RatFun::var(Var::Q);
    for label in CaseLabel::SCRIPTED {
        let rep = subcase_report(label, &grid).unwrap();
        assert!(rep.steps.iter().all(|s| s.verified), "{label}");
        for step in &rep.steps {
            if let StepKind::Solve(id) = &step.kind {
                for comp in &step.residual {
                    assert!(comp.subst(id.var, &id.value).unwrap().is_zero());
                }
            }
        }
    }
    let rep = subcase_report(CaseLabel::CaseIII(Subcase::One), &grid).unwrap();
    let ids: Vec<_> = rep.identities().cloned().collect();
    assert_eq!(ids[1].var, Var::M11);
    assert_eq!(ids[1].value, q);
    let rep = subcase_report(CaseLabel::CaseIII(Subcase::Four), &grid).unwrap();
    let ids: Vec<_> = rep.identities().cloned().collect();
    assert_eq!((ids[1].var, ids[1].value.clone()), (Var::M22, RatFun::one() - q));
}

#[test]
fn terminal_residuals_vanish_identically() {
    // Recorded finding: after the scripted identities the terminal residual is the zero
    // function in every case, so each admissible grid point counts as a solution.
    let grid = GridSpec::new(6);
    for label in CaseLabel::SCRIPTED {
        let rep = subcase_report(label, &grid).unwrap();
        let last = rep.steps.last().unwrap();
        assert!(last.residual.iter().all(|c| c.is_zero()), "{label}");
        let ev = rep.terminal().unwrap();
        assert!(ev.admissible > 0);
        assert_eq!(ev.solutions, ev.admissible);
        assert!(!rep.refuted());
    }
}

#[test]
fn terminal_grid_admissibility_respects_case() {
    let rep = subcase_report(CaseLabel::CaseIII(Subcase::Three), &GridSpec::new(8)).unwrap();
    let ev = rep.terminal().unwrap();
    assert_eq!(ev.free_vars, vec![Var::Q, Var::M22]);
    for ex in &ev.examples {
        let get = |v| ex.iter().find(|(w, _)| *w == v).unwrap().1.clone();
        let q = get(Var::Q);
        assert!(q > Rational::zero() && q < Rational::one());
        assert_eq!(get(Var::M11), q);
    }
}

#[test]
fn nocase_has_no_script() {
    assert!(subcase_report(CaseLabel::NoCase, &GridSpec::new(4)).is_err());
}

#[test]
fn coverage_is_deterministic_and_consistent() {
    let a = sample_case_coverage(200, 42, 16).unwrap();
    let b = sample_case_coverage(200, 42, 16).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.sampled, 200);
    assert_eq!(a.no_case(), a.no_case_points.len());
    assert_eq!(a.by_case.values().sum::<usize>(), a.satisfying);
    for (label, (drawn, ok)) in &a.within_case {
        assert!(*drawn > 0, "{label}");
        assert_eq!(drawn, ok, "{label}");
    }
    assert!(sample_case_coverage(COVERAGE_SAMPLE_GUARD + 1, 1, 16).is_err());
}

#[test]
fn symbolic_s_matches_elimination() {
    let p = symbolic_params();
    let s = p.s();
    let q = RatFun::var(Var::Q);
    let one = RatFun::one();
    assert_eq!(s[1][0].clone() * (one.clone() - q.clone()), q.clone() * RatFun::var(Var::R12));
    assert_eq!(s[0][1].clone() * q.clone(), (one - q) * RatFun::var(Var::R21));
}
