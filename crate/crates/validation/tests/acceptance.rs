//! Acceptance suite: one line per criterion, nonzero exit if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use bipolar_core::algebra::{rat, Poly, RatFun, Rational, Var};
use bipolar_core::case_analysis::*;
use bipolar_core::cumulants::{
    check_auto_condition, check_balanced, check_haar, check_r_diagonal_moments, check_trace_property, normalizing_sides,
    ElementModel, WitnessKind,
};
use bipolar_core::group_model::{centered_triple, ExampleUnitary, GroupModel};
use bipolar_core::partitions::{
    catalan, enumerate_noncrossing, enumerate_noncrossing_pairings, parse_word, Letter::A, Letter::Star,
};
use bipolar_core::recursions::{CircularParams, GhMap, N2Choice, Recursions};
use bipolar_core::{DiagElement, Error};
use common::*;
use num_traits::{One, Zero};

type Outcome = Result<String, String>;

fn d2(a: Rational, b: Rational) -> DiagElement<Rational> {
    DiagElement::new(vec![a, b])
}

fn ex35() -> CircularParams<Rational> {
    CircularParams::new(rat(1, 2), [[rat(1, 2), rat(0, 1)], [rat(1, 2), rat(1, 1)]]).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn combinatorics() -> Outcome {
    let expected = [1u64, 2, 5, 14, 42, 132, 429, 1430];
    for (n, &c) in (1..=8).zip(&expected) {
        let got = enumerate_noncrossing(n).map_err(|e| e.to_string())?.len() as u64;
        ensure(got == c && catalan(n) == c, format!("|NC({n})| = {got}, expected {c}"))?;
    }
    for n in (2..=10).step_by(2) {
        let got = enumerate_noncrossing_pairings(n).map_err(|e| e.to_string())?.len() as u64;
        ensure(got == catalan(n / 2), format!("|NC2({n})| = {got}"))?;
    }
    for n in (3..=9).step_by(2) {
        ensure(
            enumerate_noncrossing_pairings(n) == Err(Error::OddLength(n)),
            format!("odd length {n} must be rejected"),
        )?;
    }
    Ok("NC(1..8) and NC2(2..10) match Catalan".into())
}

fn golden_values() -> Outcome {
    let e11 = DiagElement::basis(2, 0);
    let circle = GroupModel::<Rational>::example(ExampleUnitary::Circle);
    let v = circle.moment(&parse_word("11").unwrap(), &[e11.clone()]).map_err(|e| e.to_string())?;
    ensure(v == d2(rat(1, 2), rat(-1, 2)), format!("circle E(u e11 u) = {v}"))?;
    let torus = GroupModel::<Rational>::example(ExampleUnitary::Torus);
    let t = centered_triple(torus.unitary(), &e11, &e11, &e11);
    ensure(t == d2(rat(1, 8), rat(-1, 8)), format!("torus centered product = {t}"))?;
    let fam = ex35().family().map_err(|e| e.to_string())?;
    let (lhs, _) = normalizing_sides(&fam, &e11, &[0, 1]).map_err(|e| e.to_string())?;
    ensure(lhs == d2(rat(1, 2), rat(1, 4)), format!("E(aa* b aa*) = {lhs}"))?;
    Ok(format!("circle {v}, torus {t}, LHS {lhs}"))
}

fn golden_inequality() -> Outcome {
    let fam = ex35().family().map_err(|e| e.to_string())?;
    let b = DiagElement::basis(2, 0);
    let mut seen = Vec::new();
    for (name, perm) in [("identity", [0, 1]), ("flip", [1, 0])] {
        let (lhs, rhs) = normalizing_sides(&fam, &b, &perm).map_err(|e| e.to_string())?;
        ensure(lhs != rhs, format!("{name}: both sides equal {lhs}"))?;
        seen.push(format!("{name}: {lhs} vs {rhs}"));
    }
    Ok(seen.join("; "))
}

fn oracle_equivalence() -> Outcome {
    let sets = seeded_params(20, 2024);
    for p in &sets {
        let fam = p.family().map_err(|e| e.to_string())?;
        let mut rec = Recursions::new(p);
        let (g1, g2) = rec.g_series(5);
        for n in 1..=5 {
            ensure(g1[n] == plain_moment(&fam, &alt(A, n)), format!("g1({n}) differs for {p:?}"))?;
            ensure(g2[n] == plain_moment(&fam, &alt(Star, n)), format!("g2({n}) differs for {p:?}"))?;
        }
        for n in 0..=4usize {
            for k in 0..=4 - n {
                for i in 0..2 {
                    let b = DiagElement::basis(2, i);
                    if n + k > 0 {
                        let g = rec.gh(GhMap::G, n, &b, k).map_err(|e| e.to_string())?;
                        ensure(g == moment_at(&fam, &alt(A, n + k), 2 * n, &b), format!("G({n},e{i},{k})"))?;
                        let h = rec.gh(GhMap::H, n, &b, k).map_err(|e| e.to_string())?;
                        ensure(h == moment_at(&fam, &alt(Star, n + k), 2 * n, &b), format!("H({n},e{i},{k})"))?;
                    }
                    let gp = rec.gh(GhMap::GPrime, n, &b, k).map_err(|e| e.to_string())?;
                    ensure(gp == moment_with(&fam, &alt(Star, n + k + 1), 2 * n + 1, &b), format!("G'({n},e{i},{k})"))?;
                    let hp = rec.gh(GhMap::HPrime, n, &b, k).map_err(|e| e.to_string())?;
                    ensure(hp == moment_with(&fam, &alt(A, n + k + 1), 2 * n + 1, &b), format!("H'({n},e{i},{k})"))?;
                }
            }
        }
        for n in 0..=5usize {
            for m in 0..=5 - n {
                for k in 0..=5 - n - m {
                    if n + m + k == 0 {
                        continue;
                    }
                    let mut w = alt(A, n);
                    w.extend(alt(Star, m));
                    w.extend(alt(A, k));
                    let g2m = rec.g2(m);
                    let g = rec.gh(GhMap::G, n, &g2m, k).map_err(|e| e.to_string())?;
                    ensure(g == plain_moment(&fam, &w), format!("middle block ({n},{m},{k})"))?;
                }
            }
        }
    }
    Ok(format!("{} parameter sets", sets.len()))
}

fn traciality() -> Outcome {
    let rels = traciality_relations().map_err(|e| e.to_string())?;
    let v = Poly::var;
    let q = v(Var::Q);
    let p = &Poly::one() - &q;
    let expected = [
        &q * &(&v(Var::R11) - &v(Var::S11)),
        &(&p * &v(Var::R21)) - &(&q * &v(Var::S12)),
        &(&q * &v(Var::R12)) - &(&p * &v(Var::S21)),
        &p * &(&v(Var::R22) - &v(Var::S22)),
    ];
    ensure(rels.as_slice() == expected, "coefficient relations differ")?;
    let sets = seeded_params(20, 99);
    for params in &sets {
        let fam = params.family().map_err(|e| e.to_string())?;
        let w = params.trace_weights().map_err(|e| e.to_string())?;
        let report = check_trace_property(&fam, &w, 5).map_err(|e| e.to_string())?;
        ensure(report.passed(), format!("trace property fails for {params:?}"))?;
    }
    Ok(format!("four relations; {} parameter sets tracial on words up to length 5", sets.len()))
}

fn classification() -> Outcome {
    let e = |x: Error| x.to_string();
    let circle = GroupModel::<Rational>::example(ExampleUnitary::Circle);
    ensure(check_haar(&circle, 6).map_err(e)?, "circle u is not Haar")?;
    ensure(!check_balanced(&circle, 2).map_err(e)?.passed(), "circle u is balanced")?;
    let torus = GroupModel::<Rational>::example(ExampleUnitary::Torus);
    ensure(check_balanced(&torus, 5).map_err(e)?.passed(), "torus u is unbalanced")?;
    let rd = check_r_diagonal_moments(&torus, 4).map_err(e)?;
    let e11 = DiagElement::basis(2, 0);
    let witness = rd.witnesses.iter().any(|w| {
        w.kind == WitnessKind::CenteredProduct
            && w.word == parse_word("*11*").unwrap()
            && w.coeffs[..3] == [e11.clone(), e11.clone(), e11.clone()]
            && w.value == d2(rat(1, 8), rat(-1, 8))
    });
    ensure(!rd.passed() && witness, "torus R-diagonal witness missing")?;
    let mut families = seeded_params(3, 17);
    families.push(ex35());
    for p in &families {
        let fam = p.family().map_err(e)?;
        ensure(check_r_diagonal_moments(&fam, 6).map_err(e)?.passed(), format!("circular family {p:?} fails"))?;
    }
    let p = ex35();
    for perm in [[0, 1], [1, 0]] {
        ensure(!check_auto_condition(&p.alpha12(), &p.alpha21(), &perm), "example family satisfies the automorphism condition")?;
    }
    Ok("circle Haar/unbalanced, torus balanced/not R-diagonal, circular families R-diagonal".into())
}

fn expansion_exact() -> Outcome {
    let p = symbolic_params();
    let mut rec = Recursions::new(&p);
    let par = N2Choice::Parametric(RatFun::var(Var::M11), RatFun::var(Var::M22));
    for choice in [N2Choice::Invertible, par] {
        for bits in 0..8usize {
            let r = rec
                .m_expansion_residual(&choice, bits >> 2, (bits >> 1) & 1, bits & 1)
                .map_err(|e| e.to_string())?;
            ensure(r.is_zero(), format!("nonzero residual on {bits:03b}"))?;
        }
    }
    Ok("residual is zero on {0,1}^3 for symbolic parameters".into())
}

fn linear_solves() -> Outcome {
    let grid = GridSpec::new(4);
    let q = RatFun::var(Var::Q);
    let m11 = RatFun::var(Var::M11);
    let m22 = RatFun::var(Var::M22);
    let r22 = RatFun::var(Var::R22);
    let one = RatFun::one();
    let r2 = r22.clone() * r22;
    let expected = [
        (Subcase::One, Var::M22, one.clone() - m11),
        (Subcase::Two, Var::M22, one - q.clone()),
        (Subcase::Three, Var::M11, q.clone()),
        (Subcase::Four, Var::M11, q.clone() + r2.clone() - m22 * r2.clone() - q * r2),
    ];
    let mut lines = Vec::new();
    for (sub, var, value) in expected {
        let label = CaseLabel::CaseIII(sub);
        let rep = subcase_report(label, &grid).map_err(|e| e.to_string())?;
        let step = &rep.steps[0];
        let StepKind::Solve(id) = &step.kind else {
            return Err(format!("{label}: first step is not a solve"));
        };
        ensure(id.var == var && id.value == value, format!("{label}: got {} = {}", id.var.name(), id.value))?;
        let annihilated = step.residual.iter().all(|c| c.subst(id.var, &id.value).is_some_and(|x| x.is_zero()));
        ensure(annihilated && step.verified, format!("{label}: back-substitution leaves a residual"))?;
        lines.push(format!("{label}: {} = {}", id.var.name(), id.value));
    }
    Ok(lines.join("; "))
}

fn terminal_grids() -> Outcome {
    let grid = GridSpec::new(16);
    let mut bad = Vec::new();
    let mut good = Vec::new();
    for label in CaseLabel::SCRIPTED {
        let rep = subcase_report(label, &grid).map_err(|e| e.to_string())?;
        let ev = rep.terminal().ok_or("no terminal step")?;
        let line = format!("{label}: {}/{} admissible grid points solve the terminal residual", ev.solutions, ev.admissible);
        if ev.solutions == 0 {
            good.push(line);
        } else {
            bad.push(line);
        }
    }
    if bad.is_empty() {
        Ok(good.join("; "))
    } else {
        Err(format!("discrepancy: {}", bad.join("; ")))
    }
}

fn coverage() -> Outcome {
    let rep = sample_case_coverage(500, 42, 16).map_err(|e| e.to_string())?;
    ensure(rep.no_case() == 0, format!("{} constraint-satisfying samples fit no case", rep.no_case()))?;
    Ok(format!(
        "{} samples, {} satisfy the constraints, 0 unclassified; within-case samples satisfying: {}",
        rep.sampled,
        rep.satisfying,
        rep.within_case.values().map(|(_, ok)| ok).sum::<usize>()
    ))
}

fn degeneracy() -> Outcome {
    let mut rec = Recursions::new(&ex35());
    let g = rec.g2(1);
    ensure(g == DiagElement::unit(2), format!("g2(1) = {g}"))?;
    ensure(rec.coord_functionals() == Err(Error::DegenerateBasis), "expected DegenerateBasis")?;
    Ok("g2(1) = (1, 1) raises DegenerateBasis".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("1 combinatorics", combinatorics),
        ("2 golden values", golden_values),
        ("3 golden inequality", golden_inequality),
        ("4 oracle equivalence", oracle_equivalence),
        ("5 traciality", traciality),
        ("6 classification witnesses", classification),
        ("7a expansion exact on generators", expansion_exact),
        ("7b subcase linear solves", linear_solves),
        ("7c terminal grids", terminal_grids),
        ("7d coverage sampling", coverage),
        ("8 degeneracy witness", degeneracy),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
