//! One function per subcommand, each producing a [`Report`].

use anyhow::{anyhow, bail, Context, Result};
use bipolar_core::algebra::rat;
use bipolar_core::case_analysis::{
    normalizing_automorphism, sample_case_coverage, subcase_report, CaseLabel, CoverageReport, GridSpec, StepKind,
    SubcaseReport,
};
use bipolar_core::cumulants::{
    check_auto_condition, check_balanced, check_haar, check_r_diagonal_moments, check_trace_property,
    check_theta_moment_identity, normalizing_sides, traciality_defects, CheckReport, ElementModel, Witness,
};
use bipolar_core::group_model::{centered_triple, ExampleUnitary, GroupModel};
use bipolar_core::partitions::{
    catalan, enumerate_noncrossing, enumerate_noncrossing_pairings, word_eps_string, Letter,
};
use bipolar_core::recursions::{CircularParams, GhMap, N2Choice, Recursions};
use bipolar_core::{DiagElement, Error, LinearMapD, Rational, TraceWeights};
use serde_json::{json, Map, Value};

use crate::json::{
    diag_json, map_json, parse_diag, parse_model, parse_params, parse_params_value, parse_rational,
    parse_word_arg, point_json, poly_json, rat_str, ratfun_json, read_json_arg, FamilyJson, ModelInput, ParamsJson, UnitaryJson,
};
use crate::report::Report;

pub const EXAMPLE_35: &str = include_str!("../data/example-3.5.json");

/// Largest `n` for `gseries`, `ghmap` and the `m0`/`residual` triples.
pub const SERIES_GUARD: usize = 40;
/// Largest grid denominator accepted by `case-analysis`.
pub const GRID_DEN_GUARD: u32 = 64;

pub const DEFAULT_GRID_DEN: u32 = 16;
pub const DEFAULT_SEED: u64 = 42;

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Default)]
pub struct Common {
    pub params: Option<String>,
    pub seed: Option<u64>,
    pub max_len: Option<usize>,
    pub grid_den: Option<u32>,
}

fn guard(name: &'static str, limit: usize, value: usize) -> Result<()> {
    if value > limit {
        return Err(Error::GuardExceeded { guard: name, limit, value }.into());
    }
    Ok(())
}

fn example_params() -> CircularParams<Rational> {
    parse_params_value(&serde_json::from_str(EXAMPLE_35).expect("bundled JSON")).expect("bundled params")
}

impl Common {
    fn params(&self) -> Result<CircularParams<Rational>> {
        let arg = self.params.as_deref().ok_or_else(|| anyhow!("--params is required"))?;
        parse_params(arg)
    }

    fn model_input(&self) -> Result<ModelInput> {
        let arg = self.params.as_deref().ok_or_else(|| anyhow!("--params or --model is required"))?;
        parse_model(&read_json_arg(arg)?)
    }

    fn echo_params(&self, r: &mut Report) {
        if let Some(p) = &self.params {
            r.input("params", p.clone());
        }
    }
}

pub fn ncp(n: usize, pairings: bool, list: bool) -> Result<Report> {
    let mut r = Report::new("ncp");
    r.input("n", n).input("pairings", pairings);
    let parts = if pairings {
        enumerate_noncrossing_pairings(n)?
    } else {
        enumerate_noncrossing(n)?
    };
    let expected = if pairings { catalan(n / 2) } else { catalan(n) };
    r.result("count", parts.len() as u64);
    if list {
        let blocks: Vec<Value> = parts.iter().map(|p| json!(p.blocks())).collect();
        r.result("partitions", blocks);
    }
    r.verdict_with("count matches Catalan", parts.len() as u64 == expected, format!("Catalan gives {expected}"));
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExampleModel {
    Circle,
    Torus,
}

fn resolve_model(cfg: &Common, model: Option<ExampleModel>) -> Result<(Box<dyn ElementModel<Rational>>, String)> {
    if let Some(m) = model {
        let (which, name) = match m {
            ExampleModel::Circle => (ExampleUnitary::Circle, "circle"),
            ExampleModel::Torus => (ExampleUnitary::Torus, "torus"),
        };
        return Ok((Box::new(GroupModel::<Rational>::example(which)), name.into()));
    }
    Ok(match cfg.model_input()? {
        ModelInput::Circular(p) => (Box::new(p.family()?), "circular family".into()),
        ModelInput::Family(f) => (Box::new(f), "cumulant family".into()),
        ModelInput::Unitary(g) => (Box::new(g), "group model".into()),
    })
}

pub fn moments(cfg: &Common, word: &str, coeffs: &[String], model: Option<ExampleModel>) -> Result<Report> {
    let mut r = Report::new("moments");
    let w = parse_word_arg(word)?;
    let (m, kind) = resolve_model(cfg, model)?;
    let d = m.dim();
    let interior = if coeffs.is_empty() {
        vec![DiagElement::unit(d); w.len() - 1]
    } else {
        coeffs.iter().map(|c| parse_diag(c)).collect::<Result<Vec<_>>>()?
    };
    r.input("model", kind).input("word", word_eps_string(&w));
    cfg.echo_params(&mut r);
    r.input("coefficients", interior.iter().map(diag_json).collect::<Vec<_>>());
    let v = m.moment(&w, &interior)?;
    r.result("moment", diag_json(&v));
    Ok(r)
}

fn series_json(v: &[DiagElement<Rational>]) -> Value {
    Value::Array(v.iter().map(diag_json).collect())
}

pub fn gseries(cfg: &Common, n: usize) -> Result<Report> {
    guard("series_n", SERIES_GUARD, n)?;
    let p = cfg.params()?;
    let mut r = Report::new("gseries");
    cfg.echo_params(&mut r);
    r.input("n", n);
    let mut rec = Recursions::new(&p);
    let (g1, g2) = rec.g_series(n);
    r.result("g1", series_json(&g1)).result("g2", series_json(&g2));
    Ok(r)
}

pub fn ghmap(cfg: &Common, map: &str, n: usize, k: usize, b: &str) -> Result<Report> {
    guard("series_n", SERIES_GUARD, n + k)?;
    let which = GhMap::from_name(map).ok_or_else(|| anyhow!("unknown map {map:?}; expected G, G', H or H'"))?;
    let p = cfg.params()?;
    let b = parse_diag(b)?;
    let mut r = Report::new("ghmap");
    cfg.echo_params(&mut r);
    r.input("map", which.name()).input("n", n).input("k", k).input("b", diag_json(&b));
    let v = Recursions::new(&p).gh(which, n, &b, k)?;
    r.result("value", diag_json(&v));
    Ok(r)
}

/// `invertible` or `m11,m22`.
pub fn parse_n2(s: &str) -> Result<N2Choice<Rational>> {
    if s.eq_ignore_ascii_case("invertible") {
        return Ok(N2Choice::Invertible);
    }
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b] = parts.as_slice() else {
        bail!("--n2 takes `invertible` or `m11,m22`");
    };
    let c = N2Choice::Parametric(parse_rational(a)?, parse_rational(b)?);
    c.validate()?;
    Ok(c)
}

fn n2_json(c: &N2Choice<Rational>) -> Value {
    match c {
        N2Choice::Invertible => json!("invertible"),
        N2Choice::Parametric(a, b) => json!({"m11": rat_str(a), "m22": rat_str(b)}),
    }
}

fn parse_triple(s: &str) -> Result<(usize, usize, usize)> {
    let xs = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().with_context(|| format!("malformed triple {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    match xs.as_slice() {
        [n, m, k] => Ok((*n, *m, *k)),
        _ => bail!("a triple is `n,m,k`"),
    }
}

/// The explicit triples, or every triple with `n + m + k ≤ max_sum`.
pub fn triples(explicit: &[String], max_sum: usize) -> Result<Vec<(usize, usize, usize)>> {
    let ts = if explicit.is_empty() {
        let mut v = Vec::new();
        for n in 0..=max_sum {
            for m in 0..=max_sum - n {
                for k in 0..=max_sum - n - m {
                    v.push((n, m, k));
                }
            }
        }
        v
    } else {
        explicit.iter().map(|s| parse_triple(s)).collect::<Result<Vec<_>>>()?
    };
    for &(n, m, k) in &ts {
        guard("series_n", SERIES_GUARD, n + m + k)?;
    }
    Ok(ts)
}

fn key(t: (usize, usize, usize)) -> String {
    format!("{},{},{}", t.0, t.1, t.2)
}

pub fn m0(cfg: &Common, n2: &str, ts: &[(usize, usize, usize)]) -> Result<Report> {
    let p = cfg.params()?;
    let choice = parse_n2(n2)?;
    let mut r = Report::new("m0");
    cfg.echo_params(&mut r);
    r.input("n2", n2_json(&choice));
    let mut rec = Recursions::new(&p);
    let mut out = Map::new();
    for &t in ts {
        out.insert(key(t), diag_json(&rec.m0(&choice, t.0, t.1, t.2)?));
    }
    r.result("m0", out);
    Ok(r)
}

pub fn residual(cfg: &Common, n2: &str, ts: &[(usize, usize, usize)]) -> Result<Report> {
    let p = cfg.params()?;
    let choice = parse_n2(n2)?;
    let mut r = Report::new("residual");
    cfg.echo_params(&mut r);
    r.input("n2", n2_json(&choice));
    let mut rec = Recursions::new(&p);
    let mut out = Map::new();
    let mut nonzero = Vec::new();
    for &t in ts {
        let v = rec.m_expansion_residual(&choice, t.0, t.1, t.2)?;
        if !v.is_zero() {
            nonzero.push(key(t));
        }
        out.insert(key(t), diag_json(&v));
    }
    r.result("residual", out);
    let detail = if nonzero.is_empty() {
        "all residuals vanish".to_string()
    } else {
        format!("nonzero at {}", nonzero.join("; "))
    };
    r.verdict_with("expansion consistent", nonzero.is_empty(), detail);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckKind {
    Traciality,
    Haar,
    Balanced,
    Rdiag,
    Auto,
    ThetaIdentity,
}

fn witness_json(w: &Witness<Rational>) -> Value {
    json!({
        "kind": format!("{:?}", w.kind),
        "word": word_eps_string(&w.word),
        "coefficients": w.coeffs.iter().map(diag_json).collect::<Vec<_>>(),
        "value": diag_json(&w.value),
    })
}

fn check_report_json(c: &CheckReport<Rational>) -> Value {
    json!({
        "checked": c.checked,
        "violations": c.violations,
        "witnesses": c.witnesses.iter().take(8).map(witness_json).collect::<Vec<_>>(),
    })
}

type Maps = (LinearMapD<Rational>, LinearMapD<Rational>, Option<TraceWeights<Rational>>);

/// `α₁₂`, `α₂₁`, and trace weights if known.
fn maps_of(cfg: &Common, q: Option<&str>) -> Result<Maps> {
    match cfg.model_input()? {
        ModelInput::Circular(p) => Ok((p.alpha12(), p.alpha21(), Some(p.trace_weights()?))),
        ModelInput::Family(f) => {
            if !f.is_circular() {
                bail!("this check needs a circular family (only the 12 and 21 maps)");
            }
            let w = match q {
                Some(q) => Some(TraceWeights::two_point(parse_rational(q)?)?),
                None => None,
            };
            Ok((f.linear(&[Letter::A, Letter::Star]), f.linear(&[Letter::Star, Letter::A]), w))
        }
        ModelInput::Unitary(_) => bail!("this check needs cumulant maps, not a group model"),
    }
}

const PERMS: [(&str, [usize; 2]); 2] = [("identity", [0, 1]), ("flip", [1, 0])];

pub fn check(cfg: &Common, kind: CheckKind, model: Option<ExampleModel>, q: Option<&str>) -> Result<Report> {
    let name = match kind {
        CheckKind::Traciality => "traciality",
        CheckKind::Haar => "haar",
        CheckKind::Balanced => "balanced",
        CheckKind::Rdiag => "rdiag",
        CheckKind::Auto => "auto",
        CheckKind::ThetaIdentity => "theta-identity",
    };
    let mut r = Report::new(format!("check {name}"));
    cfg.echo_params(&mut r);
    match kind {
        CheckKind::Traciality => {
            let max_len = cfg.max_len.unwrap_or(4);
            let (a12, a21, w) = maps_of(cfg, q)?;
            let w = w.ok_or_else(|| anyhow!("traciality of a cumulant family needs --q"))?;
            r.input("max_len", max_len);
            let defects = traciality_defects(&w, &a12, &a21)?;
            let ok = defects.iter().all(num_traits::Zero::is_zero);
            r.result("defects", defects.iter().map(rat_str).collect::<Vec<_>>());
            r.verdict("coefficient relations hold", ok);
            let fam = bipolar_core::cumulants::circular_family(&a12, &a21)?;
            let rep = check_trace_property(&fam, &w, max_len)?;
            r.result("trace_property", check_report_json(&rep));
            r.verdict("trace property on words", rep.passed());
        }
        CheckKind::Haar => {
            let max_len = cfg.max_len.unwrap_or(6);
            let (m, kind) = resolve_model(cfg, model)?;
            r.input("model", kind).input("max_power", max_len);
            r.verdict("Haar moments vanish", check_haar(m.as_ref(), max_len)?);
        }
        CheckKind::Balanced => {
            let max_len = cfg.max_len.unwrap_or(5);
            let (m, kind) = resolve_model(cfg, model)?;
            r.input("model", kind).input("max_len", max_len);
            let rep = check_balanced(m.as_ref(), max_len)?;
            r.result("balanced", check_report_json(&rep));
            r.verdict("balanced", rep.passed());
        }
        CheckKind::Rdiag => {
            let max_len = cfg.max_len.unwrap_or(4);
            let (m, kind) = resolve_model(cfg, model)?;
            r.input("model", kind).input("max_len", max_len);
            let rep = check_r_diagonal_moments(m.as_ref(), max_len)?;
            r.result("rdiag", check_report_json(&rep));
            r.verdict("R-diagonal moment conditions", rep.passed());
        }
        CheckKind::Auto => {
            let (a12, a21, _) = maps_of(cfg, q)?;
            let fam = bipolar_core::cumulants::circular_family(&a12, &a21)?;
            r.result("alpha12", map_json(&a12)).result("alpha21", map_json(&a21));
            let b = DiagElement::basis(2, 0);
            let mut any = false;
            for (pname, perm) in PERMS {
                let holds = check_auto_condition(&a12, &a21, &perm);
                any |= holds;
                let (lhs, rhs) = normalizing_sides(&fam, &b, &perm)?;
                r.result(
                    pname,
                    json!({"condition": holds, "lhs": diag_json(&lhs), "rhs": diag_json(&rhs), "b": diag_json(&b)}),
                );
            }
            r.verdict("a coordinate automorphism intertwines the maps", any);
        }
        CheckKind::ThetaIdentity => {
            let max_len = cfg.max_len.unwrap_or(4);
            let (m, kind) = resolve_model(cfg, model)?;
            r.input("model", kind).input("max_len", max_len);
            let mut any = false;
            for (pname, perm) in PERMS {
                let holds = check_theta_moment_identity(m.as_ref(), &perm, max_len / 2)?;
                any |= holds;
                r.result(pname, holds);
            }
            r.verdict("moment identity holds for some automorphism", any);
        }
    }
    Ok(r)
}

fn grid_den(cfg: &Common) -> Result<u32> {
    let den = cfg.grid_den.unwrap_or(DEFAULT_GRID_DEN);
    guard("grid_den", GRID_DEN_GUARD as usize, den as usize)?;
    if den == 0 {
        bail!("--grid-den must be positive");
    }
    Ok(den)
}

fn subcase_json(rep: &SubcaseReport) -> Value {
    let steps: Vec<Value> = rep
        .steps
        .iter()
        .map(|s| {
            let mut o = Map::new();
            o.insert("triple".into(), json!(key(s.triple)));
            o.insert("residual".into(), json!(s.residual.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
            match &s.kind {
                StepKind::Solve(id) => {
                    o.insert("kind".into(), json!("solve"));
                    o.insert(
                        "identity".into(),
                        json!({
                            "var": id.var.name(),
                            "value": ratfun_json(&id.value),
                            "side_condition": id.side_condition.to_string(),
                            "side_condition_terms": poly_json(&id.side_condition),
                        }),
                    );
                }
                StepKind::Vacuous => {
                    o.insert("kind".into(), json!("vacuous"));
                }
                StepKind::Terminal(g) => {
                    o.insert("kind".into(), json!("terminal"));
                    o.insert(
                        "grid".into(),
                        json!({
                            "free_vars": g.free_vars.iter().map(|v| v.name()).collect::<Vec<_>>(),
                            "den": g.den,
                            "points": g.points,
                            "admissible": g.admissible,
                            "singular": g.singular,
                            "solutions": g.solutions,
                            "examples": g.examples.iter().map(|p| point_json(p)).collect::<Vec<_>>(),
                        }),
                    );
                }
            }
            o.insert("verified".into(), json!(s.verified));
            Value::Object(o)
        })
        .collect();
    json!({
        "label": rep.label.name(),
        "setup": rep.setup.iter().map(|(v, f)| json!({"var": v.name(), "value": f.to_string()})).collect::<Vec<_>>(),
        "n2": rep.n2,
        "steps": steps,
        "notes": rep.notes,
        "refuted": rep.refuted(),
    })
}

fn coverage_json(c: &CoverageReport) -> Value {
    let by_case: Map<String, Value> = c.by_case.iter().map(|(k, v)| (k.name().to_string(), json!(v))).collect();
    let within: Map<String, Value> = c
        .within_case
        .iter()
        .map(|(k, (drawn, ok))| (k.name().to_string(), json!({"drawn": drawn, "satisfying": ok})))
        .collect();
    json!({
        "seed": c.seed,
        "den": c.den,
        "requested": c.requested,
        "sampled": c.sampled,
        "rejected_automorphic": c.rejected_automorphic,
        "satisfying": c.satisfying,
        "by_case": by_case,
        "no_case_points": c.no_case_points.iter().map(|p| serde_json::to_value(ParamsJson::from_params(p)).expect("params serialize")).collect::<Vec<_>>(),
        "within_case": within,
    })
}

pub fn case_analysis(cfg: &Common, subcase: Option<&str>, coverage: bool, samples: usize) -> Result<Report> {
    let den = grid_den(cfg)?;
    let mut r = Report::new("case-analysis");
    r.input("grid_den", den);
    if coverage {
        let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
        r.input("mode", "coverage").input("samples", samples).input("seed", seed);
        let c = sample_case_coverage(samples, seed, den)?;
        r.result("coverage", coverage_json(&c));
        r.verdict_with(
            "no constraint-satisfying sample is unclassified",
            c.no_case() == 0,
            format!("{} of {} samples satisfy the constraints", c.satisfying, c.sampled),
        );
        let within_ok = c.within_case.values().all(|(d, ok)| d == ok);
        r.verdict("samples inside each case satisfy the constraints", within_ok);
        return Ok(r);
    }
    let name = subcase.unwrap_or("all");
    let labels: Vec<CaseLabel> = if name.eq_ignore_ascii_case("all") {
        CaseLabel::SCRIPTED.to_vec()
    } else {
        match CaseLabel::from_name(name) {
            Some(l) if l != CaseLabel::NoCase => vec![l],
            _ => bail!("unknown subcase {name:?}; expected I, II, III.1 .. III.4 or all"),
        }
    };
    r.input("mode", "subcase").input("subcase", name);
    let grid = GridSpec::new(den);
    let mut reports = Vec::new();
    for l in labels {
        let rep = subcase_report(l, &grid)?;
        let solves_ok = rep.steps.iter().all(|s| s.verified);
        r.verdict(format!("{}: linear solves verified by back-substitution", l.name()), solves_ok);
        let t = rep.terminal().ok_or_else(|| anyhow!("subcase {} has no terminal step", l.name()))?;
        r.verdict_with(
            format!("{}: terminal grid has no admissible solution", l.name()),
            t.solutions == 0,
            format!("{}/{} admissible points solve the terminal residual", t.solutions, t.admissible),
        );
        reports.push(subcase_json(&rep));
    }
    r.result("subcases", reports);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExampleSet {
    All,
    Catalan,
    Circle,
    Torus,
    #[value(name = "example-3.5")]
    Example35,
}

pub fn examples(set: ExampleSet) -> Result<Report> {
    let mut r = Report::new("examples");
    r.input("run", format!("{set:?}").to_lowercase());
    let want = |s: ExampleSet| set == ExampleSet::All || set == s;
    let e11 = DiagElement::basis(2, 0);
    let d2 = |a: Rational, b: Rational| DiagElement::new(vec![a, b]);
    if want(ExampleSet::Catalan) {
        let n = enumerate_noncrossing(4)?.len();
        r.result("nc4", n);
        r.verdict("|NC(4)| = 14", n == 14);
    }
    if want(ExampleSet::Circle) {
        let g = GroupModel::<Rational>::example(ExampleUnitary::Circle);
        let v = g.moment(&[Letter::A, Letter::A], std::slice::from_ref(&e11))?;
        r.result("circle_unitary", serde_json::to_value(UnitaryJson::from_matrix(g.unitary()))?);
        r.result("circle_u_e11_u", diag_json(&v));
        r.verdict("circle: E(u e11 u) = (1/2, -1/2)", v == d2(rat(1, 2), rat(-1, 2)));
        r.verdict("circle: Haar up to power 6", check_haar(&g, 6)?);
    }
    if want(ExampleSet::Torus) {
        let g = GroupModel::<Rational>::example(ExampleUnitary::Torus);
        let v = centered_triple(g.unitary(), &e11, &e11, &e11);
        r.result("torus_unitary", serde_json::to_value(UnitaryJson::from_matrix(g.unitary()))?);
        r.result("torus_centered_product", diag_json(&v));
        r.verdict("torus: centered product = (1/8, -1/8)", v == d2(rat(1, 8), rat(-1, 8)));
        r.verdict("torus: balanced up to length 5", check_balanced(&g, 5)?.passed());
    }
    if want(ExampleSet::Example35) {
        let p = example_params();
        let fam = p.family()?;
        r.result("example_3_5_params", serde_json::to_value(ParamsJson::from_params(&p))?);
        r.result("example_3_5_family", serde_json::to_value(FamilyJson::from_family(&fam))?);
        let mut sides = Map::new();
        for (pname, perm) in PERMS {
            let (lhs, rhs) = normalizing_sides(&fam, &e11, &perm)?;
            if pname == "identity" {
                r.verdict("example 3.5: E(aa* b aa*) = (1/2, 1/4)", lhs == d2(rat(1, 2), rat(1, 4)));
            }
            r.verdict(format!("example 3.5: normalizing identity fails for {pname}"), lhs != rhs);
            sides.insert(pname.into(), json!({"lhs": diag_json(&lhs), "rhs": diag_json(&rhs)}));
        }
        r.result("example_3_5_normalizing", sides);
        let no_auto = PERMS.iter().all(|(_, perm)| !check_auto_condition(&p.alpha12(), &p.alpha21(), perm));
        r.verdict("example 3.5: no coordinate automorphism", no_auto && normalizing_automorphism(&p).is_none());
        let mut rec = Recursions::new(&p);
        let (g1, g2) = rec.g_series(2);
        r.result("example_3_5_g1", series_json(&g1)).result("example_3_5_g2", series_json(&g2));
        r.verdict(
            "example 3.5: g1(1..2) = (1/2, 3/2), (3/4, 15/4)",
            g1[1..] == [d2(rat(1, 2), rat(3, 2)), d2(rat(3, 4), rat(15, 4))],
        );
        let degenerate = matches!(rec.coord_functionals(), Err(Error::DegenerateBasis));
        r.verdict_with("example 3.5: g2(1) is degenerate", degenerate, format!("g2(1) = {}", g2[1]));
    }
    Ok(r)
}
