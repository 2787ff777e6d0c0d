//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every criterion is seeded and deterministic; the final criterion reruns
//! the report-producing computations of all others and demands
//! byte-identical JSON.

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use conelab::fejer::{run_counterexample, GridSpec};
use conelab::io::report_to_json;
use conelab_core::cone::Cone;
use conelab_core::lab::{
    check_hull_additivity, check_suppc_additivity, check_suppc_subadditivity, check_telescoping,
    minkowski_probe_directions, uniqueness_search, verify_lemma1_instance, verify_lemma2_instance,
};
use conelab_core::measure::AtomicMeasure;
use conelab_core::report::{CheckReport, Quantity};
use conelab_core::sampler::{random_direction, SamplerConfig, SamplerConstraint, DEFAULT_SEED};
use conelab_core::scalar::Rational;
use rand::Rng;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

struct Criterion {
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
    /// Canonical JSON of every report the criterion produced.
    json: String,
}

impl Criterion {
    fn announce(&self) -> bool {
        let verdict = if self.pass && self.elapsed <= self.budget {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "ACCEPTANCE {}: {} ({}; {:.2?} of {:.0?} budget)",
            self.name, verdict, self.detail, self.elapsed, self.budget
        );
        self.pass && self.elapsed <= self.budget
    }
}

fn seeded_pair(
    cfg: &SamplerConfig,
    trial: u64,
) -> (AtomicMeasure<Rational>, AtomicMeasure<Rational>) {
    let mut rng = cfg.rng_for_trial(trial);
    (cfg.sample_measure(&mut rng), cfg.sample_measure(&mut rng))
}

fn push_report(json: &mut String, report: &CheckReport) {
    json.push_str(&report_to_json(report));
}

// --- 1. 1d additivity: gap exactly 0 on 1,000 seeded pairs -----------------

fn build_criterion_1() -> Criterion {
    let started = Instant::now();
    let cfg = SamplerConfig::new(Cone::ray(), DEFAULT_SEED)
        .with_atoms(1, 30)
        .with_trials(1000);
    let mut json = String::new();
    let mut all_zero = true;
    let mut checked = 0u64;
    for trial in 0..cfg.trials {
        let (a, b) = seeded_pair(&cfg, trial);
        let report = check_suppc_additivity(&a, &b, &cfg.cone).expect("checker runs");
        if !(report.is_applicable() && report.conclusion_holds == Some(true)) {
            all_zero = false;
        }
        checked += 1;
        push_report(&mut json, &report);
    }
    Criterion {
        name: "1 titchmarsh-1d-additivity",
        pass: all_zero,
        detail: format!("{checked} seeded exact pairs, every gap exactly 0"),
        elapsed: started.elapsed(),
        budget: Duration::from_secs(30),
        json,
    }
}

fn criterion_1() -> &'static Criterion {
    static C: OnceLock<Criterion> = OnceLock::new();
    C.get_or_init(build_criterion_1)
}

#[test]
fn acceptance_1_titchmarsh_1d_additivity() {
    assert!(criterion_1().announce());
}

// --- 2. Hull additivity on 2d pairs -----------------------------------------

fn build_criterion_2() -> Criterion {
    let started = Instant::now();
    let cone = Cone::new(2, rat(1, 1)).expect("valid cone");
    let cfg = SamplerConfig::new(cone, DEFAULT_SEED + 1)
        .with_atoms(1, 8)
        .with_trials(200);
    let mut json = String::new();
    let mut all_pass = true;
    let mut probes = 0u64;
    for trial in 0..cfg.trials {
        let mut rng = cfg.rng_for_trial(trial);
        let a = cfg.sample_measure(&mut rng);
        let b = cfg.sample_measure(&mut rng);
        let mut directions = minkowski_probe_directions(&a, &b);
        for _ in 0..50 {
            directions.push(random_direction(&mut rng, 2, 10));
        }
        probes += directions.len() as u64;
        let report = check_hull_additivity(&a, &b, &directions).expect("checker runs");
        if report.conclusion_holds != Some(true) {
            all_pass = false;
        }
        push_report(&mut json, &report);
    }
    Criterion {
        name: "2 hull-additivity",
        pass: all_pass,
        detail: format!(
            "200 seeded 2d pairs, {probes} directions probed (edge normals + 50 random each)"
        ),
        elapsed: started.elapsed(),
        budget: Duration::from_secs(60),
        json,
    }
}

fn criterion_2() -> &'static Criterion {
    static C: OnceLock<Criterion> = OnceLock::new();
    C.get_or_init(build_criterion_2)
}

#[test]
fn acceptance_2_hull_additivity() {
    assert!(criterion_2().announce());
}

// --- 3. Cone-support subadditivity across n ∈ {1, 2, 3} ---------------------

fn build_criterion_3() -> Criterion {
    let started = Instant::now();
    let cones = [
        Cone::ray(),
        Cone::new(2, rat(1, 1)).expect("valid"),
        Cone::new(3, rat(3, 2)).expect("valid"),
    ];
    let mut json = String::new();
    let mut ok = true;
    let mut not_applicable = 0u64;
    for trial in 0..1000u64 {
        let cone = &cones[(trial % 3) as usize];
        let cfg = SamplerConfig::new(cone.clone(), DEFAULT_SEED + 2).with_atoms(1, 8);
        let (a, b) = seeded_pair(&cfg, trial);
        let report = check_suppc_subadditivity(&a, &b, cone).expect("checker runs");
        if report.is_applicable() {
            if report.conclusion_holds != Some(true) {
                ok = false;
            }
        } else {
            not_applicable += 1;
        }
        push_report(&mut json, &report);
    }
    Criterion {
        name: "3 suppc-subadditivity",
        pass: ok,
        detail: format!(
            "1000 seeded pairs over n ∈ {{1,2,3}}, no negative gap ({not_applicable} cancelled products n/a)"
        ),
        elapsed: started.elapsed(),
        budget: Duration::from_secs(60),
        json,
    }
}

fn criterion_3() -> &'static Criterion {
    static C: OnceLock<Criterion> = OnceLock::new();
    C.get_or_init(build_criterion_3)
}

#[test]
fn acceptance_3_suppc_subadditivity() {
    assert!(criterion_3().announce());
}

// --- 4. Falsification catalog: canonical witness in 2d, none in 1d ----------

fn run_cli_search_thm2(
    dir: &std::path::Path,
    cone: &str,
    trials: &str,
    name: &str,
) -> (i32, String) {
    let report = dir.join(name);
    let out = Command::new(env!("CARGO_BIN_EXE_conelab"))
        .args([
            "search",
            "thm2",
            "--cone",
            cone,
            "--trials",
            trials,
            "--seed",
            &DEFAULT_SEED.to_string(),
            "--json",
            report.to_str().expect("utf-8 path"),
        ])
        .current_dir(dir)
        .output()
        .expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    let json = std::fs::read_to_string(&report).unwrap_or_default();
    (code, json)
}

fn build_criterion_4() -> Criterion {
    let started = Instant::now();
    let dir = tempfile::tempdir().expect("tempdir");
    let (code_2d, json_2d) = run_cli_search_thm2(dir.path(), "dim=2,m=1", "100", "thm2-2d.json");
    let (code_1d, json_1d) = run_cli_search_thm2(dir.path(), "dim=1", "1000", "thm2-1d.json");

    let mut pass = true;
    let mut notes = Vec::new();

    if code_2d != 1 {
        pass = false;
        notes.push(format!("2d search exit code {code_2d}, expected 1"));
    }
    match serde_json::from_str::<serde_json::Value>(&json_2d) {
        Ok(r) => {
            let w = &r["witnesses"][0];
            let canonical = w["measures"]["a"]["atoms"][0]["x"] == serde_json::json!(["1", "1"])
                && w["measures"]["b"]["atoms"][0]["x"] == serde_json::json!(["1", "-1"])
                && w["quantities"]["k"]["exact"] == "2"
                && w["quantities"]["l"]["exact"] == "2"
                && w["quantities"]["suppc_product"]["exact"] == "2"
                && w["quantities"]["gap"]["exact"] == "2";
            if !canonical {
                pass = false;
                notes.push("first 2d witness is not the canonical single-atom pair".to_string());
            }
        }
        Err(e) => {
            pass = false;
            notes.push(format!("2d report unreadable: {e}"));
        }
    }
    if code_1d != 0 {
        pass = false;
        notes.push(format!("1d search exit code {code_1d}, expected 0"));
    }
    match serde_json::from_str::<serde_json::Value>(&json_1d) {
        Ok(r) => {
            if r["computed"]["witnesses_found"] != 0 {
                pass = false;
                notes.push("1d search found witnesses".to_string());
            }
        }
        Err(e) => {
            pass = false;
            notes.push(format!("1d report unreadable: {e}"));
        }
    }
    let detail = if notes.is_empty() {
        "canonical 2d witness (k=l=2, supp_C(a*b)=2, gap 2) cataloged first; 1000 1d trials witness-free"
            .to_string()
    } else {
        notes.join("; ")
    };
    Criterion {
        name: "4 thm2-falsification-catalog",
        pass,
        detail,
        elapsed: started.elapsed(),
        budget: Duration::from_secs(30),
        json: format!("{json_2d}{json_1d}"),
    }
}

fn criterion_4() -> &'static Criterion {
    static C: OnceLock<Criterion> = OnceLock::new();
    C.get_or_init(build_criterion_4)
}

#[test]
fn acceptance_4_thm2_falsification_catalog() {
    assert!(criterion_4().announce());
}

// --- 5. Telescoping identity -------------------------------------------------

fn build_criterion_5() -> Criterion {
    let started = Instant::now();
    let mut json = String::new();
    let mut ok = true;
    for trial in 0..200u64 {
        let dim = 1 + (trial % 2) as usize;
        let cone = if dim == 1 {
            Cone::ray()
        } else {
            Cone::new(2, rat(1, 1)).expect("valid")
        };
        let cfg = SamplerConfig::new(cone, DEFAULT_SEED + 5).with_atoms(1, 5);
        let (a, b) = seeded_pair(&cfg, trial);
        let k = 2 + (trial % 4) as usize;
        let report = check_telescoping(&a, &b, k).expect("checker runs");
        if report.conclusion_holds != Some(true) {
            ok = false;
        }
        push_report(&mut json, &report);
    }
    Criterion {
        name: "5 telescoping-identity",
        pass: ok,
        detail: "200 seeded pairs, k ≤ 5, exact lhs = rhs".to_string(),
        elapsed: started.elapsed(),
        budget: Duration::from_secs(60),
        json,
    }
}

fn criterion_5() -> &'static Criterion {
    static C: OnceLock<Criterion> = OnceLock::new();
    C.get_or_init(build_criterion_5)
}

#[test]
fn acceptance_5_telescoping_identity() {
    assert!(criterion_5().announce());
}

// --- 6. Lemma verifiers ------------------------------------------------------

fn build_criterion_6() -> Criterion {
    let started = Instant::now();
    let ray = Cone::ray();
    let mut json = String::new();
    let mut ok = true;
    let mut notes = Vec::new();

    // 200 hypothesis-satisfying factor-support instances: supp_C a = −p,
    // supp_C b = q ≤ p, so 1d additivity makes every hypothesis hold.
    for trial in 0..200u64 {
        let cfg = SamplerConfig::new(ray.clone(), DEFAULT_SEED + 6).with_atoms(1, 6);
        let mut rng = cfg.rng_for_trial(trial);
        let p = rat(rng.random_range(0..=6), rng.random_range(1..=4));
        let q = &p * rat(rng.random_range(0..=4), 4);
        let a_cfg = cfg
            .clone()
            .with_constraints(vec![SamplerConstraint::SuppCEquals { value: -p.clone() }]);
        let b_cfg = cfg
            .clone()
            .with_constraints(vec![SamplerConstraint::SuppCEquals { value: q.clone() }]);
        let a = a_cfg.sample_measure(&mut rng);
        let b = b_cfg.sample_measure(&mut rng);
        let h = &q + rat(1, 1);
        let report = verify_lemma1_instance(&a, &b, &ray, &h).expect("checker runs");
        if !(report.is_applicable() && report.conclusion_holds == Some(true)) {
            ok = false;
            notes.push(format!("lemma1 trial {trial} not conclusive"));
        }
        push_report(&mut json, &report);
    }
    // Hypothesis-violating factor-support instances: q' > p forces
    // supp_C(b*a) > 0; they must classify as not-applicable, never failed.
    for trial in 0..50u64 {
        let cfg = SamplerConfig::new(ray.clone(), DEFAULT_SEED + 7).with_atoms(1, 6);
        let mut rng = cfg.rng_for_trial(trial);
        let p = rat(rng.random_range(0..=6), rng.random_range(1..=4));
        let q = &p + rat(rng.random_range(1..=5), rng.random_range(1..=3));
        let a_cfg = cfg
            .clone()
            .with_constraints(vec![SamplerConstraint::SuppCEquals { value: -p.clone() }]);
        let b_cfg = cfg
            .clone()
            .with_constraints(vec![SamplerConstraint::SuppCEquals { value: q.clone() }]);
        let a = a_cfg.sample_measure(&mut rng);
        let b = b_cfg.sample_measure(&mut rng);
        let h = &q + rat(1, 1);
        let report = verify_lemma1_instance(&a, &b, &ray, &h).expect("checker runs");
        if report.is_applicable() || report.failed() {
            ok = false;
            notes.push(format!("lemma1 violating trial {trial} misclassified"));
        }
        push_report(&mut json, &report);
    }

    // 200 hypothesis-satisfying mixed-power-sum instances: b = a, or b = a
    // plus a perturbation deep enough that every power up to k_max still
    // agrees outside the ray.
    let k_max = 3usize;
    for trial in 0..200u64 {
        let cfg = SamplerConfig::new(ray.clone(), DEFAULT_SEED + 8).with_atoms(1, 5);
        let mut rng = cfg.rng_for_trial(trial);
        let r = rat(rng.random_range(1..=5), rng.random_range(1..=3));
        let a_cfg = cfg.clone().with_constraints(vec![
            SamplerConstraint::SuppCEquals { value: r.clone() },
            SamplerConstraint::NonzeroOutsideCone,
        ]);
        let a = a_cfg.sample_measure(&mut rng);
        let b = if trial % 2 == 0 {
            a.clone()
        } else {
            let depth = rat(k_max as i64 - 1, 1) * &r + rat(1 + rng.random_range(0..=4), 1);
            let delta = AtomicMeasure::dirac(
                vec![-depth],
                rat(rng.random_range(1..=5), rng.random_range(1..=3)),
            )
            .expect("valid");
            a.add(&delta).expect("same dim")
        };
        let report = verify_lemma2_instance(&a, &b, &ray, &r, k_max).expect("checker runs");
        if !(report.is_applicable() && report.conclusion_holds == Some(true)) {
            ok = false;
            notes.push(format!("lemma2 trial {trial} not conclusive"));
        }
        push_report(&mut json, &report);
    }
    // Violating mixed-power-sum instances: supp_C b = r′ ≠ r.
    for trial in 0..50u64 {
        let cfg = SamplerConfig::new(ray.clone(), DEFAULT_SEED + 9).with_atoms(1, 5);
        let mut rng = cfg.rng_for_trial(trial);
        let r = rat(rng.random_range(1..=5), 1);
        let r_other = &r + rat(rng.random_range(1..=3), rng.random_range(1..=2));
        let a_cfg = cfg.clone().with_constraints(vec![
            SamplerConstraint::SuppCEquals { value: r.clone() },
            SamplerConstraint::NonzeroOutsideCone,
        ]);
        let b_cfg = cfg.clone().with_constraints(vec![
            SamplerConstraint::SuppCEquals { value: r_other },
            SamplerConstraint::NonzeroOutsideCone,
        ]);
        let a = a_cfg.sample_measure(&mut rng);
        let b = b_cfg.sample_measure(&mut rng);
        let report = verify_lemma2_instance(&a, &b, &ray, &r, k_max).expect("checker runs");
        if report.is_applicable() || report.failed() {
            ok = false;
            notes.push(format!("lemma2 violating trial {trial} misclassified"));
        }
        push_report(&mut json, &report);
    }

    let detail = if notes.is_empty() {
        "200 satisfying instances per lemma all conclusive; violating instances classified n/a"
            .to_string()
    } else {
        notes.truncate(4);
        notes.join("; ")
    };
    Criterion {
        name: "6 lemma-verifiers",
        pass: ok,
        detail,
        elapsed: started.elapsed(),
        budget: Duration::from_secs(60),
        json,
    }
}

fn criterion_6() -> &'static Criterion {
    static C: OnceLock<Criterion> = OnceLock::new();
    C.get_or_init(build_criterion_6)
}

#[test]
fn acceptance_6_lemma_verifiers() {
    assert!(criterion_6().announce());
}

// --- 7. Uniqueness search ------------------------------------------------------

fn build_criterion_7() -> Criterion {
    let started = Instant::now();
    let cfg = SamplerConfig::new(Cone::ray(), DEFAULT_SEED + 10)
        .with_atoms(1, 6)
        .with_trials(500);
    let report = uniqueness_search(&cfg, &rat(2, 1), 4).expect("search runs");
    let pass = report.conclusion_holds == Some(true) && report.witnesses.is_empty();
    let deep = match report.computed.get("vacuous_deep_agreements") {
        Some(Quantity::Count(n)) => *n,
        _ => 0,
    };
    let json = report_to_json(&report);
    Criterion {
        name: "7 uniqueness-search",
        pass,
        detail: format!(
            "500 seeded rejection trials + constructive mode, 0 candidates ({deep} vacuous deep agreements)"
        ),
        elapsed: started.elapsed(),
        budget: Duration::from_secs(120),
        json,
    }
}

fn criterion_7() -> &'static Criterion {
    static C: OnceLock<Criterion> = OnceLock::new();
    C.get_or_init(build_criterion_7)
}

#[test]
fn acceptance_7_uniqueness_search() {
    assert!(criterion_7().announce());
}

// --- 8. Half-plane counterexample reproduction -------------------------------

fn build_criterion_8() -> Criterion {
    let started = Instant::now();
    let grid = GridSpec::new(200.0, 1 << 16).expect("valid grid");
    let run = run_counterexample(&grid, 4, 0.02).expect("run completes");
    let report = run.report;
    let real = |name: &str| match report.computed.get(name) {
        Some(Quantity::Real(v)) => *v,
        _ => f64::NAN,
    };
    let sup_diff = real("max_restriction_sup_diff");
    let cross = real("max_cross_term_mass");
    let tv = real("tv_difference_x_nonpositive");
    let ft = real("max_ft_error");
    let pass = report.is_applicable()
        && report.conclusion_holds == Some(true)
        && sup_diff <= 0.02
        && cross <= 0.02
        && tv >= 0.5
        && ft <= 0.02;
    let json = report_to_json(&report);
    Criterion {
        name: "8 fejer-counterexample",
        pass,
        detail: format!(
            "x>0 restrictions agree (sup diff {sup_diff:.1e}), cross mass {cross:.1e} ≤ 0.02, TV {tv:.2} ≥ 0.5, transform error {ft:.1e} ≤ 0.02"
        ),
        elapsed: started.elapsed(),
        budget: Duration::from_secs(120),
        json,
    }
}

fn criterion_8() -> &'static Criterion {
    static C: OnceLock<Criterion> = OnceLock::new();
    C.get_or_init(build_criterion_8)
}

#[test]
fn acceptance_8_fejer_counterexample() {
    assert!(criterion_8().announce());
}

// --- 9. Determinism ------------------------------------------------------------

#[test]
fn acceptance_9_determinism() {
    let started = Instant::now();
    let firsts: Vec<(&str, &String)> = vec![
        ("1", &criterion_1().json),
        ("2", &criterion_2().json),
        ("3", &criterion_3().json),
        ("4", &criterion_4().json),
        ("5", &criterion_5().json),
        ("6", &criterion_6().json),
        ("7", &criterion_7().json),
        ("8", &criterion_8().json),
    ];
    let reruns: Vec<(&str, String)> = vec![
        ("1", build_criterion_1().json),
        ("2", build_criterion_2().json),
        ("3", build_criterion_3().json),
        ("4", build_criterion_4().json),
        ("5", build_criterion_5().json),
        ("6", build_criterion_6().json),
        ("7", build_criterion_7().json),
        ("8", build_criterion_8().json),
    ];
    let mut pass = true;
    for ((name, first), (_, second)) in firsts.iter().zip(reruns.iter()) {
        if *first != second {
            pass = false;
            println!("ACCEPTANCE 9 determinism: criterion {name} reports differ between runs");
        }
    }
    let c = Criterion {
        name: "9 determinism",
        pass,
        detail: "criteria 1–8 rerun with the same seeds produce byte-identical reports".to_string(),
        elapsed: started.elapsed(),
        budget: Duration::from_secs(600),
        json: String::new(),
    };
    assert!(c.announce());
}
