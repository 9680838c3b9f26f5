use diolab_experiments::{recompute_summary, run, Experiment, ExperimentConfig, Report};
use serde_json::Value;

fn schema() -> jsonschema::Validator {
    let text = include_str!("../../../docs/report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

fn cfg(e: Experiment, text: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(e, text).unwrap()
}

fn run_with(c: &ExperimentConfig, threads: usize) -> Report {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(|| run(c))
        .unwrap()
        .report
}

fn small_configs() -> Vec<ExperimentConfig> {
    vec![
        cfg(
            Experiment::CantorPatterns,
            r#"{"seed":3,"samples":12,"digits":3000,"cf_depth":200,"patterns":[[1],[2],[1,2]]}"#,
        ),
        cfg(
            Experiment::Boshernitzan,
            r#"{"x":{"kind":"golden"},"bits":20000,"n_max":30,"depth":400,"burn_in":20}"#,
        ),
        cfg(
            Experiment::DiCensus,
            r#"{"seed":1,"samples":4,"digits":40,"n_max":64,"h":2000}"#,
        ),
        cfg(
            Experiment::EscapeMass,
            r#"{"seed":2,"samples":3,"digits":40,"epsilons":{"max":0.4,"ratio":0.5,"count":3},"t_max":4,"dt":0.25,"traces":true}"#,
        ),
        cfg(Experiment::GaussCheck, r#"{"seed":4,"samples":6,"steps":8}"#),
        cfg(
            Experiment::Systole,
            r#"{"v":["1/3","2/7"],"t1":3,"dt":0.25,"norm":"euclidean"}"#,
        ),
    ]
}

#[test]
fn reports_validate_and_are_deterministic() {
    let validator = schema();
    for c in small_configs() {
        let a = run_with(&c, 1);
        let b = run_with(&c, 4);
        assert_eq!(a.deterministic_json(), b.deterministic_json(), "{}", c.experiment());
        let v = serde_json::to_value(&a).unwrap();
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| format!("{e} at {}", e.instance_path)).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", c.experiment());
        assert_eq!(recompute_summary(&a).unwrap(), a.summary, "{}", c.experiment());
        assert!(!a.caveats.is_empty());
    }
}

#[test]
fn schema_rejects_a_broken_report() {
    let c = &small_configs()[4];
    let mut v = serde_json::to_value(run_with(c, 2)).unwrap();
    v["records"][0]["residuals"] = Value::from("oops");
    assert!(!schema().is_valid(&v));
    v.as_object_mut().unwrap().remove("records");
    assert!(!schema().is_valid(&v));
}

#[test]
fn config_echo_reconstructs_the_run() {
    let c = &small_configs()[0];
    let a = run_with(c, 2);
    let again = diolab_experiments::config_of(&a).unwrap();
    assert_eq!(&again, c);
    assert_eq!(a.deterministic_json(), run_with(&again, 3).deterministic_json());
}

#[test]
fn seed_changes_samples() {
    let mut c = small_configs()[0].clone();
    let a = run_with(&c, 2);
    c.set_seed(99);
    let b = run_with(&c, 2);
    assert_ne!(a.records, b.records);
}

#[test]
fn zero_cantor_samples_flag_undefined_fraction() {
    let c = cfg(
        Experiment::CantorPatterns,
        r#"{"samples":0,"digits":3000,"cf_depth":100,"patterns":[[1]]}"#,
    );
    let r = run_with(&c, 1);
    assert!(r.records.is_empty());
    assert_eq!(r.summary["fraction_undefined"], true);
    assert!(r.summary["patterns"][0]["fraction"].is_null());
}

#[test]
fn huge_pattern_is_rare() {
    let c = cfg(
        Experiment::CantorPatterns,
        r#"{"seed":5,"samples":20,"digits":3000,"cf_depth":1000,"patterns":[[1000000]]}"#,
    );
    let r = run_with(&c, 2);
    let f = r.summary["patterns"][0]["fraction"].as_f64().unwrap();
    assert!(f <= 0.05, "{f}");
}

#[test]
fn census_of_half_half_hits_zero() {
    let c = cfg(
        Experiment::DiCensus,
        r#"{"points":[["1/2","1/2"]],"n_max":16,"h":50}"#,
    );
    let r = run_with(&c, 1);
    assert_eq!(r.summary["hits_zero"], 1);
    assert_eq!(r.records[0]["nu"][1]["value"], "0");
    let empty = cfg(Experiment::DiCensus, r#"{"points":[],"n_max":16,"h":50}"#);
    let r = run_with(&empty, 1);
    assert!(r.records.is_empty());
    assert_eq!(r.summary["points"], 0);
    assert!(r.summary["sup_nu_mean"].is_null());
}

#[test]
fn escape_of_rational_point_grows_to_one() {
    let frac = |t: f64| {
        let text = format!(r#"{{"points":[["2/7"]],"epsilons":[0.3, 0],"t_max":{t},"dt":0.05}}"#);
        let r = run_with(&cfg(Experiment::EscapeMass, &text), 1);
        let f = &r.records[0]["fractions"];
        assert_eq!(f[1], 0.0);
        f[0].as_f64().unwrap()
    };
    let (a, b, c) = (frac(5.0), frac(20.0), frac(80.0));
    assert!(a < b && b < c, "{a} {b} {c}");
    assert!(c > 0.9);
}

#[test]
fn gauss_check_edge_cases() {
    let r = run_with(&cfg(Experiment::GaussCheck, r#"{"samples":3,"steps":0}"#), 1);
    assert!(r.records.iter().all(|x| x["residuals"].as_array().unwrap().is_empty()));
    let rational = ExperimentConfig::from_json(
        Experiment::GaussCheck,
        r#"{"steps":3,"starts":[{"kind":"rational","value":"2/5"}]}"#,
    );
    assert!(rational.is_err());
}

#[test]
fn prime_power_multipliers() {
    let c = cfg(
        Experiment::Boshernitzan,
        r#"{"x":{"kind":"surd","a":0,"b":1,"c":1,"d":2},"bits":20000,"n_max":1,"depth":300,"burn_in":10,"multipliers":{"kind":"prime_powers","p":2,"max_exp":12}}"#,
    );
    let r = run_with(&c, 2);
    assert_eq!(r.records.len(), 12);
    assert_eq!(r.records[11]["multiplier"], "4096");
    assert_eq!(r.summary["failed"], 0);
}

#[test]
fn precision_budget_aborts() {
    let c = cfg(Experiment::GaussCheck, r#"{"samples":5,"steps":400,"bits":64}"#);
    let err = run(&c).unwrap_err();
    assert!(matches!(err, diolab_experiments::ExpError::Precision { .. }), "{err}");
}

#[test]
fn sample_configs_parse_and_validate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        let e: Experiment = serde_json::from_value(v["experiment"].clone()).unwrap();
        let c = ExperimentConfig::from_json(e, &text).unwrap_or_else(|err| panic!("{path:?}: {err}"));
        c.validate().unwrap_or_else(|err| panic!("{path:?}: {err}"));
        assert_eq!(path.file_stem().unwrap(), e.name());
        seen += 1;
    }
    assert_eq!(seen, 6);
}
