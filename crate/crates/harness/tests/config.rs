use strato_core::regime::Regime;
use strato_harness::config::{DataRecipe, ExperimentConfig, ModelKind, NormName};

const BASIC: &str = r#"
name = "sub"
seed = 7

[model]
kind = "boussinesq"
b2 = 0.1875

[[norms]]
component = "vx"

[[norms]]
component = "vy"
kind = "l2_linf"
projection = "full"
"#;

#[test]
fn defaults_fill_missing_sections() {
    let cfg = ExperimentConfig::from_toml(BASIC).unwrap();
    assert_eq!((cfg.grid.nx, cfg.grid.ny, cfg.grid.ly), (32, 512, 20.0));
    assert_eq!(cfg.schedule.t_max, 200.0);
    assert!(matches!(cfg.data, DataRecipe::GaussianPacket { density: true, .. }));
    assert_eq!(cfg.norms[1].kind, NormName::L2Linf);
    assert_eq!(cfg.norms[0].name(), "vx_l2_nonzero");
    assert_eq!(cfg.norms[1].name(), "vy_l2linf_full");
    let times = cfg.schedule.times().unwrap();
    assert_eq!(cfg.fit_window(&times).unwrap(), [20.0, 200.0]);
    cfg.validate().unwrap();
}

#[test]
fn toml_round_trip() {
    let cfg = ExperimentConfig::from_toml(BASIC).unwrap();
    assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
}

#[test]
fn model_parameter_resolution() {
    let parse = |m: &str| ExperimentConfig::from_toml(&format!("[model]\n{m}")).and_then(|c| c.model.regime_params());
    let p = parse("kind = \"boussinesq\"\nb2 = 0.5").unwrap();
    assert_eq!(p.regime, Regime::Supercritical);
    let p = parse("kind = \"full_euler\"\nb2 = 0.5\nbeta = 0.5").unwrap();
    assert!((p.g - 1.0).abs() < 1e-15);
    let p = parse("kind = \"boussinesq\"\nr = 0.0\nbeta = 1.0\ng = 1.0").unwrap();
    assert_eq!(p.regime, Regime::NoShear);
    assert_eq!(parse("kind = \"boussinesq\"\nb2 = 0.25").unwrap().regime, Regime::Critical);
    assert_eq!(parse("kind = \"full_euler\"\nb2 = 0.0").unwrap().regime, Regime::Homogeneous);
}

#[test]
fn inconsistent_models_are_rejected() {
    let bad = [
        "kind = \"boussinesq\"\nb2 = 0.5\nbeta = 1.0\ng = 1.0",
        "kind = \"full_euler\"\nb2 = 0.5",
        "kind = \"full_euler\"\nb2 = 0.0\nbeta = 0.5",
        "kind = \"boussinesq\"\nb2 = -1.0",
        "kind = \"boussinesq\"\nr = 0.0\nb2 = 0.5",
        "kind = \"boussinesq\"",
    ];
    for m in bad {
        let r = ExperimentConfig::from_toml(&format!("[model]\n{m}")).and_then(|c| c.model.regime_params());
        assert!(r.is_err(), "accepted:\n{m}");
    }
}

#[test]
fn unknown_keys_are_errors() {
    let err = ExperimentConfig::from_toml("[model]\nkind = \"boussinesq\"\nb2 = 0.5\nbogus = 1").unwrap_err();
    assert!(err.to_string().contains("bogus"), "{err}");
}

#[test]
fn validation_catches_bad_sections() {
    let with = |extra: &str| ExperimentConfig::from_toml(&format!("{BASIC}\n{extra}")).unwrap().validate();
    assert!(with("[fit]\nwindow = [300.0, 400.0]").is_err());
    assert!(with("[grid]\nnx = 31").is_err());
    assert!(with("[schedule]\ntimes = [1.0, 3.0, 2.0]").is_err());
    assert!(with("[[norms]]\ncomponent = \"vx\"").is_err());
    assert!(with("[[norms]]\ncomponent = \"vy\"\nkind = \"sobolev_hw\"\nsy = 0.5").is_err());
    assert!(with("[sweep]\nb2 = []").is_err());
    assert!(with("[data]\nrecipe = \"rough_packet\"\norder = 0.0").is_err());
    assert!(with("[fit]\nwindow = [20.0, 100.0]").is_ok());
}

#[test]
fn b2_replacement_keeps_beta() {
    let cfg = ExperimentConfig::from_toml("[model]\nkind = \"full_euler\"\nb2 = 0.5\nbeta = 0.5").unwrap();
    let p = cfg.with_b2(0.1875).unwrap().model.regime_params().unwrap();
    assert_eq!((p.regime, p.beta), (Regime::Subcritical, 0.5));
    let zero = cfg.with_b2(0.0).unwrap();
    assert_eq!(zero.model.kind, ModelKind::FullEuler);
    assert_eq!(zero.model.regime_params().unwrap().beta, 0.0);
    assert_eq!(zero.name, "b2_0");
}
