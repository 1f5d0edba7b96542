use std::path::PathBuf;

use mmsurf_cli::{parse_config, render, ConfigError};

fn fixtures() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    v.sort();
    v
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn shipped_fixtures_round_trip_through_render() {
    let all = fixtures();
    assert!(all.len() >= 7);
    for p in all {
        let cfg = parse_config(&std::fs::read_to_string(&p).unwrap()).unwrap_or_else(|e| panic!("{p:?}: {e}"));
        let again = parse_config(&render(&cfg)).unwrap();
        assert_eq!(cfg, again, "{p:?}");
    }
}

#[test]
fn five_face_fixture_resolves() {
    let cfg = parse_config(&fixture("five_face.toml")).unwrap();
    let r = cfg.resolve().unwrap();
    let m = r.measure.as_ref().unwrap();
    assert_eq!(m.graph().faces().len(), 5);
    assert_eq!(m.graph().euler_characteristic(), 2);
    assert!(r.crossing_named("v").unwrap().is_generic());
}

#[test]
fn negative_area_is_a_semantic_error_naming_the_face() {
    let text = fixture("five_face.toml").replace("area = 0.5", "area = -1.0");
    match parse_config(&text) {
        Err(ConfigError::Semantic(issues)) => {
            assert!(issues.iter().any(|i| i.path == "graph.faces[2]" && i.message.contains("`F3`")), "{issues:?}");
        }
        other => panic!("expected a semantic error, got {other:?}"),
    }
}

#[test]
fn unknown_key_is_rejected_with_its_path() {
    let text = fixture("figure_eight_u1.toml").replace("[mm_check]\n", "[mm_check]\nlhs_steps = 3\n");
    match parse_config(&text) {
        Err(ConfigError::Syntax(msg)) => {
            assert!(msg.contains("mm_check") && msg.contains("lhs_steps"), "{msg}");
        }
        other => panic!("expected a syntax error, got {other:?}"),
    }
    let text = fixture("simple_loop.toml").replace("[group]\nn = 1", "[group]\nn = 1\nsize = 2");
    assert!(matches!(parse_config(&text), Err(ConfigError::Syntax(m)) if m.contains("group")));
}

#[test]
fn malformed_toml_is_a_syntax_error() {
    assert!(matches!(parse_config("[group\nn = 1"), Err(ConfigError::Syntax(_))));
    assert!(matches!(parse_config("[group]\nn = \"two\""), Err(ConfigError::Syntax(_))));
}

#[test]
fn inconsistent_references_are_all_reported() {
    let text = fixture("figure_eight_u1.toml")
        .replace("loop = \"L\"", "loop = \"M\"")
        .replace("darts = \"e1 e2 e3 e4\"", "darts = \"e1 e2 e3\"");
    match parse_config(&text) {
        Err(ConfigError::Semantic(issues)) => {
            let paths: Vec<&str> = issues.iter().map(|i| i.path.as_str()).collect();
            assert!(paths.contains(&"mm_check.loop"), "{paths:?}");
            assert!(paths.iter().any(|p| p.starts_with("crossings[0]")), "{paths:?}");
        }
        other => panic!("expected semantic errors, got {other:?}"),
    }
}

#[test]
fn abelian_methods_need_n_equal_one() {
    let text = fixture("figure_eight_u1.toml").replace("n = 1", "n = 2");
    assert!(matches!(parse_config(&text), Err(ConfigError::Semantic(i)) if i[0].path == "group.n"));
}

#[test]
fn local_words_are_checked() {
    let text = fixture("local_mm.toml").replace("a1 al3", "a1 b3");
    assert!(matches!(
        parse_config(&text),
        Err(ConfigError::Semantic(i)) if i[0].path == "local_mm.functional[0]"
    ));
}
