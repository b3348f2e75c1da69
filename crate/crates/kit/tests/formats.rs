use proptest::prelude::*;
use sabinin_core::fixtures::free_nilpotent;
use sabinin_core::free::parse_element;
use sabinin_core::structure::StructureConstants;
use sabinin_core::series::{BSeries, CSeries};
use sabinin_core::{Field, FreeElement, Word};
use sabinin_kit::fixtures::{builtin, from_path, Fixture, NAMES};
use sabinin_kit::formats::*;
use serde_json::Value;

const Q: Field = Field::Rational;

fn reparse(v: &Value) -> Value {
    serde_json::from_str(&serde_json::to_string(v).unwrap()).unwrap()
}

#[test]
fn element_json_shape_and_round_trip() {
    let e = parse_element(Q, 3, "2 + 1/2*(x1 x2) - 3*((x1 x1) x2)").unwrap();
    let v = element_json(&e);
    assert_eq!(v["trunc"], 3);
    assert_eq!(v["ring"], "Q");
    assert!(v["terms"].as_array().unwrap().iter().any(|t| t[0] == "(x1 x2)" && t[1] == "1/2"));
    assert_eq!(element_from_json(&reparse(&v), Q).unwrap(), e);
}

#[test]
fn element_text_and_json_agree() {
    let e = element_from_text("x1 + 1/3*(x2 x1)", Q, 2).unwrap();
    let j = serde_json::to_string(&element_json(&e)).unwrap();
    assert_eq!(element_from_text(&j, Q, 7).unwrap(), e);
    assert!(element_from_text("x1 +", Q, 2).is_err());
}

#[test]
fn ring_key_overrides_the_default() {
    let v: Value = serde_json::from_str(r#"{"trunc":2,"ring":"Fp:5","terms":[["x1","7"]]}"#).unwrap();
    let e = element_from_json(&v, Q).unwrap();
    assert_eq!(e.field(), Field::prime(5).unwrap());
    assert_eq!(e.coeff(&Word::gen(0)).literal(), "2");
}

#[test]
fn malformed_inputs_are_rejected() {
    for text in [
        r#"{"trunc":2,"terms":[["x1"]]}"#,
        r#"{"trunc":1,"terms":[["(x1 x1)","1"]]}"#,
        r#"{"terms":[]}"#,
        r#"{"trunc":2,"ring":"Fp:4","terms":[]}"#,
    ] {
        assert!(element_from_json(&serde_json::from_str(text).unwrap(), Q).is_err(), "{text}");
    }
}

#[test]
fn table_round_trip() {
    for (g, c) in [(2, 2), (2, 3), (3, 2)] {
        let t = free_nilpotent(Q, g, c).unwrap().table;
        let v = table_json(&t);
        assert_eq!(v["class"], c);
        assert_eq!(table_from_json(&reparse(&v), Q).unwrap(), t);
    }
}

#[test]
fn loop_json_uses_one_based_coordinates() {
    let Fixture::Loop(l) = builtin("rbch-loop-2-2", Q).unwrap() else { panic!() };
    let v = loop_json(&l);
    assert!(v["F"].get("3").is_some() && v["F"].get("0").is_none());
    let back = loop_from_json(&reparse(&v), Q).unwrap();
    assert_eq!(back.product_map(), l.product_map());
    assert_eq!(back.weights(), l.weights());
}

#[test]
fn series_round_trips() {
    let m2 = StructureConstants::matrices(Q, 2);
    let s = BSeries::monomial(&m2, 3, 2, vec![Q.int(1), Q.zero(), Q.ratio(-1, 2).unwrap(), Q.zero()]);
    assert_eq!(bseries_from_json(&reparse(&bseries_json(&s, Q)), &m2, 3).unwrap(), s);
    let c = CSeries::one(2).with_term(Word::gen(0), vec![Q.int(1), Q.int(2), Q.zero(), Q.zero()]);
    assert_eq!(cseries_from_json(&reparse(&cseries_json(&c, Q)), &m2, 2).unwrap(), c);
}

#[test]
fn cayley_csv_has_a_header_of_names() {
    let Fixture::Cayley(l) = builtin("loop8", Q).unwrap() else { panic!() };
    let text = cayley_csv(&l);
    assert_eq!(text.lines().next().unwrap(), l.names().join(","));
    assert_eq!(text.lines().count(), l.order() + 1);
    assert_eq!(cayley_from_csv(&text).unwrap(), l);
    assert!(cayley_from_csv("a,b\n0,1\n1,1\n").is_err());
}

#[test]
fn every_builtin_round_trips_through_its_file_form() {
    for name in NAMES {
        let f = builtin(name, Q).unwrap();
        let dir = std::env::temp_dir().join(format!("sabinin-kit-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(format!("{name}.{}", f.extension()));
        std::fs::write(&path, f.to_file_text()).unwrap();
        let (back, _) = from_path(&path, Q).unwrap();
        assert_eq!(back.kind(), f.kind(), "{name}");
        assert_eq!(back.to_file_text(), f.to_file_text(), "{name}");
    }
}

#[test]
fn shipped_fixture_files_match_the_builtins() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for name in NAMES {
        let f = builtin(name, Q).unwrap();
        let path = dir.join(format!("{name}.{}", f.extension()));
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, f.to_file_text(), "{name}");
    }
}

fn small_element() -> impl Strategy<Value = FreeElement> {
    prop::collection::vec((0u32..2, 1u32..=3, -4i64..=4, 1i64..=3), 0..6).prop_map(|terms| {
        let mut e = FreeElement::zero(Q, 3);
        for (g, deg, num, den) in terms {
            let w = Word::left_normed(&vec![g; deg as usize]);
            e.add_term(w, &Q.ratio(num, den).unwrap());
        }
        e
    })
}

proptest! {
    #[test]
    fn element_round_trip(e in small_element()) {
        prop_assert_eq!(element_from_json(&reparse(&element_json(&e)), Q).unwrap(), e);
    }
}
