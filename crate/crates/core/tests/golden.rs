use std::fs;
use std::path::PathBuf;

use perhom::doc::{parse, serialize, Document};

fn corpus() -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut files: Vec<_> = fs::read_dir(&dir)
        .expect("golden directory exists")
        .map(|e| e.expect("readable entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).expect("readable golden file");
            (p, text)
        })
        .collect()
}

#[test]
fn corpus_round_trips_byte_for_byte() {
    let files = corpus();
    assert!(files.len() >= 9);
    for (path, text) in files {
        let doc = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(serialize(&doc), text, "{}", path.display());
        assert_eq!(parse(&serialize(&doc)).unwrap(), doc);
    }
}

#[test]
fn corpus_covers_every_kind() {
    let mut kinds: Vec<&str> = corpus().iter().map(|(_, t)| parse(t).unwrap().kind()).collect();
    kinds.sort();
    kinds.dedup();
    assert_eq!(kinds, ["chain-map", "complex", "flag", "graded-module", "module-complex", "periodic"]);
}

#[test]
fn loose_input_becomes_canonical() {
    let loose = r#"{ "lo": 0, "kind": "complex", "field": "Q",
        "dims": [1, 1], "diffs": [[[2]]] }"#;
    let doc = parse(loose).unwrap();
    assert_eq!(serialize(&doc), "{\"diffs\":[[[\"2\"]]],\"dims\":[1,1],\"field\":\"Q\",\"kind\":\"complex\",\"lo\":0}\n");

    let reduced = parse(r#"{"kind":"periodic","field":{"fp":5},"n":1,"dims":[1],"diffs":[[[7]]]}"#).unwrap();
    assert!(serialize(&reduced).contains("[[[\"2\"]]]"));
    // Parsing checks shapes only; d^2 = 4 is left for the commands to report.
    let Document::Periodic(p) = reduced else { panic!("periodic expected") };
    assert!(p.validate().is_err());
}

#[test]
fn errors_carry_a_pointer() {
    let text = r#"{"kind":"chain-map","field":"Q","source":{"lo":0,"dims":[1],"diffs":[]},"target":{"lo":0,"dims":[1],"diffs":[]},"components":[[["1","2"]]]}"#;
    let err = parse(text).unwrap_err().to_string();
    assert!(err.starts_with("/components/0"), "{err}");
    let err = parse(r#"{"kind":"complex","field":{"fp":4},"lo":0,"dims":[1],"diffs":[]}"#).unwrap_err();
    assert!(err.to_string().contains("p not prime"), "{err}");
}
