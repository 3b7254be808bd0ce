use std::path::Path;

use nderiv::cli::{cmd_canon, parse_operator, parse_ratfunc};
use nderiv::operators::{apply_deltas, delta_chain, DeltaChainSpec};

fn data(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn rows(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
}

#[test]
fn expression_corpus_canonicalizes() {
    let text = data("expressions.tsv");
    let mut count = 0;
    for line in rows(&text) {
        let (input, expected) = line.split_once('\t').expect("tab-separated row");
        let canon = cmd_canon(input, "t").unwrap_or_else(|e| panic!("{input:?}: {e}"));
        assert_eq!(canon, expected, "input {input:?}");
        // the canonical form is a fixed point
        assert_eq!(cmd_canon(&canon, "t").unwrap(), canon);
        count += 1;
    }
    assert!(count >= 25);
}

#[test]
fn delta_chain_fixtures() {
    let text = data("delta_golden.txt");
    for line in rows(&text) {
        let cols: Vec<_> = line.split('|').map(str::trim).collect();
        let [alphas, op, expected] = cols[..] else {
            panic!("bad row {line:?}");
        };
        let alphas: Vec<_> = alphas
            .split(';')
            .map(|a| parse_ratfunc(a.trim()).unwrap())
            .collect();
        let f = parse_operator(op).unwrap();
        let expected = parse_operator(expected).unwrap();
        let chain = apply_deltas(&alphas, &f);
        assert_eq!(chain, expected, "row {line:?}");
        let spec = DeltaChainSpec::new(alphas, f).unwrap();
        assert_eq!(delta_chain(&spec), expected);
    }
}

#[test]
fn syntax_errors_carry_positions() {
    let err = parse_operator("D^").unwrap_err().to_string();
    assert!(err.contains("column 3"), "{err}");
    assert!(parse_operator("t + D").is_err());
    assert!(parse_ratfunc("1/(t - t)").is_err());
}
