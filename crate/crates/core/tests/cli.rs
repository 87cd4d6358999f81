//! End-to-end runs of the command-line front end, in process.

use std::io::BufRead;

use proptest::prelude::*;
use serde_json::Value;

use pseudoatom::banded::SymBandMatrix;
use pseudoatom::cli::{run, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};
use pseudoatom::reference::{format_records, golden, parse_records, ReferenceRecord, TableId};

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pseudoatom").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Vec<Value> {
    serde_json::from_str::<Value>(text).unwrap().as_array().unwrap().clone()
}

#[test]
fn bare_hydrogen_solve() {
    let (code, out, err) = cli(&["solve", "--z", "1", "--electrons", "1", "--states", "3", "--model", "bare", "--format", "json"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let rows = json(&out);
    assert_eq!(rows.len(), 3);
    for (row, exact) in rows.iter().zip([-0.5, -0.125, -0.055_555_555_555_555_6]) {
        assert!((row["raw_hartree"].as_f64().unwrap() - exact).abs() <= 1e-9);
    }
    assert_eq!(rows[1]["state"], "2s");
}

#[test]
fn lithium_p_channel_text() {
    let (code, out, _) = cli(&["solve", "--z", "3", "--electrons", "3", "--l", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("# alpha = 0.666667"), "{out}");
    assert!(out.contains("# z_eff = 1.252839"), "{out}");
    let row = out.lines().find(|l| l.starts_with("2 ")).unwrap();
    let ev: f64 = row.split_whitespace().last().unwrap().parse().unwrap();
    assert!((ev + 3.558).abs() < 5e-4, "{row}");
}

#[test]
fn helium_central_ip_line() {
    let (code, out, _) = cli(&["solve", "--z", "2", "--electrons", "2", "--model", "central"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("two-electron ionization potential"), "{out}");
}

#[test]
fn codata_units_skip_comparison() {
    let (code, out, _) = cli(&["solve", "--z", "3", "--electrons", "3", "--states", "2", "--units", "codata", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let row = &json(&out)[1];
    assert_eq!(row["state"], "2s");
    assert_eq!(row["units"], "codata");
    // Li 2s scaled by 2/3 with the CODATA hartree.
    assert!((row["scaled_ev"].as_f64().unwrap() + 5.5027).abs() < 5e-4, "{row}");

    let (code, out, _) = cli(&["table3", "--units", "codata", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    for row in json(&out) {
        assert!(row["dev_a"].is_null() && row["pass_a"].is_null());
        assert_eq!(row["units"], "codata");
    }
}

#[test]
fn table2_json_is_flat_and_complete() {
    let (code, out, err) = cli(&["table2", "--format", "json"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let rows = json(&out);
    assert_eq!(rows.len(), 6);
    for row in &rows {
        let obj = row.as_object().unwrap();
        for key in ["state", "model_a_ev", "model_b_ev", "golden_a", "golden_b", "singlet_ev", "triplet_ev", "dev_a", "dev_b", "pass_a", "model_b_within", "units"] {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert!(obj.values().all(|v| !v.is_object() && !v.is_array()));
        assert_eq!(row["pass_a"], true);
        assert!(row["dev_a"].as_f64().unwrap() <= 0.005);
    }
}

#[test]
fn table3_csv_header_and_rows() {
    let (code, out, _) = cli(&["table3", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("state,model_a_ev,model_b_ev,golden_a,golden_b,"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows[0].starts_with("2s,-5.500"));
}

#[test]
fn converge_sweeps() {
    let (code, out, err) = cli(&["converge", "--atom", "Li", "--sweep-splines", "400,600,800", "--format", "csv"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let last: Vec<&str> = out.lines().last().unwrap().split(',').collect();
    assert_eq!(last[0], "800");
    assert!(last[2].parse::<f64>().unwrap() <= 1e-9);

    let (code, out, _) = cli(&["converge", "--state", "2p", "--sweep-nodes", "10,20", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let rows = json(&out);
    assert!(rows[1]["abs_delta"].as_f64().unwrap() <= 1e-10);
    assert_eq!(rows[1]["state"], "2p");

    // An impossible threshold is a numerical failure, not a usage error.
    let (code, _, _) = cli(&["converge", "--sweep-splines", "300,400", "--threshold", "1e-30"]);
    assert_eq!(code, EXIT_NUMERICAL);
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["converge", "--sweep-splines", "600"],
        &["converge", "--atom", "Xx", "--sweep-nodes", "10,20"],
        &["converge"],
        &["solve", "--z", "3"],
        // Z_eff = 0 for three electrons around a proton.
        &["solve", "--z", "1", "--electrons", "3"],
        &["table3", "--splines", "60"],
        &["table1", "--units", "furlongs"],
        &["table1", "--model", "mystery"],
        &["table1", "--format", "xml"],
        &["table1", "--order", "1"],
        &["table1", "--splines", "5"],
        &["table1", "--mg-mn", "7"],
        &["table1", "--config", "/nonexistent/pseudoatom.conf"],
        &["nonsense"],
        &[],
    ];
    for args in cases {
        let (code, _, err) = cli(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}: {err}");
        assert!(!err.is_empty(), "{args:?} should explain itself");
    }
    assert_eq!(cli(&["--help"]).0, EXIT_OK);
}

#[test]
fn config_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.conf");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(cli(&["table3", "--config", empty.to_str().unwrap()]).0, EXIT_USAGE);

    let unknown = dir.path().join("unknown.conf");
    std::fs::write(&unknown, "colour = blue\n").unwrap();
    assert_eq!(cli(&["table3", "--config", unknown.to_str().unwrap()]).0, EXIT_USAGE);

    // File sets the model and format; the flag then overrides the format.
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# bare Coulomb, csv\nmodel = bare\nformat = csv\nsplines = 200\n").unwrap();
    let path = conf.to_str().unwrap();
    let (code, out, _) = cli(&["solve", "--z", "1", "--electrons", "1", "--config", path]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("nu,state,raw_hartree"), "{out}");
    let (_, out, _) = cli(&["solve", "--z", "1", "--electrons", "1", "--config", path, "--format", "json"]);
    assert_eq!(json(&out)[0]["model"], "bare");
    let (_, out, _) = cli(&["solve", "--z", "1", "--electrons", "1", "--config", path, "--format", "json", "--model", "symmetry"]);
    assert_eq!(json(&out)[0]["model"], "symmetry");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("h.csv");
    let (code, out, _) = cli(&["solve", "--z", "1", "--electrons", "1", "--model", "bare", "--format", "csv", "--out", target.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let (_, direct, _) = cli(&["solve", "--z", "1", "--electrons", "1", "--model", "bare", "--format", "csv"]);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), direct);

    let bad = dir.path().join("missing").join("x.csv");
    assert_eq!(cli(&["solve", "--z", "1", "--electrons", "1", "--out", bad.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn matrix_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("pair.txt");
    let (code, _, err) = cli(&["solve", "--z", "3", "--electrons", "3", "--l", "2", "--splines", "60", "--rmax", "40", "--knots", "linear", "--dump-matrices", target.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let text = std::fs::read_to_string(&target).unwrap();
    let mut reader = text.as_bytes();
    let mut header = String::new();
    reader.read_line(&mut header).unwrap();
    assert!(header.starts_with("# atom=") && header.contains("l=2"), "{header}");
    let (hn, h) = SymBandMatrix::read_text(&mut reader).unwrap();
    let (sn, s) = SymBandMatrix::read_text(&mut reader).unwrap();
    assert_eq!((hn.as_str(), sn.as_str()), ("H", "S"));
    assert_eq!((h.dim(), h.bandwidth()), (58, 9));
    assert_eq!(s.dim(), 58);
    let mut again = Vec::new();
    h.write_text("H", &mut again).unwrap();
    assert!(text.contains(std::str::from_utf8(&again).unwrap()));
}

#[test]
fn golden_data_round_trips() {
    let text = format_records(golden());
    assert_eq!(parse_records(&text).unwrap(), golden());
    assert_eq!(golden().len(), 26);
}

fn record() -> impl Strategy<Value = ReferenceRecord> {
    let value = || -1e3f64..1e3;
    (
        prop_oneof![Just(TableId::I), Just(TableId::II), Just(TableId::III)],
        "[A-Za-z0-9]{1,6}",
        value(),
        value(),
        proptest::option::of(value()),
        proptest::option::of(value()),
    )
        .prop_map(|(table, label, p1, p2, r, a)| ReferenceRecord {
            table,
            label,
            present1_ev: p1,
            present2_ev: p2,
            reference_ev: r,
            reference_alt_ev: a,
        })
}

proptest! {
    #[test]
    fn reference_records_round_trip(records in proptest::collection::vec(record(), 1..20)) {
        prop_assert_eq!(parse_records(&format_records(&records)).unwrap(), records);
    }
}
