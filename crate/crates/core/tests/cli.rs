use std::path::Path;
use std::process::{Command, Output};

use qpke::cli::files::{PkBody, PublicKeyFile};

fn qpke(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpke"))
        .current_dir(dir)
        .env_remove("QPKE_PROFILE")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn round_trip(layer: &str, msg: &str) {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let ell = msg.len().to_string();
    assert_eq!(code(&qpke(d, &["keygen", "--layer", layer, "--ell", &ell, "--seed", "1", "--out", "k.qsk"])), 0);
    assert_eq!(code(&qpke(d, &["pkgen", "--sk", "k.qsk", "--out", "k.qpk", "--seed", "2"])), 0);
    assert_eq!(code(&qpke(d, &["enc", "--pk", "k.qpk", "--msg", msg, "--out", "c.qct", "--seed", "3"])), 0);
    let dec = qpke(d, &["dec", "--sk", "k.qsk", "--ct", "c.qct", "--seed", "4"]);
    assert_eq!(code(&dec), 0, "{}", String::from_utf8_lossy(&dec.stderr));
    assert_eq!(stdout(&dec).trim(), msg);
}

#[test]
fn base_round_trip_through_files() {
    round_trip("base", "10110010");
}

#[test]
fn composed_and_pure_layers_round_trip() {
    round_trip("cva", "01");
    round_trip("1cca", "1");
    round_trip("pure", "101");
}

#[test]
fn tampered_state_dump_decrypts_to_bottom() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    qpke(d, &["keygen", "--ell", "2", "--seed", "5", "--out", "k.qsk"]);
    qpke(d, &["pkgen", "--sk", "k.qsk", "--out", "k.qpk", "--seed", "6"]);
    let path = d.join("k.qpk");
    let mut pk = PublicKeyFile::from_bytes(&std::fs::read(&path).unwrap()).unwrap();
    let PkBody::States(slots) = &mut pk.body else { panic!("base keys carry states") };
    // Flip the last signature bit of the second branch of slot 0.
    let mut lines: Vec<String> = slots[0].dump.lines().map(str::to_owned).collect();
    let last = lines[1].pop().unwrap();
    lines[1].push(if last == '0' { '1' } else { '0' });
    slots[0].dump = lines.join("\n") + "\n";
    std::fs::write(&path, pk.to_bytes()).unwrap();

    let mut bottoms = 0;
    for seed in 0..8 {
        let s = seed.to_string();
        let enc = qpke(d, &["enc", "--pk", "k.qpk", "--msg", "11", "--out", "c.qct", "--seed", &s]);
        assert_eq!(code(&enc), 0);
        let dec = qpke(d, &["dec", "--sk", "k.qsk", "--ct", "c.qct", "--seed", "0"]);
        match code(&dec) {
            2 => {
                bottoms += 1;
                assert_eq!(stdout(&dec).trim(), "⊥");
            }
            // Verification passed and collapsed slot 0 onto its valid branch;
            // the base scheme then decrypts that slot to a random bit.
            0 => assert_eq!(stdout(&dec).trim().len(), 2),
            c => panic!("unexpected exit {c}"),
        }
    }
    // Verification fails on the tampered branch with probability 1/2.
    assert!(bottoms > 0);
}

#[test]
fn usage_and_file_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    qpke(d, &["keygen", "--ell", "1", "--seed", "1", "--out", "k.qsk"]);
    assert_eq!(code(&qpke(d, &["pkgen", "--sk", "k.qsk", "--out", "k.qpk", "--layer", "nonsense"])), 1);
    assert_eq!(code(&qpke(d, &["pkgen", "--sk", "k.qsk", "--out", "k.qpk", "--layer", "cca", "--seed", "1"])), 1);
    assert_eq!(code(&qpke(d, &["dec", "--sk", "k.qsk", "--ct", "missing.qct", "--seed", "1"])), 1);
    std::fs::write(d.join("junk.qct"), b"QCT1garbage").unwrap();
    assert_eq!(code(&qpke(d, &["dec", "--sk", "k.qsk", "--ct", "junk.qct", "--seed", "1"])), 1);
    assert_eq!(code(&qpke(d, &["enc", "--pk", "k.qsk", "--msg", "1", "--out", "c.qct", "--seed", "1"])), 1);
    assert_eq!(code(&qpke(d, &["game", "--scheme", "pure", "--adversary", "known-branch", "--seed", "1"])), 1);
    assert_eq!(code(&qpke(d, &["game", "--game", "hybrid1", "--scheme", "cva", "--seed", "1"])), 1);
    assert_eq!(code(&qpke(d, &["keygen", "--ell", "0", "--seed", "1", "--out", "z.qsk"])), 1);
}

#[test]
fn missing_seed_is_drawn_and_printed() {
    let dir = tempfile::tempdir().unwrap();
    let o = qpke(dir.path(), &["keygen", "--ell", "1", "--out", "k.qsk"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("seed: "));
}

#[test]
fn adversary_list_enumerates_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let o = qpke(dir.path(), &["game", "--adversary", "list"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = stdout(&o).lines().map(|l| l.split_whitespace().next().unwrap().to_owned()).collect();
    for n in ["honest", "keyswap", "known-branch", "phase-tamper", "garbage-branch", "replay", "measure-and-copy", "secret-holder"] {
        assert!(names.iter().any(|x| x == n), "{n} missing");
    }
}

#[test]
fn keyswap_game_is_all_bottom_and_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "game", "--game", "ind-pkt-cpa", "--scheme", "base", "--adversary", "keyswap", "--trials", "200", "--seed", "7",
        "--ell", "1", "--m", "1",
    ];
    let a = qpke(dir.path(), &args);
    let b = qpke(dir.path(), &args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let summary: serde_json::Value = serde_json::from_str(stdout(&a).lines().last().unwrap()).unwrap();
    assert_eq!(summary["kind"], "summary");
    assert_eq!(summary["bottoms"], 200);
    assert_eq!(stdout(&a).lines().count(), 201);
}

#[test]
fn demo_reports_parse() {
    let dir = tempfile::tempdir().unwrap();
    let o = qpke(dir.path(), &["demo", "bz", "--k", "4", "--trials", "400", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["k"], 4);
    assert_eq!(v["exact_pr_measured"], 0.25);
    let o = qpke(dir.path(), &["demo", "bz", "--k", "3", "--seed", "3"]);
    assert_eq!(code(&o), 1);
}
