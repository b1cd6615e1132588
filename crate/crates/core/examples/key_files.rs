//! The command line in-process: key files, encryption, decryption.

use qpke::cli::files::{PkBody, PublicKeyFile};

fn qpke(args: &[&str]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = qpke::cli::run(std::iter::once("qpke").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned())
}

fn main() {
    let dir = std::env::temp_dir().join(format!("qpke-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = |f: &str| dir.join(f).to_string_lossy().into_owned();
    let (sk, pk, ct) = (path("k.qsk"), path("k.qpk"), path("c.qct"));

    qpke(&["keygen", "--layer", "base", "--ell", "4", "--seed", "1", "--out", &sk]);
    qpke(&["pkgen", "--sk", &sk, "--out", &pk, "--seed", "2"]);
    let file = PublicKeyFile::from_bytes(&std::fs::read(&pk).unwrap()).unwrap();
    if let PkBody::States(slots) = &file.body {
        println!("{} slots, first r = {}", slots.len(), slots[0].r);
    }
    qpke(&["enc", "--pk", &pk, "--msg", "0110", "--out", &ct, "--seed", "3"]);
    let (code, out) = qpke(&["dec", "--sk", &sk, "--ct", &ct, "--seed", "4"]);
    println!("dec exit {code}: {}", out.trim());
    std::fs::remove_dir_all(&dir).unwrap();
}
