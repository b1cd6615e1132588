//! Deterministic hash-tree signatures: sign, verify, and what a flipped bit does.

use qpke::primitives::{sig_gen, sig_sign, sig_verify, SigParams};
use qsim::BitString;

fn main() {
    let params = SigParams::new(16, 16).unwrap();
    let kp = sig_gen(b"example seed", params);
    let msg = BitString::from_index(0b1011, 17);
    let sig = sig_sign(&kp.sk, &msg);
    println!("signature length {} bits (formula {})", sig.len(), params.sig_len());
    println!("verifies: {}", sig_verify(&kp.vk, &msg, &sig));
    println!("deterministic: {}", sig == sig_sign(&kp.sk, &msg));

    let mut bad = sig.clone();
    bad.flip(sig.len() - 1);
    println!("last bit flipped verifies: {}", sig_verify(&kp.vk, &msg, &bad));
    let other = BitString::from_index(0b1010, 17);
    println!("other message verifies: {}", sig_verify(&kp.vk, &other, &sig));
}
