//! A tokenized MAC: the token signs once, then it is gone.

use qpke::primitives::{tmac_keygen, tmac_sign, tmac_token, tmac_verify, TmacParams};
use qsim::{bits, DetRng};

fn main() {
    let params = TmacParams::new(8, 16).unwrap();
    let mk = tmac_keygen(b"mac key", params);
    let mut token = tmac_token(&mk);
    let mut rng = DetRng::from_seed(4);

    let m1 = bits("00010010");
    let sig = tmac_sign(&mut token, &m1, &mut rng).unwrap();
    println!("{} token qubits; signature on m1 verifies: {}", params.qubits(), tmac_verify(&mk, &m1, &sig));
    println!("same signature on another message: {}", tmac_verify(&mk, &bits("00010011"), &sig));
    println!("second use of the token: {:?}", tmac_sign(&mut token, &m1, &mut rng).err());
}
