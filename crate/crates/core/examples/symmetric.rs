//! PRF and symmetric encryption, in both modes.

use qpke::primitives::{prf_eval, ske_dec, ske_enc, PrfKey, SkeKey, SkeMode};
use qsim::{bits, DetRng};

fn main() {
    let mut rng = DetRng::from_seed(3);
    let k = PrfKey::random(128, &mut rng);
    println!("F(k, 0101) = {}", prf_eval(&k, &bits("0101"), 24));
    println!("F(k, 0110) = {}", prf_eval(&k, &bits("0110"), 24));

    let key = SkeKey::random(128, &mut rng);
    let msg = bits("1100101011110000");
    for mode in [SkeMode::Cpa, SkeMode::Cca] {
        let mut ct = ske_enc(&key, &msg, mode, &mut rng);
        let ok = ske_dec(&key, &ct, mode) == Some(msg.clone());
        ct.body.flip(0);
        let flipped = ske_dec(&key, &ct, mode);
        println!("{mode:?}: round trip {ok}, body bit flipped -> {flipped:?}");
    }
}
