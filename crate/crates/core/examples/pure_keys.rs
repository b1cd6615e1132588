//! Pure-state public keys: identical copies, a round trip, and the
//! find-both experiment with its (vacuous) bound.

use qpke::primitives::SigParams;
use qpke::pure::{cannot_find_both_trial, pure_dec, pure_enc, pure_pkgen, pure_skgen, FindBothStrategy, PureParams};
use qsim::DetRng;

fn main() {
    let params = PureParams::new(SigParams::new(16, 4).unwrap(), 3, 8, 64).unwrap();
    let mut rng = DetRng::from_seed(13);
    let (sk, vk) = pure_skgen(params, &mut rng);
    let key = pure_pkgen(&sk).unwrap();
    println!("{} branches over {} qubits", key.support_size(), key.width());
    println!("pkgen is a pure function of sk: {}", key.approx_eq(&pure_pkgen(&sk).unwrap(), 1e-12));

    for b in [false, true] {
        let ct = pure_enc(&params, &vk, key.clone(), b, &mut rng).unwrap();
        println!("b = {} -> {:?}", b as u8, pure_dec(&sk, &ct).map(u8::from));
    }

    for s in [FindBothStrategy::MeasureAll, FindBothStrategy::BasisSplit] {
        let r = cannot_find_both_trial(4, s, 3, 8, 300, &mut rng).unwrap();
        println!("{s:?}, m = 4: rate {:.3}, bound {:.1} (vacuous: {})", r.rate(), r.bound, r.bound_is_vacuous());
    }
}
