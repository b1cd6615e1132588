//! The CVA layer: round trip, then strong detectability with keys mixed
//! from two independent key sets.

use qpke::base::{BaseParams, BaseScheme};
use qpke::games::detectability::strong_detectability_cva;
use qpke::primitives::SigParams;
use qpke::transforms::Cva;
use qpke::Qpke;
use qsim::{bits, DetRng};

fn main() {
    let base = BaseScheme::new(BaseParams { sig: SigParams::new(16, 4).unwrap(), u: 16 }, 2);
    let cva = Cva::new(base, 2);
    println!("{} base instances, Test set of {}", cva.instances(), cva.test_size());

    let mut rng = DetRng::from_seed(5);
    let (sk, vk) = cva.skgen(&mut rng);
    let pk = cva.pkgen(&sk, &mut rng);
    let ct = cva.enc(&vk, pk, &bits("10"), &mut rng).unwrap();
    println!("honest: {:?}", cva.dec(&sk, &ct).map(|m| m.to_string()));

    let r = strong_detectability_cva(&cva, 100, 6).unwrap();
    println!("mixed keys over {} trials: {} ⊥, {} correct, {} wrong", r.trials, r.bottoms, r.correct, r.violations);
}
