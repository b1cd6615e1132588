//! One quantum encryption of a symmetric key, then many classical rEnc calls.

use qpke::base::{BaseParams, BaseScheme};
use qpke::primitives::SkeMode;
use qpke::transforms::Recyclable;
use qpke::{Profile, Qpke};
use qsim::{BitString, DetRng};

fn main() {
    let p = Profile::toy();
    let rec = Recyclable::new(BaseScheme::new(BaseParams { sig: p.sig, u: p.u }, p.lambda), SkeMode::Cca, 16);
    let mut rng = DetRng::from_seed(12);
    let (sk, vk) = rec.skgen(&mut rng);
    let pk = rec.pkgen(&sk, &mut rng);

    let first = BitString::random(16, &mut rng);
    let (ct, mut rk) = rec.rec_enc(&vk, pk, &first, &mut rng).unwrap();
    let mut ok = (rec.dec(&sk, &ct) == Some(first)) as usize;
    for _ in 0..20 {
        let m = BitString::random(16, &mut rng);
        ok += (rec.dec(&sk, &rec.rec_renc(&mut rk, &m).unwrap()) == Some(m)) as usize;
    }
    println!("{ok}/21 correct, quantum encryptions: {}", rec.quantum_encryptions());
}
