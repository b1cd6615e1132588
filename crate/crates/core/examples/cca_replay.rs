//! The CCA layer with a decryption oracle, and a replay that re-signs the
//! challenge's inner ciphertext with a second token.

use qpke::games::{run_game, GameId, GameSpec, Replay};
use qpke::primitives::{SigParams, TmacParams};
use qpke::transforms::cca_stack;
use qpke::{Profile, Qpke};
use qsim::{bits, DetRng};

fn main() {
    let mut p = Profile::toy();
    p.sig = SigParams::new(8, 1).unwrap();
    p.lambda_r = 1;
    p.binding = SigParams::new(16, 0).unwrap();
    p.tmac = TmacParams::new(8, 16).unwrap();
    let cca = cca_stack(&p, 1);

    let mut rng = DetRng::from_seed(9);
    let (sk, vk) = cca.skgen(&mut rng);
    let pk = cca.pkgen(&sk, &mut rng);
    let ct = cca.enc(&vk, pk, &bits("1"), &mut rng).unwrap();
    let (msg, checks) = cca.dec_traced(&sk, &ct);
    println!("honest: {:?} after {checks:?}", msg.map(|m| m.to_string()));

    let rep = run_game(&cca, &GameSpec::new(GameId::Cca, 2, 5, 10), &mut Replay::new()).unwrap();
    for t in &rep.trials {
        let q = &t.queries[0];
        println!("trial {}: replayed query answered {:?}", t.trial, q.answer);
    }
}
