//! Decryption error detectability: a violation is a decryption to a message
//! other than the one encrypted, without ⊥.

use qsim::{BitString, DetRng};
use rand::Rng;
use serde::Serialize;

use super::{Adversary, Oracles};
use crate::error::Result;
use crate::scheme::Qpke;
use crate::transforms::Cva;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DetectReport {
    pub trials: usize,
    pub violations: usize,
    pub bottoms: usize,
    pub correct: usize,
}

impl DetectReport {
    fn record(&mut self, msg: &BitString, out: Option<BitString>) {
        self.trials += 1;
        match out {
            None => self.bottoms += 1,
            Some(m) if m == *msg => self.correct += 1,
            Some(_) => self.violations += 1,
        }
    }
}

/// The adversary sees `vk` and `copies` honest keys, returns `pk'`; a random
/// message is encrypted under `(vk, pk')` and decrypted with the real `sk`.
pub fn run_detectability_game<S: Qpke, A: Adversary<S> + ?Sized>(
    scheme: &S,
    adv: &mut A,
    copies: usize,
    trials: usize,
    seed: u64,
) -> Result<DetectReport> {
    let root = DetRng::from_seed(seed);
    let mut report = DetectReport::default();
    for t in 0..trials {
        let mut rng = root.split_index(t as u64);
        let (sk, vk) = scheme.skgen(&mut rng);
        let keys = (0..copies).map(|_| scheme.pkgen(&sk, &mut rng)).collect();
        let tampered = adv.tamper(scheme, &vk, keys, &mut Oracles::new(None), &mut rng)?;
        let msg = BitString::random(scheme.msg_len(), &mut rng);
        let ct = scheme.enc(&vk, tampered.pk, &msg, &mut rng)?;
        report.record(&msg, scheme.dec(&sk, &ct));
    }
    Ok(report)
}

/// The strong variant for the cut-and-choose layer: two independent key
/// sets are drawn and, per instance, the secret key, verification key and
/// public key are each taken from a randomly chosen set.
pub fn strong_detectability_cva<T: Qpke>(cva: &Cva<T>, trials: usize, seed: u64) -> Result<DetectReport> {
    let root = DetRng::from_seed(seed);
    let mut report = DetectReport::default();
    for t in 0..trials {
        let mut rng = root.split_index(t as u64);
        let (sk_a, vk_a) = cva.skgen(&mut rng);
        let (sk_b, vk_b) = cva.skgen(&mut rng);
        let pk_a = cva.pkgen(&sk_a, &mut rng);
        let pk_b = cva.pkgen(&sk_b, &mut rng);
        let n = cva.instances();
        let pick = |rng: &mut DetRng| -> Vec<bool> { (0..n).map(|_| rng.gen()).collect() };
        let (ps, pv, pp) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let sk: Vec<_> = (0..n).map(|i| if ps[i] { sk_b[i].clone() } else { sk_a[i].clone() }).collect();
        let vk: Vec<_> = (0..n).map(|i| if pv[i] { vk_b[i].clone() } else { vk_a[i].clone() }).collect();
        let pk: Vec<_> = pk_a
            .into_iter()
            .zip(pk_b)
            .zip(pp)
            .map(|((a, b), use_b)| if use_b { b } else { a })
            .collect();
        let msg = BitString::random(cva.msg_len(), &mut rng);
        let ct = cva.enc(&vk, pk, &msg, &mut rng)?;
        report.record(&msg, cva.dec(&sk, &ct));
    }
    Ok(report)
}
