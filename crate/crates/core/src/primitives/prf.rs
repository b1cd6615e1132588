use qsim::BitString;
use rand::RngCore;

use super::hash::Sponge;

/// PRF key: `λ` uniformly random bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrfKey(pub BitString);

impl PrfKey {
    pub fn random<R: RngCore + ?Sized>(bits: usize, rng: &mut R) -> Self {
        PrfKey(BitString::random(bits, rng))
    }

    pub fn bits(&self) -> &BitString {
        &self.0
    }
}

/// `PRF_K(input)` truncated to `out_len` bits. The output length is bound
/// into the computation, so a short output is not a prefix of a long one.
pub fn prf_eval(key: &PrfKey, input: &BitString, out_len: usize) -> BitString {
    let mut s = Sponge::new(b"prf");
    s.absorb_bits(&key.0);
    s.absorb_bits(input);
    s.absorb_u64(out_len as u64);
    s.squeeze(out_len)
}

/// 32 PRF output bytes, for seeding a deterministic generator.
pub fn prf_seed(key: &PrfKey, input: &BitString) -> [u8; 32] {
    let out = prf_eval(key, input, 256).to_bytes();
    out.try_into().expect("256-bit output")
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsim::DetRng;
    use std::collections::HashSet;

    #[test]
    fn stable_and_length_exact() {
        let k = PrfKey(BitString::from_index(0xdead_beef, 64).concat(&BitString::ones(64)));
        let x = BitString::from_index(5, 16);
        assert_eq!(prf_eval(&k, &x, 77), prf_eval(&k, &x, 77));
        assert_eq!(prf_eval(&k, &x, 77).len(), 77);
        assert_ne!(prf_eval(&k, &x, 64), prf_eval(&k, &x, 65).slice(0, 64));
    }

    #[test]
    fn low_bias_and_no_collisions() {
        let k = PrfKey::random(128, &mut DetRng::from_seed(3));
        let mut seen = HashSet::new();
        let mut ones = vec![0usize; 128];
        let n = 10_000;
        for i in 0..n {
            let y = prf_eval(&k, &BitString::from_index(i, 32), 128);
            for (j, b) in y.iter().enumerate() {
                ones[j] += b as usize;
            }
            assert!(seen.insert(y));
        }
        let worst = ones
            .iter()
            .map(|&c| (c as f64 / n as f64 - 0.5).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 0.02, "bias {worst}");
    }
}
