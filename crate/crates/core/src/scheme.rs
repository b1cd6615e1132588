//! The interface every layer exposes, and through which transformations
//! see their inner scheme.

use std::fmt::Debug;

use qsim::{BitString, DetRng};

use crate::error::{Error, Result};
use crate::wire::Wire;

pub trait Qpke {
    type SecretKey: Clone + Debug + Send + Sync;
    type VerKey: Clone + Debug + PartialEq + Wire + Send + Sync;
    /// Quantum public keys are deliberately not `Clone`.
    type PublicKey: Debug + Send;
    type Ciphertext: Clone + Debug + PartialEq + Wire + Send + Sync;

    fn name(&self) -> String;

    /// Message length `ℓ` in bits.
    fn msg_len(&self) -> usize;

    fn skgen(&self, rng: &mut DetRng) -> (Self::SecretKey, Self::VerKey);

    fn pkgen(&self, sk: &Self::SecretKey, rng: &mut DetRng) -> Self::PublicKey;

    /// Encryption consumes the (possibly tampered) public key. A rejected key
    /// yields a ⊥ ciphertext, not an error; errors signal caller misuse.
    fn enc(
        &self,
        vk: &Self::VerKey,
        pk: Self::PublicKey,
        msg: &BitString,
        rng: &mut DetRng,
    ) -> Result<Self::Ciphertext>;

    fn dec(&self, sk: &Self::SecretKey, ct: &Self::Ciphertext) -> Option<BitString>;

    /// Whether the ciphertext is the distinguished value ⊥.
    fn is_bottom(&self, _ct: &Self::Ciphertext) -> bool {
        false
    }
}

pub(crate) fn check_msg_len(expected: usize, msg: &BitString) -> Result<()> {
    if msg.len() != expected {
        return Err(Error::MessageLength {
            expected,
            got: msg.len(),
        });
    }
    Ok(())
}

pub(crate) fn check_arity(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Arity { expected, got });
    }
    Ok(())
}

/// 32 fresh seed bytes.
pub(crate) fn draw_seed(rng: &mut DetRng) -> [u8; 32] {
    use rand::RngCore;
    let mut s = [0u8; 32];
    rng.fill_bytes(&mut s);
    s
}
