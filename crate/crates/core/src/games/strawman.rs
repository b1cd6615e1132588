//! The base construction with the signature check removed. Keys and
//! decryption are unchanged; encryption applies `Z^b` and measures whatever
//! key it is handed. This is the scheme a key-substituting adversary breaks.

use qsim::{BitString, DetRng};

use crate::base::{enc_finish, BaseCiphertext, BaseParams, BaseScheme, BaseSecretKey, QuantumPublicKey, REG_A, REG_B};
use crate::error::Result;
use crate::primitives::VerifyingKey;
use crate::scheme::{check_arity, check_msg_len, Qpke};

#[derive(Clone, Copy, Debug)]
pub struct NoSigStrawman {
    pub base: BaseScheme,
}

impl NoSigStrawman {
    pub fn new(params: BaseParams, ell: usize) -> Self {
        NoSigStrawman {
            base: BaseScheme::new(params, ell),
        }
    }
}

impl Qpke for NoSigStrawman {
    type SecretKey = Vec<BaseSecretKey>;
    type VerKey = Vec<VerifyingKey>;
    type PublicKey = Vec<QuantumPublicKey>;
    type Ciphertext = Vec<BaseCiphertext>;

    fn name(&self) -> String {
        format!("nosig[ℓ={}]", self.base.ell)
    }

    fn msg_len(&self) -> usize {
        self.base.ell
    }

    fn skgen(&self, rng: &mut DetRng) -> (Self::SecretKey, Self::VerKey) {
        self.base.skgen(rng)
    }

    fn pkgen(&self, sk: &Self::SecretKey, rng: &mut DetRng) -> Self::PublicKey {
        self.base.pkgen(sk, rng)
    }

    fn enc(&self, _vk: &Self::VerKey, pk: Self::PublicKey, msg: &BitString, rng: &mut DetRng) -> Result<Self::Ciphertext> {
        check_arity(self.base.ell, pk.len())?;
        check_msg_len(self.base.ell, msg)?;
        pk.into_iter()
            .enumerate()
            .map(|(i, k)| {
                let l = k.state.layout();
                if l.register_width(REG_A).ok() != Some(1) || !l.contains(REG_B) {
                    return Ok(BaseCiphertext::Bottom);
                }
                Ok(enc_finish(k.r, k.state, msg.get(i), rng)?.0)
            })
            .collect()
    }

    fn dec(&self, sk: &Self::SecretKey, ct: &Self::Ciphertext) -> Option<BitString> {
        self.base.dec(sk, ct)
    }

    fn is_bottom(&self, ct: &Self::Ciphertext) -> bool {
        self.base.is_bottom(ct)
    }
}
