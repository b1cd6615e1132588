//! The transformation chain: cut-and-choose (CVA), verification-key-bit
//! indexing (1CCA), tokenized-MAC boosting (CCA), PRF-derived per-serial
//! keys (MKey), and the recyclable hybrid. Each layer sees its inner scheme
//! only through [`Qpke`](crate::Qpke).

pub mod cca;
pub mod cva;
pub mod mkey;
pub mod onecca;
pub mod recyclable;

pub use cca::{Cca, CcaCheck, CcaCiphertext, CcaPublicKey, CcaSecretKey};
pub use cva::{Cva, CvaCiphertext};
pub use mkey::{MKey, MKeyCiphertext, MKeyPublicKey, MKeySecretKey};
pub use onecca::{OneCca, OneCcaCiphertext};
pub use recyclable::{RecCiphertext, Recyclable, RecyclableKey};

use qsim::BitString;

use crate::base::{BaseParams, BaseScheme};
use crate::params::Profile;
use crate::wire::Wire;

pub type CvaStack = Cva<BaseScheme>;
pub type OneCcaStack = OneCca<CvaStack>;
pub type CcaStack = Cca<OneCcaStack>;
pub type MKeyStack = MKey<CcaStack>;

/// Canonical bytes of a value, as a bit string to sign or MAC.
pub(crate) fn wire_bits<T: Wire>(v: &T) -> BitString {
    let bytes = v.to_wire();
    BitString::from_bytes(&bytes, bytes.len() * 8).expect("whole bytes")
}

fn base(profile: &Profile, ell: usize) -> BaseScheme {
    BaseScheme::new(
        BaseParams {
            sig: profile.sig,
            u: profile.u,
        },
        ell,
    )
}

pub fn cva_stack(profile: &Profile, ell: usize) -> CvaStack {
    Cva::new(base(profile, ell), profile.lambda_r)
}

pub fn onecca_stack(profile: &Profile, ell: usize) -> OneCcaStack {
    OneCca::new(cva_stack(profile, ell), profile.binding)
}

/// CCA over 1CCA; the inner layers carry `binding.hash_bits + ℓ` bits.
pub fn cca_stack(profile: &Profile, ell: usize) -> CcaStack {
    let inner = onecca_stack(profile, profile.binding.hash_bits + ell);
    Cca::new(inner, profile.binding, profile.tmac).expect("inner width matches by construction")
}

pub fn mkey_stack(profile: &Profile, ell: usize) -> MKeyStack {
    MKey::new(cca_stack(profile, ell), profile.lambda, profile.sig)
}

#[cfg(test)]
pub(crate) mod mock {
    //! A classical stand-in scheme whose public keys can be told to reject
    //! or to corrupt decryption.

    use qsim::{BitString, DetRng};
    use rand::RngCore;

    use crate::error::Result;
    use crate::primitives::hash::hash_bits;
    use crate::scheme::{check_msg_len, Qpke};

    #[derive(Clone, Copy, Debug)]
    pub struct Mock {
        pub ell: usize,
    }

    #[derive(Debug)]
    pub struct MockPk {
        pub key: u64,
        /// XORed into the plaintext the receiver will see.
        pub flip: Option<BitString>,
        pub reject: bool,
    }

    fn pad(key: u64, ell: usize) -> BitString {
        hash_bits(b"mock", &[&BitString::from_index(key, 64)], ell)
    }

    impl Qpke for Mock {
        type SecretKey = u64;
        type VerKey = u64;
        type PublicKey = MockPk;
        type Ciphertext = Option<BitString>;

        fn name(&self) -> String {
            "mock".into()
        }

        fn msg_len(&self) -> usize {
            self.ell
        }

        fn skgen(&self, rng: &mut DetRng) -> (u64, u64) {
            let k = rng.next_u64();
            (k, k)
        }

        fn pkgen(&self, sk: &u64, _rng: &mut DetRng) -> MockPk {
            MockPk {
                key: *sk,
                flip: None,
                reject: false,
            }
        }

        fn enc(&self, vk: &u64, pk: MockPk, msg: &BitString, _rng: &mut DetRng) -> Result<Option<BitString>> {
            check_msg_len(self.ell, msg)?;
            if pk.reject || pk.key != *vk {
                return Ok(None);
            }
            let mut c = msg.xor(&pad(pk.key, self.ell))?;
            if let Some(f) = &pk.flip {
                c.xor_assign(f)?;
            }
            Ok(Some(c))
        }

        fn dec(&self, sk: &u64, ct: &Option<BitString>) -> Option<BitString> {
            let c = ct.as_ref()?;
            c.xor(&pad(*sk, self.ell)).ok()
        }

        fn is_bottom(&self, ct: &Option<BitString>) -> bool {
            ct.is_none()
        }
    }
}
