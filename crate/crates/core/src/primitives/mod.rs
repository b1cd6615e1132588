//! Classical and token-based building blocks.

pub mod hash;
pub mod prf;
pub mod sig;
pub mod ske;
pub mod tmac;

pub use prf::{prf_eval, PrfKey};
pub use sig::{sig_gen, sig_sign, sig_verify, SigKeyPair, SigParams, SigningKey, VerifyingKey};
pub use ske::{ske_dec, ske_enc, ske_enc_with_nonce, SkeCiphertext, SkeKey, SkeMode};
pub use tmac::{tmac_keygen, tmac_sign, tmac_token, tmac_verify, TmacKey, TmacParams, TmacSignature, TmacToken};
