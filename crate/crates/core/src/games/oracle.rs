use qsim::BitString;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scheme::Qpke;
use crate::wire::Wire;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryRecord {
    /// `dec` or `renc`.
    pub oracle: &'static str,
    /// Before or after the challenge.
    pub phase: u8,
    /// The query was the challenge itself.
    pub refused: bool,
    /// Decrypted message, or the ciphertext size for `renc`; `None` is ⊥.
    pub answer: Option<String>,
}

/// Classical decryption oracle. After [`set_challenge`](Self::set_challenge)
/// it answers ⊥ on byte-equal copies of the challenge.
pub struct DecOracle<'a, S: Qpke> {
    scheme: &'a S,
    sk: &'a S::SecretKey,
    challenge: Option<Vec<u8>>,
    budget: Option<usize>,
    used: usize,
}

impl<'a, S: Qpke> DecOracle<'a, S> {
    pub fn new(scheme: &'a S, sk: &'a S::SecretKey, budget: Option<usize>) -> Self {
        DecOracle {
            scheme,
            sk,
            challenge: None,
            budget,
            used: 0,
        }
    }

    fn query(&mut self, ct: &S::Ciphertext, log: &mut Vec<QueryRecord>) -> Result<Option<BitString>> {
        if self.budget.is_some_and(|b| self.used >= b) {
            return Err(Error::Protocol(format!("decryption budget of {} exceeded", self.used)));
        }
        self.used += 1;
        let refused = self.challenge.as_deref().is_some_and(|c| c == ct.to_wire().as_slice());
        let answer = if refused { None } else { self.scheme.dec(self.sk, ct) };
        log.push(QueryRecord {
            oracle: "dec",
            phase: if self.challenge.is_some() { 2 } else { 1 },
            refused,
            answer: answer.as_ref().map(ToString::to_string),
        });
        Ok(answer)
    }
}

type RencFn<'a, C> = Box<dyn FnMut(&BitString) -> Result<C> + 'a>;

/// The oracles a game grants; calling one that is absent is a protocol
/// violation.
pub struct Oracles<'a, S: Qpke> {
    dec: Option<DecOracle<'a, S>>,
    renc: Option<RencFn<'a, S::Ciphertext>>,
    log: Vec<QueryRecord>,
}

impl<'a, S: Qpke> Oracles<'a, S> {
    pub fn new(dec: Option<DecOracle<'a, S>>) -> Self {
        Oracles { dec, renc: None, log: Vec::new() }
    }

    pub fn with_renc(renc: RencFn<'a, S::Ciphertext>) -> Self {
        Oracles {
            dec: None,
            renc: Some(renc),
            log: Vec::new(),
        }
    }

    pub fn has_dec(&self) -> bool {
        self.dec.is_some()
    }

    pub fn decrypt(&mut self, ct: &S::Ciphertext) -> Result<Option<BitString>> {
        match &mut self.dec {
            Some(o) => o.query(ct, &mut self.log),
            None => Err(Error::Protocol("no decryption oracle in this game".into())),
        }
    }

    pub fn encrypt(&mut self, msg: &BitString) -> Result<S::Ciphertext> {
        let f = self
            .renc
            .as_mut()
            .ok_or_else(|| Error::Protocol("no encryption oracle in this game".into()))?;
        let ct = f(msg)?;
        self.log.push(QueryRecord {
            oracle: "renc",
            phase: 2,
            refused: false,
            answer: Some(format!("{} bytes", ct.to_wire().len())),
        });
        Ok(ct)
    }

    pub(crate) fn set_challenge(&mut self, bytes: Vec<u8>) {
        if let Some(o) = &mut self.dec {
            o.challenge = Some(bytes);
        }
    }

    pub fn into_log(self) -> Vec<QueryRecord> {
        self.log
    }
}
