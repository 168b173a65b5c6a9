//! History-tape model: a discrete DES with an injective transition map.

use crate::des::{Alphabet, DesModel, Event, StateKey};
use crate::error::Error;
use crate::time::Time;

/// Upper bound on the tape length; keeps runaway durations from eating
/// memory one byte per base step.
const MAX_TAPE: usize = 1 << 20;

/// A model whose state records the disturbance history verbatim: one byte
/// per base step holding `1 + index(event fired at that step)`, after a
/// root tag byte. Distinct grid disturbance functions therefore reach
/// distinct states, which makes this the collision-free discrete oracle
/// for transition-set counting (a plain modular counter merges paths with
/// equal event sums).
///
/// The encoding respects the semigroup axiom exactly: a run of `s` steps
/// with event `p` appends the digit for `p` and then `s - 1` quiet digits,
/// so splitting a quiet stretch anywhere produces the same tape.
#[derive(Debug)]
pub struct HistoryDes {
    id: String,
    step: Time,
    alphabet: Alphabet,
}

impl HistoryDes {
    pub fn new(step: Time, alphabet: Alphabet) -> Result<HistoryDes, Error> {
        if step.is_zero() {
            return Err(Error::Domain("history step must be positive".into()));
        }
        if alphabet.len() > 250 {
            return Err(Error::Domain("history alphabet too large for digit bytes".into()));
        }
        let id = format!("history:step={step},alphabet={}", alphabet.spec_string());
        Ok(HistoryDes { id, step, alphabet })
    }

    /// The canonical root state: a bare tag byte, no recorded steps.
    pub fn root(&self, tag: u8) -> StateKey {
        StateKey::from_bytes(vec![tag])
    }

    fn digit(&self, event: Event) -> Result<u8, Error> {
        self.alphabet
            .values()
            .position(|e| e == event)
            .map(|i| i as u8 + 1)
            .ok_or_else(|| Error::Alphabet(format!("event {event} is not in the alphabet")))
    }
}

impl DesModel for HistoryDes {
    fn id(&self) -> &str {
        &self.id
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn base_step(&self) -> Time {
        self.step
    }

    fn output_arity(&self) -> usize {
        1
    }

    fn validate_state(&self, key: &StateKey) -> Result<(), Error> {
        let bytes = key.as_bytes();
        if bytes.is_empty() {
            return Err(Error::Codec("history keys need a root tag byte".into()));
        }
        for &b in &bytes[1..] {
            if b == 0 || b as usize > self.alphabet.len() {
                return Err(Error::Codec(format!("bad history digit {b}")));
            }
        }
        Ok(())
    }

    fn observe(&self, key: &StateKey) -> Result<Vec<f64>, Error> {
        self.validate_state(key)?;
        Ok(vec![(key.as_bytes().len() - 1) as f64])
    }

    fn parse_state(&self, literal: &str) -> Result<StateKey, Error> {
        let key = StateKey::parse_hex(literal)?;
        self.validate_state(&key)?;
        Ok(key)
    }

    fn format_state(&self, key: &StateKey) -> String {
        key.to_hex()
    }

    fn sample_state(&self, index: u64) -> StateKey {
        let mut bytes = vec![(index % 4) as u8];
        bytes.resize(1 + (index % 3) as usize, 1);
        StateKey::from_bytes(bytes)
    }

    fn phi(&self, steps: u64, state: &StateKey, event: Event) -> Result<StateKey, Error> {
        self.validate_state(state)?;
        let quiet = self.digit(Event::ZERO)?;
        let first = self.digit(event)?;
        let total = state.as_bytes().len().saturating_add(steps as usize);
        if total > MAX_TAPE {
            return Err(Error::Numerics("history tape limit exceeded".into()));
        }
        let mut bytes = Vec::with_capacity(total);
        bytes.extend_from_slice(state.as_bytes());
        bytes.push(first);
        for _ in 1..steps {
            bytes.push(quiet);
        }
        Ok(StateKey::from_bytes(bytes))
    }
}
