//! Modular counter model.

use crate::des::{Alphabet, DesModel, Event, StateKey};
use crate::error::Error;
use crate::time::Time;

/// Counter over Z_N with integer events: a run of `s` base steps carrying
/// event `p` maps `k` to `(k + p + s) mod N`. Cheap, exact, and the
/// workhorse for randomized campaign tests.
#[derive(Debug)]
pub struct CounterDes {
    id: String,
    modulus: u64,
    step: Time,
    alphabet: Alphabet,
}

impl CounterDes {
    pub fn new(modulus: u64, step: Time, alphabet: Alphabet) -> Result<CounterDes, Error> {
        if modulus < 2 {
            return Err(Error::Domain("counter modulus must be at least 2".into()));
        }
        if step.is_zero() {
            return Err(Error::Domain("counter step must be positive".into()));
        }
        for e in alphabet.values() {
            if e.value().fract() != 0.0 {
                return Err(Error::Domain(format!(
                    "counter alphabet values must be integers, got {e}"
                )));
            }
        }
        let id = format!(
            "counter:N={modulus},step={step},alphabet={}",
            alphabet.spec_string()
        );
        Ok(CounterDes { id, modulus, step, alphabet })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn encode(&self, k: u64) -> StateKey {
        StateKey::from_bytes(k.to_le_bytes().to_vec())
    }

    pub fn decode(&self, key: &StateKey) -> Result<u64, Error> {
        let bytes: [u8; 8] = key
            .as_bytes()
            .try_into()
            .map_err(|_| Error::Codec("counter keys are 8 bytes".into()))?;
        let k = u64::from_le_bytes(bytes);
        if k >= self.modulus {
            return Err(Error::Codec(format!(
                "counter value {k} outside modulus {}",
                self.modulus
            )));
        }
        Ok(k)
    }
}

impl DesModel for CounterDes {
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
        self.decode(key).map(|_| ())
    }

    fn observe(&self, key: &StateKey) -> Result<Vec<f64>, Error> {
        Ok(vec![self.decode(key)? as f64])
    }

    fn parse_state(&self, literal: &str) -> Result<StateKey, Error> {
        let k: u64 = literal
            .trim()
            .parse()
            .map_err(|_| Error::Codec(format!("bad counter literal {literal:?}")))?;
        let key = self.encode(k);
        self.decode(&key)?;
        Ok(key)
    }

    fn format_state(&self, key: &StateKey) -> String {
        match self.decode(key) {
            Ok(k) => k.to_string(),
            Err(_) => key.to_hex(),
        }
    }

    fn sample_state(&self, index: u64) -> StateKey {
        self.encode(index % self.modulus)
    }

    fn phi(&self, steps: u64, state: &StateKey, event: Event) -> Result<StateKey, Error> {
        let k = self.decode(state)?;
        let sum = k as i128 + event.value() as i128 + (steps % self.modulus) as i128;
        Ok(self.encode(sum.rem_euclid(self.modulus as i128) as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counter(n: u64) -> CounterDes {
        CounterDes::new(n, Time::from_secs(1), Alphabet::new([0.0, 1.0, 2.0]).unwrap()).unwrap()
    }

    #[test]
    fn adds_event_and_steps_mod_n() {
        let c = counter(7);
        let next = c.run(Time::from_secs(1), &c.encode(2), Event::new(1.0).unwrap()).unwrap();
        assert_eq!(c.decode(&next).unwrap(), 4);
        let wrapped = c.run(Time::from_secs(3), &c.encode(5), Event::new(2.0).unwrap()).unwrap();
        assert_eq!(c.decode(&wrapped).unwrap(), (5 + 2 + 3) % 7);
    }

    #[test]
    fn split_associativity_over_all_small_moduli() {
        // (k + p + a) + b == k + p + (a + b) mod N, exactly, for all splits
        for n in 2..=16 {
            let c = counter(n);
            for k in 0..n {
                for total in 2..=6u64 {
                    for a in 1..total {
                        for p in [0.0, 1.0, 2.0] {
                            let e = Event::new(p).unwrap();
                            let whole = c
                                .run(Time::from_secs(total), &c.encode(k), e)
                                .unwrap();
                            let mid = c.run(Time::from_secs(a), &c.encode(k), e).unwrap();
                            let split =
                                c.run(Time::from_secs(total - a), &mid, Event::ZERO).unwrap();
                            assert_eq!(whole, split, "N={n} k={k} p={p} split {a}/{total}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn literals_round_trip() {
        let c = counter(7);
        let key = c.parse_state("5").unwrap();
        assert_eq!(c.format_state(&key), "5");
        assert!(c.parse_state("7").is_err());
        assert!(c.parse_state("x").is_err());
    }

    #[test]
    fn non_integer_alphabet_rejected() {
        let a = Alphabet::new([0.0, 0.5]).unwrap();
        assert!(CounterDes::new(7, Time::from_secs(1), a).is_err());
    }
}
