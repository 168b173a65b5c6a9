//! Event values, alphabets, state keys and the model interface.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::time::Time;

/// A single impulse magnitude. Finite f64 with a total order; negative
/// zero is normalized away so byte-level identities hold.
#[derive(Clone, Copy)]
pub struct Event(f64);

impl Event {
    pub const ZERO: Event = Event(0.0);

    pub fn new(value: f64) -> Result<Event, Error> {
        if !value.is_finite() {
            return Err(Error::Domain(format!("event value {value} is not finite")));
        }
        // collapse -0.0 so bit-level comparison agrees with == on zeros
        Ok(Event(if value == 0.0 { 0.0 } else { value }))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    pub fn parse(text: &str) -> Result<Event, Error> {
        let v: f64 = text
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad event value {text:?}")))?;
        Event::new(v)
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == std::cmp::Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::hash::Hash for Event {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // shortest representation that parses back to the same bits
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Finite set of admissible event values. Always contains 0 (the quiet
/// event), so every run can also be a plain passage of time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet(BTreeSet<Event>);

impl Alphabet {
    pub fn new(values: impl IntoIterator<Item = f64>) -> Result<Alphabet, Error> {
        let mut set = BTreeSet::new();
        for v in values {
            set.insert(Event::new(v)?);
        }
        if set.is_empty() {
            return Err(Error::Domain("alphabet must not be empty".into()));
        }
        if !set.contains(&Event::ZERO) {
            return Err(Error::Domain("alphabet must contain 0".into()));
        }
        Ok(Alphabet(set))
    }

    pub fn contains(&self, e: Event) -> bool {
        self.0.contains(&e)
    }

    /// Values in ascending order.
    pub fn values(&self) -> impl Iterator<Item = Event> + '_ {
        self.0.iter().copied()
    }

    /// Non-quiet values in ascending order.
    pub fn nonzero_values(&self) -> impl Iterator<Item = Event> + '_ {
        self.0.iter().copied().filter(|e| !e.is_zero())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn require(&self, e: Event) -> Result<(), Error> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::Alphabet(format!("event {e} is not in the alphabet")))
        }
    }

    /// Pipe-separated value list as it appears in model ids and spec files,
    /// e.g. `-1|0|1`. Inverse of [`Alphabet::parse_spec`].
    pub fn spec_string(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        parts.join("|")
    }

    pub fn parse_spec(text: &str) -> Result<Alphabet, Error> {
        let mut values = Vec::new();
        for part in text.split('|') {
            values.push(Event::parse(part)?.value());
        }
        Alphabet::new(values)
    }
}

/// Canonical byte encoding of a model state. Two keys are the same state
/// exactly when their bytes are equal; ordering is lexicographic on the
/// bytes, which fixes the canonical order of transition dumps.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateKey(Arc<[u8]>);

impl StateKey {
    pub fn from_bytes(bytes: Vec<u8>) -> StateKey {
        StateKey(bytes.into())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(2 * self.0.len());
        for b in self.0.iter() {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    pub fn parse_hex(text: &str) -> Result<StateKey, Error> {
        let text = text.trim();
        if !text.len().is_multiple_of(2) {
            return Err(Error::Codec(format!("odd-length hex key {text:?}")));
        }
        let mut bytes = Vec::with_capacity(text.len() / 2);
        for i in (0..text.len()).step_by(2) {
            let b = u8::from_str_radix(&text[i..i + 2], 16)
                .map_err(|_| Error::Codec(format!("bad hex key {text:?}")))?;
            bytes.push(b);
        }
        Ok(StateKey::from_bytes(bytes))
    }
}

impl fmt::Debug for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateKey({})", self.to_hex())
    }
}

/// A deterministic discrete event system model.
///
/// The engine never sees decoded states; it exchanges opaque [`StateKey`]s
/// with the model and relies on byte equality for all set semantics. The
/// provided [`DesModel::run`] wrapper performs the shared validation
/// (alphabet membership, positive grid-aligned duration) before invoking
/// the transition function.
pub trait DesModel: Send + Sync {
    /// Registry identifier this model was built from, echoed into files.
    fn id(&self) -> &str;

    fn alphabet(&self) -> &Alphabet;

    /// Duration quantum. Run durations must be positive multiples of it.
    fn base_step(&self) -> Time;

    /// Number of components in the observation vector.
    fn output_arity(&self) -> usize;

    /// Check that a key decodes to a valid state of this model.
    fn validate_state(&self, key: &StateKey) -> Result<(), Error>;

    /// Observation function applied to a state.
    fn observe(&self, key: &StateKey) -> Result<Vec<f64>, Error>;

    /// Parse a model-specific state literal (decimal for discrete models,
    /// hex bit pattern or comma-separated decimals for continuous ones).
    fn parse_state(&self, literal: &str) -> Result<StateKey, Error>;

    /// Lossless literal for a valid key; inverse of [`DesModel::parse_state`].
    fn format_state(&self, key: &StateKey) -> String;

    /// Deterministic family of representative states, used by the axiom
    /// suite and property tests.
    fn sample_state(&self, index: u64) -> StateKey;

    /// Transition function over whole base steps. `steps >= 1` is
    /// guaranteed by [`DesModel::run`]; the event fires at the start of the
    /// interval and the model then evolves for the full duration.
    fn phi(&self, steps: u64, state: &StateKey, event: Event) -> Result<StateKey, Error>;

    /// Validated transition: `duration` must be a positive multiple of the
    /// base step and `event` a member of the alphabet.
    fn run(&self, duration: Time, state: &StateKey, event: Event) -> Result<StateKey, Error> {
        self.alphabet().require(event)?;
        let steps = duration.steps_on(self.base_step()).ok_or_else(|| {
            Error::Step(format!(
                "duration {duration} is not a multiple of the base step {}",
                self.base_step()
            ))
        })?;
        if steps == 0 {
            return Err(Error::Step("run duration must be positive".into()));
        }
        self.validate_state(state)?;
        self.phi(steps, state, event)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_requires_zero() {
        assert!(Alphabet::new([1.0, 2.0]).is_err());
        assert!(Alphabet::new([]).is_err());
        let a = Alphabet::new([0.0, 1.0, 2.0]).unwrap();
        assert!(a.contains(Event::new(1.0).unwrap()));
        assert!(!a.contains(Event::new(3.0).unwrap()));
    }

    #[test]
    fn negative_zero_collapses() {
        let a = Event::new(0.0).unwrap();
        let b = Event::new(-0.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_string(), "0");
    }

    #[test]
    fn events_reject_non_finite() {
        assert!(Event::new(f64::NAN).is_err());
        assert!(Event::new(f64::INFINITY).is_err());
    }

    #[test]
    fn alphabet_spec_round_trip() {
        let a = Alphabet::new([0.0, -1.0, 1.5]).unwrap();
        assert_eq!(a.spec_string(), "-1|0|1.5");
        assert_eq!(Alphabet::parse_spec("-1|0|1.5").unwrap(), a);
        assert!(Alphabet::parse_spec("1|2").is_err());
    }

    #[test]
    fn state_key_hex_round_trip() {
        let k = StateKey::from_bytes(vec![0, 16, 255]);
        assert_eq!(k.to_hex(), "0010ff");
        assert_eq!(StateKey::parse_hex("0010ff").unwrap(), k);
        assert!(StateKey::parse_hex("0x1").is_err());
    }
}
