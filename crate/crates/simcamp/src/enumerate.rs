//! Bounded enumeration of admissible disturbance sequences.
//!
//! A disturbance sequence over horizon `T` and quantum `tau` assigns one
//! alphabet value to each grid slot `tau, 2*tau, ..., T`; value 0 means no
//! event at that slot. Slot vectors are enumerated in lexicographic order
//! (leftmost slot most significant, values in ascending alphabet order),
//! filtered through the admissibility constraints, and emitted as
//! canonical scenarios: zero slots disappear into run durations and every
//! scenario is simulated for one quantum past its last event.

use std::fmt;
use std::sync::Arc;

use crate::des::{Alphabet, Event, EventList, Scenario, StateKey};
use crate::error::Error;
use crate::time::Time;

/// Mask width above which the window-aware counting table is abandoned in
/// favor of counting the stream.
const MAX_DP_WINDOW_BITS: usize = 24;

/// One admissibility constraint over an event list.
#[derive(Clone)]
pub enum AdmissibilityConstraint {
    /// At most `count` events within any window of the given length.
    MaxEventsInWindow { window: Time, count: usize },
    /// Consecutive events at least `gap` apart.
    MinGap { gap: Time },
    /// At most `count` events in total.
    MaxTotalEvents { count: usize },
    /// Arbitrary named predicate; admissible when it returns true.
    Custom {
        name: String,
        predicate: Arc<dyn Fn(&EventList) -> bool + Send + Sync>,
    },
}

impl fmt::Debug for AdmissibilityConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibilityConstraint::MaxEventsInWindow { window, count } => {
                write!(f, "MaxEventsInWindow({window}, {count})")
            }
            AdmissibilityConstraint::MinGap { gap } => write!(f, "MinGap({gap})"),
            AdmissibilityConstraint::MaxTotalEvents { count } => {
                write!(f, "MaxTotalEvents({count})")
            }
            AdmissibilityConstraint::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl AdmissibilityConstraint {
    pub fn custom(
        name: impl Into<String>,
        predicate: impl Fn(&EventList) -> bool + Send + Sync + 'static,
    ) -> AdmissibilityConstraint {
        AdmissibilityConstraint::Custom { name: name.into(), predicate: Arc::new(predicate) }
    }

    /// Does `list` satisfy this constraint?
    pub fn admits(&self, list: &EventList) -> bool {
        let times: Vec<Time> = list.impulses().iter().map(|&(t, _)| t).collect();
        match self {
            AdmissibilityConstraint::MaxEventsInWindow { window, count } => {
                // every length-w window holds <= k events iff the forward
                // window anchored at each event does
                times.iter().enumerate().all(|(i, &t)| {
                    let end = t.checked_add(*window).expect("window end overflow");
                    times[i..].iter().take_while(|&&u| u < end).count() <= *count
                })
            }
            AdmissibilityConstraint::MinGap { gap } => times
                .windows(2)
                .all(|pair| pair[1].checked_sub(pair[0]).map(|d| d >= *gap).unwrap_or(false)),
            AdmissibilityConstraint::MaxTotalEvents { count } => times.len() <= *count,
            AdmissibilityConstraint::Custom { predicate, .. } => predicate(list),
        }
    }
}

/// A bounded enumeration problem: which disturbance sequences to generate
/// and from which initial state they are simulated.
#[derive(Clone, Debug)]
pub struct EnumerationSpec {
    pub initial_state: StateKey,
    pub alphabet: Alphabet,
    pub horizon: Time,
    pub quantum: Time,
    pub constraints: Vec<AdmissibilityConstraint>,
}

impl EnumerationSpec {
    pub fn new(
        initial_state: StateKey,
        alphabet: Alphabet,
        horizon: Time,
        quantum: Time,
    ) -> EnumerationSpec {
        EnumerationSpec { initial_state, alphabet, horizon, quantum, constraints: Vec::new() }
    }

    /// Check the structural invariants: a positive horizon divisible by
    /// the quantum and window and gap lengths that are positive quantum
    /// multiples. The quiet value 0 is an [`Alphabet`] invariant already.
    pub fn validate(&self) -> Result<(), Error> {
        if self.quantum.is_zero() {
            return Err(Error::Domain("quantum must be positive".into()));
        }
        match self.horizon.steps_on(self.quantum) {
            Some(slots) if slots > 0 => {}
            _ => {
                return Err(Error::Domain(format!(
                    "horizon {} is not a positive multiple of the quantum {}",
                    self.horizon, self.quantum
                )))
            }
        }
        for c in &self.constraints {
            let span = match c {
                AdmissibilityConstraint::MaxEventsInWindow { window, .. } => Some(*window),
                AdmissibilityConstraint::MinGap { gap } => Some(*gap),
                _ => None,
            };
            if let Some(span) = span {
                if span.steps_on(self.quantum).map(|s| s == 0).unwrap_or(true) {
                    return Err(Error::Domain(format!(
                        "constraint span {span} is not a positive multiple of the quantum {}",
                        self.quantum
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of event slots, `T / tau`.
    pub fn slot_count(&self) -> usize {
        self.horizon.steps_on(self.quantum).unwrap_or(0) as usize
    }

    /// Does `list` satisfy every constraint?
    pub fn admits(&self, list: &EventList) -> bool {
        self.constraints.iter().all(|c| c.admits(list))
    }

    /// Stream of all admissible scenarios in enumeration order.
    pub fn scenarios(&self) -> Result<ScenarioStream<'_>, Error> {
        self.validate()?;
        Ok(ScenarioStream::new(self, None))
    }

    /// Sub-stream of scenarios whose first slot holds `leading`; the
    /// blocks for ascending alphabet values partition the full stream
    /// into contiguous ranges.
    pub fn block(&self, leading: Event) -> Result<ScenarioStream<'_>, Error> {
        self.validate()?;
        let index = self
            .alphabet
            .values()
            .position(|e| e == leading)
            .ok_or_else(|| Error::Alphabet(format!("event {leading} is not in the alphabet")))?;
        Ok(ScenarioStream::new(self, Some(index)))
    }

    /// Leading-slot values in block order.
    pub fn block_values(&self) -> Vec<Event> {
        self.alphabet.values().collect()
    }

    /// Number of admissible scenarios, computed without materializing the
    /// stream where possible. A slot-indexed counting table handles the
    /// window, gap and total constraints; a custom predicate (or a window
    /// too wide to tabulate) falls back to counting the stream.
    pub fn count_admissible(&self) -> Result<u128, Error> {
        self.validate()?;
        let mut window_checks: Vec<(usize, usize)> = Vec::new();
        let mut gap_slots = 0usize;
        let mut total_cap = usize::MAX;
        for c in &self.constraints {
            match c {
                AdmissibilityConstraint::MaxEventsInWindow { window, count } => {
                    let slots = window.steps_on(self.quantum).unwrap() as usize;
                    window_checks.push((slots, *count));
                }
                AdmissibilityConstraint::MinGap { gap } => {
                    let slots = gap.steps_on(self.quantum).unwrap() as usize;
                    gap_slots = gap_slots.max(slots);
                }
                AdmissibilityConstraint::MaxTotalEvents { count } => {
                    total_cap = total_cap.min(*count);
                }
                AdmissibilityConstraint::Custom { .. } => {
                    return Ok(self.scenarios()?.count() as u128);
                }
            }
        }
        let mask_bits = window_checks.iter().map(|&(m, _)| m - 1).max().unwrap_or(0);
        if mask_bits > MAX_DP_WINDOW_BITS {
            return Ok(self.scenarios()?.count() as u128);
        }
        self.count_by_table(&window_checks, mask_bits, gap_slots, total_cap)
    }

    /// Slot-by-slot counting. The table key is (occupancy of the last
    /// `mask_bits` slots, slots since the last event capped at the gap,
    /// events so far capped at the total); all nonzero alphabet values
    /// are interchangeable under these constraints, so an event slot
    /// multiplies by their number.
    fn count_by_table(
        &self,
        window_checks: &[(usize, usize)],
        mask_bits: usize,
        gap_slots: usize,
        total_cap: usize,
    ) -> Result<u128, Error> {
        use std::collections::BTreeMap;
        type Key = (u32, usize, usize);
        let overflow = || Error::Numerics("admissible scenario count overflows u128".into());
        let wmask: u32 = if mask_bits == 0 { 0 } else { (1u32 << mask_bits) - 1 };
        let event_ways = (self.alphabet.len() - 1) as u128;
        let total_cap = total_cap.min(self.slot_count());
        let mut table: BTreeMap<Key, u128> = BTreeMap::new();
        // before any slot: empty history, no gap pressure, no events
        table.insert((0, gap_slots, 0), 1);
        for _ in 0..self.slot_count() {
            let mut next: BTreeMap<Key, u128> = BTreeMap::new();
            let mut add = |key: Key, n: u128| -> Result<(), Error> {
                let slot = next.entry(key).or_insert(0);
                *slot = slot.checked_add(n).ok_or_else(overflow)?;
                Ok(())
            };
            for (&(mask, age, total), &n) in &table {
                // quiet slot
                add(((mask << 1) & wmask, (age + 1).min(gap_slots), total), n)?;
                // event slot, if every constraint allows one here
                // the event being placed joins the occupancy of the last
                // m-1 slots, so that occupancy must stay under k
                let window_ok = window_checks.iter().all(|&(m, k)| {
                    let recent = if m == 1 { 0 } else { mask & ((1u32 << (m - 1)) - 1) };
                    (recent.count_ones() as usize) < k
                });
                if window_ok && age >= gap_slots && total < total_cap {
                    let weight = n.checked_mul(event_ways).ok_or_else(overflow)?;
                    add((((mask << 1) | 1) & wmask, 1.min(gap_slots), total + 1), weight)?;
                }
            }
            table = next;
        }
        let mut sum: u128 = 0;
        for &n in table.values() {
            sum = sum.checked_add(n).ok_or_else(overflow)?;
        }
        Ok(sum)
    }
}

/// Streaming enumerator over admissible scenarios; see
/// [`EnumerationSpec::scenarios`].
pub struct ScenarioStream<'a> {
    spec: &'a EnumerationSpec,
    values: Vec<Event>,
    /// Alphabet index per slot; `None` once exhausted.
    digits: Option<Vec<usize>>,
    /// Leading slots excluded from the odometer (0 or 1).
    pinned: usize,
}

impl<'a> ScenarioStream<'a> {
    fn new(spec: &'a EnumerationSpec, leading: Option<usize>) -> ScenarioStream<'a> {
        let mut digits = vec![0; spec.slot_count()];
        let mut pinned = 0;
        if let Some(index) = leading {
            digits[0] = index;
            pinned = 1;
        }
        ScenarioStream { spec, values: spec.alphabet.values().collect(), digits: Some(digits), pinned }
    }

    fn current_list(&self) -> EventList {
        let digits = self.digits.as_ref().expect("stream exhausted");
        let mut impulses = Vec::new();
        for (slot, &di) in digits.iter().enumerate() {
            let value = self.values[di];
            if !value.is_zero() {
                let at = self
                    .spec
                    .quantum
                    .checked_mul((slot + 1) as u64)
                    .expect("slot time overflow");
                impulses.push((at, value));
            }
        }
        EventList::from_impulses(&impulses, &self.spec.alphabet)
            .expect("slot vectors are canonical by construction")
    }

    fn advance(&mut self) {
        let Some(digits) = self.digits.as_mut() else { return };
        for i in (self.pinned..digits.len()).rev() {
            if digits[i] + 1 < self.values.len() {
                digits[i] += 1;
                for d in digits.iter_mut().skip(i + 1) {
                    *d = 0;
                }
                return;
            }
        }
        self.digits = None;
    }
}

impl Iterator for ScenarioStream<'_> {
    type Item = Scenario;

    fn next(&mut self) -> Option<Scenario> {
        while self.digits.is_some() {
            let list = self.current_list();
            self.advance();
            if self.spec.admits(&list) {
                return Some(Scenario::new(
                    self.spec.initial_state.clone(),
                    list,
                    self.spec.quantum,
                ));
            }
        }
        None
    }
}
