//! Scenarios, traces and transition sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::des::event_list::EventList;
use crate::des::model::{DesModel, Event, StateKey};
use crate::error::Error;
use crate::time::Time;

/// One simulation scenario: an initial state, a disturbance event list and
/// the tail duration simulated past the last entry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scenario {
    pub initial_state: StateKey,
    pub events: EventList,
    pub tail_duration: Time,
}

impl Scenario {
    pub fn new(initial_state: StateKey, events: EventList, tail_duration: Time) -> Scenario {
        Scenario { initial_state, events, tail_duration }
    }

    /// The run sequence realizing this scenario: each element is the event
    /// fired at the start of a run and the run's duration. A scenario with
    /// `h` entries yields `h + 1` runs; the final run carries the last
    /// event for the tail duration.
    pub fn run_sequence(&self) -> Vec<(Event, Time)> {
        let mut runs = Vec::with_capacity(self.events.entries().len() + 1);
        let mut pending = self.events.initial_event();
        for &(gap, value) in self.events.entries() {
            runs.push((pending, gap));
            pending = value;
        }
        runs.push((pending, self.tail_duration));
        runs
    }

    /// Rebuild a scenario from a root state and a non-empty run sequence;
    /// inverse of [`Scenario::run_sequence`].
    pub fn from_runs(initial_state: StateKey, runs: &[(Event, Time)]) -> Result<Scenario, Error> {
        let (&(first_event, _), rest0) = runs
            .split_first()
            .ok_or_else(|| Error::Domain("a scenario needs at least one run".into()))?;
        let mut entries = Vec::with_capacity(rest0.len());
        for i in 0..rest0.len() {
            // entry i pairs run i's duration with run i+1's event
            entries.push((runs[i].1, runs[i + 1].0));
        }
        let tail = runs.last().unwrap().1;
        Ok(Scenario {
            initial_state,
            events: EventList::new(first_event, entries)?,
            tail_duration: tail,
        })
    }

    /// Validate against a model: decodable initial state, events in the
    /// alphabet, every gap and the tail positive multiples of the base step.
    pub fn validate(&self, model: &dyn DesModel) -> Result<(), Error> {
        model.validate_state(&self.initial_state)?;
        self.events.check_alphabet(model.alphabet())?;
        let base = model.base_step();
        for &(gap, _) in self.events.entries() {
            if gap.steps_on(base).map(|s| s == 0).unwrap_or(true) {
                return Err(Error::Step(format!(
                    "gap {gap} is not a positive multiple of the base step {base}"
                )));
            }
        }
        if self.tail_duration.steps_on(base).map(|s| s == 0).unwrap_or(true) {
            return Err(Error::Step(format!(
                "tail duration {} is not a positive multiple of the base step {base}",
                self.tail_duration
            )));
        }
        Ok(())
    }
}

/// One simulated step: source state, the event fired at its start, the run
/// duration and the resulting state.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateKey,
    pub event: Event,
    pub duration: Time,
    pub target: StateKey,
}

impl fmt::Debug for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} --{}/{}--> {})",
            self.source.to_hex(),
            self.event,
            self.duration,
            self.target.to_hex()
        )
    }
}

/// Duplicate-free set of transitions with a canonical iteration order
/// (source bytes, event, duration, target bytes).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransitionSet(BTreeSet<Transition>);

impl TransitionSet {
    pub fn new() -> TransitionSet {
        TransitionSet::default()
    }

    /// Insert a transition; returns false if it was already present.
    pub fn insert(&mut self, t: Transition) -> bool {
        self.0.insert(t)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, t: &Transition) -> bool {
        self.0.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.0.iter()
    }

    pub fn union_with(&mut self, other: &TransitionSet) {
        for t in other.iter() {
            self.0.insert(t.clone());
        }
    }
}

impl FromIterator<Transition> for TransitionSet {
    fn from_iter<I: IntoIterator<Item = Transition>>(iter: I) -> Self {
        TransitionSet(iter.into_iter().collect())
    }
}

/// Simulate a scenario and return its trace: one transition per run, in
/// order. The trace length is the number of entries plus one.
pub fn trace(model: &dyn DesModel, scenario: &Scenario) -> Result<Vec<Transition>, Error> {
    scenario.validate(model)?;
    let mut state = scenario.initial_state.clone();
    let runs = scenario.run_sequence();
    let mut out = Vec::with_capacity(runs.len());
    for (event, duration) in runs {
        let target = model.run(duration, &state, event)?;
        out.push(Transition { source: state.clone(), event, duration, target: target.clone() });
        state = target;
    }
    Ok(out)
}

/// Collapse a trace into its transition set.
pub fn transition_set(trace: &[Transition]) -> TransitionSet {
    trace.iter().cloned().collect()
}
