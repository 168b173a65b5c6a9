//! Executable model axioms.
//!
//! Checks that any [`DesModel`] implementation must pass: repeated
//! evaluation is byte-identical, quiet evolution composes exactly over
//! base-step splits, and a trace can be restarted from any intermediate
//! state key without changing a byte of the remaining transitions. The
//! last property is what makes STORE/LOAD checkpointing sound.

use crate::des::model::{DesModel, Event, StateKey};
use crate::des::scenario::{trace, Scenario};
use crate::error::Error;
use crate::time::Time;

/// Deterministic splitmix64 stream, enough randomness for axiom probes
/// without pulling an RNG dependency into the library.
pub(crate) fn splitmix(seed: &mut u64) -> u64 {
    *seed = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *seed;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn mismatch(what: &str, detail: String) -> Error {
    Error::Domain(format!("axiom violation ({what}): {detail}"))
}

/// phi is a pure function: evaluating the same run twice must agree byte
/// for byte.
pub fn check_purity(model: &dyn DesModel, state: &StateKey, steps: u64) -> Result<(), Error> {
    let dur = model.base_step().checked_mul(steps).unwrap();
    for event in model.alphabet().values() {
        let a = model.run(dur, state, event)?;
        let b = model.run(dur, state, event)?;
        if a != b {
            return Err(mismatch(
                "purity",
                format!("event {event} for {dur} gave {} then {}", a.to_hex(), b.to_hex()),
            ));
        }
    }
    Ok(())
}

/// Quiet evolution is a one-parameter semigroup on the base-step grid:
/// running `a + b` steps with no event equals running `a` then `b`.
pub fn check_quiescent_split(
    model: &dyn DesModel,
    state: &StateKey,
    total_steps: u64,
) -> Result<(), Error> {
    let base = model.base_step();
    let whole = model.run(base.checked_mul(total_steps).unwrap(), state, Event::ZERO)?;
    for a in 1..total_steps {
        let mid = model.run(base.checked_mul(a).unwrap(), state, Event::ZERO)?;
        let split = model.run(base.checked_mul(total_steps - a).unwrap(), &mid, Event::ZERO)?;
        if split != whole {
            return Err(mismatch(
                "quiescent split",
                format!("split at step {a} of {total_steps} diverged"),
            ));
        }
    }
    Ok(())
}

/// A trace restarted from any of its intermediate states reproduces the
/// remaining transitions exactly.
pub fn check_trace_splits(model: &dyn DesModel, scenario: &Scenario) -> Result<(), Error> {
    let full = trace(model, scenario)?;
    let runs = scenario.run_sequence();
    for cut in 1..runs.len() {
        let resumed = Scenario::from_runs(full[cut - 1].target.clone(), &runs[cut..])?;
        let suffix = trace(model, &resumed)?;
        if suffix.as_slice() != &full[cut..] {
            return Err(mismatch(
                "trace split",
                format!("resuming after run {cut} changed the suffix"),
            ));
        }
    }
    Ok(())
}

/// Zero-duration runs are rejected; the identity phi(0, x, u) = x is
/// enforced at the interface instead of being a computable case.
pub fn check_zero_duration_rejected(model: &dyn DesModel, state: &StateKey) -> Result<(), Error> {
    match model.run(Time::ZERO, state, Event::ZERO) {
        Err(Error::Step(_)) => Ok(()),
        Err(e) => Err(mismatch("zero duration", format!("wrong error {e}"))),
        Ok(_) => Err(mismatch("zero duration", "zero-length run accepted".into())),
    }
}

/// Deterministic random scenario rooted at one of the model's sample
/// states. Runs stay short so continuous models remain cheap to probe.
pub fn sample_scenario(model: &dyn DesModel, seed: u64) -> Scenario {
    let mut s = seed;
    let root = model.sample_state(splitmix(&mut s) % 8);
    let alphabet: Vec<Event> = model.alphabet().values().collect();
    let n_runs = 1 + (splitmix(&mut s) % 5) as usize;
    let mut runs = Vec::with_capacity(n_runs);
    for _ in 0..n_runs {
        let event = alphabet[(splitmix(&mut s) as usize) % alphabet.len()];
        let steps = 1 + splitmix(&mut s) % 3;
        runs.push((event, model.base_step().checked_mul(steps).unwrap()));
    }
    Scenario::from_runs(root, &runs).expect("non-empty run list")
}

/// Run the whole suite over `rounds` deterministic probes.
pub fn check_model(model: &dyn DesModel, rounds: u64) -> Result<(), Error> {
    let mut seed = 0x5eed_0000 ^ rounds;
    for round in 0..rounds {
        let state = model.sample_state(round % 16);
        check_purity(model, &state, 1 + round % 4)?;
        check_quiescent_split(model, &state, 2 + round % 4)?;
        check_zero_duration_rejected(model, &state)?;
        check_trace_splits(model, &sample_scenario(model, splitmix(&mut seed)))?;
    }
    Ok(())
}
