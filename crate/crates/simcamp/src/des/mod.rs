//! Discrete event system core: events, alphabets, state keys, event lists,
//! scenarios, traces and the model interface.

mod event_list;
mod model;
mod scenario;

pub mod axioms;

pub use event_list::EventList;
pub use model::{Alphabet, DesModel, Event, StateKey};
pub use scenario::{trace, transition_set, Scenario, Transition, TransitionSet};
