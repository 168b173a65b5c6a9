//! Simulation-campaign engine and bounded scenario verifier for discrete
//! event system (DES) models.
//!
//! The crate is organized around a small semantic core: a [`des::DesModel`]
//! evolves opaque state keys under timed runs carrying a single impulse
//! event, a [`des::Scenario`] describes one disturbance sequence from an
//! initial state, and the transitions produced by simulating scenarios or
//! campaigns are collected into canonical [`des::TransitionSet`]s. Campaign
//! programs (`LOAD`/`STORE`/`FREE`/`RUN`) are executed by [`engine`],
//! rewritten and compared by [`algebra`], and generated in bulk by
//! [`enumerate`] + [`verify`] for bounded safety checks.

pub mod algebra;
pub mod des;
pub mod engine;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod models;
pub mod time;
pub mod verify;

pub use des::{Alphabet, DesModel, Event, EventList, Scenario, StateKey, Transition, TransitionSet};
pub use engine::{Campaign, Command, ExecutionRecord, SimulatorState};
pub use error::Error;
pub use time::Time;
