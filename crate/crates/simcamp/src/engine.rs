//! Simulator state, campaign commands and campaign execution.
//!
//! A campaign is a straight-line script over four commands. `RUN` advances
//! the model and is the only command that produces a transition; `STORE`,
//! `LOAD` and `FREE` manage a label-to-state memory so that shared work can
//! be checkpointed and resumed instead of re-simulated.
//!
//! Memory is semantically a set of states. Labels are pure names for its
//! elements, so the engine keeps the map injective: a label always refers
//! to one state and a state is stored under at most one label. Execution
//! aborts at the first failing command; campaigns are proof scripts and a
//! failure invalidates everything after it.

use std::collections::BTreeMap;
use std::fmt;

use crate::des::{DesModel, Event, StateKey, Transition, TransitionSet};
use crate::error::Error;
use crate::time::Time;

/// Label under which a simulator's initial state is always reachable.
pub const INIT_LABEL: &str = "init";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Load(String),
    Store(String),
    Free(String),
    Run { event: Event, duration: Time },
}

impl Command {
    pub fn run(event: Event, duration: Time) -> Command {
        Command::Run { event, duration }
    }

    pub fn is_run(&self) -> bool {
        matches!(self, Command::Run { .. })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Load(l) => write!(f, "LOAD {l}"),
            Command::Store(l) => write!(f, "STORE {l}"),
            Command::Free(l) => write!(f, "FREE {l}"),
            Command::Run { event, duration } => write!(f, "RUN {event} {duration}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulatorState {
    pub current: StateKey,
    pub memory: BTreeMap<String, StateKey>,
}

impl SimulatorState {
    /// Label already naming `key` in memory, if any.
    pub fn label_of(&self, key: &StateKey) -> Option<&str> {
        self.memory
            .iter()
            .find(|(_, v)| *v == key)
            .map(|(l, _)| l.as_str())
    }

    /// Execute one command in place. `RUN` returns its transition; the
    /// other commands return `None`.
    pub fn apply(
        &mut self,
        model: &dyn DesModel,
        cmd: &Command,
    ) -> Result<Option<Transition>, Error> {
        match cmd {
            Command::Load(l) => {
                let state = self
                    .memory
                    .get(l)
                    .ok_or_else(|| Error::Memory(format!("LOAD {l}: label not in memory")))?;
                self.current = state.clone();
                Ok(None)
            }
            Command::Free(l) => {
                self.memory
                    .remove(l)
                    .ok_or_else(|| Error::Memory(format!("FREE {l}: label not in memory")))?;
                Ok(None)
            }
            Command::Store(l) => {
                match self.memory.get(l) {
                    Some(bound) if *bound == self.current => {} // set semantics: no-op
                    Some(_) => {
                        return Err(Error::Label(format!(
                            "STORE {l}: label already bound to a different state"
                        )))
                    }
                    None => {
                        if let Some(existing) = self.label_of(&self.current) {
                            return Err(Error::Label(format!(
                                "STORE {l}: state already stored under label {existing}; \
                                 reuse that label"
                            )));
                        }
                        self.memory.insert(l.clone(), self.current.clone());
                    }
                }
                Ok(None)
            }
            Command::Run { event, duration } => {
                let target = model.run(*duration, &self.current, *event)?;
                let transition = Transition {
                    source: self.current.clone(),
                    event: *event,
                    duration: *duration,
                    target: target.clone(),
                };
                self.current = target;
                Ok(Some(transition))
            }
        }
    }
}

/// Fresh simulator whose memory holds exactly the initial state under
/// [`INIT_LABEL`].
pub fn new_simulator(model: &dyn DesModel, x0: StateKey) -> Result<SimulatorState, Error> {
    model.validate_state(&x0)?;
    let mut memory = BTreeMap::new();
    memory.insert(INIT_LABEL.to_string(), x0.clone());
    Ok(SimulatorState { current: x0, memory })
}

/// An initial simulator configuration plus a finite command script.
///
/// The initial memory always binds [`INIT_LABEL`] to the initial state;
/// further roots can be registered with [`Campaign::bind_root`], which
/// preserves the injective label-state invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Campaign {
    name: String,
    init: StateKey,
    memory: Vec<(String, StateKey)>,
    commands: Vec<Command>,
}

impl Campaign {
    pub fn new(name: impl Into<String>, init: StateKey) -> Campaign {
        let memory = vec![(INIT_LABEL.to_string(), init.clone())];
        Campaign { name: name.into(), init, memory, commands: Vec::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn init_state(&self) -> &StateKey {
        &self.init
    }

    /// Initial memory bindings in registration order.
    pub fn memory(&self) -> &[(String, StateKey)] {
        &self.memory
    }

    pub fn commands(&self) -> &[Command] {
        &self.commands
    }

    pub fn push(&mut self, cmd: Command) {
        self.commands.push(cmd);
    }

    pub fn run_count(&self) -> usize {
        self.commands.iter().filter(|c| c.is_run()).count()
    }

    pub fn root_label_of(&self, key: &StateKey) -> Option<&str> {
        self.memory
            .iter()
            .find(|(_, v)| v == key)
            .map(|(l, _)| l.as_str())
    }

    pub fn root_state_of(&self, label: &str) -> Option<&StateKey> {
        self.memory
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v)
    }

    /// Register an additional initial-memory state. Re-binding an existing
    /// pair is a no-op; a label or state clash is a label error.
    pub fn bind_root(&mut self, label: impl Into<String>, key: StateKey) -> Result<(), Error> {
        let label = label.into();
        if let Some(bound) = self.root_state_of(&label) {
            if *bound == key {
                return Ok(());
            }
            return Err(Error::Label(format!(
                "root {label}: label already bound to a different state"
            )));
        }
        if let Some(existing) = self.root_label_of(&key) {
            return Err(Error::Label(format!(
                "root {label}: state already registered as {existing}"
            )));
        }
        self.memory.push((label, key));
        Ok(())
    }

    /// Simulator this campaign starts from.
    pub fn initial_simulator(&self, model: &dyn DesModel) -> Result<SimulatorState, Error> {
        let mut sim = new_simulator(model, self.init.clone())?;
        for (label, key) in &self.memory {
            if label == INIT_LABEL {
                continue;
            }
            model.validate_state(key)?;
            sim.memory.insert(label.clone(), key.clone());
        }
        Ok(sim)
    }
}

/// Everything a campaign execution produced: the simulator state before
/// any command and after each one, the observed output at each of those
/// states, the explored transition set and the number of `RUN`s executed.
#[derive(Clone, Debug, PartialEq)]
pub struct ExecutionRecord {
    pub states: Vec<SimulatorState>,
    pub outputs: Vec<Vec<f64>>,
    pub transitions: TransitionSet,
    pub run_count: usize,
}

impl ExecutionRecord {
    fn empty() -> ExecutionRecord {
        ExecutionRecord {
            states: Vec::new(),
            outputs: Vec::new(),
            transitions: TransitionSet::new(),
            run_count: 0,
        }
    }
}

/// Abort report for a failed execution: which command failed, why, and
/// the record of everything up to that point.
#[derive(Clone, Debug)]
pub struct ExecutionFailure {
    pub index: usize,
    pub error: Error,
    pub partial: ExecutionRecord,
}

impl fmt::Display for ExecutionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "command {} failed: {}", self.index, self.error)
    }
}

impl std::error::Error for ExecutionFailure {}

impl From<ExecutionFailure> for Error {
    fn from(failure: ExecutionFailure) -> Error {
        Error::Execution { index: failure.index, source: Box::new(failure.error) }
    }
}

/// Run a campaign to completion, aborting at the first failing command.
pub fn execute(
    model: &dyn DesModel,
    campaign: &Campaign,
) -> Result<ExecutionRecord, ExecutionFailure> {
    let fail_at = |index, error, partial| ExecutionFailure { index, error, partial };
    let mut sim = campaign
        .initial_simulator(model)
        .map_err(|e| fail_at(0, e, ExecutionRecord::empty()))?;
    let mut record = ExecutionRecord::empty();
    let observe = |model: &dyn DesModel, sim: &SimulatorState| model.observe(&sim.current);
    let out0 = observe(model, &sim).map_err(|e| fail_at(0, e, ExecutionRecord::empty()))?;
    record.states.push(sim.clone());
    record.outputs.push(out0);
    for (index, cmd) in campaign.commands().iter().enumerate() {
        let step = sim
            .apply(model, cmd)
            .and_then(|t| observe(model, &sim).map(|out| (t, out)));
        match step {
            Ok((transition, output)) => {
                if let Some(t) = transition {
                    record.transitions.insert(t);
                    record.run_count += 1;
                }
                record.states.push(sim.clone());
                record.outputs.push(output);
            }
            Err(error) => return Err(fail_at(index, error, record)),
        }
    }
    Ok(record)
}
