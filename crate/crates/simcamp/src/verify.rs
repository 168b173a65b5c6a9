//! Bounded safety verification over an enumerated disturbance family.
//!
//! A [`SafetyProperty`] is a clause list over the model outputs. The verifier
//! walks every admissible scenario of an [`EnumerationSpec`] and checks the
//! property on the output of every transition target. Two interchangeable
//! strategies are provided:
//!
//! * [`Mode::Naive`] replays each scenario from the initial state, paying one
//!   model run per transition per scenario.
//! * [`Mode::Optimized`] folds the admissible family into a single prefix
//!   tree and runs each shared prefix once, checkpointing branch states the
//!   way [`optimize_campaign`](crate::algebra::optimize_campaign) does.
//!
//! Both strategies report the same verdict and, on failure, the same first
//! counterexample: the violating scenario of least enumeration index,
//! together with the first violating transition inside it. Verification can
//! be sharded over worker threads; results are independent of the worker
//! count.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::algebra::PrefixTree;
use crate::des::{trace, DesModel, Scenario, StateKey, Transition};
use crate::engine::INIT_LABEL;
use crate::enumerate::EnumerationSpec;
use crate::error::Error;
use crate::time::Time;

/// One predicate over a single output coordinate.
#[derive(Clone, Debug, PartialEq)]
pub enum Clause {
    /// `|y[index]| <= bound`.
    AbsLe { index: usize, bound: f64 },
    /// `lo <= y[index] <= hi`.
    InRange { index: usize, lo: f64, hi: f64 },
}

impl Clause {
    /// Output coordinate the clause reads.
    pub fn index(&self) -> usize {
        match *self {
            Clause::AbsLe { index, .. } | Clause::InRange { index, .. } => index,
        }
    }

    /// Whether the clause holds on the given output vector.
    ///
    /// Comparisons with NaN are false, so a NaN output counts as a
    /// violation rather than a pass.
    pub fn holds(&self, outputs: &[f64]) -> bool {
        match *self {
            Clause::AbsLe { index, bound } => outputs[index].abs() <= bound,
            Clause::InRange { index, lo, hi } => lo <= outputs[index] && outputs[index] <= hi,
        }
    }
}

/// How the clauses of a property combine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    /// Every clause must hold; the property is violated by any false clause.
    All,
    /// At least one clause must hold; violated only when all are false.
    Any,
}

/// A named safety property: outputs are safe when the clause combination
/// holds.
#[derive(Clone, Debug, PartialEq)]
pub struct SafetyProperty {
    pub name: String,
    pub clauses: Vec<Clause>,
    pub combine: Combine,
}

impl SafetyProperty {
    pub fn new(name: impl Into<String>, clauses: Vec<Clause>, combine: Combine) -> SafetyProperty {
        SafetyProperty { name: name.into(), clauses, combine }
    }

    /// Checks the property against a model before any simulation work.
    ///
    /// Rejects empty clause lists, clause indices outside the model output
    /// arity, non-finite bounds, and empty ranges.
    pub fn validate(&self, model: &dyn DesModel) -> Result<(), Error> {
        if self.clauses.is_empty() {
            return Err(Error::Property(format!(
                "property '{}' has no clauses",
                self.name
            )));
        }
        let arity = model.output_arity();
        for (i, clause) in self.clauses.iter().enumerate() {
            if clause.index() >= arity {
                return Err(Error::Property(format!(
                    "clause {i} reads output {} but the model has arity {arity}",
                    clause.index()
                )));
            }
            match *clause {
                Clause::AbsLe { bound, .. } => {
                    if !bound.is_finite() || bound < 0.0 {
                        return Err(Error::Property(format!(
                            "clause {i} needs a finite non-negative bound"
                        )));
                    }
                }
                Clause::InRange { lo, hi, .. } => {
                    if !lo.is_finite() || !hi.is_finite() || lo > hi {
                        return Err(Error::Property(format!(
                            "clause {i} needs a finite non-empty range"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the output vector is safe.
    pub fn holds(&self, outputs: &[f64]) -> bool {
        match self.combine {
            Combine::All => self.clauses.iter().all(|c| c.holds(outputs)),
            Combine::Any => self.clauses.iter().any(|c| c.holds(outputs)),
        }
    }

    /// Index of the first unsatisfied clause when the property is violated.
    ///
    /// Under [`Combine::Any`] a violation means every clause failed, so the
    /// reported index is always 0 there.
    pub fn violation(&self, outputs: &[f64]) -> Option<usize> {
        if self.holds(outputs) {
            return None;
        }
        self.clauses.iter().position(|c| !c.holds(outputs))
    }
}

/// Verification strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Naive,
    Optimized,
}

/// Knobs for [`verify`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub mode: Mode,
    /// Collect every violating scenario instead of stopping at the first.
    pub exhaustive: bool,
    /// Worker threads; values below 1 are treated as 1.
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions { mode: Mode::Optimized, exhaustive: false, jobs: 1 }
    }
}

/// A concrete witness of a property violation.
///
/// Equality deliberately ignores how the witness was found, so naive and
/// optimized runs of the same problem compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    /// Position of the scenario in the admissible enumeration order.
    pub scenario_index: u64,
    pub scenario: Scenario,
    /// Position of the violating transition in the scenario trace.
    pub transition_index: usize,
    pub transition: Transition,
    /// First unsatisfied clause of the property at that transition.
    pub clause_index: usize,
}

/// Outcome of a verification run.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// The property held on every transition of every admissible scenario.
    /// The counts are totals over the whole exploration and do not depend
    /// on the worker count.
    Pass { scenarios: u64, transitions_checked: u64 },
    /// At least one transition violated the property. `violations` holds
    /// the first counterexample, or every violating scenario's first
    /// violation in enumeration order when running exhaustively.
    /// `campaign_position` is the command index at which the first
    /// counterexample fired inside the campaign this strategy executed, so
    /// it is comparable between runs of the same mode only.
    Fail { violations: Vec<Counterexample>, campaign_position: u64 },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    /// The least-index counterexample of a failing verdict.
    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Pass { .. } => None,
            Verdict::Fail { violations, .. } => violations.first(),
        }
    }
}

/// A violation located during shard processing, before scenario objects are
/// attached. Naive shards record scenario indices local to their block;
/// optimized shards record global enumeration indices.
#[derive(Clone, Debug)]
struct ItemViolation {
    scenario_index: u64,
    transition_index: usize,
    transition: Transition,
    clause_index: usize,
    /// Command position local to the shard.
    position: u64,
}

/// Result of one shard.
struct ItemOutcome {
    /// Admissible scenarios the shard consumed (naive shards only).
    scenarios: u64,
    /// Transitions the shard ran.
    transitions: u64,
    /// Commands the shard executed, counting loads, stores and frees.
    commands: u64,
    /// Best violation under early exit.
    first: Option<ItemViolation>,
    /// Per-scenario first violations under exhaustive exploration.
    all: Vec<ItemViolation>,
}

/// Checks `prop` on every admissible scenario of `spec`.
///
/// Returns [`Verdict::Pass`] with exploration totals, or [`Verdict::Fail`]
/// carrying the first counterexample in enumeration order. The verdict,
/// including the counterexample and the campaign position, is a pure
/// function of `(model, spec, prop, mode, exhaustive)`; the `jobs` knob
/// changes wall-clock time only.
pub fn verify(
    model: &dyn DesModel,
    spec: &EnumerationSpec,
    prop: &SafetyProperty,
    options: &VerifyOptions,
) -> Result<Verdict, Error> {
    prop.validate(model)?;
    model.validate_state(&spec.initial_state)?;
    spec.validate()?;
    let jobs = options.jobs.max(1);
    match options.mode {
        Mode::Naive => verify_naive(model, spec, prop, options.exhaustive, jobs),
        Mode::Optimized => verify_optimized(model, spec, prop, options.exhaustive, jobs),
    }
}

/// Replays the first counterexample of a failing verdict from scratch.
///
/// Returns true when a standalone trace of the reported scenario violates
/// the property exactly at the reported transition and clause, and false if
/// the witness does not reproduce, including when the scenario no longer
/// traces at all. Passing verdicts have nothing to replay and are an error.
pub fn replay_counterexample(
    model: &dyn DesModel,
    prop: &SafetyProperty,
    verdict: &Verdict,
) -> Result<bool, Error> {
    let Some(cx) = verdict.counterexample() else {
        return Err(Error::Property(
            "a passing verdict has no counterexample to replay".into(),
        ));
    };
    let Ok(transitions) = trace(model, &cx.scenario) else {
        return Ok(false);
    };
    for (i, t) in transitions.iter().enumerate() {
        let Ok(outputs) = model.observe(&t.target) else {
            return Ok(false);
        };
        if let Some(clause) = prop.violation(&outputs) {
            return Ok(i == cx.transition_index
                && *t == cx.transition
                && clause == cx.clause_index);
        }
    }
    Ok(false)
}

/// Runs `work` over `items` on up to `jobs` threads, preserving item order
/// in the returned vector. Errors surface in item order as well, matching
/// what a sequential pass would report first.
fn run_items<I, F>(items: &[I], jobs: usize, work: F) -> Result<Vec<ItemOutcome>, Error>
where
    I: Sync,
    F: Fn(&I) -> Result<ItemOutcome, Error> + Sync,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(&work).collect();
    }
    let slots: Vec<Mutex<Option<Result<ItemOutcome, Error>>>> =
        items.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(items.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let outcome = work(&items[i]);
                *slots[i].lock().expect("result slot poisoned") = Some(outcome);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .expect("result slot poisoned")
                .expect("every item was dispatched")
        })
        .collect()
}

/// Fetches the scenario objects for a set of enumeration indices with one
/// extra pass over the admissible stream.
fn resolve_scenarios(
    spec: &EnumerationSpec,
    indices: &[u64],
) -> Result<BTreeMap<u64, Scenario>, Error> {
    let mut wanted: BTreeSet<u64> = indices.iter().copied().collect();
    let mut found = BTreeMap::new();
    for (i, scenario) in spec.scenarios()?.enumerate() {
        if wanted.is_empty() {
            break;
        }
        let i = i as u64;
        if wanted.remove(&i) {
            found.insert(i, scenario);
        }
    }
    if !wanted.is_empty() {
        return Err(Error::Property(
            "a reported scenario index lies beyond the admissible stream".into(),
        ));
    }
    Ok(found)
}

fn attach_scenarios(
    spec: &EnumerationSpec,
    violations: Vec<ItemViolation>,
    campaign_position: u64,
) -> Result<Verdict, Error> {
    let indices: Vec<u64> = violations.iter().map(|v| v.scenario_index).collect();
    let mut scenarios = resolve_scenarios(spec, &indices)?;
    let violations = violations
        .into_iter()
        .map(|v| Counterexample {
            scenario_index: v.scenario_index,
            scenario: scenarios
                .remove(&v.scenario_index)
                .expect("resolved every reported index"),
            transition_index: v.transition_index,
            transition: v.transition,
            clause_index: v.clause_index,
        })
        .collect();
    Ok(Verdict::Fail { violations, campaign_position })
}

fn verify_naive(
    model: &dyn DesModel,
    spec: &EnumerationSpec,
    prop: &SafetyProperty,
    exhaustive: bool,
    jobs: usize,
) -> Result<Verdict, Error> {
    let blocks = spec.block_values();
    let outcomes = run_items(&blocks, jobs, |leading| {
        naive_block(model, spec, prop, *leading, exhaustive)
    })?;

    // Blocks cover contiguous, ascending ranges of the enumeration, so the
    // first block holding a violation holds the least-index one, and every
    // earlier block ran to completion with exact totals.
    let mut scenario_offset = 0u64;
    let mut command_offset = 0u64;
    let mut transitions = 0u64;
    let mut all = Vec::new();
    for outcome in &outcomes {
        transitions += outcome.transitions;
        if exhaustive {
            all.extend(outcome.all.iter().cloned().map(|mut v| {
                v.scenario_index += scenario_offset;
                v.position += command_offset;
                v
            }));
        } else if let Some(v) = &outcome.first {
            let mut v = v.clone();
            v.scenario_index += scenario_offset;
            v.position += command_offset;
            return attach_scenarios(spec, vec![v.clone()], v.position);
        }
        scenario_offset += outcome.scenarios;
        command_offset += outcome.commands;
    }
    if exhaustive && !all.is_empty() {
        let position = all[0].position;
        return attach_scenarios(spec, all, position);
    }
    Ok(Verdict::Pass { scenarios: scenario_offset, transitions_checked: transitions })
}

/// Streams one leading-value block, replaying each scenario from scratch.
/// Commands count as one load per scenario plus one run per transition.
fn naive_block(
    model: &dyn DesModel,
    spec: &EnumerationSpec,
    prop: &SafetyProperty,
    leading: crate::des::Event,
    exhaustive: bool,
) -> Result<ItemOutcome, Error> {
    let mut out = ItemOutcome {
        scenarios: 0,
        transitions: 0,
        commands: 0,
        first: None,
        all: Vec::new(),
    };
    for scenario in spec.block(leading)? {
        let index = out.scenarios;
        out.scenarios += 1;
        out.commands += 1;
        let transitions = trace(model, &scenario)?;
        for (i, t) in transitions.iter().enumerate() {
            out.commands += 1;
            out.transitions += 1;
            let outputs = model.observe(&t.target)?;
            if let Some(clause) = prop.violation(&outputs) {
                let violation = ItemViolation {
                    scenario_index: index,
                    transition_index: i,
                    transition: t.clone(),
                    clause_index: clause,
                    position: out.commands - 1,
                };
                if exhaustive {
                    out.all.push(violation);
                    break;
                }
                out.first = Some(violation);
                return Ok(out);
            }
        }
    }
    Ok(out)
}

fn verify_optimized(
    model: &dyn DesModel,
    spec: &EnumerationSpec,
    prop: &SafetyProperty,
    exhaustive: bool,
    jobs: usize,
) -> Result<Verdict, Error> {
    // Fold the whole admissible family into one prefix tree. The stream is
    // model-free, so this pass costs no simulation work, and the tree holds
    // run edges rather than scenarios.
    let mut tree = PrefixTree::new();
    let mut total = 0u64;
    for (i, scenario) in spec.scenarios()?.enumerate() {
        tree.insert(&scenario.run_sequence(), i);
        total += 1;
    }
    let items: Vec<usize> = (0..tree.node(PrefixTree::ROOT).children.len()).collect();
    let outcomes = run_items(&items, jobs, |item| {
        optimized_item(model, spec, prop, &tree, *item, exhaustive)
    })?;

    let mut transitions = 0u64;
    let mut best: Option<(ItemViolation, usize)> = None;
    let mut all = Vec::new();
    for (item, outcome) in outcomes.iter().enumerate() {
        transitions += outcome.transitions;
        if exhaustive {
            all.extend(outcome.all.iter().cloned());
        } else if let Some(v) = &outcome.first {
            let better = match &best {
                Some((b, _)) => v.scenario_index < b.scenario_index,
                None => true,
            };
            if better {
                best = Some((v.clone(), item));
            }
        }
    }
    if exhaustive {
        if all.is_empty() {
            return Ok(Verdict::Pass { scenarios: total, transitions_checked: transitions });
        }
        all.sort_by_key(|v| v.scenario_index);
        let winner_index = all[0].scenario_index;
        let position = globalize_position(&outcomes, &all, winner_index);
        return attach_scenarios(spec, all, position);
    }
    match best {
        None => Ok(Verdict::Pass { scenarios: total, transitions_checked: transitions }),
        Some((v, item)) => {
            let offset: u64 = outcomes[..item].iter().map(|o| o.commands).sum();
            attach_scenarios(spec, vec![v.clone()], offset + v.position)
        }
    }
}

/// Finds the global command position of the winning violation in an
/// exhaustive optimized run by locating the item that produced it.
fn globalize_position(outcomes: &[ItemOutcome], all: &[ItemViolation], winner: u64) -> u64 {
    let mut offset = 0u64;
    for outcome in outcomes {
        if outcome.all.iter().any(|v| v.scenario_index == winner) {
            let local = outcome
                .all
                .iter()
                .find(|v| v.scenario_index == winner)
                .expect("winner is in this item")
                .position;
            return offset + local;
        }
        offset += outcome.commands;
    }
    // The winner came from `all`, which is the concatenation of the item
    // lists, so one of the loops above must return.
    unreachable!("winning violation {winner} missing from item outcomes: {all:?}")
}

/// Walks one top-level subtree of the global prefix tree, mirroring the
/// checkpointing emission of the campaign optimizer while checking the
/// property on every run target.
struct OptimizedWalk<'a> {
    model: &'a dyn DesModel,
    prop: &'a SafetyProperty,
    tree: &'a PrefixTree,
    exhaustive: bool,
    memory: BTreeMap<String, StateKey>,
    next_temp: usize,
    out: ItemOutcome,
}

fn optimized_item(
    model: &dyn DesModel,
    spec: &EnumerationSpec,
    prop: &SafetyProperty,
    tree: &PrefixTree,
    item: usize,
    exhaustive: bool,
) -> Result<ItemOutcome, Error> {
    let mut walk = OptimizedWalk {
        model,
        prop,
        tree,
        exhaustive,
        memory: BTreeMap::from([(INIT_LABEL.to_string(), spec.initial_state.clone())]),
        next_temp: 0,
        out: ItemOutcome {
            scenarios: 0,
            transitions: 0,
            commands: 0,
            first: None,
            all: Vec::new(),
        },
    };
    // Every item stream opens by restoring the shared initial state.
    walk.out.commands += 1;
    let (event, duration, child) = tree.node(PrefixTree::ROOT).children[item];
    walk.edge(spec.initial_state.clone(), event, duration, child, 0, None)?;
    Ok(walk.out)
}

impl OptimizedWalk<'_> {
    /// Runs one tree edge, checks the property on its target, and descends.
    /// `inherited` carries the first violation on the path so far when
    /// exploring exhaustively.
    fn edge(
        &mut self,
        source: StateKey,
        event: crate::des::Event,
        duration: Time,
        child: usize,
        depth: usize,
        inherited: Option<ItemViolation>,
    ) -> Result<(), Error> {
        let target = self.model.run(duration, &source, event)?;
        self.out.commands += 1;
        self.out.transitions += 1;
        let position = self.out.commands - 1;
        let mut carried = inherited;
        if carried.is_none() {
            let outputs = self.model.observe(&target)?;
            if let Some(clause) = self.prop.violation(&outputs) {
                let violation = ItemViolation {
                    scenario_index: self.tree.node(child).min_terminal_index as u64,
                    transition_index: depth,
                    transition: Transition {
                        source,
                        event,
                        duration,
                        target: target.clone(),
                    },
                    clause_index: clause,
                    position,
                };
                if !self.exhaustive {
                    // Every scenario through this edge violates here, and
                    // the least of them is the subtree minimum, so there is
                    // nothing better below: record and prune.
                    let better = match &self.out.first {
                        Some(b) => violation.scenario_index < b.scenario_index,
                        None => true,
                    };
                    if better {
                        self.out.first = Some(violation);
                    }
                    return Ok(());
                }
                carried = Some(violation);
            }
        }
        self.node(child, target, depth, carried)
    }

    fn node(
        &mut self,
        id: usize,
        state: StateKey,
        depth: usize,
        inherited: Option<ItemViolation>,
    ) -> Result<(), Error> {
        if let Some(index) = self.tree.node(id).terminal {
            if let Some(v) = &inherited {
                // A scenario ends here and some edge on its path violated;
                // that edge is its first violation.
                let mut v = v.clone();
                v.scenario_index = index as u64;
                self.out.all.push(v);
            }
        }
        let children = self.tree.node(id).children.clone();
        match children.len() {
            0 => Ok(()),
            1 => {
                let (event, duration, child) = children[0];
                self.edge(state, event, duration, child, depth + 1, inherited)
            }
            _ => {
                let (label, owned) = self.recall(&state);
                let mut visited = false;
                for (event, duration, child) in children {
                    if !self.exhaustive {
                        if let Some(b) = &self.out.first {
                            // Nothing under this child can beat the best
                            // index found so far; skip the whole subtree.
                            if self.tree.node(child).min_terminal_index as u64
                                > b.scenario_index
                            {
                                continue;
                            }
                        }
                    }
                    if visited {
                        self.out.commands += 1;
                    }
                    visited = true;
                    self.edge(state.clone(), event, duration, child, depth + 1, inherited.clone())?;
                }
                if owned {
                    self.out.commands += 1;
                    self.memory.remove(&label);
                }
                Ok(())
            }
        }
    }

    /// Finds or creates a binding for a branch state, mirroring the
    /// optimizer's reuse rule: a live label already holding the state is
    /// reused without a store, otherwise a fresh temporary is checkpointed.
    fn recall(&mut self, state: &StateKey) -> (String, bool) {
        for (label, held) in &self.memory {
            if held == state {
                return (label.clone(), false);
            }
        }
        let label = loop {
            let candidate = format!("t{}", self.next_temp);
            self.next_temp += 1;
            if !self.memory.contains_key(&candidate) {
                break candidate;
            }
        };
        self.memory.insert(label.clone(), state.clone());
        self.out.commands += 1;
        (label, true)
    }
}
