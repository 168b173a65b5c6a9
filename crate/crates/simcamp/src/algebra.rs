//! Campaign algebra: semantic equivalence, normalization, scenario
//! extraction, synthesis and prefix-sharing optimization.
//!
//! The semantics of a campaign is the set of transitions its execution
//! explores. Every rewrite in this module preserves that set while
//! changing the command structure: normalization grounds each `LOAD` in a
//! replay from a registered root, extraction slices a normalized campaign
//! into independent scenarios, synthesis rebuilds a campaign from a
//! scenario set, and optimization shares common scenario prefixes through
//! the store/load machinery so no transition is simulated twice.

use std::collections::BTreeMap;

use crate::des::{trace, DesModel, Event, Scenario, StateKey, TransitionSet};
use crate::engine::{execute, Campaign, Command, INIT_LABEL};
use crate::error::Error;
use crate::time::Time;

/// The transition set a campaign explores, i.e. its semantics.
pub fn campaign_transitions(
    model: &dyn DesModel,
    campaign: &Campaign,
) -> Result<TransitionSet, Error> {
    let record = execute(model, campaign)?;
    Ok(record.transitions)
}

/// Two campaigns are equivalent when they explore the same transition set,
/// regardless of command count, ordering or memory discipline.
pub fn equivalent(model: &dyn DesModel, a: &Campaign, b: &Campaign) -> Result<bool, Error> {
    Ok(campaign_transitions(model, a)? == campaign_transitions(model, b)?)
}

/// Provenance of a state handled symbolically during normalization: the
/// root label it descends from and the run path replaying it.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Provenance {
    root: String,
    path: Vec<(Event, Time)>,
}

/// Rewrite a campaign into load-and-replay form: only `RUN` commands plus
/// `LOAD`s of registered roots, each followed by the run path that
/// reconstructs the loaded state. Store/free bookkeeping disappears.
///
/// The rewrite is symbolic. Each stored label is tracked as a root plus
/// the run path at its store point, so a later `LOAD` expands into
/// `LOAD root` followed by replayed `RUN`s. Replays only repeat runs the
/// original campaign already performed, so the transition set is
/// unchanged; any campaign that executes without error stays executable.
/// `LOAD` or `FREE` of a label with no provenance is a normalize error
/// carrying the command index.
pub fn normalize(campaign: &Campaign) -> Result<Campaign, Error> {
    let mut out = Campaign::new(campaign.name(), campaign.init_state().clone());
    for (label, key) in campaign.memory() {
        if label != INIT_LABEL {
            out.bind_root(label.clone(), key.clone())?;
        }
    }
    let mut bound: BTreeMap<String, Provenance> = campaign
        .memory()
        .iter()
        .map(|(l, _)| (l.clone(), Provenance { root: l.clone(), path: Vec::new() }))
        .collect();
    let mut current = Provenance { root: INIT_LABEL.to_string(), path: Vec::new() };
    for (index, cmd) in campaign.commands().iter().enumerate() {
        match cmd {
            Command::Run { event, duration } => {
                out.push(cmd.clone());
                current.path.push((*event, *duration));
            }
            Command::Store(label) => {
                bound.insert(label.clone(), current.clone());
            }
            Command::Free(label) => {
                bound.remove(label).ok_or_else(|| {
                    Error::Normalize(format!("command {index}: FREE {label}: label not bound"))
                })?;
            }
            Command::Load(label) => {
                let target = bound
                    .get(label)
                    .ok_or_else(|| {
                        Error::Normalize(format!(
                            "command {index}: LOAD {label}: label not bound"
                        ))
                    })?
                    .clone();
                out.push(Command::Load(target.root.clone()));
                for &(event, duration) in &target.path {
                    out.push(Command::run(event, duration));
                }
                current = target;
            }
        }
    }
    Ok(out)
}

/// Duplicate-free scenario collection preserving insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScenarioSet {
    scenarios: Vec<Scenario>,
}

impl ScenarioSet {
    pub fn new() -> ScenarioSet {
        ScenarioSet::default()
    }

    /// Insert a scenario; returns false if it was already present.
    pub fn insert(&mut self, scenario: Scenario) -> bool {
        if self.scenarios.contains(&scenario) {
            return false;
        }
        self.scenarios.push(scenario);
        true
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn iter(&self) -> impl Iterator<Item = &Scenario> {
        self.scenarios.iter()
    }
}

impl FromIterator<Scenario> for ScenarioSet {
    fn from_iter<I: IntoIterator<Item = Scenario>>(iter: I) -> Self {
        let mut set = ScenarioSet::new();
        for s in iter {
            set.insert(s);
        }
        set
    }
}

impl<'a> IntoIterator for &'a ScenarioSet {
    type Item = &'a Scenario;
    type IntoIter = std::slice::Iter<'a, Scenario>;

    fn into_iter(self) -> Self::IntoIter {
        self.scenarios.iter()
    }
}

/// Union of the scenario traces: the transition set a campaign over this
/// set must explore.
pub fn union_transitions(model: &dyn DesModel, set: &ScenarioSet) -> Result<TransitionSet, Error> {
    let mut out = TransitionSet::new();
    for scenario in set {
        for t in trace(model, scenario)? {
            out.insert(t);
        }
    }
    Ok(out)
}

/// Slice a campaign into the scenarios it simulates: normalize, then cut
/// at each `LOAD` so every maximal run block becomes one scenario rooted
/// at the loaded state. Segments without runs contribute nothing.
pub fn extract_scenarios(campaign: &Campaign) -> Result<ScenarioSet, Error> {
    fn flush(
        set: &mut ScenarioSet,
        root: &StateKey,
        runs: &mut Vec<(Event, Time)>,
    ) -> Result<(), Error> {
        if !runs.is_empty() {
            set.insert(Scenario::from_runs(root.clone(), runs)?);
            runs.clear();
        }
        Ok(())
    }
    let normalized = normalize(campaign)?;
    let mut set = ScenarioSet::new();
    let mut root = normalized.init_state().clone();
    let mut runs: Vec<(Event, Time)> = Vec::new();
    for cmd in normalized.commands() {
        match cmd {
            Command::Run { event, duration } => runs.push((*event, *duration)),
            Command::Load(label) => {
                flush(&mut set, &root, &mut runs)?;
                root = normalized
                    .root_state_of(label)
                    .ok_or_else(|| {
                        Error::Normalize(format!("LOAD {label}: label is not a registered root"))
                    })?
                    .clone();
            }
            Command::Store(_) | Command::Free(_) => {
                unreachable!("normalized campaigns contain only LOAD and RUN")
            }
        }
    }
    flush(&mut set, &root, &mut runs)?;
    Ok(set)
}

/// Build a campaign that simulates every scenario in the set, one
/// load-plus-runs block per scenario kept.
///
/// A scenario is dropped when its run sequence is a strict prefix of
/// another scenario from the same root, since the longer one already
/// explores all its transitions. The first scenario's root becomes the
/// campaign's initial state; further distinct roots are registered as
/// `root1`, `root2`, ... in order of first use.
pub fn synthesize_campaign(name: &str, set: &ScenarioSet) -> Result<Campaign, Error> {
    let scenarios = set.scenarios();
    let first = scenarios
        .first()
        .ok_or_else(|| Error::Synthesis("cannot synthesize from an empty scenario set".into()))?;
    let sequences: Vec<Vec<(Event, Time)>> =
        scenarios.iter().map(|s| s.run_sequence()).collect();
    let mut retained: Vec<usize> = Vec::new();
    'candidates: for i in 0..scenarios.len() {
        for j in 0..scenarios.len() {
            let covered = i != j
                && scenarios[i].initial_state == scenarios[j].initial_state
                && sequences[i].len() < sequences[j].len()
                && sequences[j][..sequences[i].len()] == sequences[i][..];
            if covered {
                continue 'candidates;
            }
        }
        retained.push(i);
    }
    let mut out = Campaign::new(name, first.initial_state.clone());
    let mut next_root = 1usize;
    for &i in &retained {
        let root = &scenarios[i].initial_state;
        let label = match out.root_label_of(root) {
            Some(l) => l.to_string(),
            None => {
                let label = loop {
                    let candidate = format!("root{next_root}");
                    next_root += 1;
                    if out.root_state_of(&candidate).is_none() {
                        break candidate;
                    }
                };
                out.bind_root(label.clone(), root.clone())?;
                label
            }
        };
        out.push(Command::Load(label));
        for &(event, duration) in &sequences[i] {
            out.push(Command::run(event, duration));
        }
    }
    Ok(out)
}

/// One node of a scenario prefix tree.
#[derive(Clone, Debug)]
pub struct PrefixNode {
    /// Outgoing edges in insertion order: run event, run duration, child.
    pub children: Vec<(Event, Time, usize)>,
    /// Index of the scenario ending exactly here, if any.
    pub terminal: Option<usize>,
    /// Smallest scenario index among all terminals in this subtree.
    pub min_terminal_index: usize,
}

impl PrefixNode {
    fn new() -> PrefixNode {
        PrefixNode { children: Vec::new(), terminal: None, min_terminal_index: usize::MAX }
    }
}

/// Prefix tree over run sequences sharing one root state. Every tree edge
/// is one run; scenarios with a common prefix share the corresponding
/// path, so the edge count is the cost of simulating the whole tree.
#[derive(Clone, Debug)]
pub struct PrefixTree {
    nodes: Vec<PrefixNode>,
}

impl PrefixTree {
    pub const ROOT: usize = 0;

    pub fn new() -> PrefixTree {
        PrefixTree { nodes: vec![PrefixNode::new()] }
    }

    pub fn node(&self, id: usize) -> &PrefixNode {
        &self.nodes[id]
    }

    /// Number of edges, i.e. distinct runs needed to cover the tree.
    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Insert a run sequence, tagging its endpoint with the scenario index.
    pub fn insert(&mut self, runs: &[(Event, Time)], scenario_index: usize) {
        let mut at = PrefixTree::ROOT;
        self.touch(at, scenario_index);
        for &(event, duration) in runs {
            let found = self.nodes[at]
                .children
                .iter()
                .find(|&&(e, d, _)| e == event && d == duration)
                .map(|&(_, _, id)| id);
            at = match found {
                Some(id) => id,
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(PrefixNode::new());
                    self.nodes[at].children.push((event, duration, id));
                    id
                }
            };
            self.touch(at, scenario_index);
        }
        if self.nodes[at].terminal.is_none() {
            self.nodes[at].terminal = Some(scenario_index);
        }
    }

    fn touch(&mut self, node: usize, scenario_index: usize) {
        let min = &mut self.nodes[node].min_terminal_index;
        *min = (*min).min(scenario_index);
    }
}

impl Default for PrefixTree {
    fn default() -> Self {
        PrefixTree::new()
    }
}

/// Group a scenario set into one prefix tree per root state, roots in
/// order of first appearance. Scenario indices refer to the set.
pub fn forest_by_root(set: &ScenarioSet) -> Vec<(StateKey, PrefixTree)> {
    let mut forest: Vec<(StateKey, PrefixTree)> = Vec::new();
    for (index, scenario) in set.iter().enumerate() {
        let runs = scenario.run_sequence();
        match forest.iter_mut().find(|(root, _)| *root == scenario.initial_state) {
            Some((_, tree)) => tree.insert(&runs, index),
            None => {
                let mut tree = PrefixTree::new();
                tree.insert(&runs, index);
                forest.push((scenario.initial_state.clone(), tree));
            }
        }
    }
    forest
}

/// Cost and footprint bookkeeping for an optimized campaign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimizeStats {
    /// Runs in the optimized campaign; equals the forest edge count.
    pub run_count: usize,
    /// Runs a one-block-per-scenario campaign would need.
    pub unshared_run_count: usize,
    pub scenario_count: usize,
    pub store_count: usize,
    pub load_count: usize,
    pub free_count: usize,
    /// Largest number of simultaneously held memory bindings.
    pub peak_memory: usize,
}

/// Rewrite a campaign so that no transition is simulated twice: extract
/// its scenarios, build per-root prefix trees and walk each tree depth
/// first, checkpointing branch states with `STORE`/`LOAD`/`FREE`.
pub fn optimize_campaign(
    model: &dyn DesModel,
    campaign: &Campaign,
) -> Result<Campaign, Error> {
    optimize_campaign_with_stats(model, campaign).map(|(c, _)| c)
}

/// [`optimize_campaign`] plus the bookkeeping gathered while emitting.
pub fn optimize_campaign_with_stats(
    model: &dyn DesModel,
    campaign: &Campaign,
) -> Result<(Campaign, OptimizeStats), Error> {
    let set = extract_scenarios(campaign)?;
    let forest = forest_by_root(&set);
    let mut out = Campaign::new(campaign.name(), campaign.init_state().clone());
    for (label, key) in campaign.memory() {
        if label != INIT_LABEL {
            out.bind_root(label.clone(), key.clone())?;
        }
    }
    let memory: BTreeMap<String, StateKey> = campaign.memory().iter().cloned().collect();
    let mut stats = OptimizeStats {
        run_count: 0,
        unshared_run_count: set.iter().map(|s| s.run_sequence().len()).sum(),
        scenario_count: set.len(),
        store_count: 0,
        load_count: 0,
        free_count: 0,
        peak_memory: memory.len(),
    };
    let mut emitter = Emitter { model, out: &mut out, memory, next_temp: 0, stats: &mut stats };
    for (root, tree) in &forest {
        let label = campaign
            .root_label_of(root)
            .ok_or_else(|| {
                Error::Synthesis("scenario root missing from the initial memory".into())
            })?
            .to_string();
        emitter.out.push(Command::Load(label));
        emitter.stats.load_count += 1;
        emitter.subtree(tree, PrefixTree::ROOT, root.clone())?;
    }
    Ok((out, stats))
}

/// Depth-first campaign emission over one prefix forest.
struct Emitter<'a> {
    model: &'a dyn DesModel,
    out: &'a mut Campaign,
    /// Mirror of the simulator memory the emitted campaign maintains.
    memory: BTreeMap<String, StateKey>,
    next_temp: usize,
    stats: &'a mut OptimizeStats,
}

impl Emitter<'_> {
    /// Emit commands covering every edge below `node`, entered with the
    /// simulator at `state`.
    ///
    /// A branch state must be recallable, so it is stored under a fresh
    /// label unless some live binding already holds it, in which case that
    /// label is reused; the store would be rejected anyway, since memory
    /// is a set. A reused label is never freed here: its owner is either a
    /// root binding or an enclosing branch that only frees after all its
    /// subtrees, ours included, are finished.
    fn subtree(&mut self, tree: &PrefixTree, node: usize, state: StateKey) -> Result<(), Error> {
        let children = tree.node(node).children.clone();
        if children.len() == 1 {
            let (event, duration, child) = children[0];
            let target = self.run(state, event, duration)?;
            return self.subtree(tree, child, target);
        }
        if children.is_empty() {
            return Ok(());
        }
        let (label, owned) = self.recall_label(&state);
        for (i, &(event, duration, child)) in children.iter().enumerate() {
            if i > 0 {
                self.out.push(Command::Load(label.clone()));
                self.stats.load_count += 1;
            }
            let target = self.run(state.clone(), event, duration)?;
            self.subtree(tree, child, target)?;
        }
        if owned {
            self.memory.remove(&label);
            self.out.push(Command::Free(label));
            self.stats.free_count += 1;
        }
        Ok(())
    }

    fn run(&mut self, state: StateKey, event: Event, duration: Time) -> Result<StateKey, Error> {
        let target = self.model.run(duration, &state, event)?;
        self.out.push(Command::run(event, duration));
        self.stats.run_count += 1;
        Ok(target)
    }

    /// Label under which `state` can be reloaded, storing it first if no
    /// live binding holds it. Returns the label and whether this call
    /// created (and must later free) the binding.
    fn recall_label(&mut self, state: &StateKey) -> (String, bool) {
        if let Some((label, _)) = self.memory.iter().find(|(_, v)| *v == state) {
            return (label.clone(), false);
        }
        let label = loop {
            let candidate = format!("t{}", self.next_temp);
            self.next_temp += 1;
            if !self.memory.contains_key(&candidate) {
                break candidate;
            }
        };
        self.out.push(Command::Store(label.clone()));
        self.stats.store_count += 1;
        self.memory.insert(label.clone(), state.clone());
        self.stats.peak_memory = self.stats.peak_memory.max(self.memory.len());
        (label, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::des::Alphabet;
    use crate::models::{CounterDes, HistoryDes};

    const TAU: Time = Time::from_nanos(40_000_000);

    fn ev(v: f64) -> Event {
        Event::new(v).unwrap()
    }

    fn counter(n: u64) -> CounterDes {
        CounterDes::new(n, TAU, Alphabet::new([0.0, 1.0, 2.0]).unwrap()).unwrap()
    }

    fn history() -> HistoryDes {
        HistoryDes::new(TAU, Alphabet::new([0.0, 1.0, 2.0]).unwrap()).unwrap()
    }

    fn run(v: f64) -> Command {
        Command::run(ev(v), TAU)
    }

    fn runs(values: &[f64]) -> Vec<(Event, Time)> {
        values.iter().map(|&v| (ev(v), TAU)).collect()
    }

    /// The worked checkpointing campaign: three stretches from the same
    /// root, one resumed from a stored mid-state, fifteen runs in all.
    fn checkpointed(init: StateKey) -> Campaign {
        let mut c = Campaign::new("checkpointed", init);
        for v in [0.0, 1.0, 1.0] {
            c.push(run(v));
        }
        c.push(Command::Store("x3".into()));
        for v in [1.0, 1.0, 1.0] {
            c.push(run(v));
        }
        c.push(Command::Load("x3".into()));
        for v in [0.0, 0.0, 1.0] {
            c.push(run(v));
        }
        c.push(Command::Free("x3".into()));
        c.push(Command::Load(INIT_LABEL.into()));
        for v in [1.0, 0.0, 2.0, 1.0, 0.0, 2.0] {
            c.push(run(v));
        }
        c
    }

    /// The four stretches the checkpointed campaign covers, as scenarios.
    fn stretches(init: StateKey) -> ScenarioSet {
        [
            &[0.0, 1.0, 1.0][..],
            &[0.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            &[0.0, 1.0, 1.0, 0.0, 0.0, 1.0],
            &[1.0, 0.0, 2.0, 1.0, 0.0, 2.0],
        ]
        .iter()
        .map(|vs| Scenario::from_runs(init.clone(), &runs(vs)).unwrap())
        .collect()
    }

    #[test]
    fn normalize_grounds_loads_in_roots() {
        let m = counter(7);
        let c = checkpointed(m.encode(0));
        let n = normalize(&c).unwrap();
        let mut expected = Campaign::new("checkpointed", m.encode(0));
        for v in [0.0, 1.0, 1.0, 1.0, 1.0, 1.0] {
            expected.push(run(v));
        }
        expected.push(Command::Load(INIT_LABEL.into()));
        for v in [0.0, 1.0, 1.0, 0.0, 0.0, 1.0] {
            expected.push(run(v));
        }
        expected.push(Command::Load(INIT_LABEL.into()));
        for v in [1.0, 0.0, 2.0, 1.0, 0.0, 2.0] {
            expected.push(run(v));
        }
        assert_eq!(n, expected);
        assert_eq!(n.run_count(), 18);
        assert!(equivalent(&m, &c, &n).unwrap());
    }

    #[test]
    fn normalize_is_idempotent() {
        let m = counter(7);
        let n = normalize(&checkpointed(m.encode(0))).unwrap();
        assert_eq!(normalize(&n).unwrap(), n);
    }

    #[test]
    fn normalize_rejects_unbound_labels() {
        let m = counter(7);
        let mut c = Campaign::new("bad", m.encode(0));
        c.push(Command::Load("ghost".into()));
        assert!(matches!(normalize(&c), Err(Error::Normalize(_))));
        let mut c = Campaign::new("bad", m.encode(0));
        c.push(Command::Free("ghost".into()));
        assert!(matches!(normalize(&c), Err(Error::Normalize(_))));
    }

    #[test]
    fn extract_cuts_maximal_run_segments() {
        let m = counter(7);
        let set = extract_scenarios(&checkpointed(m.encode(0))).unwrap();
        let expected: Vec<Scenario> = [
            &[0.0, 1.0, 1.0, 1.0, 1.0, 1.0][..],
            &[0.0, 1.0, 1.0, 0.0, 0.0, 1.0],
            &[1.0, 0.0, 2.0, 1.0, 0.0, 2.0],
        ]
        .iter()
        .map(|vs| Scenario::from_runs(m.encode(0), &runs(vs)).unwrap())
        .collect();
        assert_eq!(set.scenarios(), &expected[..]);
    }

    #[test]
    fn extract_of_a_run_only_campaign_is_one_scenario() {
        let m = counter(5);
        let mut c = Campaign::new("plain", m.encode(2));
        for v in [1.0, 0.0, 2.0] {
            c.push(run(v));
        }
        let set = extract_scenarios(&c).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(
            set.scenarios()[0],
            Scenario::from_runs(m.encode(2), &runs(&[1.0, 0.0, 2.0])).unwrap()
        );
    }

    #[test]
    fn synthesize_elides_strict_prefixes() {
        let m = counter(7);
        let c = synthesize_campaign("stretches", &stretches(m.encode(0))).unwrap();
        // the three-run stretch is a strict prefix of two longer ones
        assert_eq!(c.run_count(), 18);
        let loads = c.commands().iter().filter(|c| matches!(c, Command::Load(_))).count();
        assert_eq!(loads, 3);
        assert!(!c.commands().iter().any(|c| matches!(c, Command::Store(_) | Command::Free(_))));
        let union = union_transitions(&m, &stretches(m.encode(0))).unwrap();
        assert_eq!(campaign_transitions(&m, &c).unwrap(), union);
    }

    #[test]
    fn synthesize_registers_extra_roots_in_order() {
        let m = counter(9);
        let mut set = ScenarioSet::new();
        set.insert(Scenario::from_runs(m.encode(1), &runs(&[0.0])).unwrap());
        set.insert(Scenario::from_runs(m.encode(4), &runs(&[2.0])).unwrap());
        set.insert(Scenario::from_runs(m.encode(1), &runs(&[1.0])).unwrap());
        set.insert(Scenario::from_runs(m.encode(6), &runs(&[1.0])).unwrap());
        let c = synthesize_campaign("multi", &set).unwrap();
        assert_eq!(c.init_state(), &m.encode(1));
        let labels: Vec<&str> = c.memory().iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ["init", "root1", "root2"]);
        assert_eq!(c.root_state_of("root1"), Some(&m.encode(4)));
        assert_eq!(c.root_state_of("root2"), Some(&m.encode(6)));
        let expected: Vec<Command> = vec![
            Command::Load("init".into()),
            run(0.0),
            Command::Load("root1".into()),
            run(2.0),
            Command::Load("init".into()),
            run(1.0),
            Command::Load("root2".into()),
            run(1.0),
        ];
        assert_eq!(c.commands(), &expected[..]);
    }

    #[test]
    fn synthesize_of_an_empty_set_is_an_error() {
        assert!(matches!(
            synthesize_campaign("empty", &ScenarioSet::new()),
            Err(Error::Synthesis(_))
        ));
    }

    #[test]
    fn prefix_tree_counts_shared_edges_once() {
        let m = counter(7);
        let forest = forest_by_root(&stretches(m.encode(0)));
        assert_eq!(forest.len(), 1);
        let tree = &forest[0].1;
        // 21 scenario runs collapse onto 15 edges through shared prefixes
        assert_eq!(tree.edge_count(), 15);
        let root = tree.node(PrefixTree::ROOT);
        assert_eq!(root.children.len(), 2);
        assert_eq!(root.min_terminal_index, 0);
        // the short stretch terminates at the three-run branch point
        let mut at = PrefixTree::ROOT;
        for _ in 0..3 {
            at = tree.node(at).children[0].2;
        }
        assert_eq!(tree.node(at).terminal, Some(0));
        assert_eq!(tree.node(at).children.len(), 2);
        assert_eq!(tree.node(at).min_terminal_index, 0);
        assert_eq!(tree.node(tree.node(at).children[1].2).min_terminal_index, 2);
    }

    #[test]
    fn optimize_shares_prefixes_through_checkpoints() {
        let m = counter(7);
        let c = synthesize_campaign("stretches", &stretches(m.encode(0))).unwrap();
        let (opt, stats) = optimize_campaign_with_stats(&m, &c).unwrap();
        let mut expected = Campaign::new("stretches", m.encode(0));
        expected.push(Command::Load(INIT_LABEL.into()));
        for v in [0.0, 1.0, 1.0] {
            expected.push(run(v));
        }
        expected.push(Command::Store("t0".into()));
        for v in [1.0, 1.0, 1.0] {
            expected.push(run(v));
        }
        expected.push(Command::Load("t0".into()));
        for v in [0.0, 0.0, 1.0] {
            expected.push(run(v));
        }
        expected.push(Command::Free("t0".into()));
        expected.push(Command::Load(INIT_LABEL.into()));
        for v in [1.0, 0.0, 2.0, 1.0, 0.0, 2.0] {
            expected.push(run(v));
        }
        assert_eq!(opt, expected);
        assert_eq!(stats.run_count, 15);
        // synthesis already dropped the three-run prefix stretch
        assert_eq!(stats.unshared_run_count, 18);
        assert_eq!(stats.scenario_count, 3);
        assert_eq!(stats.store_count, 1);
        assert_eq!(stats.free_count, 1);
        assert_eq!(stats.load_count, 3);
        assert_eq!(stats.peak_memory, 2);
        assert!(equivalent(&m, &c, &opt).unwrap());
    }

    #[test]
    fn optimized_transition_sets_match_on_an_injective_model() {
        let m = history();
        let root = m.root(0);
        let c = synthesize_campaign("stretches", &stretches(root.clone())).unwrap();
        let opt = optimize_campaign(&m, &c).unwrap();
        let transitions = campaign_transitions(&m, &opt).unwrap();
        // on a history tape every one of the 15 tree edges is distinct
        assert_eq!(transitions.len(), 15);
        assert_eq!(transitions, campaign_transitions(&m, &c).unwrap());
    }

    #[test]
    fn optimize_reuses_live_labels_instead_of_storing() {
        // counter mod 3: a run with event 2 maps 0 back to 0, so the
        // branch state is already held by the init binding
        let m = counter(3);
        let mut set = ScenarioSet::new();
        set.insert(Scenario::from_runs(m.encode(0), &runs(&[2.0, 0.0])).unwrap());
        set.insert(Scenario::from_runs(m.encode(0), &runs(&[2.0, 1.0])).unwrap());
        let c = synthesize_campaign("wrap", &set).unwrap();
        let (opt, stats) = optimize_campaign_with_stats(&m, &c).unwrap();
        assert_eq!(stats.store_count, 0);
        assert_eq!(stats.free_count, 0);
        assert_eq!(stats.run_count, 3);
        let expected: Vec<Command> = vec![
            Command::Load(INIT_LABEL.into()),
            run(2.0),
            run(0.0),
            Command::Load(INIT_LABEL.into()),
            run(1.0),
        ];
        assert_eq!(opt.commands(), &expected[..]);
        assert_eq!(
            campaign_transitions(&m, &opt).unwrap(),
            union_transitions(&m, &set).unwrap()
        );
    }

    #[test]
    fn equivalence_distinguishes_different_explorations() {
        let m = counter(7);
        let mut a = Campaign::new("a", m.encode(0));
        a.push(run(1.0));
        a.push(run(0.0));
        let mut b = Campaign::new("b", m.encode(0));
        b.push(run(1.0));
        b.push(run(2.0));
        assert!(!equivalent(&m, &a, &b).unwrap());
        // order of exploration does not matter, only the set
        let mut c = Campaign::new("c", m.encode(0));
        c.push(run(1.0));
        c.push(Command::Load(INIT_LABEL.into()));
        c.push(run(1.0));
        c.push(run(0.0));
        assert!(equivalent(&m, &a, &c).unwrap());
    }
}
