//! Line-oriented text formats for campaigns, scenario sets, enumeration
//! specs, safety properties, and transition dumps.
//!
//! Every format shares the same conventions: one directive per line, `#`
//! starts a comment line, blank lines are ignored, and all decimal fields
//! round-trip exactly. Parsers report [`Error::Parse`] with the 1-based
//! line number of the offending directive; writers produce text the
//! matching parser accepts verbatim.

use std::collections::BTreeSet;

use crate::algebra::ScenarioSet;
use crate::des::{Alphabet, DesModel, Event, EventList, Scenario, StateKey, Transition, TransitionSet};
use crate::engine::{Campaign, Command, INIT_LABEL};
use crate::enumerate::{AdmissibilityConstraint, EnumerationSpec};
use crate::error::Error;
use crate::models;
use crate::time::Time;
use crate::verify::{Clause, Combine, SafetyProperty};

/// Meaningful lines of a document: `(1-based line number, text)` with
/// comments and blanks dropped.
fn directives(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

/// Splits a directive into its keyword and the rest of the line.
fn keyword(line: &str) -> (&str, &str) {
    match line.split_once(char::is_whitespace) {
        Some((head, rest)) => (head, rest.trim()),
        None => (line, ""),
    }
}

fn parse_time(line: usize, text: &str, what: &str) -> Result<Time, Error> {
    Time::parse_secs(text).map_err(|e| Error::parse(line, format!("bad {what}: {e}")))
}

fn parse_event(line: usize, text: &str) -> Result<Event, Error> {
    Event::parse(text).map_err(|e| Error::parse(line, format!("bad event value: {e}")))
}

fn parse_count(line: usize, text: &str, what: &str) -> Result<usize, Error> {
    text.parse()
        .map_err(|_| Error::parse(line, format!("bad {what}: {text:?}")))
}

/// Parse a state literal for a model, accepting the model's own literal
/// syntax first and a raw hex state key as a fallback.
pub fn parse_state_literal(model: &dyn DesModel, literal: &str) -> Result<StateKey, Error> {
    match model.parse_state(literal) {
        Ok(key) => Ok(key),
        Err(first) => {
            if let Ok(key) = StateKey::parse_hex(literal) {
                if model.validate_state(&key).is_ok() {
                    return Ok(key);
                }
            }
            Err(first)
        }
    }
}

fn build_model(line: usize, id: &str) -> Result<Box<dyn DesModel>, Error> {
    models::build(id).map_err(|e| Error::parse(line, format!("bad model id: {e}")))
}

fn parse_state(line: usize, model: &dyn DesModel, literal: &str) -> Result<StateKey, Error> {
    parse_state_literal(model, literal)
        .map_err(|e| Error::parse(line, format!("bad state literal {literal:?}: {e}")))
}

/// Parse a campaign document:
///
/// ```text
/// campaign <name>
/// model <model-id>
/// init <state literal>
/// root <label> <state literal>   (optional extra initial bindings)
/// RUN <event> <duration> | STORE <l> | LOAD <l> | FREE <l>
/// ```
pub fn parse_campaign(text: &str) -> Result<(Box<dyn DesModel>, Campaign), Error> {
    let mut lines = directives(text);
    let (name_line, name) = match lines.next() {
        Some((n, line)) => match keyword(line) {
            ("campaign", rest) => (n, rest.to_string()),
            _ => return Err(Error::parse(n, "expected `campaign <name>` first")),
        },
        None => return Err(Error::parse(1, "empty campaign document")),
    };
    if name.is_empty() {
        return Err(Error::parse(name_line, "campaign needs a name"));
    }
    let model = match lines.next() {
        Some((n, line)) => match keyword(line) {
            ("model", id) => build_model(n, id)?,
            _ => return Err(Error::parse(n, "expected `model <model-id>`")),
        },
        None => return Err(Error::parse(name_line, "missing `model` line")),
    };
    let init = match lines.next() {
        Some((n, line)) => match keyword(line) {
            ("init", literal) => parse_state(n, model.as_ref(), literal)?,
            _ => return Err(Error::parse(n, "expected `init <state literal>`")),
        },
        None => return Err(Error::parse(name_line, "missing `init` line")),
    };
    let mut campaign = Campaign::new(name, init);
    let mut in_commands = false;
    for (n, line) in lines {
        let (head, rest) = keyword(line);
        match head {
            "root" if !in_commands => {
                let mut parts = rest.split_whitespace();
                let (label, literal) = match (parts.next(), parts.next(), parts.next()) {
                    (Some(l), Some(s), None) => (l, s),
                    _ => return Err(Error::parse(n, "expected `root <label> <state literal>`")),
                };
                let key = parse_state(n, model.as_ref(), literal)?;
                campaign
                    .bind_root(label, key)
                    .map_err(|e| Error::parse(n, e.to_string()))?;
            }
            "root" => {
                return Err(Error::parse(n, "root lines must precede commands"));
            }
            "RUN" => {
                let mut parts = rest.split_whitespace();
                let (event, duration) = match (parts.next(), parts.next(), parts.next()) {
                    (Some(e), Some(d), None) => (e, d),
                    _ => return Err(Error::parse(n, "expected `RUN <event> <duration>`")),
                };
                let event = parse_event(n, event)?;
                let duration = parse_time(n, duration, "run duration")?;
                campaign.push(Command::Run { event, duration });
                in_commands = true;
            }
            "STORE" | "LOAD" | "FREE" => {
                let mut parts = rest.split_whitespace();
                let label = match (parts.next(), parts.next()) {
                    (Some(l), None) => l.to_string(),
                    _ => return Err(Error::parse(n, format!("expected `{head} <label>`"))),
                };
                campaign.push(match head {
                    "STORE" => Command::Store(label),
                    "LOAD" => Command::Load(label),
                    _ => Command::Free(label),
                });
                in_commands = true;
            }
            other => {
                return Err(Error::parse(n, format!("unknown campaign directive {other:?}")));
            }
        }
    }
    Ok((model, campaign))
}

/// Render a campaign in the format [`parse_campaign`] reads.
pub fn write_campaign(model: &dyn DesModel, campaign: &Campaign) -> String {
    let mut out = String::new();
    out.push_str(&format!("campaign {}\n", campaign.name()));
    out.push_str(&format!("model {}\n", model.id()));
    out.push_str(&format!("init {}\n", model.format_state(campaign.init_state())));
    for (label, key) in campaign.memory() {
        if label != INIT_LABEL {
            out.push_str(&format!("root {label} {}\n", model.format_state(key)));
        }
    }
    for command in campaign.commands() {
        out.push_str(&format!("{command}\n"));
    }
    out
}

/// Parse a scenario document: a `model` header followed by one block per
/// scenario:
///
/// ```text
/// model <model-id>
/// scenario <name>
/// init <state literal>
/// tail <decimal seconds>
/// event <gap-seconds> <event-value>   (repeated; a first `event 0 <p>` is
///                                      the impulse at time zero)
/// ```
pub fn parse_scenarios(text: &str) -> Result<(Box<dyn DesModel>, ScenarioSet), Error> {
    let mut lines = directives(text).peekable();
    let model = match lines.next() {
        Some((n, line)) => match keyword(line) {
            ("model", id) => build_model(n, id)?,
            _ => return Err(Error::parse(n, "expected `model <model-id>` first")),
        },
        None => return Err(Error::parse(1, "empty scenario document")),
    };

    struct Block {
        line: usize,
        init: Option<StateKey>,
        tail: Option<Time>,
        initial_event: Event,
        entries: Vec<(Time, Event)>,
        saw_event: bool,
    }
    let mut set = ScenarioSet::new();
    let mut block: Option<Block> = None;
    let close = |b: Block, model: &dyn DesModel, set: &mut ScenarioSet| -> Result<(), Error> {
        let init = b
            .init
            .ok_or_else(|| Error::parse(b.line, "scenario block is missing `init`"))?;
        let tail = b
            .tail
            .ok_or_else(|| Error::parse(b.line, "scenario block is missing `tail`"))?;
        let events = EventList::new(b.initial_event, b.entries)
            .map_err(|e| Error::parse(b.line, e.to_string()))?;
        let scenario = Scenario::new(init, events, tail);
        scenario
            .validate(model)
            .map_err(|e| Error::parse(b.line, e.to_string()))?;
        set.insert(scenario);
        Ok(())
    };

    for (n, line) in lines {
        let (head, rest) = keyword(line);
        match head {
            "scenario" => {
                if let Some(b) = block.take() {
                    close(b, model.as_ref(), &mut set)?;
                }
                block = Some(Block {
                    line: n,
                    init: None,
                    tail: None,
                    initial_event: Event::ZERO,
                    entries: Vec::new(),
                    saw_event: false,
                });
            }
            "init" | "tail" | "event" => {
                let b = block
                    .as_mut()
                    .ok_or_else(|| Error::parse(n, "directive outside a `scenario` block"))?;
                match head {
                    "init" => b.init = Some(parse_state(n, model.as_ref(), rest)?),
                    "tail" => b.tail = Some(parse_time(n, rest, "tail duration")?),
                    _ => {
                        let mut parts = rest.split_whitespace();
                        let (gap, value) = match (parts.next(), parts.next(), parts.next()) {
                            (Some(g), Some(v), None) => (g, v),
                            _ => {
                                return Err(Error::parse(
                                    n,
                                    "expected `event <gap-seconds> <event-value>`",
                                ))
                            }
                        };
                        let gap = parse_time(n, gap, "event gap")?;
                        let value = parse_event(n, value)?;
                        if value.is_zero() {
                            return Err(Error::parse(
                                n,
                                "event values must be nonzero; quiet stretches are gaps",
                            ));
                        }
                        if !b.saw_event && gap.is_zero() {
                            b.initial_event = value;
                        } else {
                            b.entries.push((gap, value));
                        }
                        b.saw_event = true;
                    }
                }
            }
            other => {
                return Err(Error::parse(n, format!("unknown scenario directive {other:?}")));
            }
        }
    }
    match block {
        Some(b) => close(b, model.as_ref(), &mut set)?,
        None => return Err(Error::parse(1, "scenario document has no blocks")),
    }
    Ok((model, set))
}

/// Render one scenario block in the format [`parse_scenarios`] reads.
pub fn write_scenario_block(model: &dyn DesModel, name: &str, scenario: &Scenario) -> String {
    let mut out = String::new();
    out.push_str(&format!("scenario {name}\n"));
    out.push_str(&format!(
        "init {}\n",
        model.format_state(&scenario.initial_state)
    ));
    out.push_str(&format!("tail {}\n", scenario.tail_duration));
    if !scenario.events.initial_event().is_zero() {
        out.push_str(&format!("event 0 {}\n", scenario.events.initial_event()));
    }
    for (gap, value) in scenario.events.entries() {
        out.push_str(&format!("event {gap} {value}\n"));
    }
    out
}

/// Render a scenario set in the format [`parse_scenarios`] reads, naming
/// blocks `s0`, `s1`, ... in set order.
pub fn write_scenarios(model: &dyn DesModel, set: &ScenarioSet) -> String {
    let mut out = String::new();
    out.push_str(&format!("model {}\n", model.id()));
    for (i, scenario) in set.scenarios().iter().enumerate() {
        out.push_str(&write_scenario_block(model, &format!("s{i}"), scenario));
    }
    out
}

/// Parse an enumeration spec document:
///
/// ```text
/// model <model-id>
/// init <state literal>
/// alphabet <v0> <v1> ...          (optional; defaults to the model's)
/// horizon <seconds>
/// quantum <seconds>
/// constraint max_in_window <seconds> <k>
/// constraint min_gap <seconds>
/// constraint max_total <k>
/// ```
pub fn parse_spec(text: &str) -> Result<(Box<dyn DesModel>, EnumerationSpec), Error> {
    let mut model: Option<Box<dyn DesModel>> = None;
    let mut init: Option<StateKey> = None;
    let mut alphabet: Option<Alphabet> = None;
    let mut horizon: Option<Time> = None;
    let mut quantum: Option<Time> = None;
    let mut constraints: Vec<AdmissibilityConstraint> = Vec::new();
    let mut last = 1;
    for (n, line) in directives(text) {
        last = n;
        let (head, rest) = keyword(line);
        match head {
            "model" => model = Some(build_model(n, rest)?),
            "init" => {
                let m = model
                    .as_deref()
                    .ok_or_else(|| Error::parse(n, "`init` must follow the `model` line"))?;
                init = Some(parse_state(n, m, rest)?);
            }
            "alphabet" => {
                let mut values = Vec::new();
                for token in rest.split_whitespace() {
                    let v: f64 = token
                        .parse()
                        .map_err(|_| Error::parse(n, format!("bad alphabet value {token:?}")))?;
                    values.push(v);
                }
                alphabet =
                    Some(Alphabet::new(values).map_err(|e| Error::parse(n, e.to_string()))?);
            }
            "horizon" => horizon = Some(parse_time(n, rest, "horizon")?),
            "quantum" => quantum = Some(parse_time(n, rest, "quantum")?),
            "constraint" => {
                let (kind, args) = keyword(rest);
                let args: Vec<&str> = args.split_whitespace().collect();
                let constraint = match (kind, args.as_slice()) {
                    ("max_in_window", [window, count]) => {
                        AdmissibilityConstraint::MaxEventsInWindow {
                            window: parse_time(n, window, "window span")?,
                            count: parse_count(n, count, "window count")?,
                        }
                    }
                    ("min_gap", [gap]) => AdmissibilityConstraint::MinGap {
                        gap: parse_time(n, gap, "minimum gap")?,
                    },
                    ("max_total", [count]) => AdmissibilityConstraint::MaxTotalEvents {
                        count: parse_count(n, count, "event total")?,
                    },
                    _ => {
                        return Err(Error::parse(
                            n,
                            format!("unknown or malformed constraint {rest:?}"),
                        ))
                    }
                };
                constraints.push(constraint);
            }
            other => {
                return Err(Error::parse(n, format!("unknown spec directive {other:?}")));
            }
        }
    }
    let model = model.ok_or_else(|| Error::parse(last, "missing `model` line"))?;
    let init = init.ok_or_else(|| Error::parse(last, "missing `init` line"))?;
    let alphabet = alphabet.unwrap_or_else(|| model.alphabet().clone());
    let horizon = horizon.ok_or_else(|| Error::parse(last, "missing `horizon` line"))?;
    let quantum = quantum.ok_or_else(|| Error::parse(last, "missing `quantum` line"))?;
    let mut spec = EnumerationSpec::new(init, alphabet, horizon, quantum);
    spec.constraints = constraints;
    spec.validate()
        .map_err(|e| Error::parse(last, e.to_string()))?;
    Ok((model, spec))
}

/// Render an enumeration spec in the format [`parse_spec`] reads. Custom
/// predicate constraints have no text form and are rejected.
pub fn write_spec(model: &dyn DesModel, spec: &EnumerationSpec) -> Result<String, Error> {
    let mut out = String::new();
    out.push_str(&format!("model {}\n", model.id()));
    out.push_str(&format!("init {}\n", model.format_state(&spec.initial_state)));
    let values: Vec<String> = spec.alphabet.values().map(|e| e.to_string()).collect();
    out.push_str(&format!("alphabet {}\n", values.join(" ")));
    out.push_str(&format!("horizon {}\n", spec.horizon));
    out.push_str(&format!("quantum {}\n", spec.quantum));
    for constraint in &spec.constraints {
        match constraint {
            AdmissibilityConstraint::MaxEventsInWindow { window, count } => {
                out.push_str(&format!("constraint max_in_window {window} {count}\n"));
            }
            AdmissibilityConstraint::MinGap { gap } => {
                out.push_str(&format!("constraint min_gap {gap}\n"));
            }
            AdmissibilityConstraint::MaxTotalEvents { count } => {
                out.push_str(&format!("constraint max_total {count}\n"));
            }
            AdmissibilityConstraint::Custom { name, .. } => {
                return Err(Error::Codec(format!(
                    "custom constraint {name:?} has no text form"
                )));
            }
        }
    }
    Ok(out)
}

/// Parse a property document:
///
/// ```text
/// property <name>                 (optional)
/// clause <output-index> abs_le <bound>
/// clause <output-index> in <lo> <hi>
/// combine all|any                 (optional; defaults to all)
/// ```
pub fn parse_property(text: &str) -> Result<SafetyProperty, Error> {
    let mut name = String::from("property");
    let mut clauses = Vec::new();
    let mut combine = Combine::All;
    for (n, line) in directives(text) {
        let (head, rest) = keyword(line);
        match head {
            "property" => {
                if rest.is_empty() {
                    return Err(Error::parse(n, "property needs a name"));
                }
                name = rest.to_string();
            }
            "clause" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let clause = match parts.as_slice() {
                    [index, "abs_le", bound] => Clause::AbsLe {
                        index: parse_count(n, index, "output index")?,
                        bound: bound
                            .parse()
                            .map_err(|_| Error::parse(n, format!("bad bound {bound:?}")))?,
                    },
                    [index, "in", lo, hi] => Clause::InRange {
                        index: parse_count(n, index, "output index")?,
                        lo: lo
                            .parse()
                            .map_err(|_| Error::parse(n, format!("bad range bound {lo:?}")))?,
                        hi: hi
                            .parse()
                            .map_err(|_| Error::parse(n, format!("bad range bound {hi:?}")))?,
                    },
                    _ => {
                        return Err(Error::parse(
                            n,
                            "expected `clause <i> abs_le <bound>` or `clause <i> in <lo> <hi>`",
                        ))
                    }
                };
                clauses.push(clause);
            }
            "combine" => {
                combine = match rest {
                    "all" => Combine::All,
                    "any" => Combine::Any,
                    other => {
                        return Err(Error::parse(n, format!("combine must be all or any, got {other:?}")))
                    }
                };
            }
            other => {
                return Err(Error::parse(n, format!("unknown property directive {other:?}")));
            }
        }
    }
    if clauses.is_empty() {
        return Err(Error::parse(1, "property document has no clauses"));
    }
    Ok(SafetyProperty::new(name, clauses, combine))
}

/// Render a property in the format [`parse_property`] reads.
pub fn write_property(prop: &SafetyProperty) -> String {
    let mut out = String::new();
    out.push_str(&format!("property {}\n", prop.name));
    for clause in &prop.clauses {
        match *clause {
            Clause::AbsLe { index, bound } => {
                out.push_str(&format!("clause {index} abs_le {bound}\n"));
            }
            Clause::InRange { index, lo, hi } => {
                out.push_str(&format!("clause {index} in {lo} {hi}\n"));
            }
        }
    }
    out.push_str(match prop.combine {
        Combine::All => "combine all\n",
        Combine::Any => "combine any\n",
    });
    out
}

/// Render a transition set as a diff-friendly dump, one
/// `TRANS <src> <event> <duration> <dst>` line per transition in canonical
/// set order, with states as model literals.
pub fn write_transitions(model: &dyn DesModel, set: &TransitionSet) -> String {
    let mut out = String::new();
    for t in set.iter() {
        out.push_str(&format!(
            "TRANS {} {} {} {}\n",
            model.format_state(&t.source),
            t.event,
            t.duration,
            model.format_state(&t.target)
        ));
    }
    out
}

/// Parse a transition dump produced by [`write_transitions`].
pub fn parse_transitions(model: &dyn DesModel, text: &str) -> Result<TransitionSet, Error> {
    let mut transitions = BTreeSet::new();
    for (n, line) in directives(text) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let ["TRANS", src, event, duration, dst] = parts.as_slice() else {
            return Err(Error::parse(
                n,
                "expected `TRANS <src> <event> <duration> <dst>`",
            ));
        };
        transitions.insert(Transition {
            source: parse_state(n, model, src)?,
            event: parse_event(n, event)?,
            duration: parse_time(n, duration, "transition duration")?,
            target: parse_state(n, model, dst)?,
        });
    }
    Ok(transitions.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::des::trace;
    use crate::models::CounterDes;

    const TAU: Time = Time::from_nanos(40_000_000);

    fn counter() -> CounterDes {
        CounterDes::new(5, TAU, Alphabet::new([0.0, 1.0, 2.0]).unwrap()).unwrap()
    }

    #[test]
    fn campaigns_round_trip() {
        let model = counter();
        let mut campaign = Campaign::new("loop check", model.encode(1));
        campaign.bind_root("alt", model.encode(3)).unwrap();
        campaign.push(Command::Run { event: Event::new(1.0).unwrap(), duration: TAU });
        campaign.push(Command::Store("mid".into()));
        campaign.push(Command::Run { event: Event::ZERO, duration: TAU.checked_mul(2).unwrap() });
        campaign.push(Command::Load("mid".into()));
        campaign.push(Command::Free("mid".into()));
        let text = write_campaign(&model, &campaign);
        let (model2, parsed) = parse_campaign(&text).unwrap();
        assert_eq!(model2.id(), model.id());
        assert_eq!(parsed.name(), campaign.name());
        assert_eq!(parsed.init_state(), campaign.init_state());
        assert_eq!(parsed.memory(), campaign.memory());
        assert_eq!(parsed.commands(), campaign.commands());
    }

    #[test]
    fn scenarios_round_trip_including_the_initial_impulse() {
        let model = counter();
        let one = Event::new(1.0).unwrap();
        let two = Event::new(2.0).unwrap();
        let mut set = ScenarioSet::new();
        set.insert(Scenario::new(model.encode(0), EventList::empty(), TAU));
        set.insert(Scenario::new(
            model.encode(2),
            EventList::new(one, [(TAU.checked_mul(2).unwrap(), two)]).unwrap(),
            TAU,
        ));
        let text = write_scenarios(&model, &set);
        let (_, parsed) = parse_scenarios(&text).unwrap();
        assert_eq!(parsed.scenarios(), set.scenarios());
    }

    #[test]
    fn specs_round_trip_with_constraints() {
        let model = counter();
        let mut spec = EnumerationSpec::new(
            model.encode(0),
            model.alphabet().clone(),
            TAU.checked_mul(4).unwrap(),
            TAU,
        );
        spec.constraints.push(AdmissibilityConstraint::MaxEventsInWindow {
            window: TAU.checked_mul(2).unwrap(),
            count: 1,
        });
        spec.constraints.push(AdmissibilityConstraint::MinGap {
            gap: TAU.checked_mul(2).unwrap(),
        });
        spec.constraints.push(AdmissibilityConstraint::MaxTotalEvents { count: 2 });
        let text = write_spec(&model, &spec).unwrap();
        let (model2, parsed) = parse_spec(&text).unwrap();
        assert_eq!(model2.id(), model.id());
        assert_eq!(parsed.initial_state, spec.initial_state);
        assert_eq!(parsed.alphabet, spec.alphabet);
        assert_eq!(parsed.horizon, spec.horizon);
        assert_eq!(parsed.quantum, spec.quantum);
        assert_eq!(format!("{:?}", parsed.constraints), format!("{:?}", spec.constraints));
    }

    #[test]
    fn custom_constraints_have_no_text_form() {
        let model = counter();
        let mut spec = EnumerationSpec::new(
            model.encode(0),
            model.alphabet().clone(),
            TAU,
            TAU,
        );
        spec.constraints
            .push(AdmissibilityConstraint::custom("odd-only", |_| true));
        assert!(matches!(write_spec(&model, &spec), Err(Error::Codec(_))));
    }

    #[test]
    fn properties_round_trip() {
        let prop = SafetyProperty::new(
            "stay low",
            vec![
                Clause::AbsLe { index: 0, bound: 2.5 },
                Clause::InRange { index: 0, lo: -1.0, hi: 4.0 },
            ],
            Combine::Any,
        );
        let text = write_property(&prop);
        assert_eq!(parse_property(&text).unwrap(), prop);
    }

    #[test]
    fn transition_dumps_round_trip() {
        let model = counter();
        let scenario = Scenario::new(
            model.encode(0),
            EventList::new(Event::new(1.0).unwrap(), [(TAU, Event::new(2.0).unwrap())]).unwrap(),
            TAU,
        );
        let set: TransitionSet = trace(&model, &scenario).unwrap().into_iter().collect();
        let text = write_transitions(&model, &set);
        assert_eq!(parse_transitions(&model, &text).unwrap(), set);
        for line in text.lines() {
            assert!(line.starts_with("TRANS "));
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "\n# header comment\nproperty guarded\n\nclause 0 abs_le 1\n# trailing note\ncombine all\n";
        let prop = parse_property(text).unwrap();
        assert_eq!(prop.name, "guarded");
        assert_eq!(prop.clauses.len(), 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "campaign demo\nmodel counter:N=5,step=0.04,alphabet=0|1\ninit 0\nWAIT 3\n";
        match parse_campaign(text).err() {
            Some(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected a parse error, got {other:?}"),
        }
        let text = "model counter\nscenario a\ninit 0\ntail 0.04\nevent 0.04 7\n";
        match parse_scenarios(text).err() {
            // the block closes at end of input, so the alphabet error points
            // at the block header
            Some(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_spec("model counter\ninit 0\nquantum 0.04\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn unknown_models_are_format_errors() {
        let text = "campaign x\nmodel turbine:blades=3\ninit 0\n";
        assert!(matches!(parse_campaign(text), Err(Error::Parse { line: 2, .. })));
    }
}
