//! Finite event lists: gap-encoded impulse sequences.
//!
//! An event list is an initial event at time 0 followed by entries
//! `(gap, value)`, each gap strictly positive. The list denotes the
//! impulse sum `p0*delta(t) + sum_i p_i*delta(t - t_i)` with `t_i` the
//! prefix sums of the gaps. Entries with value 0 are permitted: they add
//! nothing to the denoted function but act as slicing points, so a trace
//! can expose intermediate states of long quiet stretches. The canonical
//! form produced by [`EventList::from_impulses`] carries no zero entries.

use crate::des::model::{Alphabet, Event};
use crate::error::Error;
use crate::time::Time;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventList {
    initial_event: Event,
    entries: Vec<(Time, Event)>,
}

impl EventList {
    /// Build from an initial event and `(gap, value)` entries. Every gap
    /// must be strictly positive.
    pub fn new(
        initial_event: Event,
        entries: impl IntoIterator<Item = (Time, Event)>,
    ) -> Result<EventList, Error> {
        let entries: Vec<_> = entries.into_iter().collect();
        for (gap, _) in &entries {
            if gap.is_zero() {
                return Err(Error::Domain("event list gaps must be positive".into()));
            }
        }
        Ok(EventList { initial_event, entries })
    }

    /// The empty list: quiet initial event, no entries.
    pub fn empty() -> EventList {
        EventList { initial_event: Event::ZERO, entries: Vec::new() }
    }

    /// Canonical list for a set of timed impulses. Times must be strictly
    /// increasing and magnitudes nonzero members of `alphabet`; an impulse
    /// at time 0 becomes the initial event.
    pub fn from_impulses(
        impulses: &[(Time, Event)],
        alphabet: &Alphabet,
    ) -> Result<EventList, Error> {
        let mut initial = Event::ZERO;
        let mut entries = Vec::new();
        let mut prev: Option<Time> = None;
        for &(t, p) in impulses {
            if p.is_zero() {
                return Err(Error::Domain("impulse magnitudes must be nonzero".into()));
            }
            alphabet.require(p)?;
            if let Some(prev) = prev {
                if t <= prev {
                    return Err(Error::Domain("impulse times must be strictly increasing".into()));
                }
            }
            match prev {
                None if t.is_zero() => initial = p,
                None => entries.push((t, p)),
                Some(prev) => entries.push((t.checked_sub(prev).unwrap(), p)),
            }
            prev = Some(t);
        }
        Ok(EventList { initial_event: initial, entries })
    }

    /// Timed nonzero impulses denoted by this list; inverse of
    /// [`EventList::from_impulses`] on canonical lists. Zero-valued entries
    /// and a quiet initial event contribute nothing.
    pub fn impulses(&self) -> Vec<(Time, Event)> {
        let mut out = Vec::new();
        if !self.initial_event.is_zero() {
            out.push((Time::ZERO, self.initial_event));
        }
        let mut t = Time::ZERO;
        for &(gap, p) in &self.entries {
            t = t.checked_add(gap).expect("event time overflow");
            if !p.is_zero() {
                out.push((t, p));
            }
        }
        out
    }

    pub fn initial_event(&self) -> Event {
        self.initial_event
    }

    pub fn entries(&self) -> &[(Time, Event)] {
        &self.entries
    }

    pub fn is_quiet(&self) -> bool {
        self.impulses().is_empty()
    }

    /// Time of the last nonzero impulse; zero for a quiet list.
    pub fn horizon(&self) -> Time {
        self.impulses().last().map(|&(t, _)| t).unwrap_or(Time::ZERO)
    }

    /// Sum of all gaps: the time of the last entry, zero entries included.
    pub fn span(&self) -> Time {
        let mut t = Time::ZERO;
        for &(gap, _) in &self.entries {
            t = t.checked_add(gap).expect("event time overflow");
        }
        t
    }

    /// Concatenate `self`, regarded as occupying the window `[0, window)`,
    /// with `other` shifted to start at `window`. The window must strictly
    /// exceed the span of `self`. The result is canonical.
    pub fn concat(&self, window: Time, other: &EventList) -> Result<EventList, Error> {
        if window <= self.span() {
            return Err(Error::Domain(format!(
                "window {window} does not cover the first list (span {})",
                self.span()
            )));
        }
        let mut impulses = self.impulses();
        if !other.initial_event.is_zero() {
            impulses.push((window, other.initial_event));
        }
        for (t, p) in other.impulses() {
            if t.is_zero() {
                continue; // already added as the shifted initial event
            }
            impulses.push((window.checked_add(t).unwrap(), p));
        }
        let initial = if impulses.first().map(|&(t, _)| t.is_zero()).unwrap_or(false) {
            impulses.remove(0).1
        } else {
            Event::ZERO
        };
        let mut entries = Vec::new();
        let mut prev = Time::ZERO;
        for (t, p) in impulses {
            entries.push((t.checked_sub(prev).unwrap(), p));
            prev = t;
        }
        Ok(EventList { initial_event: initial, entries })
    }

    /// Restriction to `[from, to)`, re-based so `from` becomes time 0.
    /// The result is canonical.
    pub fn restrict(&self, from: Time, to: Time) -> Result<EventList, Error> {
        if to <= from {
            return Err(Error::Domain(format!("empty restriction window [{from}, {to})")));
        }
        let mut initial = Event::ZERO;
        let mut kept: Vec<(Time, Event)> = Vec::new();
        for (t, p) in self.impulses() {
            if t < from || t >= to {
                continue;
            }
            let t = t.checked_sub(from).unwrap();
            if t.is_zero() {
                initial = p;
            } else {
                kept.push((t, p));
            }
        }
        let mut entries = Vec::new();
        let mut prev = Time::ZERO;
        for (t, p) in kept {
            entries.push((t.checked_sub(prev).unwrap(), p));
            prev = t;
        }
        Ok(EventList { initial_event: initial, entries })
    }

    /// Verify that every event value is a member of `alphabet`.
    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<(), Error> {
        alphabet.require(self.initial_event)?;
        for &(_, p) in &self.entries {
            alphabet.require(p)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: f64) -> Event {
        Event::new(v).unwrap()
    }

    fn secs(s: &str) -> Time {
        Time::parse_secs(s).unwrap()
    }

    fn alphabet123() -> Alphabet {
        Alphabet::new([0.0, 1.0, 2.0, 3.0]).unwrap()
    }

    /// Impulses at 3, 5, 10, 13 with magnitudes 2, 3, 1, 2 turn into gaps
    /// 3, 2, 5, 3 from a quiet start.
    #[test]
    fn gap_encoding_of_absolute_times() {
        let imp = [
            (secs("3"), ev(2.0)),
            (secs("5"), ev(3.0)),
            (secs("10"), ev(1.0)),
            (secs("13"), ev(2.0)),
        ];
        let list = EventList::from_impulses(&imp, &alphabet123()).unwrap();
        assert_eq!(list.initial_event(), Event::ZERO);
        assert_eq!(
            list.entries(),
            &[
                (secs("3"), ev(2.0)),
                (secs("2"), ev(3.0)),
                (secs("5"), ev(1.0)),
                (secs("3"), ev(2.0)),
            ]
        );
        assert_eq!(list.horizon(), secs("13"));
        assert_eq!(list.impulses(), imp.to_vec());
    }

    #[test]
    fn initial_impulse_at_time_zero() {
        let list = EventList::from_impulses(
            &[(Time::ZERO, ev(1.0)), (secs("0.5"), ev(2.0))],
            &alphabet123(),
        )
        .unwrap();
        assert_eq!(list.initial_event(), ev(1.0));
        assert_eq!(list.entries(), &[(secs("0.5"), ev(2.0))]);
        assert_eq!(list.horizon(), secs("0.5"));
    }

    #[test]
    fn horizon_of_quiet_list_is_zero() {
        assert_eq!(EventList::empty().horizon(), Time::ZERO);
        assert!(EventList::empty().is_quiet());
        // a zero entry is a slicing point, not an impulse
        let sliced = EventList::new(Event::ZERO, [(secs("1"), Event::ZERO)]).unwrap();
        assert!(sliced.is_quiet());
        assert_eq!(sliced.horizon(), Time::ZERO);
        assert_eq!(sliced.span(), secs("1"));
    }

    #[test]
    fn from_impulses_rejects_bad_input() {
        let a = alphabet123();
        assert!(EventList::from_impulses(&[(secs("1"), Event::ZERO)], &a).is_err());
        assert!(
            EventList::from_impulses(&[(secs("2"), ev(1.0)), (secs("1"), ev(1.0))], &a).is_err()
        );
        assert!(EventList::from_impulses(&[(secs("1"), ev(9.0))], &a).is_err());
    }

    #[test]
    fn concat_shifts_and_keeps_initials() {
        let a = alphabet123();
        let one = EventList::from_impulses(&[(secs("1"), ev(1.0))], &a).unwrap();
        let cat = one.concat(secs("2"), &one).unwrap();
        assert_eq!(
            cat.impulses(),
            vec![(secs("1"), ev(1.0)), (secs("3"), ev(1.0))]
        );
        assert_eq!(cat.entries(), &[(secs("1"), ev(1.0)), (secs("2"), ev(1.0))]);
        // window must strictly exceed the span
        assert!(one.concat(secs("1"), &one).is_err());
        // an initial impulse of the right operand lands exactly at the window
        let init = EventList::from_impulses(&[(Time::ZERO, ev(2.0))], &a).unwrap();
        let cat = one.concat(secs("2"), &init).unwrap();
        assert_eq!(cat.impulses(), vec![(secs("1"), ev(1.0)), (secs("2"), ev(2.0))]);
    }

    #[test]
    fn restrict_rebases_the_window() {
        let imp = [
            (secs("3"), ev(2.0)),
            (secs("5"), ev(3.0)),
            (secs("10"), ev(1.0)),
            (secs("13"), ev(2.0)),
        ];
        let list = EventList::from_impulses(&imp, &alphabet123()).unwrap();
        let cut = list.restrict(secs("4"), secs("11")).unwrap();
        assert_eq!(cut.impulses(), vec![(secs("1"), ev(3.0)), (secs("6"), ev(1.0))]);
        // window start exactly on an impulse makes it the initial event
        let cut = list.restrict(secs("3"), secs("4")).unwrap();
        assert_eq!(cut.initial_event(), ev(2.0));
        assert!(list.restrict(secs("4"), secs("4")).is_err());
    }

    #[test]
    fn horizon_of_concat_adds_the_window() {
        let a = alphabet123();
        let left = EventList::from_impulses(&[(secs("1"), ev(1.0))], &a).unwrap();
        let right = EventList::from_impulses(&[(secs("4"), ev(2.0))], &a).unwrap();
        let cat = left.concat(secs("2"), &right).unwrap();
        assert_eq!(cat.horizon(), secs("6"));
    }
}
