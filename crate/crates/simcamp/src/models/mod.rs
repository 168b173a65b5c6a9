//! Concrete models and the id registry.
//!
//! A model id is `name` or `name:key=value,...`; [`build`] turns one into a
//! boxed model. Every model reports a canonical id with all parameters
//! spelled out, so ids echoed into files rebuild the exact same model.

mod cartpole;
mod counter;
mod history;
mod pendulum;
mod rk4;
mod vec_state;

pub use cartpole::CartPoleDes;
pub use counter::CounterDes;
pub use history::HistoryDes;
pub use pendulum::PendulumDes;
pub use rk4::{rk4_integrate, rk4_step};

use std::collections::BTreeMap;

use crate::des::{Alphabet, DesModel};
use crate::error::Error;
use crate::time::Time;

struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(text: &str) -> Result<Params, Error> {
        let mut map = BTreeMap::new();
        // "default" is accepted as an explicit spelling of "no overrides"
        if text.is_empty() || text == "default" {
            return Ok(Params(map));
        }
        for part in text.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("bad model parameter {part:?}")))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Domain(format!("duplicate model parameter {k:?}")));
            }
        }
        Ok(Params(map))
    }

    fn u64_or(&mut self, key: &str, default: u64) -> Result<u64, Error> {
        match self.0.remove(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Domain(format!("bad value {v:?} for parameter {key}"))),
        }
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, Error> {
        match self.0.remove(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Domain(format!("bad value {v:?} for parameter {key}"))),
        }
    }

    fn time_or(&mut self, key: &str, default: &str) -> Result<Time, Error> {
        let text = self.0.remove(key).unwrap_or_else(|| default.to_string());
        Time::parse_secs(&text)
    }

    fn alphabet_or(&mut self, key: &str, default: &str) -> Result<Alphabet, Error> {
        let text = self.0.remove(key).unwrap_or_else(|| default.to_string());
        Alphabet::parse_spec(&text)
    }

    fn finish(self, model: &str) -> Result<(), Error> {
        match self.0.into_keys().next() {
            None => Ok(()),
            Some(k) => Err(Error::Domain(format!(
                "unknown parameter {k:?} for model {model}"
            ))),
        }
    }
}

pub fn build(id: &str) -> Result<Box<dyn DesModel>, Error> {
    let id = id.trim();
    let (name, rest) = match id.split_once(':') {
        Some((n, r)) => (n, r),
        None => (id, ""),
    };
    let mut p = Params::parse(rest)?;
    let model: Box<dyn DesModel> = match name {
        "counter" => Box::new(CounterDes::new(
            p.u64_or("N", 7)?,
            p.time_or("step", "0.04")?,
            p.alphabet_or("alphabet", "0|1")?,
        )?),
        "history" => Box::new(HistoryDes::new(
            p.time_or("step", "0.04")?,
            p.alphabet_or("alphabet", "0|1")?,
        )?),
        "pendulum" => Box::new(PendulumDes::new(
            p.f64_or("m", 1.0)?,
            p.f64_or("l", 1.0)?,
            p.f64_or("g", 9.81)?,
            p.time_or("h", "0.001")?,
            p.alphabet_or("alphabet", "-1|0|1")?,
        )?),
        "cartpole" => Box::new(CartPoleDes::new(
            p.time_or("h", "0.001")?,
            p.alphabet_or("alphabet", "0|1|2")?,
        )?),
        other => return Err(Error::Domain(format!("unknown model {other:?}"))),
    };
    p.finish(name)?;
    Ok(model)
}

/// Canonical ids of every registered model with default parameters.
pub fn default_ids() -> Vec<String> {
    ["counter", "history", "pendulum", "cartpole"]
        .iter()
        .map(|name| build(name).unwrap().id().to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::des::axioms;

    #[test]
    fn canonical_ids_rebuild_the_same_model() {
        for id in default_ids() {
            let rebuilt = build(&id).unwrap();
            assert_eq!(rebuilt.id(), id);
        }
    }

    #[test]
    fn parameters_override_defaults() {
        let m = build("counter:N=5,step=1,alphabet=0|1|2").unwrap();
        assert_eq!(m.id(), "counter:N=5,step=1,alphabet=0|1|2");
        assert_eq!(m.base_step(), Time::from_secs(1));
        assert_eq!(m.alphabet().len(), 3);
        let p = build("pendulum:h=0.01").unwrap();
        assert_eq!(p.id(), "pendulum:m=1,l=1,g=9.81,h=0.01,alphabet=-1|0|1");
    }

    #[test]
    fn bad_ids_are_rejected() {
        assert!(build("teapot").is_err());
        assert!(build("counter:N").is_err());
        assert!(build("counter:N=5,N=6").is_err());
        assert!(build("counter:frobnicate=1").is_err());
        assert!(build("cartpole:alphabet=0|-5").is_err());
    }

    #[test]
    fn every_registered_model_satisfies_the_axioms() {
        for id in default_ids() {
            let model = build(&id).unwrap();
            axioms::check_model(model.as_ref(), 6)
                .unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }
}
