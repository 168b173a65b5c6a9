//! Torque-driven rigid pendulum, angle measured from the upright position.
//!
//! Dynamics: `theta'' = (g/l) sin(theta) + u / (m l^2)` where `u` is the
//! event value, held as a constant torque for the whole run. Integration is
//! fixed-step RK4 on the base step, so identical runs are bit-for-bit
//! reproducible and quiet runs split exactly.

use crate::des::{Alphabet, DesModel, Event, StateKey};
use crate::error::Error;
use crate::models::rk4::rk4_step;
use crate::models::vec_state;
use crate::time::Time;

#[derive(Debug)]
pub struct PendulumDes {
    id: String,
    mass: f64,
    length: f64,
    gravity: f64,
    step: Time,
    alphabet: Alphabet,
}

impl PendulumDes {
    pub fn new(
        mass: f64,
        length: f64,
        gravity: f64,
        step: Time,
        alphabet: Alphabet,
    ) -> Result<PendulumDes, Error> {
        for (name, v) in [("m", mass), ("l", length), ("g", gravity)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Domain(format!(
                    "pendulum parameter {name}={v} must be positive"
                )));
            }
        }
        if step.is_zero() {
            return Err(Error::Domain("pendulum step must be positive".into()));
        }
        for e in alphabet.values() {
            if ![-1.0, 0.0, 1.0].contains(&e.value()) {
                return Err(Error::Domain(format!(
                    "pendulum alphabet must be a subset of -1|0|1, got {e}"
                )));
            }
        }
        let id = format!(
            "pendulum:m={mass},l={length},g={gravity},h={step},alphabet={}",
            alphabet.spec_string()
        );
        Ok(PendulumDes { id, mass, length, gravity, step, alphabet })
    }

    pub fn encode(&self, theta: f64, omega: f64) -> StateKey {
        vec_state::encode(&[theta, omega])
    }

    pub fn decode(&self, key: &StateKey) -> Result<[f64; 2], Error> {
        vec_state::decode(key)
    }

    fn deriv(&self, y: &[f64; 2], torque: f64) -> [f64; 2] {
        let accel = (self.gravity / self.length) * y[0].sin()
            + torque / (self.mass * self.length * self.length);
        [y[1], accel]
    }
}

impl DesModel for PendulumDes {
    fn id(&self) -> &str {
        &self.id
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn base_step(&self) -> Time {
        self.step
    }

    fn output_arity(&self) -> usize {
        2
    }

    fn validate_state(&self, key: &StateKey) -> Result<(), Error> {
        self.decode(key).map(|_| ())
    }

    fn observe(&self, key: &StateKey) -> Result<Vec<f64>, Error> {
        let [theta, omega] = self.decode(key)?;
        Ok(vec![theta, omega])
    }

    fn parse_state(&self, literal: &str) -> Result<StateKey, Error> {
        vec_state::parse::<2>(literal)
    }

    fn format_state(&self, key: &StateKey) -> String {
        vec_state::format(key)
    }

    fn sample_state(&self, index: u64) -> StateKey {
        let theta = -1.5 + 0.37 * (index % 9) as f64;
        let omega = -1.0 + 0.29 * (index % 7) as f64;
        self.encode(theta, omega)
    }

    fn phi(&self, steps: u64, state: &StateKey, event: Event) -> Result<StateKey, Error> {
        let torque = event.value();
        let dt = self.step.as_secs_f64();
        let mut y = self.decode(state)?;
        for _ in 0..steps {
            y = rk4_step(|y| self.deriv(y, torque), &y, dt)?;
        }
        Ok(vec_state::encode(&y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> PendulumDes {
        PendulumDes::new(
            1.0,
            1.0,
            9.81,
            Time::from_nanos(1_000_000),
            Alphabet::new([-1.0, 0.0, 1.0]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn upright_rest_is_an_exact_fixed_point() {
        let m = model();
        let x = m.encode(0.0, 0.0);
        let y = m.phi(500, &x, Event::ZERO).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn small_tilt_grows_like_the_linearized_cosh() {
        // Linearized fall from rest: theta(t) = theta0 * cosh(sqrt(g/l) t).
        // The cubic term in sin(theta) keeps the nonlinear answer within 1%
        // of that out to 0.3 s for theta0 = 0.01 rad.
        let m = model();
        let theta0 = 0.01;
        let mut x = m.encode(theta0, 0.0);
        for k in 1..=6u64 {
            x = m
                .run(Time::from_nanos(50_000_000), &x, Event::ZERO)
                .unwrap();
            let t = 0.05 * k as f64;
            let expected = theta0 * (9.81f64.sqrt() * t).cosh();
            let [theta, _] = m.decode(&x).unwrap();
            assert!(
                (theta / expected - 1.0).abs() < 0.01,
                "t={t}: theta={theta} expected~{expected}"
            );
        }
    }

    #[test]
    fn energy_is_conserved_while_swinging() {
        // Swing released near the bottom; with u = 0 the total energy
        // T + U = 0.5 m l^2 w^2 + m g l cos(theta) is an invariant of the
        // exact flow, so RK4 drift over 10 s must stay tiny.
        let m = model();
        let energy = |theta: f64, omega: f64| {
            0.5 * omega * omega + 9.81 * theta.cos()
        };
        let theta0 = std::f64::consts::PI - 0.5;
        let e0 = energy(theta0, 0.0);
        let key = m.phi(10_000, &m.encode(theta0, 0.0), Event::ZERO).unwrap();
        let [theta, omega] = m.decode(&key).unwrap();
        assert!(((energy(theta, omega) - e0) / e0.abs()).abs() < 1e-6);
    }

    #[test]
    fn torque_changes_the_trajectory() {
        let m = model();
        let x = m.encode(0.0, 0.0);
        let pushed = m
            .run(Time::from_nanos(100_000_000), &x, Event::new(1.0).unwrap())
            .unwrap();
        assert_ne!(x, pushed);
        let [theta, omega] = m.decode(&pushed).unwrap();
        assert!(theta > 0.0 && omega > 0.0);
    }

    #[test]
    fn run_rejects_unaligned_durations() {
        let m = model();
        let x = m.sample_state(0);
        let err = m
            .run(Time::from_nanos(1_500_000), &x, Event::ZERO)
            .unwrap_err();
        assert!(matches!(err, Error::Step(_)));
    }

    #[test]
    fn state_literals_round_trip() {
        let m = model();
        let k = m.parse_state("0.05,-0.2").unwrap();
        let text = m.format_state(&k);
        assert_eq!(m.parse_state(&text).unwrap(), k);
        assert_eq!(m.decode(&k).unwrap(), [0.05, -0.2]);
    }
}
