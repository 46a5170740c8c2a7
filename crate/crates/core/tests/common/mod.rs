#![allow(dead_code)]

pub mod oracle;

use incompat_core::measure::{Configuration, Event, MeasurementSystem, PState};
use incompat_core::rational::ratio;

pub fn ev(s: &str) -> Event {
    s.parse().expect("event literal")
}

pub fn evs(s: &str) -> Vec<Event> {
    incompat_core::measure::parse_events(s).expect("event list literal")
}

/// Point state on the urn class of items carrying `event`.
pub fn class_state(sys: &MeasurementSystem, event: &str) -> PState {
    PState::point(class_config(sys, event))
}

pub fn class_config(sys: &MeasurementSystem, event: &str) -> Configuration {
    sys.update_config(&sys.initial()[0], &ev(event)).expect("urn class")
}

pub fn full_state(sys: &MeasurementSystem) -> PState {
    PState::point(sys.initial()[0].clone())
}

/// Random strictly positive rational mixture over `configs`.
pub fn mixture(configs: &[Configuration], weights: &[u32]) -> PState {
    let total: u64 = configs.iter().zip(weights.iter().cycle()).map(|(_, &w)| w as u64 + 1).sum();
    PState::new(
        configs
            .iter()
            .zip(weights.iter().cycle())
            .map(|(c, &w)| (c.clone(), ratio(w as i64 + 1, total as i64))),
    )
    .expect("valid mixture")
}
