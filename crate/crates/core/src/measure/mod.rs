//! Exact-probability engine for finite classical measurement systems.

mod engine;
mod model;
mod state;

pub use engine::{Domain, Filtered, SequenceEval};
pub(crate) use model::ResolvedEvent;
pub use model::{
    parse_events, ConfigDescription, Configuration, Dynamics, Event, InitialSpec, Item, ItemCount,
    MeasurementSystem, Pool, ReplacementRule, TransitionTable, Variable, VariableKind,
};
pub use state::PState;
