//! The card-deck and urn systems, random table systems, and the JSON
//! system format.

mod format;
mod random;

pub use format::{load_system, save_system, CatalogError};
pub use random::random_table_system;

use crate::measure::{Dynamics, InitialSpec, ItemCount, MeasurementSystem, ReplacementRule, Variable};

pub const COLORS: [&str; 3] = ["Yellow", "Green", "Blue"];
pub const PATTERNS: [&str; 3] = ["Plain", "Dotted", "Striped"];

/// Default urn population, `URN_COUNTS[color][pattern]`. Every color class
/// holds at least two patterns and every pattern class at least two colors,
/// so no reachable urn content is sharp in both variables.
pub const URN_COUNTS: [[u64; 3]; 3] = [[2, 1, 0], [1, 1, 1], [0, 2, 1]];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeckRule {
    /// Replace if the suit is Spades, discard otherwise.
    ReplaceSpades,
    AlwaysReplace,
    AlwaysDiscard,
}

/// Four cards, King and Queen of Hearts and of Spades, drawn under `rule`.
pub fn build_deck(rule: DeckRule) -> MeasurementSystem {
    let replace_on: &[&str] = match rule {
        DeckRule::ReplaceSpades => &["Spades"],
        DeckRule::AlwaysReplace => &["Hearts", "Spades"],
        DeckRule::AlwaysDiscard => &[],
    };
    let variables = vec![
        Variable::base("Face", &["King", "Queen"]),
        Variable::base("Suit", &["Hearts", "Spades"]),
    ];
    let mut population = Vec::new();
    for face in ["King", "Queen"] {
        for suit in ["Hearts", "Spades"] {
            population.push(ItemCount::new(&[("Face", face), ("Suit", suit)], 1));
        }
    }
    MeasurementSystem::new(
        variables,
        Dynamics::Deck(ReplacementRule::new("Suit", replace_on)),
        &population,
        InitialSpec::Full,
    )
    .expect("deck example is well formed")
}

/// The four-card deck under "replace if Spades, discard otherwise".
pub fn build_card_example() -> MeasurementSystem {
    build_deck(DeckRule::ReplaceSpades)
}

/// Balls carrying Color and Pattern, manifested by the urn refill rule.
/// With `include_colorblind`, a coarse `ColorBlind` variable distinguishing
/// only Yellow and Grue (Green or Blue) is registered next to Color.
pub fn build_urn_example(include_colorblind: bool) -> MeasurementSystem {
    let mut variables = vec![
        Variable::base("Color", &COLORS),
        Variable::base("Pattern", &PATTERNS),
    ];
    if include_colorblind {
        variables.push(Variable::coarse(
            "ColorBlind",
            "Color",
            &[("Yellow", &["Yellow"]), ("Grue", &["Green", "Blue"])],
        ));
    }
    let mut population = Vec::new();
    for (ci, color) in COLORS.iter().enumerate() {
        for (pi, pattern) in PATTERNS.iter().enumerate() {
            let n = URN_COUNTS[ci][pi];
            if n > 0 {
                population.push(ItemCount::new(&[("Color", color), ("Pattern", pattern)], n));
            }
        }
    }
    MeasurementSystem::new(variables, Dynamics::Urn, &population, InitialSpec::Full)
        .expect("urn example is well formed")
}

pub const BUILTIN_NAMES: [&str; 4] = ["urn", "card", "deck-replace", "deck-discard"];

pub fn builtin(name: &str) -> Option<MeasurementSystem> {
    match name {
        "urn" => Some(build_urn_example(true)),
        "card" => Some(build_card_example()),
        "deck-replace" => Some(build_deck(DeckRule::AlwaysReplace)),
        "deck-discard" => Some(build_deck(DeckRule::AlwaysDiscard)),
        _ => None,
    }
}

/// Every built-in system with its name.
pub fn catalog() -> Vec<(&'static str, MeasurementSystem)> {
    BUILTIN_NAMES
        .iter()
        .map(|&n| (n, builtin(n).expect("listed builtin")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn urn_population_has_nine_balls() {
        let urn = build_urn_example(false);
        assert_eq!(urn.population().total(), 9);
        assert_eq!(urn.variables().len(), 2);
        assert_eq!(build_urn_example(true).variables().len(), 3);
    }

    #[test]
    fn card_example_shape() {
        let card = build_card_example();
        assert_eq!(card.variables().len(), 2);
        assert!(card.variables().iter().all(|v| v.values.len() == 2));
        assert_eq!(card.population().total(), 4);
    }

    #[test]
    fn builtins_resolve() {
        for name in BUILTIN_NAMES {
            assert!(builtin(name).is_some(), "{name}");
        }
        assert!(builtin("dice").is_none());
    }
}
