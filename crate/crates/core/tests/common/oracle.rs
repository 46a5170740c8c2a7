//! Brute-force reference for the card and urn games. Every physical object
//! is listed individually and each draw is enumerated object by object with
//! `Ratio<i64>` arithmetic. Shares no code with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::Ratio;

pub type Q = Ratio<i64>;

/// A physical object: one label per attribute.
pub type Obj = Vec<&'static str>;

#[derive(Clone, Copy, Debug)]
pub enum Pred {
    Is(usize, &'static str),
    OneOf(usize, &'static [&'static str]),
}

impl Pred {
    pub fn holds(&self, o: &Obj) -> bool {
        match *self {
            Pred::Is(a, v) => o[a] == v,
            Pred::OneOf(a, vs) => vs.contains(&o[a]),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Game {
    /// Refill with every population object satisfying the reported predicate.
    Urn(Vec<Obj>),
    /// Put the drawn object back iff `objects[attr]` is one of `replace`.
    Deck { attr: usize, replace: Vec<&'static str> },
}

impl Game {
    fn next(&self, pool: &[Obj], drawn: usize, reported: Pred) -> Vec<Obj> {
        match self {
            Game::Urn(population) => population.iter().filter(|o| reported.holds(o)).cloned().collect(),
            Game::Deck { attr, replace } => {
                if replace.contains(&pool[drawn][*attr]) {
                    pool.to_vec()
                } else {
                    let mut p = pool.to_vec();
                    p.remove(drawn);
                    p
                }
            }
        }
    }
}

/// `Pr(e1 & e2 & ...)` starting from `pool`; an empty pool reports nothing.
pub fn seq_prob(game: &Game, pool: &[Obj], events: &[Pred]) -> Q {
    let Some((first, rest)) = events.split_first() else {
        return Q::from_integer(1);
    };
    if pool.is_empty() {
        return Q::from_integer(0);
    }
    let n = pool.len() as i64;
    let mut total = Q::from_integer(0);
    for i in 0..pool.len() {
        if first.holds(&pool[i]) {
            let next = game.next(pool, i, *first);
            total += Q::new(1, n) * seq_prob(game, &next, rest);
        }
    }
    total
}

/// Canonical form of a pool: sorted list of objects.
pub fn canon(pool: &[Obj]) -> Vec<Obj> {
    let mut p = pool.to_vec();
    p.sort();
    p
}

/// Every non-empty pool reachable from `start` by any single reported value
/// of any of `preds`.
pub fn reachable(game: &Game, start: &[Obj], preds: &[Pred]) -> BTreeSet<Vec<Obj>> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![canon(start)];
    seen.insert(canon(start));
    while let Some(pool) = stack.pop() {
        for p in preds {
            for i in 0..pool.len() {
                if p.holds(&pool[i]) {
                    let next = canon(&game.next(&pool, i, *p));
                    if !next.is_empty() && seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
        }
    }
    seen
}

pub fn deck_cards() -> Vec<Obj> {
    vec![
        vec!["King", "Hearts"],
        vec!["King", "Spades"],
        vec!["Queen", "Hearts"],
        vec!["Queen", "Spades"],
    ]
}

pub const FACE: usize = 0;
pub const SUIT: usize = 1;

pub fn deck_game(replace: &[&'static str]) -> Game {
    Game::Deck {
        attr: SUIT,
        replace: replace.to_vec(),
    }
}

pub const COLOR: usize = 0;
pub const PATTERN: usize = 1;

/// Nine balls: Yellow(Plain 2, Dotted 1), Green(Plain, Dotted, Striped),
/// Blue(Dotted 2, Striped 1).
pub fn urn_balls() -> Vec<Obj> {
    vec![
        vec!["Yellow", "Plain"],
        vec!["Yellow", "Plain"],
        vec!["Yellow", "Dotted"],
        vec!["Green", "Plain"],
        vec!["Green", "Dotted"],
        vec!["Green", "Striped"],
        vec!["Blue", "Dotted"],
        vec!["Blue", "Dotted"],
        vec!["Blue", "Striped"],
    ]
}

pub fn urn_game() -> Game {
    Game::Urn(urn_balls())
}

pub const GRUE: Pred = Pred::OneOf(COLOR, &["Green", "Blue"]);

pub fn urn_class(pred: Pred) -> Vec<Obj> {
    urn_balls().into_iter().filter(|o| pred.holds(o)).collect()
}

pub fn urn_preds() -> Vec<Pred> {
    vec![
        Pred::Is(COLOR, "Yellow"),
        Pred::Is(COLOR, "Green"),
        Pred::Is(COLOR, "Blue"),
        Pred::Is(PATTERN, "Plain"),
        Pred::Is(PATTERN, "Dotted"),
        Pred::Is(PATTERN, "Striped"),
        Pred::OneOf(COLOR, &["Yellow"]),
        GRUE,
    ]
}

pub fn deck_preds() -> Vec<Pred> {
    vec![
        Pred::Is(FACE, "King"),
        Pred::Is(FACE, "Queen"),
        Pred::Is(SUIT, "Hearts"),
        Pred::Is(SUIT, "Spades"),
    ]
}

/// Converts to the library's rational type for comparison.
pub fn q(x: Q) -> incompat_core::Rational {
    incompat_core::rational::ratio(*x.numer(), *x.denom())
}
