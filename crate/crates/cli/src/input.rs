//! Resolving `--game` arguments and parsing inline values.

use std::fs;

use optimin_core::coop::{Allocation, TUGame};
use optimin_core::generators::{named_game, named_tu, NamedTag};
use optimin_core::io::{self, DecisionFile};
use optimin_core::matching::{MarriageProblem, Matching};
use optimin_core::rational::parse_rational;
use optimin_core::{Error, MixedProfile, NormalFormGame, Rational, Result};

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse { path: path.to_string(), message: e.to_string() })
}

/// Prefixes parse-error paths with the file name.
fn in_file<T>(path: &str, result: Result<T>) -> Result<T> {
    result.map_err(|e| match e {
        Error::Parse { path: inner, message } => Error::Parse { path: format!("{path}: {inner}"), message },
        other => other,
    })
}

/// A named instance when `arg` is a known tag, otherwise a game file.
pub fn game(arg: &str) -> Result<NormalFormGame> {
    match arg.parse::<NamedTag>() {
        Ok(tag) => named_game(tag),
        Err(_) => in_file(arg, io::parse_game(&read(arg)?)),
    }
}

pub fn tu_game(arg: &str) -> Result<TUGame> {
    match arg.parse::<NamedTag>() {
        Ok(tag) => named_tu(tag),
        Err(_) => in_file(arg, io::parse_tu(&read(arg)?)),
    }
}

pub fn marriage(path: &str) -> Result<MarriageProblem> {
    in_file(path, io::parse_marriage(&read(path)?))
}

pub fn decision(path: &str) -> Result<DecisionFile> {
    in_file(path, io::parse_decision(&read(path)?))
}

pub fn rationals(text: &str, what: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|t| parse_rational(t).ok_or_else(|| Error::Parameter(format!("bad {what} entry '{}'", t.trim()))))
        .collect()
}

pub fn rational(text: &str, what: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| Error::Parameter(format!("{what} must be a rational, got '{text}'")))
}

/// `1/2,1/2;1,0`: one comma-separated mixture per player.
pub fn mixed(text: &str, game: &NormalFormGame) -> Result<MixedProfile> {
    let profile = MixedProfile(text.split(';').map(|part| rationals(part, "probability")).collect::<Result<_>>()?);
    game.check_mixed(&profile)?;
    Ok(profile)
}

pub fn allocation(text: &str) -> Result<Allocation> {
    rationals(text, "allocation").map(Allocation)
}

/// `a1-b2,a2-b1` (or space separated); anyone unlisted stays single.
pub fn matching(text: &str, problem: &MarriageProblem) -> Result<Matching> {
    let person = |name: &str| {
        problem.index_of(name.trim()).ok_or_else(|| Error::Parameter(format!("unknown individual '{}'", name.trim())))
    };
    let mut pairs = Vec::new();
    for item in text.split([',', ' ']).filter(|s| !s.trim().is_empty()) {
        let (a, b) =
            item.split_once('-').ok_or_else(|| Error::Parameter(format!("expected 'a-b' pairs, got '{item}'")))?;
        if b.trim() == "single" {
            person(a)?;
            continue;
        }
        let (a, b) = (person(a)?, person(b)?);
        pairs.push(if a < problem.size() { (a, b) } else { (b, a) });
    }
    Matching::from_pairs(problem, &pairs)
}
