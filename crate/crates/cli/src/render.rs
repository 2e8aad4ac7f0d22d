//! Table and JSON rendering. Tables print `a/b (decimal)`; JSON carries
//! exact strings only.

use serde_json::Value;

use optimin_core::rational::{display, exact};
use optimin_core::{NormalFormGame, Rational};

use crate::Format;

pub fn num(value: &Rational) -> String {
    display(value)
}

pub fn nums(values: &[Rational]) -> String {
    format!("({})", values.iter().map(num).collect::<Vec<_>>().join(", "))
}

pub fn jnum(value: &Rational) -> Value {
    Value::String(exact(value))
}

pub fn jnums(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(jnum).collect())
}

pub fn jlabels(labels: impl IntoIterator<Item = impl Into<String>>) -> Value {
    Value::Array(labels.into_iter().map(|l| Value::String(l.into())).collect())
}

/// Strategy labels of a pure profile.
pub fn jprofile(game: &NormalFormGame, profile: &[usize]) -> Value {
    jlabels(profile.iter().enumerate().map(|(i, &s)| game.strategy_label(i, s)))
}

pub fn profile(game: &NormalFormGame, profile: &[usize]) -> String {
    format!("({})", game.profile_label(profile))
}

/// Mixed profile in table form: `[1/5, 0, 0, 4/5] x [2/5, 3/5]`.
pub fn mixture(profile: &[Vec<Rational>]) -> String {
    profile
        .iter()
        .map(|p| format!("[{}]", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join(" x ")
}

pub fn jmixture(profile: &[Vec<Rational>]) -> Value {
    Value::Array(profile.iter().map(|p| jnums(p)).collect())
}

pub fn header(game: &NormalFormGame, source: &str) -> String {
    let shape: Vec<String> = game.shape().iter().map(ToString::to_string).collect();
    format!("game: {source} ({} players, {})\n", game.num_players(), shape.join("x"))
}

/// Either the table built by `table` or pretty JSON from `json`.
pub fn output(format: Format, table: impl FnOnce() -> String, json: impl FnOnce() -> Value) -> String {
    match format {
        Format::Table => table(),
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&json()).expect("JSON values always serialize");
            text.push('\n');
            text
        }
    }
}
