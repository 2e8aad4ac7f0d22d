//! JSON file formats for normal-form games, TU games, marriage problems and
//! decision problems.
//!
//! Rationals are written as JSON integers when they are integral (and fit
//! in 64 bits) and as `"a/b"` strings otherwise; both forms are accepted on
//! input. Errors carry a JSON path such as `$.payoffs[2][1][0]`, or a
//! `line L column C` position for syntax errors. Writers are canonical, so
//! `write(parse(write(x))) == write(x)` byte for byte.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use crate::coop::{members, Coalition, TUGame, MAX_PLAYERS};
use crate::decisions::{DecisionProblem, NatureUtility, OcKey, OptimismConstraint};
use crate::error::{Error, Result};
use crate::game::NormalFormGame;
use crate::matching::MarriageProblem;
use crate::rational::{parse_rational, Rational};

fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

/// A JSON value together with its path, for diagnostics.
#[derive(Clone, Copy)]
struct Node<'a> {
    value: &'a Value,
    path: &'a str,
}

fn root(value: &Value) -> Node<'_> {
    Node { value, path: "$" }
}

impl<'a> Node<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.path, message)
    }

    fn object(&self) -> Result<&'a Map<String, Value>> {
        self.value.as_object().ok_or_else(|| self.error("expected an object"))
    }

    fn array(&self) -> Result<&'a Vec<Value>> {
        self.value.as_array().ok_or_else(|| self.error("expected an array"))
    }

    fn string(&self) -> Result<&'a str> {
        self.value.as_str().ok_or_else(|| self.error("expected a string"))
    }

    fn usize(&self) -> Result<usize> {
        self.value.as_u64().and_then(|v| v.to_usize()).ok_or_else(|| self.error("expected a nonnegative integer"))
    }

    fn rational(&self) -> Result<Rational> {
        match self.value {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Rational::from_integer(i.into()))
                } else if let Some(u) = n.as_u64() {
                    Ok(Rational::from_integer(u.into()))
                } else {
                    Err(self.error("decimals are not exact; write an integer or an \"a/b\" string"))
                }
            }
            Value::String(s) => parse_rational(s).ok_or_else(|| self.error(format!("{s:?} is not a rational \"a/b\""))),
            _ => Err(self.error("expected an integer or an \"a/b\" string")),
        }
    }
}

/// Runs `f` on a child node whose path is extended by `suffix`.
fn child<T>(parent: Node<'_>, value: &Value, suffix: &str, f: impl FnOnce(Node<'_>) -> Result<T>) -> Result<T> {
    let path = format!("{}{}", parent.path, suffix);
    f(Node { value, path: &path })
}

fn field<T>(node: Node<'_>, key: &str, f: impl FnOnce(Node<'_>) -> Result<T>) -> Result<T> {
    let value = node.object()?.get(key).ok_or_else(|| node.error(format!("missing field \"{key}\"")))?;
    child(node, value, &format!(".{key}"), f)
}

fn optional_field<T>(node: Node<'_>, key: &str, f: impl FnOnce(Node<'_>) -> Result<T>) -> Result<Option<T>> {
    match node.object()?.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(value) => child(node, value, &format!(".{key}"), f).map(Some),
    }
}

fn elements<T>(node: Node<'_>, mut f: impl FnMut(Node<'_>) -> Result<T>) -> Result<Vec<T>> {
    node.array()?.iter().enumerate().map(|(i, v)| child(node, v, &format!("[{i}]"), &mut f)).collect()
}

fn strings(node: Node<'_>) -> Result<Vec<String>> {
    elements(node, |n| n.string().map(str::to_string))
}

fn unique_labels(node: Node<'_>, what: &str) -> Result<Vec<String>> {
    let labels = strings(node)?;
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(node.error(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(labels)
}

fn rational_json(value: &Rational) -> Value {
    match value.is_integer().then(|| value.to_integer().to_i64()).flatten() {
        Some(i) => Value::from(i),
        None => Value::String(value.to_string()),
    }
}

fn compact(value: &Value) -> String {
    serde_json::to_string(value).expect("JSON values always serialize")
}

fn labels_json(labels: &[String]) -> Value {
    Value::Array(labels.iter().cloned().map(Value::String).collect())
}

// ---------------------------------------------------------------------------
// Normal-form games

/// `{"players": [...], "strategies": [[...], ...], "payoffs": nested}` where
/// `payoffs` nests one array level per player, indexed by strategy, and the
/// innermost array holds one payoff per player.
pub fn parse_game(text: &str) -> Result<NormalFormGame> {
    let doc = parse_document(text)?;
    let top = root(&doc);
    let players = field(top, "players", |n| unique_labels(n, "player"))?;
    if players.is_empty() {
        return Err(top.error("a game needs at least one player"));
    }
    let strategies = field(top, "strategies", |n| {
        let lists = elements(n, |s| unique_labels(s, "strategy"))?;
        if lists.len() != players.len() {
            return Err(n.error(format!("expected {} strategy lists, one per player", players.len())));
        }
        if let Some(i) = lists.iter().position(Vec::is_empty) {
            return Err(n.error(format!("player {} has no strategies", players[i])));
        }
        Ok(lists)
    })?;
    let shape: Vec<usize> = strategies.iter().map(Vec::len).collect();
    let mut flat = Vec::new();
    field(top, "payoffs", |n| collect_payoffs(n, &shape, players.len(), &mut flat))?;
    NormalFormGame::new(players, strategies, flat)
}

fn collect_payoffs(node: Node<'_>, shape: &[usize], n: usize, out: &mut Vec<Rational>) -> Result<()> {
    let items = node.array()?;
    let expected = shape.first().copied().unwrap_or(n);
    if items.len() != expected {
        let what = if shape.is_empty() { "payoffs (one per player)" } else { "entries" };
        return Err(node.error(format!("expected {expected} {what}, found {}", items.len())));
    }
    for (i, v) in items.iter().enumerate() {
        child(node, v, &format!("[{i}]"), |c| {
            if shape.is_empty() {
                out.push(c.rational()?);
                Ok(())
            } else {
                collect_payoffs(c, &shape[1..], n, out)
            }
        })?;
    }
    Ok(())
}

fn nested_payoffs(game: &NormalFormGame, prefix: &mut Vec<usize>) -> Value {
    if prefix.len() == game.num_players() {
        let cell = game.cell_index(prefix);
        return Value::Array(game.cell_payoffs(cell).iter().map(rational_json).collect());
    }
    let k = game.num_strategies(prefix.len());
    Value::Array(
        (0..k)
            .map(|s| {
                prefix.push(s);
                let v = nested_payoffs(game, prefix);
                prefix.pop();
                v
            })
            .collect(),
    )
}

pub fn write_game(game: &NormalFormGame) -> String {
    let strategies = Value::Array(game.strategies().iter().map(|l| labels_json(l)).collect());
    let rows: Vec<String> = (0..game.num_strategies(0)).map(|s| compact(&nested_payoffs(game, &mut vec![s]))).collect();
    format!(
        "{{\n  \"players\": {},\n  \"strategies\": {},\n  \"payoffs\": [\n    {}\n  ]\n}}\n",
        compact(&labels_json(game.players())),
        compact(&strategies),
        rows.join(",\n    ")
    )
}

// ---------------------------------------------------------------------------
// TU games

/// Coalitions in file order: by size, then by members.
fn coalition_order(n: usize) -> Vec<Coalition> {
    let mut all: Vec<Coalition> = (1..1u32 << n).collect();
    all.sort_by_key(|&s| (s.count_ones(), members(s).collect::<Vec<_>>()));
    all
}

fn coalition_key(s: Coalition) -> String {
    members(s).map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// `{"n": 3, "worth": {"1": 35, ..., "1,2,3": 110}}` with 1-based,
/// comma-joined member lists. Every nonempty coalition must be present.
pub fn parse_tu(text: &str) -> Result<TUGame> {
    let doc = parse_document(text)?;
    let top = root(&doc);
    let n = field(top, "n", |v| v.usize())?;
    if n == 0 || n > MAX_PLAYERS {
        return Err(Error::parse("$.n", format!("expected 1..={MAX_PLAYERS} players, got {n}")));
    }
    let mut worth: Vec<Option<Rational>> = vec![None; 1 << n];
    worth[0] = Some(Rational::from_integer(0.into()));
    field(top, "worth", |w| {
        for (key, value) in w.object()? {
            child(w, value, &format!("[{key:?}]"), |node| {
                let mut mask: Coalition = 0;
                for part in key.split(',') {
                    let i: usize = part
                        .trim()
                        .parse()
                        .ok()
                        .filter(|&i| (1..=n).contains(&i))
                        .ok_or_else(|| node.error(format!("{part:?} is not a player in 1..={n}")))?;
                    if mask & (1 << (i - 1)) != 0 {
                        return Err(node.error(format!("player {i} listed twice")));
                    }
                    mask |= 1 << (i - 1);
                }
                if worth[mask as usize].is_some() {
                    return Err(node.error("coalition listed twice"));
                }
                worth[mask as usize] = Some(node.rational()?);
                Ok(())
            })?;
        }
        if let Some(missing) = coalition_order(n).into_iter().find(|&s| worth[s as usize].is_none()) {
            return Err(w.error(format!("missing worth for coalition \"{}\"", coalition_key(missing))));
        }
        Ok(())
    })?;
    TUGame::new(n, worth.into_iter().map(|w| w.expect("checked")).collect())
}

pub fn write_tu(game: &TUGame) -> String {
    let entries: Vec<String> = coalition_order(game.num_players())
        .into_iter()
        .map(|s| format!("\"{}\": {}", coalition_key(s), compact(&rational_json(game.worth(s)))))
        .collect();
    format!("{{\n  \"n\": {},\n  \"worth\": {{\n    {}\n  }}\n}}\n", game.num_players(), entries.join(",\n    "))
}

// ---------------------------------------------------------------------------
// Marriage problems

/// `{"A": [...], "B": [...], "prefs": {"a1": ["b2", "a1"], ...}}`. Each list
/// ranks partners and the individual itself, best first; partners ranked
/// after oneself, or not listed, are unacceptable.
pub fn parse_marriage(text: &str) -> Result<MarriageProblem> {
    let doc = parse_document(text)?;
    let top = root(&doc);
    let a = field(top, "A", |n| unique_labels(n, "individual"))?;
    let b = field(top, "B", |n| unique_labels(n, "individual"))?;
    if a.len() != b.len() {
        return Err(top.error(format!("sides must have equal size, got {} and {}", a.len(), b.len())));
    }
    let labels: Vec<&String> = a.iter().chain(&b).collect();
    if let Some(dup) = b.iter().find(|l| a.contains(l)) {
        return Err(top.error(format!("{dup:?} appears on both sides")));
    }
    let prefs = field(top, "prefs", |p| {
        let map = p.object()?;
        if let Some(unknown) = map.keys().find(|k| !labels.contains(k)) {
            return Err(p.error(format!("preferences given for unknown individual {unknown:?}")));
        }
        labels
            .iter()
            .map(|&who| {
                let value = map.get(who).ok_or_else(|| p.error(format!("missing preferences for {who:?}")))?;
                child(p, value, &format!(".{who}"), |list| {
                    elements(list, |item| {
                        let name = item.string()?;
                        labels
                            .iter()
                            .position(|l| *l == name)
                            .ok_or_else(|| item.error(format!("unknown individual {name:?}")))
                    })
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    MarriageProblem::new(a, b, prefs)
}

pub fn write_marriage(problem: &MarriageProblem) -> String {
    let n = problem.size();
    let side = |range: std::ops::Range<usize>| compact(&labels_json(&problem.labels()[range]));
    let prefs: Vec<String> = (0..2 * n)
        .map(|i| {
            let list: Vec<String> = problem.preferences(i).iter().map(|&j| problem.label(j).to_string()).collect();
            format!("{}: {}", compact(&Value::String(problem.label(i).into())), compact(&labels_json(&list)))
        })
        .collect();
    format!(
        "{{\n  \"A\": {},\n  \"B\": {},\n  \"prefs\": {{\n    {}\n  }}\n}}\n",
        side(0..n),
        side(n..2 * n),
        prefs.join(",\n    ")
    )
}

// ---------------------------------------------------------------------------
// Decision problems

/// A decision problem with its optimism constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionFile {
    pub problem: DecisionProblem,
    pub oc: OptimismConstraint,
}

/// ```text
/// {
///   "acts": ["buy", "rent"],
///   "states": ["boom", "bust"],
///   "feasible_states": {"buy": ["boom", "bust"], ...},   optional, default all
///   "feasible_acts": {"boom": ["buy", "rent"], ...},     optional, default all
///   "utility": [[10, -5], [2, 1]],                      null where infeasible
///   "nature": "absent" | "antagonist" | [[...]],        optional, default absent
///   "oc": {"*": ["boom", "bust"], "buy": ["boom"]},
///   "oc_nature": {"*": ["buy", "rent"]}                 optional
/// }
/// ```
/// Constraint keys are `*`, `act`, `act,state`, `act,*` or `*,state`.
pub fn parse_decision(text: &str) -> Result<DecisionFile> {
    let doc = parse_document(text)?;
    let top = root(&doc);
    let acts = field(top, "acts", |n| unique_labels(n, "act"))?;
    let states = field(top, "states", |n| unique_labels(n, "state"))?;
    let find = |labels: &[String], node: Node<'_>, name: &str, what: &str| {
        labels.iter().position(|l| l == name).ok_or_else(|| node.error(format!("unknown {what} {name:?}")))
    };
    let adjacency = |key: &str, from: &[String], to: &[String], from_what: &str, to_what: &str| {
        optional_field(top, key, |node| {
            let map = node.object()?;
            from.iter()
                .map(|who| match map.get(who) {
                    None => Ok((0..to.len()).collect()),
                    Some(v) => child(node, v, &format!(".{who}"), |list| {
                        elements(list, |item| find(to, item, item.string()?, to_what))
                    }),
                })
                .collect::<Result<Vec<Vec<usize>>>>()
                .and_then(|lists| match map.keys().find(|k| !from.contains(k)) {
                    Some(k) => Err(node.error(format!("unknown {from_what} {k:?}"))),
                    None => Ok(lists),
                })
        })
        .map(|lists| lists.unwrap_or_else(|| vec![(0..to.len()).collect(); from.len()]))
    };
    let feasible_states = adjacency("feasible_states", &acts, &states, "act", "state")?;
    let feasible_acts = adjacency("feasible_acts", &states, &acts, "state", "act")?;
    let table = |node: Node<'_>| -> Result<Vec<Vec<Option<Rational>>>> {
        let rows = elements(node, |row| {
            elements(row, |cell| if cell.value.is_null() { Ok(None) } else { cell.rational().map(Some) })
        })?;
        if rows.len() != acts.len() || rows.iter().any(|r| r.len() != states.len()) {
            return Err(node.error(format!("expected a {} x {} table (acts x states)", acts.len(), states.len())));
        }
        Ok(rows)
    };
    let utility = field(top, "utility", table)?;
    let nature = optional_field(top, "nature", |node| match node.value {
        Value::String(s) if s == "absent" => Ok(NatureUtility::Absent),
        Value::String(s) if s == "antagonist" => Ok(NatureUtility::Antagonist),
        Value::Array(_) => table(node).map(NatureUtility::Table),
        _ => Err(node.error("expected \"absent\", \"antagonist\" or a utility table")),
    })?
    .unwrap_or(NatureUtility::Absent);

    let oc_table = |key: &str, targets: &[String], what: &str| -> Result<BTreeMap<OcKey, Vec<usize>>> {
        Ok(optional_field(top, key, |node| {
            let mut out = BTreeMap::new();
            for (k, v) in node.object()? {
                child(node, v, &format!("[{k:?}]"), |entry| {
                    let (act, state) = k.split_once(',').unwrap_or((k.as_str(), "*"));
                    let act = match act.trim() {
                        "*" => None,
                        name => Some(find(&acts, entry, name, "act")?),
                    };
                    let state = match state.trim() {
                        "*" => None,
                        name => Some(find(&states, entry, name, "state")?),
                    };
                    let list = elements(entry, |item| find(targets, item, item.string()?, what))?;
                    out.insert((act, state), list);
                    Ok(())
                })?;
            }
            Ok(out)
        })?
        .unwrap_or_default())
    };
    let oc =
        OptimismConstraint { states: oc_table("oc", &states, "state")?, acts: oc_table("oc_nature", &acts, "act")? };
    if oc.states.is_empty() {
        return Err(top.error("missing field \"oc\" (use {\"*\": [...]} for a constant constraint)"));
    }
    let problem = DecisionProblem::new(acts, states, feasible_states, feasible_acts, utility, nature)?;
    Ok(DecisionFile { problem, oc })
}

pub fn write_decision(file: &DecisionFile) -> String {
    let p = &file.problem;
    let (acts, states) = (p.acts(), p.states());
    let names =
        |labels: &[String], idx: &[usize]| labels_json(&idx.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>());
    let adjacency = |from: &[String], to: &[String], list: &dyn Fn(usize) -> Vec<usize>| {
        let mut m = Map::new();
        for (i, who) in from.iter().enumerate() {
            m.insert(who.clone(), names(to, &list(i)));
        }
        compact(&Value::Object(m))
    };
    let table = |cell: &dyn Fn(usize, usize) -> Option<Rational>| {
        let rows: Vec<Value> = (0..acts.len())
            .map(|a| {
                Value::Array((0..states.len()).map(|s| cell(a, s).map_or(Value::Null, |u| rational_json(&u))).collect())
            })
            .collect();
        compact(&Value::Array(rows))
    };
    let nature = match p.nature() {
        NatureUtility::Absent => "\"absent\"".to_string(),
        NatureUtility::Antagonist => "\"antagonist\"".to_string(),
        NatureUtility::Table(t) => table(&|a, s| t[a][s].clone()),
    };
    let oc_json = |map: &BTreeMap<OcKey, Vec<usize>>, targets: &[String]| {
        let mut m = Map::new();
        for ((a, s), list) in map {
            let key = match (a, s) {
                (None, None) => "*".to_string(),
                (Some(a), None) => acts[*a].clone(),
                (a, s) => format!("{},{}", a.map_or("*", |a| acts[a].as_str()), s.map_or("*", |s| states[s].as_str())),
            };
            m.insert(key, names(targets, list));
        }
        compact(&Value::Object(m))
    };
    let mut out = format!(
        "{{\n  \"acts\": {},\n  \"states\": {},\n  \"feasible_states\": {},\n  \"feasible_acts\": {},\n  \"utility\": {},\n  \"nature\": {},\n  \"oc\": {}",
        compact(&labels_json(acts)),
        compact(&labels_json(states)),
        adjacency(acts, states, &|a| p.feasible_states(a).to_vec()),
        adjacency(states, acts, &|s| p.feasible_acts(s).to_vec()),
        table(&|a, s| p.utility(a, s).cloned()),
        nature,
        oc_json(&file.oc.states, states),
    );
    if !file.oc.acts.is_empty() {
        out.push_str(&format!(",\n  \"oc_nature\": {}", oc_json(&file.oc.acts, acts)));
    }
    out.push_str("\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{centipede, named_game, named_tu, travelers, CentipedeVariant, NamedTag};
    use crate::rational::{int, ratio};

    #[test]
    fn game_round_trip() {
        for tag in NamedTag::ALL.iter().filter(|t| !t.is_cooperative()) {
            let g = named_game(*tag).unwrap();
            let text = write_game(&g);
            let back = parse_game(&text).unwrap();
            assert_eq!(back, g, "{tag}");
            assert_eq!(write_game(&back), text);
        }
        for g in [travelers(2, 10, &ratio(5, 2)).unwrap(), centipede(4, CentipedeVariant::Increasing).unwrap()] {
            assert_eq!(write_game(&parse_game(&write_game(&g)).unwrap()), write_game(&g));
        }
    }

    #[test]
    fn game_text_shape() {
        let text = write_game(&named_game(NamedTag::PrisonersDilemma).unwrap());
        assert!(text.contains("\"strategies\": [[\"Cooperate\",\"Defect\"],[\"Cooperate\",\"Defect\"]]"), "{text}");
        let g = parse_game(r#"{"players":["x"],"strategies":[["a","b"]],"payoffs":[["1/2"],[3]]}"#).unwrap();
        assert_eq!(g.payoff_at(&[0], 0), &ratio(1, 2));
        assert!(write_game(&g).contains("[\"1/2\"]"));
    }

    fn parse_error(result: Result<impl std::fmt::Debug>) -> (String, String) {
        match result {
            Err(Error::Parse { path, message }) => (path, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn game_diagnostics() {
        let (path, _) =
            parse_error(parse_game("{\"players\": [\"1\"],\n \"strategies\": [[\"a\"]], \"payoffs\": [[1]"));
        assert!(path.starts_with("line 2"), "{path}");
        let (path, message) = parse_error(parse_game(
            r#"{"players":["1","2"],"strategies":[["a","b"],["c"]],"payoffs":[[[1,2]],[[3]]]}"#,
        ));
        assert_eq!(path, "$.payoffs[1][0]");
        assert!(message.contains("one per player"));
        let (path, _) = parse_error(parse_game(r#"{"players":["1"],"strategies":[["a"]],"payoffs":[[0.5]]}"#));
        assert_eq!(path, "$.payoffs[0][0]");
        let (path, _) = parse_error(parse_game(r#"{"players":["1"],"strategies":[["a","a"]],"payoffs":[[1],[2]]}"#));
        assert_eq!(path, "$.strategies[0]");
        let (path, _) = parse_error(parse_game(r#"{"players":["1"],"payoffs":[]}"#));
        assert_eq!(path, "$");
    }

    #[test]
    fn tu_round_trip_and_errors() {
        let g = named_tu(NamedTag::CoopEmptyCore).unwrap();
        let text = write_tu(&g);
        assert!(text.contains("\"2,3\": 70"));
        assert!(text.find("\"3\"").unwrap() < text.find("\"1,2\"").unwrap());
        assert_eq!(parse_tu(&text).unwrap(), g);
        let missing = text.replace(",\n    \"2,3\": 70", "");
        let (path, message) = parse_error(parse_tu(&missing));
        assert_eq!((path.as_str(), message.as_str()), ("$.worth", "missing worth for coalition \"2,3\""));
        let (path, _) = parse_error(parse_tu(r#"{"n":2,"worth":{"1":1,"2":1,"1,3":2}}"#));
        assert_eq!(path, "$.worth[\"1,3\"]");
        assert!(parse_tu(r#"{"n":1,"worth":{"1":"7/2"}}"#).unwrap().worth(1) == &ratio(7, 2));
    }

    #[test]
    fn marriage_round_trip() {
        let text = r#"{"A":["a1","a2"],"B":["b1","b2"],"prefs":{"a1":["b2","b1","a1"],"a2":["b1","a2"],"b1":["a1","a2","b1"],"b2":["b2"]}}"#;
        let p = parse_marriage(text).unwrap();
        assert!(!p.acceptable(1, 3));
        assert!(!p.acceptable(3, 0));
        let canonical = write_marriage(&p);
        assert_eq!(parse_marriage(&canonical).unwrap(), p);
        assert_eq!(write_marriage(&parse_marriage(&canonical).unwrap()), canonical);
        let (path, _) = parse_error(parse_marriage(&text.replace("\"b1\",\"a2\"]", "\"zz\",\"a2\"]")));
        assert_eq!(path, "$.prefs.a2[0]");
    }

    #[test]
    fn decision_round_trip() {
        let text = r#"{
            "acts": ["buy", "rent"],
            "states": ["boom", "bust"],
            "utility": [[10, -5], [2, 1]],
            "oc": {"*": ["boom", "bust"], "buy": ["boom"]}
        }"#;
        let file = parse_decision(text).unwrap();
        assert_eq!(file.oc.states_for(0, 1), Some(&vec![0]));
        assert_eq!(file.oc.states_for(1, 1), Some(&vec![0, 1]));
        assert_eq!(file.problem.utility(0, 1), Some(&int(-5)));
        let canonical = write_decision(&file);
        assert_eq!(parse_decision(&canonical).unwrap(), file);
        assert_eq!(write_decision(&parse_decision(&canonical).unwrap()), canonical);
        let (path, _) = parse_error(parse_decision(&text.replace("\"buy\": [\"boom\"]", "\"buy,rain\": [\"boom\"]")));
        assert_eq!(path, "$.oc[\"buy,rain\"]");
    }

    #[test]
    fn decision_with_feasibility() {
        let text = r#"{
            "acts": ["a", "b"],
            "states": ["s", "t"],
            "feasible_states": {"b": ["t"]},
            "feasible_acts": {"s": ["a"]},
            "utility": [[3, -2], [null, 1]],
            "nature": "antagonist",
            "oc": {"*": ["s", "t"], "b,*": ["t"]},
            "oc_nature": {"*,t": ["a", "b"]}
        }"#;
        let file = parse_decision(text).unwrap();
        assert!(!file.problem.is_feasible(1, 0));
        let canonical = write_decision(&file);
        assert_eq!(write_decision(&parse_decision(&canonical).unwrap()), canonical);
        assert!(parse_decision(&text.replace("[null, 1]", "[4, 1]")).is_err());
    }
}
