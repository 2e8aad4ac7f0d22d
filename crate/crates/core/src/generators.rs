//! Parametric game families and the named example instances.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::coop::TUGame;
use crate::error::{Error, Result};
use crate::game::NormalFormGame;
use crate::noncoop::{nash_pure, optimin_pure};
use crate::rational::{int, parse_rational, Rational};
use crate::zerosum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedTag {
    Figure1,
    Motivating,
    BattleOfSexes,
    PrisonersDilemma,
    MatchingPennies,
    Bulmer,
    CoopEmptyCore,
    Coop120,
}

impl NamedTag {
    pub const ALL: [NamedTag; 8] = [
        NamedTag::Figure1,
        NamedTag::Motivating,
        NamedTag::BattleOfSexes,
        NamedTag::PrisonersDilemma,
        NamedTag::MatchingPennies,
        NamedTag::Bulmer,
        NamedTag::CoopEmptyCore,
        NamedTag::Coop120,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedTag::Figure1 => "figure1",
            NamedTag::Motivating => "motivating",
            NamedTag::BattleOfSexes => "battle_of_sexes",
            NamedTag::PrisonersDilemma => "prisoners_dilemma",
            NamedTag::MatchingPennies => "matching_pennies",
            NamedTag::Bulmer => "bulmer",
            NamedTag::CoopEmptyCore => "coop_empty_core",
            NamedTag::Coop120 => "coop_120",
        }
    }

    pub fn is_cooperative(self) -> bool {
        matches!(self, NamedTag::CoopEmptyCore | NamedTag::Coop120)
    }
}

impl fmt::Display for NamedTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown named instance '{s}'")))
    }
}

fn labels(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn two_player(rows: &[&str], cols: &[&str], cells: &[(i64, i64)]) -> NormalFormGame {
    let payoffs = cells.iter().flat_map(|&(a, b)| [int(a), int(b)]).collect();
    NormalFormGame::new(labels(&["1", "2"]), vec![labels(rows), labels(cols)], payoffs)
        .expect("static instance is well formed")
}

/// A named noncooperative instance. Cooperative tags are rejected; use
/// [`named_tu`] for those.
pub fn named_game(tag: NamedTag) -> Result<NormalFormGame> {
    Ok(match tag {
        NamedTag::Figure1 => two_player(
            &["Top", "Middle", "Bottom"],
            &["Left", "Center", "Right"],
            &[(100, 100), (100, 105), (0, 0), (105, 100), (95, 95), (0, 210), (0, 0), (210, 0), (5, 5)],
        ),
        NamedTag::Motivating => two_player(&["U", "D"], &["L", "R"], &[(2, 2), (0, 1), (1, 2), (1, 1)]),
        NamedTag::BattleOfSexes => {
            two_player(&["Football", "Opera"], &["Football", "Opera"], &[(2, 1), (0, 0), (0, 0), (1, 2)])
        }
        NamedTag::PrisonersDilemma => prisoners_dilemma(&int(5), &int(3), &int(1), &int(0))?,
        NamedTag::MatchingPennies => {
            two_player(&["Heads", "Tails"], &["Heads", "Tails"], &[(1, -1), (-1, 1), (-1, 1), (1, -1)])
        }
        NamedTag::Bulmer => zerosum::bulmer_game(1)?.into_game(),
        NamedTag::CoopEmptyCore | NamedTag::Coop120 => {
            return Err(Error::Parameter(format!("'{tag}' is a cooperative game")))
        }
    })
}

/// A named TU instance: the three-player example with worths 35/30/25,
/// 90/80/70 for pairs and 110 (or 120) for the grand coalition.
pub fn named_tu(tag: NamedTag) -> Result<TUGame> {
    let grand = match tag {
        NamedTag::CoopEmptyCore => 110,
        NamedTag::Coop120 => 120,
        _ => return Err(Error::Parameter(format!("'{tag}' is not a cooperative game"))),
    };
    // Bitmask order: {1}, {2}, {1,2}, {3}, {1,3}, {2,3}, {1,2,3}.
    let worths = [0, 35, 30, 90, 25, 80, 70, grand];
    TUGame::new(3, worths.into_iter().map(int).collect())
}

/// Traveler's dilemma: claims `min..=max`; the lower claim `k` earns `k + r`,
/// the higher earns `k - r`, equal claims earn the claim.
pub fn travelers(min: i64, max: i64, r: &Rational) -> Result<NormalFormGame> {
    if min < 2 || min >= max {
        return Err(Error::Parameter(format!("claims need 2 <= min < max, got {min}..{max}")));
    }
    if *r <= Rational::one() {
        return Err(Error::Parameter(format!("reward must exceed 1, got {r}")));
    }
    let claims: Vec<String> = (min..=max).map(|k| k.to_string()).collect();
    NormalFormGame::from_fn(labels(&["1", "2"]), vec![claims.clone(), claims], |p| {
        let (a, b) = (int(min + p[0] as i64), int(min + p[1] as i64));
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => vec![a.clone(), a],
            std::cmp::Ordering::Less => vec![&a + r, &a - r],
            std::cmp::Ordering::Greater => vec![&b - r, &b + r],
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentipedeVariant {
    /// Pot starts at (4, 1) for the mover and doubles at every node.
    Increasing,
    /// The stopper always gets 4 and the other player 1.
    Constant,
}

impl FromStr for CentipedeVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "increasing" => Ok(CentipedeVariant::Increasing),
            "constant" => Ok(CentipedeVariant::Constant),
            _ => Err(Error::Parameter(format!("unknown centipede variant '{s}'"))),
        }
    }
}

impl fmt::Display for CentipedeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CentipedeVariant::Increasing => "increasing",
            CentipedeVariant::Constant => "constant",
        })
    }
}

/// Reduced normal form of a centipede with `nodes` decision nodes, player 1
/// moving at odd nodes. A strategy is "stop at my k-th node" or "continue".
/// Stopping at node t pays the mover the large share of that node's pot;
/// if nobody stops, the game ends as if the next mover stopped at node
/// `nodes + 1`.
pub fn centipede(nodes: usize, variant: CentipedeVariant) -> Result<NormalFormGame> {
    if nodes == 0 {
        return Err(Error::Parameter("a centipede needs at least one node".into()));
    }
    let own_nodes = [nodes.div_ceil(2), nodes / 2];
    let strategies: Vec<Vec<String>> = own_nodes
        .iter()
        .map(|&count| {
            let mut s: Vec<String> = (1..=count).map(|k| format!("Stop{k}")).collect();
            s.push("Continue".into());
            s
        })
        .collect();
    let outcome = |node: usize| -> [Rational; 2] {
        // node is 1-based; the mover at node t is player (t - 1) % 2.
        let (big, small) = match variant {
            CentipedeVariant::Increasing => {
                let scale = int(1i64 << (node - 1));
                (int(4) * &scale, scale)
            }
            CentipedeVariant::Constant => (int(4), int(1)),
        };
        if (node - 1).is_multiple_of(2) {
            [big, small]
        } else {
            [small, big]
        }
    };
    NormalFormGame::from_fn(labels(&["1", "2"]), strategies, |p| {
        // Player 1's k-th node is 2k - 1, player 2's is 2k (k is 1-based).
        let stop1 = (p[0] < own_nodes[0]).then(|| 2 * p[0] + 1);
        let stop2 = (p[1] < own_nodes[1]).then(|| 2 * p[1] + 2);
        let node = [stop1, stop2].into_iter().flatten().min().unwrap_or(nodes + 1);
        outcome(node).to_vec()
    })
}

/// The stage-game prisoner's dilemma with temptation, reward, punishment and
/// sucker payoffs.
pub fn prisoners_dilemma(t: &Rational, r: &Rational, p: &Rational, s: &Rational) -> Result<NormalFormGame> {
    if !(t > r && r > p && p > s) {
        return Err(Error::Parameter(format!("need T > R > P > S, got {t}, {r}, {p}, {s}")));
    }
    let payoffs = vec![r.clone(), r.clone(), s.clone(), t.clone(), t.clone(), s.clone(), p.clone(), p.clone()];
    NormalFormGame::new(
        labels(&["1", "2"]),
        vec![labels(&["Cooperate", "Defect"]), labels(&["Cooperate", "Defect"])],
        payoffs,
    )
}

/// One-shot linear public goods game: each of `n` players contributes a
/// level from `levels` and earns `e - c_i + m * sum(c)`.
pub fn public_goods(n: usize, e: &Rational, m: &Rational, levels: &[Rational]) -> Result<NormalFormGame> {
    if n < 2 {
        return Err(Error::Parameter("public goods needs at least two players".into()));
    }
    if *e <= Rational::zero() || *m <= Rational::zero() {
        return Err(Error::Parameter("endowment and MPCR must be positive".into()));
    }
    if levels.len() < 2 || levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter("need at least two strictly increasing contribution levels".into()));
    }
    if levels[0] < Rational::zero() || levels[levels.len() - 1] > *e {
        return Err(Error::Parameter("contribution levels must lie in [0, e]".into()));
    }
    let names: Vec<String> = levels.iter().map(|l| l.to_string()).collect();
    let players = (1..=n).map(|k| k.to_string()).collect();
    NormalFormGame::from_fn(players, vec![names; n], |p| {
        let total: Rational = p.iter().map(|&k| &levels[k]).sum();
        let pot = m * total;
        p.iter().map(|&k| e - &levels[k] + &pot).collect()
    })
}

/// A parametrized family, as swept by [`sweep`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Travelers { min: i64, max: i64, r: Rational },
    Centipede { nodes: usize, variant: CentipedeVariant },
    PrisonersDilemma { t: Rational, r: Rational, p: Rational, s: Rational },
    PublicGoods { n: usize, e: Rational, m: Rational, levels: Vec<Rational> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Travelers { .. } => "travelers",
            Family::Centipede { .. } => "centipede",
            Family::PrisonersDilemma { .. } => "prisoners_dilemma",
            Family::PublicGoods { .. } => "public_goods",
        }
    }

    /// The family with its default parameters: travelers 2..=100 with r = 2,
    /// a 4-node increasing centipede, PD (5,3,1,0) and a two-player public
    /// goods game with e = 10, m = 2/5 and levels {0, 10}.
    pub fn defaults(name: &str) -> Result<Family> {
        Ok(match name {
            "travelers" => Family::Travelers { min: 2, max: 100, r: int(2) },
            "centipede" => Family::Centipede { nodes: 4, variant: CentipedeVariant::Increasing },
            "prisoners_dilemma" => Family::PrisonersDilemma { t: int(5), r: int(3), p: int(1), s: int(0) },
            "public_goods" => Family::PublicGoods {
                n: 2,
                e: int(10),
                m: Rational::new(2.into(), 5.into()),
                levels: vec![int(0), int(10)],
            },
            other => return Err(Error::Parameter(format!("unknown game family '{other}'"))),
        })
    }

    /// Like [`with`](Self::with) but from text; also sets the centipede
    /// `variant` and the public-goods `levels` (comma-separated).
    pub fn set(&self, parameter: &str, text: &str) -> Result<Family> {
        let mut out = self.clone();
        match (&mut out, parameter) {
            (Family::Centipede { variant, .. }, "variant") => *variant = text.parse()?,
            (Family::PublicGoods { levels, .. }, "levels") => {
                *levels = text
                    .split(',')
                    .map(|t| parse_rational(t).ok_or_else(|| Error::Parameter(format!("bad level '{t}'"))))
                    .collect::<Result<_>>()?
            }
            _ => {
                let value = parse_rational(text)
                    .ok_or_else(|| Error::Parameter(format!("{parameter} must be a rational, got '{text}'")))?;
                return self.with(parameter, &value);
            }
        }
        Ok(out)
    }

    pub fn build(&self) -> Result<NormalFormGame> {
        match self {
            Family::Travelers { min, max, r } => travelers(*min, *max, r),
            Family::Centipede { nodes, variant } => centipede(*nodes, *variant),
            Family::PrisonersDilemma { t, r, p, s } => prisoners_dilemma(t, r, p, s),
            Family::PublicGoods { n, e, m, levels } => public_goods(*n, e, m, levels),
        }
    }

    /// Copy of the family with one named parameter replaced.
    pub fn with(&self, parameter: &str, value: &Rational) -> Result<Family> {
        let integer = || -> Result<i64> {
            if !value.is_integer() {
                return Err(Error::Parameter(format!("{parameter} must be an integer, got {value}")));
            }
            i64::try_from(value.to_integer()).map_err(|_| Error::Parameter(format!("{parameter} out of range")))
        };
        let count = || -> Result<usize> {
            usize::try_from(integer()?).map_err(|_| Error::Parameter(format!("{parameter} must be nonnegative")))
        };
        let mut out = self.clone();
        match (&mut out, parameter) {
            (Family::Travelers { r, .. }, "r") => *r = value.clone(),
            (Family::Travelers { min, .. }, "min") => *min = integer()?,
            (Family::Travelers { max, .. }, "max") => *max = integer()?,
            (Family::Centipede { nodes, .. }, "nodes") => *nodes = count()?,
            (Family::PrisonersDilemma { t, .. }, "t") => *t = value.clone(),
            (Family::PrisonersDilemma { r, .. }, "r") => *r = value.clone(),
            (Family::PrisonersDilemma { p, .. }, "p") => *p = value.clone(),
            (Family::PrisonersDilemma { s, .. }, "s") => *s = value.clone(),
            (Family::PublicGoods { n, .. }, "n") => *n = count()?,
            (Family::PublicGoods { e, .. }, "e") => *e = value.clone(),
            (Family::PublicGoods { m, .. }, "m") => *m = value.clone(),
            _ => {
                return Err(Error::Parameter(format!(
                    "family {} has no sweepable parameter '{parameter}'",
                    self.name()
                )))
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub parameter: Rational,
    pub optimin: Vec<String>,
    pub nash: Vec<String>,
}

/// A change of the optimin set between two consecutive sweep values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    pub below: Rational,
    pub at: Rational,
    pub from: Vec<String>,
    pub to: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub family: &'static str,
    pub parameter: String,
    pub rows: Vec<SweepRow>,
    pub thresholds: Vec<Threshold>,
}

/// Pure optimin and Nash sets across `values` of one parameter. Rows come
/// back in the order of `values`; thresholds mark every change of the
/// optimin set between neighbouring rows.
pub fn sweep(base: &Family, parameter: &str, values: &[Rational]) -> Result<SweepReport> {
    if values.is_empty() {
        return Err(Error::EmptyInput("sweep needs at least one parameter value"));
    }
    let rows = values
        .par_iter()
        .map(|v| {
            let game = base.with(parameter, v)?.build()?;
            let optimin = optimin_pure(&game).iter().map(|e| game.profile_label(&e.profile)).collect();
            let nash = nash_pure(&game).iter().map(|p| game.profile_label(p)).collect();
            Ok(SweepRow { parameter: v.clone(), optimin, nash })
        })
        .collect::<Result<Vec<_>>>()?;
    let thresholds = rows
        .windows(2)
        .filter(|w| w[0].optimin != w[1].optimin)
        .map(|w| Threshold {
            below: w[0].parameter.clone(),
            at: w[1].parameter.clone(),
            from: w[0].optimin.clone(),
            to: w[1].optimin.clone(),
        })
        .collect();
    Ok(SweepReport { family: base.name(), parameter: parameter.to_string(), rows, thresholds })
}

/// Parses a sweep range `from:to` or `from:to:step` (rationals), inclusive.
pub fn parse_range(text: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::Parameter(format!("bad range '{text}', expected from:to[:step]"));
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let from = parse_rational(parts[0]).ok_or_else(bad)?;
    let to = parse_rational(parts[1]).ok_or_else(bad)?;
    let step = match parts.get(2) {
        Some(s) => parse_rational(s).ok_or_else(bad)?,
        None => Rational::one(),
    };
    if step <= Rational::zero() || from > to {
        return Err(bad());
    }
    let mut out = Vec::new();
    let mut x = from;
    while x <= to {
        out.push(x.clone());
        x += &step;
        if out.len() > 100_000 {
            return Err(Error::Resource("sweep range has more than 100000 values".into()));
        }
    }
    Ok(out)
}
