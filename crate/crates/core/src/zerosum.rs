//! Two-player zero-sum (statistical) games: maximin mixtures by LP and the
//! check that optimin and maximin pairs coincide.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{MixedProfile, NormalFormGame};
use crate::lp::{solve_lp, Direction, LinearProgram, LpSolution, Relation};
use crate::rational::{ratio, Rational};

/// A two-player game with `u_2 = -u_1` in every cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatisticalGame(NormalFormGame);

impl StatisticalGame {
    pub fn new(game: NormalFormGame) -> Result<Self> {
        if game.num_players() != 2 {
            return Err(Error::UnsupportedArity { what: "statistical games", expected: 2, found: game.num_players() });
        }
        if game.constant_sum() != Some(Rational::zero()) {
            return Err(Error::Domain("game is not zero-sum".into()));
        }
        Ok(StatisticalGame(game))
    }

    /// Builds the game from the first player's payoff matrix.
    pub fn from_matrix(rows: Vec<String>, cols: Vec<String>, matrix: &[Vec<Rational>]) -> Result<Self> {
        if matrix.len() != rows.len() || matrix.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::MalformedGame("matrix shape does not match the labels".into()));
        }
        let game = NormalFormGame::from_fn(vec!["1".into(), "2".into()], vec![rows, cols], |p| {
            let u = matrix[p[0]][p[1]].clone();
            vec![u.clone(), -u]
        })?;
        Self::new(game)
    }

    pub fn game(&self) -> &NormalFormGame {
        &self.0
    }

    pub fn into_game(self) -> NormalFormGame {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximinSolution {
    pub player: usize,
    pub mixture: Vec<Rational>,
    pub value: Rational,
}

fn payoff(game: &NormalFormGame, player: usize, own: usize, other: usize) -> &Rational {
    let mut cell = [0usize; 2];
    cell[player] = own;
    cell[1 - player] = other;
    game.payoff_at(&cell, player)
}

/// An optimal maximin mixture of `player` and the value it guarantees:
/// maximize `v` subject to `sum_s x_s u(s, y) >= v` for every pure `y`.
pub fn maximin_lp(game: &StatisticalGame, player: usize) -> Result<MaximinSolution> {
    let g = game.game();
    if player > 1 {
        return Err(Error::InvalidProfile(format!("no player with index {player}")));
    }
    let m = g.num_strategies(player);
    let k = g.num_strategies(1 - player);
    let mut objective = vec![Rational::zero(); m + 1];
    objective[m] = Rational::one();
    let mut lp = LinearProgram::new(Direction::Maximize, objective);
    lp.set_free(m);
    for y in 0..k {
        let mut row: Vec<Rational> = (0..m).map(|s| payoff(g, player, s, y).clone()).collect();
        row.push(-Rational::one());
        lp.add_constraint(row, Relation::Ge, Rational::zero());
    }
    let mut simplex = vec![Rational::one(); m];
    simplex.push(Rational::zero());
    lp.add_constraint(simplex, Relation::Eq, Rational::one());
    let LpSolution::Optimal { mut point, objective } = solve_lp(&lp) else {
        unreachable!("a finite matrix game always has a bounded optimum");
    };
    point.truncate(m);
    Ok(MaximinSolution { player, mixture: point, value: objective })
}

/// What `mixture` guarantees to `player` against every opponent strategy.
pub fn guarantee(game: &StatisticalGame, player: usize, mixture: &[Rational]) -> Rational {
    let g = game.game();
    (0..g.num_strategies(1 - player))
        .map(|y| mixture.iter().enumerate().map(|(s, w)| w * payoff(g, player, s, y)).sum::<Rational>())
        .min()
        .expect("nonempty strategy set")
}

/// True iff both components of `profile` are maximin strategies, the
/// condition under which a zero-sum profile is an optimin point.
pub fn optimin_equals_maximin_check(game: &StatisticalGame, profile: &MixedProfile) -> Result<bool> {
    game.game().check_mixed(profile)?;
    for player in 0..2 {
        let value = maximin_lp(game, player)?.value;
        if guarantee(game, player, &profile[player]) != value {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The single-toss coin game: a coin lands heads with probability 1/4 or
/// 1/2 (Nature's choice) and the statistician names the probability after
/// one toss. Rows are the four decision rules (never name 1/4, always,
/// name 1/4 on heads, name 1/4 on tails); entries are the chance of naming
/// the true probability.
pub fn bulmer_game(tosses: usize) -> Result<StatisticalGame> {
    if tosses != 1 {
        return Err(Error::Unsupported(format!("only the single-toss coin game is built, got {tosses} tosses")));
    }
    let states = [ratio(1, 4), ratio(1, 2)];
    // For each rule, the set of outcomes (heads, tails) on which 1/4 is named.
    let rules: [(&str, [bool; 2]); 4] =
        [("never", [false, false]), ("always", [true, true]), ("if-heads", [true, false]), ("if-tails", [false, true])];
    let matrix: Vec<Vec<Rational>> = rules
        .iter()
        .map(|(_, names_low)| {
            states
                .iter()
                .enumerate()
                .map(|(state, heads)| {
                    let outcome_prob = [heads.clone(), Rational::one() - heads];
                    let says_low: Rational = (0..2).filter(|&o| names_low[o]).map(|o| outcome_prob[o].clone()).sum();
                    if state == 0 {
                        says_low
                    } else {
                        Rational::one() - says_low
                    }
                })
                .collect()
        })
        .collect();
    let rows = rules.iter().map(|(name, _)| name.to_string()).collect();
    let cols = vec!["p=1/4".to_string(), "p=1/2".to_string()];
    let game = StatisticalGame::from_matrix(rows, cols, &matrix)?;
    let mut players = game.0.players().to_vec();
    players[0] = "Statistician".into();
    players[1] = "Nature".into();
    StatisticalGame::new(NormalFormGame::new(players, game.0.strategies().to_vec(), game.0.raw_payoffs().to_vec())?)
}
