//! Finite normal-form games with exact payoffs.

use std::fmt;
use std::ops::Deref;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One strategy index per player.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureProfile(pub Vec<usize>);

impl Deref for PureProfile {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for PureProfile {
    fn from(indices: Vec<usize>) -> Self {
        PureProfile(indices)
    }
}

/// One probability vector per player.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedProfile(pub Vec<Vec<Rational>>);

impl MixedProfile {
    /// The point-mass profile at `profile`.
    pub fn degenerate(game: &NormalFormGame, profile: &PureProfile) -> Result<Self> {
        game.check_profile(profile)?;
        Ok(MixedProfile(
            profile
                .iter()
                .enumerate()
                .map(|(player, &s)| {
                    (0..game.num_strategies(player))
                        .map(|k| if k == s { Rational::one() } else { Rational::zero() })
                        .collect()
                })
                .collect(),
        ))
    }

    /// `Some(pure)` when every player's mixture is a point mass.
    pub fn as_pure(&self) -> Option<PureProfile> {
        self.0.iter().map(|dist| dist.iter().position(|p| p.is_one())).collect::<Option<Vec<_>>>().map(PureProfile)
    }
}

impl Deref for MixedProfile {
    type Target = [Vec<Rational>];

    fn deref(&self) -> &[Vec<Rational>] {
        &self.0
    }
}

/// One exact payoff (or worst-case payoff) per player, in player order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueVector(pub Vec<Rational>);

impl Deref for ValueVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A finite n-player game in normal form.
///
/// Payoffs live in a dense row-major tensor: the last player's strategy index
/// varies fastest, and each cell stores `n` consecutive payoffs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormGame {
    players: Vec<String>,
    strategies: Vec<Vec<String>>,
    strides: Vec<usize>,
    payoffs: Vec<Rational>,
}

impl NormalFormGame {
    /// Builds a game from a flat payoff list (`cells * n` entries, row-major).
    pub fn new(players: Vec<String>, strategies: Vec<Vec<String>>, payoffs: Vec<Rational>) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::MalformedGame("a game needs at least one player".into()));
        }
        if strategies.len() != players.len() {
            return Err(Error::MalformedGame(format!(
                "{} players but {} strategy lists",
                players.len(),
                strategies.len()
            )));
        }
        for (player, list) in players.iter().zip(&strategies) {
            if list.is_empty() {
                return Err(Error::MalformedGame(format!("player {player} has no strategies")));
            }
        }
        let mut strides = vec![1; players.len()];
        for k in (0..players.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * strategies[k + 1].len();
        }
        let cells = strides[0] * strategies[0].len();
        if payoffs.len() != cells * players.len() {
            return Err(Error::MalformedGame(format!(
                "expected {} payoffs ({} cells x {} players), got {}",
                cells * players.len(),
                cells,
                players.len(),
                payoffs.len()
            )));
        }
        Ok(NormalFormGame { players, strategies, strides, payoffs })
    }

    /// Builds a game by evaluating `payoff(profile)` on every cell.
    pub fn from_fn<F>(players: Vec<String>, strategies: Vec<Vec<String>>, mut payoff: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Vec<Rational>,
    {
        let shape: Vec<usize> = strategies.iter().map(Vec::len).collect();
        let mut flat = Vec::new();
        for profile in ProfileIter::new(&shape) {
            let cell = payoff(&profile);
            if cell.len() != players.len() {
                return Err(Error::MalformedGame(format!(
                    "cell {profile:?} has {} payoffs for {} players",
                    cell.len(),
                    players.len()
                )));
            }
            flat.extend(cell);
        }
        Self::new(players, strategies, flat)
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn num_strategies(&self, player: usize) -> usize {
        self.strategies[player].len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.strategies.iter().map(Vec::len).collect()
    }

    pub fn num_cells(&self) -> usize {
        self.payoffs.len() / self.players.len()
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn strategies(&self) -> &[Vec<String>] {
        &self.strategies
    }

    pub fn strategy_label(&self, player: usize, strategy: usize) -> &str {
        &self.strategies[player][strategy]
    }

    /// Flat payoff list in tensor order.
    pub fn raw_payoffs(&self) -> &[Rational] {
        &self.payoffs
    }

    pub fn check_profile(&self, profile: &[usize]) -> Result<()> {
        if profile.len() != self.num_players() {
            return Err(Error::InvalidProfile(format!(
                "profile has {} entries, game has {} players",
                profile.len(),
                self.num_players()
            )));
        }
        for (player, &s) in profile.iter().enumerate() {
            if s >= self.num_strategies(player) {
                return Err(Error::InvalidProfile(format!(
                    "strategy index {s} out of range for player {} ({} strategies)",
                    self.players[player],
                    self.num_strategies(player)
                )));
            }
        }
        Ok(())
    }

    pub fn cell_index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(s, w)| s * w).sum()
    }

    pub fn profile_of_cell(&self, mut cell: usize) -> PureProfile {
        let mut out = Vec::with_capacity(self.num_players());
        for &w in &self.strides {
            out.push(cell / w);
            cell %= w;
        }
        PureProfile(out)
    }

    /// Payoff of one player at a profile. The profile is assumed valid.
    pub fn payoff_at(&self, profile: &[usize], player: usize) -> &Rational {
        &self.payoffs[self.cell_index(profile) * self.num_players() + player]
    }

    /// Payoff of `player` at `profile` with `player`'s own entry (or another
    /// coordinate) replaced by `strategy`.
    pub(crate) fn payoff_with(&self, profile: &[usize], slot: usize, strategy: usize, player: usize) -> &Rational {
        let cell = self.cell_index(profile) - profile[slot] * self.strides[slot] + strategy * self.strides[slot];
        &self.payoffs[cell * self.num_players() + player]
    }

    pub fn cell_payoffs(&self, cell: usize) -> &[Rational] {
        let n = self.num_players();
        &self.payoffs[cell * n..(cell + 1) * n]
    }

    /// The payoff vector of a pure profile.
    pub fn payoff(&self, profile: &PureProfile) -> Result<ValueVector> {
        self.check_profile(profile)?;
        Ok(ValueVector(self.cell_payoffs(self.cell_index(profile)).to_vec()))
    }

    pub fn check_mixed(&self, profile: &MixedProfile) -> Result<()> {
        if profile.len() != self.num_players() {
            return Err(Error::InvalidDistribution(format!(
                "profile has {} mixtures, game has {} players",
                profile.len(),
                self.num_players()
            )));
        }
        for (player, dist) in profile.iter().enumerate() {
            if dist.len() != self.num_strategies(player) {
                return Err(Error::InvalidDistribution(format!(
                    "player {} mixes over {} strategies, has {}",
                    self.players[player],
                    dist.len(),
                    self.num_strategies(player)
                )));
            }
            if dist.iter().any(Signed::is_negative) {
                return Err(Error::InvalidDistribution(format!(
                    "player {} has a negative probability",
                    self.players[player]
                )));
            }
            let total: Rational = dist.iter().sum();
            if !total.is_one() {
                return Err(Error::InvalidDistribution(format!(
                    "player {} probabilities sum to {total}, not 1",
                    self.players[player]
                )));
            }
        }
        Ok(())
    }

    /// Expected payoff vector of a mixed profile (exact multilinear expectation).
    pub fn expected_payoff(&self, profile: &MixedProfile) -> Result<ValueVector> {
        self.check_mixed(profile)?;
        let n = self.num_players();
        let supports: Vec<Vec<usize>> =
            profile.iter().map(|dist| (0..dist.len()).filter(|&k| !dist[k].is_zero()).collect()).collect();
        let mut totals = vec![Rational::zero(); n];
        let shape: Vec<usize> = supports.iter().map(Vec::len).collect();
        let mut cell = vec![0; n];
        for choice in ProfileIter::new(&shape) {
            let mut weight = Rational::one();
            for (player, &k) in choice.iter().enumerate() {
                cell[player] = supports[player][k];
                weight *= &profile[player][cell[player]];
            }
            let base = self.cell_index(&cell) * n;
            for (player, total) in totals.iter_mut().enumerate() {
                *total += &weight * &self.payoffs[base + player];
            }
        }
        Ok(ValueVector(totals))
    }

    /// Replaces `player`'s payoffs `u` by `alpha * u + beta`.
    pub fn affine_transform(&self, player: usize, alpha: &Rational, beta: &Rational) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::InvalidScale(alpha.clone()));
        }
        if player >= self.num_players() {
            return Err(Error::InvalidProfile(format!("no player with index {player}")));
        }
        let n = self.num_players();
        let mut out = self.clone();
        for cell in 0..self.num_cells() {
            let slot = &mut out.payoffs[cell * n + player];
            *slot = alpha * &*slot + beta;
        }
        Ok(out)
    }

    /// `Some(c)` iff every cell's payoffs sum to the same constant `c`.
    pub fn constant_sum(&self) -> Option<Rational> {
        let mut sums = (0..self.num_cells()).map(|cell| self.cell_payoffs(cell).iter().sum::<Rational>());
        let first = sums.next()?;
        sums.all(|s| s == first).then_some(first)
    }

    /// Adds a fictitious player with a single strategy whose payoff makes
    /// every cell sum to `constant`.
    pub fn fictitious_extension(&self, constant: &Rational) -> NormalFormGame {
        let n = self.num_players();
        let mut payoffs = Vec::with_capacity(self.num_cells() * (n + 1));
        for cell in 0..self.num_cells() {
            let row = self.cell_payoffs(cell);
            payoffs.extend_from_slice(row);
            payoffs.push(constant - row.iter().sum::<Rational>());
        }
        let mut players = self.players.clone();
        players.push(format!("fictitious{}", n + 1));
        let mut strategies = self.strategies.clone();
        strategies.push(vec!["*".to_string()]);
        NormalFormGame::new(players, strategies, payoffs).expect("extension of a valid game is valid")
    }

    /// All pure profiles in lexicographic order.
    pub fn profiles(&self) -> impl Iterator<Item = PureProfile> + '_ {
        (0..self.num_cells()).map(|cell| self.profile_of_cell(cell))
    }

    /// Comma-joined strategy labels, e.g. `Top,Left`.
    pub fn profile_label(&self, profile: &[usize]) -> String {
        profile.iter().enumerate().map(|(player, &s)| self.strategies[player][s].as_str()).collect::<Vec<_>>().join(",")
    }

    /// Inverse of [`profile_label`](Self::profile_label).
    pub fn parse_profile(&self, text: &str) -> Result<PureProfile> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != self.num_players() {
            return Err(Error::InvalidProfile(format!(
                "`{text}` names {} strategies, game has {} players",
                parts.len(),
                self.num_players()
            )));
        }
        parts
            .iter()
            .enumerate()
            .map(|(player, label)| {
                self.strategies[player].iter().position(|s| s == label).ok_or_else(|| {
                    Error::InvalidProfile(format!("player {} has no strategy `{label}`", self.players[player]))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(PureProfile)
    }
}

/// Lexicographic odometer over a product of index ranges.
#[derive(Debug, Clone)]
pub struct ProfileIter {
    shape: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl ProfileIter {
    pub fn new(shape: &[usize]) -> Self {
        let next = if shape.iter().all(|&k| k > 0) { Some(vec![0; shape.len()]) } else { None };
        ProfileIter { shape: shape.to_vec(), next }
    }
}

impl Iterator for ProfileIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for k in (0..succ.len()).rev() {
            succ[k] += 1;
            if succ[k] < self.shape[k] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[k] = 0;
        }
        Some(current)
    }
}
