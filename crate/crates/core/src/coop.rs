//! Transferable-utility cooperative games.
//!
//! Coalitions are bitmasks over players `0..n` (bit `i` is player `i + 1` in
//! user-facing labels).

use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::ValueVector;
use crate::lp::{solve_lp, Bounds, Direction, LinearProgram, LpSolution, Relation};
use crate::pareto::pareto_filter;
use crate::rational::{ceil_to_multiple, int, Rational};

pub type Coalition = u32;

/// Largest player count accepted by [`TUGame::new`].
pub const MAX_PLAYERS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TUGame {
    n: usize,
    worth: Vec<Rational>,
    cohesive: bool,
}

impl TUGame {
    /// `worth[mask]` for every mask in `0..2^n`; `worth[0]` must be zero.
    pub fn new(n: usize, worth: Vec<Rational>) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::Parameter(format!("TU games need 1..={MAX_PLAYERS} players, got {n}")));
        }
        if worth.len() != 1 << n {
            return Err(Error::MalformedGame(format!("expected {} worths, got {}", 1 << n, worth.len())));
        }
        if !worth[0].is_zero() {
            return Err(Error::MalformedGame("the empty coalition must be worth 0".into()));
        }
        let cohesive = best_partition(n, &worth) <= worth[(1 << n) - 1];
        Ok(TUGame { n, worth, cohesive })
    }

    /// Builds a game from a worth function on nonempty coalitions.
    pub fn from_fn(n: usize, mut f: impl FnMut(Coalition) -> Rational) -> Result<Self> {
        let mut worth = vec![Rational::zero()];
        worth.extend((1..1u32 << n).map(&mut f));
        Self::new(n, worth)
    }

    pub fn num_players(&self) -> usize {
        self.n
    }

    pub fn grand(&self) -> Coalition {
        (1 << self.n) - 1
    }

    pub fn worth(&self, s: Coalition) -> &Rational {
        &self.worth[s as usize]
    }

    /// Grand coalition weakly beats every partition of the players.
    pub fn is_cohesive(&self) -> bool {
        self.cohesive
    }

    pub fn imputation_floor(&self) -> Vec<Rational> {
        (0..self.n).map(|i| self.worth(1 << i).clone()).collect()
    }
}

/// Largest total worth over partitions of the grand coalition, by subset DP.
fn best_partition(n: usize, worth: &[Rational]) -> Rational {
    let full = (1usize << n) - 1;
    let mut best = vec![Rational::zero(); full + 1];
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // Every block containing the lowest member, the rest partitioned optimally.
        let mut sub = rest;
        let mut top: Option<Rational> = None;
        loop {
            let block = sub | low;
            let total = &worth[block] + &best[mask ^ block];
            if top.as_ref().is_none_or(|t| total > *t) {
                top = Some(total);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        best[mask] = top.expect("at least one block");
    }
    best.swap_remove(full)
}

/// Coalition label with 1-based members: `"1,3"`.
pub fn coalition_label(s: Coalition) -> String {
    members(s).map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

pub fn members(s: Coalition) -> impl Iterator<Item = usize> {
    (0..Coalition::BITS as usize).filter(move |&i| s >> i & 1 == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Allocation(pub Vec<Rational>);

impl Allocation {
    pub fn sum(&self, s: Coalition) -> Rational {
        members(s).map(|i| &self.0[i]).sum()
    }
}

impl std::ops::Deref for Allocation {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        ValueVector(self.0.clone()).fmt(f)
    }
}

fn check_feasible(game: &TUGame, x: &Allocation) -> Result<()> {
    if x.len() != game.n {
        return Err(Error::Domain(format!("allocation has {} entries for {} players", x.len(), game.n)));
    }
    let total = x.sum(game.grand());
    if total > *game.worth(game.grand()) {
        return Err(Error::Domain(format!(
            "allocation distributes {total}, more than the grand coalition's worth {}",
            game.worth(game.grand())
        )));
    }
    Ok(())
}

/// Nonempty coalitions without `excluding` that can improve on `x`.
///
/// A coalition `S` can hand every member strictly more than `x` from its own
/// worth exactly when `x(S) < u(S)`, so that is the test used.
pub fn dominating_coalitions(game: &TUGame, x: &Allocation, excluding: usize) -> Result<Vec<Coalition>> {
    check_feasible(game, x)?;
    if excluding >= game.n {
        return Err(Error::Domain(format!("no player {}", excluding + 1)));
    }
    Ok(blocking(game, x, excluding))
}

fn blocking(game: &TUGame, x: &Allocation, excluding: usize) -> Vec<Coalition> {
    let others = game.grand() & !(1 << excluding);
    (1..=others).filter(|s| s & !others == 0).filter(|&s| x.sum(s) < *game.worth(s)).collect()
}

/// Payoffs of the players left behind when `s` deviates from `x`: each
/// keeps her share minus an equal part of the remainder's shortfall
/// `x(N\S) - u(N\S)`.
pub fn deviation_outcome(game: &TUGame, x: &Allocation, s: Coalition) -> Vec<(usize, Rational)> {
    let rest = game.grand() & !s;
    let size = int(rest.count_ones() as i64);
    let loss = (x.sum(rest) - game.worth(rest)) / size;
    members(rest).map(|i| (i, &x[i] - &loss)).collect()
}

/// Worst-case payoff of every player at `x` against coalitional deviations.
pub fn coop_value(game: &TUGame, x: &Allocation) -> Result<ValueVector> {
    check_feasible(game, x)?;
    Ok(value_unchecked(game, x))
}

fn value_unchecked(game: &TUGame, x: &Allocation) -> ValueVector {
    ValueVector(
        (0..game.n)
            .map(|i| {
                let mut v = x[i].clone();
                for s in blocking(game, x, i) {
                    let rest = game.grand() & !s;
                    let loss = (x.sum(rest) - game.worth(rest)) / int(rest.count_ones() as i64);
                    let candidate = &x[i] - loss;
                    if candidate < v {
                        v = candidate;
                    }
                }
                v
            })
            .collect(),
    )
}

/// Largest lattice [`optimin_coop`] will evaluate.
pub const LATTICE_LIMIT: usize = 1_000_000;

/// Efficient points at least `floor` whose coordinates are multiples of
/// `step`, in lexicographic order.
pub fn lattice(game: &TUGame, step: &Rational, floor: &[Rational]) -> Result<Vec<Allocation>> {
    if !step.is_positive() {
        return Err(Error::Parameter(format!("grid step must be positive, got {step}")));
    }
    if floor.len() != game.n {
        return Err(Error::Parameter(format!("floor has {} entries for {} players", floor.len(), game.n)));
    }
    let total = game.worth(game.grand()).clone();
    let floor: Vec<Rational> = floor.iter().map(|f| ceil_to_multiple(f, step)).collect();
    let floor_sum: Rational = floor.iter().sum();
    if floor_sum > total {
        return Err(Error::Infeasible(format!(
            "no efficient allocation meets the lower bounds: they sum to {floor_sum} but the grand coalition is worth {total}"
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(game.n);
    fill(&floor, step, &total, &mut current, &mut out)?;
    Ok(out)
}

fn fill(
    floor: &[Rational],
    step: &Rational,
    left: &Rational,
    current: &mut Vec<Rational>,
    out: &mut Vec<Allocation>,
) -> Result<()> {
    let k = current.len();
    let rest_floor: Rational = floor[k + 1..].iter().sum();
    if k + 1 == floor.len() {
        if left >= &floor[k] && (left / step).is_integer() {
            current.push(left.clone());
            out.push(Allocation(current.clone()));
            current.pop();
            if out.len() > LATTICE_LIMIT {
                return Err(Error::Resource(format!("grid has more than {LATTICE_LIMIT} points")));
            }
        }
        return Ok(());
    }
    let mut x = floor[k].clone();
    while &x + &rest_floor <= *left {
        current.push(x.clone());
        fill(floor, step, &(left - &x), current, out)?;
        current.pop();
        x += step;
    }
    Ok(())
}

/// Grid-approximate optimin allocations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoopOptimin {
    pub step: Rational,
    pub floor: Vec<Rational>,
    pub lattice_size: usize,
    pub points: Vec<(Allocation, ValueVector)>,
}

/// Optimin search over the imputation lattice.
pub fn optimin_coop(game: &TUGame, step: &Rational) -> Result<CoopOptimin> {
    optimin_coop_with_floor(game, step, &game.imputation_floor())
}

/// Optimin search over efficient lattice points at least `floor`.
pub fn optimin_coop_with_floor(game: &TUGame, step: &Rational, floor: &[Rational]) -> Result<CoopOptimin> {
    let points = lattice(game, step, floor)?;
    let lattice_size = points.len();
    let valued: Vec<(Allocation, ValueVector)> = points
        .into_par_iter()
        .map(|x| {
            let v = value_unchecked(game, &x);
            (x, v)
        })
        .collect();
    Ok(CoopOptimin {
        step: step.clone(),
        floor: floor.to_vec(),
        lattice_size,
        points: pareto_filter(valued, |(_, v)| &v[..])?,
    })
}

/// A polyhedron given by linear constraints over allocations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSet {
    pub constraints: Vec<(Vec<Rational>, Relation, Rational)>,
}

impl LinearSet {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|(a, rel, b)| {
            let lhs: Rational = a.iter().zip(x).map(|(a, x)| a * x).sum();
            match rel {
                Relation::Le => lhs <= *b,
                Relation::Eq => lhs == *b,
                Relation::Ge => lhs >= *b,
            }
        })
    }
}

/// Differences between a grid optimin set and a closed-form candidate,
/// restricted to the same lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    /// Grid optimin points outside the candidate set.
    pub extra: Vec<Allocation>,
    /// Lattice points inside the candidate set that the search rejected.
    pub missing: Vec<Allocation>,
}

impl Membership {
    pub fn exact(&self) -> bool {
        self.extra.is_empty() && self.missing.is_empty()
    }
}

pub fn check_membership(game: &TUGame, result: &CoopOptimin, candidate: &LinearSet) -> Result<Membership> {
    let found: Vec<&Allocation> = result.points.iter().map(|(x, _)| x).collect();
    let extra = found.iter().filter(|x| !candidate.contains(x)).map(|x| (*x).clone()).collect();
    let missing = lattice(game, &result.step, &result.floor)?
        .into_iter()
        .filter(|x| candidate.contains(x) && !found.contains(&x))
        .collect();
    Ok(Membership { extra, missing })
}

fn core_program(game: &TUGame) -> LinearProgram {
    let n = game.n;
    let mut lp = LinearProgram::new(Direction::Minimize, vec![Rational::zero(); n]);
    for i in 0..n {
        lp.set_free(i);
    }
    let indicator = |s: Coalition| -> Vec<Rational> {
        (0..n).map(|i| if s >> i & 1 == 1 { Rational::one() } else { Rational::zero() }).collect()
    };
    for s in 1..game.grand() {
        lp.add_constraint(indicator(s), Relation::Ge, game.worth(s).clone());
    }
    lp.add_constraint(indicator(game.grand()), Relation::Eq, game.worth(game.grand()).clone());
    lp
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreReport {
    /// The core program is infeasible.
    Empty,
    /// A core allocation and each player's payoff range over the core.
    Nonempty { witness: Allocation, ranges: Vec<(Rational, Rational)> },
}

impl CoreReport {
    pub fn is_singleton(&self) -> bool {
        matches!(self, CoreReport::Nonempty { ranges, .. } if ranges.iter().all(|(lo, hi)| lo == hi))
    }
}

/// Core membership by LP: `x(N) = u(N)` and `x(S) >= u(S)` for all `S`.
pub fn core(game: &TUGame) -> CoreReport {
    let base = core_program(game);
    let LpSolution::Optimal { point, .. } = solve_lp(&base) else {
        return CoreReport::Empty;
    };
    let ranges = (0..game.n)
        .map(|i| {
            let bound = |direction| {
                let mut lp = base.clone();
                lp.direction = direction;
                lp.objective = (0..game.n).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect();
                solve_lp(&lp).objective().expect("core is nonempty and bounded").clone()
            };
            (bound(Direction::Minimize), bound(Direction::Maximize))
        })
        .collect();
    CoreReport::Nonempty { witness: Allocation(point), ranges }
}

pub fn in_core(game: &TUGame, x: &Allocation) -> bool {
    x.len() == game.n && core_program(game).is_satisfied_by(x)
}

/// Shapley value by the subset formula.
pub fn shapley(game: &TUGame) -> Result<Allocation> {
    let n = game.n;
    let mut factorial = vec![Rational::one(); n + 1];
    for k in 1..=n {
        factorial[k] = &factorial[k - 1] * int(k as i64);
    }
    let weight: Vec<Rational> = (0..n).map(|s| &factorial[s] * &factorial[n - s - 1] / &factorial[n]).collect();
    Ok(Allocation(
        (0..n)
            .map(|i| {
                let others = game.grand() & !(1 << i);
                let mut total = Rational::zero();
                let mut s = others;
                loop {
                    let marginal = game.worth(s | 1 << i) - game.worth(s);
                    total += &weight[s.count_ones() as usize] * marginal;
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & others;
                }
                total
            })
            .collect(),
    ))
}

/// Largest player count accepted by [`nucleolus`].
pub const NUCLEOLUS_MAX_PLAYERS: usize = 8;

fn row_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in c..cols {
                    let d = &f * &m[rank][k];
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Nucleolus over the imputation set: repeatedly minimize the largest
/// excess `u(S) - x(S)` among unsettled coalitions (singletons included),
/// then settle every coalition whose excess cannot drop below that level.
/// Stops once the settled coalitions pin down a unique point.
pub fn nucleolus(game: &TUGame) -> Result<Allocation> {
    let n = game.n;
    if n > NUCLEOLUS_MAX_PLAYERS {
        return Err(Error::Resource(format!("nucleolus supports at most {NUCLEOLUS_MAX_PLAYERS} players, got {n}")));
    }
    let floor_sum: Rational = game.imputation_floor().iter().sum();
    if floor_sum > *game.worth(game.grand()) {
        return Err(Error::Infeasible("the imputation set is empty".into()));
    }
    let indicator = |s: Coalition| -> Vec<Rational> {
        (0..n).map(|i| if s >> i & 1 == 1 { Rational::one() } else { Rational::zero() }).collect()
    };
    // Variables: x_0..x_{n-1}, then the excess level t.
    let base = {
        let mut objective = vec![Rational::zero(); n + 1];
        objective[n] = Rational::one();
        let mut lp = LinearProgram::new(Direction::Minimize, objective);
        lp.set_free(n);
        for i in 0..n {
            lp.set_bounds(i, Bounds { lower: Some(game.worth(1 << i).clone()), upper: None });
        }
        let mut eff = indicator(game.grand());
        eff.push(Rational::zero());
        lp.add_constraint(eff, Relation::Eq, game.worth(game.grand()).clone());
        lp
    };
    let mut settled: Vec<(Coalition, Rational)> = Vec::new();
    let mut open: Vec<Coalition> = (1..game.grand()).collect();
    let settled_system = |settled: &[(Coalition, Rational)]| {
        let mut lp = base.clone();
        for (s, e) in settled {
            // u(S) - x(S) = e
            let mut row = indicator(*s);
            row.push(Rational::zero());
            lp.add_constraint(row, Relation::Eq, game.worth(*s) - e);
        }
        lp
    };
    loop {
        let mut rows: Vec<Vec<Rational>> = settled.iter().map(|&(s, _)| indicator(s)).collect();
        rows.push(indicator(game.grand()));
        if row_rank(&rows) == n {
            let mut lp = settled_system(&settled);
            lp.set_bounds(n, Bounds { lower: Some(Rational::zero()), upper: Some(Rational::zero()) });
            let mut point = solve_lp(&lp).point().expect("settled system has a solution").to_vec();
            point.truncate(n);
            return Ok(Allocation(point));
        }
        let mut lp = settled_system(&settled);
        for &s in &open {
            // x(S) + t >= u(S)
            let mut row = indicator(s);
            row.push(Rational::one());
            lp.add_constraint(row, Relation::Ge, game.worth(s).clone());
        }
        let LpSolution::Optimal { objective: level, .. } = solve_lp(&lp) else {
            unreachable!("the imputation set is nonempty and excesses are bounded below on it");
        };
        // Pin t to the optimum and settle coalitions whose excess is forced to it.
        lp.set_bounds(n, Bounds { lower: Some(level.clone()), upper: Some(level.clone()) });
        let forced: Vec<Coalition> = open
            .par_iter()
            .copied()
            .filter(|&s| {
                let mut probe = lp.clone();
                probe.direction = Direction::Maximize;
                let mut obj = indicator(s);
                obj.push(Rational::zero());
                probe.objective = obj;
                // max x(S) = u(S) - level means the excess cannot fall below level.
                solve_lp(&probe).objective().expect("bounded") == &(game.worth(s) - &level)
            })
            .collect();
        assert!(!forced.is_empty(), "some coalition is always tight at the optimum");
        open.retain(|s| !forced.contains(s));
        settled.extend(forced.into_iter().map(|s| (s, level.clone())));
    }
}
