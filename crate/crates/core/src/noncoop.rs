//! Optimin analysis of noncooperative games.
//!
//! A player's value at an agreement is the worst payoff she can receive when
//! she honours it while the others either honour it too or switch to a
//! strictly profitable unilateral deviation. Optimin agreements are the
//! Pareto-optimal points of that value function.
//!
//! Two modes are provided. Pure mode (any number of players) admits pure
//! agreements and pure deviations only. Mixed mode (two players) evaluates
//! mixed agreements against mixed deviations by linear programming; the
//! optimin search in that mode is a grid approximation.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{MixedProfile, NormalFormGame, ProfileIter, PureProfile, ValueVector};
use crate::lp::{solve_lp, Direction, LinearProgram, LpSolution, Relation};
use crate::pareto::pareto_filter;
use crate::rational::Rational;

pub use crate::pareto::{dominates, pareto_filter as pareto_filter_by_key};

/// Strategies that strictly improve `player`'s payoff at `base`, others fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetterResponseSet {
    pub player: usize,
    pub base: PureProfile,
    pub responses: Vec<usize>,
}

/// Per-player option sets whose product is the set of deviation profiles
/// faced by one evaluated player. The evaluated player's own factor is her
/// agreed strategy; every other factor is `B_j(p) ∪ {p_j}`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationSpace {
    pub player: usize,
    pub options: Vec<Vec<usize>>,
}

impl DeviationSpace {
    pub fn size(&self) -> usize {
        self.options.iter().map(Vec::len).product()
    }

    /// Deviation profiles in lexicographic order.
    pub fn profiles(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let shape: Vec<usize> = self.options.iter().map(Vec::len).collect();
        ProfileIter::new(&shape)
            .map(move |choice| choice.iter().enumerate().map(|(k, &c)| self.options[k][c]).collect())
    }
}

/// An agreement together with its value and, per player, a deviation profile
/// attaining that player's worst case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluatedProfile<P> {
    pub profile: P,
    pub value: ValueVector,
    pub witnesses: Vec<P>,
}

/// Which opponent deviations a player guards against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationRule {
    /// Strictly profitable unilateral deviations (the optimin value).
    BetterResponse,
    /// Every opponent pure profile (the maximin security level).
    Any,
}

pub fn better_responses(game: &NormalFormGame, profile: &PureProfile, player: usize) -> Result<BetterResponseSet> {
    game.check_profile(profile)?;
    if player >= game.num_players() {
        return Err(Error::InvalidProfile(format!("no player with index {player}")));
    }
    Ok(BetterResponseSet { player, base: profile.clone(), responses: strict_improvements(game, profile, player) })
}

fn strict_improvements(game: &NormalFormGame, profile: &[usize], player: usize) -> Vec<usize> {
    let current = game.payoff_at(profile, player);
    (0..game.num_strategies(player)).filter(|&s| game.payoff_with(profile, player, s, player) > current).collect()
}

fn option_sets(game: &NormalFormGame, profile: &[usize], rule: DeviationRule) -> Vec<Vec<usize>> {
    (0..game.num_players())
        .map(|j| match rule {
            DeviationRule::Any => (0..game.num_strategies(j)).collect(),
            DeviationRule::BetterResponse => {
                let mut opts = strict_improvements(game, profile, j);
                opts.push(profile[j]);
                opts.sort_unstable();
                opts
            }
        })
        .collect()
}

pub fn deviation_space(game: &NormalFormGame, profile: &PureProfile, player: usize) -> Result<DeviationSpace> {
    game.check_profile(profile)?;
    let mut options = option_sets(game, profile, DeviationRule::BetterResponse);
    options[player] = vec![profile[player]];
    Ok(DeviationSpace { player, options })
}

fn evaluate(game: &NormalFormGame, profile: &[usize], rule: DeviationRule) -> EvaluatedProfile<PureProfile> {
    let sets = option_sets(game, profile, rule);
    let mut value = Vec::with_capacity(game.num_players());
    let mut witnesses = Vec::with_capacity(game.num_players());
    for i in 0..game.num_players() {
        let mut options = sets.clone();
        options[i] = vec![profile[i]];
        let space = DeviationSpace { player: i, options };
        // Lexicographic enumeration with a strict comparison keeps the
        // lexicographically smallest minimizer.
        let mut best: Option<(Rational, Vec<usize>)> = None;
        for dev in space.profiles() {
            let u = game.payoff_at(&dev, i);
            if best.as_ref().is_none_or(|(b, _)| u < b) {
                best = Some((u.clone(), dev));
            }
        }
        let (v, w) = best.expect("deviation space contains the agreement itself");
        value.push(v);
        witnesses.push(PureProfile(w));
    }
    EvaluatedProfile { profile: PureProfile(profile.to_vec()), value: ValueVector(value), witnesses }
}

/// Worst-case payoffs of a pure agreement against pure profitable deviations.
pub fn value_pure(game: &NormalFormGame, profile: &PureProfile) -> Result<EvaluatedProfile<PureProfile>> {
    game.check_profile(profile)?;
    Ok(evaluate(game, profile, DeviationRule::BetterResponse))
}

/// Like [`value_pure`] but with a selectable deviation rule.
pub fn value_pure_with(
    game: &NormalFormGame,
    profile: &PureProfile,
    rule: DeviationRule,
) -> Result<EvaluatedProfile<PureProfile>> {
    game.check_profile(profile)?;
    Ok(evaluate(game, profile, rule))
}

/// [`value_pure`] on every cell, in lexicographic profile order.
pub fn value_table(game: &NormalFormGame) -> Vec<EvaluatedProfile<PureProfile>> {
    value_table_with(game, DeviationRule::BetterResponse)
}

pub fn value_table_with(game: &NormalFormGame, rule: DeviationRule) -> Vec<EvaluatedProfile<PureProfile>> {
    (0..game.num_cells()).into_par_iter().map(|cell| evaluate(game, &game.profile_of_cell(cell), rule)).collect()
}

/// Pure optimin agreements: the Pareto frontier of the value table.
pub fn optimin_pure(game: &NormalFormGame) -> Vec<EvaluatedProfile<PureProfile>> {
    pareto_filter(value_table(game), |e| &e.value[..]).expect("a game has at least one cell")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximinSet {
    pub player: usize,
    pub strategies: Vec<usize>,
    pub security: Rational,
}

/// Pure maximin strategies and security level of every player.
pub fn maximin_profile(game: &NormalFormGame) -> Vec<MaximinSet> {
    let n = game.num_players();
    let shape = game.shape();
    (0..n)
        .map(|i| {
            let mut guarantees = vec![None::<Rational>; game.num_strategies(i)];
            for profile in ProfileIter::new(&shape) {
                let u = game.payoff_at(&profile, i);
                let g = &mut guarantees[profile[i]];
                if g.as_ref().is_none_or(|cur| u < cur) {
                    *g = Some(u.clone());
                }
            }
            let guarantees: Vec<Rational> = guarantees.into_iter().map(Option::unwrap).collect();
            let security = guarantees.iter().max().expect("nonempty strategy set").clone();
            let strategies = (0..guarantees.len()).filter(|&s| guarantees[s] == security).collect();
            MaximinSet { player: i, strategies, security }
        })
        .collect()
}

pub fn is_nash(game: &NormalFormGame, profile: &[usize]) -> bool {
    (0..game.num_players()).all(|i| strict_improvements(game, profile, i).is_empty())
}

/// Pure Nash equilibria in lexicographic order.
pub fn nash_pure(game: &NormalFormGame) -> Vec<PureProfile> {
    let hits: Vec<bool> =
        (0..game.num_cells()).into_par_iter().map(|cell| is_nash(game, &game.profile_of_cell(cell))).collect();
    hits.into_iter().enumerate().filter(|&(_cell, nash)| nash).map(|(cell, _nash)| game.profile_of_cell(cell)).collect()
}

fn require_two_players(game: &NormalFormGame, what: &'static str) -> Result<()> {
    if game.num_players() != 2 {
        return Err(Error::UnsupportedArity { what, expected: 2, found: game.num_players() });
    }
    Ok(())
}

/// Expected payoff of `player` when `own` (a mixture of `own_player`)
/// meets the pure strategy `col` of the other player.
fn slice_payoff(game: &NormalFormGame, own_player: usize, own: &[Rational], col: usize, player: usize) -> Rational {
    let mut cell = [0usize; 2];
    cell[1 - own_player] = col;
    let mut total = Rational::zero();
    for (s, w) in own.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        cell[own_player] = s;
        total += w * game.payoff_at(&cell, player);
    }
    total
}

/// Worst-case payoffs of a mixed agreement in a two-player game, admitting
/// mixed profitable deviations.
///
/// For player `i` with opponent `j`, the profitable deviations are the open
/// set `B_j(p) = {q : u_j(p_i, q) > u_j(p)}` within the simplex. If it is
/// empty the value is `u_i(p)`. Otherwise `u_j(p_i, ·)` is linear, so the
/// closure of `B_j(p)` is `{q : u_j(p_i, q) >= u_j(p)}`: every boundary point
/// is the limit of a segment towards a point of `B_j(p)`, which the convex
/// simplex contains. A continuous function has the same infimum over a set
/// and its closure, and `p_j` itself lies in the closure, so
/// `v_i(p) = min { u_i(p_i, q) : q in simplex, u_j(p_i, q) >= u_j(p) }`, an LP
/// whose minimum is attained. The witness is the LP vertex, which may sit on
/// the boundary rather than inside `B_j(p)`.
pub fn value_mixed_2p(game: &NormalFormGame, profile: &MixedProfile) -> Result<EvaluatedProfile<MixedProfile>> {
    require_two_players(game, "mixed values")?;
    let payoff = game.expected_payoff(profile)?;
    let mut value = Vec::with_capacity(2);
    let mut witnesses = Vec::with_capacity(2);
    for i in 0..2 {
        let j = 1 - i;
        let m = game.num_strategies(j);
        let opp_gain: Vec<Rational> = (0..m).map(|x| slice_payoff(game, i, &profile[i], x, j)).collect();
        let own_loss: Vec<Rational> = (0..m).map(|x| slice_payoff(game, i, &profile[i], x, i)).collect();
        let current = &payoff[j];
        let has_deviation = opp_gain.iter().any(|g| g > current);
        if !has_deviation {
            value.push(payoff[i].clone());
            witnesses.push(profile.clone());
            continue;
        }
        let mut lp = LinearProgram::new(Direction::Minimize, own_loss);
        lp.add_constraint(opp_gain, Relation::Ge, current.clone());
        lp.add_constraint(vec![Rational::one(); m], Relation::Eq, Rational::one());
        let LpSolution::Optimal { point, objective } = solve_lp(&lp) else {
            unreachable!("the agreed mixture is feasible and the simplex is bounded");
        };
        let mut witness = profile.clone();
        witness.0[j] = point;
        value.push(objective);
        witnesses.push(witness);
    }
    Ok(EvaluatedProfile { profile: profile.clone(), value: ValueVector(value), witnesses })
}

/// Probability vectors over `m` outcomes whose entries are multiples of
/// `1/k`, in descending lexicographic order of the counts (so `k = 1` lists
/// the point masses in strategy order).
pub fn simplex_grid(m: usize, k: usize) -> Vec<Vec<Rational>> {
    fn rec(m: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == m {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in (0..=left).rev() {
            prefix.push(c);
            rec(m, left - c, prefix, out);
            prefix.pop();
        }
    }
    let mut counts = Vec::new();
    rec(m, k, &mut Vec::with_capacity(m), &mut counts);
    let denom = Rational::from_integer((k as i64).into());
    counts
        .into_iter()
        .map(|c| c.into_iter().map(|x| Rational::from_integer((x as i64).into()) / &denom).collect())
        .collect()
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Largest number of grid profiles [`optimin_grid_2p`] will evaluate.
pub const GRID_PROFILE_LIMIT: u128 = 200_000;

/// Grid-approximate mixed optimin set. Never an exact claim: the true
/// optimin point may lie between grid points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridOptimin {
    pub resolution: usize,
    pub evaluated: usize,
    pub points: Vec<EvaluatedProfile<MixedProfile>>,
}

pub fn optimin_grid_2p(game: &NormalFormGame, resolution: usize) -> Result<GridOptimin> {
    require_two_players(game, "mixed grid search")?;
    if resolution == 0 {
        return Err(Error::Parameter("grid resolution must be at least 1".into()));
    }
    let size: u128 =
        (0..2).map(|p| binomial(resolution + game.num_strategies(p) - 1, game.num_strategies(p) - 1)).product();
    if size > GRID_PROFILE_LIMIT {
        return Err(Error::Resource(format!(
            "mixed grid at resolution {resolution} has {size} profiles (limit {GRID_PROFILE_LIMIT})"
        )));
    }
    let rows = simplex_grid(game.num_strategies(0), resolution);
    let cols = simplex_grid(game.num_strategies(1), resolution);
    let profiles: Vec<MixedProfile> =
        rows.iter().flat_map(|r| cols.iter().map(move |c| MixedProfile(vec![r.clone(), c.clone()]))).collect();
    let evaluated = profiles.into_par_iter().map(|p| value_mixed_2p(game, &p)).collect::<Result<Vec<_>>>()?;
    let count = evaluated.len();
    Ok(GridOptimin { resolution, evaluated: count, points: pareto_filter(evaluated, |e| &e.value[..])? })
}

/// True iff `profile` is a pure optimin point, or every player's agreed
/// strategy maximizes her own value given the others' agreed strategies.
pub fn is_maximin_equilibrium(game: &NormalFormGame, profile: &PureProfile) -> Result<bool> {
    game.check_profile(profile)?;
    if optimin_pure(game).iter().any(|e| &e.profile == profile) {
        return Ok(true);
    }
    for i in 0..game.num_players() {
        let own = evaluate(game, profile, DeviationRule::BetterResponse).value[i].clone();
        let mut alt = profile.0.clone();
        for q in 0..game.num_strategies(i) {
            alt[i] = q;
            if evaluate(game, &alt, DeviationRule::BetterResponse).value[i] > own {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{self, NamedTag};
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn named(tag: NamedTag) -> NormalFormGame {
        generators::named_game(tag).unwrap()
    }

    fn vv(xs: &[i64]) -> ValueVector {
        ValueVector(xs.iter().map(|&x| int(x)).collect())
    }

    fn pp(game: &NormalFormGame, label: &str) -> PureProfile {
        game.parse_profile(label).unwrap()
    }

    fn labels(game: &NormalFormGame, set: &[EvaluatedProfile<PureProfile>]) -> Vec<String> {
        set.iter().map(|e| game.profile_label(&e.profile)).collect()
    }

    #[test]
    fn better_response_examples() {
        let g = named(NamedTag::Figure1);
        let br = better_responses(&g, &pp(&g, "Top,Left"), 1).unwrap();
        assert_eq!(br.responses, vec![1]);
        assert!(better_responses(&g, &pp(&g, "Bottom,Right"), 0).unwrap().responses.is_empty());
        let pd = named(NamedTag::PrisonersDilemma);
        let dd = pp(&pd, "Defect,Defect");
        assert!(better_responses(&pd, &dd, 0).unwrap().responses.is_empty());
        assert!(better_responses(&pd, &dd, 1).unwrap().responses.is_empty());
    }

    #[test]
    fn figure1_values() {
        let g = named(NamedTag::Figure1);
        assert_eq!(value_pure(&g, &pp(&g, "Top,Left")).unwrap().value, vv(&[100, 100]));
        assert_eq!(value_pure(&g, &pp(&g, "Bottom,Center")).unwrap().value, vv(&[5, 0]));
        assert_eq!(value_pure(&g, &pp(&g, "Top,Center")).unwrap().value, vv(&[100, 0]));
    }

    #[test]
    fn witnesses_reproduce_values() {
        let g = named(NamedTag::Figure1);
        for e in value_table(&g) {
            for (i, w) in e.witnesses.iter().enumerate() {
                assert_eq!(g.payoff_at(w, i), &e.value[i]);
                assert_eq!(w[i], e.profile[i]);
            }
        }
        // (Middle, Center): player 1's worst case comes from player 2 moving to Right.
        let e = value_pure(&g, &pp(&g, "Middle,Center")).unwrap();
        assert_eq!(e.witnesses[0], pp(&g, "Middle,Right"));
    }

    #[test]
    fn deviation_space_contains_agreement() {
        let g = named(NamedTag::Figure1);
        let space = deviation_space(&g, &pp(&g, "Top,Left"), 0).unwrap();
        assert_eq!(space.options, vec![vec![0], vec![0, 1]]);
        assert_eq!(space.size(), 2);
    }

    #[test]
    fn constant_game_values_equal_payoffs() {
        let g = NormalFormGame::from_fn(
            vec!["1".into(), "2".into()],
            vec![vec!["a".into(), "b".into()], vec!["c".into(), "d".into()]],
            |_| vec![int(3), int(-1)],
        )
        .unwrap();
        for e in value_table(&g) {
            assert_eq!(e.value, vv(&[3, -1]));
        }
    }

    #[test]
    fn motivating_game_value_table() {
        // Hand enumeration: (U,L) is Nash; at (U,R) player 2 gains by moving
        // to L; at (D,L) player 1 moves back to U, which still pays 2 to player 2.
        let g = named(NamedTag::Motivating);
        let table: Vec<ValueVector> = value_table(&g).into_iter().map(|e| e.value).collect();
        assert_eq!(table, vec![vv(&[2, 2]), vv(&[0, 1]), vv(&[1, 2]), vv(&[1, 1])]);
    }

    #[test]
    fn optimin_examples() {
        let g = named(NamedTag::Motivating);
        assert_eq!(labels(&g, &optimin_pure(&g)), vec!["U,L"]);
        let pd = named(NamedTag::PrisonersDilemma);
        assert_eq!(labels(&pd, &optimin_pure(&pd)), vec!["Defect,Defect"]);
        let bos = named(NamedTag::BattleOfSexes);
        assert_eq!(labels(&bos, &optimin_pure(&bos)), vec!["Football,Football", "Opera,Opera"]);
        let f1 = named(NamedTag::Figure1);
        assert_eq!(labels(&f1, &optimin_pure(&f1)), vec!["Top,Left"]);
    }

    #[test]
    fn maximin_examples() {
        let f1 = named(NamedTag::Figure1);
        for m in maximin_profile(&f1) {
            assert_eq!(m.strategies, vec![0, 1, 2]);
            assert_eq!(m.security, int(0));
        }
        let mot = named(NamedTag::Motivating);
        let m = &maximin_profile(&mot)[0];
        assert_eq!((m.strategies.clone(), m.security.clone()), (vec![1], int(1)));
        for m in maximin_profile(&named(NamedTag::MatchingPennies)) {
            assert_eq!((m.strategies.clone(), m.security.clone()), (vec![0, 1], int(-1)));
        }
    }

    #[test]
    fn nash_examples() {
        let f1 = named(NamedTag::Figure1);
        assert_eq!(nash_pure(&f1), vec![pp(&f1, "Bottom,Right")]);
        let mot = named(NamedTag::Motivating);
        assert_eq!(nash_pure(&mot), vec![pp(&mot, "U,L")]);
        assert!(nash_pure(&named(NamedTag::MatchingPennies)).is_empty());
    }

    fn mixed(rows: &[&[Rational]]) -> MixedProfile {
        MixedProfile(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn mixed_value_examples() {
        let mp = named(NamedTag::MatchingPennies);
        let half = ratio(1, 2);
        let eq = mixed(&[&[half.clone(), half.clone()], &[half.clone(), half]]);
        assert_eq!(value_mixed_2p(&mp, &eq).unwrap().value, vv(&[0, 0]));
        let hh = mixed(&[&[int(1), int(0)], &[int(1), int(0)]]);
        assert_eq!(value_mixed_2p(&mp, &hh).unwrap().value, vv(&[-1, -1]));
    }

    #[test]
    fn mixed_value_at_top_left_admits_mixed_deviations() {
        // Player 2 may move to (1 - r) Center + r Right for any r < 1/21 and
        // still gain; player 1's infimum is 100 * 20/21 on that boundary.
        // Same by symmetry for player 2. Pure mode reports (100, 100).
        let g = named(NamedTag::Figure1);
        let p = MixedProfile::degenerate(&g, &pp(&g, "Top,Left")).unwrap();
        let e = value_mixed_2p(&g, &p).unwrap();
        assert_eq!(e.value, ValueVector(vec![ratio(2000, 21), ratio(2000, 21)]));
        assert_eq!(e.witnesses[0].0[1], vec![int(0), ratio(20, 21), ratio(1, 21)]);
    }

    #[test]
    fn mixed_value_requires_two_players() {
        let g = named(NamedTag::Figure1).fictitious_extension(&int(0));
        let p = MixedProfile::degenerate(&g, &PureProfile(vec![0, 0, 0])).unwrap();
        assert!(matches!(value_mixed_2p(&g, &p), Err(Error::UnsupportedArity { .. })));
    }

    #[test]
    fn grid_examples() {
        let mp = named(NamedTag::MatchingPennies);
        let grid = optimin_grid_2p(&mp, 2).unwrap();
        assert_eq!(grid.evaluated, 9);
        let half = ratio(1, 2);
        let center = mixed(&[&[half.clone(), half.clone()], &[half.clone(), half]]);
        let hit = grid.points.iter().find(|e| e.profile == center).expect("mixed equilibrium survives");
        assert_eq!(hit.value, vv(&[0, 0]));

        assert!(matches!(optimin_grid_2p(&mp, 0), Err(Error::Parameter(_))));
        let travelers = generators::travelers(2, 100, &int(2)).unwrap();
        assert!(matches!(optimin_grid_2p(&travelers, 2), Err(Error::Resource(_))));
    }

    #[test]
    fn grid_at_resolution_one_on_figure1() {
        // Point-mass agreements evaluated against mixed deviations. (Top,Left)
        // is the only agreement guaranteeing more than 5 to both players,
        // but (Top,Center) and (Middle,Left) keep 100 for one player.
        let g = named(NamedTag::Figure1);
        let grid = optimin_grid_2p(&g, 1).unwrap();
        let pure: Vec<String> = grid.points.iter().map(|e| g.profile_label(&e.profile.as_pure().unwrap())).collect();
        assert_eq!(pure, vec!["Top,Left", "Top,Center", "Middle,Left"]);
    }

    #[test]
    fn simplex_grid_ordering() {
        let g = simplex_grid(2, 2);
        assert_eq!(g, vec![vec![int(1), int(0)], vec![ratio(1, 2), ratio(1, 2)], vec![int(0), int(1)]]);
        assert_eq!(simplex_grid(3, 4).len(), 15);
        assert_eq!(simplex_grid(1, 3), vec![vec![int(1)]]);
    }

    #[test]
    fn maximin_equilibrium_examples() {
        let f1 = named(NamedTag::Figure1);
        assert!(is_maximin_equilibrium(&f1, &pp(&f1, "Top,Left")).unwrap());
        let pd = named(NamedTag::PrisonersDilemma);
        assert!(is_maximin_equilibrium(&pd, &pp(&pd, "Defect,Defect")).unwrap());
        assert!(!is_maximin_equilibrium(&pd, &pp(&pd, "Cooperate,Defect")).unwrap());
    }

    /// Value with the explicit `min(u_i(p), inf ...)` form, enumerated directly.
    fn value_with_explicit_min(game: &NormalFormGame, p: &[usize]) -> ValueVector {
        let n = game.num_players();
        let mut out = Vec::new();
        for i in 0..n {
            let mut worst = game.payoff_at(p, i).clone();
            for q in ProfileIter::new(&game.shape()) {
                if q[i] != p[i] {
                    continue;
                }
                let allowed =
                    (0..n).all(|j| j == i || q[j] == p[j] || game.payoff_with(p, j, q[j], j) > game.payoff_at(p, j));
                if allowed && game.payoff_at(&q, i) < &worst {
                    worst = game.payoff_at(&q, i).clone();
                }
            }
            out.push(worst);
        }
        ValueVector(out)
    }

    fn small_game() -> impl Strategy<Value = NormalFormGame> {
        (2usize..=3).prop_flat_map(|n| proptest::collection::vec(1usize..=3, n)).prop_flat_map(|shape| {
            let n = shape.len();
            let cells: usize = shape.iter().product();
            proptest::collection::vec(-6i64..=6, cells * n).prop_map(move |raw| {
                let players = (1..=n).map(|k| k.to_string()).collect();
                let strategies = shape.iter().map(|&m| (0..m).map(|s| format!("s{s}")).collect()).collect();
                NormalFormGame::new(players, strategies, raw.into_iter().map(int).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn explicit_min_form_agrees(g in small_game()) {
            for e in value_table(&g) {
                prop_assert_eq!(&e.value, &value_with_explicit_min(&g, &e.profile));
            }
        }

        #[test]
        fn value_never_exceeds_payoff(g in small_game()) {
            for e in value_table(&g) {
                let u = g.payoff(&e.profile).unwrap();
                prop_assert!(e.value.iter().zip(u.iter()).all(|(v, u)| v <= u));
            }
        }

        #[test]
        fn better_responses_strictly_improve(g in small_game()) {
            for p in g.profiles() {
                for i in 0..g.num_players() {
                    let br = better_responses(&g, &p, i).unwrap();
                    prop_assert!(!br.responses.contains(&p[i]));
                    for s in 0..g.num_strategies(i) {
                        let improves = g.payoff_with(&p, i, s, i) > g.payoff_at(&p, i);
                        prop_assert_eq!(improves, br.responses.contains(&s));
                    }
                }
            }
        }

        #[test]
        fn widened_rule_reduces_to_maximin(g in small_game()) {
            let frontier = pareto_filter(value_table_with(&g, DeviationRule::Any), |e| &e.value[..]).unwrap();
            let sets = maximin_profile(&g);
            let expected: Vec<PureProfile> = g.profiles().filter(|p| sets.iter().all(|m| m.strategies.contains(&p[m.player]))).collect();
            let got: Vec<PureProfile> = frontier.into_iter().map(|e| e.profile).collect();
            prop_assert_eq!(got, expected);
        }
    }

    fn two_player_game() -> impl Strategy<Value = NormalFormGame> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(a, b)| {
            proptest::collection::vec(-6i64..=6, a * b * 2).prop_map(move |raw| {
                let strategies =
                    vec![(0..a).map(|s| format!("r{s}")).collect(), (0..b).map(|s| format!("c{s}")).collect()];
                NormalFormGame::new(vec!["1".into(), "2".into()], strategies, raw.into_iter().map(int).collect())
                    .unwrap()
            })
        })
    }

    /// Infimum of `f` over `{q in simplex : g(q) >= c}` by enumerating the
    /// polytope's vertices: simplex corners meeting the constraint, plus the
    /// points on simplex edges where `g = c`.
    fn vertex_infimum(f: &[Rational], g: &[Rational], c: &Rational) -> Rational {
        let m = f.len();
        let mut best: Option<Rational> = None;
        let mut consider = |v: Rational| {
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        };
        for a in 0..m {
            if &g[a] >= c {
                consider(f[a].clone());
            }
            for b in 0..m {
                if g[a] > *c && g[b] < *c {
                    let t = (&g[a] - c) / (&g[a] - &g[b]);
                    consider((Rational::one() - &t) * &f[a] + &t * &f[b]);
                }
            }
        }
        best.unwrap()
    }

    proptest! {
        #[test]
        fn mixed_value_matches_vertex_oracle(g in two_player_game(), w in 0i64..=4) {
            // Player 1 mixes her first and last strategies, player 2 plays a point mass.
            let a = g.num_strategies(0);
            let t = ratio(w, 4);
            let mut row = vec![Rational::zero(); a];
            row[0] += Rational::one() - &t;
            row[a - 1] += t;
            let mut col = vec![Rational::zero(); g.num_strategies(1)];
            col[0] = Rational::one();
            let p = MixedProfile(vec![row, col]);
            let e = value_mixed_2p(&g, &p).unwrap();
            let u = g.expected_payoff(&p).unwrap();
            let b = g.num_strategies(1);
            let f: Vec<Rational> = (0..b).map(|x| slice_payoff(&g, 0, &p[0], x, 0)).collect();
            let gains: Vec<Rational> = (0..b).map(|x| slice_payoff(&g, 0, &p[0], x, 1)).collect();
            let expected = if gains.iter().any(|x| x > &u[1]) { vertex_infimum(&f, &gains, &u[1]) } else { u[0].clone() };
            prop_assert_eq!(&e.value[0], &expected);
            prop_assert!(e.value[0] <= u[0] && e.value[1] <= u[1]);
        }

        #[test]
        fn mixed_value_at_point_masses_is_at_most_pure(g in two_player_game()) {
            for p in g.profiles() {
                let m = MixedProfile::degenerate(&g, &p).unwrap();
                let lp = value_mixed_2p(&g, &m).unwrap().value;
                let pure = value_pure(&g, &p).unwrap().value;
                prop_assert!(lp.iter().zip(pure.iter()).all(|(a, b)| a <= b));
            }
        }

        #[test]
        fn grid_at_resolution_one_covers_pure_profiles(g in two_player_game()) {
            prop_assert_eq!(optimin_grid_2p(&g, 1).unwrap().evaluated, g.num_cells());
        }
    }
}
