//! Finite decision problems against Nature with optimism constraints.
//!
//! The decision maker (DM) picks an act, Nature a state. An optimism
//! constraint says, for each act-state profile, which states the DM deems
//! possible (and, symmetrically, which acts Nature deems possible). A
//! profile is valued by the worst utility over those states.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pareto::pareto_filter;
use crate::rational::Rational;

/// Nature's utility, when it has one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NatureUtility {
    /// Nature is indifferent; optimin ranks by the DM's value alone.
    Absent,
    /// Nature's utility is the negated DM utility.
    Antagonist,
    /// An explicit `acts x states` table.
    Table(Vec<Vec<Option<Rational>>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionProblem {
    acts: Vec<String>,
    states: Vec<String>,
    feasible_states: Vec<Vec<usize>>,
    feasible_acts: Vec<Vec<usize>>,
    utility: Vec<Vec<Option<Rational>>>,
    nature: NatureUtility,
}

impl DecisionProblem {
    /// `feasible_states[a]` lists states possible under act `a`,
    /// `feasible_acts[s]` acts available in state `s`; `utility[a][s]` must
    /// be present exactly on profiles feasible under both maps.
    pub fn new(
        acts: Vec<String>,
        states: Vec<String>,
        feasible_states: Vec<Vec<usize>>,
        feasible_acts: Vec<Vec<usize>>,
        utility: Vec<Vec<Option<Rational>>>,
        nature: NatureUtility,
    ) -> Result<Self> {
        let (na, ns) = (acts.len(), states.len());
        if na == 0 || ns == 0 {
            return Err(Error::EmptyInput("a decision problem needs acts and states"));
        }
        if feasible_states.len() != na || feasible_acts.len() != ns {
            return Err(Error::Parameter("one feasibility list per act and per state is required".into()));
        }
        for (a, list) in feasible_states.iter().enumerate() {
            if list.is_empty() || list.iter().any(|&s| s >= ns) {
                return Err(Error::Parameter(format!(
                    "act {} has an empty or out-of-range feasible state list",
                    acts[a]
                )));
            }
        }
        for (s, list) in feasible_acts.iter().enumerate() {
            if list.is_empty() || list.iter().any(|&a| a >= na) {
                return Err(Error::Parameter(format!(
                    "state {} has an empty or out-of-range feasible act list",
                    states[s]
                )));
            }
        }
        let check_table = |table: &Vec<Vec<Option<Rational>>>, who: &str| -> Result<()> {
            if table.len() != na || table.iter().any(|row| row.len() != ns) {
                return Err(Error::Parameter(format!("{who} utility table must be {na} x {ns}")));
            }
            for a in 0..na {
                for s in 0..ns {
                    let feasible = feasible_states[a].contains(&s) && feasible_acts[s].contains(&a);
                    if feasible != table[a][s].is_some() {
                        return Err(Error::Parameter(format!(
                            "{who} utility at ({}, {}) must be given exactly when the pair is feasible",
                            acts[a], states[s]
                        )));
                    }
                }
            }
            Ok(())
        };
        check_table(&utility, "DM")?;
        if let NatureUtility::Table(t) = &nature {
            check_table(t, "Nature")?;
        }
        Ok(DecisionProblem { acts, states, feasible_states, feasible_acts, utility, nature })
    }

    /// Every act-state pair feasible, utilities from a full table.
    pub fn unconstrained(
        acts: Vec<String>,
        states: Vec<String>,
        utility: Vec<Vec<Rational>>,
        nature: NatureUtility,
    ) -> Result<Self> {
        let (na, ns) = (acts.len(), states.len());
        let table = utility.into_iter().map(|row| row.into_iter().map(Some).collect()).collect();
        Self::new(acts, states, vec![(0..ns).collect(); na], vec![(0..na).collect(); ns], table, nature)
    }

    pub fn acts(&self) -> &[String] {
        &self.acts
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn nature(&self) -> &NatureUtility {
        &self.nature
    }

    pub fn is_feasible(&self, act: usize, state: usize) -> bool {
        act < self.acts.len() && state < self.states.len() && self.utility[act][state].is_some()
    }

    pub fn feasible_profiles(&self) -> Vec<(usize, usize)> {
        (0..self.acts.len())
            .flat_map(|a| (0..self.states.len()).map(move |s| (a, s)))
            .filter(|&(a, s)| self.is_feasible(a, s))
            .collect()
    }

    pub fn feasible_states(&self, act: usize) -> &[usize] {
        &self.feasible_states[act]
    }

    pub fn feasible_acts(&self, state: usize) -> &[usize] {
        &self.feasible_acts[state]
    }

    pub fn utility(&self, act: usize, state: usize) -> Option<&Rational> {
        self.utility.get(act)?.get(state)?.as_ref()
    }

    fn nature_utility(&self, act: usize, state: usize) -> Option<Rational> {
        match &self.nature {
            NatureUtility::Absent => None,
            NatureUtility::Antagonist => self.utility(act, state).map(|u| -u.clone()),
            NatureUtility::Table(t) => t[act][state].clone(),
        }
    }
}

/// Where an optimism-constraint entry applies: a specific act and/or state,
/// `None` standing for the `*` wildcard.
pub type OcKey = (Option<usize>, Option<usize>);

/// Optimism constraint tables. Lookup tries `(act, state)`, then
/// `(act, *)`, `(*, state)` and finally `(*, *)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OptimismConstraint {
    /// States the DM deems possible.
    pub states: BTreeMap<OcKey, Vec<usize>>,
    /// Acts Nature deems possible. Defaults to the acts feasible in the
    /// state when no entry matches.
    pub acts: BTreeMap<OcKey, Vec<usize>>,
}

fn lookup(table: &BTreeMap<OcKey, Vec<usize>>, a: usize, s: usize) -> Option<&Vec<usize>> {
    [(Some(a), Some(s)), (Some(a), None), (None, Some(s)), (None, None)].iter().find_map(|k| table.get(k))
}

impl OptimismConstraint {
    /// The same set of states for every profile.
    pub fn constant(states: Vec<usize>) -> Self {
        let mut oc = OptimismConstraint::default();
        oc.states.insert((None, None), states);
        oc
    }

    pub fn states_for(&self, act: usize, state: usize) -> Option<&Vec<usize>> {
        lookup(&self.states, act, state)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DecisionValue {
    pub dm: Rational,
    pub nature: Option<Rational>,
}

/// Worst DM utility over the states deemed possible at `(act, state)`,
/// and Nature's worst utility over the acts it deems possible.
pub fn decision_value(
    problem: &DecisionProblem,
    oc: &OptimismConstraint,
    act: usize,
    state: usize,
) -> Result<DecisionValue> {
    if !problem.is_feasible(act, state) {
        return Err(Error::Domain(format!("profile ({act}, {state}) is not feasible")));
    }
    let label = || format!("({}, {})", problem.acts[act], problem.states[state]);
    let states = oc
        .states_for(act, state)
        .ok_or_else(|| Error::Constraint(format!("no optimism constraint covers {}", label())))?;
    if states.is_empty() {
        return Err(Error::Constraint(format!("empty optimism constraint at {}", label())));
    }
    let mut dm: Option<&Rational> = None;
    for &s in states {
        if !problem.feasible_states[act].contains(&s) || !problem.is_feasible(act, s) {
            return Err(Error::Constraint(format!("optimism constraint at {} admits an infeasible state", label())));
        }
        let u = problem.utility(act, s).expect("feasible");
        if dm.is_none_or(|d| u < d) {
            dm = Some(u);
        }
    }
    let nature = if matches!(problem.nature, NatureUtility::Absent) {
        None
    } else {
        let acts = lookup(&oc.acts, act, state).unwrap_or(&problem.feasible_acts[state]);
        if acts.is_empty() {
            return Err(Error::Constraint(format!("empty optimism constraint for Nature at {}", label())));
        }
        let mut worst: Option<Rational> = None;
        for &a in acts {
            let u = problem.nature_utility(a, state).ok_or_else(|| {
                Error::Constraint(format!("Nature's constraint at {} admits an infeasible act", label()))
            })?;
            if worst.as_ref().is_none_or(|w| u < *w) {
                worst = Some(u);
            }
        }
        worst
    };
    Ok(DecisionValue { dm: dm.expect("nonempty").clone(), nature })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionOptimin {
    /// True when Nature has no utility and profiles were ranked by the DM's
    /// value alone.
    pub dm_only: bool,
    pub profiles: Vec<((usize, usize), DecisionValue)>,
}

impl DecisionOptimin {
    /// Distinct acts among the optimin profiles, ascending.
    pub fn acts(&self) -> Vec<usize> {
        let mut acts: Vec<usize> = self.profiles.iter().map(|((a, _), _)| *a).collect();
        acts.dedup();
        acts
    }
}

pub fn optimin_acts(problem: &DecisionProblem, oc: &OptimismConstraint) -> Result<DecisionOptimin> {
    let valued = problem
        .feasible_profiles()
        .into_iter()
        .map(|(a, s)| Ok(((a, s), decision_value(problem, oc, a, s)?)))
        .collect::<Result<Vec<_>>>()?;
    let dm_only = matches!(problem.nature, NatureUtility::Absent);
    let profiles = if dm_only {
        let best = valued.iter().map(|(_, v)| &v.dm).max().expect("some profile is feasible").clone();
        valued.into_iter().filter(|(_, v)| v.dm == best).collect()
    } else {
        let keyed: Vec<_> = valued
            .into_iter()
            .map(|(p, v)| {
                let key = [v.dm.clone(), v.nature.clone().expect("Nature has a utility")];
                ((p, v), key)
            })
            .collect();
        pareto_filter(keyed, |(_, k)| &k[..])?.into_iter().map(|(p, _)| p).collect()
    };
    Ok(DecisionOptimin { dm_only, profiles })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GilboaReport {
    /// The DM's constraint is the same set of states at every profile.
    pub constant_oc: bool,
    /// Comparison reduces to the DM's value (Nature has no utility).
    pub dm_only: bool,
    /// When both hold: whether the optimin acts equal the acts maximizing
    /// the minimum utility over that constant set.
    pub reduction_holds: Option<bool>,
    pub notes: Vec<String>,
}

pub fn gilboa_reduction_check(problem: &DecisionProblem, oc: &OptimismConstraint) -> Result<GilboaReport> {
    let mut notes = vec!["closedness and convexity of the constraint are automatic for finite sets".to_string()];
    let profiles = problem.feasible_profiles();
    let sets: Vec<Option<&Vec<usize>>> = profiles.iter().map(|&(a, s)| oc.states_for(a, s)).collect();
    let first = sets[0];
    let constant_oc = first.is_some() && sets.iter().all(|s| *s == first);
    let dm_only = matches!(problem.nature, NatureUtility::Absent);
    if !constant_oc {
        notes.push("the DM's optimism constraint varies across profiles".into());
    }
    if !dm_only {
        notes.push("Nature has a utility, so values are compared in both coordinates".into());
    }
    let reduction_holds = if constant_oc && dm_only {
        let states = first.expect("checked");
        let optimin = optimin_acts(problem, oc)?.acts();
        let guarantee = |a: usize| -> Option<Rational> {
            states.iter().map(|&s| problem.utility(a, s).cloned()).collect::<Option<Vec<_>>>()?.into_iter().min()
        };
        let scored: Vec<(usize, Rational)> =
            (0..problem.acts.len()).filter_map(|a| guarantee(a).map(|g| (a, g))).collect();
        let best = scored.iter().map(|(_, g)| g).max().cloned();
        let maxmin: Vec<usize> = scored.iter().filter(|(_, g)| Some(g) == best.as_ref()).map(|(a, _)| *a).collect();
        Some(optimin == maxmin)
    } else {
        None
    };
    Ok(GilboaReport { constant_oc, dm_only, reduction_holds, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::NormalFormGame;
    use crate::noncoop::maximin_profile;
    use crate::rational::int;
    use proptest::prelude::*;

    fn names(prefix: &str, k: usize) -> Vec<String> {
        (1..=k).map(|i| format!("{prefix}{i}")).collect()
    }

    fn table(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn small() -> DecisionProblem {
        DecisionProblem::unconstrained(
            names("act", 2),
            names("state", 2),
            table(&[&[4, 0], &[1, 1]]),
            NatureUtility::Absent,
        )
        .unwrap()
    }

    #[test]
    fn values() {
        let p = small();
        let all = OptimismConstraint::constant(vec![0, 1]);
        assert_eq!(decision_value(&p, &all, 0, 0).unwrap().dm, int(0));
        assert_eq!(decision_value(&p, &all, 1, 0).unwrap().dm, int(1));
        let single = OptimismConstraint::constant(vec![0]);
        assert_eq!(decision_value(&p, &single, 0, 1).unwrap().dm, int(4));
        assert!(matches!(decision_value(&p, &OptimismConstraint::default(), 0, 0), Err(Error::Constraint(_))));
        assert!(matches!(decision_value(&p, &OptimismConstraint::constant(vec![]), 0, 0), Err(Error::Constraint(_))));
    }

    #[test]
    fn optimin_examples() {
        let p = small();
        let all = optimin_acts(&p, &OptimismConstraint::constant(vec![0, 1])).unwrap();
        assert!(all.dm_only);
        let profiles: Vec<(usize, usize)> = all.profiles.iter().map(|(p, _)| *p).collect();
        assert_eq!(profiles, vec![(1, 0), (1, 1)]);
        let single = optimin_acts(&p, &OptimismConstraint::constant(vec![0])).unwrap();
        assert_eq!(single.acts(), vec![0]);
    }

    #[test]
    fn mortgage_reversal() {
        // Buying pays 10 in a boom and -5 in a bust; renting 2 and 1. A DM
        // who, having bought, deems only the boom possible ends up buying.
        let p = DecisionProblem::unconstrained(
            vec!["buy".into(), "rent".into()],
            vec!["boom".into(), "bust".into()],
            table(&[&[10, -5], &[2, 1]]),
            NatureUtility::Absent,
        )
        .unwrap();
        let cautious = OptimismConstraint::constant(vec![0, 1]);
        assert_eq!(optimin_acts(&p, &cautious).unwrap().acts(), vec![1]);
        let mut hopeful = OptimismConstraint::constant(vec![0, 1]);
        hopeful.states.insert((Some(0), None), vec![0]);
        assert_eq!(optimin_acts(&p, &hopeful).unwrap().acts(), vec![0]);
        let report = gilboa_reduction_check(&p, &hopeful).unwrap();
        assert!(!report.constant_oc);
        assert_eq!(report.reduction_holds, None);
    }

    #[test]
    fn gilboa_examples() {
        let p = small();
        for oc in [OptimismConstraint::constant(vec![0, 1]), OptimismConstraint::constant(vec![1])] {
            let r = gilboa_reduction_check(&p, &oc).unwrap();
            assert!(r.constant_oc && r.dm_only);
            assert_eq!(r.reduction_holds, Some(true));
        }
    }

    #[test]
    fn feasibility_is_respected() {
        // act2 cannot meet state1; its value ignores that state entirely.
        let p = DecisionProblem::new(
            names("act", 2),
            names("state", 2),
            vec![vec![0, 1], vec![1]],
            vec![vec![0], vec![0, 1]],
            vec![vec![Some(int(3)), Some(int(-2))], vec![None, Some(int(1))]],
            NatureUtility::Antagonist,
        )
        .unwrap();
        let mut oc = OptimismConstraint::constant(vec![0, 1]);
        oc.states.insert((Some(1), None), vec![1]);
        let v = decision_value(&p, &oc, 1, 1).unwrap();
        assert_eq!(v, DecisionValue { dm: int(1), nature: Some(int(-1)) });
        assert!(matches!(decision_value(&p, &oc, 1, 0), Err(Error::Domain(_))));
        assert!(matches!(
            decision_value(&p, &OptimismConstraint::constant(vec![0, 1]), 1, 1),
            Err(Error::Constraint(_))
        ));
        assert!(!optimin_acts(&p, &oc).unwrap().dm_only);
    }

    #[test]
    fn malformed_problems() {
        assert!(DecisionProblem::unconstrained(vec![], names("s", 1), vec![], NatureUtility::Absent).is_err());
        let bad = DecisionProblem::new(
            names("act", 1),
            names("state", 1),
            vec![vec![0]],
            vec![vec![0]],
            vec![vec![None]],
            NatureUtility::Absent,
        );
        assert!(bad.is_err());
    }

    fn random_table() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=4, 1usize..=4)
            .prop_flat_map(|(a, s)| proptest::collection::vec(proptest::collection::vec(-5i64..=5, s), a))
    }

    proptest! {
        #[test]
        fn all_states_gives_maximin_acts(t in random_table()) {
            let (na, ns) = (t.len(), t[0].len());
            let utility: Vec<Vec<Rational>> = t.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            let p = DecisionProblem::unconstrained(names("a", na), names("s", ns), utility.clone(), NatureUtility::Absent).unwrap();
            let acts = optimin_acts(&p, &OptimismConstraint::constant((0..ns).collect())).unwrap().acts();
            let game = NormalFormGame::from_fn(vec!["dm".into(), "nature".into()], vec![names("a", na), names("s", ns)], |q| {
                vec![utility[q[0]][q[1]].clone(), int(0)]
            }).unwrap();
            prop_assert_eq!(&acts, &maximin_profile(&game)[0].strategies);
        }

        #[test]
        fn shrinking_constraint_never_lowers_value(t in random_table(), keep in proptest::collection::vec(any::<bool>(), 4)) {
            let (na, ns) = (t.len(), t[0].len());
            let utility = t.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            let p = DecisionProblem::unconstrained(names("a", na), names("s", ns), utility, NatureUtility::Absent).unwrap();
            let full = OptimismConstraint::constant((0..ns).collect());
            let mut subset: Vec<usize> = (0..ns).filter(|&s| keep[s]).collect();
            if subset.is_empty() {
                subset.push(0);
            }
            let shrunk = OptimismConstraint::constant(subset);
            for (a, s) in p.feasible_profiles() {
                prop_assert!(decision_value(&p, &shrunk, a, s).unwrap().dm >= decision_value(&p, &full, a, s).unwrap().dm);
            }
        }
    }
}
