//! One-to-one two-sided matching (marriage problems).
//!
//! Individuals are indexed `0..n` for side A and `n..2n` for side B. A
//! matching stores each individual's partner, or the individual herself
//! when single.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pareto::pareto_filter;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarriageProblem {
    n: usize,
    labels: Vec<String>,
    /// `rank[i][j]`: position of `j` in `i`'s order (0 is best); defined for
    /// `j` on the other side and for `j == i`.
    rank: Vec<Vec<usize>>,
    prefs: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl MarriageProblem {
    /// `prefs[i]` ranks individuals of the other side and `i` itself, best
    /// first. Anyone after `i` is unacceptable; partners missing from the
    /// list are appended after the listed ones in index order.
    pub fn new(a: Vec<String>, b: Vec<String>, prefs: Vec<Vec<usize>>) -> Result<Self> {
        let n = a.len();
        if b.len() != n {
            return Err(Error::Parameter(format!("sides must have equal size, got {} and {}", n, b.len())));
        }
        if prefs.len() != 2 * n {
            return Err(Error::Parameter(format!("expected {} preference lists, got {}", 2 * n, prefs.len())));
        }
        let mut labels = a;
        labels.extend(b);
        let mut full = Vec::with_capacity(2 * n);
        let mut rank = Vec::with_capacity(2 * n);
        for (i, list) in prefs.into_iter().enumerate() {
            let other = if i < n { n..2 * n } else { 0..n };
            let mut seen = vec![false; 2 * n];
            for &j in &list {
                if j >= 2 * n || (j != i && !other.contains(&j)) {
                    return Err(Error::Parameter(format!("{} ranks someone outside the other side", labels[i])));
                }
                if std::mem::replace(&mut seen[j], true) {
                    return Err(Error::Parameter(format!("{} ranks {} twice", labels[i], labels[j])));
                }
            }
            if !seen[i] {
                return Err(Error::Parameter(format!("{} must rank themself exactly once", labels[i])));
            }
            let mut order = list;
            order.extend(other.filter(|&j| !seen[j]));
            let mut r = vec![usize::MAX; 2 * n];
            for (pos, &j) in order.iter().enumerate() {
                r[j] = pos;
            }
            full.push(order);
            rank.push(r);
        }
        Ok(MarriageProblem { n, labels, rank, prefs: full })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Full preference order of `i`, best first, including `i`.
    pub fn preferences(&self, i: usize) -> &[usize] {
        &self.prefs[i]
    }

    /// `i` strictly prefers `x` to `y`.
    pub fn prefers(&self, i: usize, x: usize, y: usize) -> bool {
        self.rank[i][x] < self.rank[i][y]
    }

    pub fn acceptable(&self, i: usize, j: usize) -> bool {
        self.rank[i][j] < self.rank[i][i]
    }

    fn side_of(&self, i: usize) -> Side {
        if i < self.n {
            Side::A
        } else {
            Side::B
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching(pub Vec<usize>);

impl Matching {
    pub fn all_single(n: usize) -> Self {
        Matching((0..2 * n).collect())
    }

    /// Builds a matching from `(a, b)` pairs; everyone else is single.
    pub fn from_pairs(problem: &MarriageProblem, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner: Vec<usize> = (0..2 * problem.n).collect();
        for &(a, b) in pairs {
            if a >= problem.n || b < problem.n || b >= 2 * problem.n {
                return Err(Error::Parameter(format!("pair ({a}, {b}) does not join A to B")));
            }
            if partner[a] != a || partner[b] != b {
                return Err(Error::Parameter("an individual appears in two pairs".into()));
            }
            partner[a] = b;
            partner[b] = a;
        }
        Ok(Matching(partner))
    }

    pub fn partner(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn check(&self, problem: &MarriageProblem) -> Result<()> {
        let n = problem.n;
        if self.0.len() != 2 * n {
            return Err(Error::Parameter(format!("matching covers {} individuals, expected {}", self.0.len(), 2 * n)));
        }
        for (i, &j) in self.0.iter().enumerate() {
            let ok = j < 2 * n && self.0[j] == i && (j == i || problem.side_of(i) != problem.side_of(j));
            if !ok {
                return Err(Error::Parameter(format!("inconsistent partner for {}", problem.labels[i])));
            }
        }
        Ok(())
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.0.len() / 2;
        (0..n).filter(|&a| self.0[a] != a).map(|a| (a, self.0[a])).collect()
    }

    pub fn display<'a>(&'a self, problem: &'a MarriageProblem) -> impl fmt::Display + 'a {
        MatchingDisplay { m: self, p: problem }
    }
}

struct MatchingDisplay<'a> {
    m: &'a Matching,
    p: &'a MarriageProblem,
}

impl fmt::Display for MatchingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.p.n)
            .map(|a| {
                let b = self.m.0[a];
                if b == a {
                    format!("{}-single", self.p.labels[a])
                } else {
                    format!("{}-{}", self.p.labels[a], self.p.labels[b])
                }
            })
            .chain(
                (self.p.n..2 * self.p.n).filter(|&b| self.m.0[b] == b).map(|b| format!("{}-single", self.p.labels[b])),
            )
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Deferred acceptance with `proposing` side making offers.
pub fn deferred_acceptance(problem: &MarriageProblem, proposing: Side) -> Matching {
    let n = problem.n;
    let proposers = match proposing {
        Side::A => 0..n,
        Side::B => n..2 * n,
    };
    let mut partner: Vec<usize> = (0..2 * n).collect();
    let mut next = vec![0usize; 2 * n];
    let mut free: Vec<usize> = proposers.rev().collect();
    while let Some(p) = free.pop() {
        // Walk down p's list until someone holds the offer or p reaches herself.
        while next[p] < problem.prefs[p].len() {
            let t = problem.prefs[p][next[p]];
            next[p] += 1;
            if t == p {
                break;
            }
            let held = partner[t];
            if problem.prefers(t, p, held) {
                if held != t {
                    partner[held] = held;
                    free.push(held);
                }
                partner[t] = p;
                partner[p] = t;
                break;
            }
        }
    }
    Matching(partner)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stability {
    Stable,
    /// An individual who prefers being single to her partner.
    BlockingIndividual(usize),
    /// An `(a, b)` pair preferring each other to their partners.
    BlockingPair(usize, usize),
}

/// Individual rationality, then blocking pairs, each in index order.
pub fn is_stable(problem: &MarriageProblem, matching: &Matching) -> Result<Stability> {
    matching.check(problem)?;
    let n = problem.n;
    for i in 0..2 * n {
        if problem.prefers(i, i, matching.0[i]) {
            return Ok(Stability::BlockingIndividual(i));
        }
    }
    for a in 0..n {
        for b in n..2 * n {
            if matching.0[a] != b && problem.prefers(a, b, matching.0[a]) && problem.prefers(b, a, matching.0[b]) {
                return Ok(Stability::BlockingPair(a, b));
            }
        }
    }
    Ok(Stability::Stable)
}

/// Smallest building block of a profitable deviation: a pair who strictly
/// prefer each other to their partners, or an individual who strictly
/// prefers being single.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Unit {
    Single(usize),
    Pair(usize, usize),
}

fn units(problem: &MarriageProblem, m: &Matching) -> Vec<Unit> {
    let n = problem.n;
    let mut out = Vec::new();
    for i in 0..2 * n {
        if problem.prefers(i, i, m.0[i]) {
            out.push(Unit::Single(i));
        }
    }
    for a in 0..n {
        for b in n..2 * n {
            if problem.prefers(a, b, m.0[a]) && problem.prefers(b, a, m.0[b]) {
                out.push(Unit::Pair(a, b));
            }
        }
    }
    out.sort();
    out
}

/// A group that re-matches internally so that every member strictly gains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDeviation {
    /// Deviating individuals, ascending.
    pub members: Vec<usize>,
    /// New partner of each member (herself when she leaves to be single).
    pub rematch: Vec<(usize, usize)>,
}

pub const DEVIATION_MAX_SIZE: usize = 6;
pub const DEVIATION_LIMIT: usize = 200_000;

/// Every profitable group deviation from `matching`. Any such deviation is
/// a disjoint union of units, so these are enumerated in order.
pub fn profitable_group_deviations(problem: &MarriageProblem, matching: &Matching) -> Result<Vec<GroupDeviation>> {
    matching.check(problem)?;
    if problem.n > DEVIATION_MAX_SIZE {
        return Err(Error::Resource(format!("group deviations are enumerated for n <= {DEVIATION_MAX_SIZE}")));
    }
    let units = units(problem, matching);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    collect(&units, 0, 0, &mut chosen, &mut out)?;
    Ok(out)
}

fn collect(
    units: &[Unit],
    from: usize,
    used: u64,
    chosen: &mut Vec<Unit>,
    out: &mut Vec<GroupDeviation>,
) -> Result<()> {
    for k in from..units.len() {
        let mask = match units[k] {
            Unit::Single(i) => 1u64 << i,
            Unit::Pair(a, b) => 1u64 << a | 1u64 << b,
        };
        if used & mask != 0 {
            continue;
        }
        chosen.push(units[k]);
        let mut rematch: Vec<(usize, usize)> = chosen
            .iter()
            .flat_map(|u| match *u {
                Unit::Single(i) => vec![(i, i)],
                Unit::Pair(a, b) => vec![(a, b), (b, a)],
            })
            .collect();
        rematch.sort();
        out.push(GroupDeviation { members: rematch.iter().map(|&(i, _)| i).collect(), rematch });
        if out.len() > DEVIATION_LIMIT {
            return Err(Error::Resource(format!("more than {DEVIATION_LIMIT} group deviations")));
        }
        collect(units, k + 1, used | mask, chosen, out)?;
        chosen.pop();
    }
    Ok(())
}

/// Worst-case outcome of every individual: her partner, or being single if
/// that partner can join some profitable deviation (a deserted
/// non-deviator ends up single), whichever she likes less.
pub fn matching_value(problem: &MarriageProblem, matching: &Matching) -> Result<Vec<usize>> {
    matching.check(problem)?;
    Ok(value_unchecked(problem, matching))
}

fn value_unchecked(problem: &MarriageProblem, m: &Matching) -> Vec<usize> {
    let mut deviates = vec![false; 2 * problem.n];
    for u in units(problem, m) {
        match u {
            Unit::Single(i) => deviates[i] = true,
            Unit::Pair(a, b) => {
                deviates[a] = true;
                deviates[b] = true;
            }
        }
    }
    (0..2 * problem.n)
        .map(|i| {
            let p = m.0[i];
            if p != i && deviates[p] && problem.prefers(i, p, i) {
                i
            } else {
                p
            }
        })
        .collect()
}

/// Every matching, in lexicographic order of the partner vector.
pub fn all_matchings(problem: &MarriageProblem) -> Vec<Matching> {
    fn rec(a: usize, n: usize, partner: &mut Vec<usize>, out: &mut Vec<Matching>) {
        if a == n {
            out.push(Matching(partner.clone()));
            return;
        }
        // Options for a in ascending partner index: herself first, then B.
        rec(a + 1, n, partner, out);
        for b in n..2 * n {
            if partner[b] == b {
                partner[a] = b;
                partner[b] = a;
                rec(a + 1, n, partner, out);
                partner[a] = a;
                partner[b] = b;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, problem.n, &mut (0..2 * problem.n).collect(), &mut out);
    out.sort();
    out
}

pub const OPTIMIN_MAX_SIZE: usize = 5;

/// Matchings whose worst-case outcomes are Pareto optimal, each individual
/// comparing outcomes by her own preferences.
pub fn optimin_matchings(problem: &MarriageProblem) -> Result<Vec<(Matching, Vec<usize>)>> {
    if problem.n > OPTIMIN_MAX_SIZE {
        return Err(Error::Resource(format!("optimin matchings are enumerated for n <= {OPTIMIN_MAX_SIZE}")));
    }
    let valued: Vec<(Matching, Vec<usize>, Vec<i64>)> = all_matchings(problem)
        .into_par_iter()
        .map(|m| {
            let v = value_unchecked(problem, &m);
            let key = v.iter().enumerate().map(|(i, &o)| -(problem.rank[i][o] as i64)).collect();
            (m, v, key)
        })
        .collect();
    Ok(pareto_filter(valued, |(_, _, k)| &k[..])?.into_iter().map(|(m, v, _)| (m, v)).collect())
}
