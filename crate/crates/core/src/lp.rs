//! Exact linear programming.
//!
//! Two-phase primal simplex on a dense tableau of [`Rational`]s with Bland's
//! rule (entering variable = lowest index with negative reduced cost, leaving
//! variable = lowest basis index among ratio-test ties), so the method cannot
//! cycle and the returned vertex is deterministic.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Optional lower/upper bound of one variable; `None` means unbounded.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bounds {
    pub fn free() -> Self {
        Bounds::default()
    }

    pub fn nonnegative() -> Self {
        Bounds { lower: Some(Rational::zero()), upper: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub direction: Direction,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bounds>,
}

impl LinearProgram {
    /// New LP over `objective.len()` variables, all nonnegative by default.
    pub fn new(direction: Direction, objective: Vec<Rational>) -> Self {
        assert!(!objective.is_empty(), "a linear program needs at least one variable");
        let bounds = vec![Bounds::nonnegative(); objective.len()];
        LinearProgram { direction, objective, constraints: Vec::new(), bounds }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint width must match the variable count");
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, bounds: Bounds) -> &mut Self {
        self.bounds[var] = bounds;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, Bounds::free())
    }

    pub fn objective_at(&self, point: &[Rational]) -> Rational {
        dot(&self.objective, point)
    }

    /// Exact check of every constraint and bound.
    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars() {
            return false;
        }
        let rows_ok = self.constraints.iter().all(|c| {
            let lhs = dot(&c.coeffs, point);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        });
        let bounds_ok = self
            .bounds
            .iter()
            .zip(point)
            .all(|(b, x)| b.lower.as_ref().is_none_or(|l| x >= l) && b.upper.as_ref().is_none_or(|u| x <= u));
        rows_ok && bounds_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpSolution {
    Optimal { point: Vec<Rational>, objective: Rational },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn status(&self) -> LpStatus {
        match self {
            LpSolution::Optimal { .. } => LpStatus::Optimal,
            LpSolution::Infeasible => LpStatus::Infeasible,
            LpSolution::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpSolution::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn objective(&self) -> Option<&Rational> {
        match self {
            LpSolution::Optimal { objective, .. } => Some(objective),
            _ => None,
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Original variable `x = offset + sum(sign * y_col)` in terms of the
/// nonnegative standard-form columns.
struct VarMap {
    offset: Rational,
    terms: Vec<(usize, bool)>,
}

struct Tableau {
    /// `rows[r]` holds the coefficients followed by the rhs in the last slot.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Reduced costs `c_j - c_B B^-1 A_j` and the current objective value.
    fn reduced_costs(&self, cost: &[Rational]) -> (Vec<Rational>, Rational) {
        let mut reduced = cost.to_vec();
        let mut value = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, red) in reduced.iter_mut().enumerate() {
                let a = &self.rows[r][j];
                if !a.is_zero() {
                    *red -= cb * a;
                }
            }
            value += cb * self.rhs(r);
        }
        (reduced, value)
    }

    /// Minimizes `cost` over columns `allowed`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let (reduced, _) = self.reduced_costs(cost);
            let entering = (0..self.cols).find(|&j| allowed[j] && reduced[j].is_negative());
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

/// Solves `lp` exactly. An optimal point is checked against every
/// constraint before it is returned.
pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    // Standard form: min c.y, A y = b, y >= 0.
    let mut maps = Vec::with_capacity(lp.num_vars());
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for b in &lp.bounds {
        let map = match (&b.lower, &b.upper) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    if u < l {
                        return LpSolution::Infeasible;
                    }
                    bound_rows.push((ncols, u - l));
                }
                VarMap { offset: l.clone(), terms: vec![(ncols, true)] }
            }
            (None, Some(u)) => VarMap { offset: u.clone(), terms: vec![(ncols, false)] },
            (None, None) => {
                ncols += 1;
                VarMap { offset: Rational::zero(), terms: vec![(ncols - 1, true), (ncols, false)] }
            }
        };
        ncols += 1;
        maps.push(map);
    }
    let structural = ncols;

    // Rows over structural columns, with their relation and rhs.
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![Rational::zero(); structural];
        let mut rhs = c.rhs.clone();
        for (a, map) in c.coeffs.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            rhs -= a * &map.offset;
            for &(col, positive) in &map.terms {
                if positive {
                    coeffs[col] += a;
                } else {
                    coeffs[col] -= a;
                }
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    for (col, cap) in bound_rows {
        let mut coeffs = vec![Rational::zero(); structural];
        coeffs[col] = Rational::from_integer(1.into());
        rows.push((coeffs, Relation::Le, cap));
    }

    // Slack/surplus columns, then artificials where no slack can start basic.
    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let slack_start = structural;
    let art_start = structural + slack_count;
    let mut needs_art = Vec::with_capacity(rows.len());
    let mut slack_of_row = Vec::with_capacity(rows.len());
    {
        let mut s = slack_start;
        for (_, rel, rhs) in &rows {
            let flip = rhs.is_negative();
            let slack = match rel {
                Relation::Eq => None,
                _ => {
                    s += 1;
                    Some(s - 1)
                }
            };
            // After flipping the row sign a <= row carries slack -1 and a >= row +1.
            let slack_positive = match rel {
                Relation::Le => !flip,
                Relation::Ge => flip,
                Relation::Eq => false,
            };
            needs_art.push(!slack_positive);
            slack_of_row.push(slack);
        }
    }
    let art_count = needs_art.iter().filter(|&&x| x).count();
    let cols = art_start + art_count;
    let one = Rational::from_integer(1.into());

    let mut tableau = Tableau { rows: Vec::with_capacity(rows.len()), basis: Vec::with_capacity(rows.len()), cols };
    let mut next_art = art_start;
    for (r, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
        let flip = rhs.is_negative();
        let mut row = vec![Rational::zero(); cols + 1];
        for (j, a) in coeffs.into_iter().enumerate() {
            row[j] = if flip { -a } else { a };
        }
        if let Some(s) = slack_of_row[r] {
            let sign_pos = matches!(rel, Relation::Le);
            row[s] = if sign_pos != flip { one.clone() } else { -one.clone() };
        }
        row[cols] = if flip { -rhs } else { rhs };
        let basic = if needs_art[r] {
            row[next_art] = one.clone();
            next_art += 1;
            next_art - 1
        } else {
            slack_of_row[r].expect("row without artificial has a slack")
        };
        tableau.rows.push(row);
        tableau.basis.push(basic);
    }

    // Phase 1.
    if art_count > 0 {
        let mut cost = vec![Rational::zero(); cols];
        for c in cost.iter_mut().skip(art_start) {
            *c = one.clone();
        }
        let allowed = vec![true; cols];
        tableau.optimize(&cost, &allowed);
        let (_, infeasibility) = tableau.reduced_costs(&cost);
        if infeasibility.is_positive() {
            return LpSolution::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut r = 0;
        while r < tableau.rows.len() {
            if tableau.basis[r] >= art_start {
                match (0..art_start).find(|&j| !tableau.rows[r][j].is_zero()) {
                    Some(j) => {
                        tableau.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        tableau.rows.remove(r);
                        tableau.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    // Phase 2 over structural and slack columns.
    let mut cost = vec![Rational::zero(); cols];
    for (a, map) in lp.objective.iter().zip(&maps) {
        let a = if lp.direction == Direction::Maximize { -a.clone() } else { a.clone() };
        for &(col, positive) in &map.terms {
            if positive {
                cost[col] += &a;
            } else {
                cost[col] -= &a;
            }
        }
    }
    let allowed: Vec<bool> = (0..cols).map(|j| j < art_start).collect();
    if !tableau.optimize(&cost, &allowed) {
        return LpSolution::Unbounded;
    }

    let mut y = vec![Rational::zero(); cols];
    for (r, &b) in tableau.basis.iter().enumerate() {
        y[b] = tableau.rhs(r).clone();
    }
    let point: Vec<Rational> = maps
        .iter()
        .map(|m| {
            let mut x = m.offset.clone();
            for &(col, positive) in &m.terms {
                if positive {
                    x += &y[col];
                } else {
                    x -= &y[col];
                }
            }
            x
        })
        .collect();
    assert!(lp.is_satisfied_by(&point), "simplex returned a point violating the constraints");
    let objective = lp.objective_at(&point);
    LpSolution::Optimal { point, objective }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn max_x_below_three() {
        let mut lp = LinearProgram::new(Direction::Maximize, ints(&[1]));
        lp.add_constraint(ints(&[1]), Relation::Le, int(3));
        assert_eq!(solve_lp(&lp), LpSolution::Optimal { point: ints(&[3]), objective: int(3) });
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::new(Direction::Maximize, ints(&[1]));
        lp.add_constraint(ints(&[1]), Relation::Ge, int(1));
        lp.add_constraint(ints(&[1]), Relation::Le, int(0));
        assert_eq!(solve_lp(&lp).status(), LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_objective() {
        let mut lp = LinearProgram::new(Direction::Maximize, ints(&[1, 1]));
        lp.add_constraint(ints(&[1, -1]), Relation::Le, int(2));
        assert_eq!(solve_lp(&lp).status(), LpStatus::Unbounded);
    }

    #[test]
    fn free_and_bounded_variables() {
        // min x s.t. x >= -5 expressed as a free variable with a row.
        let mut lp = LinearProgram::new(Direction::Minimize, ints(&[1]));
        lp.set_free(0);
        lp.add_constraint(ints(&[1]), Relation::Ge, int(-5));
        assert_eq!(solve_lp(&lp).objective(), Some(&int(-5)));

        // max x + 2y with x in [1, 2], y <= 7/2 (no lower bound), x + y = 4:
        // y is capped at 3 by x >= 1.
        let mut lp = LinearProgram::new(Direction::Maximize, ints(&[1, 2]));
        lp.set_bounds(0, Bounds { lower: Some(int(1)), upper: Some(int(2)) });
        lp.set_bounds(1, Bounds { lower: None, upper: Some(ratio(7, 2)) });
        lp.add_constraint(ints(&[1, 1]), Relation::Eq, int(4));
        assert_eq!(solve_lp(&lp), LpSolution::Optimal { point: ints(&[1, 3]), objective: int(7) });

        // min -y with y <= 7/2 and no lower bound.
        let mut lp = LinearProgram::new(Direction::Minimize, ints(&[-1]));
        lp.set_bounds(0, Bounds { lower: None, upper: Some(ratio(7, 2)) });
        assert_eq!(solve_lp(&lp).point(), Some(&[ratio(7, 2)][..]));
    }

    #[test]
    fn inverted_bounds_are_infeasible() {
        let mut lp = LinearProgram::new(Direction::Minimize, ints(&[1]));
        lp.set_bounds(0, Bounds { lower: Some(int(3)), upper: Some(int(2)) });
        assert_eq!(solve_lp(&lp), LpSolution::Infeasible);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(Direction::Minimize, ints(&[1, 1]));
        lp.add_constraint(ints(&[1, 1]), Relation::Eq, int(2));
        lp.add_constraint(ints(&[2, 2]), Relation::Eq, int(4));
        assert_eq!(solve_lp(&lp).objective(), Some(&int(2)));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // A classic cycling example under the largest-coefficient rule (Beale).
        let mut lp = LinearProgram::new(Direction::Minimize, vec![ratio(-3, 4), int(150), ratio(-1, 50), int(6)]);
        lp.add_constraint(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)], Relation::Le, int(0));
        lp.add_constraint(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)], Relation::Le, int(0));
        lp.add_constraint(ints(&[0, 0, 1, 0]), Relation::Le, int(1));
        assert_eq!(solve_lp(&lp).objective(), Some(&ratio(-1, 20)));
    }

    /// Brute-force optimum over every basic point: intersect each choice of
    /// `n` tight constraints (rows and bounds, all as inequalities), keep the
    /// feasible ones, take the best. Requires a bounded feasible region.
    fn brute_force(lp: &LinearProgram) -> Option<Rational> {
        let n = lp.num_vars();
        let mut planes: Vec<(Vec<Rational>, Rational)> =
            lp.constraints.iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect();
        for (j, b) in lp.bounds.iter().enumerate() {
            let mut e = vec![Rational::zero(); n];
            e[j] = int(1);
            for v in [&b.lower, &b.upper].into_iter().flatten() {
                planes.push((e.clone(), v.clone()));
            }
        }
        let mut best: Option<Rational> = None;
        let idx: Vec<usize> = (0..planes.len()).collect();
        for combo in combinations(&idx, n) {
            let a: Vec<Vec<Rational>> = combo.iter().map(|&k| planes[k].0.clone()).collect();
            let b: Vec<Rational> = combo.iter().map(|&k| planes[k].1.clone()).collect();
            if let Some(x) = gauss(a, b) {
                if lp.is_satisfied_by(&x) {
                    let v = lp.objective_at(&x);
                    let better = match (&best, lp.direction) {
                        (None, _) => true,
                        (Some(bv), Direction::Maximize) => v > *bv,
                        (Some(bv), Direction::Minimize) => v < *bv,
                    };
                    if better {
                        best = Some(v);
                    }
                }
            }
        }
        best
    }

    fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            for mut rest in combinations(&items[i + 1..], k - 1) {
                rest.insert(0, x);
                out.push(rest);
            }
        }
        out
    }

    fn gauss(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
        let n = b.len();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            b.swap(col, piv);
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = &a[r][col] / &a[col][col];
                    for c in 0..n {
                        let d = &f * &a[col][c];
                        a[r][c] -= d;
                    }
                    let d = &f * &b[col];
                    b[r] -= d;
                }
            }
        }
        Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
    }

    fn tiny_lp() -> impl Strategy<Value = LinearProgram> {
        (1usize..=3, 0usize..=5, any::<bool>()).prop_flat_map(|(n, m, maximize)| {
            (
                proptest::collection::vec(-5i64..=5, n),
                proptest::collection::vec((proptest::collection::vec(-4i64..=4, n), 0u8..3, -6i64..=10), m),
            )
                .prop_map(move |(obj, rows)| {
                    let dir = if maximize { Direction::Maximize } else { Direction::Minimize };
                    let mut lp = LinearProgram::new(dir, obj.into_iter().map(int).collect());
                    for j in 0..n {
                        lp.set_bounds(j, Bounds { lower: Some(int(-3)), upper: Some(int(6)) });
                    }
                    for (coeffs, rel, rhs) in rows {
                        let rel = [Relation::Le, Relation::Eq, Relation::Ge][rel as usize];
                        lp.add_constraint(coeffs.into_iter().map(int).collect(), rel, int(rhs));
                    }
                    lp
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn matches_vertex_enumeration(lp in tiny_lp()) {
            let sol = solve_lp(&lp);
            match brute_force(&lp) {
                None => prop_assert_eq!(sol.status(), LpStatus::Infeasible),
                Some(v) => {
                    prop_assert_eq!(sol.objective(), Some(&v));
                    prop_assert!(lp.is_satisfied_by(sol.point().unwrap()));
                }
            }
        }
    }
}
