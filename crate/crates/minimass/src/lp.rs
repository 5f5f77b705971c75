//! Dense two-phase simplex with Bland's rule, generic over the scalar.
//!
//! The same code runs exactly over `BigRational` (zero tolerance, used for
//! chain mass minimization where equality cases and integrality checks need
//! exact arithmetic) and over `f64` with a pivot tolerance (used for the
//! sampled support-functional programs in the contractor constructions).
//! A depth-limited branch-and-bound on top handles integer and cyclic
//! coefficient groups.
//!
//! Problems are small: tens of rows for chain programs, a few hundred for
//! sampled feasibility programs. No sparse storage, no factorization reuse.

use crate::geometry::Rat;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait LpScalar: Clone + PartialOrd + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `|x| <= tol` (tol = 0 for exact scalars).
    fn is_zero_tol(&self) -> bool;
    fn is_pos_tol(&self) -> bool;
    fn is_neg_tol(&self) -> bool {
        self.neg().is_pos_tol()
    }
    /// Acceptable as a simplex pivot (a laxer threshold than the reduced-cost
    /// tolerance, so degenerate phase-1 bases can still make progress).
    fn is_pivot(&self) -> bool {
        self.is_pos_tol()
    }
    /// Phase-1 residual large enough to declare the program infeasible.
    /// Floating tableaus accumulate roundoff over hundreds of pivots, so the
    /// verdict threshold is laxer than the pivot tolerance.
    fn is_infeasibility(&self) -> bool {
        self.is_pos_tol()
    }
    fn is_integer_tol(&self) -> bool;
    fn floor_int(&self) -> i64;
}

impl LpScalar for f64 {
    fn zero() -> f64 {
        0.0
    }
    fn one() -> f64 {
        1.0
    }
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, o: &f64) -> f64 {
        self + o
    }
    fn sub(&self, o: &f64) -> f64 {
        self - o
    }
    fn mul(&self, o: &f64) -> f64 {
        self * o
    }
    fn div(&self, o: &f64) -> f64 {
        self / o
    }
    fn neg(&self) -> f64 {
        -self
    }
    fn is_zero_tol(&self) -> bool {
        self.abs() <= 1e-9
    }
    fn is_pos_tol(&self) -> bool {
        *self > 1e-9
    }
    fn is_integer_tol(&self) -> bool {
        (self - self.round()).abs() <= 1e-7
    }
    fn is_pivot(&self) -> bool {
        *self > 1e-11
    }
    fn is_infeasibility(&self) -> bool {
        *self > 1e-7
    }
    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }
}

impl LpScalar for Rat {
    fn zero() -> Rat {
        <Rat as Zero>::zero()
    }
    fn one() -> Rat {
        <Rat as One>::one()
    }
    fn from_f64(x: f64) -> Rat {
        Rat::from_float(x).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn add(&self, o: &Rat) -> Rat {
        self + o
    }
    fn sub(&self, o: &Rat) -> Rat {
        self - o
    }
    fn mul(&self, o: &Rat) -> Rat {
        self * o
    }
    fn div(&self, o: &Rat) -> Rat {
        self / o
    }
    fn neg(&self) -> Rat {
        -self
    }
    fn is_zero_tol(&self) -> bool {
        self.is_zero()
    }
    fn is_pos_tol(&self) -> bool {
        self.is_positive()
    }
    fn is_integer_tol(&self) -> bool {
        self.is_integer()
    }
    fn floor_int(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("small integer")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelOp {
    Le,
    Ge,
    Eq,
}

/// `minimize c . x  subject to  rows, x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram<S> {
    pub num_vars: usize,
    pub objective: Vec<S>,
    /// Sparse rows `(coefficients, relation, rhs)`.
    pub rows: Vec<(Vec<(usize, S)>, RelOp, S)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution<S> {
    pub status: LpStatus,
    pub x: Vec<S>,
    pub objective: S,
    /// Row duals `y` with `y . b = objective` at optimality. For infeasible
    /// programs these are the phase-1 duals, a certificate that no chain with
    /// the prescribed boundary exists in the complex.
    pub duals: Vec<S>,
}

struct Tableau<S> {
    rows: usize,
    cols: usize,
    a: Vec<S>,
    b: Vec<S>,
    basis: Vec<usize>,
    banned: Vec<bool>,
    init_unit_col: Vec<usize>,
}

impl<S: LpScalar> Tableau<S> {
    fn at(&self, i: usize, j: usize) -> &S {
        &self.a[i * self.cols + j]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let cols = self.cols;
        let piv = self.at(row, col).clone();
        for j in 0..cols {
            let v = self.a[row * cols + j].div(&piv);
            self.a[row * cols + j] = v;
        }
        self.b[row] = self.b[row].div(&piv);
        let zero = S::zero();
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let f = self.at(i, col).clone();
            if f == zero {
                continue;
            }
            for j in 0..cols {
                let v = self.a[i * cols + j].sub(&f.mul(&self.a[row * cols + j]));
                self.a[i * cols + j] = v;
            }
            let v = self.b[i].sub(&f.mul(&self.b[row]));
            self.b[i] = v;
        }
        // the entering column is a unit vector by construction
        for i in 0..self.rows {
            self.a[i * cols + col] = if i == row { S::one() } else { S::zero() };
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering = lowest-index column with negative reduced
    /// cost, leaving = minimum ratio with lowest basis index on ties.
    /// Returns false at optimality; Err(col) when unbounded in `col`.
    fn simplex_iterate(&mut self, cost: &[S]) -> Result<bool, usize> {
        // reduced costs: c_j - c_B . A_j
        let mut entering = None;
        for j in 0..self.cols {
            if self.banned[j] || self.basis.contains(&j) {
                continue;
            }
            let mut rc = cost[j].clone();
            for (i, &bi) in self.basis.iter().enumerate() {
                if cost[bi].is_zero_tol() {
                    continue;
                }
                rc = rc.sub(&cost[bi].mul(self.at(i, j)));
            }
            if rc.is_neg_tol() {
                entering = Some(j);
                break;
            }
        }
        let Some(col) = entering else {
            return Ok(false);
        };
        let mut leave: Option<(usize, S)> = None;
        for i in 0..self.rows {
            let aij = self.at(i, col);
            if aij.is_pivot() {
                let ratio = self.b[i].div(aij);
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        match leave {
            Some((row, _)) => {
                self.pivot(row, col);
                Ok(true)
            }
            None => Err(col),
        }
    }
}

pub fn solve<S: LpScalar>(lp: &LinearProgram<S>) -> LpSolution<S> {
    let m = lp.rows.len();
    let n = lp.num_vars;
    // normalize rows to rhs >= 0, remembering flips to fix dual signs
    let mut rows: Vec<(Vec<(usize, S)>, RelOp, S)> = Vec::with_capacity(m);
    let mut flipped_row = vec![false; m];
    for (i, (coeffs, op, rhs)) in lp.rows.iter().enumerate() {
        if rhs.is_neg_tol() {
            let flipped = match op {
                RelOp::Le => RelOp::Ge,
                RelOp::Ge => RelOp::Le,
                RelOp::Eq => RelOp::Eq,
            };
            flipped_row[i] = true;
            rows.push((
                coeffs.iter().map(|(j, v)| (*j, v.neg())).collect(),
                flipped,
                rhs.neg(),
            ));
        } else {
            rows.push((coeffs.clone(), *op, rhs.clone()));
        }
    }
    let n_slack = rows
        .iter()
        .filter(|(_, op, _)| matches!(op, RelOp::Le | RelOp::Ge))
        .count();
    let n_art = rows
        .iter()
        .filter(|(_, op, _)| matches!(op, RelOp::Ge | RelOp::Eq))
        .count();
    let cols = n + n_slack + n_art;
    let mut t = Tableau {
        rows: m,
        cols,
        a: vec![S::zero(); m * cols],
        b: rows.iter().map(|r| r.2.clone()).collect(),
        basis: vec![0; m],
        banned: vec![false; cols],
        init_unit_col: vec![0; m],
    };
    let mut art_cols: Vec<usize> = Vec::new();
    let mut slack_at = n;
    let mut art_at = n + n_slack;
    for (i, (coeffs, op, _)) in rows.iter().enumerate() {
        for (j, v) in coeffs {
            t.a[i * cols + *j] = t.a[i * cols + *j].add(v);
        }
        match op {
            RelOp::Le => {
                t.a[i * cols + slack_at] = S::one();
                t.basis[i] = slack_at;
                t.init_unit_col[i] = slack_at;
                slack_at += 1;
            }
            RelOp::Ge => {
                t.a[i * cols + slack_at] = S::one().neg();
                slack_at += 1;
                t.a[i * cols + art_at] = S::one();
                t.basis[i] = art_at;
                t.init_unit_col[i] = art_at;
                art_cols.push(art_at);
                art_at += 1;
            }
            RelOp::Eq => {
                t.a[i * cols + art_at] = S::one();
                t.basis[i] = art_at;
                t.init_unit_col[i] = art_at;
                art_cols.push(art_at);
                art_at += 1;
            }
        }
    }

    let extract = |t: &Tableau<S>, cost: &[S]| -> (Vec<S>, S, Vec<S>) {
        let mut x = vec![S::zero(); n];
        for (i, &bi) in t.basis.iter().enumerate() {
            if bi < n {
                x[bi] = t.b[i].clone();
            }
        }
        let mut obj = S::zero();
        for (i, &bi) in t.basis.iter().enumerate() {
            obj = obj.add(&cost[bi].mul(&t.b[i]));
        }
        let mut duals = vec![S::zero(); m];
        for (r, d) in duals.iter_mut().enumerate() {
            let col = t.init_unit_col[r];
            let mut y = S::zero();
            for (i, &bi) in t.basis.iter().enumerate() {
                if cost[bi].is_zero_tol() {
                    continue;
                }
                y = y.add(&cost[bi].mul(t.at(i, col)));
            }
            *d = if flipped_row[r] { y.neg() } else { y };
        }
        (x, obj, duals)
    };

    // phase 1
    if !art_cols.is_empty() {
        let mut cost1 = vec![S::zero(); cols];
        for &c in &art_cols {
            cost1[c] = S::one();
        }
        // phase 1 is bounded below by zero, so an "unbounded" column is
        // numerical noise; sideline it for this phase only
        let mut sidelined: Vec<usize> = Vec::new();
        loop {
            match t.simplex_iterate(&cost1) {
                Ok(true) => continue,
                Ok(false) => break,
                Err(col) => {
                    t.banned[col] = true;
                    sidelined.push(col);
                }
            }
        }
        let (_, obj1, duals1) = extract(&t, &cost1);
        for col in sidelined {
            t.banned[col] = false;
        }
        if obj1.is_infeasibility() {
            return LpSolution {
                status: LpStatus::Infeasible,
                x: vec![S::zero(); n],
                objective: obj1,
                duals: duals1,
            };
        }
        // drive artificials out of the basis where possible
        for i in 0..m {
            if art_cols.contains(&t.basis[i]) {
                let mut found = None;
                for j in 0..n + n_slack {
                    if !t.at(i, j).is_zero_tol() {
                        found = Some(j);
                        break;
                    }
                }
                if let Some(j) = found {
                    t.pivot(i, j);
                }
            }
        }
        for &c in &art_cols {
            t.banned[c] = true;
        }
    }

    // phase 2
    let mut cost2 = vec![S::zero(); cols];
    cost2[..n].clone_from_slice(&lp.objective);
    loop {
        match t.simplex_iterate(&cost2) {
            Ok(true) => continue,
            Ok(false) => break,
            Err(_col) => {
                let (x, objective, duals) = extract(&t, &cost2);
                return LpSolution {
                    status: LpStatus::Unbounded,
                    x,
                    objective,
                    duals,
                };
            }
        }
    }
    let (x, objective, duals) = extract(&t, &cost2);
    LpSolution {
        status: LpStatus::Optimal,
        x,
        objective,
        duals,
    }
}

// ---------------------------------------------------------------------------
// Branch and bound
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntStatus {
    Optimal,
    /// The depth limit cut at least one open subtree; the solution is the
    /// best incumbent and `bound` a valid lower bound.
    DepthLimited,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct IntSolution<S> {
    pub status: IntStatus,
    pub x: Vec<S>,
    pub objective: S,
    /// Global lower bound (= objective when optimal).
    pub bound: S,
}

/// Minimize the LP with the additional requirement that each expression in
/// `integer_exprs` takes an integer value. Branching adds `expr <= floor(v)`
/// / `expr >= floor(v) + 1` rows, depth-first with incumbent pruning.
pub fn solve_integer<S: LpScalar>(
    lp: &LinearProgram<S>,
    integer_exprs: &[Vec<(usize, S)>],
    depth_limit: usize,
) -> IntSolution<S> {
    let eval_expr = |expr: &[(usize, S)], x: &[S]| -> S {
        let mut v = S::zero();
        for (j, c) in expr {
            v = v.add(&c.mul(&x[*j]));
        }
        v
    };
    let root = solve(lp);
    if root.status == LpStatus::Infeasible {
        return IntSolution {
            status: IntStatus::Infeasible,
            x: root.x,
            objective: root.objective.clone(),
            bound: root.objective,
        };
    }
    let mut incumbent: Option<(Vec<S>, S)> = None;
    let mut cut_bounds: Vec<S> = Vec::new();
    let mut stack: Vec<(LinearProgram<S>, usize)> = vec![(lp.clone(), 0)];
    let mut nodes = 0usize;
    while let Some((node_lp, depth)) = stack.pop() {
        nodes += 1;
        if nodes > 100_000 {
            break;
        }
        let sol = solve(&node_lp);
        match sol.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => {
                // an unbounded relaxation leaves no usable bound
                cut_bounds.push(sol.objective.clone());
                continue;
            }
            LpStatus::Optimal => {}
        }
        if let Some((_, best)) = &incumbent {
            if sol.objective >= *best {
                continue;
            }
        }
        // most fractional expression
        let mut branch: Option<(usize, S)> = None;
        let mut best_frac = S::zero();
        for (k, expr) in integer_exprs.iter().enumerate() {
            let v = eval_expr(expr, &sol.x);
            if !v.is_integer_tol() {
                let fl = S::from_f64(v.floor_int() as f64);
                let frac = v.sub(&fl);
                let dist = if frac.to_f64() <= 0.5 {
                    frac.clone()
                } else {
                    S::one().sub(&frac)
                };
                if branch.is_none() || dist > best_frac {
                    best_frac = dist;
                    branch = Some((k, v));
                }
            }
        }
        match branch {
            None => {
                let better = match &incumbent {
                    None => true,
                    Some((_, best)) => sol.objective < *best,
                };
                if better {
                    incumbent = Some((sol.x, sol.objective));
                }
            }
            Some((k, v)) => {
                if depth >= depth_limit {
                    cut_bounds.push(sol.objective);
                    continue;
                }
                let fl = v.floor_int();
                let expr = &integer_exprs[k];
                let mut left = node_lp.clone();
                left.rows
                    .push((expr.clone(), RelOp::Le, S::from_f64(fl as f64)));
                let mut right = node_lp;
                right
                    .rows
                    .push((expr.clone(), RelOp::Ge, S::from_f64((fl + 1) as f64)));
                stack.push((left, depth + 1));
                stack.push((right, depth + 1));
            }
        }
    }
    match incumbent {
        Some((x, obj)) => {
            let open_below = cut_bounds.iter().any(|b| *b < obj);
            let bound = cut_bounds
                .iter()
                .fold(obj.clone(), |acc, b| if *b < acc { b.clone() } else { acc });
            IntSolution {
                status: if open_below {
                    IntStatus::DepthLimited
                } else {
                    IntStatus::Optimal
                },
                x,
                objective: obj,
                bound,
            }
        }
        None => {
            if cut_bounds.is_empty() {
                IntSolution {
                    status: IntStatus::Infeasible,
                    x: vec![S::zero(); lp.num_vars],
                    objective: S::zero(),
                    bound: S::zero(),
                }
            } else {
                let bound = cut_bounds
                    .iter()
                    .cloned()
                    .fold(None::<S>, |acc, b| match acc {
                        None => Some(b),
                        Some(a) => Some(if b < a { b } else { a }),
                    })
                    .unwrap();
                IntSolution {
                    status: IntStatus::DepthLimited,
                    x: vec![S::zero(); lp.num_vars],
                    objective: bound.clone(),
                    bound,
                }
            }
        }
    }
}
