//! Exact rational linear programming with verifiable certificates.
//!
//! Two-phase primal simplex over `BigRational` with Bland's anti-cycling rule:
//! termination is guaranteed and results are deterministic for a fixed input.
//! A feasible outcome carries an exact solution; an infeasible outcome carries
//! an exact Farkas certificate (nonnegative multipliers aggregating the
//! constraints into a contradiction). Certificates are re-verified by an
//! independent checker before being returned; the checker, not the pivoting
//! code, is the trusted component.

use num_traits::{One, Signed, Zero};

use crate::rat::{format_rat, Rat};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct LpRow {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

#[derive(Clone, Debug)]
pub enum Objective {
    Maximize(Vec<Rat>),
    Minimize(Vec<Rat>),
}

/// A linear program over free variables (optional per-variable bounds).
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub rows: Vec<LpRow>,
    pub objective: Option<Objective>,
    /// Per-variable (lower, upper); empty means every variable is free.
    pub bounds: Vec<(Option<Rat>, Option<Rat>)>,
    pub pivot_cap: u64,
}

pub const DEFAULT_PIVOT_CAP: u64 = 10_000_000;

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            rows: Vec::new(),
            objective: None,
            bounds: Vec::new(),
            pivot_cap: DEFAULT_PIVOT_CAP,
        }
    }

    pub fn push_row(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push(LpRow { coeffs, rel, rhs });
    }

    /// Main rows followed by bound rows (per variable: lower, then upper).
    /// Farkas multipliers are indexed against this list.
    pub fn augmented_rows(&self) -> Vec<LpRow> {
        let mut rows = self.rows.clone();
        if !self.bounds.is_empty() {
            assert_eq!(self.bounds.len(), self.num_vars);
            for (j, (lo, hi)) in self.bounds.iter().enumerate() {
                let mut unit = vec![Rat::zero(); self.num_vars];
                unit[j] = Rat::one();
                if let Some(l) = lo {
                    rows.push(LpRow {
                        coeffs: unit.clone(),
                        rel: Relation::Ge,
                        rhs: l.clone(),
                    });
                }
                if let Some(h) = hi {
                    rows.push(LpRow {
                        coeffs: unit.clone(),
                        rel: Relation::Le,
                        rhs: h.clone(),
                    });
                }
            }
        }
        rows
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Feasible,
    Infeasible,
    Unbounded,
}

/// Farkas infeasibility certificate: one multiplier per augmented row.
/// Semantics: rewrite each `Ge` row as `Le` by negation; then the multipliers
/// are nonnegative on inequality rows, free on equality rows, the aggregated
/// coefficient vector is exactly zero, and the aggregated right-hand side is
/// strictly negative.
#[derive(Clone, Debug)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub solution: Option<Vec<Rat>>,
    pub objective_value: Option<Rat>,
    pub farkas: Option<FarkasCertificate>,
}

/// Exact check that `x` satisfies every row and bound of `lp`.
pub fn verify_feasible(lp: &LinearProgram, x: &[Rat]) -> Result<()> {
    if x.len() != lp.num_vars {
        return Err(Error::DimensionMismatch {
            expected: lp.num_vars,
            got: x.len(),
        });
    }
    for (i, row) in lp.augmented_rows().iter().enumerate() {
        let lhs: Rat = row
            .coeffs
            .iter()
            .zip(x.iter())
            .map(|(a, v)| a * v)
            .sum();
        let ok = match row.rel {
            Relation::Le => lhs <= row.rhs,
            Relation::Eq => lhs == row.rhs,
            Relation::Ge => lhs >= row.rhs,
        };
        if !ok {
            return Err(Error::VerificationFailed(format!(
                "row {i} violated: lhs = {}, rhs = {}",
                format_rat(&lhs),
                format_rat(&row.rhs)
            )));
        }
    }
    Ok(())
}

/// Exact check of a Farkas certificate against `lp`.
pub fn verify_farkas(lp: &LinearProgram, cert: &FarkasCertificate) -> Result<()> {
    let rows = lp.augmented_rows();
    if cert.multipliers.len() != rows.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            got: cert.multipliers.len(),
        });
    }
    let mut agg = vec![Rat::zero(); lp.num_vars];
    let mut agg_rhs = Rat::zero();
    for (row, y) in rows.iter().zip(cert.multipliers.iter()) {
        // Ge rows enter negated (as Le); inequality multipliers must be >= 0.
        let sigma = match row.rel {
            Relation::Le | Relation::Eq => Rat::one(),
            Relation::Ge => -Rat::one(),
        };
        if row.rel != Relation::Eq && y.is_negative() {
            return Err(Error::VerificationFailed(
                "negative multiplier on inequality row".into(),
            ));
        }
        for (j, a) in row.coeffs.iter().enumerate() {
            agg[j] += y * &(a * &sigma);
        }
        agg_rhs += y * &(&row.rhs * &sigma);
    }
    if agg.iter().any(|c| !c.is_zero()) {
        return Err(Error::VerificationFailed(
            "aggregated coefficients are not zero".into(),
        ));
    }
    if !agg_rhs.is_negative() {
        return Err(Error::VerificationFailed(format!(
            "aggregated rhs {} is not negative",
            format_rat(&agg_rhs)
        )));
    }
    Ok(())
}

/// Solves the program exactly. Every returned certificate (solution or Farkas
/// multiplier vector) has already passed the independent checker.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    solve_with(lp, true)
}

/// Phase-1-only feasibility check; skips certificate construction entirely.
pub fn feasible(lp: &LinearProgram) -> Result<bool> {
    Ok(solve_with(lp, false)?.status == LpStatus::Feasible)
}

/// `want_farkas` controls whether infeasibility is accompanied by a verified
/// Farkas certificate (which costs a second solve).
pub fn solve_with(lp: &LinearProgram, want_farkas: bool) -> Result<LpOutcome> {
    let rows = lp.augmented_rows();
    let mut tab = Tableau::build(lp.num_vars, &rows, lp.pivot_cap);
    let feasible = tab.phase1()?;
    if !feasible {
        let cert = if want_farkas {
            let c = farkas_from_alternative(lp, &rows)?;
            verify_farkas(lp, &c)?;
            Some(c)
        } else {
            None
        };
        return Ok(LpOutcome {
            status: LpStatus::Infeasible,
            solution: None,
            objective_value: None,
            farkas: cert,
        });
    }
    let objective = match &lp.objective {
        None => {
            let x = tab.extract_solution();
            verify_feasible(lp, &x)?;
            return Ok(LpOutcome {
                status: LpStatus::Feasible,
                solution: Some(x),
                objective_value: None,
                farkas: None,
            });
        }
        Some(o) => o,
    };
    let min_costs: Vec<Rat> = match objective {
        Objective::Minimize(c) => c.clone(),
        Objective::Maximize(c) => c.iter().map(|v| -v.clone()).collect(),
    };
    if min_costs.len() != lp.num_vars {
        return Err(Error::DimensionMismatch {
            expected: lp.num_vars,
            got: min_costs.len(),
        });
    }
    if !tab.phase2(&min_costs)? {
        return Ok(LpOutcome {
            status: LpStatus::Unbounded,
            solution: None,
            objective_value: None,
            farkas: None,
        });
    }
    let x = tab.extract_solution();
    verify_feasible(lp, &x)?;
    let raw: Vec<&Rat> = match objective {
        Objective::Maximize(c) | Objective::Minimize(c) => c.iter().collect(),
    };
    let value: Rat = raw.iter().zip(x.iter()).map(|(c, v)| *c * v).sum();
    Ok(LpOutcome {
        status: LpStatus::Feasible,
        solution: Some(x),
        objective_value: Some(value),
        farkas: None,
    })
}

/// Builds and solves the Farkas alternative system for an infeasible program:
/// multipliers `y` with the sign pattern of `verify_farkas`, aggregated
/// coefficients zero, aggregated rhs fixed to -1. Feasibility of this system
/// is equivalent to infeasibility of the original, so a solution is exactly
/// the certificate we need.
fn farkas_from_alternative(lp: &LinearProgram, rows: &[LpRow]) -> Result<FarkasCertificate> {
    let m = rows.len();
    let mut alt = LinearProgram::new(m);
    alt.pivot_cap = lp.pivot_cap;
    // For each structural variable: sum_i y_i * (as-Le coeff) = 0.
    for j in 0..lp.num_vars {
        let coeffs: Vec<Rat> = rows
            .iter()
            .map(|r| match r.rel {
                Relation::Le | Relation::Eq => r.coeffs[j].clone(),
                Relation::Ge => -r.coeffs[j].clone(),
            })
            .collect();
        alt.push_row(coeffs, Relation::Eq, Rat::zero());
    }
    // Aggregated rhs = -1.
    let rhs_coeffs: Vec<Rat> = rows
        .iter()
        .map(|r| match r.rel {
            Relation::Le | Relation::Eq => r.rhs.clone(),
            Relation::Ge => -r.rhs.clone(),
        })
        .collect();
    alt.push_row(rhs_coeffs, Relation::Eq, -Rat::one());
    // Nonnegativity on inequality multipliers.
    for (i, r) in rows.iter().enumerate() {
        if r.rel != Relation::Eq {
            let mut unit = vec![Rat::zero(); m];
            unit[i] = Rat::one();
            alt.push_row(unit, Relation::Ge, Rat::zero());
        }
    }
    let alt_rows = alt.augmented_rows();
    let mut tab = Tableau::build(alt.num_vars, &alt_rows, alt.pivot_cap);
    if !tab.phase1()? {
        return Err(Error::Inconsistency(
            "alternative system infeasible while primal infeasible".into(),
        ));
    }
    Ok(FarkasCertificate {
        multipliers: tab.extract_solution(),
    })
}

// ---------------------------------------------------------------------------
// Dense exact tableau
// ---------------------------------------------------------------------------

struct Tableau {
    /// m x (ncols+1); last column is the basic value column.
    rows: Vec<Vec<Rat>>,
    obj: Vec<Rat>,
    basis: Vec<usize>,
    ncols: usize,
    num_vars: usize,
    first_artificial: usize,
    pivots: u64,
    cap: u64,
}

impl Tableau {
    /// Standard form: x_j = u_j - w_j (columns 2j, 2j+1), slack per Le row,
    /// surplus + artificial per Ge row, artificial per Eq row, rhs >= 0.
    fn build(num_vars: usize, rows: &[LpRow], cap: u64) -> Tableau {
        let m = rows.len();
        let mut n_slack = 0usize;
        let mut n_art = 0usize;
        // Normalize rhs sign first so slot assignment sees final relations.
        let normalized: Vec<(Vec<Rat>, Relation, Rat)> = rows
            .iter()
            .map(|r| {
                if r.rhs.is_negative() {
                    let coeffs: Vec<Rat> = r.coeffs.iter().map(|c| -c.clone()).collect();
                    let rel = match r.rel {
                        Relation::Le => Relation::Ge,
                        Relation::Eq => Relation::Eq,
                        Relation::Ge => Relation::Le,
                    };
                    (coeffs, rel, -r.rhs.clone())
                } else {
                    (r.coeffs.clone(), r.rel, r.rhs.clone())
                }
            })
            .collect();
        for (_, rel, _) in &normalized {
            match rel {
                Relation::Le => n_slack += 1,
                Relation::Ge => {
                    n_slack += 1;
                    n_art += 1;
                }
                Relation::Eq => n_art += 1,
            }
        }
        let split = 2 * num_vars;
        let ncols = split + n_slack + n_art;
        let first_artificial = split + n_slack;
        let mut tab = vec![vec![Rat::zero(); ncols + 1]; m];
        let mut basis = vec![0usize; m];
        let mut s = split;
        let mut a = first_artificial;
        for (i, (coeffs, rel, rhs)) in normalized.iter().enumerate() {
            for (j, c) in coeffs.iter().enumerate() {
                tab[i][2 * j] = c.clone();
                tab[i][2 * j + 1] = -c.clone();
            }
            tab[i][ncols] = rhs.clone();
            match rel {
                Relation::Le => {
                    tab[i][s] = Rat::one();
                    basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    tab[i][s] = -Rat::one();
                    s += 1;
                    tab[i][a] = Rat::one();
                    basis[i] = a;
                    a += 1;
                }
                Relation::Eq => {
                    tab[i][a] = Rat::one();
                    basis[i] = a;
                    a += 1;
                }
            }
        }
        Tableau {
            rows: tab,
            obj: vec![Rat::zero(); ncols + 1],
            basis,
            ncols,
            num_vars,
            first_artificial,
            pivots: 0,
            cap,
        }
    }

    fn reset_objective(&mut self, cost: &[Rat]) {
        // obj[j] = cost[j] - sum_r cost[basis[r]] * tab[r][j]; obj[last] = -z.
        self.obj = vec![Rat::zero(); self.ncols + 1];
        self.obj[..cost.len()].clone_from_slice(cost);
        for r in 0..self.rows.len() {
            let cb = cost[self.basis[r]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..=self.ncols {
                let adj = &cb * &self.rows[r][j];
                self.obj[j] -= adj;
            }
        }
    }

    fn pivot(&mut self, r: usize, e: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.cap {
            return Err(Error::PivotLimit(self.cap));
        }
        let pv = self.rows[r][e].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &pv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for (v, p) in row.iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !self.obj[e].is_zero() {
            let f = self.obj[e].clone();
            for (v, p) in self.obj.iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = e;
        Ok(())
    }

    /// Minimizes the current objective with Bland's rule. `allowed` bounds the
    /// entering column range (used to exclude artificials in phase 2).
    fn run(&mut self, allowed: usize) -> Result<bool> {
        loop {
            let mut entering = None;
            for j in 0..allowed {
                if self.obj[j].is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let e = match entering {
                None => return Ok(true), // optimal
                Some(j) => j,
            };
            let mut leave: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][e].is_positive() {
                    let ratio = &self.rows[r][self.ncols] / &self.rows[r][e];
                    let better = match &leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < *lratio
                                || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            match leave {
                None => return Ok(false), // unbounded direction
                Some((r, _)) => self.pivot(r, e)?,
            }
        }
    }

    /// Returns true iff the constraints are feasible. On success all
    /// artificial variables have been eliminated (rows made redundant by
    /// dependencies are dropped).
    fn phase1(&mut self) -> Result<bool> {
        let mut cost = vec![Rat::zero(); self.ncols];
        for c in cost.iter_mut().skip(self.first_artificial) {
            *c = Rat::one();
        }
        self.reset_objective(&cost);
        let optimal = self.run(self.ncols)?;
        debug_assert!(optimal, "phase 1 cannot be unbounded");
        // z = -obj[last]
        if !self.obj[self.ncols].is_zero() {
            return Ok(false);
        }
        // Drive basic artificials out; drop dependent rows.
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.first_artificial {
                let mut found = None;
                for j in 0..self.first_artificial {
                    if !self.rows[r][j].is_zero() {
                        found = Some(j);
                        break;
                    }
                }
                match found {
                    Some(j) => {
                        self.pivot(r, j)?;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        Ok(true)
    }

    /// Returns false iff unbounded.
    fn phase2(&mut self, min_costs: &[Rat]) -> Result<bool> {
        let mut cost = vec![Rat::zero(); self.ncols];
        for (j, c) in min_costs.iter().enumerate() {
            cost[2 * j] = c.clone();
            cost[2 * j + 1] = -c.clone();
        }
        self.reset_objective(&cost);
        self.run(self.first_artificial)
    }

    fn extract_solution(&self) -> Vec<Rat> {
        let mut col_value = vec![Rat::zero(); self.ncols];
        for (r, &b) in self.basis.iter().enumerate() {
            col_value[b] = self.rows[r][self.ncols].clone();
        }
        (0..self.num_vars)
            .map(|j| &col_value[2 * j] - &col_value[2 * j + 1])
            .collect()
    }
}
