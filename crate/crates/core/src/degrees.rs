//! Threshold degree, ε-approximate degree, weighted approximate degree, and
//! their dual witnesses, all via exact LP.
//!
//! Strict sign conditions are encoded as `f(x) p(x) >= 1`, which is equivalent
//! by scale invariance of sign representations. Dual witnesses are solved for
//! explicitly (never read off a tableau) and re-verified by exact summation
//! before being returned.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::boolfun::BooleanFunction;
use crate::lp::{self, LinearProgram, LpStatus, Objective, Relation};
use crate::poly::{tensor_interpolate, SparsePolynomial};
use crate::rat::{format_rat, parse_rat, rat, Rat};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    GordanDistribution,
    GordanSigned,
    ApproxDual,
}

/// A dual object certifying a degree lower bound: a weighting of the domain
/// orthogonal to all low-degree monomials.
#[derive(Clone, Debug)]
pub struct DualWitness {
    pub kind: WitnessKind,
    pub points: Vec<Vec<Rat>>,
    pub weights: Vec<Rat>,
    /// Orthogonal to every monomial of total degree <= this value.
    pub orthogonality_degree: i64,
    pub l1_mass: Rat,
    pub correlation: Rat,
}

impl DualWitness {
    /// Exact re-verification of every recorded property against `f`.
    pub fn verify(&self, f: &BooleanFunction) -> Result<()> {
        if self.points.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.points.len(),
                got: self.weights.len(),
            });
        }
        let fvals: Vec<Rat> = self
            .points
            .iter()
            .map(|p| {
                f.value_at(p)
                    .map(|v| rat(v as i64))
                    .ok_or_else(|| Error::VerificationFailed("witness point not in domain".into()))
            })
            .collect::<Result<_>>()?;
        let l1: Rat = self.weights.iter().map(|w| w.abs()).sum();
        if l1 != self.l1_mass {
            return Err(Error::VerificationFailed("recorded l1 mass mismatch".into()));
        }
        let corr: Rat = self
            .weights
            .iter()
            .zip(fvals.iter())
            .map(|(w, v)| w * v)
            .sum();
        if corr != self.correlation {
            return Err(Error::VerificationFailed(
                "recorded correlation mismatch".into(),
            ));
        }
        match self.kind {
            WitnessKind::GordanDistribution => {
                if self.weights.iter().any(|w| w.is_negative()) {
                    return Err(Error::VerificationFailed(
                        "distribution has negative weight".into(),
                    ));
                }
                if !l1.is_one() {
                    return Err(Error::VerificationFailed(
                        "distribution does not sum to 1".into(),
                    ));
                }
            }
            WitnessKind::GordanSigned => {
                if self.weights.iter().all(|w| w.is_zero()) {
                    return Err(Error::VerificationFailed("signed witness is zero".into()));
                }
                for (w, v) in self.weights.iter().zip(fvals.iter()) {
                    if (w * v).is_negative() {
                        return Err(Error::VerificationFailed(
                            "signed witness disagrees with f in sign".into(),
                        ));
                    }
                }
            }
            WitnessKind::ApproxDual => {
                if !l1.is_one() {
                    return Err(Error::VerificationFailed(
                        "approx dual witness must have unit l1 mass".into(),
                    ));
                }
            }
        }
        // Orthogonality. For a Gordan distribution the tested family is
        // mu(x) f(x) m(x); for signed/approx witnesses it is psi(x) m(x).
        let effective: Vec<Rat> = match self.kind {
            WitnessKind::GordanDistribution => self
                .weights
                .iter()
                .zip(fvals.iter())
                .map(|(w, v)| w * v)
                .collect(),
            _ => self.weights.clone(),
        };
        if self.orthogonality_degree >= 0 {
            let basis = monomial_basis(f, self.orthogonality_degree);
            for exps in basis {
                let mut s = Rat::zero();
                for (p, w) in self.points.iter().zip(effective.iter()) {
                    s += w * &eval_monomial(&exps, p);
                }
                if !s.is_zero() {
                    return Err(Error::VerificationFailed(format!(
                        "witness not orthogonal to monomial {exps:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Text serialization: header line, then one `coords : num/den` line per point.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "kind={:?} orth_degree={} l1={} corr={}\n",
            self.kind,
            self.orthogonality_degree,
            format_rat(&self.l1_mass),
            format_rat(&self.correlation)
        );
        for (p, w) in self.points.iter().zip(self.weights.iter()) {
            let coords: Vec<String> = p.iter().map(format_rat).collect();
            out.push_str(&format!("{} : {}\n", coords.join(" "), format_rat(w)));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty witness file".into()))?;
        let mut kind = None;
        let mut orth = None;
        let mut l1 = None;
        let mut corr = None;
        for token in header.split_whitespace() {
            let (k, v) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header token {token}")))?;
            match k {
                "kind" => {
                    kind = Some(match v {
                        "GordanDistribution" => WitnessKind::GordanDistribution,
                        "GordanSigned" => WitnessKind::GordanSigned,
                        "ApproxDual" => WitnessKind::ApproxDual,
                        _ => return Err(Error::Parse(format!("unknown witness kind {v}"))),
                    })
                }
                "orth_degree" => {
                    orth = Some(
                        v.parse::<i64>()
                            .map_err(|e| Error::Parse(format!("bad degree: {e}")))?,
                    )
                }
                "l1" => l1 = Some(parse_rat(v)?),
                "corr" => corr = Some(parse_rat(v)?),
                _ => return Err(Error::Parse(format!("unknown header key {k}"))),
            }
        }
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (coords, w) = line
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("bad witness line {line}")))?;
            points.push(
                coords
                    .split_whitespace()
                    .map(parse_rat)
                    .collect::<Result<Vec<_>>>()?,
            );
            weights.push(parse_rat(w)?);
        }
        Ok(DualWitness {
            kind: kind.ok_or_else(|| Error::Parse("missing kind".into()))?,
            points,
            weights,
            orthogonality_degree: orth.ok_or_else(|| Error::Parse("missing degree".into()))?,
            l1_mass: l1.ok_or_else(|| Error::Parse("missing l1".into()))?,
            correlation: corr.ok_or_else(|| Error::Parse("missing corr".into()))?,
        })
    }
}

/// Exact degree computation result: the degree, a primal certificate at that
/// degree, and (when the degree is positive) a dual certificate one below.
#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub value: i64,
    pub primal_certificate: SparsePolynomial,
    pub dual_certificate: Option<DualWitness>,
}

// ---------------------------------------------------------------------------
// Monomial bases
// ---------------------------------------------------------------------------

pub fn eval_monomial(exps: &[u32], point: &[Rat]) -> Rat {
    let mut v = Rat::one();
    for (x, &e) in point.iter().zip(exps.iter()) {
        for _ in 0..e {
            v *= x;
        }
    }
    v
}

/// All exponent vectors with total degree <= `d`, capped per variable at
/// (number of distinct coordinate values - 1); higher powers are linearly
/// dependent on the domain. Graded-lex order, so LP columns are canonical.
pub fn monomial_basis(f: &BooleanFunction, d: i64) -> Vec<Vec<u32>> {
    let caps: Vec<u32> = f
        .coordinate_values()
        .iter()
        .map(|v| (v.len() - 1) as u32)
        .collect();
    monomial_basis_capped(&caps, d)
}

pub fn monomial_basis_capped(caps: &[u32], d: i64) -> Vec<Vec<u32>> {
    if d < 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; caps.len()];
    gen_exponents(caps, d as u32, 0, &mut cur, &mut out);
    out.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
    out
}

fn gen_exponents(caps: &[u32], budget: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == caps.len() {
        out.push(cur.clone());
        return;
    }
    for e in 0..=caps[i].min(budget) {
        cur[i] = e;
        gen_exponents(caps, budget - e, i + 1, cur, out);
    }
    cur[i] = 0;
}

fn poly_from_coeffs(basis: &[Vec<u32>], coeffs: &[Rat], num_vars: usize) -> SparsePolynomial {
    let mut p = SparsePolynomial::zero(num_vars);
    for (e, c) in basis.iter().zip(coeffs.iter()) {
        p.add_term(e.clone(), c.clone());
    }
    p
}

// ---------------------------------------------------------------------------
// Sign representation and Gordan duality
// ---------------------------------------------------------------------------

/// Searches for a degree-<=d sign representation: f(x) p(x) >= 1 on X.
pub fn sign_representation(f: &BooleanFunction, d: i64) -> Result<Option<SparsePolynomial>> {
    let basis = monomial_basis(f, d);
    if basis.is_empty() {
        return Ok(None);
    }
    let mut lp = LinearProgram::new(basis.len());
    for (x, v) in f.iter() {
        let row: Vec<Rat> = basis
            .iter()
            .map(|e| eval_monomial(e, x) * rat(v as i64))
            .collect();
        lp.push_row(row, Relation::Ge, Rat::one());
    }
    let out = lp::solve_with(&lp, false)?;
    match out.status {
        LpStatus::Feasible => {
            let p = poly_from_coeffs(&basis, &out.solution.unwrap(), f.num_vars());
            // independent exact sign check
            for (x, v) in f.iter() {
                let pv = p.eval(x)?;
                if crate::rat::sign(&pv) != v as i32 {
                    return Err(Error::VerificationFailed(
                        "sign representation fails exact check".into(),
                    ));
                }
            }
            Ok(Some(p))
        }
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(Error::Inconsistency(
            "feasibility LP reported unbounded".into(),
        )),
    }
}

/// Gordan dual: a probability distribution mu on X with
/// sum mu(x) f(x) m(x) = 0 for every monomial m of degree <= d, which exists
/// iff no degree-<=d sign representation does.
pub fn gordan_witness(f: &BooleanFunction, d: i64) -> Result<Option<DualWitness>> {
    if d < 0 {
        return Err(Error::Precondition("gordan_witness needs d >= 0".into()));
    }
    let basis = monomial_basis(f, d);
    let m = f.len();
    let mut lp = LinearProgram::new(m);
    lp.push_row(vec![Rat::one(); m], Relation::Eq, Rat::one());
    for e in &basis {
        let row: Vec<Rat> = f
            .iter()
            .map(|(x, v)| eval_monomial(e, x) * rat(v as i64))
            .collect();
        lp.push_row(row, Relation::Eq, Rat::zero());
    }
    for i in 0..m {
        let mut unit = vec![Rat::zero(); m];
        unit[i] = Rat::one();
        lp.push_row(unit, Relation::Ge, Rat::zero());
    }
    let out = lp::solve_with(&lp, false)?;
    match out.status {
        LpStatus::Feasible => {
            let weights = out.solution.unwrap();
            let witness = DualWitness {
                kind: WitnessKind::GordanDistribution,
                points: f.points().to_vec(),
                weights,
                orthogonality_degree: d,
                l1_mass: Rat::one(),
                correlation: Rat::zero(),
            };
            witness.verify(f)?;
            Ok(Some(witness))
        }
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(Error::Inconsistency(
            "feasibility LP reported unbounded".into(),
        )),
    }
}

/// Exact threshold degree with both certificates.
pub fn threshold_degree(f: &BooleanFunction) -> Result<DegreeReport> {
    let max_d: i64 = f
        .coordinate_values()
        .iter()
        .map(|v| (v.len() - 1) as i64)
        .sum();
    for d in 0..=max_d {
        if let Some(p) = sign_representation(f, d)? {
            let dual = if d > 0 {
                let w = gordan_witness(f, d - 1)?.ok_or_else(|| {
                    Error::Inconsistency(
                        "no Gordan witness one degree below the threshold degree".into(),
                    )
                })?;
                Some(w)
            } else {
                None
            };
            return Ok(DegreeReport {
                value: d,
                primal_certificate: p,
                dual_certificate: dual,
            });
        }
    }
    Err(Error::Inconsistency(
        "interpolation degree reached without a sign representation".into(),
    ))
}

// ---------------------------------------------------------------------------
// Approximate degree
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ApproxErrorReport {
    pub eps: Rat,
    pub best_poly: SparsePolynomial,
    /// None iff the basis interpolates every function on the domain (eps = 0
    /// forced and only the zero weighting is orthogonal).
    pub dual: Option<DualWitness>,
}

/// Least uniform error of a degree-<=d polynomial approximation, the attaining
/// polynomial, and an optimal dual witness. Primal and dual are solved as two
/// separate LPs; their exact optimal values are asserted equal.
pub fn approx_error(f: &BooleanFunction, d: i64) -> Result<ApproxErrorReport> {
    let basis = monomial_basis(f, d.max(-1));
    let nb = basis.len();
    // Primal: minimize eps subject to |f(x) - p(x)| <= eps.
    let mut lp = LinearProgram::new(nb + 1);
    for (x, v) in f.iter() {
        let fv = rat(v as i64);
        let mono: Vec<Rat> = basis.iter().map(|e| eval_monomial(e, x)).collect();
        // p(x) - eps <= f(x)
        let mut row = mono.clone();
        row.push(-Rat::one());
        lp.push_row(row, Relation::Le, fv.clone());
        // -p(x) - eps <= -f(x)
        let mut row = mono.into_iter().map(|c| -c).collect::<Vec<_>>();
        row.push(-Rat::one());
        lp.push_row(row, Relation::Le, -fv);
    }
    let mut cost = vec![Rat::zero(); nb + 1];
    cost[nb] = Rat::one();
    lp.objective = Some(Objective::Minimize(cost));
    let out = lp::solve(&lp)?;
    if out.status != LpStatus::Feasible {
        return Err(Error::Inconsistency("approximation LP not feasible".into()));
    }
    let sol = out.solution.unwrap();
    let eps = out.objective_value.unwrap();
    let best = poly_from_coeffs(&basis, &sol[..nb], f.num_vars());
    // exact re-check of the primal error
    let mut worst = Rat::zero();
    for (x, v) in f.iter() {
        let e = (rat(v as i64) - best.eval(x)?).abs();
        if e > worst {
            worst = e;
        }
    }
    if worst != eps {
        return Err(Error::VerificationFailed(
            "primal approximation error does not match objective".into(),
        ));
    }

    // Dual: maximize sum psi f over sum |psi| = 1, psi orthogonal to basis.
    let m = f.len();
    let mut dual = LinearProgram::new(2 * m); // psi = pos - neg
    dual.push_row(vec![Rat::one(); 2 * m], Relation::Eq, Rat::one());
    for e in &basis {
        let mut row = Vec::with_capacity(2 * m);
        for (x, _) in f.iter() {
            row.push(eval_monomial(e, x));
        }
        for (x, _) in f.iter() {
            row.push(-eval_monomial(e, x));
        }
        dual.push_row(row, Relation::Eq, Rat::zero());
    }
    for i in 0..2 * m {
        let mut unit = vec![Rat::zero(); 2 * m];
        unit[i] = Rat::one();
        dual.push_row(unit, Relation::Ge, Rat::zero());
    }
    let mut obj = Vec::with_capacity(2 * m);
    for (_, v) in f.iter() {
        obj.push(rat(v as i64));
    }
    for (_, v) in f.iter() {
        obj.push(rat(-(v as i64)));
    }
    dual.objective = Some(Objective::Maximize(obj));
    let dual_out = lp::solve(&dual)?;
    let witness = match dual_out.status {
        LpStatus::Infeasible => {
            // Basis interpolates everything; eps must be exactly 0.
            if !eps.is_zero() {
                return Err(Error::Inconsistency(
                    "dual infeasible but primal error nonzero".into(),
                ));
            }
            None
        }
        LpStatus::Feasible => {
            let dv = dual_out.objective_value.unwrap();
            if dv != eps {
                return Err(Error::Inconsistency(format!(
                    "strong duality gap: primal {} vs dual {}",
                    format_rat(&eps),
                    format_rat(&dv)
                )));
            }
            let dsol = dual_out.solution.unwrap();
            let mut psi: Vec<Rat> = (0..m).map(|i| &dsol[i] - &dsol[m + i]).collect();
            let l1: Rat = psi.iter().map(|w| w.abs()).sum();
            if l1.is_zero() {
                None
            } else {
                if !l1.is_one() {
                    // Cancellation between split parts can only happen at
                    // optimum when eps = 0; rescale to unit mass.
                    if !eps.is_zero() {
                        return Err(Error::Inconsistency(
                            "dual witness lost mass at a nonzero optimum".into(),
                        ));
                    }
                    for w in psi.iter_mut() {
                        *w /= &l1;
                    }
                }
                let correlation: Rat = psi
                    .iter()
                    .zip(f.iter())
                    .map(|(w, (_, v))| w * &rat(v as i64))
                    .sum();
                if correlation != eps {
                    return Err(Error::Inconsistency(
                        "dual witness correlation does not equal the optimum".into(),
                    ));
                }
                let w = DualWitness {
                    kind: WitnessKind::ApproxDual,
                    points: f.points().to_vec(),
                    weights: psi,
                    orthogonality_degree: d,
                    l1_mass: Rat::one(),
                    correlation,
                };
                w.verify(f)?;
                Some(w)
            }
        }
        LpStatus::Unbounded => {
            return Err(Error::Inconsistency("dual LP unbounded".into()));
        }
    };
    Ok(ApproxErrorReport {
        eps,
        best_poly: best,
        dual: witness,
    })
}

/// Least d with approx_error(f, d) <= eps; ascending scan (the error is
/// nonincreasing in d). eps >= 1 returns 0 since the zero polynomial works.
pub fn eps_approx_degree(f: &BooleanFunction, eps: &Rat) -> Result<i64> {
    if eps.is_negative() {
        return Err(Error::Precondition("eps must be >= 0".into()));
    }
    if eps >= &Rat::one() {
        return Ok(0);
    }
    let max_d: i64 = f
        .coordinate_values()
        .iter()
        .map(|v| (v.len() - 1) as i64)
        .sum();
    for d in 0..=max_d {
        if approx_error(f, d)?.eps <= *eps {
            return Ok(d);
        }
    }
    Err(Error::Inconsistency(
        "interpolation degree reached with error above eps".into(),
    ))
}

/// Weighted approximate degree of a cube function: least D such that some
/// polynomial supported on monomials prod_{i in S} x_i with sum_{i in S} v_i
/// <= D approximates F within eps.
pub fn weighted_approx_degree(f: &BooleanFunction, eps: &Rat, v: &[i64]) -> Result<i64> {
    if !f.is_cube() {
        return Err(Error::Precondition(
            "weighted degree needs a cube function".into(),
        ));
    }
    if v.len() != f.num_vars() || v.iter().any(|&c| c < 0) {
        return Err(Error::Precondition("cost vector must be nonnegative".into()));
    }
    let k = f.num_vars();
    // Candidate thresholds: distinct subset cost sums, ascending.
    let mut sums: Vec<i64> = (0..k)
        .map(|_| [false, true])
        .multi_cartesian_product()
        .map(|sel| {
            sel.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| v[i])
                .sum()
        })
        .collect();
    sums.sort();
    sums.dedup();
    for cap in sums {
        let support: Vec<Vec<u32>> = (0..k)
            .map(|_| [0u32, 1u32])
            .multi_cartesian_product()
            .filter(|sel| {
                sel.iter()
                    .enumerate()
                    .map(|(i, &b)| if b == 1 { v[i] } else { 0 })
                    .sum::<i64>()
                    <= cap
            })
            .collect();
        if feasible_within_eps(f, &support, eps)? {
            return Ok(cap);
        }
    }
    Err(Error::Inconsistency(
        "full support failed to approximate".into(),
    ))
}

fn feasible_within_eps(f: &BooleanFunction, support: &[Vec<u32>], eps: &Rat) -> Result<bool> {
    let nb = support.len();
    let mut lp = LinearProgram::new(nb);
    for (x, v) in f.iter() {
        let fv = rat(v as i64);
        let mono: Vec<Rat> = support.iter().map(|e| eval_monomial(e, x)).collect();
        lp.push_row(mono.clone(), Relation::Le, &fv + eps);
        lp.push_row(mono, Relation::Ge, &fv - eps);
    }
    lp::feasible(&lp)
}

// ---------------------------------------------------------------------------
// Symmetrization
// ---------------------------------------------------------------------------

/// Averages `phi` over independent permutations of each block of {0,1}
/// variables. The result is a polynomial in the block sums with degree at most
/// deg(phi), computed by exact orbit averaging and grid interpolation.
pub fn symmetrize(phi: &SparsePolynomial, blocks: &[Vec<usize>]) -> Result<SparsePolynomial> {
    let total: usize = blocks.iter().map(|b| b.len()).sum();
    if total != phi.num_vars {
        return Err(Error::Precondition(
            "blocks must partition the variables".into(),
        ));
    }
    let mut seen = vec![false; total];
    for b in blocks {
        for &i in b {
            if seen[i] {
                return Err(Error::Precondition("blocks overlap".into()));
            }
            seen[i] = true;
        }
    }
    if blocks.iter().any(|b| b.len() > 20) {
        return Err(Error::DomainCap {
            points: 1 << 20,
            cap: 1 << 20,
        });
    }
    // Average of phi over all {0,1} inputs with the given block sums.
    let average = |sums: &[usize]| -> Rat {
        let mut total_sum = Rat::zero();
        let mut count = 0u64;
        let block_choices: Vec<Vec<Vec<usize>>> = blocks
            .iter()
            .zip(sums.iter())
            .map(|(b, &s)| (0..b.len()).combinations(s).collect())
            .collect();
        for choice in block_choices.into_iter().multi_cartesian_product() {
            let mut x = vec![Rat::zero(); phi.num_vars];
            for (b, ones) in blocks.iter().zip(choice.iter()) {
                for &local in ones {
                    x[b[local]] = Rat::one();
                }
            }
            total_sum += phi.eval(&x).expect("dimension checked");
            count += 1;
        }
        total_sum / rat(count as i64)
    };
    let grids: Vec<Vec<Rat>> = blocks
        .iter()
        .map(|b| (0..=b.len()).map(|s| rat(s as i64)).collect())
        .collect();
    let p = tensor_interpolate(&grids, &|idx: &[usize]| average(idx));
    if !phi.is_zero() && p.total_degree() > phi.total_degree() {
        return Err(Error::Inconsistency(
            "symmetrization increased total degree".into(),
        ));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::{make_named, DomainCap, Family};
    use crate::rat::ratio;

    fn named(f: Family) -> BooleanFunction {
        make_named(&f, DomainCap::default()).unwrap()
    }

    #[test]
    fn constant_function_degree_zero() {
        let f = BooleanFunction::new(
            "const",
            vec![vec![rat(-1)], vec![rat(1)]],
            vec![1, 1],
        )
        .unwrap();
        let r = threshold_degree(&f).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.dual_certificate.is_none());
    }

    #[test]
    fn parity2_threshold_degree() {
        let f = named(Family::Parity { n: 2 });
        let r = threshold_degree(&f).unwrap();
        assert_eq!(r.value, 2);
        // the dual at degree 1 is the uniform distribution
        let w = r.dual_certificate.unwrap();
        assert!(w.weights.iter().all(|x| x == &ratio(1, 4)));
    }

    #[test]
    fn majority_is_a_halfspace() {
        let f = named(Family::Majority { n: 3 });
        assert_eq!(threshold_degree(&f).unwrap().value, 1);
        assert!(gordan_witness(&f, 1).unwrap().is_none());
        // one degree below the threshold degree a witness must exist
        assert!(gordan_witness(&f, 0).unwrap().is_some());
    }

    #[test]
    fn two_level_and_of_ors() {
        // (x1 or x2) and (x3 or x4) on the cube has threshold degree 2
        let or2 = named(Family::And { n: 2 }).negate().reflect();
        let and2 = named(Family::And { n: 2 });
        let spec = crate::boolfun::CompositionSpec::new(and2, vec![or2.clone(), or2]).unwrap();
        let f = crate::boolfun::compose(&spec, DomainCap::default()).unwrap();
        assert_eq!(threshold_degree(&f).unwrap().value, 2);
    }

    #[test]
    fn approx_error_examples() {
        // MAJ_1 = x1 is exactly representable at degree 1
        let f = named(Family::Majority { n: 1 });
        let r = approx_error(&f, 1).unwrap();
        assert!(r.eps.is_zero());
        // PARITY_2 at degree 1: best error 1 with p = 0
        let f = named(Family::Parity { n: 2 });
        let r = approx_error(&f, 1).unwrap();
        assert_eq!(r.eps, rat(1));
        let w = r.dual.unwrap();
        assert_eq!(w.correlation, rat(1));
        // OR_2 on {0,1}^2 at degree 1: strong duality gap is zero (asserted
        // inside approx_error); value from the 4-point Chebyshev oracle below.
        let f = named(Family::Or { n: 2 });
        let r = approx_error(&f, 1).unwrap();
        assert_eq!(r.eps, oracle_or2_deg1());
    }

    /// Independent Chebyshev oracle for OR_2 on {0,1}^2 at degree 1: by the
    /// x1 <-> x2 symmetry an optimal fit has the form a + b(x1+x2); brute
    /// force the equioscillation candidates over the three levels
    /// s = x1+x2 in {0,1,2} with targets 1, -1, -1.
    fn oracle_or2_deg1() -> Rat {
        let targets = [(rat(0), rat(1)), (rat(1), rat(-1)), (rat(2), rat(-1))];
        let mut best: Option<Rat> = None;
        // candidate (a, b): balance each pair of levels with opposite signs,
        // plus the flat fit between max and min target.
        let mut candidates: Vec<(Rat, Rat)> = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    // a + b s_i - t_i = -(a + b s_j - t_j) and slope choices
                    // pinned by the third point: enumerate b over a small grid
                    // of rationals determined by pairs.
                    let (si, ti) = &targets[i];
                    let (sj, tj) = &targets[j];
                    // For each fixed b, optimal a centers the residuals; take
                    // b from differences of targets over differences of s.
                    let b = (ti - tj) / (si - sj);
                    candidates.push((Rat::zero(), b));
                }
            }
        }
        candidates.push((Rat::zero(), Rat::zero()));
        for (_, b) in candidates {
            // optimal a for this slope: midpoint of residual range
            let residuals: Vec<Rat> = targets.iter().map(|(s, t)| t - &(&b * s)).collect();
            let hi = residuals.iter().max().unwrap().clone();
            let lo = residuals.iter().min().unwrap().clone();
            let a = (&hi + &lo) / rat(2);
            let err = (&hi - &lo) / rat(2);
            let _ = a;
            if best.as_ref().map_or(true, |cur| err < *cur) {
                best = Some(err);
            }
        }
        best.unwrap()
    }

    #[test]
    fn eps_degree_scan() {
        let f = named(Family::Majority { n: 3 });
        // eps = 1 means the zero polynomial suffices
        assert_eq!(eps_approx_degree(&f, &rat(1)).unwrap(), 0);
        let d0 = eps_approx_degree(&f, &rat(0)).unwrap();
        let d13 = eps_approx_degree(&f, &ratio(1, 3)).unwrap();
        assert!(d13 <= d0);
        // monotone in n for OR at eps = 1/3
        let mut last = 0;
        for n in 1..=6 {
            let f = named(Family::Or { n });
            let d = eps_approx_degree(&f, &ratio(1, 3)).unwrap();
            assert!(d >= last, "OR_{n} degree decreased");
            last = d;
        }
    }

    #[test]
    fn approx_error_monotone_in_degree() {
        let f = named(Family::Majority { n: 3 });
        let mut prev: Option<Rat> = None;
        for d in 0..=3 {
            let e = approx_error(&f, d).unwrap().eps;
            if let Some(p) = prev {
                assert!(e <= p);
            }
            prev = Some(e.clone());
        }
        assert!(prev.unwrap().is_zero());
    }

    #[test]
    fn weighted_degree_definitional_reduction() {
        let f = named(Family::And { n: 2 });
        for eps in [rat(0), ratio(1, 3)] {
            let plain = eps_approx_degree(&f, &eps).unwrap();
            let weighted = weighted_approx_degree(&f, &eps, &[1, 1]).unwrap();
            assert_eq!(plain, weighted);
        }
        // eps = 1 gives 0
        assert_eq!(weighted_approx_degree(&f, &rat(1), &[5, 1]).unwrap(), 0);
        // v = (5,1), eps = 0: brute force over the 4 support classes says the
        // cheapest exact support must include both variables, cost 6
        let d = weighted_approx_degree(&f, &rat(0), &[5, 1]).unwrap();
        assert_eq!(d, 6);
    }

    #[test]
    fn symmetrize_examples() {
        // phi = x1 over one block of two variables -> s/2
        let phi = SparsePolynomial::var(2, 0);
        let p = symmetrize(&phi, &[vec![0, 1]]).unwrap();
        assert_eq!(p.eval(&[rat(0)]).unwrap(), rat(0));
        assert_eq!(p.eval(&[rat(1)]).unwrap(), ratio(1, 2));
        assert_eq!(p.eval(&[rat(2)]).unwrap(), rat(1));
        // phi = x1 x2 -> s(s-1)/2 on {0,1,2}
        let phi = SparsePolynomial::monomial(2, vec![1, 1], rat(1));
        let p = symmetrize(&phi, &[vec![0, 1]]).unwrap();
        assert_eq!(p.eval(&[rat(0)]).unwrap(), rat(0));
        assert_eq!(p.eval(&[rat(1)]).unwrap(), rat(0));
        assert_eq!(p.eval(&[rat(2)]).unwrap(), rat(1));
        // constants unchanged
        let phi = SparsePolynomial::constant(3, ratio(5, 7));
        let p = symmetrize(&phi, &[vec![0], vec![1, 2]]).unwrap();
        assert_eq!(p.eval(&[rat(1), rat(2)]).unwrap(), ratio(5, 7));
    }

    #[test]
    fn symmetrize_agrees_with_direct_average() {
        use itertools::Itertools;
        // random-ish phi on 4 variables in 2 blocks of 2
        let mut phi = SparsePolynomial::zero(4);
        phi.add_term(vec![1, 0, 1, 0], ratio(3, 2));
        phi.add_term(vec![0, 1, 1, 1], rat(-2));
        phi.add_term(vec![1, 1, 0, 0], ratio(1, 3));
        let blocks = vec![vec![0, 1], vec![2, 3]];
        let p = symmetrize(&phi, &blocks).unwrap();
        assert!(p.total_degree() <= phi.total_degree());
        // direct permutation average over S_2 x S_2 at every {0,1}^4 input
        let perms2: Vec<Vec<usize>> = (0..2).permutations(2).collect();
        for bits in (0..4).map(|_| [0i64, 1]).multi_cartesian_product() {
            let x: Vec<Rat> = bits.iter().map(|&b| rat(b)).collect();
            let mut acc = Rat::zero();
            for pa in &perms2 {
                for pb in &perms2 {
                    let xx = vec![
                        x[pa[0]].clone(),
                        x[pa[1]].clone(),
                        x[2 + pb[0]].clone(),
                        x[2 + pb[1]].clone(),
                    ];
                    acc += phi.eval(&xx).unwrap();
                }
            }
            acc /= rat(4);
            let sums = vec![&x[0] + &x[1], &x[2] + &x[3]];
            assert_eq!(p.eval(&sums).unwrap(), acc);
        }
    }

    #[test]
    fn gordan_duality_exhaustive_tiny() {
        // every function on the 2-cube, d in {0,1}: exactly one side exists
        let cube = named(Family::Parity { n: 2 });
        let points = cube.points().to_vec();
        for mask in 0..16u32 {
            let values: Vec<i8> = (0..4).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
            let f = BooleanFunction::new("enum", points.clone(), values).unwrap();
            for d in 0..=1 {
                let primal = sign_representation(&f, d).unwrap().is_some();
                let dual = gordan_witness(&f, d).unwrap().is_some();
                assert!(primal ^ dual, "mask {mask} d {d}");
            }
        }
    }

    #[test]
    fn gordan_duality_on_a_noncube_domain() {
        // a 6-point ±1-coordinate domain (a strict subset of the 3-cube):
        // for every function and d <= 3, exactly one side exists
        let cube = named(Family::Parity { n: 3 });
        let points: Vec<Vec<Rat>> = cube.points().iter().take(6).cloned().collect();
        for mask in 0..64u32 {
            let values: Vec<i8> = (0..6).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
            let f = BooleanFunction::new("sub", points.clone(), values).unwrap();
            for d in 0..=3 {
                let primal = sign_representation(&f, d).unwrap().is_some();
                let dual = gordan_witness(&f, d).unwrap().is_some();
                assert!(primal ^ dual, "mask {mask} d {d}");
            }
        }
    }

    #[test]
    fn threshold_degree_boundary_behavior() {
        // below the threshold degree a Gordan distribution exists; at and
        // above it the best approximation error drops strictly below 1
        for f in [
            named(Family::Majority { n: 3 }),
            named(Family::Parity { n: 2 }),
            named(Family::And { n: 2 }),
        ] {
            let dt = threshold_degree(&f).unwrap().value;
            for d in 0..dt {
                assert!(gordan_witness(&f, d).unwrap().is_some());
            }
            let max_d: i64 = f.num_vars() as i64;
            for d in dt..=max_d {
                assert!(approx_error(&f, d).unwrap().eps < rat(1));
            }
        }
    }

    #[test]
    fn witness_text_roundtrip() {
        let f = named(Family::Parity { n: 2 });
        let w = gordan_witness(&f, 1).unwrap().unwrap();
        let text = w.to_text();
        let back = DualWitness::from_text(&text).unwrap();
        back.verify(&f).unwrap();
        assert_eq!(back.weights, w.weights);
    }
}
