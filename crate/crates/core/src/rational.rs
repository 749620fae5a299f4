//! Rational approximation of Boolean functions over finite domains.
//!
//! Upper bounds come from explicit constructions: Newman's approximant to the
//! sign function and the error/accuracy boosting maps derived from it, the
//! degree-1 family for OR, the automaton-based zero-error approximant for
//! halfspaces with {0,±1,±2} digits, and the geometric-node construction for
//! the sign function on ±{1..n}. The least achievable error R+(f, d) is an
//! infimum that need not be attained, so it is reported only as a certified
//! bracket: bisection on the error with an exact feasibility LP at each step,
//! keeping a concrete approximant on the feasible side and an exact Farkas
//! record on the infeasible side.

use num_traits::{One, Signed, Zero};

use crate::boolfun::BooleanFunction;
use crate::degrees::monomial_basis;
use crate::lp::{self, FarkasCertificate, LinearProgram, LpStatus, Relation};
use crate::poly::{
    tensor_interpolate, SparsePolynomial, UnivariatePolynomial, UnivariateRational,
};
use crate::rat::{format_rat, pow_frac_bounds, rat, rat_pow, ratio, root_floor, sqrt_exact, Rat};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Approximant containers
// ---------------------------------------------------------------------------

/// Multivariate rational approximant p/q for a Boolean function, with the
/// exact max error and denominator positivity verified over the whole domain.
#[derive(Clone, Debug)]
pub struct RationalApproximant {
    pub numer: SparsePolynomial,
    pub denom: SparsePolynomial,
    /// max(deg numer, deg denom)
    pub degree: i64,
    /// exact max |f - p/q| over the domain it was verified against
    pub verified_error: Rat,
    pub denominator_positive: bool,
}

impl RationalApproximant {
    pub fn eval(&self, x: &[Rat]) -> Result<Rat> {
        let d = self.denom.eval(x)?;
        if d.is_zero() {
            return Err(Error::Precondition("denominator vanishes".into()));
        }
        Ok(self.numer.eval(x)? / d)
    }

    /// Builds from raw polynomials, verifying denominator positivity and
    /// recomputing the exact error against `f`.
    pub fn verified(
        f: &BooleanFunction,
        numer: SparsePolynomial,
        denom: SparsePolynomial,
    ) -> Result<Self> {
        let mut worst = Rat::zero();
        for (x, v) in f.iter() {
            let dv = denom.eval(x)?;
            if !dv.is_positive() {
                return Err(Error::VerificationFailed(format!(
                    "denominator not positive at {x:?}"
                )));
            }
            let e = (rat(v as i64) - numer.eval(x)? / dv).abs();
            if e > worst {
                worst = e;
            }
        }
        let degree = numer.total_degree().max(denom.total_degree());
        Ok(RationalApproximant {
            numer,
            denom,
            degree,
            verified_error: worst,
            denominator_positive: true,
        })
    }
}

/// A rational approximant of degree d with a sign-unrestricted denominator
/// yields {pq}/q^2 of degree <= 2d with the same values wherever q != 0,
/// hence the same error, and a positive denominator.
pub fn square_denominator(
    f: &BooleanFunction,
    numer: &SparsePolynomial,
    denom: &SparsePolynomial,
) -> Result<RationalApproximant> {
    RationalApproximant::verified(f, numer.mul(denom), denom.mul(denom))
}

/// Univariate approximant to the sign function on a point grid.
#[derive(Clone, Debug)]
pub struct UnivariateApproximant {
    pub func: UnivariateRational,
    pub grid: Vec<Rat>,
    /// exact max |sign t - S(t)| over the grid
    pub verified_error: Rat,
    /// dyadic gap of the irrational-constant surrogates (0 when exact)
    pub surrogate_slack: Rat,
}

/// The symmetric integer grid {±1, ..., ±bound}.
pub fn integer_sign_grid(bound: u64) -> Vec<Rat> {
    let mut g: Vec<Rat> = (1..=bound as i64).map(rat).collect();
    let negs: Vec<Rat> = (1..=bound as i64).map(|t| rat(-t)).collect();
    g.extend(negs);
    g.sort();
    g
}

/// The sign function on a set of nonzero rationals, as a 1-variable function.
pub fn sign_function_on(points: &[Rat]) -> Result<BooleanFunction> {
    let pts: Vec<Vec<Rat>> = points.iter().map(|t| vec![t.clone()]).collect();
    let vals: Vec<i8> = points
        .iter()
        .map(|t| if t.is_positive() { 1 } else { -1 })
        .collect();
    BooleanFunction::new("sign", pts, vals)
}

// ---------------------------------------------------------------------------
// Newman's construction
// ---------------------------------------------------------------------------

/// Newman's degree-k rational approximant to sign t on [-N,-1] u [1,N]:
/// S(t) = N^(-1/(2k)) (p(t)-p(-t))/(p(t)+p(-t)) with
/// p(t) = prod_i (t + N^((2i-1)/(2k))). The irrational roots become dyadic
/// floors; the error bound 1 - N^(-1/k) is then re-verified exactly on the
/// requested grid, as is denominator positivity. Fails with a precision error
/// if the surrogate is too coarse to certify the bound.
pub fn newman(
    n_param: &Rat,
    k: u32,
    grid: &[Rat],
    frac_bits: u32,
) -> Result<UnivariateApproximant> {
    if n_param <= &Rat::one() {
        return Err(Error::Precondition("newman requires N > 1".into()));
    }
    if k == 0 {
        return Err(Error::Precondition("newman requires k >= 1".into()));
    }
    let mut slack = Rat::zero();
    let mut roots = Vec::with_capacity(k as usize);
    for i in 1..=k {
        let (lo, hi) = pow_frac_bounds(n_param, 2 * i - 1, 2 * k, frac_bits);
        slack = slack.max(&hi - &lo);
        roots.push(lo);
    }
    let p =
        UnivariatePolynomial::from_roots(&roots.iter().map(|r| -r.clone()).collect::<Vec<_>>());
    // prefactor 1/r1 where r1 is the dyadic floor of N^(1/(2k)); matching the
    // root surrogate keeps the t = 1 endpoint within the bound
    let prefactor = Rat::one() / roots[0].clone();
    let p_neg = p.reflect();
    let numer = p.sub(&p_neg).scale(&prefactor);
    let denom = p.add(&p_neg);
    let mut func = UnivariateRational::new(numer, denom);
    func.verify_denominator_positive(grid)?;
    let err = func.sign_error_on(grid)?;
    // err <= 1 - N^(-1/k)  <=>  N (1 - err)^k >= 1, checked exactly
    if err > Rat::one() || n_param * rat_pow(&(Rat::one() - &err), k) < Rat::one() {
        return Err(Error::Precision(format!(
            "newman bound not certified at error {} (N = {}, k = {k})",
            format_rat(&err),
            format_rat(n_param)
        )));
    }
    Ok(UnivariateApproximant {
        func,
        grid: grid.to_vec(),
        verified_error: err,
        surrogate_slack: slack,
    })
}

// ---------------------------------------------------------------------------
// Error and accuracy boosting
// ---------------------------------------------------------------------------

/// Composes a degree-k Newman map with A/(1-eps), multiplying through by
/// ((1-eps) q)^k to stay polynomial: error eps < 1 becomes at most
/// 1 - ((1-eps)/(1+eps))^(1/k) (up to the reported surrogate slack), at degree
/// <= k deg A.
pub fn error_boost(
    f: &BooleanFunction,
    a: &RationalApproximant,
    k: u32,
    frac_bits: u32,
) -> Result<RationalApproximant> {
    if k == 0 {
        return Err(Error::Precondition("boost order k >= 1".into()));
    }
    if !a.denominator_positive {
        return Err(Error::Precondition(
            "input denominator must be positive".into(),
        ));
    }
    let eps = &a.verified_error;
    if eps >= &Rat::one() {
        return Err(Error::Precondition("error_boost needs error < 1".into()));
    }
    if eps.is_zero() {
        return Ok(a.clone());
    }
    let n_param = (Rat::one() + eps) / (Rat::one() - eps);
    let one_minus = Rat::one() - eps;
    let mut slack = Rat::zero();
    let mut plus = SparsePolynomial::one(f.num_vars());
    let mut minus = SparsePolynomial::one(f.num_vars());
    let mut r1 = Rat::zero();
    let grid = f.coordinate_values();
    for i in 1..=k {
        let (lo, hi) = pow_frac_bounds(&n_param, 2 * i - 1, 2 * k, frac_bits);
        slack = slack.max(&hi - &lo);
        if i == 1 {
            r1 = lo.clone();
        }
        let shift = a.denom.scale(&(&lo * &one_minus));
        plus = plus.mul(&a.numer.add(&shift)).reduce_on_grid(&grid);
        minus = minus.mul(&shift.sub(&a.numer)).reduce_on_grid(&grid);
    }
    let numer = plus.sub(&minus).scale(&(Rat::one() / r1));
    let denom = plus.add(&minus);
    let out = RationalApproximant::verified(f, numer, denom)?;
    if out.degree > k as i64 * a.degree {
        return Err(Error::Inconsistency("boost exceeded degree bound".into()));
    }
    // certified bound: err <= 1 - (1/N)^(1/k) + slack
    let budget = Rat::one() - &out.verified_error + ratio(1, 1 << 20);
    if budget.is_negative() || &n_param * rat_pow(&budget, k) < Rat::one() {
        return Err(Error::Precision(
            "error_boost could not certify the boosted bound; raise precision".into(),
        ));
    }
    Ok(out)
}

/// Degree-doubling accuracy boost: error eps becomes at most
/// (eps / (1 + sqrt(1-eps^2)))^2 via S(t) = c t/(t^2 + (1-eps^2)) with
/// c = 4 sqrt(1-eps^2)/(1 + sqrt(1-eps^2)); the square root is taken exactly
/// when possible and as a dyadic floor otherwise.
pub fn accuracy_boost(
    f: &BooleanFunction,
    a: &RationalApproximant,
    frac_bits: u32,
) -> Result<RationalApproximant> {
    if !a.denominator_positive {
        return Err(Error::Precondition(
            "input denominator must be positive".into(),
        ));
    }
    let eps = a.verified_error.clone();
    if eps >= Rat::one() {
        return Err(Error::Precondition("accuracy_boost needs error < 1".into()));
    }
    if eps.is_zero() {
        return Ok(a.clone());
    }
    let beta = Rat::one() - &eps * &eps;
    let s = match sqrt_exact(&beta) {
        Some(v) => v,
        None => root_floor(&beta, 2, frac_bits),
    };
    let c = rat(4) * &s / (Rat::one() + &s);
    let grid = f.coordinate_values();
    let pq = a.numer.mul(&a.denom).reduce_on_grid(&grid);
    let numer = pq.scale(&c);
    let denom = a
        .numer
        .mul(&a.numer)
        .add(&a.denom.mul(&a.denom).scale(&beta))
        .reduce_on_grid(&grid);
    let out = RationalApproximant::verified(f, numer, denom)?;
    if out.degree > 2 * a.degree {
        return Err(Error::Inconsistency("boost exceeded degree bound".into()));
    }
    let bound = rat_pow(&(&eps / (Rat::one() + &s)), 2) + ratio(1, 1 << 20);
    if out.verified_error > bound {
        return Err(Error::Precision(
            "accuracy_boost could not certify the squared bound; raise precision".into(),
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Certified error brackets for R+(f, d)
// ---------------------------------------------------------------------------

/// Exact Farkas record for "no degree-d approximant achieves error eps".
#[derive(Clone, Debug)]
pub struct BracketFarkas {
    pub eps: Rat,
    pub certificate: FarkasCertificate,
}

#[derive(Clone, Debug)]
pub struct ErrorBracket {
    pub d: i64,
    pub lower: Rat,
    pub upper: Rat,
    /// Farkas record at eps = lower (absent when lower = 0).
    pub lower_certificate: Option<BracketFarkas>,
    /// Approximant attaining the upper end.
    pub upper_certificate: Option<RationalApproximant>,
}

/// Column/row layout of the feasibility LP for one (f, d) pair, after
/// symmetry reduction. Columns are arbitrary basis polynomials.
///
/// Two reductions apply, separately or together:
/// - permutation symmetry: averaging a feasible (p, q) over coordinate
///   permutations preserves feasibility, so p and q may be taken symmetric,
///   i.e. polynomials in the coordinate sum; one constraint row per level.
/// - oddness of f on a negation-closed domain: averaging over x -> -x makes
///   the numerator odd and the denominator even, halving both sides.
struct BracketShape {
    basis_p: Vec<SparsePolynomial>,
    basis_q: Vec<SparsePolynomial>,
    /// indices into the domain that generate constraints
    row_points: Vec<usize>,
}

fn odd_symmetric(f: &BooleanFunction) -> bool {
    f.iter().all(|(x, v)| {
        let neg: Vec<Rat> = x.iter().map(|c| -c.clone()).collect();
        f.value_at(&neg) == Some(-v)
    })
}

/// Invariance under adjacent transpositions implies invariance under the
/// whole symmetric group.
fn permutation_symmetric(f: &BooleanFunction) -> bool {
    let n = f.num_vars();
    if n < 2 {
        return false;
    }
    for i in 0..n - 1 {
        for (x, v) in f.iter() {
            let mut swapped = x.clone();
            swapped.swap(i, i + 1);
            if f.value_at(&swapped) != Some(v) {
                return false;
            }
        }
    }
    true
}

fn bracket_shape(f: &BooleanFunction, d: i64) -> BracketShape {
    let nv = f.num_vars();
    let odd = odd_symmetric(f);
    if permutation_symmetric(f) {
        // basis: powers of the coordinate sum, reduced on the grid
        let grid = f.coordinate_values();
        let mut sum = SparsePolynomial::zero(nv);
        for i in 0..nv {
            sum = sum.add(&SparsePolynomial::var(nv, i));
        }
        let mut levels: Vec<Rat> = f
            .points()
            .iter()
            .map(|x| x.iter().sum::<Rat>())
            .collect();
        levels.sort();
        levels.dedup();
        let max_pow = (d.max(0) as usize).min(levels.len() - 1);
        let mut powers = Vec::with_capacity(max_pow + 1);
        let mut acc = SparsePolynomial::one(nv);
        powers.push(acc.clone());
        for _ in 1..=max_pow {
            acc = acc.mul(&sum).reduce_on_grid(&grid);
            powers.push(acc.clone());
        }
        // one representative point per level (per positive level when odd)
        let mut row_points = Vec::new();
        let mut seen: Vec<Rat> = Vec::new();
        for (i, x) in f.points().iter().enumerate() {
            let s: Rat = x.iter().sum();
            if odd && !s.is_positive() {
                continue;
            }
            if !seen.contains(&s) {
                seen.push(s);
                row_points.push(i);
            }
        }
        let (basis_p, basis_q) = if odd {
            (
                powers
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j % 2 == 1)
                    .map(|(_, p)| p.clone())
                    .collect(),
                powers
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j % 2 == 0)
                    .map(|(_, p)| p.clone())
                    .collect(),
            )
        } else {
            (powers.clone(), powers)
        };
        return BracketShape {
            basis_p,
            basis_q,
            row_points,
        };
    }
    let monom = |e: &Vec<u32>| SparsePolynomial::monomial(nv, e.clone(), Rat::one());
    let basis = monomial_basis(f, d);
    if odd {
        let (odd_b, even_b): (Vec<_>, Vec<_>) = basis
            .into_iter()
            .partition(|e| e.iter().sum::<u32>() % 2 == 1);
        // one representative per {x, -x} pair: the lexicographically larger
        let row_points = f
            .points()
            .iter()
            .enumerate()
            .filter(|(_, x)| {
                let neg: Vec<Rat> = x.iter().map(|c| -c.clone()).collect();
                *x > &neg
            })
            .map(|(i, _)| i)
            .collect();
        BracketShape {
            basis_p: odd_b.iter().map(monom).collect(),
            basis_q: even_b.iter().map(monom).collect(),
            row_points,
        }
    } else {
        BracketShape {
            basis_p: basis.iter().map(monom).collect(),
            basis_q: basis.iter().map(monom).collect(),
            row_points: (0..f.len()).collect(),
        }
    }
}

/// The fixed-eps feasibility LP: polynomials p, q of degree <= d with
/// (1-eps) q(x) <= f(x) p(x) <= (1+eps) q(x) and q(x) >= 1 on the domain.
/// Any domain-positive denominator rescales to >= 1 on a finite set, so this
/// normalization loses nothing and keeps the problem linear in (p, q).
pub fn bracket_feasibility_lp(f: &BooleanFunction, d: i64, eps: &Rat) -> LinearProgram {
    bracket_lp_from_shape(f, &bracket_shape(f, d), eps)
}

fn bracket_lp_from_shape(f: &BooleanFunction, shape: &BracketShape, eps: &Rat) -> LinearProgram {
    let np = shape.basis_p.len();
    let nq = shape.basis_q.len();
    let mut lp = LinearProgram::new(np + nq);
    for &i in &shape.row_points {
        let x = &f.points()[i];
        let fv = rat(f.values()[i] as i64);
        let mono_p: Vec<Rat> = shape
            .basis_p
            .iter()
            .map(|b| b.eval(x).expect("dimensions fixed"))
            .collect();
        let mono_q: Vec<Rat> = shape
            .basis_q
            .iter()
            .map(|b| b.eval(x).expect("dimensions fixed"))
            .collect();
        // f p - (1-eps) q >= 0
        let mut row: Vec<Rat> = mono_p.iter().map(|m| m * &fv).collect();
        row.extend(mono_q.iter().map(|m| -m * &(Rat::one() - eps)));
        lp.push_row(row, Relation::Ge, Rat::zero());
        // (1+eps) q - f p >= 0
        let mut row: Vec<Rat> = mono_p.iter().map(|m| -m * &fv).collect();
        row.extend(mono_q.iter().map(|m| m * &(Rat::one() + eps)));
        lp.push_row(row, Relation::Ge, Rat::zero());
        // q >= 1
        let mut row = vec![Rat::zero(); np];
        row.extend(mono_q);
        lp.push_row(row, Relation::Ge, Rat::one());
    }
    lp
}

fn approximant_from_shape(
    f: &BooleanFunction,
    shape: &BracketShape,
    sol: &[Rat],
) -> Result<RationalApproximant> {
    let np = shape.basis_p.len();
    let mut p = SparsePolynomial::zero(f.num_vars());
    let mut q = SparsePolynomial::zero(f.num_vars());
    for (i, b) in shape.basis_p.iter().enumerate() {
        p = p.add(&b.scale(&sol[i]));
    }
    for (i, b) in shape.basis_q.iter().enumerate() {
        q = q.add(&b.scale(&sol[np + i]));
    }
    RationalApproximant::verified(f, p, q)
}

/// Certified bracket [lower, upper] of R+(f, d) with upper - lower <=
/// precision, by bisection on eps of the exact feasibility LP. The feasible
/// side keeps a concrete verified approximant; the infeasible side keeps the
/// exact Farkas record.
pub fn rational_error_bracket(
    f: &BooleanFunction,
    d: i64,
    precision: &Rat,
) -> Result<ErrorBracket> {
    rational_error_bracket_seeded(f, d, precision, None)
}

/// Bracket with an optional construction seeding the upper end; the seed must
/// have degree <= d and a verified error, so the final upper never exceeds it.
pub fn rational_error_bracket_seeded(
    f: &BooleanFunction,
    d: i64,
    precision: &Rat,
    seed: Option<RationalApproximant>,
) -> Result<ErrorBracket> {
    rational_error_bracket_probed(f, d, precision, seed, None)
}

/// Bracket whose lower side additionally probes a caller-supplied error level
/// first (typically an external certified lower bound): an infeasible probe
/// lifts the LP lower bound to exactly that level regardless of the bisection
/// grid.
pub fn rational_error_bracket_probed(
    f: &BooleanFunction,
    d: i64,
    precision: &Rat,
    seed: Option<RationalApproximant>,
    lower_probe: Option<Rat>,
) -> Result<ErrorBracket> {
    if d < 0 {
        return Err(Error::Precondition("degree must be >= 0".into()));
    }
    if !precision.is_positive() {
        return Err(Error::Precondition("precision must be > 0".into()));
    }
    if let Some(s) = &seed {
        if s.degree > d || !s.denominator_positive {
            return Err(Error::Precondition(
                "seed must have degree <= d and positive denominator".into(),
            ));
        }
    }
    // Farkas certificates are built lazily: bisection steps only need the
    // feasibility verdict, and the certificate for the final lower bound is
    // produced by one dedicated solve at the end.
    let shape = bracket_shape(f, d);
    let solve_at = |eps: &Rat,
                    want_farkas: bool|
     -> Result<(bool, Option<Vec<Rat>>, Option<FarkasCertificate>)> {
        let lp = bracket_lp_from_shape(f, &shape, eps);
        let out = lp::solve_with(&lp, want_farkas)?;
        match out.status {
            LpStatus::Feasible => Ok((true, out.solution, None)),
            LpStatus::Infeasible => Ok((false, None, out.farkas)),
            LpStatus::Unbounded => Err(Error::Inconsistency("feasibility LP unbounded".into())),
        }
    };

    // eps = 0 first: feasible iff f itself is a degree-d rational function.
    let (feasible0, sol0, _) = solve_at(&Rat::zero(), false)?;
    if feasible0 {
        let appr = approximant_from_shape(f, &shape, &sol0.unwrap())?;
        if !appr.verified_error.is_zero() {
            return Err(Error::Inconsistency("zero-eps approximant has error".into()));
        }
        return Ok(ErrorBracket {
            d,
            lower: Rat::zero(),
            upper: Rat::zero(),
            lower_certificate: None,
            upper_certificate: Some(appr),
        });
    }
    let mut lower = Rat::zero();
    // eps = 1 is always feasible via p = 0, q = 1; a seed can start lower.
    let mut upper = Rat::one();
    let mut upper_cert = RationalApproximant::verified(
        f,
        SparsePolynomial::zero(f.num_vars()),
        SparsePolynomial::one(f.num_vars()),
    )?;
    if let Some(s) = seed {
        let re = RationalApproximant::verified(f, s.numer, s.denom)?;
        if re.verified_error < upper {
            upper = re.verified_error.clone();
            upper_cert = re;
        }
    }
    if let Some(probe) = lower_probe {
        if probe.is_positive() && probe < upper {
            let (feasible, sol, _) = solve_at(&probe, false)?;
            if feasible {
                let appr = approximant_from_shape(f, &shape, &sol.unwrap())?;
                if appr.verified_error < upper {
                    upper = appr.verified_error.clone();
                    upper_cert = appr;
                }
            } else {
                lower = probe;
            }
        }
    }
    while &upper - &lower > *precision {
        // dyadic midpoint: the LP coefficients stay small even after the
        // upper end becomes an extracted (arbitrary-rational) error value
        let gap = &upper - &lower;
        let mut bits = 2u32;
        let mut quantum = ratio(1, 4);
        while &quantum * rat(4) > gap {
            bits += 1;
            quantum /= rat(2);
            if bits > 4096 {
                return Err(Error::Inconsistency("bisection quantum underflow".into()));
            }
        }
        let mid = crate::rat::dyadic_floor(&((&upper + &lower) / rat(2)), bits);
        debug_assert!(mid > lower && mid < upper);
        let (feasible, sol, _) = solve_at(&mid, false)?;
        if feasible {
            let appr = approximant_from_shape(f, &shape, &sol.unwrap())?;
            if appr.verified_error > mid {
                return Err(Error::Inconsistency(
                    "extracted approximant violates the LP error level".into(),
                ));
            }
            upper = appr.verified_error.clone();
            upper_cert = appr;
        } else {
            lower = mid;
        }
    }
    // one certificate-producing solve at the final lower level
    let lower_cert = if lower.is_zero() {
        None
    } else {
        let (feasible, _, farkas) = solve_at(&lower, true)?;
        if feasible {
            return Err(Error::Inconsistency(
                "final lower level solved feasible on re-check".into(),
            ));
        }
        Some(BracketFarkas {
            eps: lower.clone(),
            certificate: farkas.unwrap(),
        })
    };
    Ok(ErrorBracket {
        d,
        lower,
        upper,
        lower_certificate: lower_cert,
        upper_certificate: Some(upper_cert),
    })
}

/// Re-verifies both sides of a bracket against `f`.
pub fn verify_bracket(f: &BooleanFunction, bracket: &ErrorBracket) -> Result<()> {
    if bracket.lower > bracket.upper {
        return Err(Error::VerificationFailed("lower > upper".into()));
    }
    if let Some(bf) = &bracket.lower_certificate {
        let lp = bracket_feasibility_lp(f, bracket.d, &bf.eps);
        lp::verify_farkas(&lp, &bf.certificate)?;
        if bf.eps != bracket.lower {
            return Err(Error::VerificationFailed(
                "lower certificate level mismatch".into(),
            ));
        }
    } else if !bracket.lower.is_zero() {
        return Err(Error::VerificationFailed(
            "nonzero lower bound without a certificate".into(),
        ));
    }
    match &bracket.upper_certificate {
        Some(appr) => {
            let re = RationalApproximant::verified(f, appr.numer.clone(), appr.denom.clone())?;
            if re.verified_error != bracket.upper {
                return Err(Error::VerificationFailed(
                    "upper certificate error mismatch".into(),
                ));
            }
            if re.degree > bracket.d {
                return Err(Error::VerificationFailed(
                    "upper certificate exceeds the degree".into(),
                ));
            }
        }
        None => {
            return Err(Error::VerificationFailed("missing upper certificate".into()));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Explicit families
// ---------------------------------------------------------------------------

/// Degree-1 approximant (1 - M sum x)/(1 + M sum x) for OR on {0,1}^n; error
/// tends to 0 as M grows.
pub fn or_family_approximant(n: usize, m_param: &Rat) -> Result<RationalApproximant> {
    if !m_param.is_positive() {
        return Err(Error::Precondition("M must be positive".into()));
    }
    let f = crate::boolfun::make_named(
        &crate::boolfun::Family::Or { n },
        crate::boolfun::DomainCap::default(),
    )?;
    let mut sum = SparsePolynomial::zero(n);
    for i in 0..n {
        sum = sum.add(&SparsePolynomial::var(n, i));
    }
    let numer = SparsePolynomial::one(n).sub(&sum.scale(m_param));
    let denom = SparsePolynomial::one(n).add(&sum.scale(m_param));
    RationalApproximant::verified(&f, numer, denom)
}

// ---------------------------------------------------------------------------
// The {0,±1,±2} halfspace automaton
// ---------------------------------------------------------------------------

/// Emitted digit of the sign automaton for one three-symbol window.
///
/// Reading digits most-significant first, a live (sign-undecided) run is
/// characterized by v = (partial sum)/2^i in {-1,0,1}, and v is determined by
/// the last two symbols read: 2a + b = 4w + v forces v = (2a+b) mod 4, with
/// residue 2 impossible for a live run. The window emits 0 while the run
/// stays live, emits sign(2v + c) in {-1,+1} at the step where the run
/// decides, and emits 0 when no live state is consistent. Contributions below
/// a decided position are dominated by the geometric weights, so the weighted
/// digit sum has exactly the sign of the full sum.
pub fn dfa_alpha(a: i64, b: i64, c: i64) -> i64 {
    let m = (2 * a + b).rem_euclid(4);
    let v = match m {
        0 => 0,
        1 => 1,
        3 => -1,
        _ => return 0,
    };
    let next = 2 * v + c;
    if next.abs() <= 1 {
        0
    } else {
        next.signum()
    }
}

/// The automaton's emitted digits for the stream z_1..z_n: entry i is the
/// digit at exponent i, for i = 0..=n, with z_0 and out-of-range symbols 0.
pub fn dfa_digits(z: &[i64]) -> Vec<i64> {
    let n = z.len();
    let get = |i: i64| -> i64 {
        if i >= 1 && i <= n as i64 {
            z[(i - 1) as usize]
        } else {
            0
        }
    };
    (0..=n as i64)
        .map(|i| dfa_alpha(get(i + 2), get(i + 1), get(i)))
        .collect()
}

/// sign(sum 2^i z_i) computed through the automaton digits.
pub fn dfa_sign(z: &[i64]) -> i64 {
    let digits = dfa_digits(z);
    let mut s: i128 = 0;
    for (i, &d) in digits.iter().enumerate() {
        s += (d as i128) << i;
    }
    s.signum() as i64
}

/// Minimal weight base certifying sign agreement: for M >= 2 the leading
/// nonzero digit dominates the lower-order ones.
pub fn dfa_sign_threshold() -> Rat {
    rat(2)
}

/// A_M value at an integer digit stream, exactly.
pub fn dfa_value(z: &[i64], m_param: &Rat) -> Rat {
    let digits = dfa_digits(z);
    let mut num = Rat::one();
    let mut den = Rat::one();
    let mut w = m_param.clone();
    for &d in &digits {
        num += &w * rat(d);
        den += &w * rat(d.abs());
        w *= m_param;
    }
    num / den
}

/// Trivariate interpolants of the window digit and its absolute value on
/// {-2..2}^3.
pub fn dfa_window_interpolants() -> (SparsePolynomial, SparsePolynomial) {
    let axis: Vec<Rat> = (-2..=2).map(rat).collect();
    let grids = vec![axis.clone(), axis.clone(), axis];
    let val = |idx: &[usize]| -> Rat {
        let a = idx[0] as i64 - 2;
        let b = idx[1] as i64 - 2;
        let c = idx[2] as i64 - 2;
        rat(dfa_alpha(a, b, c))
    };
    let val_abs = |idx: &[usize]| -> Rat {
        let a = idx[0] as i64 - 2;
        let b = idx[1] as i64 - 2;
        let c = idx[2] as i64 - 2;
        rat(dfa_alpha(a, b, c).abs())
    };
    (
        tensor_interpolate(&grids, &val),
        tensor_interpolate(&grids, &val_abs),
    )
}

/// The automaton-derived approximant for f(z) = sign(1 + sum 2^i z_i) on
/// {0,±1,±2}^n. Numerator and denominator are interpolating polynomials
/// (per-window degree <= 12, certainly <= 64); sign agreement with f is
/// verified exhaustively once M is at or above the threshold.
pub fn dfa_halfspace_approximant(n: usize, m_param: &Rat) -> Result<RationalApproximant> {
    if n == 0 || n > 9 {
        return Err(Error::DomainCap {
            points: usize::MAX,
            cap: 5usize.pow(9),
        });
    }
    if m_param < &dfa_sign_threshold() {
        return Err(Error::Precondition(format!(
            "M below the certified sign threshold {}",
            format_rat(&dfa_sign_threshold())
        )));
    }
    let (alpha_poly, alpha_abs_poly) = dfa_window_interpolants();
    let mut num = SparsePolynomial::one(n);
    let mut den = SparsePolynomial::one(n);
    let arg = |idx: i64| -> SparsePolynomial {
        if idx >= 1 && idx <= n as i64 {
            SparsePolynomial::var(n, (idx - 1) as usize)
        } else {
            SparsePolynomial::zero(n)
        }
    };
    let mut w = m_param.clone();
    for i in 0..=n as i64 {
        let args = [arg(i + 2), arg(i + 1), arg(i)];
        num = num.add(&alpha_poly.compose(&args).scale(&w));
        den = den.add(&alpha_abs_poly.compose(&args).scale(&w));
        w *= m_param;
    }
    if num.total_degree() > 64 || den.total_degree() > 64 {
        return Err(Error::Inconsistency("window degree bound exceeded".into()));
    }
    // exhaustive verification via the stream formula (pointwise equal to the
    // interpolating polynomials on the grid)
    let mut worst = Rat::zero();
    let mut stream = vec![0i64; n];
    verify_dfa_rec(n, 0, &mut stream, m_param, &mut worst)?;
    Ok(RationalApproximant {
        degree: num.total_degree().max(den.total_degree()),
        numer: num,
        denom: den,
        verified_error: worst,
        denominator_positive: true,
    })
}

fn verify_dfa_rec(
    n: usize,
    i: usize,
    stream: &mut Vec<i64>,
    m_param: &Rat,
    worst: &mut Rat,
) -> Result<()> {
    if i == n {
        let mut target: i128 = 1;
        for (j, &z) in stream.iter().enumerate() {
            target += (z as i128) << (j + 1);
        }
        let fv = rat(target.signum() as i64);
        let val = dfa_value(stream, m_param);
        if crate::rat::sign(&val) != target.signum() as i32 {
            return Err(Error::VerificationFailed(format!(
                "sign mismatch at stream {stream:?}"
            )));
        }
        let e = (fv - val).abs();
        if e > *worst {
            *worst = e;
        }
        return Ok(());
    }
    for z in -2..=2 {
        stream[i] = z;
        verify_dfa_rec(n, i + 1, stream, m_param, worst)?;
    }
    stream[i] = 0;
    Ok(())
}

// ---------------------------------------------------------------------------
// Canonical halfspace: exact sign representation via digit regrouping
// ---------------------------------------------------------------------------

/// Balanced base-2 digits z_1..z_width in {-1,0,1} with s = sum 2^(j-1) z_j;
/// the greedy rule (0 on even, sign(s) on odd) at least halves the magnitude
/// each step, so width digits suffice for |s| < 2^width.
pub fn balanced_digits(mut s: i64, width: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(width);
    for _ in 0..width {
        let z = if s % 2 == 0 { 0 } else { s.signum() };
        out.push(z);
        s = (s - z) / 2;
    }
    assert_eq!(s, 0, "balanced digit overflow");
    out
}

/// Rational sign representation of the canonical halfspace
/// sign(1 + sum_i sum_j 2^i x_ij) on {-1,+1}^(nk): block sums are re-encoded
/// as balanced digits (each a polynomial of degree <= k ceil(log k) in the
/// block variables), interleaved into a {0,±1,±2} stream, and fed through the
/// automaton approximant. Total degree stays within 64 k ceil(log k) + 1; sign
/// agreement is verified exhaustively.
pub fn canonical_halfspace_zero_error(
    n: usize,
    k: usize,
    m_param: &Rat,
    cap: crate::boolfun::DomainCap,
) -> Result<RationalApproximant> {
    if n == 0 || k == 0 {
        return Err(Error::Precondition("n, k >= 1".into()));
    }
    let f = crate::boolfun::make_named(&crate::boolfun::Family::CanonicalHalfspace { n, k }, cap)?;
    let nv = n * k;
    if k == 1 {
        // the top weight dominates: f = x_{n,1}
        let numer = SparsePolynomial::var(nv, nv - 1);
        let denom = SparsePolynomial::one(nv);
        return RationalApproximant::verified(&f, numer, denom);
    }
    if m_param < &dfa_sign_threshold() {
        return Err(Error::Precondition(format!(
            "M below the certified sign threshold {}",
            format_rat(&dfa_sign_threshold())
        )));
    }
    let delta = usize::BITS as usize - (k - 1).leading_zeros() as usize; // ceil(log2 k), k >= 2
    let width = 2 * delta;
    let num_blocks = n.div_ceil(delta);
    let cube: Vec<Vec<Rat>> = (0..nv).map(|_| vec![rat(-1), rat(1)]).collect();

    // Block l covers original rows l*delta + 1 ..= min((l+1)*delta, n).
    let block_vars = |l: usize| -> Vec<usize> {
        let mut vars = Vec::new();
        for i in 1..=delta {
            let row = l * delta + i;
            if row <= n {
                for j in 0..k {
                    vars.push((row - 1) * k + j);
                }
            }
        }
        vars
    };
    let local_sum = |l: usize, x: &[i64]| -> i64 {
        let mut s = 0i64;
        for i in 1..=delta {
            let row = l * delta + i;
            if row <= n {
                for j in 0..k {
                    s += (1i64 << (i - 1)) * x[(row - 1) * k + j];
                }
            }
        }
        s
    };

    // Digit polynomials per block: multilinear interpolation over the block's
    // variables of the balanced digits of the local weighted sum.
    let mut digit_polys: Vec<Vec<SparsePolynomial>> = Vec::with_capacity(num_blocks);
    for l in 0..num_blocks {
        let vars = block_vars(l);
        let mb = vars.len();
        let mut per_digit = vec![SparsePolynomial::zero(nv); width];
        for subset in 0..(1u32 << mb) {
            let mut coeffs = vec![Rat::zero(); width];
            for point in 0..(1u32 << mb) {
                let mut x = vec![0i64; nv];
                for (t, &var) in vars.iter().enumerate() {
                    x[var] = if point >> t & 1 == 1 { 1 } else { -1 };
                }
                let digits = balanced_digits(local_sum(l, &x), width);
                let mut chi = 1i64;
                for t in 0..mb {
                    if subset >> t & 1 == 1 && point >> t & 1 == 0 {
                        chi = -chi;
                    }
                }
                for (j, &d) in digits.iter().enumerate() {
                    coeffs[j] += rat(chi * d);
                }
            }
            let scale = Rat::one() / rat(1i64 << mb);
            let mut exps = vec![0u32; nv];
            for (t, &var) in vars.iter().enumerate() {
                if subset >> t & 1 == 1 {
                    exps[var] = 1;
                }
            }
            for (j, c) in coeffs.into_iter().enumerate() {
                per_digit[j].add_term(exps.clone(), c * &scale);
            }
        }
        digit_polys.push(per_digit);
    }

    // Interleave into the {0,±1,±2} stream: block l digit j0 sits at exponent
    // l*delta + j0; within each parity class of l the exponent ranges are
    // disjoint, so every exponent receives at most two digits.
    let max_exp = (num_blocks - 1) * delta + width - 1;
    let stream_len = max_exp + 1;
    let mut stream_polys = vec![SparsePolynomial::zero(nv); stream_len];
    for (l, per_digit) in digit_polys.iter().enumerate() {
        for (j0, dp) in per_digit.iter().enumerate() {
            let exp = l * delta + j0;
            stream_polys[exp] = stream_polys[exp].add(dp);
        }
    }

    // Automaton composition over the stream.
    let (alpha_poly, alpha_abs_poly) = dfa_window_interpolants();
    let zero = SparsePolynomial::zero(nv);
    let getp = |i: i64| -> &SparsePolynomial {
        // stream index i corresponds to exponent i-1
        if i >= 1 && i <= stream_len as i64 {
            &stream_polys[(i - 1) as usize]
        } else {
            &zero
        }
    };
    let mut num = SparsePolynomial::one(nv);
    let mut den = SparsePolynomial::one(nv);
    let mut w = m_param.clone();
    for i in 0..=stream_len as i64 {
        let args = [getp(i + 2).clone(), getp(i + 1).clone(), getp(i).clone()];
        num = num.add(&alpha_poly.compose(&args).reduce_on_grid(&cube).scale(&w));
        den = den.add(&alpha_abs_poly.compose(&args).reduce_on_grid(&cube).scale(&w));
        w *= m_param;
    }
    let degree_bound = (64 * k * delta + 1) as i64;
    if num.total_degree() > degree_bound || den.total_degree() > degree_bound {
        return Err(Error::Inconsistency("degree bound exceeded".into()));
    }

    // Exhaustive sign agreement via the integer stream formula, which the
    // reduced polynomials match pointwise on the cube.
    let mut worst = Rat::zero();
    for (x, v) in f.iter() {
        let xi: Vec<i64> = x
            .iter()
            .map(|c| if c.is_positive() { 1 } else { -1 })
            .collect();
        let mut stream = vec![0i64; stream_len];
        for l in 0..num_blocks {
            let digits = balanced_digits(local_sum(l, &xi), width);
            for (j0, &d) in digits.iter().enumerate() {
                stream[l * delta + j0] += d;
            }
        }
        debug_assert!(stream.iter().all(|z| z.abs() <= 2));
        let val = dfa_value(&stream, m_param);
        if crate::rat::sign(&val) != v as i32 {
            return Err(Error::VerificationFailed(format!("sign mismatch at {x:?}")));
        }
        let e = (rat(v as i64) - val).abs();
        if e > worst {
            worst = e;
        }
    }
    Ok(RationalApproximant {
        degree: num.total_degree().max(den.total_degree()),
        numer: num,
        denom: den,
        verified_error: worst,
        denominator_positive: true,
    })
}

// ---------------------------------------------------------------------------
// Sign function on ±{1..n}: geometric-node upper construction
// ---------------------------------------------------------------------------

/// High-degree upper construction for sign on {±1,...,±n}: with k = floor(d/2)
/// and geometric nodes k Delta^i, Delta = (n/k)^(1/k) (dyadic floor),
/// p(t) = prod (t+i) prod (t + k Delta^i), and the approximant is
/// ((A^2-1)/(A^2+1)) (p(t)-p(-t))/(p(t)+p(-t)) where A is the exact minimum of
/// p(t)/|p(-t)| over the positive grid; the error is then at most 2A/(A^2+1).
/// For d >= n the exact interpolant p(t) = prod (t+i) gives error zero.
pub fn maj_univariate_upper(n: u64, d: i64, frac_bits: u32) -> Result<UnivariateApproximant> {
    let grid = integer_sign_grid(n);
    if d >= n as i64 {
        let roots: Vec<Rat> = (1..=n as i64).map(|i| rat(-i)).collect();
        let p = UnivariatePolynomial::from_roots(&roots);
        let p_neg = p.reflect();
        let mut func = UnivariateRational::new(p.sub(&p_neg), p.add(&p_neg));
        func.verify_denominator_positive(&grid)?;
        let err = func.sign_error_on(&grid)?;
        if !err.is_zero() {
            return Err(Error::Inconsistency("interpolant not exact".into()));
        }
        return Ok(UnivariateApproximant {
            func,
            grid,
            verified_error: err,
            surrogate_slack: Rat::zero(),
        });
    }
    // needs d > log n so that A > 1; checked a posteriori through A
    let k = (d / 2).max(1) as u32;
    let ratio_nk = ratio(n as i64, k as i64);
    let (delta_lo, delta_hi) = pow_frac_bounds(&ratio_nk, 1, k, frac_bits);
    let slack = &delta_hi - &delta_lo;
    let mut roots: Vec<Rat> = (1..=k as i64).map(|i| rat(-i)).collect();
    for i in 1..=k {
        roots.push(-(rat(k as i64) * rat_pow(&delta_lo, i)));
    }
    let p = UnivariatePolynomial::from_roots(&roots);
    let p_neg = p.reflect();
    // A = min over positive grid points with p(-t) != 0 of p(t)/|p(-t)|
    let mut a_min: Option<Rat> = None;
    for t in 1..=n as i64 {
        let pt = p.eval(&rat(t));
        let pn = p.eval(&rat(-t));
        if pn.is_zero() {
            continue;
        }
        let r = &pt / pn.abs();
        if a_min.as_ref().map_or(true, |cur| r < *cur) {
            a_min = Some(r);
        }
    }
    let a = a_min.ok_or_else(|| Error::Inconsistency("no balance constraint".into()))?;
    if a <= Rat::one() {
        return Err(Error::Precision(format!(
            "balance ratio A = {} not above 1; construction needs d > log n",
            format_rat(&a)
        )));
    }
    let a2 = &a * &a;
    let prefactor = (&a2 - Rat::one()) / (&a2 + Rat::one());
    let mut func = UnivariateRational::new(p.sub(&p_neg).scale(&prefactor), p.add(&p_neg));
    func.verify_denominator_positive(&grid)?;
    let err = func.sign_error_on(&grid)?;
    let bound = rat(2) * &a / (&a2 + Rat::one());
    if err > bound {
        return Err(Error::Inconsistency(
            "verified error exceeds the balance bound 2A/(A^2+1)".into(),
        ));
    }
    Ok(UnivariateApproximant {
        func,
        grid,
        verified_error: err,
        surrogate_slack: slack,
    })
}

// ---------------------------------------------------------------------------
// Majority <-> univariate sign transfer
// ---------------------------------------------------------------------------

/// Lifts a sign approximant on {±1..±ceil(n/2)} to a majority approximant via
/// the corrective map A_delta(t) = (t^2 p(t) - delta)/(t^2 q(t) + delta),
/// which pins A_delta(0) = -1 exactly; delta is decreased until the grid error
/// is within `slack` of the input's. Degree grows by at most 2.
pub fn maj_from_univariate(
    a: &UnivariateApproximant,
    n: usize,
    slack: &Rat,
) -> Result<RationalApproximant> {
    if !slack.is_positive() {
        return Err(Error::Precondition("slack must be positive".into()));
    }
    let needed = (n as i64 + 1) / 2;
    for t in 1..=needed {
        for s in [rat(t), rat(-t)] {
            if !a.grid.contains(&s) {
                return Err(Error::Precondition(format!(
                    "input approximant not verified at t = {}",
                    format_rat(&s)
                )));
            }
        }
    }
    if a.func.positivity_domain.is_none() {
        return Err(Error::Precondition(
            "input denominator positivity not verified".into(),
        ));
    }
    let t2 = UnivariatePolynomial::new(vec![Rat::zero(), Rat::zero(), Rat::one()]);
    let t2p = t2.mul(&a.func.numer);
    let t2q = t2.mul(&a.func.denom);
    let target = &a.verified_error + slack;
    let offset = n as i64 - 2 * ((n / 2) as i64); // 0 for even n, 1 for odd
    let mut delta = ratio(1, 2);
    for _ in 0..10_000 {
        let num_u = t2p.sub(&UnivariatePolynomial::constant(delta.clone()));
        let den_u = t2q.add(&UnivariatePolynomial::constant(delta.clone()));
        // exact check over the finitely many sum levels
        let mut worst = Rat::zero();
        let mut positive = true;
        for ones in 0..=n {
            let s = 2 * ones as i64 - n as i64;
            let t = ratio(s + offset, 2);
            let dv = den_u.eval(&t);
            if !dv.is_positive() {
                positive = false;
                break;
            }
            let maj = if s > 0 { rat(1) } else { rat(-1) };
            let e = (maj - num_u.eval(&t) / dv).abs();
            if e > worst {
                worst = e;
            }
        }
        if positive && worst <= target {
            // substitute t = (sum x + n - 2 floor(n/2))/2
            let mut lin = SparsePolynomial::constant(n, ratio(offset, 2));
            for i in 0..n {
                lin = lin.add(&SparsePolynomial::var(n, i).scale(&ratio(1, 2)));
            }
            let cube: Vec<Vec<Rat>> = (0..n).map(|_| vec![rat(-1), rat(1)]).collect();
            let numer = num_u.compose_sparse(&lin).reduce_on_grid(&cube);
            let denom = den_u.compose_sparse(&lin).reduce_on_grid(&cube);
            let f = crate::boolfun::make_named(
                &crate::boolfun::Family::Majority { n },
                crate::boolfun::DomainCap::default(),
            )?;
            let out = RationalApproximant::verified(&f, numer, denom)?;
            if out.verified_error != worst {
                return Err(Error::Inconsistency(
                    "level error does not match cube error".into(),
                ));
            }
            if out.degree > a.func.degree() + 2 {
                return Err(Error::Inconsistency("degree bound exceeded".into()));
            }
            return Ok(out);
        }
        delta /= rat(2);
    }
    Err(Error::Precision(
        "delta selection failed at the requested slack".into(),
    ))
}

/// Symmetrizes a majority approximant into a univariate sign approximant on
/// {±1..±floor(n/2)}: orbit-average numerator and denominator per coordinate
/// sum, interpolate in the sum, and substitute u = 2t + n - 2 floor(n/2).
pub fn univariate_from_maj(b: &RationalApproximant, n: usize) -> Result<UnivariateApproximant> {
    let half = (n / 2) as i64;
    if half == 0 {
        return Err(Error::Precondition("need n >= 2".into()));
    }
    if !b.denominator_positive {
        return Err(Error::Precondition(
            "input denominator must be positive".into(),
        ));
    }
    let avg_per_sum = |p: &SparsePolynomial| -> Result<UnivariatePolynomial> {
        let mut nodes = Vec::new();
        for ones in 0..=n {
            let s = 2 * ones as i64 - n as i64;
            let mut total = Rat::zero();
            let mut count = 0i64;
            for mask in 0..(1u32 << n) {
                if mask.count_ones() as usize != ones {
                    continue;
                }
                let x: Vec<Rat> = (0..n)
                    .map(|i| if mask >> i & 1 == 1 { rat(1) } else { rat(-1) })
                    .collect();
                total += p.eval(&x)?;
                count += 1;
            }
            nodes.push((rat(s), total / rat(count)));
        }
        let q = UnivariatePolynomial::interpolate(&nodes);
        if q.degree() > p.total_degree() {
            return Err(Error::Inconsistency(
                "symmetrization increased degree".into(),
            ));
        }
        Ok(q)
    };
    let p_sym = avg_per_sum(&b.numer)?;
    let q_sym = avg_per_sum(&b.denom)?;
    // u = 2t + (n - 2 floor(n/2))
    let shift = rat(n as i64 - 2 * half);
    let p_t = p_sym.compose_affine(&rat(2), &shift);
    let q_t = q_sym.compose_affine(&rat(2), &shift);
    let grid = integer_sign_grid(half as u64);
    let mut func = UnivariateRational::new(p_t, q_t);
    func.verify_denominator_positive(&grid)?;
    let err = func.sign_error_on(&grid)?;
    Ok(UnivariateApproximant {
        func,
        grid,
        verified_error: err,
        surrogate_slack: Rat::zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::{make_named, DomainCap, Family};
    use crate::rat::{root_ceil, sign};

    #[test]
    fn newman_k1_n4() {
        // k=1, N=4: the root surrogate is exactly 2, p(t) = t+2, S(t) = t/4
        let grid = integer_sign_grid(4);
        let a = newman(&rat(4), 1, &grid, 64).unwrap();
        assert_eq!(a.verified_error, ratio(3, 4)); // at t = 1: 1 - 1/4
        assert_eq!(a.func.eval(&rat(1)).unwrap(), ratio(1, 4));
        assert_eq!(a.func.eval(&rat(4)).unwrap(), rat(1));
        assert!(a.surrogate_slack.is_zero());
    }

    #[test]
    fn newman_bounds_various() {
        for (n, k) in [(4u64, 1u32), (9, 2), (100, 3)] {
            let grid = integer_sign_grid(n);
            let a = newman(&rat(n as i64), k, &grid, 64).unwrap();
            // the exact bound check ran inside newman
            assert!(a.verified_error < rat(1), "N={n} k={k}");
        }
    }

    #[test]
    fn newman_balance_inequality() {
        // p(t) >= ((nu+1)/(nu-1)) |p(-t)| on integer t in [1, N], with the
        // factor taken at the conservative upper surrogate of nu = N^(1/(2k)).
        for (n, k) in [(4u64, 1u32), (9, 2), (100, 3)] {
            let mut roots = Vec::new();
            for i in 1..=k {
                roots.push(-pow_frac_bounds(&rat(n as i64), 2 * i - 1, 2 * k, 64).0);
            }
            let p = UnivariatePolynomial::from_roots(&roots);
            let nu_up = root_ceil(&rat(n as i64), 2 * k, 64);
            let factor = (&nu_up + Rat::one()) / (&nu_up - Rat::one());
            for t in 1..=n as i64 {
                let lhs = p.eval(&rat(t));
                let rhs = &factor * p.eval(&rat(-t)).abs();
                assert!(lhs >= rhs, "N={n} k={k} t={t}");
            }
        }
    }

    #[test]
    fn or_family() {
        let a = or_family_approximant(1, &rat(1)).unwrap();
        // at x=0 value 1 (error 0), at x=1 value 0 (error 1)
        assert_eq!(a.eval(&[rat(0)]).unwrap(), rat(1));
        assert_eq!(a.eval(&[rat(1)]).unwrap(), rat(0));
        assert_eq!(a.verified_error, rat(1));
        let a = or_family_approximant(2, &rat(1000)).unwrap();
        assert!(a.verified_error < ratio(3, 1000));
        assert!(a.denominator_positive);
    }

    #[test]
    fn error_boost_on_scaled_sign() {
        // A(x) = x/2 on {±1} has error exactly 1/2
        let f = make_named(&Family::Majority { n: 1 }, DomainCap::default()).unwrap();
        let half_x = SparsePolynomial::var(1, 0).scale(&ratio(1, 2));
        let a = RationalApproximant::verified(&f, half_x, SparsePolynomial::one(1)).unwrap();
        assert_eq!(a.verified_error, ratio(1, 2));
        // k = 1: bound 1 - 1/3 = 2/3
        let b1 = error_boost(&f, &a, 1, 64).unwrap();
        assert!(b1.verified_error <= ratio(2, 3));
        assert!(b1.degree <= a.degree);
        // k = 2: bound 1 - (1/3)^(1/2) ~ 0.42, certified inside
        let b2 = error_boost(&f, &a, 2, 64).unwrap();
        assert!(b2.degree <= 2 * a.degree);
        // exact error on MAJ_3 for a k=1 boost of its scaled approximant
        let f3 = make_named(&Family::Majority { n: 3 }, DomainCap::default()).unwrap();
        let mut t = SparsePolynomial::zero(3);
        for i in 0..3 {
            t = t.add(&SparsePolynomial::var(3, i));
        }
        // 4t/(t^2+3) is exact; scale numerator by 1/2 to get error 1/2
        let num = t.scale(&rat(2));
        let den = t.mul(&t).add(&SparsePolynomial::constant(3, rat(3)));
        let a3 = RationalApproximant::verified(&f3, num, den).unwrap();
        assert_eq!(a3.verified_error, ratio(1, 2));
        let b3 = error_boost(&f3, &a3, 1, 64).unwrap();
        assert!(b3.verified_error <= ratio(2, 3));
    }

    #[test]
    fn accuracy_boost_examples() {
        // eps = 3/5 has an exact square root: bound (3/5 / (1 + 4/5))^2 = 1/9
        let f = make_named(&Family::Majority { n: 1 }, DomainCap::default()).unwrap();
        let scaled = SparsePolynomial::var(1, 0).scale(&ratio(2, 5));
        let a = RationalApproximant::verified(&f, scaled, SparsePolynomial::one(1)).unwrap();
        assert_eq!(a.verified_error, ratio(3, 5));
        let b = accuracy_boost(&f, &a, 64).unwrap();
        assert!(b.verified_error <= ratio(1, 9));
        // two applications from eps = 1/2: error <= (1/2)^4 = 1/16
        let half = SparsePolynomial::var(1, 0).scale(&ratio(1, 2));
        let a = RationalApproximant::verified(&f, half, SparsePolynomial::one(1)).unwrap();
        let b = accuracy_boost(&f, &a, 64).unwrap();
        let c = accuracy_boost(&f, &b, 64).unwrap();
        assert!(c.verified_error <= ratio(1, 16));
        // eps = 0 returns the input unchanged
        let exact = RationalApproximant::verified(
            &f,
            SparsePolynomial::var(1, 0),
            SparsePolynomial::one(1),
        )
        .unwrap();
        let same = accuracy_boost(&f, &exact, 64).unwrap();
        assert!(same.verified_error.is_zero());
    }

    #[test]
    fn bracket_on_or_and_parity() {
        // OR_2 at degree 1: R+ = 0 as an infimum; upper shrinks toward 0
        let f = make_named(&Family::Or { n: 2 }, DomainCap::default()).unwrap();
        let b = rational_error_bracket(&f, 1, &ratio(1, 32)).unwrap();
        verify_bracket(&f, &b).unwrap();
        assert!(b.lower.is_zero());
        assert!(b.upper <= ratio(1, 16));
        // PARITY_2 at degree 1: lower certified > 0 by Farkas
        let f = make_named(&Family::Parity { n: 2 }, DomainCap::default()).unwrap();
        let b = rational_error_bracket(&f, 1, &ratio(1, 8)).unwrap();
        verify_bracket(&f, &b).unwrap();
        assert!(b.lower > rat(0));
        // MAJ_3 at degree 2, eps = 0 feasible via 4t/(t^2+3): bracket [0,0]
        let f = make_named(&Family::Majority { n: 3 }, DomainCap::default()).unwrap();
        let b = rational_error_bracket(&f, 2, &ratio(1, 64)).unwrap();
        verify_bracket(&f, &b).unwrap();
        assert_eq!((b.lower, b.upper), (rat(0), rat(0)));
    }

    #[test]
    fn bracket_monotone_in_degree() {
        let f = sign_function_on(&integer_sign_grid(6)).unwrap();
        let mut prev_upper: Option<Rat> = None;
        for d in 1..=3 {
            let b = rational_error_bracket(&f, d, &ratio(1, 16)).unwrap();
            assert!(b.lower <= b.upper);
            if let Some(pu) = prev_upper {
                assert!(b.upper <= pu);
            }
            prev_upper = Some(b.upper);
        }
    }

    #[test]
    fn trivial_approx_equivalence_exhaustive() {
        // threshold_degree(f) <= d  <=>  R+(f, d) < 1, for every function on
        // the 2-cube and d in {0,1,2}; at these sizes the feasible side is
        // bounded well away from 1, so precision 1/8 separates the cases.
        let cube = make_named(&Family::Parity { n: 2 }, DomainCap::default()).unwrap();
        let points = cube.points().to_vec();
        for mask in 0..16u32 {
            let values: Vec<i8> = (0..4)
                .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
                .collect();
            let f = BooleanFunction::new("enum", points.clone(), values).unwrap();
            let dt = crate::degrees::threshold_degree(&f).unwrap().value;
            for d in 0..=2i64 {
                let b = rational_error_bracket(&f, d, &ratio(1, 8)).unwrap();
                if dt <= d {
                    assert!(b.upper < rat(1), "mask {mask} d {d}");
                } else {
                    assert_eq!(b.upper, rat(1), "mask {mask} d {d}");
                    assert!(b.lower > rat(0));
                }
            }
        }
    }

    #[test]
    fn square_denominator_invariant() {
        // A(t) = t^2/t^3 = 1/t on ±{1,2} has a sign-changing denominator and
        // error 1/2; squaring the denominator preserves the values (hence the
        // error) within twice the degree.
        let f = sign_function_on(&integer_sign_grid(2)).unwrap();
        let t2 = SparsePolynomial::monomial(1, vec![2], rat(1));
        let t3 = SparsePolynomial::monomial(1, vec![3], rat(1));
        let sq = square_denominator(&f, &t2, &t3).unwrap();
        assert!(sq.denominator_positive);
        assert_eq!(sq.verified_error, ratio(1, 2));
        assert!(sq.degree <= 2 * 3);
        for t in [rat(1), rat(2), rat(-1), rat(-2)] {
            let orig = t2.eval(&[t.clone()]).unwrap() / t3.eval(&[t.clone()]).unwrap();
            assert_eq!(sq.eval(&[t]).unwrap(), orig);
        }
    }

    #[test]
    fn dfa_alpha_matches_sign_exhaustively_small() {
        fn rec(stream: &mut Vec<i64>, i: usize, n: usize) {
            if i == n {
                let mut total: i128 = 0;
                for (j, &z) in stream.iter().enumerate() {
                    total += (z as i128) << (j + 1);
                }
                assert_eq!(dfa_sign(stream), total.signum() as i64, "{stream:?}");
                return;
            }
            for z in -2..=2 {
                stream[i] = z;
                rec(stream, i + 1, n);
            }
            stream[i] = 0;
        }
        for n in 1..=5usize {
            let mut stream = vec![0i64; n];
            rec(&mut stream, 0, n);
        }
    }

    #[test]
    fn dfa_window_polynomials_match_alpha() {
        let (ap, aap) = dfa_window_interpolants();
        assert!(ap.total_degree() <= 12);
        assert!(aap.total_degree() <= 12);
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                for c in -2..=2i64 {
                    let x = [rat(a), rat(b), rat(c)];
                    assert_eq!(ap.eval(&x).unwrap(), rat(dfa_alpha(a, b, c)));
                    assert_eq!(aap.eval(&x).unwrap(), rat(dfa_alpha(a, b, c).abs()));
                }
            }
        }
    }

    #[test]
    fn dfa_approximant_small_n() {
        // n = 2: polynomial evaluation agrees with the stream formula on the
        // whole grid, and signs match the target sign(1 + 2 z1 + 4 z2)
        let a = dfa_halfspace_approximant(2, &rat(3)).unwrap();
        assert!(a.degree <= 64);
        for z1 in -2..=2i64 {
            for z2 in -2..=2i64 {
                let x = [rat(z1), rat(z2)];
                let poly_val = a.eval(&x).unwrap();
                let formula = dfa_value(&[z1, z2], &rat(3));
                assert_eq!(poly_val, formula);
                let target = 1 + 2 * z1 + 4 * z2;
                assert_eq!(sign(&poly_val), target.signum() as i32);
            }
        }
        // spot checks: z = (1, -1) targets sign(2 - 4) < 0; z = 0 targets +
        assert_eq!(dfa_sign(&[1, -1]), -1);
        assert_eq!(dfa_sign(&[0, 0]), 0);
    }

    #[test]
    fn dfa_below_threshold_rejected() {
        let err = dfa_halfspace_approximant(2, &ratio(3, 2));
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn balanced_digit_roundtrip() {
        for s in -15i64..=15 {
            let d = balanced_digits(s, 4);
            let back: i64 = d.iter().enumerate().map(|(j, &z)| (1 << j) * z).sum();
            assert_eq!(back, s);
            assert!(d.iter().all(|z| z.abs() <= 1));
        }
    }

    #[test]
    fn canonical_halfspace_exact_small() {
        let cap = DomainCap::default();
        // k = 1 degenerates to the top variable
        let a = canonical_halfspace_zero_error(2, 1, &rat(2), cap).unwrap();
        assert!(a.verified_error.is_zero());
        assert_eq!(a.degree, 1);
        // n = 2, k = 2: exhaustive sign agreement on 16 points
        let a = canonical_halfspace_zero_error(2, 2, &rat(4), cap).unwrap();
        assert!(a.denominator_positive);
        assert!(a.degree <= 64 * 2 + 1);
        let f = make_named(&Family::CanonicalHalfspace { n: 2, k: 2 }, cap).unwrap();
        for (x, v) in f.iter() {
            let val = a.eval(x).unwrap();
            assert_eq!(sign(&val), v as i32, "at {x:?}");
        }
        // n = 3, k = 2: degree bound 64*2*1 + 1 respected
        let a = canonical_halfspace_zero_error(3, 2, &rat(4), cap).unwrap();
        assert!(a.degree <= 129);
    }

    #[test]
    fn maj_upper_exact_interpolant() {
        // d = n: error 0; for n = 2 the ratio reduces to 3t/(t^2+2)
        let a = maj_univariate_upper(2, 2, 64).unwrap();
        assert!(a.verified_error.is_zero());
        assert_eq!(a.func.eval(&rat(1)).unwrap(), rat(1));
        assert_eq!(a.func.eval(&rat(-2)).unwrap(), rat(-1));
        // p = (t+1)(t+2): numerator p - p(-t) = 6t, denominator 2t^2 + 4
        assert_eq!(a.func.numer.eval(&rat(1)), rat(6));
        assert_eq!(a.func.denom.eval(&rat(1)), rat(6));
    }

    #[test]
    fn maj_upper_high_degree() {
        let a = maj_univariate_upper(8, 4, 64).unwrap();
        assert!(a.verified_error < rat(1));
        // weakly decreasing over a degree sweep at n = 16
        let mut prev: Option<Rat> = None;
        for d in [4i64, 6, 8, 10] {
            let a = maj_univariate_upper(16, d, 64).unwrap();
            if let Some(p) = prev {
                assert!(a.verified_error <= p, "d = {d}");
            }
            prev = Some(a.verified_error);
        }
    }

    #[test]
    fn maj_from_univariate_and_back() {
        // A(t) = t is exact on ±{1,2}; lift to MAJ_3 within slack 1/8
        let grid = integer_sign_grid(2);
        let mut func = UnivariateRational::new(
            UnivariatePolynomial::x(),
            UnivariatePolynomial::constant(rat(1)),
        );
        func.verify_denominator_positive(&grid).unwrap();
        let err = func.sign_error_on(&grid).unwrap();
        let a = UnivariateApproximant {
            func,
            grid,
            verified_error: err,
            surrogate_slack: rat(0),
        };
        let lifted = maj_from_univariate(&a, 3, &ratio(1, 8)).unwrap();
        assert!(lifted.verified_error <= &a.verified_error + ratio(1, 8));
        // the corrective map pins the tie-adjacent level: at sum = -1, t = 0
        let x = [rat(-1), rat(-1), rat(1)];
        assert_eq!(lifted.eval(&x).unwrap(), rat(-1));
        // round-trip: symmetrize back to the ±1 grid
        let back = univariate_from_maj(&lifted, 3).unwrap();
        assert!(back.verified_error <= &lifted.verified_error + ratio(1, 1000));
    }
}
