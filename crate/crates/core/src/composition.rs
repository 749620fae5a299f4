//! Composition machinery: conjunction sign-representations from rational
//! approximants, composed dual witnesses for direct-product lower bounds,
//! robust polynomial composition, combinatorial measures, AND-reducibility,
//! and amplification from two to k conjuncts.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::boolfun::{compose, conjunction, BooleanFunction, CompositionSpec, DomainCap, Family};
use crate::degrees::{eval_monomial, monomial_basis, threshold_degree, DualWitness, WitnessKind};
use crate::poly::SparsePolynomial;
use crate::rat::{format_rat, rat, rat_pow, ratio, Rat};
use crate::rational::{error_boost, rational_error_bracket, ErrorBracket, RationalApproximant};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Combinatorial measures
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct CombinatorialProfile {
    pub certificate_complexity: usize,
    pub block_sensitivity: usize,
    /// Per domain point: a minimum-size index set whose values force F.
    pub per_point_certificates: Vec<Vec<usize>>,
}

/// Exact certificate complexity and block sensitivity by brute force.
pub fn combinatorial_profile(f: &BooleanFunction) -> Result<CombinatorialProfile> {
    if !f.is_cube() {
        return Err(Error::Precondition("profile needs a cube function".into()));
    }
    let k = f.num_vars();
    if k > 20 {
        return Err(Error::DomainCap {
            points: 1 << k,
            cap: 1 << 20,
        });
    }
    let values = f.values();
    let m = values.len();
    let coord_positive: Vec<Vec<bool>> = f
        .points()
        .iter()
        .map(|p| p.iter().map(|c| c.is_positive()).collect())
        .collect();
    let index_of = |bits: &[bool]| -> usize {
        coord_positive
            .iter()
            .position(|c| c == bits)
            .expect("cube point")
    };

    let mut certs = Vec::with_capacity(m);
    let mut cmax = 0usize;
    for (xi, bits) in coord_positive.iter().enumerate() {
        let mut found: Option<Vec<usize>> = None;
        'sizes: for s in 0..=k {
            for subset in (0..k).combinations(s) {
                let mut forced = true;
                for (yi, ybits) in coord_positive.iter().enumerate() {
                    if subset.iter().all(|&j| ybits[j] == bits[j]) && values[yi] != values[xi] {
                        forced = false;
                        break;
                    }
                }
                if forced {
                    found = Some(subset);
                    break 'sizes;
                }
            }
        }
        let s = found.expect("full fixing always forces");
        cmax = cmax.max(s.len());
        certs.push(s);
    }

    // block sensitivity: max number of disjoint flip sets changing the value
    let mut bs = 0usize;
    for (xi, bits) in coord_positive.iter().enumerate() {
        let mut sensitive: Vec<u32> = Vec::new();
        for mask in 1u32..(1 << k) {
            let mut flipped = bits.clone();
            for (j, fl) in flipped.iter_mut().enumerate() {
                if mask >> j & 1 == 1 {
                    *fl = !*fl;
                }
            }
            if values[index_of(&flipped)] != values[xi] {
                sensitive.push(mask);
            }
        }
        bs = bs.max(max_disjoint(&sensitive, 0, 0));
    }
    if bs > cmax {
        return Err(Error::Inconsistency(
            "block sensitivity exceeded certificate complexity".into(),
        ));
    }
    Ok(CombinatorialProfile {
        certificate_complexity: cmax,
        block_sensitivity: bs,
        per_point_certificates: certs,
    })
}

fn max_disjoint(masks: &[u32], start: usize, used: u32) -> usize {
    let mut best = 0;
    for i in start..masks.len() {
        if masks[i] & used == 0 {
            best = best.max(1 + max_disjoint(masks, i + 1, used | masks[i]));
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Conjunction sign-representation from rational approximants
// ---------------------------------------------------------------------------

/// Clears denominators in sign(k-1 + sum p_i/q_i): the polynomial
/// (k-1) prod q_i + sum_i p_i prod_{j != i} q_j sign-represents the
/// conjunction of the f_i whenever each q_i is positive and the approximation
/// errors sum to less than 1. Verified exhaustively on the product domain.
pub fn brs_conjunction(
    fs: &[BooleanFunction],
    approximants: &[RationalApproximant],
    cap: DomainCap,
) -> Result<SparsePolynomial> {
    if fs.is_empty() || fs.len() != approximants.len() {
        return Err(Error::Precondition(
            "need matching nonempty function/approximant lists".into(),
        ));
    }
    let err_sum: Rat = approximants.iter().map(|a| a.verified_error.clone()).sum();
    if err_sum >= Rat::one() {
        return Err(Error::Precondition(format!(
            "error sum {} is not below 1",
            format_rat(&err_sum)
        )));
    }
    if approximants.iter().any(|a| !a.denominator_positive) {
        return Err(Error::Precondition(
            "every denominator must be verified positive".into(),
        ));
    }
    let k = fs.len();
    let total_vars: usize = fs.iter().map(|f| f.num_vars()).sum();
    let mut offsets = Vec::with_capacity(k);
    let mut off = 0;
    for f in fs {
        offsets.push(off);
        off += f.num_vars();
    }
    let shifted: Vec<(SparsePolynomial, SparsePolynomial)> = approximants
        .iter()
        .zip(offsets.iter())
        .map(|(a, &o)| {
            (
                a.numer.shift_vars(o, total_vars),
                a.denom.shift_vars(o, total_vars),
            )
        })
        .collect();
    let mut poly = shifted
        .iter()
        .fold(SparsePolynomial::one(total_vars), |acc, (_, q)| acc.mul(q))
        .scale(&rat(k as i64 - 1));
    for i in 0..k {
        let mut term = shifted[i].0.clone();
        for (j, (_, q)) in shifted.iter().enumerate() {
            if j != i {
                term = term.mul(q);
            }
        }
        poly = poly.add(&term);
    }
    // exhaustive sign verification against the conjunction
    let and_k = crate::boolfun::make_named(&Family::And { n: k }, cap)?;
    let spec = CompositionSpec::new(and_k, fs.to_vec())?;
    let target = compose(&spec, cap)?;
    for (x, v) in target.iter() {
        let pv = poly.eval(x)?;
        if crate::rat::sign(&pv) != v as i32 {
            return Err(Error::VerificationFailed(format!(
                "conjunction sign representation fails at {x:?}"
            )));
        }
    }
    Ok(poly)
}

/// Reduces sign-representing a k-fold conjunction of f to the 2-fold case:
/// boosts an error-<1/2 approximant until the errors of k copies sum below 1,
/// then clears denominators.
pub fn two_to_k_amplify(
    f: &BooleanFunction,
    a2: &RationalApproximant,
    k: usize,
    frac_bits: u32,
    cap: DomainCap,
) -> Result<SparsePolynomial> {
    if a2.verified_error >= ratio(1, 2) {
        return Err(Error::Precondition(
            "amplification needs an approximant with error below 1/2".into(),
        ));
    }
    if k < 2 {
        return Err(Error::Precondition("k >= 2".into()));
    }
    let fs = vec![f.clone(); k];
    if k == 2 {
        return brs_conjunction(&fs, &[a2.clone(), a2.clone()], cap);
    }
    if a2.verified_error.is_zero() {
        return brs_conjunction(&fs, &vec![a2.clone(); k], cap);
    }
    // smallest boost order k' with 1 - ((1-eps)/(1+eps))^(1/k') < 1/k,
    // i.e. N ((k-1)/k)^{k'} < 1 for N = (1+eps)/(1-eps)
    let eps = &a2.verified_error;
    let n_param = (Rat::one() + eps) / (Rat::one() - eps);
    let shrink = ratio(k as i64 - 1, k as i64);
    let mut order = 1u32;
    while &n_param * rat_pow(&shrink, order) >= Rat::one() {
        order += 1;
        if order > 64 {
            return Err(Error::Inconsistency("boost order runaway".into()));
        }
    }
    let mut boosted = error_boost(f, a2, order, frac_bits)?;
    while boosted.verified_error >= ratio(1, k as i64) {
        order += 1;
        if order > 64 {
            return Err(Error::Precision("boost failed to reach error 1/k".into()));
        }
        boosted = error_boost(f, a2, order, frac_bits)?;
    }
    let approx = vec![boosted; k];
    brs_conjunction(&fs, &approx, cap)
}

// ---------------------------------------------------------------------------
// Composed dual witnesses (direct product lower bounds)
// ---------------------------------------------------------------------------

/// Signed weighting of a product domain certifying that the composition
/// F(f_1,...,f_k) has no low-degree approximation. All three recorded
/// quantities are re-verified by exact summation, never trusted from
/// construction.
#[derive(Clone, Debug)]
pub struct ComposedWitness {
    pub points: Vec<Vec<Rat>>,
    pub zeta: Vec<Rat>,
    /// Orthogonal to every monomial of total degree < this bound.
    pub claimed_orthogonality: i64,
    pub claimed_correlation_bound: Rat,
    pub l1_mass: Rat,
}

impl ComposedWitness {
    /// Exact re-verification against the composed function.
    pub fn verify(&self, composed: &BooleanFunction) -> Result<()> {
        let l1: Rat = self.zeta.iter().map(|w| w.abs()).sum();
        if l1 != self.l1_mass {
            return Err(Error::VerificationFailed("l1 mass mismatch".into()));
        }
        if !l1.is_one() {
            return Err(Error::VerificationFailed(
                "composed witness must have unit l1 mass".into(),
            ));
        }
        let basis = monomial_basis(composed, self.claimed_orthogonality - 1);
        for e in basis {
            let mut s = Rat::zero();
            for (p, w) in self.points.iter().zip(self.zeta.iter()) {
                s += w * &eval_monomial(&e, p);
            }
            if !s.is_zero() {
                return Err(Error::VerificationFailed(format!(
                    "composed witness not orthogonal to {e:?}"
                )));
            }
        }
        let corr = self.correlation(composed)?;
        if corr < self.claimed_correlation_bound {
            return Err(Error::VerificationFailed(format!(
                "correlation {} below the claimed bound {}",
                format_rat(&corr),
                format_rat(&self.claimed_correlation_bound)
            )));
        }
        Ok(())
    }

    pub fn correlation(&self, composed: &BooleanFunction) -> Result<Rat> {
        let mut corr = Rat::zero();
        for (p, w) in self.points.iter().zip(self.zeta.iter()) {
            let v = composed
                .value_at(p)
                .ok_or_else(|| Error::VerificationFailed("point outside domain".into()))?;
            corr += w * &rat(v as i64);
        }
        Ok(corr)
    }
}

fn cube_lookup(w: &DualWitness) -> impl Fn(&[i8]) -> Option<Rat> + '_ {
    move |bits: &[i8]| {
        let target: Vec<Rat> = bits.iter().map(|&b| rat(b as i64)).collect();
        w.points
            .iter()
            .position(|p| *p == target)
            .map(|i| w.weights[i].clone())
    }
}

/// Composes an approximate-degree dual for F with a threshold-degree (Gordan)
/// dual for f: zeta(x_1..x_k) = 2^k Psi(f(x_1),..,f(x_k)) prod mu(x_i). The
/// result has unit l1 mass, is orthogonal to all monomials of degree < D*d,
/// and correlates with F(f,...,f) exactly as Psi does with F; this certifies
/// the approximate degree of the composition at the product of the degrees.
pub fn compose_witness_threshold(
    psi: &DualWitness,
    outer: &BooleanFunction,
    mu: &DualWitness,
    inner: &BooleanFunction,
    cap: DomainCap,
) -> Result<ComposedWitness> {
    if psi.kind != WitnessKind::ApproxDual {
        return Err(Error::Precondition(
            "outer witness must be ApproxDual".into(),
        ));
    }
    if mu.kind != WitnessKind::GordanDistribution {
        return Err(Error::Precondition(
            "inner witness must be a Gordan distribution".into(),
        ));
    }
    if inner.is_constant().is_some() {
        return Err(Error::Precondition(
            "inner function must be nonconstant".into(),
        ));
    }
    psi.verify(outer)?;
    mu.verify(inner)?;
    let k = outer.num_vars();
    let d_outer = psi.orthogonality_degree + 1;
    let d_inner = mu.orthogonality_degree + 1;

    let spec = CompositionSpec::new(outer.clone(), vec![inner.clone(); k])?;
    let composed = compose(&spec, cap)?;
    let psi_at = cube_lookup(psi);

    let scale = rat_pow(&rat(2), k as u32);
    let mut points = Vec::with_capacity(composed.len());
    let mut zeta = Vec::with_capacity(composed.len());
    let idx: Vec<Vec<usize>> = (0..k).map(|_| (0..inner.len()).collect()).collect();
    for choice in idx.into_iter().multi_cartesian_product() {
        let mut point = Vec::new();
        let mut sign_arg = Vec::with_capacity(k);
        let mut weight = scale.clone();
        for &i in &choice {
            point.extend_from_slice(&inner.points()[i]);
            sign_arg.push(inner.values()[i]);
            weight *= &mu.weights[i];
        }
        let pw = psi_at(&sign_arg)
            .ok_or_else(|| Error::Inconsistency("outer witness missing a cube point".into()))?;
        points.push(point);
        zeta.push(weight * pw);
    }
    let l1: Rat = zeta.iter().map(|w| w.abs()).sum();
    let witness = ComposedWitness {
        points,
        zeta,
        claimed_orthogonality: d_outer * d_inner,
        claimed_correlation_bound: psi.correlation.clone(),
        l1_mass: l1,
    };
    witness.verify(&composed)?;
    // the correlation transfers exactly, not merely as an inequality
    if witness.correlation(&composed)? != psi.correlation {
        return Err(Error::VerificationFailed(
            "composed correlation does not match the outer witness".into(),
        ));
    }
    Ok(witness)
}

/// Composes an approximate-degree dual for F with approximate-degree duals
/// psi_i for the inner functions (each balanced, unit mass, correlation above
/// 1 - delta): zeta = 2^k Psi(Sign psi_i(x_i)) prod |psi_i(x_i)|.
/// Orthogonality holds below the sum of the D smallest inner degrees; the
/// correlation is certified against both the certificate-complexity bound
/// corr(Psi) - 2 + 2(1-delta)^C(F) and the block-sensitivity sharpening
/// corr(Psi) - 4 delta bs(F), whichever is stronger.
pub fn compose_witness_approx(
    psi: &DualWitness,
    outer: &BooleanFunction,
    inners: &[(BooleanFunction, DualWitness)],
    cap: DomainCap,
) -> Result<ComposedWitness> {
    if psi.kind != WitnessKind::ApproxDual {
        return Err(Error::Precondition(
            "outer witness must be ApproxDual".into(),
        ));
    }
    let k = outer.num_vars();
    if inners.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: inners.len(),
        });
    }
    psi.verify(outer)?;
    let mut delta = Rat::zero();
    for (f, w) in inners {
        if w.kind != WitnessKind::ApproxDual {
            return Err(Error::Precondition(
                "inner witnesses must be ApproxDual".into(),
            ));
        }
        w.verify(f)?;
        let total: Rat = w.weights.iter().sum();
        if !total.is_zero() {
            return Err(Error::Precondition(
                "inner witness is not orthogonal to constants".into(),
            ));
        }
        let gap = Rat::one() - &w.correlation;
        if gap > delta {
            delta = gap;
        }
    }
    let profile = combinatorial_profile(outer)?;
    let d_outer = psi.orthogonality_degree + 1;
    let mut inner_degrees: Vec<i64> = inners
        .iter()
        .map(|(_, w)| w.orthogonality_degree + 1)
        .collect();
    inner_degrees.sort();
    let take = (d_outer.max(0) as usize).min(k);
    let claimed: i64 = inner_degrees.iter().take(take).sum();

    let spec = CompositionSpec::new(
        outer.clone(),
        inners.iter().map(|(f, _)| f.clone()).collect(),
    )?;
    let composed = compose(&spec, cap)?;
    let psi_at = cube_lookup(psi);

    let scale = rat_pow(&rat(2), k as u32);
    let mut points = Vec::with_capacity(composed.len());
    let mut zeta = Vec::with_capacity(composed.len());
    let idx: Vec<Vec<usize>> = inners.iter().map(|(f, _)| (0..f.len()).collect()).collect();
    for choice in idx.into_iter().multi_cartesian_product() {
        let mut point = Vec::new();
        let mut sign_arg = Vec::with_capacity(k);
        let mut weight = scale.clone();
        for (slot, &i) in choice.iter().enumerate() {
            let (f, w) = &inners[slot];
            point.extend_from_slice(&f.points()[i]);
            sign_arg.push(if w.weights[i].is_negative() { -1 } else { 1 });
            weight *= w.weights[i].abs();
        }
        let pw = psi_at(&sign_arg)
            .ok_or_else(|| Error::Inconsistency("outer witness missing a cube point".into()))?;
        points.push(point);
        zeta.push(weight * pw);
    }
    let l1: Rat = zeta.iter().map(|w| w.abs()).sum();
    let cert_bound = &psi.correlation - rat(2)
        + rat(2) * rat_pow(&(Rat::one() - &delta), profile.certificate_complexity as u32);
    let bs_bound = &psi.correlation - rat(4) * &delta * rat(profile.block_sensitivity as i64);
    let claimed_corr = cert_bound.max(bs_bound);
    let witness = ComposedWitness {
        points,
        zeta,
        claimed_orthogonality: claimed,
        claimed_correlation_bound: claimed_corr,
        l1_mass: l1,
    };
    witness.verify(&composed)?;
    Ok(witness)
}

// ---------------------------------------------------------------------------
// Robust polynomial composition (upper bound)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct RobustComposition {
    pub phi: SparsePolynomial,
    pub error: Rat,
    /// certificate-complexity bound Delta + 2 - 2(1 - delta/(1+delta))^C
    pub cert_bound: Rat,
    /// block-sensitivity bound Delta + 4 delta bs/(1+delta)
    pub bs_bound: Rat,
}

/// Substitutes damped inner approximations p_i/(1 + ||f_i - p_i||) into a
/// multilinear approximation P of F, yielding an approximation of the
/// composition whose exact error is verified against both combinatorial
/// bounds (the smaller one is asserted).
pub fn robust_compose(
    outer: &BooleanFunction,
    p_outer: &SparsePolynomial,
    inners: &[(BooleanFunction, SparsePolynomial)],
    cap: DomainCap,
) -> Result<RobustComposition> {
    let k = outer.num_vars();
    if inners.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: inners.len(),
        });
    }
    if p_outer.terms().any(|(e, _)| e.iter().any(|&x| x > 1)) {
        return Err(Error::Precondition(
            "outer polynomial must be multilinear".into(),
        ));
    }
    // exact outer and inner uniform errors
    let mut delta_outer = Rat::zero();
    for (x, v) in outer.iter() {
        let e = (rat(v as i64) - p_outer.eval(x)?).abs();
        if e > delta_outer {
            delta_outer = e;
        }
    }
    let mut deltas = Vec::with_capacity(k);
    for (f, p) in inners {
        let mut d = Rat::zero();
        for (x, v) in f.iter() {
            let e = (rat(v as i64) - p.eval(x)?).abs();
            if e > d {
                d = e;
            }
        }
        deltas.push(d);
    }
    let delta = deltas.iter().cloned().fold(Rat::zero(), |a, b| a.max(b));

    let total_vars: usize = inners.iter().map(|(f, _)| f.num_vars()).sum();
    let mut offsets = Vec::with_capacity(k);
    let mut off = 0;
    for (f, _) in inners {
        offsets.push(off);
        off += f.num_vars();
    }
    let damped: Vec<SparsePolynomial> = inners
        .iter()
        .zip(offsets.iter())
        .zip(deltas.iter())
        .map(|(((_, p), &o), d)| {
            p.scale(&(Rat::one() / (Rat::one() + d)))
                .shift_vars(o, total_vars)
        })
        .collect();
    let mut phi = SparsePolynomial::zero(total_vars);
    for (e, c) in p_outer.terms() {
        let mut term = SparsePolynomial::constant(total_vars, c.clone());
        for (i, &exp) in e.iter().enumerate() {
            if exp == 1 {
                term = term.mul(&damped[i]);
            }
        }
        phi = phi.add(&term);
    }

    let spec = CompositionSpec::new(
        outer.clone(),
        inners.iter().map(|(f, _)| f.clone()).collect(),
    )?;
    let composed = compose(&spec, cap)?;
    let mut error = Rat::zero();
    for (x, v) in composed.iter() {
        let e = (rat(v as i64) - phi.eval(x)?).abs();
        if e > error {
            error = e;
        }
    }
    let profile = combinatorial_profile(outer)?;
    let damp = &delta / (Rat::one() + &delta);
    let cert_bound = &delta_outer + rat(2)
        - rat(2) * rat_pow(&(Rat::one() - &damp), profile.certificate_complexity as u32);
    let bs_bound = &delta_outer + rat(4) * &damp * rat(profile.block_sensitivity as i64);
    let tight = cert_bound.clone().min(bs_bound.clone());
    if error > tight {
        return Err(Error::VerificationFailed(format!(
            "robust composition error {} exceeds the bound {}",
            format_rat(&error),
            format_rat(&tight)
        )));
    }
    Ok(RobustComposition {
        phi,
        error,
        cert_bound,
        bs_bound,
    })
}

// ---------------------------------------------------------------------------
// AND-reducibility
// ---------------------------------------------------------------------------

/// The eight two-variable conjunction/disjunction forms, with optional
/// negation of either input. Truth values in the -1 = true convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoVarForm {
    pub is_and: bool,
    pub negate_first: bool,
    pub negate_second: bool,
}

impl TwoVarForm {
    pub fn all() -> Vec<TwoVarForm> {
        let mut out = Vec::new();
        for is_and in [true, false] {
            for negate_first in [false, true] {
                for negate_second in [false, true] {
                    out.push(TwoVarForm {
                        is_and,
                        negate_first,
                        negate_second,
                    });
                }
            }
        }
        out
    }

    pub fn eval(&self, a: i8, b: i8) -> i8 {
        let a = if self.negate_first { -a } else { a };
        let b = if self.negate_second { -b } else { b };
        if self.is_and {
            a.max(b)
        } else {
            a.min(b)
        }
    }
}

#[derive(Clone, Debug)]
pub struct AndReducibility {
    pub reducible: bool,
    /// Per pair i < j: the realized form and the fixed values of the other
    /// variables, when found.
    pub witnesses: Vec<((usize, usize), Option<(TwoVarForm, Vec<i8>)>)>,
}

/// Checks whether every pair of variables of a cube function yields one of
/// the eight AND/OR forms as a subfunction (all other variables fixed).
pub fn and_reducible(f: &BooleanFunction) -> Result<AndReducibility> {
    if !f.is_cube() {
        return Err(Error::Precondition("needs a cube function".into()));
    }
    let k = f.num_vars();
    if k > 16 {
        return Err(Error::DomainCap {
            points: 1 << k,
            cap: 1 << 16,
        });
    }
    let forms = TwoVarForm::all();
    let mut witnesses = Vec::new();
    let mut reducible = true;
    for i in 0..k {
        for j in (i + 1)..k {
            let others: Vec<usize> = (0..k).filter(|&t| t != i && t != j).collect();
            let mut found = None;
            'fix: for fix_mask in 0u32..(1 << others.len()) {
                let mut point: Vec<Rat> = vec![rat(0); k];
                for (t, &var) in others.iter().enumerate() {
                    point[var] = if fix_mask >> t & 1 == 1 {
                        rat(1)
                    } else {
                        rat(-1)
                    };
                }
                for form in &forms {
                    let mut matches = true;
                    for (a, b) in [(-1i8, -1i8), (-1, 1), (1, -1), (1, 1)] {
                        point[i] = rat(a as i64);
                        point[j] = rat(b as i64);
                        let fv = f.value_at(&point).expect("cube point");
                        if fv != form.eval(a, b) {
                            matches = false;
                            break;
                        }
                    }
                    if matches {
                        let fixing: Vec<i8> = (0..others.len())
                            .map(|t| if fix_mask >> t & 1 == 1 { 1 } else { -1 })
                            .collect();
                        found = Some((*form, fixing));
                        break 'fix;
                    }
                }
            }
            if found.is_none() {
                reducible = false;
            }
            witnesses.push(((i, j), found));
        }
    }
    Ok(AndReducibility {
        reducible,
        witnesses,
    })
}

// ---------------------------------------------------------------------------
// Conjunction converse at desk scale
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct MainFiniteReport {
    pub d: i64,
    pub bracket_f: ErrorBracket,
    pub bracket_g: ErrorBracket,
    pub sum_upper: Rat,
    pub holds: bool,
}

/// Converse direction of conjunction sign-representation at desk scale:
/// with d the exact threshold degree of f /\ g, certified upper brackets must
/// satisfy R+(f, 4d) + R+(g, 2d) < 1. The brackets are refined until the sum
/// drops below 1; failure to do so indicates a bug and is reported loudly.
pub fn verify_main_finite(
    f: &BooleanFunction,
    g: &BooleanFunction,
    cap: DomainCap,
) -> Result<MainFiniteReport> {
    if f.is_constant() == Some(1) || g.is_constant() == Some(1) {
        return Err(Error::Precondition(
            "conjuncts must not be identically false".into(),
        ));
    }
    let fg = conjunction(f, g, cap)?;
    let d = threshold_degree(&fg)?.value;
    let mut precision = ratio(1, 16);
    for _ in 0..6 {
        let bracket_f = rational_error_bracket(f, 4 * d, &precision)?;
        let bracket_g = rational_error_bracket(g, 2 * d, &precision)?;
        let sum_upper = &bracket_f.upper + &bracket_g.upper;
        if sum_upper < Rat::one() {
            return Ok(MainFiniteReport {
                d,
                bracket_f,
                bracket_g,
                sum_upper,
                holds: true,
            });
        }
        precision /= rat(4);
    }
    Err(Error::VerificationFailed(
        "bracket uppers failed to certify R+(f,4d) + R+(g,2d) < 1".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::make_named;
    use crate::degrees::{approx_error, gordan_witness};

    fn named(f: Family) -> BooleanFunction {
        make_named(&f, DomainCap::default()).unwrap()
    }

    fn or_cube(n: usize) -> BooleanFunction {
        named(Family::And { n }).negate().reflect()
    }

    #[test]
    fn profiles() {
        let parity3 = named(Family::Parity { n: 3 });
        let p = combinatorial_profile(&parity3).unwrap();
        assert_eq!(p.certificate_complexity, 3);
        assert_eq!(p.block_sensitivity, 3);
        // constants have C = 0
        let c = BooleanFunction::new(
            "const",
            named(Family::Parity { n: 2 }).points().to_vec(),
            vec![1, 1, 1, 1],
        )
        .unwrap();
        let p = combinatorial_profile(&c).unwrap();
        assert_eq!(p.certificate_complexity, 0);
        assert_eq!(p.block_sensitivity, 0);
        // OR_3 has bs = 3 (all-false point, three singleton blocks)
        let p = combinatorial_profile(&or_cube(3)).unwrap();
        assert_eq!(p.block_sensitivity, 3);
        assert_eq!(p.certificate_complexity, 3);
        // AND_2 has C = 2
        let p = combinatorial_profile(&named(Family::And { n: 2 })).unwrap();
        assert_eq!(p.certificate_complexity, 2);
    }

    fn maj3_exact_approximant() -> (BooleanFunction, RationalApproximant) {
        let f = named(Family::Majority { n: 3 });
        let mut t = SparsePolynomial::zero(3);
        for i in 0..3 {
            t = t.add(&SparsePolynomial::var(3, i));
        }
        let num = t.scale(&rat(4));
        let den = t.mul(&t).add(&SparsePolynomial::constant(3, rat(3)));
        let a = RationalApproximant::verified(&f, num, den).unwrap();
        assert!(a.verified_error.is_zero());
        (f, a)
    }

    #[test]
    fn brs_on_majorities() {
        let (f, a) = maj3_exact_approximant();
        let poly = brs_conjunction(
            &[f.clone(), f.clone()],
            &[a.clone(), a.clone()],
            DomainCap::default(),
        )
        .unwrap();
        assert!(poly.total_degree() <= 4);
        // k = 1 degenerates to the numerator
        let single = brs_conjunction(&[f.clone()], &[a.clone()], DomainCap::default()).unwrap();
        assert_eq!(single, a.numer);
        // error-sum precondition
        let bad =
            RationalApproximant::verified(&f, SparsePolynomial::zero(3), SparsePolynomial::one(3))
                .unwrap();
        assert!(
            brs_conjunction(&[f.clone(), f], &[bad.clone(), bad], DomainCap::default()).is_err()
        );
    }

    #[test]
    fn two_to_k_on_maj3() {
        let (f, a) = maj3_exact_approximant();
        // k = 3 with the exact approximant: degree <= 3 * 2, checked on 512 points
        let poly = two_to_k_amplify(&f, &a, 3, 64, DomainCap::default()).unwrap();
        assert!(poly.total_degree() <= 6);
        // k = 2 reduces to the conjunction directly
        let poly2 = two_to_k_amplify(&f, &a, 2, 64, DomainCap::default()).unwrap();
        assert!(poly2.total_degree() <= 4);
    }

    #[test]
    fn composed_witness_parity_squared() {
        // F = f = PARITY_2: outer dual at degree 1 has correlation 1, inner
        // Gordan at degree 1; the composition certifies orthogonality below 4
        let par = named(Family::Parity { n: 2 });
        let psi = approx_error(&par, 1).unwrap().dual.unwrap();
        let mu = gordan_witness(&par, 1).unwrap().unwrap();
        let w = compose_witness_threshold(&psi, &par, &mu, &par, DomainCap::default()).unwrap();
        assert_eq!(w.claimed_orthogonality, 4);
        let spec = CompositionSpec::new(par.clone(), vec![par.clone(), par.clone()]).unwrap();
        let composed = compose(&spec, DomainCap::default()).unwrap();
        assert_eq!(w.correlation(&composed).unwrap(), rat(1));
    }

    #[test]
    fn composed_witness_or_of_majorities() {
        let or2 = or_cube(2);
        let maj = named(Family::Majority { n: 3 });
        let report = approx_error(&or2, 1).unwrap();
        let psi = report.dual.unwrap();
        let mu = gordan_witness(&maj, 0).unwrap().unwrap();
        let w = compose_witness_threshold(&psi, &or2, &mu, &maj, DomainCap::default()).unwrap();
        // D = 2, d = 1: orthogonality below 2 on the 64-point domain
        assert_eq!(w.claimed_orthogonality, 2);
        // constant inner function rejected
        let c = BooleanFunction::new("const", maj.points().to_vec(), vec![1; maj.len()]).unwrap();
        let mu_c = DualWitness {
            kind: WitnessKind::GordanDistribution,
            points: c.points().to_vec(),
            weights: vec![ratio(1, 8); 8],
            orthogonality_degree: -1,
            l1_mass: rat(1),
            correlation: rat(1),
        };
        assert!(compose_witness_threshold(&psi, &or2, &mu_c, &c, DomainCap::default()).is_err());
    }

    #[test]
    fn approx_composition_matches_threshold_in_the_limit() {
        // with psi_i = f_i mu_i from a Gordan witness, Sign psi_i = f_i on the
        // support and the two compositions coincide pointwise
        let par = named(Family::Parity { n: 2 });
        let psi = approx_error(&par, 1).unwrap().dual.unwrap();
        let mu = gordan_witness(&par, 1).unwrap().unwrap();
        let w_thr = compose_witness_threshold(&psi, &par, &mu, &par, DomainCap::default()).unwrap();
        let signed = DualWitness {
            kind: WitnessKind::ApproxDual,
            points: mu.points.clone(),
            weights: mu
                .weights
                .iter()
                .zip(par.values().iter())
                .map(|(w, &v)| w * &rat(v as i64))
                .collect(),
            orthogonality_degree: mu.orthogonality_degree,
            l1_mass: rat(1),
            correlation: rat(1),
        };
        signed.verify(&par).unwrap();
        let w_app = compose_witness_approx(
            &psi,
            &par,
            &[(par.clone(), signed.clone()), (par.clone(), signed)],
            DomainCap::default(),
        )
        .unwrap();
        assert_eq!(w_thr.zeta, w_app.zeta);
        // delta = 0: correlation bound equals the outer correlation
        assert_eq!(w_app.claimed_correlation_bound, psi.correlation);
    }

    #[test]
    fn approx_composition_rejects_unbalanced() {
        let or2 = or_cube(2);
        let psi = approx_error(&or2, 1).unwrap().dual.unwrap();
        let maj = named(Family::Majority { n: 3 });
        // an unbalanced fake witness: all mass on one point
        let mut fake_weights = vec![rat(0); 8];
        fake_weights[0] = rat(1);
        let fake = DualWitness {
            kind: WitnessKind::ApproxDual,
            points: maj.points().to_vec(),
            weights: fake_weights,
            orthogonality_degree: -1,
            l1_mass: rat(1),
            correlation: rat(1),
        };
        let err = compose_witness_approx(
            &psi,
            &or2,
            &[(maj.clone(), fake.clone()), (maj, fake)],
            DomainCap::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn robust_composition_examples() {
        // exact inner polynomials: error <= Delta exactly
        let or2 = or_cube(2);
        let p_or = approx_error(&or2, 2).unwrap().best_poly;
        let maj = named(Family::Majority { n: 3 });
        let p_maj = approx_error(&maj, 3).unwrap().best_poly;
        let rc = robust_compose(
            &or2,
            &p_or,
            &[(maj.clone(), p_maj.clone()), (maj.clone(), p_maj.clone())],
            DomainCap::default(),
        )
        .unwrap();
        assert!(rc.error.is_zero());
        // inner approximants with error exactly 1/3 (scaled exact
        // interpolant): certificate bound 2 - 2(1 - 1/4)^2 = 7/8
        let p_maj_13 = p_maj.scale(&ratio(2, 3));
        let rc = robust_compose(
            &or2,
            &p_or,
            &[
                (maj.clone(), p_maj_13.clone()),
                (maj.clone(), p_maj_13.clone()),
            ],
            DomainCap::default(),
        )
        .unwrap();
        assert_eq!(rc.cert_bound, ratio(7, 8));
        assert!(rc.error <= rc.cert_bound.clone().min(rc.bs_bound.clone()));
        // constant outer: error <= Delta regardless of the inner error
        let c = BooleanFunction::new("const", or2.points().to_vec(), vec![1, 1, 1, 1]).unwrap();
        let rc = robust_compose(
            &c,
            &SparsePolynomial::one(2),
            &[
                (maj.clone(), SparsePolynomial::zero(3)),
                (maj, SparsePolynomial::zero(3)),
            ],
            DomainCap::default(),
        )
        .unwrap();
        assert!(rc.error.is_zero());
    }

    #[test]
    fn certificate_probability_bounds() {
        // For independent per-bit flips y_i = -1 with probability a_i, the
        // agreement probability of F(x) with F(xy) is at least the worst
        // product of (1 - a_i) over any index set of certificate size, and
        // the disagreement probability is at most 2 max(a) bs(F).
        use itertools::Itertools;
        let f = or_cube(2);
        let profile = combinatorial_profile(&f).unwrap();
        let alphas = [rat(0), ratio(1, 4), ratio(1, 2)];
        for a1 in &alphas {
            for a2 in &alphas {
                let a = [a1.clone(), a2.clone()];
                for (xi, (x, v)) in f.iter().enumerate() {
                    let mut agree = Rat::zero();
                    let mut disagree = Rat::zero();
                    for y in (0..2).map(|_| [1i64, -1]).multi_cartesian_product() {
                        let mut prob = Rat::one();
                        for (i, &yi) in y.iter().enumerate() {
                            prob *= if yi == -1 {
                                a[i].clone()
                            } else {
                                Rat::one() - &a[i]
                            };
                        }
                        let flipped: Vec<Rat> =
                            x.iter().zip(y.iter()).map(|(c, &yi)| c * rat(yi)).collect();
                        if f.value_at(&flipped) == Some(v) {
                            agree += prob;
                        } else {
                            disagree += prob;
                        }
                    }
                    // agreement bound from the certificate at x
                    let cx = profile.per_point_certificates[xi].len();
                    let mut bound: Option<Rat> = None;
                    for subset in (0..2).combinations(cx) {
                        let prod: Rat = subset
                            .iter()
                            .map(|&i| Rat::one() - &a[i])
                            .product();
                        if bound.as_ref().map_or(true, |b| prod < *b) {
                            bound = Some(prod);
                        }
                    }
                    assert!(agree >= bound.unwrap_or_else(Rat::one));
                    // disagreement bound from block sensitivity
                    let amax = a1.clone().max(a2.clone());
                    assert!(
                        disagree <= rat(2) * amax * rat(profile.block_sensitivity as i64)
                    );
                }
            }
        }
    }

    #[test]
    fn approx_composition_and_of_majorities() {
        // inner duals at degree 0 have correlation 1 (delta = 0), so the
        // certificate-complexity bound with C(AND_2) = 2 collapses to the
        // outer correlation
        let and2 = named(Family::And { n: 2 });
        let maj = named(Family::Majority { n: 3 });
        assert_eq!(
            combinatorial_profile(&and2).unwrap().certificate_complexity,
            2
        );
        let psi = approx_error(&and2, 0).unwrap().dual.unwrap();
        let inner = approx_error(&maj, 0).unwrap().dual.unwrap();
        assert_eq!(inner.correlation, rat(1));
        let w = compose_witness_approx(
            &psi,
            &and2,
            &[(maj.clone(), inner.clone()), (maj, inner)],
            DomainCap::default(),
        )
        .unwrap();
        assert_eq!(w.claimed_correlation_bound, psi.correlation);
    }

    #[test]
    fn two_to_k_rejects_weak_approximants() {
        let f = named(Family::Majority { n: 1 });
        let weak = RationalApproximant::verified(
            &f,
            SparsePolynomial::var(1, 0).scale(&ratio(1, 2)),
            SparsePolynomial::one(1),
        )
        .unwrap();
        assert_eq!(weak.verified_error, ratio(1, 2));
        assert!(two_to_k_amplify(&f, &weak, 3, 64, DomainCap::default()).is_err());
    }

    #[test]
    fn and_reducibility_cases() {
        assert!(and_reducible(&named(Family::And { n: 2 })).unwrap().reducible);
        assert!(!and_reducible(&named(Family::Parity { n: 2 })).unwrap().reducible);
        assert!(and_reducible(&named(Family::Majority { n: 3 })).unwrap().reducible);
    }

    #[test]
    fn main_finite_consistency_small() {
        let maj = named(Family::Majority { n: 3 });
        let report = verify_main_finite(&maj, &maj, DomainCap::default()).unwrap();
        assert!(report.holds);
        assert!(report.sum_upper < rat(1));
        // identically false conjunct rejected
        let c = BooleanFunction::new("const", maj.points().to_vec(), vec![1; 8]).unwrap();
        assert!(verify_main_finite(&c, &maj, DomainCap::default()).is_err());
    }
}
