//! Sparse multivariate and dense univariate polynomials over exact rationals.
//!
//! Multivariate polynomials map exponent vectors to coefficients (zero
//! coefficients are never stored); univariate polynomials are dense coefficient
//! lists, lowest degree first. Both evaluate exactly at rational points.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rat::{format_rat, rat, Rat};
use crate::{Error, Result};

/// C(n, k) as a big integer; 0 when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Checks the alternating binomial identity
/// `sum_{i=0}^{n} C(n,i) (-1)^i p(i) = 0`, which holds exactly whenever
/// `deg p <= n-1`. Rejects polynomials of degree `>= n`, where the identity
/// fails in general.
pub fn check_comb_identity(n: u64, p: &UnivariatePolynomial) -> Result<bool> {
    if p.degree() >= n as i64 {
        return Err(Error::Precondition(format!(
            "comb identity requires deg p <= n-1 (deg p = {}, n = {})",
            p.degree(),
            n
        )));
    }
    let mut sum = Rat::zero();
    for i in 0..=n {
        let term = Rat::from_integer(binomial(n, i as i64)) * p.eval(&rat(i as i64));
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum.is_zero())
}

// ---------------------------------------------------------------------------
// Sparse multivariate polynomials
// ---------------------------------------------------------------------------

/// Multivariate polynomial in `num_vars` variables. Keys are exponent vectors;
/// a BTreeMap keeps term order canonical so output is deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    pub num_vars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl SparsePolynomial {
    pub fn zero(num_vars: usize) -> Self {
        SparsePolynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rat) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rat::one())
    }

    /// The monomial `x_i`.
    pub fn var(num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars);
        let mut e = vec![0; num_vars];
        e[i] = 1;
        let mut p = Self::zero(num_vars);
        p.add_term(e, Rat::one());
        p
    }

    /// The monomial with the given exponent vector.
    pub fn monomial(num_vars: usize, exps: Vec<u32>, c: Rat) -> Self {
        assert_eq!(exps.len(), num_vars);
        let mut p = Self::zero(num_vars);
        p.add_term(exps, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        assert_eq!(exps.len(), self.num_vars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; -1 for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
            .unwrap_or(-1)
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        let mut acc = Rat::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(exps.iter()) {
                for _ in 0..e {
                    term *= x;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        let mut out = Self::zero(self.num_vars);
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = Self::zero(self.num_vars);
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                out.add_term(e, va * vb);
            }
        }
        out
    }

    /// Re-embeds into a space of `total_vars` variables with this polynomial's
    /// variable `i` becoming variable `offset + i`.
    pub fn shift_vars(&self, offset: usize, total_vars: usize) -> Self {
        assert!(offset + self.num_vars <= total_vars);
        let mut out = Self::zero(total_vars);
        for (e, v) in &self.terms {
            let mut exps = vec![0u32; total_vars];
            exps[offset..offset + self.num_vars].copy_from_slice(e);
            out.terms.insert(exps, v.clone());
        }
        out
    }

    /// Substitutes polynomials for the variables: `self(args[0], ..)`.
    /// All `args` must share a variable space.
    pub fn compose(&self, args: &[SparsePolynomial]) -> Self {
        assert_eq!(args.len(), self.num_vars);
        let nv = args.first().map(|p| p.num_vars).unwrap_or(0);
        let mut out = Self::zero(nv);
        for (exps, c) in &self.terms {
            let mut term = Self::constant(nv, c.clone());
            for (arg, &e) in args.iter().zip(exps.iter()) {
                for _ in 0..e {
                    term = term.mul(arg);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Reduces each variable's powers modulo the vanishing polynomial of its
    /// value set, preserving values on the grid `values[0] x .. x values[n-1]`.
    /// On `{-1,+1}` this is the multilinear reduction `x^2 -> 1`.
    pub fn reduce_on_grid(&self, values: &[Vec<Rat>]) -> Self {
        assert_eq!(values.len(), self.num_vars);
        // Per variable: table of x^e as a vector over x^0..x^(s-1) for e < cap.
        let tables: Vec<Vec<Vec<Rat>>> = values.iter().map(|v| power_table(v, self.max_exp())).collect();
        let mut out = Self::zero(self.num_vars);
        for (exps, c) in &self.terms {
            // expand product over variables of reduced power vectors
            let mut acc: Vec<(Vec<u32>, Rat)> = vec![(vec![0; self.num_vars], c.clone())];
            for (i, &e) in exps.iter().enumerate() {
                let reduced = &tables[i][e as usize];
                let mut next = Vec::new();
                for (base_e, base_c) in &acc {
                    for (pow, coef) in reduced.iter().enumerate() {
                        if coef.is_zero() {
                            continue;
                        }
                        let mut ne = base_e.clone();
                        ne[i] = pow as u32;
                        next.push((ne, base_c * coef));
                    }
                }
                acc = next;
            }
            for (e, v) in acc {
                out.add_term(e, v);
            }
        }
        out
    }

    fn max_exp(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

/// Multivariate interpolation on a tensor-product grid. `grids[i]` lists the
/// nodes of variable `i`; `value` receives one index per variable into the
/// corresponding grid. Per-variable degree of the result is `< grids[i].len()`.
pub fn tensor_interpolate(
    grids: &[Vec<Rat>],
    value: &dyn Fn(&[usize]) -> Rat,
) -> SparsePolynomial {
    let nv = grids.len();
    // Univariate Lagrange basis polynomials per axis.
    let bases: Vec<Vec<UnivariatePolynomial>> = grids
        .iter()
        .map(|g| {
            (0..g.len())
                .map(|i| {
                    let mut p = UnivariatePolynomial::constant(Rat::one());
                    let mut denom = Rat::one();
                    for (j, xj) in g.iter().enumerate() {
                        if j != i {
                            p = p.mul(&UnivariatePolynomial::new(vec![-xj.clone(), Rat::one()]));
                            denom *= &g[i] - xj;
                        }
                    }
                    p.scale(&(Rat::one() / denom))
                })
                .collect()
        })
        .collect();
    let mut out = SparsePolynomial::zero(nv);
    let ranges: Vec<Vec<usize>> = grids.iter().map(|g| (0..g.len()).collect()).collect();
    for idx in ranges.into_iter().multi_cartesian_product() {
        let v = value(&idx);
        if v.is_zero() {
            continue;
        }
        let mut term = SparsePolynomial::constant(nv, v);
        for (axis, &i) in idx.iter().enumerate() {
            term = term.mul(&bases[axis][i].to_sparse(nv, axis));
        }
        out = out.add(&term);
    }
    out
}

/// For a value set `v` of size s, returns for each e = 0..=max_e the
/// representation of x^e in the basis 1, x, .., x^(s-1) modulo the vanishing
/// polynomial prod (x - v_i).
fn power_table(values: &[Rat], max_e: u32) -> Vec<Vec<Rat>> {
    let s = values.len();
    assert!(s >= 1);
    // vanishing polynomial coefficients: prod (x - v_i) = x^s - (c_{s-1} x^{s-1} + ... + c_0)
    let vanish = UnivariatePolynomial::from_roots(values);
    // x^s = -sum_{j<s} vanish[j] x^j  (vanish is monic)
    let mut table: Vec<Vec<Rat>> = Vec::with_capacity(max_e as usize + 1);
    for e in 0..=max_e as usize {
        if e < s {
            let mut row = vec![Rat::zero(); s];
            row[e] = Rat::one();
            table.push(row);
        } else {
            // x^e = x * x^(e-1), then reduce the overflow term
            let prev = table[e - 1].clone();
            let mut row = vec![Rat::zero(); s + 1];
            for (j, c) in prev.iter().enumerate() {
                row[j + 1] = c.clone();
            }
            let overflow = row[s].clone();
            if !overflow.is_zero() {
                for j in 0..s {
                    let adj = &overflow * &vanish.coeffs()[j];
                    row[j] -= adj;
                }
            }
            row.truncate(s);
            table.push(row);
        }
    }
    table
}

impl fmt::Debug for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rat(c))?;
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    write!(f, "*x{}^{}", i, p)?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials
// ---------------------------------------------------------------------------

/// Univariate polynomial, coefficients lowest degree first; the leading
/// coefficient is nonzero unless the polynomial is zero (empty list).
#[derive(Clone, PartialEq, Eq)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Rat>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// p(-x)
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c.clone() })
                .collect(),
        )
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Rat]) -> Self {
        let mut p = Self::constant(Rat::one());
        for r in roots {
            p = p.mul(&Self::new(vec![-r.clone(), Rat::one()]));
        }
        p
    }

    /// p(a*x + b)
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> Self {
        let lin = Self::new(vec![b.clone(), a.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Lagrange interpolation through distinct nodes.
    pub fn interpolate(points: &[(Rat, Rat)]) -> Self {
        let mut out = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Self::constant(Rat::one());
            let mut denom = Rat::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Self::new(vec![-xj.clone(), Rat::one()]));
                    denom *= xi - xj;
                }
            }
            out = out.add(&basis.scale(&(yi / denom)));
        }
        out
    }

    /// Embeds as a sparse polynomial in the single variable `var` of an
    /// `num_vars`-variable space.
    pub fn to_sparse(&self, num_vars: usize, var: usize) -> SparsePolynomial {
        let mut p = SparsePolynomial::zero(num_vars);
        for (e, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0u32; num_vars];
                exps[var] = e as u32;
                p.add_term(exps, c.clone());
            }
        }
        p
    }

    /// Substitutes a sparse polynomial for the variable.
    pub fn compose_sparse(&self, arg: &SparsePolynomial) -> SparsePolynomial {
        let mut acc = SparsePolynomial::zero(arg.num_vars);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(arg);
            acc.add_term(vec![0; arg.num_vars], c.clone());
        }
        acc
    }
}

impl fmt::Debug for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rat(c),
                1 => format!("{}*t", format_rat(c)),
                _ => format!("{}*t^{}", format_rat(c), i),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Univariate rational functions
// ---------------------------------------------------------------------------

/// Ratio of univariate polynomials. `positivity_domain`, when set, lists the
/// points at which the denominator has been verified positive exactly.
#[derive(Clone, Debug)]
pub struct UnivariateRational {
    pub numer: UnivariatePolynomial,
    pub denom: UnivariatePolynomial,
    pub positivity_domain: Option<Vec<Rat>>,
}

impl UnivariateRational {
    pub fn new(numer: UnivariatePolynomial, denom: UnivariatePolynomial) -> Self {
        assert!(!denom.is_zero(), "zero denominator polynomial");
        UnivariateRational {
            numer,
            denom,
            positivity_domain: None,
        }
    }

    /// max(deg numer, deg denom)
    pub fn degree(&self) -> i64 {
        self.numer.degree().max(self.denom.degree())
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let d = self.denom.eval(x);
        if d.is_zero() {
            return Err(Error::Precondition(format!(
                "denominator vanishes at {}",
                format_rat(x)
            )));
        }
        Ok(self.numer.eval(x) / d)
    }

    /// Verifies `denom > 0` at every listed point and records the domain.
    pub fn verify_denominator_positive(&mut self, points: &[Rat]) -> Result<()> {
        for t in points {
            if !self.denom.eval(t).is_positive() {
                return Err(Error::VerificationFailed(format!(
                    "denominator not positive at t = {}",
                    format_rat(t)
                )));
            }
        }
        self.positivity_domain = Some(points.to_vec());
        Ok(())
    }

    /// Exact max of |sign(t) - self(t)| over the points (all nonzero).
    pub fn sign_error_on(&self, points: &[Rat]) -> Result<Rat> {
        let mut worst = Rat::zero();
        for t in points {
            let target = if t.is_positive() { rat(1) } else { rat(-1) };
            let e = (target - self.eval(t)?).abs();
            if e > worst {
                worst = e;
            }
        }
        Ok(worst)
    }
}
