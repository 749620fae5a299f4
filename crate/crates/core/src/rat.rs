//! Exact rational scalars and dyadic surrogates for irrational constants.
//!
//! All coefficients in this crate are `BigRational` values: the numerator is an
//! arbitrary-precision integer, the denominator is positive, and every
//! operation renormalizes to lowest terms. Irrational constants that appear in
//! the explicit constructions (square roots, fractional powers, exponentials)
//! never enter the arithmetic directly; they are replaced by dyadic rationals
//! (denominator a power of two) bracketing the true value, and every inequality
//! that depends on them is then re-verified exactly with the surrogate in
//! place.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = num_rational::BigRational;

/// Default number of fractional bits for dyadic surrogates.
pub const DEFAULT_FRAC_BITS: u32 = 64;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_pow(x: &Rat, e: u32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

/// Formats a rational as `num/den` (or plain `num` for integers).
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `num`, `num/den`, or a plain decimal integer string.
pub fn parse_rat(s: &str) -> crate::Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> crate::Result<BigInt> {
        t.parse::<BigInt>()
            .map_err(|e| crate::Error::Parse(format!("bad integer {t:?}: {e}")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(crate::Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
    }
}

/// Approximate decimal rendering, marked as such, for human-readable output.
pub fn approx_decimal(x: &Rat) -> String {
    match x.to_f64() {
        Some(v) => format!("{v:.6}"),
        None => "(overflow)".to_string(),
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// Floor of the `r`-th root of a nonnegative integer.
fn nth_root_floor_int(x: &BigInt, r: u32) -> BigInt {
    assert!(!x.is_negative() && r >= 1);
    x.nth_root(r)
}

/// Dyadic lower bound on `x^(1/r)` with `frac_bits` fractional bits.
/// Requires `x >= 0`.
pub fn root_floor(x: &Rat, r: u32, frac_bits: u32) -> Rat {
    assert!(!x.is_negative());
    // floor( (num * 2^(r*b) / den)^(1/r) ) / 2^b  <=  x^(1/r)
    let scaled = (x.numer() * pow2(r * frac_bits)).div_floor(x.denom());
    Rat::new(nth_root_floor_int(&scaled, r), pow2(frac_bits))
}

/// Dyadic upper bound on `x^(1/r)`: the floor bound plus one ulp unless the
/// floor is already exact.
pub fn root_ceil(x: &Rat, r: u32, frac_bits: u32) -> Rat {
    let lo = root_floor(x, r, frac_bits);
    if rat_pow(&lo, r) == *x {
        lo
    } else {
        lo + Rat::new(BigInt::one(), pow2(frac_bits))
    }
}

/// Exact square root when `x` is a perfect rational square.
pub fn sqrt_exact(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let sn = x.numer().sqrt();
    let sd = x.denom().sqrt();
    if &(&sn * &sn) == x.numer() && &(&sd * &sd) == x.denom() {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

/// Dyadic bounds `(lo, hi)` on `x^(p/q)` for `x > 0`, `p >= 0`, `q >= 1`.
pub fn pow_frac_bounds(x: &Rat, p: u32, q: u32, frac_bits: u32) -> (Rat, Rat) {
    let xp = rat_pow(x, p);
    (root_floor(&xp, q, frac_bits), root_ceil(&xp, q, frac_bits))
}

/// Dyadic bounds `(lo, hi)` on `exp(x)` for rational `x`, via the Taylor
/// series with an explicit tail bound.
pub fn exp_bounds(x: &Rat, frac_bits: u32) -> (Rat, Rat) {
    if x.is_negative() {
        let (lo, hi) = exp_bounds(&-x.clone(), frac_bits + 16);
        // 1/hi <= e^x <= 1/lo; round outward to dyadics.
        let lo_inv = dyadic_floor(&(Rat::one() / hi), frac_bits);
        let hi_inv = dyadic_ceil(&(Rat::one() / lo), frac_bits);
        return (lo_inv, hi_inv);
    }
    // Partial sums of e^t for t >= 0; stop once the geometric tail bound
    // drops below one ulp.
    let ulp = Rat::new(BigInt::one(), pow2(frac_bits));
    let mut term = Rat::one();
    let mut sum = Rat::one();
    let mut k: u32 = 1;
    loop {
        term = term * x / rat(k as i64);
        sum += &term;
        // tail <= term * t/(k+1) / (1 - t/(k+2)) once k+2 > t
        let kp2 = rat(k as i64 + 2);
        if x < &kp2 {
            let ratio = x / &kp2;
            let tail = &term * (x / rat(k as i64 + 1)) / (Rat::one() - ratio);
            if tail < ulp && x < &rat(k as i64 + 1) {
                let lo = dyadic_floor(&sum, frac_bits);
                let hi = dyadic_ceil(&(&sum + &tail), frac_bits);
                return (lo, hi);
            }
        }
        k += 1;
        assert!(k < 10_000, "exp series failed to converge");
    }
}

/// Dyadic bounds `(lo, hi)` on `ln(x)` for rational `x > 0`, via range
/// reduction to [1, 2) and the atanh series `ln y = 2 atanh((y-1)/(y+1))`.
pub fn ln_bounds(x: &Rat, frac_bits: u32) -> (Rat, Rat) {
    assert!(x.is_positive());
    if x < &Rat::one() {
        let (lo, hi) = ln_bounds(&(Rat::one() / x), frac_bits);
        return (-hi, -lo);
    }
    // x = 2^m * y with y in [1, 2)
    let mut y = x.clone();
    let mut m: i64 = 0;
    let two = rat(2);
    while y >= two {
        y /= &two;
        m += 1;
    }
    let (ln_y_lo, ln_y_hi) = ln_atanh(&y, frac_bits + 8);
    let (ln2_lo, ln2_hi) = ln_atanh(&two, frac_bits + 8);
    let lo = dyadic_floor(&(&ln_y_lo + &ln2_lo * rat(m)), frac_bits);
    let hi = dyadic_ceil(&(&ln_y_hi + &ln2_hi * rat(m)), frac_bits);
    (lo, hi)
}

/// atanh-series bounds on ln(y) for y in [1, 2].
fn ln_atanh(y: &Rat, frac_bits: u32) -> (Rat, Rat) {
    let z = (y - Rat::one()) / (y + Rat::one()); // in [0, 1/3]
    if z.is_zero() {
        return (Rat::zero(), Rat::zero());
    }
    let z2 = &z * &z;
    let ulp = Rat::new(BigInt::one(), pow2(frac_bits));
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut k: u32 = 1;
    loop {
        term *= &z2;
        sum += &term / rat(2 * k as i64 + 1);
        // tail < term * z^2/(1 - z^2) (termwise geometric domination)
        let tail = &term * &z2 / (Rat::one() - &z2);
        if tail < ulp {
            let lo = &sum * rat(2);
            let hi = (&sum + &tail) * rat(2);
            return (lo, hi);
        }
        k += 1;
        assert!(k < 10_000, "ln series failed to converge");
    }
}

/// Largest dyadic with `frac_bits` fractional bits that is `<= x`.
pub fn dyadic_floor(x: &Rat, frac_bits: u32) -> Rat {
    let scaled = (x.numer() * pow2(frac_bits)).div_floor(x.denom());
    Rat::new(scaled, pow2(frac_bits))
}

/// Smallest dyadic with `frac_bits` fractional bits that is `>= x`.
pub fn dyadic_ceil(x: &Rat, frac_bits: u32) -> Rat {
    let scaled = (x.numer() * pow2(frac_bits)).div_ceil(x.denom());
    Rat::new(scaled, pow2(frac_bits))
}

/// Sign of a rational as -1, 0, +1.
pub fn sign(x: &Rat) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
