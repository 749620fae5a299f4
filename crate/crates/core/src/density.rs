//! Threshold density: the least number of distinct monomials in any
//! sign-representing combination, exact at tiny scale, plus the
//! selector transform that converts degree hardness into density hardness.

use itertools::Itertools;
use num_traits::{One, Signed};

use crate::boolfun::{BooleanFunction, DomainCap};
use crate::degrees::{threshold_degree, DegreeReport};
use crate::lp::{self, LinearProgram, Relation};
use crate::rat::{rat, Rat};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct DensityReport {
    pub value: usize,
    /// Monomials of the witness support, as variable bit masks.
    pub support_witness: Vec<u32>,
    pub method: String,
}

/// f^KP(x, y, z) = f(..., selector_i, ...) where selector_i is x_i when
/// z_i = +1 (false) and y_i when z_i = -1 (true). Variable order: all x,
/// then all y, then all z.
pub fn kp_transform(f: &BooleanFunction, cap: DomainCap) -> Result<BooleanFunction> {
    if !f.is_cube() {
        return Err(Error::Precondition("selector transform needs a cube".into()));
    }
    let n = f.num_vars();
    if 3 * n > 24 || (1usize << (3 * n)) > cap.0 {
        return Err(Error::DomainCap {
            points: usize::MAX,
            cap: cap.0,
        });
    }
    let dom: Vec<Vec<Rat>> = (0..3 * n)
        .map(|_| vec![rat(-1), rat(1)])
        .multi_cartesian_product()
        .collect();
    let f_inner = f.clone();
    BooleanFunction::from_rule(format!("kp({})", f.name), dom, move |p| {
        let arg: Vec<Rat> = (0..n)
            .map(|i| {
                if p[2 * n + i].is_positive() {
                    p[i].clone()
                } else {
                    p[n + i].clone()
                }
            })
            .collect();
        f_inner.value_at(&arg).expect("cube lookup")
    })
}

/// Sign feasibility of a fixed monomial support, as an exact LP.
fn support_feasible(values: &[i8], point_bits: &[u32], support: &[u32]) -> Result<bool> {
    let mut lpp = LinearProgram::new(support.len());
    for (bits, v) in point_bits.iter().zip(values.iter()) {
        let row: Vec<Rat> = support
            .iter()
            .map(|m| {
                let parity = (bits & m).count_ones() % 2;
                // chi_m(x) = prod of the selected +-1 coordinates
                let s = if parity == 1 { -1i64 } else { 1 };
                rat(s * *v as i64)
            })
            .collect();
        lpp.push_row(row, Relation::Ge, Rat::one());
    }
    lp::feasible(&lpp)
}

/// Cheap necessary condition: the support must separate points with
/// different values (equal evaluation vectors with unequal values are
/// unfixable by any weights).
fn support_separates(values: &[i8], point_bits: &[u32], support: &[u32]) -> bool {
    let m = point_bits.len();
    let mut keys: Vec<(u64, i8)> = Vec::with_capacity(m);
    for (bits, v) in point_bits.iter().zip(values.iter()) {
        let mut key = 0u64;
        for (t, mask) in support.iter().enumerate() {
            if (bits & mask).count_ones() % 2 == 1 {
                key |= 1 << t;
            }
        }
        keys.push((key, *v));
    }
    keys.sort();
    for w in keys.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
            return false;
        }
    }
    true
}

/// Variable permutations fixing f, for support canonicalization.
fn stabilizer(f: &BooleanFunction) -> Vec<Vec<usize>> {
    let n = f.num_vars();
    let mut stab = Vec::new();
    for perm in (0..n).permutations(n) {
        let mut ok = true;
        for (x, v) in f.iter() {
            let permuted: Vec<Rat> = (0..n).map(|i| x[perm[i]].clone()).collect();
            if f.value_at(&permuted) != Some(v) {
                ok = false;
                break;
            }
        }
        if ok {
            stab.push(perm);
        }
    }
    stab
}

fn apply_perm_to_mask(mask: u32, perm: &[usize]) -> u32 {
    let mut out = 0u32;
    for (i, &pi) in perm.iter().enumerate() {
        if mask >> pi & 1 == 1 {
            out |= 1 << i;
        }
    }
    out
}

/// Exact threshold density by cardinality-ascending support search with
/// symmetry pruning (only supports canonical under the stabilizer of f are
/// solved) and a separation pre-filter before each LP. `max_k` caps the
/// search; exceeding it is a resource error.
pub fn density_exact(f: &BooleanFunction, max_k: Option<usize>) -> Result<DensityReport> {
    density_search(f, max_k, true)
}

/// Unpruned oracle: plain subset enumeration in the same order, every support
/// decided by the LP alone.
pub fn density_oracle(f: &BooleanFunction, max_k: Option<usize>) -> Result<DensityReport> {
    density_search(f, max_k, false)
}

fn density_search(
    f: &BooleanFunction,
    max_k: Option<usize>,
    prune: bool,
) -> Result<DensityReport> {
    if !f.is_cube() {
        return Err(Error::Precondition("density needs a cube function".into()));
    }
    let n = f.num_vars();
    if n > 4 {
        return Err(Error::DomainCap {
            points: 1 << (1 << n),
            cap: 1 << 16,
        });
    }
    let point_bits: Vec<u32> = f
        .points()
        .iter()
        .map(|p| {
            let mut b = 0u32;
            for (i, c) in p.iter().enumerate() {
                if c.is_negative() {
                    b |= 1 << i;
                }
            }
            b
        })
        .collect();
    let values = f.values();
    let monomials: Vec<u32> = (0..(1u32 << n)).collect();
    let cap_k = max_k.unwrap_or(1 << n);
    let stab = if prune { stabilizer(f) } else { vec![] };
    for k in 1..=cap_k.min(1 << n) {
        for support in monomials.iter().copied().combinations(k) {
            if prune && stab.len() > 1 {
                // skip non-canonical supports under the stabilizer action
                let mut canonical = true;
                for perm in &stab {
                    let mut mapped: Vec<u32> = support
                        .iter()
                        .map(|&m| apply_perm_to_mask(m, perm))
                        .collect();
                    mapped.sort_unstable();
                    if mapped < support {
                        canonical = false;
                        break;
                    }
                }
                if !canonical {
                    continue;
                }
            }
            if !support_separates(values, &point_bits, &support) {
                continue;
            }
            if support_feasible(values, &point_bits, &support)? {
                // independent re-check of the witness support
                if !support_feasible(values, &point_bits, &support)? {
                    return Err(Error::VerificationFailed(
                        "witness support failed re-verification".into(),
                    ));
                }
                return Ok(DensityReport {
                    value: k,
                    support_witness: support,
                    method: if prune {
                        "pruned-search".into()
                    } else {
                        "exhaustive".into()
                    },
                });
            }
        }
    }
    Err(Error::DomainCap {
        points: cap_k,
        cap: cap_k,
    })
}

/// Certified lower bound dns(f^KP) >= 2^degthr(f), with the threshold-degree
/// dual witness attached.
pub fn density_lower_from_kp(f: &BooleanFunction) -> Result<(u64, DegreeReport)> {
    let report = threshold_degree(f)?;
    if report.value >= 63 {
        return Err(Error::DomainCap {
            points: usize::MAX,
            cap: usize::MAX,
        });
    }
    Ok((1u64 << report.value, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::{make_named, Family};
    use crate::rat::ratio;

    fn named(f: Family) -> BooleanFunction {
        make_named(&f, DomainCap::default()).unwrap()
    }

    fn cube_fn(n: usize, mask: u32) -> BooleanFunction {
        let dom = named(Family::Parity { n }).points().to_vec();
        let values: Vec<i8> = (0..dom.len())
            .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
            .collect();
        BooleanFunction::new(format!("enum{mask}"), dom, values).unwrap()
    }

    #[test]
    fn single_variable_and_parity() {
        let x1 = named(Family::Dictator);
        assert_eq!(density_exact(&x1, None).unwrap().value, 1);
        let par = named(Family::Parity { n: 2 });
        let r = density_exact(&par, None).unwrap();
        assert_eq!(r.value, 1);
        // the witness is the full parity monomial x1 x2
        assert_eq!(r.support_witness, vec![0b11]);
    }

    #[test]
    fn and2_density() {
        let and2 = named(Family::And { n: 2 });
        let r = density_exact(&and2, None).unwrap();
        assert!(r.value == 2 || r.value == 3);
        assert_eq!(r.value, density_oracle(&and2, None).unwrap().value);
    }

    #[test]
    fn matches_oracle_on_all_two_variable_functions() {
        for mask in 0..16u32 {
            let f = cube_fn(2, mask);
            let a = density_exact(&f, None).unwrap().value;
            let b = density_oracle(&f, None).unwrap().value;
            assert_eq!(a, b, "mask {mask}");
        }
    }

    #[test]
    fn density_one_iff_single_monomial_sign() {
        for mask in 0..16u32 {
            let f = cube_fn(2, mask);
            let d = density_exact(&f, None).unwrap().value;
            assert!(d >= 1);
            // d = 1 iff f is the sign of a single weighted monomial, i.e.
            // f = ±chi_m for some monomial m
            let mut single = false;
            for m in 0..4u32 {
                for s in [1i64, -1] {
                    let matches = f.iter().all(|(x, v)| {
                        let mut prod = rat(s);
                        for (i, c) in x.iter().enumerate() {
                            if m >> i & 1 == 1 {
                                prod *= c;
                            }
                        }
                        crate::rat::sign(&prod) == v as i32
                    });
                    single |= matches;
                }
            }
            assert_eq!(d == 1, single, "mask {mask}");
        }
    }

    #[test]
    fn kp_selector_semantics() {
        let x1 = named(Family::Dictator);
        let kp = kp_transform(&x1, DomainCap::default()).unwrap();
        assert_eq!(kp.num_vars(), 3);
        // z = +1 selects x, z = -1 selects y
        for x in [-1i64, 1] {
            for y in [-1i64, 1] {
                let at = |z: i64| {
                    kp.value_at(&[rat(x), rat(y), rat(z)]).unwrap() as i64
                };
                assert_eq!(at(1), x);
                assert_eq!(at(-1), y);
            }
        }
        // spot-check AND_2 against the direct formula on a few points
        let and2 = named(Family::And { n: 2 });
        let kp2 = kp_transform(&and2, DomainCap::default()).unwrap();
        for (p, v) in kp2.iter().step_by(7) {
            let arg: Vec<Rat> = (0..2)
                .map(|i| {
                    if p[4 + i].is_positive() {
                        p[i].clone()
                    } else {
                        p[2 + i].clone()
                    }
                })
                .collect();
            assert_eq!(and2.value_at(&arg), Some(v));
        }
    }

    #[test]
    fn kp_commutes_with_negation() {
        let maj = named(Family::Majority { n: 2 });
        let a = kp_transform(&maj.negate(), DomainCap::default()).unwrap();
        let b = kp_transform(&maj, DomainCap::default()).unwrap().negate();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn kp_lower_bound_consistency() {
        // degthr(x1) = 1, so dns(kp(x1)) >= 2; the exact search agrees
        let x1 = named(Family::Dictator);
        let (bound, report) = density_lower_from_kp(&x1).unwrap();
        assert_eq!(bound, 2);
        assert_eq!(report.value, 1);
        let kp = kp_transform(&x1, DomainCap::default()).unwrap();
        let d = density_exact(&kp, None).unwrap().value;
        assert!(d as u64 >= bound, "density {d} below bound {bound}");
        // parity: degthr 2 -> bound 4
        let par = named(Family::Parity { n: 2 });
        let (bound, _) = density_lower_from_kp(&par).unwrap();
        assert_eq!(bound, 4);
    }

}
