//! Boolean functions on finite rational domains.
//!
//! A function is a materialized list of domain points (vectors of exact
//! rationals, lexicographically ordered) with a value in {-1,+1} at each
//! point. By convention -1 means "true" and +1 means "false". Named families
//! cover majority, OR/AND, parity, the canonical halfspace with exponential
//! weights, ODD-MAX-BIT, AND-OR trees, and the small-alphabet halfspace used
//! by the automaton construction.

use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::rat::{rat, sign, Rat};
use crate::{Error, Result};

/// Hard cap on materialized domain sizes.
#[derive(Clone, Copy, Debug)]
pub struct DomainCap(pub usize);

impl Default for DomainCap {
    fn default() -> Self {
        DomainCap(1 << 20)
    }
}

pub const MAX_DOMAIN_CAP: usize = 1 << 24;

#[derive(Clone, PartialEq, Eq)]
pub struct BooleanFunction {
    pub name: String,
    domain: Vec<Vec<Rat>>,
    values: Vec<i8>,
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BooleanFunction({}, {} vars, {} points)",
            self.name,
            self.num_vars(),
            self.domain.len()
        )
    }
}

impl BooleanFunction {
    /// Builds from raw points/values; sorts the domain lexicographically and
    /// rejects duplicates.
    pub fn new(name: impl Into<String>, points: Vec<Vec<Rat>>, values: Vec<i8>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: values.len(),
            });
        }
        if points.is_empty() {
            return Err(Error::Precondition("empty domain".into()));
        }
        let nv = points[0].len();
        if points.iter().any(|p| p.len() != nv) {
            return Err(Error::Precondition("ragged domain points".into()));
        }
        if values.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::Precondition("values must be +1 or -1".into()));
        }
        let mut paired: Vec<(Vec<Rat>, i8)> = points.into_iter().zip(values).collect();
        paired.sort_by(|a, b| a.0.cmp(&b.0));
        for w in paired.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Precondition("duplicate domain point".into()));
            }
        }
        let (domain, values) = paired.into_iter().unzip();
        Ok(BooleanFunction {
            name: name.into(),
            domain,
            values,
        })
    }

    /// Builds a function on an explicit domain from a pointwise rule.
    pub fn from_rule(
        name: impl Into<String>,
        domain: Vec<Vec<Rat>>,
        rule: impl Fn(&[Rat]) -> i8,
    ) -> Result<Self> {
        let values = domain.iter().map(|p| rule(p)).collect();
        Self::new(name, domain, values)
    }

    pub fn num_vars(&self) -> usize {
        self.domain[0].len()
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[Vec<Rat>] {
        &self.domain
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Rat>, i8)> {
        self.domain.iter().zip(self.values.iter().copied())
    }

    pub fn value_at(&self, point: &[Rat]) -> Option<i8> {
        self.domain
            .binary_search_by(|p| p.as_slice().cmp(point))
            .ok()
            .map(|i| self.values[i])
    }

    pub fn is_constant(&self) -> Option<i8> {
        let v0 = self.values[0];
        self.values.iter().all(|&v| v == v0).then_some(v0)
    }

    /// True when the function is the full cube {-1,+1}^n.
    pub fn is_cube(&self) -> bool {
        let n = self.num_vars();
        self.len() == 1usize << n
            && self
                .domain
                .iter()
                .all(|p| p.iter().all(|c| c == &rat(1) || c == &rat(-1)))
    }

    /// Distinct values taken by each coordinate, ascending.
    pub fn coordinate_values(&self) -> Vec<Vec<Rat>> {
        let n = self.num_vars();
        (0..n)
            .map(|j| {
                let mut vals: Vec<Rat> = self.domain.iter().map(|p| p[j].clone()).collect();
                vals.sort();
                vals.dedup();
                vals
            })
            .collect()
    }

    pub fn negate(&self) -> Self {
        BooleanFunction {
            name: format!("not({})", self.name),
            domain: self.domain.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// g(x) = f(-x) on the domain -X.
    pub fn reflect(&self) -> Self {
        let points = self
            .domain
            .iter()
            .map(|p| p.iter().map(|c| -c.clone()).collect())
            .collect();
        BooleanFunction::new(
            format!("reflect({})", self.name),
            points,
            self.values.clone(),
        )
        .expect("reflection preserves distinctness")
    }
}

// ---------------------------------------------------------------------------
// Named families
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// MAJ_n on {-1,+1}^n: +1 iff the coordinate sum is positive.
    Majority { n: usize },
    /// OR_n on {0,1}^n: +1 (false) iff x = 0.
    Or { n: usize },
    /// AND of n cube variables: -1 iff all coordinates are -1.
    And { n: usize },
    /// Product of cube variables.
    Parity { n: usize },
    /// sign(1 + sum_i sum_j 2^i x_ij) on {-1,+1}^(nk), row-major (i, j).
    CanonicalHalfspace { n: usize, k: usize },
    /// sign(1 + sum_i (-2)^i x_i) on {0,1}^n.
    OddMaxBit { n: usize },
    /// OR of m ANDs of width w on the cube.
    AndOrTree { m: usize, w: usize },
    /// sign(1 + sum_{i=1}^{n+1} 2^i x_i) on {0,±1,...,±(3n+1)}^(n+1).
    RtlHalfspace { n: usize },
    /// Single cube variable.
    Dictator,
}

fn cube_domain(n: usize, cap: DomainCap) -> Result<Vec<Vec<Rat>>> {
    let size = 1usize
        .checked_shl(n as u32)
        .filter(|&s| s <= cap.0)
        .ok_or(Error::DomainCap {
            points: usize::MAX,
            cap: cap.0,
        })?;
    let _ = size;
    Ok((0..n)
        .map(|_| vec![rat(-1), rat(1)])
        .multi_cartesian_product()
        .collect())
}

fn grid_domain(values: &[Rat], n: usize, cap: DomainCap) -> Result<Vec<Vec<Rat>>> {
    let mut size: usize = 1;
    for _ in 0..n {
        size = size
            .checked_mul(values.len())
            .filter(|&s| s <= cap.0)
            .ok_or(Error::DomainCap {
                points: usize::MAX,
                cap: cap.0,
            })?;
    }
    Ok((0..n)
        .map(|_| values.to_vec())
        .multi_cartesian_product()
        .collect())
}

/// Materializes a named family.
pub fn make_named(family: &Family, cap: DomainCap) -> Result<BooleanFunction> {
    match family {
        Family::Majority { n } => {
            if *n == 0 {
                return Err(Error::Precondition("majority needs n >= 1".into()));
            }
            let dom = cube_domain(*n, cap)?;
            BooleanFunction::from_rule(format!("MAJ_{n}"), dom, |p| {
                let s: Rat = p.iter().sum();
                if s.is_positive() {
                    1
                } else {
                    -1
                }
            })
        }
        Family::Or { n } => {
            let dom = grid_domain(&[rat(0), rat(1)], *n, cap)?;
            BooleanFunction::from_rule(format!("OR_{n}"), dom, |p| {
                if p.iter().all(|c| c.is_zero()) {
                    1
                } else {
                    -1
                }
            })
        }
        Family::And { n } => {
            let dom = cube_domain(*n, cap)?;
            BooleanFunction::from_rule(format!("AND_{n}"), dom, |p| {
                if p.iter().all(|c| c == &rat(-1)) {
                    -1
                } else {
                    1
                }
            })
        }
        Family::Parity { n } => {
            let dom = cube_domain(*n, cap)?;
            BooleanFunction::from_rule(format!("PARITY_{n}"), dom, |p| {
                let prod: Rat = p.iter().product();
                if prod.is_positive() {
                    1
                } else {
                    -1
                }
            })
        }
        Family::CanonicalHalfspace { n, k } => {
            let dom = cube_domain(n * k, cap)?;
            let weights = canonical_halfspace_weights(*n, *k);
            BooleanFunction::from_rule(format!("HS_{n}x{k}"), dom, move |p| {
                let s: Rat = rat(1)
                    + p.iter()
                        .zip(weights.iter())
                        .map(|(x, w)| x * w)
                        .sum::<Rat>();
                debug_assert!(!s.is_zero());
                sign(&s) as i8
            })
        }
        Family::OddMaxBit { n } => {
            let dom = grid_domain(&[rat(0), rat(1)], *n, cap)?;
            BooleanFunction::from_rule(format!("OMB_{n}"), dom, |p| {
                let mut s = rat(1);
                let mut w = rat(1);
                for x in p {
                    w *= rat(-2);
                    s += &w * x;
                }
                debug_assert!(!s.is_zero());
                sign(&s) as i8
            })
        }
        Family::AndOrTree { m, w } => {
            let dom = cube_domain(m * w, cap)?;
            let (m, w) = (*m, *w);
            BooleanFunction::from_rule(format!("ANDOR_{m}x{w}"), dom, move |p| {
                // OR over blocks of AND over block entries, -1 = true.
                for i in 0..m {
                    let all_true = (0..w).all(|j| p[i * w + j] == rat(-1));
                    if all_true {
                        return -1;
                    }
                }
                1
            })
        }
        Family::RtlHalfspace { n } => {
            let bound = 3 * *n as i64 + 1;
            let values: Vec<Rat> = (-bound..=bound).map(rat).collect();
            let dom = grid_domain(&values, *n + 1, cap)?;
            BooleanFunction::from_rule(format!("RTLHS_{n}"), dom, |p| {
                let mut s = rat(1);
                let mut w = rat(1);
                for x in p {
                    w *= rat(2);
                    s += &w * x;
                }
                debug_assert!(!s.is_zero());
                sign(&s) as i8
            })
        }
        Family::Dictator => {
            let dom = cube_domain(1, cap)?;
            BooleanFunction::from_rule("ID", dom, |p| if p[0].is_positive() { 1 } else { -1 })
        }
    }
}

/// Weight vector of the canonical halfspace in row-major (i, j) order:
/// weight 2^i for variable x_ij.
pub fn canonical_halfspace_weights(n: usize, k: usize) -> Vec<Rat> {
    let mut w = Vec::with_capacity(n * k);
    for i in 1..=n {
        for _ in 1..=k {
            w.push(crate::rat::rat_pow(&rat(2), i as u32));
        }
    }
    w
}

/// Parses a family spec like `maj`, `or`, `parity`, `and`, `hs`, `omb`,
/// `andor`, `rtlhs`, `id` with its integer parameters.
pub fn family_from_name(name: &str, params: &[usize]) -> Result<Family> {
    let want = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "family {name} expects {k} parameter(s), got {}",
                params.len()
            )))
        }
    };
    match name.to_ascii_lowercase().as_str() {
        "maj" | "majority" => {
            want(1)?;
            Ok(Family::Majority { n: params[0] })
        }
        "or" => {
            want(1)?;
            Ok(Family::Or { n: params[0] })
        }
        "and" => {
            want(1)?;
            Ok(Family::And { n: params[0] })
        }
        "parity" | "xor" => {
            want(1)?;
            Ok(Family::Parity { n: params[0] })
        }
        "hs" | "canonical-halfspace" => {
            want(2)?;
            Ok(Family::CanonicalHalfspace {
                n: params[0],
                k: params[1],
            })
        }
        "omb" | "odd-max-bit" => {
            want(1)?;
            Ok(Family::OddMaxBit { n: params[0] })
        }
        "andor" | "and-or-tree" => {
            want(2)?;
            Ok(Family::AndOrTree {
                m: params[0],
                w: params[1],
            })
        }
        "mp" | "minsky-papert" => {
            want(1)?;
            let m = params[0];
            Ok(Family::AndOrTree { m, w: 4 * m * m })
        }
        "rtlhs" | "rtl-halfspace" => {
            want(1)?;
            Ok(Family::RtlHalfspace { n: params[0] })
        }
        "id" | "dictator" => {
            want(0)?;
            Ok(Family::Dictator)
        }
        other => Err(Error::UnknownFamily(other.into())),
    }
}

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

/// F(f_1, ..., f_k) with F on the full cube {-1,+1}^k.
#[derive(Clone, Debug)]
pub struct CompositionSpec {
    pub outer: BooleanFunction,
    pub inner: Vec<BooleanFunction>,
}

impl CompositionSpec {
    pub fn new(outer: BooleanFunction, inner: Vec<BooleanFunction>) -> Result<Self> {
        if !outer.is_cube() {
            return Err(Error::Precondition(
                "outer function must live on the full cube".into(),
            ));
        }
        if outer.num_vars() != inner.len() {
            return Err(Error::DimensionMismatch {
                expected: outer.num_vars(),
                got: inner.len(),
            });
        }
        Ok(CompositionSpec { outer, inner })
    }
}

/// Materializes F(f_1,...,f_k) on the product domain X_1 x ... x X_k.
pub fn compose(spec: &CompositionSpec, cap: DomainCap) -> Result<BooleanFunction> {
    let mut size: usize = 1;
    for f in &spec.inner {
        size = size
            .checked_mul(f.len())
            .filter(|&s| s <= cap.0)
            .ok_or(Error::DomainCap {
                points: usize::MAX,
                cap: cap.0,
            })?;
    }
    let mut points = Vec::with_capacity(size);
    let mut values = Vec::with_capacity(size);
    let index_ranges: Vec<Vec<usize>> = spec.inner.iter().map(|f| (0..f.len()).collect()).collect();
    for choice in index_ranges.into_iter().multi_cartesian_product() {
        let mut point = Vec::new();
        let mut outer_arg = Vec::with_capacity(spec.inner.len());
        for (f, &i) in spec.inner.iter().zip(choice.iter()) {
            point.extend_from_slice(&f.points()[i]);
            outer_arg.push(rat(f.values()[i] as i64));
        }
        let v = spec
            .outer
            .value_at(&outer_arg)
            .ok_or_else(|| Error::Inconsistency("outer cube lookup failed".into()))?;
        points.push(point);
        values.push(v);
    }
    let inner_names: Vec<&str> = spec.inner.iter().map(|f| f.name.as_str()).collect();
    BooleanFunction::new(
        format!("{}({})", spec.outer.name, inner_names.join(",")),
        points,
        values,
    )
}

/// Conjunction f /\ g on the product domain.
pub fn conjunction(f: &BooleanFunction, g: &BooleanFunction, cap: DomainCap) -> Result<BooleanFunction> {
    let and2 = make_named(&Family::And { n: 2 }, cap)?;
    compose(&CompositionSpec::new(and2, vec![f.clone(), g.clone()])?, cap)
}

// ---------------------------------------------------------------------------
// Subfunctions (restrictions on the cube)
// ---------------------------------------------------------------------------

/// In the ±1 convention (-1 = true): a AND b = max(a,b), a OR b = min(a,b).
fn and_pm(a: i8, b: i8) -> i8 {
    a.max(b)
}
fn or_pm(a: i8, b: i8) -> i8 {
    a.min(b)
}

/// The restriction h(..., (x_i AND y_i) OR z_i, ...) of a cube function.
/// Slot i passes x_i through when y_i = -1 and z_i = +1, is forced true when
/// z_i = -1, and forced false when y_i = +1, z_i = +1. Returns the function
/// on the cube over the pass-through variables.
pub fn subfunction(
    h: &BooleanFunction,
    y: &[i8],
    z: &[i8],
    cap: DomainCap,
) -> Result<BooleanFunction> {
    if !h.is_cube() {
        return Err(Error::Precondition("subfunction needs a cube domain".into()));
    }
    let k = h.num_vars();
    if y.len() != k || z.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: y.len().min(z.len()),
        });
    }
    let free: Vec<usize> = (0..k).filter(|&i| y[i] == -1 && z[i] == 1).collect();
    if free.is_empty() {
        return Err(Error::Precondition(
            "restriction fixes every variable".into(),
        ));
    }
    let dom = cube_domain(free.len(), cap)?;
    let h = h.clone();
    let (y, z) = (y.to_vec(), z.to_vec());
    BooleanFunction::from_rule(format!("sub({})", h.name), dom, move |p| {
        let mut arg = Vec::with_capacity(k);
        for i in 0..k {
            let xi = match free.iter().position(|&fi| fi == i) {
                Some(slot) => {
                    if p[slot].is_positive() {
                        1
                    } else {
                        -1
                    }
                }
                None => 1, // dead slot; (x AND y) OR z ignores it below
            };
            arg.push(rat(or_pm(and_pm(xi, y[i]), z[i]) as i64));
        }
        h.value_at(&arg).expect("cube lookup")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn majority_values() {
        let maj = make_named(&Family::Majority { n: 3 }, DomainCap::default()).unwrap();
        assert_eq!(maj.value_at(&pt(&[-1, -1, 1])), Some(-1));
        assert_eq!(maj.value_at(&pt(&[1, 1, -1])), Some(1));
        // even n resolves ties to -1
        let maj2 = make_named(&Family::Majority { n: 2 }, DomainCap::default()).unwrap();
        assert_eq!(maj2.value_at(&pt(&[-1, 1])), Some(-1));
    }

    #[test]
    fn majority_matches_sum_oracle_up_to_9() {
        for n in 1..=9usize {
            let maj = make_named(&Family::Majority { n }, DomainCap::default()).unwrap();
            for (p, v) in maj.iter() {
                let s: Rat = p.iter().sum();
                let expect = if s.is_positive() { 1 } else { -1 };
                assert_eq!(v, expect, "n={n}");
            }
        }
    }

    #[test]
    fn or_convention() {
        let or2 = make_named(&Family::Or { n: 2 }, DomainCap::default()).unwrap();
        assert_eq!(or2.value_at(&pt(&[0, 0])), Some(1));
        assert_eq!(or2.value_at(&pt(&[1, 0])), Some(-1));
    }

    #[test]
    fn canonical_halfspace_example() {
        let hs = make_named(
            &Family::CanonicalHalfspace { n: 2, k: 2 },
            DomainCap::default(),
        )
        .unwrap();
        // all-ones: sign(1+2+2+4+4) = +1
        assert_eq!(hs.value_at(&pt(&[1, 1, 1, 1])), Some(1));
    }

    #[test]
    fn compose_with_identity_is_outer() {
        let outer = make_named(&Family::Majority { n: 3 }, DomainCap::default()).unwrap();
        let id = make_named(&Family::Dictator, DomainCap::default()).unwrap();
        let spec = CompositionSpec::new(outer.clone(), vec![id.clone(), id.clone(), id]).unwrap();
        let composed = compose(&spec, DomainCap::default()).unwrap();
        assert_eq!(composed.points(), outer.points());
        assert_eq!(composed.values(), outer.values());
    }

    #[test]
    fn compose_respects_negation() {
        let f = make_named(&Family::Majority { n: 1 }, DomainCap::default()).unwrap();
        let outer = make_named(&Family::And { n: 2 }, DomainCap::default()).unwrap();
        let a = compose(
            &CompositionSpec::new(outer.negate(), vec![f.clone(), f.clone()]).unwrap(),
            DomainCap::default(),
        )
        .unwrap();
        let b = compose(
            &CompositionSpec::new(outer, vec![f.clone(), f]).unwrap(),
            DomainCap::default(),
        )
        .unwrap()
        .negate();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn compose_and_of_majorities() {
        let f = make_named(&Family::Majority { n: 3 }, DomainCap::default()).unwrap();
        let fg = conjunction(&f, &f, DomainCap::default()).unwrap();
        assert_eq!(fg.len(), 64);
        let all_true = pt(&[-1, -1, -1, -1, -1, -1]);
        assert_eq!(fg.value_at(&all_true), Some(-1));
    }

    #[test]
    fn negate_and_reflect() {
        let maj = make_named(&Family::Majority { n: 3 }, DomainCap::default()).unwrap();
        assert_eq!(maj.negate().value_at(&pt(&[-1, -1, -1])), Some(1));
        assert_eq!(maj.negate().negate().values(), maj.values());
        let or2 = make_named(&Family::Or { n: 2 }, DomainCap::default()).unwrap();
        let refl = or2.reflect();
        assert_eq!(refl.value_at(&pt(&[0, 0])), Some(1));
        assert_eq!(refl.value_at(&pt(&[0, -1])), Some(-1));
    }

    #[test]
    fn subfunction_examples() {
        let cap = DomainCap::default();
        // AND with x2 fixed true is the other variable
        let and2 = make_named(&Family::And { n: 2 }, cap).unwrap();
        let f = subfunction(&and2, &[-1, -1], &[1, -1], cap).unwrap();
        assert_eq!(f.value_at(&pt(&[-1])), Some(-1));
        assert_eq!(f.value_at(&pt(&[1])), Some(1));
        // OR with x2 fixed false is the other variable
        let or_cube = make_named(&Family::And { n: 2 }, cap).unwrap().negate().reflect();
        let g = subfunction(&or_cube, &[-1, 1], &[1, 1], cap).unwrap();
        assert_eq!(g.value_at(&pt(&[-1])), Some(-1));
        assert_eq!(g.value_at(&pt(&[1])), Some(1));
        // parity restricted to one variable is that variable or its negation
        let par = make_named(&Family::Parity { n: 2 }, cap).unwrap();
        let h = subfunction(&par, &[-1, -1], &[1, -1], cap).unwrap();
        let hv: Vec<i8> = h.values().to_vec();
        assert!(hv == vec![-1, 1] || hv == vec![1, -1]);
    }

    #[test]
    fn domain_cap_enforced() {
        let err = make_named(&Family::Majority { n: 25 }, DomainCap(1 << 20));
        assert!(matches!(err, Err(Error::DomainCap { .. })));
    }

    #[test]
    fn odd_max_bit_values() {
        // sign(1 - 2 x1 + 4 x2) on {0,1}^2
        let f = make_named(&Family::OddMaxBit { n: 2 }, DomainCap::default()).unwrap();
        assert_eq!(f.value_at(&pt(&[0, 0])), Some(1));
        assert_eq!(f.value_at(&pt(&[1, 0])), Some(-1));
        assert_eq!(f.value_at(&pt(&[1, 1])), Some(1));
    }

    #[test]
    fn and_or_tree_values() {
        let f = make_named(&Family::AndOrTree { m: 2, w: 2 }, DomainCap::default()).unwrap();
        // true iff some block is all true
        assert_eq!(f.value_at(&pt(&[-1, -1, 1, 1])), Some(-1));
        assert_eq!(f.value_at(&pt(&[-1, 1, 1, -1])), Some(1));
        assert_eq!(f.value_at(&pt(&[1, 1, -1, -1])), Some(-1));
        // the block family sugar expands to blocks of width 4m^2
        let mp = family_from_name("mp", &[1]).unwrap();
        assert_eq!(mp, Family::AndOrTree { m: 1, w: 4 });
    }

    #[test]
    fn rtl_halfspace_small() {
        let f = make_named(&Family::RtlHalfspace { n: 1 }, DomainCap::default()).unwrap();
        assert_eq!(f.len(), 81);
        // sign(1 + 2 x1 + 4 x2)
        assert_eq!(f.value_at(&pt(&[0, 0])), Some(1));
        assert_eq!(f.value_at(&pt(&[1, -1])), Some(-1));
    }
}
