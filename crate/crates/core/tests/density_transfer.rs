//! Density transfer inequality for conjunctions at tiny scale:
//! dns(f /\ g) >= dns(f' /\ g') / (dns(f) dns(g)) with f'(x) = -f(-x),
//! over all pairs of nonconstant 2-variable cube functions. All densities are
//! exact; conjunction tables are cached so each distinct 4-variable function
//! is searched once.

use std::collections::BTreeMap;

use signdeg::boolfun::{conjunction, make_named, DomainCap, Family};
use signdeg::density::density_exact;
use signdeg::rat::{rat, ratio};
use signdeg::BooleanFunction;

fn cube_fn(n: usize, mask: u32) -> BooleanFunction {
    let dom = make_named(&Family::Parity { n }, DomainCap::default())
        .unwrap()
        .points()
        .to_vec();
    let values: Vec<i8> = (0..dom.len())
        .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
        .collect();
    BooleanFunction::new(format!("enum{mask}"), dom, values).unwrap()
}

#[test]
fn conjunction_density_transfer() {
    let mut dns2 = BTreeMap::new();
    for mask in 0..16u32 {
        let f = cube_fn(2, mask);
        dns2.insert(mask, density_exact(&f, None).unwrap().value);
    }
    let mut conj_cache: BTreeMap<Vec<i8>, usize> = BTreeMap::new();
    let mut dns_conj = |f: &BooleanFunction, g: &BooleanFunction| -> usize {
        let fg = conjunction(f, g, DomainCap::default()).unwrap();
        let key = fg.values().to_vec();
        if let Some(&v) = conj_cache.get(&key) {
            return v;
        }
        let v = density_exact(&fg, Some(6)).unwrap().value;
        conj_cache.insert(key, v);
        v
    };
    let mut checked = 0;
    for fm in 0..16u32 {
        for gm in fm..16u32 {
            let f = cube_fn(2, fm);
            let g = cube_fn(2, gm);
            if f.is_constant().is_some() || g.is_constant().is_some() {
                continue;
            }
            let fp = f.negate().reflect();
            let gp = g.negate().reflect();
            let lhs = rat(dns_conj(&f, &g) as i64);
            let rhs = ratio(
                dns_conj(&fp, &gp) as i64,
                (dns2[&fm] * dns2[&gm]) as i64,
            );
            assert!(lhs >= rhs, "pair ({fm}, {gm})");
            checked += 1;
        }
    }
    assert!(checked > 50);
}
