//! Oracles and generators shared by the integration tests. Nothing here
//! calls the library routine it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use moufkit::abelext::ExtensionData;
use moufkit::fixtures::{catalog, fixture};
use moufkit::mappings::ElementMap;
use moufkit::FiniteLoop;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn catalog_loops() -> Vec<(&'static str, FiniteLoop)> {
    catalog()
        .into_iter()
        .map(|name| (name, fixture(name).expect(name)))
        .collect()
}

pub fn cyclic(n: usize) -> FiniteLoop {
    FiniteLoop::from_fn(n, |a, b| (a + b) % n).unwrap()
}

/// Group inverse from the table: the `b` with `ab = 0`.
fn group_inv(q: &FiniteLoop, a: usize) -> usize {
    q.elements().find(|&b| q.mul(a, b) == 0).unwrap()
}

/// Normal subgroup generated by `{x⁻¹y⁻¹xy}` in a group, closing under
/// products and conjugation by every element.
pub fn group_commutator_oracle(q: &FiniteLoop, x: &[usize], y: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([0]);
    for &a in x {
        for &b in y {
            let (ai, bi) = (group_inv(q, a), group_inv(q, b));
            set.insert(q.mul(q.mul(ai, bi), q.mul(a, b)));
        }
    }
    loop {
        let mut next = set.clone();
        for &a in &set {
            for &b in &set {
                next.insert(q.mul(a, b));
            }
            for g in q.elements() {
                next.insert(q.mul(q.mul(group_inv(q, g), a), g));
            }
        }
        if next == set {
            return set.into_iter().collect();
        }
        set = next;
    }
}

/// All automorphisms of a small group, by brute force over bijections
/// fixing 0.
pub fn automorphisms(g: &FiniteLoop) -> Vec<ElementMap> {
    fn extend(g: &FiniteLoop, img: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<ElementMap>) {
        let n = g.order();
        if img.len() == n {
            let ok = (0..n).all(|a| (0..n).all(|b| img[g.mul(a, b)] == g.mul(img[a], img[b])));
            if ok {
                out.push(ElementMap::new(img.clone()));
            }
            return;
        }
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                img.push(v);
                extend(g, img, used, out);
                img.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; g.order()];
    used[0] = true;
    let mut out = Vec::new();
    extend(g, &mut vec![0], &mut used, &mut out);
    out
}

/// A loop of order 5 that is not a group: the unique such table up to
/// isomorphism with `2·2 = 0`.
pub fn nonassoc5() -> FiniteLoop {
    FiniteLoop::from_table(&[
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
    ])
    .unwrap()
}

/// Random abelian extension data satisfying the boundary conditions.
pub fn random_extension_data(rng: &mut impl Rng) -> ExtensionData {
    let factors = [cyclic(1), cyclic(2), cyclic(3), cyclic(4), nonassoc5(), fixture("symmetric:3").unwrap()];
    let kernels = [
        cyclic(2),
        cyclic(3),
        cyclic(4),
        fixture("abelian:2,2").unwrap(),
        cyclic(5),
        cyclic(6),
    ];
    let factor = factors.choose(rng).unwrap().clone();
    let kernel = kernels.choose(rng).unwrap().clone();
    let auts = automorphisms(&kernel);
    let (f, k) = (factor.order(), kernel.order());
    let mut phi = Vec::with_capacity(f * f);
    let mut psi = Vec::with_capacity(f * f);
    let mut theta = Vec::with_capacity(f * f);
    for r in 0..f {
        for s in 0..f {
            let id = ElementMap::identity(k);
            phi.push(if s == 0 { id.clone() } else { auts.choose(rng).unwrap().clone() });
            psi.push(if r == 0 { id } else { auts.choose(rng).unwrap().clone() });
            theta.push(if r == 0 || s == 0 { 0 } else { rng.gen_range(0..k) });
        }
    }
    ExtensionData::new(factor, kernel, phi, psi, theta).unwrap()
}
