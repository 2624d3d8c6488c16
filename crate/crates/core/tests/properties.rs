mod common;

use std::sync::OnceLock;

use moufkit::abelext::{decompose, decompose_canonical};
use moufkit::commutator::commutator;
use moufkit::format::{parse_loop, to_loop_string};
use moufkit::mappings::{
    inner_t, is_semiautomorphism, lps_compose, lps_inverse, ElementMap, PseudoautomorphismPair,
};
use moufkit::subloops::{all_normal_subloops, cosets, Subloop};
use moufkit::{FiniteLoop, IdentityScheme};
use proptest::prelude::*;

use common::catalog_loops;

struct Entry {
    name: &'static str,
    q: FiniteLoop,
    normals: Vec<Subloop>,
}

/// Fixtures up to order 48 with their normal subloop lattices.
fn pool() -> &'static [Entry] {
    static POOL: OnceLock<Vec<Entry>> = OnceLock::new();
    POOL.get_or_init(|| {
        catalog_loops()
            .into_iter()
            .filter(|(_, q)| q.order() <= 48)
            .map(|(name, q)| {
                let normals = all_normal_subloops(&q, usize::MAX).unwrap();
                Entry { name, q, normals }
            })
            .collect()
    })
}

fn moufang_pool() -> Vec<&'static Entry> {
    pool().iter().filter(|e| e.q.is_moufang()).collect()
}

fn t_pair(q: &FiniteLoop, a: usize) -> PseudoautomorphismPair {
    let c = q.inv(q.power(a, 3).unwrap());
    PseudoautomorphismPair::certify(q, c, ElementMap::from_fn(q.order(), |x| inner_t(q, a, x))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn divisions_invert_multiplication(i in any::<prop::sample::Index>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let e = &pool()[i.index(pool().len())];
        let q = &e.q;
        let (a, b) = (a.index(q.order()), b.index(q.order()));
        prop_assert_eq!(q.mul(a, q.ldiv(a, b)), b);
        prop_assert_eq!(q.mul(q.rdiv(b, a), a), b);
        prop_assert_eq!(q.ldiv(a, q.mul(a, b)), b);
        prop_assert_eq!(q.rdiv(q.mul(b, a), a), b);
    }

    /// Products of certified `(a⁻³, T_a)` pairs stay certified, their maps are
    /// semiautomorphisms, and `x·c⁻¹ · c·y = f(f⁻¹(x)·f⁻¹(y))`.
    #[test]
    fn pseudoautomorphism_products(i in any::<prop::sample::Index>(), gens in prop::collection::vec(any::<prop::sample::Index>(), 1..4), x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>()) {
        let ms = moufang_pool();
        let q = &ms[i.index(ms.len())].q;
        let n = q.order();
        let mut p = PseudoautomorphismPair::identity(q);
        for g in gens {
            p = lps_compose(q, &p, &t_pair(q, g.index(n))).unwrap();
        }
        let (c, f) = (p.companion(), p.map());
        prop_assert!(is_semiautomorphism(q, f));
        let fi = f.inverse().unwrap();
        let (x, y) = (x.index(n), y.index(n));
        prop_assert_eq!(
            q.mul(q.mul(x, q.inv(c)), q.mul(c, y)),
            f.apply(q.mul(fi.apply(x), fi.apply(y)))
        );
        let inv = lps_inverse(q, &p).unwrap();
        let one = lps_compose(q, &p, &inv).unwrap();
        prop_assert_eq!(one.companion(), 0);
        prop_assert!(one.map().is_identity());
    }

    #[test]
    fn commutator_is_monotone_and_symmetric(i in any::<prop::sample::Index>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), c in any::<prop::sample::Index>()) {
        let e = &pool()[i.index(pool().len())];
        let (q, ns) = (&e.q, &e.normals);
        let (x, y, z) = (&ns[a.index(ns.len())], &ns[b.index(ns.len())], &ns[c.index(ns.len())]);
        let xy = commutator(q, x, y).unwrap();
        prop_assert_eq!(&xy, &commutator(q, y, x).unwrap());
        prop_assert!(xy.is_subset(&x.intersection(y)));
        if x.is_subset(z) {
            prop_assert!(xy.is_subset(&commutator(q, z, y).unwrap()), "{}: monotonicity", e.name);
        }
    }

    /// The verdict does not depend on the transversal.
    #[test]
    fn decompose_matches_commutator_for_any_transversal(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), picks in prop::collection::vec(any::<prop::sample::Index>(), 48)) {
        let e = &pool()[i.index(pool().len())];
        let q = &e.q;
        let abelian: Vec<&Subloop> = e
            .normals
            .iter()
            .filter(|x| x.to_loop(q).0.is_commutative_group())
            .collect();
        let x = abelian[j.index(abelian.len())];
        let cs = cosets(q, x).unwrap();
        let u: Vec<usize> = cs
            .iter()
            .enumerate()
            .map(|(k, c)| if k == 0 { 0 } else { c[picks[k % picks.len()].index(c.len())] })
            .collect();
        let trivial = commutator(q, x, x).unwrap().is_trivial();
        let d = decompose(q, x, &u).unwrap();
        prop_assert_eq!(d.is_extension(), trivial, "{}: X = {:?}", e.name, x.elements());
        prop_assert_eq!(decompose_canonical(q, x).unwrap().is_extension(), trivial);
    }

    /// Relabeling preserves the identity schemes and survives a `.loop`
    /// round trip.
    #[test]
    fn relabeling_preserves_structure(i in any::<prop::sample::Index>(), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let e = &pool()[i.index(pool().len())];
        let q = &e.q;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut rest: Vec<usize> = (1..q.order()).collect();
        rest.shuffle(&mut rng);
        let p: Vec<usize> = std::iter::once(0).chain(rest).collect();
        let r = q.relabel(&p).unwrap();
        for s in IdentityScheme::ALL {
            prop_assert_eq!(q.satisfies_identity(s).holds, r.satisfies_identity(s).holds, "{}", s.name());
        }
        let text = to_loop_string(&r);
        prop_assert_eq!(to_loop_string(&parse_loop(&text).unwrap()), text);
    }
}

#[test]
fn four_moufang_schemes_agree_on_every_fixture() {
    for (name, q) in catalog_loops() {
        let v: Vec<bool> = [
            IdentityScheme::Moufang1,
            IdentityScheme::Moufang2,
            IdentityScheme::Moufang3,
            IdentityScheme::Moufang4,
        ]
        .iter()
        .map(|&s| q.satisfies_identity(s).holds)
        .collect();
        assert!(v.iter().all(|&b| b == v[0]), "{name}: {v:?}");
    }
}
