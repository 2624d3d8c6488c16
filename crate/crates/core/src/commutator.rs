//! The congruence commutator of normal subloops, and series deciders.
//!
//! `[X, Y]_Q` is the normal subloop generated by the quotients
//! `T_{u₁}(a)/T_{v₁}(a)`, `L_{u₁,u₂}(a)/L_{v₁,v₂}(a)` and
//! `R_{u₁,u₂}(a)/R_{v₁,v₂}(a)` over `a ∈ X`, `vᵢ ∈ uᵢY`.

use std::collections::HashMap;

use serde::Serialize;

use crate::congruence::CongruenceClosure;
use crate::error::{LoopError, Result};
use crate::loops::{FiniteLoop, Side};
use crate::mappings::{inner_l, inner_r, inner_t};
use crate::subloops::{
    all_normal_subloops, center, generated_subloop, is_normal, normal_closure, quotient, Subloop,
};

fn require_normal(q: &FiniteLoop, x: &Subloop) -> Result<()> {
    if x.parent_order() != q.order() || !is_normal(q, x) {
        return Err(LoopError::NotNormal);
    }
    Ok(())
}

/// `[X, Y]_Q`.
///
/// A quotient `b/c` lies in a normal subloop `N` iff `b` and `c` are
/// congruent modulo `N`, so the generators are fed to a congruence closure as
/// pairs. Moving from `(u₁, u₂)` to `(v₁, v₂)` one coordinate at a time gives
/// a chain of generator pairs, so only single-coordinate moves are needed.
pub fn commutator(q: &FiniteLoop, x: &Subloop, y: &Subloop) -> Result<Subloop> {
    require_normal(q, x)?;
    require_normal(q, y)?;
    let n = q.order();
    let mut cc = CongruenceClosure::new(q);
    if x.is_trivial() || y.is_trivial() {
        return Ok(Subloop::trivial(q));
    }
    let ys: Vec<usize> = y.elements().iter().copied().filter(|&b| b != 0).collect();
    let join = |cc: &mut CongruenceClosure, b: usize, c: usize| -> bool {
        if cc.find(b) != cc.find(c) {
            cc.join(b, c);
        }
        cc.identity_class_size() == n
    };
    'outer: for &a in x.elements() {
        for u in q.elements() {
            let t = inner_t(q, u, a);
            for &b in &ys {
                if join(&mut cc, t, inner_t(q, q.mul(u, b), a)) {
                    break 'outer;
                }
            }
            for w in q.elements() {
                let l = inner_l(q, u, w, a);
                let r = inner_r(q, u, w, a);
                for &b in &ys {
                    let ub = q.mul(u, b);
                    let wb = q.mul(w, b);
                    if join(&mut cc, l, inner_l(q, ub, w, a))
                        || join(&mut cc, l, inner_l(q, u, wb, a))
                        || join(&mut cc, r, inner_r(q, ub, w, a))
                        || join(&mut cc, r, inner_r(q, u, wb, a))
                    {
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(Subloop::from_unchecked(n, cc.identity_class()))
}

/// `[X, Y]_Q` by the literal generator set: every pair `(u₁, u₂)`,
/// `(v₁, v₂)` with `vᵢ ∈ uᵢY`, quotients taken on the given side, followed
/// by a normal closure. Much slower than [`commutator`].
pub fn commutator_reference(
    q: &FiniteLoop,
    x: &Subloop,
    y: &Subloop,
    side: Side,
) -> Result<Subloop> {
    require_normal(q, x)?;
    require_normal(q, y)?;
    let div = |b: usize, c: usize| match side {
        Side::Right => q.rdiv(b, c),
        Side::Left => q.ldiv(c, b),
    };
    let mut gens = vec![false; q.order()];
    for &a in x.elements() {
        for u1 in q.elements() {
            for &b1 in y.elements() {
                let v1 = q.mul(u1, b1);
                gens[div(inner_t(q, u1, a), inner_t(q, v1, a))] = true;
                for u2 in q.elements() {
                    for &b2 in y.elements() {
                        let v2 = q.mul(u2, b2);
                        gens[div(inner_l(q, u1, u2, a), inner_l(q, v1, v2, a))] = true;
                        gens[div(inner_r(q, u1, u2, a), inner_r(q, v1, v2, a))] = true;
                    }
                }
            }
        }
    }
    let gens: Vec<usize> = (0..q.order()).filter(|&g| gens[g]).collect();
    Ok(normal_closure(q, &gens))
}

/// `[X, Q]_Q = 1`, which happens exactly when `X ≤ Z(Q)`.
pub fn is_central(q: &FiniteLoop, x: &Subloop) -> Result<bool> {
    let central = commutator(q, x, &Subloop::whole(q))?.is_trivial();
    debug_assert_eq!(central, x.is_subset(&center(q)));
    Ok(central)
}

/// `[X, X]_Q = 1`.
pub fn is_abelian_in(q: &FiniteLoop, x: &Subloop) -> Result<bool> {
    Ok(commutator(q, x, x)?.is_trivial())
}

/// Normal closure in `Q` of the commutator and associator deviations
/// `(xy)/(yx)` and `(x·yz)\(xy·z)` of elements of `H`. For `H` normal this
/// is the least `Q`-normal `N ≤ H` with `H/N` a commutative group.
pub fn deviation_closure(q: &FiniteLoop, h: &Subloop) -> Subloop {
    let n = q.order();
    let mut cc = CongruenceClosure::new(q);
    let els = h.elements();
    'outer: for &x in els {
        for &y in els {
            let xy = q.mul(x, y);
            let yx = q.mul(y, x);
            if cc.find(xy) != cc.find(yx) {
                cc.join(xy, yx);
            }
            for &z in els {
                let a = q.mul(x, q.mul(y, z));
                let b = q.mul(xy, z);
                if cc.find(a) != cc.find(b) {
                    cc.join(a, b);
                    if cc.identity_class_size() == n {
                        break 'outer;
                    }
                }
            }
        }
    }
    Subloop::from_unchecked(n, cc.identity_class())
}

/// The derived subloop: the least normal `H` with `Q/H` a commutative group.
pub fn derived_subloop(q: &FiniteLoop) -> Subloop {
    deviation_closure(q, &Subloop::whole(q))
}

/// Checks that `Q/H` is a commutative group and that every normal subloop in
/// `lattice` with a commutative-group quotient contains `H`.
pub fn verify_derived_subloop(q: &FiniteLoop, h: &Subloop, lattice: &[Subloop]) -> bool {
    let abelian_quotient = |n: &Subloop| {
        quotient(q, n)
            .map(|r| r.quotient.is_commutative_group())
            .unwrap_or(false)
    };
    abelian_quotient(h)
        && lattice
            .iter()
            .filter(|n| abelian_quotient(n))
            .all(|n| h.is_subset(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    Classical,
    Congruence,
    Central,
}

/// What each step `Qᵢ ≥ Qᵢ₊₁` of a witness asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepCertificate {
    /// `Qᵢ/Qᵢ₊₁` is a commutative group.
    CommutativeGroupFactor,
    /// `Qᵢ/Qᵢ₊₁` is abelian in `Q/Qᵢ₊₁`.
    AbelianInQuotient,
    /// `Qᵢ/Qᵢ₊₁ ≤ Z(Q/Qᵢ₊₁)`.
    CentralInQuotient,
}

/// A descending chain `Q = Q₀ ≥ … ≥ Qₙ = {1}` of normal subloops of `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesWitness {
    pub kind: SeriesKind,
    pub chain: Vec<Subloop>,
    pub certificates: Vec<StepCertificate>,
}

impl SeriesWitness {
    fn new(kind: SeriesKind, chain: Vec<Subloop>) -> Self {
        let cert = match kind {
            SeriesKind::Classical => StepCertificate::CommutativeGroupFactor,
            SeriesKind::Congruence => StepCertificate::AbelianInQuotient,
            SeriesKind::Central => StepCertificate::CentralInQuotient,
        };
        let certificates = vec![cert; chain.len().saturating_sub(1)];
        SeriesWitness {
            kind,
            chain,
            certificates,
        }
    }

    pub fn length(&self) -> usize {
        self.certificates.len()
    }
}

/// Re-checks a witness from scratch.
pub fn verify_series(q: &FiniteLoop, w: &SeriesWitness) -> bool {
    let chain = &w.chain;
    if chain.is_empty()
        || !chain[0].is_whole()
        || !chain.last().unwrap().is_trivial()
        || w.certificates.len() + 1 != chain.len()
    {
        return false;
    }
    if !chain.iter().all(|s| s.parent_order() == q.order() && is_normal(q, s)) {
        return false;
    }
    chain.windows(2).zip(&w.certificates).all(|(pair, cert)| {
        let (upper, lower) = (&pair[0], &pair[1]);
        if !lower.is_subset(upper) {
            return false;
        }
        let Ok(r) = quotient(q, lower) else {
            return false;
        };
        let image = r.image(upper);
        match cert {
            StepCertificate::CommutativeGroupFactor => {
                image.to_loop(&r.quotient).0.is_commutative_group()
            }
            StepCertificate::AbelianInQuotient => {
                is_abelian_in(&r.quotient, &image).unwrap_or(false)
            }
            StepCertificate::CentralInQuotient => image.is_subset(&center(&r.quotient)),
        }
    })
}

/// Classical solvability through the series `D₀ = Q`,
/// `Dᵢ₊₁ = deviation_closure(Dᵢ)`, each term normal in `Q`.
///
/// If some normal series has commutative-group factors then its `i`-th term
/// contains `Dᵢ`, so this series reaches `{1}` exactly when `Q` is
/// classically solvable.
pub fn classical_solvable(q: &FiniteLoop) -> Option<SeriesWitness> {
    let mut chain = vec![Subloop::whole(q)];
    loop {
        let cur = chain.last().unwrap();
        if cur.is_trivial() {
            return Some(SeriesWitness::new(SeriesKind::Classical, chain));
        }
        let next = deviation_closure(q, cur);
        if next == *cur {
            return None;
        }
        chain.push(next);
    }
}

/// The derived series in the older sense: `Q⁽ⁱ⁺¹⁾` is the derived subloop of
/// `Q⁽ⁱ⁾` taken as a loop in its own right. Terms need not be normal in `Q`.
pub fn bruck_derived_series(q: &FiniteLoop) -> Vec<Subloop> {
    let mut series = vec![Subloop::whole(q)];
    loop {
        let cur = series.last().unwrap();
        if cur.is_trivial() {
            return series;
        }
        let (sub, local) = cur.to_loop(q);
        let d = derived_subloop(&sub);
        let next = Subloop::from_unchecked(q.order(), d.elements().iter().map(|&i| local[i]));
        if next == *cur {
            return series;
        }
        series.push(next);
    }
}

/// `R₀ = Q`, `Rᵢ₊₁ = [Rᵢ, Rᵢ]_Q`, until it reaches `{1}` or repeats.
pub fn congruence_derived_series(q: &FiniteLoop) -> Vec<Subloop> {
    let mut series = vec![Subloop::whole(q)];
    loop {
        let cur = series.last().unwrap();
        if cur.is_trivial() {
            return series;
        }
        let next = commutator(q, cur, cur).expect("series terms are normal");
        let stop = next == *cur || next.is_trivial();
        series.push(next);
        if stop {
            return series;
        }
    }
}

/// Deterministic relabeling: identity first, then breadth-first products of
/// labelled elements, restarting from the least unlabelled element when
/// stuck. Returns the relabeled table and `perm[old] = new`.
pub fn canonical_relabeling(q: &FiniteLoop) -> (FiniteLoop, Vec<usize>) {
    let n = q.order();
    let mut perm = vec![usize::MAX; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let label = |x: usize, perm: &mut Vec<usize>, order: &mut Vec<usize>| {
        if perm[x] == usize::MAX {
            perm[x] = order.len();
            order.push(x);
        }
    };
    label(0, &mut perm, &mut order);
    let mut next_seed = 1;
    while order.len() < n {
        while perm[next_seed] != usize::MAX {
            next_seed += 1;
        }
        label(next_seed, &mut perm, &mut order);
        let mut i = 0;
        while i < order.len() {
            for j in 0..=i {
                let (a, b) = (order[i], order[j]);
                label(q.mul(a, b), &mut perm, &mut order);
                label(q.mul(b, a), &mut perm, &mut order);
            }
            i += 1;
        }
    }
    let relabeled = q.relabel(&perm).expect("permutation of a loop");
    (relabeled, perm)
}

pub const DEFAULT_ORDER_CAP: usize = 512;

/// Search for a normal series whose factors are abelian in the corresponding
/// quotients. `None` only after every choice at every level failed.
pub fn congruence_solvable(q: &FiniteLoop, cap: usize) -> Result<Option<SeriesWitness>> {
    if q.order() > cap {
        return Err(LoopError::OrderCapExceeded {
            order: q.order(),
            cap,
        });
    }
    let mut memo = HashMap::new();
    let chain = solve_congruence(q, cap, &mut memo)?;
    Ok(chain.map(|c| {
        let chain = c
            .into_iter()
            .map(|els| Subloop::from_unchecked(q.order(), els))
            .collect();
        SeriesWitness::new(SeriesKind::Congruence, chain)
    }))
}

type Chain = Vec<Vec<usize>>;

fn solve_congruence(
    q: &FiniteLoop,
    cap: usize,
    memo: &mut HashMap<FiniteLoop, Option<Chain>>,
) -> Result<Option<Chain>> {
    let (canon, perm) = canonical_relabeling(q);
    let canon_chain = match memo.get(&canon) {
        Some(hit) => hit.clone(),
        None => {
            let found = search_congruence(&canon, cap, memo)?;
            memo.insert(canon, found.clone());
            found
        }
    };
    let mut inverse = vec![0usize; perm.len()];
    for (old, &new) in perm.iter().enumerate() {
        inverse[new] = old;
    }
    Ok(canon_chain.map(|c| {
        c.into_iter()
            .map(|els| {
                let mut v: Vec<usize> = els.into_iter().map(|e| inverse[e]).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }))
}

fn search_congruence(
    q: &FiniteLoop,
    cap: usize,
    memo: &mut HashMap<FiniteLoop, Option<Chain>>,
) -> Result<Option<Chain>> {
    if q.order() == 1 {
        return Ok(Some(vec![vec![0]]));
    }
    let mut lattice = all_normal_subloops(q, cap)?;
    // larger kernels leave smaller quotients
    lattice.reverse();
    for x in lattice.iter().filter(|x| !x.is_trivial()) {
        if !is_abelian_in(q, x)? {
            continue;
        }
        let r = quotient(q, x)?;
        if let Some(sub) = solve_congruence(&r.quotient, cap, memo)? {
            let mut chain: Chain = sub
                .into_iter()
                .map(|els| {
                    let y = Subloop::from_unchecked(r.quotient.order(), els);
                    r.preimage(&y).elements().to_vec()
                })
                .collect();
            chain.push(vec![0]);
            return Ok(Some(chain));
        }
    }
    Ok(None)
}

/// Upper central series `{1} = Z₀ ≤ Z₁ ≤ …`, with `Zᵢ₊₁/Zᵢ = Z(Q/Zᵢ)`,
/// listed until it stops growing.
pub fn upper_central_series(q: &FiniteLoop) -> Vec<Subloop> {
    let mut series = vec![Subloop::trivial(q)];
    loop {
        let cur = series.last().unwrap();
        let r = quotient(q, cur).expect("central series terms are normal");
        let next = r.preimage(&center(&r.quotient));
        if next == *cur {
            return series;
        }
        series.push(next);
    }
}

/// A central series, if `Q` is centrally nilpotent.
pub fn nilpotent(q: &FiniteLoop) -> Option<SeriesWitness> {
    let mut series = upper_central_series(q);
    if !series.last().unwrap().is_whole() {
        return None;
    }
    series.reverse();
    Some(SeriesWitness::new(SeriesKind::Central, series))
}

pub fn nilpotency_class(q: &FiniteLoop) -> Option<usize> {
    nilpotent(q).map(|w| w.length())
}

/// Subloop generated by the group commutators `x⁻¹y⁻¹xy`, closed to a normal
/// subloop. Meaningful for groups only.
pub fn group_commutator_subgroup(q: &FiniteLoop, x: &Subloop, y: &Subloop) -> Subloop {
    let mut gens = Vec::new();
    for &a in x.elements() {
        for &b in y.elements() {
            gens.push(q.mul(q.mul(q.inv(a), q.inv(b)), q.mul(a, b)));
        }
    }
    normal_closure(q, generated_subloop(q, &gens).elements())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteLoop {
        FiniteLoop::from_fn(n, |a, b| (a + b) % n).unwrap()
    }

    fn perm_group(perms: &[Vec<usize>]) -> FiniteLoop {
        let idx = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        FiniteLoop::from_fn(perms.len(), |a, b| {
            let comp: Vec<usize> = perms[b].iter().map(|&i| perms[a][i]).collect();
            idx(&comp)
        })
        .unwrap()
    }

    fn s3() -> FiniteLoop {
        perm_group(&[
            vec![0, 1, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![1, 0, 2],
            vec![0, 2, 1],
            vec![2, 1, 0],
        ])
    }

    #[test]
    fn trivial_arguments_give_trivial_commutator() {
        let q = s3();
        let whole = Subloop::whole(&q);
        let one = Subloop::trivial(&q);
        assert!(commutator(&q, &one, &whole).unwrap().is_trivial());
        assert!(commutator(&q, &whole, &one).unwrap().is_trivial());
    }

    #[test]
    fn s3_commutator_is_a3() {
        let q = s3();
        let whole = Subloop::whole(&q);
        assert_eq!(commutator(&q, &whole, &whole).unwrap().elements(), &[0, 1, 2]);
        assert_eq!(derived_subloop(&q).elements(), &[0, 1, 2]);
        let a3 = Subloop::new(&q, &[0, 1, 2]).unwrap();
        assert!(is_abelian_in(&q, &a3).unwrap());
        assert!(!is_central(&q, &a3).unwrap());
    }

    #[test]
    fn reference_routes_agree_on_s3() {
        let q = s3();
        let lattice = all_normal_subloops(&q, 64).unwrap();
        for x in &lattice {
            for y in &lattice {
                let fast = commutator(&q, x, y).unwrap();
                assert_eq!(fast, commutator_reference(&q, x, y, Side::Right).unwrap());
                assert_eq!(fast, commutator_reference(&q, x, y, Side::Left).unwrap());
                assert_eq!(fast, group_commutator_subgroup(&q, x, y));
            }
        }
    }

    #[test]
    fn non_normal_argument_rejected() {
        let q = s3();
        let t = Subloop::new(&q, &[0, 3]).unwrap();
        assert_eq!(
            commutator(&q, &t, &Subloop::whole(&q)).unwrap_err(),
            LoopError::NotNormal
        );
    }

    #[test]
    fn series_on_small_groups() {
        let c6 = cyclic(6);
        assert_eq!(congruence_derived_series(&c6).len(), 2);
        assert_eq!(nilpotency_class(&c6), Some(1));
        assert_eq!(nilpotency_class(&FiniteLoop::trivial()), Some(0));

        let q = s3();
        let series: Vec<Vec<usize>> = congruence_derived_series(&q)
            .iter()
            .map(|s| s.elements().to_vec())
            .collect();
        assert_eq!(series, vec![vec![0, 1, 2, 3, 4, 5], vec![0, 1, 2], vec![0]]);
        assert!(nilpotent(&q).is_none());

        let w = classical_solvable(&q).unwrap();
        assert!(verify_series(&q, &w));
        let w = congruence_solvable(&q, 64).unwrap().unwrap();
        assert_eq!(w.kind, SeriesKind::Congruence);
        assert!(verify_series(&q, &w));
    }

    #[test]
    fn commutative_group_is_one_step_solvable() {
        let q = cyclic(12);
        let w = congruence_solvable(&q, 64).unwrap().unwrap();
        assert_eq!(w.length(), 1);
        assert!(verify_series(&q, &nilpotent(&q).unwrap()));
    }

    #[test]
    fn tampered_witness_fails_verification() {
        let q = s3();
        let mut w = classical_solvable(&q).unwrap();
        w.chain.remove(1);
        w.certificates.pop();
        assert!(!verify_series(&q, &w));
    }

    #[test]
    fn derived_subloop_is_minimal() {
        let q = s3();
        let lattice = all_normal_subloops(&q, 64).unwrap();
        assert!(verify_derived_subloop(&q, &derived_subloop(&q), &lattice));
        assert!(!verify_derived_subloop(&q, &Subloop::trivial(&q), &lattice));
    }

    #[test]
    fn canonical_relabeling_fixes_identity() {
        let q = s3();
        let (c, perm) = canonical_relabeling(&q);
        assert_eq!(perm[0], 0);
        assert_eq!(c.order(), 6);
        let (again, _) = canonical_relabeling(&c);
        assert_eq!(c, again);
    }

    #[test]
    fn order_cap_enforced() {
        assert_eq!(
            congruence_solvable(&cyclic(10), 8).unwrap_err(),
            LoopError::OrderCapExceeded { order: 10, cap: 8 }
        );
    }
}
