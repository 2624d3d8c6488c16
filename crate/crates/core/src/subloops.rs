//! Subloops, normality, distinguished subloops, cosets and quotients.

use std::collections::{BTreeSet, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::congruence::CongruenceClosure;
use crate::error::{LoopError, Result};
use crate::loops::FiniteLoop;
use crate::mappings::{inner_l, inner_r, inner_t};

/// A subset of a loop certified closed under `·`, `\` and `/`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subloop {
    elements: Vec<usize>,
    members: FixedBitSet,
}

impl std::fmt::Debug for Subloop {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subloop{:?}", self.elements)
    }
}

impl Serialize for Subloop {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(s)
    }
}

impl Subloop {
    /// Certifies that `elems` is a subloop of `q`.
    pub fn new(q: &FiniteLoop, elems: &[usize]) -> Result<Self> {
        for &x in elems {
            q.check_element(x)?;
        }
        let sub = Self::from_unchecked(q.order(), elems.iter().copied());
        if !sub.contains(0) {
            return Err(LoopError::NotASubloop);
        }
        for &x in &sub.elements {
            for &y in &sub.elements {
                for v in [q.mul(x, y), q.ldiv(x, y), q.rdiv(x, y)] {
                    if !sub.contains(v) {
                        return Err(LoopError::NotASubloop);
                    }
                }
            }
        }
        Ok(sub)
    }

    pub(crate) fn from_unchecked(order: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut members = FixedBitSet::with_capacity(order);
        for x in elems {
            members.insert(x);
        }
        let elements = members.ones().collect();
        Subloop { elements, members }
    }

    pub fn trivial(q: &FiniteLoop) -> Self {
        Self::from_unchecked(q.order(), [0])
    }

    pub fn whole(q: &FiniteLoop) -> Self {
        Self::from_unchecked(q.order(), q.elements())
    }

    /// Sorted element indices.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.members.len() && self.members.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.members.len()
    }

    pub fn parent_order(&self) -> usize {
        self.members.len()
    }

    pub fn is_subset(&self, other: &Subloop) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subloop) -> Subloop {
        let mut m = self.members.clone();
        m.intersect_with(&other.members);
        Subloop {
            elements: m.ones().collect(),
            members: m,
        }
    }

    /// The subloop as a loop in its own right, with `local[i]` the parent
    /// index of local element `i`.
    pub fn to_loop(&self, q: &FiniteLoop) -> (FiniteLoop, Vec<usize>) {
        let local = self.elements.clone();
        let mut back = vec![usize::MAX; q.order()];
        for (i, &x) in local.iter().enumerate() {
            back[x] = i;
        }
        let k = local.len();
        let sub = FiniteLoop::from_fn(k, |a, b| back[q.mul(local[a], local[b])])
            .expect("subloop table is a loop");
        (sub, local)
    }
}

/// Least subloop containing `gens`, by worklist fixpoint.
pub fn generated_subloop(q: &FiniteLoop, gens: &[usize]) -> Subloop {
    let n = q.order();
    let mut members = FixedBitSet::with_capacity(n);
    let mut elems: Vec<usize> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let push = |x: usize, members: &mut FixedBitSet, queue: &mut VecDeque<usize>| {
        if !members.put(x) {
            queue.push_back(x);
        }
    };
    push(0, &mut members, &mut queue);
    for &g in gens {
        push(g, &mut members, &mut queue);
    }
    while let Some(x) = queue.pop_front() {
        elems.push(x);
        for &y in &elems {
            for v in [
                q.mul(x, y),
                q.mul(y, x),
                q.ldiv(x, y),
                q.ldiv(y, x),
                q.rdiv(x, y),
                q.rdiv(y, x),
            ] {
                push(v, &mut members, &mut queue);
            }
        }
    }
    Subloop {
        elements: members.ones().collect(),
        members,
    }
}

/// Invariance under every `T_u`, `L_{u,v}`, `R_{u,v}`.
pub fn is_normal(q: &FiniteLoop, x: &Subloop) -> bool {
    if x.is_trivial() || x.is_whole() {
        return true;
    }
    let els = x.elements();
    for u in q.elements() {
        if !els.iter().all(|&a| x.contains(inner_t(q, u, a))) {
            return false;
        }
        for v in q.elements() {
            if !els
                .iter()
                .all(|&a| x.contains(inner_l(q, u, v, a)) && x.contains(inner_r(q, u, v, a)))
            {
                return false;
            }
        }
    }
    true
}

/// Smallest normal subloop containing `s`.
///
/// Computed as the identity class of the congruence generated by the pairs
/// `(1, a)`, `a ∈ s`.
pub fn normal_closure(q: &FiniteLoop, s: &[usize]) -> Subloop {
    let mut cc = CongruenceClosure::new(q);
    for &a in s {
        cc.absorb(a);
    }
    Subloop::from_unchecked(q.order(), cc.identity_class())
}

/// Smallest normal subloop containing `s`, by alternating closure under the
/// loop operations and under the inner mapping generators.
///
/// Slower than [`normal_closure`]; kept as an independent route.
pub fn normal_closure_by_inner_maps(q: &FiniteLoop, s: &[usize]) -> Subloop {
    let mut current = generated_subloop(q, s);
    loop {
        let mut images: BTreeSet<usize> = current.elements().iter().copied().collect();
        for &a in current.elements() {
            for u in q.elements() {
                images.insert(inner_t(q, u, a));
                for v in q.elements() {
                    images.insert(inner_l(q, u, v, a));
                    images.insert(inner_r(q, u, v, a));
                }
            }
        }
        if images.len() == current.len() {
            return current;
        }
        let gens: Vec<usize> = images.into_iter().collect();
        current = generated_subloop(q, &gens);
    }
}

/// Distinguished subsets defined by membership scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distinguished {
    LeftNucleus,
    MiddleNucleus,
    RightNucleus,
    Nucleus,
    Center,
    Commutant,
}

impl Distinguished {
    pub const ALL: [Distinguished; 6] = [
        Distinguished::LeftNucleus,
        Distinguished::MiddleNucleus,
        Distinguished::RightNucleus,
        Distinguished::Nucleus,
        Distinguished::Center,
        Distinguished::Commutant,
    ];
}

/// Element set of the requested kind. The commutant need not be a subloop.
pub fn distinguished_subloop(q: &FiniteLoop, kind: Distinguished) -> Vec<usize> {
    let all = |pred: &dyn Fn(usize, usize, usize) -> bool, x: usize| {
        q.elements()
            .all(|y| q.elements().all(|z| pred(x, y, z)))
    };
    let left = |x: usize| all(&|x, y, z| q.mul(x, q.mul(y, z)) == q.mul(q.mul(x, y), z), x);
    let middle = |x: usize| all(&|x, y, z| q.mul(y, q.mul(x, z)) == q.mul(q.mul(y, x), z), x);
    let right = |x: usize| all(&|x, y, z| q.mul(y, q.mul(z, x)) == q.mul(q.mul(y, z), x), x);
    let commutes = |x: usize| q.elements().all(|y| q.mul(x, y) == q.mul(y, x));
    q.elements()
        .filter(|&x| match kind {
            Distinguished::LeftNucleus => left(x),
            Distinguished::MiddleNucleus => middle(x),
            Distinguished::RightNucleus => right(x),
            Distinguished::Nucleus => left(x) && middle(x) && right(x),
            Distinguished::Commutant => commutes(x),
            Distinguished::Center => commutes(x) && left(x) && middle(x) && right(x),
        })
        .collect()
}

pub fn nucleus(q: &FiniteLoop) -> Subloop {
    Subloop::from_unchecked(q.order(), distinguished_subloop(q, Distinguished::Nucleus))
}

pub fn center(q: &FiniteLoop) -> Subloop {
    Subloop::from_unchecked(q.order(), distinguished_subloop(q, Distinguished::Center))
}

/// Left cosets `uX`, each sorted, ordered by minimal element.
pub fn cosets(q: &FiniteLoop, x: &Subloop) -> Result<Vec<Vec<usize>>> {
    let n = q.order();
    let mut owner = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for u in q.elements() {
        if owner[u] != usize::MAX {
            continue;
        }
        let mut coset: Vec<usize> = x.elements().iter().map(|&a| q.mul(u, a)).collect();
        coset.sort_unstable();
        for &c in &coset {
            if owner[c] != usize::MAX {
                return Err(LoopError::NotPartition);
            }
            owner[c] = out.len();
        }
        out.push(coset);
    }
    Ok(out)
}

/// Minimal representative of each left coset; the first is always 0.
pub fn transversal(q: &FiniteLoop, x: &Subloop) -> Result<Vec<usize>> {
    Ok(cosets(q, x)?.into_iter().map(|c| c[0]).collect())
}

/// `Q/X` together with the natural projection and a section.
#[derive(Debug, Clone)]
pub struct QuotientResult {
    pub quotient: FiniteLoop,
    /// `projection[a]` is the coset index of `a`.
    pub projection: Vec<usize>,
    /// `section[k]` is the minimal element of coset `k`.
    pub section: Vec<usize>,
}

impl QuotientResult {
    /// Image of a subloop of the parent under the projection.
    pub fn image(&self, x: &Subloop) -> Subloop {
        Subloop::from_unchecked(
            self.quotient.order(),
            x.elements().iter().map(|&a| self.projection[a]),
        )
    }

    /// Full preimage of a subloop of the quotient.
    pub fn preimage(&self, y: &Subloop) -> Subloop {
        Subloop::from_unchecked(
            self.projection.len(),
            self.projection
                .iter()
                .enumerate()
                .filter(|(_, &k)| y.contains(k))
                .map(|(a, _)| a),
        )
    }
}

pub fn quotient(q: &FiniteLoop, x: &Subloop) -> Result<QuotientResult> {
    if !is_normal(q, x) {
        return Err(LoopError::NotNormal);
    }
    let cs = cosets(q, x)?;
    let mut projection = vec![0usize; q.order()];
    for (k, c) in cs.iter().enumerate() {
        for &a in c {
            projection[a] = k;
        }
    }
    let section: Vec<usize> = cs.iter().map(|c| c[0]).collect();
    let quotient = FiniteLoop::from_fn(section.len(), |i, j| {
        projection[q.mul(section[i], section[j])]
    })?;
    Ok(QuotientResult {
        quotient,
        projection,
        section,
    })
}

/// Every normal subloop, sorted by size then elements.
///
/// Each normal subloop is the join of the normal closures of its elements,
/// so the single-generator closures are joined until nothing new appears.
pub fn all_normal_subloops(q: &FiniteLoop, cap: usize) -> Result<Vec<Subloop>> {
    if q.order() > cap {
        return Err(LoopError::OrderCapExceeded {
            order: q.order(),
            cap,
        });
    }
    let mut found: HashSet<Subloop> = HashSet::new();
    let mut lattice: Vec<Subloop> = Vec::new();
    let mut queue: VecDeque<Subloop> = VecDeque::new();
    let add = |s: Subloop, found: &mut HashSet<Subloop>, lattice: &mut Vec<Subloop>, queue: &mut VecDeque<Subloop>| {
        if found.insert(s.clone()) {
            lattice.push(s.clone());
            queue.push_back(s);
        }
    };
    add(Subloop::trivial(q), &mut found, &mut lattice, &mut queue);
    for a in 1..q.order() {
        add(normal_closure(q, &[a]), &mut found, &mut lattice, &mut queue);
    }
    // joins against everything already present
    queue.clear();
    queue.extend(lattice.iter().cloned());
    while let Some(s) = queue.pop_front() {
        let snapshot = lattice.clone();
        for t in &snapshot {
            if s.is_subset(t) || t.is_subset(&s) {
                continue;
            }
            let mut gens: Vec<usize> = s.elements().to_vec();
            gens.extend_from_slice(t.elements());
            add(normal_closure(q, &gens), &mut found, &mut lattice, &mut queue);
        }
    }
    lattice.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.elements().cmp(b.elements())));
    Ok(lattice)
}

/// True iff the only normal subloops are `{1}` and `Q` (and `Q` is nontrivial).
pub fn is_simple(q: &FiniteLoop) -> bool {
    q.order() > 1 && (1..q.order()).all(|a| normal_closure(q, &[a]).is_whole())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteLoop {
        FiniteLoop::from_fn(n, |a, b| (a + b) % n).unwrap()
    }

    /// S3 as permutations of {0,1,2}, identity first.
    fn s3() -> (FiniteLoop, Vec<[usize; 3]>) {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let q = FiniteLoop::from_fn(6, |a, b| {
            let (p, r) = (perms[a], perms[b]);
            idx([p[r[0]], p[r[1]], p[r[2]]])
        })
        .unwrap();
        (q, perms)
    }

    #[test]
    fn generated_subloops_in_c6() {
        let q = cyclic(6);
        assert_eq!(generated_subloop(&q, &[]).elements(), &[0]);
        assert_eq!(generated_subloop(&q, &[2]).elements(), &[0, 2, 4]);
        assert_eq!(generated_subloop(&q, &[2, 3]).len(), 6);
    }

    #[test]
    fn normality_in_s3() {
        let (q, _) = s3();
        let a3 = Subloop::new(&q, &[0, 1, 2]).unwrap();
        let t = Subloop::new(&q, &[0, 3]).unwrap();
        assert!(is_normal(&q, &a3));
        assert!(!is_normal(&q, &t));
        assert!(is_normal(&q, &Subloop::trivial(&q)));
        assert!(is_normal(&q, &Subloop::whole(&q)));
        assert!(normal_closure(&q, &[3]).is_whole());
        assert_eq!(normal_closure(&q, &[1]), a3);
        assert!(normal_closure(&q, &[]).is_trivial());
    }

    #[test]
    fn closures_agree_in_s3() {
        let (q, _) = s3();
        for a in q.elements() {
            assert_eq!(normal_closure(&q, &[a]), normal_closure_by_inner_maps(&q, &[a]));
        }
    }

    #[test]
    fn non_subloop_is_rejected() {
        let q = cyclic(6);
        assert_eq!(Subloop::new(&q, &[0, 1]).unwrap_err(), LoopError::NotASubloop);
        assert_eq!(Subloop::new(&q, &[3]).unwrap_err(), LoopError::NotASubloop);
    }

    #[test]
    fn cosets_in_c6() {
        let q = cyclic(6);
        let x = Subloop::new(&q, &[0, 3]).unwrap();
        assert_eq!(
            cosets(&q, &x).unwrap(),
            vec![vec![0, 3], vec![1, 4], vec![2, 5]]
        );
        assert_eq!(transversal(&q, &x).unwrap(), vec![0, 1, 2]);
        let whole = Subloop::whole(&q);
        assert_eq!(transversal(&q, &whole).unwrap(), vec![0]);
    }

    #[test]
    fn quotients() {
        let q = cyclic(6);
        let triv = quotient(&q, &Subloop::trivial(&q)).unwrap();
        assert_eq!(triv.quotient, q);
        let (s, _) = s3();
        let a3 = Subloop::new(&s, &[0, 1, 2]).unwrap();
        let r = quotient(&s, &a3).unwrap();
        assert_eq!(r.quotient, cyclic(2));
        for a in s.elements() {
            for b in s.elements() {
                assert_eq!(
                    r.projection[s.mul(a, b)],
                    r.quotient.mul(r.projection[a], r.projection[b])
                );
            }
        }
        for k in r.quotient.elements() {
            assert_eq!(r.projection[r.section[k]], k);
        }
        let t = Subloop::new(&s, &[0, 3]).unwrap();
        assert_eq!(quotient(&s, &t).unwrap_err(), LoopError::NotNormal);
    }

    #[test]
    fn normal_lattices() {
        let triv = FiniteLoop::trivial();
        assert_eq!(all_normal_subloops(&triv, 64).unwrap().len(), 1);
        let q = cyclic(6);
        let lat: Vec<Vec<usize>> = all_normal_subloops(&q, 64)
            .unwrap()
            .into_iter()
            .map(|s| s.elements().to_vec())
            .collect();
        assert_eq!(
            lat,
            vec![vec![0], vec![0, 3], vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]
        );
        assert_eq!(
            all_normal_subloops(&q, 4).unwrap_err(),
            LoopError::OrderCapExceeded { order: 6, cap: 4 }
        );
    }

    #[test]
    fn distinguished_in_abelian_group() {
        let q = cyclic(5);
        for kind in Distinguished::ALL {
            assert_eq!(distinguished_subloop(&q, kind).len(), 5);
        }
        let (s, _) = s3();
        assert_eq!(distinguished_subloop(&s, Distinguished::Center), vec![0]);
        assert_eq!(distinguished_subloop(&s, Distinguished::Nucleus).len(), 6);
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&cyclic(5)));
        assert!(!is_simple(&cyclic(6)));
        assert!(!is_simple(&FiniteLoop::trivial()));
    }
}
