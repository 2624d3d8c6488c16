//! Congruence generation by union–find.
//!
//! A congruence of a loop is an equivalence relation compatible with `·`,
//! `\` and `/`. Compatibility only has to be propagated along the pairs that
//! actually merged two classes: every other related pair is a chain of those,
//! and translations map chains to chains. Each merge therefore costs `O(n)`
//! unions, and a full closure `O(n²)`.

use crate::loops::FiniteLoop;

pub(crate) struct CongruenceClosure<'a> {
    q: &'a FiniteLoop,
    parent: Vec<usize>,
    size: Vec<usize>,
    pending: Vec<(usize, usize)>,
}

impl<'a> CongruenceClosure<'a> {
    pub(crate) fn new(q: &'a FiniteLoop) -> Self {
        let n = q.order();
        CongruenceClosure {
            q,
            parent: (0..n).collect(),
            size: vec![1; n],
            pending: Vec::new(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.pending.push((a, b));
    }

    /// Adds `(a, b)` and closes under compatibility.
    pub(crate) fn join(&mut self, a: usize, b: usize) {
        self.union(a, b);
        let q = self.q;
        while let Some((a, b)) = self.pending.pop() {
            for z in q.elements() {
                self.union(q.mul(z, a), q.mul(z, b));
                self.union(q.mul(a, z), q.mul(b, z));
                self.union(q.ldiv(z, a), q.ldiv(z, b));
                self.union(q.ldiv(a, z), q.ldiv(b, z));
                self.union(q.rdiv(z, a), q.rdiv(z, b));
                self.union(q.rdiv(a, z), q.rdiv(b, z));
            }
        }
    }

    /// Puts `x` into the class of the identity.
    pub(crate) fn absorb(&mut self, x: usize) {
        if self.find(x) != self.find(0) {
            self.join(0, x);
        }
    }

    pub(crate) fn identity_class_size(&mut self) -> usize {
        let r = self.find(0);
        self.size[r]
    }

    pub(crate) fn identity_class(&mut self) -> Vec<usize> {
        let r = self.find(0);
        (0..self.parent.len()).filter(|&x| self.find(x) == r).collect()
    }
}
