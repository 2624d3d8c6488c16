//! Finite loops stored as validated Cayley tables.
//!
//! Element `0` is always the two-sided identity. Both divisions are
//! precomputed, so `mul`, `ldiv` and `rdiv` are single table reads.

use std::collections::HashSet;
use std::fmt;
use std::ops::Mul;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Line, LoopError, Result};

/// Largest supported order; elements are stored as `u16`.
pub const MAX_ORDER: usize = 1 << 16;

/// Which side a division is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `a \ b`, the unique `c` with `a·c = b`.
    Left,
    /// `a / b`, the unique `c` with `c·b = a`.
    Right,
}

/// A finite loop: a latin square with two-sided identity `0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteLoop {
    n: usize,
    table: Vec<u16>,
    ldiv: Vec<u16>,
    rdiv: Vec<u16>,
}

/// Reported when ingestion had to move the identity to index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    /// Index of the identity in the raw input.
    pub original_identity: usize,
    /// `permutation[old] = new`.
    pub permutation: Vec<usize>,
}

impl fmt::Debug for FiniteLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteLoop(order {})", self.n)
    }
}

impl FiniteLoop {
    /// Validates a raw table, relabeling if the identity is not element 0.
    pub fn from_table(raw: &[Vec<usize>]) -> Result<Self> {
        Self::from_table_reporting(raw).map(|(q, _)| q)
    }

    /// Like [`FiniteLoop::from_table`], also returning the relabeling applied, if any.
    pub fn from_table_reporting(raw: &[Vec<usize>]) -> Result<(Self, Option<Relabeling>)> {
        let n = raw.len();
        if n == 0 {
            return Err(LoopError::Empty);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in raw.iter().enumerate() {
            if row.len() != n {
                return Err(LoopError::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat_reporting(n, flat)
    }

    /// Validates a row-major table of length `n*n`.
    pub fn from_flat(n: usize, flat: Vec<usize>) -> Result<Self> {
        Self::from_flat_reporting(n, flat).map(|(q, _)| q)
    }

    /// Builds a loop from a product function on `0..n`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut flat = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                flat.push(f(a, b));
            }
        }
        Self::from_flat(n, flat)
    }

    pub fn from_flat_reporting(n: usize, flat: Vec<usize>) -> Result<(Self, Option<Relabeling>)> {
        if n == 0 {
            return Err(LoopError::Empty);
        }
        if n > MAX_ORDER {
            return Err(LoopError::OrderTooLarge(n));
        }
        if flat.len() != n * n {
            return Err(LoopError::NotSquare {
                row: flat.len() / n,
                len: flat.len() % n,
                expected: n,
            });
        }
        for (k, &v) in flat.iter().enumerate() {
            if v >= n {
                return Err(LoopError::EntryOutOfRange {
                    row: k / n,
                    col: k % n,
                    value: v,
                    order: n,
                });
            }
        }
        check_latin(n, &flat)?;
        let e = (0..n)
            .find(|&e| (0..n).all(|x| flat[e * n + x] == x && flat[x * n + e] == x))
            .ok_or(LoopError::NoTwoSidedIdentity)?;
        let (flat, relabeling) = if e == 0 {
            (flat, None)
        } else {
            let perm: Vec<usize> = (0..n)
                .map(|x| match x {
                    0 => e,
                    x if x == e => 0,
                    x => x,
                })
                .collect();
            let mut out = vec![0usize; n * n];
            for a in 0..n {
                for b in 0..n {
                    out[perm[a] * n + perm[b]] = perm[flat[a * n + b]];
                }
            }
            (
                out,
                Some(Relabeling {
                    original_identity: e,
                    permutation: perm,
                }),
            )
        };
        Ok((Self::assemble(n, &flat), relabeling))
    }

    fn assemble(n: usize, flat: &[usize]) -> Self {
        let table: Vec<u16> = flat.iter().map(|&v| v as u16).collect();
        let mut ldiv = vec![0u16; n * n];
        let mut rdiv = vec![0u16; n * n];
        for a in 0..n {
            for c in 0..n {
                let b = flat[a * n + c];
                // a·c = b  =>  a\b = c  and  b/c = a
                ldiv[a * n + b] = c as u16;
                rdiv[b * n + c] = a as u16;
            }
        }
        FiniteLoop {
            n,
            table,
            ldiv,
            rdiv,
        }
    }

    /// The trivial loop of order 1.
    pub fn trivial() -> Self {
        Self::assemble(1, &[0])
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    /// `a \ b`: the unique `c` with `a·c = b`.
    #[inline]
    pub fn ldiv(&self, a: usize, b: usize) -> usize {
        self.ldiv[a * self.n + b] as usize
    }

    /// `a / b`: the unique `c` with `c·b = a`.
    #[inline]
    pub fn rdiv(&self, a: usize, b: usize) -> usize {
        self.rdiv[a * self.n + b] as usize
    }

    pub fn divide(&self, side: Side, a: usize, b: usize) -> usize {
        match side {
            Side::Left => self.ldiv(a, b),
            Side::Right => self.rdiv(a, b),
        }
    }

    /// Right inverse `a \ 1`.
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.ldiv(a, 0)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn elem(&self, index: usize) -> LoopElement<'_> {
        assert!(index < self.n, "element {index} out of range");
        LoopElement { lp: self, index }
    }

    pub fn check_element(&self, a: usize) -> Result<()> {
        if a < self.n {
            Ok(())
        } else {
            Err(LoopError::ElementOutOfRange {
                element: a,
                order: self.n,
            })
        }
    }

    pub fn row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.table[a * self.n..(a + 1) * self.n]
            .iter()
            .map(|&v| v as usize)
    }

    /// The table as nested vectors.
    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| self.row(a).collect()).collect()
    }

    /// Row-major flat table.
    pub fn flat(&self) -> Vec<usize> {
        self.table.iter().map(|&v| v as usize).collect()
    }

    /// Cyclic structure of `⟨a⟩`: the list `[1, a, a², …, a^{m-1}]`.
    ///
    /// Fails unless `p_i·p_j = p_{(i+j) mod m}` for the right-multiplication
    /// orbit `p_{k+1} = p_k·a`, which holds iff `⟨a⟩` is a cyclic group.
    pub fn cyclic_powers(&self, a: usize) -> Result<Vec<usize>> {
        self.check_element(a)?;
        let mut powers = vec![0usize];
        let mut p = a;
        while p != 0 {
            powers.push(p);
            p = self.mul(p, a);
        }
        let m = powers.len();
        for i in 0..m {
            for j in 0..m {
                if self.mul(powers[i], powers[j]) != powers[(i + j) % m] {
                    return Err(LoopError::NotPowerAssociativeAt(a));
                }
            }
        }
        Ok(powers)
    }

    /// `a^k`, with negative exponents taken through `a \ 1`.
    pub fn power(&self, a: usize, k: i64) -> Result<usize> {
        self.cyclic_powers(a)?;
        let mut base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs();
        let mut acc = 0usize;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn element_order(&self, a: usize) -> Result<usize> {
        self.cyclic_powers(a).map(|p| p.len())
    }

    /// All element orders, or the first element where powers are ambiguous.
    pub fn element_orders(&self) -> Result<Vec<usize>> {
        self.elements().map(|a| self.element_order(a)).collect()
    }

    /// Exhaustive scan of an identity scheme, returning the lexicographically
    /// first violating tuple on failure.
    pub fn satisfies_identity(&self, scheme: IdentityScheme) -> IdentityCheck {
        let witness = match scheme {
            IdentityScheme::RightPowerAlternative => self.right_power_alternative_witness(),
            _ => {
                let eval = scheme_evaluator(scheme);
                match scheme.arity() {
                    1 => (0..self.n).find(|&x| !eval(self, x, 0, 0)).map(|x| vec![x]),
                    2 => self.scan_pairs(|x, y| eval(self, x, y, 0)),
                    _ => self.scan_triples(|x, y, z| eval(self, x, y, z)),
                }
            }
        };
        IdentityCheck {
            scheme,
            holds: witness.is_none(),
            witness,
        }
    }

    /// First `(x, y)` in lexicographic order where `pred` fails.
    pub fn scan_pairs(&self, pred: impl Fn(usize, usize) -> bool + Sync) -> Option<Vec<usize>> {
        let n = self.n;
        (0..n)
            .into_par_iter()
            .find_map_first(|x| (0..n).find(|&y| !pred(x, y)).map(|y| vec![x, y]))
    }

    /// First `(x, y, z)` in lexicographic order where `pred` fails.
    pub fn scan_triples(
        &self,
        pred: impl Fn(usize, usize, usize) -> bool + Sync,
    ) -> Option<Vec<usize>> {
        let n = self.n;
        (0..n).into_par_iter().find_map_first(|x| {
            for y in 0..n {
                for z in 0..n {
                    if !pred(x, y, z) {
                        return Some(vec![x, y, z]);
                    }
                }
            }
            None
        })
    }

    fn right_power_alternative_witness(&self) -> Option<Vec<usize>> {
        // right-multiplication orbits of 0; these are the powers when ⟨b⟩ is cyclic
        let orbits: Vec<Vec<usize>> = self
            .elements()
            .map(|b| {
                let mut out = vec![0];
                let mut p = b;
                while p != 0 {
                    out.push(p);
                    p = self.mul(p, b);
                }
                out
            })
            .collect();
        let n = self.n;
        (0..n).into_par_iter().find_map_first(|a| {
            for (b, pw) in orbits.iter().enumerate() {
                let m = pw.len();
                for i in 0..m {
                    let left = self.mul(a, pw[i]);
                    for j in 0..m {
                        if self.mul(left, pw[j]) != self.mul(a, pw[(i + j) % m]) {
                            return Some(vec![a, b, i, j]);
                        }
                    }
                }
            }
            None
        })
    }

    pub fn is_moufang(&self) -> bool {
        self.satisfies_identity(IdentityScheme::Moufang1).holds
    }

    pub fn is_associative(&self) -> bool {
        self.satisfies_identity(IdentityScheme::Associative).holds
    }

    pub fn is_commutative(&self) -> bool {
        self.satisfies_identity(IdentityScheme::Commutative).holds
    }

    pub fn is_commutative_group(&self) -> bool {
        self.is_commutative() && self.is_associative()
    }

    /// First element whose cyclic closure is not a group, if any.
    pub fn power_associativity_witness(&self) -> Option<usize> {
        self.elements().find(|&a| self.cyclic_powers(a).is_err())
    }

    pub fn is_power_associative(&self) -> bool {
        self.power_associativity_witness().is_none()
    }

    /// First pair `(a, b)` whose generated subloop is not associative, if any.
    pub fn diassociativity_witness(&self) -> Option<(usize, usize)> {
        if self.is_associative() {
            return None;
        }
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for a in self.elements() {
            for b in a..self.n {
                let sub = crate::subloops::generated_subloop(self, &[a, b]);
                if seen.contains(sub.elements()) {
                    continue;
                }
                if !subset_associative(self, sub.elements()) {
                    return Some((a, b));
                }
                seen.insert(sub.elements().to_vec());
            }
        }
        None
    }

    pub fn is_diassociative(&self) -> bool {
        self.diassociativity_witness().is_none()
    }

    /// Applies `perm[old] = new` to the labels.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        let mut out = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                out[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        Self::from_flat(n, out)
    }
}

fn subset_associative(q: &FiniteLoop, s: &[usize]) -> bool {
    s.iter().all(|&x| {
        s.iter()
            .all(|&y| s.iter().all(|&z| q.mul(x, q.mul(y, z)) == q.mul(q.mul(x, y), z)))
    })
}

fn check_latin(n: usize, flat: &[usize]) -> Result<()> {
    let mut seen = vec![usize::MAX; n];
    for i in 0..n {
        seen.fill(usize::MAX);
        for j in 0..n {
            let v = flat[i * n + j];
            if seen[v] != usize::MAX {
                return Err(LoopError::NotLatinSquare {
                    line: Line::Row(i),
                    value: v,
                    first: seen[v],
                    second: j,
                });
            }
            seen[v] = j;
        }
    }
    for j in 0..n {
        seen.fill(usize::MAX);
        for i in 0..n {
            let v = flat[i * n + j];
            if seen[v] != usize::MAX {
                return Err(LoopError::NotLatinSquare {
                    line: Line::Column(j),
                    value: v,
                    first: seen[v],
                    second: i,
                });
            }
            seen[v] = i;
        }
    }
    Ok(())
}

/// Named identities that can be scanned exhaustively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityScheme {
    /// `xy·zx = (x·yz)x`
    #[serde(rename = "moufang-1")]
    Moufang1,
    /// `xy·zx = x(yz·x)`
    #[serde(rename = "moufang-2")]
    Moufang2,
    /// `x(y·zy) = (xy·z)y`
    #[serde(rename = "moufang-3")]
    Moufang3,
    /// `x(y·xz) = (xy·x)z`
    #[serde(rename = "moufang-4")]
    Moufang4,
    /// `x(y·zx) = (xy·z)x`
    Extra,
    /// `x(yx) = (xy)x`
    Flexible,
    /// `(1/x)(xy) = y`
    LeftInverse,
    /// `(yx)(x\1) = y`
    RightInverse,
    Associative,
    Commutative,
    /// `(a·b^i)·b^j = a·b^{i+j}`; witness is `(a, b, i, j)`.
    RightPowerAlternative,
}

impl IdentityScheme {
    pub const ALL: [IdentityScheme; 11] = [
        IdentityScheme::Moufang1,
        IdentityScheme::Moufang2,
        IdentityScheme::Moufang3,
        IdentityScheme::Moufang4,
        IdentityScheme::Extra,
        IdentityScheme::Flexible,
        IdentityScheme::LeftInverse,
        IdentityScheme::RightInverse,
        IdentityScheme::Associative,
        IdentityScheme::Commutative,
        IdentityScheme::RightPowerAlternative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityScheme::Moufang1 => "moufang-1",
            IdentityScheme::Moufang2 => "moufang-2",
            IdentityScheme::Moufang3 => "moufang-3",
            IdentityScheme::Moufang4 => "moufang-4",
            IdentityScheme::Extra => "extra",
            IdentityScheme::Flexible => "flexible",
            IdentityScheme::LeftInverse => "left-inverse",
            IdentityScheme::RightInverse => "right-inverse",
            IdentityScheme::Associative => "associative",
            IdentityScheme::Commutative => "commutative",
            IdentityScheme::RightPowerAlternative => "right-power-alternative",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            IdentityScheme::Flexible
            | IdentityScheme::LeftInverse
            | IdentityScheme::RightInverse
            | IdentityScheme::Commutative => 2,
            IdentityScheme::RightPowerAlternative => 4,
            _ => 3,
        }
    }
}

impl std::str::FromStr for IdentityScheme {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self> {
        IdentityScheme::ALL
            .into_iter()
            .find(|sch| sch.name() == s)
            .ok_or_else(|| LoopError::SpecInvalid(format!("unknown identity scheme {s:?}")))
    }
}

type Evaluator = fn(&FiniteLoop, usize, usize, usize) -> bool;

fn scheme_evaluator(scheme: IdentityScheme) -> Evaluator {
    match scheme {
        IdentityScheme::Moufang1 => |q, x, y, z| {
            q.mul(q.mul(x, y), q.mul(z, x)) == q.mul(q.mul(x, q.mul(y, z)), x)
        },
        IdentityScheme::Moufang2 => |q, x, y, z| {
            q.mul(q.mul(x, y), q.mul(z, x)) == q.mul(x, q.mul(q.mul(y, z), x))
        },
        IdentityScheme::Moufang3 => |q, x, y, z| {
            q.mul(x, q.mul(y, q.mul(z, y))) == q.mul(q.mul(q.mul(x, y), z), y)
        },
        IdentityScheme::Moufang4 => |q, x, y, z| {
            q.mul(x, q.mul(y, q.mul(x, z))) == q.mul(q.mul(q.mul(x, y), x), z)
        },
        IdentityScheme::Extra => |q, x, y, z| {
            q.mul(x, q.mul(y, q.mul(z, x))) == q.mul(q.mul(q.mul(x, y), z), x)
        },
        IdentityScheme::Flexible => |q, x, y, _| q.mul(x, q.mul(y, x)) == q.mul(q.mul(x, y), x),
        IdentityScheme::LeftInverse => |q, x, y, _| q.mul(q.rdiv(0, x), q.mul(x, y)) == y,
        IdentityScheme::RightInverse => |q, x, y, _| q.mul(q.mul(y, x), q.ldiv(x, 0)) == y,
        IdentityScheme::Associative => |q, x, y, z| {
            q.mul(x, q.mul(y, z)) == q.mul(q.mul(x, y), z)
        },
        IdentityScheme::Commutative => |q, x, y, _| q.mul(x, y) == q.mul(y, x),
        IdentityScheme::RightPowerAlternative => unreachable!("handled separately"),
    }
}

/// Result of an identity scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub scheme: IdentityScheme,
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

/// An element tied to its loop, for writing identities readably.
#[derive(Clone, Copy)]
pub struct LoopElement<'a> {
    lp: &'a FiniteLoop,
    index: usize,
}

impl<'a> LoopElement<'a> {
    pub fn index(self) -> usize {
        self.index
    }

    pub fn ldiv(self, other: Self) -> Self {
        self.lp.elem(self.lp.ldiv(self.index, other.index))
    }

    pub fn rdiv(self, other: Self) -> Self {
        self.lp.elem(self.lp.rdiv(self.index, other.index))
    }

    pub fn inv(self) -> Self {
        self.lp.elem(self.lp.inv(self.index))
    }

    pub fn pow(self, k: i64) -> Result<Self> {
        self.lp.power(self.index, k).map(|i| self.lp.elem(i))
    }
}

impl<'a> Mul for LoopElement<'a> {
    type Output = LoopElement<'a>;

    fn mul(self, rhs: Self) -> Self::Output {
        debug_assert!(std::ptr::eq(self.lp, rhs.lp));
        self.lp.elem(self.lp.mul(self.index, rhs.index))
    }
}

impl PartialEq for LoopElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.lp, other.lp) && self.index == other.index
    }
}

impl Eq for LoopElement<'_> {}

impl fmt::Debug for LoopElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.index)
    }
}
