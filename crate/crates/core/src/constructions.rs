//! Moufang loops on `F × W` built from a quadratic form over GF(2):
//!
//! ```text
//! (i, u)(j, v) = (i + j, u + v + j·q(u) + i·h(u, v))
//! ```
//!
//! Here `W` is a finite commutative group with subgroups `F ≤ B ≤ W`,
//! `F = {0, f}` has order 2, `W/B` is elementary abelian of rank `m`, and
//! `q(u) = q̄(ū)`, `h(u, v) = h̄(ū, v̄)` are read as `0` or `f`.
//!
//! `W` is stored in mixed-radix coordinates with the last coordinate
//! fastest; `(i, u)` has index `i·|W| + idx(u)`.

use std::collections::HashMap;

use crate::abelext::ExtensionData;
use crate::error::{LoopError, Result};
use crate::loops::FiniteLoop;
use crate::subloops::Subloop;

fn spec_err(msg: impl Into<String>) -> LoopError {
    LoopError::SpecInvalid(msg.into())
}

/// `W = C_{n₁} × … × C_{n_k}` with the chain `F ≤ B ≤ W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupSpec {
    factors: Vec<usize>,
    order: usize,
    /// Index of the nonzero element of `F`.
    f: usize,
    /// Membership of `B`, by index.
    in_b: Vec<bool>,
    /// Coset basis of `W/B`, chosen greedily in index order.
    basis: Vec<usize>,
    /// `bar[w]` is the coordinate vector of `w + B` in that basis.
    bar: Vec<usize>,
}

impl AbelianGroupSpec {
    /// `f` is the coordinate vector of the generator of `F`; `b_gens`
    /// generate `B` together with `f`.
    pub fn new(factors: &[usize], f: &[usize], b_gens: &[Vec<usize>]) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(spec_err("factors must be positive"));
        }
        let order = factors.iter().try_fold(1usize, |acc, &x| acc.checked_mul(x));
        let order = order
            .filter(|&n| 2 * n <= crate::loops::MAX_ORDER)
            .ok_or_else(|| spec_err("group too large"))?;
        let mut spec = AbelianGroupSpec {
            factors: factors.to_vec(),
            order,
            f: 0,
            in_b: vec![false; order],
            basis: Vec::new(),
            bar: vec![0; order],
        };
        let f = spec.index_of(f)?;
        if f == 0 || spec.add(f, f) != 0 {
            return Err(spec_err("F must have exactly two elements"));
        }
        spec.f = f;

        let mut gens = vec![f];
        for g in b_gens {
            gens.push(spec.index_of(g)?);
        }
        // B as the closure of its generators
        spec.in_b[0] = true;
        let mut members = vec![0usize];
        let mut i = 0;
        while i < members.len() {
            for &g in &gens {
                let c = spec.add(members[i], g);
                if !spec.in_b[c] {
                    spec.in_b[c] = true;
                    members.push(c);
                }
            }
            i += 1;
        }
        if (0..order).any(|w| !spec.in_b[spec.add(w, w)]) {
            return Err(spec_err("W/B is not elementary abelian (2W ⊄ B)"));
        }

        let coset_min = |s: &AbelianGroupSpec, w: usize| -> usize {
            members.iter().map(|&b| s.add(w, b)).min().unwrap()
        };
        let mut span: HashMap<usize, usize> = HashMap::from([(0, 0)]);
        for w in 0..order {
            let c = coset_min(&spec, w);
            if span.contains_key(&c) {
                continue;
            }
            let k = spec.basis.len();
            let existing: Vec<(usize, usize)> = span.iter().map(|(&r, &b)| (r, b)).collect();
            for (rep, bits) in existing {
                span.insert(coset_min(&spec, spec.add(rep, w)), bits | (1 << k));
            }
            spec.basis.push(w);
        }
        for w in 0..order {
            spec.bar[w] = span[&coset_min(&spec, w)];
        }
        Ok(spec)
    }

    /// `F = B` generated by `f`.
    pub fn with_f(factors: &[usize], f: &[usize]) -> Result<Self> {
        Self::new(factors, f, &[])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Rank of `W/B` over GF(2).
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn b_elements(&self) -> Vec<usize> {
        (0..self.order).filter(|&w| self.in_b[w]).collect()
    }

    /// Coordinates of `W/B` for each element.
    pub fn bar(&self, w: usize) -> usize {
        self.bar[w]
    }

    /// Sum of the basis elements selected by `bits`.
    pub fn section(&self, bits: usize) -> usize {
        self.basis
            .iter()
            .enumerate()
            .filter(|(k, _)| bits >> k & 1 == 1)
            .fold(0, |acc, (_, &b)| self.add(acc, b))
    }

    pub fn coords(&self, mut w: usize) -> Vec<usize> {
        let mut d = vec![0; self.factors.len()];
        for (i, &f) in self.factors.iter().enumerate().rev() {
            d[i] = w % f;
            w /= f;
        }
        d
    }

    pub fn index_of(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.factors.len() {
            return Err(spec_err(format!(
                "expected {} coordinates, found {}",
                self.factors.len(),
                coords.len()
            )));
        }
        coords
            .iter()
            .zip(&self.factors)
            .try_fold(0usize, |acc, (&c, &f)| {
                (c < f).then_some(acc * f + c)
            })
            .ok_or_else(|| spec_err("coordinate out of range"))
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        ca.iter()
            .zip(&cb)
            .zip(&self.factors)
            .fold(0, |acc, ((&x, &y), &f)| acc * f + (x + y) % f)
    }

    /// `W` as a loop.
    pub fn group(&self) -> FiniteLoop {
        FiniteLoop::from_fn(self.order, |a, b| self.add(a, b)).expect("commutative group")
    }
}

/// Validation is cubic in `2^m`.
pub const MAX_FORM_RANK: usize = 8;

/// A quadratic form `q̄ : GF(2)^m → GF(2)`, stored by values. Vectors are
/// bit masks with bit `k` holding coordinate `u_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticFormGF2 {
    m: usize,
    values: Vec<bool>,
}

impl QuadraticFormGF2 {
    /// Validates `q̄(0) = 0` and bilinearity of the associated pairing.
    pub fn new(m: usize, values: Vec<bool>) -> Result<Self> {
        if m > MAX_FORM_RANK || values.len() != 1 << m {
            return Err(spec_err(format!("form of rank {m} needs 2^{m} values, at most rank {MAX_FORM_RANK}")));
        }
        let form = QuadraticFormGF2 { m, values };
        if form.values[0] {
            return Err(LoopError::NotBilinear);
        }
        let size = 1usize << m;
        for u in 0..size {
            for u2 in 0..size {
                for v in 0..size {
                    if form.h(u ^ u2, v) != (form.h(u, v) ^ form.h(u2, v)) {
                        return Err(LoopError::NotBilinear);
                    }
                }
            }
        }
        Ok(form)
    }

    pub fn zero(m: usize) -> Self {
        QuadraticFormGF2 {
            m,
            values: vec![false; 1 << m],
        }
    }

    /// Parses a GF(2) polynomial such as `u1u2 + u3` or `0`.
    pub fn from_polynomial(m: usize, text: &str) -> Result<Self> {
        let mut monomials: Vec<usize> = Vec::new();
        for term in text.split('+').map(str::trim) {
            if term == "0" {
                continue;
            }
            let mut mask = 0usize;
            let mut rest = term;
            if rest.is_empty() {
                return Err(spec_err(format!("empty term in {text:?}")));
            }
            while !rest.is_empty() {
                let tail = rest
                    .strip_prefix('u')
                    .ok_or_else(|| spec_err(format!("bad term {term:?}")))?;
                let digits = tail.chars().take_while(|c| c.is_ascii_digit()).count();
                let k: usize = tail[..digits]
                    .parse()
                    .map_err(|_| spec_err(format!("bad term {term:?}")))?;
                if k == 0 || k > m {
                    return Err(spec_err(format!("variable u{k} outside rank {m}")));
                }
                mask |= 1 << (k - 1);
                rest = &tail[digits..];
            }
            monomials.push(mask);
        }
        let values = (0..1usize << m)
            .map(|u| monomials.iter().filter(|&&mono| u & mono == mono).count() % 2 == 1)
            .collect();
        Self::new(m, values)
    }

    /// Every valid form of rank `m ≤ 3`, by value table.
    pub fn enumerate(m: usize) -> Vec<Self> {
        assert!(m <= 3, "enumeration is limited to rank 3");
        let size = 1usize << m;
        (0..1usize << size)
            .filter_map(|t| Self::new(m, (0..size).map(|u| t >> u & 1 == 1).collect()).ok())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn value(&self, u: usize) -> bool {
        self.values[u]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// `h̄(u, v) = q̄(u + v) + q̄(u) + q̄(v)`.
    pub fn h(&self, u: usize, v: usize) -> bool {
        self.values[u ^ v] ^ self.values[u] ^ self.values[v]
    }

    /// `h̄` as a `2^m × 2^m` table.
    pub fn associated_bilinear(&self) -> Vec<Vec<bool>> {
        let size = 1usize << self.m;
        (0..size)
            .map(|u| (0..size).map(|v| self.h(u, v)).collect())
            .collect()
    }

    pub fn is_linear(&self) -> bool {
        let size = 1usize << self.m;
        (0..size).all(|u| (0..size).all(|v| !self.h(u, v)))
    }
}

/// The constructed loop with `X = 0 × W` and `0 × B`.
#[derive(Debug, Clone)]
pub struct ExampleLoop {
    pub q: FiniteLoop,
    pub x: Subloop,
    pub b: Subloop,
}

pub fn build_q(spec: &AbelianGroupSpec, form: &QuadraticFormGF2) -> Result<ExampleLoop> {
    if form.rank() != spec.rank() {
        return Err(spec_err(format!(
            "form has rank {}, but W/B has rank {}",
            form.rank(),
            spec.rank()
        )));
    }
    let w = spec.order();
    let f = spec.f();
    let table = FiniteLoop::from_fn(2 * w, |a, b| {
        let (i, u) = (a / w, a % w);
        let (j, v) = (b / w, b % w);
        let mut s = spec.add(u, v);
        if j == 1 && form.value(spec.bar(u)) {
            s = spec.add(s, f);
        }
        if i == 1 && form.h(spec.bar(u), spec.bar(v)) {
            s = spec.add(s, f);
        }
        ((i + j) % 2) * w + s
    })?;
    let x = Subloop::new(&table, &(0..w).collect::<Vec<_>>())?;
    let b = Subloop::new(&table, &spec.b_elements())?;
    Ok(ExampleLoop { q: table, x, b })
}

/// `W = C2 × C4`, `F = B = ⟨(0, 2)⟩`.
pub fn example_c2xc4() -> AbelianGroupSpec {
    AbelianGroupSpec::with_f(&[2, 4], &[0, 2]).expect("valid spec")
}

/// `W = C2³`, `F = B = ⟨(0, 0, 1)⟩`.
pub fn example_c2cubed() -> AbelianGroupSpec {
    AbelianGroupSpec::with_f(&[2, 2, 2], &[0, 0, 1]).expect("valid spec")
}

/// The same loop as a central extension of `B` by the elementary abelian
/// group `F × W/B`, whose element `(i, ū)` has index `i·2^m + ū`.
///
/// Returns the data and `embedding[(i, ū)·|B| + b] = (i, s(ū) + b)`, where
/// `s` is the basis section and `b` runs over the sorted elements of `B`.
pub fn central_extension_data(
    spec: &AbelianGroupSpec,
    form: &QuadraticFormGF2,
) -> Result<(ExtensionData, Vec<usize>)> {
    build_q(spec, form)?;
    let m = spec.rank();
    let size = 1usize << m;
    let fsize = 2 * size;
    let b_els = spec.b_elements();
    let k = b_els.len();
    let local: HashMap<usize, usize> = b_els.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let kernel = FiniteLoop::from_fn(k, |a, b| local[&spec.add(b_els[a], b_els[b])])?;
    let factor = FiniteLoop::from_fn(fsize, |a, b| a ^ b)?;

    let mut theta = Vec::with_capacity(fsize * fsize);
    for a in 0..fsize {
        for b in 0..fsize {
            let (i, u) = (a / size, a % size);
            let (j, v) = (b / size, b % size);
            // s(ū) + s(v̄) − s(ū + v̄), which lies in B
            let su_sv = spec.add(spec.section(u), spec.section(v));
            let diff = (0..spec.order())
                .find(|&c| spec.add(spec.section(u ^ v), c) == su_sv)
                .expect("W is a group");
            let mut t = diff;
            if j == 1 && form.value(u) {
                t = spec.add(t, spec.f());
            }
            if i == 1 && form.h(u, v) {
                t = spec.add(t, spec.f());
            }
            theta.push(local[&t]);
        }
    }
    let data = ExtensionData::central(factor, kernel, theta)?;
    let w = spec.order();
    let embedding = (0..fsize * k)
        .map(|idx| {
            let (a, bl) = (idx / k, idx % k);
            let (i, u) = (a / size, a % size);
            i * w + spec.add(spec.section(u), b_els[bl])
        })
        .collect();
    Ok((data, embedding))
}
