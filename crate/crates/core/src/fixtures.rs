//! Named loops for tests and the CLI: small groups, Chein doubles and the
//! Paige loop of order 120.
//!
//! Names parse from strings such as `cyclic:7`, `abelian:2,4`,
//! `dihedral:5`, `chein-double:dihedral:5` or `paige-M2`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::error::{LoopError, Result};
use crate::loops::FiniteLoop;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Fixture {
    Cyclic(usize),
    /// Direct product of cyclic groups, last factor fastest.
    Abelian(Vec<usize>),
    /// Dihedral group of order `2n`.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion8,
    /// `x ↦ ax + b` over `Z₅`.
    Frobenius20,
    /// `x ↦ ax + b` over `Z₇` with `a` a cube.
    Frobenius21,
    /// Upper unitriangular 3×3 matrices over `Z₃`.
    Heisenberg27,
    CheinDouble(Box<Fixture>),
    PaigeM2,
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixture::Cyclic(n) => write!(f, "cyclic:{n}"),
            Fixture::Abelian(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "abelian:{}", parts.join(","))
            }
            Fixture::Dihedral(n) => write!(f, "dihedral:{n}"),
            Fixture::Symmetric(n) => write!(f, "symmetric:{n}"),
            Fixture::Alternating(n) => write!(f, "alternating:{n}"),
            Fixture::Quaternion8 => write!(f, "quaternion8"),
            Fixture::Frobenius20 => write!(f, "frobenius20"),
            Fixture::Frobenius21 => write!(f, "frobenius21"),
            Fixture::Heisenberg27 => write!(f, "heisenberg27"),
            Fixture::CheinDouble(g) => write!(f, "chein-double:{g}"),
            Fixture::PaigeM2 => write!(f, "paige-M2"),
        }
    }
}

impl FromStr for Fixture {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || LoopError::UnknownFixture(s.to_string());
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let num = |r: Option<&str>| -> Result<usize> {
            r.and_then(|t| t.trim().parse().ok())
                .filter(|&n| n > 0)
                .ok_or_else(unknown)
        };
        let fixture = match head {
            "cyclic" => Fixture::Cyclic(num(rest)?),
            "abelian" => {
                let fs = rest
                    .ok_or_else(unknown)?
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().ok().filter(|&n| n > 0))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(unknown)?;
                Fixture::Abelian(fs)
            }
            "dihedral" => Fixture::Dihedral(num(rest)?),
            "symmetric" => Fixture::Symmetric(num(rest)?),
            "alternating" => Fixture::Alternating(num(rest)?),
            "quaternion8" if rest.is_none() => Fixture::Quaternion8,
            "frobenius20" if rest.is_none() => Fixture::Frobenius20,
            "frobenius21" if rest.is_none() => Fixture::Frobenius21,
            "heisenberg27" if rest.is_none() => Fixture::Heisenberg27,
            "paige-M2" | "paige-m2" if rest.is_none() => Fixture::PaigeM2,
            "chein-double" => {
                let inner: Fixture = rest.ok_or_else(unknown)?.parse()?;
                Fixture::CheinDouble(Box::new(inner))
            }
            _ => return Err(unknown()),
        };
        Ok(fixture)
    }
}

impl Fixture {
    pub fn build(&self) -> Result<FiniteLoop> {
        let bad = || LoopError::UnknownFixture(self.to_string());
        match self {
            Fixture::Cyclic(n) => FiniteLoop::from_fn(*n, |a, b| (a + b) % n),
            Fixture::Abelian(fs) => abelian(fs),
            Fixture::Dihedral(n) if *n >= 1 => dihedral(*n),
            Fixture::Symmetric(n) if (1..=5).contains(n) => symmetric(*n, false),
            Fixture::Alternating(n) if (1..=5).contains(n) => symmetric(*n, true),
            Fixture::Quaternion8 => quaternion8(),
            Fixture::Frobenius20 => affine(5, &[1, 2, 3, 4]),
            Fixture::Frobenius21 => affine(7, &[1, 2, 4]),
            Fixture::Heisenberg27 => heisenberg27(),
            Fixture::CheinDouble(g) => chein_double(&g.build()?),
            Fixture::PaigeM2 => paige_m2(),
            _ => Err(bad()),
        }
    }
}

/// Builds a fixture from its name.
pub fn fixture(name: &str) -> Result<FiniteLoop> {
    name.parse::<Fixture>()?.build()
}

/// The standard catalog used by tests and reports, smallest first.
pub fn catalog() -> Vec<&'static str> {
    vec![
        "cyclic:1",
        "cyclic:2",
        "cyclic:3",
        "cyclic:4",
        "abelian:2,2",
        "cyclic:5",
        "cyclic:6",
        "dihedral:3",
        "cyclic:7",
        "cyclic:8",
        "abelian:2,4",
        "abelian:2,2,2",
        "dihedral:4",
        "quaternion8",
        "abelian:3,3",
        "dihedral:5",
        "cyclic:12",
        "dihedral:6",
        "alternating:4",
        "chein-double:dihedral:3",
        "cyclic:15",
        "dihedral:7",
        "dihedral:8",
        "abelian:2,2,4",
        "chein-double:dihedral:4",
        "chein-double:quaternion8",
        "frobenius20",
        "dihedral:10",
        "chein-double:dihedral:5",
        "frobenius21",
        "symmetric:4",
        "chein-double:alternating:4",
        "heisenberg27",
        "chein-double:symmetric:4",
        "alternating:5",
        "paige-M2",
    ]
}

/// Loop on the distinct values of `elements` under `mul`, labelled in the
/// given order. The first element must be the identity.
pub fn loop_from_elements<T, F>(elements: &[T], mul: F) -> Result<FiniteLoop>
where
    T: Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let n = elements.len();
    let mut flat = Vec::with_capacity(n * n);
    for a in elements {
        for b in elements {
            let c = mul(a, b);
            let i = *index
                .get(&c)
                .ok_or_else(|| LoopError::SpecInvalid("elements not closed".into()))?;
            flat.push(i);
        }
    }
    FiniteLoop::from_flat(n, flat)
}

/// Closure of `gens` under `mul` from `identity`, breadth first.
pub fn closure<T, F>(identity: T, gens: &[T], mul: F) -> Vec<T>
where
    T: Eq + Hash + Clone,
    F: Fn(&T, &T) -> T,
{
    let mut seen: HashSet<T> = HashSet::new();
    seen.insert(identity.clone());
    let mut out = vec![identity];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let c = mul(&out[i], g);
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
        i += 1;
    }
    out
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

/// Permutation group generated by `gens` on `degree` points, with
/// `(pq)(i) = p(q(i))`.
pub fn permutation_group(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteLoop> {
    let id: Vec<usize> = (0..degree).collect();
    let els = closure(id, gens, |p, q| compose(p, q));
    loop_from_elements(&els, |p, q| compose(p, q))
}

fn abelian(factors: &[usize]) -> Result<FiniteLoop> {
    let n: usize = factors.iter().product();
    let digits = |mut a: usize| {
        let mut d = vec![0; factors.len()];
        for (i, &f) in factors.iter().enumerate().rev() {
            d[i] = a % f;
            a /= f;
        }
        d
    };
    FiniteLoop::from_fn(n, |a, b| {
        let (da, db) = (digits(a), digits(b));
        factors
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &f)| acc * f + (da[i] + db[i]) % f)
    })
}

fn dihedral(n: usize) -> Result<FiniteLoop> {
    // r^k s^f has index f·n + k, and s r = r⁻¹ s
    FiniteLoop::from_fn(2 * n, |a, b| {
        let (fa, ka) = (a / n, a % n);
        let (fb, kb) = (b / n, b % n);
        let k = if fa == 0 { (ka + kb) % n } else { (ka + n - kb) % n };
        ((fa + fb) % 2) * n + k
    })
}

fn symmetric(n: usize, even_only: bool) -> Result<FiniteLoop> {
    if n == 1 {
        return Ok(FiniteLoop::trivial());
    }
    let mut gens = Vec::new();
    if even_only {
        for k in 2..n {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(0, 1);
            p.swap(1, k);
            gens.push(p);
        }
        if gens.is_empty() {
            return Ok(FiniteLoop::trivial());
        }
    } else {
        for k in 1..n {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(0, k);
            gens.push(p);
        }
    }
    permutation_group(n, &gens)
}

fn quaternion8() -> Result<FiniteLoop> {
    // ±1, ±i, ±j, ±k as (sign, unit) with units 1, i, j, k
    let units: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let els: Vec<(i8, usize)> = (0..4).flat_map(|u| [(1, u), (-1, u)]).collect();
    loop_from_elements(&els, |&(sa, a), &(sb, b)| {
        let (s, c) = units[a][b];
        (sa * sb * s, c)
    })
}

fn affine(p: usize, mults: &[usize]) -> Result<FiniteLoop> {
    let mut els = Vec::new();
    for &a in mults {
        for b in 0..p {
            els.push((a, b));
        }
    }
    // (a, b)(c, d): x ↦ a(cx + d) + b
    loop_from_elements(&els, |&(a, b), &(c, d)| ((a * c) % p, (a * d + b) % p))
}

fn heisenberg27() -> Result<FiniteLoop> {
    let mut els = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                els.push((a, b, c));
            }
        }
    }
    // [[1,a,c],[0,1,b],[0,0,1]]
    loop_from_elements(&els, |&(a, b, c), &(x, y, z)| {
        ((a + x) % 3, (b + y) % 3, (c + z + a * y) % 3)
    })
}

/// `M(G, 2)` on `G ∪ Gu`: `gu` has index `|G| + g`.
pub fn chein_double(g: &FiniteLoop) -> Result<FiniteLoop> {
    if !g.is_associative() {
        return Err(LoopError::SpecInvalid("chein-double needs a group".into()));
    }
    let n = g.order();
    FiniteLoop::from_fn(2 * n, |a, b| match (a < n, b < n) {
        (true, true) => g.mul(a, b),
        (true, false) => n + g.mul(b - n, a),
        (false, true) => n + g.mul(a - n, g.inv(b)),
        (false, false) => g.mul(g.inv(b - n), a - n),
    })
}

/// A Zorn vector matrix `[[a, v], [w, b]]` over GF(2), vectors as 3-bit
/// masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Zorn {
    a: u8,
    v: u8,
    w: u8,
    b: u8,
}

fn dot(x: u8, y: u8) -> u8 {
    ((x & y).count_ones() & 1) as u8
}

fn cross(x: u8, y: u8) -> u8 {
    let bit = |m: u8, i: u32| (m >> i) & 1;
    let c0 = (bit(x, 1) & bit(y, 2)) ^ (bit(x, 2) & bit(y, 1));
    let c1 = (bit(x, 2) & bit(y, 0)) ^ (bit(x, 0) & bit(y, 2));
    let c2 = (bit(x, 0) & bit(y, 1)) ^ (bit(x, 1) & bit(y, 0));
    c0 | (c1 << 1) | (c2 << 2)
}

fn scale(s: u8, x: u8) -> u8 {
    if s == 1 {
        x
    } else {
        0
    }
}

impl Zorn {
    fn mul(&self, o: &Zorn) -> Zorn {
        Zorn {
            a: (self.a & o.a) ^ dot(self.v, o.w),
            v: scale(self.a, o.v) ^ scale(o.b, self.v) ^ cross(self.w, o.w),
            w: scale(o.a, self.w) ^ scale(self.b, o.w) ^ cross(self.v, o.v),
            b: (self.b & o.b) ^ dot(self.w, o.v),
        }
    }

    fn det(&self) -> u8 {
        (self.a & self.b) ^ dot(self.v, self.w)
    }
}

/// The 120 Zorn matrices of determinant 1 over GF(2), identity first and the
/// rest in lexicographic order.
pub fn paige_m2() -> Result<FiniteLoop> {
    let identity = Zorn { a: 1, v: 0, w: 0, b: 1 };
    let mut els = vec![identity];
    for a in 0..2u8 {
        for v in 0..8u8 {
            for w in 0..8u8 {
                for b in 0..2u8 {
                    let z = Zorn { a, v, w, b };
                    if z.det() == 1 && z != identity {
                        els.push(z);
                    }
                }
            }
        }
    }
    loop_from_elements(&els, Zorn::mul)
}
