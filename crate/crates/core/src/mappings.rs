//! Translations, inner mappings, pseudoautomorphisms, semiautomorphisms and
//! autotopisms.
//!
//! Maps compose right to left: `f.compose(&g)` is `x ↦ f(g(x))`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{LoopError, Result};
use crate::loops::FiniteLoop;
use crate::subloops::{distinguished_subloop, Distinguished, Subloop};

/// `T_u(a) = (u·a)/u`
#[inline]
pub fn inner_t(q: &FiniteLoop, u: usize, a: usize) -> usize {
    q.rdiv(q.mul(u, a), u)
}

/// `L_{u,v}(a) = (uv) \ (u·va)`
#[inline]
pub fn inner_l(q: &FiniteLoop, u: usize, v: usize, a: usize) -> usize {
    q.ldiv(q.mul(u, v), q.mul(u, q.mul(v, a)))
}

/// `R_{u,v}(a) = (au·v) / (uv)`
#[inline]
pub fn inner_r(q: &FiniteLoop, u: usize, v: usize, a: usize) -> usize {
    q.rdiv(q.mul(q.mul(a, u), v), q.mul(u, v))
}

/// A function on loop elements, stored by images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ElementMap {
    images: Vec<usize>,
}

impl ElementMap {
    pub fn new(images: Vec<usize>) -> Self {
        ElementMap { images }
    }

    pub fn identity(n: usize) -> Self {
        ElementMap {
            images: (0..n).collect(),
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Self {
        ElementMap {
            images: (0..n).map(f).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_permutation(&self) -> bool {
        let n = self.images.len();
        let mut seen = vec![false; n];
        self.images
            .iter()
            .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ElementMap) -> ElementMap {
        ElementMap {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Result<ElementMap> {
        if !self.is_permutation() {
            return Err(LoopError::NotPermutation);
        }
        let mut inv = vec![0usize; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Ok(ElementMap { images: inv })
    }

    /// Restriction to a subloop, in the subloop's local indices. `None` if
    /// the image of the subloop leaves it.
    pub fn restrict(&self, x: &Subloop) -> Option<ElementMap> {
        let els = x.elements();
        els.iter()
            .map(|&a| {
                let b = self.images[a];
                els.binary_search(&b).ok()
            })
            .collect::<Option<Vec<_>>>()
            .map(ElementMap::new)
    }

    pub fn is_automorphism_of(&self, q: &FiniteLoop) -> bool {
        self.images.len() == q.order()
            && self.is_permutation()
            && q.elements().all(|x| {
                q.elements()
                    .all(|y| self.apply(q.mul(x, y)) == q.mul(self.apply(x), self.apply(y)))
            })
    }
}

/// Left or right translation and their two standard composites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Translation {
    /// `L_x(y) = xy`
    L,
    /// `R_x(y) = yx`
    R,
    /// `T_x = R_x⁻¹ L_x`
    T,
    /// `M_x = R_x L_x`
    M,
}

/// Two-index inner mapping generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerGenerator {
    /// `L_{x,y} = L_{xy}⁻¹ L_x L_y`
    L2,
    /// `R_{x,y} = R_{xy}⁻¹ R_y R_x`
    R2,
}

pub fn translation(q: &FiniteLoop, kind: Translation, x: usize) -> ElementMap {
    let n = q.order();
    match kind {
        Translation::L => ElementMap::from_fn(n, |y| q.mul(x, y)),
        Translation::R => ElementMap::from_fn(n, |y| q.mul(y, x)),
        Translation::T => ElementMap::from_fn(n, |y| inner_t(q, x, y)),
        Translation::M => ElementMap::from_fn(n, |y| q.mul(q.mul(x, y), x)),
    }
}

pub fn inner_generator(q: &FiniteLoop, kind: InnerGenerator, x: usize, y: usize) -> ElementMap {
    let n = q.order();
    match kind {
        InnerGenerator::L2 => ElementMap::from_fn(n, |a| inner_l(q, x, y, a)),
        InnerGenerator::R2 => ElementMap::from_fn(n, |a| inner_r(q, x, y, a)),
    }
}

pub const DEFAULT_INN_CAP: usize = 1 << 20;

/// `Inn(Q)` by breadth-first closure of `{T_x, L_{x,y}, R_{x,y}}`.
///
/// Returned sorted by image arrays.
pub fn inner_mapping_group(q: &FiniteLoop, cap: usize) -> Result<Vec<ElementMap>> {
    let n = q.order();
    let mut gens: HashSet<ElementMap> = HashSet::new();
    for x in q.elements() {
        gens.insert(translation(q, Translation::T, x));
        for y in q.elements() {
            gens.insert(inner_generator(q, InnerGenerator::L2, x, y));
            gens.insert(inner_generator(q, InnerGenerator::R2, x, y));
        }
    }
    let id = ElementMap::identity(n);
    gens.remove(&id);
    let mut gens: Vec<ElementMap> = gens.into_iter().collect();
    gens.sort();

    let mut group: HashSet<ElementMap> = HashSet::new();
    group.insert(id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let h = g.compose(s);
                if !group.contains(&h) {
                    if group.len() >= cap {
                        return Err(LoopError::CapExceeded { size: group.len() });
                    }
                    group.insert(h.clone());
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<ElementMap> = group.into_iter().collect();
    out.sort();
    Ok(out)
}

/// A certified pseudoautomorphism with its companion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoautomorphismPair {
    companion: usize,
    map: ElementMap,
}

impl PseudoautomorphismPair {
    pub fn certify(q: &FiniteLoop, companion: usize, map: ElementMap) -> Result<Self> {
        if is_pseudoautomorphism(q, companion, &map) {
            Ok(PseudoautomorphismPair { companion, map })
        } else {
            Err(LoopError::NotPseudoautomorphism)
        }
    }

    pub fn identity(q: &FiniteLoop) -> Self {
        PseudoautomorphismPair {
            companion: 0,
            map: ElementMap::identity(q.order()),
        }
    }

    pub fn companion(&self) -> usize {
        self.companion
    }

    pub fn map(&self) -> &ElementMap {
        &self.map
    }
}

/// `c·f(x) · f(y) = c·f(xy)` for all `x, y`.
pub fn is_pseudoautomorphism(q: &FiniteLoop, c: usize, f: &ElementMap) -> bool {
    f.len() == q.order()
        && f.is_permutation()
        && q.elements().all(|x| {
            let cfx = q.mul(c, f.apply(x));
            q.elements()
                .all(|y| q.mul(cfx, f.apply(y)) == q.mul(c, f.apply(q.mul(x, y))))
        })
}

/// `(c, f)(d, g) = (c·f(d), fg)`
pub fn lps_compose(
    q: &FiniteLoop,
    p1: &PseudoautomorphismPair,
    p2: &PseudoautomorphismPair,
) -> Result<PseudoautomorphismPair> {
    let c = q.mul(p1.companion, p1.map.apply(p2.companion));
    PseudoautomorphismPair::certify(q, c, p1.map.compose(&p2.map))
}

/// `(c, f)⁻¹ = (f⁻¹(c\1), f⁻¹)`
pub fn lps_inverse(q: &FiniteLoop, p: &PseudoautomorphismPair) -> Result<PseudoautomorphismPair> {
    let finv = p.map.inverse()?;
    let c = finv.apply(q.ldiv(p.companion, 0));
    PseudoautomorphismPair::certify(q, c, finv)
}

/// `f(1) = 1` and `f(x·yx) = f(x)·f(y)f(x)`.
pub fn is_semiautomorphism(q: &FiniteLoop, f: &ElementMap) -> bool {
    f.len() == q.order()
        && f.is_permutation()
        && f.apply(0) == 0
        && q.elements().all(|x| {
            let fx = f.apply(x);
            q.elements().all(|y| {
                f.apply(q.mul(x, q.mul(y, x))) == q.mul(fx, q.mul(f.apply(y), fx))
            })
        })
}

/// A triple of maps; an autotopism when `f(x)g(y) = h(xy)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MapTriple {
    pub f: ElementMap,
    pub g: ElementMap,
    pub h: ElementMap,
}

impl MapTriple {
    pub fn new(f: ElementMap, g: ElementMap, h: ElementMap) -> Self {
        MapTriple { f, g, h }
    }

    pub fn identity(n: usize) -> Self {
        let id = ElementMap::identity(n);
        MapTriple::new(id.clone(), id.clone(), id)
    }
}

pub fn is_autotopism(q: &FiniteLoop, t: &MapTriple) -> bool {
    let n = q.order();
    [&t.f, &t.g, &t.h]
        .iter()
        .all(|m| m.len() == n && m.is_permutation())
        && q.elements().all(|x| {
            let fx = t.f.apply(x);
            q.elements()
                .all(|y| q.mul(fx, t.g.apply(y)) == t.h.apply(q.mul(x, y)))
        })
}

fn certify_triple(q: &FiniteLoop, t: MapTriple) -> Result<MapTriple> {
    if is_autotopism(q, &t) {
        Ok(t)
    } else {
        Err(LoopError::NotAutotopism)
    }
}

/// Componentwise `a ∘ b`.
pub fn atp_compose(q: &FiniteLoop, a: &MapTriple, b: &MapTriple) -> Result<MapTriple> {
    certify_triple(
        q,
        MapTriple::new(a.f.compose(&b.f), a.g.compose(&b.g), a.h.compose(&b.h)),
    )
}

pub fn atp_inverse(q: &FiniteLoop, a: &MapTriple) -> Result<MapTriple> {
    certify_triple(
        q,
        MapTriple::new(a.f.inverse()?, a.g.inverse()?, a.h.inverse()?),
    )
}

/// The four autotopisms `(L_x, R_x, M_x)`, `(L_x⁻¹, R_x⁻¹, M_x⁻¹)`,
/// `(R_x, M_x⁻¹, R_x⁻¹)` and `(R_x⁻¹, M_x, R_x)` of a Moufang loop, each
/// certified by a full scan.
pub fn moufang_autotopisms(q: &FiniteLoop, x: usize) -> Result<[MapTriple; 4]> {
    q.check_element(x)?;
    if !q.is_moufang() {
        return Err(LoopError::NotMoufang);
    }
    let l = translation(q, Translation::L, x);
    let r = translation(q, Translation::R, x);
    let m = translation(q, Translation::M, x);
    let (li, ri, mi) = (l.inverse()?, r.inverse()?, m.inverse()?);
    Ok([
        certify_triple(q, MapTriple::new(l, r.clone(), m.clone()))?,
        certify_triple(q, MapTriple::new(li, ri.clone(), mi.clone()))?,
        certify_triple(q, MapTriple::new(r.clone(), mi, ri.clone()))?,
        certify_triple(q, MapTriple::new(ri, m, r))?,
    ])
}

/// Generators of the multiplication group, as symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorToken {
    L(usize),
    R(usize),
    LInv(usize),
    RInv(usize),
    M(usize),
    MInv(usize),
}

impl GeneratorToken {
    pub fn evaluate(self, q: &FiniteLoop) -> ElementMap {
        let inv = |m: ElementMap| m.inverse().expect("translations are permutations");
        match self {
            GeneratorToken::L(x) => translation(q, Translation::L, x),
            GeneratorToken::R(x) => translation(q, Translation::R, x),
            GeneratorToken::M(x) => translation(q, Translation::M, x),
            GeneratorToken::LInv(x) => inv(translation(q, Translation::L, x)),
            GeneratorToken::RInv(x) => inv(translation(q, Translation::R, x)),
            GeneratorToken::MInv(x) => inv(translation(q, Translation::M, x)),
        }
    }
}

/// The triality symbol map `L_x ↦ R_x`, `L_x⁻¹ ↦ R_x⁻¹`, `R_x ↦ M_x⁻¹`,
/// `R_x⁻¹ ↦ M_x`. Defined on `L`/`R` tokens only.
pub fn triality_sigma(token: GeneratorToken) -> Option<GeneratorToken> {
    match token {
        GeneratorToken::L(x) => Some(GeneratorToken::R(x)),
        GeneratorToken::LInv(x) => Some(GeneratorToken::RInv(x)),
        GeneratorToken::R(x) => Some(GeneratorToken::MInv(x)),
        GeneratorToken::RInv(x) => Some(GeneratorToken::M(x)),
        GeneratorToken::M(_) | GeneratorToken::MInv(_) => None,
    }
}

/// Brute-force well-definedness of [`triality_sigma`]: whenever two tokens
/// evaluate to the same permutation, so do their images. Returns the first
/// offending pair.
pub fn triality_sigma_conflict(q: &FiniteLoop) -> Option<(GeneratorToken, GeneratorToken)> {
    let mut tokens = Vec::with_capacity(4 * q.order());
    for x in q.elements() {
        tokens.extend([
            GeneratorToken::L(x),
            GeneratorToken::R(x),
            GeneratorToken::LInv(x),
            GeneratorToken::RInv(x),
        ]);
    }
    let maps: Vec<ElementMap> = tokens.iter().map(|t| t.evaluate(q)).collect();
    let images: Vec<ElementMap> = tokens
        .iter()
        .map(|t| triality_sigma(*t).unwrap().evaluate(q))
        .collect();
    for i in 0..tokens.len() {
        for j in i + 1..tokens.len() {
            if maps[i] == maps[j] && images[i] != images[j] {
                return Some((tokens[i], tokens[j]));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialityReport {
    /// Every commutant element cubes to the identity.
    pub holds: bool,
    /// First commutant element with `x³ ≠ 1`.
    pub witness: Option<usize>,
    pub trivial_nucleus: bool,
}

/// Checks `x³ = 1` for every `x` in the commutant of a diassociative loop.
pub fn triality_condition(q: &FiniteLoop) -> Result<TrialityReport> {
    if !q.is_diassociative() {
        return Err(LoopError::NotDiassociative);
    }
    let commutant = distinguished_subloop(q, Distinguished::Commutant);
    let mut witness = None;
    for x in commutant {
        if q.power(x, 3)? != 0 {
            witness = Some(x);
            break;
        }
    }
    let trivial_nucleus = distinguished_subloop(q, Distinguished::Nucleus) == [0];
    Ok(TrialityReport {
        holds: witness.is_none(),
        witness,
        trivial_nucleus,
    })
}
