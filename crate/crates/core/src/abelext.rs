//! Abelian and central extensions.
//!
//! An abelian extension of a commutative group `X` by a loop `F` lives on
//! `F × X` with
//!
//! ```text
//! (r, x)(s, y) = (rs, φ_{r,s}(x) + ψ_{r,s}(y) + θ_{r,s})
//! ```
//!
//! where every `φ_{r,s}`, `ψ_{r,s}` is an automorphism of `X`. The pair
//! `(r, x)` has index `r·|X| + x`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};
use crate::loops::FiniteLoop;
use crate::mappings::ElementMap;
use crate::subloops::{cosets, is_normal, transversal, Subloop};

/// `(φ, ψ, θ)` over a factor `F` and kernel `X`, indexed by `r·|F| + s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ExtensionDoc", into = "ExtensionDoc")]
pub struct ExtensionData {
    factor: FiniteLoop,
    kernel: FiniteLoop,
    phi: Vec<ElementMap>,
    psi: Vec<ElementMap>,
    theta: Vec<usize>,
}

/// JSON layout: tables as row arrays, `phi`/`psi` as `[r][s]` image arrays,
/// `theta` as `[r][s]` kernel elements.
#[derive(Serialize, Deserialize)]
struct ExtensionDoc {
    factor: Vec<Vec<usize>>,
    kernel: Vec<Vec<usize>>,
    phi: Vec<Vec<Vec<usize>>>,
    psi: Vec<Vec<Vec<usize>>>,
    theta: Vec<Vec<usize>>,
}

impl TryFrom<ExtensionDoc> for ExtensionData {
    type Error = LoopError;

    fn try_from(doc: ExtensionDoc) -> Result<Self> {
        let factor = FiniteLoop::from_table(&doc.factor)?;
        let kernel = FiniteLoop::from_table(&doc.kernel)?;
        let flat_maps = |t: Vec<Vec<Vec<usize>>>| -> Vec<ElementMap> {
            t.into_iter().flatten().map(ElementMap::new).collect()
        };
        ExtensionData::new(
            factor,
            kernel,
            flat_maps(doc.phi),
            flat_maps(doc.psi),
            doc.theta.into_iter().flatten().collect(),
        )
    }
}

impl From<ExtensionData> for ExtensionDoc {
    fn from(d: ExtensionData) -> Self {
        let f = d.factor.order();
        let nest = |maps: &[ElementMap]| -> Vec<Vec<Vec<usize>>> {
            maps.chunks(f)
                .map(|row| row.iter().map(|m| m.images().to_vec()).collect())
                .collect()
        };
        ExtensionDoc {
            factor: d.factor.to_rows(),
            kernel: d.kernel.to_rows(),
            phi: nest(&d.phi),
            psi: nest(&d.psi),
            theta: d.theta.chunks(f).map(|r| r.to_vec()).collect(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> LoopError {
    LoopError::InvalidExtensionData(msg.into())
}

impl ExtensionData {
    /// Validates every invariant: kernel a commutative group, maps
    /// automorphisms, `φ_{r,1} = ψ_{1,r} = id`, `θ_{1,r} = θ_{r,1} = 0`.
    pub fn new(
        factor: FiniteLoop,
        kernel: FiniteLoop,
        phi: Vec<ElementMap>,
        psi: Vec<ElementMap>,
        theta: Vec<usize>,
    ) -> Result<Self> {
        if !kernel.is_commutative_group() {
            return Err(LoopError::KernelNotCommutativeGroup);
        }
        let (f, k) = (factor.order(), kernel.order());
        if phi.len() != f * f || psi.len() != f * f || theta.len() != f * f {
            return Err(invalid(format!("expected {} cells per table", f * f)));
        }
        for (i, (p, s)) in phi.iter().zip(&psi).enumerate() {
            let (r, t) = (i / f, i % f);
            if p.len() != k || !p.is_automorphism_of(&kernel) {
                return Err(invalid(format!("phi[{r}][{t}] is not an automorphism")));
            }
            if s.len() != k || !s.is_automorphism_of(&kernel) {
                return Err(invalid(format!("psi[{r}][{t}] is not an automorphism")));
            }
            if theta[i] >= k {
                return Err(invalid(format!("theta[{r}][{t}] out of range")));
            }
        }
        for r in 0..f {
            if !phi[r * f].is_identity() {
                return Err(invalid(format!("phi[{r}][0] is not the identity")));
            }
            if !psi[r].is_identity() {
                return Err(invalid(format!("psi[0][{r}] is not the identity")));
            }
            if theta[r * f] != 0 || theta[r] != 0 {
                return Err(invalid(format!("theta is nonzero on the boundary at {r}")));
            }
        }
        Ok(ExtensionData {
            factor,
            kernel,
            phi,
            psi,
            theta,
        })
    }

    /// Central data: every `φ`, `ψ` the identity.
    pub fn central(factor: FiniteLoop, kernel: FiniteLoop, theta: Vec<usize>) -> Result<Self> {
        let cells = factor.order() * factor.order();
        let id = ElementMap::identity(kernel.order());
        ExtensionData::new(factor, kernel, vec![id.clone(); cells], vec![id; cells], theta)
    }

    pub fn factor(&self) -> &FiniteLoop {
        &self.factor
    }

    pub fn kernel(&self) -> &FiniteLoop {
        &self.kernel
    }

    pub fn phi(&self, r: usize, s: usize) -> &ElementMap {
        &self.phi[r * self.factor.order() + s]
    }

    pub fn psi(&self, r: usize, s: usize) -> &ElementMap {
        &self.psi[r * self.factor.order() + s]
    }

    pub fn theta(&self, r: usize, s: usize) -> usize {
        self.theta[r * self.factor.order() + s]
    }

    pub fn is_central(&self) -> bool {
        self.phi.iter().chain(&self.psi).all(ElementMap::is_identity)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("extension data serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn build_extension(data: &ExtensionData) -> Result<FiniteLoop> {
    let (f, k) = (data.factor.order(), data.kernel.order());
    let x = &data.kernel;
    FiniteLoop::from_fn(f * k, |a, b| {
        let (r, xa) = (a / k, a % k);
        let (s, yb) = (b / k, b % k);
        let v = x.mul(
            x.mul(data.phi(r, s).apply(xa), data.psi(r, s).apply(yb)),
            data.theta(r, s),
        );
        data.factor.mul(r, s) * k + v
    })
    .map_err(|e| LoopError::NotALoop(Box::new(e)))
}

/// The first constraint that failed while forcing extension data.
///
/// Elements are reported as indices of the decomposed loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "constraint", rename_all = "kebab-case")]
pub enum Obstruction {
    /// The forced `φ_{r,s}` is not an automorphism of `X`.
    PhiNotAutomorphism { r: usize, s: usize },
    PsiNotAutomorphism { r: usize, s: usize },
    /// Central decomposition only: the forced map is not the identity.
    PhiNotIdentity { r: usize, s: usize },
    PsiNotIdentity { r: usize, s: usize },
    Boundary { r: usize, s: usize },
    /// `rx·sy ≠ u_{r,s}·(φ(x)ψ(y)θ)`.
    Equation { r: usize, s: usize, x: usize, y: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Decomposition {
    /// Data together with `embedding[r·|X| + x] = u_r·x`, an isomorphism
    /// from the rebuilt extension onto the input loop.
    Extension {
        data: ExtensionData,
        embedding: Vec<usize>,
    },
    Obstructed(Obstruction),
}

impl Decomposition {
    pub fn data(&self) -> Option<&ExtensionData> {
        match self {
            Decomposition::Extension { data, .. } => Some(data),
            Decomposition::Obstructed(_) => None,
        }
    }

    pub fn obstruction(&self) -> Option<Obstruction> {
        match self {
            Decomposition::Obstructed(o) => Some(*o),
            Decomposition::Extension { .. } => None,
        }
    }

    pub fn is_extension(&self) -> bool {
        self.data().is_some()
    }
}

/// A normal commutative-group subloop and a transversal, with the
/// coordinates `a = u_k·x` precomputed.
struct Frame<'a> {
    q: &'a FiniteLoop,
    kernel: FiniteLoop,
    /// Parent index of each local kernel element.
    local: Vec<usize>,
    /// Local kernel index of each parent element, if in `X`.
    back: Vec<usize>,
    /// Transversal, indexed by coset.
    reps: Vec<usize>,
    /// Coset index of each parent element.
    coset: Vec<usize>,
}

impl<'a> Frame<'a> {
    fn new(q: &'a FiniteLoop, x: &Subloop, u: &[usize]) -> Result<Self> {
        if x.parent_order() != q.order() || !is_normal(q, x) {
            return Err(LoopError::NotNormal);
        }
        let (kernel, local) = x.to_loop(q);
        if !kernel.is_commutative_group() {
            return Err(LoopError::KernelNotCommutativeGroup);
        }
        let cs = cosets(q, x)?;
        let mut coset = vec![0usize; q.order()];
        for (k, c) in cs.iter().enumerate() {
            for &a in c {
                coset[a] = k;
            }
        }
        let mut reps = vec![usize::MAX; cs.len()];
        for &a in u {
            q.check_element(a)?;
            if reps[coset[a]] != usize::MAX {
                return Err(LoopError::NotTransversal);
            }
            reps[coset[a]] = a;
        }
        if u.len() != cs.len() || reps[0] != 0 {
            return Err(LoopError::NotTransversal);
        }
        let mut back = vec![usize::MAX; q.order()];
        for (i, &a) in local.iter().enumerate() {
            back[a] = i;
        }
        Ok(Frame {
            q,
            kernel,
            local,
            back,
            reps,
            coset,
        })
    }

    fn factor(&self) -> FiniteLoop {
        let q = self.q;
        FiniteLoop::from_fn(self.reps.len(), |r, s| {
            self.coset[q.mul(self.reps[r], self.reps[s])]
        })
        .expect("quotient by a normal subloop is a loop")
    }

    /// `u \ a` as a local kernel element; `a` must lie in `uX`.
    fn coord(&self, u: usize, a: usize) -> usize {
        self.back[self.q.ldiv(u, a)]
    }

    fn sub(&self, a: usize, b: usize) -> usize {
        self.kernel.mul(a, self.kernel.inv(b))
    }

    fn embedding(&self) -> Vec<usize> {
        let k = self.local.len();
        (0..self.reps.len() * k)
            .map(|i| self.q.mul(self.reps[i / k], self.local[i % k]))
            .collect()
    }

    /// First `(x, y)` violating `u_r x · u_s y = u_{rs}·(φ(x)ψ(y)θ)`.
    fn equation_violation(
        &self,
        r: usize,
        s: usize,
        phi: &ElementMap,
        psi: &ElementMap,
        theta: usize,
    ) -> Option<(usize, usize)> {
        let (q, x) = (self.q, &self.kernel);
        let (ur, us) = (self.reps[r], self.reps[s]);
        let urs = self.reps[self.coset[q.mul(ur, us)]];
        let k = self.local.len();
        (0..k).find_map(|a| {
            let lhs_a = q.mul(ur, self.local[a]);
            (0..k).find_map(|b| {
                let lhs = q.mul(lhs_a, q.mul(us, self.local[b]));
                let v = x.mul(x.mul(phi.apply(a), psi.apply(b)), theta);
                (lhs != q.mul(urs, self.local[v])).then_some((a, b))
            })
        })
    }
}

/// Decomposes `Q` as an abelian extension of `X` over the transversal `u`.
///
/// Setting `y = 1` and then `x = 1` in the defining equation forces
/// `θ_{r,s} = u_{r,s}\(rs)`, `φ_{r,s}(x) = u_{r,s}\(rx·s) − θ_{r,s}` and
/// `ψ_{r,s}(y) = u_{r,s}\(r·sy) − θ_{r,s}`; those are then checked.
pub fn decompose(q: &FiniteLoop, x: &Subloop, u: &[usize]) -> Result<Decomposition> {
    decompose_inner(q, x, u, false)
}

/// [`decompose`] over the minimal-representative transversal.
pub fn decompose_canonical(q: &FiniteLoop, x: &Subloop) -> Result<Decomposition> {
    let u = transversal(q, x)?;
    decompose(q, x, &u)
}

/// Decomposition with `φ`, `ψ` pinned to the identity; succeeds exactly when
/// `X ≤ Z(Q)`.
pub fn decompose_central(q: &FiniteLoop, x: &Subloop) -> Result<Decomposition> {
    let u = transversal(q, x)?;
    decompose_inner(q, x, &u, true)
}

fn decompose_inner(q: &FiniteLoop, x: &Subloop, u: &[usize], central: bool) -> Result<Decomposition> {
    let fr = Frame::new(q, x, u)?;
    let factor = fr.factor();
    let (f, k) = (factor.order(), fr.local.len());

    let mut phi = Vec::with_capacity(f * f);
    let mut psi = Vec::with_capacity(f * f);
    let mut theta = Vec::with_capacity(f * f);
    for r in 0..f {
        for s in 0..f {
            let (ur, us) = (fr.reps[r], fr.reps[s]);
            let urs = fr.reps[factor.mul(r, s)];
            let t = fr.coord(urs, q.mul(ur, us));
            let p = ElementMap::from_fn(k, |a| {
                let v = q.mul(q.mul(ur, fr.local[a]), us);
                fr.sub(fr.coord(urs, v), t)
            });
            let ps = ElementMap::from_fn(k, |b| {
                let v = q.mul(ur, q.mul(us, fr.local[b]));
                fr.sub(fr.coord(urs, v), t)
            });
            let cell = |o: fn(usize, usize) -> Obstruction| {
                Ok(Decomposition::Obstructed(o(ur, us)))
            };
            if central {
                if !p.is_identity() {
                    return cell(|r, s| Obstruction::PhiNotIdentity { r, s });
                }
                if !ps.is_identity() {
                    return cell(|r, s| Obstruction::PsiNotIdentity { r, s });
                }
            }
            if !p.is_automorphism_of(&fr.kernel) {
                return cell(|r, s| Obstruction::PhiNotAutomorphism { r, s });
            }
            if !ps.is_automorphism_of(&fr.kernel) {
                return cell(|r, s| Obstruction::PsiNotAutomorphism { r, s });
            }
            let boundary_ok = (s != 0 || (p.is_identity() && t == 0))
                && (r != 0 || (ps.is_identity() && t == 0));
            if !boundary_ok {
                return cell(|r, s| Obstruction::Boundary { r, s });
            }
            phi.push(p);
            psi.push(ps);
            theta.push(t);
        }
    }

    let violation = (0..f * f).into_par_iter().find_map_first(|i| {
        let (r, s) = (i / f, i % f);
        fr.equation_violation(r, s, &phi[i], &psi[i], theta[i])
            .map(|(a, b)| Obstruction::Equation {
                r: fr.reps[r],
                s: fr.reps[s],
                x: fr.local[a],
                y: fr.local[b],
            })
    });
    if let Some(o) = violation {
        return Ok(Decomposition::Obstructed(o));
    }

    let embedding = fr.embedding();
    let data = ExtensionData::new(factor, fr.kernel.clone(), phi, psi, theta)?;
    Ok(Decomposition::Extension { data, embedding })
}

/// `a` with `a³ = u`, least index first.
pub fn cube_root(q: &FiniteLoop, u: usize) -> Result<usize> {
    q.check_element(u)?;
    if !q.is_power_associative() {
        return Err(LoopError::NotPowerAssociative);
    }
    q.elements()
        .find(|&a| q.power(a, 3).ok() == Some(u))
        .ok_or(LoopError::NoCubeRoot(u))
}

fn power_map_surjective(q: &FiniteLoop, d: i64) -> bool {
    let mut hit = vec![false; q.order()];
    for a in q.elements() {
        match q.power(a, d) {
            Ok(v) => hit[v] = true,
            Err(_) => return false,
        }
    }
    hit.into_iter().all(|h| h)
}

/// The four restricted maps and their composites for one cell `(r, s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionMaps {
    /// `T_s|_X`
    pub f1: ElementMap,
    /// `(L_{s⁻¹r}⁻¹ L_s⁻¹ L_r)|_X`
    pub f2: ElementMap,
    /// `(L_{rs}⁻¹ L_r L_s)|_X`
    pub f3: ElementMap,
    /// `(L_z⁻¹ L_u⁻¹ L_{rs})|_X`, where `rs = uz`
    pub f4: ElementMap,
    /// `f₄ f₃ f₁⁻¹ f₂`
    pub phi: ElementMap,
    /// `f₄ f₃`
    pub psi: ElementMap,
    /// `z = u \ (rs)`, as a local kernel element
    pub theta: usize,
    /// Some `a` with `a³ = s⁻¹r`.
    pub cube_root: usize,
}

/// Explicit `(φ_{r,s}, ψ_{r,s}, θ_{r,s})` for a 3-divisible Moufang loop and
/// a 2-divisible normal commutative group `X`. Maps act on local kernel
/// indices (the sorted elements of `X`).
pub fn extension_maps(
    q: &FiniteLoop,
    x: &Subloop,
    u: &[usize],
    r: usize,
    s: usize,
) -> Result<ExtensionMaps> {
    if !q.is_moufang() {
        return Err(LoopError::NotMoufang);
    }
    if !power_map_surjective(q, 3) {
        return Err(LoopError::Not3Divisible);
    }
    let fr = Frame::new(q, x, u)?;
    if !power_map_surjective(&fr.kernel, 2) {
        return Err(LoopError::KernelNot2Divisible);
    }
    if !u.contains(&r) || !u.contains(&s) {
        return Err(LoopError::NotTransversal);
    }
    let n = q.order();
    let sinv = q.inv(s);
    let sir = q.mul(sinv, r);
    let rs = q.mul(r, s);
    let uu = fr.reps[fr.coset[rs]];
    let z = q.ldiv(uu, rs);

    let restrict = |name: &'static str, m: ElementMap| -> Result<ElementMap> {
        m.restrict(x)
            .filter(|g| g.is_automorphism_of(&fr.kernel))
            .ok_or(LoopError::RestrictionNotAutomorphism(name))
    };
    let f1 = restrict("f1", ElementMap::from_fn(n, |a| q.rdiv(q.mul(s, a), s)))?;
    let f2 = restrict(
        "f2",
        ElementMap::from_fn(n, |a| q.ldiv(sir, q.ldiv(s, q.mul(r, a)))),
    )?;
    let f3 = restrict("f3", ElementMap::from_fn(n, |a| q.ldiv(rs, q.mul(r, q.mul(s, a)))))?;
    let f4 = restrict("f4", ElementMap::from_fn(n, |a| q.ldiv(z, q.ldiv(uu, q.mul(rs, a)))))?;

    let psi = f4.compose(&f3);
    let phi = psi.compose(&f1.inverse()?).compose(&f2);
    Ok(ExtensionMaps {
        cube_root: cube_root(q, sir)?,
        theta: fr.back[z],
        f1,
        f2,
        f3,
        f4,
        phi,
        psi,
    })
}

/// Number of `(r, s, x, y)` checks of the extension equation made with the
/// [`extension_maps`] data over every cell, and how many failed.
pub fn extension_maps_scan(q: &FiniteLoop, x: &Subloop, u: &[usize]) -> Result<(usize, usize)> {
    let fr = Frame::new(q, x, u)?;
    let k = fr.local.len();
    let f = fr.reps.len();
    let mut violations = 0usize;
    for ri in 0..f {
        for si in 0..f {
            let m = extension_maps(q, x, u, fr.reps[ri], fr.reps[si])?;
            let (ur, us) = (fr.reps[ri], fr.reps[si]);
            let urs = fr.reps[fr.coset[q.mul(ur, us)]];
            for a in 0..k {
                for b in 0..k {
                    let lhs = q.mul(q.mul(ur, fr.local[a]), q.mul(us, fr.local[b]));
                    let xk = &fr.kernel;
                    let v = xk.mul(xk.mul(m.phi.apply(a), m.psi.apply(b)), m.theta);
                    if lhs != q.mul(urs, fr.local[v]) {
                        violations += 1;
                    }
                }
            }
        }
    }
    Ok((f * f * k * k, violations))
}

/// Whether every element of `Q` is a cube; checked by exhaustion.
pub fn is_3_divisible(q: &FiniteLoop) -> bool {
    power_map_surjective(q, 3)
}
