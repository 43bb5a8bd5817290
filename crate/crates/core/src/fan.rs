//! Rational simplicial fans: validation, unimodularity, balancing, star fans and
//! barycentric star subdivisions.
//!
//! A fan stores a global ray table and the set of its cones, each cone being the sorted
//! tuple of its ray indices. All sign and basis conventions downstream derive from the
//! ray order, so two fans with the same file produce the same matrices.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fm::{self, Constraint, Relation};
use crate::linalg::{self, gcd_slice, hermite, int_mat_vec, maximal_minor_gcd, q, IntMatrix, QMatrix, Q};
use crate::report::Report;

/// A simplicial cone, as the ascending tuple of its ray indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Cone(rays)
    }

    pub fn zero() -> Self {
        Cone(Vec::new())
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains_ray(&self, r: usize) -> bool {
        self.0.binary_search(&r).is_ok()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.0.iter().all(|r| other.contains_ray(*r))
    }

    pub fn union(&self, other: &Cone) -> Cone {
        Cone::new(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn with_ray(&self, r: usize) -> Cone {
        let mut v = self.0.clone();
        v.push(r);
        Cone::new(v)
    }

    pub fn without_ray(&self, r: usize) -> Cone {
        Cone(self.0.iter().copied().filter(|&x| x != r).collect())
    }

    /// Rays of `self` not in `other`, ascending.
    pub fn minus(&self, other: &Cone) -> Vec<usize> {
        self.0.iter().copied().filter(|r| !other.contains_ray(*r)).collect()
    }

    /// Position of `r` in the sorted tuple.
    pub fn position(&self, r: usize) -> Option<usize> {
        self.0.binary_search(&r).ok()
    }

    /// All faces, including the zero cone and the cone itself.
    pub fn faces(&self) -> Vec<Cone> {
        let k = self.0.len();
        (0u64..(1u64 << k))
            .map(|mask| Cone((0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl From<Vec<usize>> for Cone {
    fn from(v: Vec<usize>) -> Self {
        Cone::new(v)
    }
}

/// Integer data of the quotient `N → N/N_σ` for a cone σ.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// `(n − s) × n`; rows form a basis of the covectors vanishing on σ.
    pub projection: IntMatrix,
    /// `n × (n − s)`; `projection · lift = I`.
    pub lift: IntMatrix,
    /// `s × n`; row `i` pairs to 1 with the `i`-th ray of σ and to 0 with the others.
    /// Present only for unimodular cones.
    pub dual: Option<IntMatrix>,
}

impl Quotient {
    pub fn rank(&self) -> usize {
        self.projection.len()
    }

    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        int_mat_vec(&self.projection, v)
    }
}

#[derive(Clone, Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Cone>,
    index: HashMap<Cone, usize>,
    maximal: Vec<Cone>,
    weights: Option<Vec<i64>>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.rays == other.rays
            && self.cones == other.cones
            && self.maximal == other.maximal
            && self.weights == other.weights
    }
}

impl Eq for Fan {}

impl Fan {
    /// Validates a fan given by its ray table and (possibly redundant) list of maximal
    /// cones, completing face closure.
    pub fn new(
        rank: usize,
        rays: Vec<Vec<i64>>,
        cones: Vec<Vec<usize>>,
        weights: Option<Vec<i64>>,
    ) -> Result<Fan> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::RayDimension { index: i, found: r.len(), rank });
            }
            let g = gcd_slice(r);
            if g == 0 {
                return Err(Error::ZeroRay { index: i });
            }
            if g != 1 {
                return Err(Error::NonPrimitiveRay { index: i, gcd: g });
            }
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if rays[i] == rays[j] {
                    return Err(Error::DuplicateRay(i, j));
                }
            }
        }

        let mut listed: Vec<Cone> = Vec::with_capacity(cones.len());
        for c in &cones {
            for &i in c {
                if i >= rays.len() {
                    return Err(Error::RayOutOfRange { cone: c.clone(), index: i, count: rays.len() });
                }
            }
            let cone = Cone::new(c.clone());
            if cone.dim() != c.len() {
                return Err(Error::RepeatedRayInCone(c.clone()));
            }
            let gens: Vec<Vec<i64>> = cone.rays().iter().map(|&i| rays[i].clone()).collect();
            if QMatrix::from_int_rows(rank, &gens).rank() != cone.dim() {
                return Err(Error::DependentGenerators(cone.rays().to_vec()));
            }
            listed.push(cone);
        }

        let is_max = |c: &Cone, all: &[Cone]| !all.iter().any(|d| d != c && d.dim() > c.dim() && c.is_face_of(d));
        if let Some(w) = &weights {
            if w.len() != listed.len() {
                return Err(Error::WeightCount { given: w.len(), cones: listed.len() });
            }
            for (c, &wt) in listed.iter().zip(w) {
                if !is_max(c, &listed) {
                    return Err(Error::WeightOnNonMaximal(c.rays().to_vec()));
                }
                if wt == 0 {
                    return Err(Error::ZeroWeight(c.rays().to_vec()));
                }
            }
        }

        // Drop non-maximal and duplicate entries, keeping weights aligned.
        let mut maximal: Vec<Cone> = Vec::new();
        let mut max_weights: Vec<i64> = Vec::new();
        for (i, c) in listed.iter().enumerate() {
            if is_max(c, &listed) && !maximal.contains(c) {
                maximal.push(c.clone());
                if let Some(w) = &weights {
                    max_weights.push(w[i]);
                }
            }
        }
        if maximal.is_empty() {
            maximal.push(Cone::zero());
            if weights.is_some() {
                max_weights.push(1);
            }
        }
        let weights = weights.map(|_| max_weights);

        if weights.is_some() {
            let d = maximal[0].dim();
            if maximal.iter().any(|c| c.dim() != d) {
                return Err(Error::NotPure);
            }
        }

        for i in 0..maximal.len() {
            for j in i + 1..maximal.len() {
                if !intersect_in_common_face(rank, &rays, &maximal[i], &maximal[j]) {
                    return Err(Error::BadIntersection(maximal[i].rays().to_vec(), maximal[j].rays().to_vec()));
                }
            }
        }

        let fan = Fan::assemble(rank, rays, maximal, weights);
        for r in 0..fan.rays.len() {
            if !fan.index.contains_key(&Cone(vec![r])) {
                return Err(Error::UnusedRay(r));
            }
        }
        Ok(fan)
    }

    /// Builds the face closure without validation. Callers guarantee the invariants.
    pub(crate) fn assemble(rank: usize, rays: Vec<Vec<i64>>, maximal: Vec<Cone>, weights: Option<Vec<i64>>) -> Fan {
        let mut all: BTreeSet<(usize, Cone)> = BTreeSet::new();
        all.insert((0, Cone::zero()));
        for m in &maximal {
            for f in m.faces() {
                all.insert((f.dim(), f));
            }
        }
        let cones: Vec<Cone> = all.into_iter().map(|(_, c)| c).collect();
        let index = cones.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Fan { rank, rays, cones, index, maximal, weights }
    }

    /// The fan whose only cone is the origin, in a lattice of the given rank.
    pub fn zero_fan(rank: usize) -> Fan {
        Fan::assemble(rank, Vec::new(), vec![Cone::zero()], Some(vec![1]))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// All cones, ordered by dimension then lexicographically.
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cones_of_dim(&self, k: usize) -> impl Iterator<Item = &Cone> {
        self.cones.iter().filter(move |c| c.dim() == k)
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    pub fn contains(&self, c: &Cone) -> bool {
        self.index.contains_key(c)
    }

    pub fn cone_index(&self, c: &Cone) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Largest cone dimension.
    pub fn dim(&self) -> usize {
        self.maximal.iter().map(Cone::dim).max().unwrap_or(0)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.maximal.iter().all(|c| c.dim() == d)
    }

    pub fn generators(&self, c: &Cone) -> Vec<Vec<i64>> {
        c.rays().iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Explicit facet weights, if the fan carries any.
    pub fn explicit_weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    /// Weight of a maximal cone; pure fans without explicit weights have weight 1.
    pub fn weight(&self, c: &Cone) -> Result<i64> {
        let pos = self.maximal.iter().position(|m| m == c).ok_or_else(|| Error::WeightOnNonMaximal(c.rays().to_vec()))?;
        match &self.weights {
            Some(w) => Ok(w[pos]),
            None if self.is_pure() => Ok(1),
            None => Err(Error::MissingWeights),
        }
    }

    pub fn with_weights(&self, weights: Vec<i64>) -> Result<Fan> {
        let cones = self.maximal.iter().map(|c| c.rays().to_vec()).collect();
        Fan::new(self.rank, self.rays.clone(), cones, Some(weights))
    }

    /// Cones containing `c`, in fan order.
    pub fn star_cones(&self, c: &Cone) -> impl Iterator<Item = &Cone> + '_ {
        let c = c.clone();
        self.cones.iter().filter(move |d| c.is_face_of(d))
    }

    /// Rays ξ ∉ σ such that σ + ξ is a cone.
    pub fn link_rays(&self, c: &Cone) -> Vec<usize> {
        (0..self.rays.len())
            .filter(|&r| !c.contains_ray(r) && self.contains(&c.with_ray(r)))
            .collect()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let d = self.dim();
        (0..=d).map(|k| self.cones_of_dim(k).count()).collect()
    }

    pub fn quotient(&self, c: &Cone) -> Result<Quotient> {
        quotient_of(self.rank, &self.generators(c))
    }

    pub fn is_cone_unimodular(&self, c: &Cone) -> Result<bool> {
        Ok(maximal_minor_gcd(self.rank, &self.generators(c))? == 1)
    }

    pub fn is_unimodular_fan(&self) -> Result<bool> {
        for m in &self.maximal {
            if !self.is_cone_unimodular(m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether a rational point lies in the support.
    pub fn contains_point(&self, p: &[Q]) -> bool {
        assert_eq!(p.len(), self.rank);
        self.maximal.iter().any(|m| {
            if m.dim() == 0 {
                return p.iter().all(Zero::is_zero);
            }
            let cols = self.generators(m);
            let a = QMatrix::from_rows(
                cols.len(),
                (0..self.rank).map(|i| cols.iter().map(|g| q(g[i])).collect()).collect(),
            );
            match a.solve(p) {
                Some(x) => x.iter().all(|v| !v.is_negative()),
                None => false,
            }
        })
    }

    /// A point in the relative interior of the cone: the sum of its generators.
    pub fn interior_point(&self, c: &Cone) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for g in self.generators(c) {
            for (a, b) in v.iter_mut().zip(g) {
                *a += b;
            }
        }
        v
    }
}

pub fn quotient_of(rank: usize, gens: &[Vec<i64>]) -> Result<Quotient> {
    let h = hermite(rank, gens)?;
    let s = h.rank;
    let projection: IntMatrix = h.u[s..].to_vec();
    let lift: IntMatrix = h.u_inv.iter().map(|row| row[s..].to_vec()).collect();
    let dual = if s == gens.len() { triangular_dual(&h.u[..s], &h.reduced, s) } else { None };
    Ok(Quotient { projection, lift, dual })
}

/// `T^{-1}·U_top` when the triangular block `T` is unimodular.
fn triangular_dual(u_top: &[Vec<i64>], reduced: &IntMatrix, s: usize) -> Option<IntMatrix> {
    if (0..s).any(|i| reduced[i][i].abs() != 1) {
        return None;
    }
    // Solve T·X = U_top by back substitution; T upper triangular with ±1 diagonal.
    let n = u_top.first().map_or(0, |r| r.len());
    let mut x: IntMatrix = vec![vec![0; n]; s];
    for i in (0..s).rev() {
        for j in 0..n {
            let mut acc = u_top[i][j];
            for k in i + 1..s {
                acc -= reduced[i][k] * x[k][j];
            }
            x[i][j] = acc * reduced[i][i];
        }
    }
    Some(x)
}

/// cone(A) ∩ cone(B) = cone(A ∩ B) for simplicial A, B.
fn intersect_in_common_face(rank: usize, rays: &[Vec<i64>], a: &Cone, b: &Cone) -> bool {
    let only_a = a.minus(b);
    let only_b = b.minus(a);
    if only_a.is_empty() || only_b.is_empty() {
        // One is a face of the other, which is fine.
        return true;
    }
    // λ ≥ 0 on A, μ ≥ 0 on B, Σλa = Σμb, mass on non-shared generators = 1.
    let vars: Vec<(usize, i64)> = a.rays().iter().map(|&r| (r, 1)).chain(b.rays().iter().map(|&r| (r, -1))).collect();
    let nv = vars.len();
    let mut cons = Vec::new();
    for i in 0..rank {
        let coeffs = vars.iter().map(|&(r, s)| q(s * rays[r][i])).collect();
        cons.push(Constraint::new(coeffs, Relation::Eq, q(0)));
    }
    for k in 0..nv {
        let mut coeffs = vec![q(0); nv];
        coeffs[k] = q(-1);
        cons.push(Constraint::new(coeffs, Relation::LessEq, q(0)));
    }
    let mass: Vec<Q> = vars
        .iter()
        .enumerate()
        .map(|(k, &(r, _))| {
            let outside = if k < a.dim() { !b.contains_ray(r) } else { !a.contains_ray(r) };
            q(i64::from(outside))
        })
        .collect();
    cons.push(Constraint::new(mass, Relation::Eq, q(1)));
    !fm::feasible(nv, &cons)
}

pub fn fan_f_vector(fan: &Fan) -> Vec<usize> {
    fan.f_vector()
}

pub fn is_unimodular(fan: &Fan) -> Result<Report> {
    let mut bad = Vec::new();
    for m in fan.maximal_cones() {
        let g = maximal_minor_gcd(fan.rank(), &fan.generators(m))?;
        if g != 1 {
            bad.push((m.clone(), g));
        }
    }
    let mut r = Report::from_bool("unimodular", bad.is_empty()).fact("maximal cones", fan.maximal_cones().len());
    for (c, g) in bad {
        r = r.witness(format!("cone {c} has lattice index {g}"));
    }
    Ok(r)
}

/// Weighted sum of the primitive generators (mod `N_τ`) of the facets around each
/// codimension-one cone `τ`, in the quotient lattice. Returns the offending cones.
pub(crate) fn balancing_defects(fan: &Fan) -> Result<Vec<(Cone, Vec<i64>)>> {
    if !fan.is_pure() {
        return Err(Error::MissingWeights);
    }
    let d = fan.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for tau in fan.cones_of_dim(d - 1) {
        let qt = fan.quotient(tau)?;
        let mut sum = vec![0i64; qt.rank()];
        for eta in fan.maximal_cones().iter().filter(|m| tau.is_face_of(m)) {
            let u = eta.minus(tau)[0];
            let img = linalg::primitive(&qt.project(fan.ray(u)));
            let w = fan.weight(eta)?;
            for (s, x) in sum.iter_mut().zip(img) {
                *s += w * x;
            }
        }
        if sum.iter().any(|&x| x != 0) {
            out.push((tau.clone(), sum));
        }
    }
    Ok(out)
}

pub fn is_balanced(fan: &Fan) -> Result<Report> {
    let defects = balancing_defects(fan)?;
    let mut r = Report::from_bool("balanced", defects.is_empty())
        .fact("dimension", fan.dim())
        .fact("codimension-one cones", if fan.dim() == 0 { 0 } else { fan.cones_of_dim(fan.dim() - 1).count() });
    if fan.explicit_weights().is_none() {
        r = r.note("no weights given; all facets have weight 1");
    }
    for (tau, s) in defects {
        r = r.witness(format!("cone {tau}: weighted sum {:?} is not in its span", s));
    }
    Ok(r)
}

/// The star of a cone δ, living in the quotient lattice `N/N_δ`.
#[derive(Clone, Debug)]
pub struct StarFan {
    pub fan: Fan,
    /// The cone δ of the parent fan.
    pub base: Cone,
    /// Parent ray index of each star ray.
    pub parent_ray: Vec<usize>,
    pub quotient: Quotient,
}

impl StarFan {
    /// The star cone corresponding to a parent cone containing the base.
    pub fn cone_of(&self, parent: &Cone) -> Option<Cone> {
        if !self.base.is_face_of(parent) {
            return None;
        }
        let rays: Option<Vec<usize>> = parent
            .minus(&self.base)
            .into_iter()
            .map(|r| self.parent_ray.iter().position(|&p| p == r))
            .collect();
        rays.map(Cone::new)
    }

    /// The parent cone corresponding to a star cone.
    pub fn parent_cone(&self, star: &Cone) -> Cone {
        self.base.union(&Cone::new(star.rays().iter().map(|&r| self.parent_ray[r]).collect()))
    }
}

pub fn star_fan(fan: &Fan, delta: &Cone) -> Result<StarFan> {
    if !fan.contains(delta) {
        return Err(Error::NotACone(delta.rays().to_vec()));
    }
    let quotient = fan.quotient(delta)?;
    let parent_ray = fan.link_rays(delta);
    let rays: Vec<Vec<i64>> = parent_ray.iter().map(|&r| linalg::primitive(&quotient.project(fan.ray(r)))).collect();
    let local = |c: &Cone| -> Cone {
        Cone::new(c.minus(delta).into_iter().map(|r| parent_ray.iter().position(|&p| p == r).unwrap()).collect())
    };
    let mut maximal = Vec::new();
    let mut weights = Vec::new();
    for m in fan.maximal_cones().iter().filter(|m| delta.is_face_of(m)) {
        maximal.push(local(m));
        if fan.is_pure() {
            weights.push(fan.weight(m)?);
        }
    }
    let weights = if fan.is_pure() { Some(weights) } else { None };
    let star = Fan::assemble(quotient.rank(), rays, maximal, weights);
    Ok(StarFan { fan: star, base: delta.clone(), parent_ray, quotient })
}

/// Result of a barycentric star subdivision; the new ray is appended last.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub fan: Fan,
    pub new_ray: usize,
    pub subdivided: Cone,
}

pub fn barycentric_star_subdivision(fan: &Fan, sigma: &Cone) -> Result<Subdivision> {
    if !fan.contains(sigma) {
        return Err(Error::NotACone(sigma.rays().to_vec()));
    }
    if sigma.dim() < 2 {
        return Err(Error::ConeTooSmall(sigma.rays().to_vec()));
    }
    for m in fan.maximal_cones() {
        if !fan.is_cone_unimodular(m)? {
            return Err(Error::NotUnimodular(m.rays().to_vec()));
        }
    }
    let rho = fan.num_rays();
    let mut rays = fan.rays().to_vec();
    rays.push(linalg::primitive(&fan.interior_point(sigma)));

    let mut maximal = Vec::new();
    let mut weights = Vec::new();
    for m in fan.maximal_cones() {
        let w = if fan.is_pure() { Some(fan.weight(m)?) } else { None };
        if sigma.is_face_of(m) {
            for &z in sigma.rays() {
                maximal.push(m.without_ray(z).with_ray(rho));
                weights.extend(w);
            }
        } else {
            maximal.push(m.clone());
            weights.extend(w);
        }
    }
    let weights = if fan.is_pure() { Some(weights) } else { None };
    let out = Fan::assemble(fan.rank(), rays, maximal, weights);
    debug_assert!(out.is_unimodular_fan().unwrap_or(false));
    Ok(Subdivision { fan: out, new_ray: rho, subdivided: sigma.clone() })
}

/// Cartesian product of two fans in `N ⊕ N'`.
pub fn product_fan(a: &Fan, b: &Fan) -> Fan {
    let n = a.rank() + b.rank();
    let mut rays: Vec<Vec<i64>> = a.rays().iter().map(|r| r.iter().copied().chain(std::iter::repeat_n(0, b.rank())).collect()).collect();
    let off = rays.len();
    rays.extend(b.rays().iter().map(|r| std::iter::repeat_n(0, a.rank()).chain(r.iter().copied()).collect()));
    let mut maximal = Vec::new();
    let mut weights = Vec::new();
    let weighted = a.is_pure() && b.is_pure();
    for ma in a.maximal_cones() {
        for mb in b.maximal_cones() {
            maximal.push(Cone::new(ma.rays().iter().copied().chain(mb.rays().iter().map(|r| r + off)).collect()));
            if weighted {
                weights.push(a.weight(ma).unwrap_or(1) * b.weight(mb).unwrap_or(1));
            }
        }
    }
    Fan::assemble(n, rays, maximal, if weighted { Some(weights) } else { None })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn face_closure_of_two_planes() {
        let f = Fan::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], vec![vec![0, 1], vec![1, 2]], None).unwrap();
        assert_eq!(f.cones().len(), 6);
        assert_eq!(f.f_vector(), vec![1, 3, 2]);
    }

    #[test]
    fn rejects_dependent_generators() {
        let e = Fan::new(2, vec![vec![1, 0], vec![-1, 0]], vec![vec![0, 1]], None).unwrap_err();
        assert_eq!(e, Error::DependentGenerators(vec![0, 1]));
    }

    #[test]
    fn rejects_non_primitive_ray() {
        let e = Fan::new(2, vec![vec![2, 4]], vec![vec![0]], None).unwrap_err();
        assert_eq!(e, Error::NonPrimitiveRay { index: 0, gcd: 2 });
    }

    #[test]
    fn rejects_overlapping_cones() {
        let e = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], vec![vec![0, 1], vec![0, 2]], None).unwrap_err();
        assert!(matches!(e, Error::BadIntersection(..)));
    }

    #[test]
    fn rejects_weight_on_face() {
        let e = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0]], Some(vec![1, 1])).unwrap_err();
        assert_eq!(e, Error::WeightOnNonMaximal(vec![0]));
    }

    #[test]
    fn unimodularity_witness() {
        let f = Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]], None).unwrap();
        let r = is_unimodular(&f).unwrap();
        assert!(!r.passed());
        assert_eq!(r.witnesses, vec!["cone {0,1} has lattice index 2".to_string()]);
        assert!(is_unimodular(&fixtures::elliptic()).unwrap().passed());
        assert!(is_unimodular(&fixtures::u34_coarse()).unwrap().passed());
    }

    #[test]
    fn balancing_examples() {
        assert!(is_balanced(&fixtures::cross()).unwrap().passed());
        assert!(is_balanced(&fixtures::elliptic()).unwrap().passed());
        let quarter = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0], vec![1]], Some(vec![1, 1])).unwrap();
        let r = is_balanced(&quarter).unwrap();
        assert!(!r.passed());
        assert_eq!(r.witnesses.len(), 1);
        assert!(r.witnesses[0].starts_with("cone {}"));
    }

    #[test]
    fn star_of_ray_in_p2() {
        let p2 = fixtures::p2();
        let s = star_fan(&p2, &Cone::new(vec![0])).unwrap();
        assert_eq!(s.fan.rank(), 1);
        assert_eq!(s.fan.num_rays(), 2);
        let mut rays = s.fan.rays().to_vec();
        rays.sort();
        assert_eq!(rays, vec![vec![-1], vec![1]]);
        assert_eq!(s.fan.f_vector(), vec![1, 2]);
    }

    #[test]
    fn star_of_zero_and_of_facet() {
        let p2 = fixtures::p2();
        let s0 = star_fan(&p2, &Cone::zero()).unwrap();
        assert_eq!(s0.fan.f_vector(), p2.f_vector());
        assert_eq!(s0.parent_ray, vec![0, 1, 2]);
        let sf = star_fan(&p2, &Cone::new(vec![0, 1])).unwrap();
        assert_eq!(sf.fan.rank(), 0);
        assert_eq!(sf.fan.f_vector(), vec![1]);
    }

    #[test]
    fn subdivision_of_p2_is_blowup() {
        let p2 = fixtures::p2();
        let s = barycentric_star_subdivision(&p2, &Cone::new(vec![0, 1])).unwrap();
        assert_eq!(s.fan.num_rays(), 4);
        assert_eq!(s.fan.maximal_cones().len(), 4);
        assert_eq!(s.fan.ray(3), &[1, 1]);
        assert!(s.fan.is_unimodular_fan().unwrap());
        assert!(matches!(
            barycentric_star_subdivision(&p2, &Cone::new(vec![0])),
            Err(Error::ConeTooSmall(_))
        ));
    }

    #[test]
    fn f_vectors_of_fixtures() {
        assert_eq!(fixtures::nm().f_vector(), vec![1, 10, 14]);
        assert_eq!(fixtures::cross().f_vector(), vec![1, 4]);
        assert_eq!(fixtures::p2().f_vector(), vec![1, 3, 3]);
    }

    #[test]
    fn dual_covectors() {
        let f = fixtures::nm();
        for c in f.cones() {
            let qt = f.quotient(c).unwrap();
            let dual = qt.dual.expect("unimodular");
            for (i, m) in dual.iter().enumerate() {
                for (j, &r) in c.rays().iter().enumerate() {
                    let pairing: i64 = m.iter().zip(f.ray(r)).map(|(a, b)| a * b).sum();
                    assert_eq!(pairing, i64::from(i == j));
                }
            }
            for row in &qt.projection {
                for &r in c.rays() {
                    assert_eq!(row.iter().zip(f.ray(r)).map(|(a, b)| a * b).sum::<i64>(), 0);
                }
            }
        }
    }
}
