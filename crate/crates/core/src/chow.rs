//! Chow rings of unimodular fans.
//!
//! `A^k` is presented by the squarefree classes `x_σ`, `σ ∈ Σ_k`, modulo the relations
//! `x_τ · Σ_ζ ⟨m, e_ζ⟩ x_ζ` for `τ ∈ Σ_{k−1}` and `m` in the annihilator of `τ`. The basis
//! of `A^k` is the set of non-pivot cones of the reduced relation matrix; a class is stored
//! by its coordinates in that basis.

pub mod oracle;

use std::collections::HashMap;

use log::warn;
use num_traits::Zero;

use crate::complex::{build_complex, CompactFace};
use crate::error::{Error, Result};
use crate::fan::{barycentric_star_subdivision, is_balanced, star_fan, Cone, Fan, Quotient, StarFan, Subdivision};
use crate::homology::{betti_table, is_tropical_homology_manifold};
use crate::linalg::{q, wedge, Echelon, QMatrix, Q};
use crate::report::{tuple, Report, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowClass {
    pub degree: usize,
    pub coords: Vec<Q>,
}

impl ChowClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &ChowClass) -> ChowClass {
        assert_eq!(self.degree, other.degree, "adding classes of different degrees");
        ChowClass { degree: self.degree, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &ChowClass) -> ChowClass {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, s: &Q) -> ChowClass {
        ChowClass { degree: self.degree, coords: self.coords.iter().map(|a| a * s).collect() }
    }
}

/// Selects the covector used to rewrite `x_ζ · x^{a}` when `ζ` repeats in a monomial with
/// support `σ`. It must pair to 1 with `ζ` and to 0 with the other rays of `σ`.
pub type CovectorChoice<'a> = &'a dyn Fn(&Cone, usize, &Quotient) -> Vec<i64>;

pub fn dual_covector(sigma: &Cone, zeta: usize, qt: &Quotient) -> Vec<i64> {
    let dual = qt.dual.as_ref().expect("unimodular cone has a dual basis");
    dual[sigma.position(zeta).expect("ray of the cone")].clone()
}

#[derive(Clone, Debug)]
pub struct ChowRing {
    fan: Fan,
    spanning: Vec<Vec<Cone>>,
    span_index: Vec<HashMap<Cone, usize>>,
    relations: Vec<QMatrix>,
    echelons: Vec<Echelon>,
    basis: Vec<Vec<usize>>,
    quotients: HashMap<Cone, Quotient>,
    balanced: bool,
    degree_consistent: bool,
}

pub fn chow_ring(fan: &Fan) -> Result<ChowRing> {
    for m in fan.maximal_cones() {
        if !fan.is_cone_unimodular(m)? {
            return Err(Error::NotUnimodular(m.rays().to_vec()));
        }
    }
    let d = fan.dim();
    let mut quotients = HashMap::new();
    for c in fan.cones() {
        quotients.insert(c.clone(), fan.quotient(c)?);
    }
    let spanning: Vec<Vec<Cone>> = (0..=d).map(|k| fan.cones_of_dim(k).cloned().collect()).collect();
    let span_index: Vec<HashMap<Cone, usize>> =
        spanning.iter().map(|cs| cs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect()).collect();
    let mut relations = vec![QMatrix::zeros(0, 1)];
    for k in 1..=d {
        let mut rel = QMatrix::zeros(0, spanning[k].len());
        for tau in &spanning[k - 1] {
            let link = fan.link_rays(tau);
            for m in &quotients[tau].projection {
                let mut row = vec![q(0); spanning[k].len()];
                let mut nonzero = false;
                for &z in &link {
                    let c: i64 = m.iter().zip(fan.ray(z)).map(|(a, b)| a * b).sum();
                    if c != 0 {
                        row[span_index[k][&tau.with_ray(z)]] += q(c);
                        nonzero = true;
                    }
                }
                if nonzero {
                    rel.push_row(row);
                }
            }
        }
        relations.push(rel);
    }
    let echelons: Vec<Echelon> = relations.iter().map(QMatrix::rref).collect();
    let basis = echelons
        .iter()
        .zip(&spanning)
        .map(|(e, s)| (0..s.len()).filter(|c| !e.pivots.contains(c)).collect())
        .collect();
    let balanced = fan.is_pure() && is_balanced(fan)?.passed();
    let degree_consistent = fan.is_pure() && {
        let w: Vec<Q> = spanning[d].iter().map(|c| fan.weight(c).map(q)).collect::<Result<_>>()?;
        relations[d].mul_vec(&w).iter().all(Zero::is_zero)
    };
    Ok(ChowRing { fan: fan.clone(), spanning, span_index, relations, echelons, basis, quotients, balanced, degree_consistent })
}

impl ChowRing {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn top_degree(&self) -> usize {
        self.fan.dim()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.basis.get(k).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.top_degree()).map(|k| self.dim(k)).collect()
    }

    /// Cones whose classes form the chosen basis of `A^k`.
    pub fn basis_cones(&self, k: usize) -> Vec<Cone> {
        self.basis.get(k).map_or_else(Vec::new, |b| b.iter().map(|&i| self.spanning[k][i].clone()).collect())
    }

    /// Relation matrix of degree `k` over the cones of dimension `k`.
    pub fn relations(&self, k: usize) -> &QMatrix {
        &self.relations[k]
    }

    pub fn spanning_cones(&self, k: usize) -> &[Cone] {
        self.spanning.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn is_balanced(&self) -> bool {
        self.balanced
    }

    /// Whether every top-degree relation is killed by `x_η ↦ wgt(η)`.
    pub fn degree_consistent(&self) -> bool {
        self.degree_consistent
    }

    pub fn zero(&self, k: usize) -> ChowClass {
        ChowClass { degree: k, coords: vec![q(0); self.dim(k)] }
    }

    pub fn one(&self) -> ChowClass {
        self.class_of_cone(&Cone::zero()).expect("the zero cone is a cone")
    }

    /// Reduces a vector over the `k`-dimensional cones to basis coordinates.
    pub fn normal_form(&self, k: usize, v: &[Q]) -> ChowClass {
        if k > self.top_degree() {
            return self.zero(k);
        }
        let r = self.echelons[k].reduce(v);
        ChowClass { degree: k, coords: self.basis[k].iter().map(|&i| r[i].clone()).collect() }
    }

    pub fn class_of_cone(&self, c: &Cone) -> Result<ChowClass> {
        let k = c.dim();
        let i = self
            .span_index
            .get(k)
            .and_then(|m| m.get(c))
            .ok_or_else(|| Error::NotACone(c.rays().to_vec()))?;
        let mut v = vec![q(0); self.spanning[k].len()];
        v[*i] = q(1);
        Ok(self.normal_form(k, &v))
    }

    /// The class of `Σ_ζ c_ζ x_ζ`.
    pub fn linear_class(&self, coeffs: &[Q]) -> Result<ChowClass> {
        if coeffs.len() != self.fan.num_rays() {
            return Err(Error::FunctionLength { found: coeffs.len(), rays: self.fan.num_rays() });
        }
        if self.top_degree() == 0 {
            return Ok(self.zero(1));
        }
        let mut v = vec![q(0); self.spanning[1].len()];
        for (r, c) in coeffs.iter().enumerate() {
            v[self.span_index[1][&Cone::new(vec![r])]] += c;
        }
        Ok(self.normal_form(1, &v))
    }

    /// The class of the monomial `Π x_ζ` over a multiset of rays.
    pub fn monomial(&self, rays: &[usize]) -> ChowClass {
        self.monomial_with(rays, &dual_covector)
    }

    /// As [`ChowRing::monomial`], with a custom covector at each rewriting step.
    pub fn monomial_with(&self, rays: &[usize], choice: CovectorChoice) -> ChowClass {
        let k = rays.len();
        if k > self.top_degree() {
            return self.zero(k);
        }
        let mut out = vec![q(0); self.spanning[k].len()];
        let mut mono = rays.to_vec();
        mono.sort_unstable();
        self.expand(&mut mono, &q(1), &mut out, choice);
        self.normal_form(k, &out)
    }

    fn expand(&self, mono: &mut Vec<usize>, coeff: &Q, out: &mut [Q], choice: CovectorChoice) {
        let support = Cone::new(mono.clone());
        if !self.fan.contains(&support) {
            return;
        }
        if support.dim() == mono.len() {
            out[self.span_index[support.dim()][&support]] += coeff;
            return;
        }
        let pos = mono.windows(2).position(|w| w[0] == w[1]).expect("a repeated ray");
        let zeta = mono[pos];
        let qt = &self.quotients[&support];
        let m = choice(&support, zeta, qt);
        debug_assert!(support.rays().iter().all(|&r| {
            let p: i64 = m.iter().zip(self.fan.ray(r)).map(|(a, b)| a * b).sum();
            p == i64::from(r == zeta)
        }));
        mono.remove(pos);
        for xi in self.fan.link_rays(&support) {
            let c: i64 = m.iter().zip(self.fan.ray(xi)).map(|(a, b)| a * b).sum();
            if c != 0 {
                let mut next = mono.clone();
                let at = next.partition_point(|&r| r < xi);
                next.insert(at, xi);
                self.expand(&mut next, &(-coeff * q(c)), out, choice);
            }
        }
        let at = mono.partition_point(|&r| r < zeta);
        mono.insert(at, zeta);
    }

    pub fn multiply(&self, a: &ChowClass, b: &ChowClass) -> ChowClass {
        let k = a.degree + b.degree;
        if k > self.top_degree() {
            warn!("product of degree {k} exceeds the dimension {}; returning zero", self.top_degree());
            return self.zero(k);
        }
        let mut out = vec![q(0); self.spanning[k].len()];
        let ca = self.basis_cones(a.degree);
        let cb = self.basis_cones(b.degree);
        for (i, x) in a.coords.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.coords.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let mut mono: Vec<usize> = ca[i].rays().iter().chain(cb[j].rays()).copied().collect();
                mono.sort_unstable();
                self.expand(&mut mono, &(x * y), &mut out, &dual_covector);
            }
        }
        self.normal_form(k, &out)
    }

    pub fn power(&self, a: &ChowClass, e: usize) -> ChowClass {
        (0..e).fold(self.one(), |acc, _| self.multiply(&acc, a))
    }

    /// `deg: A^d → Q`, `x_η ↦ wgt(η)`. Needs a balanced fan.
    pub fn degree(&self, c: &ChowClass) -> Result<Q> {
        if !self.balanced {
            return Err(Error::NotBalanced(Vec::new()));
        }
        self.degree_unchecked(c)
    }

    pub(crate) fn degree_unchecked(&self, c: &ChowClass) -> Result<Q> {
        let d = self.top_degree();
        if c.degree != d {
            return Err(Error::DegreeOutOfRange { p: c.degree, max: d });
        }
        let mut total = q(0);
        for (x, cone) in c.coords.iter().zip(self.basis_cones(d)) {
            total += x * q(self.fan.weight(&cone)?);
        }
        Ok(total)
    }

    /// Matrix of `(a, b) ↦ deg(ab)` on `A^k × A^{d−k}` in the chosen bases.
    pub fn pairing_matrix(&self, k: usize) -> Result<QMatrix> {
        let d = self.top_degree();
        if k > d {
            return Err(Error::DegreeOutOfRange { p: k, max: d });
        }
        let mut m = QMatrix::zeros(self.dim(k), self.dim(d - k));
        for i in 0..self.dim(k) {
            let a = self.unit(k, i);
            for j in 0..self.dim(d - k) {
                m[(i, j)] = self.degree(&self.multiply(&a, &self.unit(d - k, j)))?;
            }
        }
        Ok(m)
    }

    /// The `i`-th basis class of `A^k`.
    pub fn unit(&self, k: usize, i: usize) -> ChowClass {
        let mut c = self.zero(k);
        c.coords[i] = q(1);
        c
    }
}

/// The Chow ring of the star of a cone, together with its parent bookkeeping.
#[derive(Clone, Debug)]
pub struct StarRing {
    pub star: StarFan,
    pub ring: ChowRing,
}

pub fn star_ring(fan: &Fan, sigma: &Cone) -> Result<StarRing> {
    let star = star_fan(fan, sigma)?;
    let ring = chow_ring(&star.fan)?;
    Ok(StarRing { star, ring })
}

/// `Gys_{σ⊇δ}: A^•(Σ^σ) → A^{•+dim σ−dim δ}(Σ^δ)`, sending `x_{η'}` to `x_{η'} Π_{ζ∈σ∖δ} x_ζ`.
pub fn gysin(target: &StarRing, source: &StarRing, c: &ChowClass) -> Result<ChowClass> {
    let (delta, sigma) = (&target.star.base, &source.star.base);
    if !delta.is_face_of(sigma) {
        return Err(Error::NotAFace(delta.to_string(), sigma.to_string()));
    }
    let k = c.degree + sigma.dim() - delta.dim();
    if k > target.ring.top_degree() {
        return Ok(target.ring.zero(k));
    }
    let mut v = vec![q(0); target.ring.spanning_cones(k).len()];
    for (x, cone) in c.coords.iter().zip(source.ring.basis_cones(c.degree)) {
        if x.is_zero() {
            continue;
        }
        let parent = source.star.parent_cone(&cone);
        let image = target.star.cone_of(&parent).expect("a cone of the star of σ lies in the star of δ");
        v[target.ring.span_index[k][&image]] += x;
    }
    Ok(target.ring.normal_form(k, &v))
}

/// `i^*: A^•(Σ) → A^•(Σ^σ)` for the ring of `Σ` and a star ring of one of its cones.
pub fn restriction(ring: &ChowRing, target: &StarRing, c: &ChowClass) -> ChowClass {
    let images: Vec<ChowClass> = (0..ring.fan.num_rays()).map(|z| restrict_ray(ring, target, z)).collect();
    let mut out = target.ring.zero(c.degree);
    for (x, cone) in c.coords.iter().zip(ring.basis_cones(c.degree)) {
        if x.is_zero() {
            continue;
        }
        let prod = cone.rays().iter().fold(target.ring.one(), |acc, &z| target.ring.multiply(&acc, &images[z]));
        out = out.add(&prod.scale(x));
    }
    out
}

fn restrict_ray(ring: &ChowRing, target: &StarRing, z: usize) -> ChowClass {
    let sigma = &target.star.base;
    let tr = &target.ring;
    let ray_class = |xi: usize| -> Option<ChowClass> {
        let local = target.star.parent_ray.iter().position(|&p| p == xi)?;
        tr.class_of_cone(&Cone::new(vec![local])).ok()
    };
    if sigma.contains_ray(z) {
        let m = dual_covector(sigma, z, &ring.quotients[sigma]);
        let mut out = tr.zero(1);
        for xi in ring.fan.link_rays(sigma) {
            let c: i64 = m.iter().zip(ring.fan.ray(xi)).map(|(a, b)| a * b).sum();
            if let (true, Some(cls)) = (c != 0, ray_class(xi)) {
                out = out.sub(&cls.scale(&q(c)));
            }
        }
        out
    } else {
        ray_class(z).unwrap_or_else(|| tr.zero(1))
    }
}

pub fn hodge_iso_check(fan: &Fan) -> Result<Report> {
    let ring = chow_ring(fan)?;
    let betti = betti_table(fan)?;
    let chow = ring.dims();
    let diag = betti.diagonal();
    let mut r = Report::from_bool("Hodge isomorphism", chow == diag)
        .fact("chow dimensions", tuple(&chow))
        .fact("diagonal cohomology", tuple(&diag));
    for (k, (a, b)) in chow.iter().zip(&diag).enumerate() {
        if a != b {
            r = r.witness(format!("dim A^{k} = {a} but dim H^{{{k},{k}}} = {b}"));
        }
    }
    Ok(r)
}

/// Data of the decomposition of the Chow ring of a barycentric star subdivision.
#[derive(Clone, Debug)]
pub struct KeelDecomposition {
    pub sigma: Cone,
    pub subdivision: Subdivision,
    pub base_dims: Vec<usize>,
    pub star_dims: Vec<usize>,
    pub subdivided_dims: Vec<usize>,
    /// `summand_dims[k][i]`: `dim A^k(Σ)` for `i = 0`, `dim A^{k−i}(Σ^σ)` for `i ≥ 1`.
    pub summand_dims: Vec<Vec<usize>>,
    /// Relations of `A^•(Σ)[T]/(J·T + P(T))` whose image under χ is not zero.
    pub failures: Vec<String>,
    /// Rank of the image of the decomposition under χ in each degree.
    pub image_ranks: Vec<usize>,
}

impl KeelDecomposition {
    pub fn dims_match(&self) -> bool {
        self.summand_dims.iter().zip(&self.subdivided_dims).all(|(s, &t)| s.iter().sum::<usize>() == t)
    }

    pub fn chi_is_isomorphism(&self) -> bool {
        self.failures.is_empty() && self.image_ranks == self.subdivided_dims
    }
}

pub fn keel_decomposition(fan: &Fan, sigma: &Cone) -> Result<KeelDecomposition> {
    if !fan.contains(sigma) {
        return Err(Error::NotACone(sigma.rays().to_vec()));
    }
    if sigma.dim() < 2 {
        return Err(Error::ConeTooSmall(sigma.rays().to_vec()));
    }
    let sub = barycentric_star_subdivision(fan, sigma)?;
    let base = chow_ring(fan)?;
    let star = star_ring(fan, sigma)?;
    let new = chow_ring(&sub.fan)?;
    let d = fan.dim();
    let s = sigma.dim();
    let summand_dims: Vec<Vec<usize>> = (0..=d)
        .map(|k| {
            std::iter::once(base.dim(k)).chain((1..s).map(|i| if i <= k { star.ring.dim(k - i) } else { 0 })).collect()
        })
        .collect();

    let rho = sub.new_ray;
    let x_rho = new.class_of_cone(&Cone::new(vec![rho]))?;
    let t_image = x_rho.scale(&q(-1));
    let chi_ray: Vec<ChowClass> = (0..fan.num_rays())
        .map(|z| {
            let x = new.class_of_cone(&Cone::new(vec![z])).expect("old rays survive the subdivision");
            if sigma.contains_ray(z) {
                x.add(&x_rho)
            } else {
                x
            }
        })
        .collect();
    let chi_mono = |rays: &[usize]| rays.iter().fold(new.one(), |acc, &z| new.multiply(&acc, &chi_ray[z]));
    let chi_class = |c: &ChowClass| {
        let mut out = new.zero(c.degree);
        for (x, cone) in c.coords.iter().zip(base.basis_cones(c.degree)) {
            if !x.is_zero() {
                out = out.add(&chi_mono(cone.rays()).scale(x));
            }
        }
        out
    };

    let mut failures = Vec::new();
    for coord in 0..fan.rank() {
        let mut l = new.zero(1);
        for z in 0..fan.num_rays() {
            l = l.add(&chi_ray[z].scale(&q(fan.ray(z)[coord])));
        }
        if !l.is_zero() {
            failures.push(format!("linear form of coordinate {coord}"));
        }
    }
    for nf in minimal_non_faces(fan) {
        if !chi_mono(&nf).is_zero() {
            failures.push(format!("non-face {}", Cone::new(nf)));
        }
    }
    let p_of_t = sigma.rays().iter().fold(new.one(), |acc, &z| new.multiply(&acc, &chi_ray[z].add(&t_image)));
    if !p_of_t.is_zero() {
        failures.push("P(T)".into());
    }
    for k in 0..d {
        let res = restriction_matrix(&base, &star, k);
        for j in res.kernel() {
            let cls = ChowClass { degree: k, coords: j };
            if !new.multiply(&chi_class(&cls), &t_image).is_zero() {
                failures.push(format!("J·T in degree {}", k + 1));
                break;
            }
        }
    }

    let mut image_ranks = Vec::new();
    for k in 0..=d {
        let mut rows = QMatrix::zeros(0, new.dim(k));
        for i in 0..base.dim(k) {
            rows.push_row(chi_class(&base.unit(k, i)).coords);
        }
        for i in 1..s.min(k + 1) {
            let t_pow = new.power(&t_image, i);
            for cone in star.ring.basis_cones(k - i) {
                let lift: Vec<usize> = cone.rays().iter().map(|&r| star.star.parent_ray[r]).collect();
                rows.push_row(new.multiply(&chi_mono(&lift), &t_pow).coords);
            }
        }
        image_ranks.push(rows.rank());
    }

    Ok(KeelDecomposition {
        sigma: sigma.clone(),
        subdivision: sub,
        base_dims: base.dims(),
        star_dims: star.ring.dims(),
        subdivided_dims: new.dims(),
        summand_dims,
        failures,
        image_ranks,
    })
}

fn restriction_matrix(base: &ChowRing, star: &StarRing, k: usize) -> QMatrix {
    let mut m = QMatrix::zeros(star.ring.dim(k), base.dim(k));
    for i in 0..base.dim(k) {
        let img = restriction(base, star, &base.unit(k, i));
        for (r, x) in img.coords.into_iter().enumerate() {
            m[(r, i)] = x;
        }
    }
    m
}

/// Sets of rays that are not cones while all their proper subsets are.
pub fn minimal_non_faces(fan: &Fan) -> Vec<Vec<usize>> {
    let mut out = std::collections::BTreeSet::new();
    for tau in fan.cones() {
        for z in (0..fan.num_rays()).filter(|&z| !tau.contains_ray(z)) {
            let s = tau.with_ray(z);
            if !fan.contains(&s) && s.rays().iter().all(|&r| fan.contains(&s.without_ray(r))) {
                out.insert(s.rays().to_vec());
            }
        }
    }
    out.into_iter().collect()
}

pub fn keel_check(fan: &Fan, sigma: &Cone) -> Result<Report> {
    let kd = keel_decomposition(fan, sigma)?;
    let ok = kd.dims_match() && kd.chi_is_isomorphism();
    let mut r = Report::from_bool("Keel decomposition", ok)
        .fact("cone", sigma)
        .fact("new ray", tuple(kd.subdivision.fan.ray(kd.subdivision.new_ray)))
        .fact("base dimensions", tuple(&kd.base_dims))
        .fact("star dimensions", tuple(&kd.star_dims))
        .fact("subdivided dimensions", tuple(&kd.subdivided_dims))
        .fact("image ranks", tuple(&kd.image_ranks));
    for (k, s) in kd.summand_dims.iter().enumerate() {
        r = r.fact(format!("degree {k} summands"), tuple(s));
    }
    if !kd.dims_match() {
        r = r.witness("dimension identity fails");
    }
    for f in &kd.failures {
        r = r.witness(format!("χ does not kill {f}"));
    }
    if kd.image_ranks != kd.subdivided_dims {
        r = r.witness("χ is not surjective onto the subdivided ring");
    }
    Ok(r)
}

/// Verifies exactness of
/// `0 → H^k(X) → ⊕_{Σ_k} A^0(Σ^σ) → ⊕_{Σ_{k−1}} A^1(Σ^σ) → … → A^k(Σ) → 0`.
pub fn deligne_resolution_check(fan: &Fan, k: usize) -> Result<Report> {
    let d = fan.dim();
    if k > d {
        return Err(Error::DegreeOutOfRange { p: k, max: d });
    }
    let hyp = is_tropical_homology_manifold(fan)?;
    if !hyp.passed() {
        return Ok(Report::new("Deligne resolution", Verdict::Fail)
            .fact("k", k)
            .witness("the fan is not a tropical homology manifold")
            .child(hyp));
    }
    let cx = build_complex(fan)?;
    let origin = cx.multi_tangent(&CompactFace::new(Cone::zero(), Cone::zero()), k)?;

    let mut stars: HashMap<Cone, StarRing> = HashMap::new();
    for c in fan.cones().iter().filter(|c| c.dim() <= k) {
        stars.insert(c.clone(), star_ring(fan, c)?);
    }
    // term j (0 ≤ j ≤ k): cones of dim k−j, each contributing A^j of its star
    let layout: Vec<Vec<(Cone, usize)>> = (0..=k)
        .map(|j| {
            let mut off = 0;
            fan.cones_of_dim(k - j)
                .map(|c| {
                    let here = off;
                    off += stars[c].ring.dim(j);
                    (c.clone(), here)
                })
                .collect()
        })
        .collect();
    let term_dim = |j: usize| layout[j].iter().map(|(c, _)| stars[c].ring.dim(j)).sum::<usize>();
    let mut dims = vec![origin.dim()];
    dims.extend((0..=k).map(term_dim));

    let mut maps = Vec::new();
    let mut first = QMatrix::zeros(dims[1], dims[0]);
    for (row, (c, _)) in layout[0].iter().enumerate() {
        let vecs: Vec<Vec<Q>> = c.rays().iter().map(|&r| fan.ray(r).iter().map(|&x| q(x)).collect()).collect();
        let omega = wedge(fan.rank(), &vecs);
        let coords = origin.basis.coordinates(&omega).expect("ω_σ lies in F_k(0)");
        for (i, x) in coords.into_iter().enumerate() {
            first[(row, i)] = x;
        }
    }
    maps.push(first);
    for j in 0..k {
        let mut m = QMatrix::zeros(dims[j + 2], dims[j + 1]);
        for (sigma, off_s) in &layout[j] {
            let src = &stars[sigma];
            for (tau, off_t) in &layout[j + 1] {
                if !tau.is_face_of(sigma) {
                    continue;
                }
                let zeta = sigma.minus(tau)[0];
                let sign = if sigma.position(zeta).unwrap() % 2 == 0 { q(1) } else { q(-1) };
                let tgt = &stars[tau];
                for i in 0..src.ring.dim(j) {
                    let img = gysin(tgt, src, &src.ring.unit(j, i))?;
                    for (r, x) in img.coords.into_iter().enumerate() {
                        m[(off_t + r, off_s + i)] = &sign * x;
                    }
                }
            }
        }
        maps.push(m);
    }

    let ranks: Vec<usize> = maps.iter().map(QMatrix::rank).collect();
    let mut square_zero = true;
    for w in maps.windows(2) {
        if !w[1].mul(&w[0]).is_zero() {
            square_zero = false;
        }
    }
    // exactness at each term: dim = rank(in) + rank(out)
    let mut inexact = Vec::new();
    for (t, &dim) in dims.iter().enumerate() {
        let rin = if t == 0 { 0 } else { ranks[t - 1] };
        let rout = ranks.get(t).copied().unwrap_or(0);
        if dim != rin + rout {
            inexact.push(t);
        }
    }
    let mut r = Report::from_bool("Deligne resolution", square_zero && inexact.is_empty())
        .fact("k", k)
        .fact("term dimensions", tuple(&dims))
        .fact("map ranks", tuple(&ranks));
    if !square_zero {
        r = r.witness("consecutive maps do not compose to zero");
    }
    for t in inexact {
        r = r.witness(format!("not exact at term {t}"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::oracle::oracle_ring;
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dims_of_fixtures() {
        assert_eq!(chow_ring(&fixtures::p2()).unwrap().dims(), vec![1, 1, 1]);
        assert_eq!(chow_ring(&fixtures::u34_coarse()).unwrap().dims(), vec![1, 1, 1]);
        assert_eq!(chow_ring(&fixtures::u34_fine()).unwrap().dims(), vec![1, 7, 1]);
        assert_eq!(chow_ring(&fixtures::nm()).unwrap().dims(), vec![1, 6, 1]);
        assert_eq!(chow_ring(&fixtures::cross()).unwrap().dims(), vec![1, 2]);
        assert_eq!(chow_ring(&Fan::zero_fan(2)).unwrap().dims(), vec![1]);
    }

    /// Matrix whose columns are oracle normal forms of the structured basis cones.
    fn transfer(ring: &ChowRing, o: &oracle::OracleRing, k: usize) -> QMatrix {
        let cols: Vec<Vec<Q>> = ring.basis_cones(k).iter().map(|c| o.normal_form_of_cone(c)).collect();
        QMatrix::from_rows(cols.len(), (0..o.dim(k)).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect())
    }

    #[test]
    fn agrees_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (name, fan) in fixtures::all() {
            if fan.num_rays() > 12 {
                continue;
            }
            let ring = chow_ring(&fan).unwrap();
            let o = oracle_ring(&fan).unwrap();
            assert_eq!(ring.dims(), o.dims(), "{name}");
            let d = fan.dim();
            let transfers: Vec<QMatrix> = (0..=d).map(|k| transfer(&ring, &o, k)).collect();
            for (k, t) in transfers.iter().enumerate() {
                assert_eq!(t.rank(), ring.dim(k), "{name}: basis is independent in degree {k}");
            }
            for _ in 0..10 {
                let k1 = rng.gen_range(0..=d);
                let k2 = rng.gen_range(0..=d - k1);
                let r1: Vec<usize> = (0..k1).map(|_| rng.gen_range(0..fan.num_rays())).collect();
                let r2: Vec<usize> = (0..k2).map(|_| rng.gen_range(0..fan.num_rays())).collect();
                let prod = ring.multiply(&ring.monomial(&r1), &ring.monomial(&r2));
                let all: Vec<usize> = r1.iter().chain(&r2).copied().collect();
                assert_eq!(transfers[k1 + k2].mul_vec(&prod.coords), o.normal_form_of_rays(&all), "{name}: {r1:?}·{r2:?}");
            }
        }
    }

    #[test]
    fn p2_products() {
        let ring = chow_ring(&fixtures::p2()).unwrap();
        let x0 = ring.monomial(&[0]);
        let x1 = ring.monomial(&[1]);
        assert_eq!(ring.multiply(&x0, &x1), ring.class_of_cone(&Cone::new(vec![0, 1])).unwrap());
        let sq = ring.multiply(&x0, &x0);
        assert_eq!(ring.degree(&sq).unwrap(), q(1));
        let line = fixtures::line2();
        let lr = chow_ring(&line).unwrap();
        // x_{e1}·x_{e2} where e1 + e2 is not a cone
        assert!(lr.multiply(&lr.monomial(&[0]), &lr.monomial(&[1])).is_zero());
        assert!(ring.multiply(&sq, &x0).is_zero());
        assert_eq!(ring.multiply(&sq, &x0).degree, 3);
    }

    #[test]
    fn degrees() {
        let ring = chow_ring(&fixtures::p2()).unwrap();
        assert_eq!(ring.degree(&ring.class_of_cone(&Cone::new(vec![0, 1])).unwrap()).unwrap(), q(1));
        let cross = chow_ring(&fixtures::cross()).unwrap();
        for z in 0..4 {
            assert_eq!(cross.degree(&cross.monomial(&[z])).unwrap(), q(1));
        }
        assert!(cross.degree_consistent());
        let doubled = chow_ring(&fixtures::p2().with_weights(vec![2, 2, 2]).unwrap()).unwrap();
        assert_eq!(doubled.degree(&doubled.monomial(&[0, 1])).unwrap(), q(2));
        let quadrant = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0], vec![1]], None).unwrap();
        let qr = chow_ring(&quadrant).unwrap();
        assert!(matches!(qr.degree(&qr.monomial(&[0])), Err(Error::NotBalanced(_))));
    }

    #[test]
    fn gysin_from_facets_gives_weights() {
        for name in ["p2", "u34-fine", "nm", "cross"] {
            let fan = fixtures::by_name(name).unwrap();
            let whole = star_ring(&fan, &Cone::zero()).unwrap();
            for eta in fan.maximal_cones() {
                let src = star_ring(&fan, eta).unwrap();
                let img = gysin(&whole, &src, &src.ring.one()).unwrap();
                assert_eq!(whole.ring.degree(&img).unwrap(), q(fan.weight(eta).unwrap()), "{name} {eta}");
                assert!(gysin(&whole, &src, &src.ring.zero(0)).unwrap().is_zero());
            }
            let some = &fan.maximal_cones()[0];
            let src = star_ring(&fan, some).unwrap();
            let other = fan.cones_of_dim(1).find(|r| !r.is_face_of(some)).cloned();
            if let Some(r) = other {
                assert!(gysin(&star_ring(&fan, &r).unwrap(), &src, &src.ring.one()).is_err());
            }
        }
    }

    #[test]
    fn gysin_composes_on_p2() {
        let fan = fixtures::p2();
        let rings: HashMap<Cone, StarRing> = fan.cones().iter().map(|c| (c.clone(), star_ring(&fan, c).unwrap())).collect();
        for s in fan.cones() {
            for mid in fan.cones().iter().filter(|m| m.is_face_of(s)) {
                for low in fan.cones().iter().filter(|l| l.is_face_of(mid)) {
                    let src = &rings[s];
                    for k in 0..=src.ring.top_degree() {
                        for i in 0..src.ring.dim(k) {
                            let c = src.ring.unit(k, i);
                            let direct = gysin(&rings[low], src, &c).unwrap();
                            let via = gysin(&rings[low], &rings[mid], &gysin(&rings[mid], src, &c).unwrap()).unwrap();
                            assert_eq!(direct, via);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hodge_iso() {
        for name in ["nm", "line2", "cross", "p2", "u34-fine"] {
            let r = hodge_iso_check(&fixtures::by_name(name).unwrap()).unwrap();
            assert!(r.passed(), "{name}: {r}");
        }
        assert_eq!(hodge_iso_check(&fixtures::nm()).unwrap().get("chow dimensions"), Some("(1, 6, 1)"));
        assert_eq!(hodge_iso_check(&fixtures::cross()).unwrap().get("diagonal cohomology"), Some("(1, 2)"));
    }

    #[test]
    fn keel_on_p2() {
        let fan = fixtures::p2();
        let kd = keel_decomposition(&fan, &Cone::new(vec![0, 1])).unwrap();
        assert_eq!(kd.subdivided_dims, vec![1, 2, 1]);
        assert_eq!(kd.summand_dims[1], vec![1, 1]);
        assert!(kd.dims_match());
        assert!(kd.chi_is_isomorphism(), "{:?}", kd.failures);
        assert!(matches!(keel_check(&fan, &Cone::new(vec![0])), Err(Error::ConeTooSmall(_))));
    }

    #[test]
    fn keel_chain_from_coarse_to_fine() {
        // six subdivisions of the coarse U_{3,4} fan at its six 2-cones reach the fine one
        let mut fan = fixtures::u34_coarse();
        let mut dims = vec![chow_ring(&fan).unwrap().dims()];
        for _ in 0..6 {
            let sigma = fan
                .cones_of_dim(2)
                .find(|c| c.rays().iter().all(|&r| fan.ray(r).iter().filter(|&&x| x != 0).count() <= 1 || fan.ray(r) == [-1, -1, -1]))
                .cloned()
                .unwrap();
            let r = keel_check(&fan, &sigma).unwrap();
            assert!(r.passed(), "{r}");
            fan = barycentric_star_subdivision(&fan, &sigma).unwrap().fan;
            dims.push(chow_ring(&fan).unwrap().dims());
        }
        let d1: Vec<usize> = dims.iter().map(|d| d[1]).collect();
        assert_eq!(d1, vec![1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(fan.f_vector(), fixtures::u34_fine().f_vector());
    }

    #[test]
    fn keel_on_nm_facet_keeps_hodge_iso() {
        let fan = fixtures::nm();
        let eta = fan.maximal_cones()[0].clone();
        assert!(keel_check(&fan, &eta).unwrap().passed());
        let sub = barycentric_star_subdivision(&fan, &eta).unwrap().fan;
        assert!(hodge_iso_check(&sub).unwrap().passed());
    }

    #[test]
    fn deligne() {
        let line = deligne_resolution_check(&fixtures::line2(), 1).unwrap();
        assert!(line.passed(), "{line}");
        assert_eq!(line.get("term dimensions"), Some("(2, 3, 1)"));
        let u34 = deligne_resolution_check(&fixtures::u34_coarse(), 1).unwrap();
        assert!(u34.passed(), "{u34}");
        assert_eq!(u34.get("term dimensions"), Some("(3, 4, 1)"));
        for (name, fan) in fixtures::all() {
            let r0 = deligne_resolution_check(&fan, 0).unwrap();
            if name != "cross" {
                assert!(r0.passed(), "{name}");
                assert_eq!(r0.get("term dimensions"), Some("(1, 1)"));
            }
        }
        for k in 0..=2 {
            assert!(deligne_resolution_check(&fixtures::nm(), k).unwrap().passed());
            assert!(deligne_resolution_check(&fixtures::u34_fine(), k).unwrap().passed());
        }
        let cross = deligne_resolution_check(&fixtures::cross(), 1).unwrap();
        assert!(!cross.passed());
        assert_eq!(cross.witnesses, vec!["the fan is not a tropical homology manifold".to_string()]);
    }

    #[test]
    fn pairing_is_perfect_on_manifolds() {
        for name in ["p2", "u34-coarse", "u34-fine", "nm", "line2", "segment"] {
            let ring = chow_ring(&fixtures::by_name(name).unwrap()).unwrap();
            for k in 0..=ring.top_degree() {
                let m = ring.pairing_matrix(k).unwrap();
                assert_eq!(m.nrows(), m.ncols());
                assert_ne!(m.determinant(), q(0), "{name} k={k}");
            }
        }
    }

    fn basis_class(ring: &ChowRing, k: usize, i: usize) -> ChowClass {
        ring.unit(k, i % ring.dim(k).max(1))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn ring_axioms(i in 0usize..7, j in 0usize..7, l in 0usize..7, which in 0usize..3) {
            let fan = [fixtures::u34_fine(), fixtures::nm(), fixtures::p2()][which].clone();
            let ring = chow_ring(&fan).unwrap();
            let a = basis_class(&ring, 1, i);
            let b = basis_class(&ring, 1, j);
            let c = basis_class(&ring, 0, l);
            prop_assert_eq!(ring.multiply(&a, &b), ring.multiply(&b, &a));
            prop_assert_eq!(ring.multiply(&ring.multiply(&a, &b), &c), ring.multiply(&a, &ring.multiply(&b, &c)));
            prop_assert_eq!(ring.multiply(&ring.multiply(&c, &a), &b), ring.multiply(&c, &ring.multiply(&a, &b)));
        }

        #[test]
        fn covector_choice_does_not_matter(z in 0usize..10, w in 0usize..10, shift in prop::collection::vec(-3i64..=3, 4)) {
            let fan = fixtures::nm();
            let ring = chow_ring(&fan).unwrap();
            let perturbed = |sigma: &Cone, zeta: usize, qt: &Quotient| {
                let mut m = dual_covector(sigma, zeta, qt);
                for (row, c) in qt.projection.iter().zip(&shift) {
                    for (a, b) in m.iter_mut().zip(row) {
                        *a += c * b;
                    }
                }
                m
            };
            for mono in [vec![z, z], vec![z, w]] {
                prop_assert_eq!(ring.monomial(&mono), ring.monomial_with(&mono, &perturbed));
            }
        }
    }
}
