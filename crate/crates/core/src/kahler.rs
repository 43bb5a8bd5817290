//! Ample classes from strictly convex conewise linear functions, and the Kähler package:
//! Poincaré duality of the degree pairing, hard Lefschetz and the Hodge–Riemann relations.

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chow::{chow_ring, ChowClass, ChowRing};
use crate::error::{Error, Result};
use crate::fan::{star_fan, Cone, Fan};
use crate::fm::{feasible, Constraint, Relation};
use crate::homology::is_tropical_homology_manifold;
use crate::linalg::{is_positive, leading_minors, q, QMatrix, Q};
use crate::report::{tuple, Report, Verdict};

/// A function on the support, linear on each cone, given by its values on the rays.
#[derive(Clone, Debug)]
pub struct ConewiseLinearFunction {
    pub fan: Fan,
    pub values: Vec<Q>,
}

impl ConewiseLinearFunction {
    pub fn new(fan: &Fan, values: Vec<Q>) -> Result<Self> {
        if values.len() != fan.num_rays() {
            return Err(Error::FunctionLength { found: values.len(), rays: fan.num_rays() });
        }
        Ok(ConewiseLinearFunction { fan: fan.clone(), values })
    }

    pub fn from_ints(fan: &Fan, values: &[i64]) -> Result<Self> {
        Self::new(fan, values.iter().map(|&v| q(v)).collect())
    }

    pub fn scale(&self, s: &Q) -> Self {
        ConewiseLinearFunction { fan: self.fan.clone(), values: self.values.iter().map(|v| v * s).collect() }
    }

    /// `f + m` for a global linear function `m`.
    pub fn add_linear(&self, m: &[i64]) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v + q(m.iter().zip(self.fan.ray(i)).map(|(a, b)| a * b).sum()))
            .collect();
        ConewiseLinearFunction { fan: self.fan.clone(), values }
    }

    /// `L = Σ f(e_ζ) x_ζ`.
    pub fn lefschetz_class(&self, ring: &ChowRing) -> Result<ChowClass> {
        ring.linear_class(&self.values)
    }

    /// A rational covector agreeing with `f` on the rays of `sigma`.
    pub fn local_linear(&self, sigma: &Cone) -> Result<Vec<Q>> {
        let qt = self.fan.quotient(sigma)?;
        let dual = qt.dual.ok_or_else(|| Error::NotUnimodular(sigma.rays().to_vec()))?;
        let mut m = vec![q(0); self.fan.rank()];
        for (row, &z) in dual.iter().zip(sigma.rays()) {
            for (a, &b) in m.iter_mut().zip(row) {
                *a += &self.values[z] * q(b);
            }
        }
        Ok(m)
    }

    /// `f − m_σ` seen on the star of `sigma`.
    pub fn restrict_to_star(&self, sigma: &Cone) -> Result<ConewiseLinearFunction> {
        let star = star_fan(&self.fan, sigma)?;
        let m = self.local_linear(sigma)?;
        let values = star
            .parent_ray
            .iter()
            .map(|&r| {
                let mv: Q = m.iter().zip(self.fan.ray(r)).map(|(a, &b)| a * q(b)).sum();
                &self.values[r] - mv
            })
            .collect();
        Ok(ConewiseLinearFunction { fan: star.fan, values })
    }
}

/// For every cone σ, looks for `m` with `f − m` zero on σ and positive on the link rays.
pub fn is_strictly_convex(f: &ConewiseLinearFunction) -> Report {
    let fan = &f.fan;
    let n = fan.rank();
    let ray_row = |r: usize| fan.ray(r).iter().map(|&x| q(x)).collect::<Vec<Q>>();
    let failing: Vec<Cone> = fan
        .cones()
        .par_iter()
        .filter(|sigma| {
            let mut cons = Vec::new();
            for &z in sigma.rays() {
                cons.push(Constraint::new(ray_row(z), Relation::Eq, f.values[z].clone()));
            }
            for xi in fan.link_rays(sigma) {
                cons.push(Constraint::new(ray_row(xi), Relation::Less, f.values[xi].clone()));
            }
            !feasible(n, &cons)
        })
        .cloned()
        .collect();
    let mut r = Report::from_bool("strictly convex", failing.is_empty())
        .fact("values", tuple(&f.values))
        .fact("cones checked", fan.cones().len());
    for c in failing {
        r = r.witness(format!("no linear m at cone {c} with f − m zero on it and positive on its link"));
    }
    r.note("positivity is required on the rays of the cones containing σ, a neighborhood within the support")
}

fn multiplication_matrix(ring: &ChowRing, by: &ChowClass, k: usize) -> QMatrix {
    let target = k + by.degree;
    let mut m = QMatrix::zeros(ring.dim(target), ring.dim(k));
    for i in 0..ring.dim(k) {
        let img = ring.multiply(&ring.unit(k, i), by);
        for (r, x) in img.coords.into_iter().enumerate() {
            m[(r, i)] = x;
        }
    }
    m
}

fn ample_note(f: &ConewiseLinearFunction, r: Report) -> Report {
    if is_strictly_convex(f).passed() {
        r
    } else {
        warn!("the function is not strictly convex; the class is not verified ample");
        r.note("the function is not strictly convex, L is not verified ample")
    }
}

/// `L^{d−2k}: A^k → A^{d−k}` is an isomorphism.
pub fn hard_lefschetz_check(ring: &ChowRing, f: &ConewiseLinearFunction, k: usize) -> Result<Report> {
    let l = f.lefschetz_class(ring)?;
    Ok(ample_note(f, lefschetz(ring, &l, k)?))
}

/// `(−1)^k deg(L^{d−2k} a b)` is positive definite on `ker(L^{d−2k+1}) ⊆ A^k`.
pub fn hodge_riemann_check(ring: &ChowRing, f: &ConewiseLinearFunction, k: usize) -> Result<Report> {
    let l = f.lefschetz_class(ring)?;
    Ok(ample_note(f, hodge_riemann(ring, &l, k)?))
}

fn check_k(ring: &ChowRing, k: usize) -> Result<usize> {
    let d = ring.top_degree();
    if 2 * k > d {
        return Err(Error::DegreeOutOfRange { p: k, max: d / 2 });
    }
    Ok(d)
}

fn lefschetz(ring: &ChowRing, l: &ChowClass, k: usize) -> Result<Report> {
    let d = check_k(ring, k)?;
    let lp = ring.power(l, d - 2 * k);
    let m = multiplication_matrix(ring, &lp, k);
    let ok = m.nrows() == m.ncols() && m.rank() == m.ncols();
    let mut r = Report::from_bool("hard Lefschetz", ok)
        .fact("k", k)
        .fact("source dimension", ring.dim(k))
        .fact("target dimension", ring.dim(d - k))
        .fact("rank", m.rank());
    if !ok {
        r = r.witness(format!("L^{} is not invertible from A^{k} to A^{}", d - 2 * k, d - k));
    }
    Ok(r)
}

fn hodge_riemann(ring: &ChowRing, l: &ChowClass, k: usize) -> Result<Report> {
    let d = check_k(ring, k)?;
    let primitive = multiplication_matrix(ring, &ring.power(l, d - 2 * k + 1), k).kernel();
    let lp = ring.power(l, d - 2 * k);
    let sign = if k % 2 == 0 { q(1) } else { q(-1) };
    let classes: Vec<ChowClass> = primitive.iter().map(|v| ChowClass { degree: k, coords: v.clone() }).collect();
    let mut form = QMatrix::zeros(classes.len(), classes.len());
    for (i, a) in classes.iter().enumerate() {
        let la = ring.multiply(&lp, a);
        for (j, b) in classes.iter().enumerate() {
            form[(i, j)] = &sign * ring.degree(&ring.multiply(&la, b))?;
        }
    }
    let minors = leading_minors(&form);
    let ok = minors.iter().all(is_positive);
    let mut r = Report::from_bool("Hodge-Riemann", ok)
        .fact("k", k)
        .fact("primitive dimension", classes.len())
        .fact("leading minors", tuple(&minors));
    if let Some(i) = minors.iter().position(|m| !is_positive(m)) {
        r = r.witness(format!("leading minor {} is {}", i + 1, minors[i]));
    }
    Ok(r)
}

/// The degree pairing `A^k × A^{d−k} → Q` is perfect for every `k`.
pub fn poincare_pairing_check(ring: &ChowRing) -> Result<Report> {
    let d = ring.top_degree();
    let mut bad = Vec::new();
    for k in 0..=d {
        let m = ring.pairing_matrix(k)?;
        if m.nrows() != m.ncols() || m.rank() != m.nrows() {
            bad.push(k);
        }
    }
    let mut r = Report::from_bool("Poincaré pairing", bad.is_empty()).fact("dimensions", tuple(&ring.dims()));
    for k in bad {
        r = r.witness(format!("pairing A^{k} × A^{} is degenerate", d - k));
    }
    Ok(r)
}

/// Kähler package of one ring: pairing, hard Lefschetz and Hodge–Riemann for `k ≤ d/2`.
pub fn kahler_package(ring: &ChowRing, f: &ConewiseLinearFunction) -> Result<Report> {
    let l = f.lefschetz_class(ring)?;
    let mut children = vec![poincare_pairing_check(ring)?];
    for k in 0..=ring.top_degree() / 2 {
        children.push(lefschetz(ring, &l, k)?);
        children.push(hodge_riemann(ring, &l, k)?);
    }
    let ok = children.iter().all(Report::passed);
    let mut r = Report::from_bool("Kähler package", ok);
    for c in children {
        r = r.child(c);
    }
    Ok(r)
}

/// Candidate functions tried when none is supplied: the squared Euclidean norm, the
/// `ℓ¹` norm, then seeded random values on the rays.
pub fn candidate_functions(fan: &Fan, random_tries: usize, seed: u64) -> Vec<(String, ConewiseLinearFunction)> {
    let mut out = Vec::new();
    let by = |g: &dyn Fn(&[i64]) -> i64| (0..fan.num_rays()).map(|i| q(g(fan.ray(i)))).collect::<Vec<Q>>();
    let sq = by(&|r| r.iter().map(|x| x * x).sum());
    let l1 = by(&|r| r.iter().map(|x| x.abs()).sum());
    out.push(("squared norm".to_string(), ConewiseLinearFunction { fan: fan.clone(), values: sq }));
    out.push(("l1 norm".to_string(), ConewiseLinearFunction { fan: fan.clone(), values: l1 }));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..random_tries {
        let values = (0..fan.num_rays()).map(|_| q(rng.gen_range(0..=8))).collect();
        out.push((format!("random #{t} (seed {seed})"), ConewiseLinearFunction { fan: fan.clone(), values }));
    }
    out
}

/// The first candidate that is strictly convex, if any.
pub fn find_strictly_convex(fan: &Fan, random_tries: usize, seed: u64) -> Option<(String, ConewiseLinearFunction)> {
    candidate_functions(fan, random_tries, seed).into_iter().find(|(_, f)| is_strictly_convex(f).passed())
}

pub const DEFAULT_SEARCH_TRIES: usize = 200;
pub const DEFAULT_SEARCH_SEED: u64 = 0x7a11;

/// Homology-manifold check, then the Kähler package on the star of every cone with the
/// restricted function. Without a strictly convex function the verdict is not-certified.
pub fn is_kahler(fan: &Fan, f: Option<&ConewiseLinearFunction>) -> Result<Report> {
    let thm = is_tropical_homology_manifold(fan)?;
    if !thm.passed() {
        return Ok(Report::new("Kähler", Verdict::Fail).witness("the fan is not a tropical homology manifold").child(thm));
    }
    let (source, f) = match f {
        Some(f) => {
            if f.values.len() != fan.num_rays() {
                return Err(Error::FunctionLength { found: f.values.len(), rays: fan.num_rays() });
            }
            ("supplied".to_string(), f.clone())
        }
        None => match find_strictly_convex(fan, DEFAULT_SEARCH_TRIES, DEFAULT_SEARCH_SEED) {
            Some(found) => found,
            None => {
                return Ok(Report::new("Kähler", Verdict::NotCertified)
                    .note("quasi-projectivity not certified: no strictly convex function found by the search"))
            }
        },
    };
    let convex = is_strictly_convex(&f);
    if !convex.passed() {
        return Ok(Report::new("Kähler", Verdict::NotCertified)
            .fact("function", tuple(&f.values))
            .note("quasi-projectivity not certified: the supplied function is not strictly convex")
            .child(convex));
    }
    let per_cone: Vec<(Cone, Report)> = fan
        .cones()
        .par_iter()
        .map(|sigma| {
            let g = f.restrict_to_star(sigma)?;
            let ring = chow_ring(&g.fan)?;
            Ok((sigma.clone(), kahler_package(&ring, &g)?))
        })
        .collect::<Result<_>>()?;
    let failing: Vec<&(Cone, Report)> = per_cone.iter().filter(|(_, r)| !r.passed()).collect();
    let mut r = Report::from_bool("Kähler", failing.is_empty())
        .fact("function source", source)
        .fact("function", tuple(&f.values))
        .fact("cones checked", per_cone.len());
    for (c, child) in failing {
        r = r.witness(format!("Kähler package fails on the star of {c}")).child(child.clone().fact("cone", c));
    }
    Ok(r)
}
