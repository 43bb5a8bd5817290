//! The canonical compactification of a unimodular fan as a cubical cell complex, with
//! the multi-tangent coefficient spaces `F_p` and their structure maps.
//!
//! A face `C_γ^σ` (σ ⊆ γ) is the closure of the image of γ in the stratum `N^σ`. For a
//! unimodular fan it is a cube `[0, ∞]^{γ∖σ}`: letting the `i`-th free ray go to zero
//! gives `C_{γ∖ζ}^σ`, letting it go to infinity gives `C_γ^{σ∪ζ}`.
//!
//! Orientation convention: free rays are taken in the global ray order, and
//! `∂ C = Σ_i (−1)^i (C|_{ζ_i=∞} − C|_{ζ_i=0})`. With this sign system `∂² = 0` for every
//! coefficient system, and the weighted top-dimensional chain is a cycle exactly when the
//! fan is balanced.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan, Quotient};
use crate::linalg::{compound, int_mat_mul, q, wedge, Echelon, QMatrix, Q};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompactFace {
    pub sedentarity: Cone,
    pub mother: Cone,
}

impl CompactFace {
    pub fn new(sedentarity: Cone, mother: Cone) -> Self {
        debug_assert!(sedentarity.is_face_of(&mother));
        CompactFace { sedentarity, mother }
    }

    pub fn dim(&self) -> usize {
        self.mother.dim() - self.sedentarity.dim()
    }

    /// Rays of the mother cone that are not at infinity, ascending.
    pub fn free_rays(&self) -> Vec<usize> {
        self.mother.minus(&self.sedentarity)
    }

    /// Whether `self` is a face of `other` (as closed cells).
    pub fn is_face_of(&self, other: &CompactFace) -> bool {
        other.sedentarity.is_face_of(&self.sedentarity)
            && self.sedentarity.is_face_of(&self.mother)
            && self.mother.is_face_of(&other.mother)
    }
}

impl fmt::Debug for CompactFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CompactFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}^{}", self.mother, self.sedentarity)
    }
}

/// A basis of `F_p(C_γ^σ) ⊆ ∧^p N^σ_Q` in the lexicographic basis of `∧^p Q^{rank N^σ}`.
#[derive(Clone, Debug)]
pub struct MultiTangentSpace {
    pub face: CompactFace,
    pub p: usize,
    /// Rank of `N^σ`.
    pub lattice_rank: usize,
    pub basis: Echelon,
}

impl MultiTangentSpace {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

#[derive(Clone, Debug)]
pub struct CompactifiedComplex {
    fan: Fan,
    faces: Vec<CompactFace>,
    index: HashMap<CompactFace, usize>,
    boundary: Vec<Vec<(usize, i64)>>,
    quotients: HashMap<Cone, Quotient>,
}

pub fn build_complex(fan: &Fan) -> Result<CompactifiedComplex> {
    for m in fan.maximal_cones() {
        if !fan.is_cone_unimodular(m)? {
            return Err(Error::NotUnimodular(m.rays().to_vec()));
        }
    }
    let mut faces = Vec::new();
    for gamma in fan.cones() {
        for sigma in gamma.faces() {
            faces.push(CompactFace::new(sigma, gamma.clone()));
        }
    }
    faces.sort_by(|a, b| (a.dim(), &a.sedentarity, &a.mother).cmp(&(b.dim(), &b.sedentarity, &b.mother)));
    let index: HashMap<CompactFace, usize> = faces.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();

    let boundary = faces
        .iter()
        .map(|f| {
            let mut out = Vec::new();
            for (i, &z) in f.free_rays().iter().enumerate() {
                let s: i64 = if i % 2 == 0 { 1 } else { -1 };
                let at_zero = CompactFace::new(f.sedentarity.clone(), f.mother.without_ray(z));
                let at_inf = CompactFace::new(f.sedentarity.with_ray(z), f.mother.clone());
                out.push((index[&at_zero], -s));
                out.push((index[&at_inf], s));
            }
            out
        })
        .collect();

    let mut quotients = HashMap::new();
    for c in fan.cones() {
        quotients.insert(c.clone(), fan.quotient(c)?);
    }
    Ok(CompactifiedComplex { fan: fan.clone(), faces, index, boundary, quotients })
}

impl CompactifiedComplex {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn faces(&self) -> &[CompactFace] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &CompactFace {
        &self.faces[i]
    }

    pub fn face_index(&self, f: &CompactFace) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn faces_of_dim(&self, q: usize) -> impl Iterator<Item = (usize, &CompactFace)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim() == q)
    }

    /// Number of faces in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim()).map(|q| self.faces_of_dim(q).count()).collect()
    }

    /// Signed codimension-one faces of the face with index `i`.
    pub fn boundary_of(&self, i: usize) -> &[(usize, i64)] {
        &self.boundary[i]
    }

    pub fn sign(&self, beta: usize, alpha: usize) -> Option<i64> {
        self.boundary[beta].iter().find(|(a, _)| *a == alpha).map(|(_, s)| *s)
    }

    pub fn quotient(&self, sigma: &Cone) -> &Quotient {
        &self.quotients[sigma]
    }

    /// `F_p` of a face. `p` must not exceed the rank of `N^σ`.
    pub fn multi_tangent(&self, face: &CompactFace, p: usize) -> Result<MultiTangentSpace> {
        let r = self.quotient(&face.sedentarity).rank();
        if p > r {
            return Err(Error::DegreeOutOfRange { p, max: r });
        }
        Ok(self.tangent_unchecked(face, p))
    }

    /// `F_p`, taken to be zero when `p` exceeds the rank of `N^σ`.
    pub(crate) fn tangent_unchecked(&self, face: &CompactFace, p: usize) -> MultiTangentSpace {
        let qt = self.quotient(&face.sedentarity);
        let r = qt.rank();
        let mut gens = QMatrix::zeros(0, crate::linalg::binomial(r, p));
        if p <= r {
            for eta in self.fan.maximal_cones().iter().filter(|m| face.mother.is_face_of(m)) {
                let vecs: Vec<Vec<Q>> = eta
                    .minus(&face.sedentarity)
                    .iter()
                    .map(|&z| qt.project(self.fan.ray(z)).into_iter().map(q).collect())
                    .collect();
                for subset in crate::linalg::subsets(vecs.len(), p) {
                    let chosen: Vec<Vec<Q>> = subset.iter().map(|&i| vecs[i].clone()).collect();
                    gens.push_row(wedge(r, &chosen));
                }
            }
        }
        MultiTangentSpace { face: face.clone(), p, lattice_rank: r, basis: gens.rref() }
    }

    /// Integer matrix of the projection `N^σ → N^{σ'}` for `σ ⊆ σ'`.
    pub fn projection_between(&self, from: &Cone, to: &Cone) -> QMatrix {
        let a = self.quotient(to);
        let b = self.quotient(from);
        let m = int_mat_mul(&a.projection, &b.lift, self.fan.rank());
        QMatrix::from_int_rows(b.rank(), &m)
    }

    /// Matrix of `ι_{β⊇α}: F_p(β) → F_p(α)` in the echelon bases of both spaces.
    pub fn coefficient_map(&self, beta: &CompactFace, alpha: &CompactFace, p: usize) -> Result<QMatrix> {
        if !alpha.is_face_of(beta) {
            return Err(Error::NotAFace(alpha.to_string(), beta.to_string()));
        }
        let fb = self.tangent_unchecked(beta, p);
        let fa = self.tangent_unchecked(alpha, p);
        Ok(self.map_between(&fb, &fa))
    }

    pub(crate) fn map_between(&self, from: &MultiTangentSpace, to: &MultiTangentSpace) -> QMatrix {
        let mut out = QMatrix::zeros(to.dim(), from.dim());
        if from.dim() == 0 || to.dim() == 0 {
            return out;
        }
        let proj = self.projection_between(&from.face.sedentarity, &to.face.sedentarity);
        let c = compound(&proj, from.p);
        for (j, b) in from.basis.rows.rows_iter().enumerate() {
            let img = c.mul_vec(b);
            let coords = to
                .basis
                .coordinates(&img)
                .expect("image of a multi-tangent space lies in the target space");
            for (i, x) in coords.into_iter().enumerate() {
                if !x.is_zero() {
                    out[(i, j)] = x;
                }
            }
        }
        out
    }
}
