//! Brute-force Chow ring: the quotient of the full polynomial ring by the Stanley–Reisner
//! ideal and the linear forms, degree by degree, over every monomial of degree at most `d`.
//!
//! Independent of the structured construction in the parent module; used to validate it.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::linalg::{q, Echelon, QMatrix, Q};

/// Exponent vectors of all monomials of degree `k` in `n` variables, lexicographically.
pub fn monomials(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, k as u32, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct OracleRing {
    pub nvars: usize,
    pub d: usize,
    monomials: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
    relations: Vec<Echelon>,
    basis: Vec<Vec<usize>>,
}

pub fn oracle_ring(fan: &Fan) -> Result<OracleRing> {
    if !fan.is_unimodular_fan()? {
        return Err(Error::Invalid("the Chow ring needs a unimodular fan".into()));
    }
    let n = fan.num_rays();
    let d = fan.dim();
    let faces: BTreeSet<Vec<usize>> = fan.cones().iter().map(|c| c.rays().to_vec()).collect();
    let mut all_monomials = Vec::new();
    let mut index = Vec::new();
    let mut relations = Vec::new();
    let mut basis = Vec::new();
    for k in 0..=d {
        let mons = monomials(n, k);
        let idx: HashMap<Vec<u32>, usize> = mons.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut rel = QMatrix::zeros(0, mons.len());
        for (i, m) in mons.iter().enumerate() {
            let support: Vec<usize> = (0..n).filter(|&v| m[v] > 0).collect();
            if !faces.contains(&support) {
                let mut row = vec![q(0); mons.len()];
                row[i] = q(1);
                rel.push_row(row);
            }
        }
        if k > 0 {
            for b in monomials(n, k - 1) {
                for coord in 0..fan.rank() {
                    let mut row = vec![q(0); mons.len()];
                    for v in 0..n {
                        let c = fan.ray(v)[coord];
                        if c != 0 {
                            let mut e = b.clone();
                            e[v] += 1;
                            row[idx[&e]] += q(c);
                        }
                    }
                    rel.push_row(row);
                }
            }
        }
        let ech = rel.rref();
        let free: Vec<usize> = (0..mons.len()).filter(|c| !ech.pivots.contains(c)).collect();
        all_monomials.push(mons);
        index.push(idx);
        relations.push(ech);
        basis.push(free);
    }
    Ok(OracleRing { nvars: n, d, monomials: all_monomials, index, relations, basis })
}

impl OracleRing {
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.basis.get(k).map_or(0, Vec::len)
    }

    /// Monomials standing for the basis of `A^k`.
    pub fn basis_monomials(&self, k: usize) -> Vec<Vec<u32>> {
        self.basis[k].iter().map(|&i| self.monomials[k][i].clone()).collect()
    }

    /// Normal form of a monomial given as a multiset of ray indices.
    pub fn normal_form_of_rays(&self, rays: &[usize]) -> Vec<Q> {
        let k = rays.len();
        if k > self.d {
            return Vec::new();
        }
        let mut e = vec![0u32; self.nvars];
        for &r in rays {
            e[r] += 1;
        }
        let mut v = vec![q(0); self.monomials[k].len()];
        v[self.index[k][&e]] = q(1);
        self.normal_form(k, &v)
    }

    /// Normal form of a degree-`k` polynomial given in the monomial basis.
    pub fn normal_form(&self, k: usize, v: &[Q]) -> Vec<Q> {
        let r = self.relations[k].reduce(v);
        self.basis[k].iter().map(|&i| r[i].clone()).collect()
    }

    pub fn normal_form_of_cone(&self, c: &Cone) -> Vec<Q> {
        self.normal_form_of_rays(c.rays())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(4, 0), vec![vec![0, 0, 0, 0]]);
        assert_eq!(monomials(2, 3).len(), 4);
    }

    #[test]
    fn oracle_dims() {
        assert_eq!(oracle_ring(&fixtures::p2()).unwrap().dims(), vec![1, 1, 1]);
        assert_eq!(oracle_ring(&fixtures::u34_coarse()).unwrap().dims(), vec![1, 1, 1]);
        assert_eq!(oracle_ring(&fixtures::u34_fine()).unwrap().dims(), vec![1, 7, 1]);
        assert_eq!(oracle_ring(&fixtures::cross()).unwrap().dims(), vec![1, 2]);
        assert_eq!(oracle_ring(&fixtures::nm()).unwrap().dims(), vec![1, 6, 1]);
    }

    #[test]
    fn line_class_squares_to_a_point() {
        let o = oracle_ring(&fixtures::p2()).unwrap();
        assert_eq!(o.normal_form_of_rays(&[0, 0]), o.normal_form_of_rays(&[0, 1]));
        assert!(o.normal_form_of_rays(&[0, 1]).iter().any(|x| *x != q(0)));
    }
}
