//! Matroids given by their bases, lattices of flats, and Bergman fans.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};

/// Subset of the ground set as a bitmask.
pub type Set = u64;

const MAX_GROUND: usize = 63;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    ground: usize,
    bases: Vec<Set>,
    rank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    Fine,
    Coarse,
}

pub fn elements(s: Set) -> Vec<usize> {
    (0..MAX_GROUND).filter(|i| s >> i & 1 == 1).collect()
}

pub fn set_of(elems: &[usize]) -> Set {
    elems.iter().fold(0, |acc, &e| acc | (1 << e))
}

impl Matroid {
    /// Validates equicardinality and the basis-exchange axiom.
    pub fn from_bases(ground: usize, bases: Vec<Vec<usize>>) -> Result<Matroid> {
        if ground > MAX_GROUND {
            return Err(Error::Matroid(format!("ground set of size {ground} exceeds {MAX_GROUND}")));
        }
        if bases.is_empty() {
            return Err(Error::Matroid("no bases given".into()));
        }
        let mut sets = BTreeSet::new();
        for b in &bases {
            if let Some(&e) = b.iter().find(|&&e| e >= ground) {
                return Err(Error::Matroid(format!("element {e} outside ground set of size {ground}")));
            }
            let s = set_of(b);
            if s.count_ones() as usize != b.len() {
                return Err(Error::Matroid(format!("basis {b:?} repeats an element")));
            }
            sets.insert(s);
        }
        let sets: Vec<Set> = sets.into_iter().collect();
        let rank = sets[0].count_ones() as usize;
        if sets.iter().any(|s| s.count_ones() as usize != rank) {
            return Err(Error::Matroid("bases have different cardinalities".into()));
        }
        for &b1 in &sets {
            for &b2 in &sets {
                for x in elements(b1 & !b2) {
                    let ok = elements(b2 & !b1).into_iter().any(|y| sets.binary_search(&((b1 & !(1 << x)) | (1 << y))).is_ok());
                    if !ok {
                        return Err(Error::Matroid(format!(
                            "basis exchange fails for {:?}, {:?} at element {x}",
                            elements(b1),
                            elements(b2)
                        )));
                    }
                }
            }
        }
        Ok(Matroid { ground, bases: sets, rank })
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[Set] {
        &self.bases
    }

    pub fn full(&self) -> Set {
        if self.ground == 0 {
            0
        } else {
            (1 << self.ground) - 1
        }
    }

    pub fn rank_of(&self, s: Set) -> usize {
        self.bases.iter().map(|b| (b & s).count_ones() as usize).max().unwrap_or(0)
    }

    pub fn closure(&self, s: Set) -> Set {
        let r = self.rank_of(s);
        (0..self.ground).filter(|&e| self.rank_of(s | (1 << e)) == r).fold(s, |acc, e| acc | (1 << e))
    }

    pub fn loops(&self) -> Vec<usize> {
        let used = self.bases.iter().fold(0, |a, b| a | b);
        (0..self.ground).filter(|e| used >> e & 1 == 0).collect()
    }

    pub fn is_uniform(&self) -> bool {
        let n = self.ground as u32;
        let expected = binomial(n as usize, self.rank);
        self.bases.len() == expected
    }

    /// Restriction to `f`, relabelled to `0..|f|`.
    pub fn restrict(&self, f: Set) -> Result<Matroid> {
        let elems = elements(f);
        let r = self.rank_of(f);
        let bases: BTreeSet<Vec<usize>> = self
            .bases
            .iter()
            .filter(|b| (*b & f).count_ones() as usize == r)
            .map(|b| relabel(b & f, &elems))
            .collect();
        Matroid::from_bases(elems.len(), bases.into_iter().collect())
    }

    /// Contraction by `f`, relabelled to the complement in increasing order.
    pub fn contract(&self, f: Set) -> Result<Matroid> {
        let rest = self.full() & !f;
        let elems = elements(rest);
        let r = self.rank_of(f);
        let bases: BTreeSet<Vec<usize>> = self
            .bases
            .iter()
            .filter(|b| (*b & f).count_ones() as usize == r)
            .map(|b| relabel(b & rest, &elems))
            .collect();
        Matroid::from_bases(elems.len(), bases.into_iter().collect())
    }
}

fn relabel(s: Set, order: &[usize]) -> Vec<usize> {
    elements(s).into_iter().map(|e| order.iter().position(|&o| o == e).unwrap()).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    crate::linalg::binomial(n, k)
}

pub fn uniform_matroid(r: usize, n: usize) -> Result<Matroid> {
    if r < 1 || r > n {
        return Err(Error::Matroid(format!("uniform matroid needs 1 <= r <= n, got r={r}, n={n}")));
    }
    Matroid::from_bases(n, crate::linalg::subsets(n, r))
}

/// All flats grouped by rank; entry `k` lists the rank-`k` flats in increasing bitmask order.
pub fn flats(m: &Matroid) -> Vec<Vec<Set>> {
    let mut by_rank: Vec<BTreeSet<Set>> = vec![BTreeSet::new(); m.rank() + 1];
    by_rank[0].insert(m.closure(0));
    for k in 0..m.rank() {
        let current: Vec<Set> = by_rank[k].iter().copied().collect();
        for f in current {
            for e in 0..m.ground_size() {
                if f >> e & 1 == 0 {
                    let g = m.closure(f | (1 << e));
                    by_rank[k + 1].insert(g);
                }
            }
        }
    }
    by_rank.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Image of `Σ_{i∈F} e_i` in `Z^E / Z·(1,…,1)`, realized by dropping the last coordinate.
fn flat_vector(ground: usize, f: Set) -> Vec<i64> {
    let last = ground - 1;
    let shift = i64::from(f >> last & 1 == 1);
    (0..last).map(|i| i64::from(f >> i & 1 == 1) - shift).collect()
}

/// The Bergman fan with weights 1.
///
/// Fine structure: one ray per proper nonempty flat, cones are chains of flats.
/// Coarse structure (uniform matroids only): one ray per element, cones on every set of
/// at most `rank − 1` elements.
pub fn bergman_fan(m: &Matroid, structure: Structure) -> Result<Fan> {
    if !m.loops().is_empty() {
        return Err(Error::Matroid(format!("matroid has loops {:?}", m.loops())));
    }
    if m.ground_size() == 0 {
        return Err(Error::Matroid("empty ground set".into()));
    }
    let n = m.ground_size() - 1;
    match structure {
        Structure::Fine => {
            let lattice = flats(m);
            let proper: Vec<Set> = lattice[1..m.rank()].iter().flatten().copied().collect();
            let rays: Vec<Vec<i64>> = proper.iter().map(|&f| flat_vector(m.ground_size(), f)).collect();
            // maximal chains of proper flats, one per rank 1..rank-1
            let mut chains: Vec<Vec<usize>> = vec![Vec::new()];
            for k in 1..m.rank() {
                let mut next = Vec::new();
                for ch in &chains {
                    let prev = ch.last().map_or(0, |&i| proper[i]);
                    for (i, &f) in proper.iter().enumerate() {
                        if m.rank_of(f) == k && f & prev == prev {
                            let mut c = ch.clone();
                            c.push(i);
                            next.push(c);
                        }
                    }
                }
                chains = next;
            }
            let weights = vec![1; chains.len()];
            Fan::new(n, rays, chains, Some(weights))
        }
        Structure::Coarse => {
            if !m.is_uniform() {
                return Err(Error::Matroid("coarse structure is only available for uniform matroids".into()));
            }
            let rays: Vec<Vec<i64>> = (0..m.ground_size()).map(|e| flat_vector(m.ground_size(), 1 << e)).collect();
            let cones = crate::linalg::subsets(m.ground_size(), m.rank() - 1);
            let weights = vec![1; cones.len()];
            Fan::new(n, rays, cones, Some(weights))
        }
    }
}

/// The ray of the fine Bergman fan attached to a flat.
pub fn flat_ray(fan: &Fan, m: &Matroid, f: Set) -> Option<Cone> {
    let v = flat_vector(m.ground_size(), f);
    fan.rays().iter().position(|r| *r == v).map(|i| Cone::new(vec![i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{is_balanced, is_unimodular};

    #[test]
    fn uniform_bases() {
        assert_eq!(uniform_matroid(2, 3).unwrap().bases().len(), 3);
        assert_eq!(uniform_matroid(3, 4).unwrap().bases().len(), 4);
        assert_eq!(uniform_matroid(1, 1).unwrap().bases().len(), 1);
        assert!(uniform_matroid(0, 3).is_err());
        assert!(uniform_matroid(4, 3).is_err());
    }

    #[test]
    fn flats_of_u34() {
        let m = uniform_matroid(3, 4).unwrap();
        let fl = flats(&m);
        assert_eq!(fl[0], vec![0]);
        assert_eq!(fl[1].len(), 4);
        assert_eq!(fl[2].len(), 6);
        assert_eq!(fl[3], vec![0b1111]);
    }

    #[test]
    fn flats_of_u23() {
        let fl = flats(&uniform_matroid(2, 3).unwrap());
        assert_eq!(fl[1].len(), 3);
    }

    #[test]
    fn exchange_axiom_is_checked() {
        // {0,1} and {2,3} alone violate exchange
        assert!(Matroid::from_bases(4, vec![vec![0, 1], vec![2, 3]]).is_err());
        assert!(Matroid::from_bases(3, vec![vec![0, 1], vec![0]]).is_err());
    }

    #[test]
    fn bergman_u23_is_line() {
        let f = bergman_fan(&uniform_matroid(2, 3).unwrap(), Structure::Fine).unwrap();
        let mut rays = f.rays().to_vec();
        rays.sort();
        assert_eq!(rays, vec![vec![-1, -1], vec![0, 1], vec![1, 0]]);
        assert_eq!(f.f_vector(), vec![1, 3]);
    }

    #[test]
    fn bergman_u34() {
        let m = uniform_matroid(3, 4).unwrap();
        let coarse = bergman_fan(&m, Structure::Coarse).unwrap();
        assert_eq!(coarse.f_vector(), vec![1, 4, 6]);
        let mut rays = coarse.rays().to_vec();
        rays.sort();
        assert_eq!(rays, vec![vec![-1, -1, -1], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        let fine = bergman_fan(&m, Structure::Fine).unwrap();
        assert_eq!(fine.f_vector(), vec![1, 10, 12]);
        for f in [&coarse, &fine] {
            assert!(is_balanced(f).unwrap().passed());
            assert!(is_unimodular(f).unwrap().passed());
        }
    }

    #[test]
    fn loops_are_rejected() {
        let m = Matroid::from_bases(3, vec![vec![0, 1]]).unwrap();
        assert_eq!(m.loops(), vec![2]);
        assert!(bergman_fan(&m, Structure::Fine).is_err());
    }

    #[test]
    fn minors_of_u34() {
        let m = uniform_matroid(3, 4).unwrap();
        let f = set_of(&[0, 1]);
        assert_eq!(m.restrict(f).unwrap(), uniform_matroid(2, 2).unwrap());
        assert_eq!(m.contract(f).unwrap(), uniform_matroid(1, 2).unwrap());
        assert_eq!(m.contract(set_of(&[0])).unwrap(), uniform_matroid(2, 3).unwrap());
    }

    #[test]
    fn stars_of_rays_are_products() {
        use crate::chow::chow_ring;
        use crate::fan::{product_fan, star_fan};
        let m = uniform_matroid(3, 4).unwrap();
        let fine = bergman_fan(&m, Structure::Fine).unwrap();
        for rank in [1, 2] {
            for flat in flats(&m)[rank].iter().copied() {
                let ray = flat_ray(&fine, &m, flat).unwrap();
                let star = star_fan(&fine, &ray).unwrap().fan;
                let restricted = bergman_fan(&m.restrict(flat).unwrap(), Structure::Fine).unwrap();
                let contracted = bergman_fan(&m.contract(flat).unwrap(), Structure::Fine).unwrap();
                let prod = product_fan(&restricted, &contracted);
                assert_eq!(star.f_vector(), prod.f_vector(), "{:?}", elements(flat));
                assert_eq!(chow_ring(&star).unwrap().dims(), chow_ring(&prod).unwrap().dims());
            }
        }
    }
}
