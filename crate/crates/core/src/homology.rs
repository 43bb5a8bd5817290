//! Tropical homology and cohomology of the compactification, the fundamental class and
//! the Poincaré-duality battery.

use num_traits::Zero;
use rayon::prelude::*;

use crate::complex::{build_complex, CompactFace, CompactifiedComplex, MultiTangentSpace};
use crate::error::{Error, Result};
use crate::fan::{is_balanced, star_fan, Cone, Fan};
use crate::linalg::{q, Echelon, QMatrix, Q};
use crate::report::{Report, Verdict};

/// The chain complex `C_{p,•}` for a fixed `p`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub p: usize,
    /// `dims[q] = dim C_{p,q}`.
    pub dims: Vec<usize>,
    /// For each `q`, the faces of dimension `q` with their offset into `C_{p,q}`.
    pub blocks: Vec<Vec<(usize, usize)>>,
    /// `boundaries[q]: C_{p,q} → C_{p,q−1}`, a `dims[q−1] × dims[q]` matrix; entry 0 is `0 × dims[0]`.
    pub boundaries: Vec<QMatrix>,
    pub spaces: Vec<MultiTangentSpace>,
}

impl ChainComplex {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// `∂_q`, or a zero map when `q` is out of range.
    pub fn boundary(&self, q: usize) -> QMatrix {
        match self.boundaries.get(q) {
            Some(m) => m.clone(),
            None => QMatrix::zeros(self.dims.get(q - 1).copied().unwrap_or(0), 0),
        }
    }

    fn rank_of(&self, q: usize) -> usize {
        self.boundaries.get(q).map_or(0, QMatrix::rank)
    }

    pub fn homology_dim(&self, q: usize) -> usize {
        self.dims[q] - self.rank_of(q) - self.rank_of(q + 1)
    }

    /// Cohomology of the dual complex, computed from the transposed differentials.
    pub fn cohomology_dim(&self, q: usize) -> usize {
        let t = |k: usize| self.boundaries.get(k).map_or(0, |m| m.transpose().rank());
        self.dims[q] - t(q + 1) - t(q)
    }

    /// Representatives of a basis of `H_{p,q}`: kernel vectors chosen greedily, in
    /// kernel-basis order, that are independent modulo the image of `∂_{q+1}`.
    pub fn homology_basis(&self, q: usize) -> Vec<Vec<Q>> {
        let kernel = self.boundaries[q].kernel();
        let mut span = match self.boundaries.get(q + 1) {
            Some(m) => m.transpose(),
            None => QMatrix::zeros(0, self.dims[q]),
        };
        let mut out = Vec::new();
        for v in kernel {
            let before = span.rank();
            span.push_row(v.clone());
            if span.rank() > before {
                out.push(v);
            } else {
                span = QMatrix::from_rows(span.ncols(), span.rows_iter().take(span.nrows() - 1).map(<[Q]>::to_vec).collect());
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

pub fn chain_complex(cx: &CompactifiedComplex, p: usize) -> Result<ChainComplex> {
    let d = cx.dim();
    if p > d {
        return Err(Error::DegreeOutOfRange { p, max: d });
    }
    let spaces: Vec<MultiTangentSpace> = cx.faces().iter().map(|f| cx.tangent_unchecked(f, p)).collect();
    let mut blocks = vec![Vec::new(); d + 1];
    let mut dims = vec![0; d + 1];
    let mut offset = vec![0; cx.faces().len()];
    for (i, f) in cx.faces().iter().enumerate() {
        let q = f.dim();
        offset[i] = dims[q];
        blocks[q].push((i, dims[q]));
        dims[q] += spaces[i].dim();
    }
    let mut boundaries = vec![QMatrix::zeros(0, dims[0])];
    for q in 1..=d {
        let mut m = QMatrix::zeros(dims[q - 1], dims[q]);
        for &(b, ob) in &blocks[q] {
            if spaces[b].dim() == 0 {
                continue;
            }
            for &(a, sign) in cx.boundary_of(b) {
                if spaces[a].dim() == 0 {
                    continue;
                }
                let block = cx.map_between(&spaces[b], &spaces[a]).scale(&crate::linalg::q(sign));
                m.set_block(offset[a], ob, &block);
            }
        }
        boundaries.push(m);
    }
    Ok(ChainComplex { p, dims, blocks, boundaries, spaces })
}

/// Dimensions of `H_{p,q}` and `H^{p,q}` of the compactification, `0 ≤ p, q ≤ d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub d: usize,
    pub homology: Vec<Vec<usize>>,
    pub cohomology: Vec<Vec<usize>>,
}

impl BettiTable {
    pub fn homology(&self, p: usize, q: usize) -> usize {
        self.homology.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    pub fn cohomology(&self, p: usize, q: usize) -> usize {
        self.cohomology.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    /// `dim H^k = Σ_{p+q=k} dim H^{p,q}` for `k = 0..=2d`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=2 * self.d).map(|k| (0..=k).map(|p| self.cohomology(p, k - p)).sum()).collect()
    }

    pub fn diagonal(&self) -> Vec<usize> {
        (0..=self.d).map(|k| self.cohomology(k, k)).collect()
    }

    /// Rows `p`, columns `q`, of cohomology dimensions.
    pub fn render(&self) -> String {
        self.cohomology.iter().map(|r| crate::report::tuple(r)).collect::<Vec<_>>().join(" ")
    }
}

pub fn betti_table(fan: &Fan) -> Result<BettiTable> {
    let cx = build_complex(fan)?;
    betti_table_of(&cx)
}

pub fn betti_table_of(cx: &CompactifiedComplex) -> Result<BettiTable> {
    let d = cx.dim();
    let rows: Vec<(Vec<usize>, Vec<usize>)> = (0..=d)
        .into_par_iter()
        .map(|p| {
            let cc = chain_complex(cx, p)?;
            Ok(((0..=d).map(|q| cc.homology_dim(q)).collect(), (0..=d).map(|q| cc.cohomology_dim(q)).collect()))
        })
        .collect::<Result<_>>()?;
    let (homology, cohomology) = rows.into_iter().unzip();
    Ok(BettiTable { d, homology, cohomology })
}

/// `H^{p,0}` of the open fan, the dual of `F_p` at the cone point.
#[derive(Clone, Debug)]
pub struct OpenCohomology {
    pub p: usize,
    pub dim: usize,
    /// Basis of `F_p(0) ⊆ ∧^p N_Q`; the cohomology is its dual.
    pub tangent_basis: Echelon,
}

pub fn fan_open_cohomology(fan: &Fan, p: usize) -> Result<OpenCohomology> {
    let cx = build_complex(fan)?;
    let origin = CompactFace::new(Cone::zero(), Cone::zero());
    let t = cx.tangent_unchecked(&origin, p);
    Ok(OpenCohomology { p, dim: t.dim(), tangent_basis: t.basis })
}

#[derive(Clone, Debug)]
pub struct FundamentalCycle {
    /// Facet, weight and `wgt·ω_γ` in the lexicographic basis of `∧^d N`.
    pub coefficients: Vec<(Cone, i64, Vec<Q>)>,
    /// The chain in `C_{d,d}` in echelon coordinates.
    pub chain: Vec<Q>,
    pub boundary: Vec<Q>,
}

impl FundamentalCycle {
    pub fn is_cycle(&self) -> bool {
        self.boundary.iter().all(Zero::is_zero)
    }
}

pub fn fundamental_class(fan: &Fan) -> Result<FundamentalCycle> {
    if !fan.is_pure() {
        return Err(Error::NotPure);
    }
    let cx = build_complex(fan)?;
    let d = fan.dim();
    let cc = chain_complex(&cx, d)?;
    let mut chain = vec![q(0); cc.dims[d]];
    let mut coefficients = Vec::new();
    for &(i, off) in &cc.blocks[d] {
        let face = cx.face(i);
        if !face.sedentarity.rays().is_empty() {
            continue;
        }
        let w = fan.weight(&face.mother)?;
        let vecs: Vec<Vec<Q>> = face.mother.rays().iter().map(|&r| fan.ray(r).iter().map(|&x| q(x)).collect()).collect();
        let omega: Vec<Q> = crate::linalg::wedge(fan.rank(), &vecs).into_iter().map(|x| x * q(w)).collect();
        let coords = cc.spaces[i].basis.coordinates(&omega).expect("top multivector spans F_d of its facet");
        chain[off] = coords[0].clone();
        coefficients.push((face.mother.clone(), w, omega));
    }
    let boundary = cc.boundaries[d].mul_vec(&chain);
    Ok(FundamentalCycle { coefficients, chain, boundary })
}

/// Necessary conditions for tropical Poincaré duality, decided by rank computations:
/// (a) `dim H^{p,q} = dim H_{d−p,d−q}`, (b) `dim H^{d,d} = 1`, (c) `H^{p,q} = 0` for `p ≠ q`.
pub fn pd_battery(fan: &Fan) -> Result<Report> {
    let t = betti_table(fan)?;
    Ok(battery_report(&t))
}

fn battery_report(t: &BettiTable) -> Report {
    let d = t.d;
    let mut witnesses = Vec::new();
    for p in 0..=d {
        for qq in 0..=d {
            let (a, b) = (t.cohomology(p, qq), t.homology(d - p, d - qq));
            if a != b {
                witnesses.push(format!("(a) dim H^{{{p},{qq}}} = {a} but dim H_{{{},{}}} = {b}", d - p, d - qq));
            }
        }
    }
    if t.cohomology(d, d) != 1 {
        witnesses.push(format!("(b) dim H^{{{d},{d}}} = {}", t.cohomology(d, d)));
    }
    for p in 0..=d {
        for qq in (0..=d).filter(|&qq| qq != p) {
            if t.cohomology(p, qq) != 0 {
                witnesses.push(format!("(c) dim H^{{{p},{qq}}} = {}", t.cohomology(p, qq)));
            }
        }
    }
    let mut r = Report::from_bool("PD battery", witnesses.is_empty())
        .fact("dimension", d)
        .fact("cohomology", t.render())
        .fact("betti numbers", crate::report::tuple(&t.betti_numbers()));
    for w in witnesses {
        r = r.witness(w);
    }
    r.note("necessary conditions for Poincaré duality; whether they suffice together with the star recursion is open")
}

/// Runs the PD battery on the star of every cone, the zero cone included.
pub fn is_tropical_homology_manifold(fan: &Fan) -> Result<Report> {
    let results: Vec<(Cone, Report)> = fan
        .cones()
        .par_iter()
        .map(|c| {
            let s = star_fan(fan, c)?;
            Ok((c.clone(), pd_battery(&s.fan)?))
        })
        .collect::<Result<_>>()?;
    let failing: Vec<&(Cone, Report)> = results.iter().filter(|(_, r)| !r.passed()).collect();
    let mut r = Report::new("tropical homology manifold", if failing.is_empty() { Verdict::Pass } else { Verdict::Fail })
        .fact("cones checked", results.len())
        .fact("failing cones", failing.len());
    for (c, child) in failing {
        r = r.witness(format!("star of {c} fails the PD battery")).child(child.clone().fact("cone", c));
    }
    Ok(r.note("each star is checked with the PD battery, a necessary-condition test"))
}

/// Fundamental-class cycle test paired with the balancing check, for cross-validation.
pub fn cycle_matches_balancing(fan: &Fan) -> Result<bool> {
    Ok(fundamental_class(fan)?.is_cycle() == is_balanced(fan)?.passed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::barycentric_star_subdivision;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn segment_chain_complex() {
        let cx = build_complex(&fixtures::segment()).unwrap();
        let c1 = chain_complex(&cx, 1).unwrap();
        assert_eq!(c1.dims, vec![1, 2]);
        assert_eq!(c1.boundaries[1].rank(), 1);
        let c0 = chain_complex(&cx, 0).unwrap();
        assert_eq!(c0.dims, vec![3, 2]);
    }

    #[test]
    fn cross_chain_complex() {
        let cx = build_complex(&fixtures::cross()).unwrap();
        let c1 = chain_complex(&cx, 1).unwrap();
        assert_eq!(c1.dims, vec![2, 4]);
        assert_eq!(c1.boundaries[1].rank(), 2);
    }

    #[test]
    fn boundary_squares_to_zero() {
        for (name, fan) in fixtures::all() {
            let cx = build_complex(&fan).unwrap();
            for p in 0..=fan.dim() {
                let cc = chain_complex(&cx, p).unwrap();
                for qq in 2..=fan.dim() {
                    assert!(cc.boundaries[qq - 1].mul(&cc.boundaries[qq]).is_zero(), "{name} p={p} q={qq}");
                }
            }
        }
    }

    #[test]
    fn betti_tables() {
        let cross = betti_table(&fixtures::cross()).unwrap();
        assert_eq!(cross.cohomology, vec![vec![1, 0], vec![0, 2]]);
        let ell = betti_table(&fixtures::elliptic()).unwrap();
        assert_eq!(ell.cohomology, vec![vec![1, 0], vec![0, 1]]);
        let seg = betti_table(&fixtures::segment()).unwrap();
        assert_eq!(seg.cohomology, vec![vec![1, 0], vec![0, 1]]);
        let nm = betti_table(&fixtures::nm()).unwrap();
        assert_eq!(nm.diagonal(), vec![1, 6, 1]);
        assert_eq!(nm.betti_numbers(), vec![1, 0, 6, 0, 1]);
        let p2 = betti_table(&fixtures::p2()).unwrap();
        assert_eq!(p2.betti_numbers(), vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn homology_equals_cohomology_and_euler() {
        for (name, fan) in fixtures::all() {
            let cx = build_complex(&fan).unwrap();
            let t = betti_table_of(&cx).unwrap();
            assert_eq!(t.homology, t.cohomology, "{name}");
            for p in 0..=fan.dim() {
                let cc = chain_complex(&cx, p).unwrap();
                let chi: i64 = (0..=fan.dim()).map(|qq| if qq % 2 == 0 { t.homology(p, qq) as i64 } else { -(t.homology(p, qq) as i64) }).sum();
                assert_eq!(cc.euler_characteristic(), chi, "{name} p={p}");
            }
            assert_eq!(t.homology(0, 0), 1, "{name} is connected");
        }
    }

    #[test]
    fn homology_basis_sizes() {
        let cx = build_complex(&fixtures::cross()).unwrap();
        let cc = chain_complex(&cx, 1).unwrap();
        let basis = cc.homology_basis(1);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(cc.boundaries[1].mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn open_cohomology() {
        assert_eq!(fan_open_cohomology(&fixtures::line2(), 1).unwrap().dim, 2);
        assert_eq!(fan_open_cohomology(&fixtures::cross(), 2).unwrap().dim, 0);
        for (_, fan) in fixtures::all() {
            assert_eq!(fan_open_cohomology(&fan, 0).unwrap().dim, 1);
        }
    }

    #[test]
    fn fundamental_classes() {
        assert!(fundamental_class(&fixtures::elliptic()).unwrap().is_cycle());
        let quadrant = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0], vec![1]], Some(vec![1, 1])).unwrap();
        assert!(!fundamental_class(&quadrant).unwrap().is_cycle());
        let doubled = fixtures::elliptic().with_weights(vec![2, 2, 2]).unwrap();
        let c1 = fundamental_class(&fixtures::elliptic()).unwrap();
        let c2 = fundamental_class(&doubled).unwrap();
        assert!(c2.is_cycle());
        let twice: Vec<Q> = c1.chain.iter().map(|x| x * q(2)).collect();
        assert_eq!(c2.chain, twice);
        for (name, fan) in fixtures::all() {
            assert!(cycle_matches_balancing(&fan).unwrap(), "{name}");
        }
    }

    #[test]
    fn batteries() {
        let cross = pd_battery(&fixtures::cross()).unwrap();
        assert!(!cross.passed());
        assert!(cross.witnesses.iter().any(|w| w.starts_with("(a) dim H^{1,1} = 2")));
        assert!(cross.witnesses.iter().any(|w| w.starts_with("(b)")));
        assert!(pd_battery(&fixtures::elliptic()).unwrap().passed());
        assert!(pd_battery(&fixtures::segment()).unwrap().passed());
        assert_eq!(pd_battery(&fixtures::segment()).unwrap().check, "PD battery");
    }

    #[test]
    fn homology_manifolds() {
        for name in ["u34-coarse", "u34-fine", "nm", "p2", "line2", "segment", "elliptic"] {
            let r = is_tropical_homology_manifold(&fixtures::by_name(name).unwrap()).unwrap();
            assert!(r.passed(), "{name}: {r}");
        }
        let cross = is_tropical_homology_manifold(&fixtures::cross()).unwrap();
        assert!(!cross.passed());
        assert!(cross.witnesses.iter().any(|w| w.contains("star of {}")));
    }

    #[test]
    fn diagonal_symmetry_for_manifolds() {
        for (_, fan) in fixtures::all() {
            if is_tropical_homology_manifold(&fan).unwrap().passed() {
                let diag = betti_table(&fan).unwrap().diagonal();
                let rev: Vec<usize> = diag.iter().rev().copied().collect();
                assert_eq!(diag, rev);
            }
        }
    }

    #[test]
    fn subdivision_keeps_battery_and_blows_up_diagonal() {
        for name in ["p2", "u34-coarse", "nm"] {
            let fan = fixtures::by_name(name).unwrap();
            let before = betti_table(&fan).unwrap();
            for c in fan.cones_of_dim(2) {
                let sub = barycentric_star_subdivision(&fan, c).unwrap().fan;
                let after = betti_table(&sub).unwrap();
                assert_eq!(pd_battery(&fan).unwrap().verdict, pd_battery(&sub).unwrap().verdict, "{name} at {c}");
                let star = betti_table(&star_fan(&fan, c).unwrap().fan).unwrap();
                for k in 0..=fan.dim() {
                    let extra: usize = (1..c.dim()).filter(|&i| i <= k).map(|i| star.cohomology(k - i, k - i)).sum();
                    assert_eq!(after.cohomology(k, k), before.cohomology(k, k) + extra, "{name} at {c}, k={k}");
                }
            }
        }
    }

    fn primitive_ray() -> impl Strategy<Value = Vec<i64>> {
        (-3i64..=3, -3i64..=3)
            .prop_filter("nonzero primitive", |(a, b)| crate::linalg::gcd_slice(&[*a, *b]) == 1)
            .prop_map(|(a, b)| vec![a, b])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn cycle_iff_balanced_on_curves(rays in prop::collection::vec(primitive_ray(), 2..5), ws in prop::collection::vec(1i64..4, 5)) {
            let mut rays = rays;
            rays.sort();
            rays.dedup();
            let n = rays.len();
            let fan = Fan::new(2, rays, (0..n).map(|i| vec![i]).collect(), Some(ws[..n].to_vec()));
            prop_assume!(fan.is_ok());
            let fan = fan.unwrap();
            prop_assert!(cycle_matches_balancing(&fan).unwrap());
        }

        #[test]
        fn cycle_iff_balanced_on_p2(ws in prop::collection::vec(1i64..3, 3)) {
            let fan = fixtures::p2().with_weights(ws).unwrap();
            prop_assert!(cycle_matches_balancing(&fan).unwrap());
        }
    }
}
