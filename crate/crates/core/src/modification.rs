//! Tropical modification of a balanced fan along an integer conewise linear function.
//!
//! The graph of `f` lives in `N × Z`; around each codimension-one cone `τ` its weighted
//! primitive generators sum to `(0, δ_τ)` modulo the span of `τ`. The divisor of `f` is the
//! set of `τ` with `δ_τ ≠ 0`, and the modification attaches `τ × R_{≥0}·(−sign δ_τ) e_last`
//! with weight `|δ_τ|`, which restores balancing.

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::kahler::ConewiseLinearFunction;
use crate::report::{tuple, Report};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorCone {
    pub cone: Cone,
    /// Positive lattice length of the defect.
    pub weight: i64,
    /// `+1` or `−1`: the vertical direction of the attached cell.
    pub direction: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Divisor {
    pub cones: Vec<DivisorCone>,
}

impl Divisor {
    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn support(&self) -> Vec<Cone> {
        self.cones.iter().map(|c| c.cone.clone()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ModificationResult {
    pub graph_fan: Fan,
    pub divisor: Divisor,
    /// Indices in `graph_fan` of the vertical rays.
    pub added_rays: Vec<usize>,
}

fn integer_values(f: &ConewiseLinearFunction) -> Result<Vec<i64>> {
    f.values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if !v.is_integer() {
                return Err(Error::NonIntegerFunction(i));
            }
            i64::try_from(v.to_integer()).map_err(|_| Error::Overflow)
        })
        .collect()
}

pub fn divisor(fan: &Fan, f: &ConewiseLinearFunction) -> Result<Divisor> {
    if f.values.len() != fan.num_rays() {
        return Err(Error::FunctionLength { found: f.values.len(), rays: fan.num_rays() });
    }
    let vals = integer_values(f)?;
    if !fan.is_pure() {
        return Err(Error::NotPure);
    }
    let d = fan.dim();
    if d == 0 {
        return Ok(Divisor::default());
    }
    let mut cones = Vec::new();
    for tau in fan.cones_of_dim(d - 1) {
        let qt = fan.quotient(tau)?;
        let dual = qt.dual.as_ref().ok_or_else(|| Error::NotUnimodular(tau.rays().to_vec()))?;
        // Σ w·e_u = Σ c_i e_{τ_i} + (part outside N_τ, zero when balanced)
        let mut sum = vec![0i64; fan.rank()];
        let mut top = 0i64;
        for eta in fan.maximal_cones().iter().filter(|m| tau.is_face_of(m)) {
            let u = eta.minus(tau)[0];
            let w = fan.weight(eta)?;
            for (s, x) in sum.iter_mut().zip(fan.ray(u)) {
                *s += w * x;
            }
            top += w * vals[u];
        }
        if qt.project(&sum).iter().any(|&x| x != 0) {
            return Err(Error::NotBalanced(tau.rays().to_vec()));
        }
        for (row, &z) in dual.iter().zip(tau.rays()) {
            let c: i64 = row.iter().zip(&sum).map(|(a, b)| a * b).sum();
            top -= c * vals[z];
        }
        if top != 0 {
            cones.push(DivisorCone { cone: tau.clone(), weight: top.abs(), direction: -top.signum() });
        }
    }
    Ok(Divisor { cones })
}

pub fn tropical_modification(fan: &Fan, f: &ConewiseLinearFunction) -> Result<ModificationResult> {
    let div = divisor(fan, f)?;
    let vals = integer_values(f)?;
    for m in fan.maximal_cones() {
        if !fan.is_cone_unimodular(m)? {
            return Err(Error::ModificationNotUnimodular(m.rays().to_vec()));
        }
    }
    let n = fan.rank();
    let mut rays: Vec<Vec<i64>> =
        (0..fan.num_rays()).map(|i| fan.ray(i).iter().copied().chain(std::iter::once(vals[i])).collect()).collect();
    let mut added_rays = Vec::new();
    let mut vertical = |dir: i64, rays: &mut Vec<Vec<i64>>| -> usize {
        let mut v = vec![0; n + 1];
        v[n] = dir;
        match rays.iter().position(|r| *r == v) {
            Some(i) => i,
            None => {
                rays.push(v);
                added_rays.push(rays.len() - 1);
                rays.len() - 1
            }
        }
    };
    let mut cones: Vec<Vec<usize>> = fan.maximal_cones().iter().map(|m| m.rays().to_vec()).collect();
    let mut weights: Vec<i64> = fan.maximal_cones().iter().map(|m| fan.weight(m)).collect::<Result<_>>()?;
    for dc in &div.cones {
        let v = vertical(dc.direction, &mut rays);
        cones.push(dc.cone.with_ray(v).rays().to_vec());
        weights.push(dc.weight);
    }
    let graph_fan = Fan::new(n + 1, rays, cones, Some(weights))?;
    if !graph_fan.is_unimodular_fan()? {
        let bad = graph_fan.maximal_cones().iter().find(|m| !graph_fan.is_cone_unimodular(m).unwrap_or(false));
        return Err(Error::ModificationNotUnimodular(bad.map(|c| c.rays().to_vec()).unwrap_or_default()));
    }
    Ok(ModificationResult { graph_fan, divisor: div, added_rays })
}

pub fn divisor_report(div: &Divisor) -> Report {
    let mut r = Report::new("divisor", crate::report::Verdict::Info).fact("cones", div.cones.len());
    for c in &div.cones {
        r = r.fact(format!("cone {}", c.cone), format!("weight {} direction {}", c.weight, c.direction));
    }
    r
}

/// Rays of a fan as a sorted list, for comparisons up to relabelling.
pub fn sorted_rays(fan: &Fan) -> Vec<Vec<i64>> {
    let mut r = fan.rays().to_vec();
    r.sort();
    r
}

/// Sample points in the relative interiors of every cone: `Σ c_i e_i` over a fixed set of
/// positive coefficient patterns.
pub fn sample_points(fan: &Fan) -> Vec<Vec<crate::linalg::Q>> {
    use crate::linalg::q;
    let patterns: [&[i64]; 4] = [&[1, 1, 1], &[1, 2, 3], &[3, 1, 2], &[5, 2, 1]];
    let mut out = Vec::new();
    for c in fan.cones() {
        for pat in patterns {
            let mut p = vec![q(0); fan.rank()];
            for (k, &r) in c.rays().iter().enumerate() {
                for (a, &b) in p.iter_mut().zip(fan.ray(r)) {
                    *a += q(pat[k % pat.len()] * b);
                }
            }
            out.push(p);
        }
    }
    out
}

/// Whether two fans have the same support, tested on sample points of both.
pub fn same_support_sampled(a: &Fan, b: &Fan) -> bool {
    sample_points(a).iter().all(|p| b.contains_point(p)) && sample_points(b).iter().all(|p| a.contains_point(p))
}

pub fn modification_report(input: &Fan, res: &ModificationResult) -> Result<Report> {
    let balanced = crate::fan::is_balanced(&res.graph_fan)?;
    Ok(Report::from_bool("tropical modification", balanced.passed())
        .fact("input rays", input.num_rays())
        .fact("graph rays", res.graph_fan.num_rays())
        .fact("graph f-vector", tuple(&res.graph_fan.f_vector()))
        .fact("added rays", res.added_rays.len())
        .child(divisor_report(&res.divisor))
        .child(balanced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::is_balanced;
    use crate::fixtures;
    use crate::linalg::{q, q_frac};

    fn f(fan: &Fan, v: &[i64]) -> ConewiseLinearFunction {
        ConewiseLinearFunction::from_ints(fan, v).unwrap()
    }

    #[test]
    fn linear_function_has_empty_divisor() {
        for (name, fan) in fixtures::all() {
            let lin: Vec<i64> = (0..fan.rank()).map(|i| 2 * i as i64 - 1).collect();
            let g = f(&fan, &vec![0; fan.num_rays()]).add_linear(&lin);
            let res = tropical_modification(&fan, &g).unwrap();
            assert!(res.divisor.is_empty(), "{name}");
            assert!(res.added_rays.is_empty());
            assert_eq!(res.graph_fan.f_vector(), fan.f_vector());
        }
    }

    #[test]
    fn max_on_the_line() {
        let fan = fixtures::segment();
        let res = tropical_modification(&fan, &f(&fan, &[1, 0])).unwrap();
        assert_eq!(res.divisor.cones, vec![DivisorCone { cone: Cone::zero(), weight: 1, direction: -1 }]);
        assert_eq!(sorted_rays(&res.graph_fan), vec![vec![-1, 0], vec![0, -1], vec![1, 1]]);
        assert!(is_balanced(&res.graph_fan).unwrap().passed());
    }

    #[test]
    fn non_integer_values_are_rejected() {
        let fan = fixtures::segment();
        let g = ConewiseLinearFunction::new(&fan, vec![q_frac(1, 2), q(0)]).unwrap();
        assert!(matches!(divisor(&fan, &g), Err(Error::NonIntegerFunction(0))));
    }

    #[test]
    fn refined_u34_gives_the_nm_fan() {
        let fan = fixtures::u34_refined();
        let g = f(&fan, &fixtures::u34_refined_function());
        let res = tropical_modification(&fan, &g).unwrap();
        let curve: Vec<Cone> = [4, 5, 6].iter().map(|&r| Cone::new(vec![r])).collect();
        assert_eq!(res.divisor.support(), curve);
        assert!(res.divisor.cones.iter().all(|c| c.weight == 1 && c.direction == 1));
        let nm = fixtures::nm();
        assert_eq!(sorted_rays(&res.graph_fan), sorted_rays(&nm));
        assert_eq!(res.graph_fan.f_vector(), nm.f_vector());
        assert!(same_support_sampled(&res.graph_fan, &nm));
        assert!(is_balanced(&res.graph_fan).unwrap().passed());
    }

    #[test]
    fn graph_projects_onto_input() {
        let fan = fixtures::u34_refined();
        let res = tropical_modification(&fan, &f(&fan, &fixtures::u34_refined_function())).unwrap();
        for p in sample_points(&res.graph_fan) {
            assert!(fan.contains_point(&p[..fan.rank()]));
        }
        // every point of the input lifts to the graph: sum of lifted generators of each cone
        let vals = fixtures::u34_refined_function();
        for c in fan.cones() {
            let mut lifted = vec![q(0); fan.rank() + 1];
            for (k, &r) in c.rays().iter().enumerate() {
                let coeff = k as i64 + 1;
                for (a, &b) in lifted.iter_mut().zip(fan.ray(r).iter().chain(std::iter::once(&vals[r]))) {
                    *a += q(coeff * b);
                }
            }
            assert!(res.graph_fan.contains_point(&lifted), "{c}");
        }
    }

    #[test]
    fn divisor_is_invariant_under_linear_shifts() {
        let fan = fixtures::u34_refined();
        let g = f(&fan, &fixtures::u34_refined_function());
        assert_eq!(divisor(&fan, &g).unwrap(), divisor(&fan, &g.add_linear(&[3, -1, 2])).unwrap());
    }

    #[test]
    fn modifications_with_one_sided_divisors_are_balanced() {
        let mut one_sided = 0;
        for (name, fan) in fixtures::all() {
            for shift in 0..5 {
                let vals: Vec<i64> = (0..fan.num_rays()).map(|i| ((i * 7 + shift) % 5) as i64 - 2).collect();
                let res = tropical_modification(&fan, &f(&fan, &vals)).unwrap();
                let dirs: Vec<i64> = res.divisor.cones.iter().map(|c| c.direction).collect();
                if dirs.windows(2).all(|w| w[0] == w[1]) {
                    one_sided += 1;
                    assert!(is_balanced(&res.graph_fan).unwrap().passed(), "{name} {vals:?}");
                }
            }
        }
        assert!(one_sided > 10);
    }
}
