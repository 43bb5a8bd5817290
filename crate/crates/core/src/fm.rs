//! Exact feasibility of small systems of linear constraints by Fourier–Motzkin elimination.

use num_traits::{Signed, Zero};

use crate::linalg::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `a·x < b`
    Less,
    /// `a·x ≤ b`
    LessEq,
    /// `a·x = b`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Relation,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, rel: Relation, rhs: Q) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    fn is_strict(&self) -> bool {
        self.rel == Relation::Less
    }

    /// Scales so the first nonzero coefficient has absolute value one; keeps direction.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in self.coeffs.iter_mut() {
                *c /= &lead;
            }
            self.rhs /= &lead;
        }
        self
    }
}

/// Decides whether some rational `x` satisfies all constraints.
pub fn feasible(nvars: usize, constraints: &[Constraint]) -> bool {
    let mut ineqs: Vec<Constraint> = Vec::new();
    let mut eqs: Vec<Constraint> = Vec::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), nvars);
        match c.rel {
            Relation::Eq => eqs.push(c.clone()),
            _ => ineqs.push(c.clone()),
        }
    }

    // Substitute equalities away one variable at a time.
    while let Some(e) = eqs.pop() {
        let Some(v) = e.coeffs.iter().position(|c| !c.is_zero()) else {
            if !e.rhs.is_zero() {
                return false;
            }
            continue;
        };
        let piv = e.coeffs[v].clone();
        let eliminate = |c: &mut Constraint| {
            if c.coeffs[v].is_zero() {
                return;
            }
            let f = &c.coeffs[v] / &piv;
            for (ci, ei) in c.coeffs.iter_mut().zip(&e.coeffs) {
                *ci -= &f * ei;
            }
            c.rhs -= &f * &e.rhs;
        };
        eqs.iter_mut().for_each(eliminate);
        ineqs.iter_mut().for_each(eliminate);
    }

    for v in 0..nvars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in ineqs.drain(..) {
            if c.coeffs[v].is_positive() {
                pos.push(c.normalized_at(v));
            } else if c.coeffs[v].is_negative() {
                neg.push(c.normalized_at(v));
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for n in &neg {
                // p: x_v + a·x (<) b,  n: -x_v + a'·x (<) b'
                let coeffs: Vec<Q> = p.coeffs.iter().zip(&n.coeffs).map(|(a, b)| a + b).collect();
                let rel = if p.is_strict() || n.is_strict() { Relation::Less } else { Relation::LessEq };
                rest.push(Constraint::new(coeffs, rel, &p.rhs + &n.rhs).normalized());
            }
        }
        rest.sort();
        rest.dedup();
        ineqs = rest;
    }

    ineqs.iter().all(|c| match c.rel {
        Relation::Less => c.rhs.is_positive(),
        _ => !c.rhs.is_negative(),
    })
}

impl Constraint {
    fn normalized_at(mut self, v: usize) -> Self {
        let lead = self.coeffs[v].abs();
        for c in self.coeffs.iter_mut() {
            *c /= &lead;
        }
        self.rhs /= &lead;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn c(coeffs: &[i64], rel: Relation, rhs: i64) -> Constraint {
        Constraint::new(coeffs.iter().map(|&x| q(x)).collect(), rel, q(rhs))
    }

    #[test]
    fn open_interval() {
        // 0 < x < 1
        assert!(feasible(1, &[c(&[-1], Relation::Less, 0), c(&[1], Relation::Less, 1)]));
        // 0 < x < 0
        assert!(!feasible(1, &[c(&[-1], Relation::Less, 0), c(&[1], Relation::Less, 0)]));
        // 0 <= x <= 0
        assert!(feasible(1, &[c(&[-1], Relation::LessEq, 0), c(&[1], Relation::LessEq, 0)]));
    }

    #[test]
    fn equalities_are_substituted() {
        // x + y = 1, x > 1, y > 0 infeasible
        let sys = [
            c(&[1, 1], Relation::Eq, 1),
            c(&[-1, 0], Relation::Less, -1),
            c(&[0, -1], Relation::Less, 0),
        ];
        assert!(!feasible(2, &sys));
        let sys = [c(&[1, 1], Relation::Eq, 1), c(&[-1, 0], Relation::Less, 0), c(&[0, -1], Relation::Less, 0)];
        assert!(feasible(2, &sys));
    }

    #[test]
    fn inconsistent_equalities() {
        assert!(!feasible(1, &[c(&[1], Relation::Eq, 1), c(&[2], Relation::Eq, 3)]));
    }
}
