//! Named fans used throughout the tests, the CLI and the acceptance suite.

use crate::fan::Fan;
use crate::matroid::{bergman_fan, uniform_matroid, Structure};

pub const NAMES: &[&str] = &[
    "segment", "cross", "elliptic", "line2", "p2", "u34-coarse", "u34-fine", "u34-refined", "nm",
];

fn build(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    Fan::new(
        rank,
        rays.iter().map(|r| r.to_vec()).collect(),
        cones.iter().map(|c| c.to_vec()).collect(),
        Some(vec![1; cones.len()]),
    )
    .expect("fixture is a valid fan")
}

/// The complete fan in a rank-one lattice; its compactification is a segment.
pub fn segment() -> Fan {
    build(1, &[&[1], &[-1]], &[&[0], &[1]])
}

/// The union of the coordinate axes in `R^2`.
pub fn cross() -> Fan {
    build(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[&[0], &[1], &[2], &[3]])
}

/// Tropical line with rays (2,1), (−1,1), (−1,−2).
pub fn elliptic() -> Fan {
    build(2, &[&[2, 1], &[-1, 1], &[-1, -2]], &[&[0], &[1], &[2]])
}

/// The standard tropical line: rays e1, e2, −e1−e2.
pub fn line2() -> Fan {
    build(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0], &[1], &[2]])
}

/// The complete fan of the projective plane.
pub fn p2() -> Fan {
    build(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]])
}

pub fn u34_coarse() -> Fan {
    bergman_fan(&uniform_matroid(3, 4).expect("valid bounds"), Structure::Coarse).expect("uniform matroid")
}

pub fn u34_fine() -> Fan {
    bergman_fan(&uniform_matroid(3, 4).expect("valid bounds"), Structure::Fine).expect("loopless")
}

/// The coarse Bergman fan of `U_{3,4}` refined along the trivalent curve with rays
/// (2,1,0), (0,1,1), (−2,−2,−1), plus the barycenters needed for unimodularity.
///
/// Ray order: 0, 1, 2, 3, a, b, c, α, β.
pub fn u34_refined() -> Fan {
    build(
        3,
        &[
            &[-1, -1, -1],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[2, 1, 0],
            &[0, 1, 1],
            &[-2, -2, -1],
            &[1, 1, 0],
            &[-1, -1, 0],
        ],
        &[
            &[0, 1],
            &[0, 2],
            &[1, 3],
            &[1, 4],
            &[4, 7],
            &[2, 7],
            &[2, 5],
            &[3, 5],
            &[0, 6],
            &[6, 8],
            &[3, 8],
        ],
    )
}

/// Integer function on the rays of [`u34_refined`] whose tropical modification is [`nm`].
pub fn u34_refined_function() -> Vec<i64> {
    vec![-2, 0, 0, 0, 2, 1, -2, 1, -1]
}

/// The non-matroidal surface fan in `R^4`: ten rays and fourteen facets.
///
/// Ray order: 0, 1, 2, 3, 4, a, b, c, α, β. The ray α is the barycenter (1,1,0,1) of
/// the cone spanned by a and 2.
pub fn nm() -> Fan {
    build(
        4,
        &[
            &[-1, -1, -1, -2],
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[2, 1, 0, 2],
            &[0, 1, 1, 1],
            &[-2, -2, -1, -2],
            &[1, 1, 0, 1],
            &[-1, -1, 0, -1],
        ],
        &[
            // edges of the figure: 0-1, 0-2, 0-c, c-β, β-3, 1-3, 1-a, a-α, α-2, 2-b, 3-b, 4-a, 4-b, 4-c
            &[0, 1],
            &[0, 2],
            &[0, 7],
            &[7, 9],
            &[3, 9],
            &[1, 3],
            &[1, 5],
            &[5, 8],
            &[2, 8],
            &[2, 6],
            &[3, 6],
            &[4, 5],
            &[4, 6],
            &[4, 7],
        ],
    )
}

pub fn by_name(name: &str) -> Option<Fan> {
    Some(match name {
        "segment" => segment(),
        "cross" => cross(),
        "elliptic" => elliptic(),
        "line2" => line2(),
        "p2" => p2(),
        "u34-coarse" => u34_coarse(),
        "u34-fine" => u34_fine(),
        "u34-refined" => u34_refined(),
        "nm" => nm(),
        _ => return None,
    })
}

/// Ray-value function shipped with a fixture, if any.
pub fn function_for(name: &str) -> Option<Vec<i64>> {
    (name == "u34-refined").then(u34_refined_function)
}

pub fn all() -> Vec<(&'static str, Fan)> {
    NAMES.iter().map(|&n| (n, by_name(n).expect("listed fixture"))).collect()
}
