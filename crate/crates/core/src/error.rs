use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ray {index} has {found} coordinates, lattice rank is {rank}")]
    RayDimension { index: usize, found: usize, rank: usize },
    #[error("ray {index} is zero")]
    ZeroRay { index: usize },
    #[error("ray {index} is not primitive (gcd of coordinates is {gcd})")]
    NonPrimitiveRay { index: usize, gcd: i64 },
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("cone {cone:?} references ray {index}, but only {count} rays exist")]
    RayOutOfRange { cone: Vec<usize>, index: usize, count: usize },
    #[error("cone {0:?} repeats a ray")]
    RepeatedRayInCone(Vec<usize>),
    #[error("generators of cone {0:?} are linearly dependent (only simplicial cones are supported)")]
    DependentGenerators(Vec<usize>),
    #[error("cones {0:?} and {1:?} do not intersect in a common face")]
    BadIntersection(Vec<usize>, Vec<usize>),
    #[error("ray {0} lies in no cone")]
    UnusedRay(usize),
    #[error("weight given on cone {0:?}, which is not maximal")]
    WeightOnNonMaximal(Vec<usize>),
    #[error("{given} weights given for {cones} maximal cones")]
    WeightCount { given: usize, cones: usize },
    #[error("weight on cone {0:?} is zero")]
    ZeroWeight(Vec<usize>),
    #[error("weighted fan is not pure-dimensional")]
    NotPure,
    #[error("fan has no weights")]
    MissingWeights,
    #[error("fan is not unimodular (cone {0:?})")]
    NotUnimodular(Vec<usize>),
    #[error("fan is not balanced (codimension-one cone {0:?})")]
    NotBalanced(Vec<usize>),
    #[error("{0:?} is not a cone of the fan")]
    NotACone(Vec<usize>),
    #[error("cone {0:?} has dimension below 2")]
    ConeTooSmall(Vec<usize>),
    #[error("{0:?} is not a face of {1:?}")]
    NotAFace(String, String),
    #[error("exterior degree {p} out of range 0..={max}")]
    DegreeOutOfRange { p: usize, max: usize },
    #[error("function has {found} values, fan has {rays} rays")]
    FunctionLength { found: usize, rays: usize },
    #[error("function value on ray {0} is not an integer")]
    NonIntegerFunction(usize),
    #[error("matroid: {0}")]
    Matroid(String),
    #[error("modification is not unimodular at cone {0:?}; refine the input fan first")]
    ModificationNotUnimodular(Vec<usize>),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("integer overflow in lattice computation")]
    Overflow,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
