use thiserror::Error;

/// Errors raised by the geometry kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("near-zero quaternion (|q| = {norm:e})")]
    NearZeroQuaternion { norm: f64 },

    #[error("singular matrix (study determinant {det:e})")]
    SingularMatrix { det: f64 },

    #[error("not a projective point (zero homogeneous coordinates)")]
    NotProjectivePoint,

    #[error("not a sphere form (timelike or null): <s,s> = {norm_sqr:e}")]
    NotSphereForm { norm_sqr: f64 },

    #[error("point at infinity")]
    PointAtInfinity,

    #[error("singular Möbius matrix (study determinant {det:e})")]
    SingularMoebius { det: f64 },

    #[error("degenerate quadruple: a denominator pair coincides")]
    DegenerateQuadruple,

    #[error("domain mismatch")]
    DomainMismatch,

    #[error("grid too small: {nx}x{ny} vertices, need at least {min} per side")]
    GridTooSmall { nx: usize, ny: usize, min: usize },

    #[error("frame degeneration at ({i}, {j}): study determinant {det:e}")]
    FrameDegeneration { i: usize, j: usize, det: f64 },

    #[error("singular gauge at ({i}, {j})")]
    SingularGauge { i: usize, j: usize },

    #[error("Weierstrass data not holomorphic enough at resolution h = {h:e}: closedness residual {residual:e}")]
    NotHolomorphic { h: f64, residual: f64 },

    #[error("pole in domain at ({i}, {j})")]
    PoleInDomain { i: usize, j: usize },

    #[error("not isothermic at resolution h = {h:e}: conformality defect {conformality:e}, orthogonality defect {orthogonality:e}")]
    NotIsothermic {
        h: f64,
        conformality: f64,
        orthogonality: f64,
    },

    #[error("homothetic pair, not a Christoffel pair (relative deviation {deviation:e})")]
    HomotheticPair { deviation: f64 },

    #[error("Christoffel precondition failed: residual {residual:e} above {threshold:e}")]
    ChristoffelPrecondition { residual: f64, threshold: f64 },

    #[error("Goursat singularity at ({i}, {j})")]
    GoursatSingularity { i: usize, j: usize },

    #[error("point at infinity of the space form at ({i}, {j})")]
    SpaceFormInfinity { i: usize, j: usize },

    #[error("not immersed at ({i}, {j})")]
    NotImmersed { i: usize, j: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
