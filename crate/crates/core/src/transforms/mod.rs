//! Transformations of isothermic surfaces: Weierstrass data, Christoffel,
//! Goursat and Darboux transforms, mean curvature one surfaces and the space
//! forms they live in.

mod bryant;
mod christoffel;
mod darboux;
mod geometry;
mod goursat;
mod report;
mod spaceform;
mod weierstrass;

pub use bryant::{bryant_surface, BryantReport, BryantSurface};
pub use christoffel::{
    christoffel_pair_check, christoffel_transform, edge_parallelism, homothety_fit,
    isothermic_defect, similarity_align, Alignment, ChristoffelTransform, IsothermicDefect,
    PairCheck, HOMOTHETY_TOLERANCE, ISOTHERMIC_TOLERANCE,
};
pub use darboux::{
    columns, conformal_product, darboux_from_pair, darboux_pair, limit_defect, mixed_second_form,
    pencil_spheres, ChristoffelPair, DarbouxPair, DarbouxReport, CHRISTOFFEL_THRESHOLD,
};
pub use geometry::{normal_plane, normal_planes, partials};
pub use goursat::{goursat_transform, GoursatTransform};
pub use report::{geometry_report, GeometryReport, NormalSource};
pub use spaceform::{
    constant_vector, constraint_defect, space_form_gauss_residual, space_form_mean_curvature,
    space_form_project, Chart, ConstantVector, SpaceForm,
};
pub use weierstrass::{
    gauss_point, minimal_from_weierstrass, spinor, MinimalSurface, WeierstrassData, POLE_GUARD,
};
