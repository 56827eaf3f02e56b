//! From `P'` to the limit measure: moments, density, shape function and the
//! closed-form presets.

pub mod density;
pub mod moments;
pub mod presets;
pub mod shape;

pub use density::{density_at, density_curve, DensityCurve, DensityEvaluator};
pub use moments::{c_coefficient, moments, moments_by_route, q_series, trivial_moment, v0_series, MomentData, Route};
pub use presets::{preset_density, preset_stieltjes, stieltjes_by_tracking, Preset, PRESET_NAMES};
pub use shape::{shape_function, ShapeCurve};
