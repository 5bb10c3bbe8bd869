//! Reductive root data, fundamental groups, Tamagawa numbers and elliptic
//! endoscopic data, plus a checker for the stabilization identity on
//! synthetic data.

mod datum;
mod destab;
mod endoscopy;
mod presets;

pub use datum::{component_group_of_center_dual, dot, tamagawa_number, DatumKind, Pi1, RootDatum, RootPair, SmallMat};
pub use destab::{destabilization_check, DestabReport, HClass, StableClass, SyntheticData, SyntheticDatum};
pub use endoscopy::{enumerate_elliptic_endoscopy, iota, EndoscopicDatum};
pub use presets::{gl, gsp4, induced_torus, norm_one_torus, pgl, preset, sl, split_torus};
