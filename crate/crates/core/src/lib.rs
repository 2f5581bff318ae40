//! Stability, Jordan-Hölder gradings and moduli of rank-1 torsion-free
//! sheaves on reduced reducible curves, in exact arithmetic.

pub mod cli;
pub mod curve;
pub mod kodaira;
pub mod oracle;
pub mod stability;
pub mod treelike;

pub use curve::{build_curve, kodaira_preset, transform_at, ComponentSet, CurveGraph, PointKind, PresetKind, SplitMode};
pub use kodaira::{describe, ModuliDescription};
pub use stability::{classify_line_bundle, classify_sheaf, make_context, SheafDatum, StabilityContext, Status, Verdict};
pub use treelike::{jh_filtration, jh_split, JHGrading};
