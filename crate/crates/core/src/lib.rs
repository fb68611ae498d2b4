pub mod complexcore;
pub mod dispersion;
pub mod error;
pub mod inplane;
pub mod stability;
pub mod transfer;

pub use complexcore::{branch_sqrt, branch_sqrt_on, safe_coth, ComplexS, CutSide};
pub use dispersion::{find_f_zeros, find_love_modes, residue_at_mode, LoveMode};
pub use error::{Error, Result};
pub use inplane::{
    rational_fixture, validate_inplane_spec, InplaneModel, InplaneTransferSpec, StoneleyPoleData,
    TabulatedTransfer, ValidationReport,
};
pub use stability::{
    characteristic_residual, classify, count_roots, find_all_roots, find_roots, find_roots_with,
    nondimensionalize, predict_dynamic_extra_root, predict_identical_halfspaces,
    predict_inplane_long, predict_inplane_short, predict_long_wavelength, predict_short_wavelength,
    quasistatic_roots, refine_root, AxisAnchor, Formula, InplaneFriction, MotionClass, Prediction,
    QuasistaticRoots, RateStateFriction, RootResult, RootSearch, Scales, SearchOptions,
    StabilityClass, Window,
};
pub use transfer::{
    eval_f, eval_f_halfspaces, eval_f_quasistatic, eval_m, ElasticPair, NondimSet, TransferModel,
};
