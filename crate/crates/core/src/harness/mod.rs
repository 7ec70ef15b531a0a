//! Quantitative checks: cutoff sequences and Rayleigh quotients for the
//! sharpness statements, closed-form identities, the logarithmic-Hardy
//! ingredients and the exact gauge of the Koranyi potential.

pub mod battery;
pub mod cutoff;
pub mod gl;
pub mod log_hardy;
pub mod xiao;

pub use battery::{identity_battery, BatteryConfig, BatteryReport, IdentityRow};
pub use cutoff::{
    chi_n, cutoff_integrals, eta_n, sharpness_quotient_lw, ChiN, CutoffIntegrals, CutoffProfile,
    EtaN, RayleighReport,
};
pub use gl::{
    f_alpha_identity, f_alpha_jet, folland_stein_form, folland_stein_quotient, gl_quotient,
    gl_square_identity, improved_gl_check, rho_alpha_gradient_check, w_alpha_jet,
    FollandSteinSequence, GlSquareReport, ImprovedGlReport, QuotientReport, RhoAlphaReport,
    Symmetry, DEFAULT_RAMP,
};
pub use log_hardy::{
    laptev_interval_data, radial_log_hardy_check, IntervalRow, LaptevData, LogHardyReport,
    ModeSampling, RadialFunction,
};
pub use xiao::{
    xiao_continuity, xiao_gauge, xiao_gauge_check, xiao_potential, ContinuityReport, XiaoReport,
};
