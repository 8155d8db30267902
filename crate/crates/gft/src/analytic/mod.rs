//! Numerical evaluation of ζ_K, f_K and T_K with rigorous truncation
//! bounds; exact residues ρ_K and the mean-value constant; inverse-totient
//! fibers and empirical Cesàro means.

mod euler;
mod fibers;
mod residue;
mod series;

pub use euler::{
    f_eval, f_eval_at_bound, f_factor, totient_zeta_eval, zeta_closed_form, zeta_eval,
    zeta_eval_at_bound, EvalCaps, EvalResult, MIN_EPS,
};
pub use fibers::{
    empirical_mean, format_f64, inverse_totient, totient_histogram, totient_histogram_with_fibers,
    MeanSweep, MeanSweepRow, TotientHistogram,
};
pub use residue::{mean_value_constant, residue, ResidueExact, ResidueValue};
pub use series::{
    l_series_terms_for, quadratic_l_series, riemann_zeta_em, riemann_zeta_series, SeriesEval,
};
