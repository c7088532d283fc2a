//! Measurement tools for gap traces: running minima, log-log rate fits,
//! burn-in detection and dimension sweeps.

mod contour;
mod rates;

pub use contour::{rate_contour, write_contour_csv, ContourCell, ContourFamily, ContourRow};
pub use rates::{burn_in_end, fit_rate, local_rate, local_rates, min_prefix, RateEstimate};
