//! Real zero sets of `f = sum_k c_k g(. - k)` under the factors `I + delta d/dx`,
//! and zeros of Bargmann transforms of discrete measures.

mod fock;
mod zeros;

pub use fock::{
    bargmann, disk_zero_count, fock_sup, fock_weighted, jensen_audit, stft_measure, DiscreteMeasure, FockSample,
    JensenAudit, JensenRow, DEFAULT_CIRCLE_SAMPLES, JENSEN_TOL,
};
pub use zeros::{apply_factor, rolle_audit, rolle_trials, zero_count, RolleAudit, RolleTrialConfig, ZeroReport};
