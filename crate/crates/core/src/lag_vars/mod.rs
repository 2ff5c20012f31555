//! Outcome rates and socially/spatially lagged variables.

mod icd;
mod lag;
mod rates;

pub use icd::{classify_ood, normalize_code, OodClass, OPIOID_T_CODES, OVERDOSE_CAUSES};
pub use lag::{compute_lag, standardize, write_lags_csv, LaggedVariable};
pub use rates::{death_rates, read_mortality, read_mortality_csv, write_mortality_csv, MortalityRecord, OutcomeVector, Period};
