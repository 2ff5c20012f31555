use super::rates::MortalityRecord;
use crate::error::{Error, Result};

/// Underlying-cause prefixes counted as drug overdose
/// (unintentional, suicide, homicide, undetermined intent).
pub const OVERDOSE_CAUSES: [&str; 16] = [
    "X40", "X41", "X42", "X43", "X44", "X60", "X61", "X62", "X63", "X64", "X85", "Y10", "Y11",
    "Y12", "Y13", "Y14",
];

/// Multiple-cause T-codes identifying opioid involvement.
pub const OPIOID_T_CODES: [&str; 6] = ["T400", "T401", "T402", "T403", "T404", "T406"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OodClass {
    pub overdose: bool,
    pub opioid_overdose: bool,
}

/// Uppercase and strip punctuation/whitespace (`"t40.1"` -> `"T401"`).
pub fn normalize_code(code: &str) -> String {
    code.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .map(|c| c.to_ascii_uppercase())
        .collect()
}

fn well_formed(code: &str) -> bool {
    let b = code.as_bytes();
    (3..=7).contains(&b.len())
        && b[0].is_ascii_uppercase()
        && b[1].is_ascii_digit()
        && b[2].is_ascii_digit()
        && b[3..].iter().all(|c| c.is_ascii_alphanumeric())
}

fn checked(rec: &MortalityRecord, raw: &str) -> Result<String> {
    let code = normalize_code(raw);
    if well_formed(&code) {
        Ok(code)
    } else {
        Err(Error::MalformedCode {
            record: rec.id,
            code: raw.to_string(),
        })
    }
}

pub fn classify_ood(rec: &MortalityRecord) -> Result<OodClass> {
    let underlying = checked(rec, &rec.underlying_cause)?;
    let overdose = OVERDOSE_CAUSES.contains(&&underlying[..3]);
    let mut opioid = false;
    for raw in &rec.contributing_codes {
        let code = checked(rec, raw)?;
        opioid |= OPIOID_T_CODES.contains(&code.as_str());
    }
    Ok(OodClass {
        overdose,
        opioid_overdose: overdose && opioid,
    })
}
