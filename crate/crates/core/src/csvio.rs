use std::io::Read;

use crate::error::{Error, Result};

pub(crate) fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = rdr.headers()?;
    let got: Vec<&str> = header.iter().map(str::trim).collect();
    if got != expected {
        return Err(Error::input(format!(
            "unexpected CSV header {:?}; expected {:?}",
            got, expected
        )));
    }
    Ok(())
}
