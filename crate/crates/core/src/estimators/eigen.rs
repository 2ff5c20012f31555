use crate::dense;
use crate::error::{Error, Result};
use crate::geo_graph::ProximityMatrix;

/// Imaginary parts below this are treated as zero.
const IMAG_TOL: f64 = 1e-10;
/// Relative tolerance for the detailed-balance check `pi_i w_ij = pi_j w_ji`.
const BALANCE_TOL: f64 = 1e-9;

/// Eigenvalues of a weight matrix, reused for every `ln|I - lambda W|`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    re: Vec<f64>,
    /// Empty when every eigenvalue is real.
    im: Vec<f64>,
    /// Whether a diagonal similarity made the matrix symmetric.
    pub symmetrized: bool,
    pub warnings: Vec<String>,
}

impl Spectrum {
    pub fn from_real(values: Vec<f64>) -> Self {
        Self {
            re: values,
            im: vec![],
            symmetrized: false,
            warnings: vec![],
        }
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_empty()
    }

    pub fn real_parts(&self) -> &[f64] {
        &self.re
    }

    pub fn min_real(&self) -> f64 {
        self.re.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_real(&self) -> f64 {
        self.re.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `ln|det(I - lambda W)| = sum_i ln|1 - lambda w_i|`.
    pub fn log_det(&self, lambda: f64) -> f64 {
        if self.im.is_empty() {
            self.re.iter().map(|w| (1.0 - lambda * w).abs().ln()).sum()
        } else {
            self.re
                .iter()
                .zip(&self.im)
                .map(|(re, im)| {
                    let a = 1.0 - lambda * re;
                    let b = lambda * im;
                    0.5 * (a * a + b * b).ln()
                })
                .sum()
        }
    }

    /// `(tr(W B^-1), tr((W B^-1)^2))` with `B = I - lambda W`.
    pub fn traces(&self, lambda: f64) -> (f64, f64) {
        let (mut t1, mut t2) = (0.0, 0.0);
        for i in 0..self.re.len() {
            let (wr, wi) = (self.re[i], self.im.get(i).copied().unwrap_or(0.0));
            // w / (1 - lambda w) in complex arithmetic
            let (dr, di) = (1.0 - lambda * wr, -lambda * wi);
            let den = dr * dr + di * di;
            let (qr, qi) = ((wr * dr + wi * di) / den, (wi * dr - wr * di) / den);
            t1 += qr;
            t2 += qr * qr - qi * qi;
        }
        (t1, t2)
    }
}

/// Eigenvalues of `m`.
///
/// Row-normalized symmetric kernels (SCI and distance weights) satisfy detailed
/// balance, so `D^1/2 W D^-1/2` is symmetric for a positive diagonal `D`; that
/// case uses a symmetric eigensolver and yields exactly real eigenvalues. Other
/// matrices fall back to a general solver; complex eigenvalues are kept for the
/// log-determinant and a warning is attached.
pub fn spectrum(m: &ProximityMatrix) -> Result<Spectrum> {
    let n = m.n();
    if n == 0 {
        return Err(Error::input("empty weight matrix"));
    }
    if let Some(sym) = symmetrize(m) {
        let values = dense::symmetric_eigenvalues(n, &sym)?;
        return Ok(Spectrum {
            re: values,
            im: vec![],
            symmetrized: true,
            warnings: vec![],
        });
    }
    let ev = dense::general_eigenvalues(n, m.as_row_major())?;
    let mut warnings = vec![];
    let n_complex = ev.iter().filter(|(_, im)| im.abs() > IMAG_TOL).count();
    let (re, im): (Vec<f64>, Vec<f64>) = ev.into_iter().unzip();
    let im = if n_complex > 0 {
        warnings.push(format!(
            "{n_complex} complex eigenvalues; lambda bounds use real parts"
        ));
        im
    } else {
        vec![]
    };
    Ok(Spectrum {
        re,
        im,
        symmetrized: false,
        warnings,
    })
}

/// Symmetric row-major matrix similar to `m`, if `m` satisfies detailed balance.
fn symmetrize(m: &ProximityMatrix) -> Option<Vec<f64>> {
    let n = m.n();
    let mut log_pi = vec![f64::NAN; n];
    let mut queue = Vec::with_capacity(n);
    for start in 0..n {
        if !log_pi[start].is_nan() {
            continue;
        }
        log_pi[start] = 0.0;
        queue.clear();
        queue.push(start);
        while let Some(i) = queue.pop() {
            let row = m.row(i);
            for j in 0..n {
                let (wij, wji) = (row[j], m.get(j, i));
                if (wij > 0.0) != (wji > 0.0) {
                    return None;
                }
                if wij > 0.0 && log_pi[j].is_nan() {
                    log_pi[j] = log_pi[i] + wij.ln() - wji.ln();
                    queue.push(j);
                }
            }
        }
    }
    let mut sym = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (wij, wji) = (m.get(i, j), m.get(j, i));
            if wij == 0.0 {
                continue;
            }
            let half = 0.5 * (log_pi[i] - log_pi[j]);
            let a = wij * half.exp();
            let b = wji * (-half).exp();
            if (a - b).abs() > BALANCE_TOL * (a + b) {
                return None;
            }
            let s = 0.5 * (a + b);
            sym[i * n + j] = s;
            sym[j * n + i] = s;
        }
    }
    Some(sym)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo_graph::{RegionIndex, WeightKind};

    #[test]
    fn two_by_two_swap() {
        let idx = RegionIndex::new(["a", "b"]).unwrap();
        let m = ProximityMatrix::from_row_major(idx, vec![0.0, 1.0, 1.0, 0.0], WeightKind::Spatial).unwrap();
        let s = spectrum(&m).unwrap();
        assert!(s.symmetrized);
        let mut v = s.real_parts().to_vec();
        v.sort_by(f64::total_cmp);
        assert!((v[0] + 1.0).abs() < 1e-12 && (v[1] - 1.0).abs() < 1e-12);
        // det(I - 0.5 W) = 1 - 0.25
        assert!((s.log_det(0.5) - 0.75f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn directed_cycle_has_complex_spectrum() {
        let idx = RegionIndex::new(["a", "b", "c"]).unwrap();
        let w = vec![0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0];
        let m = ProximityMatrix::from_row_major(idx, w, WeightKind::Social).unwrap();
        let s = spectrum(&m).unwrap();
        assert!(!s.symmetrized);
        assert!(!s.is_real());
        assert_eq!(s.warnings.len(), 1);
        // det(I - l C3) = 1 - l^3
        assert!((s.log_det(0.5) - (1.0 - 0.125f64).ln()).abs() < 1e-10);
    }
}
